//! The diagonal `D = {(g, g)}` of `G x G` as a universal spectrum candidate.
//!
//! For `P = {(a_i, b_i)} ⊂ G x G` with `|P| = |G|`, the character `χ_{(g,g)}`
//! evaluated on `(a, b)` equals `χ_g(a + b)`, so `(P, D)` is a spectral pair
//! exactly when the sums `a_i + b_i` run through `G` once each; equivalently
//! when `P` meets every coset of the antidiagonal `{(g, -g)}` once. Taking
//! `P = A x B` turns this into: `A ⊕ B = G` iff `(A x B, D)` is spectral.
//!
//! Each of these statements is computed here along two independent routes
//! (full pairwise character sums in `G x G` versus sums folded into `G`), so
//! the harness can cross-check them on every instance it visits.

use std::fmt::Write as _;

use num_integer::binomial;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CyclotomicSum;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, PointSet, ProductGroup, DEFAULT_ENUMERATION_BUDGET};
use crate::search::with_threads;
use crate::spectral::{self, CharacterTable, SpectralFailure, SpotCheck};
use crate::tiling::{self, TilingFailure};

/// Default cap on pairs checked by the direct (pairwise) route.
pub const DEFAULT_MAX_DIRECT_PAIRS: u64 = 10_000_000;

/// `G`, `G x G`, the diagonal and the antidiagonal.
#[derive(Debug, Clone)]
pub struct DiagonalPair {
    base: GroupSpec,
    product: ProductGroup,
    diagonal: PointSet,
    antidiagonal: PointSet,
}

impl DiagonalPair {
    pub fn new(base: &GroupSpec) -> Result<Self> {
        base.ensure_enumerable(DEFAULT_ENUMERATION_BUDGET)?;
        let product = ProductGroup::square(base.clone())?;
        let elems: Vec<GroupElement> = base.enumerate()?.collect();
        let diagonal = PointSet::new(
            product.spec().clone(),
            elems.iter().map(|g| product.pair_unchecked(g, g)).collect(),
        )?;
        let antidiagonal = PointSet::new(
            product.spec().clone(),
            elems
                .iter()
                .map(|g| product.pair_unchecked(g, &base.neg_unchecked(g)))
                .collect(),
        )?;
        let pair = Self {
            base: base.clone(),
            product,
            diagonal,
            antidiagonal,
        };
        assert!(pair.is_subgroup(&pair.diagonal, false)?);
        assert!(pair.is_subgroup(&pair.antidiagonal, true)?);
        Ok(pair)
    }

    pub fn base(&self) -> &GroupSpec {
        &self.base
    }

    pub fn product(&self) -> &ProductGroup {
        &self.product
    }

    /// The ambient `G x G`.
    pub fn ambient(&self) -> &GroupSpec {
        self.product.spec()
    }

    pub fn diagonal(&self) -> &PointSet {
        &self.diagonal
    }

    pub fn antidiagonal(&self) -> &PointSet {
        &self.antidiagonal
    }

    /// Subgroup test for `D` (or the antidiagonal when `anti`): contains `0`,
    /// closed under negation and under adding the images of the generators of
    /// `G`, which generate the whole set.
    pub fn is_subgroup(&self, set: &PointSet, anti: bool) -> Result<bool> {
        let gens: Vec<GroupElement> = self
            .base
            .generators()
            .iter()
            .map(|e| {
                let second = if anti {
                    self.base.neg_unchecked(e)
                } else {
                    e.clone()
                };
                self.product.pair_unchecked(e, &second)
            })
            .collect();
        let ambient = self.ambient();
        Ok(set.contains(&ambient.zero())
            && set.iter().all(|p| set.contains(&ambient.neg_unchecked(p)))
            && set.is_closed_under(&gens)?)
    }

    fn check_candidate(&self, p: &PointSet) -> Result<()> {
        crate::group::ensure_same(self.ambient(), p.ambient())?;
        if p.len() as u64 != self.base.order() {
            return Err(Error::Cardinality(format!(
                "|P| = {} but |G| = {}",
                p.len(),
                self.base.order()
            )));
        }
        Ok(())
    }

    /// Multiplicities of `a + b` over `(a, b) ∈ P`; holds iff every element
    /// of `G` occurs exactly once.
    pub fn sum_multiset_check(&self, p: &PointSet) -> Result<SumMultisetReport> {
        self.check_candidate(p)?;
        let mut multiplicities = vec![0u32; self.base.order() as usize];
        for z in p {
            let (a, b) = self.product.unpair_unchecked(z);
            let s = self.base.add_unchecked(&a, &b);
            multiplicities[self.base.rank_unchecked(s.coords()) as usize] += 1;
        }
        let holds = multiplicities.iter().all(|&m| m == 1);
        Ok(SumMultisetReport {
            holds,
            multiplicities,
        })
    }

    /// Whether `P` contains exactly one point of each antidiagonal coset,
    /// decided by enumerating the cosets `p + {(g, -g)}` explicitly.
    pub fn antidiagonal_transversal_check(&self, p: &PointSet) -> Result<bool> {
        self.check_candidate(p)?;
        let ambient = self.ambient();
        ambient.ensure_enumerable(DEFAULT_ENUMERATION_BUDGET)?;
        let mut hit = vec![false; ambient.order() as usize];
        for z in p {
            for t in &self.antidiagonal {
                let r = ambient.rank_unchecked(ambient.add_unchecked(z, t).coords()) as usize;
                if hit[r] {
                    return Ok(false);
                }
                hit[r] = true;
            }
        }
        // |P| disjoint cosets of size |G| fill G x G
        Ok(true)
    }

    /// Decides whether `(P, D)` is a spectral pair both by checking all
    /// pairs of `D` on `P` and by the sum-multiset criterion. The direct route
    /// is skipped when it would exceed `max_direct_pairs` pairs.
    pub fn cross_check(&self, p: &PointSet, max_direct_pairs: u64) -> Result<CrossCheck> {
        let criterion = self.sum_multiset_check(p)?;
        let n = self.base.order();
        let pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
        let direct = if pairs <= max_direct_pairs {
            Some(spectral::verify_spectral_pair(p, &self.diagonal)?)
        } else {
            None
        };
        let direct_failure = direct.as_ref().and_then(|v| v.failure().cloned());
        let direct = direct.map(|v| v.holds());
        Ok(CrossCheck {
            direct,
            criterion: criterion.holds,
            agree: direct.map(|d| d == criterion.holds),
            direct_failure,
        })
    }

    /// Tiling of `G` by `A` and `B` next to spectrality of `(A x B, D)`.
    pub fn product_with_diagonal(&self, a: &PointSet, b: &PointSet) -> Result<ProductDiagonal> {
        crate::group::ensure_same(&self.base, a.ambient())?;
        crate::group::ensure_same(&self.base, b.ambient())?;
        if (a.len() as u128) * (b.len() as u128) != self.base.order() as u128 {
            return Err(Error::Cardinality(format!(
                "|A|*|B| = {}*{} but |G| = {}",
                a.len(),
                b.len(),
                self.base.order()
            )));
        }
        let tiling = tiling::verify_tiling(a, b)?;
        let product = self.product.product_set(a, b)?;
        let spectral = self.sum_multiset_check(&product)?.holds;
        Ok(ProductDiagonal {
            tiling: tiling.holds(),
            product_spectral: spectral,
            agree: tiling.holds() == spectral,
            tiling_failure: tiling.failure().cloned(),
        })
    }

    /// `Σ_{(a,b) ∈ P} χ_{(g,g)}(a, b)`, evaluated with the characters of `G x G`.
    pub fn diagonal_character_sum(&self, p: &PointSet, g: &GroupElement) -> Result<CyclotomicSum> {
        crate::group::ensure_same(self.ambient(), p.ambient())?;
        self.base.check(g)?;
        spectral::char_sum_on_set(p, &self.product.pair_unchecked(g, g))
    }

    /// `Σ_{(a,b) ∈ P} χ_g(a + b)`, evaluated with the characters of `G`.
    pub fn folded_character_sum(&self, p: &PointSet, g: &GroupElement) -> Result<CyclotomicSum> {
        crate::group::ensure_same(self.ambient(), p.ambient())?;
        self.base.check(g)?;
        let table = CharacterTable::new(&self.base)?;
        let mut sum = CyclotomicSum::zero(self.base.exponent())?;
        for z in p {
            let (a, b) = self.product.unpair_unchecked(z);
            sum.push(table.pairing_unchecked(g.coords(), self.base.add_unchecked(&a, &b).coords()));
        }
        Ok(sum)
    }

    /// Orthogonality on `P` of `samples` random pairs drawn from `D`.
    pub fn spot_check<R: Rng>(&self, p: &PointSet, samples: u64, rng: &mut R) -> Result<SpotCheck> {
        spectral::spot_check_pairs(p, &self.diagonal, samples, rng)
    }
}

/// Convenience wrapper for [`DiagonalPair::new`].
pub fn diagonal_subgroup(base: &GroupSpec) -> Result<DiagonalPair> {
    DiagonalPair::new(base)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumMultisetReport {
    pub holds: bool,
    /// Multiplicity of each element of `G`, by enumeration rank.
    pub multiplicities: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    /// `None` when the direct route was over budget.
    pub direct: Option<bool>,
    pub criterion: bool,
    pub agree: Option<bool>,
    pub direct_failure: Option<SpectralFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDiagonal {
    pub tiling: bool,
    pub product_spectral: bool,
    pub agree: bool,
    pub tiling_failure: Option<TilingFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessConfig {
    /// Candidates `P` are enumerated exhaustively when there are at most
    /// this many, otherwise this many are sampled uniformly.
    pub budget: u64,
    /// The same rule for the pairs `(A, B)`.
    pub split_budget: u64,
    pub seed: u64,
    pub threads: usize,
    pub max_direct_pairs: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            budget: 100_000,
            split_budget: 100_000,
            seed: 0,
            threads: 1,
            max_direct_pairs: DEFAULT_MAX_DIRECT_PAIRS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub group: String,
    pub candidates: Coverage,
    /// Number of `P ⊂ G x G` with `|P| = |G|` examined.
    pub checked: u64,
    /// Candidates whose direct route was skipped for budget.
    pub direct_skipped: u64,
    pub splits: Coverage,
    /// Number of `(A, B)` with `|A||B| = |G|` examined.
    pub split_pairs: u64,
    /// One serialized instance per disagreement, of either kind.
    pub disagreements: Vec<String>,
}

impl HarnessReport {
    /// Line-oriented rendering; the last line is the summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.disagreements {
            out.push_str(d);
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "group={} candidates={} direct_skipped={} splits={} split_pairs={}",
            self.group,
            coverage_name(self.candidates),
            self.direct_skipped,
            coverage_name(self.splits),
            self.split_pairs
        );
        let _ = writeln!(
            out,
            "checked={} disagreements={}",
            self.checked,
            self.disagreements.len()
        );
        out
    }
}

fn coverage_name(c: Coverage) -> &'static str {
    match c {
        Coverage::Exhaustive => "exhaustive",
        Coverage::Sampled => "sampled",
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Cross-checks the diagonal criterion, the antidiagonal transversal test
/// and the tiling/product equivalence over all (or uniformly sampled)
/// candidates in `G`.
pub fn run_harness(base: &GroupSpec, config: &HarnessConfig) -> Result<HarnessReport> {
    let pair = DiagonalPair::new(base)?;
    let n = base.order();
    let square = pair.ambient().order();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let total = binomial(square as u128, n as u128);
    let (candidates, coverage) = if total <= config.budget as u128 {
        (
            combinations(square as usize, n as usize),
            Coverage::Exhaustive,
        )
    } else {
        let draws = (0..config.budget)
            .map(|_| {
                let mut v = sample(&mut rng, square as usize, n as usize).into_vec();
                v.sort_unstable();
                v
            })
            .collect();
        (draws, Coverage::Sampled)
    };

    let ambient = pair.ambient().clone();
    let item_results: Vec<Result<(Option<String>, bool)>> = with_threads(config.threads, || {
        candidates
            .par_iter()
            .map(|ranks| {
                let points = ranks
                    .iter()
                    .map(|&r| ambient.unrank_unchecked(r as u64))
                    .collect();
                let p = PointSet::from_sorted_unchecked(ambient.clone(), points);
                let cross = pair.cross_check(&p, config.max_direct_pairs)?;
                let transversal = pair.antidiagonal_transversal_check(&p)?;
                let bad = cross.agree == Some(false) || transversal != cross.criterion;
                let line = bad.then(|| {
                    format!(
                        "disagreement kind=diagonal P={p} direct={} criterion={} transversal={}",
                        cross.direct.map(yes).unwrap_or("skipped"),
                        yes(cross.criterion),
                        yes(transversal)
                    )
                });
                Ok((line, cross.direct.is_none()))
            })
            .collect()
    });
    let mut disagreements = Vec::new();
    let mut direct_skipped = 0;
    for r in item_results {
        let (line, skipped) = r?;
        disagreements.extend(line);
        direct_skipped += skipped as u64;
    }

    let splits = split_candidates(n as usize, config.split_budget, &mut rng);
    let elems: Vec<GroupElement> = base.enumerate()?.collect();
    let split_results: Vec<Result<Option<String>>> = with_threads(config.threads, || {
        splits
            .1
            .par_iter()
            .map(|(ia, ib)| {
                let pick = |ix: &[usize]| {
                    PointSet::from_sorted_unchecked(
                        base.clone(),
                        ix.iter().map(|&i| elems[i].clone()).collect(),
                    )
                };
                let (a, b) = (pick(ia), pick(ib));
                let r = pair.product_with_diagonal(&a, &b)?;
                Ok((!r.agree).then(|| {
                    format!(
                        "disagreement kind=product A={a} B={b} tiling={} product-spectral={}",
                        yes(r.tiling),
                        yes(r.product_spectral)
                    )
                }))
            })
            .collect()
    });
    for r in split_results {
        disagreements.extend(r?);
    }

    Ok(HarnessReport {
        group: base.to_string(),
        candidates: coverage,
        checked: candidates.len() as u64,
        direct_skipped,
        splits: splits.0,
        split_pairs: splits.1.len() as u64,
        disagreements,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

type Split = (Vec<usize>, Vec<usize>);

/// Pairs `(A, B)` of index sets with `|A||B| = n`, exhaustive when there are
/// at most `budget` of them.
fn split_candidates<R: Rng>(n: usize, budget: u64, rng: &mut R) -> (Coverage, Vec<Split>) {
    let sizes: Vec<usize> = (1..=n).filter(|a| n.is_multiple_of(*a)).collect();
    let total: u128 = sizes
        .iter()
        .map(|&a| binomial(n as u128, a as u128) * binomial(n as u128, (n / a) as u128))
        .sum();
    if total <= budget as u128 {
        let mut out = Vec::new();
        for &a in &sizes {
            let bs = combinations(n, n / a);
            for ia in combinations(n, a) {
                for ib in &bs {
                    out.push((ia.clone(), ib.clone()));
                }
            }
        }
        return (Coverage::Exhaustive, out);
    }
    let out = (0..budget)
        .map(|_| {
            let a = sizes[rng.gen_range(0..sizes.len())];
            let mut ia = sample(rng, n, a).into_vec();
            let mut ib = sample(rng, n, n / a).into_vec();
            ia.sort_unstable();
            ib.sort_unstable();
            (ia, ib)
        })
        .collect();
    (Coverage::Sampled, out)
}
