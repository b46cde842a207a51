//! Spectral pairs in finite abelian groups.
//!
//! The dual of `Z_{n_1} x ... x Z_{n_d}` is identified with the group itself
//! through the pairing `χ_h(g) = ζ_L^{Σ (L/n_i) h_i g_i}`, `L` the exponent.
//! `(S, Λ)` is a spectral pair when `|Λ| = |S|` and the characters in `Λ` are
//! pairwise orthogonal on `S`; orthogonality of `χ_h` and `χ_h'` only depends
//! on `h - h'`, which drives both the verifier's memo and the search graph.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{find_clique, BitGraph, CliqueSearch};
use crate::cyclotomic::{CyclotomicSum, MAX_ROOT_ORDER};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, PointSet};
use crate::search::{with_threads, Overrun, SearchConfig, SearchOutcome, Verdict};

/// Precomputed weights `L / n_i` for evaluating characters of one group.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    spec: GroupSpec,
    weights: Vec<u64>,
}

impl CharacterTable {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let l = spec.exponent();
        if l > MAX_ROOT_ORDER {
            return Err(Error::BudgetExceeded {
                what: "group exponent".into(),
                needed: l,
                limit: MAX_ROOT_ORDER,
            });
        }
        Ok(Self {
            spec: spec.clone(),
            weights: spec.orders().iter().map(|&n| l / n).collect(),
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn root_order(&self) -> u64 {
        self.spec.exponent()
    }

    /// Exponent `k` with `χ_h(g) = ζ_L^k`; `h` and `g` must be members.
    #[inline]
    pub(crate) fn pairing_unchecked(&self, h: &[u64], g: &[u64]) -> u64 {
        let l = self.spec.exponent();
        // every factor is below L <= MAX_ROOT_ORDER, so products fit in u64
        h.iter()
            .zip(g)
            .zip(&self.weights)
            .fold(0u64, |acc, ((&a, &b), &w)| (acc + (w * a % l) * b) % l)
    }

    /// `Σ_{s ∈ S} χ_h(s)` as an exact sum of `L`-th roots of unity.
    pub(crate) fn sum_on_set_unchecked(&self, set: &PointSet, h: &[u64]) -> CyclotomicSum {
        let mut sum = CyclotomicSum::zero(self.root_order()).expect("exponent validated");
        for s in set {
            sum.push(self.pairing_unchecked(h, s.coords()));
        }
        sum
    }
}

/// Exponent `k` in `Z_L` with `χ_h(g) = ζ_L^k`, `L` the exponent of `ambient`.
pub fn character_pairing(ambient: &GroupSpec, h: &GroupElement, g: &GroupElement) -> Result<u64> {
    ambient.check(h)?;
    ambient.check(g)?;
    let l = ambient.exponent() as u128;
    let k = h
        .coords()
        .iter()
        .zip(g.coords())
        .zip(ambient.orders())
        .fold(0u128, |acc, ((&a, &b), &n)| {
            let w = l / n as u128;
            (acc + (w * a as u128 % l) * b as u128 % l) % l
        });
    Ok(k as u64)
}

/// `Σ_{s ∈ S} χ_h(s)`.
pub fn char_sum_on_set(set: &PointSet, h: &GroupElement) -> Result<CyclotomicSum> {
    set.ambient().check(h)?;
    let table = CharacterTable::new(set.ambient())?;
    Ok(table.sum_on_set_unchecked(set, h.coords()))
}

/// Whether `χ_{h1}` and `χ_{h2}` are orthogonal in `L^2(S)`.
pub fn are_orthogonal(set: &PointSet, h1: &GroupElement, h2: &GroupElement) -> Result<bool> {
    let ambient = set.ambient();
    let d = ambient.sub(h1, h2)?;
    Ok(char_sum_on_set(set, &d)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumCertificate {
    pub set: PointSet,
    pub spectrum: PointSet,
    /// Number of unordered pairs of `spectrum` verified orthogonal on `set`.
    pub checked_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SpectralFailure {
    CardinalityMismatch {
        set: usize,
        spectrum: usize,
    },
    NotOrthogonal {
        first: GroupElement,
        second: GroupElement,
    },
}

impl std::fmt::Display for SpectralFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectralFailure::CardinalityMismatch { set, spectrum } => {
                write!(f, "cardinality mismatch |S|={set} |Lambda|={spectrum}")
            }
            SpectralFailure::NotOrthogonal { first, second } => {
                write!(f, "non-orthogonal pair h1={first} h2={second}")
            }
        }
    }
}

pub type SpectralVerdict = Verdict<SpectrumCertificate, SpectralFailure>;

/// Checks every unordered pair of `spectrum` for orthogonality on `set`.
/// The first failing pair, in enumeration order, is reported.
pub fn verify_spectral_pair(set: &PointSet, spectrum: &PointSet) -> Result<SpectralVerdict> {
    set.same_ambient(spectrum)?;
    if set.len() != spectrum.len() {
        return Ok(Verdict::Fails(SpectralFailure::CardinalityMismatch {
            set: set.len(),
            spectrum: spectrum.len(),
        }));
    }
    let ambient = set.ambient();
    let table = CharacterTable::new(ambient)?;
    let mut memo: HashMap<u64, bool> = HashMap::new();
    let lambda = spectrum.points();
    let mut checked = 0u64;
    for (i, a) in lambda.iter().enumerate() {
        for b in &lambda[i + 1..] {
            let d = ambient.sub_unchecked(a, b);
            let key = ambient.rank_unchecked(d.coords());
            let ok = *memo
                .entry(key)
                .or_insert_with(|| table.sum_on_set_unchecked(set, d.coords()).is_zero());
            if !ok {
                return Ok(Verdict::Fails(SpectralFailure::NotOrthogonal {
                    first: a.clone(),
                    second: b.clone(),
                }));
            }
            checked += 1;
        }
    }
    Ok(Verdict::Holds(SpectrumCertificate {
        set: set.clone(),
        spectrum: spectrum.clone(),
        checked_pairs: checked,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub sampled: u64,
    pub failures: Vec<(GroupElement, GroupElement)>,
}

/// Orthogonality on `set` of `samples` uniformly random pairs of distinct
/// elements of `spectrum`. Used where the full pairwise check is too large.
pub fn spot_check_pairs<R: Rng>(
    set: &PointSet,
    spectrum: &PointSet,
    samples: u64,
    rng: &mut R,
) -> Result<SpotCheck> {
    set.same_ambient(spectrum)?;
    let ambient = set.ambient();
    let table = CharacterTable::new(ambient)?;
    let lambda = spectrum.points();
    let mut failures = Vec::new();
    if lambda.len() < 2 {
        return Ok(SpotCheck {
            sampled: 0,
            failures,
        });
    }
    for _ in 0..samples {
        let i = rng.gen_range(0..lambda.len());
        let mut j = rng.gen_range(0..lambda.len() - 1);
        if j >= i {
            j += 1;
        }
        let d = ambient.sub_unchecked(&lambda[i], &lambda[j]);
        if !table.sum_on_set_unchecked(set, d.coords()).is_zero() {
            failures.push((lambda[i].clone(), lambda[j].clone()));
        }
    }
    Ok(SpotCheck {
        sampled: samples,
        failures,
    })
}

/// Decides whether `set` is spectral.
///
/// Spectra are translation invariant, so only spectra containing `0` are
/// searched: the neighbours of `0` in the orthogonality graph are the
/// nonzero `h` with vanishing `Σ_S χ_h`, and a spectrum is `0` plus a clique
/// of `|S| - 1` such elements whose pairwise differences also vanish.
/// `Exhausted` is only returned after the complete search space is refuted;
/// any certificate is re-verified from scratch before it is returned.
pub fn find_spectrum(
    set: &PointSet,
    config: &SearchConfig,
) -> Result<SearchOutcome<SpectrumCertificate>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let ambient = set.ambient();
    if ambient.order() > config.max_order {
        return Ok(SearchOutcome::BudgetExceeded(Overrun::GroupOrder {
            order: ambient.order(),
            limit: config.max_order,
        }));
    }
    let table = CharacterTable::new(ambient)?;
    let order = ambient.order();

    let vanishing: Vec<bool> = with_threads(config.threads, || {
        (0..order)
            .into_par_iter()
            .map(|r| {
                r != 0
                    && table
                        .sum_on_set_unchecked(set, ambient.unrank_unchecked(r).coords())
                        .is_zero()
            })
            .collect()
    });
    let zeros: Vec<u64> = (0..order).filter(|&r| vanishing[r as usize]).collect();
    let need = set.len() - 1;
    if zeros.len() < need {
        return Ok(SearchOutcome::Exhausted);
    }

    let coords: Vec<GroupElement> = zeros.iter().map(|&r| ambient.unrank_unchecked(r)).collect();
    let mut graph = BitGraph::new(zeros.len());
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            let d = ambient.sub_unchecked(&coords[i], &coords[j]);
            if vanishing[ambient.rank_unchecked(d.coords()) as usize] {
                graph.add_edge(i, j);
            }
        }
    }
    let mut vertex_order: Vec<usize> = (0..zeros.len()).collect();
    if !config.canonical {
        // stable sort keeps enumeration order among equal degrees
        vertex_order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    }

    match find_clique(
        &graph,
        &vertex_order,
        need,
        config.max_nodes,
        config.threads,
    ) {
        CliqueSearch::Found(clique) => {
            let mut points = vec![ambient.zero()];
            points.extend(clique.into_iter().map(|v| coords[v].clone()));
            let spectrum = PointSet::new(ambient.clone(), points)?;
            match verify_spectral_pair(set, &spectrum)? {
                Verdict::Holds(cert) => Ok(SearchOutcome::Found(cert)),
                Verdict::Fails(f) => unreachable!("search produced an invalid spectrum: {f}"),
            }
        }
        CliqueSearch::Exhausted => Ok(SearchOutcome::Exhausted),
        CliqueSearch::BudgetExceeded => Ok(SearchOutcome::BudgetExceeded(Overrun::Nodes {
            limit: config.max_nodes,
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, xs: &[i64]) -> PointSet {
        PointSet::cyclic(n, xs).unwrap()
    }

    fn el(spec: &GroupSpec, c: &[i64]) -> GroupElement {
        spec.element(c).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert_eq!(
            character_pairing(&z4, &el(&z4, &[1]), &el(&z4, &[1])).unwrap(),
            1
        );
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        for x in g.enumerate().unwrap() {
            assert_eq!(character_pairing(&g, &g.zero(), &x).unwrap(), 0);
        }
        assert_eq!(
            character_pairing(&g, &el(&g, &[1, 1]), &el(&g, &[1, 2])).unwrap(),
            1
        );
        assert!(character_pairing(&z4, &el(&g, &[1, 1]), &el(&z4, &[1])).is_err());
    }

    #[test]
    fn table_matches_wide_pairing() {
        let g: GroupSpec = "4x6x9".parse().unwrap();
        let t = CharacterTable::new(&g).unwrap();
        for h in g.enumerate().unwrap().step_by(7) {
            for x in g.enumerate().unwrap().step_by(5) {
                assert_eq!(
                    t.pairing_unchecked(h.coords(), x.coords()),
                    character_pairing(&g, &h, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        for n in 2..10 {
            let full = PointSet::full(GroupSpec::cyclic(n).unwrap()).unwrap();
            for h in 1..n as i64 {
                let s = char_sum_on_set(&full, &el(full.ambient(), &[h])).unwrap();
                assert!(s.is_zero());
            }
        }
        let s = z(5, &[0, 2, 3]);
        let sum = char_sum_on_set(&s, &s.ambient().zero()).unwrap();
        assert_eq!(sum.counts()[0], 3);
        assert!(!sum.is_zero());

        let s = z(4, &[0, 1]);
        let sum = char_sum_on_set(&s, &el(s.ambient(), &[2])).unwrap();
        assert!(sum.is_zero());
        assert!(sum.approx_complex().norm() < 1e-12);
    }

    #[test]
    fn orthogonality_examples() {
        let s = z(4, &[0, 1]);
        let h = el(s.ambient(), &[3]);
        assert!(!are_orthogonal(&s, &h, &h).unwrap());

        let full = PointSet::full(GroupSpec::cyclic(6).unwrap()).unwrap();
        let g = full.ambient().clone();
        for a in 0..6 {
            for b in 0..6 {
                if a != b {
                    assert!(are_orthogonal(&full, &el(&g, &[a]), &el(&g, &[b])).unwrap());
                }
            }
        }

        // brute force over the 6 pairs: differences give i, 1, -i (up to sign)
        let s = z(4, &[0, 1, 2]);
        let g = s.ambient().clone();
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(!are_orthogonal(&s, &el(&g, &[a]), &el(&g, &[b])).unwrap());
            }
        }
    }

    #[test]
    fn verify_examples() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let full = PointSet::full(g).unwrap();
        let v = verify_spectral_pair(&full, &full).unwrap();
        assert_eq!(v.certificate().unwrap().checked_pairs, 15);

        let v = verify_spectral_pair(&z(4, &[0, 1]), &z(4, &[0, 2])).unwrap();
        assert_eq!(v.certificate().unwrap().checked_pairs, 1);

        let s = z(4, &[0, 1, 2]);
        for skip in 0..4 {
            let lambda: Vec<i64> = (0..4).filter(|&x| x != skip).collect();
            let v = verify_spectral_pair(&s, &z(4, &lambda)).unwrap();
            assert!(matches!(
                v.failure(),
                Some(SpectralFailure::NotOrthogonal { .. })
            ));
        }

        let v = verify_spectral_pair(&z(4, &[0, 1]), &z(4, &[0, 1, 2])).unwrap();
        assert_eq!(
            v.failure(),
            Some(&SpectralFailure::CardinalityMismatch {
                set: 2,
                spectrum: 3
            })
        );
        assert!(matches!(
            verify_spectral_pair(&z(4, &[0]), &z(5, &[0])),
            Err(Error::MismatchedAmbient { .. })
        ));
    }

    #[test]
    fn find_examples() {
        let cfg = SearchConfig::default();
        let out = find_spectrum(&z(7, &[0]), &cfg).unwrap();
        assert_eq!(out.found().unwrap().spectrum, z(7, &[0]));
        let out = find_spectrum(&z(4, &[0, 1]), &cfg).unwrap();
        assert_eq!(out.found().unwrap().spectrum, z(4, &[0, 2]));
        let out = find_spectrum(&z(4, &[0, 1, 2]), &cfg).unwrap();
        assert!(out.is_exhausted());
        assert!(matches!(
            find_spectrum(
                &PointSet::new(GroupSpec::cyclic(3).unwrap(), vec![]).unwrap(),
                &cfg
            ),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn find_respects_order_budget() {
        let cfg = SearchConfig {
            max_order: 8,
            ..SearchConfig::default()
        };
        let out = find_spectrum(&z(9, &[0, 1, 2]), &cfg).unwrap();
        assert_eq!(
            out,
            SearchOutcome::BudgetExceeded(Overrun::GroupOrder { order: 9, limit: 8 })
        );
    }

    #[test]
    fn canonical_search_returns_least_spectrum() {
        let cfg = SearchConfig {
            canonical: true,
            ..SearchConfig::default()
        };
        let out = find_spectrum(&z(6, &[0, 1, 2]), &cfg).unwrap();
        assert_eq!(out.found().unwrap().spectrum, z(6, &[0, 2, 4]));
        // both {0,(1,0)} and {0,(1,1)} are spectra here
        let g: GroupSpec = "2x2".parse().unwrap();
        let s = PointSet::from_coords(g.clone(), &[[0, 0], [1, 0]]).unwrap();
        let out = find_spectrum(&s, &cfg).unwrap();
        let want = PointSet::from_coords(g, &[[0, 0], [1, 0]]).unwrap();
        assert_eq!(out.found().unwrap().spectrum, want);
    }

    #[test]
    fn threaded_search_matches_sequential() {
        let g: GroupSpec = "3x3x2".parse().unwrap();
        let sets = [
            vec![[0, 0, 0], [1, 0, 0], [2, 0, 0]],
            vec![[0, 0, 0], [0, 1, 0], [1, 0, 1]],
            vec![[0, 0, 0], [1, 1, 0], [2, 2, 1], [0, 1, 1]],
        ];
        for rows in sets {
            let s = PointSet::from_coords(g.clone(), &rows).unwrap();
            let seq = find_spectrum(&s, &SearchConfig::default()).unwrap();
            let par = find_spectrum(
                &s,
                &SearchConfig {
                    threads: 3,
                    ..SearchConfig::default()
                },
            )
            .unwrap();
            assert_eq!(seq.found().is_some(), par.found().is_some());
            assert_eq!(seq.is_exhausted(), par.is_exhausted());
        }
    }
}
