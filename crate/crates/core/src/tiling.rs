//! Translational tilings `A ⊕ B = G` of finite abelian groups.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_cover::{CoverSearch, Dlx};
use crate::group::{GroupElement, GroupSpec, PointSet, DEFAULT_ENUMERATION_BUDGET};
use crate::search::{Overrun, SearchConfig, SearchOutcome, Verdict};

/// `table[rank(g)] = #{(a, b) ∈ A x B : a + b = g}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageTable {
    ambient: GroupSpec,
    counts: Vec<u32>,
}

impl CoverageTable {
    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    /// Counts indexed by enumeration rank.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, g: &GroupElement) -> Result<u32> {
        Ok(self.counts[self.ambient.rank(g)? as usize])
    }

    pub fn is_exact(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    /// The element reported when the table is not an exact cover: the first
    /// uncovered element if there is one, otherwise the first overcovered.
    pub fn first_defect(&self) -> Option<(GroupElement, u32)> {
        let pick = |pred: &dyn Fn(u32) -> bool| {
            self.counts
                .iter()
                .position(|&c| pred(c))
                .map(|r| (self.ambient.unrank_unchecked(r as u64), self.counts[r]))
        };
        pick(&|c| c == 0).or_else(|| pick(&|c| c > 1))
    }
}

pub fn sum_coverage(a: &PointSet, b: &PointSet) -> Result<CoverageTable> {
    a.same_ambient(b)?;
    let ambient = a.ambient();
    ambient.ensure_enumerable(DEFAULT_ENUMERATION_BUDGET)?;
    let mut counts = vec![0u32; ambient.order() as usize];
    for x in a {
        for y in b {
            let s = ambient.add_unchecked(x, y);
            counts[ambient.rank_unchecked(s.coords()) as usize] += 1;
        }
    }
    Ok(CoverageTable {
        ambient: ambient.clone(),
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingCertificate {
    pub tile: PointSet,
    pub complement: PointSet,
    pub coverage: CoverageTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TilingFailure {
    CardinalityMismatch {
        tile: usize,
        complement: usize,
        group: u64,
    },
    Defect {
        element: GroupElement,
        count: u32,
    },
}

impl std::fmt::Display for TilingFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TilingFailure::CardinalityMismatch {
                tile,
                complement,
                group,
            } => write!(
                f,
                "cardinality |A|*|B|={}*{} != |G|={group}",
                tile, complement
            ),
            TilingFailure::Defect { element, count } => write!(f, "g={element} count={count}"),
        }
    }
}

pub type TilingVerdict = Verdict<TilingCertificate, TilingFailure>;

/// Whether every element of `G` is uniquely `a + b`.
pub fn verify_tiling(a: &PointSet, b: &PointSet) -> Result<TilingVerdict> {
    a.same_ambient(b)?;
    let order = a.ambient().order();
    if (a.len() as u128) * (b.len() as u128) != order as u128 {
        return Ok(Verdict::Fails(TilingFailure::CardinalityMismatch {
            tile: a.len(),
            complement: b.len(),
            group: order,
        }));
    }
    let coverage = sum_coverage(a, b)?;
    match coverage.first_defect() {
        Some((element, count)) => Ok(Verdict::Fails(TilingFailure::Defect { element, count })),
        None => Ok(Verdict::Holds(TilingCertificate {
            tile: a.clone(),
            complement: b.clone(),
            coverage,
        })),
    }
}

/// Searches for `B` with `A ⊕ B = G` by exact cover over the translates
/// `A + u`. Complements are closed under translation, so `0 ∈ B` is forced
/// and `A` itself is pre-placed.
pub fn find_complement(
    a: &PointSet,
    config: &SearchConfig,
) -> Result<SearchOutcome<TilingCertificate>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let ambient = a.ambient();
    let order = ambient.order();
    if !order.is_multiple_of(a.len() as u64) {
        return Err(Error::Cardinality(format!(
            "|A| = {} does not divide |G| = {order}",
            a.len()
        )));
    }
    if order > config.max_order {
        return Ok(SearchOutcome::BudgetExceeded(Overrun::GroupOrder {
            order,
            limit: config.max_order,
        }));
    }

    let mut dlx = Dlx::new(order as usize);
    let mut offsets = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let base: Vec<usize> = a
        .iter()
        .map(|x| ambient.rank_unchecked(x.coords()) as usize)
        .collect();
    let mut in_base = vec![false; order as usize];
    for &i in &base {
        in_base[i] = true;
    }
    seen.insert(sorted(base.clone()));
    for u in ambient.enumerate_with_budget(config.max_order)? {
        let items: Vec<usize> = a
            .iter()
            .map(|x| ambient.rank_unchecked(ambient.add_unchecked(x, &u).coords()) as usize)
            .collect();
        if items.iter().any(|&i| in_base[i]) || !seen.insert(sorted(items.clone())) {
            continue;
        }
        dlx.add_option(&items);
        offsets.push(u);
    }
    for &item in &base {
        dlx.cover_item(item);
    }

    match dlx.solve(config.max_nodes) {
        CoverSearch::Found(rows) => {
            let mut points = vec![ambient.zero()];
            points.extend(rows.into_iter().map(|r| offsets[r].clone()));
            let complement = PointSet::new(ambient.clone(), points)?;
            match verify_tiling(a, &complement)? {
                Verdict::Holds(cert) => Ok(SearchOutcome::Found(cert)),
                Verdict::Fails(f) => unreachable!("exact cover produced a non-tiling: {f}"),
            }
        }
        CoverSearch::Exhausted => Ok(SearchOutcome::Exhausted),
        CoverSearch::BudgetExceeded => Ok(SearchOutcome::BudgetExceeded(Overrun::Nodes {
            limit: config.max_nodes,
        })),
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
