//! Finite abelian groups presented as products of cyclic groups.
//!
//! A group is kept exactly as the user wrote it, `Z_{n_1} x ... x Z_{n_d}`,
//! with no reduction to invariant factors: the diagonal of `G x G` and the
//! boxes `[0, n_1) x ... x [0, n_d)` used by the lifting code are defined
//! in these coordinates.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of elements any exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// A finite abelian group `Z_{n_1} x ... x Z_{n_d}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    orders: Vec<u64>,
    order: u64,
    exponent: u64,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::MalformedSpec {
                text: String::new(),
                reason: "at least one factor is required".into(),
            });
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &n in &orders {
            if n == 0 {
                return Err(Error::NonPositiveFactor(n.to_string()));
            }
            order = order.checked_mul(n).ok_or_else(|| Error::SizeLimit {
                what: "group order".into(),
                limit: u64::MAX,
            })?;
            exponent = exponent.lcm(&n);
        }
        Ok(Self {
            orders,
            order,
            exponent,
        })
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The exponent `lcm(n_1, ..., n_d)`; every character takes values in the
    /// `exponent`-th roots of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| (c as i128).rem_euclid(n as i128) as u64)
                .collect(),
        ))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.dim()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.dim() && g.0.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInGroup {
                element: g.to_string(),
                group: self.to_string(),
            })
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.neg_unchecked(g))
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.sub_unchecked(g, h))
    }

    pub(crate) fn add_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| add_mod(a, b, n))
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, g: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&self.orders)
                .map(|(&a, &n)| if a == 0 { 0 } else { n - a })
                .collect(),
        )
    }

    pub(crate) fn sub_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| if a >= b { a - b } else { n - (b - a) })
                .collect(),
        )
    }

    /// Position of `g` in the lexicographic enumeration (last axis fastest).
    pub fn rank(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(self.rank_unchecked(&g.0))
    }

    pub(crate) fn rank_unchecked(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&c, &n)| acc * n + c)
    }

    pub fn unrank(&self, rank: u64) -> Result<GroupElement> {
        if rank >= self.order {
            return Err(Error::NotInGroup {
                element: format!("#{rank}"),
                group: self.to_string(),
            });
        }
        Ok(self.unrank_unchecked(rank))
    }

    pub(crate) fn unrank_unchecked(&self, mut rank: u64) -> GroupElement {
        let mut coords = vec![0; self.dim()];
        for (slot, &n) in coords.iter_mut().zip(&self.orders).rev() {
            *slot = rank % n;
            rank /= n;
        }
        GroupElement(coords)
    }

    /// The standard generators `e_1, ..., e_d`.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.dim())
            .map(|i| {
                let mut coords = vec![0; self.dim()];
                coords[i] = 1 % self.orders[i];
                GroupElement(coords)
            })
            .collect()
    }

    /// Enumerates all elements under the default budget.
    pub fn enumerate(&self) -> Result<Elements<'_>> {
        self.enumerate_with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn enumerate_with_budget(&self, budget: u64) -> Result<Elements<'_>> {
        if self.order > budget {
            return Err(Error::BudgetExceeded {
                what: "enumeration".into(),
                needed: self.order,
                limit: budget,
            });
        }
        Ok(Elements {
            spec: self,
            next: Some(self.zero()),
        })
    }

    pub(crate) fn ensure_enumerable(&self, budget: u64) -> Result<()> {
        self.enumerate_with_budget(budget).map(|_| ())
    }
}

#[inline]
fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    let gap = n - b;
    if a >= gap {
        a - gap
    } else {
        a + b
    }
}

impl fmt::Display for GroupSpec {
    /// Runs of equal factors are written as `n^k`, so the output parses back
    /// to the same factor list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.orders.len() {
            let n = self.orders[i];
            let mut run = 1;
            while i + run < self.orders.len() && self.orders[i + run] == n {
                run += 1;
            }
            if !first {
                f.write_str("x")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{n}^{run}")?;
            } else {
                write!(f, "{n}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

/// Maximum number of cyclic factors accepted by the parser.
const MAX_FACTORS: u64 = 4096;

/// Parses `factor (("," | "x") factor)*` with `factor := INT ("^" INT)?`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let malformed = |reason: &str| Error::MalformedSpec {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let body = text.trim();
    if body.is_empty() {
        return Err(malformed("empty spec"));
    }
    let mut orders = Vec::new();
    for factor in body.split([',', 'x']) {
        let (base, reps) = match factor.split_once('^') {
            Some((b, r)) => (b, Some(r)),
            None => (factor, None),
        };
        let n = parse_positive(base, text)?;
        let reps = match reps {
            Some(r) => parse_positive(r, text)?,
            None => 1,
        };
        if orders.len() as u64 + reps > MAX_FACTORS {
            return Err(Error::SizeLimit {
                what: "number of factors".into(),
                limit: MAX_FACTORS,
            });
        }
        orders.extend(std::iter::repeat_n(n, reps as usize));
    }
    GroupSpec::new(orders)
}

fn parse_positive(token: &str, text: &str) -> Result<u64> {
    if token.is_empty() {
        return Err(Error::MalformedSpec {
            text: text.to_string(),
            reason: "empty factor".into(),
        });
    }
    if let Some(rest) = token.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::NonPositiveFactor(token.to_string()));
        }
    }
    if !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedSpec {
            text: text.to_string(),
            reason: format!("{token:?} is not a decimal integer"),
        });
    }
    let value: u64 = token.parse().map_err(|_| Error::SizeLimit {
        what: format!("integer {token}"),
        limit: u64::MAX,
    })?;
    if value == 0 {
        return Err(Error::NonPositiveFactor(token.to_string()));
    }
    Ok(value)
}

/// An element of a [`GroupSpec`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement(pub(crate) Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Lexicographic odometer over all elements of a group.
pub struct Elements<'a> {
    spec: &'a GroupSpec,
    next: Option<GroupElement>,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (c, &n) in succ.0.iter_mut().zip(&self.spec.orders).rev() {
            *c += 1;
            if *c < n {
                carried = false;
                break;
            }
            *c = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// A duplicate-free subset of a group, kept sorted in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PointSet {
    ambient: GroupSpec,
    points: Vec<GroupElement>,
}

impl PointSet {
    /// Builds a set from elements of `ambient`; duplicates are rejected.
    pub fn new(ambient: GroupSpec, mut points: Vec<GroupElement>) -> Result<Self> {
        for p in &points {
            ambient.check(p)?;
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_string()));
        }
        Ok(Self { ambient, points })
    }

    /// Builds a set from unreduced integer coordinates.
    pub fn from_coords<R: AsRef<[i64]>>(ambient: GroupSpec, rows: &[R]) -> Result<Self> {
        let points = rows
            .iter()
            .map(|r| ambient.element(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, points)
    }

    /// Convenience for cyclic groups: `PointSet::cyclic(4, &[0, 1])`.
    pub fn cyclic(n: u64, residues: &[i64]) -> Result<Self> {
        let rows: Vec<[i64; 1]> = residues.iter().map(|&r| [r]).collect();
        Self::from_coords(GroupSpec::cyclic(n)?, &rows)
    }

    /// The whole group as a set.
    pub fn full(ambient: GroupSpec) -> Result<Self> {
        let points = ambient.enumerate()?.collect();
        Ok(Self { ambient, points })
    }

    pub(crate) fn from_sorted_unchecked(ambient: GroupSpec, points: Vec<GroupElement>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Self { ambient, points }
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.points.binary_search(g).is_ok()
    }

    /// `self + t`.
    pub fn translate(&self, t: &GroupElement) -> Result<Self> {
        self.ambient.check(t)?;
        let points = self
            .points
            .iter()
            .map(|p| self.ambient.add_unchecked(p, t))
            .collect();
        Self::new(self.ambient.clone(), points)
    }

    /// Whether `self + g` is contained in `self` for every `g` in `generators`.
    /// For a finite nonempty set this is equivalent to being a union of cosets
    /// of the generated subgroup; with `0 ∈ self` and generators of `self`, it
    /// certifies that `self` is a subgroup.
    pub fn is_closed_under(&self, generators: &[GroupElement]) -> Result<bool> {
        for g in generators {
            self.ambient.check(g)?;
            if !self
                .points
                .iter()
                .all(|p| self.contains(&self.ambient.add_unchecked(p, g)))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn same_ambient(&self, other: &PointSet) -> Result<()> {
        ensure_same(&self.ambient, &other.ambient)
    }
}

pub(crate) fn ensure_same(left: &GroupSpec, right: &GroupSpec) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::MismatchedAmbient {
            left: left.to_string(),
            right: right.to_string(),
        })
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// `G_1 x G_2` with the coordinate pairing `(x, y) <-> x ++ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGroup {
    left: GroupSpec,
    right: GroupSpec,
    spec: GroupSpec,
}

impl ProductGroup {
    pub fn new(left: GroupSpec, right: GroupSpec) -> Result<Self> {
        let orders = left.orders.iter().chain(&right.orders).copied().collect();
        let spec = GroupSpec::new(orders)?;
        Ok(Self { left, right, spec })
    }

    /// `G x G`.
    pub fn square(base: GroupSpec) -> Result<Self> {
        Self::new(base.clone(), base)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn left(&self) -> &GroupSpec {
        &self.left
    }

    pub fn right(&self) -> &GroupSpec {
        &self.right
    }

    pub fn pair(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.left.check(x)?;
        self.right.check(y)?;
        Ok(self.pair_unchecked(x, y))
    }

    pub(crate) fn pair_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut coords = Vec::with_capacity(self.spec.dim());
        coords.extend_from_slice(&x.0);
        coords.extend_from_slice(&y.0);
        GroupElement(coords)
    }

    pub fn unpair(&self, z: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        self.spec.check(z)?;
        Ok(self.unpair_unchecked(z))
    }

    pub(crate) fn unpair_unchecked(&self, z: &GroupElement) -> (GroupElement, GroupElement) {
        let (x, y) = z.0.split_at(self.left.dim());
        (GroupElement(x.to_vec()), GroupElement(y.to_vec()))
    }

    /// `A x B` as a subset of the product.
    pub fn product_set(&self, a: &PointSet, b: &PointSet) -> Result<PointSet> {
        ensure_same(&self.left, a.ambient())?;
        ensure_same(&self.right, b.ambient())?;
        // Both factors are sorted, so the pairs come out in lexicographic order.
        let points = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| self.pair_unchecked(x, y)))
            .collect();
        Ok(PointSet::from_sorted_unchecked(self.spec.clone(), points))
    }
}

/// Convenience wrapper for [`ProductGroup::new`] returning only the spec.
pub fn product_group(g1: &GroupSpec, g2: &GroupSpec) -> Result<GroupSpec> {
    Ok(ProductGroup::new(g1.clone(), g2.clone())?.spec)
}

/// Every ordered factor list with factors `>= 2` whose product is `order`;
/// the trivial group is presented as `[1]`.
pub fn factor_presentations(order: u64) -> Vec<GroupSpec> {
    fn rec(rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for f in 2..=rest {
            if rest.is_multiple_of(f) {
                cur.push(f);
                rec(rest / f, cur, out);
                cur.pop();
            }
        }
    }
    if order <= 1 {
        return vec![GroupSpec::new(vec![1]).expect("trivial group")];
    }
    let mut out = Vec::new();
    rec(order, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|o| GroupSpec::new(o).expect("factors are positive"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        let g = spec("24^3");
        assert_eq!(g.orders(), &[24, 24, 24]);
        assert_eq!(g.order(), 13824);
        assert_eq!(g.exponent(), 24);

        let g = spec("1");
        assert_eq!(g.orders(), &[1]);
        assert_eq!(g.order(), 1);

        let g = spec("2x3");
        assert_eq!(g.orders(), &[2, 3]);
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);

        assert_eq!(spec("4,6x2^2").orders(), &[4, 6, 2, 2]);
        assert_eq!(spec("4,6x2^2").exponent(), 12);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            parse_group_spec("0"),
            Err(Error::NonPositiveFactor(_))
        ));
        assert!(matches!(
            parse_group_spec("-3"),
            Err(Error::NonPositiveFactor(_))
        ));
        assert!(matches!(
            parse_group_spec("4^0"),
            Err(Error::NonPositiveFactor(_))
        ));
        for bad in [
            "", "x", "4x", "4,,2", "a", "4^", "^2", "4^2^2", "4 x 2", "+4",
        ] {
            assert!(
                matches!(parse_group_spec(bad), Err(Error::MalformedSpec { .. })),
                "{bad:?} should be malformed"
            );
        }
        assert!(matches!(
            parse_group_spec("4294967296x4294967296"),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            parse_group_spec("99999999999999999999999"),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            parse_group_spec("2^5000"),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        for s in ["24^3", "2x3", "1", "4^2x3x2^2", "5"] {
            let g = spec(s);
            assert_eq!(g.to_string(), s);
            assert_eq!(spec(&g.to_string()), g);
        }
        assert_eq!(spec("4x4").to_string(), "4^2");
    }

    #[test]
    fn equality_is_by_factor_list() {
        assert_eq!(spec("2x3"), spec("2,3"));
        assert_ne!(spec("2x3"), spec("3x2"));
        assert_ne!(spec("6"), spec("2x3"));
    }

    #[test]
    fn arithmetic_examples() {
        let z4 = spec("4");
        let s = z4.add(&z4.element(&[3]).unwrap(), &z4.element(&[2]).unwrap());
        assert_eq!(s.unwrap(), z4.element(&[1]).unwrap());

        let g = spec("2x3");
        let x = g.element(&[1, 2]).unwrap();
        assert_eq!(g.add(&x, &x).unwrap(), g.element(&[0, 1]).unwrap());

        let g = spec("5x7x2");
        assert_eq!(g.neg(&g.zero()).unwrap(), g.zero());
        assert_eq!(g.element(&[-1, 15, 3]).unwrap().coords(), &[4, 1, 1]);
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let z4 = spec("4");
        let g = spec("2x3");
        let x = g.element(&[1, 1]).unwrap();
        assert!(matches!(z4.add(&x, &x), Err(Error::NotInGroup { .. })));
        assert!(matches!(
            z4.element(&[1, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        let a = PointSet::cyclic(4, &[0]).unwrap();
        let b = PointSet::cyclic(5, &[0]).unwrap();
        assert!(matches!(
            a.same_ambient(&b),
            Err(Error::MismatchedAmbient { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let show = |s: &str| -> Vec<Vec<u64>> {
            spec(s)
                .enumerate()
                .unwrap()
                .map(|g| g.coords().to_vec())
                .collect()
        };
        assert_eq!(show("2"), vec![vec![0], vec![1]]);
        assert_eq!(
            show("2x2"),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(show("1"), vec![vec![0]]);
        assert!(matches!(
            spec("24^6").enumerate(),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_rank() {
        for s in ["1", "3x1x2", "4x3x2", "5^2"] {
            let g = spec(s);
            let elems: Vec<_> = g.enumerate().unwrap().collect();
            assert_eq!(elems.len() as u64, g.order());
            for (i, e) in elems.iter().enumerate() {
                assert_eq!(g.rank(e).unwrap(), i as u64);
                assert_eq!(&g.unrank(i as u64).unwrap(), e);
            }
            assert!(elems.windows(2).all(|w| w[0] < w[1]));
        }
    }

    fn small_presentations(max: u64) -> Vec<GroupSpec> {
        (1..=max).flat_map(factor_presentations).collect()
    }

    #[test]
    fn group_axioms_exhaustive_up_to_64() {
        for g in small_presentations(64) {
            let elems: Vec<_> = g.enumerate().unwrap().collect();
            let zero = g.zero();
            for x in &elems {
                assert_eq!(&g.add(x, &zero).unwrap(), x);
                assert_eq!(g.add(x, &g.neg(x).unwrap()).unwrap(), zero);
                for y in &elems {
                    let xy = g.add(x, y).unwrap();
                    assert_eq!(xy, g.add(y, x).unwrap());
                    assert_eq!(g.sub(&xy, y).unwrap(), *x);
                }
            }
            // associativity on all triples is cubic; sample it on the larger ones
            let step = if elems.len() > 24 { 5 } else { 1 };
            for x in elems.iter().step_by(step) {
                for y in elems.iter().step_by(step) {
                    for z in elems.iter().step_by(step) {
                        let l = g.add(&g.add(x, y).unwrap(), z).unwrap();
                        let r = g.add(x, &g.add(y, z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn presentations_of_12() {
        let names: Vec<String> = factor_presentations(12)
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(
            names,
            ["2^2x3", "2x3x2", "2x6", "3x2^2", "3x4", "4x3", "6x2", "12"]
        );
        assert_eq!(factor_presentations(1)[0].orders(), &[1]);
    }

    #[test]
    fn product_examples() {
        let z4 = spec("4");
        let p = ProductGroup::square(z4.clone()).unwrap();
        assert_eq!(p.spec().orders(), &[4, 4]);
        assert_eq!(p.spec().order(), 16);
        let z = p
            .pair(&z4.element(&[1]).unwrap(), &z4.element(&[3]).unwrap())
            .unwrap();
        assert_eq!(z.coords(), &[1, 3]);
        let (x, y) = p.unpair(&z).unwrap();
        assert_eq!((x.coords(), y.coords()), (&[1u64][..], &[3u64][..]));

        let big = spec("24^3");
        let pg = product_group(&big, &big).unwrap();
        assert_eq!(pg.order(), 13824 * 13824);
    }

    #[test]
    fn pair_unpair_bijection_up_to_64() {
        for g in small_presentations(8) {
            let p = ProductGroup::square(g.clone()).unwrap();
            let mut seen = std::collections::HashSet::new();
            for z in p.spec().enumerate().unwrap() {
                let (x, y) = p.unpair(&z).unwrap();
                assert_eq!(p.pair(&x, &y).unwrap(), z);
                assert!(seen.insert((x, y)));
            }
            assert_eq!(seen.len() as u64, g.order() * g.order());
        }
    }

    #[test]
    fn point_set_semantics() {
        let s = PointSet::cyclic(4, &[3, 1, 6]).unwrap();
        assert_eq!(s.to_string(), "{1,2,3}");
        assert!(matches!(
            PointSet::cyclic(4, &[1, 5]),
            Err(Error::DuplicatePoint(_))
        ));
        let t = s.translate(&s.ambient().element(&[1]).unwrap()).unwrap();
        assert_eq!(t.to_string(), "{0,2,3}");
        let sub = PointSet::cyclic(6, &[0, 2, 4]).unwrap();
        let two = sub.ambient().element(&[2]).unwrap();
        assert!(sub.is_closed_under(&[two]).unwrap());
        assert!(!s.is_closed_under(&s.ambient().generators()).unwrap());
    }
}
