//! Box-normalized finite sets in `Z^d` and the expansion
//! `A(k) = A + ∏_i {0, n_i, ..., (k-1) n_i}`.
//!
//! Spectrality of a finite set of integer points is only ever checked inside
//! one finite quotient `∏ Z_{m_i}`. A spectrum found there is a rational
//! spectrum with denominators `m_i`; failing to find one in a single quotient
//! says nothing about spectrality in `Z^d`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagonal::DiagonalPair;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, PointSet, DEFAULT_ENUMERATION_BUDGET};
use crate::search::{SearchConfig, SearchOutcome};
use crate::spectral::{self, SpectrumCertificate};
use crate::tiling;

/// Largest lifting factor the pipeline accepts by default.
pub const DEFAULT_MAX_LIFT: u64 = 4;

/// A finite subset of `Z^d_{>=0}` inside the box `∏ [0, k n_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BoxedSet {
    dims: Vec<u64>,
    lift: u64,
    points: Vec<Vec<u64>>,
}

impl BoxedSet {
    /// A base set (`k = 1`); every point must lie in `∏ [0, n_i)`.
    pub fn new(dims: Vec<u64>, points: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(&bad) = dims.iter().find(|&&n| n == 0) {
            return Err(Error::NonPositiveFactor(bad.to_string()));
        }
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    got: p.len(),
                });
            }
            if p.iter().zip(&dims).any(|(&x, &n)| x < 0 || x as u64 >= n) {
                return Err(Error::OutsideBox {
                    point: fmt_point(&p),
                    dims: fmt_dims(&dims),
                });
            }
            out.push(p.into_iter().map(|x| x as u64).collect());
        }
        Self::from_parts(dims, 1, out)
    }

    pub fn from_coords<R: AsRef<[i64]>>(dims: Vec<u64>, rows: &[R]) -> Result<Self> {
        Self::new(dims, rows.iter().map(|r| r.as_ref().to_vec()).collect())
    }

    /// The whole box `∏ [0, n_i)`.
    pub fn whole_box(dims: Vec<u64>) -> Result<Self> {
        let spec = GroupSpec::new(dims.clone())?;
        let points = spec.enumerate()?.map(|g| g.coords().to_vec()).collect();
        Self::from_parts(dims, 1, points)
    }

    fn from_parts(dims: Vec<u64>, lift: u64, mut points: Vec<Vec<u64>>) -> Result<Self> {
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(fmt_point(&w[0])));
        }
        Ok(Self { dims, lift, points })
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// The lifting factor `k` (1 for base sets).
    pub fn lift_factor(&self) -> u64 {
        self.lift
    }

    pub fn is_base(&self) -> bool {
        self.lift == 1
    }

    /// `k n_i` for each axis: the box the points live in.
    pub fn extent(&self) -> Vec<u64> {
        self.dims.iter().map(|&n| n * self.lift).collect()
    }

    /// Sorted, duplicate-free points.
    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The group `∏ Z_{k n_i}` of the declared box.
    pub fn box_group(&self) -> Result<GroupSpec> {
        GroupSpec::new(self.extent())
    }
}

impl fmt::Display for BoxedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if p.len() == 1 {
                write!(f, "{}", p[0])?;
            } else {
                f.write_str(&fmt_point(p))?;
            }
        }
        f.write_str("}")
    }
}

fn fmt_point<T: fmt::Display>(p: &[T]) -> String {
    let inner: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

fn fmt_dims(dims: &[u64]) -> String {
    let inner: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    inner.join("x")
}

/// `A(k)`, with `|A(k)| = |A| k^d`.
pub fn lift(a: &BoxedSet, k: u64) -> Result<BoxedSet> {
    if k == 0 {
        return Err(Error::LiftFactor {
            k,
            reason: "must be positive".into(),
        });
    }
    if !a.is_base() {
        return Err(Error::NotBaseBoxed(a.lift));
    }
    let d = a.dim() as u32;
    let size = k
        .checked_pow(d)
        .and_then(|c| c.checked_mul(a.len() as u64))
        .filter(|&s| s <= DEFAULT_ENUMERATION_BUDGET)
        .ok_or_else(|| Error::SizeLimit {
            what: format!("lifted set with k = {k}"),
            limit: DEFAULT_ENUMERATION_BUDGET,
        })?;
    let offsets = GroupSpec::new(vec![k; a.dim()])?;
    let mut points = Vec::with_capacity(size as usize);
    for p in &a.points {
        for j in offsets.enumerate()? {
            points.push(
                p.iter()
                    .zip(j.coords())
                    .zip(&a.dims)
                    .map(|((&x, &t), &n)| x + t * n)
                    .collect(),
            );
        }
    }
    let lifted = BoxedSet::from_parts(a.dims.clone(), k, points)
        .expect("translates of a boxed set by multiples of the box are disjoint");
    assert_eq!(lifted.len() as u64, size);
    Ok(lifted)
}

/// `A x B ⊂ Z^{d_A + d_B}`; both factors must carry the same lifting factor.
pub fn product(a: &BoxedSet, b: &BoxedSet) -> Result<BoxedSet> {
    if a.lift != b.lift {
        return Err(Error::LiftFactor {
            k: b.lift,
            reason: format!("factors lifted by {} and {}", a.lift, b.lift),
        });
    }
    let size = (a.len() as u64).saturating_mul(b.len() as u64);
    if size > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::SizeLimit {
            what: "product set".into(),
            limit: DEFAULT_ENUMERATION_BUDGET,
        });
    }
    let mut dims = a.dims.clone();
    dims.extend(&b.dims);
    let mut points = Vec::with_capacity(size as usize);
    for x in &a.points {
        for y in &b.points {
            let mut p = x.clone();
            p.extend(y);
            points.push(p);
        }
    }
    // lexicographic order of concatenations is already sorted
    Ok(BoxedSet {
        dims,
        lift: a.lift,
        points,
    })
}

/// Whether `A(k) x B(k) = (A x B)(k)`.
pub fn product_lift_identity(a: &BoxedSet, b: &BoxedSet, k: u64) -> Result<bool> {
    let left = product(&lift(a, k)?, &lift(b, k)?)?;
    let right = lift(&product(a, b)?, k)?;
    Ok(left == right)
}

/// Reads the points of `a` as elements of `∏ Z_{m_i}`; coordinates must be
/// below their modulus so that no two points collapse.
pub fn to_quotient(a: &BoxedSet, moduli: &[u64]) -> Result<PointSet> {
    if moduli.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: moduli.len(),
        });
    }
    let spec = GroupSpec::new(moduli.to_vec())?;
    for p in &a.points {
        for (axis, (&x, &m)) in p.iter().zip(moduli).enumerate() {
            if x >= m {
                return Err(Error::CoordinateOutOfRange {
                    axis,
                    value: x,
                    modulus: m,
                });
            }
        }
    }
    Ok(PointSet::from_sorted_unchecked(
        spec,
        a.points.iter().map(|p| GroupElement(p.clone())).collect(),
    ))
}

/// Looks for a spectrum of the image of `c` in `∏ Z_{m_i}`. A certificate
/// `Λ` gives the rational spectrum `{λ / m}` of `c`.
pub fn spectral_in_quotient(
    c: &BoxedSet,
    moduli: &[u64],
    config: &SearchConfig,
) -> Result<SearchOutcome<SpectrumCertificate>> {
    spectral::find_spectrum(&to_quotient(c, moduli)?, config)
}

/// `{k λ + j : λ ∈ Λ, j ∈ [0, k)^d}` in `∏ Z_{k n_i}`, where `Λ ⊂ ∏ Z_{n_i}`.
/// If `(C, Λ)` is spectral in `∏ Z_{n_i}` then `(C(k), result)` is spectral.
pub fn lift_spectrum(spectrum: &PointSet, k: u64) -> Result<PointSet> {
    let base = spectrum.ambient();
    let moduli: Vec<u64> = base.orders().iter().map(|&n| n * k).collect();
    let spec = GroupSpec::new(moduli)?;
    let offsets = GroupSpec::new(vec![k; base.dim()])?;
    let size = (spectrum.len() as u64).saturating_mul(offsets.order());
    if size > DEFAULT_ENUMERATION_BUDGET {
        return Err(Error::SizeLimit {
            what: "lifted spectrum".into(),
            limit: DEFAULT_ENUMERATION_BUDGET,
        });
    }
    let mut points = Vec::with_capacity(size as usize);
    for l in spectrum {
        for j in offsets.enumerate()? {
            points.push(GroupElement(
                l.coords()
                    .iter()
                    .zip(j.coords())
                    .map(|(&x, &t)| k * x + t)
                    .collect(),
            ));
        }
    }
    PointSet::new(spec, points)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub max_lift: u64,
    /// Cap on spectrum pairs for the direct check of the lifted pair.
    pub max_pairs: u64,
    /// Random pairs checked when the direct check is over the cap.
    pub spot_checks: u64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            max_lift: DEFAULT_MAX_LIFT,
            max_pairs: 10_000_000,
            spot_checks: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepStatus::Pass => "pass",
            StepStatus::Fail => "fail",
            StepStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineStep {
    pub name: &'static str,
    pub status: StepStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub dims: Vec<u64>,
    pub k: u64,
    /// Moduli `k n_i` of the quotient used for the lifted product.
    pub moduli: Vec<u64>,
    pub steps: Vec<PipelineStep>,
}

impl PipelineReport {
    /// No step failed.
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.status != StepStatus::Fail)
    }

    pub fn render(&self) -> String {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "pipeline dims={} k={} moduli={}\n",
            list(&self.dims),
            self.k,
            list(&self.moduli)
        );
        for s in &self.steps {
            out.push_str(&format!(
                "step={} status={} detail={}\n",
                s.name, s.status, s.detail
            ));
        }
        out
    }
}

const STEPS: [&str; 4] = [
    "tiling",
    "product-diagonal",
    "lift-identity",
    "lifted-spectral",
];

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Follows a tiling `A ⊕ B = ∏ Z_{n_i}` through the product-with-diagonal
/// criterion to the lifted product `(A x B)(k)` and its lifted diagonal
/// spectrum in `∏ Z_{k n_i}` (over both factors). Steps after a failure are
/// reported as skipped.
pub fn tiling_product_pipeline(
    a: &BoxedSet,
    b: &BoxedSet,
    k: u64,
    config: &PipelineConfig,
) -> Result<PipelineReport> {
    if !a.is_base() {
        return Err(Error::NotBaseBoxed(a.lift));
    }
    if !b.is_base() {
        return Err(Error::NotBaseBoxed(b.lift));
    }
    if a.dims != b.dims {
        return Err(Error::MismatchedAmbient {
            left: fmt_dims(&a.dims),
            right: fmt_dims(&b.dims),
        });
    }
    if k == 0 || k > config.max_lift {
        return Err(Error::LiftFactor {
            k,
            reason: format!("must be in 1..={}", config.max_lift),
        });
    }
    let g = GroupSpec::new(a.dims.clone())?;
    if (a.len() as u128) * (b.len() as u128) != g.order() as u128 {
        return Err(Error::Cardinality(format!(
            "|A|*|B| = {}*{} but the box has {} points",
            a.len(),
            b.len(),
            g.order()
        )));
    }
    let mut moduli: Vec<u64> = a.dims.iter().map(|&n| n * k).collect();
    moduli.extend_from_within(..);
    let mut report = PipelineReport {
        dims: a.dims.clone(),
        k,
        moduli: moduli.clone(),
        steps: Vec::new(),
    };
    let push = |report: &mut PipelineReport, status, detail: String| {
        let name = STEPS[report.steps.len()];
        report.steps.push(PipelineStep {
            name,
            status,
            detail,
        });
        status == StepStatus::Pass
    };

    let (qa, qb) = (to_quotient(a, &a.dims)?, to_quotient(b, &b.dims)?);
    let tiled = tiling::verify_tiling(&qa, &qb)?;
    let detail = match tiled.failure() {
        None => format!("group={g} |A|={} |B|={}", a.len(), b.len()),
        Some(f) => f.to_string(),
    };
    let mut ok = push(&mut report, status_of(tiled.holds()), detail);

    let mut spectrum = None;
    if ok {
        let pair = DiagonalPair::new(&g)?;
        let r = pair.product_with_diagonal(&qa, &qb)?;
        let detail = format!(
            "tiling={} product-spectral={} agree={}",
            yes(r.tiling),
            yes(r.product_spectral),
            yes(r.agree)
        );
        ok = push(
            &mut report,
            status_of(r.product_spectral && r.agree),
            detail,
        );
        spectrum = Some(pair.diagonal().clone());
    }

    let base_product = product(a, b)?;
    if ok {
        ok = match product_lift_identity(a, b, k) {
            Ok(eq) => {
                let detail = format!(
                    "|(AxB)(k)|={}",
                    base_product.len() as u64 * k.pow(2 * a.dim() as u32)
                );
                push(&mut report, status_of(eq), detail)
            }
            Err(e @ Error::SizeLimit { .. }) => {
                push(&mut report, StepStatus::Skipped, e.to_string());
                false
            }
            Err(e) => return Err(e),
        };
    }

    if ok {
        let spectrum = spectrum.expect("set by the diagonal step");
        let (status, detail) = lifted_spectral_step(&base_product, &spectrum, k, &moduli, config)?;
        push(&mut report, status, detail);
    }
    while report.steps.len() < STEPS.len() {
        push(
            &mut report,
            StepStatus::Skipped,
            "earlier step did not pass".into(),
        );
    }
    Ok(report)
}

fn status_of(ok: bool) -> StepStatus {
    if ok {
        StepStatus::Pass
    } else {
        StepStatus::Fail
    }
}

fn lifted_spectral_step(
    base_product: &BoxedSet,
    spectrum: &PointSet,
    k: u64,
    moduli: &[u64],
    config: &PipelineConfig,
) -> Result<(StepStatus, String)> {
    let sized = |r: Result<PointSet>| match r {
        Err(e @ Error::SizeLimit { .. }) => Ok(Err(e.to_string())),
        other => other.map(Ok),
    };
    let lifted = match lift(base_product, k) {
        Err(e @ Error::SizeLimit { .. }) => return Ok((StepStatus::Skipped, e.to_string())),
        other => other?,
    };
    let set = to_quotient(&lifted, moduli)?;
    let lambda = match sized(lift_spectrum(spectrum, k))? {
        Ok(l) => l,
        Err(e) => return Ok((StepStatus::Skipped, e)),
    };
    let n = lambda.len() as u64;
    let pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
    if pairs <= config.max_pairs {
        let v = spectral::verify_spectral_pair(&set, &lambda)?;
        let detail = match v.failure() {
            None => format!("|S|={} |Lambda|={} pairs={pairs}", set.len(), n),
            Some(f) => f.to_string(),
        };
        return Ok((status_of(v.holds()), detail));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let spot = spectral::spot_check_pairs(&set, &lambda, config.spot_checks, &mut rng)?;
    let status = if spot.failures.is_empty() {
        StepStatus::Skipped
    } else {
        StepStatus::Fail
    };
    Ok((
        status,
        format!(
            "pairs={pairs} over budget={}; sampled={} failures={}",
            config.max_pairs,
            spot.sampled,
            spot.failures.len()
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(dims: &[u64], rows: &[&[i64]]) -> BoxedSet {
        BoxedSet::from_coords(dims.to_vec(), rows).unwrap()
    }

    fn line(dims: u64, xs: &[i64]) -> BoxedSet {
        BoxedSet::new(vec![dims], xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn boxed_set_invariants() {
        assert!(matches!(
            BoxedSet::from_coords(vec![2], &[[2]]),
            Err(Error::OutsideBox { .. })
        ));
        assert!(matches!(
            BoxedSet::from_coords(vec![2], &[[-1]]),
            Err(Error::OutsideBox { .. })
        ));
        assert!(matches!(
            BoxedSet::from_coords(vec![2], &[[1], [1]]),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            BoxedSet::from_coords(vec![2, 2], &[[1]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(line(4, &[3, 0]).to_string(), "{0,3}");
        assert_eq!(BoxedSet::whole_box(vec![2, 3]).unwrap().len(), 6);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(
            lift(&line(2, &[0, 1]), 3).unwrap().points(),
            line(6, &[0, 1, 2, 3, 4, 5]).points()
        );
        let a = boxed(&[3, 2], &[&[0, 1], &[2, 0]]);
        assert_eq!(lift(&a, 1).unwrap(), a);
        let l = lift(&boxed(&[2, 2], &[&[0, 0]]), 2).unwrap();
        assert_eq!(l.to_string(), "{(0,0),(0,2),(2,0),(2,2)}");
        assert_eq!(l.lift_factor(), 2);
        assert_eq!(l.extent(), vec![4, 4]);
        assert!(matches!(lift(&l, 2), Err(Error::NotBaseBoxed(2))));
        assert!(matches!(lift(&a, 0), Err(Error::LiftFactor { .. })));
    }

    #[test]
    fn product_identity_examples() {
        let (a, b) = (line(2, &[0]), line(2, &[0, 1]));
        let left = product(&lift(&a, 2).unwrap(), &lift(&b, 2).unwrap()).unwrap();
        assert_eq!(
            left.to_string(),
            "{(0,0),(0,1),(0,2),(0,3),(2,0),(2,1),(2,2),(2,3)}"
        );
        assert!(product_lift_identity(&a, &b, 2).unwrap());
        assert_eq!(
            lift(&product(&a, &b).unwrap(), 1).unwrap(),
            product(&a, &b).unwrap()
        );
    }

    #[test]
    fn quotient_examples() {
        let q = to_quotient(&line(2, &[0, 1]), &[2]).unwrap();
        assert_eq!(q, PointSet::cyclic(2, &[0, 1]).unwrap());
        assert!(matches!(
            to_quotient(&line(4, &[0, 3]), &[2]),
            Err(Error::CoordinateOutOfRange {
                value: 3,
                modulus: 2,
                ..
            })
        ));
        let l = lift(&boxed(&[2, 3], &[&[1, 2], &[0, 0]]), 3).unwrap();
        assert_eq!(to_quotient(&l, &l.extent()).unwrap().len(), 18);
    }

    #[test]
    fn spectral_in_quotient_examples() {
        let cfg = SearchConfig::default();
        let out = spectral_in_quotient(&line(2, &[0, 1]), &[4], &cfg).unwrap();
        assert_eq!(
            out.found().unwrap().spectrum,
            PointSet::cyclic(4, &[0, 2]).unwrap()
        );
        let out = spectral_in_quotient(&BoxedSet::whole_box(vec![5]).unwrap(), &[5], &cfg).unwrap();
        assert_eq!(out.found().unwrap().spectrum.len(), 5);
        let out = spectral_in_quotient(&line(4, &[0, 1, 2]), &[4], &cfg).unwrap();
        assert!(out.is_exhausted());
    }

    #[test]
    fn lifted_spectrum_is_spectral() {
        let s = PointSet::cyclic(4, &[0, 2]).unwrap();
        let l = lift_spectrum(&s, 2).unwrap();
        assert_eq!(l, PointSet::cyclic(8, &[0, 1, 4, 5]).unwrap());
        let c = lift(&line(4, &[0, 1]), 2).unwrap();
        let q = to_quotient(&c, &c.extent()).unwrap();
        assert!(spectral::verify_spectral_pair(&q, &l).unwrap().holds());
    }

    #[test]
    fn pipeline_examples() {
        let cfg = PipelineConfig::default();
        let r = tiling_product_pipeline(&line(4, &[0, 1]), &line(4, &[0, 2]), 2, &cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.moduli, vec![8, 8]);
        assert!(
            r.steps.iter().all(|s| s.status == StepStatus::Pass),
            "{}",
            r.render()
        );
        let text = r.render();
        assert!(text.starts_with("pipeline dims=4 k=2 moduli=8,8\n"));
        assert!(text.contains("step=lifted-spectral status=pass"));

        let r = tiling_product_pipeline(&line(4, &[0, 2]), &line(4, &[0, 2]), 2, &cfg).unwrap();
        assert!(!r.passed());
        assert_eq!(r.steps[0].status, StepStatus::Fail);
        assert_eq!(r.steps[0].detail, "g=1 count=0");
        assert!(r.steps[1..].iter().all(|s| s.status == StepStatus::Skipped));

        for k in 1..=3 {
            let whole = BoxedSet::whole_box(vec![2, 3]).unwrap();
            let zero = boxed(&[2, 3], &[&[0, 0]]);
            let r = tiling_product_pipeline(&whole, &zero, k, &cfg).unwrap();
            assert!(
                r.steps.iter().all(|s| s.status == StepStatus::Pass),
                "{}",
                r.render()
            );
        }
    }

    #[test]
    fn pipeline_preconditions() {
        let cfg = PipelineConfig::default();
        let (a, b) = (line(4, &[0, 1]), line(4, &[0, 2]));
        assert!(matches!(
            tiling_product_pipeline(&a, &b, 5, &cfg),
            Err(Error::LiftFactor { k: 5, .. })
        ));
        assert!(matches!(
            tiling_product_pipeline(&a, &line(4, &[0]), 2, &cfg),
            Err(Error::Cardinality(_))
        ));
        assert!(matches!(
            tiling_product_pipeline(&a, &line(2, &[0]), 2, &cfg),
            Err(Error::MismatchedAmbient { .. })
        ));
    }
}
