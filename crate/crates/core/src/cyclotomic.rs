//! Exact sums of roots of unity.
//!
//! A sum `Σ c_k ζ_L^k` vanishes exactly when the integer polynomial
//! `Σ c_k x^k` is divisible by the cyclotomic polynomial `Φ_L`, the minimal
//! polynomial of `ζ_L`. Since `Φ_L` is monic the remainder is computed over
//! the integers with no rounding anywhere.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest root order accepted for cyclotomic polynomials and sums.
pub const MAX_ROOT_ORDER: u64 = 1_000_000;

/// Dense integer polynomial, ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = -1;
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .ok_or_else(coefficient_overflow)?;
            }
        }
        Ok(Self::new(out))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            let shift = top - dd;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = c
                    .checked_mul(d)
                    .and_then(|p| rem[shift + j].checked_sub(p))
                    .ok_or_else(coefficient_overflow)?;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; fails if the division leaves a remainder.
    pub fn exact_div_monic(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem_monic(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn coefficient_overflow() -> Error {
    Error::SizeLimit {
        what: "polynomial coefficient".into(),
        limit: i64::MAX as u64,
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

type PolyCache = RwLock<HashMap<u64, Arc<IntPolynomial>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial `Φ_n`, obtained by exact division of
/// `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`. Results are
/// memoized process-wide.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<IntPolynomial>> {
    if n == 0 {
        return Err(Error::NonPositiveFactor("0".into()));
    }
    if n > MAX_ROOT_ORDER {
        return Err(Error::BudgetExceeded {
            what: "cyclotomic order".into(),
            needed: n,
            limit: MAX_ROOT_ORDER,
        });
    }
    if let Some(p) = cache().read().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut poly = IntPolynomial::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d)?;
        poly = poly.exact_div_monic(&phi_d)?;
    }
    let poly = Arc::new(poly);
    cache()
        .write()
        .expect("cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    Ok(poly)
}

/// An integer combination `Σ counts[k] ζ_L^k` of `L`-th roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicSum {
    root_order: u64,
    counts: Vec<i64>,
}

impl CyclotomicSum {
    /// The empty sum at root order `root_order`.
    pub fn zero(root_order: u64) -> Result<Self> {
        check_root_order(root_order)?;
        Ok(Self {
            root_order,
            counts: vec![0; root_order as usize],
        })
    }

    pub fn from_counts(root_order: u64, counts: Vec<i64>) -> Result<Self> {
        check_root_order(root_order)?;
        if counts.len() as u64 != root_order {
            return Err(Error::DimensionMismatch {
                expected: root_order as usize,
                got: counts.len(),
            });
        }
        Ok(Self { root_order, counts })
    }

    /// `Σ ζ_L^{e}` over the given exponents (reduced mod `L`).
    pub fn from_exponents<I: IntoIterator<Item = u64>>(root_order: u64, exps: I) -> Result<Self> {
        let mut s = Self::zero(root_order)?;
        for e in exps {
            s.push(e);
        }
        Ok(s)
    }

    /// Adds one copy of `ζ_L^exp`.
    pub fn push(&mut self, exp: u64) {
        self.counts[(exp % self.root_order) as usize] += 1;
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, i64::checked_sub)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, i64::checked_add)
    }

    fn combine(&self, other: &Self, op: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        if self.root_order != other.root_order {
            return Err(Error::MismatchedAmbient {
                left: format!("roots of order {}", self.root_order),
                right: format!("roots of order {}", other.root_order),
            });
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| op(a, b).ok_or_else(coefficient_overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            root_order: self.root_order,
            counts,
        })
    }

    /// Multiplication by the unit `ζ_L^r`.
    pub fn rotate(&self, r: u64) -> Self {
        let mut counts = self.counts.clone();
        counts.rotate_right((r % self.root_order) as usize);
        Self {
            root_order: self.root_order,
            counts,
        }
    }

    /// Exact test for the sum being `0` as a complex number.
    pub fn is_zero(&self) -> bool {
        if self.counts.iter().all(|&c| c == 0) {
            return true;
        }
        let phi = cyclotomic_poly(self.root_order).expect("root order validated at construction");
        match remainder_is_zero_i128(&self.counts, phi.coeffs()) {
            Some(z) => z,
            None => remainder_is_zero_big(&self.counts, phi.coeffs()),
        }
    }

    /// Double-precision value of the sum.
    pub fn approx_complex(&self) -> Complex64 {
        let l = self.root_order as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let (s, co) = (TAU * k as f64 / l).sin_cos();
                Complex64::new(co, s) * c as f64
            })
            .sum()
    }
}

fn check_root_order(root_order: u64) -> Result<()> {
    if root_order == 0 {
        return Err(Error::NonPositiveFactor("0".into()));
    }
    if root_order > MAX_ROOT_ORDER {
        return Err(Error::BudgetExceeded {
            what: "root order".into(),
            needed: root_order,
            limit: MAX_ROOT_ORDER,
        });
    }
    Ok(())
}

/// Remainder of `f` modulo the monic `phi`, in checked `i128`.
/// `None` signals overflow.
fn remainder_is_zero_i128(f: &[i64], phi: &[i64]) -> Option<bool> {
    let dd = phi.len() - 1;
    let mut rem: Vec<i128> = f.iter().map(|&c| c as i128).collect();
    for top in (dd..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        let shift = top - dd;
        for (j, &d) in phi.iter().enumerate() {
            if d != 0 {
                rem[shift + j] = rem[shift + j].checked_sub(c.checked_mul(d as i128)?)?;
            }
        }
    }
    Some(rem.iter().take(dd).all(|&c| c == 0))
}

fn remainder_is_zero_big(f: &[i64], phi: &[i64]) -> bool {
    let dd = phi.len() - 1;
    let mut rem: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
    for top in (dd..rem.len()).rev() {
        if rem[top].is_zero() {
            continue;
        }
        let c = rem[top].clone();
        let shift = top - dd;
        for (j, &d) in phi.iter().enumerate() {
            if d != 0 {
                rem[shift + j] -= &c * BigInt::from(d);
            }
        }
    }
    debug_assert!(phi
        .last()
        .map(|&c| BigInt::from(c).is_one())
        .unwrap_or(false));
    rem.iter().take(dd).all(Zero::is_zero)
}
