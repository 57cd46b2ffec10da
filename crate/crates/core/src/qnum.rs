//! Deformation-parameter arithmetic: exact half-integers, the parameter `q`,
//! q-numbers, the interpolation scalar `m(t, l)` and guarded square roots.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value, so that spin labels and weights
/// are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `x - y ∈ ℤ`.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    /// Integer value, if this half-integer is integral.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Multiply by an integer.
    pub fn times(self, k: i64) -> Self {
        HalfInt { twice: self.twice * k }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"n"` or `"n/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<i64>().map(HalfInt::from_twice).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The deformation parameter `q ∈ [-1, 1] \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam {
    q: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q == 0.0 || q.abs() > 1.0 {
            return Err(Error::InvalidQ(q));
        }
        Ok(QParam { q })
    }

    /// Like [`QParam::new`] but additionally requires `|q| < 1`, as every
    /// operator table does.
    pub fn strict(q: f64) -> Result<Self> {
        let p = Self::new(q)?;
        if q.abs() >= 1.0 {
            return Err(Error::InvalidQ(q));
        }
        Ok(p)
    }

    pub fn value(self) -> f64 {
        self.q
    }

    pub fn abs_q(self) -> f64 {
        self.q.abs()
    }

    pub fn sign(self) -> f64 {
        self.q.signum()
    }

    pub fn is_strict(self) -> bool {
        self.q.abs() < 1.0
    }

    /// `q^e` for an integer exponent.
    pub fn pow(self, e: i64) -> f64 {
        self.q.powi(e as i32)
    }

    /// `q^e` for a half-integer exponent that is known to be integral.
    ///
    /// Every exponent in the coefficient tables is integral once the
    /// parity constraints on `(l, i, j)` hold.
    pub fn pow_h(self, e: HalfInt) -> f64 {
        debug_assert!(e.is_integer(), "non-integral exponent {e}");
        self.pow(e.twice() / 2)
    }

    /// `|q|^s` for a real exponent.
    pub fn abs_pow(self, s: f64) -> f64 {
        self.q.abs().powf(s)
    }
}

/// Evaluation mode and residual thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub mode: PrecisionMode,
    pub tol_identity: f64,
    pub tol_decay: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    Standard,
    Extended,
}

impl Precision {
    pub fn new(tol_identity: f64, tol_decay: f64) -> Result<Self> {
        if !(tol_identity > 0.0) || !(tol_decay > 0.0) {
            return Err(Error::Usage(format!(
                "tolerances must be positive (tol_identity = {tol_identity}, tol_decay = {tol_decay})"
            )));
        }
        Ok(Precision { mode: PrecisionMode::Standard, tol_identity, tol_decay })
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { mode: PrecisionMode::Standard, tol_identity: 1e-10, tol_decay: 1e-8 }
    }
}

/// The q-number `[a] = (q^a - q^{-a}) / (q - q^{-1})`.
pub fn qnumber(q: QParam, a: i64) -> Result<f64> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    if a == 0 {
        return Ok(0.0);
    }
    if a < 0 {
        return qnumber(q, -a).map(|v| -v);
    }
    // q^{1-a} (1 - q^{2a}) / (1 - q^2) avoids the large q^{-a} term.
    let x = q.value();
    Ok(x.powi((1 - a) as i32) * (1.0 - x.powi(2 * a as i32)) / (1.0 - x * x))
}

/// The interpolation scalar
/// `m(t, l) = (q² - |q|^{2t} q^{2l}) / (|q|^{2t} - q^{2l+2})`.
///
/// Defined for `l ≥ 1`; `m(1, 0) = 1` is accepted as a convention.
pub fn m_scalar(q: QParam, t: f64, l: i64) -> Result<f64> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    if l <= 0 {
        if l == 0 && t == 1.0 {
            return Ok(1.0);
        }
        return Err(Error::Domain(format!("m(t, l) requires l >= 1, got l = {l}")));
    }
    let u = q.abs_pow(2.0 * t);
    let x = q.pow(2 * l);
    let p = q.pow(2);
    Ok((p - u * x) / (u - p * x))
}

/// `√max(x, 0)`, rejecting radicands below `-tol`.
pub fn guarded_sqrt(x: f64, tol: f64) -> Result<f64> {
    if x < -tol || x.is_nan() {
        return Err(Error::NegativeRadicand(x));
    }
    Ok(x.max(0.0).sqrt())
}

/// Internal radical: clamps rounding residue, never sees a genuinely
/// negative argument once the boundary convention has been applied.
pub(crate) fn rad(x: f64) -> f64 {
    debug_assert!(x > -1e-12, "negative radicand {x}");
    x.max(0.0).sqrt()
}
