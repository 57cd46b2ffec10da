//! Basis labels `e^(l)_{i,j}`, truncated spaces and state vectors.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::HalfInt;

/// Label of the orthonormal basis vector `e^(l)_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub l: HalfInt,
    pub i: HalfInt,
    pub j: HalfInt,
}

impl BasisIndex {
    /// Validated constructor: `|i|, |j| ≤ l` and `l - i, l - j ∈ ℤ`.
    pub fn new(l: HalfInt, i: HalfInt, j: HalfInt) -> Result<Self> {
        if !parity_ok(l, i, j) {
            return Err(Error::Parity { l, i, j });
        }
        if !in_range(l.twice(), i.twice(), j.twice()) {
            return Err(Error::NotInSpace(format!("|i| or |j| exceeds l in ({l}, {i}, {j})")));
        }
        Ok(BasisIndex { l, i, j })
    }

    pub fn from_twice(l: i64, i: i64, j: i64) -> Result<Self> {
        Self::new(HalfInt::from_twice(l), HalfInt::from_twice(i), HalfInt::from_twice(j))
    }

    /// The unit `e^(0)_{0,0}`.
    pub const fn unit() -> Self {
        BasisIndex { l: HalfInt::ZERO, i: HalfInt::ZERO, j: HalfInt::ZERO }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^({})_{{{},{}}}", self.l, self.i, self.j)
    }
}

pub(crate) fn parity_ok(l: HalfInt, i: HalfInt, j: HalfInt) -> bool {
    l.twice() >= 0 && l.same_parity(i) && l.same_parity(j)
}

/// Admissibility in doubled coordinates.
pub(crate) fn in_range(l2: i64, i2: i64, j2: i64) -> bool {
    l2 >= 0 && i2.abs() <= l2 && j2.abs() <= l2 && (l2 - i2) % 2 == 0 && (l2 - j2) % 2 == 0
}

/// Which summands of `L²(SU_q(2))` a truncated space keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Every column weight `j`.
    Full,
    /// The line bundle `L²(E_k)`: column weight fixed at `j = k/2`.
    Bundle(i64),
}

/// All admissible basis vectors of a given kind with `l ≤ lmax`.
///
/// Basis order is by `l`, then `i`, then `j` (ascending); indices are
/// computed in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSpace {
    kind: SpaceKind,
    lmax: HalfInt,
}

impl TruncatedSpace {
    pub fn full(lmax: HalfInt) -> Result<Self> {
        if lmax.twice() < 0 {
            return Err(Error::Truncation(format!("lmax = {lmax} is negative")));
        }
        Ok(TruncatedSpace { kind: SpaceKind::Full, lmax })
    }

    pub fn bundle(k: i64, lmax: HalfInt) -> Result<Self> {
        if lmax.twice() < k.abs() {
            return Err(Error::Truncation(format!("L²(E_{k}) is empty below lmax = {lmax}")));
        }
        Ok(TruncatedSpace { kind: SpaceKind::Bundle(k), lmax })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// The bundle winding number, `None` for the full space.
    pub fn k(&self) -> Option<i64> {
        match self.kind {
            SpaceKind::Full => None,
            SpaceKind::Bundle(k) => Some(k),
        }
    }

    /// The requested cutoff (the largest admissible `l` may be `lmax - 1/2`).
    pub fn lmax(&self) -> HalfInt {
        self.lmax
    }

    /// Smallest spin present.
    pub fn lmin(&self) -> HalfInt {
        match self.kind {
            SpaceKind::Full => HalfInt::ZERO,
            SpaceKind::Bundle(k) => HalfInt::from_twice(k.abs()),
        }
    }

    /// Largest spin present.
    pub fn ltop(&self) -> HalfInt {
        match self.kind {
            SpaceKind::Full => self.lmax,
            SpaceKind::Bundle(k) => {
                let t = self.lmax.twice();
                HalfInt::from_twice(if (t - k) % 2 == 0 { t } else { t - 1 })
            }
        }
    }

    /// The space obtained by shifting the bundle winding by `dk`.
    pub fn shift_k(&self, dk: i64) -> Result<Self> {
        match self.kind {
            SpaceKind::Full => Ok(*self),
            SpaceKind::Bundle(k) => Self::bundle(k + dk, self.lmax),
        }
    }

    /// Spins present, ascending.
    pub fn spins(&self) -> impl Iterator<Item = HalfInt> {
        let step = match self.kind {
            SpaceKind::Full => 1,
            SpaceKind::Bundle(_) => 2,
        };
        (self.lmin().twice()..=self.ltop().twice()).step_by(step).map(HalfInt::from_twice)
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            SpaceKind::Full => full_offset(self.lmax.twice() + 1),
            SpaceKind::Bundle(k) => {
                let a = k.abs();
                let m = (self.ltop().twice() - a) / 2 + 1;
                bundle_offset(a, m)
            }
        }
    }

    pub fn contains(&self, idx: &BasisIndex) -> bool {
        self.position(idx.l.twice(), idx.i.twice(), idx.j.twice()).is_some()
    }

    pub fn index_of(&self, idx: &BasisIndex) -> Option<usize> {
        self.position(idx.l.twice(), idx.i.twice(), idx.j.twice())
    }

    /// Position of the doubled coordinates `(2l, 2i, 2j)`, if present.
    pub(crate) fn position(&self, l2: i64, i2: i64, j2: i64) -> Option<usize> {
        if !in_range(l2, i2, j2) || l2 > self.lmax.twice() {
            return None;
        }
        match self.kind {
            SpaceKind::Full => {
                let within = ((i2 + l2) / 2) * (l2 + 1) + (j2 + l2) / 2;
                Some(full_offset(l2) + within as usize)
            }
            SpaceKind::Bundle(k) => {
                let a = k.abs();
                if j2 != k || l2 < a {
                    return None;
                }
                let m = (l2 - a) / 2;
                Some(bundle_offset(a, m) + ((i2 + l2) / 2) as usize)
            }
        }
    }

    /// Basis vector at a position.
    pub fn index_at(&self, pos: usize) -> Option<BasisIndex> {
        if pos >= self.dim() {
            return None;
        }
        let mut rest = pos;
        for l in self.spins() {
            let l2 = l.twice();
            let block = match self.kind {
                SpaceKind::Full => ((l2 + 1) * (l2 + 1)) as usize,
                SpaceKind::Bundle(_) => (l2 + 1) as usize,
            };
            if rest < block {
                let (i2, j2) = match self.kind {
                    SpaceKind::Full => {
                        let w = (l2 + 1) as usize;
                        (2 * (rest / w) as i64 - l2, 2 * (rest % w) as i64 - l2)
                    }
                    SpaceKind::Bundle(k) => (2 * rest as i64 - l2, k),
                };
                return Some(BasisIndex { l, i: HalfInt::from_twice(i2), j: HalfInt::from_twice(j2) });
            }
            rest -= block;
        }
        None
    }

    /// All basis vectors in storage order.
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for l in self.spins() {
            let l2 = l.twice();
            let js: Vec<i64> = match self.kind {
                SpaceKind::Full => (-l2..=l2).step_by(2).collect(),
                SpaceKind::Bundle(k) => vec![k],
            };
            for i2 in (-l2..=l2).step_by(2) {
                for &j2 in &js {
                    out.push(BasisIndex { l, i: HalfInt::from_twice(i2), j: HalfInt::from_twice(j2) });
                }
            }
        }
        out
    }

    /// Positions of basis vectors whose spin satisfies `pred`.
    pub fn positions_where(&self, pred: impl Fn(HalfInt) -> bool) -> Vec<usize> {
        self.basis().iter().enumerate().filter(|(_, b)| pred(b.l)).map(|(n, _)| n).collect()
    }
}

impl fmt::Display for TruncatedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Full => write!(f, "L²(SU_q(2))[l ≤ {}]", self.lmax),
            SpaceKind::Bundle(k) => write!(f, "L²(E_{k})[l ≤ {}]", self.lmax),
        }
    }
}

/// `Σ_{n=1}^{t} n²`: number of full-space vectors with `2l < t`.
fn full_offset(t: i64) -> usize {
    (t * (t + 1) * (2 * t + 1) / 6) as usize
}

/// Number of bundle vectors with `2l < a + 2m`.
fn bundle_offset(a: i64, m: i64) -> usize {
    (m * (a + 1) + m * (m - 1)) as usize
}

/// A vector in a truncated space, stored densely in basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: TruncatedSpace,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(space: TruncatedSpace) -> Self {
        StateVector { space, amps: vec![Complex64::new(0.0, 0.0); space.dim()] }
    }

    pub fn basis_vector(space: TruncatedSpace, idx: &BasisIndex) -> Result<Self> {
        let pos = space.index_of(idx).ok_or_else(|| Error::NotInSpace(format!("{idx} not in {space}")))?;
        let mut v = Self::zeros(space);
        v.amps[pos] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(space: TruncatedSpace, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::SpaceMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amps.len(),
                space.dim()
            )));
        }
        Ok(StateVector { space, amps })
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn get(&self, idx: &BasisIndex) -> Complex64 {
        self.space.index_of(idx).map(|p| self.amps[p]).unwrap_or_default()
    }

    pub fn set(&mut self, idx: &BasisIndex, value: Complex64) -> Result<()> {
        let pos = self.space.index_of(idx).ok_or_else(|| Error::NotInSpace(format!("{idx} not in {}", self.space)))?;
        self.amps[pos] = value;
        Ok(())
    }

    /// Nonzero amplitudes with their labels.
    pub fn support(&self) -> Vec<(BasisIndex, Complex64)> {
        self.space.basis().into_iter().zip(self.amps.iter().copied()).filter(|(_, a)| a.norm_sqr() > 0.0).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self, other⟩`, antilinear in the first slot.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_space(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &StateVector) -> Result<StateVector> {
        self.same_space(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + s * b).collect();
        Ok(StateVector { space: self.space, amps })
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.same_space(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    fn same_space(&self, other: &StateVector) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!("{} vs {}", self.space, other.space)));
        }
        Ok(())
    }
}
