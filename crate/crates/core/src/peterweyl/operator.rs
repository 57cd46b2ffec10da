//! Banded operators on truncated spaces and the generator action.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::qnum::{qnumber, HalfInt, QParam};

use super::coeff::{reg, RegCoeff};
use super::space::{BasisIndex, SpaceKind, StateVector, TruncatedSpace};

/// A real sparse operator between truncated spaces whose entries move the
/// spin label by at most `interior_margin`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedOperator {
    domain: TruncatedSpace,
    codomain: TruncatedSpace,
    mat: SparseMat,
    interior_margin: HalfInt,
}

impl BandedOperator {
    /// Builds an operator from `(target, source, value)` triples; targets
    /// outside the codomain are dropped (truncation).
    pub fn from_entries(
        domain: TruncatedSpace,
        codomain: TruncatedSpace,
        interior_margin: HalfInt,
        entries: impl IntoIterator<Item = (BasisIndex, BasisIndex, f64)>,
    ) -> Result<Self> {
        let mut mat = SparseMat::zeros(codomain.dim(), domain.dim());
        for (tgt, src, v) in entries {
            let col = domain.index_of(&src).ok_or_else(|| Error::NotInSpace(format!("{src} not in {domain}")))?;
            if (tgt.l - src.l).abs() > interior_margin {
                return Err(Error::Domain(format!("entry {src} -> {tgt} exceeds band width {interior_margin}")));
            }
            if let Some(row) = codomain.index_of(&tgt) {
                mat.add_entry(row, col, v);
            }
        }
        Ok(BandedOperator { domain, codomain, mat, interior_margin })
    }

    pub(crate) fn from_matrix(
        domain: TruncatedSpace,
        codomain: TruncatedSpace,
        interior_margin: HalfInt,
        mat: SparseMat,
    ) -> Self {
        debug_assert_eq!(mat.nrows(), codomain.dim());
        debug_assert_eq!(mat.ncols(), domain.dim());
        BandedOperator { domain, codomain, mat, interior_margin }
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        BandedOperator {
            domain: space,
            codomain: space,
            mat: SparseMat::identity(space.dim()),
            interior_margin: HalfInt::ZERO,
        }
    }

    pub fn domain(&self) -> &TruncatedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &TruncatedSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.mat
    }

    pub fn interior_margin(&self) -> HalfInt {
        self.interior_margin
    }

    /// Matrix entry `⟨tgt, T src⟩`.
    pub fn entry(&self, tgt: &BasisIndex, src: &BasisIndex) -> f64 {
        match (self.codomain.index_of(tgt), self.domain.index_of(src)) {
            (Some(r), Some(c)) => self.mat.get(r, c),
            _ => 0.0,
        }
    }

    /// Distinct doubled shifts `(Δl, Δi, Δj)` among the stored nonzero entries.
    pub fn shifts(&self) -> BTreeSet<(i64, i64, i64)> {
        let dom = self.domain.basis();
        let cod = self.codomain.basis();
        let mut out = BTreeSet::new();
        for (c, src) in dom.iter().enumerate() {
            for &(r, v) in self.mat.column(c) {
                if v != 0.0 {
                    let t = cod[r];
                    out.insert((t.l.twice() - src.l.twice(), t.i.twice() - src.i.twice(), t.j.twice() - src.j.twice()));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if *v.space() != self.domain {
            return Err(Error::SpaceMismatch(format!("{} vs {}", v.space(), self.domain)));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.codomain.dim()];
        for (c, a) in v.amplitudes().iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for &(r, w) in self.mat.column(c) {
                out[r] += a * w;
            }
        }
        StateVector::from_amplitudes(self.codomain, out)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &BandedOperator) -> Result<BandedOperator> {
        if rhs.codomain != self.domain {
            return Err(Error::SpaceMismatch(format!("cannot compose: {} vs {}", rhs.codomain, self.domain)));
        }
        Ok(BandedOperator {
            domain: rhs.domain,
            codomain: self.codomain,
            mat: self.mat.matmul(&rhs.mat),
            interior_margin: self.interior_margin + rhs.interior_margin,
        })
    }

    /// Transpose (the adjoint, all entries being real).
    pub fn adjoint(&self) -> BandedOperator {
        BandedOperator {
            domain: self.codomain,
            codomain: self.domain,
            mat: self.mat.transpose(),
            interior_margin: self.interior_margin,
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &BandedOperator) -> Result<BandedOperator> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch(format!(
                "{} -> {} vs {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        Ok(BandedOperator {
            domain: self.domain,
            codomain: self.codomain,
            mat: self.mat.axpy(s, &other.mat),
            interior_margin: self.interior_margin.max(other.interior_margin),
        })
    }

    pub fn scale(&self, s: f64) -> BandedOperator {
        BandedOperator { mat: self.mat.scale(s), ..self.clone() }
    }

    /// Domain positions `l ≤ lmax - interior_margin`, where truncation is exact.
    pub fn interior_columns(&self) -> Vec<usize> {
        let cut = self.domain.lmax() - self.interior_margin;
        self.domain.positions_where(|l| l <= cut)
    }

    /// Operator norm on the interior.
    pub fn interior_norm(&self) -> f64 {
        self.mat.restrict_columns(&self.interior_columns()).op_norm()
    }

    /// Operator norm of `self - other` on the common interior.
    pub fn interior_residual(&self, other: &BandedOperator) -> Result<f64> {
        Ok(self.add_scaled(-1.0, other)?.interior_norm())
    }

    /// Operator norm of the restriction to domain vectors whose spin
    /// satisfies `pred` (intersected with the interior).
    pub fn restricted_norm(&self, pred: impl Fn(HalfInt) -> bool) -> f64 {
        let cut = self.domain.lmax() - self.interior_margin;
        let cols = self.domain.positions_where(|l| l <= cut && pred(l));
        self.mat.restrict_columns(&cols).op_norm()
    }
}

/// Generators of `C(SU_q(2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Alpha,
    AlphaStar,
    Gamma,
    GammaStar,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Alpha, Generator::AlphaStar, Generator::Gamma, Generator::GammaStar];

    pub fn star(self) -> Generator {
        match self {
            Generator::Alpha => Generator::AlphaStar,
            Generator::AlphaStar => Generator::Alpha,
            Generator::Gamma => Generator::GammaStar,
            Generator::GammaStar => Generator::Gamma,
        }
    }

    /// Change of the bundle winding `k = 2j`.
    pub fn dk(self) -> i64 {
        match self {
            Generator::Alpha | Generator::Gamma => -1,
            Generator::AlphaStar | Generator::GammaStar => 1,
        }
    }

    /// The two terms `(doubled target shift, coefficient)` acting on the
    /// source `(2l, 2i, 2j)`.
    fn terms(self, q: QParam, l: i64, i: i64, j: i64) -> [((i64, i64, i64), f64); 2] {
        use RegCoeff::*;
        match self {
            Generator::Alpha => [((1, -1, -1), reg(APlus, q, l, i, j)), ((-1, -1, -1), reg(AMinus, q, l, i, j))],
            Generator::Gamma => [((1, 1, -1), reg(CPlus, q, l, i, j)), ((-1, 1, -1), reg(CMinus, q, l, i, j))],
            Generator::AlphaStar => {
                [((-1, 1, 1), reg(APlus, q, l - 1, i + 1, j + 1)), ((1, 1, 1), reg(AMinus, q, l + 1, i + 1, j + 1))]
            }
            Generator::GammaStar => {
                [((-1, -1, 1), reg(CPlus, q, l - 1, i - 1, j + 1)), ((1, -1, 1), reg(CMinus, q, l + 1, i - 1, j + 1))]
            }
        }
    }
}

/// The generator `gen` acting on `space` by the regular representation.
///
/// For a bundle space the codomain is the neighbouring bundle
/// (`α, γ` lower `j` by 1/2, `α*, γ*` raise it).
pub fn generator_op(gen: Generator, q: QParam, space: TruncatedSpace) -> Result<BandedOperator> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    let codomain = space.shift_k(gen.dk())?;
    let mut mat = SparseMat::zeros(codomain.dim(), space.dim());
    for (col, src) in space.basis().iter().enumerate() {
        let (l, i, j) = (src.l.twice(), src.i.twice(), src.j.twice());
        for ((dl, di, dj), v) in gen.terms(q, l, i, j) {
            if v == 0.0 {
                continue;
            }
            if let Some(row) = codomain.position(l + dl, i + di, j + dj) {
                mat.add_entry(row, col, v);
            }
        }
    }
    Ok(BandedOperator::from_matrix(space, codomain, HalfInt::HALF, mat))
}

/// Product of generators `word[0] · word[1] · …` acting on `space`
/// (the rightmost factor acts first).
pub fn word_op(word: &[Generator], q: QParam, space: TruncatedSpace) -> Result<BandedOperator> {
    let mut acc = BandedOperator::identity(space);
    for &g in word.iter().rev() {
        let op = generator_op(g, q, *acc.codomain())?;
        acc = op.compose(&acc)?;
    }
    Ok(acc)
}

/// The involution `e^(l)_{i,j} ↦ (-1)^{2l+i+j} q^{i+j} e^(l)_{-i,-j}`,
/// extended antilinearly.
pub fn involution(v: &StateVector, q: QParam) -> Result<StateVector> {
    let space = *v.space();
    let target = match space.kind() {
        SpaceKind::Full => space,
        SpaceKind::Bundle(k) => TruncatedSpace::bundle(-k, space.lmax())?,
    };
    let mut out = StateVector::zeros(target);
    for (idx, a) in v.support() {
        let (l, i, j) = (idx.l.twice(), idx.i.twice(), idx.j.twice());
        let sign_exp = (2 * l + i + j) / 2;
        let sign = if sign_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let factor = sign * q.pow((i + j) / 2);
        let img = BasisIndex { l: idx.l, i: -idx.i, j: -idx.j };
        out.set(&img, a.conj() * factor)?;
    }
    Ok(out)
}

/// The Haar state `φ(word) = ⟨e^(0)_{0,0}, word · e^(0)_{0,0}⟩`.
///
/// Words longer than `2·lmax` are refused: their orbit of the cyclic vector
/// would leave the truncation.
pub fn haar_state(word: &[Generator], q: QParam, lmax: HalfInt) -> Result<Complex64> {
    if word.len() as i64 > lmax.twice() {
        return Err(Error::Truncation(format!(
            "word of length {} needs lmax >= {}, got {lmax}",
            word.len(),
            HalfInt::from_twice(word.len() as i64)
        )));
    }
    let space = TruncatedSpace::full(lmax)?;
    let unit = StateVector::basis_vector(space, &BasisIndex::unit())?;
    let mut v = unit.clone();
    for &g in word.iter().rev() {
        v = generator_op(g, q, space)?.apply(&v)?;
    }
    unit.inner(&v)
}

/// Restriction of `v` to the spin-`l` summand.
pub fn spectral_project(v: &StateVector, l: HalfInt) -> StateVector {
    let basis = v.space().basis();
    let amps =
        v.amplitudes().iter().zip(&basis).map(|(a, b)| if b.l == l { *a } else { Complex64::new(0.0, 0.0) }).collect();
    StateVector::from_amplitudes(*v.space(), amps).expect("same space")
}

/// Quantum dimension `[2l + 1]` of the spin-`l` representation.
pub fn quantum_dimension(q: QParam, l: HalfInt) -> Result<f64> {
    if l.twice() < 0 {
        return Err(Error::Domain(format!("negative spin {l}")));
    }
    qnumber(q, l.twice() + 1)
}
