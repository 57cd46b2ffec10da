//! Operator realizations of `π_t` on line bundles and of `ω_t` on `L²(E_0)`.

use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::peterweyl::{BandedOperator, Generator, GeneratorOps, TruncatedSpace};
use crate::qnum::{HalfInt, QParam};

use super::coeff::{rescaled, t_coeff, Family};

/// The coefficient family realizing each generator.
pub fn family_of(g: Generator) -> Family {
    match g {
        Generator::Alpha => Family::A,
        Generator::AlphaStar => Family::B,
        Generator::Gamma => Family::C,
        Generator::GammaStar => Family::D,
    }
}

fn band_op(space: TruncatedSpace, fam: Family, coeff: impl Fn(i64, i64, i64, i64) -> f64) -> BandedOperator {
    let mut mat = SparseMat::zeros(space.dim(), space.dim());
    for (col, src) in space.basis().iter().enumerate() {
        let (l, i, j) = (src.l.twice(), src.i.twice(), src.j.twice());
        for k in [-1i64, 0, 1] {
            if let Some(row) = space.position(l + 2 * k, i + fam.di(), j) {
                let v = coeff(k, l, i, j);
                if v != 0.0 {
                    mat.add_entry(row, col, v);
                }
            }
        }
    }
    BandedOperator::from_matrix(space, space, HalfInt::ONE, mat)
}

fn checked(q: QParam, t: f64) -> Result<()> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// `π_t(α), π_t(α*), π_t(γ), π_t(γ*)` on a line bundle, built from the
/// printed tables.
pub fn pi_t_ops(q: QParam, t: f64, space: TruncatedSpace) -> Result<GeneratorOps> {
    pi_t_ops_signed(q, t, space, 1.0)
}

/// Like [`pi_t_ops`], with the diagonal (`k = 0`) coefficients multiplied
/// by `diag_sign`.
pub(crate) fn pi_t_ops_signed(q: QParam, t: f64, space: TruncatedSpace, diag_sign: f64) -> Result<GeneratorOps> {
    checked(q, t)?;
    if space.k().is_none() {
        return Err(Error::SpaceMismatch(format!("π_t acts on line bundles, not {space}")));
    }
    let op = |g: Generator| {
        let fam = family_of(g);
        band_op(space, fam, |k, l, i, j| {
            let v = t_coeff(fam, k, q, t, l, i, j);
            if k == 0 {
                diag_sign * v
            } else {
                v
            }
        })
    };
    Ok(GeneratorOps {
        alpha: op(Generator::Alpha),
        alpha_star: op(Generator::AlphaStar),
        gamma: op(Generator::Gamma),
        gamma_star: op(Generator::GammaStar),
    })
}

/// Images of the generators under `ω_t` on `L²(E_0)`.
#[derive(Clone, Debug)]
pub struct OmegaOperatorSet {
    pub q: QParam,
    pub t: f64,
    pub ops: GeneratorOps,
}

/// `ω_t` on `L²(E_0)` truncated at `lmax`, with rescaled coefficients.
pub fn build_omega(q: QParam, t: f64, lmax: HalfInt) -> Result<OmegaOperatorSet> {
    checked(q, t)?;
    let space = TruncatedSpace::bundle(0, lmax)?;
    let op = |g: Generator| {
        let fam = family_of(g);
        band_op(space, fam, |k, l, i, _| rescaled(fam, k, q, t, l, i))
    };
    Ok(OmegaOperatorSet {
        q,
        t,
        ops: GeneratorOps {
            alpha: op(Generator::Alpha),
            alpha_star: op(Generator::AlphaStar),
            gamma: op(Generator::Gamma),
            gamma_star: op(Generator::GammaStar),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peterweyl::{BasisIndex, StateVector};

    fn q(x: f64) -> QParam {
        QParam::strict(x).unwrap()
    }

    #[test]
    fn omega_zero_is_trivial_on_unit() {
        let w = build_omega(q(-0.5), 0.0, HalfInt::from_int(4)).unwrap();
        let s = *w.ops.alpha.domain();
        let e0 = StateVector::basis_vector(s, &BasisIndex::unit()).unwrap();
        let a = w.ops.alpha.apply(&e0).unwrap();
        assert!(a.max_abs_diff(&e0).unwrap() < 1e-15);
        assert_eq!(w.ops.gamma.apply(&e0).unwrap().norm(), 0.0);
    }

    #[test]
    fn band_structure() {
        let w = build_omega(q(0.7), 0.4, HalfInt::from_int(6)).unwrap();
        for (g, di) in [(Generator::Alpha, 0), (Generator::Gamma, 2), (Generator::GammaStar, -2)] {
            for (dl, d_i, dj) in w.ops.get(g).shifts() {
                assert!(dl.abs() <= 2 && dj == 0 && d_i == di, "{g:?}");
            }
        }
    }

    #[test]
    fn pi_one_satisfies_relations_on_bundles() {
        for qv in [0.5, -0.5, 0.9] {
            for k in [-2i64, -1, 0, 1, 2] {
                let s = TruncatedSpace::bundle(k, HalfInt::from_twice(24 + (k.abs() % 2))).unwrap();
                let ops = pi_t_ops(q(qv), 1.0, s).unwrap();
                for r in ops.relation_residuals(q(qv)).unwrap().into_iter().chain(ops.adjoint_residuals().unwrap()) {
                    assert!(r.residual < 1e-12, "q={qv} k={k} {}: {:e}", r.name, r.residual);
                }
            }
        }
    }
}
