//! Truncated Peter–Weyl model of `L²(SU_q(2))`.

mod coeff;
mod operator;
mod space;

pub use coeff::{coeff_reg, RegCoeff};
pub(crate) use coeff::{d, half, r};
pub use operator::{
    generator_op, haar_state, involution, quantum_dimension, spectral_project, word_op, BandedOperator, Generator,
};
pub use space::{BasisIndex, SpaceKind, StateVector, TruncatedSpace};

use crate::error::{Error, Result};
use crate::qnum::QParam;

/// Images of `α, α*, γ, γ*` as endomorphisms of one truncated space.
#[derive(Clone, Debug)]
pub struct GeneratorOps {
    pub alpha: BandedOperator,
    pub alpha_star: BandedOperator,
    pub gamma: BandedOperator,
    pub gamma_star: BandedOperator,
}

/// Residual of one algebraic identity, measured in interior operator norm.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: f64,
}

impl GeneratorOps {
    /// The regular representation on the full truncated space.
    pub fn regular(q: QParam, space: TruncatedSpace) -> Result<Self> {
        if space.kind() != SpaceKind::Full {
            return Err(Error::SpaceMismatch(format!("the regular representation does not preserve {space}")));
        }
        Ok(GeneratorOps {
            alpha: generator_op(Generator::Alpha, q, space)?,
            alpha_star: generator_op(Generator::AlphaStar, q, space)?,
            gamma: generator_op(Generator::Gamma, q, space)?,
            gamma_star: generator_op(Generator::GammaStar, q, space)?,
        })
    }

    pub fn get(&self, g: Generator) -> &BandedOperator {
        match g {
            Generator::Alpha => &self.alpha,
            Generator::AlphaStar => &self.alpha_star,
            Generator::Gamma => &self.gamma,
            Generator::GammaStar => &self.gamma_star,
        }
    }

    /// The five defining relations of `C(SU_q(2))`.
    pub fn relation_residuals(&self, q: QParam) -> Result<Vec<IdentityResidual>> {
        let (a, a_s, g, g_s) = (&self.alpha, &self.alpha_star, &self.gamma, &self.gamma_star);
        let one = BandedOperator::identity(*a.domain());
        let qv = q.value();
        let rels = [
            ("alpha gamma = q gamma alpha", a.compose(g)?.add_scaled(-qv, &g.compose(a)?)?),
            ("alpha gamma* = q gamma* alpha", a.compose(g_s)?.add_scaled(-qv, &g_s.compose(a)?)?),
            ("gamma gamma* = gamma* gamma", g.compose(g_s)?.add_scaled(-1.0, &g_s.compose(g)?)?),
            (
                "alpha* alpha + gamma* gamma = 1",
                a_s.compose(a)?.add_scaled(1.0, &g_s.compose(g)?)?.add_scaled(-1.0, &one)?,
            ),
            (
                "alpha alpha* + q^2 gamma gamma* = 1",
                a.compose(a_s)?.add_scaled(qv * qv, &g.compose(g_s)?)?.add_scaled(-1.0, &one)?,
            ),
        ];
        Ok(rels.into_iter().map(|(name, op)| IdentityResidual { name, residual: op.interior_norm() }).collect())
    }

    /// `α* = α^T` and `γ* = γ^T` on the interior.
    pub fn adjoint_residuals(&self) -> Result<Vec<IdentityResidual>> {
        Ok(vec![
            IdentityResidual {
                name: "alpha* = adjoint(alpha)",
                residual: self.alpha_star.interior_residual(&self.alpha.adjoint())?,
            },
            IdentityResidual {
                name: "gamma* = adjoint(gamma)",
                residual: self.gamma_star.interior_residual(&self.gamma.adjoint())?,
            },
        ])
    }
}
