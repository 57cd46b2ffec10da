//! The deformation `π_t` of the regular representation, its rescaled form
//! `ω_t` on `L²(E_0)`, and numerical verifiers for the homotopy argument.

mod coeff;
mod omega;
mod verify;

pub use coeff::{eval_rescaled, eval_t_coeff, Family};
pub use omega::{build_omega, family_of, pi_t_ops, OmegaOperatorSet};
pub use verify::{
    degenerate_module_check, rotation_homotopy_check, t_grid, verify_lemma1, verify_lemma2, verify_lemma3, DecayFamily,
    DecayTable, SignConvention,
};
