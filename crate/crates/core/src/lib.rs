//! Verification toolkit for quantum SU(2) and free orthogonal quantum groups.
//!
//! The crate builds finite truncations of the Peter–Weyl model of
//! `L²(SU_q(2))`, materializes the operator tables of the regular
//! representation, the Podleś sphere and the deformation family `π_t`, and
//! checks algebraic identities, decay estimates and Fredholm indices
//! numerically. Integer algebra (fusion rules, Smith normal form, the
//! Koszul complex over `ℤ[t]`) is done exactly.

pub mod error;
pub mod foq;
pub mod homotopy;
pub mod kring;
pub mod linalg;
pub mod peterweyl;
pub mod podles;
pub mod qnum;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use qnum::{HalfInt, Precision, QParam};
