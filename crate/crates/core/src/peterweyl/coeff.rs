//! Regular-representation coefficients `a_±`, `c_±`.
//!
//! All functions here work in doubled coordinates `(2l, 2i, 2j)` so that
//! every exponent is an exact integer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::{rad, HalfInt, QParam};

use super::space::{in_range, parity_ok};

/// `(1 - q^e)^{1/2}`.
pub(crate) fn r(q: QParam, e: i64) -> f64 {
    rad(1.0 - q.pow(e))
}

/// `1 - q^e`.
pub(crate) fn d(q: QParam, e: i64) -> f64 {
    1.0 - q.pow(e)
}

/// Halves a doubled exponent that parity makes even.
pub(crate) fn half(x: i64) -> i64 {
    debug_assert!(x % 2 == 0, "odd doubled exponent {x}");
    x / 2
}

/// The four coefficient families of the regular representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegCoeff {
    APlus,
    AMinus,
    CPlus,
    CMinus,
}

impl RegCoeff {
    /// Doubled shift `(Δl, Δi, Δj)` from source to target.
    pub fn shift(self) -> (i64, i64, i64) {
        match self {
            RegCoeff::APlus => (1, -1, -1),
            RegCoeff::AMinus => (-1, -1, -1),
            RegCoeff::CPlus => (1, 1, -1),
            RegCoeff::CMinus => (-1, 1, -1),
        }
    }
}

/// Coefficient of the regular representation at `e^(l)_{i,j}`.
///
/// Returns 0 when the source or the target vector does not exist.
pub fn coeff_reg(sym: RegCoeff, q: QParam, l: HalfInt, i: HalfInt, j: HalfInt) -> Result<f64> {
    if !parity_ok(l, i, j) {
        return Err(Error::Parity { l, i, j });
    }
    Ok(reg(sym, q, l.twice(), i.twice(), j.twice()))
}

/// Unchecked evaluation in doubled coordinates; 0 outside the admissible
/// range of source or target.
pub(crate) fn reg(sym: RegCoeff, q: QParam, l: i64, i: i64, j: i64) -> f64 {
    let (dl, di, dj) = sym.shift();
    if !in_range(l, i, j) || !in_range(l + dl, i + di, j + dj) {
        return 0.0;
    }
    match sym {
        RegCoeff::APlus => {
            q.pow(half(2 * l + i + j + 2)) * r(q, l - j + 2) * r(q, l - i + 2) / (r(q, 2 * l + 2) * r(q, 2 * l + 4))
        }
        RegCoeff::AMinus => r(q, l + j) * r(q, l + i) / (r(q, 2 * l) * r(q, 2 * l + 2)),
        RegCoeff::CPlus => {
            -q.pow(half(l + j)) * r(q, l - j + 2) * r(q, l + i + 2) / (r(q, 2 * l + 2) * r(q, 2 * l + 4))
        }
        RegCoeff::CMinus => q.pow(half(l + i)) * r(q, l + j) * r(q, l - i) / (r(q, 2 * l) * r(q, 2 * l + 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q(x: f64) -> QParam {
        QParam::strict(x).unwrap()
    }

    #[test]
    fn printed_vanishing() {
        for l2 in 0..12 {
            for j2 in (-l2..=l2).step_by(2) {
                let (l, i, j) = (HalfInt::from_twice(l2), HalfInt::from_twice(-l2), HalfInt::from_twice(j2));
                assert_eq!(coeff_reg(RegCoeff::AMinus, q(0.5), l, i, j).unwrap(), 0.0);
                assert_eq!(coeff_reg(RegCoeff::CMinus, q(0.5), l, -i, j).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn lowest_coefficients() {
        let z = HalfInt::ZERO;
        let ap = coeff_reg(RegCoeff::APlus, q(0.5), z, z, z).unwrap();
        assert_abs_diff_eq!(ap, 0.5 / 1.25f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(ap, 0.4472135955, epsilon = 1e-10);
        let cp = coeff_reg(RegCoeff::CPlus, q(0.5), z, z, z).unwrap();
        assert_abs_diff_eq!(cp, -0.894427191, epsilon = 1e-9);
        // The (l - 1/2) branches are absent at l = 0.
        assert_eq!(coeff_reg(RegCoeff::CMinus, q(0.5), z, z, z).unwrap(), 0.0);
        assert_eq!(coeff_reg(RegCoeff::AMinus, q(0.5), z, z, z).unwrap(), 0.0);
    }

    #[test]
    fn parity_is_checked() {
        let r = coeff_reg(RegCoeff::APlus, q(0.3), HalfInt::ONE, HalfInt::HALF, HalfInt::ZERO);
        assert!(matches!(r, Err(Error::Parity { .. })));
    }

    #[test]
    fn unit_column_norm() {
        // |a+|² + |a-|² + |c+|² + |c-|² = 1 is the diagonal of α*α + γ*γ = 1.
        for &qv in &[0.3, -0.5, 0.9] {
            for l2 in 0..10i64 {
                for i2 in (-l2..=l2).step_by(2) {
                    for j2 in (-l2..=l2).step_by(2) {
                        let s: f64 = [RegCoeff::APlus, RegCoeff::AMinus, RegCoeff::CPlus, RegCoeff::CMinus]
                            .iter()
                            .map(|&c| reg(c, q(qv), l2, i2, j2).powi(2))
                            .sum();
                        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
                    }
                }
            }
        }
    }
}
