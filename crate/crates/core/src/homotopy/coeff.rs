//! The tridiagonal coefficient tables `a_k … d_k(t, l, i, j)` of `π_t` and
//! their rescaled versions `A_k … D_k(t, l, i)` on `L²(E_0)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::peterweyl::{d, half, r};
use crate::qnum::{rad, HalfInt, QParam};

/// Coefficient family: `a` for `π_t(α)`, `b` for `π_t(α*)`, `c` for
/// `π_t(γ)`, `d` for `π_t(γ*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    /// Doubled shift of the row weight `i`.
    pub fn di(self) -> i64 {
        match self {
            Family::A | Family::B => 0,
            Family::C => 2,
            Family::D => -2,
        }
    }

    pub fn lower(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
            Family::D => 'd',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lower())
    }
}

/// Doubled-coordinate admissibility, parity implied by construction.
fn adm(l: i64, i: i64, j: i64) -> bool {
    l >= 0 && i.abs() <= l && j.abs() <= l
}

fn check_band(k: i64) -> Result<()> {
    if !(-1..=1).contains(&k) {
        return Err(Error::Domain(format!("band k = {k} not in {{-1, 0, 1}}")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// Printed coefficient `x_k(t, l, i, j)` of family `fam`: the amplitude of
/// `π_t(x) e^(l)_{i,j}` on `e^(l+k)_{i+Δi,j}`. Zero when the target is
/// absent.
pub fn eval_t_coeff(fam: Family, k: i64, q: QParam, t: f64, l: HalfInt, i: HalfInt, j: HalfInt) -> Result<f64> {
    check_band(k)?;
    check_t(t)?;
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    if l.twice() < 0 || !l.same_parity(i) || !l.same_parity(j) {
        return Err(Error::Parity { l, i, j });
    }
    if i.abs() > l || j.abs() > l {
        return Err(Error::NotInSpace(format!("({l}, {i}, {j}) is not an admissible label")));
    }
    Ok(t_coeff(fam, k, q, t, l.twice(), i.twice(), j.twice()))
}

/// Unchecked evaluation in doubled coordinates.
pub(crate) fn t_coeff(fam: Family, k: i64, q: QParam, t: f64, l: i64, i: i64, j: i64) -> f64 {
    if !adm(l, i, j) || !adm(l + 2 * k, i + fam.di(), j) {
        return 0.0;
    }
    let up = q.abs_pow(t);
    let dn = q.abs_pow(-t);
    let p = |e: i64| q.pow(e);
    match (fam, k) {
        (Family::A, 1) => {
            (up * p(2 * l + 3) - dn * p(l + 3)) * jk_plus(q, l, j) * r(q, l + i + 2) * r(q, l - i + 2) / den_plus(q, l)
        }
        (Family::B, 1) => {
            (dn * p(1) - up * p(l + 1)) * jk_plus(q, l, j) * r(q, l + i + 2) * r(q, l - i + 2) / den_plus(q, l)
        }
        (Family::C, 1) => {
            (-up * p(half(3 * l - i + 2)) + dn * p(half(l - i + 2)))
                * jk_plus(q, l, j)
                * r(q, l + i + 2)
                * r(q, l + i + 4)
                / den_plus(q, l)
        }
        (Family::D, 1) => {
            (dn * p(half(l + i + 2)) - up * p(half(3 * l + i + 2)))
                * jk_plus(q, l, j)
                * r(q, l - i + 2)
                * r(q, l - i + 4)
                / den_plus(q, l)
        }
        (Family::A, -1) => {
            (up * p(-1) - dn * p(l + 1)) * jk_minus(q, l, j) * r(q, l - i) * r(q, l + i) / den_minus(q, l)
        }
        (Family::B, -1) => {
            (dn * p(2 * l + 1) - up * p(l - 1)) * jk_minus(q, l, j) * r(q, l - i) * r(q, l + i) / den_minus(q, l)
        }
        (Family::C, -1) => {
            (up * p(half(l + i - 2)) - dn * p(half(3 * l + i + 2))) * jk_minus(q, l, j) * r(q, l - i) * r(q, l - i - 2)
                / den_minus(q, l)
        }
        (Family::D, -1) => {
            (-dn * p(half(3 * l - i + 2)) + up * p(half(l - i - 2))) * jk_minus(q, l, j) * r(q, l + i) * r(q, l + i - 2)
                / den_minus(q, l)
        }
        (fam, _) => diagonal(fam, q, up, dn, l, i, j),
    }
}

/// `(1 - q^{2l+2j+2})^{1/2} (1 - q^{2l-2j+2})^{1/2}`.
fn jk_plus(q: QParam, l: i64, j: i64) -> f64 {
    r(q, l + j + 2) * r(q, l - j + 2)
}

/// `(1 - q^{2l-2j})^{1/2} (1 - q^{2l+2j})^{1/2}`.
fn jk_minus(q: QParam, l: i64, j: i64) -> f64 {
    r(q, l - j) * r(q, l + j)
}

/// `(1 - q^{4l+2})^{1/2} (1 - q^{4l+4}) (1 - q^{4l+6})^{1/2}`.
fn den_plus(q: QParam, l: i64) -> f64 {
    r(q, 2 * l + 2) * d(q, 2 * l + 4) * r(q, 2 * l + 6)
}

/// `(1 - q^{4l}) (1 - q^{4l+2})^{1/2} (1 - q^{4l-2})^{1/2}`.
fn den_minus(q: QParam, l: i64) -> f64 {
    d(q, 2 * l) * r(q, 2 * l + 2) * r(q, 2 * l - 2)
}

/// The four-term `k = 0` coefficients. Terms carrying `(1 - q^{4l})` in
/// the denominator belong to the absent `l - 1/2` summand and are dropped
/// at `l = 0`.
fn diagonal(fam: Family, q: QParam, up: f64, dn: f64, l: i64, i: i64, j: i64) -> f64 {
    let p = |e: i64| q.pow(e);
    let hi = d(q, 2 * l + 2) * d(q, 2 * l + 4);
    let lo = d(q, 2 * l) * d(q, 2 * l + 2);
    let low_present = l > 0;
    match fam {
        Family::A => {
            let mut s = up * p(half(2 * l - i - j)) * d(q, l + j + 2) * d(q, l + i + 2) / hi
                + dn * p(half(2 * l - i + j + 4)) * d(q, l - j + 2) * d(q, l + i + 2) / hi;
            if low_present {
                s += up * p(half(2 * l + i + j)) * d(q, l - j) * d(q, l - i) / lo
                    + dn * p(half(2 * l + i - j + 4)) * d(q, l + j) * d(q, l - i) / lo;
            }
            s
        }
        Family::B => {
            let mut s = dn * p(half(2 * l + i + j + 4)) * d(q, l - j + 2) * d(q, l - i + 2) / hi
                + up * p(half(2 * l + i - j)) * d(q, l + j + 2) * d(q, l - i + 2) / hi;
            if low_present {
                s += dn * p(half(2 * l - i - j + 4)) * d(q, l + j) * d(q, l + i) / lo
                    + up * p(half(2 * l - i + j)) * d(q, l - j) * d(q, l + i) / lo;
            }
            s
        }
        Family::C => {
            let w = r(q, l + i + 2) * r(q, l - i);
            let mut s = up * p(half(3 * l - j + 2)) * d(q, l + j + 2) * w / hi
                + dn * p(half(3 * l + j + 6)) * d(q, l - j + 2) * w / hi;
            if low_present {
                s -= up * p(half(l + j - 2)) * d(q, l - j) * w / lo + dn * p(half(l - j + 2)) * d(q, l + j) * w / lo;
            }
            s
        }
        Family::D => {
            let w = r(q, l - i + 2) * r(q, l + i);
            let mut s = -(dn * p(half(l + j + 2)) * d(q, l - j + 2) * w / hi
                + up * p(half(l - j - 2)) * d(q, l + j + 2) * w / hi);
            if low_present {
                s += dn * p(half(3 * l - j + 2)) * d(q, l + j) * w / lo
                    + up * p(half(3 * l + j - 2)) * d(q, l - j) * w / lo;
            }
            s
        }
    }
}

/// Sign, `q`-exponent and `i`-dependent radical factor of the off-diagonal
/// tables, which all factor as
/// `x_{+1} = σ q^e |q|^{-t} (1 - |q|^{2t} q^{2l}) · S · J_+(l, j) / den_+`,
/// `x_{-1} = σ q^e |q|^{-t} (|q|^{2t} - q^{2l+2}) · S · J_-(l, j) / den_-`.
fn factored(fam: Family, k: i64, q: QParam, l: i64, i: i64) -> (f64, i64, f64) {
    match (fam, k) {
        (Family::A, 1) => (-1.0, l + 3, r(q, l + i + 2) * r(q, l - i + 2)),
        (Family::B, 1) => (1.0, 1, r(q, l + i + 2) * r(q, l - i + 2)),
        (Family::C, 1) => (1.0, half(l - i + 2), r(q, l + i + 2) * r(q, l + i + 4)),
        (Family::D, 1) => (1.0, half(l + i + 2), r(q, l - i + 2) * r(q, l - i + 4)),
        (Family::A, -1) => (1.0, -1, r(q, l - i) * r(q, l + i)),
        (Family::B, -1) => (-1.0, l - 1, r(q, l - i) * r(q, l + i)),
        (Family::C, -1) => (1.0, half(l + i - 2), r(q, l - i) * r(q, l - i - 2)),
        (Family::D, -1) => (1.0, half(l - i - 2), r(q, l + i) * r(q, l + i - 2)),
        _ => unreachable!("factored form only for k = ±1"),
    }
}

/// Rescaled coefficient `X_k(t, l, i)` on `L²(E_0)`:
/// `X_1 = m(t, l+1)^{-1/2} x_1(t, l, i, 0)`, `X_0 = x_0(t, l, i, 0)`,
/// `X_{-1} = m(t, l)^{1/2} x_{-1}(t, l, i, 0)`.
///
/// The `m` prefactors are cancelled analytically, so the value is finite
/// at `(t, l) = (0, 0)`; `k = 0` uses the grouped two-term form.
pub fn eval_rescaled(fam: Family, k: i64, q: QParam, t: f64, l: HalfInt, i: HalfInt) -> Result<f64> {
    check_band(k)?;
    check_t(t)?;
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    if !l.is_integer() || !i.is_integer() || l.twice() < 0 {
        return Err(Error::Parity { l, i, j: HalfInt::ZERO });
    }
    if i.abs() > l {
        return Err(Error::NotInSpace(format!("|i| > l in ({l}, {i}) on L²(E_0)")));
    }
    Ok(rescaled(fam, k, q, t, l.twice(), i.twice()))
}

/// Unchecked rescaled evaluation in doubled coordinates (`j = 0`).
pub(crate) fn rescaled(fam: Family, k: i64, q: QParam, t: f64, l: i64, i: i64) -> f64 {
    if !adm(l, i, 0) || !adm(l + 2 * k, i + fam.di(), 0) {
        return 0.0;
    }
    let u = q.abs_pow(2.0 * t);
    let x = q.pow(l);
    let p2 = q.pow(2);
    match k {
        1 => {
            let (sigma, e, s) = factored(fam, 1, q, l, i);
            sigma * q.pow(e) * q.abs_pow(-t - 1.0) * rad(1.0 - u * x) * rad(u - p2 * p2 * x) * s * (1.0 - p2 * x)
                / den_plus(q, l)
        }
        -1 => {
            let (sigma, e, s) = factored(fam, -1, q, l, i);
            sigma * q.pow(e) * q.abs_pow(-t) * rad(u - p2 * x) * rad(p2 - u * x) * s * (1.0 - x) / den_minus(q, l)
        }
        _ => grouped_diagonal(fam, q, t, half(l), half(i)),
    }
}

/// Grouped `j = 0` diagonal coefficients in integer `(l, i)`; manifestly
/// finite at `l = 0`.
fn grouped_diagonal(fam: Family, q: QParam, t: f64, l: i64, i: i64) -> f64 {
    let up = q.abs_pow(t);
    let dn = q.abs_pow(-t);
    let p = |e: i64| q.pow(e);
    let hi = d(q, 4 * l + 2) * (1.0 + p(2 * l + 2));
    let lo = d(q, 4 * l + 2) * (1.0 + p(2 * l));
    match fam {
        Family::A => {
            (up * p(2 * l - i) + dn * p(2 * l - i + 2)) * d(q, 2 * l + 2 * i + 2) / hi
                + (up * p(2 * l + i) + dn * p(2 * l + i + 2)) * d(q, 2 * l - 2 * i) / lo
        }
        Family::B => {
            (dn * p(2 * l + i + 2) + up * p(2 * l + i)) * d(q, 2 * l - 2 * i + 2) / hi
                + (dn * p(2 * l - i + 2) + up * p(2 * l - i)) * d(q, 2 * l + 2 * i) / lo
        }
        Family::C => {
            r(q, 2 * l + 2 * i + 2)
                * r(q, 2 * l - 2 * i)
                * ((up * p(3 * l + 1) + dn * p(3 * l + 3)) / hi - (up * p(l - 1) + dn * p(l + 1)) / lo)
        }
        Family::D => {
            r(q, 2 * l - 2 * i + 2)
                * r(q, 2 * l + 2 * i)
                * ((dn * p(3 * l + 1) + up * p(3 * l - 1)) / lo - (dn * p(l + 1) + up * p(l - 1)) / hi)
        }
    }
}

/// `|x_k(1, l, i, ±1) − X_k(t, l, i)|` for `k = ±1`, in a form free of
/// catastrophic cancellation: both terms share the factor
/// `σ q^e · S / den`, and the difference of the remaining square roots is
/// rewritten as `(G − H)/(√G + √H)` with `G − H = x(1 − u)(1 − q⁴/u)`.
pub(crate) fn offdiagonal_gap(fam: Family, k: i64, q: QParam, t: f64, l: i64, i: i64) -> f64 {
    debug_assert!(k == 1 || k == -1);
    if !adm(l, i, 2) {
        return 0.0;
    }
    let target_pm = adm(l + 2 * k, i + fam.di(), 2);
    let target_0 = adm(l + 2 * k, i + fam.di(), 0);
    if !target_pm || !target_0 {
        // One side vanishes by the boundary convention.
        return (t_coeff(fam, k, q, 1.0, l, i, 2) - rescaled(fam, k, q, t, l, i)).abs();
    }
    let u = q.abs_pow(2.0 * t);
    let x = q.pow(l);
    let p = q.pow(2);
    let (sigma, e, s) = factored(fam, k, q, l, i);
    let gap = x * (1.0 - u) * (1.0 - p * p / u);
    let (prefactor, g, h) = if k == 1 {
        (
            sigma * q.pow(e) / q.abs_q() * (1.0 - p * x) * s / den_plus(q, l),
            (1.0 - u * x) * (1.0 - p * p * x / u),
            (1.0 - x) * (1.0 - p * p * x),
        )
    } else {
        (sigma * q.pow(e) * (1.0 - x) * s / den_minus(q, l), (u - p * x) * (p - u * x) / u, (p - x) * (1.0 - p * x))
    };
    let denom = rad(g) + rad(h);
    if denom == 0.0 {
        return 0.0;
    }
    (prefactor * gap / denom).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::m_scalar;
    use approx::assert_abs_diff_eq;

    fn q(x: f64) -> QParam {
        QParam::strict(x).unwrap()
    }

    const QS: [f64; 6] = [0.3, -0.3, 0.5, -0.5, 0.9, -0.9];

    #[test]
    fn grouped_matches_four_term() {
        for qv in QS {
            for t in [0.0, 0.25, 0.7, 1.0] {
                for l in 0..25i64 {
                    for i in -l..=l {
                        for fam in Family::ALL {
                            let g = grouped_diagonal(fam, q(qv), t, l, i);
                            let f = t_coeff(fam, 0, q(qv), t, 2 * l, 2 * i, 0);
                            assert_abs_diff_eq!(g, f, epsilon = 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factored_matches_printed() {
        for qv in QS {
            for t in [0.0, 0.4, 1.0] {
                for l2 in 0..30i64 {
                    for i2 in (-l2..=l2).step_by(2) {
                        for j2 in (-l2..=l2).step_by(2) {
                            for fam in Family::ALL {
                                for k in [-1i64, 1] {
                                    if !adm(l2 + 2 * k, i2 + fam.di(), j2) {
                                        continue;
                                    }
                                    let (sigma, e, s) = factored(fam, k, q(qv), l2, i2);
                                    let u = q(qv).abs_pow(2.0 * t);
                                    let x = q(qv).pow(l2);
                                    let p = q(qv).pow(2);
                                    let v = if k == 1 {
                                        sigma
                                            * q(qv).pow(e)
                                            * q(qv).abs_pow(-t)
                                            * (1.0 - u * x)
                                            * s
                                            * jk_plus(q(qv), l2, j2)
                                            / den_plus(q(qv), l2)
                                    } else {
                                        sigma
                                            * q(qv).pow(e)
                                            * q(qv).abs_pow(-t)
                                            * (u - p * x)
                                            * s
                                            * jk_minus(q(qv), l2, j2)
                                            / den_minus(q(qv), l2)
                                    };
                                    let printed = t_coeff(fam, k, q(qv), t, l2, i2, j2);
                                    assert_abs_diff_eq!(v, printed, epsilon = 1e-12);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rescaled_matches_direct_route() {
        for qv in QS {
            for t in [0.0, 0.3, 0.8, 1.0] {
                for l in 0..30i64 {
                    for i in -l..=l {
                        for fam in Family::ALL {
                            if t > 0.0 || l > 0 {
                                let m = m_scalar(q(qv), t, l + 1).unwrap();
                                let direct = t_coeff(fam, 1, q(qv), t, 2 * l, 2 * i, 0) / m.sqrt();
                                assert_abs_diff_eq!(rescaled(fam, 1, q(qv), t, 2 * l, 2 * i), direct, epsilon = 1e-12);
                            }
                            if l >= 1 {
                                let m = m_scalar(q(qv), t, l).unwrap();
                                let direct = t_coeff(fam, -1, q(qv), t, 2 * l, 2 * i, 0) * m.sqrt();
                                assert_abs_diff_eq!(rescaled(fam, -1, q(qv), t, 2 * l, 2 * i), direct, epsilon = 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rescaled_lowest_values() {
        for qv in QS {
            assert_eq!(rescaled(Family::A, 1, q(qv), 0.0, 0, 0), 0.0);
            assert_abs_diff_eq!(rescaled(Family::A, 0, q(qv), 0.0, 0, 0), 1.0, epsilon = 1e-15);
        }
        let v = eval_rescaled(Family::A, 0, q(0.5), 1.0, HalfInt::ZERO, HalfInt::ZERO).unwrap();
        assert_abs_diff_eq!(v, 0.8, epsilon = 1e-15);
        let v = eval_t_coeff(Family::A, 0, q(0.5), 1.0, HalfInt::ZERO, HalfInt::ZERO, HalfInt::ZERO).unwrap();
        assert_abs_diff_eq!(v, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn rescaled_at_one_is_unrescaled() {
        for qv in QS {
            for l in 0..=30i64 {
                for i in -l..=l {
                    for fam in Family::ALL {
                        for k in -1..=1 {
                            let a = rescaled(fam, k, q(qv), 1.0, 2 * l, 2 * i);
                            let b = t_coeff(fam, k, q(qv), 1.0, 2 * l, 2 * i, 0);
                            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn printed_vanishing_and_symmetry() {
        let h = HalfInt::from_int;
        for l in 1..12 {
            for t in [0.0, 0.5, 1.0] {
                let v = eval_t_coeff(Family::C, -1, q(0.5), t, h(l), h(l), h(1)).unwrap();
                assert_eq!(v, 0.0);
            }
            for i in -l..=l {
                let p = eval_t_coeff(Family::A, 0, q(-0.7), 1.0, h(l), h(i), h(1)).unwrap();
                let m = eval_t_coeff(Family::A, 0, q(-0.7), 1.0, h(l), h(i), h(-1)).unwrap();
                assert_abs_diff_eq!(p, m, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn inadmissible_labels_are_rejected() {
        let h = HalfInt::from_twice;
        assert!(matches!(eval_t_coeff(Family::A, 0, q(0.5), 1.0, h(0), h(0), h(2)), Err(Error::NotInSpace(_))));
        assert!(matches!(eval_t_coeff(Family::A, 0, q(0.5), 1.0, h(2), h(1), h(0)), Err(Error::Parity { .. })));
        assert!(eval_t_coeff(Family::A, 2, q(0.5), 1.0, h(2), h(0), h(0)).is_err());
        assert!(eval_rescaled(Family::A, 0, q(0.5), 1.5, h(2), h(0)).is_err());
        assert!(eval_rescaled(Family::A, 0, q(0.5), 0.5, h(1), h(1)).is_err());
    }

    #[test]
    fn gap_matches_plain_difference_at_moderate_l() {
        for qv in QS {
            for t in [0.0, 0.35, 1.0] {
                for l in 1..12i64 {
                    for i in -l..=l {
                        for fam in Family::ALL {
                            for k in [-1i64, 1] {
                                let plain = (t_coeff(fam, k, q(qv), 1.0, 2 * l, 2 * i, 2)
                                    - rescaled(fam, k, q(qv), t, 2 * l, 2 * i))
                                .abs();
                                let safe = offdiagonal_gap(fam, k, q(qv), t, 2 * l, 2 * i);
                                assert_abs_diff_eq!(plain, safe, epsilon = 1e-13);
                            }
                        }
                    }
                }
            }
        }
    }
}
