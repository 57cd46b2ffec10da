//! Parameter matrices of free orthogonal quantum groups `FO(Q)`: validation
//! of `Q Q̄ = ±1`, the monoidal-equivalence invariant `(c, tr Q*Q)`, and the
//! matching `SU_q(2)` parameter.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::{anchors, Check, VerificationReport};

pub const DEFAULT_TOL: f64 = 1e-10;

/// A validated parameter matrix with `Q Q̄ = sign · 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    entries: DMatrix<Complex64>,
    sign: i8,
    tol: f64,
}

/// `(c, tr Q*Q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceInvariant {
    pub sign: i8,
    pub trace: f64,
}

impl QMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Parses rows of `[re, im]` pairs.
    pub fn from_json(v: &Value, tol: f64) -> Result<QMatrix> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("Q must be an array of rows".into()))?;
        let n = rows.len();
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| Error::Parse(format!("row {i} must hold {n} entries")))?;
            for (j, z) in row.iter().enumerate() {
                let pair = z
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("entry ({i}, {j}) must be a [re, im] pair")))?;
                let part =
                    |k: usize| pair[k].as_f64().ok_or_else(|| Error::Parse(format!("entry ({i}, {j}) is not numeric")));
                m[(i, j)] = Complex64::new(part(0)?, part(1)?);
            }
        }
        validate_q(m, tol)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> =
            self.entries.row_iter().map(|r| Value::Array(r.iter().map(|z| json!([z.re, z.im])).collect())).collect();
        Value::Array(rows)
    }
}

fn conj(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.map(|z| z.conj())
}

/// Checks invertibility and `Q Q̄ = c · 1` with `c ∈ {+1, −1}`.
pub fn validate_q(entries: DMatrix<Complex64>, tol: f64) -> Result<QMatrix> {
    let n = entries.nrows();
    if n < 2 || entries.ncols() != n {
        return Err(Error::Domain(format!("Q must be square of size >= 2, got {}x{}", n, entries.ncols())));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let smallest = entries.clone().svd(false, false).singular_values.min();
    if !(smallest > tol) {
        return Err(Error::Singular);
    }
    let prod = &entries * conj(&entries);
    let c = prod[(0, 0)];
    let sign: i8 = if (c - 1.0).norm() <= tol {
        1
    } else if (c + 1.0).norm() <= tol {
        -1
    } else {
        return Err(Error::NotScalar(format!("(Q Q̄)_00 = {c} is not ±1")));
    };
    let target = DMatrix::<Complex64>::identity(n, n) * Complex64::new(sign as f64, 0.0);
    let dev = (&prod - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > tol {
        return Err(Error::NotScalar(format!("Q Q̄ deviates from {sign}·1 by {dev:e}")));
    }
    Ok(QMatrix { entries, sign, tol })
}

pub fn invariant_pair(q: &QMatrix) -> EquivalenceInvariant {
    let tr = (q.entries.adjoint() * &q.entries).trace();
    EquivalenceInvariant { sign: q.sign, trace: tr.re }
}

/// Same sign and equal traces (to the looser of the two tolerances).
pub fn monoidally_equivalent(a: &QMatrix, b: &QMatrix) -> bool {
    let (ia, ib) = (invariant_pair(a), invariant_pair(b));
    let tol = a.tol.max(b.tol);
    ia.sign == ib.sign && (ia.trace - ib.trace).abs() < tol * ia.trace.max(ib.trace).max(1.0)
}

/// `|q|^{-1/2} [[0, −q], [1, 0]]`.
pub fn canonical_su2_qmatrix(q: f64) -> Result<QMatrix> {
    if !q.is_finite() || q == 0.0 || q.abs() > 1.0 {
        return Err(Error::InvalidQ(q));
    }
    let s = q.abs().sqrt().recip();
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(0.0, 0.0), Complex64::new(-q * s, 0.0), Complex64::new(s, 0.0), Complex64::new(0.0, 0.0)],
    );
    validate_q(m, DEFAULT_TOL)
}

/// The unique `q ∈ [−1, 1] \ {0}` with `FO(Q)` monoidally equivalent to
/// `SU_q(2)`: `|q| + |q|^{-1} = tr Q*Q` and `sgn q = −c`.
pub fn solve_su2_parameter(q: &QMatrix) -> Result<f64> {
    let EquivalenceInvariant { sign, trace } = invariant_pair(q);
    if trace < 2.0 - q.tol {
        return Err(Error::Domain(format!("tr Q*Q = {trace} < 2 is impossible for a valid Q")));
    }
    let tau = trace.max(2.0);
    // Smaller root of x² − τx + 1, computed without cancellation.
    let abs_q = 2.0 / (tau + (tau * tau - 4.0).sqrt());
    Ok(-(sign as f64) * abs_q)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let mut g = || {
        // Box–Muller.
        let (u1, u2): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(g(), g()));
    let qr = m.qr();
    let (qm, r) = (qr.q(), qr.r());
    // Fix the phases so the distribution is Haar.
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    qm * phases
}

/// A random valid `Q` of size `n` and sign `c` built from `(s, 1/s)` blocks
/// `[[0, s], [c/s, 0]]` (plus a `1` for odd `n`, `c = +1`), conjugated as
/// `V Q Vᵀ` with `V` unitary. The `s` values are drawn from `svals`.
pub fn random_valid_q<R: Rng>(rng: &mut R, n: usize, sign: i8, svals: &[f64]) -> Result<QMatrix> {
    if n < 2 || (sign == -1 && n % 2 == 1) || (sign != 1 && sign != -1) || svals.is_empty() {
        return Err(Error::Domain(format!("no valid Q with n = {n}, sign = {sign}")));
    }
    let mut q = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for b in 0..n / 2 {
        let s = svals[rng.gen_range(0..svals.len())];
        q[(2 * b, 2 * b + 1)] = Complex64::new(s, 0.0);
        q[(2 * b + 1, 2 * b)] = Complex64::new(sign as f64 / s, 0.0);
    }
    if n % 2 == 1 {
        q[(n - 1, n - 1)] = Complex64::new(1.0, 0.0);
    }
    let v = random_unitary(rng, n);
    let conj_q = &v * q * v.transpose();
    validate_q(conj_q, 1e-8)
}

/// Round trips on the `q` grid, the `1_3` example, the canonical
/// intertwiner equations, and the equivalence-relation axioms on random
/// valid matrices.
pub fn foq_verify(seed: u64, count: usize, tol: f64) -> Result<VerificationReport> {
    use rand::SeedableRng;
    let mut rep = VerificationReport::new("foq");
    rep.param("count", count as u64).param("tol", tol);
    rep.seed = Some(seed);

    let grid = [-1.0, -0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 1.0];
    let mut worst = 0.0f64;
    let mut sign_ok = true;
    for &q in &grid {
        let m = canonical_su2_qmatrix(q)?;
        worst = worst.max((solve_su2_parameter(&m)? - q).abs());
        let inv = invariant_pair(&m);
        sign_ok &= inv.sign as f64 == -q.signum() && (inv.trace - (q.abs() + q.abs().recip())).abs() < 1e-12;
        // u = Q ū Q⁻¹ for Q = [[0, a], [b, 0]] reduces to a/b = −q and −q b/a = 1.
        let (a, b) = (m.entries[(0, 1)].re, m.entries[(1, 0)].re);
        worst = worst.max((a / b + q).abs()).max((-q * b / a - 1.0).abs());
    }
    rep.push(Check::residual("solve(canonical(q)) = q and intertwiner equations", anchors::THEOREM_7_5, worst, tol));
    rep.push(Check::value("canonical invariant = (-sgn q, |q| + 1/|q|)", anchors::THEOREM_7_5, sign_ok, sign_ok));

    let id3 = validate_q(DMatrix::identity(3, 3), DEFAULT_TOL)?;
    let q3 = solve_su2_parameter(&id3)?;
    let golden = -(3.0 - 5f64.sqrt()) / 2.0;
    rep.push(
        Check::residual("Q = 1_3 solves to q = -(3 - sqrt 5)/2", anchors::THEOREM_7_5, (q3 - golden).abs(), tol)
            .with_note(format!("q = {q3}")),
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let svals = [1.0, 0.5, 2.0, 0.25];
    let mut mats = Vec::with_capacity(count);
    for k in 0..count {
        let n = 2 + k % 3;
        let sign = if n % 2 == 1 || k % 2 == 0 { 1 } else { -1 };
        mats.push(random_valid_q(&mut rng, n, sign, &svals)?);
    }
    let eq: Vec<Vec<bool>> = mats.iter().map(|a| mats.iter().map(|b| monoidally_equivalent(a, b)).collect()).collect();
    let m = mats.len();
    let reflexive = (0..m).all(|i| eq[i][i]);
    let symmetric = (0..m).all(|i| (0..m).all(|j| eq[i][j] == eq[j][i]));
    let transitive = (0..m).all(|i| (0..m).all(|j| !eq[i][j] || (0..m).all(|k| !eq[j][k] || eq[i][k])));
    let classes = (0..m).filter(|&i| (0..i).all(|j| !eq[i][j])).count();
    let ok = reflexive && symmetric && transitive;
    rep.push(
        Check::value("monoidal equivalence is an equivalence relation", anchors::THEOREM_7_5, ok, ok)
            .with_note(format!("{m} matrices, {classes} classes")),
    );
    let tau_ok = mats.iter().all(|q| invariant_pair(q).trace >= q.n() as f64 - 1e-9);
    rep.push(Check::value("tr Q*Q >= n", anchors::THEOREM_7_5, tau_ok, tau_ok));
    rep.assume("sgn(q) = -c, fixed by the canonical 2x2 parameter matrix");
    rep.assume("monoidal equivalence is decided by the sign of Q Q̄ and tr Q*Q");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn real(rows: &[&[f64]]) -> DMatrix<Complex64> {
        let n = rows.len();
        DMatrix::from_fn(n, rows[0].len(), |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn validation_examples() {
        assert_eq!(validate_q(DMatrix::identity(3, 3), DEFAULT_TOL).unwrap().sign(), 1);
        assert_eq!(canonical_su2_qmatrix(0.5).unwrap().sign(), -1);
        assert!(matches!(validate_q(real(&[&[1.0, 1.0], &[0.0, 1.0]]), DEFAULT_TOL), Err(Error::NotScalar(_))));
        // The unnormalized matrix gives −q·1.
        assert!(matches!(validate_q(real(&[&[0.0, -0.5], &[1.0, 0.0]]), DEFAULT_TOL), Err(Error::NotScalar(_))));
        assert!(matches!(validate_q(real(&[&[1.0, 2.0], &[2.0, 4.0]]), DEFAULT_TOL), Err(Error::Singular)));
    }

    #[test]
    fn invariants() {
        let i2 = validate_q(DMatrix::identity(2, 2), DEFAULT_TOL).unwrap();
        assert_eq!(invariant_pair(&i2), EquivalenceInvariant { sign: 1, trace: 2.0 });
        let c = invariant_pair(&canonical_su2_qmatrix(0.5).unwrap());
        assert_eq!(c.sign, -1);
        assert!((c.trace - 2.5).abs() < 1e-15);
        let i3 = validate_q(DMatrix::identity(3, 3), DEFAULT_TOL).unwrap();
        let i4 = validate_q(DMatrix::identity(4, 4), DEFAULT_TOL).unwrap();
        assert!(monoidally_equivalent(&i2, &i2));
        assert!(!monoidally_equivalent(&i3, &i4));
        let golden = canonical_su2_qmatrix(-(3.0 - 5f64.sqrt()) / 2.0).unwrap();
        assert!(monoidally_equivalent(&i3, &golden));
    }

    #[test]
    fn canonical_entries() {
        let m = canonical_su2_qmatrix(1.0).unwrap();
        assert_eq!(m.entries()[(0, 1)].re, -1.0);
        assert_eq!(m.entries()[(1, 0)].re, 1.0);
        assert_eq!(m.sign(), -1);
        let m = canonical_su2_qmatrix(-1.0).unwrap();
        assert_eq!(m.entries()[(0, 1)].re, 1.0);
        assert_eq!(m.sign(), 1);
        assert!(canonical_su2_qmatrix(0.0).is_err());
    }

    #[test]
    fn solver() {
        for q in [-1.0, -0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 1.0] {
            let back = solve_su2_parameter(&canonical_su2_qmatrix(q).unwrap()).unwrap();
            assert!((back - q).abs() < 1e-12, "{q} -> {back}");
        }
        let i2 = validate_q(DMatrix::identity(2, 2), DEFAULT_TOL).unwrap();
        assert_eq!(solve_su2_parameter(&i2).unwrap(), -1.0);
        let i3 = validate_q(DMatrix::identity(3, 3), DEFAULT_TOL).unwrap();
        assert!((solve_su2_parameter(&i3).unwrap() + 0.3819660112501051).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = canonical_su2_qmatrix(-0.3).unwrap();
        let back = QMatrix::from_json(&m.to_json(), DEFAULT_TOL).unwrap();
        assert_eq!(back, m);
        assert!(matches!(QMatrix::from_json(&json!([[1, 2]]), DEFAULT_TOL), Err(Error::Parse(_))));
    }

    #[test]
    fn suite_passes() {
        let rep = foq_verify(7, 50, 1e-12).unwrap();
        assert!(rep.passed(), "{}", rep.to_json().unwrap());
    }

    proptest! {
        #[test]
        fn random_q_invariants(seed in any::<u64>(), n in 2usize..6, s in 0.1f64..10.0) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let sign = if n % 2 == 0 && seed % 2 == 0 { -1 } else { 1 };
            let q = random_valid_q(&mut rng, n, sign, &[s]).unwrap();
            prop_assert_eq!(q.sign(), sign);
            let inv = invariant_pair(&q);
            prop_assert!(inv.trace >= n as f64 - 1e-9);
            let expect = (n / 2) as f64 * (s * s + 1.0 / (s * s)) + (n % 2) as f64;
            prop_assert!((inv.trace - expect).abs() < 1e-8 * expect);
        }
    }
}
