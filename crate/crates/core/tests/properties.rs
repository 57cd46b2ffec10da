//! Property tests on the public API.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qgverify::foq::{canonical_su2_qmatrix, monoidally_equivalent, random_valid_q, solve_su2_parameter};
use qgverify::homotopy::{eval_rescaled, t_grid, Family};
use qgverify::peterweyl::{haar_state, Generator};
use qgverify::{HalfInt, QParam};

fn qparam() -> impl Strategy<Value = f64> {
    prop_oneof![-0.95f64..-0.05, 0.05f64..0.95]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn halfint_parse_display_round_trip(t in -10_000i64..10_000) {
        let h = HalfInt::from_twice(t);
        let back: HalfInt = h.to_string().parse().unwrap();
        prop_assert_eq!(back, h);
        prop_assert_eq!(h.is_integer(), t % 2 == 0);
    }

    #[test]
    fn halfint_arithmetic(a in -1000i64..1000, b in -1000i64..1000) {
        let (x, y) = (HalfInt::from_twice(a), HalfInt::from_twice(b));
        prop_assert_eq!((x + y).twice(), a + b);
        prop_assert_eq!((x - y) + y, x);
        prop_assert_eq!(-(-x), x);
        prop_assert_eq!((x + y).to_f64(), a as f64 / 2.0 + b as f64 / 2.0);
        prop_assert_eq!(x.same_parity(y), (a - b) % 2 == 0);
        prop_assert_eq!(x < y, a < b);
    }

    #[test]
    fn halfint_rejects_garbage(s in "[a-z]{1,4}|[0-9]+/[013-9]") {
        prop_assert!(s.parse::<HalfInt>().is_err());
    }

    #[test]
    fn canonical_round_trip(x in qparam()) {
        let back = solve_su2_parameter(&canonical_su2_qmatrix(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() < 1e-12, "{} -> {}", x, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// `φ(x* x) ≥ 0` for words `x` in the generators.
    #[test]
    fn haar_state_positive(x in qparam(), word in prop::collection::vec(0usize..4, 1..5)) {
        let q = QParam::strict(x).unwrap();
        let w: Vec<Generator> = word.iter().map(|&k| Generator::ALL[k]).collect();
        let mut full: Vec<Generator> = w.iter().rev().map(|g| g.star()).collect();
        full.extend(&w);
        let v = haar_state(&full, q, HalfInt::from_int(full.len() as i64)).unwrap();
        prop_assert!(v.re > -1e-14, "phi(x* x) = {}", v);
        prop_assert!(v.im.abs() < 1e-14);
    }

    /// `φ((γ*γ)^k) = (1 − q²) / (1 − q^{2k+2})`.
    #[test]
    fn haar_moments(x in qparam(), k in 1usize..5) {
        let q = QParam::strict(x).unwrap();
        let word: Vec<Generator> = (0..k).flat_map(|_| [Generator::GammaStar, Generator::Gamma]).collect();
        let v = haar_state(&word, q, HalfInt::from_int(2 * k as i64)).unwrap();
        let q2 = x * x;
        let expect = (1.0 - q2) / (1.0 - q2.powi(k as i32 + 1));
        prop_assert!((v.re - expect).abs() < 1e-13, "{} vs {}", v.re, expect);
    }

    /// Monoidal equivalence is reflexive, symmetric and transitive; it holds
    /// between unitary conjugates and fails across different traces.
    #[test]
    fn foq_equivalence_relation(seed in any::<u64>(), n in 2usize..6, flip in any::<bool>(), picks in prop::collection::vec(0usize..3, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sign = if n % 2 == 0 && flip { -1 } else { 1 };
        let svals = [1.0, 0.5, 0.25];
        let mats: Vec<_> = picks.iter().map(|&k| random_valid_q(&mut rng, n, sign, &[svals[k]]).unwrap()).collect();
        for (i, a) in mats.iter().enumerate() {
            prop_assert!(monoidally_equivalent(a, a));
            for (j, b) in mats.iter().enumerate() {
                prop_assert_eq!(monoidally_equivalent(a, b), monoidally_equivalent(b, a));
                // Same building block <=> same invariants.
                prop_assert_eq!(monoidally_equivalent(a, b), picks[i] == picks[j]);
                for c in &mats {
                    if monoidally_equivalent(a, b) && monoidally_equivalent(b, c) {
                        prop_assert!(monoidally_equivalent(a, c));
                    }
                }
            }
        }
    }
}

/// Largest jump of `t ↦ X_1(t, 0, 0)` between neighbouring grid points.
fn max_jump(q: QParam, n: usize) -> f64 {
    let ts = t_grid(n).unwrap();
    let vals: Vec<f64> =
        ts.iter().map(|&t| eval_rescaled(Family::A, 1, q, t, HalfInt::ZERO, HalfInt::ZERO).unwrap()).collect();
    assert!(vals.iter().all(|v| v.is_finite()));
    vals.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}

#[test]
fn rescaled_coefficient_continuous_at_t0() {
    for x in [0.3, -0.5, 0.9] {
        let q = QParam::strict(x).unwrap();
        let jumps: Vec<f64> = [11, 101, 1001].iter().map(|&n| max_jump(q, n)).collect();
        assert!(jumps[0] > jumps[1] && jumps[1] > jumps[2], "q = {x}: {jumps:?}");
        assert!(jumps[2] < 0.05, "q = {x}: {jumps:?}");
    }
}
