use dgbo_core::commutators::{apply_p, apply_r, coefficient, step2_a3_decomposition, CommutatorSpec};
use dgbo_core::evolution::{evolve, EquationParams};
use dgbo_core::functionals::{decay_report, gn_check, sample_times, weighted_j};
use dgbo_core::spectral::{
    derivative, fractional_derivative, hilbert, hilbert_fractional, random_band_limited, Grid, RealField,
};
use dgbo_core::weights::{phi, phi_prime, WeightSpec, WindowLaw};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(n: usize, length: f64, modes: usize, seed: u64) -> RealField<f64> {
    let g = Grid::new(n, length).unwrap();
    random_band_limited(&g, modes, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn packet(g: &Grid<f64>, centre: f64, k: f64, width: f64) -> RealField<f64> {
    RealField::from_fn(g, |x| (-((x - centre) / width).powi(2)).exp() * (k * x).cos())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), n in prop::sample::select(vec![16usize, 64, 256])) {
        let u = field(n, 17.0, n / 4, seed);
        let back = u.to_spectral().to_real();
        prop_assert!(back.max_abs_diff(&u).unwrap() <= 1e-12 * u.max_abs());
        prop_assert!(u.to_spectral().hermitian_defect() <= 1e-14 * u.max_abs());
    }

    #[test]
    fn multipliers_commute(seed in any::<u64>(), s in 0.0f64..2.5) {
        let u = field(128, 23.0, 40, seed);
        let a = hilbert(&fractional_derivative(&derivative(&u), s).unwrap());
        let b = derivative(&hilbert(&fractional_derivative(&u, s).unwrap()));
        let c = fractional_derivative(&derivative(&hilbert(&u)), s).unwrap();
        let scale = a.max_abs().max(1.0);
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12 * scale);
        prop_assert!(a.max_abs_diff(&c).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn fractional_orders_add(seed in any::<u64>(), s1 in 0.0f64..1.5, s2 in 0.0f64..1.5) {
        let u = field(128, 31.0, 40, seed);
        let direct = fractional_derivative(&u, s1 + s2).unwrap();
        let composed = fractional_derivative(&fractional_derivative(&u, s1).unwrap(), s2).unwrap();
        prop_assert!(direct.max_abs_diff(&composed).unwrap() <= 1e-10 * direct.max_abs().max(1e-300));
    }

    #[test]
    fn hilbert_squares_to_minus_identity(seed in any::<u64>()) {
        let u = field(64, 10.0, 20, seed);
        let hh = hilbert(&hilbert(&u));
        prop_assert!(hh.add(&u).unwrap().max_abs() <= 1e-12 * u.max_abs());
    }

    #[test]
    fn weight_shape(x in -1e3f64..1e3, y in -1e3f64..1e3, alpha in 0.0f64..=1.0) {
        let px = phi_prime(x, alpha);
        prop_assert!(px > 0.0 && px <= 1.0);
        prop_assert_eq!(px, phi_prime(-x, alpha));
        if x.abs() < y.abs() {
            prop_assert!(phi_prime(y, alpha) <= px);
        }
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        prop_assert!(phi(lo, alpha).unwrap() <= phi(hi, alpha).unwrap() + 1e-13);
        prop_assert!(phi(-1e8, alpha).unwrap() < 1e-6);
    }

    #[test]
    fn coefficient_recursion(alpha in 1.0f64..5.0, j in 0usize..6) {
        let next = coefficient(alpha, j + 1);
        let odd = (2 * j + 1) as f64;
        let expected = coefficient(alpha, j) * (alpha * alpha - odd * odd) / ((2 * j + 2) as f64 * (2 * j + 3) as f64);
        prop_assert!((next - expected).abs() <= 1e-12 * expected.abs().max(1e-12));
    }

    #[test]
    fn remainder_is_linear(c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, k1 in 0.0f64..2.0, k2 in 0.0f64..2.0, alpha in 0.0f64..1.0) {
        let g = Grid::new(256, 120.0).unwrap();
        let w = WeightSpec::new(alpha, 3.0).unwrap();
        let spec = CommutatorSpec::for_weight(alpha + 2.0, 0, 0.0, &g, &w).unwrap();
        let h1 = packet(&g, -5.0, k1, 3.0);
        let h2 = packet(&g, 4.0, k2, 2.0);
        let lhs = apply_r(&spec, &h1.scale(c1).add(&h2.scale(c2)).unwrap()).unwrap();
        let rhs = apply_r(&spec, &h1).unwrap().scale(c1).add(&apply_r(&spec, &h2).unwrap().scale(c2)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn p0_symmetric(k1 in 0.0f64..2.0, k2 in 0.0f64..2.0, alpha in 0.0f64..1.0) {
        let g = Grid::new(256, 120.0).unwrap();
        let w = WeightSpec::new(alpha, 5.0).unwrap();
        let spec = CommutatorSpec::for_weight(alpha + 2.0, 0, 0.0, &g, &w).unwrap();
        let h1 = packet(&g, -3.0, k1, 3.0);
        let h2 = packet(&g, 2.0, k2, 4.0);
        let a = apply_p(&spec, &h1).unwrap().inner(&h2).unwrap();
        let b = h1.inner(&apply_p(&spec, &h2).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-12));
    }

    #[test]
    fn commutator_reassembles(k in 0.0f64..2.0, alpha in 0.0f64..1.0) {
        let g = Grid::new(256, 120.0).unwrap();
        let w = WeightSpec::new(alpha, 4.0).unwrap();
        let spec = CommutatorSpec::for_weight(alpha + 2.0, 0, 0.0, &g, &w).unwrap();
        let h = packet(&g, 1.0, k, 3.0);
        let r = apply_r(&spec, &h).unwrap();
        let p = apply_p(&spec, &h).unwrap();
        let hph = hilbert(&apply_p(&spec, &hilbert(&h)).unwrap());
        let rebuilt = r.add(&p.sub(&hph).unwrap().scale(0.5)).unwrap().scale(-1.0);
        let f = spec.weight();
        let direct = hilbert_fractional(&f.mul(&h).unwrap(), alpha + 2.0).unwrap()
            .sub(&f.mul(&hilbert_fractional(&h, alpha + 2.0).unwrap()).unwrap()).unwrap();
        prop_assert!(rebuilt.max_abs_diff(&direct).unwrap() <= 1e-10 * direct.max_abs().max(1e-12));
    }

    #[test]
    fn coercive_terms_nonnegative(seed in any::<u64>(), alpha in 0.05f64..1.0, scale in 1.0f64..20.0) {
        let u = field(256, 200.0, 60, seed);
        let w = WeightSpec::new(alpha, scale).unwrap();
        let d = step2_a3_decomposition(&u, &w, alpha, 0.1).unwrap();
        prop_assert!(d.a32 >= 0.0 && d.a33 >= 0.0);
    }

    #[test]
    fn j_nonnegative_and_dominated(seed in any::<u64>(), alpha in 0.0f64..1.0, t in 3.0f64..300.0) {
        let u = field(128, 60.0, 30, seed);
        let law = WindowLaw::new(0.0, 1.0).unwrap();
        let j = weighted_j(&u, t, &law, alpha).unwrap();
        let flat = WindowLaw::new(0.0, 1e15).unwrap();
        let j_flat = weighted_j(&u, t, &flat, alpha).unwrap();
        prop_assert!(j >= 0.0);
        prop_assert!(j <= j_flat * (1.0 + 1e-12));
    }

    #[test]
    fn window_monotone(t1 in 2.72f64..1e6, t2 in 2.72f64..1e6, a in 0.0f64..0.9, c in 0.01f64..100.0) {
        let law = WindowLaw::new(a, c).unwrap();
        let lo = t1.min(t2).max(law.t_min() * 1.0001);
        let hi = t1.max(t2);
        if hi > lo * (1.0 + 1e-9) {
            prop_assert!(law.lambda(hi).unwrap() > law.lambda(lo).unwrap());
        }
    }

    #[test]
    fn log_sequence_increasing(eps in 0.1f64..2.0, alpha in 0.0f64..1.0, t_min in 0.0f64..3.0) {
        prop_assume!(t_min.powf(eps * (alpha + 2.0)) < 30.0);
        let s = sample_times(eps, alpha, 20, t_min).unwrap();
        prop_assert!(s.times[0] >= t_min);
        prop_assert!(s.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn gn_ratio_trivial_at_two(seed in any::<u64>(), alpha in 0.0f64..1.0) {
        let u = field(64, 20.0, 15, seed);
        prop_assert!((gn_check(&u, 2.0, alpha).unwrap() - 1.0).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn evolution_conserves_mass_and_reverses(amp in 0.1f64..1.0, width in 2.0f64..5.0, alpha in 0.0f64..1.0) {
        let g = Grid::new(256, 80.0).unwrap();
        let u0 = RealField::from_fn(&g, |x: f64| amp * (-(x / width).powi(2)).exp());
        let p = EquationParams::new(alpha, 0.01, 4.0);
        let fwd = evolve(&u0, &p, &[0.0, 2.0, 4.0]).unwrap();
        let (dm, _, _) = fwd.drifts();
        prop_assert!(dm <= 1e-13);
        let back = evolve(&fwd.states[2], &p.reversed(), &[4.0]).unwrap();
        prop_assert!(back.states[0].max_abs_diff(&fwd.states[0]).unwrap() <= 1e-8);
    }

    #[test]
    fn running_minimum_nonincreasing(amp in 0.1f64..1.0, alpha in 0.2f64..1.0) {
        let g = Grid::new(256, 100.0).unwrap();
        let u0 = RealField::from_fn(&g, |x: f64| amp * (-(x / 3.0).powi(2)).exp());
        let times: Vec<f64> = (3..=10).map(|k| k as f64).collect();
        let tr = evolve(&u0, &EquationParams::new(alpha, 0.02, 10.0), &times).unwrap();
        let law = WindowLaw::new(0.0, 1.0).unwrap();
        let rep = decay_report(&tr, &law, alpha).unwrap();
        prop_assert!(rep.running_min.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(rep.j_values.iter().all(|j| *j >= 0.0));
    }
}
