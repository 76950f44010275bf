use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use bandpredict::bandlimit::{detect, ln_weight_h, WeightProfile};
use bandpredict::harness::{evaluate, generate, GeneratorSpec};
use bandpredict::predictor::{
    build_kernel, error_transfer_magnitude, predict_one_step, transfer_at, KernelSpec,
};
use bandpredict::seq::{NormOrder, SequenceWindow, TwoSidedWindow};
use bandpredict::transforms::{
    circle_spectrum, extend, inv_xi1, inv_xi2, xi1, xi1_with, xi2, xi2_with, ExtensionMode, FrequencyGrid,
    TransformMethod,
};

fn window(max_len: usize) -> impl Strategy<Value = SequenceWindow> {
    prop::collection::vec(-1.0e3..1.0e3f64, 1..=max_len).prop_map(|v| SequenceWindow::new(v).unwrap())
}

fn decaying(max_len: usize) -> impl Strategy<Value = SequenceWindow> {
    (prop::collection::vec(-1.0..1.0f64, 1..=max_len), 0.3..0.95f64).prop_map(|(v, r)| {
        let n = v.len();
        let vals = v.iter().enumerate().map(|(i, x)| x * r.powi((n - 1 - i) as i32)).collect();
        SequenceWindow::new(vals).unwrap()
    })
}

fn orders() -> [NormOrder; 3] {
    [NormOrder::L1, NormOrder::L2, NormOrder::Inf]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn l2_norm_matches_direct_loop(w in window(4096)) {
        let mut ss = 0.0;
        for v in w.values() {
            ss += v * v;
        }
        let n = w.norm(NormOrder::L2);
        prop_assert!((n * n - ss).abs() <= 1e-12 * ss.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn shift_never_increases_norm(w in window(256)) {
        let s = w.shift();
        for r in orders() {
            prop_assert!(s.norm(r) <= w.norm(r));
        }
    }

    #[test]
    fn reads_outside_the_range_are_zero(w in window(64), far in 1i64..10_000) {
        prop_assert_eq!(w.get(far), 0.0);
        prop_assert_eq!(w.get(w.first_t() - far), 0.0);
        let two = extend(&w, ExtensionMode::Symmetric);
        prop_assert_eq!(two.get(two.half_len() as i64 - 1 + far), 0.0);
    }

    #[test]
    fn two_sided_norm_orders(v in prop::collection::vec(-5.0..5.0f64, 0..40usize)) {
        let mut v = v;
        v.push(1.0);
        if v.len() % 2 == 0 { v.push(0.5); }
        let w = TwoSidedWindow::new(v).unwrap();
        prop_assert!(w.norm(NormOrder::Inf) <= w.norm(NormOrder::L2) + 1e-15);
        prop_assert!(w.norm(NormOrder::L2) <= w.norm(NormOrder::L1) + 1e-12);
    }

    #[test]
    fn transforms_round_trip(w in decaying(128), extra in 0usize..64) {
        let g = FrequencyGrid::new(2 * w.len() + extra).unwrap();
        let a = inv_xi1(&xi1(&w, g), w.len()).unwrap();
        let b = inv_xi2(&xi2(&w, g), w.len()).unwrap();
        for ((x, y), z) in w.values().iter().zip(a.values()).zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-12);
            prop_assert!((x - z).abs() <= 1e-12);
        }
    }

    #[test]
    fn transforms_are_linear(
        v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64usize),
        alpha in -3.0..3.0f64,
        beta in -3.0..3.0f64,
    ) {
        let u = SequenceWindow::new(v.iter().map(|p| p.0).collect()).unwrap();
        let w = SequenceWindow::new(v.iter().map(|p| p.1).collect()).unwrap();
        let mix = u.combine(alpha, &w, beta).unwrap();
        let g = FrequencyGrid::new(128).unwrap();
        let (cu, cw, cm) = (xi1(&u, g), xi1(&w, g), xi1(&mix, g));
        let (su, sw, sm) = (xi2(&u, g), xi2(&w, g), xi2(&mix, g));
        for j in 0..=128 {
            let c = alpha * cu.samples()[j] + beta * cw.samples()[j];
            let s = alpha * su.tail.samples()[j] + beta * sw.tail.samples()[j];
            prop_assert!((cm.samples()[j] - c).abs() <= 1e-12);
            prop_assert!((sm.tail.samples()[j] - s).abs() <= 1e-12);
        }
        prop_assert!((sm.scalar - (alpha * su.scalar + beta * sw.scalar)).abs() <= 1e-12);
    }

    #[test]
    fn extension_relations_and_conjugate_symmetry(w in decaying(64)) {
        let m = 2 * w.len().max(2);
        let g = FrequencyGrid::new(m).unwrap();
        let c = xi1(&w, g);
        let s = xi2(&w, g);
        let sym = circle_spectrum(&extend(&w, ExtensionMode::Symmetric), 2 * m).unwrap();
        let anti = circle_spectrum(&extend(&w, ExtensionMode::Antisymmetric), 2 * m).unwrap();
        for j in 0..2 * m {
            let (node, sign) = if j <= m { (j, 1.0) } else { (2 * m - j, -1.0) };
            prop_assert!((sym.samples()[j] - Complex64::new(c.samples()[node], 0.0)).norm() <= 1e-12);
            let want = Complex64::new(s.scalar, sign * s.tail.samples()[node]);
            prop_assert!((anti.samples()[j] - want).norm() <= 1e-12);
        }
        prop_assert!(sym.conjugate_symmetry_defect() <= 1e-12);
        prop_assert!(anti.conjugate_symmetry_defect() <= 1e-12);
    }

    #[test]
    fn fast_path_matches_direct(w in decaying(300), m in 2usize..900) {
        let g = FrequencyGrid::new(m).unwrap();
        let a = xi1_with(&w, g, TransformMethod::Direct);
        let b = xi1_with(&w, g, TransformMethod::Fast);
        prop_assert!(a.max_abs_diff(&b) <= 1e-13);
        let a = xi2_with(&w, g, TransformMethod::Direct);
        let b = xi2_with(&w, g, TransformMethod::Fast);
        prop_assert!(a.tail.max_abs_diff(&b.tail) <= 1e-13);
    }

    #[test]
    fn weight_increases_in_omega_and_c(c in 0.05..5.0f64, q in 1.05..6.0f64, a in 0.0..3.1f64, b in 0.0..3.1f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        let p = WeightProfile::new(c, q).unwrap();
        prop_assert!(ln_weight_h(lo, p) < ln_weight_h(hi, p));
        let p2 = WeightProfile::new(c * 1.5, q).unwrap();
        prop_assert!(ln_weight_h(lo, p2) > ln_weight_h(lo, p));
    }

    #[test]
    fn loosening_tol_never_widens_the_band(w in decaying(64), k in -12i32..-2) {
        let g = FrequencyGrid::new(256).unwrap();
        let tight = detect(&w, g, 10f64.powi(k)).unwrap();
        let loose = detect(&w, g, 10f64.powi(k + 2)).unwrap();
        if let Some(t) = tight.omega_hat {
            prop_assert!(loose.omega_hat.is_some_and(|l| l <= t));
        }
        prop_assert!(tight.residual_i >= 0.0 && tight.residual_ii >= 0.0);
    }

    #[test]
    fn error_transfer_identity(gamma in 1.0..8.0f64, mu in 1.1..3.0f64, q in 3.0..10.0f64, x in 0.0..0.95f64) {
        let spec = match KernelSpec::new(gamma, mu, q) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let omega = x * PI;
        let z = Complex64::from_polar(1.0, omega);
        let k = transfer_at(z, &spec).unwrap().finite().unwrap();
        let closed = error_transfer_magnitude(omega, &spec);
        let floor = 8.0 * f64::EPSILON / closed;
        prop_assert!(((z - k).norm() - closed).abs() / closed <= 1e-12f64.max(floor));
    }

    #[test]
    fn error_transfer_falls_with_gamma(g in 1.0..20.0f64, dg in 0.01..5.0f64, x in 0.0..0.95f64) {
        let a = KernelSpec::new(g, 1.5, 4.0).unwrap();
        let Ok(b) = KernelSpec::new(g + dg, 1.5, 4.0) else { return Ok(()) };
        // strictly decreasing where the exponent is negative
        let omega = x * PI;
        let ea = error_transfer_magnitude(omega, &a);
        let eb = error_transfer_magnitude(omega, &b);
        if ea < 1.0 && omega <= PI / 2.0 {
            prop_assert!(eb < ea);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn leading_tap_is_gamma(gamma in 0.6..6.0f64, mu in 1.1..2.0f64, q in 4.0..9.0f64) {
        let Ok(spec) = KernelSpec::new(gamma, mu, q) else { return Ok(()) };
        let k = build_kernel(&spec, 65536, 1e-10).unwrap();
        prop_assert!(((k.taps()[0] - gamma) / gamma).abs() <= 1e-6);
        prop_assert!(k.tail_mass() <= 1e-10);
        prop_assert!(k.taps().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn prediction_is_linear_and_norms_ordered(
        v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 120..200usize),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let k = build_kernel(&KernelSpec::new(2.0, 1.5, 4.0).unwrap(), 4096, 1e-10).unwrap();
        let u = SequenceWindow::new(v.iter().map(|p| p.0).collect()).unwrap();
        let w = SequenceWindow::new(v.iter().map(|p| p.1).collect()).unwrap();
        let ru = predict_one_step(&u, &k).unwrap();
        let rw = predict_one_step(&w, &k).unwrap();
        let rm = predict_one_step(&u.combine(alpha, &w, beta).unwrap(), &k).unwrap();
        for i in 0..rm.predictions.len() {
            let want = alpha * ru.predictions[i] + beta * rw.predictions[i];
            prop_assert!((rm.predictions[i] - want).abs() <= 1e-10);
        }
        for r in [&ru, &rw, &rm] {
            prop_assert!(r.error_linf <= r.error_l2);
            prop_assert_eq!(evaluate(r, NormOrder::L2).unwrap(), r.error_l2);
            prop_assert!(evaluate(r, NormOrder::Inf).unwrap() <= evaluate(r, NormOrder::L2).unwrap());
        }
    }

    #[test]
    fn generation_is_reproducible(seed in any::<u64>(), anti in any::<bool>(), band in 0.3..2.8f64) {
        let mode = if anti { ExtensionMode::Antisymmetric } else { ExtensionMode::Symmetric };
        let g = FrequencyGrid::new(512).unwrap();
        let spec = GeneratorSpec::band_limited(mode, band, 200, seed);
        let a = generate(&spec, g).unwrap();
        let b = generate(&spec, g).unwrap();
        let bits = |w: &SequenceWindow| w.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }
}
