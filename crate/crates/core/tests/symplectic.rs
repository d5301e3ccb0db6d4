mod common;

use common::{matrix_rel_diff, random_elliptic, random_sl2, rng};
use proptest::prelude::*;
use quasifloquet::floquet::rotation_block;
use quasifloquet::symplectic::{
    classify, delta_kick, free_propagator, from_transfer_matrix, hyperbolic_propagator, multiply,
    oscillator_propagator, to_transfer_matrix, ClassKind, HyperbolicParams, KickSign, KickStrength,
    OscillatorParams,
};
use quasifloquet::SymplecticMatrix;

fn matrix() -> impl Strategy<Value = SymplecticMatrix> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_filter_map("singular", |(a, b, c)| {
        // solve ad - bc = 1 for d
        (a.abs() > 0.1).then(|| SymplecticMatrix::new(a, b, c, (1.0 + b * c) / a).ok())?
    })
}

proptest! {
    #[test]
    fn class_is_conjugation_invariant(g in matrix(), q in matrix()) {
        let conj = g.conjugate_by(&q);
        prop_assert!((classify(&g).half_trace - classify(&conj).half_trace).abs()
            <= 1e-10 * conj.scale().max(1.0));
    }

    #[test]
    fn transfer_round_trip(g in matrix(), m in 0.05f64..20.0) {
        let t = to_transfer_matrix(&g, m).unwrap();
        prop_assert_eq!(to_transfer_matrix(&t, 1.0).unwrap(), t);
        let back = from_transfer_matrix(&t, m).unwrap();
        prop_assert!(back.max_abs_diff(&g) <= 1e-12 * g.scale().max(1.0) * m.max(1.0 / m));
        prop_assert!((t.trace() - g.trace()).abs() <= 1e-12 * g.scale().max(1.0) * m.max(1.0 / m));
    }

    #[test]
    fn oscillator_has_unit_det(t in -50.0f64..50.0) {
        let p = OscillatorParams::new(2.0, 3.0).unwrap();
        prop_assert!((oscillator_propagator(&p, t).det() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn free_group_law(t1 in -10.0f64..10.0, t2 in -10.0f64..10.0) {
        let lhs = free_propagator(1.0, t1).unwrap() * free_propagator(1.0, t2).unwrap();
        prop_assert!(lhs.max_abs_diff(&free_propagator(1.0, t1 + t2).unwrap()) <= 1e-12);
    }

    #[test]
    fn eigenvalue_dichotomy(g in matrix()) {
        let class = classify(&g);
        let [l1, l2] = g.eigenvalues();
        match class.kind {
            ClassKind::Elliptic => {
                prop_assert!((l1.norm() - 1.0).abs() <= 1e-9);
                prop_assert!((l2.norm() - 1.0).abs() <= 1e-9);
            }
            ClassKind::Hyperbolic => {
                prop_assert!(l1.im == 0.0 && l2.im == 0.0);
                prop_assert!(l1.re.abs() > 1.0);
                prop_assert!((l1.re * l2.re - 1.0).abs() <= 1e-9);
            }
            _ => {}
        }
    }
}

#[test]
fn long_chains_stay_symplectic() {
    let mut r = rng(11);
    let frame = random_sl2(&mut r, 0.5);
    let chain: Vec<SymplecticMatrix> = (0..10_000)
        .map(|i| rotation_block(1.0, 0.37 + 1e-3 * i as f64).conjugate_by(&frame))
        .collect();
    let g = multiply(&chain).unwrap();
    assert!(g.scale() <= 10.0);
    assert!((g.det() - 1.0).abs() <= 1e-9);
}

#[test]
fn twenty_random_elliptic_factors() {
    let mut r = rng(5);
    let gs: Vec<_> = (0..20).map(|_| random_elliptic(&mut r, 0.3)).collect();
    let g = multiply(&gs).unwrap();
    assert!((g.det() - 1.0).abs() <= 1e-9);
    let mut by_hand = SymplecticMatrix::identity();
    for f in &gs {
        by_hand = by_hand * *f;
    }
    assert!(matrix_rel_diff(&g, &by_hand) <= 1e-15);
}

#[test]
fn kick_limit_error_is_bounded_by_eps() {
    // the limit mω²T = u′ with ωT = ε → 0; entry errors vanish at least as fast as ε
    let u_prime = 2.0;
    let kick = delta_kick(&KickStrength::new(u_prime, KickSign::Negative).unwrap());
    let pos_kick = delta_kick(&KickStrength::new(u_prime, KickSign::Positive).unwrap());
    for eps in [1e-2, 1e-3, 1e-4] {
        let omega = u_prime / eps;
        let t = eps / omega;
        let osc = oscillator_propagator(&OscillatorParams::new(1.0, omega).unwrap(), t);
        assert!(osc.max_abs_diff(&kick) <= eps, "eps {eps}");
        let hyp = hyperbolic_propagator(&HyperbolicParams::new(1.0, omega).unwrap(), t);
        assert!(hyp.max_abs_diff(&pos_kick) <= eps, "eps {eps}");
    }
}
