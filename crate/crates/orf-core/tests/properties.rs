//! Randomized invariants: boundary preservation of the Moebius maps, exact
//! factorization and unitarity of the five-diagonal truncations, zero
//! location, parameter identities, and validation behavior of measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use orf_core::{
    blaschke, build_matrix, cayley, derived_params, eval_orf, mass_at_infinity_check,
    mobius_forward, mobius_inverse, porf_u, rl_mobius, zeros_orf, BlaschkeVariant, CPoint,
    DenseMatrix, Direction, DiscreteMeasure, Domain, ParamSeq, PoleSeq, RepKind, RepSpec,
    ZeroRoute,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

fn disk(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, -PI..PI).prop_map(|(r, t)| polar(r, t))
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0, 0.3..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn prop_mobius_preserves_circle(alpha in disk(0.99), t in -PI..PI) {
        let w = mobius_forward(alpha, CPoint::from_complex(polar(1.0, t)));
        prop_assert!(!w.at_infinity);
        let dev = (w.expect_finite().norm() - 1.0).abs();
        prop_assert!(dev < 1e-13, "modulus deviates by {dev:.3e}");
    }

    #[test]
    fn prop_mobius_roundtrip(alpha in disk(0.95), z in disk(2.0)) {
        let fwd = mobius_forward(alpha, CPoint::from_complex(z));
        prop_assume!(!fwd.at_infinity);
        let back = mobius_inverse(alpha, fwd);
        prop_assume!(!back.at_infinity);
        let err = (back.expect_finite() - z).norm();
        prop_assert!(err < 1e-12 * z.norm().max(1.0), "roundtrip error {err:.3e}");
    }

    #[test]
    fn prop_mobius_difference_form(alpha in disk(0.9), z in disk(0.98), lam in disk(0.98)) {
        let zz = mobius_forward(alpha, CPoint::from_complex(z)).expect_finite();
        let zl = mobius_forward(alpha, CPoint::from_complex(lam)).expect_finite();
        let one = Complex64::new(1.0, 0.0);
        let rhs = Complex64::new(1.0 - alpha.norm_sqr(), 0.0)
            / ((one - alpha.conj() * z) * (one - alpha.conj() * lam))
            * (z - lam);
        let err = (zz - zl - rhs).norm();
        prop_assert!(err < 1e-12, "difference form residual {err:.3e}");
    }

    #[test]
    fn prop_blaschke_interleaves(
        alphas in vec(disk(0.8), 2..10),
        z in disk(0.95),
    ) {
        let n = alphas.len() / 2;
        let alphas = alphas[..2 * n].to_vec();
        let poles = PoleSeq::circle(alphas).unwrap();
        let zp = CPoint::from_complex(z);
        let full = blaschke(&poles, 2 * n, zp, BlaschkeVariant::Full);
        let odd = blaschke(&poles, n, zp, BlaschkeVariant::Odd);
        let even = blaschke(&poles, n, zp, BlaschkeVariant::Even);
        prop_assume!(full.is_ok() && odd.is_ok() && even.is_ok());
        let err = (full.unwrap() - odd.unwrap() * even.unwrap()).norm();
        prop_assert!(err < 1e-13, "split product differs by {err:.3e}");
    }

    #[test]
    fn prop_derived_rho_consistency(
        avals in vec(disk(0.9), 1..10),
        alphas in vec(disk(0.7), 10..11),
    ) {
        let n = avals.len();
        let a = ParamSeq::new(avals).unwrap();
        let poles = PoleSeq::circle(alphas).unwrap();
        let d = derived_params(&a, &poles).unwrap();
        for k in 1..=n {
            let gap = (d.rho_plus(k) * d.rho_minus(k) - d.rho(k) * d.rho(k)).abs();
            prop_assert!(gap < 1e-14, "rho product gap {gap:.3e} at k={k}");
            prop_assert!(d.e(k) > 0.0, "nonpositive normalizer at k={k}");
        }
    }

    #[test]
    fn prop_orf_boundary_modulus(
        avals in vec(disk(0.85), 1..8),
        alphas in vec(disk(0.6), 8..9),
        t in -PI..PI,
    ) {
        let n = avals.len();
        let a = ParamSeq::new(avals).unwrap();
        let poles = PoleSeq::circle(alphas).unwrap();
        let val = eval_orf(&a, &poles, n, CPoint::from_complex(polar(1.0, t))).unwrap();
        let rel = (val.phi.norm() - val.phi_star.norm()).abs() / val.phi_star.norm();
        prop_assert!(rel < 1e-10, "|phi| and |phi*| differ by {rel:.3e} on the circle");
    }

    #[test]
    fn prop_closed_cmv_unitary_and_factored(
        avals in vec(disk(0.95), 1..12),
        t in -PI..PI,
    ) {
        let n = avals.len();
        let a = ParamSeq::new(avals).unwrap();
        let poles = PoleSeq::circle(Vec::new()).unwrap();
        let u = polar(1.0, t);
        let spec = |kind, boundary| RepSpec { kind, n, boundary };
        let closed = build_matrix(&a, &poles, &spec(RepKind::Cmv, Some(u))).unwrap();
        let defect = (closed.adjoint() * closed.clone() - DenseMatrix::identity(n, n)).norm();
        prop_assert!(defect < 1e-12, "unitarity defect {defect:.3e}");
        let odd_u = if n % 2 == 1 { Some(u) } else { None };
        let even_u = if n % 2 == 0 { Some(u) } else { None };
        let co = build_matrix(&a, &poles, &spec(RepKind::CmvOdd, odd_u)).unwrap();
        let ce = build_matrix(&a, &poles, &spec(RepKind::CmvEven, even_u)).unwrap();
        prop_assert!(co * ce == closed, "factorization is not entrywise exact");
    }

    #[test]
    fn prop_zeros_inside_disk(
        avals in vec(disk(0.9), 1..8),
        alphas in vec(disk(0.7), 8..9),
    ) {
        let n = avals.len();
        let a = ParamSeq::new(avals).unwrap();
        let poles = PoleSeq::circle(alphas).unwrap();
        let zeros = zeros_orf(&a, &poles, n, ZeroRoute::U).unwrap();
        for z in zeros {
            prop_assert!(z.norm() < 1.0, "zero {z} escapes the open disk");
        }
    }

    #[test]
    fn prop_porf_boundary_unimodular(an in disk(0.95), t in -PI..PI) {
        let u = porf_u(an, polar(1.0, t)).unwrap();
        let dev = (u.norm() - 1.0).abs();
        prop_assert!(dev < 1e-12, "boundary value off the circle by {dev:.3e}");
    }

    #[test]
    fn prop_line_mobius_sends_reals_to_circle(alpha in upper(), x in -50.0..50.0) {
        let w = rl_mobius(alpha, CPoint::new(x, 0.0), Direction::Forward);
        prop_assert!(!w.at_infinity);
        let dev = (w.expect_finite().norm() - 1.0).abs();
        prop_assert!(dev < 1e-13, "image modulus deviates by {dev:.3e}");
    }

    #[test]
    fn prop_cayley_roundtrip(re in -5.0..5.0, im in 0.0..5.0) {
        let z = Complex64::new(re, im);
        let fwd = cayley(CPoint::from_complex(z), Direction::Forward);
        prop_assume!(!fwd.at_infinity);
        let back = cayley(fwd, Direction::Inverse);
        prop_assume!(!back.at_infinity);
        let err = (back.expect_finite() - z).norm();
        prop_assert!(err < 1e-12 * z.norm().max(1.0), "roundtrip error {err:.3e}");
    }

    #[test]
    fn prop_measure_rejects_unnormalized(
        raw in vec(0.2..1.0f64, 2..6),
        off in 0.05..0.5f64,
    ) {
        let p = raw.len();
        let points: Vec<CPoint> = (0..p)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / p as f64;
                CPoint::new(t.cos(), t.sin())
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let good: Vec<f64> = raw.iter().map(|w| w / total).collect();
        prop_assert!(DiscreteMeasure::new(Domain::Circle, points.clone(), good.clone()).is_ok());
        let bad: Vec<f64> = good.iter().map(|w| w * (1.0 + off)).collect();
        prop_assert!(DiscreteMeasure::new(Domain::Circle, points, bad).is_err());
    }

    #[test]
    fn prop_mass_report_margin_nonnegative(
        avals in vec(disk(0.9), 1..6),
        t in -PI..PI,
    ) {
        let n = avals.len();
        let mut vals = avals;
        vals.pop();
        let a = ParamSeq::with_terminal(vals, polar(1.0, t)).unwrap();
        let report = mass_at_infinity_check(&a, n).unwrap();
        prop_assert!(report.margin >= 0.0, "negative margin {}", report.margin);
        prop_assert_eq!(report.present, report.margin < 1e-9);
    }
}
