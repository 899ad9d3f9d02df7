use darboux_core::catalog::catalog_get;
use darboux_core::darboux::{second_solution, wronskian, SecondSolutionMethod};
use darboux_core::exactrat::{BiPoly, BiRational, Poly, Rational, RationalFunction};
use darboux_core::kdv::{kdv_residual_exact, kdv_scale, KdvCandidate};
use darboux_core::scattering::{analytic_smatrix, default_radius, numeric_phase_shift, sech_transmission, ScatteringPiece};
use darboux_core::schrodinger::{numerov_integrate, Grid, Start};
use darboux_core::{Family, Func};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn rf() -> impl Strategy<Value = RationalFunction> {
    (poly(3), poly(2)).prop_filter_map("nonzero denominator", |(n, d)| RationalFunction::new(n, d).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_laws(a in rf(), b in rf(), c in rf()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn derivative_laws(a in rf(), b in rf()) {
        prop_assert_eq!((&a * &b).derive(), &(&a.derive() * &b) + &(&a * &b.derive()));
        prop_assert_eq!((&a + &b).derive(), &a.derive() + &b.derive());
    }

    #[test]
    fn exact_and_float_evaluation_agree(a in rf(), x in -3i64..=3, q in 1i64..=3) {
        let at = Rational::new(x.into(), q.into());
        if let Ok(v) = a.eval(&at) {
            let f = a.eval_f64(x as f64 / q as f64).unwrap();
            let e = darboux_core::exactrat::rational_to_f64(&v);
            prop_assert!((f - e).abs() <= 1e-9 * e.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monomial_second_solution_has_unit_wronskian(p in -4i64..=5, a in small_rational(), x in 0.3f64..4.0) {
        prop_assume!(a != Rational::from_integer(0.into()));
        let psi = Func::rational(RationalFunction::power(a, p as i32));
        let chi = second_solution(&psi, 1.0, SecondSolutionMethod::ClosedFormMonomial).unwrap();
        prop_assert!((wronskian(&psi, &chi, x).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kdv_scaling_covariance(
        num in prop::collection::vec((-3i64..=3, 0usize..=3, 0usize..=1), 1..=3),
        base in prop::collection::vec((-3i64..=3, 0usize..=2, 0usize..=1), 1..=3),
        lam in (1i64..=3, 1i64..=2),
    ) {
        let base = BiPoly::from_terms(&base);
        prop_assume!(!base.is_zero());
        let u = BiRational::new(BiPoly::from_terms(&num), base, 1);
        let lambda = Rational::new(lam.0.into(), lam.1.into());
        let KdvCandidate::Rational(scaled) = kdv_scale(&KdvCandidate::Rational(u.clone()), &lambda).unwrap() else {
            unreachable!()
        };
        let l3 = &lambda * &lambda * &lambda;
        let l5 = &l3 * &lambda * &lambda;
        let pulled = kdv_residual_exact(&u).scale_vars(&lambda, &l3).scale(&l5);
        prop_assert!(kdv_residual_exact(&scaled).equals(&pulled));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn numerov_is_fourth_order(k in 1.0f64..3.0, phase in 0.0f64..3.0) {
        let free = catalog_get(&Family::Free).unwrap();
        let err = |h: f64| {
            let grid = Grid::interval(&free, 0.0, 10.0, h).unwrap();
            let s = numerov_integrate(&grid, k * k, Start::PlaneWave { phase });
            s.x.iter()
                .zip(&s.psi)
                .map(|(x, p)| (p * s.log_scale.exp() - (k * x + phase).sin()).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(0.04) / err(0.02)).log2();
        prop_assert!((3.7..4.3).contains(&order), "order {order}");
    }

    #[test]
    fn smatrix_is_unitary(k in 0.1f64..8.0, n in 1u32..=4) {
        for piece in [ScatteringPiece::FirstPartnerRight, ScatteringPiece::FirstPartnerLeft, ScatteringPiece::Right(n.max(2)), ScatteringPiece::Left(n), ScatteringPiece::Centrifugal(n)] {
            prop_assert!((analytic_smatrix(piece, k, 1.3).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let (spec, idx) = ScatteringPiece::Left(n).realize(&Rational::from_integer(1.into())).unwrap();
        let s = numeric_phase_shift(&spec, idx, k, default_radius(k), 1e-3).unwrap().s;
        prop_assert!((s.norm() - 1.0).abs() < 1e-9);
        let t = sech_transmission(n, k.min(4.0), 20.0, 1e-3).unwrap();
        prop_assert!((t.t.norm_sqr() + t.r.norm_sqr() - 1.0).abs() < 1e-8);
    }
}
