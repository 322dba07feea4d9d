//! Randomized invariants of norms and operators.

use approx::assert_relative_eq;
use intrinsic_lp::grid::{Ball, BallFamily, Grid, GridFunction};
use intrinsic_lp::growth::GrowthFunction;
use intrinsic_lp::norms::{bmo_norm, luxembourg_norm_ball, SpaceSpec};
use intrinsic_lp::verify::SuiteParams;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::interval(-1.0, 1.0, 33).unwrap()
}

fn function(coef: &[f64]) -> GridFunction {
    GridFunction::from_fn(grid(), |x| {
        coef.iter().enumerate().map(|(k, c)| c * ((k as f64 + 1.0) * 1.7 * x[0] + k as f64).sin()).sum()
    })
    .unwrap()
}

fn coefs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn luxembourg_norm_is_homogeneous(a in coefs(), s in 0.1..10.0f64, p in 1.0..4.0f64, r in 0.1..0.9f64) {
        let f = function(&a);
        let phi = GrowthFunction::power(p).unwrap();
        let ball = Ball::new(&[0.0], r);
        let n1 = luxembourg_norm_ball(&f, &phi, &ball).unwrap();
        let n2 = luxembourg_norm_ball(&f.scaled(-s), &phi, &ball).unwrap();
        prop_assume!(n1 > 1e-9);
        assert_relative_eq!(n2, s * n1, max_relative = 1e-9);
    }

    #[test]
    fn oscillation_norms_ignore_constants(a in coefs(), c in -5.0..5.0f64) {
        let f = function(&a);
        let balls = BallFamily::default_for(&grid());
        let campanato = SpaceSpec::campanato(GrowthFunction::power(1.0).unwrap(), 2.0, balls.clone()).unwrap();
        assert_relative_eq!(bmo_norm(&f, &balls).unwrap(), bmo_norm(&f.add_constant(c), &balls).unwrap(), epsilon = 1e-10);
        assert_relative_eq!(
            campanato.norm(&f).unwrap(),
            campanato.norm(&f.add_constant(c)).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn square_function_is_sublinear(a in coefs(), b in coefs()) {
        let op = SuiteParams { kernel_resolution: Some(21), ..Default::default() }.intrinsic(&grid()).unwrap();
        let (f, g) = (function(&a), function(&b));
        let sum = f.zip_with(&g, |x, y| x + y).unwrap();
        let (sf, sg, ss) = (op.s_alpha(&f).unwrap(), op.s_alpha(&g).unwrap(), op.s_alpha(&sum).unwrap());
        for i in 0..ss.values().len() {
            prop_assert!(ss.values()[i] <= sf.values()[i] + sg.values()[i] + 1e-10);
        }
    }

    #[test]
    fn operators_are_positively_homogeneous(a in coefs(), s in -4.0..4.0f64) {
        let op = SuiteParams { kernel_resolution: Some(21), ..Default::default() }.intrinsic(&grid()).unwrap();
        let f = function(&a);
        let g1 = op.g_alpha(&f).unwrap();
        let g2 = op.g_alpha(&f.scaled(s)).unwrap();
        for (x, y) in g1.values().iter().zip(g2.values()) {
            assert_relative_eq!(*y, s.abs() * x, epsilon = 1e-10, max_relative = 1e-9);
        }
    }

    #[test]
    fn morrey_norm_scales_under_dilation(a in coefs()) {
        // f(x/2) on [-2, 2] has the samples of f on [-1, 1]. Ball integrals and
        // ball measures both double, so the norm picks up 2^{(1-κ)/p}.
        let coarse = grid();
        let wide = Grid::interval(-2.0, 2.0, 33).unwrap();
        let f = function(&a);
        let fw = GridFunction::new(wide.clone(), f.values().to_vec()).unwrap();
        let p = 2.0;
        let kappa = 0.5;
        let spec = |g: &Grid| SpaceSpec::classical_morrey(p, kappa, BallFamily::default_for(g)).unwrap();
        let n1 = spec(&coarse).norm(&f).unwrap();
        let n2 = spec(&wide).norm(&fw).unwrap();
        prop_assume!(n1 > 1e-9);
        assert_relative_eq!(n2, n1 * 2f64.powf((1.0 - kappa) / p), max_relative = 1e-9);
    }
}
