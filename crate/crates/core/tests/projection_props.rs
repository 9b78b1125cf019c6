use disklab::functions::AnalyticFunction;
use disklab::projection::{
    boundary_grid, condition_bp, discrete_kernel_d, jn_index, jn_surrogate, kernel_htilde, kernel_ktilde, kernel_sample,
    project, ProjectionSpec,
};
use disklab::quadrature::QuadConfig;
use disklab::weights::parse_weight;
use disklab::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn sandwich_and_surrogate(u in prop::array::uniform4(0.0f64..1.0), gi in 0usize..2) {
        let gamma = gi as f64;
        let (th, ph, x, y) = kernel_sample(u);
        let (r, rho) = (1.0 - x, 1.0 - y);
        let (x, y) = (1.0 - r, 1.0 - rho);
        let h = kernel_htilde(th, ph, x, y, gamma);
        let d = discrete_kernel_d(th, ph, r, rho, gamma);
        prop_assert!(h / 2f64.powf(2.0 + gamma) - 1e-12 <= d && d <= h + 1e-12);
        // the single sampled constant of the acceptance run stays below 2
        prop_assert!(kernel_ktilde(th, ph, r, rho, gamma) <= 2.0 * d);
        if let (Some(_), Some(s)) = (jn_index(th, ph, x, y), jn_surrogate(th, ph, x, y, gamma)) {
            prop_assert!(s >= h / 8.0 && s <= 8.0 * h);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn projection_reproduces_polynomials(
        c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..9),
        r in 0.0f64..0.9,
        t in -3.1f64..3.1,
        gi in 0usize..2,
    ) {
        let f = AnalyticFunction::Taylor(c);
        let z = Complex64::from_polar(r, t);
        let cfg = QuadConfig { gl_order: 12, n_theta: 32, rel_tol: 1e-9, ..QuadConfig::default() };
        let v = project(&|w| f.eval(w), gi as f64, z, &cfg, false).unwrap();
        prop_assert!((v.value - f.eval(z)).norm() < 1e-3);
    }
}

#[test]
fn bp_is_symmetric_under_duality() {
    let grid = boundary_grid(6, 6);
    for (spec, gamma, p) in [("std:gamma=1,norm=true", 1.0, 2.0), ("std:gamma=0.5,norm=true", 1.0, 3.0), ("const:c=1", 2.0, 1.5)] {
        let s = ProjectionSpec::new(gamma, p, p, parse_weight(spec).unwrap()).unwrap();
        let a = condition_bp(&s, &grid).unwrap();
        let b = condition_bp(&s.dual().unwrap(), &grid).unwrap();
        assert!((a.value / b.value - 1.0).abs() < 1e-6, "{spec}: {} vs {}", a.value, b.value);
    }
}
