use disklab::functions::{integrate_tg, integrate_tga, AnalyticFunction, MomentKernel, D_TRUNC};
use disklab::norms::PolarSamples;
use disklab::quadrature::QuadConfig;
use disklab::weights::RadialWeight;
use disklab::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..10)
}

fn taylor(f: &AnalyticFunction) -> Vec<Complex64> {
    match f {
        AnalyticFunction::Taylor(c) => c.clone(),
        _ => panic!("expected a Taylor series"),
    }
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    let n = a.len().max(b.len());
    let at = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    (0..n).all(|i| (at(a, i) - at(b, i)).norm() < 1e-12 * (1.0 + at(b, i).norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tga_with_n1_is_tg(f in poly(), g in poly()) {
        let (f, g) = (AnalyticFunction::Taylor(f), AnalyticFunction::Taylor(g));
        let a = integrate_tga(&f, &g, &[], 1, D_TRUNC).unwrap();
        let b = integrate_tg(&f, &g, D_TRUNC);
        prop_assert!(close(&taylor(&a.function), &taylor(&b.function)));
    }

    #[test]
    fn derivative_of_tg_is_f_dg(f in poly(), g in poly()) {
        let (fa, ga) = (AnalyticFunction::Taylor(f.clone()), AnalyticFunction::Taylor(g.clone()));
        let lhs = taylor(&integrate_tg(&fa, &ga, D_TRUNC).function.derivative(1));
        let dg = taylor(&ga.derivative(1));
        let mut rhs = vec![Complex64::default(); f.len() + dg.len()];
        for (i, x) in f.iter().enumerate() {
            for (j, y) in dg.iter().enumerate() {
                rhs[i + j] += x * y;
            }
        }
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn moment_kernel_reproduces_unit_weight_kernel(ar in 0.0f64..0.9, at in -3.2f64..3.2, zr in 0.0f64..0.89, zt in -3.2f64..3.2) {
        let a = Complex64::from_polar(ar, at);
        let z = Complex64::from_polar(zr, zt);
        prop_assume!(ar * zr <= 0.8);
        let mk = MomentKernel::new(a, RadialWeight::constant(1.0).unwrap(), 400).unwrap();
        let exact = (Complex64::new(1.0, 0.0) - a.conj() * z).powi(-2);
        let v = AnalyticFunction::MomentKernel(mk).eval(z);
        prop_assert!((v - exact).norm() < 1e-9 * exact.norm());
    }
}

#[test]
fn dilations_are_uniformly_bounded() {
    let cfg = QuadConfig { n_theta: 64, ..QuadConfig::default() };
    let w = RadialWeight::standard(1.0, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut next = || rng.gen_range(-1.0..1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = AnalyticFunction::Taylor((0..9).map(|_| Complex64::new(next(), next())).collect());
        let base = PolarSamples::sample(&|z| f.eval(z).norm(), &cfg).unwrap();
        for lam in [0.3, 0.6, 0.9, 0.99] {
            let fl = f.dilate(Complex64::new(lam, 0.0));
            let s = PolarSamples::sample(&|z| fl.eval(z).norm(), &cfg).unwrap();
            for (p, q) in [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0)] {
                worst = worst.max(s.mixed(p, q, &w) / base.mixed(p, q, &w));
            }
        }
    }
    assert!(worst.is_finite() && worst < 5.0, "{worst}");
}
