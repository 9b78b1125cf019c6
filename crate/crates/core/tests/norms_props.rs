use disklab::functions::AnalyticFunction;
use disklab::norms::{averaged_max_phi, nontangential_max, radial_max, sup_mean, PolarSamples};
use disklab::quadrature::QuadConfig;
use disklab::weights::{parse_weight, RadialWeight};
use disklab::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly() -> impl Strategy<Value = AnalyticFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..12)
        .prop_map(AnalyticFunction::Taylor)
}

fn family(seed: u64, n: usize) -> Vec<AnalyticFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=12);
            AnalyticFunction::Taylor((0..=d).map(|_| Complex64::new(rng.gen(), rng.gen())).collect())
        })
        .collect()
}

fn cfg() -> QuadConfig {
    QuadConfig { n_theta: 64, ..QuadConfig::default() }
}

fn weights() -> [RadialWeight; 3] {
    ["const:c=1", "std:gamma=1,norm=true", "exp:c=1,alpha=1,l=1"].map(|s| parse_weight(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tent_equals_scaled_mixed_when_p_is_q(f in poly(), p in 0.5f64..4.0, wi in 0usize..3) {
        let w = &weights()[wi];
        let s = PolarSamples::sample(&|z| f.eval(z).norm(), &cfg()).unwrap();
        let (l, t) = (s.mixed(p, p, w), s.tent(p, p, w, 1.0));
        prop_assert!((t / (2f64.powf(1.0 / p) * l) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn radial_below_nontangential(f in poly(), r in 0.05f64..0.99, t in -3.1f64..3.1, m in 0.5f64..3.0) {
        let z = Complex64::from_polar(r, t);
        let q = cfg();
        prop_assert!(radial_max(&f, z) <= nontangential_max(&f, m, z, &q) * (1.0 + 1e-9));
    }

    #[test]
    fn nontangential_grows_with_opening(f in poly(), t in -3.1f64..3.1, m in 0.3f64..3.0, dm in 0.0f64..3.0) {
        let xi = Complex64::from_polar(1.0, t);
        let q = cfg();
        prop_assert!(nontangential_max(&f, m, xi, &q) <= nontangential_max(&f, m + dm, xi, &q) * (1.0 + 1e-9));
    }
}

#[test]
fn averaged_maximal_is_non_decreasing_in_r() {
    let q = cfg();
    for f in family(21, 20) {
        let mut prev = 0.0;
        for i in 0..12 {
            let r = i as f64 / 12.0;
            let v = averaged_max_phi(&f, 1.0, 2.0, r, 0.4, &q);
            assert!(v >= prev * (1.0 - 1e-9), "r {r}: {v} < {prev}");
            prev = v;
        }
    }
}

/// Measurable family: polynomial moduli times an angular bump.
fn bumpy(seed: u64, n: usize) -> Vec<(AnalyticFunction, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    family(seed, n).into_iter().map(|f| (f, rng.gen_range(-3.0..3.0), rng.gen_range(0.05..1.0))).collect()
}

#[test]
fn tent_and_mixed_inclusions() {
    let q = cfg();
    let w = RadialWeight::constant(1.0).unwrap();
    let mut worst_pq = 0.0f64;
    let mut worst_qp = 0.0f64;
    for (f, c, s) in bumpy(4, 20) {
        let g = |z: Complex64| f.eval(z).norm() * (-(disklab::geometry::angle_dist(z.arg(), c) / s).powi(2)).exp();
        let ps = PolarSamples::sample(&g, &q).unwrap();
        worst_pq = worst_pq.max(ps.tent(1.0, 2.0, &w, 1.0) / ps.mixed(1.0, 2.0, &w));
        worst_qp = worst_qp.max(ps.mixed(2.0, 1.0, &w) / ps.tent(2.0, 1.0, &w, 1.0));
    }
    assert!(worst_pq < 10.0, "T/L for p<q: {worst_pq}");
    assert!(worst_qp < 10.0, "L/T for q<p: {worst_qp}");
}

#[test]
fn growth_bound_holds_with_one_constant() {
    let q = cfg();
    let w = RadialWeight::standard(0.0, true).unwrap();
    for (p, qq) in [(2.0, 1.0), (1.0, 2.0)] {
        let mut ratios = vec![];
        for f in family(8, 20) {
            let norm = PolarSamples::sample(&|z| f.eval(z).norm(), &q).unwrap().mixed(p, qq, &w);
            for (r, rho) in [(0.5, 0.75), (0.8, 0.9)] {
                for n in [0usize, 1] {
                    let m = sup_mean(&f.derivative(n), r, 512);
                    ratios.push(m * w.tail_integral(rho).powf(1.0 / p) * (rho - r).powf(1.0 / qq + n as f64) / norm);
                }
            }
        }
        let c = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(c.is_finite() && c < 10.0, "p {p} q {qq}: {c}");
    }
}
