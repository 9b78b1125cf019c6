//! Seeded random polynomial families.

use disklab::functions::AnalyticFunction;
use disklab::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` polynomials with degree uniform in `1..=degree` and coefficients uniform in
/// the unit square `[0,1)²` of the complex plane.
pub fn random_polynomials(seed: u64, count: usize, degree: usize) -> Vec<AnalyticFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=degree.max(1));
            let c = (0..=d).map(|_| Complex64::new(rng.gen::<f64>(), rng.gen::<f64>())).collect();
            AnalyticFunction::Taylor(c)
        })
        .collect()
}

/// `n` points uniform in the disc of radius `r_max`.
pub fn random_points(seed: u64, n: usize, r_max: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = r_max * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * std::f64::consts::PI * rng.gen::<f64>())
        })
        .collect()
}

/// Uniform samples in `[0,1)^N`.
pub fn unit_samples<const N: usize>(seed: u64, n: usize) -> Vec<[f64; N]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| std::array::from_fn(|_| rng.gen::<f64>())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_families_repeat() {
        assert_eq!(random_polynomials(7, 5, 12), random_polynomials(7, 5, 12));
        assert_ne!(random_polynomials(7, 5, 12), random_polynomials(8, 5, 12));
        for f in random_polynomials(3, 20, 12) {
            let AnalyticFunction::Taylor(c) = f else { panic!() };
            assert!(c.len() >= 2 && c.len() <= 13);
            assert!(c.iter().all(|z| (0.0..1.0).contains(&z.re) && (0.0..1.0).contains(&z.im)));
        }
    }
}
