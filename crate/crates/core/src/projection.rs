//! Bergman projections `P_γ`, `P_γ^+`, the moment and tail conditions `D_p(γ, ω)` and
//! `B_p(γ, ω)`, and the discrete kernels `D`, `H̃`, `K̃_γ` with the sets `J_n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::angle_dist;
use crate::quadrature::{circle_nodes, clip_extrapolate, integrate_disc, tree_sum_complex, ConvergenceReport, Measure, QuadConfig, RadialRule};
use crate::weights::{DerivedOp, RadialWeight};

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSpec {
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub weight: RadialWeight,
}

impl ProjectionSpec {
    pub fn new(gamma: f64, p: f64, q: f64, weight: RadialWeight) -> Result<ProjectionSpec> {
        if !(gamma > -1.0) {
            return invalid("gamma must exceed -1");
        }
        if !(p > 1.0 && q > 1.0) {
            return invalid("projection conditions need p, q > 1");
        }
        Ok(ProjectionSpec { gamma, p, q, weight })
    }

    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn q_conj(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    /// `v_γ(r) = (γ+1)(1−r²)^γ`.
    pub fn v_gamma(&self) -> RadialWeight {
        RadialWeight::standard(self.gamma, true).expect("gamma validated")
    }

    /// `σ = v_γ^{p′} ω^{−1/(p−1)}`; `Divergent` if `σ` is not integrable.
    pub fn sigma(&self) -> Result<RadialWeight> {
        self.weight.derive(DerivedOp::SigmaDual { gamma: self.gamma, p: self.p })
    }

    /// The spec with `(ω, p)` replaced by `(σ, p′)`.
    pub fn dual(&self) -> Result<ProjectionSpec> {
        ProjectionSpec::new(self.gamma, self.p_conj(), self.q_conj(), self.sigma()?)
    }
}

/// Value of `P_γ f(z)` (or `P_γ^+ f(z)` in the real part) with its refinement status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionValue {
    pub value: Complex64,
    pub est_rel_err: f64,
    pub converged: bool,
}

/// `P_γ f(z) = (γ+1)∫ f(ζ)(1−|ζ|²)^γ (1−ζ̄z)^{−2−γ} dA(ζ)`; with `plus` the kernel is
/// replaced by its modulus.
///
/// `|z|` must not exceed `1 − 10·clip`.
pub fn project(
    f: &(dyn Fn(Complex64) -> Complex64 + Sync),
    gamma: f64,
    z: Complex64,
    cfg: &QuadConfig,
    plus: bool,
) -> Result<ProjectionValue> {
    cfg.validate()?;
    if !(gamma > -1.0) {
        return invalid("gamma must exceed -1");
    }
    if z.norm() > 1.0 - 10.0 * cfg.clip {
        return invalid("projection point too close to the boundary");
    }
    let one = Complex64::new(1.0, 0.0);
    let once = |c: &QuadConfig| -> Complex64 {
        let thetas = circle_nodes(c.n_theta);
        let ring = |r: f64, gap: f64| -> Complex64 {
            let vals: Vec<Complex64> = thetas
                .iter()
                .map(|t| {
                    let zeta = Complex64::from_polar(r, *t);
                    let k = (one - zeta.conj() * z).powf(-(2.0 + gamma));
                    let k = if plus { Complex64::new(k.norm(), 0.0) } else { k };
                    f(zeta) * k
                })
                .collect();
            // (1 − r²) = gap (2 − gap) without cancellation
            let w = (gamma + 1.0) * (gap * (2.0 - gap)).powf(gamma);
            tree_sum_complex(&vals) / c.n_theta as f64 * 2.0 * r * w
        };
        let d = c.clip;
        let sum = |rule: RadialRule| -> Complex64 {
            let terms: Vec<Complex64> = (0..rule.len()).into_par_iter().map(|i| ring(rule.r[i], rule.gap[i]) * rule.w[i]).collect();
            tree_sum_complex(&terms)
        };
        let main = sum(RadialRule::graded(0.0, 1.0, d, c));
        let e1 = sum(RadialRule::panel(1.0, 0.5 * d, d, c.gl_order));
        let e2 = sum(RadialRule::panel(1.0, 0.25 * d, 0.5 * d, c.gl_order));
        Complex64::new(
            clip_extrapolate(main.re, main.re + e1.re, main.re + e1.re + e2.re),
            clip_extrapolate(main.im, main.im + e1.im, main.im + e1.im + e2.im),
        )
    };
    let mut prev = once(cfg);
    let mut err = f64::INFINITY;
    for round in 1..=cfg.max_rounds {
        let cur = once(&cfg.refined(round));
        let delta = (cur - prev).norm();
        let scale = cur.norm().max(prev.norm());
        err = if scale == 0.0 { 0.0 } else { delta / scale };
        prev = cur;
        // the absolute floor covers values that vanish by symmetry
        if err <= cfg.rel_tol || delta < 1e-15 {
            return Ok(ProjectionValue { value: cur, est_rel_err: err, converged: true });
        }
    }
    Ok(ProjectionValue { value: prev, est_rel_err: err, converged: false })
}

/// Verdict of a condition whose sup cannot be computed exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Finite,
    /// The ratios grow along the last decade of the sampled range.
    UnboundedTrend,
    /// A quantity inside the condition diverges.
    Infinite,
}

/// Slope threshold of `ln ratio` against `ln n` (or `ln 1/(1−r)`) for the trend verdict.
pub const TREND_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Running sup of the sampled ratios (`∞` for an infinite verdict).
    pub value: f64,
    /// `(n or r, ratio)`.
    pub sequence: Vec<(f64, f64)>,
    pub trend_slope: f64,
    pub verdict: Verdict,
}

impl ConditionReport {
    fn infinite() -> ConditionReport {
        ConditionReport { value: f64::INFINITY, sequence: vec![], trend_slope: f64::NAN, verdict: Verdict::Infinite }
    }

    fn from_sequence(sequence: Vec<(f64, f64)>, xs: &[f64]) -> ConditionReport {
        let value = sequence.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
        let ys: Vec<f64> = sequence.iter().map(|(_, v)| v.ln()).collect();
        let trend_slope = last_decade_slope(xs, &ys);
        let verdict = if !value.is_finite() {
            Verdict::Infinite
        } else if trend_slope > TREND_THRESHOLD {
            Verdict::UnboundedTrend
        } else {
            Verdict::Finite
        };
        ConditionReport { value, sequence, trend_slope, verdict }
    }
}

/// Least-squares slope of `ys` against `xs` over the points with `xs ≥ max(xs) − ln 10`.
fn last_decade_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let top = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(x, _)| **x >= top - 10f64.ln()).map(|(x, y)| (*x, *y)).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn sigma_or_infinite(spec: &ProjectionSpec) -> Result<Option<RadialWeight>> {
    match spec.sigma() {
        Ok(s) => Ok(Some(s)),
        Err(Error::Divergent(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `D_p(γ, ω) = sup_n (ω_{np+1})^{1/p}(σ_{np′+1})^{1/p′} / (v_γ)_{2n+1}` over `n ≤ n_max`.
pub fn condition_dp(spec: &ProjectionSpec, n_max: usize) -> Result<ConditionReport> {
    let Some(sigma) = sigma_or_infinite(spec)? else {
        return Ok(ConditionReport::infinite());
    };
    let (p, pp) = (spec.p, spec.p_conj());
    let v = spec.v_gamma();
    let sequence: Vec<(f64, f64)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let n_f = n as f64;
            let l = spec.weight.log_moment(n_f * p + 1.0) / p + sigma.log_moment(n_f * pp + 1.0) / pp - v.log_moment(2.0 * n_f + 1.0);
            (n_f, l.exp())
        })
        .collect();
    let xs: Vec<f64> = sequence.iter().map(|(n, _)| (n + 1.0).ln()).collect();
    Ok(ConditionReport::from_sequence(sequence, &xs))
}

/// `B_p(γ, ω) = sup_r (∫_r^1 ωt)^{1/p}(∫_r^1 σt)^{1/p′} / ∫_r^1 v_γ t` over `r_grid`.
pub fn condition_bp(spec: &ProjectionSpec, r_grid: &[f64]) -> Result<ConditionReport> {
    if r_grid.iter().any(|r| !(0.0..1.0).contains(r)) {
        return invalid("B_p grid must lie in [0, 1)");
    }
    let Some(sigma) = sigma_or_infinite(spec)? else {
        return Ok(ConditionReport::infinite());
    };
    let (p, pp) = (spec.p, spec.p_conj());
    let v = spec.v_gamma();
    let lt = |r: f64, _gap: f64| r.ln();
    let sequence: Vec<(f64, f64)> = r_grid
        .par_iter()
        .map(|&r| {
            let l = spec.weight.log_integrate_tail(&lt, r) / p + sigma.log_integrate_tail(&lt, r) / pp - v.log_integrate_tail(&lt, r);
            (r, l.exp())
        })
        .collect();
    let xs: Vec<f64> = r_grid.iter().map(|r| -(1.0 - r).ln()).collect();
    Ok(ConditionReport::from_sequence(sequence, &xs))
}

/// Radii `1 − 10^{−k/per_decade}` for `k = 0..=decades·per_decade`.
pub fn boundary_grid(decades: usize, per_decade: usize) -> Vec<f64> {
    (0..=decades * per_decade).map(|k| 1.0 - 10f64.powf(-(k as f64) / per_decade as f64)).collect()
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// The discrete kernel `D(θ, φ, r, ρ)`.
///
/// Zero when `|θ−φ| > 1`, when `max{r, ρ} ≤ ½`, and also on the region
/// `min{r, ρ} ≤ ½ < max{r, ρ}` that the case list leaves out.
pub fn discrete_kernel_d(theta: f64, phi: f64, r: f64, rho: f64, gamma: f64) -> f64 {
    let d = angle_dist(theta, phi);
    if d > 1.0 || r.min(rho) <= 0.5 {
        return 0.0;
    }
    let num = rho * (1.0 - rho).powf(gamma);
    let s = 1.0 - r * rho;
    if d >= s {
        ratio_or_inf(num, d.powf(2.0 + gamma))
    } else {
        ratio_or_inf(num, s.powf(2.0 + gamma))
    }
}

/// `H̃(θ, φ, x, y)`; zero on the region `min{x, y} < ½ ≤ max{x, y}` not covered by the
/// case list.
pub fn kernel_htilde(theta: f64, phi: f64, x: f64, y: f64, gamma: f64) -> f64 {
    let d = angle_dist(theta, phi);
    let m = x.max(y);
    if d > 1.0 || m >= 0.5 {
        return 0.0;
    }
    let num = y.powf(gamma) * (1.0 - y);
    ratio_or_inf(num, d.max(m).powf(2.0 + gamma))
}

/// `K̃_γ(re^{iθ}, ρe^{iφ}) = ρ(1−ρ)^γ |1 − rρe^{i(θ−φ)}|^{−2−γ} χ_{|θ−φ|≤1} χ_{min{r,ρ}>½}`.
pub fn kernel_ktilde(theta: f64, phi: f64, r: f64, rho: f64, gamma: f64) -> f64 {
    if angle_dist(theta, phi) > 1.0 || r.min(rho) <= 0.5 {
        return 0.0;
    }
    let den = (Complex64::new(1.0, 0.0) - Complex64::from_polar(r * rho, theta - phi)).norm();
    ratio_or_inf(rho * (1.0 - rho).powf(gamma), den.powf(2.0 + gamma))
}

/// The `n` with `(θ, φ, x, y) ∈ J_n`, if any.
pub fn jn_index(theta: f64, phi: f64, x: f64, y: f64) -> Option<u32> {
    let d = angle_dist(theta, phi);
    let m = x.max(y);
    if m < 0.5 && m <= d && d <= 1.0 {
        return Some(0);
    }
    if !(d > 0.0) || !(2.0 * m < 1.0) || d >= m {
        return None;
    }
    let mut n = 1u32;
    while 2f64.powi(n as i32) * d < m {
        n += 1;
    }
    let t = 2f64.powi(n as i32) * d;
    (m <= t && t < 2.0 * m).then_some(n)
}

/// Single-term surrogate `y^γ(1−y)/|θ−φ|^{γ+2} · 2^{−n(γ+2)}` on `J_n`.
pub fn jn_surrogate(theta: f64, phi: f64, x: f64, y: f64, gamma: f64) -> Option<f64> {
    let n = jn_index(theta, phi, x, y)?;
    let d = angle_dist(theta, phi);
    Some(y.powf(gamma) * (1.0 - y) / d.powf(gamma + 2.0) / 2f64.powf(n as f64 * (gamma + 2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelWeightIntegral {
    pub value: ConvergenceReport,
    /// `value / (ω̂(|z|)(1−|z|)^{1−η})`.
    pub bound_ratio: f64,
}

/// `∫_𝔻 ω(ζ)/|1 − zζ|^η dA(ζ)` and its ratio against `ω̂(z)/(1−|z|)^{η−1}`.
pub fn kernel_weight_integral(w: &RadialWeight, eta: f64, z: Complex64, cfg: &QuadConfig) -> Result<KernelWeightIntegral> {
    if !(eta >= 2.0) {
        return invalid("kernel exponent must be at least 2");
    }
    if z.norm() >= 1.0 {
        return invalid("kernel integral needs |z| < 1");
    }
    let one = Complex64::new(1.0, 0.0);
    let f = |zeta: Complex64| (one - z * zeta).norm().powf(-eta);
    let value = integrate_disc(&f, &Measure::Weighted(w.clone()), cfg)?;
    let bound = w.tail_integral(z.norm()) * (1.0 - z.norm()).powf(1.0 - eta);
    Ok(KernelWeightIntegral { value, bound_ratio: value.value / bound })
}

/// Sample points for the kernel sandwich: `θ, φ` uniform, `x, y` log-uniform in `[1e−6, 1]`.
pub fn kernel_sample(u: [f64; 4]) -> (f64, f64, f64, f64) {
    let lx = |t: f64| 10f64.powf(-6.0 * t);
    (2.0 * PI * u[0], 2.0 * PI * u[1], lx(u[2]), lx(u[3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> QuadConfig {
        QuadConfig { gl_order: 12, n_theta: 64, rel_tol: 1e-9, max_rounds: 3, ..QuadConfig::default() }
    }

    #[test]
    fn projection_examples() {
        let q = cfg();
        let v = project(&|_z| c(1.0, 0.0), 0.0, c(0.3, 0.2), &q, false).unwrap();
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-8);
        let v = project(&|z: Complex64| z.powi(3), 0.0, c(0.5, 0.0), &q, false).unwrap();
        assert!((v.value - c(0.125, 0.0)).norm() < 1e-6);
        let v = project(&|z: Complex64| z.conj(), 0.0, c(0.4, -0.3), &q, false).unwrap();
        assert!(v.value.norm() < 1e-10);
        assert!(project(&|_z| c(1.0, 0.0), 0.0, c(0.99999999, 0.0), &q, false).is_err());
    }

    #[test]
    fn dp_examples() {
        let spec = ProjectionSpec::new(0.0, 2.0, 2.0, RadialWeight::constant(1.0).unwrap()).unwrap();
        let rep = condition_dp(&spec, 20).unwrap();
        for (_, v) in &rep.sequence {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-10);
        }
        assert_eq!(rep.verdict, Verdict::Finite);
        let w5 = RadialWeight::constant(1.0).unwrap().derive(DerivedOp::Tilt(5.0)).unwrap();
        let spec = ProjectionSpec::new(0.0, 2.0, 2.0, w5).unwrap();
        assert_eq!(condition_dp(&spec, 5).unwrap().verdict, Verdict::Infinite);
    }

    #[test]
    fn bp_examples() {
        let spec = ProjectionSpec::new(0.0, 2.0, 2.0, RadialWeight::constant(1.0).unwrap()).unwrap();
        let rep = condition_bp(&spec, &[0.5]).unwrap();
        assert_relative_eq!(rep.sequence[0].1, 1.0, max_relative = 1e-10);
        let spec = ProjectionSpec::new(1.0, 2.0, 2.0, RadialWeight::standard(1.0, true).unwrap()).unwrap();
        let a = condition_bp(&spec, &boundary_grid(6, 4)).unwrap();
        let b = condition_bp(&spec, &boundary_grid(6, 8)).unwrap();
        assert!(a.value.is_finite());
        assert_relative_eq!(a.value, b.value, max_relative = 0.05);
    }

    #[test]
    fn kernel_examples() {
        assert_relative_eq!(kernel_htilde(0.5, 0.0, 0.1, 0.1, 0.0), 3.6, max_relative = 1e-14);
        assert_relative_eq!(discrete_kernel_d(0.5, 0.0, 0.9, 0.9, 0.0), 3.6, max_relative = 1e-14);
        assert_eq!(discrete_kernel_d(2.0, 0.0, 0.9, 0.9, 0.0), 0.0);
        assert_eq!(kernel_htilde(2.0, 0.0, 0.1, 0.1, 0.0), 0.0);
        assert_eq!(kernel_htilde(0.5, 0.0, 0.6, 0.6, 0.0), 0.0);
        assert_eq!(jn_index(0.5, 0.0, 0.1, 0.1), Some(0));
        assert_eq!(jn_index(0.03, 0.0, 0.1, 0.1), Some(2));
        assert_eq!(jn_index(0.5, 0.0, 0.6, 0.1), None);
    }

    #[test]
    fn kernel_weight_examples() {
        let q = QuadConfig { n_theta: 256, ..cfg() };
        let one = RadialWeight::constant(1.0).unwrap();
        let k = kernel_weight_integral(&one, 3.0, c(0.0, 0.0), &q).unwrap();
        assert_relative_eq!(k.value.value, 1.0, max_relative = 1e-10);
        assert_relative_eq!(k.bound_ratio, 1.0, max_relative = 1e-10);
        let k = kernel_weight_integral(&one, 3.0, c(0.9, 0.0), &q).unwrap();
        assert!(k.bound_ratio <= 20.0, "{}", k.bound_ratio);
    }
}
