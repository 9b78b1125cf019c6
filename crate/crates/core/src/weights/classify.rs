//! Doubling-class diagnostics, the `ρ_n` sequence, exponent fits, the W-class
//! transform and tail comparisons.

use super::{DerivedOp, RadialWeight};
use crate::error::{invalid, Error, Result};

/// Boundary distances `1 − r` at which tail ratios are sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct GapGrid {
    gaps: Vec<f64>,
}

impl GapGrid {
    /// Geometric grid from `1 − r = hi` down to `lo`, `per_decade` points per decade.
    pub fn geometric(hi: f64, lo: f64, per_decade: usize) -> Result<GapGrid> {
        if !(hi <= 1.0 && lo > 0.0 && lo < hi && per_decade > 0) {
            return invalid("gap grid needs 0 < lo < hi <= 1");
        }
        let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
        let gaps = (0..=n).map(|i| hi * (lo / hi).powf(i as f64 / n as f64)).collect();
        Ok(GapGrid { gaps })
    }

    pub fn from_radii(r: &[f64]) -> Result<GapGrid> {
        if r.iter().any(|v| !(0.0..1.0).contains(v)) {
            return invalid("grid radii must lie in [0, 1)");
        }
        Ok(GapGrid { gaps: r.iter().map(|v| 1.0 - v).collect() })
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Grid used by the classifiers: `1 − r` from `1/2` down to `1e−20`.
    pub fn classifier_default() -> GapGrid {
        GapGrid::geometric(0.5, 1e-20, 10).expect("valid default grid")
    }

    /// Indices whose gap lies within one decade of the smallest gap.
    fn last_decade(&self) -> Vec<usize> {
        let smallest = self.gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        (0..self.gaps.len()).filter(|i| self.gaps[*i] <= 10.0 * smallest).collect()
    }
}

/// Outcome of the `D̂` test `ω̂(r) ≤ C ω̂((1+r)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DhatReport {
    pub sup_ratio: f64,
    /// Least-squares slope of `ln ratio` per decade of `1/(1−r)` over the last decade.
    pub trend_slope: f64,
    pub member: bool,
    /// `(1 − r, ratio)` pairs.
    pub ratios: Vec<(f64, f64)>,
}

/// Outcome of the `Ď` test `ω̂(r) ≥ C ω̂(1 − (1−r)/K)` with `C > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DcheckReport {
    pub k: f64,
    pub inf_ratio: f64,
    pub last_decade_inf: f64,
    pub member: bool,
    pub ratios: Vec<(f64, f64)>,
}

/// Thresholds of the classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierOptions {
    /// A `D̂` ratio above this cap counts as unbounded.
    pub dhat_cap: f64,
    /// Largest admissible growth of `ln ratio` per decade in the last decade.
    pub dhat_slope: f64,
    /// `Ď` needs the ratio to stay above `1 + margin` in the last decade.
    pub dcheck_margin: f64,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        ClassifierOptions { dhat_cap: 1e6, dhat_slope: 0.05, dcheck_margin: 0.05 }
    }
}

fn slope_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let res = (xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icpt, res)
}

pub fn classify_dhat(w: &RadialWeight, grid: &GapGrid, opts: &ClassifierOptions) -> DhatReport {
    let logs: Vec<f64> = grid.gaps.iter().map(|x| w.log_tail_gap(*x) - w.log_tail_gap(0.5 * x)).collect();
    let sup_log = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let idx = grid.last_decade();
    let xs: Vec<f64> = idx.iter().map(|i| -grid.gaps[*i].log10()).collect();
    let ys: Vec<f64> = idx.iter().map(|i| logs[*i]).collect();
    let (trend_slope, _, _) = if xs.len() >= 2 { slope_fit(&xs, &ys) } else { (0.0, 0.0, 0.0) };
    let sup_ratio = sup_log.exp();
    let member = sup_ratio <= opts.dhat_cap && trend_slope <= opts.dhat_slope && trend_slope.is_finite();
    DhatReport {
        sup_ratio,
        trend_slope,
        member,
        ratios: grid.gaps.iter().zip(&logs).map(|(x, l)| (*x, l.exp())).collect(),
    }
}

pub fn classify_dcheck(w: &RadialWeight, k: f64, grid: &GapGrid, opts: &ClassifierOptions) -> Result<DcheckReport> {
    if !(k > 1.0) {
        return invalid("Dcheck needs K > 1");
    }
    let logs: Vec<f64> = grid.gaps.iter().map(|x| w.log_tail_gap(*x) - w.log_tail_gap(x / k)).collect();
    let inf_log = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let last = grid.last_decade().iter().map(|i| logs[*i]).fold(f64::INFINITY, f64::min);
    let last_decade_inf = last.exp();
    Ok(DcheckReport {
        k,
        inf_ratio: inf_log.exp(),
        last_decade_inf,
        member: last_decade_inf >= 1.0 + opts.dcheck_margin,
        ratios: grid.gaps.iter().zip(&logs).map(|(x, l)| (*x, l.exp())).collect(),
    })
}

/// Runs [`classify_dcheck`] for every `K` in `ks`; membership holds if any `K` passes.
pub fn classify_dcheck_scan(w: &RadialWeight, ks: &[f64], grid: &GapGrid, opts: &ClassifierOptions) -> Result<(bool, Vec<DcheckReport>)> {
    let reports = ks.iter().map(|k| classify_dcheck(w, *k, grid, opts)).collect::<Result<Vec<_>>>()?;
    Ok((reports.iter().any(|r| r.member), reports))
}

/// Fitted power behaviour `ω̂(r) ≈ C (1−r)^s` near the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    /// Largest local slope (upper exponent).
    pub beta: Option<f64>,
    /// Smallest local slope (lower exponent).
    pub alpha: Option<f64>,
    pub slope: f64,
    pub residual: f64,
}

/// Least-squares fit of `ln ω̂` against `ln(1−r)` for `1 − r ∈ [lo, hi]`.
/// Exponents are withheld when the RMS residual exceeds `max_residual`.
pub fn fit_doubling_exponents(w: &RadialWeight, lo: f64, hi: f64, max_residual: f64) -> ExponentFit {
    let n = 41;
    let xs: Vec<f64> = (0..n).map(|i| lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|s| w.log_tail_gap(s.exp())).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return ExponentFit { beta: None, alpha: None, slope: f64::NAN, residual: f64::INFINITY };
    }
    let (slope, _, residual) = slope_fit(&xs, &ys);
    if residual > max_residual {
        return ExponentFit { beta: None, alpha: None, slope, residual };
    }
    let local: Vec<f64> = xs.windows(2).zip(ys.windows(2)).map(|(a, b)| (b[1] - b[0]) / (a[1] - a[0])).collect();
    let beta = local.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let alpha = local.iter().cloned().fold(f64::INFINITY, f64::min);
    ExponentFit { beta: Some(beta), alpha: Some(alpha), slope, residual }
}

/// `ρ_n = min{r : ω̂(r) = ω̂(0) K^{−n}}` for `n = 0..=n_max`, by bisection on `1 − r`.
pub fn rho_sequence(w: &RadialWeight, k: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(k > 1.0) {
        return invalid("rho sequence needs K > 1");
    }
    let total = w.log_tail_gap(1.0);
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n == 0 {
            out.push(0.0);
            continue;
        }
        let target = total - n as f64 * k.ln();
        // largest gap with log tail <= target
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if w.log_tail_gap(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(1.0 - lo);
    }
    Ok(out)
}

/// W-class transform of `μ`: `ω = e^{−C r²} μ / (1 − r²)^α` with `C` the smallest power
/// of two for which a finite-difference radial Laplacian of
/// `ψ = C r² − ln μ + α ln(1 − r²)` stays positive on a grid.
pub fn w_transform(mu: &RadialWeight, alpha: f64) -> Result<(RadialWeight, f64)> {
    if !(alpha > 0.0) {
        return invalid("W-class transform needs alpha > 0");
    }
    let mut c = 1.0;
    for _ in 0..=30 {
        if laplacian_positive(mu, alpha, c) {
            return Ok((w_transform_with(mu, alpha, c)?, c));
        }
        c *= 2.0;
    }
    Err(Error::Undefined("no C <= 2^30 makes the transformed potential subharmonic".into()))
}

pub fn w_transform_with(mu: &RadialWeight, alpha: f64, c: f64) -> Result<RadialWeight> {
    if !(alpha > 0.0) {
        return invalid("W-class transform needs alpha > 0");
    }
    mu.derive(DerivedOp::WClass { c, alpha })
}

fn laplacian_positive(mu: &RadialWeight, alpha: f64, c: f64) -> bool {
    let psi = |r: f64| c * r * r - mu.log_density(r) + alpha * (1.0 - r * r).ln();
    let mut radii: Vec<f64> = (1..50).map(|i| 0.01 * i as f64).collect();
    radii.extend((6..=60).map(|k| 1.0 - 10f64.powf(-(k as f64) / 20.0)));
    for r in radii {
        let h = 1e-4 * r.min(1.0 - r);
        let (a, b, m) = (psi(r - h), psi(r + h), psi(r));
        if !(a.is_finite() && b.is_finite() && m.is_finite()) {
            continue;
        }
        let lap = (b - 2.0 * m + a) / (h * h) + (b - a) / (2.0 * h * r);
        if !(lap > 0.0) {
            return false;
        }
    }
    true
}

/// The two sides `∫_ρ^1 φ ω` and `∫_ρ^1 φ ν` of a tail comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailComparison {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn tail_comparison_check(w: &RadialWeight, nu: &RadialWeight, phi: &dyn Fn(f64) -> f64, rho: f64) -> TailComparison {
    TailComparison { lhs: w.integrate_tail(phi, rho), rhs: nu.integrate_tail(phi, rho) }
}
