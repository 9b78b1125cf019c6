//! Mixed norms `L^q_p(ω)`, tent norms `T^q_p(ω)`, Hardy means and the maximal
//! operators (nontangential, radial, averaged, Hardy–Littlewood, Hörmander and `W_ν`).
//!
//! Norms share one sampling plan: `|f|` on a polar grid (graded Gauss radii times uniform
//! angles) from which both the mixed and the tent norm are assembled, so a sampled
//! maximal function can be measured in both spaces at once.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::functions::{AnalyticFunction, DiscFunction};
use crate::geometry::{angle_dist, CarlesonSquare};
use crate::quadrature::{
    circle_nodes, clip_extrapolate, estimate_sup, gauss, refine, tree_sum, ConvergenceReport, GaussRule, QuadConfig,
    RadialRule, SupDomain,
};
use crate::weights::RadialWeight;

/// Which quasinorm a [`SpaceSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `L^q_p(ω)`.
    Mixed,
    /// `T^q_p(ω)`.
    Tent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub p: f64,
    pub q: f64,
    pub weight: RadialWeight,
    pub kind: SpaceKind,
    /// Cone opening for tent norms.
    pub opening: f64,
}

impl SpaceSpec {
    pub fn new(p: f64, q: f64, weight: RadialWeight, kind: SpaceKind) -> Result<SpaceSpec> {
        if !(p > 0.0 && p.is_finite() && q > 0.0 && q.is_finite()) {
            return invalid("p and q must be finite and positive");
        }
        Ok(SpaceSpec { p, q, weight, kind, opening: 1.0 })
    }

    pub fn mixed(p: f64, q: f64, weight: RadialWeight) -> Result<SpaceSpec> {
        Self::new(p, q, weight, SpaceKind::Mixed)
    }

    pub fn tent(p: f64, q: f64, weight: RadialWeight) -> Result<SpaceSpec> {
        Self::new(p, q, weight, SpaceKind::Tent)
    }

    pub fn with_kind(&self, kind: SpaceKind) -> SpaceSpec {
        SpaceSpec { kind, ..self.clone() }
    }

    pub fn p_conj(&self) -> Result<f64> {
        conjugate(self.p)
    }

    pub fn q_conj(&self) -> Result<f64> {
        conjugate(self.q)
    }
}

pub(crate) fn conjugate(p: f64) -> Result<f64> {
    if p > 1.0 {
        Ok(p / (p - 1.0))
    } else {
        invalid(format!("conjugate exponent needs p > 1, got {p}"))
    }
}

#[derive(Debug, Clone)]
struct Rings {
    r: Vec<f64>,
    gap: Vec<f64>,
    w: Vec<f64>,
    /// `vals[i][k] = |f(r_i e^{iθ_k})|`.
    vals: Vec<Vec<f64>>,
}

/// `|f|` sampled on a polar grid: the clipped graded rule plus two boundary panels
/// used for clip extrapolation.
#[derive(Debug, Clone)]
pub struct PolarSamples {
    n_theta: usize,
    segments: [Rings; 3],
}

impl PolarSamples {
    pub fn sample(f: &(dyn Fn(Complex64) -> f64 + Sync), cfg: &QuadConfig) -> Result<PolarSamples> {
        cfg.validate()?;
        let d = cfg.clip;
        let rules = [
            RadialRule::graded(0.0, 1.0, d, cfg),
            RadialRule::panel(1.0, 0.5 * d, d, cfg.gl_order),
            RadialRule::panel(1.0, 0.25 * d, 0.5 * d, cfg.gl_order),
        ];
        let thetas = circle_nodes(cfg.n_theta);
        let segments = rules.map(|rule| {
            let vals = rule
                .r
                .par_iter()
                .map(|r| thetas.iter().map(|t| f(Complex64::from_polar(*r, *t))).collect())
                .collect();
            Rings { r: rule.r, gap: rule.gap, w: rule.w, vals }
        });
        Ok(PolarSamples { n_theta: cfg.n_theta, segments })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    fn log_weights(&self, w: &RadialWeight) -> [Vec<f64>; 3] {
        [0, 1, 2].map(|s| self.segments[s].gap.iter().map(|g| w.log_density_gap(*g)).collect())
    }

    fn outer(&self, inner: Vec<[f64; 3]>, p: f64, q: f64) -> f64 {
        let terms: Vec<f64> = inner
            .iter()
            .map(|[a, b, c]| clip_extrapolate(*a, a + b, a + b + c).max(0.0).powf(q / p))
            .collect();
        (tree_sum(&terms) / self.n_theta as f64).powf(1.0 / q)
    }

    /// `‖f‖_{L^q_p(ω)}` from the samples.
    pub fn mixed(&self, p: f64, q: f64, w: &RadialWeight) -> f64 {
        let lw = self.log_weights(w);
        let inner: Vec<[f64; 3]> = (0..self.n_theta)
            .map(|k| {
                [0, 1, 2].map(|s| {
                    let seg = &self.segments[s];
                    let terms: Vec<f64> = (0..seg.r.len())
                        .map(|i| seg.w[i] * seg.r[i] * pow_weighted(seg.vals[i][k], p, lw[s][i]))
                        .collect();
                    tree_sum(&terms)
                })
            })
            .collect();
        self.outer(inner, p, q)
    }

    /// `‖f‖_{T^q_p(ω)}` over cones `Γ_M(ξ)` with vertices at the angular nodes.
    ///
    /// Arc integrals use the periodic piecewise-linear interpolant of `|f|^p` on each ring.
    pub fn tent(&self, p: f64, q: f64, w: &RadialWeight, opening: f64) -> f64 {
        let lw = self.log_weights(w);
        let n = self.n_theta;
        let h = 2.0 * PI / n as f64;
        let per_seg: Vec<Vec<f64>> = (0..3)
            .map(|s| {
                let seg = &self.segments[s];
                let rows: Vec<Vec<f64>> = (0..seg.r.len())
                    .into_par_iter()
                    .map(|i| {
                        let g: Vec<f64> = seg.vals[i].iter().map(|v| pow_weighted(*v, p, lw[s][i])).collect();
                        let half = (opening * seg.gap[i]).min(PI);
                        let scale = seg.w[i] * seg.r[i] / seg.gap[i];
                        arc_integrals(&g, h, half).into_iter().map(|a| a * scale).collect()
                    })
                    .collect();
                (0..n)
                    .map(|j| tree_sum(&rows.iter().map(|row| row[j]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let inner = (0..n).map(|j| [per_seg[0][j], per_seg[1][j], per_seg[2][j]]).collect();
        self.outer(inner, p, q)
    }

    pub fn norm(&self, spec: &SpaceSpec) -> f64 {
        match spec.kind {
            SpaceKind::Mixed => self.mixed(spec.p, spec.q, &spec.weight),
            SpaceKind::Tent => self.tent(spec.p, spec.q, &spec.weight, spec.opening),
        }
    }
}

/// `v^p · e^{lw}` computed in log space; zero where either factor vanishes.
fn pow_weighted(v: f64, p: f64, lw: f64) -> f64 {
    if v == 0.0 || lw == f64::NEG_INFINITY {
        return 0.0;
    }
    (p * v.ln() + lw).exp()
}

/// For every node `φ_j = jh`, `∫_{φ_j−a}^{φ_j+a} L(θ) dθ` with `L` the periodic linear
/// interpolant of `g`.
fn arc_integrals(g: &[f64], h: f64, a: f64) -> Vec<f64> {
    let n = g.len();
    let mut prefix = vec![0.0; n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] + 0.5 * h * (g[k] + g[(k + 1) % n]);
    }
    let total = prefix[n];
    if a >= PI {
        return vec![total; n];
    }
    let cum = |t: f64| -> f64 {
        let u = t / h;
        let cell = u.floor();
        let s = u - cell;
        let cell = cell as i64;
        let wraps = cell.div_euclid(n as i64);
        let k = cell.rem_euclid(n as i64) as usize;
        let (g0, g1) = (g[k], g[(k + 1) % n]);
        wraps as f64 * total + prefix[k] + h * (s * g0 + 0.5 * s * s * (g1 - g0))
    };
    (0..n)
        .map(|j| {
            let phi = j as f64 * h;
            cum(phi + a) - cum(phi - a)
        })
        .collect()
}

/// `‖f‖_{L^q_p(ω)}` with refinement until two rounds agree.
pub fn mixed_norm(f: &dyn DiscFunction, spec: &SpaceSpec, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    norm(f, &spec.with_kind(SpaceKind::Mixed), cfg)
}

/// `‖f‖_{T^q_p(ω)}` with refinement until two rounds agree.
pub fn tent_norm(f: &dyn DiscFunction, spec: &SpaceSpec, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    norm(f, &spec.with_kind(SpaceKind::Tent), cfg)
}

/// The norm selected by `spec.kind`.
pub fn norm(f: &dyn DiscFunction, spec: &SpaceSpec, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let g = |z: Complex64| f.modulus(z);
    let once = |c: &QuadConfig| PolarSamples::sample(&g, c).map(|s| s.norm(spec)).unwrap_or(f64::NAN);
    Ok(refine(cfg, once))
}

/// `M_p(r, f)` by the periodic trapezoid with `n` nodes.
pub fn hardy_mean(f: &dyn DiscFunction, p: f64, r: f64, n: usize) -> f64 {
    let vals: Vec<f64> = circle_nodes(n).iter().map(|t| f.modulus(Complex64::from_polar(r, *t)).powf(p)).collect();
    (tree_sum(&vals) / n as f64).powf(1.0 / p)
}

/// `M_∞(r, f)`.
pub fn sup_mean(f: &dyn DiscFunction, r: f64, n: usize) -> f64 {
    estimate_sup(&|t| f.modulus(Complex64::from_polar(r, t)), SupDomain::Circle, n).value
}

/// Grid maximum over `t ∈ [0, 1]` followed by a short golden-section search around it.
fn curve_sup(g: &dyn Fn(f64) -> f64, n: usize) -> f64 {
    let vals: Vec<f64> = (0..=n).map(|i| g(i as f64 / n as f64)).collect();
    let (imax, vmax) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    let step = 1.0 / n as f64;
    let (mut lo, mut hi) = ((imax as f64 * step - step).max(0.0), (imax as f64 * step + step).min(1.0));
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let mut best = vmax;
    let mut x1 = hi - gr * (hi - lo);
    let mut x2 = lo + gr * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..30 {
        best = best.max(f1).max(f2);
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = g(x1);
        }
    }
    best.max(f1).max(f2)
}

/// Coarse nodes per boundary curve of a cone.
const CURVE_NODES: usize = 24;

/// `N_M(f)(ξ) = sup_{z ∈ Γ_M(ξ)} |f(z)|` for analytic `f`.
///
/// By the maximum principle the sup is attained on the boundary of the cone, i.e. on the
/// spirals `s e^{i(arg ξ ± M(|ξ| − s))}`. For `|ξ| = 1` the cone is clipped at
/// `|z| = 1 − clip` and the clipping arc is scanned too. `ξ = 0` gives `|f(0)|`.
pub fn nontangential_max(f: &dyn DiscFunction, m: f64, xi: Complex64, cfg: &QuadConfig) -> f64 {
    let rho = xi.norm();
    if rho == 0.0 {
        return f.modulus(xi);
    }
    let axis = xi.arg();
    let top = if rho >= 1.0 { 1.0 - cfg.clip } else { rho };
    let s0 = (rho - PI / m).max(0.0);
    let mut best = f.modulus(Complex64::from_polar(top, axis));
    for sign in [1.0, -1.0] {
        let g = |t: f64| {
            // nodes cluster at the top of the cone
            let s = top - (top - s0) * t * t;
            let half = (m * (rho - s)).min(PI);
            f.modulus(Complex64::from_polar(s, axis + sign * half))
        };
        best = best.max(curve_sup(&g, CURVE_NODES));
    }
    if rho >= 1.0 {
        let half = (m * (rho - top)).min(PI);
        let g = |t: f64| f.modulus(Complex64::from_polar(top, axis + half * (2.0 * t - 1.0)));
        best = best.max(curve_sup(&g, 8));
    }
    best
}

/// `R(f)(z) = sup_{0 ≤ r ≤ 1} |f(rz)|`.
pub fn radial_max(f: &dyn DiscFunction, z: Complex64) -> f64 {
    estimate_sup(&|r| f.modulus(z * r), SupDomain::Interval(0.0, 1.0), 64).value
}

/// `N_M f` as a function on the disc, for sampling.
pub fn nontangential_fn<'a>(f: &'a dyn DiscFunction, m: f64, cfg: &'a QuadConfig) -> impl Fn(Complex64) -> f64 + Sync + 'a {
    move |z| nontangential_max(f, m, z, cfg)
}

fn gl_nodes(a: f64, b: f64, panels: usize, g: &GaussRule) -> Vec<(f64, f64)> {
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * g.nodes.len());
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * width;
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            out.push((c + 0.5 * width * x, 0.5 * width * w));
        }
    }
    out
}

/// `Φ_{f,M,p}(re^{iθ}) = (1/(1−r)) ∫_{|t−θ|<1−r} N_M(f)(re^{it})^p dt`.
pub fn averaged_max_phi(f: &dyn DiscFunction, m: f64, p: f64, r: f64, theta: f64, cfg: &QuadConfig) -> f64 {
    let x = 1.0 - r;
    let nodes = gl_nodes(theta - x, theta + x, 2 * cfg.panel_split, gauss(cfg.gl_order));
    let terms: Vec<f64> = nodes
        .iter()
        .map(|(t, w)| w * nontangential_max(f, m, Complex64::from_polar(r, *t), cfg).powf(p))
        .collect();
    tree_sum(&terms) / x
}

/// Hardy–Littlewood maximal function of `g` on the circle at angle `xi`.
///
/// The sup runs over arcs of length `2π·2^{−k}`, `k = 0..=levels`, each at 17 translates
/// containing `xi`; averages use the midpoint rule with at least 64 nodes per arc.
pub fn hl_maximal(g: &dyn Fn(f64) -> f64, xi: f64, levels: usize, cfg: &QuadConfig) -> f64 {
    let translates = 16;
    let mut best: f64 = 0.0;
    for k in 0..=levels {
        let len = 2.0 * PI / 2f64.powi(k as i32);
        let n = ((cfg.n_theta as f64 * len / (2.0 * PI)).ceil() as usize).max(64);
        for j in 0..=translates {
            let a = xi - len * j as f64 / translates as f64;
            let vals: Vec<f64> = (0..n).map(|i| g(a + len * (i as f64 + 0.5) / n as f64).abs()).collect();
            best = best.max(tree_sum(&vals) / n as f64);
        }
    }
    best
}

/// `(1/π)∫_{S(a)} |φ| η dA` with a single-round product rule.
fn square_integral(phi: &dyn Fn(Complex64) -> f64, eta: &RadialWeight, s: &CarlesonSquare, cfg: &QuadConfig) -> f64 {
    let hw = s.half_width();
    let axis = s.a.arg();
    let ang = gl_nodes(axis - hw, axis + hw, 2 * cfg.panel_split, gauss(cfg.gl_order));
    let ring = |r: f64, gap: f64| -> f64 {
        let dens = eta.density_gap(gap);
        if dens == 0.0 {
            return 0.0;
        }
        let terms: Vec<f64> = ang.iter().map(|(t, w)| w * phi(Complex64::from_polar(r, *t))).collect();
        tree_sum(&terms) * r * dens
    };
    let a = s.a.norm();
    let d = cfg.clip.min(0.5 * (1.0 - a));
    let main = RadialRule::graded(a, 1.0, d, cfg).sum(ring);
    let e1 = RadialRule::panel(1.0, 0.5 * d, d, cfg.gl_order).sum(ring);
    let e2 = RadialRule::panel(1.0, 0.25 * d, 0.5 * d, cfg.gl_order).sum(ring);
    clip_extrapolate(main, main + e1, main + e1 + e2) / PI
}

/// `M_η(φ)(z)`, the sup of `η`-averages of `|φ|` over Carleson squares containing `z`.
///
/// Squares `S(a)` are sampled with `1 − |a| = (1 − |z|)·2^{k/4}` (plus `a = 0`) and
/// nine angular offsets across the admissible range of `arg a`.
pub fn hormander_maximal(phi: &dyn Fn(Complex64) -> f64, eta: &RadialWeight, z: Complex64, cfg: &QuadConfig) -> Result<f64> {
    if z.norm() >= 1.0 {
        return invalid("Hörmander maximal function needs |z| < 1");
    }
    let x = 1.0 - z.norm();
    let mut radii = vec![];
    let mut k = 0;
    while x * 2f64.powf(k as f64 / 4.0) < 1.0 {
        radii.push(1.0 - x * 2f64.powf(k as f64 / 4.0));
        k += 1;
    }
    radii.push(0.0);
    let offsets = 8;
    let mut best: Option<f64> = None;
    for ra in radii {
        let hw = 0.5 * (1.0 - ra);
        let n_off = if ra == 0.0 { 0 } else { offsets };
        for j in 0..=n_off {
            let t = if n_off == 0 { 0.0 } else { -1.0 + 2.0 * j as f64 / n_off as f64 };
            let a = Complex64::from_polar(ra * (1.0 - 1e-12), z.arg() + t * hw * (1.0 - 1e-12));
            let s = CarlesonSquare::new(a)?;
            if !s.contains(z) {
                continue;
            }
            let mass = s.measure(eta);
            if !(mass > 0.0) {
                continue;
            }
            let v = square_integral(phi, eta, &s, cfg) / mass;
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best.ok_or_else(|| Error::Undefined("every sampled Carleson square has zero η-mass".into()))
}

/// `W_ν f(x) = sup_{x ≤ t ≤ 1−clip} ∫_0^t f(u)(1−u)ν(1−u) du / ν̂̇(1−t)`, with
/// `ν̂̇(r) = ∫_r^1 sν(s) ds`.
pub fn w_maximal(f: &dyn Fn(f64) -> f64, nu: &RadialWeight, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return invalid("W maximal function needs x in (0, 1]");
    }
    let hi = (1.0 - cfg.clip).max(x);
    let ratio = |t: f64| -> f64 {
        let r0 = 1.0 - t;
        let num = nu.integrate_tail(&|r| f(1.0 - r) * r, r0);
        let den = nu.integrate_tail(&|r| r, r0);
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    };
    if hi == x {
        return Ok(ratio(x));
    }
    let (la, lb) = (x.ln(), hi.ln());
    let est = estimate_sup(&|s| ratio(s.exp()), SupDomain::Interval(la, lb), 48);
    Ok(est.value)
}

/// Littlewood–Paley quantity `‖f^{(k)}(1−|z|)^k‖ + Σ_{j<k} |f^{(j)}(0)|`.
pub fn lp_seminorm(f: &AnalyticFunction, k: usize, spec: &SpaceSpec, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    if k == 0 {
        return invalid("Littlewood–Paley seminorm needs k >= 1");
    }
    let dk = f.derivative(k);
    let jet: f64 = (0..k).map(|j| f.derivative(j).eval(Complex64::new(0.0, 0.0)).norm()).sum();
    let g = move |z: Complex64| dk.eval(z).norm() * (1.0 - z.norm()).powi(k as i32);
    let rep = norm(&g, spec, cfg)?;
    Ok(ConvergenceReport { value: rep.value + jet, ..rep })
}

/// Angular nodes on `[lo, hi]` with panel breaks at `±cut·2^k`, graded geometrically
/// away from `θ = 0`; `|θ| < cut` is skipped unless `keep_inner`.
fn graded_angles(lo: f64, hi: f64, cut: f64, keep_inner: bool, cfg: &QuadConfig) -> Vec<(f64, f64)> {
    debug_assert!(cut > 0.0);
    let mut breaks = vec![lo, hi];
    let mut b = cut;
    while b < PI {
        for s in [b, -b] {
            if s > lo && s < hi {
                breaks.push(s);
            }
        }
        b *= 2.0;
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let g = gauss(cfg.gl_order);
    let mut out = vec![];
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a || (!keep_inner && a >= -cut && b <= cut) {
            continue;
        }
        out.extend(gl_nodes(a, b, cfg.panel_split, g));
    }
    out
}

fn truncated_rings(cfg: &QuadConfig) -> [RadialRule; 3] {
    let d = cfg.clip;
    [
        RadialRule::graded(0.0, 1.0, d, cfg),
        RadialRule::panel(1.0, 0.5 * d, d, cfg.gl_order),
        RadialRule::panel(1.0, 0.25 * d, 0.5 * d, cfg.gl_order),
    ]
}

/// Mixed norm of `f` restricted to `|arg z| > cut`, for functions singular along `θ = 0`.
///
/// Angular panels are graded toward the cut instead of the uniform trapezoid.
pub fn truncated_mixed_norm(f: &dyn DiscFunction, spec: &SpaceSpec, cut: f64, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let (p, q) = (spec.p, spec.q);
    let once = |c: &QuadConfig| -> f64 {
        let rings = truncated_rings(c);
        let angles = graded_angles(-PI, PI, cut, false, c);
        let terms: Vec<f64> = angles
            .par_iter()
            .map(|(t, wt)| {
                let seg = rings.each_ref().map(|rule| {
                    rule.sum(|r, gap| r * pow_weighted(f.modulus(Complex64::from_polar(r, *t)), p, spec.weight.log_density_gap(gap)))
                });
                wt * clip_extrapolate(seg[0], seg[0] + seg[1], seg[0] + seg[1] + seg[2]).max(0.0).powf(q / p)
            })
            .collect();
        (tree_sum(&terms) / (2.0 * PI)).powf(1.0 / q)
    };
    Ok(refine(cfg, once))
}

/// Tent norm of `f` restricted to `|arg z| > cut`; cone sections are integrated with
/// panels graded toward the cut.
pub fn truncated_tent_norm(f: &dyn DiscFunction, spec: &SpaceSpec, cut: f64, cfg: &QuadConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let (p, q, m) = (spec.p, spec.q, spec.opening);
    let once = |c: &QuadConfig| -> f64 {
        let rings = truncated_rings(c);
        let outer = graded_angles(-PI, PI, cut, true, c);
        let terms: Vec<f64> = outer
            .par_iter()
            .map(|(phi, wt)| {
                let seg = rings.each_ref().map(|rule| {
                    rule.sum(|r, gap| {
                        let lw = spec.weight.log_density_gap(gap);
                        if lw == f64::NEG_INFINITY {
                            return 0.0;
                        }
                        let half = (m * gap).min(PI);
                        let arc: Vec<f64> = arc_pieces(*phi, half)
                            .into_iter()
                            .flat_map(|(lo, hi)| graded_angles(lo, hi, cut, false, c))
                            .map(|(t, w)| w * pow_weighted(f.modulus(Complex64::from_polar(r, t)), p, lw))
                            .collect();
                        tree_sum(&arc) * r / gap
                    })
                });
                wt * clip_extrapolate(seg[0], seg[0] + seg[1], seg[0] + seg[1] + seg[2]).max(0.0).powf(q / p)
            })
            .collect();
        (tree_sum(&terms) / (2.0 * PI)).powf(1.0 / q)
    };
    Ok(refine(cfg, once))
}

/// The arc `(φ − half, φ + half)` expressed as sub-intervals of `[−π, π]`.
fn arc_pieces(phi: f64, half: f64) -> Vec<(f64, f64)> {
    if half >= PI {
        return vec![(-PI, PI)];
    }
    let (lo, hi) = (phi - half, phi + half);
    if lo < -PI {
        vec![(lo + 2.0 * PI, PI), (-PI, hi)]
    } else if hi > PI {
        vec![(lo, PI), (-PI, hi - 2.0 * PI)]
    } else {
        vec![(lo, hi)]
    }
}

/// Quotient distance of `arg z` from `0`; exposed for test functions defined by it.
pub fn abs_angle(z: Complex64) -> f64 {
    angle_dist(z.arg(), 0.0)
}
