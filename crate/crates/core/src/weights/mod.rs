//! Radial weights `ω(r)` on `[0, 1)`: densities, tail integrals `ω̂(r) = ∫_r^1 ω`,
//! moments `ω_x = ∫_0^1 r^x ω`, derived weights, and the doubling-class diagnostics.
//!
//! Everything is evaluated in terms of the boundary distance `x = 1 − r` and in log
//! space, so that tails of rapidly decreasing weights such as `exp(−1/(1−r))` stay
//! representable far below `f64` underflow.
//!
//! Tails without a closed form are tabulated once per weight on a grid geometric in
//! `1 − r` and interpolated by cubic Hermite splines in `(ln x, ln ω̂)`, which is exact
//! for pure power tails.

mod classify;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use classify::*;
pub use parse::parse_weight;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss, log_add, log_integrate, log_sum, tree_sum};

/// Grid points per decade of `1 − r` in tail tables.
const PER_DECADE: usize = 64;
/// Decades covered by tail tables and moment panels (down to `1 − r = 1e−24`).
const DECADES: usize = 24;
/// Moment panels per decade.
const MOMENT_PER_DECADE: usize = 16;

/// Smallest tabulated boundary distance.
pub fn min_gap() -> f64 {
    10f64.powi(-(DECADES as i32))
}

/// Operation producing a derived weight from a base weight.
#[derive(Debug, Clone, PartialEq)]
pub enum DerivedOp {
    /// `ω̃(r) = ω̂(r)/(1 − r)`.
    Regularized,
    /// `ω_[β](r) = (1 − r)^β ω(r)`.
    Tilt(f64),
    /// `ω̇(r) = r ω(r)`.
    Dot,
    /// `ω_L(r) = (1 − r) ω(1 − r)`.
    BoundaryFlip,
    /// `σ = v_γ^{p'} ω^{−p'/p}` with `v_γ = (γ+1)(1−r²)^γ`; zero where `ω` vanishes.
    SigmaDual { gamma: f64, p: f64 },
    /// `e^{−c r²} ω(r) / (1 − r²)^α`.
    WClass { c: f64, alpha: f64 },
}

/// Piecewise-linear weight through `(r_i, ω_i)` samples, constant outside the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    r: Vec<f64>,
    w: Vec<f64>,
    /// `cum[i] = ∫_{r_i}^1 ω`.
    cum: Vec<f64>,
}

impl Table {
    pub fn new(r: Vec<f64>, w: Vec<f64>) -> Result<Table> {
        if r.len() < 2 || r.len() != w.len() {
            return invalid("table needs at least two (r, omega) samples");
        }
        if r[0] < 0.0 || *r.last().unwrap() > 1.0 || r.windows(2).any(|p| !(p[1] > p[0])) {
            return invalid("table radii must increase strictly within [0, 1]");
        }
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return invalid("table values must be finite and nonnegative");
        }
        let n = r.len();
        let last = w[n - 1];
        let positive_near_one = last > 0.0 || (r[n - 1] == 1.0 && w[n - 2] > 0.0);
        if !positive_near_one {
            return invalid("table weight vanishes near r = 1, its tail would not be positive");
        }
        let mut cum = vec![0.0; n];
        cum[n - 1] = last * (1.0 - r[n - 1]);
        for i in (0..n - 1).rev() {
            cum[i] = cum[i + 1] + 0.5 * (w[i] + w[i + 1]) * (r[i + 1] - r[i]);
        }
        Ok(Table { r, w, cum })
    }

    pub fn density(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            return self.w[0];
        }
        if r >= self.r[n - 1] {
            return self.w[n - 1];
        }
        let i = self.r.partition_point(|s| *s <= r) - 1;
        let t = (r - self.r[i]) / (self.r[i + 1] - self.r[i]);
        self.w[i] + t * (self.w[i + 1] - self.w[i])
    }

    /// Exact `∫_r^1` of the piecewise-linear density.
    pub fn tail(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r >= self.r[n - 1] {
            return self.w[n - 1] * (1.0 - r).max(0.0);
        }
        if r <= self.r[0] {
            return self.cum[0] + self.w[0] * (self.r[0] - r);
        }
        let i = self.r.partition_point(|s| *s <= r) - 1;
        let v = self.density(r);
        self.cum[i + 1] + 0.5 * (v + self.w[i + 1]) * (self.r[i + 1] - r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    Constant { c: f64 },
    /// `(γ+1)(1−r²)^γ` when normalized, `(1−r²)^γ` otherwise.
    Standard { gamma: f64, normalized: bool },
    /// `exp(−c / (1 − r^l)^α)`.
    Exponential { c: f64, alpha: f64, l: f64 },
    /// `exp(−exp(c/(1−r)))`.
    DoubleExponential { c: f64 },
    /// `(1−r²)^{−1} log^{−α}(e/(1−r²))`.
    LogRapidIncrease { alpha: f64 },
    Tabulated(Table),
    Transformed { base: RadialWeight, op: DerivedOp },
}

/// Cached tail `ln ω̂` on `x_k = 10^{−k/64}`, with slopes `d ln ω̂ / d ln x`.
#[derive(Debug)]
struct TailTable {
    log_tail: Vec<f64>,
    slope: Vec<f64>,
}

struct Inner {
    kind: WeightKind,
    tail: Option<TailTable>,
}

/// An immutable radial weight. Cloning is cheap (shared).
#[derive(Clone)]
pub struct RadialWeight(Arc<Inner>);

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialWeight({:?})", self.0.kind)
    }
}

impl PartialEq for RadialWeight {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

fn grid_gap(k: usize) -> f64 {
    10f64.powf(-(k as f64) / PER_DECADE as f64)
}

/// `ln(1 − r²)` from `x = 1 − r`.
fn ln_one_minus_r2(x: f64) -> f64 {
    x.ln() + (2.0 - x).ln()
}

impl RadialWeight {
    pub fn new(kind: WeightKind) -> Result<RadialWeight> {
        validate(&kind)?;
        let mut inner = Inner { kind, tail: None };
        let needs_table = !matches!(inner.kind, WeightKind::Constant { .. } | WeightKind::Tabulated(_));
        if needs_table {
            inner.tail = Some(build_table(&inner)?);
        }
        Ok(RadialWeight(Arc::new(inner)))
    }

    pub fn constant(c: f64) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::Constant { c })
    }

    /// `v_γ = (γ+1)(1−r²)^γ` (or without the factor when `normalized` is false).
    pub fn standard(gamma: f64, normalized: bool) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::Standard { gamma, normalized })
    }

    pub fn exponential(c: f64, alpha: f64, l: f64) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::Exponential { c, alpha, l })
    }

    pub fn double_exponential(c: f64) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::DoubleExponential { c })
    }

    pub fn log_rapid_increase(alpha: f64) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::LogRapidIncrease { alpha })
    }

    pub fn tabulated(r: Vec<f64>, w: Vec<f64>) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::Tabulated(Table::new(r, w)?))
    }

    /// Derived weight `op(self)`.
    pub fn derive(&self, op: DerivedOp) -> Result<RadialWeight> {
        RadialWeight::new(WeightKind::Transformed { base: self.clone(), op })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.0.kind
    }

    /// `ln ω(1 − x)`; `-inf` where the weight vanishes.
    pub fn log_density_gap(&self, x: f64) -> f64 {
        let r = 1.0 - x;
        match &self.0.kind {
            WeightKind::Constant { c } => c.ln(),
            WeightKind::Standard { gamma, normalized } => {
                let f = if *normalized { (gamma + 1.0).ln() } else { 0.0 };
                if *gamma == 0.0 {
                    f
                } else {
                    f + gamma * ln_one_minus_r2(x)
                }
            }
            WeightKind::Exponential { c, alpha, l } => {
                // 1 − r^l computed from x without cancellation
                let s = -(l * (-x).ln_1p()).exp_m1();
                -c / s.powf(*alpha)
            }
            WeightKind::DoubleExponential { c } => -(c / x).exp(),
            WeightKind::LogRapidIncrease { alpha } => {
                let l = ln_one_minus_r2(x);
                -l - alpha * (1.0 - l).ln()
            }
            WeightKind::Tabulated(t) => t.density(r).ln(),
            WeightKind::Transformed { base, op } => match op {
                DerivedOp::Regularized => base.log_tail_gap(x) - x.ln(),
                DerivedOp::Tilt(beta) => beta * x.ln() + base.log_density_gap(x),
                DerivedOp::Dot => r.ln() + base.log_density_gap(x),
                DerivedOp::BoundaryFlip => x.ln() + base.log_density_gap(r),
                DerivedOp::SigmaDual { gamma, p } => {
                    let lw = base.log_density_gap(x);
                    if lw == f64::NEG_INFINITY {
                        return f64::NEG_INFINITY;
                    }
                    let pp = p / (p - 1.0);
                    let lv = (gamma + 1.0).ln() + if *gamma == 0.0 { 0.0 } else { gamma * ln_one_minus_r2(x) };
                    pp * lv - lw / (p - 1.0)
                }
                DerivedOp::WClass { c, alpha } => -c * r * r + base.log_density_gap(x) - alpha * ln_one_minus_r2(x),
            },
        }
    }

    pub fn log_density(&self, r: f64) -> f64 {
        self.log_density_gap(1.0 - r)
    }

    pub fn density(&self, r: f64) -> f64 {
        self.log_density(r).exp()
    }

    pub fn density_gap(&self, x: f64) -> f64 {
        self.log_density_gap(x).exp()
    }

    /// `ln ω̂(1 − x)`.
    pub fn log_tail_gap(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.0.kind {
            WeightKind::Constant { c } => return (c * x).ln(),
            WeightKind::Tabulated(t) => return t.tail(1.0 - x).ln(),
            _ => {}
        }
        let table = self.0.tail.as_ref().expect("tail table built at construction");
        let kmax = PER_DECADE * DECADES;
        let t = -x.log10() * PER_DECADE as f64;
        if t >= kmax as f64 {
            return remainder_log(&self.0, x).unwrap_or(f64::NAN);
        }
        let k = (t.floor() as usize).min(kmax - 1);
        let (x0, x1) = (grid_gap(k), grid_gap(k + 1));
        let (l0, l1) = (table.log_tail[k], table.log_tail[k + 1]);
        if !(l0.is_finite() && l1.is_finite()) {
            return if x >= x0 { l0 } else { l1.min(l0) };
        }
        // cubic Hermite in s = ln x on [ln x1, ln x0]
        let (s0, s1) = (x1.ln(), x0.ln());
        let h = s1 - s0;
        let u = (x.ln() - s0) / h;
        let (y0, y1) = (l1, l0);
        let (m0, m1) = (table.slope[k + 1] * h, table.slope[k] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * m1
    }

    /// `ω̂(r) = ∫_r^1 ω(s) ds`.
    pub fn tail_integral(&self, r: f64) -> f64 {
        self.log_tail_gap(1.0 - r).exp()
    }

    /// `ln ∫_{r0}^1 e^{lphi(r, 1−r)} ω(r) dr` for a positive factor given by its log.
    pub fn log_integrate_tail(&self, lphi: &dyn Fn(f64, f64) -> f64, r0: f64) -> f64 {
        let gap_hi = (1.0 - r0).clamp(0.0, 1.0);
        let lf = |x: f64| {
            let ld = self.log_density_gap(x);
            if ld == f64::NEG_INFINITY {
                ld
            } else {
                ld + lphi(1.0 - x, x)
            }
        };
        let xmin = min_gap();
        if gap_hi <= xmin {
            return self.log_tail_gap(gap_hi) + lphi(1.0 - gap_hi, gap_hi);
        }
        let breaks = panel_breaks(gap_hi, MOMENT_PER_DECADE);
        let quick: Vec<f64> = breaks
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[1], w[0]);
                let m = 0.5 * (lo + hi);
                lf(lo).max(lf(m)).max(lf(hi)) + (hi - lo).ln()
            })
            .collect();
        let top = quick.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut parts: Vec<f64> = breaks
            .windows(2)
            .zip(&quick)
            .map(|(w, q)| if *q < top - 60.0 { f64::NEG_INFINITY } else { log_integrate(&lf, w[1], w[0]) })
            .collect();
        parts.push(self.log_tail_gap(xmin) + lphi(1.0 - xmin, xmin));
        log_sum(&parts)
    }

    /// `∫_{r0}^1 φ(r) ω(r) dr` for a real factor `φ` of any sign.
    pub fn integrate_tail(&self, phi: &dyn Fn(f64) -> f64, r0: f64) -> f64 {
        let gap_hi = (1.0 - r0).clamp(0.0, 1.0);
        let xmin = min_gap();
        if gap_hi <= xmin {
            return phi(r0) * self.tail_integral(r0);
        }
        let g = gauss(16);
        let breaks = panel_breaks(gap_hi, MOMENT_PER_DECADE);
        let mut parts = Vec::with_capacity(breaks.len());
        for w in breaks.windows(2) {
            let (lo, hi) = (w[1], w[0]);
            let h = 0.5 * (hi - lo);
            let c = 0.5 * (hi + lo);
            let lds: Vec<f64> = g.nodes.iter().map(|t| self.log_density_gap(c + h * t)).collect();
            let m = lds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if m == f64::NEG_INFINITY {
                continue;
            }
            let terms: Vec<f64> = g
                .nodes
                .iter()
                .zip(&g.weights)
                .zip(&lds)
                .map(|((t, wt), ld)| wt * phi(1.0 - (c + h * t)) * (ld - m).exp())
                .collect();
            parts.push(h * tree_sum(&terms) * m.exp());
        }
        parts.push(phi(1.0 - xmin) * self.log_tail_gap(xmin).exp());
        tree_sum(&parts)
    }

    /// `ln ω_x = ln ∫_0^1 r^x ω(r) dr`.
    pub fn log_moment(&self, x: f64) -> f64 {
        if let WeightKind::Constant { c } = self.0.kind {
            return c.ln() - (x + 1.0).ln();
        }
        self.log_integrate_tail(&|_, gap| if x == 0.0 { 0.0 } else { x * (-gap).ln_1p() }, 0.0)
    }

    pub fn moment(&self, x: f64) -> f64 {
        self.log_moment(x).exp()
    }

    /// Optional boundary length scale `τ(r)`; provided only for exponential weights,
    /// where it is `(1−r)^{(α+2)/2}`.
    pub fn tau(&self, r: f64) -> Option<f64> {
        match self.0.kind {
            WeightKind::Exponential { alpha, .. } => Some((1.0 - r).powf(0.5 * (alpha + 2.0))),
            _ => None,
        }
    }
}

/// Gap breakpoints from `gap_hi` down to `min_gap()` on the geometric lattice.
fn panel_breaks(gap_hi: f64, per_decade: usize) -> Vec<f64> {
    let xmin = min_gap();
    let mut b = vec![gap_hi];
    let kmax = per_decade * DECADES;
    let start = (-gap_hi.log10() * per_decade as f64).floor() as usize + 1;
    for k in start..=kmax {
        let g = 10f64.powf(-(k as f64) / per_decade as f64);
        if g < *b.last().unwrap() * (1.0 - 1e-12) {
            b.push(g);
        }
    }
    if *b.last().unwrap() > xmin {
        b.push(xmin);
    }
    b
}

fn validate(kind: &WeightKind) -> Result<()> {
    let bad = |m: &str| invalid(m.to_string());
    match kind {
        WeightKind::Constant { c } if !(*c > 0.0 && c.is_finite()) => bad("constant weight needs c > 0"),
        WeightKind::Standard { gamma, .. } if !(*gamma > -1.0 && gamma.is_finite()) => bad("standard weight needs gamma > -1"),
        WeightKind::Exponential { c, alpha, l } if !(*c > 0.0 && *alpha > 0.0 && *l > 0.0) => {
            bad("exponential weight needs c, alpha, l > 0")
        }
        WeightKind::DoubleExponential { c } if !(*c > 0.0) => bad("double exponential weight needs c > 0"),
        WeightKind::LogRapidIncrease { alpha } if !(*alpha > 1.0) => bad("log-type weight needs alpha > 1"),
        WeightKind::Transformed { op, .. } => match op {
            DerivedOp::Tilt(b) if !b.is_finite() => bad("tilt exponent must be finite"),
            DerivedOp::SigmaDual { gamma, p } if !(*gamma > -1.0 && *p > 1.0) => bad("sigma dual needs gamma > -1 and p > 1"),
            DerivedOp::WClass { c, alpha } if !(*c >= 0.0 && *alpha > 0.0) => bad("W-class transform needs c >= 0 and alpha > 0"),
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}

/// `ln ∫_0^x ω(1 − u) du` for tiny `x`.
fn remainder_log(inner: &Inner, x: f64) -> Result<f64> {
    let ld = |u: f64| log_density_of(inner, u);
    match &inner.kind {
        WeightKind::Standard { gamma, normalized } => {
            let f = if *normalized { (gamma + 1.0).ln() } else { 0.0 };
            let corr = 1.0 - gamma * (gamma + 1.0) * x / (2.0 * (gamma + 2.0));
            return Ok(f + gamma * 2f64.ln() + (gamma + 1.0) * x.ln() - (gamma + 1.0).ln() + corr.ln());
        }
        WeightKind::LogRapidIncrease { alpha } => {
            // ∫_r^1 ω(s) s ds = (1 − ln(1−r²))^{1−α} / (2(α−1)), the rest is O(x)
            let l = ln_one_minus_r2(x);
            let main = (1.0 - alpha) * (1.0 - l).ln() - (2.0 * (alpha - 1.0)).ln();
            let rest = x.ln() + ld(x) + x.ln();
            return Ok(log_add(main, rest));
        }
        WeightKind::Transformed { base, op: DerivedOp::Dot } => {
            return remainder_log(&base.0, x).map(|v| v + (-0.5 * x).ln_1p());
        }
        _ => {}
    }
    let l0 = ld(x);
    if l0 == f64::NEG_INFINITY {
        return Ok(l0);
    }
    let h = 1e-6;
    let e = (ld(x * (1.0 + h)) - ld(x * (1.0 - h))) / (2.0 * h);
    if !(e > -1.0 + 1e-9) {
        return Err(Error::Divergent(format!("weight is not integrable at the boundary (local exponent {e:.3})")));
    }
    Ok(x.ln() + l0 - (1.0 + e).ln())
}

fn log_density_of(inner: &Inner, x: f64) -> f64 {
    // a temporary handle without a tail table is enough for kinds whose density does
    // not read their own tail
    let w = RadialWeight(Arc::new(Inner { kind: inner.kind.clone(), tail: None }));
    w.log_density_gap(x)
}

fn build_table(inner: &Inner) -> Result<TailTable> {
    let kmax = PER_DECADE * DECADES;
    let probe = RadialWeight(Arc::new(Inner { kind: inner.kind.clone(), tail: None }));
    let ld = |u: f64| probe.log_density_gap(u);
    let mut log_tail = vec![0.0; kmax + 1];
    log_tail[kmax] = remainder_log(inner, grid_gap(kmax))?;
    for k in (0..kmax).rev() {
        let piece = log_integrate(&ld, grid_gap(k + 1), grid_gap(k));
        log_tail[k] = log_add(log_tail[k + 1], piece);
    }
    if !log_tail[0].is_finite() {
        return Err(Error::Divergent("weight has no finite total mass".into()));
    }
    let slope = (0..=kmax)
        .map(|k| {
            let x = grid_gap(k);
            let v = (x.ln() + ld(x) - log_tail[k]).exp();
            if v.is_finite() {
                v
            } else {
                0.0
            }
        })
        .collect();
    Ok(TailTable { log_tail, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tail_examples() {
        let one = RadialWeight::constant(1.0).unwrap();
        assert_relative_eq!(one.tail_integral(0.5), 0.5, max_relative = 1e-15);
        assert_relative_eq!(one.tail_integral(0.0), 1.0, max_relative = 1e-15);
        let v1 = RadialWeight::standard(1.0, true).unwrap();
        assert_relative_eq!(v1.tail_integral(0.5), 5.0 / 12.0, max_relative = 1e-8);
        let v0 = RadialWeight::standard(0.0, true).unwrap();
        assert_relative_eq!(v0.tail_integral(0.3), 0.7, max_relative = 1e-10);
    }

    #[test]
    fn moment_examples() {
        let one = RadialWeight::constant(1.0).unwrap();
        assert_relative_eq!(one.moment(3.0), 0.25, max_relative = 1e-14);
        assert_relative_eq!(one.moment(0.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(one.moment(9.0), 0.1, max_relative = 1e-14);
        let v0 = RadialWeight::standard(0.0, true).unwrap();
        assert_relative_eq!(v0.moment(9.0), 0.1, max_relative = 1e-12);
        assert_relative_eq!(v0.moment(201.0), 1.0 / 202.0, max_relative = 1e-12);
    }

    #[test]
    fn table_tail_is_exact() {
        let t = RadialWeight::tabulated(vec![0.0, 0.5, 0.5000001, 1.0], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(t.tail_integral(0.0), 0.5 - 0.00000005, max_relative = 1e-12);
        assert!(RadialWeight::tabulated(vec![0.0, 0.9], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn logri_tail_matches_closed_form_near_boundary() {
        let w = RadialWeight::log_rapid_increase(2.0).unwrap();
        // ∫_r^1 ω(s) s ds = 1/(2(1 − ln(1−r²))) and ω̂ differs by O(1−r)
        for x in [1e-6, 1e-12, 1e-20] {
            let l = ln_one_minus_r2(x);
            let approx = 0.5 / (1.0 - l);
            assert_relative_eq!(w.log_tail_gap(x).exp(), approx, max_relative = 1e-4);
        }
    }

    #[test]
    fn exponential_tail_is_log_representable() {
        let w = RadialWeight::exponential(1.0, 1.0, 1.0).unwrap();
        let l = w.log_tail_gap(1e-4);
        // Laplace: ω̂ ≈ x² e^{−1/x}
        assert_relative_eq!(l, 2.0 * (1e-4f64).ln() - 1e4, max_relative = 1e-6);
    }
}
