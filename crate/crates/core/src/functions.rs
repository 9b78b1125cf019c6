//! Analytic function families on the disc (Taylor polynomials, kernels
//! `(1 − λ̄z)^{−β}`, moment-series Bergman kernels), the integration operators `T_g`
//! and `T_{g,a}`, the Bloch norm, and the measurable test functions used to separate
//! tent and mixed norms.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::angle_dist;
use crate::quadrature::{estimate_sup, SupDomain};
use crate::weights::{parse_weight, RadialWeight};

/// Default Taylor degree used when a closed form has to be expanded.
pub const D_TRUNC: usize = 400;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Anything with a modulus on the disc; what the norms consume.
pub trait DiscFunction: Sync {
    fn modulus(&self, z: Complex64) -> f64;
}

impl<F: Fn(Complex64) -> f64 + Sync> DiscFunction for F {
    fn modulus(&self, z: Complex64) -> f64 {
        self(z)
    }
}

/// Truncated series `Σ_{n≤N} (ā)^n z^n / (2ω_{2n+1})` for the Bergman kernel of `A²_ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentKernel {
    pub a: Complex64,
    pub weight: RadialWeight,
    coeffs: Arc<Vec<Complex64>>,
    /// `ln ω_{2n+1}` for `n = 0..=N+1`.
    log_moments: Arc<Vec<f64>>,
}

impl MomentKernel {
    pub fn new(a: Complex64, weight: RadialWeight, n: usize) -> Result<MomentKernel> {
        if a.norm() >= 1.0 {
            return invalid("moment kernel needs |a| < 1");
        }
        let log_moments: Vec<f64> = (0..=n + 1).map(|k| weight.log_moment(2.0 * k as f64 + 1.0)).collect();
        Ok(Self::assemble(a, weight, log_moments, n))
    }

    fn assemble(a: Complex64, weight: RadialWeight, log_moments: Vec<f64>, n: usize) -> MomentKernel {
        let la = a.norm().ln();
        let ph = -a.arg();
        let coeffs = (0..=n)
            .map(|k| {
                let mag = if k == 0 { -(2f64.ln()) - log_moments[0] } else { k as f64 * la - 2f64.ln() - log_moments[k] };
                Complex64::from_polar(mag.exp(), ph * k as f64)
            })
            .collect();
        MomentKernel { a, weight, coeffs: Arc::new(coeffs), log_moments: Arc::new(log_moments) }
    }

    /// Smallest power-of-two truncation whose tail bound at `|z| = r_max` is below
    /// `rel_tol` times the partial sum of moduli, capped at `n_cap`.
    pub fn auto(a: Complex64, weight: RadialWeight, r_max: f64, rel_tol: f64, n_cap: usize) -> Result<MomentKernel> {
        if a.norm() >= 1.0 {
            return invalid("moment kernel needs |a| < 1");
        }
        let mut log_moments: Vec<f64> = Vec::new();
        let mut n = 64usize;
        loop {
            while log_moments.len() < n + 2 {
                let k = log_moments.len();
                log_moments.push(weight.log_moment(2.0 * k as f64 + 1.0));
            }
            let mk = Self::assemble(a, weight.clone(), log_moments[..n + 2].to_vec(), n);
            let z = Complex64::from_polar(r_max, a.arg());
            let partial: f64 = mk.coeffs.iter().enumerate().map(|(k, c)| c.norm() * r_max.powi(k as i32)).sum();
            let bound = mk.tail_bound(z);
            if bound <= rel_tol * partial || n >= n_cap {
                return Ok(mk);
            }
            n = (2 * n).min(n_cap);
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Geometric bound on the discarded terms at `z`, using log-convexity of moments.
    pub fn tail_bound(&self, z: Complex64) -> f64 {
        let n = self.truncation();
        let az = (self.a * z).norm();
        let lm = &self.log_moments;
        let q = az * (lm[n] - lm[n + 1]).exp();
        if !(q < 1.0) {
            return f64::INFINITY;
        }
        let next = ((n + 1) as f64 * az.ln() - 2f64.ln() - lm[n + 1]).exp();
        next / (1.0 - q)
    }
}

/// A holomorphic function on the disc.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    /// `Σ a_n z^n`.
    Taylor(Vec<Complex64>),
    /// `scale · (1 − λ̄z)^{−β}`.
    Kernel { lambda: Complex64, beta: f64, scale: Complex64 },
    MomentKernel(MomentKernel),
}

/// Value plus the tail bound of a truncated series (zero for exact forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
    /// False when the tail bound exceeds `1e−8` of the value.
    pub precise: bool,
}

/// A function produced by coefficient arithmetic, with a flag for degree truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub function: AnalyticFunction,
    pub truncated: bool,
}

impl AnalyticFunction {
    pub fn poly(coeffs: &[f64]) -> AnalyticFunction {
        AnalyticFunction::Taylor(coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect())
    }

    pub fn monomial(n: usize) -> AnalyticFunction {
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        AnalyticFunction::Taylor(c)
    }

    pub fn kernel(lambda: Complex64, beta: f64) -> Result<AnalyticFunction> {
        if lambda.norm() >= 1.0 || !(beta > 0.0) {
            return invalid("kernel needs |lambda| < 1 and beta > 0");
        }
        Ok(AnalyticFunction::Kernel { lambda, beta, scale: ONE })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunction::Taylor(c) => horner(c, z),
            AnalyticFunction::Kernel { lambda, beta, scale } => scale * (ONE - lambda.conj() * z).powf(-beta),
            AnalyticFunction::MomentKernel(m) => horner(&m.coeffs, z),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Evaluation {
        let value = self.eval(z);
        let tail_bound = match self {
            AnalyticFunction::MomentKernel(m) => m.tail_bound(z),
            _ => 0.0,
        };
        Evaluation { value, tail_bound, precise: tail_bound <= 1e-8 * value.norm().max(f64::MIN_POSITIVE) }
    }

    /// Taylor coefficients up to degree `deg` (exact for `Taylor`, truncated otherwise).
    pub fn coefficients(&self, deg: usize) -> Vec<Complex64> {
        match self {
            AnalyticFunction::Taylor(c) => {
                let mut c = c.clone();
                c.truncate(deg + 1);
                c
            }
            AnalyticFunction::Kernel { lambda, beta, scale } => {
                let lb = lambda.conj();
                let mut out = Vec::with_capacity(deg + 1);
                let mut c = *scale;
                for n in 0..=deg {
                    out.push(c);
                    c = c * lb * ((beta + n as f64) / (n as f64 + 1.0));
                }
                out
            }
            AnalyticFunction::MomentKernel(m) => m.coeffs.iter().take(deg + 1).cloned().collect(),
        }
    }

    /// Taylor expansion to degree `deg`; flags truncation of non-polynomial forms.
    pub fn to_taylor(&self, deg: usize) -> Truncation {
        let truncated = match self {
            AnalyticFunction::Taylor(c) => c.len() > deg + 1,
            AnalyticFunction::Kernel { lambda, .. } => *lambda != ZERO,
            AnalyticFunction::MomentKernel(m) => m.truncation() > deg,
        };
        Truncation { function: AnalyticFunction::Taylor(self.coefficients(deg)), truncated }
    }

    /// `f^{(k)}`.
    pub fn derivative(&self, k: usize) -> AnalyticFunction {
        if k == 0 {
            return self.clone();
        }
        match self {
            AnalyticFunction::Taylor(c) => AnalyticFunction::Taylor(diff_coeffs(c, k)),
            AnalyticFunction::Kernel { lambda, beta, scale } => {
                let mut s = *scale;
                for j in 0..k {
                    s *= lambda.conj() * (beta + j as f64);
                }
                AnalyticFunction::Kernel { lambda: *lambda, beta: beta + k as f64, scale: s }
            }
            AnalyticFunction::MomentKernel(m) => AnalyticFunction::Taylor(diff_coeffs(&m.coeffs, k)),
        }
    }

    /// `f_λ(z) = f(λz)`.
    pub fn dilate(&self, lambda: Complex64) -> AnalyticFunction {
        match self {
            AnalyticFunction::Taylor(c) => AnalyticFunction::Taylor(scale_coeffs(c, lambda)),
            AnalyticFunction::Kernel { lambda: mu, beta, scale } => {
                // 1 − μ̄(λz) = 1 − conj(μ λ̄) z
                AnalyticFunction::Kernel { lambda: mu * lambda.conj(), beta: *beta, scale: *scale }
            }
            AnalyticFunction::MomentKernel(m) => AnalyticFunction::Taylor(scale_coeffs(&m.coeffs, lambda)),
        }
    }
}

impl DiscFunction for AnalyticFunction {
    fn modulus(&self, z: Complex64) -> f64 {
        self.eval(z).norm()
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, a| acc * z + a)
}

fn diff_coeffs(c: &[Complex64], k: usize) -> Vec<Complex64> {
    if c.len() <= k {
        return vec![ZERO];
    }
    (k..c.len())
        .map(|n| {
            let f: f64 = ((n - k + 1)..=n).map(|j| j as f64).product();
            c[n] * f
        })
        .collect()
}

fn scale_coeffs(c: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let mut p = ONE;
    c.iter()
        .map(|a| {
            let v = a * p;
            p *= lambda;
            v
        })
        .collect()
}

fn antiderivative(c: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO];
    out.extend(c.iter().enumerate().map(|(n, a)| a / (n as f64 + 1.0)));
    out
}

fn mul_coeffs(a: &[Complex64], b: &[Complex64], cap: usize) -> (Vec<Complex64>, bool) {
    if a.is_empty() || b.is_empty() {
        return (vec![ZERO], false);
    }
    let full = a.len() + b.len() - 1;
    let len = full.min(cap + 1);
    let mut out = vec![ZERO; len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    let truncated = full > len && a.iter().any(|x| *x != ZERO) && b.iter().any(|y| *y != ZERO);
    (out, truncated)
}

fn taylor_of(f: &AnalyticFunction, cap: usize) -> (Vec<Complex64>, bool) {
    let t = f.to_taylor(cap);
    match t.function {
        AnalyticFunction::Taylor(c) => (c, t.truncated),
        _ => unreachable!("to_taylor returns a Taylor form"),
    }
}

/// `T_g(f)(z) = ∫_0^z f g'` by coefficient arithmetic, truncated at degree `cap`.
pub fn integrate_tg(f: &AnalyticFunction, g: &AnalyticFunction, cap: usize) -> Truncation {
    let (fc, t1) = taylor_of(f, cap);
    let (gc, t2) = taylor_of(g, cap + 1);
    let (h, t3) = mul_coeffs(&fc, &diff_coeffs(&gc, 1), cap.saturating_sub(1));
    Truncation { function: AnalyticFunction::Taylor(antiderivative(&h)), truncated: t1 || t2 || t3 }
}

/// `T_{g,a}(f) = T_I^n(f g^{(n)} + Σ_{k=1}^{n−1} a_k f^{(k)} g^{(n−k)})`.
pub fn integrate_tga(f: &AnalyticFunction, g: &AnalyticFunction, a: &[Complex64], n: usize, cap: usize) -> Result<Truncation> {
    if n == 0 {
        return invalid("T_{g,a} needs n >= 1");
    }
    if a.len() != n - 1 {
        return invalid(format!("T_{{g,a}} with n = {n} needs {} coefficients, got {}", n - 1, a.len()));
    }
    let inner_cap = cap.saturating_sub(n);
    let (fc, mut trunc) = taylor_of(f, cap);
    let (gc, t) = taylor_of(g, cap + n);
    trunc |= t;
    let (mut h, t) = mul_coeffs(&fc, &diff_coeffs(&gc, n), inner_cap);
    trunc |= t;
    for (k, ak) in a.iter().enumerate().map(|(i, v)| (i + 1, v)) {
        let (term, t) = mul_coeffs(&diff_coeffs(&fc, k), &diff_coeffs(&gc, n - k), inner_cap);
        trunc |= t;
        if h.len() < term.len() {
            h.resize(term.len(), ZERO);
        }
        for (i, v) in term.iter().enumerate() {
            h[i] += ak * v;
        }
    }
    for _ in 0..n {
        h = antiderivative(&h);
    }
    Ok(Truncation { function: AnalyticFunction::Taylor(h), truncated: trunc })
}

/// `|g(0)| + sup (1 − |z|²)|g'(z)|` over a polar grid geometric toward the boundary,
/// refined along the radius of the best grid point.
pub fn bloch_norm(g: &AnalyticFunction, n_theta: usize, min_gap: f64) -> f64 {
    let dg = g.derivative(1);
    let h = |z: Complex64| (1.0 - z.norm_sqr()) * dg.eval(z).norm();
    let mut gaps = vec![1.0];
    while *gaps.last().unwrap() > min_gap {
        let next = gaps.last().unwrap() * 10f64.powf(-0.125);
        gaps.push(next.max(min_gap));
    }
    let mut best = (h(ZERO), 0.0, 0.0);
    for &x in &gaps {
        for j in 0..n_theta {
            let t = 2.0 * PI * j as f64 / n_theta as f64;
            let v = h(Complex64::from_polar(1.0 - x, t));
            if v > best.0 {
                best = (v, 1.0 - x, t);
            }
        }
    }
    let t = best.2;
    let radial = estimate_sup(&|r| h(Complex64::from_polar(r, t)), SupDomain::Interval(0.0, 1.0 - min_gap), 200);
    g.eval(ZERO).norm() + best.0.max(radial.value)
}

/// Families separating tent and mixed norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFamily {
    /// `(1−r)^{1/p} |θ|^{−1/q} ω(r)^{−1/p}`.
    PropA,
    /// `(1−r)^{1/p} |θ|^{−1/p} ω(r)^{−1/p}`.
    PropB,
}

/// A measurable (non-analytic) test function; zero where `ω θ = 0` and for `|θ| ≤ cut`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurableTestFunction {
    pub family: TestFamily,
    pub p: f64,
    pub q: f64,
    pub weight: RadialWeight,
    pub theta_cut: f64,
}

impl MeasurableTestFunction {
    pub fn new(family: TestFamily, p: f64, q: f64, weight: RadialWeight) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) {
            return invalid("test function needs p, q > 0");
        }
        Ok(MeasurableTestFunction { family, p, q, weight, theta_cut: 0.0 })
    }

    /// Same function set to zero on `|θ| ≤ eps`.
    pub fn truncated(&self, eps: f64) -> Self {
        MeasurableTestFunction { theta_cut: eps, ..self.clone() }
    }

    pub fn value(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let th = if r == 0.0 { 0.0 } else { angle_dist(z.arg(), 0.0) };
        if th == 0.0 || th <= self.theta_cut || r >= 1.0 {
            return 0.0;
        }
        let lw = self.weight.log_density(r);
        if lw == f64::NEG_INFINITY {
            return 0.0;
        }
        let e = match self.family {
            TestFamily::PropA => 1.0 / self.q,
            TestFamily::PropB => 1.0 / self.p,
        };
        ((1.0 - r).ln() / self.p - e * th.ln() - lw / self.p).exp()
    }
}

impl DiscFunction for MeasurableTestFunction {
    fn modulus(&self, z: Complex64) -> f64 {
        self.value(z)
    }
}

/// Parsed function spec.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Analytic(AnalyticFunction),
    Measurable(MeasurableTestFunction),
}

impl DiscFunction for FunctionSpec {
    fn modulus(&self, z: Complex64) -> f64 {
        match self {
            FunctionSpec::Analytic(f) => f.modulus(z),
            FunctionSpec::Measurable(f) => f.modulus(z),
        }
    }
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

/// Parse `a`, `a+bi`, `a-bi` or `bi`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(Complex64::new(v, 0.0));
    }
    let body = s.strip_suffix('i')?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(i, c)| (*c == '+' || *c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().ok()?;
            let im_s = &body[i..];
            let im = if im_s == "+" || im_s == "-" { format!("{im_s}1") } else { im_s.to_string() };
            Some(Complex64::new(re, im.parse::<f64>().ok()?))
        }
        None => {
            let im = if body.is_empty() { 1.0 } else { body.parse::<f64>().ok()? };
            Some(Complex64::new(0.0, im))
        }
    }
}

/// Parse `poly:1,0,2`, `kernel:lambda=0.9,beta=3`, `momker:a=0.9,weight=<spec>,N=400`,
/// `propA:p=1,q=2,weight=<spec>` or `propB:...`.
///
/// A `weight=` value extends over following items that are not keys of the function
/// kind, so multi-parameter weight specs need no quoting.
pub fn parse_function(spec: &str) -> Result<FunctionSpec> {
    let (kind, body) = match spec.split_once(':') {
        Some(v) => v,
        None => return perr(0, "expected kind:parameters"),
    };
    let off = kind.len() + 1;
    let kind = kind.trim();
    if kind == "poly" {
        let mut coeffs = vec![];
        let mut pos = off;
        for tok in body.split(',') {
            match parse_complex(tok) {
                Some(c) => coeffs.push(c),
                None => return perr(pos, format!("bad coefficient '{tok}'")),
            }
            pos += tok.len() + 1;
        }
        return Ok(FunctionSpec::Analytic(AnalyticFunction::Taylor(coeffs)));
    }
    let keys: &[&str] = match kind {
        "kernel" => &["lambda", "beta"],
        "momker" => &["a", "weight", "N"],
        "propA" | "propB" => &["p", "q", "weight"],
        other => return perr(0, format!("unknown function kind '{other}'")),
    };
    let mut items: Vec<(usize, String, String)> = vec![];
    let mut pos = off;
    for tok in body.split(',') {
        let key = tok.split_once('=').map(|(k, _)| k.trim());
        match key {
            Some(k) if keys.contains(&k) => {
                let (_, v) = tok.split_once('=').unwrap();
                items.push((pos, k.to_string(), v.trim().to_string()));
            }
            _ => match items.last_mut() {
                Some((_, k, v)) if k == "weight" => {
                    v.push(',');
                    v.push_str(tok.trim());
                }
                _ => return perr(pos, format!("unexpected item '{tok}' for kind '{kind}'")),
            },
        }
        pos += tok.len() + 1;
    }
    let get = |k: &str| items.iter().find(|(_, key, _)| key == k).map(|(p, _, v)| (*p, v.clone()));
    let num = |k: &str, default: Option<f64>| -> Result<f64> {
        match get(k) {
            Some((p, v)) => v.parse::<f64>().or_else(|_| perr(p, format!("'{k}' expects a number"))),
            None => default.map(Ok).unwrap_or_else(|| perr(off, format!("missing '{k}'"))),
        }
    };
    let cplx = |k: &str| -> Result<Complex64> {
        match get(k) {
            Some((p, v)) => parse_complex(&v).map(Ok).unwrap_or_else(|| perr(p, format!("'{k}' expects a complex number"))),
            None => perr(off, format!("missing '{k}'")),
        }
    };
    let weight = || -> Result<RadialWeight> {
        match get("weight") {
            Some((p, v)) => parse_weight(&v).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: p + "weight=".len() + pos, msg },
                other => other,
            }),
            None => RadialWeight::constant(1.0),
        }
    };
    let at_off = |r: Result<AnalyticFunction>| r.map_err(|e| Error::Parse { pos: off, msg: e.to_string() });
    match kind {
        "kernel" => Ok(FunctionSpec::Analytic(at_off(AnalyticFunction::kernel(cplx("lambda")?, num("beta", Some(1.0))?))?)),
        "momker" => {
            let n = num("N", Some(400.0))?;
            let mk = MomentKernel::new(cplx("a")?, weight()?, n as usize).map_err(|e| Error::Parse { pos: off, msg: e.to_string() })?;
            Ok(FunctionSpec::Analytic(AnalyticFunction::MomentKernel(mk)))
        }
        _ => {
            let family = if kind == "propA" { TestFamily::PropA } else { TestFamily::PropB };
            let f = MeasurableTestFunction::new(family, num("p", None)?, num("q", None)?, weight()?)
                .map_err(|e| Error::Parse { pos: off, msg: e.to_string() })?;
            Ok(FunctionSpec::Measurable(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let z = c(0.3, 0.4);
        assert_eq!(AnalyticFunction::poly(&[0.0, 1.0]).eval(z), z);
        let k = AnalyticFunction::kernel(ZERO, 7.0).unwrap();
        assert_eq!(k.eval(c(0.9, 0.0)), ONE);
        let k = AnalyticFunction::kernel(c(0.5, 0.0), 2.0).unwrap();
        assert!((k.eval(c(0.5, 0.0)) - c(16.0 / 9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let f = AnalyticFunction::monomial(3);
        assert_eq!(f.derivative(1), AnalyticFunction::Taylor(vec![ZERO, ZERO, c(3.0, 0.0)]));
        assert_eq!(f.derivative(4).eval(c(0.2, 0.1)), ZERO);
        let lam = c(0.3, 0.4);
        let k = AnalyticFunction::kernel(lam, 2.5).unwrap();
        assert!((k.derivative(1).eval(ZERO) - lam.conj() * 2.5).norm() < 1e-14);
    }

    #[test]
    fn dilate_examples() {
        let f = AnalyticFunction::monomial(2);
        assert_eq!(f.dilate(c(0.5, 0.0)), AnalyticFunction::Taylor(vec![ZERO, ZERO, c(0.25, 0.0)]));
        let k = AnalyticFunction::kernel(c(0.9, 0.0), 3.0).unwrap();
        match k.dilate(c(0.5, 0.0)) {
            AnalyticFunction::Kernel { lambda, beta, .. } => {
                assert!((lambda - c(0.45, 0.0)).norm() < 1e-15);
                assert_eq!(beta, 3.0);
            }
            other => panic!("{other:?}"),
        }
        let z = c(0.2, -0.5);
        let lam = c(0.3, 0.6);
        let k = AnalyticFunction::kernel(c(0.4, 0.5), 1.5).unwrap();
        assert!((k.dilate(lam).eval(z) - k.eval(lam * z)).norm() < 1e-13);
    }

    #[test]
    fn tg_examples() {
        let one = AnalyticFunction::poly(&[1.0]);
        let z = AnalyticFunction::poly(&[0.0, 1.0]);
        let z2 = AnalyticFunction::poly(&[0.0, 0.0, 1.0]);
        let w = c(0.3, 0.2);
        assert!((integrate_tg(&one, &z, D_TRUNC).function.eval(w) - w).norm() < 1e-15);
        assert!((integrate_tg(&z, &z, D_TRUNC).function.eval(w) - w * w / 2.0).norm() < 1e-15);
        assert!((integrate_tg(&one, &z2, D_TRUNC).function.eval(w) - w * w).norm() < 1e-15);
        let t = integrate_tga(&one, &z2, &[ZERO], 2, D_TRUNC).unwrap().function;
        assert!((t.eval(w) - w * w).norm() < 1e-15);
        let t = integrate_tga(&z, &z2, &[ONE], 2, D_TRUNC).unwrap().function;
        assert!((t.eval(w) - w * w * w * (2.0 / 3.0)).norm() < 1e-15);
        assert!(integrate_tga(&z, &z2, &[], 2, D_TRUNC).is_err());
    }

    #[test]
    fn bloch_examples() {
        assert!((bloch_norm(&AnalyticFunction::poly(&[0.0, 1.0]), 64, 1e-6) - 1.0).abs() < 1e-12);
        assert!((bloch_norm(&AnalyticFunction::poly(&[2.0]), 64, 1e-6) - 2.0).abs() < 1e-12);
        let log: Vec<f64> = (0..=200).map(|n| if n == 0 { 0.0 } else { 1.0 / n as f64 }).collect();
        let b = bloch_norm(&AnalyticFunction::poly(&log), 64, 1e-6);
        assert!((1.0..=2.2).contains(&b), "{b}");
    }

    #[test]
    fn moment_kernel_matches_bergman_kernel_for_unit_weight() {
        let a = c(0.6, 0.3);
        let mk = MomentKernel::new(a, RadialWeight::constant(1.0).unwrap(), 400).unwrap();
        let f = AnalyticFunction::MomentKernel(mk);
        let z = c(0.5, -0.4);
        let exact = (ONE - a.conj() * z).powi(-2);
        let e = f.evaluate(z);
        assert!((e.value - exact).norm() < 1e-10 * exact.norm());
        assert!(e.precise);
    }

    #[test]
    fn parse_examples() {
        assert!(matches!(parse_function("poly:1,0,2"), Ok(FunctionSpec::Analytic(AnalyticFunction::Taylor(_)))));
        assert!(matches!(parse_function("kernel:lambda=0.9,beta=3"), Ok(FunctionSpec::Analytic(AnalyticFunction::Kernel { .. }))));
        match parse_function("propA:p=1,q=2,weight=exp:c=1,alpha=1,l=1") {
            Ok(FunctionSpec::Measurable(m)) => assert_eq!(m.family, TestFamily::PropA),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_function("kernel:lambda=x"), Err(Error::Parse { pos: 7, .. })));
        assert_eq!(parse_complex("0.5-0.25i"), Some(c(0.5, -0.25)));
        assert_eq!(parse_complex("2i"), Some(c(0.0, 2.0)));
    }
}
