//! Named experiments. Each turns a configuration into a [`Report`] whose summary holds
//! family ratios, refinement changes and verdicts.
//!
//! Family experiments evaluate every case at the configured grid (level 0) and at one
//! refinement (level 1: angular nodes and radial panel subdivision doubled).

use disklab::functions::{
    bloch_norm, integrate_tga, AnalyticFunction, DiscFunction, FunctionSpec, MeasurableTestFunction, MomentKernel,
    TestFamily, D_TRUNC,
};
use disklab::geometry::ConePartition;
use disklab::norms::{
    hormander_maximal, nontangential_fn, norm, truncated_mixed_norm, truncated_tent_norm, w_maximal, PolarSamples,
    SpaceKind, SpaceSpec,
};
use disklab::projection::{
    boundary_grid, condition_bp, condition_dp, discrete_kernel_d, jn_surrogate, kernel_htilde, kernel_ktilde,
    kernel_sample, project, ProjectionSpec, Verdict,
};
use disklab::quadrature::QuadConfig;
use disklab::weights::{
    classify_dcheck_scan, classify_dhat, parse_weight, rho_sequence, ClassifierOptions, DerivedOp, GapGrid,
};
use disklab::Complex64;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::family::{random_points, random_polynomials, unit_samples};
use crate::report::{Report, Value};
use crate::CliError;

/// Experiment names accepted by [`run_experiment`].
pub const EXPERIMENTS: &[&str] = &[
    "maximal-bound",
    "al-eq-at",
    "dilation-density",
    "lp-equiv",
    "lp-moments",
    "regularized-equiv",
    "tent-vs-mixed",
    "tent-vs-mixed-strict",
    "w-counterexample",
    "testfn-bound",
    "tga-bloch",
    "projection",
    "conditions",
    "rho-table",
    "kernel-sandwich",
    "w-correspondence",
    "classify",
    "partition-demo",
];

/// Allowed relative change of a family sup or inf under one refinement.
pub const STABILITY_TOL: f64 = 0.1;

pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match name {
        "maximal-bound" => maximal_bound(cfg),
        "al-eq-at" => al_eq_at(cfg),
        "dilation-density" => dilation_density(cfg),
        "lp-equiv" => lp_equiv(cfg),
        "lp-moments" => lp_moments(cfg),
        "regularized-equiv" => regularized_equiv(cfg),
        "tent-vs-mixed" => tent_vs_mixed(cfg),
        "tent-vs-mixed-strict" => tent_vs_mixed_strict(cfg),
        "w-counterexample" => w_counterexample(cfg),
        "testfn-bound" => testfn_bound(cfg),
        "tga-bloch" => tga_bloch(cfg),
        "projection" => projection(cfg),
        "conditions" => conditions(cfg),
        "rho-table" => rho_table(cfg),
        "kernel-sandwich" => kernel_sandwich(cfg),
        "w-correspondence" => w_correspondence(cfg),
        "classify" => classify(cfg),
        "partition-demo" => partition_demo(cfg),
        other => Err(CliError::UnknownExperiment(other.to_string())),
    }
}

fn report(name: &str, cfg: &ExperimentConfig, columns: &[&str]) -> Report {
    Report::new(name, cfg.echo(), columns)
}

fn rel_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (b - a).abs() / a.abs().max(b.abs())
    }
}

fn levels(cfg: &ExperimentConfig) -> Result<[QuadConfig; 2], CliError> {
    let q = cfg.quad()?;
    Ok([q.clone(), q.refined(1)])
}

/// The analytic cases: the `fn` key if present, else the seeded polynomial family.
fn analytic_family(cfg: &ExperimentConfig) -> Result<Vec<AnalyticFunction>, CliError> {
    match cfg.function("fn")? {
        Some(FunctionSpec::Analytic(f)) => Ok(vec![f]),
        Some(FunctionSpec::Measurable(_)) => Err(CliError::Config { line: 0, msg: "'fn' must be analytic here".into() }),
        None => Ok(random_polynomials(cfg.u64_or("seed", 7)?, cfg.usize_or("count", 20)?, cfg.usize_or("degree", 12)?)),
    }
}

fn pq_tag(p: f64, q: f64) -> String {
    format!("p{p}_q{q}")
}

/// Allowed relative change of one case's value under refinement for its row to be
/// flagged converged.
pub const ROW_TOL: f64 = 1e-3;

/// Append a `converged` column: the row's `cols` values change by less than [`ROW_TOL`]
/// between level 0 and level 1 of the same case and `(p, q)`.
fn flag_rows(rep: &mut Report, cols: &[&str]) {
    let key_cols: Vec<usize> = ["case", "p", "q"].iter().map(|c| rep.column(c).unwrap()).collect();
    let lvl = rep.column("level").unwrap();
    let vals: Vec<usize> = cols.iter().map(|c| rep.column(c).unwrap()).collect();
    let key = |r: &Vec<Value>| key_cols.iter().map(|i| r[*i].as_f64().unwrap().to_bits()).collect::<Vec<_>>();
    let flags: Vec<bool> = rep
        .rows
        .iter()
        .map(|r| {
            rep.rows.iter().filter(|o| key(o) == key(r) && o[lvl] != r[lvl]).all(|o| {
                vals.iter().all(|i| {
                    let (a, b) = (r[*i].as_f64().unwrap(), o[*i].as_f64().unwrap());
                    a.is_finite() && rel_change(a, b) < ROW_TOL
                })
            })
        })
        .collect();
    rep.columns.push("converged".into());
    for (r, f) in rep.rows.iter_mut().zip(flags) {
        r.push(f.into());
    }
}

/// Family sup (or inf) of a ratio column per level and its refinement change.
struct FamilyStat {
    min: [f64; 2],
    max: [f64; 2],
}

impl FamilyStat {
    fn new(ratios: &[(usize, f64)]) -> FamilyStat {
        let mut s = FamilyStat { min: [f64::INFINITY; 2], max: [f64::NEG_INFINITY; 2] };
        for (lvl, v) in ratios {
            s.min[*lvl] = s.min[*lvl].min(*v);
            s.max[*lvl] = s.max[*lvl].max(*v);
        }
        s
    }

    fn change_min(&self) -> f64 {
        rel_change(self.min[0], self.min[1])
    }

    fn change_max(&self) -> f64 {
        rel_change(self.max[0], self.max[1])
    }

    fn finite(&self) -> bool {
        self.min.iter().chain(&self.max).all(|v| v.is_finite())
    }
}

/// `‖N_M f‖ / ‖f‖` in `L^q_p(ω)` and `T^q_p(ω)` over a polynomial family.
///
/// Boundedness of the nontangential maximal operator on the analytic mixed and tent
/// spaces: the family sup should be finite and stable under refinement.
pub fn maximal_bound(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let pairs = cfg.pq_pairs((2.0, 1.0))?;
    let m = cfg.f64_or("m", 1.0)?;
    let fam = analytic_family(cfg)?;
    let lv = levels(cfg)?;
    let mut rep = report(
        "maximal-bound",
        cfg,
        &["case", "level", "p", "q", "norm_f_L", "norm_Nf_L", "ratio_L", "norm_f_T", "norm_Nf_T", "ratio_T"],
    );
    let rows: Vec<Vec<Vec<Value>>> = fam
        .par_iter()
        .enumerate()
        .map(|(case, f)| -> Result<Vec<Vec<Value>>, CliError> {
            let mut out = vec![];
            for (level, c) in lv.iter().enumerate() {
                let sf = PolarSamples::sample(&|z| f.modulus(z), c)?;
                let sn = PolarSamples::sample(&nontangential_fn(f, m, c), c)?;
                for &(p, q) in &pairs {
                    let (lf, ln) = (sf.mixed(p, q, &w), sn.mixed(p, q, &w));
                    let (tf, tn) = (sf.tent(p, q, &w, 1.0), sn.tent(p, q, &w, 1.0));
                    out.push(vec![
                        case.into(),
                        level.into(),
                        p.into(),
                        q.into(),
                        lf.into(),
                        ln.into(),
                        (ln / lf).into(),
                        tf.into(),
                        tn.into(),
                        (tn / tf).into(),
                    ]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().flatten().for_each(|r| rep.push(r));
    flag_rows(&mut rep, &["norm_f_L", "norm_Nf_L", "norm_f_T", "norm_Nf_T"]);
    let mut stable = true;
    for &(p, q) in &pairs {
        let tag = pq_tag(p, q);
        for space in ["L", "T"] {
            let ratios = pick(&rep, p, q, &format!("ratio_{space}"));
            let s = FamilyStat::new(&ratios);
            rep.set(&format!("sup_ratio_{space}_{tag}_l0"), s.max[0]);
            rep.set(&format!("sup_ratio_{space}_{tag}_l1"), s.max[1]);
            rep.set(&format!("change_{space}_{tag}"), s.change_max());
            stable &= s.finite() && s.change_max() < STABILITY_TOL;
        }
    }
    rep.set("stable", stable);
    Ok(rep)
}

/// `(level, value)` pairs of one column restricted to a `(p, q)` pair.
fn pick(rep: &Report, p: f64, q: f64, col: &str) -> Vec<(usize, f64)> {
    let (ip, iq, il, ic) = (rep.column("p").unwrap(), rep.column("q").unwrap(), rep.column("level").unwrap(), rep.column(col).unwrap());
    rep.rows
        .iter()
        .filter(|r| r[ip].as_f64() == Some(p) && r[iq].as_f64() == Some(q))
        .map(|r| (r[il].as_f64().unwrap() as usize, r[ic].as_f64().unwrap_or(f64::NAN)))
        .collect()
}

/// Family interval of `‖f‖_{AT^q_p} / ‖f‖_{AL^q_p}` (equivalence of the analytic spaces).
pub fn al_eq_at(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let pairs = cfg.pq_pairs((1.0, 2.0))?;
    let fam = analytic_family(cfg)?;
    let lv = levels(cfg)?;
    let mut rep = report("al-eq-at", cfg, &["case", "level", "p", "q", "norm_L", "norm_T", "ratio"]);
    let rows: Vec<Vec<Vec<Value>>> = fam
        .par_iter()
        .enumerate()
        .map(|(case, f)| -> Result<Vec<Vec<Value>>, CliError> {
            let mut out = vec![];
            for (level, c) in lv.iter().enumerate() {
                let s = PolarSamples::sample(&|z| f.modulus(z), c)?;
                for &(p, q) in &pairs {
                    let (l, t) = (s.mixed(p, q, &w), s.tent(p, q, &w, 1.0));
                    out.push(vec![case.into(), level.into(), p.into(), q.into(), l.into(), t.into(), (t / l).into()]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().flatten().for_each(|r| rep.push(r));
    flag_rows(&mut rep, &["norm_L", "norm_T"]);
    let mut pass = true;
    for &(p, q) in &pairs {
        let tag = pq_tag(p, q);
        let s = FamilyStat::new(&pick(&rep, p, q, "ratio"));
        for l in 0..2 {
            rep.set(&format!("min_{tag}_l{l}"), s.min[l]);
            rep.set(&format!("max_{tag}_l{l}"), s.max[l]);
            rep.set(&format!("spread_{tag}_l{l}"), s.max[l] / s.min[l]);
        }
        rep.set(&format!("change_min_{tag}"), s.change_min());
        rep.set(&format!("change_max_{tag}"), s.change_max());
        pass &= s.finite() && s.max[1] / s.min[1] < 50.0 && s.change_min() < STABILITY_TOL && s.change_max() < STABILITY_TOL;
    }
    rep.set("pass", pass);
    Ok(rep)
}

fn space_kind(cfg: &ExperimentConfig) -> Result<SpaceKind, CliError> {
    match cfg.str_or("space", "mixed") {
        "mixed" => Ok(SpaceKind::Mixed),
        "tent" => Ok(SpaceKind::Tent),
        other => Err(CliError::Config { line: 0, msg: format!("unknown space '{other}'") }),
    }
}

/// `‖f_λ − f‖` along a ladder of dilations `λ → 1`.
pub fn dilation_density(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let (p, q) = (cfg.f64_or("p", 2.0)?, cfg.f64_or("q", 2.0)?);
    let spec = SpaceSpec::new(p, q, w, space_kind(cfg)?)?;
    let f = match cfg.function("fn")? {
        Some(FunctionSpec::Analytic(f)) => f,
        None => AnalyticFunction::kernel(Complex64::new(0.9, 0.0), 3.0)?,
        Some(_) => return Err(CliError::Config { line: 0, msg: "'fn' must be analytic".into() }),
    };
    let lambdas = cfg.list_or("lambdas", &[0.9, 0.99, 0.999])?;
    let quad = cfg.quad()?;
    let base = norm(&f, &spec, &quad)?;
    let mut rep = report("dilation-density", cfg, &["lambda", "distance", "relative", "est_rel_err", "converged"]);
    let mut dists = vec![];
    for lam in &lambdas {
        let fl = f.dilate(Complex64::new(*lam, 0.0));
        let diff = |z: Complex64| (fl.eval(z) - f.eval(z)).norm();
        let d = norm(&diff, &spec, &quad)?;
        dists.push(d.value);
        rep.push(vec![(*lam).into(), d.value.into(), (d.value / base.value).into(), d.est_rel_err.into(), d.converged.into()]);
    }
    rep.set("norm_f", base.value);
    rep.set("strictly_decreasing", dists.windows(2).all(|w| w[1] < w[0]));
    rep.set("final_relative", dists.last().copied().unwrap_or(f64::NAN) / base.value);
    Ok(rep)
}

/// `(‖f^{(k)}(1−|z|)^k‖ + Σ_{j<k}|f^{(j)}(0)|) / ‖f‖` over a polynomial family.
pub fn lp_equiv(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let pairs = cfg.pq_pairs((2.0, 2.0))?;
    let k = cfg.usize_or("k", 1)?;
    let kind = space_kind(cfg)?;
    let fam = analytic_family(cfg)?;
    let lv = levels(cfg)?;
    let mut rep = report("lp-equiv", cfg, &["case", "level", "p", "q", "lp", "norm", "ratio"]);
    let rows: Vec<Vec<Vec<Value>>> = fam
        .par_iter()
        .enumerate()
        .map(|(case, f)| -> Result<Vec<Vec<Value>>, CliError> {
            let dk = f.derivative(k);
            let jet: f64 = (0..k).map(|j| f.derivative(j).eval(Complex64::new(0.0, 0.0)).norm()).sum();
            let g = |z: Complex64| dk.eval(z).norm() * (1.0 - z.norm()).powi(k as i32);
            let mut out = vec![];
            for (level, c) in lv.iter().enumerate() {
                let sf = PolarSamples::sample(&|z| f.modulus(z), c)?;
                let sg = PolarSamples::sample(&g, c)?;
                for &(p, q) in &pairs {
                    let spec = SpaceSpec::new(p, q, w.clone(), kind)?;
                    let (lp, nf) = (sg.norm(&spec) + jet, sf.norm(&spec));
                    out.push(vec![case.into(), level.into(), p.into(), q.into(), lp.into(), nf.into(), (lp / nf).into()]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().flatten().for_each(|r| rep.push(r));
    flag_rows(&mut rep, &["lp", "norm"]);
    summarize_interval(&mut rep, &pairs, 50.0);
    Ok(rep)
}

fn summarize_interval(rep: &mut Report, pairs: &[(f64, f64)], max_spread: f64) {
    let mut pass = true;
    for &(p, q) in pairs {
        let tag = pq_tag(p, q);
        let s = FamilyStat::new(&pick(rep, p, q, "ratio"));
        for l in 0..2 {
            rep.set(&format!("spread_{tag}_l{l}"), s.max[l] / s.min[l]);
        }
        rep.set(&format!("min_{tag}"), s.min[1]);
        rep.set(&format!("max_{tag}"), s.max[1]);
        rep.set(&format!("change_min_{tag}"), s.change_min());
        rep.set(&format!("change_max_{tag}"), s.change_max());
        pass &= s.finite() && s.max[1] / s.min[1] < max_spread && s.change_min() < STABILITY_TOL && s.change_max() < STABILITY_TOL;
    }
    rep.set("pass", pass);
}

/// `s_n = n^{kp} (ω_{[kp]})_{np+1} / ω_{np+1}` with `ω_{[β]}(r) = (1−r)^β ω(r)`.
///
/// Bounded above and below exactly when the Littlewood–Paley formula holds.
pub fn lp_moments(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let specs: Vec<String> = cfg.str_or("weight", "std:gamma=0,norm=true;exp:c=1,alpha=1,l=1").split(';').map(str::to_string).collect();
    let ps = cfg.list_or("p", &[1.0, 2.0])?;
    let k = cfg.f64_or("k", 1.0)?;
    let (n_min, n_max) = (cfg.usize_or("n_min", 10)?, cfg.usize_or("n_max", 200)?);
    let mut rep = report("lp-moments", cfg, &["weight", "p", "n", "s_n"]);
    for (wi, spec) in specs.iter().enumerate() {
        let w = parse_weight(spec).map_err(|e| CliError::Spec { key: "weight".into(), spec: spec.clone(), source: e })?;
        for &p in &ps {
            let tilted = w.derive(DerivedOp::Tilt(k * p))?;
            let seq: Vec<f64> = (n_min..=n_max)
                .into_par_iter()
                .map(|n| {
                    let x = n as f64 * p + 1.0;
                    (k * p * (n as f64).ln() + tilted.log_moment(x) - w.log_moment(x)).exp()
                })
                .collect();
            for (i, s) in seq.iter().enumerate() {
                rep.push(vec![wi.into(), p.into(), (n_min + i).into(), (*s).into()]);
            }
            let (mn, mx) = seq.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(*v), a.1.max(*v)));
            let inc = seq.windows(2).all(|w| w[1] >= w[0]);
            let dec = seq.windows(2).all(|w| w[1] <= w[0]);
            let first = seq[0];
            let last = *seq.last().unwrap();
            let tag = format!("w{wi}_p{p}");
            rep.set(&format!("spread_{tag}"), mx / mn);
            rep.set(&format!("monotone_{tag}"), inc || dec);
            rep.set(&format!("factor_{tag}"), (last / first).max(first / last));
        }
    }
    Ok(rep)
}

/// `‖f‖_{ω} / ‖f‖_{ω̃}` with `ω̃(r) = ω̂(r)/(1−r)` the regularized weight.
pub fn regularized_equiv(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=1,norm=true")?;
    let wt = w.derive(DerivedOp::Regularized)?;
    let pairs = cfg.pq_pairs((2.0, 1.0))?;
    let kind = space_kind(cfg)?;
    let fam = analytic_family(cfg)?;
    let lv = levels(cfg)?;
    let mut rep = report("regularized-equiv", cfg, &["case", "level", "p", "q", "norm_w", "norm_reg", "ratio"]);
    let rows: Vec<Vec<Vec<Value>>> = fam
        .par_iter()
        .enumerate()
        .map(|(case, f)| -> Result<Vec<Vec<Value>>, CliError> {
            let mut out = vec![];
            for (level, c) in lv.iter().enumerate() {
                let s = PolarSamples::sample(&|z| f.modulus(z), c)?;
                for &(p, q) in &pairs {
                    let a = s.norm(&SpaceSpec::new(p, q, w.clone(), kind)?);
                    let b = s.norm(&SpaceSpec::new(p, q, wt.clone(), kind)?);
                    out.push(vec![case.into(), level.into(), p.into(), q.into(), a.into(), b.into(), (a / b).into()]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().flatten().for_each(|r| rep.push(r));
    flag_rows(&mut rep, &["norm_w", "norm_reg"]);
    summarize_interval(&mut rep, &pairs, 50.0);
    Ok(rep)
}

/// `‖f‖_{T^q_p} / ‖f‖_{L^q_p}` for a function or a polynomial family; for `p = q` the
/// ratio is `2^{1/p}` exactly.
pub fn tent_vs_mixed(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "const:c=1")?;
    let pairs = cfg.pq_pairs((2.0, 2.0))?;
    let fam = analytic_family(cfg)?;
    let lv = levels(cfg)?;
    let mut rep = report("tent-vs-mixed", cfg, &["case", "level", "p", "q", "mixed", "tent", "ratio"]);
    for (case, f) in fam.iter().enumerate() {
        for (level, c) in lv.iter().enumerate() {
            let s = PolarSamples::sample(&|z| f.modulus(z), c)?;
            for &(p, q) in &pairs {
                let (l, t) = (s.mixed(p, q, &w), s.tent(p, q, &w, 1.0));
                rep.push(vec![case.into(), level.into(), p.into(), q.into(), l.into(), t.into(), (t / l).into()]);
            }
        }
    }
    flag_rows(&mut rep, &["mixed", "tent"]);
    for &(p, q) in &pairs {
        let tag = pq_tag(p, q);
        let s = FamilyStat::new(&pick(&rep, p, q, "ratio"));
        rep.set(&format!("min_{tag}"), s.min[1]);
        rep.set(&format!("max_{tag}"), s.max[1]);
        if p == q {
            let target = 2f64.powf(1.0 / p);
            let dev = pick(&rep, p, q, "ratio").iter().map(|(_, v)| (v - target).abs()).fold(0.0, f64::max);
            rep.set(&format!("fubini_max_dev_{tag}"), dev);
        }
    }
    Ok(rep)
}

/// Truncated norms of the separating test functions along a ladder `ε → 0`.
///
/// Growth is measured on `‖·‖^{max(p,q)}`, the power in which the `∫dθ/|θ|`
/// divergence appears; stability is measured on the norm itself.
pub fn tent_vs_mixed_strict(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, q) = (cfg.f64_or("p", 1.0)?, cfg.f64_or("q", 2.0)?);
    let family = match cfg.str_or("family", if p < q { "propA" } else { "propB" }) {
        "propA" => TestFamily::PropA,
        "propB" => TestFamily::PropB,
        other => return Err(CliError::Config { line: 0, msg: format!("unknown family '{other}'") }),
    };
    let w = cfg.weight_or("weight", "const:c=1")?;
    let eps = cfg.list_or("eps", &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])?;
    let quad = QuadConfig { max_rounds: cfg.usize_or("max_rounds", 2)?, rel_tol: cfg.f64_or("rel_tol", 1e-4)?, ..cfg.quad()? };
    let f = MeasurableTestFunction::new(family, p, q, w.clone())?;
    let spec = SpaceSpec::mixed(p, q, w)?;
    let mut rep = report("tent-vs-mixed-strict", cfg, &["eps", "mixed", "mixed_converged", "tent", "tent_converged"]);
    let rows: Vec<Vec<Value>> = eps
        .par_iter()
        .map(|e| -> Result<Vec<Value>, CliError> {
            let ft = f.truncated(*e);
            let m = truncated_mixed_norm(&ft, &spec, *e, &quad)?;
            let t = truncated_tent_norm(&ft, &spec, *e, &quad)?;
            Ok(vec![(*e).into(), m.value.into(), m.converged.into(), t.value.into(), t.converged.into()])
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().for_each(|r| rep.push(r));
    let pw = p.max(q);
    for col in ["mixed", "tent"] {
        let v = rep.column_values(col);
        let (first, last) = (v[0], *v.last().unwrap());
        rep.set(&format!("growth_{col}"), (last / first).powf(pw));
        rep.set(&format!("variation_{col}"), v.iter().map(|x| (x / first - 1.0).abs()).fold(0.0, f64::max));
    }
    Ok(rep)
}

/// `‖f_a‖_{AL^q_p(μ)} / ‖f_a‖_{AT^q_p(μ)}` for moment-series Bergman kernels of `μ`
/// along `|a| → 1`. Reported, not asserted: the quadrature is hard near the boundary.
pub fn w_counterexample(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mu = cfg.weight_or("weight", "exp:c=1,alpha=1,l=1")?;
    let (p, q) = (cfg.f64_or("p", 1.0)?, cfg.f64_or("q", 2.0)?);
    let a_list = cfg.list_or("a", &[0.8, 0.9, 0.95, 0.98])?;
    let n_cap = cfg.usize_or("n_cap", 16384)?;
    let quad = cfg.quad()?;
    let spec = SpaceSpec::mixed(p, q, mu.clone())?;
    let mut rep = report("w-counterexample", cfg, &["a", "terms", "mixed", "mixed_converged", "tent", "tent_converged", "ratio"]);
    let mut ratios = vec![];
    let mut all_conv = true;
    for a in &a_list {
        let mk = MomentKernel::auto(Complex64::new(*a, 0.0), mu.clone(), 1.0, 1e-12, n_cap)?;
        let terms = mk.truncation() + 1;
        let f = AnalyticFunction::MomentKernel(mk);
        let m = norm(&f, &spec, &quad)?;
        let t = norm(&f, &spec.with_kind(SpaceKind::Tent), &quad)?;
        all_conv &= m.converged && t.converged;
        ratios.push(m.value / t.value);
        rep.push(vec![(*a).into(), terms.into(), m.value.into(), m.converged.into(), t.value.into(), t.converged.into(), (m.value / t.value).into()]);
    }
    let growth = ratios.last().unwrap() / ratios[0];
    rep.set("growth", growth);
    rep.set("converged", all_conv);
    rep.set("flagged", !all_conv);
    Ok(rep)
}

/// `Q(λ) = ‖(1−λ̄z)^{−β}‖ ω̂(λ)^{−1/p} (1−|λ|)^{β−1/q}` along `|λ| → 1`.
pub fn testfn_bound(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let (p, q) = (cfg.f64_or("p", 2.0)?, cfg.f64_or("q", 2.0)?);
    let beta = cfg.f64_or("beta", 2.0)?;
    let lambdas = cfg.list_or("lambdas", &[0.5, 0.7, 0.9, 0.95, 0.99])?;
    let quad = QuadConfig { max_rounds: cfg.usize_or("max_rounds", 6)?, ..cfg.quad()? };
    let spec = SpaceSpec::new(p, q, w.clone(), space_kind(cfg)?)?;
    let mut rep = report("testfn-bound", cfg, &["lambda", "norm", "normalized", "est_rel_err", "converged"]);
    let rows: Vec<Vec<Value>> = lambdas
        .par_iter()
        .map(|lam| -> Result<Vec<Value>, CliError> {
            let f = AnalyticFunction::kernel(Complex64::new(*lam, 0.0), beta)?;
            let n = norm(&f, &spec, &quad)?;
            let qv = n.value * w.tail_integral(*lam).powf(-1.0 / p) * (1.0 - lam).powf(beta - 1.0 / q);
            Ok(vec![(*lam).into(), n.value.into(), qv.into(), n.est_rel_err.into(), n.converged.into()])
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().for_each(|r| rep.push(r));
    let v = rep.column_values("normalized");
    let (mn, mx) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, x| (a.0.min(*x), a.1.max(*x)));
    rep.set("spread", mx / mn);
    Ok(rep)
}

/// `sup_f ‖T_{g,a} f‖ / ‖f‖` against the Bloch norm of `g`.
pub fn tga_bloch(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let (p, q) = (cfg.f64_or("p", 2.0)?, cfg.f64_or("q", 2.0)?);
    let spec = SpaceSpec::new(p, q, w, space_kind(cfg)?)?;
    let n = cfg.usize_or("k", 1)?.max(1);
    let a = vec![Complex64::new(0.0, 0.0); n - 1];
    let g_specs: Vec<String> = cfg.str_or("g", "poly:0,1;kernel:lambda=0.9,beta=1").split(';').map(str::to_string).collect();
    let fam = random_polynomials(cfg.u64_or("seed", 7)?, cfg.usize_or("count", 10)?, cfg.usize_or("degree", 12)?);
    let lv = levels(cfg)?;
    let mut rep = report("tga-bloch", cfg, &["g", "case", "norm_f", "norm_tf", "ratio", "truncated", "converged"]);
    for (gi, gs) in g_specs.iter().enumerate() {
        let g = match disklab::functions::parse_function(gs) {
            Ok(FunctionSpec::Analytic(g)) => g,
            Ok(_) => return Err(CliError::Config { line: 0, msg: format!("g '{gs}' must be analytic") }),
            Err(e) => return Err(CliError::Spec { key: "g".into(), spec: gs.clone(), source: e }),
        };
        let bloch = bloch_norm(&g, 256, 1e-6);
        let rows: Vec<Vec<Value>> = fam
            .par_iter()
            .enumerate()
            .map(|(case, f)| -> Result<Vec<Value>, CliError> {
                let t = integrate_tga(f, &g, &a, n, D_TRUNC)?;
                let mut vals = [[0.0; 2]; 2];
                for (l, c) in lv.iter().enumerate() {
                    vals[l][0] = PolarSamples::sample(&|z| f.modulus(z), c)?.norm(&spec);
                    vals[l][1] = PolarSamples::sample(&|z| t.function.modulus(z), c)?.norm(&spec);
                }
                let [nf, nt] = vals[1];
                let conv = rel_change(vals[0][0], nf) < ROW_TOL && rel_change(vals[0][1], nt) < ROW_TOL;
                Ok(vec![gi.into(), case.into(), nf.into(), nt.into(), (nt / nf).into(), t.truncated.into(), conv.into()])
            })
            .collect::<Result<_, _>>()?;
        let sup = rows.iter().map(|r| r[4].as_f64().unwrap()).fold(0.0, f64::max);
        rows.into_iter().for_each(|r| rep.push(r));
        rep.set(&format!("bloch_g{gi}"), bloch);
        rep.set(&format!("sup_ratio_g{gi}"), sup);
        rep.set(&format!("sup_over_bloch_g{gi}"), sup / bloch);
    }
    Ok(rep)
}

/// Reproduction of polynomials by `P_γ` and annihilation of `ζ̄`.
pub fn projection(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let gammas = cfg.list_or("gamma", &[0.0, 1.0])?;
    let fam = random_polynomials(cfg.u64_or("seed", 7)?, cfg.usize_or("count", 5)?, cfg.usize_or("degree", 8)?);
    let pts = random_points(cfg.u64_or("seed", 7)? ^ 0x5eed, cfg.usize_or("points", 20)?, 0.9);
    let quad = QuadConfig { n_theta: cfg.usize_or("n_theta", 64)?, gl_order: cfg.usize_or("gl_order", 12)?, rel_tol: cfg.f64_or("rel_tol", 1e-9)?, ..cfg.quad()? };
    let mut rep = report("projection", cfg, &["case", "gamma", "sup_error", "converged"]);
    for &gamma in &gammas {
        let rows: Vec<Vec<Value>> = fam
            .par_iter()
            .enumerate()
            .map(|(case, f)| -> Result<Vec<Value>, CliError> {
                let h = |z: Complex64| f.eval(z);
                let mut err: f64 = 0.0;
                let mut conv = true;
                for z in &pts {
                    let v = project(&h, gamma, *z, &quad, false)?;
                    err = err.max((v.value - f.eval(*z)).norm());
                    conv &= v.converged;
                }
                Ok(vec![case.to_string().into(), gamma.into(), err.into(), conv.into()])
            })
            .collect::<Result<_, _>>()?;
        let worst = rows.iter().map(|r| r[2].as_f64().unwrap()).fold(0.0, f64::max);
        rows.into_iter().for_each(|r| rep.push(r));
        rep.set(&format!("max_error_gamma{gamma}"), worst);
    }
    let conj = |z: Complex64| z.conj();
    let mut worst: f64 = 0.0;
    let mut conv = true;
    for z in &pts {
        let v = project(&conj, 0.0, *z, &quad, false)?;
        worst = worst.max(v.value.norm());
        conv &= v.converged;
    }
    rep.push(vec!["conj".into(), 0.0.into(), worst.into(), conv.into()]);
    rep.set("max_conj", worst);
    Ok(rep)
}

/// `D_p(γ, ω)` or `B_p(γ, ω)` with trend verdict.
pub fn conditions(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let gamma = cfg.f64_or("gamma", 0.0)?;
    let p = cfg.f64_or("p", 2.0)?;
    let spec = ProjectionSpec::new(gamma, p, cfg.f64_or("q", p)?, w)?;
    let which = cfg.str_or("which", "Dp");
    let rep_c = match which {
        "Dp" => condition_dp(&spec, cfg.usize_or("n_max", 100)?)?,
        "Bp" => condition_bp(&spec, &boundary_grid(cfg.usize_or("decades", 8)?, cfg.usize_or("per_decade", 8)?))?,
        other => return Err(CliError::Config { line: 0, msg: format!("unknown condition '{other}'") }),
    };
    let mut rep = report("conditions", cfg, &["n_or_r", "ratio"]);
    for (x, v) in &rep_c.sequence {
        rep.push(vec![(*x).into(), (*v).into()]);
    }
    rep.set("value", rep_c.value);
    rep.set("trend_slope", rep_c.trend_slope);
    rep.set(
        "verdict",
        match rep_c.verdict {
            Verdict::Finite => "finite",
            Verdict::UnboundedTrend => "unbounded (trend)",
            Verdict::Infinite => "infinite",
        },
    );
    Ok(rep)
}

/// `ρ_n` with `ω̂(ρ_n) = ω̂(0) K^{−n}`.
pub fn rho_table(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "const:c=1")?;
    let k = cfg.f64_or("k", 2.0)?;
    let rho = rho_sequence(&w, k, cfg.usize_or("n_max", 10)?)?;
    let mut rep = report("rho-table", cfg, &["n", "rho", "gap"]);
    for (n, r) in rho.iter().enumerate() {
        rep.push(vec![n.into(), (*r).into(), (1.0 - r).into()]);
    }
    Ok(rep)
}

/// Sampled check of `H̃/2^{2+γ} ≤ D ≤ H̃`, of `K̃_γ ≤ C_γ D` and of the `J_n` surrogate.
pub fn kernel_sandwich(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.usize_or("samples", 100_000)?;
    let seed = cfg.u64_or("seed", 7)?;
    let gammas = cfg.list_or("gamma", &[0.0, 1.0])?;
    let samples = unit_samples::<4>(seed, n);
    let mut rep = report(
        "kernel-sandwich",
        cfg,
        &["gamma", "samples", "violations", "c_gamma", "c_gamma_half", "drift", "surrogate_min", "surrogate_max"],
    );
    let mut total_violations = 0usize;
    for &gamma in &gammas {
        let mut violations = 0usize;
        let mut c_all: f64 = 0.0;
        let mut c_half: f64 = 0.0;
        let (mut s_min, mut s_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, u) in samples.iter().enumerate() {
            let (th, ph, x, y) = kernel_sample(*u);
            let (r, rho) = (1.0 - x, 1.0 - y);
            // `1 − r` is exact for r ≥ ½, so D and H̃ see the same point.
            let (x, y) = (1.0 - r, 1.0 - rho);
            let h = kernel_htilde(th, ph, x, y, gamma);
            let d = discrete_kernel_d(th, ph, r, rho, gamma);
            if d < h / 2f64.powf(2.0 + gamma) - 1e-12 || d > h + 1e-12 {
                violations += 1;
            }
            let kt = kernel_ktilde(th, ph, r, rho, gamma);
            if kt > 0.0 && d > 0.0 {
                c_all = c_all.max(kt / d);
                if i < n / 2 {
                    c_half = c_half.max(kt / d);
                }
            }
            if let Some(s) = jn_surrogate(th, ph, x, y, gamma) {
                if h > 0.0 {
                    s_min = s_min.min(s / h);
                    s_max = s_max.max(s / h);
                }
            }
        }
        total_violations += violations;
        let drift = rel_change(c_half, c_all);
        rep.push(vec![gamma.into(), n.into(), violations.into(), c_all.into(), c_half.into(), drift.into(), s_min.into(), s_max.into()]);
        rep.set(&format!("c_gamma{gamma}"), c_all);
        rep.set(&format!("drift_gamma{gamma}"), drift);
        rep.set(&format!("surrogate_ok_gamma{gamma}"), s_min >= 0.125 && s_max <= 8.0);
    }
    rep.set("violations", total_violations);
    Ok(rep)
}

/// `W_ν 1 = 1` and `M_η(φ)(z) = W_η f(1 − |z|)` for radial `φ(ζ) = f(1 − |ζ|)`.
pub fn w_correspondence(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let specs: Vec<String> = cfg.str_or("weight", "std:gamma=0,norm=true;std:gamma=1,norm=true").split(';').map(str::to_string).collect();
    let xs = cfg.list_or("x", &[0.1, 0.5, 0.9])?;
    let n_pts = cfg.usize_or("points", 20)?;
    let quad = cfg.quad()?;
    let f = |u: f64| (-u).exp() * (1.0 + 0.5 * (8.0 * u).cos());
    let phi = |z: Complex64| f(1.0 - z.norm());
    let mut rep = report("w-correspondence", cfg, &["weight", "kind", "x", "lhs", "rhs", "rel_diff"]);
    let mut max_id: f64 = 0.0;
    let mut max_corr: f64 = 0.0;
    for (wi, spec) in specs.iter().enumerate() {
        let nu = parse_weight(spec).map_err(|e| CliError::Spec { key: "weight".into(), spec: spec.clone(), source: e })?;
        for x in &xs {
            let v = w_maximal(&|_u| 1.0, &nu, *x, &quad)?;
            max_id = max_id.max((v - 1.0).abs());
            rep.push(vec![wi.into(), "identity".into(), (*x).into(), v.into(), 1.0.into(), (v - 1.0).abs().into()]);
        }
        let pts = random_points(cfg.u64_or("seed", 7)? + wi as u64, n_pts, 0.95);
        let rows: Vec<Vec<Value>> = pts
            .par_iter()
            .map(|z| -> Result<Vec<Value>, CliError> {
                let z = if z.norm() < 0.05 { z * (0.05 / z.norm().max(1e-300)) } else { *z };
                let m = hormander_maximal(&phi, &nu, z, &quad)?;
                let w = w_maximal(&f, &nu, 1.0 - z.norm(), &quad)?;
                Ok(vec![wi.into(), "correspondence".into(), z.norm().into(), m.into(), w.into(), rel_change(w, m).into()])
            })
            .collect::<Result<_, _>>()?;
        for r in rows {
            max_corr = max_corr.max(r[5].as_f64().unwrap());
            rep.push(r);
        }
    }
    rep.set("max_identity_error", max_id);
    rep.set("max_correspondence_rel", max_corr);
    Ok(rep)
}

/// `D̂` and `Ď` diagnostics of one weight.
pub fn classify(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let w = cfg.weight_or("weight", "std:gamma=0,norm=true")?;
    let ks = cfg.list_or("ks", &[2.0, 4.0, 8.0])?;
    let grid = GapGrid::classifier_default();
    let opts = ClassifierOptions::default();
    let dh = classify_dhat(&w, &grid, &opts);
    let (dc, reports) = classify_dcheck_scan(&w, &ks, &grid, &opts)?;
    let mut rep = report("classify", cfg, &["test", "k", "gap", "ratio"]);
    for (x, r) in &dh.ratios {
        rep.push(vec!["dhat".into(), 2.0.into(), (*x).into(), (*r).into()]);
    }
    for d in &reports {
        for (x, r) in &d.ratios {
            rep.push(vec!["dcheck".into(), d.k.into(), (*x).into(), (*r).into()]);
        }
        rep.set(&format!("dcheck_last_decade_inf_k{}", d.k), d.last_decade_inf);
    }
    rep.set("dhat_sup_ratio", dh.sup_ratio);
    rep.set("dhat_trend_slope", dh.trend_slope);
    rep.set("dhat", dh.member);
    rep.set("dcheck", dc);
    Ok(rep)
}

/// Cell labels `(j, k)` of `Γ_M(e^{iθ})` on a polar grid.
pub fn partition_demo(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let n = cfg.usize_or("levels", 4)?;
    let m = cfg.f64_or("m", 1.0)?;
    let axis = cfg.f64_or("x", 0.0)?;
    let part = ConePartition::new(Complex64::from_polar(1.0, axis), m, n)?;
    let res = cfg.usize_or("points", 40)?;
    let mut rep = report("partition-demo", cfg, &["x", "y", "j", "k"]);
    for i in 0..res {
        let r = (i as f64 + 0.5) / res as f64;
        for t in 0..res {
            let th = axis + m * (1.0 - r) * (2.0 * (t as f64 + 0.5) / res as f64 - 1.0);
            let z = Complex64::from_polar(r, th);
            if let Some((j, k)) = part.locate(z) {
                rep.push(vec![z.re.into(), z.im.into(), j.into(), k.into()]);
            }
        }
    }
    rep.set("located", rep.rows.len());
    Ok(rep)
}
