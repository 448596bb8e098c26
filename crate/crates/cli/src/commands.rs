use std::io::Write;
use std::path::PathBuf;

use anyhow::Context as _;
use rayon::prelude::*;
use serde::Serialize;

use fracgm::neuro::{self, EtaStart, NeuronParams};
use fracgm::quadrature::{QuadratureConfig, LOW_ACCURACY_ALPHA};
use fracgm::simulate::{
    build_cov_matrix, cholesky_factor, pathwise_rl_ensemble, sample_paths, simulate_bm_paths, simulate_ou_paths,
    OuStart, Source,
};
use fracgm::validation::{self, Suite, DEFAULT_SEED};
use fracgm::{Ensemble, FracOrder64, Grid, OuParams64};

use crate::args::{
    Cli, CovTableArgs, Method, NeuroArgs, ProcessName, RangeArgs, SimulateArgs, SuiteName, ValidateArgs, VarCurveArgs,
};
use crate::config::{pick, pick_list, Eta0, FileConfig, NeuronFile};
use crate::output::{self, num, Meta};
use crate::process::ProcessSpec;
use crate::{UsageError, ValidationFailed};

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Context {
    pub file: FileConfig,
    pub quad: QuadratureConfig,
    invocation: String,
}

impl Context {
    pub fn new(cli: &Cli, file: FileConfig) -> anyhow::Result<Self> {
        let d = QuadratureConfig::default();
        let quad = QuadratureConfig::new(
            pick(cli.quad.nodes_per_panel, file.nodes_per_panel, d.nodes_per_panel),
            pick(cli.quad.panels, file.panels, d.panels),
            pick(cli.quad.rel_tol, file.rel_tol, d.rel_tol),
        )?;
        let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
        Ok(Context { file, quad, invocation })
    }

    fn meta(&self, command: &str) -> Meta {
        vec![
            ("command".into(), command.into()),
            ("version".into(), VERSION.into()),
            ("invocation".into(), self.invocation.clone()),
            ("nodes_per_panel".into(), self.quad.nodes_per_panel.to_string()),
            ("panels".into(), self.quad.panels.to_string()),
            ("rel_tol".into(), num(self.quad.rel_tol)),
        ]
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// One order per column for fractional processes, a single column otherwise.
fn columns(spec: &ProcessSpec, alphas: &[f64]) -> anyhow::Result<Vec<Option<FracOrder64>>> {
    if !spec.name.fractional() {
        return Ok(vec![None]);
    }
    if alphas.is_empty() {
        return Err(usage("at least one alpha is required"));
    }
    alphas.iter().map(|&a| Ok(Some(FracOrder64::new(a)?))).collect()
}

fn column_name(prefix: &str, alpha: Option<FracOrder64>) -> String {
    match alpha {
        Some(a) => format!("{prefix}_alpha={}", a.value()),
        None => prefix.to_string(),
    }
}

fn alpha_meta(meta: &mut Meta, spec: &ProcessSpec, cols: &[Option<FracOrder64>], diagonal_only: bool) {
    let list: Vec<String> = cols.iter().flatten().map(|a| a.value().to_string()).collect();
    if !list.is_empty() {
        meta.push(("alphas".into(), list.join(" ")));
    }
    if spec.uses_quadrature(diagonal_only) {
        for a in cols.iter().flatten().filter(|a| a.low_accuracy()) {
            meta.push((
                "warning".into(),
                format!("low-alpha accuracy warning: alpha={} < {LOW_ACCURACY_ALPHA}", a.value()),
            ));
        }
    }
}

fn time_range(r: &RangeArgs, f: &FileConfig) -> anyhow::Result<(Vec<f64>, Meta)> {
    let start = pick(r.t_start, f.t_start, 0.05);
    let end = pick(r.t_end, f.t_end, 5.0);
    let n = pick(r.t_points, f.t_points, 100);
    if !(start > 0.0 && end >= start && end.is_finite()) {
        return Err(usage(format!("need 0 < t-start <= t-end, got {start} and {end}")));
    }
    if n == 0 || (n == 1 && end != start) {
        return Err(usage("t-points must be >= 2 unless t-start equals t-end"));
    }
    let times = if n == 1 {
        vec![start]
    } else {
        let step = (end - start) / (n - 1) as f64;
        (0..n).map(|i| if i + 1 == n { end } else { start + step * i as f64 }).collect()
    };
    let meta = vec![
        ("t_start".into(), num(start)),
        ("t_end".into(), num(end)),
        ("t_points".into(), n.to_string()),
    ];
    Ok((times, meta))
}

pub fn var_curve(ctx: &Context, a: &VarCurveArgs) -> anyhow::Result<()> {
    let f = &ctx.file;
    let spec = ProcessSpec::resolve(&a.process, f)?;
    let alphas = pick_list(a.alphas.clone(), f.alphas.clone(), &[0.2, 0.5, 0.8, 1.0]);
    let cols = columns(&spec, &alphas)?;
    let (times, range_meta) = time_range(&a.range, f)?;

    let rows = times
        .par_iter()
        .map(|&t| {
            let mut row = vec![t];
            for &c in &cols {
                row.push(spec.var(t, c, &ctx.quad)?);
            }
            Ok(row)
        })
        .collect::<fracgm::Result<Vec<_>>>()?;

    let mut meta = ctx.meta("var-curve");
    meta.extend(spec.meta());
    meta.extend(range_meta);
    alpha_meta(&mut meta, &spec, &cols, true);
    let header: Vec<String> =
        std::iter::once("t".to_string()).chain(cols.iter().map(|&c| column_name("var", c))).collect();
    let out = output::open(a.out.as_deref().or(f.out.as_deref()))?;
    output::write_table(out, &meta, &header, &rows)
}

pub fn cov_table(ctx: &Context, a: &CovTableArgs) -> anyhow::Result<()> {
    let f = &ctx.file;
    let spec = ProcessSpec::resolve(&a.process, f)?;
    let alphas = pick_list(a.alphas.clone(), f.alphas.clone(), &[0.5]);
    let cols = columns(&spec, &alphas)?;
    let full = a.full_grid || f.full_grid.unwrap_or(false);
    let mut range = RangeArgs {
        t_start: a.range.t_start,
        t_end: a.range.t_end,
        t_points: a.range.t_points,
    };
    if full && range.t_points.is_none() && f.t_points.is_none() {
        range.t_points = Some(30);
    }
    let (times, range_meta) = time_range(&range, f)?;

    let mut meta = ctx.meta("cov-table");
    meta.extend(spec.meta());
    meta.extend(range_meta);
    let pairs: Vec<(f64, f64)> = if full {
        meta.push(("layout".into(), "full-grid".into()));
        times.iter().flat_map(|&u| times.iter().map(move |&t| (u, t))).collect()
    } else {
        let u = pick(a.u, f.u, 1.0);
        if !(u > 0.0 && u.is_finite()) {
            return Err(usage(format!("u must be > 0, got {u}")));
        }
        meta.push(("layout".into(), "fixed-u".into()));
        meta.push(("u".into(), num(u)));
        times.iter().map(|&t| (u, t)).collect()
    };
    alpha_meta(&mut meta, &spec, &cols, false);

    let rows = pairs
        .par_iter()
        .map(|&(u, t)| {
            let mut row = vec![u, t];
            for &c in &cols {
                row.push(spec.cov(u, t, c, &ctx.quad)?);
            }
            Ok(row)
        })
        .collect::<fracgm::Result<Vec<_>>>()?;
    let header: Vec<String> = ["u".to_string(), "t".to_string()]
        .into_iter()
        .chain(cols.iter().map(|&c| column_name("cov", c)))
        .collect();
    let out = output::open(a.out.as_deref().or(f.out.as_deref()))?;
    output::write_table(out, &meta, &header, &rows)
}

/// Uniform grid `0, h, ..., t_end`.
fn origin_grid(h: f64, t_end: f64) -> anyhow::Result<Grid> {
    if !(h > 0.0 && t_end > h && t_end.is_finite()) {
        return Err(usage(format!("need 0 < h < t-end, got h = {h}, t-end = {t_end}")));
    }
    Ok(Grid::from_origin_to(h, t_end)?)
}

fn positive_indices(grid: &Grid) -> Vec<usize> {
    (1..grid.len()).collect()
}

/// Output paths, one per order.
fn ensemble_paths(out: Option<PathBuf>, alphas: &[f64]) -> Vec<Option<PathBuf>> {
    match out {
        Some(p) if alphas.len() > 1 && p.as_os_str() != "-" => {
            alphas.iter().map(|&a| Some(output::with_alpha_suffix(&p, a))).collect()
        }
        other => vec![other; alphas.len()],
    }
}

pub fn simulate(ctx: &Context, a: &SimulateArgs) -> anyhow::Result<()> {
    let f = &ctx.file;
    let spec = ProcessSpec::resolve(&a.process, f)?;
    if !spec.name.fractional() {
        return Err(usage("simulate supports fibm, fiou and fisou"));
    }
    let alphas = pick_list(a.alphas.clone(), f.alphas.clone(), &[0.5]);
    let cols = columns(&spec, &alphas)?;
    let h = pick(a.h, f.h, 0.01);
    let t_end = pick(a.t_end, f.t_end, 2.0);
    let n_paths = pick(a.n_paths, f.n_paths, 1000);
    if n_paths == 0 {
        return Err(usage("n-paths must be >= 1"));
    }
    let seed = pick(a.seed, f.seed, DEFAULT_SEED);
    let method = pick(a.method, f.method, Method::Cholesky);
    let shared = a.shared_z || f.shared_z.unwrap_or(false);
    let full = origin_grid(h, t_end)?;
    let at = positive_indices(&full);
    let grid = Grid::new(full.times()[1..].to_vec())?;
    let paths = ensemble_paths(a.out.clone().or(f.out.clone()), &alphas);

    let driver_seed = |k: usize| if shared { seed } else { seed.wrapping_add(k as u64) };
    let driver = |s: u64| -> fracgm::Result<Ensemble> {
        match spec.name {
            ProcessName::Fibm => simulate_bm_paths(&full, n_paths, s),
            ProcessName::Fiou => simulate_ou_paths(spec.ou, OuStart::Fixed, &full, n_paths, s),
            _ => {
                let p = OuParams64::centered(spec.sou.mu, spec.sou.sigma)?;
                simulate_ou_paths(p, OuStart::Stationary, &full, n_paths, s)
            }
        }
    };
    let shared_driver = match (method, shared) {
        (Method::Pathwise, true) => Some(driver(seed)?),
        _ => None,
    };

    for (k, (alpha, path)) in cols.iter().zip(paths).enumerate() {
        let alpha = alpha.expect("fractional process");
        let s = driver_seed(k);
        let ensemble = match method {
            Method::Cholesky => {
                let c = build_cov_matrix(|u, t| spec.cov(u, t, Some(alpha), &ctx.quad), &grid)?;
                let l = cholesky_factor(&c)?;
                let z = sample_paths(&l, n_paths, s);
                let mean: Vec<f64> = grid
                    .times()
                    .iter()
                    .map(|&t| spec.frac_mean(t, alpha, &ctx.quad))
                    .collect::<fracgm::Result<_>>()?;
                let rows = z
                    .paths()
                    .map(|p| p.iter().zip(&mean).map(|(x, m)| x + m).collect())
                    .collect();
                let mut e = Ensemble::from_rows(grid.clone(), rows, s, Source::new(spec.name.as_str(), Some(alpha.value())))?;
                e.generator_id = z.generator_id;
                if l.jitter > 0.0 {
                    eprintln!("alpha {}: Cholesky needed jitter {:e} x max(diag)", alpha.value(), l.jitter);
                }
                e
            }
            Method::Pathwise => {
                let base = match &shared_driver {
                    Some(d) => pathwise_rl_ensemble(d, alpha, Some(&at))?,
                    None => pathwise_rl_ensemble(&driver(s)?, alpha, Some(&at))?,
                };
                let mut e = base;
                e.source = Source::new(spec.name.as_str(), Some(alpha.value()));
                e
            }
        };
        let mut meta = ctx.meta("simulate");
        // the ensemble writer records the process itself
        meta.extend(spec.meta().into_iter().filter(|(k, _)| k != "process"));
        meta.push(("method".into(), format!("{method:?}").to_lowercase()));
        meta.push(("shared_z".into(), shared.to_string()));
        meta.push(("base_seed".into(), seed.to_string()));
        meta.push(("h".into(), num(h)));
        meta.push(("t_end".into(), num(t_end)));
        if method == Method::Cholesky && spec.uses_quadrature(false) && alpha.low_accuracy() {
            meta.push((
                "warning".into(),
                format!("low-alpha accuracy warning: alpha={} < {LOW_ACCURACY_ALPHA}", alpha.value()),
            ));
        }
        let mut out = output::open(path.as_deref())?;
        ensemble.write_csv_with(&mut out, &meta)?;
        out.flush()?;
        if let Some(p) = &path {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Report {
    suite: String,
    seed: u64,
    version: &'static str,
    passed: bool,
    criteria: Vec<CriterionReport>,
}

#[derive(Serialize)]
struct CriterionReport {
    criterion: u8,
    name: &'static str,
    passed: bool,
    detail: String,
    seconds: f64,
}

pub fn validate(ctx: &Context, a: &ValidateArgs) -> anyhow::Result<()> {
    let f = &ctx.file;
    let name = pick(a.suite, f.suite, SuiteName::All);
    let seed = pick(a.seed, f.seed, DEFAULT_SEED);
    let suite = match name {
        SuiteName::Limits => Suite::Limits,
        SuiteName::Crossing => Suite::Crossing,
        SuiteName::Mc => Suite::Mc,
        SuiteName::Neuro => Suite::Neuro,
        SuiteName::All => Suite::All,
    };
    let results = validation::run_suite(suite, seed);
    for r in &results {
        eprintln!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let report = Report {
        suite: format!("{name:?}").to_lowercase(),
        seed,
        version: VERSION,
        passed: failed == 0,
        criteria: results
            .into_iter()
            .map(|r| CriterionReport {
                criterion: r.criterion,
                name: r.name,
                passed: r.passed,
                detail: r.detail,
                seconds: r.seconds,
            })
            .collect(),
    };
    let mut out = output::open(a.report.as_deref().or(f.report.as_deref()))?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    if failed > 0 {
        return Err(ValidationFailed(failed).into());
    }
    Ok(())
}

fn neuron_params(path: Option<&std::path::Path>) -> anyhow::Result<NeuronParams<f64>> {
    let Some(path) = path else {
        return Ok(NeuronParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0, EtaStart::Stationary)?);
    };
    let nf = NeuronFile::load(path)?;
    let eta0 = match nf.eta0 {
        Eta0::Value(v) => EtaStart::Fixed(v),
        Eta0::Marker(s) if s == "stationary" => EtaStart::Stationary,
        Eta0::Marker(s) => return Err(usage(format!("eta0 must be a number or \"stationary\", got {s:?}"))),
    };
    let mut p = NeuronParams::new(nf.c_m, nf.g_l, nf.v_l, nf.tau, nf.varsigma, nf.i0, eta0)?;
    p.v0 = nf.v0;
    p.validate()?;
    Ok(p)
}

pub fn neuro(ctx: &Context, a: &NeuroArgs) -> anyhow::Result<()> {
    let f = &ctx.file;
    let params_path = a.params.clone().or(f.params.clone());
    let p = neuron_params(params_path.as_deref())?;
    let alpha = FracOrder64::new(pick(a.alpha, f.alpha, 0.5))?;
    let h = pick(a.h, f.h, 0.01);
    let t_end = pick(a.t_end, f.t_end, 2.0);
    let n_paths = pick(a.n_paths, f.n_paths, 1000);
    if n_paths == 0 {
        return Err(usage("n-paths must be >= 1"));
    }
    let seed = pick(a.seed, f.seed, DEFAULT_SEED);
    let grid = origin_grid(h, t_end)?;
    let at = positive_indices(&grid);

    let eta = neuro::simulate_eta(&p, &grid, n_paths, seed)?;
    let v = neuro::simulate_voltage(&p, &eta, alpha, Some(&at))?;
    let mean: Vec<f64> = v
        .grid()
        .times()
        .par_iter()
        .map(|&t| neuro::voltage_mean(&p, t, alpha, &ctx.quad))
        .collect::<fracgm::Result<_>>()?;

    let mut meta = ctx.meta("neuro");
    if let Some(path) = &params_path {
        meta.push(("params_file".into(), path.display().to_string()));
    }
    let eta0 = match p.eta0 {
        EtaStart::Fixed(e) => num(e),
        EtaStart::Stationary => "stationary".into(),
    };
    for (k, x) in [("c_m", p.c_m), ("g_l", p.g_l), ("v_l", p.v_l), ("tau", p.tau), ("varsigma", p.varsigma)] {
        meta.push((k.into(), num(x)));
    }
    meta.push(("i0".into(), num(p.i0()?)));
    meta.push(("eta0".into(), eta0));
    meta.push(("h".into(), num(h)));
    meta.push(("t_end".into(), num(t_end)));
    meta.push(("summary_rows".into(), "analytic_mean".into()));
    if alpha.low_accuracy() {
        meta.push((
            "warning".into(),
            format!("low-alpha accuracy warning: alpha={} < {LOW_ACCURACY_ALPHA}", alpha.value()),
        ));
    }
    let out_path = a.out.clone().or(f.out.clone());
    let mut out = output::open(out_path.as_deref())?;
    v.write_csv_with(&mut out, &meta)?;
    output::write_labelled_row(&mut out, "analytic_mean", &mean)?;
    out.flush().context("writing voltage ensemble")?;
    Ok(())
}
