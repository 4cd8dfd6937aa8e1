#![allow(clippy::neg_cmp_op_on_partial_ord)]

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use warpsample::basis::{gamma_value, y_function, BasisIndex};
use warpsample::bench::{
    fit_rate, kappa, rate_sweep, run_sweep_with, svg_loglog, to_csv, ErrorReport, ErrorRow, Method, Metric, SweepOpts,
};
use warpsample::config::KvConfig;
use warpsample::signals::{make, Signal, SignalName, SignalParams};
use warpsample::synth::{SynthBasis, SynthOpts, DEFAULT_OMEGA_MAX, DEFAULT_POINTS};
use warpsample::transform::{analyze_closed_formula, analyze_fourier, reconstruct, reconstruct_synth, Expansion, IndexOrder};
use warpsample::warpcore::WarpProfile;
use warpsample::wks::{CutoffConvention, WksMode};
use warpsample::{Complex64, Error};

#[derive(Parser, Debug)]
#[command(name = "warpsample", version, about = "Warped-basis sampling and reconstruction of non-bandlimited signals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Tabulate a basis element gamma_n (or Y_j with --y) as `t,value`.
    Basis,
    /// Coefficients of a corpus signal: `kind,n,value`.
    Decompose,
    /// Partial sum with N terms next to the signal: `t,value,reference`.
    Reconstruct,
    /// Sample a corpus signal: `t,value`.
    Signal,
    /// Warping against WKS over an N range, in the bench CSV schema.
    Compare,
    /// Fitted against predicted decay exponents for X^ = (1+w^2)^{-mu/2}.
    Rates,
}

/// Every flag is optional so a config file can supply it; flags win.
#[derive(Args, Debug, Default, Clone)]
struct Opts {
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Basis index n.
    #[arg(long, global = true, allow_hyphen_values = true)]
    n: Option<f64>,
    /// Term count or range `a:b` (or `a:b:step`).
    #[arg(long = "N", global = true)]
    big_n: Option<String>,
    /// Time grid `start:stop:step`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    signal: Option<String>,
    #[arg(long, global = true)]
    s: Option<f64>,
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// n, pi-n or 2pi-n.
    #[arg(long = "cutoff-convention", global = true)]
    cutoff_convention: Option<String>,
    /// Write an SVG error plot here.
    #[arg(long, global = true)]
    plot: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Data on stdout, messages on stderr.
    #[arg(long, global = true)]
    stdout: bool,
    /// Tabulate Y_j instead of gamma_n.
    #[arg(long, global = true)]
    y: Option<u32>,
    /// Spectral decay exponent for `rates`.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Spectral smoothness for `rates` (default: unbounded).
    #[arg(long, global = true)]
    m: Option<f64>,
    /// symmetric or causal.
    #[arg(long, global = true)]
    order: Option<String>,
}

/// Exit 2: bad input. Exit 3: the sweep failed part way.
enum Failure {
    Input(anyhow::Error),
    Sweep(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Sweep(e)) => {
            eprintln!("sweep failed: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Res<()> {
    let cfg = merge(cli.opts)?;
    match cli.cmd {
        Cmd::Basis => cmd_basis(&cfg),
        Cmd::Decompose => cmd_decompose(&cfg),
        Cmd::Reconstruct => cmd_reconstruct(&cfg),
        Cmd::Signal => cmd_signal(&cfg),
        Cmd::Compare => cmd_compare(&cfg),
        Cmd::Rates => cmd_rates(&cfg),
    }
}

/// Fill unset flags from the config file.
fn merge(mut o: Opts) -> anyhow::Result<Opts> {
    let Some(path) = o.config.clone() else { return Ok(o) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let kv = KvConfig::parse(&text)?;
    let num = |k: &str| kv.get_f64(k).map_err(anyhow::Error::from);
    for key in kv.keys() {
        let v = kv.get(key).unwrap_or_default().to_string();
        match key {
            "alpha" => o.alpha = o.alpha.or(num(key)?),
            "beta" => o.beta = o.beta.or(num(key)?),
            "n" => o.n = o.n.or(num(key)?),
            "N" => o.big_n = o.big_n.or(Some(v)),
            "grid" => o.grid = o.grid.or(Some(v)),
            "signal" => o.signal = o.signal.or(Some(v)),
            "s" => o.s = o.s.or(num(key)?),
            "h" => o.h = o.h.or(num(key)?),
            "lambda" => o.lambda = o.lambda.or(num(key)?),
            "sigma" => o.sigma = o.sigma.or(num(key)?),
            "cutoff-convention" => o.cutoff_convention = o.cutoff_convention.or(Some(v)),
            "plot" => o.plot = o.plot.or(Some(PathBuf::from(v))),
            "out" => o.out = o.out.or(Some(PathBuf::from(v))),
            "stdout" => o.stdout |= matches!(v.as_str(), "true" | "1" | "yes"),
            "y" => o.y = o.y.or(Some(v.parse().with_context(|| format!("y={v}"))?)),
            "mu" => o.mu = o.mu.or(num(key)?),
            "m" => o.m = o.m.or(num(key)?),
            "order" => o.order = o.order.or(Some(v)),
            other => bail!("unknown config key {other:?}"),
        }
    }
    Ok(o)
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("grid {spec:?}: {p:?} is not a number")))
        .collect::<anyhow::Result<_>>()?;
    let [a, b, step] = parts[..] else { bail!("grid must be start:stop:step, got {spec:?}") };
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        bail!("grid needs start <= stop and step > 0, got {spec:?}");
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 50_000_000 {
        bail!("grid {spec:?} has {count} points");
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn parse_range(spec: &str) -> anyhow::Result<Vec<usize>> {
    let parts: Vec<usize> = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("N {spec:?}: {p:?} is not a nonnegative integer")))
        .collect::<anyhow::Result<_>>()?;
    let (a, b, step) = match parts[..] {
        [a] => (a, a, 1),
        [a, b] => (a, b, 1),
        [a, b, s] => (a, b, s),
        _ => bail!("N must be a, a:b or a:b:step, got {spec:?}"),
    };
    if a == 0 || b < a || step == 0 {
        bail!("N range needs 1 <= a <= b and step >= 1, got {spec:?}");
    }
    Ok((a..=b).step_by(step).collect())
}

fn signal(cfg: &Opts) -> anyhow::Result<Signal> {
    let name = cfg.signal.as_deref().ok_or_else(|| {
        anyhow!("--signal is required (cauchy, chirp, riemann, weierstrass, bandlimited_probe)\nusage: warpsample <COMMAND> --signal NAME [--N a:b] [--alpha A --beta B]")
    })?;
    let params = SignalParams { s: cfg.s, h: cfg.h, lambda: cfg.lambda, sigma: cfg.sigma, ..Default::default() };
    Ok(make(SignalName::parse(name)?, &params)?)
}

fn profile(cfg: &Opts) -> anyhow::Result<WarpProfile> {
    Ok(WarpProfile::new(cfg.alpha.unwrap_or(1.0), cfg.beta.unwrap_or(1.0))?)
}

fn order(cfg: &Opts) -> anyhow::Result<IndexOrder> {
    match cfg.order.as_deref().unwrap_or("symmetric") {
        "symmetric" => Ok(IndexOrder::Symmetric),
        "causal" => Ok(IndexOrder::Causal),
        other => bail!("order must be symmetric or causal, got {other:?}"),
    }
}

/// Integer alpha with beta = 1 has closed forms.
fn closed_alpha(p: &WarpProfile) -> Option<u32> {
    (p.beta() == 1.0 && p.alpha().fract() == 0.0).then_some(p.alpha() as u32)
}

fn emit(cfg: &Opts, data: &str) -> anyhow::Result<()> {
    match (&cfg.out, cfg.stdout) {
        (Some(path), false) => fs::write(path, data).with_context(|| format!("writing {}", path.display())),
        (Some(path), true) => {
            fs::write(path, data).with_context(|| format!("writing {}", path.display()))?;
            std::io::stdout().write_all(data.as_bytes()).context("writing stdout")
        }
        (None, _) => std::io::stdout().write_all(data.as_bytes()).context("writing stdout"),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_basis(cfg: &Opts) -> Res<()> {
    let p = profile(cfg)?;
    let ts = parse_grid(cfg.grid.as_deref().unwrap_or("-10:10:0.01"))?;
    let values: Vec<f64> = if let Some(j) = cfg.y {
        let a = closed_alpha(&p).ok_or_else(|| anyhow!("Y_j needs integer alpha and beta = 1"))?;
        let y = y_function(a, j)?;
        ts.iter().map(|&t| y.value(t)).collect()
    } else {
        let n = cfg.n.ok_or_else(|| anyhow!("--n is required"))?;
        match closed_alpha(&p) {
            Some(a) => {
                let idx = BasisIndex::new(a as i64, n)?;
                ts.iter().map(|&t| gamma_value(idx, t)).collect()
            }
            None => {
                let k = n - 0.5 * (p.alpha() + 1.0);
                if k.fract() != 0.0 {
                    return Err(anyhow!("n - (alpha+1)/2 must be an integer, got n = {n} for alpha = {}", p.alpha()).into());
                }
                let b = SynthBasis::default_grid(&p, n)?;
                ts.iter().map(|&t| b.value(t)).collect()
            }
        }
    };
    let mut s = String::from("t,value\n");
    for (t, v) in ts.iter().zip(&values) {
        writeln!(s, "{},{}", fmt(*t), fmt(*v)).expect("string write");
    }
    emit(cfg, &s)?;
    Ok(())
}

fn expansion(cfg: &Opts, sig: &Signal, count: usize) -> anyhow::Result<Expansion> {
    let p = profile(cfg)?;
    let n_max = 0.5 * (p.alpha() + 1.0) + count as f64 + 1.0;
    let exp = match closed_alpha(&p) {
        Some(a) => analyze_closed_formula(sig, a, n_max)?,
        None => analyze_fourier(&sig.spectrum_grid(2048.0, (1 << 17) + 1)?, &p, n_max)?,
    };
    Ok(exp.truncated(count, order(cfg)?))
}

fn count(cfg: &Opts, default: usize) -> anyhow::Result<usize> {
    match cfg.big_n.as_deref() {
        None => Ok(default),
        Some(s) => {
            let r = parse_range(s)?;
            if r.len() != 1 {
                bail!("this subcommand takes a single N, got {s:?}");
            }
            Ok(r[0])
        }
    }
}

fn cmd_decompose(cfg: &Opts) -> Res<()> {
    let sig = signal(cfg)?;
    let exp = expansion(cfg, &sig, count(cfg, 20)?)?;
    let mut s = String::from("kind,n,value\n");
    for (j, v) in exp.jet.iter().enumerate() {
        writeln!(s, "jet,{j},{}", fmt(*v)).expect("string write");
    }
    for k in exp.ordered_keys(order(cfg)?) {
        writeln!(s, "coeff,{},{}", exp.n_of(k), fmt(exp.coeffs[&k])).expect("string write");
    }
    emit(cfg, &s)?;
    Ok(())
}

fn cmd_reconstruct(cfg: &Opts) -> Res<()> {
    let sig = signal(cfg)?;
    let exp = expansion(cfg, &sig, count(cfg, 20)?)?;
    let ts = parse_grid(cfg.grid.as_deref().unwrap_or("0:10:0.01"))?;
    let values = if exp.integer_alpha().is_some() && exp.beta == 1.0 {
        reconstruct(&exp, &ts)?
    } else {
        reconstruct_synth(&exp, &profile(cfg)?, &ts, DEFAULT_OMEGA_MAX, DEFAULT_POINTS, SynthOpts::default())?
    };
    let mut s = String::from("t,value,reference\n");
    for (t, v) in ts.iter().zip(&values) {
        writeln!(s, "{},{},{}", fmt(*t), fmt(*v), fmt(sig.value(*t))).expect("string write");
    }
    emit(cfg, &s)?;
    Ok(())
}

fn cmd_signal(cfg: &Opts) -> Res<()> {
    let sig = signal(cfg)?;
    let ts = parse_grid(cfg.grid.as_deref().unwrap_or("0:10:0.001"))?;
    let mut s = String::from("t,value\n");
    for t in ts {
        writeln!(s, "{},{}", fmt(t), fmt(sig.value(t))).expect("string write");
    }
    emit(cfg, &s)?;
    Ok(())
}

fn cmd_compare(cfg: &Opts) -> Res<()> {
    let sig = signal(cfg)?;
    let p = profile(cfg)?;
    let ns = parse_range(cfg.big_n.as_deref().unwrap_or("1:78"))?;
    let convention: CutoffConvention = match cfg.cutoff_convention.as_deref() {
        Some(c) => c.parse()?,
        None => CutoffConvention::default(),
    };
    let opts = SweepOpts { alpha: p.alpha(), beta: p.beta(), convention, order: order(cfg)?, wks_mode: WksMode::Auto };
    let mut warp_rows: Vec<ErrorRow> = Vec::new();
    let mut wks_rows: Vec<ErrorRow> = Vec::new();
    let result = run_sweep_with(&sig, &ns, opts, |w, s| {
        warp_rows.push(*w);
        wks_rows.push(*s);
    });
    let reports = match result {
        Ok(r) => r,
        Err(e) => {
            let warp = ErrorReport { signal: sig.name().to_string(), method: Method::Warp, rows: warp_rows };
            let wks = ErrorReport { signal: sig.name().to_string(), method: Method::Wks, rows: wks_rows };
            let mut csv = to_csv(&[&warp, &wks]);
            writeln!(csv, "# incomplete: {e}").expect("string write");
            emit(cfg, &csv).map_err(Failure::Input)?;
            return Err(Failure::Sweep(e.into()));
        }
    };
    emit(cfg, &to_csv(&[&reports.0, &reports.1]))?;
    if let Some(path) = &cfg.plot {
        let title = format!("{}: relative L2 error", sig.name());
        fs::write(path, svg_loglog(&[&reports.0, &reports.1], Metric::L2, &title))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_rates(cfg: &Opts) -> Res<()> {
    let p = profile(cfg)?;
    let mu = cfg.mu.ok_or_else(|| anyhow!("--mu is required"))?;
    if !(mu > 0.5) {
        return Err(anyhow!("mu must exceed 1/2 for a square-integrable spectrum, got {mu}").into());
    }
    let m = cfg.m.unwrap_or(f64::INFINITY);
    let ns = parse_range(cfg.big_n.as_deref().unwrap_or("8:64"))?;
    if ns.len() < 8 {
        return Err(anyhow!("a rate fit needs at least 8 values of N, got {}", ns.len()).into());
    }
    let window = (ns[0], *ns.last().expect("nonempty"));
    let half_mu = 0.5 * mu;
    let name = format!("decay{mu}");
    let report = rate_sweep(&name, move |w| Complex64::new((1.0 + w * w).powf(-half_mu), 0.0), &p, &ns, 1 << 14)
        .map_err(|e| Failure::Sweep(e.into()))?;
    let mut s = String::from("metric,window_lo,window_hi,points,fitted,predicted,predicted_smooth\n");
    let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    for metric in [Metric::L2, Metric::Linf, Metric::H1] {
        let predicted = kappa(p.alpha(), p.beta(), m, mu).map(|k| 0.5 - k)?;
        let (points, fitted) = match fit_rate(&report, metric, window) {
            Ok(f) => (f.points, Some(f.slope)),
            Err(Error::InsufficientData(msg)) => {
                eprintln!("{metric}: no fit ({msg})");
                (0, None)
            }
            Err(e) => return Err(e.into()),
        };
        writeln!(s, "{metric},{},{},{points},{},{},{}", window.0, window.1, opt(fitted), fmt(predicted), opt(m.is_finite().then_some(0.5 - m)))
            .expect("string write");
    }
    emit(cfg, &s)?;
    if let Some(path) = &cfg.plot {
        fs::write(path, svg_loglog(&[&report], Metric::L2, &name)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
