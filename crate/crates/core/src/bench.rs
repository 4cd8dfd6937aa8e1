//! Error metrics, the N-sweep comparing warping against the sampling baseline,
//! convergence-rate fits and worst-case ratios.

use crate::basis::{plus_gammas_at, y_function};
use crate::error::{Error, Result};
use crate::signals::{dense_times, Signal, DENSE_POINTS, DENSE_STEP};
use crate::synth::{synthesize_batch, SynthOpts, DEFAULT_OMEGA_MAX, DEFAULT_POINTS};
use crate::transform::{analyze_closed_formula, analyze_fourier, analyze_warped, Expansion, IndexOrder};
use crate::warpcore::WarpProfile;
use crate::wks::{reconstruct_dense, CutoffConvention, Lowpasser, WksMode};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};
use std::sync::Arc;

pub const CSV_HEADER: &str = "signal,method,N,terms,e_inf,e_l2,e_h1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Linf,
    L2,
    H1,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Linf => "linf",
            Metric::L2 => "l2",
            Metric::H1 => "h1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Warp,
    Wks,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Warp => "warp",
            Method::Wks => "wks",
        })
    }
}

/// Relative errors against a fixed reference on a uniform grid.
pub struct ErrorMeter {
    reference: Vec<f64>,
    h: f64,
    fft: Arc<dyn Fft<f64>>,
    padded: usize,
    norms: [f64; 3],
}

impl ErrorMeter {
    pub fn new(reference: &[f64], h: f64) -> Result<Self> {
        if reference.len() < 2 || !(h > 0.0) {
            return Err(Error::Param("reference needs >= 2 samples and a positive step".into()));
        }
        // zero-pad x4 (to a power of two) before the H1 transform
        let padded = (4 * reference.len()).next_power_of_two();
        let fft = FftPlanner::new().plan_fft_forward(padded);
        let mut m = ErrorMeter { reference: reference.to_vec(), h, fft, padded, norms: [0.0; 3] };
        let r = m.reference.clone();
        m.norms = [linf(&r), l2_sq(&r, h).sqrt(), m.h1_sq(&r).sqrt()];
        if m.norms.contains(&0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(m)
    }

    /// `sum_k (1 + w_k^2) |D_k|^2 dw / (2 pi)` for the padded DFT.
    fn h1_sq(&self, d: &[f64]) -> f64 {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded];
        for (b, v) in buf.iter_mut().zip(d) {
            b.re = *v;
        }
        self.fft.process(&mut buf);
        let dw = 2.0 * PI / (self.padded as f64 * self.h);
        let half = self.padded / 2;
        let s: f64 = buf
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let m = if k < half { k as f64 } else { k as f64 - self.padded as f64 };
                let w = m * dw;
                (1.0 + w * w) * z.norm_sqr()
            })
            .sum();
        s * self.h * self.h * dw / (2.0 * PI)
    }

    pub fn rel(&self, approx: &[f64], metric: Metric) -> Result<f64> {
        if approx.len() != self.reference.len() {
            return Err(Error::GridMismatch(format!("{} samples against {}", approx.len(), self.reference.len())));
        }
        let d: Vec<f64> = self.reference.iter().zip(approx).map(|(a, b)| a - b).collect();
        Ok(match metric {
            Metric::Linf => linf(&d) / self.norms[0],
            Metric::L2 => l2_sq(&d, self.h).sqrt() / self.norms[1],
            Metric::H1 => self.h1_sq(&d).sqrt() / self.norms[2],
        })
    }

    pub fn all(&self, approx: &[f64]) -> Result<[f64; 3]> {
        Ok([self.rel(approx, Metric::Linf)?, self.rel(approx, Metric::L2)?, self.rel(approx, Metric::H1)?])
    }
}

fn linf(d: &[f64]) -> f64 {
    d.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn l2_sq(d: &[f64], h: f64) -> f64 {
    let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
    crate::quad::trapezoid(&sq, h)
}

/// `||X - Xtilde|| / ||X||` on a uniform grid of step `h`.
pub fn rel_error(x: &[f64], xt: &[f64], h: f64, metric: Metric) -> Result<f64> {
    ErrorMeter::new(x, h)?.rel(xt, metric)
}

/// Relative error against a signal's dense samples.
pub fn rel_error_signal(x: &Signal, xt: &[f64], metric: Metric) -> Result<f64> {
    rel_error(x.dense_samples(), xt, DENSE_STEP, metric)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub terms: usize,
    pub e_inf: f64,
    pub e_l2: f64,
    pub e_h1: f64,
}

impl ErrorRow {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Linf => self.e_inf,
            Metric::L2 => self.e_l2,
            Metric::H1 => self.e_h1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub signal: String,
    pub method: Method,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn new(signal: &str, method: Method) -> Self {
        ErrorReport { signal: signal.to_string(), method, rows: Vec::new() }
    }

    pub fn row(&self, n: usize) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// CSV lines without the header, 17 significant digits.
    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            writeln!(s, "{},{},{},{},{:.16e},{:.16e},{:.16e}", self.signal, self.method, r.n, r.terms, r.e_inf, r.e_l2, r.e_h1)
                .expect("write to string");
        }
        s
    }
}

/// Header plus all rows.
pub fn to_csv(reports: &[&ErrorReport]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in reports {
        s.push_str(&r.csv_rows());
    }
    s
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOpts {
    pub alpha: f64,
    pub beta: f64,
    pub convention: CutoffConvention,
    pub order: IndexOrder,
    pub wks_mode: WksMode,
}

impl Default for SweepOpts {
    fn default() -> Self {
        SweepOpts {
            alpha: 1.0,
            beta: 1.0,
            convention: CutoffConvention::default(),
            order: IndexOrder::default(),
            wks_mode: WksMode::default(),
        }
    }
}

/// Warping with N coefficients (plus the center jet) against the baseline at
/// the matching cutoff, for every N in `ns`.
///
/// `on_row` sees each finished pair of rows, so callers can stream partial output.
pub fn run_sweep_with(
    sig: &Signal,
    ns: &[usize],
    opts: SweepOpts,
    mut on_row: impl FnMut(&ErrorRow, &ErrorRow),
) -> Result<(ErrorReport, ErrorReport)> {
    if ns.is_empty() {
        return Err(Error::Param("empty N range".into()));
    }
    if ns.contains(&0) {
        return Err(Error::Param("N must be >= 1".into()));
    }
    let meter = ErrorMeter::new(sig.dense_samples(), DENSE_STEP)?;
    let n_top = *ns.iter().max().expect("nonempty");
    let mut warp = ErrorReport::new(sig.name(), Method::Warp);
    let mut wks = ErrorReport::new(sig.name(), Method::Wks);
    let mut partial = WarpPartialSums::new(sig, &opts, n_top)?;
    let lp = Lowpasser::new(sig);
    let mut sorted: Vec<usize> = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for n in sorted {
        let (xw, terms) = partial.advance_to(n);
        let [a, b, c] = meter.all(xw)?;
        let rw = ErrorRow { n, terms, e_inf: a, e_l2: b, e_h1: c };
        let (xs, samples) = reconstruct_dense(&lp, n, opts.convention, opts.wks_mode)?;
        let [a, b, c] = meter.all(&xs)?;
        let rs = ErrorRow { n, terms: samples, e_inf: a, e_l2: b, e_h1: c };
        on_row(&rw, &rs);
        warp.rows.push(rw);
        wks.rows.push(rs);
    }
    Ok((warp, wks))
}

pub fn run_sweep(sig: &Signal, ns: &[usize], opts: SweepOpts) -> Result<(ErrorReport, ErrorReport)> {
    run_sweep_with(sig, ns, opts, |_, _| {})
}

/// Warping partial sums on the dense grid, one coefficient at a time.
struct WarpPartialSums {
    exp: Expansion,
    keys: Vec<i64>,
    used: usize,
    acc: Vec<f64>,
    /// Basis values on the dense grid, by key.
    columns: std::collections::HashMap<i64, Vec<f64>>,
}

impl WarpPartialSums {
    fn new(sig: &Signal, opts: &SweepOpts, n_top: usize) -> Result<Self> {
        let profile = WarpProfile::new(opts.alpha, opts.beta)?;
        let h = 0.5 * (opts.alpha + 1.0);
        let n_max = h + n_top as f64 + 1.0;
        let ts = dense_times();
        let closed = opts.beta == 1.0 && opts.alpha.fract() == 0.0;
        let exp = if closed {
            analyze_closed_formula(sig, opts.alpha as u32, n_max)?
        } else {
            let grid = sig.spectrum_grid(2048.0, (1 << 17) + 1)?;
            analyze_fourier(&grid, &profile, n_max)?
        };
        let keys: Vec<i64> = exp.ordered_keys(opts.order).into_iter().take(n_top).collect();
        let mut columns = std::collections::HashMap::new();
        let mut acc = vec![0.0; DENSE_POINTS];
        if closed {
            let alpha = opts.alpha as u32;
            for (j, xj) in exp.jet.iter().enumerate() {
                let y = y_function(alpha, j as u32)?;
                for (a, &t) in acc.iter_mut().zip(&ts) {
                    *a += xj * y.value(t);
                }
            }
            let plus_count = keys.iter().filter(|&&k| k >= 0).map(|&k| k + 1).max().unwrap_or(0) as usize;
            let table: Vec<Vec<f64>> = ts.iter().map(|&t| plus_gammas_at(alpha, plus_count, t)).collect();
            for &k in &keys {
                let col: Vec<f64> = if k >= 0 {
                    table.iter().map(|row| row[k as usize]).collect()
                } else if k < -(alpha as i64) {
                    // gamma_{-n}(t) = gamma_n(-t): on t >= 0 only t = 0 survives
                    let deg = (-k - alpha as i64 - 1) as usize;
                    let mut c = vec![0.0; DENSE_POINTS];
                    c[0] = plus_gammas_at(alpha, deg + 1, 0.0)[deg];
                    c
                } else {
                    ts.iter().map(|&t| crate::basis::gamma_value(crate::basis::BasisIndex::plus(alpha, k), t)).collect()
                };
                columns.insert(k, col);
            }
        } else {
            let ns: Vec<f64> = keys.iter().map(|&k| exp.n_of(k)).collect();
            for (chunk_k, chunk_n) in keys.chunks(8).zip(ns.chunks(8)) {
                let synth = synthesize_batch(&profile, chunk_n, DEFAULT_OMEGA_MAX, DEFAULT_POINTS, SynthOpts::default())?;
                for (k, b) in chunk_k.iter().zip(&synth) {
                    columns.insert(*k, ts.iter().map(|&t| b.value(t)).collect());
                }
            }
        }
        Ok(WarpPartialSums { exp, keys, used: 0, acc, columns })
    }

    /// Partial sum with the first `n` keys and its term count.
    fn advance_to(&mut self, n: usize) -> (&[f64], usize) {
        while self.used < n.min(self.keys.len()) {
            let k = self.keys[self.used];
            let a = self.exp.coeffs[&k];
            for (s, g) in self.acc.iter_mut().zip(&self.columns[&k]) {
                *s += a * g;
            }
            self.used += 1;
        }
        (&self.acc, self.used + self.exp.jet.len())
    }
}

/// `kappa = min(m, (mu - alpha beta - beta) / (2 beta - 1))`.
pub fn kappa(alpha: f64, beta: f64, m: f64, mu: f64) -> Result<f64> {
    if !(beta > 0.5) {
        return Err(Error::Param(format!("kappa needs beta > 1/2, got {beta}")));
    }
    if !(m > 0.0) || !mu.is_finite() || !alpha.is_finite() {
        return Err(Error::Param(format!("kappa needs m > 0 and finite alpha, mu; got m={m}, alpha={alpha}, mu={mu}")));
    }
    Ok(m.min((mu - alpha * beta - beta) / (2.0 * beta - 1.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub metric: Metric,
    pub window: (usize, usize),
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// `1/2 - kappa`, the tail bound's exponent.
    pub predicted: Option<f64>,
    /// `1/2 - m`, the exponent in the smoothness-only statement.
    pub predicted_smooth: Option<f64>,
}

impl RateFit {
    pub fn with_prediction(mut self, alpha: f64, beta: f64, m: f64, mu: f64) -> Result<Self> {
        self.predicted = Some(0.5 - kappa(alpha, beta, m, mu)?);
        self.predicted_smooth = Some(0.5 - m);
        Ok(self)
    }
}

/// Errors at or below this are round-off and carry no rate information.
pub const RATE_FLOOR: f64 = 1e-13;

/// Least-squares slope of `ln E` against `ln N` over `window` (inclusive).
pub fn fit_rate(report: &ErrorReport, metric: Metric, window: (usize, usize)) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.n >= window.0 && r.n <= window.1)
        .map(|r| (r.n as f64, r.get(metric)))
        .filter(|&(_, e)| e.is_finite() && e > RATE_FLOOR)
        .map(|(n, e)| (n.ln(), e.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "{} usable points in N window {}..={} (errors above {RATE_FLOOR:e}); need at least 8",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(RateFit { metric, window, points: pts.len(), slope, intercept: my - slope * mx, predicted: None, predicted_smooth: None })
}

/// Which hypotheses of the worst-case comparison hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub beta_gt_half: bool,
    /// `0 < alpha beta < mu - 1/2`
    pub alpha_beta_range: bool,
    /// `2 mu (1 - beta) > alpha beta + beta`
    pub mu_beta: bool,
    pub m_gt_mu: bool,
}

impl Hypotheses {
    pub fn check(alpha: f64, beta: f64, m: f64, mu: f64) -> Self {
        let ab = alpha * beta;
        Hypotheses {
            beta_gt_half: beta > 0.5,
            alpha_beta_range: ab > 0.0 && ab < mu - 0.5,
            mu_beta: 2.0 * mu * (1.0 - beta) > ab + beta,
            m_gt_mu: m > mu,
        }
    }

    pub fn all(&self) -> bool {
        self.beta_gt_half && self.alpha_beta_range && self.mu_beta && self.m_gt_mu
    }
}

/// `rho_inf(N) = N^{kappa + 1/2 - mu}`, `rho_2(N) = N^{kappa - mu}`, with the
/// hypothesis flags (violations are reported, not refused).
pub fn worst_case_ratio(n: f64, alpha: f64, beta: f64, m: f64, mu: f64, metric: Metric) -> Result<(f64, Hypotheses)> {
    let k = kappa(alpha, beta, m, mu)?;
    let e = match metric {
        Metric::L2 => k - mu,
        Metric::Linf => k + 0.5 - mu,
        Metric::H1 => return Err(Error::Param("worst-case ratios exist for l2 and linf only".into())),
    };
    if !(n > 0.0) {
        return Err(Error::Param(format!("N must be positive, got {n}")));
    }
    Ok((n.powf(e), Hypotheses::check(alpha, beta, m, mu)))
}

/// Truncation errors for a signal given by its spectrum, computed in the
/// warped variable on a midpoint grid of `I` (no time discretization).
///
/// `e_l2` and `e_inf` are time-domain (the latter on `t in [-10, 10]`, 401 points),
/// `e_h1` is the `H_varpi` norm, which is H^1 for `alpha = beta = 1`.
pub fn rate_sweep(
    name: &str,
    xhat: impl Fn(f64) -> Complex64 + Sync,
    profile: &WarpProfile,
    ns: &[usize],
    u_points: usize,
) -> Result<ErrorReport> {
    if ns.is_empty() {
        return Err(Error::Param("empty N range".into()));
    }
    let n_top = *ns.iter().max().expect("nonempty");
    let h = 0.5 * (profile.alpha() + 1.0);
    let exp = analyze_warped(&xhat, profile, h + n_top as f64 + 1.0, u_points)?;
    let keys = exp.ordered_keys(IndexOrder::Symmetric);
    let du = PI / u_points as f64;
    let us: Vec<f64> = (0..u_points).map(|j| -FRAC_PI_2 + (j as f64 + 0.5) * du).collect();
    let mut warped = Vec::with_capacity(u_points);
    let mut inv_chi = Vec::with_capacity(u_points);
    let mut phis = Vec::with_capacity(u_points);
    let mut dphi = Vec::with_capacity(u_points);
    for &u in &us {
        let w = profile.phi(u)?;
        let c = profile.chi(u)?;
        warped.push(xhat(w) * c);
        inv_chi.push(1.0 / c);
        phis.push(w);
        dphi.push(profile.phi_prime(u)?);
    }
    let ts: Vec<f64> = (0..=400).map(|i| -10.0 + i as f64 * 0.05).collect();
    // time values (1/2 pi) int R(u)/chi(u) e^{i phi(u) t} phi'(u) du by phasor rotation in t
    let to_time = |r: &[Complex64]| -> Vec<f64> {
        let mut out = vec![0.0; ts.len()];
        for j in 0..u_points {
            let g = r[j] * inv_chi[j] * dphi[j] * du / (2.0 * PI);
            let step = Complex64::from_polar(1.0, phis[j] * 0.05);
            let mut z = g * Complex64::from_polar(1.0, phis[j] * ts[0]);
            for o in out.iter_mut() {
                *o += z.re;
                z *= step;
            }
        }
        out
    };
    let l2 = |r: &[Complex64]| -> f64 {
        (0..u_points).map(|j| r[j].norm_sqr() * inv_chi[j] * inv_chi[j] * dphi[j]).sum::<f64>() * du / (2.0 * PI)
    };
    let hw = |r: &[Complex64]| -> f64 { r.iter().map(|z| z.norm_sqr()).sum::<f64>() * du };
    let x_time = to_time(&warped);
    let x_inf = x_time.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (x_l2, x_hw) = (l2(&warped), hw(&warped));
    if x_inf == 0.0 || x_l2 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut sorted: Vec<usize> = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut resid = warped.clone();
    let mut used = 0;
    let mut report = ErrorReport::new(name, Method::Warp);
    for n in sorted {
        while used < n.min(keys.len()) {
            let k = keys[used];
            let (nn, a) = (exp.n_of(k), exp.coeffs[&k]);
            for (r, &u) in resid.iter_mut().zip(&us) {
                *r -= Complex64::from_polar(a * crate::basis::INV_SQRT_PI, -2.0 * nn * u);
            }
            used += 1;
        }
        let rt = to_time(&resid);
        let e_inf = rt.iter().zip(&x_time).fold(0.0f64, |m, (r, _)| m.max(r.abs())) / x_inf;
        report.rows.push(ErrorRow { n, terms: used, e_inf, e_l2: (l2(&resid) / x_l2).sqrt(), e_h1: (hw(&resid) / x_hw).sqrt() });
    }
    Ok(report)
}

/// Log-log line plot of one metric against N.
pub fn svg_loglog(reports: &[&ErrorReport], metric: Metric, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 50.0;
    let pts: Vec<Vec<(f64, f64)>> = reports
        .iter()
        .map(|r| r.rows.iter().map(|row| (row.n as f64, row.get(metric))).filter(|&(n, e)| n > 0.0 && e > 0.0 && e.is_finite()).map(|(n, e)| (n.log10(), e.log10())).collect())
        .collect();
    let all: Vec<&(f64, f64)> = pts.iter().flatten().collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, -1.0, 0.0);
    if !all.is_empty() {
        x0 = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, W / 2.0, escape(title)).unwrap();
    writeln!(s, r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - 2.0 * M, H - 2.0 * M).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">log10 N</text>"#, W / 2.0, H - 12.0).unwrap();
    writeln!(s, r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})">log10 {metric}</text>"#, H / 2.0, H / 2.0).unwrap();
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{v:.2}</text>"#, sx(v), H - M + 14.0).unwrap();
    }
    for v in [y0, y1] {
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.2}</text>"#, M - 4.0, sy(v) + 4.0).unwrap();
    }
    for (i, (r, p)) in reports.iter().zip(&pts).enumerate() {
        let c = colors[i % colors.len()];
        let line: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, line.join(" ")).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{c}">{} {}</text>"#, W - M - 110.0, M + 16.0 + 14.0 * i as f64, escape(&r.signal), r.method).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
