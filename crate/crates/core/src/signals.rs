//! Test-signal corpus: Cauchy, chirp, Riemann, Weierstrass and a bandlimited probe.

use crate::basis::PiecewiseExpPoly;
use crate::error::{Error, Result};
use crate::quad::simpson_weights;
use crate::warpcore::SpectrumGrid;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Points of the dense "continuous" grid on `[0, 10]` (step `1e-4`).
pub const DENSE_POINTS: usize = 100_001;
pub const T_END: f64 = 10.0;
pub const DENSE_STEP: f64 = T_END / (DENSE_POINTS - 1) as f64;

pub fn dense_times() -> Vec<f64> {
    (0..DENSE_POINTS).map(|i| i as f64 * DENSE_STEP).collect()
}

/// Corpus names accepted by [`make`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalName {
    Cauchy,
    Chirp,
    Riemann,
    Weierstrass,
    BandlimitedProbe,
}

impl SignalName {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "cauchy" => Ok(Self::Cauchy),
            "chirp" => Ok(Self::Chirp),
            "riemann" => Ok(Self::Riemann),
            "weierstrass" => Ok(Self::Weierstrass),
            "bandlimited_probe" | "probe" => Ok(Self::BandlimitedProbe),
            other => Err(Error::Param(format!(
                "unknown signal {other:?}; expected cauchy, chirp, riemann, weierstrass or bandlimited_probe"
            ))),
        }
    }
}

/// Parameters for [`make`]; unset fields take the corpus defaults.
#[derive(Clone, Debug, Default)]
pub struct SignalParams {
    /// Riemann exponent (default 1.8).
    pub s: Option<f64>,
    /// Riemann frequency bound `n^s <= k_max` (default 1e4).
    pub k_max: Option<f64>,
    /// Weierstrass Hoelder exponent (default 0.8).
    pub h: Option<f64>,
    /// Weierstrass ratio (default 2).
    pub lambda: Option<f64>,
    /// Weierstrass Gaussian width (default 1).
    pub sigma: Option<f64>,
    /// Probe center (default 5).
    pub center: Option<f64>,
    /// Probe rate b in `sinc(b (t - center))` (default 1).
    pub rate: Option<f64>,
}

type RawFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Cauchy,
    Chirp,
    /// `env(t) * sum amp sin(freq t)` with optional envelope `exp(-t^2/sigma^2)`.
    SineSeries { terms: Vec<(f64, f64)>, sigma: Option<f64>, lacunary: bool },
    Probe { center: f64, rate: f64 },
    ExpPoly(PiecewiseExpPoly),
    /// `Re sum c_k e^{2 pi i k t / period}`.
    Trig { period: f64, coeffs: Vec<(i64, Complex64)> },
    Custom { f: RawFn, jet: Option<Vec<f64>> },
}

/// A test signal: evaluator, support, jet at 0 and cached dense samples.
#[derive(Clone)]
pub struct Signal {
    name: String,
    kind: Kind,
    support: (f64, f64),
    params: BTreeMap<String, f64>,
    spectrum: Option<Arc<dyn Fn(f64) -> Complex64 + Send + Sync>>,
    dense: Arc<OnceLock<Vec<f64>>>,
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signal").field("name", &self.name).field("support", &self.support).field("params", &self.params).finish()
    }
}

/// Build a corpus signal restricted to `[0, 10]`.
pub fn make(name: SignalName, params: &SignalParams) -> Result<Signal> {
    let mut meta = BTreeMap::new();
    let (label, kind) = match name {
        SignalName::Cauchy => ("cauchy", Kind::Cauchy),
        SignalName::Chirp => ("chirp", Kind::Chirp),
        SignalName::Riemann => {
            let s = params.s.unwrap_or(1.8);
            let k_max = params.k_max.unwrap_or(1e4);
            if !(s > 1.0) {
                return Err(Error::Param(format!("riemann needs s > 1, got {s}")));
            }
            if !(k_max >= 1.0) {
                return Err(Error::Param(format!("riemann needs k_max >= 1, got {k_max}")));
            }
            meta.insert("s".into(), s);
            meta.insert("k_max".into(), k_max);
            let mut terms = Vec::new();
            let mut n = 1u64;
            loop {
                let f = (n as f64).powf(s);
                if f > k_max {
                    break;
                }
                terms.push((f, 1.0 / f));
                n += 1;
            }
            ("riemann", Kind::SineSeries { terms, sigma: None, lacunary: true })
        }
        SignalName::Weierstrass => {
            let h = params.h.unwrap_or(0.8);
            let lambda = params.lambda.unwrap_or(2.0);
            let sigma = params.sigma.unwrap_or(1.0);
            if !(h > 0.0) || !(lambda >= 2.0) || !(sigma > 0.0) {
                return Err(Error::Param(format!(
                    "weierstrass needs h > 0, lambda >= 2, sigma > 0; got h={h}, lambda={lambda}, sigma={sigma}"
                )));
            }
            meta.insert("h".into(), h);
            meta.insert("lambda".into(), lambda);
            meta.insert("sigma".into(), sigma);
            let mut terms = Vec::new();
            let mut k = 0i32;
            loop {
                let amp = lambda.powf(-(k as f64) * h);
                if amp < 1e-16 {
                    break;
                }
                terms.push((lambda.powi(k), amp));
                k += 1;
            }
            ("weierstrass", Kind::SineSeries { terms, sigma: Some(sigma), lacunary: true })
        }
        SignalName::BandlimitedProbe => {
            let center = params.center.unwrap_or(5.0);
            let rate = params.rate.unwrap_or(1.0);
            if !(rate > 0.0) || !center.is_finite() {
                return Err(Error::Param(format!("probe needs rate > 0 and finite center, got {rate}, {center}")));
            }
            meta.insert("center".into(), center);
            meta.insert("rate".into(), rate);
            ("bandlimited_probe", Kind::Probe { center, rate })
        }
    };
    Ok(Signal::build(label, kind, (0.0, T_END), meta, None))
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

impl Signal {
    fn build(
        name: &str,
        kind: Kind,
        support: (f64, f64),
        params: BTreeMap<String, f64>,
        spectrum: Option<Arc<dyn Fn(f64) -> Complex64 + Send + Sync>>,
    ) -> Signal {
        Signal { name: name.to_string(), kind, support, params, spectrum, dense: Arc::new(OnceLock::new()) }
    }

    /// Signal from an arbitrary function, zero outside `support`.
    pub fn from_fn(
        name: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
        jet: Option<Vec<f64>>,
    ) -> Signal {
        Self::build(name, Kind::Custom { f: Arc::new(f), jet }, support, BTreeMap::new(), None)
    }

    /// Whole-line exponential-polynomial signal (exact jet, exact pairings).
    pub fn from_exp_poly(name: &str, f: PiecewiseExpPoly) -> Signal {
        Self::build(name, Kind::ExpPoly(f), (f64::NEG_INFINITY, f64::INFINITY), BTreeMap::new(), None)
    }

    /// Sine series `sum amp sin(freq t)` on the given support.
    pub fn sine_series(name: &str, terms: Vec<(f64, f64)>, support: (f64, f64)) -> Signal {
        Self::build(name, Kind::SineSeries { terms, sigma: None, lacunary: false }, support, BTreeMap::new(), None)
    }

    /// Attach a closed-form Fourier transform.
    pub fn with_spectrum(mut self, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Signal {
        self.spectrum = Some(Arc::new(f));
        self
    }

    /// Same closed form on a different support (e.g. the whole line).
    pub fn with_support(&self, support: (f64, f64)) -> Signal {
        let mut s = self.clone();
        s.support = support;
        s.dense = Arc::new(OnceLock::new());
        s
    }

    pub(crate) fn trig(name: &str, period: f64, coeffs: Vec<(i64, Complex64)>) -> Signal {
        Self::build(name, Kind::Trig { period, coeffs }, (f64::NEG_INFINITY, f64::INFINITY), BTreeMap::new(), None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Frequencies and amplitudes of a pure sine series without envelope.
    pub fn sine_terms(&self) -> Option<&[(f64, f64)]> {
        match &self.kind {
            Kind::SineSeries { terms, sigma: None, .. } => Some(terms),
            _ => None,
        }
    }

    pub fn is_lacunary(&self) -> bool {
        matches!(self.kind, Kind::SineSeries { lacunary: true, .. })
    }

    /// The closed form, ignoring the support restriction.
    pub fn raw(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Cauchy => 1.0 / (1.0 + t * t),
            Kind::Chirp => {
                if t == 0.0 {
                    0.0
                } else {
                    t * (1.0 / t).sin() * (-t).exp()
                }
            }
            Kind::SineSeries { terms, sigma, .. } => {
                let env = sigma.map_or(1.0, |s| (-(t * t) / (s * s)).exp());
                if env == 0.0 {
                    return 0.0;
                }
                env * terms.iter().map(|(f, a)| a * (f * t).sin()).sum::<f64>()
            }
            Kind::Probe { center, rate } => sinc(rate * (t - center)),
            Kind::ExpPoly(p) => p.value(t),
            Kind::Trig { period, coeffs } => {
                let w = 2.0 * PI * t / period;
                coeffs.iter().map(|(k, c)| (c * Complex64::from_polar(1.0, *k as f64 * w)).re).sum()
            }
            Kind::Custom { f, .. } => f(t),
        }
    }

    /// Value, zero outside the support.
    pub fn value(&self, t: f64) -> f64 {
        if t < self.support.0 || t > self.support.1 {
            0.0
        } else {
            self.raw(t)
        }
    }

    /// Points where the signal or its derivatives jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = vec![0.0];
        for b in [self.support.0, self.support.1] {
            if b.is_finite() && b != 0.0 {
                v.push(b);
            }
        }
        v
    }

    /// Crude bound on `sup |X|` (for quadrature tail cutoffs).
    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            Kind::Cauchy | Kind::Chirp | Kind::Probe { .. } => 1.0,
            Kind::SineSeries { terms, .. } => terms.iter().map(|(_, a)| a.abs()).sum(),
            _ => {
                let (lo, hi) = (self.support.0.max(-60.0), self.support.1.min(60.0));
                let n = 20_000;
                (0..=n).map(|i| self.value(lo + (hi - lo) * i as f64 / n as f64).abs()).fold(0.0, f64::max) * 2.0 + 1e-300
            }
        }
    }

    /// Derivatives `X^(j)(0)`, `j = 0..=order` (one-sided from the right on `[0, 10]`).
    pub fn jet_at_zero(&self, order: usize) -> Result<Vec<f64>> {
        if order > 6 {
            return Err(Error::Param(format!("jet order {order} exceeds 6")));
        }
        match &self.kind {
            Kind::Cauchy => Ok((0..=order)
                .map(|j| if j % 2 == 1 { 0.0 } else { sign((j / 2) as u32) * fact(j as u32) })
                .collect()),
            Kind::Chirp => {
                if order == 0 {
                    Ok(vec![0.0])
                } else {
                    Err(Error::NonDifferentiable { signal: self.name.clone(), order })
                }
            }
            Kind::SineSeries { terms, sigma, lacunary } => {
                if *lacunary && order > 0 {
                    return Err(Error::NonDifferentiable { signal: self.name.clone(), order });
                }
                // Product rule with the Gaussian envelope.
                let series: Vec<f64> = (0..=order)
                    .map(|j| {
                        let s = [0.0, 1.0, 0.0, -1.0][j % 4];
                        terms.iter().map(|(f, a)| a * f.powi(j as i32) * s).sum()
                    })
                    .collect();
                let env: Vec<f64> = (0..=order)
                    .map(|j| match sigma {
                        None => {
                            if j == 0 {
                                1.0
                            } else {
                                0.0
                            }
                        }
                        Some(s) if j % 2 == 0 => {
                            let m = (j / 2) as u32;
                            sign(m) * fact(j as u32) / (fact(m) * s.powi(j as i32))
                        }
                        Some(_) => 0.0,
                    })
                    .collect();
                Ok((0..=order)
                    .map(|j| (0..=j).map(|i| binom(j, i) * env[i] * series[j - i]).sum())
                    .collect())
            }
            Kind::ExpPoly(p) => {
                Ok((0..=order).map(|j| 0.5 * (p.derivative_at_zero(j, 1) + p.derivative_at_zero(j, -1))).collect())
            }
            Kind::Custom { jet: Some(j), .. } if j.len() > order => Ok(j[..=order].to_vec()),
            _ => Ok((0..=order).map(|j| self.fd_derivative(j)).collect()),
        }
    }

    /// Central differences on the closed form with two-level Richardson extrapolation.
    fn fd_derivative(&self, j: usize) -> f64 {
        if j == 0 {
            return self.raw(0.0);
        }
        let d = |h: f64| -> f64 {
            // j-th central difference of step h.
            let mut acc = 0.0;
            for i in 0..=j {
                let c = binom(j, i) * if i % 2 == 1 { -1.0 } else { 1.0 };
                acc += c * self.raw((j as f64 / 2.0 - i as f64) * h);
            }
            acc / h.powi(j as i32)
        };
        let h = 1e-3f64.max(0.02 * j as f64);
        let (d1, d2, d3) = (d(h), d(h / 2.0), d(h / 4.0));
        let r1 = (4.0 * d2 - d1) / 3.0;
        let r2 = (4.0 * d3 - d2) / 3.0;
        (16.0 * r2 - r1) / 15.0
    }

    /// Samples on the dense grid of `[0, 10]` (cached).
    pub fn dense_samples(&self) -> &[f64] {
        self.dense.get_or_init(|| self.sample_dense())
    }

    fn sample_dense(&self) -> Vec<f64> {
        match &self.kind {
            // Rotate phasors along the grid instead of calling sin per point.
            Kind::SineSeries { terms, sigma, .. } if self.support.0 <= 0.0 && self.support.1 >= T_END => {
                let mut acc = vec![0.0; DENSE_POINTS];
                const BLOCK: usize = 1000;
                for &(f, a) in terms {
                    let step = Complex64::from_polar(1.0, f * DENSE_STEP);
                    for start in (0..DENSE_POINTS).step_by(BLOCK) {
                        // Re-anchor each block to keep rounding drift negligible.
                        let mut z = Complex64::from_polar(a, f * start as f64 * DENSE_STEP);
                        for v in acc.iter_mut().skip(start).take(BLOCK) {
                            *v += z.im;
                            z *= step;
                        }
                    }
                }
                if let Some(s) = sigma {
                    for (i, v) in acc.iter_mut().enumerate() {
                        let t = i as f64 * DENSE_STEP;
                        *v *= (-(t * t) / (s * s)).exp();
                    }
                }
                acc
            }
            _ => dense_times().into_iter().map(|t| self.value(t)).collect(),
        }
    }

    pub fn has_spectrum(&self) -> bool {
        self.spectrum.is_some()
    }

    /// Closed-form Fourier transform, if attached.
    pub fn spectrum_at(&self, w: f64) -> Option<Complex64> {
        self.spectrum.as_ref().map(|f| f(w))
    }

    /// Spectrum on a uniform symmetric grid: the closed form when attached,
    /// otherwise an FFT of the dense samples on `[0, 10]`. The FFT path fixes
    /// the grid step at `2 pi / (L h)`, so the returned grid has `points`
    /// approximately spanning `omega_max`.
    pub fn spectrum_grid(&self, omega_max: f64, points: usize) -> Result<SpectrumGrid> {
        if let Some(f) = &self.spectrum {
            return SpectrumGrid::from_fn(omega_max, points, |w| f(w));
        }
        if self.support.0 < 0.0 || self.support.1 > T_END {
            return Err(Error::Param(format!("{} has no closed-form spectrum and is not supported on [0, 10]", self.name)));
        }
        let half = (points - 1) / 2;
        let target_step = omega_max / half as f64;
        let len = (2.0 * PI / (target_step * DENSE_STEP)).round().max(DENSE_POINTS as f64) as usize;
        let step = 2.0 * PI / (len as f64 * DENSE_STEP);
        let w = simpson_weights(DENSE_POINTS, DENSE_STEP);
        let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); len];
        for (i, (x, wi)) in self.dense_samples().iter().zip(&w).enumerate() {
            buf[i] = Complex64::new(x * wi, 0.0);
        }
        FftPlanner::new().plan_fft_forward(len).process(&mut buf);
        let grid = SpectrumGrid::zeros(step * half as f64, 2 * half + 1)?;
        let vals = (0..2 * half + 1)
            .map(|k| {
                let m = k as i64 - half as i64;
                buf[m.rem_euclid(len as i64) as usize]
            })
            .collect();
        grid.with_values(vals)
    }
}

fn sign(k: u32) -> f64 {
    if k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn fact(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(name: SignalName) -> Signal {
        make(name, &SignalParams::default()).unwrap()
    }

    #[test]
    fn make_examples() {
        let c = corpus(SignalName::Cauchy);
        assert_eq!(c.value(0.0), 1.0);
        assert_eq!(c.value(10.0), 1.0 / 101.0);
        assert_eq!(c.value(-0.5), 0.0);
        assert_eq!(c.value(10.5), 0.0);
        assert_eq!(corpus(SignalName::Riemann).value(0.0), 0.0);
        assert!(corpus(SignalName::Weierstrass).value(10.0).abs() < 1e-20);
        assert_eq!(corpus(SignalName::Chirp).value(0.0), 0.0);
        assert!(make(SignalName::Riemann, &SignalParams { s: Some(1.0), ..Default::default() }).is_err());
        assert!(make(SignalName::Weierstrass, &SignalParams { lambda: Some(1.5), ..Default::default() }).is_err());
        assert!(make(SignalName::Weierstrass, &SignalParams { h: Some(0.0), ..Default::default() }).is_err());
        assert!(SignalName::parse("nope").is_err());
        assert_eq!(SignalName::parse("Cauchy").unwrap(), SignalName::Cauchy);
    }

    #[test]
    fn riemann_truncation_is_by_frequency() {
        let r = corpus(SignalName::Riemann);
        let terms = r.sine_terms().unwrap();
        assert_eq!(terms[0].0, 1.0);
        assert!(terms.iter().all(|(f, _)| *f <= 1e4));
        assert_eq!(terms.len(), (1e4f64).powf(1.0 / 1.8).floor() as usize);
    }

    #[test]
    fn weierstrass_term_count() {
        let w = corpus(SignalName::Weierstrass);
        match &w.kind {
            Kind::SineSeries { terms, .. } => {
                assert!(terms.last().unwrap().1 >= 1e-16);
                assert!(terms.last().unwrap().1 * 2f64.powf(-0.8) < 1e-16);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn jet_examples() {
        assert_eq!(corpus(SignalName::Cauchy).jet_at_zero(2).unwrap(), vec![1.0, 0.0, -2.0]);
        assert_eq!(corpus(SignalName::Cauchy).jet_at_zero(4).unwrap()[4], 24.0);
        assert_eq!(corpus(SignalName::Riemann).jet_at_zero(0).unwrap(), vec![0.0]);
        assert!(matches!(corpus(SignalName::Chirp).jet_at_zero(1), Err(Error::NonDifferentiable { .. })));
        assert_eq!(corpus(SignalName::Chirp).jet_at_zero(0).unwrap(), vec![0.0]);
        assert!(corpus(SignalName::Cauchy).jet_at_zero(7).is_err());
    }

    #[test]
    fn jet_matches_finite_differences() {
        let p = corpus(SignalName::BandlimitedProbe);
        let jet = p.jet_at_zero(3).unwrap();
        // sinc(t - 5): derivatives by hand at t = 0, x = -5: sin(pi x) = 0 so
        // f = 0, f' = cos(pi x)/x = -1/(-5) ... evaluate the closed form.
        let f1 = |t: f64| {
            let x = t - 5.0;
            ((PI * x).cos() * PI * x - (PI * x).sin()) / (PI * x * x)
        };
        assert!(jet[0].abs() < 1e-15);
        assert!((jet[1] - f1(0.0)).abs() < 1e-8, "{} vs {}", jet[1], f1(0.0));
        let s = Signal::sine_series("s", vec![(2.0, 1.5), (3.0, 0.5)], (0.0, 10.0));
        let j = s.jet_at_zero(3).unwrap();
        assert!((j[1] - (3.0 + 1.5)).abs() < 1e-14);
        assert!((j[3] + (1.5 * 8.0 + 0.5 * 27.0)).abs() < 1e-12);
        let g = Signal::from_fn("g", |t| (-(t * t)).exp() * (2.0 * t).sin(), (0.0, 10.0), None);
        let fd = g.jet_at_zero(3).unwrap();
        let ser = Signal::build("w", Kind::SineSeries { terms: vec![(2.0, 1.0)], sigma: Some(1.0), lacunary: false }, (0.0, 10.0), BTreeMap::new(), None);
        let ex = ser.jet_at_zero(3).unwrap();
        for k in 0..=3 {
            assert!((fd[k] - ex[k]).abs() < 1e-6, "k={k} {} {}", fd[k], ex[k]);
        }
    }

    #[test]
    fn dense_matches_evaluator() {
        for name in [SignalName::Cauchy, SignalName::Chirp, SignalName::Riemann, SignalName::Weierstrass] {
            let s = corpus(name);
            let d = s.dense_samples();
            assert_eq!(d.len(), DENSE_POINTS);
            for i in (0..DENSE_POINTS).step_by(997) {
                let t = i as f64 * DENSE_STEP;
                assert!((d[i] - s.value(t)).abs() < 1e-11, "{name:?} t={t}");
            }
        }
    }

    #[test]
    fn riemann_doubling_bounded_by_tail() {
        let a = corpus(SignalName::Riemann);
        let b = make(SignalName::Riemann, &SignalParams { k_max: Some(2e4), ..Default::default() }).unwrap();
        let extra: f64 = b.sine_terms().unwrap().iter().skip(a.sine_terms().unwrap().len()).map(|(_, a)| a).sum();
        let diff = a.dense_samples().iter().zip(b.dense_samples()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff <= extra + 1e-12);
        assert!(diff > 0.0);
    }

    #[test]
    fn weierstrass_hoelder_diagnostic() {
        // Slope of the t-averaged increment size against the step, in log2.
        let w = corpus(SignalName::Weierstrass);
        let ts: Vec<f64> = (0..64).map(|i| 0.05 + i as f64 * 0.025).collect();
        let pts: Vec<(f64, f64)> = (4..=12)
            .map(|k| {
                let d = 2f64.powi(-k);
                let m = ts.iter().map(|&t| (w.value(t + d) - w.value(t)).abs()).sum::<f64>() / ts.len() as f64;
                (d.log2(), m.log2())
            })
            .collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((0.6..=1.0).contains(&slope), "{slope}");
    }

    #[test]
    fn finite_h1_on_grid() {
        for name in [SignalName::Cauchy, SignalName::Chirp, SignalName::Riemann, SignalName::Weierstrass, SignalName::BandlimitedProbe] {
            let d = corpus(name).dense_samples().to_vec();
            let grad: f64 = d.windows(2).map(|w| ((w[1] - w[0]) / DENSE_STEP).powi(2)).sum::<f64>() * DENSE_STEP;
            assert!(grad.is_finite());
        }
    }

    #[test]
    fn numeric_spectrum_of_exponential() {
        let s = Signal::from_fn("e", |t| (-t).exp(), (0.0, 10.0), None);
        let g = s.spectrum_grid(50.0, 801).unwrap();
        for k in [0usize, 100, 400, 700] {
            let w = g.omega(k);
            let exact = (Complex64::new(1.0, 0.0) - Complex64::from_polar((-10f64).exp(), -10.0 * w)) / Complex64::new(1.0, w);
            assert!((g.values()[k] - exact).norm() < 1e-8, "w={w}");
        }
    }
}
