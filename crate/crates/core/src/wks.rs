//! Classical sampling baseline: ideal low-pass, uniform sampling and the
//! truncated cardinal series.

use crate::error::{Error, Result};
use crate::signals::{sinc, Signal, DENSE_POINTS, DENSE_STEP, T_END};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// How N maps to the low-pass cutoff (rad/s) and the sampling pace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutoffConvention {
    /// cutoff N, pace 1/N (the lacunary truncation `k^s <= N`).
    N,
    /// cutoff pi N, pace 1/N: Nyquist sampling with 10N + 1 samples on [0, 10].
    #[default]
    PiN,
    /// cutoff 2 pi N, pace 1/(2N).
    TwoPiN,
}

impl CutoffConvention {
    /// `(cutoff, pace)` for a given N.
    pub fn cutoff_and_pace(self, n: usize) -> (f64, f64) {
        let n = n as f64;
        match self {
            CutoffConvention::N => (n, 1.0 / n),
            CutoffConvention::PiN => (PI * n, 1.0 / n),
            CutoffConvention::TwoPiN => (2.0 * PI * n, 0.5 / n),
        }
    }
}

impl FromStr for CutoffConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(CutoffConvention::N),
            "pi-n" => Ok(CutoffConvention::PiN),
            "2pi-n" => Ok(CutoffConvention::TwoPiN),
            other => Err(Error::Param(format!("unknown cutoff convention {other:?}; expected n, pi-n or 2pi-n"))),
        }
    }
}

impl fmt::Display for CutoffConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutoffConvention::N => "n",
            CutoffConvention::PiN => "pi-n",
            CutoffConvention::TwoPiN => "2pi-n",
        })
    }
}

/// Whether a low-passed signal was obtained in closed form.
pub fn has_analytic_lowpass(x: &Signal) -> bool {
    x.sine_terms().is_some()
}

/// Ideal low-pass at `cutoff` rad/s.
///
/// A sine series without envelope keeps its terms with frequency `<= cutoff`.
/// Anything else goes through the DFT of its dense samples on `[0, 10]` with a
/// hard mask; the result is the masked trigonometric polynomial.
pub fn lowpass(x: &Signal, cutoff: f64) -> Signal {
    if let Some(terms) = x.sine_terms() {
        let kept = terms.iter().copied().filter(|&(f, _)| f <= cutoff).collect();
        return Signal::sine_series(&format!("{}_lp", x.name()), kept, x.support());
    }
    Lowpasser::new(x).apply(cutoff)
}

/// Cached DFT of a signal's dense samples, for repeated numeric low-passing.
pub struct Lowpasser {
    name: String,
    spectrum: Vec<Complex64>,
    analytic: Option<Signal>,
}

impl Lowpasser {
    pub fn new(x: &Signal) -> Self {
        if has_analytic_lowpass(x) {
            return Lowpasser { name: x.name().to_string(), spectrum: Vec::new(), analytic: Some(x.clone()) };
        }
        let mut buf: Vec<Complex64> = x.dense_samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        Lowpasser { name: x.name().to_string(), spectrum: buf, analytic: None }
    }

    pub fn apply(&self, cutoff: f64) -> Signal {
        if let Some(x) = &self.analytic {
            return lowpass(x, cutoff);
        }
        let l = self.spectrum.len();
        let period = l as f64 * DENSE_STEP;
        let kmax = ((cutoff * period / (2.0 * PI)).floor() as usize).min((l - 1) / 2);
        let scale = 1.0 / l as f64;
        let mut coeffs = vec![(0i64, self.spectrum[0] * scale)];
        for k in 1..=kmax {
            coeffs.push((k as i64, self.spectrum[k] * (2.0 * scale)));
        }
        Signal::trig(&format!("{}_lp", self.name), period, coeffs).with_support((0.0, T_END))
    }
}

/// Uniform samples of a low-passed signal on `[0, 10]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTrain {
    pub cutoff: f64,
    pub pace: f64,
    pub values: Vec<f64>,
}

impl SampleTrain {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.pace
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.time(k)).collect()
    }
}

/// Samples at `t_k = k pace`, `k = 0..=floor(10/pace)`.
pub fn sample(xl: &Signal, pace: f64, cutoff: f64) -> Result<SampleTrain> {
    if !(pace > 0.0) {
        return Err(Error::Param(format!("pace must be positive, got {pace}")));
    }
    let count = (T_END / pace + 1e-9).floor() as usize + 1;
    let values = (0..count).map(|k| xl.value(k as f64 * pace)).collect();
    Ok(SampleTrain { cutoff, pace, values })
}

/// `sum_k X_l(t_k) sinc((t - t_k)/T)`.
pub fn cardinal_series(train: &SampleTrain, t: f64) -> f64 {
    let x = t / train.pace;
    let r = x.round();
    if (x - r).abs() < 1e-12 * r.abs().max(1.0) && r >= 0.0 && (r as usize) < train.len() {
        return train.values[r as usize];
    }
    train.values.iter().enumerate().map(|(k, v)| v * sinc((t - train.time(k)) / train.pace)).sum()
}

/// The cardinal series at many points, using `sin(pi (x - k)) = (-1)^k sin(pi x)`.
pub fn cardinal_series_many(train: &SampleTrain, times: &[f64]) -> Vec<f64> {
    let alt: Vec<f64> = train.values.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).collect();
    times
        .par_iter()
        .map(|&t| {
            let x = t / train.pace;
            let r = x.round();
            if (x - r).abs() < 1e-12 * r.abs().max(1.0) && r >= 0.0 && (r as usize) < alt.len() {
                return train.values[r as usize];
            }
            let s: f64 = alt.iter().enumerate().map(|(k, a)| a / (x - k as f64)).sum();
            (PI * x).sin() / PI * s
        })
        .collect()
}

/// Reconstruction mode for the baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WksMode {
    /// Cardinal series over the samples in `[0, 10]`.
    Truncated,
    /// The low-passed signal itself, i.e. the cardinal series over all of Z.
    Ideal,
    /// Ideal when the low-pass is analytic, truncated otherwise.
    #[default]
    Auto,
}

/// Baseline reconstruction for one N on the dense grid; returns the values and
/// the number of samples used.
pub fn reconstruct_dense(lp: &Lowpasser, n: usize, conv: CutoffConvention, mode: WksMode) -> Result<(Vec<f64>, usize)> {
    if n == 0 {
        return Err(Error::Param("N must be >= 1".into()));
    }
    let (cutoff, pace) = conv.cutoff_and_pace(n);
    let xl = lp.apply(cutoff);
    let train = sample(&xl, pace, cutoff)?;
    let ideal = match mode {
        WksMode::Ideal => true,
        WksMode::Truncated => false,
        WksMode::Auto => lp.analytic.is_some(),
    };
    let times: Vec<f64> = (0..DENSE_POINTS).map(|i| i as f64 * DENSE_STEP).collect();
    let vals = if ideal { xl.dense_samples().to_vec() } else { cardinal_series_many(&train, &times) };
    Ok((vals, train.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{make, SignalName, SignalParams};

    #[test]
    fn conventions() {
        assert_eq!(CutoffConvention::PiN.cutoff_and_pace(4), (4.0 * PI, 0.25));
        assert_eq!("2pi-n".parse::<CutoffConvention>().unwrap(), CutoffConvention::TwoPiN);
        assert!("pi".parse::<CutoffConvention>().is_err());
        for c in [CutoffConvention::N, CutoffConvention::PiN, CutoffConvention::TwoPiN] {
            let (w, t) = c.cutoff_and_pace(7);
            assert!(t <= PI / w + 1e-15, "Nyquist");
            assert_eq!(c.to_string().parse::<CutoffConvention>().unwrap(), c);
        }
    }

    #[test]
    fn analytic_lowpass_examples() {
        let s = Signal::sine_series("sin", vec![(1.0, 1.0)], (0.0, 10.0));
        let l = lowpass(&s, 2.0);
        assert_eq!(l.value(1.3), (1.3f64).sin());
        let s10 = Signal::sine_series("sin10", vec![(10.0, 1.0)], (0.0, 10.0));
        assert_eq!(lowpass(&s10, 5.0).value(2.0), 0.0);
        let r = make(SignalName::Riemann, &SignalParams::default()).unwrap();
        let terms = lowpass(&r, 100.0).sine_terms().unwrap().len();
        // n^1.8 <= 100 for n <= 12
        assert_eq!(terms, 12);
    }

    #[test]
    fn numeric_lowpass_keeps_in_band_and_removes_out_of_band() {
        let w0 = 2.0 * PI * 3.0 / T_END;
        let inb = Signal::from_fn("in", move |t| (w0 * t).sin(), (0.0, 10.0), None);
        let l = lowpass(&inb, 2.0);
        for i in 0..=100 {
            let t = i as f64 * 0.1;
            assert!((l.value(t) - (w0 * t).sin()).abs() < 1e-3, "{t}");
        }
        let out = Signal::from_fn("out", |t| (10.0 * t).sin(), (0.0, 10.0), None);
        let l = lowpass(&out, 5.0);
        let worst = |a: usize, b: usize| (a..=b).map(|i| l.value(i as f64 * 0.01).abs()).fold(0.0, f64::max);
        // the jumps of sin(10t) at 0 and 10 ring like 0.5 / (pi * 5 * d)
        assert!(worst(200, 800) < 1e-2);
    }

    #[test]
    fn sample_counts() {
        let c = Signal::from_fn("c", |_| 2.5, (0.0, 10.0), None);
        let tr = sample(&c, 1.0 / 7.0, 7.0 * PI).unwrap();
        assert_eq!(tr.len(), 71);
        assert!(tr.values.iter().all(|&v| v == 2.5));
        assert_eq!(sample(&c, 10.0, 0.1).unwrap().len(), 2);
        assert!(sample(&c, 0.0, 1.0).is_err());
    }

    #[test]
    fn cardinal_series_interpolates() {
        let tr = SampleTrain { cutoff: PI, pace: 1.0, values: (0..11).map(|k| (k as f64).cos()).collect() };
        for k in 0..11 {
            assert_eq!(cardinal_series(&tr, k as f64), tr.values[k]);
        }
        let ts: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let fast = cardinal_series_many(&tr, &ts);
        for (t, f) in ts.iter().zip(&fast) {
            assert!((cardinal_series(&tr, *t) - f).abs() < 1e-12);
        }
        let zero = SampleTrain { cutoff: PI, pace: 0.5, values: vec![0.0; 21] };
        assert!(cardinal_series_many(&zero, &ts).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn in_band_probe_reconstructs() {
        let p = make(SignalName::BandlimitedProbe, &SignalParams::default()).unwrap();
        let tr = sample(&p, 1.0, PI).unwrap();
        let ts: Vec<f64> = (0..=800).map(|i| 1.0 + i as f64 * 0.01).collect();
        let r = cardinal_series_many(&tr, &ts);
        let mut num = 0.0;
        let mut den = 0.0;
        for (t, v) in ts.iter().zip(&r) {
            assert!((v - p.value(*t)).abs() <= 1e-2, "{t}");
            num += (v - p.value(*t)).powi(2);
            den += p.value(*t).powi(2);
        }
        assert!((num / den).sqrt() <= 1e-2);
    }

    #[test]
    fn riemann_plateaus_are_exact() {
        let r = make(SignalName::Riemann, &SignalParams::default()).unwrap();
        let lp = Lowpasser::new(&r);
        // between 2^1.8 = 3.48 and 3^1.8 = 7.22 the kept set is {1, 2}
        let (a, _) = reconstruct_dense(&lp, 4, CutoffConvention::N, WksMode::Auto).unwrap();
        let (b, nb) = reconstruct_dense(&lp, 7, CutoffConvention::N, WksMode::Auto).unwrap();
        assert_eq!(a, b);
        assert_eq!(nb, 71);
        let (c, _) = reconstruct_dense(&lp, 8, CutoffConvention::N, WksMode::Auto).unwrap();
        assert_ne!(a, c);
    }
}
