//! Numerical synthesis of gamma_n for real alpha and beta > 1/2: tabulate the
//! spectrum, then one inverse DFT.
//!
//! The band-limited tabulation alone rings at the kinks of gamma_n (a jump for
//! alpha = 0). Instead of tapering, the spectrum is periodized before the DFT,
//! `P(w) = sum_m gamma^(w + 2 m W)`, which makes the DFT output exact samples of
//! gamma_n up to time aliasing (negligible: gamma_n decays like e^{-|t|}). The
//! alias sum converges like 1/M for slowly decaying spectra, so two partial sums
//! are combined by Richardson extrapolation.

use crate::error::{Error, Result};
use crate::warpcore::{SpectrumGrid, WarpProfile};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const INV_SQRT_PI: f64 = crate::basis::INV_SQRT_PI;

/// Default synthesis band and resolution: `2^18 + 1` points on `|w| <= 4096`.
pub const DEFAULT_OMEGA_MAX: f64 = 4096.0;
pub const DEFAULT_POINTS: usize = (1 << 18) + 1;

#[derive(Clone, Copy, Debug)]
pub struct SynthOpts {
    /// Alias images on each side in the coarse partial sum; the fine sum uses twice as many.
    /// Zero disables periodization.
    pub alias_terms: usize,
    /// Raised-cosine taper on this outer fraction of the band (applied by `synthesize_time`).
    pub taper: Option<f64>,
}

impl Default for SynthOpts {
    fn default() -> Self {
        SynthOpts { alias_terms: 16, taper: None }
    }
}

/// `gamma^_n(w) = sqrt(psi'(w)/varpi(w)) e^{-2 i n psi(w)} / sqrt(pi)`.
pub fn gamma_hat(profile: &WarpProfile, n: f64, omega: f64) -> Complex64 {
    amplitude(profile, omega) * Complex64::from_polar(INV_SQRT_PI, -2.0 * n * profile.psi(omega))
}

/// `sqrt(psi'/varpi) = sqrt(c1) (1+w^2)^{-beta (alpha+1)/2}`.
pub(crate) fn amplitude(profile: &WarpProfile, omega: f64) -> f64 {
    let r = 1.0 + omega * omega;
    if profile.beta() == 1.0 {
        if profile.alpha() == 0.0 {
            return 1.0 / r.sqrt();
        }
        if profile.alpha() == 1.0 {
            return 1.0 / r;
        }
    }
    profile.c1().sqrt() * r.powf(-0.5 * profile.beta() * (profile.alpha() + 1.0))
}

/// Tabulate `gamma^_n` on `grid`.
pub fn tabulate_spectrum(profile: &WarpProfile, n: f64, grid: &SpectrumGrid) -> SpectrumGrid {
    grid.map_fn(|w| gamma_hat(profile, n, w))
}

/// Real samples `x(t0 + j dt)`, increasing in time.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSamples {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    /// Largest discarded imaginary part.
    pub imag_max: f64,
}

impl TimeSamples {
    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Four-point Lagrange interpolation; 0 outside the sampled window.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.values.len();
        let x = (t - self.t0) / self.dt;
        if !(x >= 0.0) || x > (n - 1) as f64 {
            return 0.0;
        }
        let i = (x.floor() as usize).clamp(1, n.saturating_sub(3).max(1));
        if n < 4 {
            let i = (x.floor() as usize).min(n - 1);
            return self.values[i];
        }
        let s = x - i as f64;
        let v = &self.values[i - 1..i + 3];
        let (a, b, c) = (s + 1.0, s - 1.0, s - 2.0);
        -v[0] * s * b * c / 6.0 + v[1] * a * b * c / 2.0 - v[2] * a * s * c / 2.0 + v[3] * a * s * b / 6.0
    }
}

fn taper_weight(omega: f64, omega_max: f64, frac: f64) -> f64 {
    let edge = omega_max * (1.0 - frac);
    let w = omega.abs();
    if w <= edge {
        1.0
    } else {
        0.5 * (1.0 + (PI * (w - edge) / (omega_max - edge)).cos())
    }
}

/// Inverse DFT of a tabulated spectrum with the `1/(2 pi)` convention.
///
/// The grid's two end points are the same point of the periodic DFT grid and are
/// averaged. Output covers `t in [-pi L / (2W), pi L / (2W))` with `dt = pi / W`.
pub fn synthesize_time(spec: &SpectrumGrid, taper: Option<f64>) -> TimeSamples {
    let l = spec.len() - 1;
    let wmax = spec.omega_max();
    let dw = spec.step();
    let mut buf: Vec<Complex64> = spec.values()[..l].to_vec();
    buf[0] = 0.5 * (spec.values()[0] + spec.values()[l]);
    if let Some(frac) = taper {
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= taper_weight(spec.omega(k), wmax, frac);
        }
    }
    FftPlanner::new().plan_fft_inverse(l).process(&mut buf);
    let dt = PI / wmax;
    let half = l / 2;
    let mut values = vec![0.0; l];
    let mut imag_max = 0.0f64;
    for (j, z) in buf.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = z * (sign * dw / (2.0 * PI));
        imag_max = imag_max.max(x.im.abs());
        // index j is time j*dt, wrapped to the negative half for j >= L/2
        let pos = if j < half { j + (l - half) } else { j - half };
        values[pos] = x.re;
    }
    TimeSamples { t0: -(half as f64) * dt, dt, values, imag_max }
}

/// A synthesized basis element.
#[derive(Clone, Debug)]
pub struct SynthBasis {
    pub alpha: f64,
    pub beta: f64,
    pub n: f64,
    pub omega_max: f64,
    pub points: usize,
    pub samples: TimeSamples,
    /// Discrete `H_varpi` norm squared of the tabulated spectrum.
    pub norm_sq: f64,
}

impl SynthBasis {
    pub fn new(profile: &WarpProfile, n: f64, omega_max: f64, points: usize, opts: SynthOpts) -> Result<Self> {
        Ok(synthesize_batch(profile, &[n], omega_max, points, opts)?.pop().expect("one element"))
    }

    pub fn default_grid(profile: &WarpProfile, n: f64) -> Result<Self> {
        Self::new(profile, n, DEFAULT_OMEGA_MAX, DEFAULT_POINTS, SynthOpts::default())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.samples.at(t)
    }
}

fn check_grid(omega_max: f64, points: usize) -> Result<()> {
    if points < 3 || points.is_multiple_of(2) || !(omega_max > 0.0) {
        return Err(Error::Param(format!(
            "synthesis grid needs an odd point count >= 3 and omega_max > 0, got {points}, {omega_max}"
        )));
    }
    Ok(())
}

/// Integer offsets of `ns` from their minimum.
fn lattice_offsets(ns: &[f64]) -> Result<(f64, Vec<usize>)> {
    let n0 = ns.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut offs = Vec::with_capacity(ns.len());
    for &n in ns {
        let k = n - n0;
        if (k - k.round()).abs() > 1e-9 {
            return Err(Error::Param(format!("batch indices must differ by integers, got {n0} and {n}")));
        }
        offs.push(k.round() as usize);
    }
    Ok((n0, offs))
}

/// Periodized spectra `P_{n0+j}(w_k)` for `j < width`, one row per grid point
/// (the Nyquist point once, at `-W`). With `weights`, each row collapses to
/// `sum_j weights[j] P_{n0+j}`.
fn periodized_rows(
    profile: &WarpProfile,
    n0: f64,
    width: usize,
    grid: &SpectrumGrid,
    opts: SynthOpts,
    weights: Option<&[f64]>,
) -> Vec<Vec<Complex64>> {
    let l = grid.len() - 1;
    let period = 2.0 * grid.omega_max();
    let m_coarse = opts.alias_terms as i64;
    (0..l)
        .into_par_iter()
        .map(|k| {
            let w = grid.omega(k);
            let zero = Complex64::new(0.0, 0.0);
            let mut center = vec![zero; width];
            let mut coarse = vec![zero; width];
            let mut fine = vec![zero; width];
            let mut term = vec![zero; width];
            let images = |x: f64, out: &mut Vec<Complex64>| {
                let ps = profile.psi(x);
                let step = Complex64::from_polar(1.0, -2.0 * ps);
                let mut z = Complex64::from_polar(amplitude(profile, x) * INV_SQRT_PI, -2.0 * n0 * ps);
                for o in out.iter_mut() {
                    *o = z;
                    z *= step;
                }
            };
            images(w, &mut center);
            for m in 1..=2 * m_coarse {
                for x in [w + m as f64 * period, w - m as f64 * period] {
                    images(x, &mut term);
                    for j in 0..width {
                        fine[j] += term[j];
                        if m <= m_coarse {
                            coarse[j] += term[j];
                        }
                    }
                }
            }
            // Richardson on the 1/M tail: 2 S_{2M} - S_M.
            let mut row: Vec<Complex64> = (0..width).map(|j| center[j] + 2.0 * fine[j] - coarse[j]).collect();
            if k == 0 {
                // P(-W) = P(W) = conj P(-W): the Nyquist sample is real.
                for v in row.iter_mut() {
                    v.im = 0.0;
                }
            }
            match weights {
                Some(c) => vec![row.iter().zip(c).map(|(v, a)| v * a).sum()],
                None => row,
            }
        })
        .collect()
}

fn column_spectrum(grid: &SpectrumGrid, rows: &[Vec<Complex64>], j: usize) -> Result<SpectrumGrid> {
    let mut vals: Vec<Complex64> = rows.iter().map(|r| r[j]).collect();
    vals.push(vals[0]);
    grid.with_values(vals)
}

/// Discrete `H_varpi` norm squared of any tabulated `gamma^_n`: `|gamma^|^2 varpi = psi'/pi`.
fn tabulated_norm_sq(profile: &WarpProfile, grid: &SpectrumGrid) -> f64 {
    let points = grid.len();
    (0..points)
        .map(|k| {
            let e = if k == 0 || k == points - 1 { 0.5 } else { 1.0 };
            e * profile.psi_prime(grid.omega(k))
        })
        .sum::<f64>()
        * grid.step()
        / PI
}

/// Synthesize several `gamma_n` sharing one profile and one grid.
///
/// The `n` must differ by integers so the phases can be advanced by rotation;
/// each alias image costs one psi evaluation for the whole batch.
pub fn synthesize_batch(
    profile: &WarpProfile,
    ns: &[f64],
    omega_max: f64,
    points: usize,
    opts: SynthOpts,
) -> Result<Vec<SynthBasis>> {
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    check_grid(omega_max, points)?;
    let (n0, offs) = lattice_offsets(ns)?;
    let width = offs.iter().max().expect("nonempty") + 1;
    let grid = SpectrumGrid::zeros(omega_max, points)?;
    let rows = periodized_rows(profile, n0, width, &grid, opts, None);
    let norm_sq = tabulated_norm_sq(profile, &grid);
    let mut out = Vec::with_capacity(ns.len());
    for (&n, &j) in ns.iter().zip(&offs) {
        let samples = synthesize_time(&column_spectrum(&grid, &rows, j)?, opts.taper);
        out.push(SynthBasis { alpha: profile.alpha(), beta: profile.beta(), n, omega_max, points, samples, norm_sq });
    }
    Ok(out)
}

/// `sum_i coeffs[i] gamma_{ns[i]}` through a single inverse DFT.
pub fn synthesize_combination(
    profile: &WarpProfile,
    ns: &[f64],
    coeffs: &[f64],
    omega_max: f64,
    points: usize,
    opts: SynthOpts,
) -> Result<TimeSamples> {
    if ns.len() != coeffs.len() {
        return Err(Error::Param(format!("{} indices but {} coefficients", ns.len(), coeffs.len())));
    }
    check_grid(omega_max, points)?;
    let grid = SpectrumGrid::zeros(omega_max, points)?;
    if ns.is_empty() {
        return Ok(synthesize_time(&grid, None));
    }
    let (n0, offs) = lattice_offsets(ns)?;
    let width = offs.iter().max().expect("nonempty") + 1;
    let mut w = vec![0.0; width];
    for (&j, &c) in offs.iter().zip(coeffs) {
        w[j] += c;
    }
    let rows = periodized_rows(profile, n0, width, &grid, opts, Some(&w));
    Ok(synthesize_time(&column_spectrum(&grid, &rows, 0)?, opts.taper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gamma_value, BasisIndex};

    #[test]
    fn spectrum_examples() {
        let p = WarpProfile::arctan(1.0);
        assert!((gamma_hat(&p, 0.0, 0.0).re - INV_SQRT_PI).abs() < 1e-15);
        for &w in &[-30.0, -1.0, 0.0, 0.4, 2.0, 100.0] {
            let a = Complex64::new(1.0, w);
            let b = Complex64::new(1.0, -w);
            let z = 1.0 / (PI.sqrt() * (1.0 + w * w)) * (b / a);
            assert!((gamma_hat(&p, 1.0, w) - z).norm() < 1e-12, "{w}");
        }
    }

    #[test]
    fn spectrum_matches_rational_form_for_integer_alpha() {
        // 1/(sqrt(pi) a^p b^q), p = (alpha+1)/2 + n, q = (alpha+1)/2 - n
        for alpha in 0..4u32 {
            let prof = WarpProfile::arctan(alpha as f64);
            for k in -4..4 {
                let idx = BasisIndex::plus(alpha, k);
                let (p, q) = (idx.p() as i32, idx.q() as i32);
                for &w in &[-7.0, -0.3, 0.0, 1.1, 25.0] {
                    let a = Complex64::new(1.0, w);
                    let b = Complex64::new(1.0, -w);
                    let z = 1.0 / (PI.sqrt() * a.powi(p) * b.powi(q));
                    assert!((gamma_hat(&prof, idx.n(), w) - z).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tabulated_norm_is_one() {
        for &(a, b) in &[(0.0, 1.0), (1.0, 1.0), (1.0, 1.5), (2.5, 0.8)] {
            let prof = WarpProfile::new(a, b).unwrap();
            let g = tabulate_spectrum(&prof, 0.5, &SpectrumGrid::zeros(4096.0, 1 << 16 | 1).unwrap());
            let dw = g.step();
            let s: f64 = (0..g.len())
                .map(|k| {
                    let e = if k == 0 || k == g.len() - 1 { 0.5 } else { 1.0 };
                    e * g.values()[k].norm_sqr() * prof.weight(g.omega(k))
                })
                .sum::<f64>()
                * dw;
            // the band keeps mass 2 psi(W)/pi; for beta >= 1 that is within 1e-3 of 1
            let inband = 2.0 * prof.psi(4096.0) / PI;
            assert!((s - inband).abs() < 1e-6, "{a} {b} {s}");
            if b >= 1.0 {
                assert!((s - 1.0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn zero_spectrum_gives_zero_samples() {
        let g = SpectrumGrid::zeros(64.0, 1025).unwrap();
        let x = synthesize_time(&g, Some(0.05));
        assert!(x.values.iter().all(|&v| v == 0.0));
        assert_eq!(x.len(), 1024);
    }

    #[test]
    fn time_samples_interpolate_cubics_exactly() {
        let ts = TimeSamples { t0: -1.0, dt: 0.1, values: (0..21).map(|j| (-1.0 + j as f64 * 0.1f64).powi(3)).collect(), imag_max: 0.0 };
        for &t in &[-0.95, -0.33, 0.0, 0.71, 0.95] {
            assert!((ts.at(t) - t * t * t).abs() < 1e-12, "{t}");
        }
        assert_eq!(ts.at(1.5), 0.0);
    }

    fn max_err(b: &SynthBasis, idx: BasisIndex) -> f64 {
        let s = &b.samples;
        (0..s.len())
            .filter(|&j| s.time(j).abs() <= 10.0)
            .map(|j| (s.values[j] - gamma_value(idx, s.time(j))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn closed_form_examples() {
        let p0 = WarpProfile::arctan(0.0);
        let b = SynthBasis::default_grid(&p0, 0.5).unwrap();
        let e = max_err(&b, BasisIndex::new(0, 0.5).unwrap());
        assert!(e <= 1e-3, "{e}");
        let p1 = WarpProfile::arctan(1.0);
        let b = SynthBasis::default_grid(&p1, 0.0).unwrap();
        assert!((b.value(0.0) - 0.5 * INV_SQRT_PI).abs() < 1e-3);
        assert!(b.samples.imag_max <= 1e-10 * b.samples.linf());
        assert!((0.999..=1.001).contains(&b.norm_sq));
    }

    #[test]
    fn batch_matches_closed_forms_alpha_two() {
        let prof = WarpProfile::arctan(2.0);
        let ns: Vec<f64> = (-5..=5).map(|k| k as f64 + 0.5).collect();
        let out = synthesize_batch(&prof, &ns, DEFAULT_OMEGA_MAX, DEFAULT_POINTS, SynthOpts::default()).unwrap();
        for b in &out {
            let e = max_err(b, BasisIndex::new(2, b.n).unwrap());
            assert!(e <= 1e-3, "n={} err={e}", b.n);
        }
    }

    #[test]
    fn combination_is_linear() {
        let prof = WarpProfile::arctan(1.0);
        let (w, pts) = (512.0, 1 << 14 | 1);
        let ns = [1.0, 2.0, 4.0];
        let cs = [0.5, -2.0, 1.25];
        let sum = synthesize_combination(&prof, &ns, &cs, w, pts, SynthOpts::default()).unwrap();
        let each = synthesize_batch(&prof, &ns, w, pts, SynthOpts::default()).unwrap();
        for j in (0..sum.len()).step_by(97) {
            let v: f64 = each.iter().zip(&cs).map(|(b, c)| c * b.samples.values[j]).sum();
            assert!((v - sum.values[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn batch_rejects_mixed_lattices() {
        let prof = WarpProfile::arctan(1.0);
        assert!(synthesize_batch(&prof, &[0.0, 0.5], 64.0, 129, SynthOpts::default()).is_err());
        assert!(synthesize_batch(&prof, &[0.0], 64.0, 128, SynthOpts::default()).is_err());
    }
}
