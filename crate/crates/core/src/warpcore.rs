//! Warping profiles (psi, phi, chi, weight), spectrum grids and the warping operator.

use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOpts};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const TABLE_POINTS: usize = 4096;
const TABLE_LO: f64 = 1e-6;
const TABLE_HI: f64 = 1e6;

/// Default round-trip tolerance for `phi`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Monotone tabulation of psi on a log-spaced grid of positive omega.
#[derive(Clone, Debug)]
struct PsiTable {
    log_lo: f64,
    log_step: f64,
    omega: Vec<f64>,
    psi: Vec<f64>,
}

/// The pair (psi, phi) with weight `(1+w^2)^(alpha*beta)`.
///
/// `psi(w) = c1 * int_0^w (1+v^2)^(-beta) dv`, normalized so that psi maps onto
/// `(-pi/2, pi/2)`. For `beta = 1` everything reduces to arctan/tan.
#[derive(Clone, Debug)]
pub struct WarpProfile {
    alpha: f64,
    beta: f64,
    c1: f64,
    tol: f64,
    table: Option<PsiTable>,
}

impl WarpProfile {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_tol(alpha, beta, DEFAULT_TOL)
    }

    /// The arctan family used for the closed forms.
    pub fn arctan(alpha: f64) -> Self {
        Self::new(alpha, 1.0).expect("beta = 1 is always valid")
    }

    pub fn with_tol(alpha: f64, beta: f64, tol: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Param(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.5) {
            return Err(Error::Param(format!("beta must be > 1/2, got {beta}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Param(format!("tol must be positive, got {tol}")));
        }
        let mut p = WarpProfile { alpha, beta, c1: 1.0, tol, table: None };
        if beta != 1.0 {
            let full = p.head(FRAC_PI_4)? + p.tail(FRAC_PI_4)?;
            p.c1 = FRAC_PI_2 / full;
            p.table = Some(p.build_table()?);
        }
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn quad_opts() -> QuadOpts {
        QuadOpts { abs_tol: 1e-15, rel_tol: 1e-14, max_segments: 2000 }
    }

    /// `int_0^theta cos^(2 beta - 2)`, for theta <= pi/4.
    fn head(&self, theta: f64) -> Result<f64> {
        let e = 2.0 * self.beta - 2.0;
        Ok(integrate(|x: f64| x.cos().powf(e), 0.0, theta, Self::quad_opts())?.0)
    }

    /// `int_0^s sin^(2 beta - 2)`, for s <= pi/4. Substitutes away the
    /// endpoint singularity when beta < 1.
    fn tail(&self, s0: f64) -> Result<f64> {
        let e = 2.0 * self.beta - 2.0;
        if self.beta >= 1.0 {
            return Ok(integrate(|x: f64| x.sin().powf(e), 0.0, s0, Self::quad_opts())?.0);
        }
        let k = 2.0 * self.beta - 1.0;
        let f = |r: f64| {
            let s = r.powf(1.0 / k);
            if s == 0.0 {
                1.0
            } else {
                (s.sin() / s).powf(e)
            }
        };
        Ok(integrate(f, 0.0, s0.powf(k), Self::quad_opts())?.0 / k)
    }

    /// psi by direct quadrature (used to build the table).
    pub fn psi_quadrature(&self, omega: f64) -> Result<f64> {
        if self.beta == 1.0 {
            return Ok(omega.atan());
        }
        let w = omega.abs();
        let v = if w <= 1.0 {
            self.c1 * self.head(w.atan())?
        } else {
            FRAC_PI_2 - self.c1 * self.tail((1.0 / w).atan())?
        };
        Ok(v.copysign(omega))
    }

    fn build_table(&self) -> Result<PsiTable> {
        let log_lo = TABLE_LO.ln();
        let log_step = (TABLE_HI.ln() - log_lo) / (TABLE_POINTS - 1) as f64;
        let omega: Vec<f64> = (0..TABLE_POINTS).map(|i| (log_lo + i as f64 * log_step).exp()).collect();
        // Integrate panel by panel so the table costs one sweep.
        let mut psi = Vec::with_capacity(TABLE_POINTS);
        psi.push(self.psi_small(omega[0]));
        for i in 1..TABLE_POINTS {
            let (a, b) = (omega[i - 1], omega[i]);
            if b <= 1.0 {
                let e = -self.beta;
                let inc = integrate(|v: f64| (1.0 + v * v).powf(e), a, b, Self::quad_opts())?.0;
                psi.push(psi[i - 1] + self.c1 * inc);
            } else {
                psi.push(self.psi_quadrature(b)?);
            }
        }
        // Strictly increasing until psi saturates at pi/2 in floating point.
        for w in psi.windows(2) {
            if !(w[1] > w[0] || (w[1] == w[0] && FRAC_PI_2 - w[0] < 1e-13)) {
                return Err(Error::Domain("psi table is not increasing".into()));
            }
        }
        Ok(PsiTable { log_lo, log_step, omega, psi })
    }

    fn psi_small(&self, w: f64) -> f64 {
        self.c1 * (w - self.beta * w * w * w / 3.0)
    }

    /// Distance to pi/2 for large omega, from the asymptotic expansion.
    fn psi_gap_large(&self, w: f64) -> f64 {
        let b = self.beta;
        self.c1
            * (w.powf(1.0 - 2.0 * b) / (2.0 * b - 1.0) - b * w.powf(-1.0 - 2.0 * b) / (2.0 * b + 1.0)
                + 0.5 * b * (b + 1.0) * w.powf(-3.0 - 2.0 * b) / (2.0 * b + 3.0))
    }

    pub fn psi(&self, omega: f64) -> f64 {
        let Some(t) = &self.table else {
            return omega.atan();
        };
        let w = omega.abs();
        let v = if w < TABLE_LO {
            self.psi_small(w)
        } else if w >= TABLE_HI {
            FRAC_PI_2 - self.psi_gap_large(w)
        } else {
            let pos = (w.ln() - t.log_lo) / t.log_step;
            let i = (pos.floor() as usize).min(TABLE_POINTS - 2);
            let (x0, x1) = (t.omega[i], t.omega[i + 1]);
            let h = x1 - x0;
            let s = ((w - x0) / h).clamp(0.0, 1.0);
            let (y0, y1) = (t.psi[i], t.psi[i + 1]);
            // Quintic Hermite with exact first and second derivatives.
            let (d0, d1) = (self.psi_prime(x0) * h, self.psi_prime(x1) * h);
            let (e0, e1) = (self.psi_second(x0) * h * h, self.psi_second(x1) * h * h);
            let s2 = s * s;
            let s3 = s2 * s;
            let s4 = s3 * s;
            let s5 = s4 * s;
            let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
            let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
            let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
            let h3 = 0.5 * (s3 - 2.0 * s4 + s5);
            let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
            let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
            h0 * y0 + h1 * d0 + h2 * e0 + h3 * e1 + h4 * d1 + h5 * y1
        };
        v.min(FRAC_PI_2).copysign(omega)
    }

    pub fn psi_prime(&self, omega: f64) -> f64 {
        if self.beta == 1.0 {
            1.0 / (1.0 + omega * omega)
        } else {
            self.c1 * (1.0 + omega * omega).powf(-self.beta)
        }
    }

    fn psi_second(&self, omega: f64) -> f64 {
        -2.0 * self.beta * omega * self.psi_prime(omega) / (1.0 + omega * omega)
    }

    /// Inverse of psi on `I = (-pi/2, pi/2)`.
    pub fn phi(&self, u: f64) -> Result<f64> {
        if !(u.abs() < FRAC_PI_2) {
            return Err(Error::Domain(format!("phi requires |u| < pi/2, got {u}")));
        }
        if self.table.is_none() {
            return Ok(u.tan());
        }
        Ok(self.phi_pos(u.abs()).copysign(u))
    }

    fn phi_pos(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let t = self.table.as_ref().expect("general beta has a table");
        let (mut lo, mut hi);
        if u < t.psi[0] {
            lo = 0.0;
            hi = t.omega[0];
        } else if u >= t.psi[TABLE_POINTS - 1] {
            // Leading-order inverse of the tail, then safeguard with a wide bracket.
            let k = 2.0 * self.beta - 1.0;
            let guess = (self.c1 / (k * (FRAC_PI_2 - u))).powf(1.0 / k);
            lo = TABLE_HI;
            hi = (guess * 4.0).max(TABLE_HI * 2.0);
            while self.psi(hi) < u && hi < f64::MAX / 4.0 {
                hi *= 4.0;
            }
        } else {
            let i = t.psi.partition_point(|&p| p <= u).saturating_sub(1);
            lo = t.omega[i];
            hi = t.omega[(i + 1).min(TABLE_POINTS - 1)];
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.psi(x) - u;
            if f.abs() <= 0.25 * self.tol {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - f / self.psi_prime(x);
            x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        x
    }

    /// `phi'(u) = 1 / psi'(phi(u))`.
    pub fn phi_prime(&self, u: f64) -> Result<f64> {
        let w = self.phi(u)?;
        Ok(1.0 / self.psi_prime(w))
    }

    /// `chi(u) = c1^(alpha/2) phi'(u)^((alpha+1)/2)`; the constant makes the
    /// weight `(chi o psi)^2 psi'` equal `(1+w^2)^(alpha beta)` exactly.
    pub fn chi(&self, u: f64) -> Result<f64> {
        let dp = self.phi_prime(u)?;
        Ok(self.c1.powf(0.5 * self.alpha) * dp.powf(0.5 * (self.alpha + 1.0)))
    }

    pub fn weight(&self, omega: f64) -> f64 {
        (1.0 + omega * omega).powf(self.alpha * self.beta)
    }

    pub fn to_config(&self) -> KvConfig {
        let mut c = KvConfig::default();
        c.set("alpha", self.alpha);
        c.set("beta", self.beta);
        c.set("tol", self.tol);
        c
    }

    pub fn from_config(c: &KvConfig) -> Result<Self> {
        let alpha = c.get_f64("alpha")?.unwrap_or(1.0);
        let beta = c.get_f64("beta")?.unwrap_or(1.0);
        let tol = c.get_f64("tol")?.unwrap_or(DEFAULT_TOL);
        Self::with_tol(alpha, beta, tol)
    }
}

/// Uniform symmetric grid of complex spectrum samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    omega_max: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl SpectrumGrid {
    /// Default analysis grid: `2^16 + 1` points on `|w| <= 2048`.
    pub const DEFAULT_POINTS: usize = (1 << 16) + 1;
    pub const DEFAULT_OMEGA_MAX: f64 = 2048.0;

    pub fn zeros(omega_max: f64, points: usize) -> Result<Self> {
        if points < 3 || points.is_multiple_of(2) {
            return Err(Error::Param(format!("spectrum grid needs an odd number >= 3 of points, got {points}")));
        }
        if !(omega_max > 0.0) {
            return Err(Error::Param("spectrum grid extent must be positive".into()));
        }
        let step = 2.0 * omega_max / (points - 1) as f64;
        Ok(SpectrumGrid { omega_max, step, values: vec![Complex64::new(0.0, 0.0); points] })
    }

    pub fn default_grid() -> Self {
        Self::zeros(Self::DEFAULT_OMEGA_MAX, Self::DEFAULT_POINTS).expect("valid default")
    }

    pub fn from_fn(omega_max: f64, points: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let mut g = Self::zeros(omega_max, points)?;
        for k in 0..points {
            g.values[k] = f(g.omega(k));
        }
        Ok(g)
    }

    /// Same grid, new values.
    pub fn map_fn(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let mut g = self.clone();
        for k in 0..g.values.len() {
            g.values[k] = f(g.omega(k));
        }
        g
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::GridMismatch(format!("{} values for a {}-point grid", values.len(), self.values.len())));
        }
        Ok(SpectrumGrid { values, ..*self })
    }

    pub fn omega(&self, k: usize) -> f64 {
        // Symmetric construction keeps omega(mid) exactly zero.
        let mid = (self.values.len() / 2) as f64;
        (k as f64 - mid) * self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn step(&self) -> f64 {
        self.step
    }
    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn same_grid(&self, o: &Self) -> bool {
        self.values.len() == o.values.len() && (self.step - o.step).abs() <= 1e-12 * self.step
    }

    /// Linear interpolation; zero outside the grid.
    pub fn interpolate(&self, omega: f64) -> Complex64 {
        let pos = (omega + self.omega_max) / self.step;
        if !(pos >= 0.0) || pos > (self.values.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }
}

/// Trapezoid approximation of `int X^ conj(Y^) w dw` (no 1/2pi).
pub fn sobolev_inner(x: &SpectrumGrid, y: &SpectrumGrid, profile: &WarpProfile) -> Result<Complex64> {
    if !x.same_grid(y) {
        return Err(Error::GridMismatch(format!(
            "{} points / step {} vs {} points / step {}",
            x.len(),
            x.step,
            y.len(),
            y.step
        )));
    }
    let n = x.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        acc += x.values[k] * y.values[k].conj() * (w * profile.weight(x.omega(k)));
    }
    Ok(acc * x.step)
}

/// `int_R f conj(g) w dw` for spectra given as functions, by adaptive
/// quadrature after the map `w = s / (1 - s^2)`, which is unrelated to psi.
pub fn sobolev_inner_fn(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    profile: &WarpProfile,
    opts: QuadOpts,
) -> Result<Complex64> {
    let integrand = |s: f64, part: fn(Complex64) -> f64| {
        let d = 1.0 - s * s;
        let w = s / d;
        let jac = (1.0 + s * s) / (d * d);
        part(f(w) * g(w).conj()) * profile.weight(w) * jac
    };
    let knots = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let re = crate::quad::integrate_pieces(|s| integrand(s, |z| z.re), &knots, opts)?;
    let im = crate::quad::integrate_pieces(|s| integrand(s, |z| z.im), &knots, opts)?;
    Ok(Complex64::new(re, im))
}

/// `u -> X^(phi(u)) chi(u)` sampled on `u_grid`, with X^ linearly interpolated
/// from the grid and taken as zero beyond it.
pub fn warp_transform(xhat: &SpectrumGrid, profile: &WarpProfile, u_grid: &[f64]) -> Result<Vec<Complex64>> {
    warp_transform_fn(|w| xhat.interpolate(w), profile, u_grid)
}

pub fn warp_transform_fn(
    xhat: impl Fn(f64) -> Complex64,
    profile: &WarpProfile,
    u_grid: &[f64],
) -> Result<Vec<Complex64>> {
    u_grid
        .iter()
        .map(|&u| {
            let w = profile.phi(u)?;
            let v = xhat(w);
            if v == Complex64::new(0.0, 0.0) {
                return Ok(v);
            }
            Ok(v * profile.chi(u)?)
        })
        .collect()
}

/// `||T X||^2_{L^2(I)}` by adaptive quadrature in u.
pub fn warped_norm_sq(xhat: impl Fn(f64) -> Complex64, profile: &WarpProfile, opts: QuadOpts) -> Result<f64> {
    let f = |u: f64| -> f64 {
        match (profile.phi(u), profile.chi(u)) {
            (Ok(w), Ok(c)) => (xhat(w) * c).norm_sqr(),
            _ => 0.0,
        }
    };
    let knots = [-FRAC_PI_2, -FRAC_PI_4, 0.0, FRAC_PI_4, FRAC_PI_2];
    crate::quad::integrate_pieces(f, &knots, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn psi_examples() {
        let p = WarpProfile::arctan(1.0);
        assert_eq!(p.psi(1.0), FRAC_PI_4);
        let q = WarpProfile::new(1.0, 1.5).unwrap();
        assert_eq!(q.psi(0.0), 0.0);
        assert!((q.c1() - FRAC_PI_2).abs() < 1e-13);
        let exact = FRAC_PI_2 / 2f64.sqrt();
        assert!((q.psi(1.0) - exact).abs() < 1e-11, "{}", q.psi(1.0) - exact);
        // Closed form psi = (pi/2) w / sqrt(1+w^2) at several scales.
        for &w in &[1e-7, 1e-3, 0.5, 3.0, 250.0, 9e5, 3e6, 1e9] {
            let e = FRAC_PI_2 * w / (1.0 + w * w).sqrt();
            assert!((q.psi(w) - e).abs() < 1e-11 * e.max(1e-3), "w={w}");
            assert!((q.psi(-w) + e).abs() < 1e-11 * e.max(1e-3));
        }
    }

    #[test]
    fn phi_examples() {
        let p = WarpProfile::arctan(1.0);
        assert!((p.phi(FRAC_PI_4).unwrap() - 1.0).abs() < 1e-15);
        let q = WarpProfile::new(1.0, 1.5).unwrap();
        assert!((q.phi(FRAC_PI_2 / 2f64.sqrt()).unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(q.phi(FRAC_PI_2), Err(Error::Domain(_))));
        assert!(matches!(p.phi(-2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(WarpProfile::arctan(1.0).weight(1.0), 2.0);
        assert_eq!(WarpProfile::new(0.0, 2.0).unwrap().weight(7.0), 1.0);
        let q = WarpProfile::new(1.0, 1.5).unwrap();
        assert!((q.weight(2.0) - 5f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn weight_equals_chi_squared_times_psi_prime() {
        for &(a, b) in &[(1.0, 1.0), (1.0, 1.5), (2.5, 0.8), (0.0, 3.0)] {
            let p = WarpProfile::new(a, b).unwrap();
            // Past w ~ 20 the beta = 3 gap pi/2 - psi drops below 1e-8 and the
            // inverse map loses digits in proportion.
            for &w in &[0.0, 0.3, 2.0, 12.0] {
                let u = p.psi(w);
                let lhs = p.chi(u).unwrap().powi(2) * p.psi_prime(w);
                assert!((lhs / p.weight(w) - 1.0).abs() < 1e-8, "a={a} b={b} w={w}");
            }
        }
    }

    #[test]
    fn psi_monotone_and_bounded() {
        for &b in &[0.6, 1.0, 1.5, 3.0] {
            let p = WarpProfile::new(1.0, b).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in -2000..=2000 {
                let w = (i as f64 / 100.0).sinh() * 10.0;
                let v = p.psi(w);
                // Saturation at pi/2 in floating point is the only allowed tie.
                assert!(v > prev || (v >= prev - 1e-15 && FRAC_PI_2 - v.abs() < 1e-13), "beta={b} w={w}");
                assert!(v.abs() <= FRAC_PI_2);
                prev = v;
            }
        }
    }

    #[test]
    fn psi_table_matches_quadrature() {
        for &b in &[0.6, 1.5, 3.0] {
            let p = WarpProfile::new(0.0, b).unwrap();
            for i in 0..200 {
                let w = 10f64.powf(-5.0 + i as f64 * 0.0555);
                let d = (p.psi(w) - p.psi_quadrature(w).unwrap()).abs();
                assert!(d < 1e-11, "beta={b} w={w} d={d}");
            }
        }
    }

    #[test]
    fn round_trip_random() {
        let mut state = 0x9e3779b97f4a7c15u64;
        for &b in &[0.6, 1.0, 1.5, 3.0] {
            let p = WarpProfile::new(1.0, b).unwrap();
            for _ in 0..1000 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let r = (state >> 11) as f64 / (1u64 << 53) as f64;
                let u = (2.0 * r - 1.0) * 0.999 * FRAC_PI_2;
                let w = p.phi(u).unwrap();
                assert!((p.psi(w) - u).abs() <= p.tol(), "beta={b} u={u}");
            }
        }
    }

    #[test]
    fn sobolev_inner_exponential() {
        let p = WarpProfile::arctan(1.0);
        let g = SpectrumGrid::default_grid().map_fn(|w| Complex64::new(2.0 / (1.0 + w * w), 0.0));
        let v = sobolev_inner(&g, &g, &p).unwrap();
        // Truncation beyond |w| = 2048 loses int 4/w^2 = 4/1024.
        assert!((v.re - (4.0 * PI - 4.0 / 1024.0)).abs() < 1e-5, "{v}");
        let z = g.map_fn(|_| Complex64::new(0.0, 0.0));
        assert_eq!(sobolev_inner(&z, &g, &p).unwrap(), Complex64::new(0.0, 0.0));
        let other = SpectrumGrid::zeros(10.0, 11).unwrap();
        assert!(matches!(sobolev_inner(&g, &other, &p), Err(Error::GridMismatch(_))));
        let f = sobolev_inner_fn(|w| Complex64::new(2.0 / (1.0 + w * w), 0.0), |w| Complex64::new(2.0 / (1.0 + w * w), 0.0), &p, QuadOpts::default()).unwrap();
        assert!((f.re - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn warp_transform_examples() {
        let p = WarpProfile::arctan(1.0);
        let us: Vec<f64> = (-50..=50).map(|i| i as f64 * 0.03).collect();
        let v = warp_transform_fn(|w| Complex64::new(1.0 / (1.0 + w * w), 0.0), &p, &us).unwrap();
        for z in v {
            assert!((z.re - 1.0).abs() < 1e-12 && z.im == 0.0);
        }
        let g = SpectrumGrid::zeros(100.0, 201).unwrap();
        assert!(warp_transform(&g, &p, &us).unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(matches!(warp_transform(&g, &p, &[2.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn isometry_exponential() {
        let p = WarpProfile::arctan(1.0);
        let xh = |w: f64| Complex64::new(2.0 / (1.0 + w * w), 0.0);
        let lhs = warped_norm_sq(xh, &p, QuadOpts::default()).unwrap().sqrt();
        let rhs = sobolev_inner_fn(xh, xh, &p, QuadOpts::default()).unwrap().re.sqrt();
        assert!((lhs / rhs - 1.0).abs() < 1e-6);
        assert!((rhs - 2.0 * PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn config_round_trip() {
        let p = WarpProfile::new(2.5, 1.25).unwrap();
        let text = p.to_config().to_string();
        let q = WarpProfile::from_config(&KvConfig::parse(&text).unwrap()).unwrap();
        assert_eq!(q.alpha(), 2.5);
        assert_eq!(q.beta(), 1.25);
        assert!(WarpProfile::new(1.0, 0.5).is_err());
        assert!(WarpProfile::new(-1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn psi_odd(w in -1e4f64..1e4, b in 0.55f64..4.0) {
            let p = WarpProfile::new(0.0, b).unwrap();
            prop_assert_eq!(p.psi(-w), -p.psi(w));
        }

        #[test]
        fn arctan_profile_is_exact(w in -1e6f64..1e6) {
            prop_assert_eq!(WarpProfile::arctan(2.0).psi(w), w.atan());
        }
    }
}
