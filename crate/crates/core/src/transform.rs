//! Analysis and synthesis in the warped basis: coefficients, partial sums,
//! and the splitting into minus, center and plus parts.
//!
//! Coefficients are indexed by `k` with `n = (alpha+1)/2 + k`; for integer
//! alpha, `k >= 0` is the plus side, `k <= -(alpha+1)` the minus side and the
//! `alpha` indices in between are the center.

use crate::basis::{center_sum, gamma_dual, gamma_value, pair, plus_gammas_at, y_function, BasisIndex, INV_SQRT_PI};
use crate::error::{Error, Result};
use crate::quad::simpson_weights;
use crate::signals::{dense_times, Signal, DENSE_POINTS, DENSE_STEP, T_END};
use crate::specfun::{laguerre_all, rat_to_f64};
use crate::synth::{amplitude, synthesize_combination, SynthOpts};
use crate::warpcore::{SpectrumGrid, WarpProfile};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Part of the splitting `H- + H0 + H+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Minus,
    Center,
    Plus,
}

/// Order in which coefficients are retained when truncating to N terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IndexOrder {
    /// `|n|` increasing, positive first.
    #[default]
    Symmetric,
    /// Minus indices dropped, then `|n|` increasing.
    Causal,
}

/// Coefficients of a signal in the warped basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub alpha: f64,
    pub beta: f64,
    /// `X^(j)(0)` for `j < alpha` (closed-form path only; empty otherwise).
    pub jet: Vec<f64>,
    /// `k -> a_n` with `n = (alpha+1)/2 + k`.
    pub coeffs: BTreeMap<i64, f64>,
}

impl Expansion {
    pub fn empty(alpha: f64, beta: f64) -> Self {
        Expansion { alpha, beta, jet: Vec::new(), coeffs: BTreeMap::new() }
    }

    pub fn offset(&self) -> f64 {
        0.5 * (self.alpha + 1.0)
    }

    pub fn n_of(&self, k: i64) -> f64 {
        self.offset() + k as f64
    }

    /// Lattice key of `n`, if `n` is on the lattice.
    pub fn key(&self, n: f64) -> Option<i64> {
        let k = n - self.offset();
        ((k - k.round()).abs() < 1e-9).then(|| k.round() as i64)
    }

    pub fn get(&self, n: f64) -> Option<f64> {
        self.key(n).and_then(|k| self.coeffs.get(&k).copied())
    }

    /// `(n, a_n)` in increasing n.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.coeffs.iter().map(|(&k, &a)| (self.n_of(k), a))
    }

    pub fn integer_alpha(&self) -> Option<u32> {
        (self.alpha.fract() == 0.0 && self.alpha >= 0.0 && self.alpha < 1e6).then_some(self.alpha as u32)
    }

    /// Retained coefficients plus jet length.
    pub fn terms(&self) -> usize {
        self.coeffs.len() + self.jet.len()
    }

    /// `sum |a_n|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.values().map(|a| a * a).sum()
    }

    fn part_of(&self, k: i64) -> Part {
        let n = self.n_of(k);
        let h = self.offset();
        if n >= h - 1e-12 {
            Part::Plus
        } else if n <= -h + 1e-12 {
            Part::Minus
        } else {
            Part::Center
        }
    }

    /// Keys in retention order.
    pub fn ordered_keys(&self, order: IndexOrder) -> Vec<i64> {
        let mut keys: Vec<i64> = self
            .coeffs
            .keys()
            .copied()
            .filter(|&k| order == IndexOrder::Symmetric || self.part_of(k) != Part::Minus)
            .collect();
        keys.sort_by(|&a, &b| {
            let (na, nb) = (self.n_of(a), self.n_of(b));
            na.abs().total_cmp(&nb.abs()).then(nb.total_cmp(&na))
        });
        keys
    }

    /// The jet plus the first `count` coefficients in `order`.
    pub fn truncated(&self, count: usize, order: IndexOrder) -> Expansion {
        let coeffs = self.ordered_keys(order).into_iter().take(count).map(|k| (k, self.coeffs[&k])).collect();
        Expansion { coeffs, ..self.clone() }
    }

    /// Keep only coefficients with `|n| <= n_max`.
    pub fn up_to(&self, n_max: f64) -> Expansion {
        let coeffs = self.coeffs.iter().filter(|(&k, _)| self.n_of(k).abs() <= n_max + 1e-12).map(|(&k, &a)| (k, a)).collect();
        Expansion { coeffs, ..self.clone() }
    }
}

/// Lattice keys with `|n| <= n_max`, optionally only the one-sided ones.
fn lattice_keys(alpha: f64, n_max: f64, one_sided: bool) -> Vec<i64> {
    let h = 0.5 * (alpha + 1.0);
    let lo = (-n_max - h - 1e-9).ceil() as i64;
    let hi = (n_max - h + 1e-9).floor() as i64;
    (lo..=hi)
        .filter(|&k| {
            let n = h + k as f64;
            !one_sided || n >= h - 1e-12 || n <= -h + 1e-12
        })
        .collect()
}

fn jet_for(x: &Signal, alpha: u32) -> Result<Vec<f64>> {
    if alpha == 0 {
        return Ok(Vec::new());
    }
    x.jet_at_zero(alpha as usize - 1).map_err(|e| match e {
        Error::NonDifferentiable { signal, order } => {
            Error::MissingDerivative { order, reason: format!("{signal} is not differentiable at 0") }
        }
        other => other,
    })
}

/// `a_n = 2 pi pair(gamma~_n, X)` for one-sided `|n| <= n_max`, plus the jet.
pub fn analyze_closed(x: &Signal, alpha: u32, n_max: f64) -> Result<Expansion> {
    let jet = jet_for(x, alpha)?;
    let keys = lattice_keys(alpha as f64, n_max, true);
    let vals: Vec<Result<(i64, f64)>> = keys
        .par_iter()
        .map(|&k| {
            let idx = BasisIndex::plus(alpha, k);
            Ok((k, 2.0 * PI * pair(&gamma_dual(idx), x)?))
        })
        .collect();
    let coeffs = vals.into_iter().collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Expansion { alpha: alpha as f64, beta: 1.0, jet, coeffs })
}

/// The Laguerre formula for the one-sided coefficients, integrated on the
/// dense grid of `[0, 10]`:
///
/// `a_{+-n} = 2 pi c_k [ int X L_k(2|t|) e^{-|t|} H(+-t) dt - 1/2 sum_j (-+1)^j X^(j)(0) S_j ]`
/// with `c_k = (-1)^k 2^alpha / sqrt(pi)`, `k = |n| - (alpha+1)/2`.
pub fn analyze_closed_formula(x: &Signal, alpha: u32, n_max: f64) -> Result<Expansion> {
    let (lo, hi) = x.support();
    if lo < 0.0 || hi > T_END {
        return Err(Error::Domain(format!("{} is not supported in [0, 10]; use analyze_closed", x.name())));
    }
    let jet = jet_for(x, alpha)?;
    let keys = lattice_keys(alpha as f64, n_max, true);
    let count = keys.iter().filter(|&&k| k >= 0).map(|&k| k + 1).max().unwrap_or(0) as usize;
    // int_0^10 X(t) L_k^(alpha)(2t) e^{-t} dt for k < count
    let w = simpson_weights(DENSE_POINTS, DENSE_STEP);
    let xs = x.dense_samples();
    let ts = dense_times();
    let mut integrals = vec![0.0; count];
    if count > 0 {
        integrals = ts
            .par_chunks(4096)
            .enumerate()
            .map(|(c, chunk)| {
                let mut acc = vec![0.0; count];
                for (i, &t) in chunk.iter().enumerate() {
                    let j = c * 4096 + i;
                    let f = xs[j] * w[j] * (-t).exp();
                    if f == 0.0 {
                        continue;
                    }
                    for (a, l) in acc.iter_mut().zip(laguerre_all(count as u32 - 1, alpha as f64, 2.0 * t)) {
                        *a += f * l;
                    }
                }
                acc
            })
            .reduce(|| vec![0.0; count], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    }
    let mut coeffs = BTreeMap::new();
    for &k in &keys {
        let idx = BasisIndex::plus(alpha, k);
        let deg = idx.laguerre_degree().expect("one-sided");
        let c = if deg % 2 == 1 { -1.0 } else { 1.0 } * 2f64.powi(alpha as i32) * INV_SQRT_PI;
        // Signals live on t >= 0, so the minus-side integral vanishes.
        let smooth = if idx.is_plus() { integrals[deg as usize] } else { 0.0 };
        let mut center = 0.0;
        for (j, xj) in jet.iter().enumerate() {
            let s = rat_to_f64(&center_sum(idx, j as u32));
            let sgn = if idx.is_plus() && j % 2 == 1 { -1.0 } else { 1.0 };
            center += sgn * xj * s;
        }
        coeffs.insert(k, 2.0 * PI * c * (smooth - 0.5 * center));
    }
    Ok(Expansion { alpha: alpha as f64, beta: 1.0, jet, coeffs })
}

/// `a_n = <Xhat, gamma^_n>_varpi` for a single tabulated basis spectrum.
pub fn fourier_coefficient(xhat: &SpectrumGrid, gamma_hat: &SpectrumGrid, profile: &WarpProfile) -> Result<f64> {
    Ok(crate::warpcore::sobolev_inner(xhat, gamma_hat, profile)?.re)
}

/// Coefficients for all lattice `|n| <= n_max` by the trapezoid rule in w,
/// `a_n = int Xhat conj(gamma^_n) varpi dw` (no 1/(2 pi): the basis is
/// orthonormal for this product).
pub fn analyze_fourier(xhat: &SpectrumGrid, profile: &WarpProfile, n_max: f64) -> Result<Expansion> {
    let keys = lattice_keys(profile.alpha(), n_max, false);
    let mut exp = Expansion::empty(profile.alpha(), profile.beta());
    let Some(&k0) = keys.first() else { return Ok(exp) };
    let width = keys.len();
    let n0 = exp.n_of(k0);
    let len = xhat.len();
    let sums = (0..len)
        .into_par_iter()
        .fold(
            || vec![Complex64::new(0.0, 0.0); width],
            |mut acc, i| {
                let w = xhat.omega(i);
                let e = if i == 0 || i == len - 1 { 0.5 } else { 1.0 };
                let g = xhat.values()[i] * (e * amplitude(profile, w) * profile.weight(w) * INV_SQRT_PI);
                if g.norm_sqr() == 0.0 {
                    return acc;
                }
                // conj(gamma^_n) carries e^{+2 i n psi}
                let ps = profile.psi(w);
                let step = Complex64::from_polar(1.0, 2.0 * ps);
                let mut z = g * Complex64::from_polar(1.0, 2.0 * n0 * ps);
                for a in acc.iter_mut() {
                    *a += z;
                    z *= step;
                }
                acc
            },
        )
        .reduce(|| vec![Complex64::new(0.0, 0.0); width], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    // Past the band, T X(u) = Xhat chi is continued by its mean over the outer
    // 1% of each band edge; that mean is ~0 for spectra oscillating like e^{-iwT}.
    let mut tail = vec![Complex64::new(0.0, 0.0); width];
    let edge_pts = (len / 200).max(1);
    for side in [1.0, -1.0] {
        let idx = |i: usize| if side > 0.0 { len - 1 - i } else { i };
        let mean = (0..edge_pts)
            .map(|i| {
                let w = xhat.omega(idx(i));
                xhat.values()[idx(i)] * (profile.weight(w) / profile.psi_prime(w)).sqrt()
            })
            .sum::<Complex64>()
            / edge_pts as f64;
        let ue = profile.psi(xhat.omega(idx(0)));
        let (u0, u1) = if side > 0.0 { (ue, FRAC_PI_2) } else { (-FRAC_PI_2, ue) };
        for (j, t) in tail.iter_mut().enumerate() {
            let n = n0 + j as f64;
            let int = if n == 0.0 {
                Complex64::new(u1 - u0, 0.0)
            } else {
                (Complex64::from_polar(1.0, 2.0 * n * u1) - Complex64::from_polar(1.0, 2.0 * n * u0)) / Complex64::new(0.0, 2.0 * n)
            };
            *t += mean * int * INV_SQRT_PI;
        }
    }
    for (j, s) in sums.iter().enumerate() {
        exp.coeffs.insert(k0 + j as i64, s.re * xhat.step() + tail[j].re);
    }
    Ok(exp)
}

/// Coefficients from the warped function `T X(u) = Xhat(phi(u)) chi(u)` on a
/// midpoint grid of `I`: `a_n = int_I T X(u) e^{2 i n u} du / sqrt(pi)`.
pub fn analyze_warped(
    xhat: impl Fn(f64) -> Complex64 + Sync,
    profile: &WarpProfile,
    n_max: f64,
    u_points: usize,
) -> Result<Expansion> {
    if u_points == 0 {
        return Err(Error::Param("analyze_warped needs u_points > 0".into()));
    }
    let keys = lattice_keys(profile.alpha(), n_max, false);
    let mut exp = Expansion::empty(profile.alpha(), profile.beta());
    let Some(&k0) = keys.first() else { return Ok(exp) };
    let n0 = exp.n_of(k0);
    let du = PI / u_points as f64;
    let warped: Vec<Complex64> = (0..u_points)
        .into_par_iter()
        .map(|j| {
            let u = -FRAC_PI_2 + (j as f64 + 0.5) * du;
            Ok(xhat(profile.phi(u)?) * profile.chi(u)?)
        })
        .collect::<Result<_>>()?;
    let mut sums = vec![Complex64::new(0.0, 0.0); keys.len()];
    for (j, v) in warped.iter().enumerate() {
        let u = -FRAC_PI_2 + (j as f64 + 0.5) * du;
        let step = Complex64::from_polar(1.0, 2.0 * u);
        let mut z = v * Complex64::from_polar(1.0, 2.0 * n0 * u);
        for s in sums.iter_mut() {
            *s += z;
            z *= step;
        }
    }
    for (j, s) in sums.iter().enumerate() {
        exp.coeffs.insert(k0 + j as i64, s.re * du * INV_SQRT_PI);
    }
    Ok(exp)
}

/// Partial sum at `times` from the closed forms (integer alpha, beta = 1):
/// `sum_j jet[j] Y_j(t) + sum a_n gamma_n(t)`.
pub fn reconstruct(exp: &Expansion, times: &[f64]) -> Result<Vec<f64>> {
    let alpha = exp.integer_alpha().filter(|_| exp.beta == 1.0).ok_or_else(|| {
        Error::Param(format!("closed-form reconstruction needs integer alpha and beta = 1, got {} and {}", exp.alpha, exp.beta))
    })?;
    let ys = (0..exp.jet.len()).map(|j| y_function(alpha, j as u32)).collect::<Result<Vec<_>>>()?;
    let plus_count = exp.coeffs.keys().filter(|&&k| k >= 0).map(|&k| k + 1).max().unwrap_or(0) as usize;
    let minus_count = exp.coeffs.keys().filter(|&&k| k < -(alpha as i64)).map(|&k| -k - alpha as i64).max().unwrap_or(0) as usize;
    let plus: Vec<f64> = (0..plus_count).map(|k| exp.coeffs.get(&(k as i64)).copied().unwrap_or(0.0)).collect();
    // minus key for degree k: n = -(alpha+1)/2 - k, i.e. key -(alpha+1) - k
    let minus: Vec<f64> = (0..minus_count).map(|k| exp.coeffs.get(&(-(alpha as i64) - 1 - k as i64)).copied().unwrap_or(0.0)).collect();
    let center: Vec<(BasisIndex, f64)> = exp
        .coeffs
        .iter()
        .filter(|(&k, _)| k < 0 && k > -(alpha as i64) - 1)
        .map(|(&k, &a)| (BasisIndex::plus(alpha, k), a))
        .collect();
    Ok(times
        .par_iter()
        .map(|&t| {
            let mut v: f64 = exp.jet.iter().zip(&ys).map(|(x, y)| x * y.value(t)).sum();
            if t >= 0.0 && plus_count > 0 {
                v += plus_gammas_at(alpha, plus_count, t).iter().zip(&plus).map(|(g, a)| g * a).sum::<f64>();
            }
            if t <= 0.0 && minus_count > 0 {
                v += plus_gammas_at(alpha, minus_count, -t).iter().zip(&minus).map(|(g, a)| g * a).sum::<f64>();
            }
            v + center.iter().map(|(i, a)| a * gamma_value(*i, t)).sum::<f64>()
        })
        .collect())
}

/// Partial sum at `times` through Fourier synthesis (any alpha, beta).
pub fn reconstruct_synth(
    exp: &Expansion,
    profile: &WarpProfile,
    times: &[f64],
    omega_max: f64,
    points: usize,
    opts: SynthOpts,
) -> Result<Vec<f64>> {
    if !exp.jet.is_empty() {
        return Err(Error::Param("synthesis path takes coefficient-only expansions".into()));
    }
    let (ns, cs): (Vec<f64>, Vec<f64>) = exp.iter().unzip();
    let s = synthesize_combination(profile, &ns, &cs, omega_max, points, opts)?;
    Ok(times.iter().map(|&t| s.at(t)).collect())
}

/// Keep one part of the splitting (integer alpha).
pub fn project(exp: &Expansion, part: Part) -> Expansion {
    let coeffs = exp.coeffs.iter().filter(|(&k, _)| exp.part_of(k) == part).map(|(&k, &a)| (k, a)).collect();
    let jet = if part == Part::Center { exp.jet.clone() } else { Vec::new() };
    Expansion { jet, coeffs, ..exp.clone() }
}
