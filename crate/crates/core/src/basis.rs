//! Closed-form bases for integer alpha and the arctan warping: gamma_n, the
//! duals, the center functions Y_j, the kernel w_{p,q}, the recursion and the
//! mirror symmetry.
//!
//! Everything is built from one fact: with `a = 1+iw`, `b = 1-iw`,
//! `gamma^_n = 1/(sqrt(pi) a^p b^q)` where `p = (alpha+1)/2 + n` and
//! `q = (alpha+1)/2 - n`, and the dual has exponents `p - alpha`, `q - alpha`.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOpts};
use crate::signals::Signal;
use crate::specfun::{binomial, factorial, gen_binomial, horner, laguerre, laguerre_all, rat, rat_int, rat_to_f64, RationalPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

/// `1/sqrt(pi)`.
pub const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Beyond this |t| every exponential-polynomial is reported as 0.
const EXP_CUTOFF: f64 = 750.0;

/// Lattice index for integer alpha: `n` with `n - (alpha+1)/2` an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    alpha: u32,
    twice_n: i64,
}

impl BasisIndex {
    pub fn new(alpha: i64, n: f64) -> Result<Self> {
        if alpha < 0 {
            return Err(Error::Index(format!("alpha must be a nonnegative integer, got {alpha}")));
        }
        let tn = 2.0 * n;
        if !tn.is_finite() || tn.fract() != 0.0 || tn.abs() > 1e15 {
            return Err(Error::Index(lattice_rule(alpha as u32, n)));
        }
        Self::from_twice(alpha as u32, tn as i64)
    }

    /// Index from `2n`.
    pub fn from_twice(alpha: u32, twice_n: i64) -> Result<Self> {
        if (twice_n - alpha as i64 - 1).rem_euclid(2) != 0 {
            return Err(Error::Index(lattice_rule(alpha, twice_n as f64 / 2.0)));
        }
        Ok(BasisIndex { alpha, twice_n })
    }

    /// The k-th index on the lattice starting at the first one-sided index:
    /// `n = (alpha+1)/2 + k`.
    pub fn plus(alpha: u32, k: i64) -> Self {
        BasisIndex { alpha, twice_n: alpha as i64 + 1 + 2 * k }
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }
    pub fn n(&self) -> f64 {
        self.twice_n as f64 / 2.0
    }
    pub fn twice_n(&self) -> i64 {
        self.twice_n
    }
    /// `p = (alpha+1)/2 + n`.
    pub fn p(&self) -> i64 {
        (self.alpha as i64 + 1 + self.twice_n) / 2
    }
    /// `q = (alpha+1)/2 - n`.
    pub fn q(&self) -> i64 {
        (self.alpha as i64 + 1 - self.twice_n) / 2
    }
    /// `n >= (alpha+1)/2`: supported on `t >= 0`.
    pub fn is_plus(&self) -> bool {
        self.q() <= 0
    }
    pub fn is_minus(&self) -> bool {
        self.p() <= 0
    }
    pub fn is_center(&self) -> bool {
        !self.is_plus() && !self.is_minus()
    }
    pub fn mirror(&self) -> Self {
        BasisIndex { alpha: self.alpha, twice_n: -self.twice_n }
    }
    pub fn next(&self) -> Self {
        BasisIndex { alpha: self.alpha, twice_n: self.twice_n + 2 }
    }
    pub fn prev(&self) -> Self {
        BasisIndex { alpha: self.alpha, twice_n: self.twice_n - 2 }
    }
    /// Laguerre degree `|n| - (alpha+1)/2` for one-sided indices.
    pub fn laguerre_degree(&self) -> Option<u32> {
        let k = (self.twice_n.abs() - self.alpha as i64 - 1) / 2;
        (!self.is_center()).then_some(k as u32)
    }
}

fn lattice_rule(alpha: u32, n: f64) -> String {
    let kind = if alpha.is_multiple_of(2) { "a half-integer" } else { "an integer" };
    format!("n = {n} is off the lattice (alpha+1)/2 + Z; for alpha = {alpha} n must be {kind}")
}

/// `scale * [P+(t) e^{-t} H(t) + P-(-t) e^{t} H(-t)]`, with `H(0) = 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseExpPoly {
    pos: RationalPoly,
    neg: RationalPoly,
    scale: f64,
    pos_f: Vec<f64>,
    neg_f: Vec<f64>,
}

impl PiecewiseExpPoly {
    pub fn new(pos: RationalPoly, neg: RationalPoly, scale: f64) -> Self {
        let pos_f = pos.to_f64();
        let neg_f = neg.to_f64();
        PiecewiseExpPoly { pos, neg, scale, pos_f, neg_f }
    }

    pub fn zero() -> Self {
        Self::new(RationalPoly::zero(), RationalPoly::zero(), 1.0)
    }

    pub fn pos(&self) -> &RationalPoly {
        &self.pos
    }
    pub fn neg(&self) -> &RationalPoly {
        &self.neg
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.pos.is_zero() && self.neg.is_zero()
    }

    /// Horner evaluation of the exact coefficients.
    pub fn value(&self, t: f64) -> f64 {
        if t.abs() > EXP_CUTOFF {
            return 0.0;
        }
        if t > 0.0 {
            self.scale * horner(&self.pos_f, t) * (-t).exp()
        } else if t < 0.0 {
            self.scale * horner(&self.neg_f, -t) * t.exp()
        } else {
            0.5 * self.scale * (self.pos_f.first().unwrap_or(&0.0) + self.neg_f.first().unwrap_or(&0.0))
        }
    }

    /// One-sided derivative of order j at 0, from the right (`side = 1`) or left (`side = -1`).
    pub fn derivative_at_zero(&self, j: usize, side: i32) -> f64 {
        // d^j/dt^j [P(t) e^{-t}] at 0 = sum_i C(j,i) P^{(i)}(0) (-1)^{j-i}
        let (poly, sgn) = if side >= 0 { (&self.pos, 1i64) } else { (&self.neg, -1i64) };
        let mut acc = BigRational::zero();
        for i in 0..=j {
            let pi = poly.coeff(i) * BigRational::from_integer(factorial(i as u32));
            let mut term = pi * BigRational::from_integer(binomial(j as i64, i as i64));
            if (j - i) % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
        // For the left side, f(t) = P(-t) e^{t}: derivative j picks up (-1)^j.
        let v = rat_to_f64(&acc) * self.scale;
        if sgn < 0 && j % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `t -> f(-t)`.
    pub fn mirror(&self) -> Self {
        Self::new(self.neg.clone(), self.pos.clone(), self.scale)
    }

    /// Exact coefficientwise equality after folding the scale in.
    pub fn same_as(&self, other: &Self) -> bool {
        if self.scale == other.scale {
            return self.pos == other.pos && self.neg == other.neg;
        }
        let r = self.scale / other.scale;
        let Some(r) = BigRational::from_float(r) else { return false };
        self.pos.scale(&r) == other.pos && self.neg.scale(&r) == other.neg
    }

    /// Linear combination over a common scale.
    pub fn combine(&self, a: &BigRational, other: &Self, b: &BigRational) -> Result<Self> {
        if self.scale != other.scale && !self.is_zero() && !other.is_zero() {
            return Err(Error::Domain("cannot combine exp-polys with different scales".into()));
        }
        let scale = if self.is_zero() { other.scale } else { self.scale };
        Ok(Self::new(
            self.pos.scale(a).add(&other.pos.scale(b)),
            self.neg.scale(a).add(&other.neg.scale(b)),
            scale,
        ))
    }

    /// Multiply by `t` (on the left half the polynomial is in `s = -t`, so it flips sign).
    pub fn mul_t(&self) -> Self {
        Self::new(self.pos.mul_x(), self.neg.mul_x().scale(&rat_int(-1)), self.scale)
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        Self::new(self.pos.scale(c), self.neg.scale(c), self.scale)
    }

    /// `int_R f(t) g(t) dt`, exactly on coefficients then scaled.
    pub fn integrate_product(&self, other: &Self) -> f64 {
        let half = |a: &RationalPoly, b: &RationalPoly| -> BigRational {
            // int_0^inf x^k e^{-2x} dx = k! / 2^{k+1}
            let prod = a.mul(b);
            let mut acc = BigRational::zero();
            for (k, c) in prod.coeffs().iter().enumerate() {
                let m = BigRational::new(factorial(k as u32), BigInt::one() << (k + 1));
                acc += c * m;
            }
            acc
        };
        let v = half(&self.pos, &other.pos) + half(&self.neg, &other.neg);
        rat_to_f64(&v) * self.scale * other.scale
    }
}

/// Coefficients on `delta, delta', ..., delta^(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracJet {
    exact: Vec<BigRational>,
    scale: f64,
}

impl DiracJet {
    pub fn new(exact: Vec<BigRational>, scale: f64) -> Self {
        let mut exact = exact;
        while exact.last().is_some_and(|c| c.is_zero()) {
            exact.pop();
        }
        DiracJet { exact, scale }
    }
    pub fn empty() -> Self {
        DiracJet { exact: Vec::new(), scale: 1.0 }
    }
    pub fn exact(&self) -> &[BigRational] {
        &self.exact
    }
    pub fn d(&self) -> Vec<f64> {
        self.exact.iter().map(|c| rat_to_f64(c) * self.scale).collect()
    }
    pub fn len(&self) -> usize {
        self.exact.len()
    }
    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }
    /// `sum_j d_j (-1)^j X^(j)(0)` given the jet of X at 0.
    pub fn apply(&self, jet: &[f64]) -> Result<f64> {
        if jet.len() < self.len() {
            return Err(Error::MissingDerivative {
                order: jet.len(),
                reason: format!("dirac jet of length {} needs derivatives up to order {}", self.len(), self.len() - 1),
            });
        }
        Ok(self.d().iter().enumerate().map(|(j, d)| if j % 2 == 1 { -d * jet[j] } else { d * jet[j] }).sum())
    }
}

/// Dual basis element: smooth exp-poly part plus a Dirac jet at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunction {
    pub smooth: PiecewiseExpPoly,
    pub jet: DiracJet,
    idx: BasisIndex,
}

impl DualFunction {
    pub fn index(&self) -> BasisIndex {
        self.idx
    }

    /// Smooth part, evaluated stably (Laguerre recurrence for one-sided indices).
    pub fn smooth_value(&self, t: f64) -> f64 {
        dual_smooth_value(self.idx, t).unwrap_or_else(|| self.smooth.value(t))
    }
}

/// Inverse Fourier transform of `a^{-pa} b^{-pb}`: exp-poly part and jet.
pub fn inverse_ft(pa: i64, pb: i64) -> (RationalPoly, RationalPoly, Vec<BigRational>) {
    let two = rat_int(2);
    // a^{-k} <-> t^{k-1} e^{-t} H(t) / (k-1)!, and likewise for b on t < 0 in s = -t.
    let exp_term = |k: i64, c: &BigRational| -> RationalPoly {
        RationalPoly::monomial(c / BigRational::from_integer(factorial(k as u32 - 1)), k as usize - 1)
    };
    let mut pos = RationalPoly::zero();
    let mut neg = RationalPoly::zero();
    let mut jet: Vec<BigRational> = Vec::new();
    let mut add_jet = |i: usize, c: BigRational| {
        if jet.len() <= i {
            jet.resize(i + 1, BigRational::zero());
        }
        jet[i] += c;
    };
    if pa > 0 && pb > 0 {
        for k in 1..=pa {
            let c = BigRational::new(binomial(pa + pb - k - 1, pb - 1), BigInt::one() << (pa + pb - k));
            pos = pos.add(&exp_term(k, &c));
        }
        for k in 1..=pb {
            let c = BigRational::new(binomial(pa + pb - k - 1, pa - 1), BigInt::one() << (pa + pb - k));
            neg = neg.add(&exp_term(k, &c));
        }
    } else if pa > 0 || pb > 0 {
        // One exponent positive: rewrite the other factor as (2 - .)^m.
        let (pexp, m, is_a) = if pa > 0 { (pa, -pb, true) } else { (pb, -pa, false) };
        for j in 0..=m {
            let c = BigRational::from_integer(binomial(m, j)) * two.pow((m - j) as i32) * rat_int(if j % 2 == 1 { -1 } else { 1 });
            let e = pexp - j;
            if e > 0 {
                let term = exp_term(e, &c);
                if is_a {
                    pos = pos.add(&term);
                } else {
                    neg = neg.add(&term);
                }
            } else {
                // (1 +- iw)^r = sum_i C(r,i) (+-1)^i (iw)^i <-> delta^(i)
                let r = -e;
                for i in 0..=r {
                    let sign = if !is_a && i % 2 == 1 { -1 } else { 1 };
                    add_jet(i as usize, &c * BigRational::from_integer(binomial(r, i)) * rat_int(sign));
                }
            }
        }
    } else {
        let (m1, m2) = (-pa, -pb);
        for i in 0..=m1 {
            for j in 0..=m2 {
                let sign = if j % 2 == 1 { -1 } else { 1 };
                add_jet((i + j) as usize, BigRational::from_integer(binomial(m1, i) * binomial(m2, j)) * rat_int(sign));
            }
        }
    }
    (pos, neg, jet)
}

fn gamma_cache() -> &'static RwLock<HashMap<BasisIndex, Arc<PiecewiseExpPoly>>> {
    static C: OnceLock<RwLock<HashMap<BasisIndex, Arc<PiecewiseExpPoly>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn dual_cache() -> &'static RwLock<HashMap<BasisIndex, Arc<DualFunction>>> {
    static C: OnceLock<RwLock<HashMap<BasisIndex, Arc<DualFunction>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `gamma_n` with exact coefficients (memoized).
pub fn gamma(idx: BasisIndex) -> Arc<PiecewiseExpPoly> {
    if let Some(g) = gamma_cache().read().expect("cache lock").get(&idx) {
        return g.clone();
    }
    let g = Arc::new(build_gamma(idx));
    gamma_cache().write().expect("cache lock").entry(idx).or_insert(g).clone()
}

fn build_gamma(idx: BasisIndex) -> PiecewiseExpPoly {
    let (pos, neg, jet) = inverse_ft(idx.p(), idx.q());
    assert!(jet.is_empty(), "gamma_n has no singular part for alpha >= 0");
    let g = PiecewiseExpPoly::new(pos, neg, INV_SQRT_PI);
    // The two printed t > 0 forms must agree with each other and with the construction.
    if !idx.is_minus() {
        let (f1, f2) = printed_forms(idx);
        assert_eq!(f1, f2, "printed forms disagree at {idx:?}");
        assert_eq!(f1, g.pos, "printed form disagrees with construction at {idx:?}");
    }
    g
}

/// The two printed t > 0 polynomial forms (alternating binomial, and the
/// `alpha-1-k` binomial), in the common scale `1/sqrt(pi)`.
pub fn printed_forms(idx: BasisIndex) -> (RationalPoly, RationalPoly) {
    let alpha = idx.alpha() as i64;
    let top = idx.p() - 1; // n + (alpha-1)/2
    let norm = BigRational::new(BigInt::one(), BigInt::one() << alpha);
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    let mq = rat_int(-idx.q());
    for k in 0..=top {
        let pw = BigRational::new(BigInt::one() << k, factorial(k as u32)) * &norm;
        let mut c1 = gen_binomial(&mq, (top - k) as u32) * &pw;
        if (top - k) % 2 == 1 {
            c1 = -c1;
        }
        f1.push(c1);
        f2.push(gen_binomial(&rat_int(alpha - 1 - k), (top - k) as u32) * pw);
    }
    (RationalPoly::new(f1), RationalPoly::new(f2))
}

/// `gamma~_n` (memoized).
pub fn gamma_dual(idx: BasisIndex) -> Arc<DualFunction> {
    if let Some(g) = dual_cache().read().expect("cache lock").get(&idx) {
        return g.clone();
    }
    let a = idx.alpha() as i64;
    let (pos, neg, jet) = inverse_ft(idx.p() - a, idx.q() - a);
    let d = Arc::new(DualFunction {
        smooth: PiecewiseExpPoly::new(pos, neg, INV_SQRT_PI),
        jet: DiracJet::new(jet, INV_SQRT_PI),
        idx,
    });
    dual_cache().write().expect("cache lock").entry(idx).or_insert(d).clone()
}

/// Stable evaluation of `gamma_n(t)`: Laguerre recurrence on one-sided
/// indices, exact Horner on the center ones.
pub fn gamma_value(idx: BasisIndex, t: f64) -> f64 {
    match idx.laguerre_degree() {
        None => gamma(idx).value(t),
        Some(k) => {
            let s = if idx.is_plus() { t } else { -t };
            if !(0.0..=EXP_CUTOFF).contains(&s) {
                return 0.0;
            }
            let a = idx.alpha();
            let lag = laguerre(k, a as f64, 2.0 * s);
            let h = if s == 0.0 { 0.5 } else { 1.0 };
            h * sign(k) * s.powi(a as i32) * (-s).exp() * ratio_fact(k, a) * lag * INV_SQRT_PI
        }
    }
}

fn sign(k: u32) -> f64 {
    if k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `k! / (k+a)!` in floating point.
fn ratio_fact(k: u32, a: u32) -> f64 {
    (1..=a).fold(1.0, |acc, i| acc / (k + i) as f64)
}

/// Stable smooth part of the dual for one-sided indices:
/// `(-1)^k 2^alpha / sqrt(pi) * L_k^(alpha)(2|t|) e^{-|t|}` on the matching half-line.
fn dual_smooth_value(idx: BasisIndex, t: f64) -> Option<f64> {
    let k = idx.laguerre_degree()?;
    let s = if idx.is_plus() { t } else { -t };
    if !(0.0..=EXP_CUTOFF).contains(&s) {
        return Some(0.0);
    }
    let h = if s == 0.0 { 0.5 } else { 1.0 };
    let a = idx.alpha();
    Some(h * sign(k) * 2f64.powi(a as i32) * INV_SQRT_PI * laguerre(k, a as f64, 2.0 * s) * (-s).exp())
}

/// Values of `gamma_n` for one side's indices `k = 0..count` (n = (alpha+1)/2 + k)
/// at time `t >= 0`, via the Laguerre recurrence; mirror for the minus side.
pub fn plus_gammas_at(alpha: u32, count: usize, t: f64) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if !(0.0..=EXP_CUTOFF).contains(&t) {
        return vec![0.0; count];
    }
    let lags = laguerre_all(count as u32 - 1, alpha as f64, 2.0 * t);
    let h = if t == 0.0 { 0.5 } else { 1.0 };
    let base = h * t.powi(alpha as i32) * (-t).exp() * INV_SQRT_PI;
    lags.iter()
        .enumerate()
        .map(|(k, l)| base * sign(k as u32) * ratio_fact(k as u32, alpha) * l)
        .collect()
}

/// Smooth parts of the plus-side duals for `k = 0..count` at `t >= 0`.
pub fn plus_dual_smooth_at(alpha: u32, count: usize, t: f64) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if !(0.0..=EXP_CUTOFF).contains(&t) {
        return vec![0.0; count];
    }
    let lags = laguerre_all(count as u32 - 1, alpha as f64, 2.0 * t);
    let h = if t == 0.0 { 0.5 } else { 1.0 };
    let base = h * 2f64.powi(alpha as i32) * INV_SQRT_PI * (-t).exp();
    lags.iter().enumerate().map(|(k, l)| base * sign(k as u32) * l).collect()
}

/// Kernel `w_{p,q}(t)`, the inverse transform of `a^{-p} b^{-q}` for integer p.
pub fn w_pq(p: i64, q: f64, t: f64) -> Result<f64> {
    if p as f64 + q < 1.0 {
        return Err(Error::Domain(format!("w_pq needs p + q >= 1, got p={p}, q={q}")));
    }
    if t > 0.0 {
        if p <= 0 {
            return Ok(0.0);
        }
        // 2 e^{-t} / 2^{p+q} sum_{k<p} (-1)^{p-1-k} C(-q, p-1-k) (2t)^k / k!
        let mut acc = 0.0;
        let mut pw = 1.0;
        for k in 0..p {
            let j = (p - 1 - k) as u32;
            let c = crate::specfun::gen_binomial_f64(-q, j) * if j % 2 == 1 { -1.0 } else { 1.0 };
            acc += c * pw;
            pw *= 2.0 * t / (k + 1) as f64;
        }
        return Ok(2.0 * (-t).exp() / 2f64.powf(p as f64 + q) * acc);
    }
    let q_int = q.fract() == 0.0;
    if t < 0.0 {
        if q_int && q <= 0.0 {
            return Ok(0.0);
        }
        if q_int {
            return w_pq(q as i64, p as f64, -t);
        }
        return Err(Error::Domain("w_pq for t < 0 requires integer q".into()));
    }
    // t = 0: average of the one-sided limits.
    let right = w_pq(p, q, f64::MIN_POSITIVE)?;
    let left = if q_int && q > 0.0 { w_pq(q as i64, p as f64, f64::MIN_POSITIVE)? } else { 0.0 };
    Ok(0.5 * (right + left))
}

/// `gamma_{n+1}` from `gamma_{n-1}` and `gamma_n`, exactly:
/// `-[2(n - t) gamma_n + (n - (alpha+1)/2) gamma_{n-1}] / ((alpha+1)/2 + n)`.
pub fn recursion_next(prev: &PiecewiseExpPoly, cur: &PiecewiseExpPoly, idx: BasisIndex) -> Result<PiecewiseExpPoly> {
    let a = idx.alpha() as i64;
    let denom = rat(a + 1 + idx.twice_n(), 2);
    if denom.is_zero() {
        return Err(Error::SingularRecursion(idx.n()));
    }
    let n = rat(idx.twice_n(), 2);
    let lower = rat(idx.twice_n() - a - 1, 2);
    let two = rat_int(2);
    // 2 n gamma_n - 2 t gamma_n + lower gamma_{n-1}
    let a1 = cur.combine(&(&two * &n), &cur.mul_t(), &-two)?;
    let total = a1.combine(&BigRational::one(), prev, &lower)?;
    Ok(total.scaled(&(-BigRational::one() / denom)))
}

/// True iff `gamma_{-n}(t) = gamma_n(-t)` holds exactly on coefficients.
pub fn symmetry_check(idx: BasisIndex) -> bool {
    gamma(idx.mirror()).same_as(&gamma(idx).mirror())
}

/// Center interpolant `Y_j = (t^j/j!) e^{-|t|} sum_{k=0}^{alpha-1-j} |t|^k/k!`.
pub fn y_function(alpha: u32, j: u32) -> Result<PiecewiseExpPoly> {
    if alpha == 0 || j >= alpha {
        return Err(Error::Index(format!("Y_j needs 0 <= j < alpha, got alpha={alpha}, j={j}")));
    }
    let upper = alpha - 1 - j;
    let sum = RationalPoly::new(
        (0..=upper).map(|k| BigRational::new(BigInt::one(), factorial(k))).collect(),
    );
    let lead = BigRational::new(BigInt::one(), factorial(j));
    let pos = sum.mul(&RationalPoly::monomial(lead.clone(), j as usize));
    // On t < 0 the polynomial is in s = -t: t^j = (-1)^j s^j.
    let neg_lead = if j % 2 == 1 { -lead } else { lead };
    let neg = sum.mul(&RationalPoly::monomial(neg_lead, j as usize));
    Ok(PiecewiseExpPoly::new(pos, neg, 1.0))
}

/// `S_k = sum_{j=k}^{alpha-1} (-2)^{-j} C(n+(alpha-1)/2, alpha-1-j) C(j,k)` for
/// one-sided `idx` (with `|n|`).
pub fn center_sum(idx: BasisIndex, k: u32) -> BigRational {
    let a = idx.alpha() as i64;
    let top = rat(idx.twice_n().abs() + a - 1, 2);
    let mut acc = BigRational::zero();
    for j in k as i64..a {
        let pw = BigRational::new(BigInt::one(), BigInt::one() << j) * rat_int(if j % 2 == 1 { -1 } else { 1 });
        acc += pw * gen_binomial(&top, (a - 1 - j) as u32) * BigRational::from_integer(binomial(j, k as i64));
    }
    acc
}

/// Right side of the center/half-line identity
/// `int_0^inf Y_k L_{|n|-(alpha+1)/2}^(alpha)(2t) e^{-t} dt` (plus side) and
/// its mirror: `(1/2) (-+1)^k S_k`.
pub fn center_identity_rhs(idx: BasisIndex, k: u32) -> f64 {
    let s = rat_to_f64(&center_sum(idx, k)) * 0.5;
    if idx.is_plus() && k % 2 == 1 {
        -s
    } else {
        s
    }
}

/// `pair(dual, X) = int X smooth + sum_j d_j (-1)^j X^(j)(0)`.
pub fn pair(dual: &DualFunction, x: &Signal) -> Result<f64> {
    let jet = if dual.jet.is_empty() { Vec::new() } else { x.jet_at_zero(dual.jet.len() - 1).map_err(to_missing)? };
    let singular = dual.jet.apply(&jet)?;
    Ok(pair_smooth(dual, x)? + singular)
}

fn to_missing(e: Error) -> Error {
    match e {
        Error::NonDifferentiable { signal, order } => {
            Error::MissingDerivative { order, reason: format!("{signal} is not differentiable at 0") }
        }
        other => other,
    }
}

/// Smooth part of the pairing by adaptive quadrature over the exponential support.
pub fn pair_smooth(dual: &DualFunction, x: &Signal) -> Result<f64> {
    if dual.smooth.is_zero() {
        return Ok(0.0);
    }
    let opts = QuadOpts { abs_tol: 1e-13, rel_tol: 1e-11, max_segments: 20000 };
    let (lo, hi) = x.support();
    let mut total = 0.0;
    let sides: [(bool, f64); 2] = [(true, 1.0), (false, -1.0)];
    for (is_pos, sgn) in sides {
        let poly = if is_pos { dual.smooth.pos() } else { dual.smooth.neg() };
        if poly.is_zero() {
            continue;
        }
        // Range of s = sgn * t within the support.
        let (a, b) = if is_pos { (lo.max(0.0), hi) } else { ((-hi).max(0.0), -lo) };
        if !(b > a) {
            continue;
        }
        let f = |s: f64| x.value(sgn * s) * dual.smooth_value(sgn * s);
        let mut start = a;
        let mut chunk = 2.0;
        let mut side_total = 0.0;
        let mut breaks = x.breakpoints();
        breaks.retain(|&bp| sgn * bp > a && sgn * bp < b);
        while start < b {
            let end = if b.is_finite() { (start + chunk).min(b) } else { start + chunk };
            let mut knots = vec![start];
            knots.extend(breaks.iter().map(|bp| sgn * bp).filter(|&s| s > start && s < end));
            knots.push(end);
            knots.sort_by(f64::total_cmp);
            let mut piece = 0.0;
            for w in knots.windows(2) {
                piece += integrate(f, w[0], w[1], opts)?.0;
            }
            side_total += piece;
            // Exponential tail bound: e^{-s} times polynomial size.
            let bound = (-end).exp() * (1.0 + end).powi(poly.degree().unwrap_or(0) as i32 + 2) * dual.smooth.pos().max_abs_coeff().max(dual.smooth.neg().max_abs_coeff()) * x.sup_bound();
            start = end;
            chunk *= 1.5;
            if end > 40.0 && (bound < 1e-16 * side_total.abs() || bound < 1e-300 || end > EXP_CUTOFF) {
                break;
            }
        }
        total += side_total;
    }
    Ok(total)
}

/// Exact pairing against an exp-poly: `int f smooth + jet terms`, with
/// derivatives at 0 taken as the average of both one-sided values.
pub fn pair_exp_poly(dual: &DualFunction, f: &PiecewiseExpPoly) -> f64 {
    let smooth = dual.smooth.integrate_product(f);
    let jet: Vec<f64> = (0..dual.jet.len())
        .map(|j| 0.5 * (f.derivative_at_zero(j, 1) + f.derivative_at_zero(j, -1)))
        .collect();
    smooth + dual.jet.apply(&jet).expect("jet supplied in full")
}

/// `2 pi pair(gamma~_m, gamma_n)`.
pub fn biorthogonality(m: BasisIndex, n: BasisIndex) -> f64 {
    2.0 * PI * pair_exp_poly(&gamma_dual(m), &gamma(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(a: i64, n: f64) -> BasisIndex {
        BasisIndex::new(a, n).unwrap()
    }

    /// Rational evaluation of the polynomial part, free of cancellation.
    fn exact_value(f: &PiecewiseExpPoly, t: f64) -> f64 {
        let (poly, s) = if t >= 0.0 { (f.pos(), t) } else { (f.neg(), -t) };
        let v = rat_to_f64(&poly.eval(&BigRational::from_float(s).unwrap())) * (-s).exp() * f.scale();
        if t == 0.0 {
            0.5 * f.scale() * (rat_to_f64(&f.pos().coeff(0)) + rat_to_f64(&f.neg().coeff(0)))
        } else {
            v
        }
    }

    #[test]
    fn lattice() {
        assert!(BasisIndex::new(0, 0.0).is_err());
        assert!(BasisIndex::new(0, 0.5).is_ok());
        assert!(BasisIndex::new(1, 0.5).is_err());
        assert!(BasisIndex::new(-1, 0.0).is_err());
        assert!(BasisIndex::new(4, 52.5).is_ok());
        let i = idx(1, 0.0);
        assert!(i.is_center() && !i.is_plus() && !i.is_minus());
        assert!(idx(1, 1.0).is_plus() && idx(1, -1.0).is_minus());
        assert!(idx(0, 0.5).is_plus());
        match BasisIndex::new(0, 0.0) {
            Err(Error::Index(msg)) => assert!(msg.contains("half-integer")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(idx(0, 0.5));
        assert!((g.value(1.0) - 0.207_553_7).abs() < 1e-7);
        assert_eq!(g.value(-1.0), 0.0);
        assert!((gamma(idx(1, 0.0)).value(0.0) - 0.282_094_8).abs() < 1e-7);
        let g = gamma(idx(0, 1.5));
        for &t in &[0.3, 1.0, 4.0] {
            assert!((g.value(t) - (2.0 * t - 1.0) * (-t).exp() * INV_SQRT_PI).abs() < 1e-15);
        }
    }

    #[test]
    fn laguerre_form_matches_exact() {
        for a in [0u32, 1, 2, 4] {
            for k in 0..25i64 {
                for side in [1i64, -1] {
                    let i = BasisIndex::plus(a, k);
                    let i = if side < 0 { i.mirror() } else { i };
                    let g = gamma(i);
                    for &t in &[0.0, 0.2, 1.5, 3.0, 7.0] {
                        let t = t * side as f64;
                        let e = exact_value(&g, t);
                        let s = gamma_value(i, t);
                        assert!((e - s).abs() < 1e-9, "a={a} k={k} t={t} exact={e} stable={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let d0 = gamma_dual(idx(1, 0.0));
        assert!(d0.smooth.is_zero());
        assert_eq!(d0.jet.exact(), &[rat_int(1)]);
        let d1 = gamma_dual(idx(1, 1.0));
        assert_eq!(d1.smooth.pos(), &RationalPoly::from_i64(&[2]));
        assert!(d1.smooth.neg().is_zero());
        assert_eq!(d1.jet.exact(), &[rat_int(-1)]);
        let d = gamma_dual(idx(0, 0.5));
        assert!(d.jet.is_empty());
        assert!(d.smooth.same_as(&gamma(idx(0, 0.5))));
        // alpha = 2, n = 3/2: (4 e^{-t} H - 3 delta + delta') / sqrt(pi)
        let d = gamma_dual(idx(2, 1.5));
        assert_eq!(d.smooth.pos(), &RationalPoly::from_i64(&[4]));
        assert_eq!(d.jet.exact(), &[rat_int(-3), rat_int(1)]);
    }

    #[test]
    fn dual_laguerre_form_matches_exact() {
        for a in [0u32, 1, 2, 4] {
            for k in 0..20i64 {
                let i = BasisIndex::plus(a, k);
                let d = gamma_dual(i);
                for &t in &[0.1, 1.0, 2.5, 6.0] {
                    let e = exact_value(&d.smooth, t);
                    let s = d.smooth_value(t);
                    assert!((e - s).abs() < 1e-9 * e.abs().max(1.0), "a={a} k={k} t={t}");
                    let m = gamma_dual(i.mirror());
                    assert!((m.smooth_value(-t) - s).abs() < 1e-9 * s.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn dual_jet_matches_center_sum() {
        // d_k = -(1/2) c_n S_k on the plus side, (-1)^k times that on the minus side,
        // with c_n = (-1)^k 2^alpha / sqrt(pi).
        for a in [1u32, 2, 3, 4] {
            for k in 0..12i64 {
                let i = BasisIndex::plus(a, k);
                let cn = sign(k as u32) * 2f64.powi(a as i32) * INV_SQRT_PI;
                let d = gamma_dual(i).jet.d();
                let dm = gamma_dual(i.mirror()).jet.d();
                for j in 0..a as usize {
                    let want = -0.5 * cn * rat_to_f64(&center_sum(i, j as u32));
                    let got = d.get(j).copied().unwrap_or(0.0);
                    assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "a={a} k={k} j={j}");
                    let gm = dm.get(j).copied().unwrap_or(0.0);
                    assert!((gm - sign(j as u32) * want).abs() < 1e-12 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn center_identity_by_quadrature() {
        use crate::quad::{integrate_pieces, QuadOpts};
        use crate::specfun::laguerre;
        for a in [1u32, 2, 3] {
            for k in 0..6i64 {
                for i in [BasisIndex::plus(a, k), BasisIndex::plus(a, k).mirror()] {
                    let d = i.laguerre_degree().unwrap();
                    let sg = if i.is_plus() { 1.0 } else { -1.0 };
                    let mut knots: Vec<f64> = (0..=12).map(|m| sg * 5.0 * m as f64).collect();
                    knots.sort_by(f64::total_cmp);
                    for j in 0..a {
                        let y = y_function(a, j).unwrap();
                        let f = |t: f64| y.value(t) * laguerre(d, a as f64, 2.0 * t.abs()) * (-t.abs()).exp();
                        let v = integrate_pieces(f, &knots, QuadOpts::default()).unwrap();
                        assert!((v - center_identity_rhs(i, j)).abs() < 1e-10, "a={a} n={} j={j} {v}", i.n());
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        assert!((biorthogonality(idx(1, 1.0), idx(1, 1.0)) - 1.0).abs() < 1e-14);
        assert!(biorthogonality(idx(1, 1.0), idx(1, 0.0)).abs() < 1e-14);
        let d0 = gamma_dual(idx(1, 0.0));
        let f = gamma(idx(1, 0.0));
        assert!((pair_exp_poly(&d0, &f) - f.value(0.0) * INV_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn biorthogonal_small_range() {
        for a in [0u32, 1, 2, 4] {
            let lo = -(7 + a as i64);
            for km in lo..=6 {
                for kn in lo..=6 {
                    let m = BasisIndex::plus(a, km);
                    let n = BasisIndex::plus(a, kn);
                    let v = biorthogonality(m, n);
                    let want = if km == kn { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-10, "a={a} m={} n={} v={v}", m.n(), n.n());
                }
            }
        }
    }

    #[test]
    fn w_pq_examples() {
        assert!((w_pq(1, 0.0, 2.0).unwrap() - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(w_pq(0, 1.0, 3.0).unwrap(), 0.0);
        assert!((w_pq(1, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(w_pq(0, 0.0, 1.0), Err(Error::Domain(_))));
        assert_eq!(w_pq(2, -1.0, -1.0).unwrap(), 0.0);
        assert!((w_pq(1, 1.0, -2.0).unwrap() - 0.5 * (-2f64).exp()).abs() < 1e-15);
        // Agrees with the exact construction for integer p, q.
        for (p, q) in [(3i64, 2i64), (1, 4), (5, -2), (2, 2)] {
            let (pos, neg, jet) = inverse_ft(p, q);
            assert!(jet.is_empty());
            let e = PiecewiseExpPoly::new(pos, neg, 1.0);
            for &t in &[-2.0, -0.5, 0.7, 3.0] {
                assert!((w_pq(p, q as f64, t).unwrap() - e.value(t)).abs() < 1e-13, "p={p} q={q} t={t}");
            }
        }
    }

    #[test]
    fn recursion_examples() {
        let g12 = gamma(idx(0, 0.5));
        let zero = PiecewiseExpPoly::new(RationalPoly::zero(), RationalPoly::zero(), INV_SQRT_PI);
        let g32 = recursion_next(&zero, &g12, idx(0, 0.5)).unwrap();
        assert_eq!(g32.pos(), &RationalPoly::from_i64(&[-1, 2]));
        assert!(g32.same_as(&gamma(idx(0, 1.5))));
        let g = gamma(idx(1, -1.0));
        assert!(matches!(recursion_next(&g, &g, idx(1, -1.0)), Err(Error::SingularRecursion(_))));
    }

    #[test]
    fn symmetry_examples() {
        assert!(symmetry_check(idx(0, 0.5)));
        assert!(symmetry_check(idx(1, 0.0)));
        assert!(symmetry_check(idx(4, 10.5)));
        assert!(symmetry_check(idx(3, 1.0)));
    }

    #[test]
    fn y_examples() {
        assert!(y_function(1, 1).is_err());
        assert!(y_function(0, 0).is_err());
        let y0 = y_function(1, 0).unwrap();
        assert_eq!(y0.value(0.0), 1.0);
        assert!((y0.value(-2.0) - (-2f64).exp()).abs() < 1e-16);
        let y = y_function(2, 0).unwrap();
        assert!((y.value(1.5) - (-1.5f64).exp() * 2.5).abs() < 1e-15);
        let y1 = y_function(2, 1).unwrap();
        assert!((y1.value(-1.5) + 1.5 * (-1.5f64).exp()).abs() < 1e-15);
        // Y_k annihilated by every one-sided dual.
        for a in 1..=4u32 {
            for j in 0..a {
                let y = y_function(a, j).unwrap();
                for k in 0..8 {
                    let i = BasisIndex::plus(a, k);
                    assert!(pair_exp_poly(&gamma_dual(i), &y).abs() < 1e-13);
                    assert!(pair_exp_poly(&gamma_dual(i.mirror()), &y).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn y_derivatives_exact() {
        for a in 1..=5u32 {
            for k in 0..a {
                let y = y_function(a, k).unwrap();
                for j in 0..a as usize {
                    let want = if j == k as usize { 1.0 } else { 0.0 };
                    assert!((y.derivative_at_zero(j, 1) - want).abs() < 1e-14);
                    assert!((y.derivative_at_zero(j, -1) - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn derivative_at_zero_left() {
        // f(t) = t e^{t} on t < 0 written as P(s) = -s; f'(0-) = 1.
        let f = PiecewiseExpPoly::new(RationalPoly::zero(), RationalPoly::from_i64(&[0, -1]), 1.0);
        assert!((f.derivative_at_zero(1, -1) - 1.0).abs() < 1e-15);
        assert!((f.derivative_at_zero(2, -1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn memo_is_shared() {
        let a = gamma(idx(2, 7.5));
        let b = gamma(idx(2, 7.5));
        assert!(Arc::ptr_eq(&a, &b));
    }
}
