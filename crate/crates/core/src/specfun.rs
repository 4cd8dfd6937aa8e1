//! Generalized binomials, Laguerre polynomials and exact rational polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Shorthand for an exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: divide after scaling both down.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let nf = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let df = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        nf / df
    })
}

/// `u(u-1)...(u-j+1)/j!`, exactly.
pub fn gen_binomial(u: &BigRational, j: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc *= u - rat_int(i as i64);
        acc /= rat_int(i as i64 + 1);
    }
    acc
}

/// Floating-point generalized binomial.
pub fn gen_binomial_f64(u: f64, j: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (u - i as f64) / (i as f64 + 1.0);
    }
    acc
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

/// Ordinary binomial `C(n, k)` for `0 <= k <= n`, zero otherwise.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Generalized Laguerre polynomial `L_n^(alpha)(x)` by the three-term recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `L_0..=L_nmax` at `x`.
pub fn laguerre_all(nmax: u32, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..nmax as usize {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Exact coefficients of `L_n^(alpha)`: coefficient k is `(-1)^k C(n+alpha, n-k)/k!`.
pub fn laguerre_poly(n: u32, alpha: &BigRational) -> RationalPoly {
    let top = alpha + rat_int(n as i64);
    let coeffs = (0..=n)
        .map(|k| {
            let c = gen_binomial(&top, n - k) / BigRational::from_integer(factorial(k));
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    RationalPoly::new(coeffs)
}

/// Polynomial with exact rational coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPoly { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.to_f64(), x)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(BigRational::zero());
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    /// `p(c x)`.
    pub fn scale_arg(&self, c: &BigRational) -> Self {
        let mut pw = BigRational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        Self::new(v)
    }

    /// Derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * rat_int(k as i64))
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| rat_to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binomial(&rat_int(5), 2), rat_int(10));
        assert_eq!(gen_binomial(&rat_int(-3), 2), rat_int(6));
        assert_eq!(gen_binomial(&rat_int(-3), 2), gen_binomial(&rat_int(4), 2));
        assert_eq!(gen_binomial(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(gen_binomial(&rat(7, 3), 0), rat_int(1));
        assert!((gen_binomial_f64(-0.5, 2) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn negated_upper_binomial_identity_exact() {
        // C(-u, j) = (-1)^j C(u+j-1, j)
        for (n, d) in [(1, 1), (5, 2), (-7, 3), (0, 1), (13, 4)] {
            let u = rat(n, d);
            for j in 0..=30u32 {
                let lhs = gen_binomial(&-u.clone(), j);
                let mut rhs = gen_binomial(&(u.clone() + rat_int(j as i64 - 1)), j);
                if j % 2 == 1 {
                    rhs = -rhs;
                }
                assert_eq!(lhs, rhs, "u={u} j={j}");
            }
        }
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 3.7, 11.0), 1.0);
        for &(a, x) in &[(0.0, 1.5), (2.5, 0.3), (4.0, 9.0)] {
            assert!((laguerre(1, a, x) - (1.0 + a - x)).abs() < 1e-14);
        }
        assert_eq!(laguerre_poly(1, &rat_int(1)), RationalPoly::from_i64(&[2, -1]));
        assert_eq!(laguerre_poly(0, &rat_int(0)), RationalPoly::from_i64(&[1]));
        assert_eq!(
            laguerre_poly(2, &rat_int(0)),
            RationalPoly::new(vec![rat_int(1), rat_int(-2), rat(1, 2)])
        );
    }

    #[test]
    fn laguerre_all_matches_single() {
        let v = laguerre_all(25, 2.0, 7.5);
        for (n, &y) in v.iter().enumerate() {
            assert_eq!(y, laguerre(n as u32, 2.0, 7.5));
        }
    }

    #[test]
    fn laguerre_recurrence_matches_exact_sum() {
        for n in 0..=20u32 {
            for a in 0..=6i64 {
                let p = laguerre_poly(n, &rat_int(a));
                // Scale of the alternating sum, for a relative comparison near roots.
                for &x in &[0.0f64, 0.37, 1.0, 2.5, 7.25, 13.0, 26.5, 50.0] {
                    let xr = BigRational::from_float(x).unwrap();
                    let exact = rat_to_f64(&p.eval(&xr));
                    let mag: f64 = p
                        .to_f64()
                        .iter()
                        .enumerate()
                        .map(|(k, c)| (c * x.powi(k as i32)).abs())
                        .sum::<f64>()
                        .max(1.0);
                    let rec = laguerre(n, a as f64, x);
                    let scale = exact.abs().max(mag * 1e-4);
                    assert!(
                        (rec - exact).abs() <= 1e-12 * scale,
                        "n={n} a={a} x={x} rec={rec} exact={exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn poly_ops() {
        let p = RationalPoly::from_i64(&[1, 2, 3]);
        let q = RationalPoly::from_i64(&[0, -2, -3]);
        assert_eq!(p.add(&q), RationalPoly::from_i64(&[1]));
        assert_eq!(p.sub(&p), RationalPoly::zero());
        assert_eq!(p.degree(), Some(2));
        assert_eq!(RationalPoly::zero().degree(), None);
        assert_eq!(p.mul_x(), RationalPoly::from_i64(&[0, 1, 2, 3]));
        assert_eq!(p.scale_arg(&rat_int(-1)), RationalPoly::from_i64(&[1, -2, 3]));
        assert_eq!(p.derivative(), RationalPoly::from_i64(&[2, 6]));
        assert_eq!(
            p.mul(&RationalPoly::from_i64(&[1, 1])),
            RationalPoly::from_i64(&[1, 3, 5, 3])
        );
        assert_eq!(p.eval_f64(2.0), 17.0);
        assert_eq!(RationalPoly::from_i64(&[1, 0, 0]).coeffs().len(), 1);
    }

    #[test]
    fn binomial_int() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
    }

    proptest! {
        #[test]
        fn gen_binomial_matches_float(n in -40i64..40, d in 1i64..9, j in 0u32..12) {
            let exact = rat_to_f64(&gen_binomial(&rat(n, d), j));
            let approx = gen_binomial_f64(n as f64 / d as f64, j);
            prop_assert!((exact - approx).abs() <= 1e-12 * exact.abs().max(1.0));
        }

        #[test]
        fn pascal_rule(n in -30i64..30, d in 1i64..7, j in 1u32..15) {
            // C(u, j) = C(u-1, j) + C(u-1, j-1)
            let u = rat(n, d);
            let um1 = u.clone() - rat_int(1);
            prop_assert_eq!(gen_binomial(&u, j), gen_binomial(&um1, j) + gen_binomial(&um1, j - 1));
        }
    }
}
