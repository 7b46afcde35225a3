//! Exact rational arithmetic and dense Laurent polynomials over the rationals.
//!
//! [`RatPoly`] stores coefficients contiguously from its lowest power upward,
//! so `x⁻² + 3x` is `lowest = -2, coeffs = [1, 0, 0, 3]`. Every constructor
//! and operation trims zero coefficients at both ends, which keeps the
//! representation canonical: two polynomials are equal iff their fields are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Exact `k!`.
pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Rising factorial `(a)_k = a (a+1) ··· (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (a + i))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Formats a rational as `"num"` or `"num/den"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the `"num"` / `"num/den"` form written by [`format_rational`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Nearest `f64` to an exact rational, robust to numerators and denominators
/// that overflow `f64` on their own.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both parts down to 64 significant bits before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (q.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    // Two-step scaling keeps the power of two itself inside the normal range.
    let e = ns - ds;
    let half = (e / 2) as i32;
    (n / d) * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

/// Dense Laurent polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    lowest: i64,
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(0, vec![c])
    }

    /// `c · x^power`
    pub fn monomial(c: BigRational, power: i64) -> Self {
        Self::from_coeffs(power, vec![c])
    }

    /// The variable `x` itself.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// Builds a polynomial whose coefficient list starts at `x^lowest`.
    pub fn from_coeffs(lowest: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { lowest, coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(lowest: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(lowest, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// Builds a polynomial from `(power, coefficient)` pairs; repeated powers add.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(RatPoly::zero(), |acc, (k, c)| &acc + &RatPoly::monomial(c, k))
    }

    fn normalize(&mut self) {
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        match first {
            None => {
                self.coeffs.clear();
                self.lowest = 0;
            }
            Some(i) => {
                let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..i);
                self.lowest += i as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest power present, `0` for the zero polynomial.
    pub fn lowest_degree(&self) -> i64 {
        self.lowest
    }

    /// Highest power present; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lowest + self.coeffs.len() as i64 - 1)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: i64) -> BigRational {
        let idx = power - self.lowest;
        if idx < 0 {
            return BigRational::zero();
        }
        self.coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Nonzero terms as `(power, coefficient)`, lowest power first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lowest + i as i64, c))
    }

    pub fn has_negative_powers(&self) -> bool {
        !self.is_zero() && self.lowest < 0
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            lowest: self.lowest + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn derivative(&self) -> RatPoly {
        let terms = self
            .terms()
            .filter(|(k, _)| *k != 0)
            .map(|(k, c)| (k - 1, c * rat_int(k)));
        RatPoly::from_terms(terms)
    }

    /// `p(c·x)`: scales the coefficient of `x^k` by `c^k` (also for negative `k`).
    pub fn substitute_scaled(&self, c: &BigRational) -> RatPoly {
        assert!(!c.is_zero(), "substitution scale must be nonzero");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = self.lowest + i as i64;
                a * pow_rational(c, k)
            })
            .collect();
        RatPoly::from_coeffs(self.lowest, coeffs)
    }

    /// Exact evaluation. Nonnegative and negative powers are accumulated by
    /// separate Horner passes in `x` and `1/x`.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let (neg, pos) = self.split_at_zero();
        let mut acc = BigRational::zero();
        for c in pos.iter().rev() {
            acc = acc * x + c;
        }
        if !neg.is_empty() {
            if x.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let inv = x.recip();
            // neg[i] multiplies x^(lowest + i); Horner in 1/x from x^lowest upward.
            let mut tail = BigRational::zero();
            for c in neg.iter() {
                tail = tail * &inv + c;
            }
            acc += tail * &inv;
        }
        Ok(acc)
    }

    /// Coefficients of the negative powers (from `x^lowest` up to `x⁻¹`) and
    /// of the nonnegative powers (from `x⁰` up to the degree).
    fn split_at_zero(&self) -> (Vec<BigRational>, Vec<BigRational>) {
        let neg = (self.lowest..0).map(|k| self.coeff(k)).collect();
        let pos = match self.degree() {
            Some(d) if d >= 0 => (0..=d).map(|k| self.coeff(k)).collect(),
            _ => Vec::new(),
        };
        (neg, pos)
    }

    /// Float image of the coefficients, as `(power, value)`.
    pub fn to_f64_terms(&self) -> Vec<(i64, f64)> {
        self.terms().map(|(k, c)| (k, rational_to_f64(c))).collect()
    }
}

fn pow_rational(c: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { c.recip() } else { c.clone() };
    (0..k.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &base)
}

/// Floating-point image of a [`RatPoly`] for fast repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct FloatPoly {
    lowest: i64,
    coeffs: Vec<f64>,
}

impl FloatPoly {
    pub fn from_exact(p: &RatPoly) -> Self {
        FloatPoly {
            lowest: p.lowest,
            coeffs: p.coeffs.iter().map(rational_to_f64).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Returns `(p(x), Σ|c_k||x|^k)`; the second value bounds the rounding
    /// error of the first when multiplied by a few units of machine epsilon.
    pub fn eval_with_magnitude(&self, x: f64) -> (f64, f64) {
        if self.coeffs.is_empty() {
            return (0.0, 0.0);
        }
        let ax = x.abs();
        let mut val = 0.0;
        let mut mag = 0.0;
        for c in self.coeffs.iter().rev() {
            val = val * x + c;
            mag = mag * ax + c.abs();
        }
        // Everything above was accumulated as if the lowest power were x⁰.
        let factor = x.powi(self.lowest as i32);
        (val * factor, mag * factor.abs())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_magnitude(x).0
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let cs = format_rational(&mag);
            match k {
                0 => write!(f, "{cs}")?,
                1 if mag.is_one() => write!(f, "x")?,
                1 => write!(f, "{cs}*x")?,
                _ if mag.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{cs}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lowest.min(rhs.lowest);
        let hi = self.degree().unwrap().max(rhs.degree().unwrap());
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for p in [self, rhs] {
            for (i, c) in p.coeffs.iter().enumerate() {
                coeffs[(p.lowest - lo) as usize + i] += c;
            }
        }
        RatPoly::from_coeffs(lo, coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(self.lowest + rhs.lowest, coeffs)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lowest: i64, c: &[i64]) -> RatPoly {
        RatPoly::from_ints(lowest, c)
    }

    #[test]
    fn add_examples() {
        assert!((p(0, &[1, 1]) + p(0, &[-1, -1])).is_zero());
        assert_eq!(p(0, &[2, 1]) + p(2, &[3]), p(0, &[2, 1, 3]));
        let laurent = p(-1, &[1]) + p(1, &[1]);
        assert_eq!(laurent, p(-1, &[1, 0, 1]));
        assert_eq!(laurent.lowest_degree(), -1);
        assert_eq!(laurent.degree(), Some(1));
    }

    #[test]
    fn add_trims_both_ends() {
        let s = p(0, &[1, 2, 3]) + p(0, &[-1, 0, -3]);
        assert_eq!(s, p(1, &[2]));
        assert_eq!(s.coefficients().len(), 1);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p(0, &[1, -1]) * p(0, &[1, 1]), p(0, &[1, 0, -1]));
        let q = p(-2, &[3, 0, 5, 7]);
        assert_eq!(&q * &RatPoly::one(), q);
        assert_eq!(p(-1, &[1]) * p(2, &[1]), RatPoly::x());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(2, &[1]).derivative(), p(1, &[2]));
        assert_eq!(p(-1, &[1]).derivative(), p(-2, &[-1]));
        assert!(p(0, &[7]).derivative().is_zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(0, &[1, -1]).eval(&rat_int(1)).unwrap(), rat_int(0));
        assert_eq!(p(0, &[2, 1, 1]).eval(&rat_int(2)).unwrap(), rat_int(8));
        assert_eq!(p(-1, &[1]).eval(&rat(1, 2)).unwrap(), rat_int(2));
        assert_eq!(p(-1, &[1]).eval(&rat_int(0)), Err(Error::ZeroDenominator));
        // Mixed Laurent polynomial: 2/x^2 - 1/x + 3 + x at x = 2 -> 1/2 - 1/2 + 3 + 2
        assert_eq!(p(-2, &[2, -1, 3, 1]).eval(&rat_int(2)).unwrap(), rat_int(5));
        // Purely positive powers starting above zero.
        assert_eq!(p(2, &[1, 1]).eval(&rat_int(3)).unwrap(), rat_int(36));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        let mut oracle = 1u64;
        for i in 1..=20u64 {
            oracle *= i;
        }
        assert_eq!(oracle, 2432902008176640000);
        assert_eq!(factorial(20), BigInt::from(oracle));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(-3, 2), BigInt::from(6));
        assert_eq!(pochhammer(17, 0), BigInt::from(1));
        assert_eq!(pochhammer(-2, 3), BigInt::from(0));
        assert_eq!(pochhammer(1, 6), factorial(6));
    }

    #[test]
    fn substitution_scales_powers() {
        let q = p(-1, &[1, 1, 1]).substitute_scaled(&rat(2, 3));
        assert_eq!(q.coeff(-1), rat(3, 2));
        assert_eq!(q.coeff(0), rat_int(1));
        assert_eq!(q.coeff(1), rat(2, 3));
    }

    #[test]
    fn rational_strings_round_trip() {
        for q in [rat(27, 2), rat(-4, 9), rat_int(11520), rat_int(0)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert_eq!(format_rational(&rat(-1, 48)), "-1/48");
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigRational::new(factorial(200), factorial(198));
        assert!((rational_to_f64(&big) - 200.0 * 199.0).abs() < 1e-9);
        let tiny = BigRational::new(BigInt::from(3), factorial(175));
        let expected = 3.0 / (1..=170).map(|i| i as f64).product::<f64>()
            / (171..=175).map(|i| i as f64).product::<f64>();
        assert!((rational_to_f64(&tiny) / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn float_poly_matches_exact() {
        let q = p(-2, &[2, -1, 3, 1]);
        let (v, m) = FloatPoly::from_exact(&q).eval_with_magnitude(2.0);
        assert!((v - 5.0).abs() < 1e-15);
        assert!((m - 6.0).abs() < 1e-15);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(-1, &[1, -2, 0, 3]).to_string(), "x^-1 - 2 + 3*x^2");
    }
}
