//! Polynomial families of the confluent equation `x y'' + (m+1-x) y' + n̄ y = 0`,
//! all built in the scaled variable `x = 2κr`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ratpoly::{factorial, pochhammer, rat_int, BigRational, RatPoly};

/// Associated Laguerre polynomial `L_{n_r}^m(x)` from its explicit finite sum:
/// the coefficient of `x^j` is `(-1)^j (n_r+m)! / ((n_r-j)! (m+j)! j!)`.
pub fn laguerre_l1(n_r: u32, m: u32) -> RatPoly {
    let top = factorial(n_r + m);
    let coeffs = (0..=n_r)
        .map(|j| {
            let den = factorial(n_r - j) * factorial(m + j) * factorial(j);
            let c = BigRational::new(top.clone(), den);
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    RatPoly::from_coeffs(0, coeffs)
}

/// Terminating Kummer series `₁F₁(-n_r; m+1; x) = Σ_k (-n_r)_k / ((m+1)_k k!) x^k`.
pub fn hyp1f1_terminating(n_r: u32, m: u32) -> RatPoly {
    let coeffs = (0..=n_r)
        .map(|k| hyp1f1_coeff(n_r, m, k))
        .collect();
    RatPoly::from_coeffs(0, coeffs)
}

fn hyp1f1_coeff(n_r: u32, m: u32, k: u32) -> BigRational {
    BigRational::new(
        pochhammer(-(n_r as i64), k),
        pochhammer(m as i64 + 1, k) * factorial(k),
    )
}

/// `P₂(n̄, m, x)` from the double sum
/// `(n̄+m)!/m! Σ_{k=0}^{n̄} Σ_{j=0}^{m+k-1} (-n̄)_k (m+k-1-j)! / ((m+1)_k k!) x^j`.
///
/// Degree `n̄ + m - 1`, leading coefficient `(-1)^n̄`, integer coefficients.
pub fn p2_doublesum(n_bar: u32, m: u32) -> RatPoly {
    assert!(m >= 1, "P2 needs m >= 1");
    let len = (n_bar + m) as usize;
    let mut acc = vec![BigRational::zero(); len];
    for k in 0..=n_bar {
        let ck = hyp1f1_coeff(n_bar, m, k);
        if ck.is_zero() {
            continue;
        }
        let top = m + k - 1;
        for j in 0..=top {
            acc[j as usize] += &ck * rat_int(factorial(top - j));
        }
    }
    let prefactor = BigRational::new(factorial(n_bar + m), factorial(m));
    RatPoly::from_coeffs(0, acc).scale(&prefactor)
}

/// `P₂(n̄, m, x)` in its split form: a positive part up to `x^(m-1)` minus
/// `x^m` times a sign-alternating part whose coefficients carry harmonic
/// tails `Σ 1/k` and products `Π_{j=1}^{p} (n̄+m+j-k)`.
///
/// For `n̄ = 0` the second part is an empty sum.
pub fn p2_simplified(n_bar: u32, m: u32) -> RatPoly {
    assert!(m >= 1, "P2 needs m >= 1");
    let positive = (0..m).map(|p| {
        let c = factorial(n_bar + p) * factorial(m - p - 1);
        (p as i64, BigRational::new(c, factorial(p)))
    });
    let positive = RatPoly::from_terms(positive);

    let nm = (n_bar + m) as i64;
    // Σ_{k=lo}^{n̄+m} (1/k) Π_{j=1}^{p} (n̄+m+j-k); empty when lo > n̄+m.
    let tail = |lo: i64, p: u32| -> BigRational {
        (lo..=nm)
            .map(|k| {
                let prod: BigInt = (1..=p as i64).map(|j| BigInt::from(nm + j - k)).product();
                BigRational::new(prod, BigInt::from(k))
            })
            .fold(BigRational::zero(), |a, b| a + b)
    };

    let m_fact = factorial(m);
    let mut bracket = vec![(0i64, tail(m as i64 + 1, 0))];
    for p in 1..n_bar {
        let sign = if p % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        let c = BigRational::new(m_fact.clone(), factorial(m + p) * factorial(p));
        bracket.push((p as i64, sign * c * tail((m + p) as i64 + 1, p)));
    }
    let prefactor = BigRational::new(factorial(n_bar + m), m_fact);
    let oscillating = RatPoly::from_terms(bracket)
        .shift(m as i64)
        .scale(&prefactor);

    &positive - &oscillating
}
