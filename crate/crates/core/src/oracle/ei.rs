//! `Ei(1, -x)` straight from its defining principal-value integral, in MPFR
//! precision, with no series, continued fraction or Euler constant involved.
//!
//! Splitting `PV ∫_{-x}^∞ e^{-s}/s ds` at `|s| = x`, the symmetric part is
//! `∫_0^x (e^{-t} - e^{t})/t dt = -2 Shi(x)` and the rest is `E1(x)`, so
//! `Ei(1, -x) = E1(x) - 2 Shi(x)`. Both pieces are integrals of analytic
//! integrands and go to composite Gauss–Legendre.

use rug::Float;

use super::quad::{composite_gauss_legendre, gauss_legendre_rule};
use crate::error::{Error, Result};

const RULE_ORDER: usize = 40;

/// `Ei(1, -x)` for `x > 0` evaluated by quadrature at `prec` bits.
pub fn ei_one_neg_defining_integral(x: f64, prec: u32) -> Result<Float> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x));
    }
    let work = prec + 32;
    let rule = gauss_legendre_rule(RULE_ORDER, work);
    let xf = Float::with_val(work, x);

    // Shi(x) = ∫_0^x sinh(t)/t dt, unit panels.
    let n_shi = x.ceil().max(1.0) as usize;
    let breaks: Vec<Float> = (0..=n_shi)
        .map(|i| Float::with_val(work, &xf * i as u32) / n_shi as u32)
        .collect();
    let shi = composite_gauss_legendre(
        |t| {
            let s = Float::with_val(work, t.sinh_ref());
            s / t
        },
        &breaks,
        &rule,
        work,
    );

    // E1(x) = ∫_x^∞ e^{-w}/w dw: geometric panels while w < 1, then unit
    // panels until e^{-(w - x)} drops below the working precision.
    let w_end = x + work as f64 * std::f64::consts::LN_2 + 20.0;
    let mut breaks = vec![xf.clone()];
    let mut w = x;
    while w < 1.0 {
        w = (2.0 * w).min(1.0);
        breaks.push(Float::with_val(work, w));
    }
    while w < w_end {
        w += w.max(1.0).min(4.0);
        breaks.push(Float::with_val(work, w));
    }
    let e1 = composite_gauss_legendre(
        |w| {
            let e = Float::with_val(work, (-w.clone()).exp_ref());
            e / w
        },
        &breaks,
        &rule,
        work,
    );

    Ok(Float::with_val(prec, e1 - shi * 2u32))
}

/// Locates the zero of `Ei(1, -x)` (equivalently of `Ei`) in `[lo, hi]` by
/// bisection on the defining-integral oracle.
pub fn ei_zero_by_bisection(mut lo: f64, mut hi: f64, tol: f64, prec: u32) -> Result<f64> {
    let sign = |x: f64| -> Result<bool> { Ok(ei_one_neg_defining_integral(x, prec)?.is_sign_positive()) };
    let lo_pos = sign(lo)?;
    if lo_pos == sign(hi)? {
        return Err(Error::NoRootInRange {
            b_min: lo,
            b_max: hi,
            scanned: Vec::new(),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if sign(mid)? == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_mpfr_eint() {
        let prec = 160;
        for &x in &[1e-4, 0.3, 1.0, 7.5, 41.0, 120.0] {
            let oracle = ei_one_neg_defining_integral(x, prec).unwrap();
            let mpfr = -Float::with_val(prec, Float::with_val(prec, x).eint_ref());
            let rel = Float::with_val(prec, (oracle - &mpfr) / &mpfr).abs().to_f64();
            assert!(rel < 1e-40, "x={x}: rel {rel:e}");
        }
    }

    #[test]
    fn bisection_finds_zero_of_ei() {
        let z = ei_zero_by_bisection(0.37, 0.38, 1e-12, 96).unwrap();
        assert!((z - 0.372_507_410_781_366_6).abs() < 1e-11, "{z}");
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(ei_one_neg_defining_integral(0.0, 64), Err(Error::Domain(_))));
    }
}
