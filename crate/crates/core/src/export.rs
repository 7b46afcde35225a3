//! Text renderings of closed forms: exact JSON/CSV coefficient listings and
//! LaTeX in the `(Laurent part) e^{r/n} + (polynomial) e^{-r/n} ∫ e^{-s}/s ds`
//! layout.

use serde_json::{Map, Value};

use crate::closedform::ExpEiForm;
use crate::error::{Error, Result};
use crate::ratpoly::{format_rational, parse_rational, BigRational, RatPoly};
use num_traits::{One, Signed};

/// `{"power": "num/den"}` in increasing power order.
pub fn coeff_map(p: &RatPoly) -> Map<String, Value> {
    p.terms()
        .map(|(k, c)| (k.to_string(), Value::String(format_rational(c))))
        .collect()
}

/// Inverse of [`coeff_map`].
pub fn parse_coeff_map(map: &Map<String, Value>) -> Result<RatPoly> {
    let mut terms = Vec::with_capacity(map.len());
    for (k, v) in map {
        let power: i64 = k
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad power {k:?}")))?;
        let coeff = v
            .as_str()
            .and_then(parse_rational)
            .ok_or_else(|| Error::InvalidInput(format!("bad coefficient {v} for power {k}")))?;
        terms.push((power, coeff));
    }
    Ok(RatPoly::from_terms(terms))
}

/// Nonzero buckets of `f` in the order `q_plus`, `q_minus`, `q_ei`.
fn nonzero_buckets(f: &ExpEiForm) -> impl Iterator<Item = (&'static str, &RatPoly)> {
    f.buckets().into_iter().filter(|(_, p)| !p.is_zero())
}

/// JSON object with one coefficient map per nonzero bucket plus the Ei
/// argument scale (present whenever there is an Ei term).
pub fn form_json(f: &ExpEiForm) -> Map<String, Value> {
    let mut out = Map::new();
    for (name, p) in nonzero_buckets(f) {
        out.insert(name.to_string(), Value::Object(coeff_map(p)));
    }
    if !f.q_ei.is_zero() {
        out.insert(
            "ei_arg_scale".to_string(),
            Value::String(format_rational(&f.ei_arg_scale())),
        );
    }
    out
}

/// Reads back a [`form_json`] object as `(q_plus, q_minus, q_ei, ei_arg_scale)`.
pub fn parse_form_json(map: &Map<String, Value>) -> Result<(RatPoly, RatPoly, RatPoly, Option<BigRational>)> {
    let bucket = |name: &str| -> Result<RatPoly> {
        match map.get(name) {
            None => Ok(RatPoly::zero()),
            Some(Value::Object(m)) => parse_coeff_map(m),
            Some(other) => Err(Error::InvalidInput(format!("{name} is not an object: {other}"))),
        }
    };
    let scale = match map.get("ei_arg_scale") {
        None => None,
        Some(v) => Some(
            v.as_str()
                .and_then(parse_rational)
                .ok_or_else(|| Error::InvalidInput(format!("bad ei_arg_scale {v}")))?,
        ),
    };
    Ok((bucket("q_plus")?, bucket("q_minus")?, bucket("q_ei")?, scale))
}

pub const CSV_HEADER: &str = "bucket,power,coefficient";

/// CSV rows `bucket,power,coefficient` (no header).
pub fn form_csv_rows(f: &ExpEiForm) -> Vec<String> {
    let mut rows = Vec::new();
    for (name, p) in nonzero_buckets(f) {
        for (k, c) in p.terms() {
            rows.push(format!("{name},{k},{}", format_rational(c)));
        }
    }
    if !f.q_ei.is_zero() {
        rows.push(format!("ei_arg_scale,,{}", format_rational(&f.ei_arg_scale())));
    }
    rows
}

fn latex_fraction(num: &BigRational) -> String {
    if num.denom().is_one() {
        num.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", num.numer(), num.denom())
    }
}

/// One Laurent term `c·r^k` with the sign handled by the caller.
fn latex_term(c: &BigRational, k: i64) -> String {
    let num = c.numer().abs();
    let den = c.denom();
    match k.signum() {
        -1 => {
            let power = if k == -1 {
                "r".to_string()
            } else {
                format!("r^{{{}}}", -k)
            };
            let den = if den.is_one() {
                power
            } else {
                format!("{den}{power}")
            };
            format!("\\frac{{{num}}}{{{den}}}")
        }
        0 => latex_fraction(&c.abs()),
        _ => {
            let power = if k == 1 {
                "r".to_string()
            } else {
                format!("r^{{{k}}}")
            };
            if c.abs().is_one() {
                power
            } else {
                format!("{}{power}", latex_fraction(&c.abs()))
            }
        }
    }
}

/// LaTeX for a Laurent polynomial in `r`, powers ascending.
pub fn latex_poly(p: &RatPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (k, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&latex_term(c, k));
    }
    out
}

fn latex_exponent(rate: &BigRational, negative: bool) -> String {
    let sign = if negative { "-" } else { "" };
    if rate.is_one() {
        format!("e^{{{sign}r}}")
    } else {
        format!("e^{{{sign}{}r}}", latex_fraction(rate))
    }
}

fn latex_group(p: &RatPoly) -> String {
    if p.terms().count() == 1 {
        latex_poly(p)
    } else {
        format!("\\left( {} \\right)", latex_poly(p))
    }
}

// Prefix multiplying an exponential; unit constants are left implicit.
fn latex_factor(p: &RatPoly) -> String {
    if *p == RatPoly::one() {
        String::new()
    } else if -p == RatPoly::one() {
        "-".to_string()
    } else {
        format!("{} ", latex_group(p))
    }
}

fn latex_lower_limit(scale: &BigRational) -> String {
    // The integral runs from ei_arg_scale·r.
    let a = scale.abs();
    let mag = if a.is_one() {
        "r".to_string()
    } else if a.denom().is_one() {
        format!("{}r", a.numer())
    } else if a.numer().is_one() {
        format!("r/{}", a.denom())
    } else {
        format!("{}r/{}", a.numer(), a.denom())
    };
    if scale.is_negative() {
        format!("-{mag}")
    } else {
        mag
    }
}

/// LaTeX equation body `R_{2}(n,l,r) = ...` for a form in `r`.
pub fn form_latex(label: &str, f: &ExpEiForm) -> String {
    let rate = f.rate();
    let mut parts = Vec::new();
    if !f.q_plus.is_zero() {
        parts.push(format!("{}{}", latex_factor(&f.q_plus), latex_exponent(&rate, false)));
    }
    if !f.q_minus.is_zero() {
        parts.push(format!("{}{}", latex_factor(&f.q_minus), latex_exponent(&rate, true)));
    }
    if !f.q_ei.is_zero() {
        parts.push(format!(
            "{}{} \\int_{{{}}}^{{\\infty}} \\frac{{e^{{-s}}}}{{s}}\\,ds",
            latex_factor(&f.q_ei),
            latex_exponent(&rate, true),
            latex_lower_limit(&f.ei_arg_scale())
        ));
    }
    if parts.is_empty() {
        parts.push("0".to_string());
    }
    format!("{label} = {}", parts.join(" + "))
}
