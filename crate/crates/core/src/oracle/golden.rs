//! Published `R₂(n, l, r)` coefficient table for `n <= 4`, radii in Bohr
//! units, and comparison against the assembled forms.

use serde::Deserialize;

use super::report::{Residual, VerificationReport};
use crate::closedform::{assemble_r2, QuantumNumbers};
use crate::error::{Error, Result};
use crate::export::parse_coeff_map;
use crate::ratpoly::{rat, BigRational, RatPoly};

/// One reference entry: `R₂ = q_plus e^{r/n} + q_ei e^{-r/n} Ei(1, ei_arg_scale·r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenEntry {
    pub qn: QuantumNumbers,
    pub q_plus: RatPoly,
    pub q_ei: RatPoly,
    pub ei_arg_scale: BigRational,
}

fn poly(terms: &[(i64, i64, i64)]) -> RatPoly {
    RatPoly::from_terms(terms.iter().map(|&(p, num, den)| (p, rat(num, den))))
}

fn entry(n: i64, l: i64, q_plus: &[(i64, i64, i64)], q_ei: &[(i64, i64, i64)]) -> GoldenEntry {
    GoldenEntry {
        qn: QuantumNumbers::new(n, l).expect("table quantum numbers are valid"),
        q_plus: poly(q_plus),
        q_ei: poly(q_ei),
        ei_arg_scale: rat(-2, n),
    }
}

/// The ten published entries, `(power, numerator, denominator)` per term.
pub fn golden_table() -> Vec<GoldenEntry> {
    vec![
        entry(1, 0, &[(-1, 1, 2)], &[(0, 1, 1)]),
        entry(2, 0, &[(-1, 1, 1), (0, -1, 1)], &[(0, 2, 1), (1, -1, 1)]),
        entry(2, 1, &[(-2, 2, 1), (-1, 1, 1), (0, 1, 1)], &[(1, 1, 1)]),
        entry(
            3,
            0,
            &[(-1, 3, 2), (0, -5, 2), (1, 1, 3)],
            &[(0, 3, 1), (1, -2, 1), (2, 2, 9)],
        ),
        entry(
            3,
            1,
            &[(-2, 9, 2), (-1, 3, 1), (0, 3, 1), (1, -2, 3)],
            &[(1, 8, 3), (2, -4, 9)],
        ),
        entry(
            3,
            2,
            &[(-3, 81, 1), (-2, 27, 2), (-1, 3, 1), (0, 1, 1), (1, 2, 3)],
            &[(2, 4, 9)],
        ),
        entry(
            4,
            0,
            &[(-1, 2, 1), (0, -13, 3), (1, 22, 24), (2, -1, 24)],
            &[(0, 4, 1), (1, -3, 1), (2, 1, 2), (3, -1, 48)],
        ),
        entry(
            4,
            1,
            &[(-2, 8, 1), (-1, 6, 1), (0, 6, 1), (1, -9, 4), (2, 1, 8)],
            &[(1, 5, 1), (2, -5, 4), (3, 1, 16)],
        ),
        entry(
            4,
            2,
            &[(-3, 192, 1), (-2, 48, 1), (-1, 12, 1), (0, 4, 1), (1, 5, 2), (2, -1, 4)],
            &[(2, 3, 2), (3, -1, 8)],
        ),
        entry(
            4,
            3,
            &[
                (-4, 11520, 1),
                (-3, 960, 1),
                (-2, 96, 1),
                (-1, 12, 1),
                (0, 2, 1),
                (1, 1, 2),
                (2, 1, 4),
            ],
            &[(3, 1, 8)],
        ),
    ]
}

/// Compares one reference entry against `assemble_r2` by exact equality of
/// every coefficient and of the Ei argument.
pub fn compare_entry(expected: &GoldenEntry) -> VerificationReport {
    const NAME: &str = "golden";
    let got = assemble_r2(&expected.qn);
    let mut mismatches = Vec::new();
    let mut worst = 0.0f64;
    for (bucket, want, have) in [
        ("q_plus", &expected.q_plus, &got.q_plus),
        ("q_ei", &expected.q_ei, &got.q_ei),
    ] {
        let diff = have - want;
        if !diff.is_zero() {
            for (p, c) in diff.terms() {
                worst = worst.max(crate::ratpoly::rational_to_f64(c).abs());
                mismatches.push(format!(
                    "{bucket} r^{p}: expected {}, got {}",
                    want.coeff(p),
                    have.coeff(p)
                ));
            }
        }
    }
    if !got.q_minus.is_zero() {
        mismatches.push(format!("unexpected q_minus {}", got.q_minus));
        worst = worst.max(1.0);
    }
    if got.ei_arg_scale() != expected.ei_arg_scale {
        mismatches.push(format!(
            "Ei argument scale: expected {}, got {}",
            expected.ei_arg_scale,
            got.ei_arg_scale()
        ));
        worst = worst.max(1.0);
    }
    if mismatches.is_empty() {
        VerificationReport::exact(expected.qn, NAME, Residual::ExactZero, "exact match")
    } else {
        VerificationReport::exact(expected.qn, NAME, Residual::Norm(worst), mismatches.join("; "))
    }
}

/// Checks every published entry.
pub fn golden_table_check() -> Vec<VerificationReport> {
    golden_table().iter().map(compare_entry).collect()
}

#[derive(Deserialize)]
struct RawEntry {
    n: i64,
    l: i64,
    q_plus: serde_json::Map<String, serde_json::Value>,
    q_ei: serde_json::Map<String, serde_json::Value>,
    ei_arg_scale: Option<String>,
}

/// Reads entries from a JSON array of
/// `{"n", "l", "q_plus": {power: "p/q"}, "q_ei": {...}, "ei_arg_scale"?}`.
pub fn parse_golden_json(text: &str) -> Result<Vec<GoldenEntry>> {
    let raw: Vec<RawEntry> =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("golden file: {e}")))?;
    raw.into_iter()
        .map(|r| {
            let qn = QuantumNumbers::new(r.n, r.l)?;
            let ei_arg_scale = match r.ei_arg_scale {
                Some(s) => crate::ratpoly::parse_rational(&s)
                    .ok_or_else(|| Error::InvalidInput(format!("bad ei_arg_scale {s:?}")))?,
                None => rat(-2, r.n),
            };
            Ok(GoldenEntry {
                qn,
                q_plus: parse_coeff_map(&r.q_plus)?,
                q_ei: parse_coeff_map(&r.q_ei)?,
                ei_arg_scale,
            })
        })
        .collect()
}
