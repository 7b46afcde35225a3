//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use coulomb_irregular::closedform::{assemble_r1, assemble_r2, energy, QuantumNumbers};
use coulomb_irregular::numeval::ei_one_neg;
use coulomb_irregular::oracle::pv::SAMPLE_POINTS;
use coulomb_irregular::oracle::{
    ei_one_neg_defining_integral, ei_zero_by_bisection, golden_table_check, ode_residual_symbolic,
    p2_consistency_check, phi2_closed_form, phi2_pv_oracle, pole_split_identity_check,
    wronskian_symbolic,
};
use coulomb_irregular::ratpoly::BigRational;
use coulomb_irregular::shellmatch::{match_shell, ShellConfig};

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> (bool, String) {
    (
        elapsed <= Duration::from_secs(limit_secs),
        format!("{:.2}s of {limit_secs}s", elapsed.as_secs_f64()),
    )
}

fn golden_table() -> Outcome {
    let t = Instant::now();
    let reports = golden_table_check();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}: {}", r.subject, r.details))
        .collect();
    let (fast, time) = within(t.elapsed(), 1);
    outcome(
        failed.is_empty() && fast && reports.len() == 10,
        format!("{} entries exact, {} mismatched ({time}) {}", reports.len() - failed.len(), failed.len(), failed.join("; ")),
    )
}

fn ode_annihilation() -> Outcome {
    let t = Instant::now();
    let mut cases = 0;
    let mut failed = Vec::new();
    for qn in QuantumNumbers::enumerate(20) {
        for (name, f) in [("R1", assemble_r1(&qn)), ("R2", assemble_r2(&qn))] {
            cases += 1;
            let r = ode_residual_symbolic(&f, &qn);
            if !r.passed {
                failed.push(format!("{name}{qn}"));
            }
        }
    }
    let (fast, time) = within(t.elapsed(), 60);
    outcome(
        failed.is_empty() && fast && cases == 420,
        format!("{cases} forms over 210 levels, {} nonzero residuals ({time}) {}", failed.len(), failed.join(" ")),
    )
}

fn p2_equivalence() -> Outcome {
    let mut cases = 0;
    let mut failed = Vec::new();
    for n_bar in 0..=30u32 {
        for m in (1..=61u32).step_by(2) {
            cases += 1;
            let r = p2_consistency_check(n_bar, m);
            if !r.passed {
                failed.push(format!("({n_bar},{m}): {}", r.details));
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!("{cases} (n_r, m) pairs, {} failures {}", failed.len(), failed.join("; ")),
    )
}

fn wronskian() -> Outcome {
    let mut failed = Vec::new();
    let mut cases = 0;
    for qn in QuantumNumbers::enumerate(20) {
        cases += 1;
        let (w, r) = wronskian_symbolic(&qn);
        if !r.passed || w.is_zero() {
            failed.push(qn.to_string());
        }
    }
    outcome(
        failed.is_empty(),
        format!("r^2 W constant and nonzero for {}/{cases} levels {}", cases - failed.len(), failed.join(" ")),
    )
}

fn pv_oracle() -> Outcome {
    let t = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_split = 0.0f64;
    let mut errors = Vec::new();
    for &(n_bar, m, x) in &SAMPLE_POINTS {
        assert!(n_bar + m <= 8);
        match (phi2_pv_oracle(n_bar, m, x), phi2_closed_form(n_bar, m, x)) {
            (Ok(pv), Ok(cf)) => worst_closed = worst_closed.max(((pv - cf) / cf).abs()),
            (Err(e), _) | (_, Err(e)) => errors.push(format!("({n_bar},{m},{x}): {e}")),
        }
        let split = pole_split_identity_check(n_bar, m, &[x]);
        match split.residual_norm {
            coulomb_irregular::oracle::Residual::Norm(v) if split.passed => worst_split = worst_split.max(v),
            _ => errors.push(format!("split ({n_bar},{m},{x}): {}", split.details)),
        }
    }
    let (fast, time) = within(t.elapsed(), 30);
    outcome(
        errors.is_empty() && worst_closed <= 1e-6 && worst_split <= 1e-8 && fast && SAMPLE_POINTS.len() >= 12,
        format!(
            "{} points, worst closed-form rel {worst_closed:.2e} (limit 1e-6), worst split rel {worst_split:.2e} (limit 1e-8) ({time}) {}",
            SAMPLE_POINTS.len(),
            errors.join("; ")
        ),
    )
}

fn ei_accuracy() -> Outcome {
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for &x in &[1e-4, 0.1, 1.0, 5.0, 39.0, 41.0, 100.0, 500.0] {
        let oracle = match ei_one_neg_defining_integral(x, 160) {
            Ok(v) => v.to_f64(),
            Err(e) => {
                errors.push(format!("oracle x={x}: {e}"));
                continue;
            }
        };
        match ei_one_neg(x) {
            Ok(v) => worst = worst.max(((v.value - oracle) / oracle).abs()),
            Err(e) => errors.push(format!("x={x}: {e}")),
        }
    }
    let bracket = match (ei_one_neg(0.37), ei_one_neg(0.38)) {
        (Ok(lo), Ok(hi)) => lo.value > 0.0 && hi.value < 0.0,
        _ => false,
    };
    let zero = ei_zero_by_bisection(0.37, 0.38, 1e-10, 96);
    let zero_ok = matches!(zero, Ok(z) if (0.37..=0.38).contains(&z));
    outcome(
        errors.is_empty() && worst <= 1e-12 && bracket && zero_ok,
        format!(
            "worst rel {worst:.2e} (limit 1e-12), sign change in [0.37, 0.38]: {bracket}, oracle zero {:?} {}",
            zero.ok(),
            errors.join("; ")
        ),
    )
}

fn energy_quantization() -> Outcome {
    let mut failed = Vec::new();
    for n in 1..=50i64 {
        let qn = QuantumNumbers::new(n, 0).expect("valid level");
        // Bohr: E_n = -Z² μ e⁴ / (2 ħ² n²), which is -1/(2n²) with Z = μ = e = ħ = 1.
        let bohr = BigRational::new((-1).into(), (2 * n * n).into());
        if energy(&qn) != bohr {
            failed.push(n);
        }
    }
    outcome(failed.is_empty(), format!("n = 1..=50, mismatches {failed:?}"))
}

fn shell_demo() -> Outcome {
    let config = |grid_step| ShellConfig {
        qn: QuantumNumbers::new(2, 0).expect("valid level"),
        a: 1e-4,
        b_range: (0.5, 1.5),
        grid_step,
    };
    let (coarse, fine) = match (match_shell(&config(0.01)), match_shell(&config(0.005))) {
        (Ok(c), Ok(f)) => (c, f),
        (Err(e), _) | (_, Err(e)) => return outcome(false, format!("matching failed: {e}")),
    };
    let ratio = coarse.c2.abs() / coarse.c1.abs();
    let continuity = [coarse, fine]
        .iter()
        .map(|m| m.inner_continuity.max(m.outer_continuity))
        .fold(0.0, f64::max);
    let drift = (coarse.b_star - fine.b_star).abs();
    outcome(
        ratio < 1e-6 && continuity < 1e-7 && drift < 1e-6,
        format!(
            "|c2|/|c1| = {ratio:.2e} (limit 1e-6), continuity {continuity:.2e} (limit 1e-7), b_star {:.10} drift {drift:.2e} (limit 1e-6)",
            coarse.b_star
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 golden coefficient table", golden_table),
        ("2 symbolic ODE annihilation", ode_annihilation),
        ("3 P2 form equivalence and integrality", p2_equivalence),
        ("4 Wronskian independence", wronskian),
        ("5 principal-value oracle", pv_oracle),
        ("6 exponential integral accuracy", ei_accuracy),
        ("7 energy quantization", energy_quantization),
        ("8 shell demo sanity", shell_demo),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let o = run();
        all &= o.passed;
        println!("[{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.summary.trim_end());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
