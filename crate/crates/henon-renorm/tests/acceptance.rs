//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always printed; the
//! process fails if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use henon_renorm::experiments::{
    exp_count, exp_hausdorff, exp_pieces, exp_pushup_tracking, exp_renorm, exp_solve_1d, exp_universality_decay,
    exp_walk_vs_words, Context, ExperimentConfig, ExperimentError, Report,
};

type Pipeline = fn(&ExperimentConfig, &Context) -> Result<Report, ExperimentError>;
type Criterion<'a> = Box<dyn Fn() -> Result<Outcome, ExperimentError> + 'a>;

struct Outcome {
    passed: bool,
    detail: String,
}

/// Criterion passes when every named check of the report passed.
fn checks(rep: &Report, names: &[&str]) -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for name in names {
        match rep.checks.iter().find(|c| c.name == *name) {
            Some(c) => {
                passed &= c.passed;
                detail.push(format!("[{}] {}", c.name, c.detail));
            }
            None => {
                passed = false;
                detail.push(format!("[{name}] missing"));
            }
        }
    }
    Outcome { passed, detail: detail.join("; ") }
}

fn tables_identical(a: &Report, b: &Report) -> Result<Option<String>, ExperimentError> {
    if a.tables.len() != b.tables.len() {
        return Ok(Some(format!("{}: table count differs", a.pipeline)));
    }
    for (x, y) in a.tables.iter().zip(&b.tables) {
        if a.csv_bytes(x)? != b.csv_bytes(y)? {
            return Ok(Some(format!("{}: table {} differs", a.pipeline, x.name)));
        }
    }
    Ok(None)
}

fn reproducibility(cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let pipelines: [(&str, Pipeline); 4] =
        [("walk", exp_walk_vs_words), ("count", exp_count), ("pieces", exp_pieces), ("pushup", exp_pushup_tracking)];
    let mut tables = 0;
    for (name, p) in pipelines {
        let a = p(cfg, &Context::new())?;
        let b = p(cfg, &Context::new())?;
        if let Some(diff) = tables_identical(&a, &b)? {
            return Ok(Outcome { passed: false, detail: diff });
        }
        tables += a.tables.len();
        eprintln!("  reproducibility: {name} identical");
    }
    Ok(Outcome { passed: true, detail: format!("{tables} tables from 4 pipelines byte-identical across fresh runs") })
}

fn main() -> ExitCode {
    let cfg = ExperimentConfig::default();
    let ctx = Context::new();
    let t0 = Instant::now();

    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1d fixed point",
            Box::new(|| {
                let rep = exp_solve_1d(&cfg, &ctx)?;
                Ok(checks(&rep, &["fixed_point_residual", "sigma_vs_cascade", "solve_runtime"]))
            }),
        ),
        (
            "universality exponent",
            Box::new(|| Ok(checks(&exp_renorm(&cfg, &ctx)?, &["universality_exponent", "map_runtime"]))),
        ),
        ("average jacobian", Box::new(|| Ok(checks(&exp_renorm(&cfg, &ctx)?, &["average_jacobian"])))),
        (
            "measure identities",
            Box::new(|| {
                let rep = exp_walk_vs_words(&cfg, &ctx)?;
                Ok(checks(&rep, &["cylinder_exact", "walk_initial_law", "walk_jump_mean"]))
            }),
        ),
        (
            "controlled count oracle",
            Box::new(|| Ok(checks(&exp_count(&cfg, &ctx)?, &["count_oracle", "count_runtime"]))),
        ),
        (
            "probabilistic universality bound",
            Box::new(|| {
                let rep = exp_universality_decay(&cfg, &ctx)?;
                Ok(checks(&rep, &["controlled_measure_bound", "degenerate_universal_fraction"]))
            }),
        ),
        (
            "thickness contraction",
            Box::new(|| Ok(checks(&exp_pushup_tracking(&cfg, &ctx)?, &["thickness_contraction", "pushup_runtime"]))),
        ),
        (
            "hausdorff dimension universality",
            Box::new(|| Ok(checks(&exp_hausdorff(&cfg, &ctx)?, &["dimension_convergence", "dimension_universality"]))),
        ),
        ("frame invariance", Box::new(|| Ok(checks(&exp_pieces(&cfg, &ctx)?, &["frame_invariance"])))),
        ("reproducibility", Box::new(|| reproducibility(&cfg))),
    ];

    let mut failures = 0;
    for (i, (name, crit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = crit().unwrap_or_else(|e| Outcome { passed: false, detail: format!("error: {e}") });
        failures += usize::from(!out.passed);
        println!(
            "{} {:>2}. {name} ({:.1} s): {}",
            if out.passed { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("{}/{} criteria passed in {:.1} s", criteria.len() - failures, criteria.len(), t0.elapsed().as_secs_f64());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
