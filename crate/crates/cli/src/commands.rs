//! One function per subcommand. Each returns the primary artifact text and
//! a plain-text summary; the caller decides where they go.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cbosel_core::optim::bench::BenchFunction;
use cbosel_core::optim::{
    run_cbo, run_firefly, run_pso, run_random_search, CboConfig, FfConfig, ObjectiveSpec, PsoConfig, RandomSearchConfig,
};
use cbosel_core::selection::{FeatureMask, OptimizerKind, SelectionResult};

use crate::config::{Axis, ClassifierKind, ExperimentConfig};
use crate::error::CliError;
use crate::pipeline::{classifier_label, evaluate_mask, prepare, run_selection};
use crate::report::{delta_summary, parse_report_csv, render_table, rows_to_csv, ReportRow, ACCURACY_NOTE};

/// Text produced by a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Written to `--output`, or stdout when no output is given.
    pub artifact: String,
    /// Printed, and saved beside the artifact as `<output>.txt` when one
    /// is given.
    pub summary: String,
}

fn degenerate_note(rows: &[ReportRow]) -> String {
    let flagged: Vec<&str> = rows.iter().filter(|r| r.degenerate).map(|r| r.label.as_str()).collect();
    if flagged.is_empty() {
        String::new()
    } else {
        format!(
            "Some per-class values had a zero denominator and were reported as 0: {}.\n",
            flagged.join(", ")
        )
    }
}

pub fn cmd_select(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let prepared = prepare(cfg)?;
    let result = run_selection(cfg, &prepared, cfg.optimizer)?;
    let mask = result.feature_mask()?;
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "optimizer: {}",
        result.optimizer.map_or("none", OptimizerKind::name)
    );
    let _ = writeln!(summary, "dataset: {}", cfg.dataset);
    let _ = writeln!(summary, "seed: {}", result.seed);
    let _ = writeln!(
        summary,
        "selected {} of {} features: {}",
        mask.count(),
        mask.len(),
        mask.indices()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(summary, "validation accuracy: {:.6}", result.accuracy);
    let _ = writeln!(
        summary,
        "evaluations: {} ({} distinct masks)",
        result.evaluations, result.distinct_masks
    );
    Ok(Outcome {
        artifact: result.to_json()? + "\n",
        summary,
    })
}

/// A mask argument: selection JSON path, or a literal like `1,0,1` / `101`.
fn resolve_mask(text: &str) -> Result<(FeatureMask, Option<OptimizerKind>), CliError> {
    let path = Path::new(text);
    if path.is_file() {
        let body = fs::read_to_string(path)
            .map_err(|e| CliError::MissingInput(format!("cannot read {}: {e}", path.display())))?;
        let result = SelectionResult::from_json(&body)
            .map_err(|e| CliError::Config(format!("{}: not a selection result: {e}", path.display())))?;
        return Ok((result.feature_mask()?, result.optimizer));
    }
    if text.ends_with(".json") || text.contains(std::path::MAIN_SEPARATOR) {
        return Err(CliError::MissingInput(format!("mask file {text} does not exist")));
    }
    let mask = FeatureMask::parse(text).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((mask, None))
}

pub fn cmd_evaluate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let resolved = cfg.mask.as_deref().map(resolve_mask).transpose()?;
    let prepared = prepare(cfg)?;
    let cls = classifier_label(cfg.classifier);
    let (mask, label) = match resolved {
        None => (
            FeatureMask::all(prepared.train.n_features())?,
            "All Features".to_string(),
        ),
        Some((m, Some(opt))) => (m, format!("{}-{cls}", opt.label())),
        Some((m, None)) => (m, cls.to_string()),
    };
    let row = evaluate_mask(cfg, &prepared, &mask, cfg.classifier, label)?;
    let rows = vec![row];
    let mut summary = format!(
        "{}: test accuracy {:.6} with {} features\n",
        rows[0].label, rows[0].metrics.accuracy, rows[0].features
    );
    summary.push_str(&degenerate_note(&rows));
    Ok(Outcome {
        artifact: rows_to_csv(&rows)?,
        summary,
    })
}

pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let prepared = prepare(cfg)?;
    let cls = classifier_label(cfg.classifier);
    let optimizer = cfg.optimizer.unwrap_or(OptimizerKind::Cbo);
    let (rows, reference) = match cfg.axis {
        Axis::Optimizers => {
            let mut rows = Vec::new();
            for kind in OptimizerKind::ALL {
                let sel = run_selection(cfg, &prepared, Some(kind))?;
                let label = format!("{}-{cls}", kind.label());
                rows.push(evaluate_mask(
                    cfg,
                    &prepared,
                    &sel.feature_mask()?,
                    cfg.classifier,
                    label,
                )?);
            }
            (rows, 0)
        }
        Axis::Classifiers => {
            let mask = run_selection(cfg, &prepared, Some(optimizer))?.feature_mask()?;
            let rows = ClassifierKind::ALL
                .iter()
                .map(|&k| evaluate_mask(cfg, &prepared, &mask, k, classifier_label(k).to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let reference = ClassifierKind::ALL
                .iter()
                .position(|&k| k == cfg.classifier)
                .unwrap_or(0);
            (rows, reference)
        }
        Axis::Features => {
            let all = FeatureMask::all(prepared.train.n_features())?;
            let baseline = evaluate_mask(cfg, &prepared, &all, cfg.classifier, "All Features".into())?;
            let mask = run_selection(cfg, &prepared, Some(optimizer))?.feature_mask()?;
            let optimized = evaluate_mask(cfg, &prepared, &mask, cfg.classifier, "Optimized Feature".into())?;
            (vec![baseline, optimized], 1)
        }
    };
    let mut summary = delta_summary(&rows, reference);
    summary.push_str(&degenerate_note(&rows));
    summary.push_str(ACCURACY_NOTE);
    summary.push('\n');
    Ok(Outcome {
        artifact: rows_to_csv(&rows)?,
        summary,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

const BENCH_METHODS: [&str; 4] = ["cbo", "pso", "ff", "random"];

/// Best-so-far traces of every method for one seed.
pub fn bench_traces(
    function: BenchFunction,
    dim: usize,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<Vec<f64>>, CliError> {
    let bounds = function.bounds(dim)?;
    let obj = ObjectiveSpec::minimize(|x: &[f64]| function.evaluate(x));
    let (n, it, jobs) = (cfg.population, cfg.iterations, cfg.jobs);
    let traces = vec![
        run_cbo(&obj, &CboConfig::new(n, it, seed, bounds.clone()).with_jobs(jobs))?,
        run_pso(&obj, &PsoConfig::new(n, it, seed, bounds.clone()).with_jobs(jobs))?,
        run_firefly(&obj, &FfConfig::new(n, it, seed, bounds.clone()).with_jobs(jobs))?,
        run_random_search(
            &obj,
            &RandomSearchConfig {
                population: n,
                max_iterations: it,
                seed,
                bounds,
            },
        )?,
    ];
    Ok(traces.into_iter().map(|t| t.best_fitness_per_iteration).collect())
}

pub fn cmd_bench_opt(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let function = cfg
        .function
        .ok_or_else(|| CliError::Config("--function is required (sphere, rastrigin or rosenbrock)".into()))?;
    let mut finals: Vec<Vec<f64>> = vec![Vec::new(); BENCH_METHODS.len()];
    let mut first = None;
    for r in 0..cfg.repeats as u64 {
        let traces = bench_traces(function, cfg.dim, cfg, cfg.seed.wrapping_add(r))?;
        for (f, t) in finals.iter_mut().zip(&traces) {
            f.push(*t.last().expect("trace has the initial entry"));
        }
        first.get_or_insert(traces);
    }
    let traces = first.expect("repeats is positive");
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Runtime(format!("csv: {e}"));
    w.write_record(std::iter::once("iteration").chain(BENCH_METHODS))
        .map_err(io)?;
    for i in 0..traces[0].len() {
        let mut rec = vec![i.to_string()];
        rec.extend(traces.iter().map(|t| format!("{:e}", t[i])));
        w.write_record(rec).map_err(io)?;
    }
    let artifact =
        String::from_utf8(w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?).expect("csv output is utf-8");
    let mut summary = format!(
        "{} dim {}, population {}, {} iterations, {} seed(s) from {}\n",
        function.name(),
        cfg.dim,
        cfg.population,
        cfg.iterations,
        cfg.repeats,
        cfg.seed
    );
    for (name, f) in BENCH_METHODS.iter().zip(finals) {
        let _ = writeln!(summary, "{name:<7} median final {:e}", median(f));
    }
    Ok(Outcome { artifact, summary })
}

pub fn cmd_report(paths: &[PathBuf]) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for p in paths {
        let text =
            fs::read_to_string(p).map_err(|e| CliError::MissingInput(format!("cannot read {}: {e}", p.display())))?;
        rows.extend(parse_report_csv(&text, p)?);
    }
    let mut artifact = render_table(&rows);
    artifact.push('\n');
    artifact.push_str(ACCURACY_NOTE);
    artifact.push('\n');
    Ok(Outcome {
        summary: format!("{} row(s) from {} file(s)\n", rows.len(), paths.len()),
        artifact,
    })
}
