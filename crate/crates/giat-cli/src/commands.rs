//! The three commands: decompose, compare, dump-indicators.

use std::fs;
use std::path::PathBuf;

use giat_core::rng::mix_seeds;
use giat_core::{
    build_interaction_data, cret_thresholds, decompose, dump_distribution, fst_threshold,
    ft_threshold, giat_threshold, score, AccuracyReport, DecompositionResult, GiatOutcome,
    Strategy, ThresholdValue, Verdict,
};

use crate::config::{ExperimentConfig, ProblemEntry};
use crate::csvio;
use crate::error::CliError;

// Stream tag separating FST's sampling from the problem's own streams.
const FST_SALT: u64 = 0xF57;

/// Outcome of running one strategy on one problem.
#[derive(Debug)]
pub struct RunRecord {
    /// Problem name from the config.
    pub problem: String,
    /// Strategy that was run.
    pub strategy: Strategy,
    /// Problem dimension.
    pub n: usize,
    /// The partition produced.
    pub result: DecompositionResult,
    /// Score against the generator's ground truth.
    pub report: AccuracyReport,
    /// Objective evaluations consumed by this run.
    pub fe_used: u64,
    /// Adaptive-threshold internals, present for GIAT runs.
    pub giat: Option<GiatOutcome>,
}

/// Runs one problem under one strategy on a fresh instance.
pub fn run_problem_strategy(
    config: &ExperimentConfig,
    entry: &ProblemEntry,
    strategy: Strategy,
) -> Result<RunRecord, CliError> {
    let instance = entry.build(config.master_seed)?;
    let data = build_interaction_data(&instance, config.scheme)?;
    let (decision, zeta, giat) = match strategy {
        Strategy::Ft => (ft_threshold(config.ft_eps)?, None, None),
        Strategy::Fst => {
            let seed = mix_seeds(mix_seeds(config.master_seed, entry.seed), FST_SALT);
            let decision = fst_threshold(&instance, config.fst_k, config.fst_alpha, seed)?;
            (decision, None, None)
        }
        Strategy::Cret => (cret_thresholds(&data), None, None),
        Strategy::Giat => {
            let outcome = giat_threshold(&data)?;
            (
                outcome.decision.clone(),
                Some(outcome.zeta.clone()),
                Some(outcome),
            )
        }
    };
    let result = decompose(&data, zeta.as_ref(), &decision)?;
    let report = score(&result, &instance.ground_truth())?;
    Ok(RunRecord {
        problem: entry.name.clone(),
        strategy,
        n: instance.dimension(),
        result,
        report,
        fe_used: instance.fe_count(),
        giat,
    })
}

fn ensure_output_dir(config: &ExperimentConfig) -> Result<(), CliError> {
    fs::create_dir_all(&config.output_dir).map_err(|err| {
        CliError::Runtime(format!(
            "cannot create output dir {}: {err}",
            config.output_dir.display()
        ))
    })
}

/// Decomposes one named problem with one strategy; writes the result JSON
/// and appends a row to the comparison CSV.
pub fn cmd_decompose(
    config: &ExperimentConfig,
    problem: &str,
    strategy: Strategy,
) -> Result<PathBuf, CliError> {
    let entry = config.find_problem(problem)?;
    let record = run_problem_strategy(config, entry, strategy)?;
    ensure_output_dir(config)?;
    let json_path = config
        .output_dir
        .join(format!("{problem}__{strategy}.json"));
    csvio::write_result_json(&json_path, &record)?;
    csvio::append_comparison_row(&config.output_dir.join("comparison.csv"), &record)?;
    println!(
        "{problem} / {strategy}: {} groups, {} separable, exact = {}, fe = {}",
        record.result.nonsep_groups.len(),
        record.result.sep_vars.len(),
        u8::from(record.report.exact),
        record.fe_used
    );
    Ok(json_path)
}

/// Runs every configured problem under every configured strategy and writes
/// the comparison CSV with per-strategy accuracy sums.
pub fn cmd_compare(config: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let mut records = Vec::new();
    for entry in &config.problems {
        for &strategy in &config.strategies {
            records.push(run_problem_strategy(config, entry, strategy)?);
        }
    }
    ensure_output_dir(config)?;
    let path = config.output_dir.join("comparison.csv");
    csvio::write_comparison_csv(&path, &records, &config.strategies)?;
    for &strategy in &config.strategies {
        let sum: u64 = records
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| u64::from(r.report.exact))
            .sum();
        println!("{strategy}: {sum}/{} exact", config.problems.len());
    }
    println!("wrote {}", path.display());
    Ok(path)
}

/// Exports the sorted indicator array and quotient gaps for one problem.
///
/// Only meaningful when the adaptive pre-checks pass through to a partial
/// verdict; otherwise a message is printed and no file is written.
pub fn cmd_dump_indicators(
    config: &ExperimentConfig,
    problem: &str,
) -> Result<Option<PathBuf>, CliError> {
    let entry = config.find_problem(problem)?;
    let instance = entry.build(config.master_seed)?;
    let data = build_interaction_data(&instance, config.scheme)?;
    let outcome = giat_threshold(&data)?;
    match outcome.decision.verdict {
        Verdict::FullySeparable => {
            println!("{problem}: fully separable; no distribution");
            return Ok(None);
        }
        Verdict::FullyNonseparable => {
            println!("{problem}: fully nonseparable; no distribution");
            return Ok(None);
        }
        Verdict::Partial => {}
    }
    let eps = match outcome.decision.value {
        ThresholdValue::Scalar(eps) => eps,
        ThresholdValue::PerPair(_) => {
            unreachable!("adaptive threshold decisions are scalar")
        }
    };
    let dump = dump_distribution(&outcome.z, &outcome.v, eps)?;
    ensure_output_dir(config)?;
    let path = config.output_dir.join(format!("{problem}__indicators.csv"));
    csvio::write_indicators_csv(&path, &dump)?;
    println!(
        "{problem}: gap at row {}, ratio {}, wrote {}",
        dump.gap_index + 2,
        if dump.gap_ratio.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", dump.gap_ratio)
        },
        path.display()
    );
    Ok(Some(path))
}
