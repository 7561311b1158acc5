//! CSV and JSON output formats.
//!
//! Variable indices are 1-based in every file. Floats are written with
//! Rust's shortest round-trip formatting, so reruns under the same seed are
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;

use giat_core::{DistributionDump, InteractionData, ThresholdRecord};
use serde::Serialize;

use crate::commands::RunRecord;
use crate::error::CliError;

/// Header of the comparison CSV.
pub const COMPARISON_HEADER: &str =
    "function_id,strategy,captured_sep,captured_nonsep,formed_groups,accuracy,fe_used";

/// One comparison row.
pub fn comparison_row(record: &RunRecord) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        record.problem,
        record.strategy,
        record.report.captured_sep_vars,
        record.report.captured_nonsep_vars,
        record.report.formed_nonsep_groups,
        u8::from(record.report.exact),
        record.fe_used
    )
}

/// Appends one row to a comparison CSV, creating it with a header first.
pub fn append_comparison_row(path: &Path, record: &RunRecord) -> Result<(), CliError> {
    let mut text = if path.exists() {
        fs::read_to_string(path)?
    } else {
        format!("{COMPARISON_HEADER}\n")
    };
    text.push_str(&comparison_row(record));
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes the full comparison CSV: header, one row per run in order, then
/// one accuracy-sum footer line per strategy.
pub fn write_comparison_csv(
    path: &Path,
    records: &[RunRecord],
    strategies: &[giat_core::Strategy],
) -> Result<(), CliError> {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&comparison_row(record));
        out.push('\n');
    }
    for &strategy in strategies {
        let sum: u64 = records
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| u64::from(r.report.exact))
            .sum();
        out.push_str(&format!("# accuracy_sum,{strategy},{sum}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

fn fmt_float(value: f64) -> String {
    if value.is_infinite() {
        String::from(if value > 0.0 { "inf" } else { "-inf" })
    } else {
        format!("{value}")
    }
}

/// Writes the sorted indicator array and its quotient differences.
///
/// Row `i` (1-based) holds `Z(i)` and the quotient between `Z(i-1)` and
/// `Z(i)` (0 for the first row and below zero indicators). The footer names
/// the gap row, i.e. the row whose `v` is the selected gap quotient, and the
/// gap's dominance ratio.
pub fn write_indicators_csv(path: &Path, dump: &DistributionDump) -> Result<(), CliError> {
    let mut out = String::from("index,z,v\n");
    for (i, &z) in dump.z.iter().enumerate() {
        let v = if i == 0 { 0.0 } else { dump.v[i - 1] };
        out.push_str(&format!("{},{},{}\n", i + 1, fmt_float(z), fmt_float(v)));
    }
    out.push_str(&format!("# gap_index,{}\n", dump.gap_index + 2));
    out.push_str(&format!("# gap_ratio,{}\n", fmt_float(dump.gap_ratio)));
    fs::write(path, out)?;
    Ok(())
}

/// Writes every pair's raw quantities, one row per upper-triangle pair.
pub fn write_pairs_csv(path: &Path, data: &InteractionData) -> Result<(), CliError> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "p,q,tau,e_inf,e_sup,d")?;
    for (p, q, tau) in data.gamma_matrix().upper_triangle() {
        writeln!(
            file,
            "{},{},{},{},{},{}",
            p + 1,
            q + 1,
            fmt_float(tau),
            fmt_float(data.e_inf(p, q)),
            fmt_float(data.e_sup(p, q)),
            fmt_float(data.d(p, q))
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ResultJson {
    groups: Vec<Vec<usize>>,
    separable: Vec<usize>,
    strategy: String,
    eps: serde_json::Value,
}

/// Writes a decomposition as JSON with 1-based variable indices.
///
/// `eps` is the scalar threshold as a number, the string `"inf"` for the
/// fully-separable verdict, or the string `"per-pair"` for per-pair
/// thresholds.
pub fn write_result_json(path: &Path, record: &RunRecord) -> Result<(), CliError> {
    let eps = match record.result.eps_used {
        ThresholdRecord::Scalar(eps) if eps.is_infinite() => {
            serde_json::Value::String("inf".into())
        }
        ThresholdRecord::Scalar(eps) => serde_json::Number::from_f64(eps)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(format!("{eps}"))),
        ThresholdRecord::PerPair => serde_json::Value::String("per-pair".into()),
    };
    let doc = ResultJson {
        groups: record
            .result
            .nonsep_groups
            .iter()
            .map(|g| g.iter().map(|v| v + 1).collect())
            .collect(),
        separable: record.result.sep_vars.iter().map(|v| v + 1).collect(),
        strategy: record.strategy.to_string(),
        eps,
    };
    let mut text =
        serde_json::to_string_pretty(&doc).map_err(|err| CliError::Runtime(err.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
