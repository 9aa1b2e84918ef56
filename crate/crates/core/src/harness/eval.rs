use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::css::PauliError;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::harness::dataset::{read_dataset, DatasetHeader};
use crate::harness::sweep::Tally;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub dataset: DatasetHeader,
    pub tally: Tally,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Scores a predictions file (one `2n`-bit correction per line, in dataset
/// order) against a dataset's exact labels.
pub fn evaluate_predictions(dataset: &Path, predictions: &Path) -> Result<EvalReport> {
    let (header, records) = read_dataset(dataset)?;
    let code = header.code.build()?.code;
    let fail = |line: usize, reason: String| Error::Dataset {
        path: predictions.to_path_buf(),
        line,
        reason,
    };

    let mut tally = Tally::default();
    let mut seen = 0usize;
    for (k, line) in BufReader::new(File::open(predictions)?).lines().enumerate() {
        let lineno = k + 1;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let record = records
            .get(seen)
            .ok_or_else(|| fail(lineno, format!("more predictions than the {} records", records.len())))?;
        let bits: BitVec = line.parse().map_err(|e| fail(lineno, format!("{e}")))?;
        if bits.len() != header.n_label {
            return Err(fail(
                lineno,
                format!("expected {} bits, found {}", header.n_label, bits.len()),
            ));
        }
        let residual = PauliError::from_label(&(&record.label ^ &bits))?;
        tally.record(code.classify_residual(&residual)?);
        seen += 1;
    }
    if seen != records.len() {
        return Err(fail(
            seen + 1,
            format!("only {seen} predictions for {} records", records.len()),
        ));
    }
    let (ci_low, ci_high) = tally.interval();
    Ok(EvalReport {
        dataset: header,
        rate: tally.rate(),
        tally,
        ci_low,
        ci_high,
    })
}
