//! Syndrome/label dataset files.
//!
//! Line 1 is a JSON header. Every following line is one record:
//! `<syndrome bits> <label bits>`, where the label is the sampled error's
//! x-part followed by its z-part.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::css::PauliError;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::harness::registry::CodeId;
use crate::harness::sweep::{thread_pool, SweepConfig};
use crate::noise::{NoiseModel, StreamSeeder};

pub const DATASET_FORMAT: &str = "qgec-dataset/1";
const SYNDROME_ORDER: &str = "Z-check outcomes (Hz.x) then X-check outcomes (Hx.z), check index order";
const LABEL_ORDER: &str = "x-part qubits 0..n-1 then z-part qubits 0..n-1";
const CHUNK: u64 = 1 << 16;

/// Physical error rate used for each record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PSource {
    Fixed(f64),
    /// Each record draws `p` uniformly from the inclusive grid `min, min+step, ..., max`.
    Grid {
        min: f64,
        max: f64,
        step: f64,
    },
}

impl PSource {
    fn grid(&self) -> Vec<f64> {
        match *self {
            PSource::Fixed(p) => vec![p],
            PSource::Grid { min, max, step } => SweepConfig {
                p_min: min,
                p_max: max,
                p_step: step,
                ..SweepConfig::standard(CodeId::Toric(2), 1.0, 0)
            }
            .p_grid(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub format: String,
    pub code: CodeId,
    pub p: Option<f64>,
    pub p_grid: Option<[f64; 3]>,
    pub eta: f64,
    pub seed: u64,
    pub count: u64,
    pub n_syndrome: usize,
    pub n_label: usize,
    pub syndrome_order: String,
    pub label_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetRecord {
    pub syndrome: BitVec,
    pub label: BitVec,
}

/// Samples `count` errors and writes their syndromes and exact labels.
/// Record `i` uses random stream `(seed, 0, i)`, so output is byte-identical
/// for identical arguments.
pub fn generate_dataset(
    code_id: CodeId,
    p: PSource,
    eta: f64,
    count: u64,
    seed: u64,
    out: &Path,
) -> Result<DatasetHeader> {
    let grid = p.grid();
    if let PSource::Grid { min, max, step } = p {
        if !(min >= 0.0 && min <= max && step > 0.0) {
            return Err(Error::Config(format!("bad p grid {min}:{max}:{step}")));
        }
    }
    let models = grid
        .iter()
        .map(|&p| NoiseModel::new(p, eta))
        .collect::<Result<Vec<_>>>()?;
    if count >= StreamSeeder::MAX_TRIALS {
        return Err(Error::Config(format!("count must be below 2^40, got {count}")));
    }
    let bundle = code_id.build()?;
    let code = &bundle.code;
    let header = DatasetHeader {
        format: DATASET_FORMAT.into(),
        code: code_id,
        p: match p {
            PSource::Fixed(v) => Some(v),
            PSource::Grid { .. } => None,
        },
        p_grid: match p {
            PSource::Fixed(_) => None,
            PSource::Grid { min, max, step } => Some([min, max, step]),
        },
        eta,
        seed,
        count,
        n_syndrome: code.syndrome_len(),
        n_label: code.label_len(),
        syndrome_order: SYNDROME_ORDER.into(),
        label_order: LABEL_ORDER.into(),
    };

    let seeder = StreamSeeder::new(seed);
    let make = |i: u64| -> Result<String> {
        let mut rng = seeder.stream(0, i);
        let model = if models.len() == 1 {
            &models[0]
        } else {
            &models[rng.gen_range(0..models.len())]
        };
        let e = model.sample_error(code.num_qubits(), &mut rng);
        let s = code.extract_syndrome(&e)?;
        Ok(format!("{} {}\n", s, e.to_label()))
    };

    let pool = thread_pool()?;
    let mut w = BufWriter::new(File::create(out)?);
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        let lines = pool.install(|| (start..end).into_par_iter().map(make).collect::<Result<Vec<_>>>())?;
        for line in lines {
            w.write_all(line.as_bytes())?;
        }
        start = end;
    }
    w.flush()?;
    Ok(header)
}

/// Loads a dataset, checking every record's label against its stored syndrome.
pub fn read_dataset(path: &Path) -> Result<(DatasetHeader, Vec<DatasetRecord>)> {
    let fail = |line: usize, reason: String| Error::Dataset {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = BufReader::new(File::open(path)?).lines();
    let first = lines.next().ok_or_else(|| fail(1, "missing header".into()))??;
    let header: DatasetHeader = serde_json::from_str(&first).map_err(|e| fail(1, format!("bad header: {e}")))?;
    if header.format != DATASET_FORMAT {
        return Err(fail(1, format!("unsupported format {:?}", header.format)));
    }
    let code = header.code.build()?.code;
    if header.n_syndrome != code.syndrome_len() || header.n_label != code.label_len() {
        return Err(fail(1, format!("header widths do not match {}", header.code)));
    }

    let mut records = Vec::with_capacity(header.count as usize);
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (s, l) = line
            .split_once(' ')
            .ok_or_else(|| fail(lineno, "expected `<syndrome> <label>`".into()))?;
        let syndrome: BitVec = s.parse().map_err(|e| fail(lineno, format!("{e}")))?;
        let label: BitVec = l.parse().map_err(|e| fail(lineno, format!("{e}")))?;
        if syndrome.len() != header.n_syndrome || label.len() != header.n_label {
            return Err(fail(
                lineno,
                format!(
                    "widths {}/{} do not match header {}/{}",
                    syndrome.len(),
                    label.len(),
                    header.n_syndrome,
                    header.n_label
                ),
            ));
        }
        let recomputed = code.extract_syndrome(&PauliError::from_label(&label)?)?;
        if recomputed.bits() != &syndrome {
            return Err(fail(lineno, "label does not reproduce the stored syndrome".into()));
        }
        records.push(DatasetRecord { syndrome, label });
    }
    if records.len() as u64 != header.count {
        return Err(fail(
            records.len() + 2,
            format!("header promises {} records, found {}", header.count, records.len()),
        ));
    }
    Ok((header, records))
}
