use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::css::{CssCode, ResidualClass};
use crate::decoders::Decoder;
use crate::error::{Error, Result};
use crate::harness::registry::{CodeBundle, CodeId, DecoderId};
use crate::harness::stats::{wilson_interval, Z95};
use crate::noise::{NoiseModel, StreamSeeder};

pub const CSV_HEADER: &str = "p,trials,failures,rate,ci_low,ci_high,fail_x,fail_z,fail_y,inconsistent";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub code: CodeId,
    /// `None` picks the code's native decoder.
    pub decoder: Option<DecoderId>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub trials: u64,
    pub eta: f64,
    pub seed: u64,
}

impl SweepConfig {
    /// The 0.1%..5% grid in 0.1% steps with 10⁴ trials per point.
    pub fn standard(code: CodeId, eta: f64, seed: u64) -> Self {
        SweepConfig {
            code,
            decoder: None,
            p_min: 0.001,
            p_max: 0.05,
            p_step: 0.001,
            trials: 10_000,
            eta,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.p_min > 0.0 && self.p_min <= self.p_max && self.p_max <= 0.5) {
            return bad(format!(
                "need 0 < p_min <= p_max <= 0.5, got p_min={} p_max={}",
                self.p_min, self.p_max
            ));
        }
        if !(self.p_step > 0.0 && self.p_step.is_finite()) {
            return bad(format!("p_step must be positive, got {}", self.p_step));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.trials >= StreamSeeder::MAX_TRIALS {
            return bad(format!("trials must be below 2^40, got {}", self.trials));
        }
        NoiseModel::new(self.p_min, self.eta)?;
        Ok(())
    }

    /// Inclusive grid `p_min, p_min + step, ...` up to `p_max`, rounded to 12 decimals.
    pub fn p_grid(&self) -> Vec<f64> {
        let count = ((self.p_max - self.p_min) / self.p_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.p_min + i as f64 * self.p_step) * 1e12).round() / 1e12)
            .collect()
    }
}

/// Shot counts for one batch of decoding experiments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    pub failures: u64,
    pub fail_x: u64,
    pub fail_z: u64,
    pub fail_y: u64,
    /// Corrections whose syndrome differs from the measured one.
    pub inconsistent: u64,
}

impl Tally {
    /// Records one shot. Any class other than `Trivial` is one failure.
    pub fn record(&mut self, class: ResidualClass) {
        self.trials += 1;
        match class {
            ResidualClass::Trivial => return,
            ResidualClass::LogicalX => self.fail_x += 1,
            ResidualClass::LogicalZ => self.fail_z += 1,
            ResidualClass::LogicalY => self.fail_y += 1,
            ResidualClass::SyndromeNonzero => self.inconsistent += 1,
        }
        self.failures += 1;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.failures += other.failures;
        self.fail_x += other.fail_x;
        self.fail_z += other.fail_z;
        self.fail_y += other.fail_y;
        self.inconsistent += other.inconsistent;
        self
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.failures, self.trials, Z95)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub p: f64,
    pub tally: Tally,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl PointResult {
    pub fn new(p: f64, tally: Tally) -> Self {
        let (ci_low, ci_high) = tally.interval();
        PointResult {
            p,
            tally,
            rate: tally.rate(),
            ci_low,
            ci_high,
        }
    }

    pub fn csv_row(&self) -> String {
        let t = &self.tally;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.p,
            t.trials,
            t.failures,
            self.rate,
            self.ci_low,
            self.ci_high,
            t.fail_x,
            t.fail_z,
            t.fail_y,
            t.inconsistent
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub decoder: String,
    pub points: Vec<PointResult>,
}

/// Worker pool capped by `QGEC_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("QGEC_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("QGEC_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Config("QGEC_THREADS must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn one_shot(
    code: &CssCode,
    decoder: &dyn Decoder,
    model: &NoiseModel,
    seeder: &StreamSeeder,
    point: u64,
    trial: u64,
) -> Result<ResidualClass> {
    let mut rng = seeder.stream(point, trial);
    let error = model.sample_error(code.num_qubits(), &mut rng);
    let syndrome = code.extract_syndrome(&error)?;
    let outcome = decoder.decode(&syndrome)?;
    let residual = error.product(&outcome.correction)?;
    code.classify_residual(&residual)
}

fn run_point(
    code: &CssCode,
    decoder: &dyn Decoder,
    model: &NoiseModel,
    seeder: &StreamSeeder,
    point: u64,
    trials: u64,
) -> Result<Tally> {
    if decoder.parallel() {
        (0..trials)
            .into_par_iter()
            .map(|t| one_shot(code, decoder, model, seeder, point, t))
            .try_fold(Tally::default, |mut acc, class| {
                acc.record(class?);
                Ok(acc)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    } else {
        let mut acc = Tally::default();
        for t in 0..trials {
            acc.record(one_shot(code, decoder, model, seeder, point, t)?);
        }
        Ok(acc)
    }
}

/// Builds the code and decoder named in `config` and runs the sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let bundle = config.code.build()?;
    let decoder_id = config.decoder.clone().unwrap_or_else(|| bundle.default_decoder());
    let decoder = bundle.decoder(&decoder_id)?;
    run_sweep_with(&bundle, decoder.as_ref(), config, |_| Ok(()))
}

/// Runs the sweep with a ready decoder, handing each finished point to
/// `on_point` before starting the next one.
///
/// Trial `t` at grid index `i` draws its error from stream `(seed, i, t)`, so the
/// result does not depend on thread count. A decoder failure aborts the sweep
/// with [`Error::SweepAborted`]; points already passed to `on_point` stand.
pub fn run_sweep_with(
    bundle: &CodeBundle,
    decoder: &dyn Decoder,
    config: &SweepConfig,
    mut on_point: impl FnMut(&PointResult) -> Result<()>,
) -> Result<SweepResult> {
    config.validate()?;
    let pool = thread_pool()?;
    let seeder = StreamSeeder::new(config.seed);
    let mut points = Vec::new();
    for (i, p) in config.p_grid().into_iter().enumerate() {
        let model = NoiseModel::new(p, config.eta)?;
        let tally = pool.install(|| run_point(&bundle.code, decoder, &model, &seeder, i as u64, config.trials));
        let tally = match tally {
            Ok(t) => t,
            Err(cause) => {
                return Err(Error::SweepAborted {
                    completed: points.len(),
                    cause: Box::new(cause),
                })
            }
        };
        let point = PointResult::new(p, tally);
        on_point(&point)?;
        points.push(point);
    }
    Ok(SweepResult {
        config: config.clone(),
        decoder: decoder.id().to_string(),
        points,
    })
}

pub fn write_sweep_csv(out: &mut impl Write, points: &[PointResult]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        writeln!(out, "{}", p.csv_row())?;
    }
    Ok(())
}
