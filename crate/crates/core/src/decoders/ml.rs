//! Brute-force most-likely-error decoding for small codes.
//!
//! Scans every error consistent with the syndrome and keeps the single most
//! probable one under the noise model. Stabilizer-equivalent errors are not
//! pooled, so this is the argmax over errors rather than over logical classes.
//! Meant for spot checks on a handful of syndromes, not for sweeps.

use crate::css::{CssCode, PauliError, Syndrome};
use crate::decoders::DecoderOutcome;
use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};
use crate::noise::NoiseModel;

/// Enough for the Golay code's 2^12 × 2^12 candidates.
pub const DEFAULT_ML_BUDGET: u128 = 1 << 24;

/// Some `v` with `h · v = target`.
fn particular_solution(h: &BitMat, target: &BitVec) -> Result<BitVec> {
    h.transpose()
        .solve_in_rowspace(target)?
        .ok_or_else(|| Error::Decode(format!("syndrome {target} is not reachable")))
}

fn log_term(count: usize, prob: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * prob.ln()
    }
}

pub fn ml_decode_oracle(code: &CssCode, model: &NoiseModel, s: &Syndrome, budget: u128) -> Result<DecoderOutcome> {
    if s.len() != code.syndrome_len() {
        return Err(Error::DimensionMismatch {
            expected: code.syndrome_len(),
            found: s.len(),
        });
    }
    let n = code.num_qubits();
    let ker_x = code.hz().kernel_basis();
    let ker_z = code.hx().kernel_basis();
    let dims = ker_x.row_count() + ker_z.row_count();
    let needed: u128 = 1u128.checked_shl(dims as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let x0 = particular_solution(code.hz(), &s.x_flags())?;
    let z0 = particular_solution(code.hx(), &s.z_flags())?;
    let xs: Vec<BitVec> = ker_x.enumerate_span()?.map(|k| &k ^ &x0).collect();
    let zs: Vec<BitVec> = ker_z.enumerate_span()?.map(|k| &k ^ &z0).collect();
    let zw: Vec<usize> = zs.iter().map(BitVec::weight).collect();

    let (pi, px, py, pz) = (1.0 - model.p(), model.px(), model.py(), model.pz());
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    let mut found = false;
    for (i, x) in xs.iter().enumerate() {
        let wx = x.weight();
        for (j, z) in zs.iter().enumerate() {
            let ny = x.overlap(z);
            let nx = wx - ny;
            let nz = zw[j] - ny;
            let ni = n - nx - nz - ny;
            let lp = log_term(ni, pi) + log_term(nx, px) + log_term(ny, py) + log_term(nz, pz);
            if !found || lp > best.0 {
                best = (lp, i, j);
                found = true;
            }
        }
    }
    Ok(DecoderOutcome {
        correction: PauliError::new(xs[best.1].clone(), zs[best.2].clone())?,
        decoder: "ml".into(),
    })
}
