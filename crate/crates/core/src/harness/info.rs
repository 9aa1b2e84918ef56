use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::golay::{build_parity_matrix, same_rowspace, PolyLabel};
use crate::harness::registry::CodeId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeInfo {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub stabilizers: usize,
    pub x_check_weights: Vec<usize>,
    pub z_check_weights: Vec<usize>,
    pub logical_x_weights: Vec<usize>,
    pub logical_z_weights: Vec<usize>,
    /// Golay only: whether this matrix spans the same dual code as H1.
    pub same_rowspace_as_h1: Option<bool>,
}

fn distinct(weights: impl Iterator<Item = usize>) -> Vec<usize> {
    weights.collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn code_info(id: CodeId) -> Result<CodeInfo> {
    let code = id.build()?.code;
    let same_rowspace_as_h1 = match id {
        CodeId::Golay(label) => Some(same_rowspace(
            &build_parity_matrix(PolyLabel::H1)?.matrix,
            &build_parity_matrix(label)?.matrix,
        )?),
        CodeId::Toric(_) => None,
    };
    Ok(CodeInfo {
        id: id.to_string(),
        n: code.num_qubits(),
        k: code.num_logicals(),
        d: code.verified_distance()?,
        stabilizers: code.syndrome_len(),
        x_check_weights: distinct(code.hx().rows().iter().map(|r| r.weight())),
        z_check_weights: distinct(code.hz().rows().iter().map(|r| r.weight())),
        logical_x_weights: code.logicals().iter().map(|l| l.x.weight()).collect(),
        logical_z_weights: code.logicals().iter().map(|l| l.z.weight()).collect(),
        same_rowspace_as_h1,
    })
}

fn list(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CodeInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code: {}", self.id)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "d: {} (verified)", self.d)?;
        writeln!(f, "stabilizer generators: {}", self.stabilizers)?;
        writeln!(f, "x-check row weights: {}", list(&self.x_check_weights))?;
        writeln!(f, "z-check row weights: {}", list(&self.z_check_weights))?;
        writeln!(f, "logical x weights: {}", list(&self.logical_x_weights))?;
        writeln!(f, "logical z weights: {}", list(&self.logical_z_weights))?;
        if let Some(same) = self.same_rowspace_as_h1 {
            writeln!(f, "same rowspace as golay:h1: {same}")?;
        }
        Ok(())
    }
}
