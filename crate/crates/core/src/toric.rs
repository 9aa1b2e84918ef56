//! Distance-`d` toric code on a `d × d` periodic lattice.
//!
//! Qubits sit on edges. Horizontal edge `(r, c)` joins vertices `(r, c)` and
//! `(r, c+1)` and has index `r·d + c`; vertical edge `(r, c)` joins `(r, c)` and
//! `(r+1, c)` and has index `d² + r·d + c`. Plaquette `(r, c)` is the face whose
//! top-left corner is vertex `(r, c)`.
//!
//! Vertex stars are the X-type checks and plaquettes the Z-type checks. The last
//! check of each type is dependent on the others, so it is left out of the
//! syndrome and reconstructed by parity when locating defects.

use crate::css::{CssCode, LogicalPair, PauliError, Syndrome};
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMat, BitVec};

pub type Coord = (usize, usize);

#[derive(Clone, Debug)]
pub struct ToricLattice {
    d: usize,
    vertex_checks: BitMat,
    plaquette_checks: BitMat,
    logicals: Vec<LogicalPair>,
}

/// Violated checks of each type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Defects {
    /// Plaquette defects; these are produced by X errors.
    pub plaquettes: Vec<Coord>,
    /// Vertex defects; these are produced by Z errors.
    pub vertices: Vec<Coord>,
}

impl ToricLattice {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Config(format!("toric lattice size must be at least 2, got {d}")));
        }
        let n = 2 * d * d;
        let vertex_checks = BitMat::from_rows(
            (0..d * d)
                .map(|v| BitVec::from_indices(n, Self::star(d, (v / d, v % d))))
                .collect(),
            n,
        )?;
        let plaquette_checks = BitMat::from_rows(
            (0..d * d)
                .map(|p| BitVec::from_indices(n, Self::boundary(d, (p / d, p % d))))
                .collect(),
            n,
        )?;
        let lattice = ToricLattice {
            d,
            vertex_checks,
            plaquette_checks,
            logicals: Vec::new(),
        };
        let logicals = vec![
            LogicalPair {
                // vertical edges of row 0 cross a horizontal dual loop
                x: PauliError::from_x(BitVec::from_indices(n, (0..d).map(|c| lattice.vertical(0, c)))),
                z: PauliError::from_z(BitVec::from_indices(n, (0..d).map(|r| lattice.vertical(r, 0)))),
            },
            LogicalPair {
                x: PauliError::from_x(BitVec::from_indices(n, (0..d).map(|r| lattice.horizontal(r, 0)))),
                z: PauliError::from_z(BitVec::from_indices(n, (0..d).map(|c| lattice.horizontal(0, c)))),
            },
        ];
        Ok(ToricLattice { logicals, ..lattice })
    }

    fn star(d: usize, (r, c): Coord) -> [usize; 4] {
        let left = (c + d - 1) % d;
        let up = (r + d - 1) % d;
        [r * d + c, r * d + left, d * d + r * d + c, d * d + up * d + c]
    }

    fn boundary(d: usize, (r, c): Coord) -> [usize; 4] {
        let down = (r + 1) % d;
        let right = (c + 1) % d;
        [r * d + c, down * d + c, d * d + r * d + c, d * d + r * d + right]
    }

    pub fn size(&self) -> usize {
        self.d
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.d * self.d
    }

    pub fn horizontal(&self, r: usize, c: usize) -> usize {
        (r % self.d) * self.d + c % self.d
    }

    pub fn vertical(&self, r: usize, c: usize) -> usize {
        self.d * self.d + (r % self.d) * self.d + c % self.d
    }

    /// All `d²` vertex stars, including the dependent one.
    pub fn vertex_checks(&self) -> &BitMat {
        &self.vertex_checks
    }

    /// All `d²` plaquettes, including the dependent one.
    pub fn plaquette_checks(&self) -> &BitMat {
        &self.plaquette_checks
    }

    pub fn logicals(&self) -> &[LogicalPair] {
        &self.logicals
    }

    pub fn code_id(&self) -> String {
        format!("toric:{}", self.d)
    }

    /// The CSS code with the last check of each type removed.
    pub fn css_code(&self) -> Result<CssCode> {
        let m = self.d * self.d - 1;
        let hx = BitMat::from_rows(self.vertex_checks.rows()[..m].to_vec(), self.num_qubits())?;
        let hz = BitMat::from_rows(self.plaquette_checks.rows()[..m].to_vec(), self.num_qubits())?;
        CssCode::new(self.code_id(), hx, hz, self.logicals.clone())
    }

    /// Coordinates of violated checks, with the dropped check recovered from
    /// the parity of the others.
    pub fn defect_positions(&self, s: &Syndrome) -> Result<Defects> {
        let m = self.d * self.d - 1;
        check_len(2 * m, s.len())?;
        Ok(Defects {
            plaquettes: self.complete(&s.x_flags()),
            vertices: self.complete(&s.z_flags()),
        })
    }

    fn complete(&self, flags: &BitVec) -> Vec<Coord> {
        let d = self.d;
        let mut out: Vec<Coord> = flags.iter_ones().map(|i| (i / d, i % d)).collect();
        if flags.weight() % 2 == 1 {
            out.push((d - 1, d - 1));
        }
        out
    }
}

pub fn build_toric(d: usize) -> Result<CssCode> {
    ToricLattice::new(d)?.css_code()
}
