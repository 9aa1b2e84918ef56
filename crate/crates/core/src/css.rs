//! CSS code machinery: Pauli errors, syndromes, corrections and logical-failure
//! classification.
//!
//! Conventions used throughout the crate:
//! - syndrome bits are `Hz·x` (Z-type checks, flag X errors) followed by `Hx·z`;
//! - a correction or label vector is the x-part followed by the z-part (`2n` bits).

use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMat, BitVec, RowEchelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli operator up to global phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliError {
    x: BitVec,
    z: BitVec,
}

impl PauliError {
    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        check_len(x.len(), z.len())?;
        Ok(PauliError { x, z })
    }

    pub fn identity(n: usize) -> Self {
        PauliError {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut e = Self::identity(n);
        e.set(qubit, pauli);
        e
    }

    pub fn from_x(x: BitVec) -> Self {
        let n = x.len();
        PauliError { x, z: BitVec::zeros(n) }
    }

    pub fn from_z(z: BitVec) -> Self {
        let n = z.len();
        PauliError { x: BitVec::zeros(n), z }
    }

    /// Parses a `2n`-bit label (x-part then z-part).
    pub fn from_label(label: &BitVec) -> Result<Self> {
        if !label.len().is_multiple_of(2) {
            return Err(Error::Parse(format!("label length {} is odd", label.len())));
        }
        let n = label.len() / 2;
        Ok(PauliError {
            x: label.slice(0, n),
            z: label.slice(n, 2 * n),
        })
    }

    pub fn to_label(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_part(&self) -> &BitVec {
        &self.x
    }

    pub fn z_part(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (0..self.num_qubits()).filter(|&q| self.get(q) != Pauli::I).count()
    }

    /// Pauli product (up to phase).
    pub fn product(&self, other: &PauliError) -> Result<PauliError> {
        check_len(self.num_qubits(), other.num_qubits())?;
        Ok(PauliError {
            x: &self.x ^ &other.x,
            z: &self.z ^ &other.z,
        })
    }

    /// Symplectic product: true iff the two operators anticommute.
    pub fn anticommutes(&self, other: &PauliError) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.num_qubits()).map(|q| self.get(q).symbol()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliError({self})")
    }
}

/// Residual `e · c` after applying correction `c` to error `e`.
pub fn apply_correction(error: &PauliError, correction: &PauliError) -> Result<PauliError> {
    error.product(correction)
}

/// Stabilizer measurement outcomes: Z-check bits then X-check bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Syndrome {
    bits: BitVec,
    z_checks: usize,
    x_checks: usize,
}

impl Syndrome {
    pub fn new(bits: BitVec, z_checks: usize, x_checks: usize) -> Result<Self> {
        check_len(z_checks + x_checks, bits.len())?;
        Ok(Syndrome {
            bits,
            z_checks,
            x_checks,
        })
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// Outcomes of the Z-type checks, which flag X errors.
    pub fn x_flags(&self) -> BitVec {
        self.bits.slice(0, self.z_checks)
    }

    /// Outcomes of the X-type checks, which flag Z errors.
    pub fn z_flags(&self) -> BitVec {
        self.bits.slice(self.z_checks, self.z_checks + self.x_checks)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualClass {
    Trivial,
    LogicalX,
    LogicalZ,
    LogicalY,
    SyndromeNonzero,
}

impl ResidualClass {
    pub fn is_failure(self) -> bool {
        self != ResidualClass::Trivial
    }
}

/// A conjugate pair of logical operators: `x` is pure X, `z` is pure Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPair {
    pub x: PauliError,
    pub z: PauliError,
}

#[derive(Clone, Debug)]
pub struct CssCode {
    name: String,
    n: usize,
    hx: BitMat,
    hz: BitMat,
    hx_span: RowEchelon,
    hz_span: RowEchelon,
    logicals: Vec<LogicalPair>,
}

impl CssCode {
    /// Validates and assembles a CSS code.
    ///
    /// `hx` holds the X-type checks (rows are x-supports of X stabilizers),
    /// `hz` the Z-type checks. Fails unless `Hx·Hzᵀ = 0`, every logical commutes
    /// with every stabilizer, the logical pairs anticommute pairwise as
    /// `x_i ~ z_j iff i == j`, and the number of pairs equals `n - rank(Hx) - rank(Hz)`.
    pub fn new(name: impl Into<String>, hx: BitMat, hz: BitMat, logicals: Vec<LogicalPair>) -> Result<Self> {
        let name = name.into();
        let n = hx.col_count();
        if hz.col_count() != n {
            return Err(Error::Validation(format!(
                "{name}: Hx has {n} columns but Hz has {}",
                hz.col_count()
            )));
        }
        if !hx.mul_transpose(&hz)?.is_zero() {
            return Err(Error::Validation(format!("{name}: Hx·Hzᵀ is not zero")));
        }
        let hx_span = hx.echelon();
        let hz_span = hz.echelon();
        let k = n - hx_span.rank() - hz_span.rank();
        if logicals.len() != k {
            return Err(Error::Validation(format!(
                "{name}: {} logical pairs given but the code encodes {k} qubits",
                logicals.len()
            )));
        }
        for (i, pair) in logicals.iter().enumerate() {
            let lx = &pair.x;
            let lz = &pair.z;
            if lx.num_qubits() != n || lz.num_qubits() != n {
                return Err(Error::Validation(format!("{name}: logical pair {i} has wrong size")));
            }
            if !lx.z_part().is_zero() || !lz.x_part().is_zero() {
                return Err(Error::Validation(format!("{name}: logical pair {i} is not CSS-type")));
            }
            if !hz.mul_unchecked(lx.x_part()).is_zero() || !hx.mul_unchecked(lz.z_part()).is_zero() {
                return Err(Error::Validation(format!(
                    "{name}: logical pair {i} does not commute with the stabilizers"
                )));
            }
            if hx_span.contains(lx.x_part()) || hz_span.contains(lz.z_part()) {
                return Err(Error::Validation(format!("{name}: logical pair {i} is a stabilizer")));
            }
            for (j, other) in logicals.iter().enumerate() {
                if lx.anticommutes(&other.z) != (i == j) {
                    return Err(Error::Validation(format!(
                        "{name}: logical X{i} and Z{j} have the wrong commutation relation"
                    )));
                }
            }
        }
        Ok(CssCode {
            name,
            n,
            hx,
            hz,
            hx_span,
            hz_span,
            logicals,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logicals(&self) -> usize {
        self.logicals.len()
    }

    pub fn hx(&self) -> &BitMat {
        &self.hx
    }

    pub fn hz(&self) -> &BitMat {
        &self.hz
    }

    pub fn logicals(&self) -> &[LogicalPair] {
        &self.logicals
    }

    /// Total stabilizer generators, which is also the syndrome length.
    pub fn syndrome_len(&self) -> usize {
        self.hx.row_count() + self.hz.row_count()
    }

    /// Length of a correction/label vector.
    pub fn label_len(&self) -> usize {
        2 * self.n
    }

    pub fn extract_syndrome(&self, e: &PauliError) -> Result<Syndrome> {
        check_len(self.n, e.num_qubits())?;
        let bits = self
            .hz
            .mul_unchecked(e.x_part())
            .concat(&self.hx.mul_unchecked(e.z_part()));
        Ok(Syndrome {
            bits,
            z_checks: self.hz.row_count(),
            x_checks: self.hx.row_count(),
        })
    }

    /// Wraps raw syndrome bits in this code's layout.
    pub fn syndrome_from_bits(&self, bits: BitVec) -> Result<Syndrome> {
        Syndrome::new(bits, self.hz.row_count(), self.hx.row_count())
    }

    /// Classifies a residual by stabilizer-group membership per axis.
    pub fn classify_residual(&self, r: &PauliError) -> Result<ResidualClass> {
        if !self.extract_syndrome(r)?.is_zero() {
            return Ok(ResidualClass::SyndromeNonzero);
        }
        let fx = !self.hx_span.contains(r.x_part());
        let fz = !self.hz_span.contains(r.z_part());
        Ok(match (fx, fz) {
            (false, false) => ResidualClass::Trivial,
            (true, false) => ResidualClass::LogicalX,
            (false, true) => ResidualClass::LogicalZ,
            (true, true) => ResidualClass::LogicalY,
        })
    }

    /// True when the x-part is a product of X-stabilizer supports.
    pub fn is_x_stabilizer(&self, x: &BitVec) -> bool {
        self.hx_span.contains(x)
    }

    pub fn is_z_stabilizer(&self, z: &BitVec) -> bool {
        self.hz_span.contains(z)
    }

    /// Minimum weight of a nontrivial logical operator, computed exhaustively.
    ///
    /// When `ker(Hz)` and `ker(Hx)` are small enough they are enumerated
    /// outright. Otherwise every error lighter than the lightest stored logical
    /// is checked, which is only feasible for codes with few qubits or small
    /// distance.
    pub fn verified_distance(&self) -> Result<usize> {
        let axes = [(&self.hz, &self.hx_span), (&self.hx, &self.hz_span)];
        let mut best = usize::MAX;
        for (checks, stabilizers) in axes {
            let kernel = checks.kernel_basis();
            let d = if kernel.row_count() <= crate::gf2::MAX_SPAN_RANK {
                kernel
                    .enumerate_span()?
                    .filter(|v| !stabilizers.contains(v))
                    .map(|v| v.weight())
                    .min()
            } else {
                let bound = self
                    .logicals
                    .iter()
                    .flat_map(|l| [l.x.weight(), l.z.weight()])
                    .min()
                    .unwrap_or(self.n);
                crate::gf2::low_weight_vectors(self.n, bound - 1)
                    .find(|v| !v.is_zero() && checks.mul_unchecked(v).is_zero() && !stabilizers.contains(v))
                    .map(|v| v.weight())
                    .or(Some(bound))
            };
            best = best.min(d.unwrap_or(usize::MAX));
        }
        if best == usize::MAX {
            return Err(Error::Validation(format!("{}: encodes no logical qubits", self.name)));
        }
        Ok(best)
    }
}
