//! The three [[23,1,7]] quantum Golay codes.
//!
//! Each parity-check matrix is stored verbatim and validated at construction
//! against the circular shifts of its generator polynomial, so a typo in a
//! constant can never produce a silently different code.

use std::fmt;
use std::str::FromStr;

use crate::css::{CssCode, LogicalPair, PauliError};
use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};

pub const GOLAY_N: usize = 23;
pub const GOLAY_CHECKS: usize = 11;
pub const GOLAY_DISTANCE: usize = 7;

const H1_ROWS: [&str; GOLAY_CHECKS] = [
    "11111001001010000000000",
    "01111100100101000000000",
    "00111110010010100000000",
    "00011111001001010000000",
    "00001111100100101000000",
    "00000111110010010100000",
    "00000011111001001010000",
    "00000001111100100101000",
    "00000000111110010010100",
    "00000000011111001001010",
    "00000000001111100100101",
];

const H2_ROWS: [&str; GOLAY_CHECKS] = [
    "10111011111101100000000",
    "01011101111110110000000",
    "11110110101110101000000",
    "11101001100111111000000",
    "00101110111111011000000",
    "11111110111000010100000",
    "11111010110011001010000",
    "11111000110110100101000",
    "11111001110100010010100",
    "11111001010101001001010",
    "11111001000101100100101",
];

const H3_ROWS: [&str; GOLAY_CHECKS] = [
    "10111111110110111110000",
    "11100111111111110101000",
    "11111011001111101111000",
    "01011111111011011111000",
    "01110011111111111010100",
    "11011111011101110110100",
    "11101110101011111110100",
    "01111101100111110111100",
    "10111010111111010111100",
    "11111110100111011101010",
    "11010111111010111100101",
];

/// Which of the three generator polynomials a code is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyLabel {
    H1,
    H2,
    H3,
}

impl PolyLabel {
    pub const ALL: [PolyLabel; 3] = [PolyLabel::H1, PolyLabel::H2, PolyLabel::H3];

    fn exponents(self) -> &'static [usize] {
        match self {
            PolyLabel::H1 => &[12, 10, 7, 4, 3, 2, 1, 0],
            PolyLabel::H2 => &[16, 14, 12, 11, 10, 8, 6, 5, 3, 2, 1, 0],
            PolyLabel::H3 => &[21, 18, 17, 16, 15, 14, 13, 12, 11, 10, 8, 7, 5, 3, 1, 0],
        }
    }

    fn rows(self) -> &'static [&'static str; GOLAY_CHECKS] {
        match self {
            PolyLabel::H1 => &H1_ROWS,
            PolyLabel::H2 => &H2_ROWS,
            PolyLabel::H3 => &H3_ROWS,
        }
    }
}

impl fmt::Display for PolyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolyLabel::H1 => "h1",
            PolyLabel::H2 => "h2",
            PolyLabel::H3 => "h3",
        })
    }
}

impl FromStr for PolyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1" => Ok(PolyLabel::H1),
            "h2" => Ok(PolyLabel::H2),
            "h3" => Ok(PolyLabel::H3),
            other => Err(Error::UnknownCode(format!("golay:{other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorPolynomial {
    pub label: PolyLabel,
    /// Bit `i` is the coefficient of `x^i`.
    pub coefficients: BitVec,
}

impl GeneratorPolynomial {
    pub fn new(label: PolyLabel) -> Self {
        GeneratorPolynomial {
            label,
            coefficients: BitVec::from_indices(GOLAY_N, label.exponents().iter().copied()),
        }
    }

    pub fn weight(&self) -> usize {
        self.coefficients.weight()
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter_ones().last().unwrap_or(0)
    }
}

/// Row `k` is the coefficient vector rotated right by `k` (multiplication by `x^k`).
pub fn circular_shifts(poly: &BitVec) -> BitMat {
    let rows = (0..poly.len()).map(|k| poly.rotate_right(k)).collect();
    BitMat::from_rows(rows, poly.len()).expect("rotations keep length")
}

#[derive(Clone, Debug)]
pub struct ParityCheckMatrix {
    pub matrix: BitMat,
    pub source: PolyLabel,
}

/// Loads the stored matrix for `label` and checks it against its polynomial.
pub fn build_parity_matrix(label: PolyLabel) -> Result<ParityCheckMatrix> {
    let matrix = BitMat::from_strs(label.rows())?;
    validate_parity_matrix(label, &matrix)?;
    Ok(ParityCheckMatrix { matrix, source: label })
}

fn validate_parity_matrix(label: PolyLabel, m: &BitMat) -> Result<()> {
    let fail = |what: String| Err(Error::Validation(format!("golay:{label}: {what}")));
    if m.row_count() != GOLAY_CHECKS || m.col_count() != GOLAY_N {
        return fail(format!("shape is {}x{}, expected 11x23", m.row_count(), m.col_count()));
    }
    let rank = m.rank();
    if rank != GOLAY_CHECKS {
        return fail(format!("rank is {rank}, expected 11"));
    }
    let shifts = circular_shifts(&GeneratorPolynomial::new(label).coefficients).echelon();
    if let Some(i) = m.rows().iter().position(|r| !shifts.contains(r)) {
        return fail(format!(
            "row {i} is outside the span of the polynomial's circular shifts"
        ));
    }
    if !m.mul_transpose(m)?.is_zero() {
        return fail("H·Hᵀ is not zero".into());
    }
    Ok(())
}

/// Minimum nonzero weight in the kernel of `h`, by exhaustive enumeration.
pub fn kernel_min_weight(h: &BitMat) -> Result<Option<usize>> {
    Ok(h.kernel_basis()
        .enumerate_span()?
        .filter(|v| !v.is_zero())
        .map(|v| v.weight())
        .min())
}

/// Builds the Golay CSS code with `Hx = Hz = H` and all-ones logical operators,
/// verifying the distance by scanning every kernel word.
pub fn build_golay_css(label: PolyLabel) -> Result<CssCode> {
    let h = build_parity_matrix(label)?.matrix;
    let name = format!("golay:{label}");
    let min_weight = kernel_min_weight(&h)?;
    if min_weight != Some(GOLAY_DISTANCE) {
        return Err(Error::Validation(format!(
            "{name}: kernel minimum weight is {min_weight:?}, expected 7"
        )));
    }
    let ones = BitVec::ones(GOLAY_N);
    if !h.mat_vec_mul(&ones)?.is_zero() {
        return Err(Error::Validation(format!("{name}: all-ones vector is not in ker(H)")));
    }
    if h.solve_in_rowspace(&ones)?.is_some() {
        return Err(Error::Validation(format!(
            "{name}: all-ones vector lies in rowspace(H)"
        )));
    }
    // x·z overlap of the two all-ones logicals is 23, which is odd
    let logical = LogicalPair {
        x: PauliError::from_x(ones.clone()),
        z: PauliError::from_z(ones),
    };
    CssCode::new(name, h.clone(), h, vec![logical])
}

/// True when the two matrices generate the same row space.
pub fn same_rowspace(a: &BitMat, b: &BitMat) -> Result<bool> {
    let ra = a.rank();
    Ok(ra == b.rank() && a.vstack(b)?.rank() == ra)
}
