use crate::css::{CssCode, PauliError, Syndrome};
use crate::decoders::{Decoder, DecoderOutcome};
use crate::error::{check_len, Error, Result};
use crate::gf2::{low_weight_vectors, BitMat, BitVec};

/// Coset leaders of a perfect code, indexed by syndrome value.
///
/// Syndrome bit `i` is bit `i` of the index.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    n: usize,
    radius: usize,
    leaders: Vec<BitVec>,
}

/// Enumerates every error up to the packing radius and files it under its
/// syndrome. Fails if two errors collide or some syndrome is left without a
/// leader, i.e. unless the code is perfect.
pub fn build_syndrome_table(h: &BitMat) -> Result<SyndromeTable> {
    let checks = h.row_count();
    let n = h.col_count();
    if checks > 24 {
        return Err(Error::Validation(format!(
            "{checks} checks is too many for a lookup table"
        )));
    }
    let rank = h.rank();
    if rank != checks {
        return Err(Error::Validation(format!(
            "check matrix has rank {rank}, expected {checks}"
        )));
    }
    let size = 1usize << checks;
    // smallest radius whose Hamming ball holds at least 2^checks words
    let mut ball = 0usize;
    let mut radius = 0usize;
    let mut choose = 1usize;
    loop {
        ball += choose;
        if ball >= size || radius == n {
            break;
        }
        choose = choose * (n - radius) / (radius + 1);
        radius += 1;
    }
    if ball != size {
        return Err(Error::Validation(format!(
            "Hamming ball of radius {radius} holds {ball} words, but there are {size} syndromes"
        )));
    }
    let mut leaders: Vec<Option<BitVec>> = vec![None; size];
    for e in low_weight_vectors(n, radius) {
        let key = h.mul_unchecked(&e).to_u64() as usize;
        if let Some(prev) = &leaders[key] {
            return Err(Error::Validation(format!("syndrome {key} is shared by {prev} and {e}")));
        }
        leaders[key] = Some(e);
    }
    let leaders = leaders
        .into_iter()
        .enumerate()
        .map(|(key, l)| l.ok_or_else(|| Error::Validation(format!("syndrome {key} has no leader"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SyndromeTable { n, radius, leaders })
}

impl SyndromeTable {
    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn num_bits(&self) -> usize {
        self.n
    }

    pub fn leaders(&self) -> &[BitVec] {
        &self.leaders
    }

    pub fn lookup(&self, syndrome: &BitVec) -> Result<&BitVec> {
        check_len(self.leaders.len().trailing_zeros() as usize, syndrome.len())?;
        Ok(&self.leaders[syndrome.to_u64() as usize])
    }
}

/// Per-axis minimum-weight decoding of a perfect CSS code.
#[derive(Clone, Debug)]
pub struct TableDecoder {
    id: String,
    n: usize,
    for_x: SyndromeTable,
    for_z: SyndromeTable,
}

impl TableDecoder {
    pub fn new(code: &CssCode) -> Result<Self> {
        let for_x = build_syndrome_table(code.hz())?;
        let for_z = if code.hx() == code.hz() {
            for_x.clone()
        } else {
            build_syndrome_table(code.hx())?
        };
        Ok(TableDecoder {
            id: "table".into(),
            n: code.num_qubits(),
            for_x,
            for_z,
        })
    }

    /// Table used for X errors (keyed by Z-check outcomes).
    pub fn x_table(&self) -> &SyndromeTable {
        &self.for_x
    }

    pub fn z_table(&self) -> &SyndromeTable {
        &self.for_z
    }
}

impl Decoder for TableDecoder {
    fn id(&self) -> &str {
        &self.id
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecoderOutcome> {
        let x = self.for_x.lookup(&syndrome.x_flags())?.clone();
        let z = self.for_z.lookup(&syndrome.z_flags())?.clone();
        debug_assert_eq!(x.len(), self.n);
        Ok(DecoderOutcome {
            correction: PauliError::new(x, z)?,
            decoder: self.id.clone(),
        })
    }
}
