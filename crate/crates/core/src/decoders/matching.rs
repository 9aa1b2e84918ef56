//! Minimum-weight matching of toric-code defects.
//!
//! Pairings are exact for up to [`EXACT_MATCHING_LIMIT`] defects and greedy
//! (closest pair first) beyond that. Among equally cheap pairings the
//! lexicographically smallest one wins, and correction paths move along the
//! row coordinate before the column coordinate, so decoding is deterministic.

use crate::css::{PauliError, Syndrome};
use crate::decoders::{Decoder, DecoderOutcome};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::toric::{Coord, ToricLattice};

pub const EXACT_MATCHING_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct MatchDecoder {
    id: String,
    lattice: ToricLattice,
}

impl MatchDecoder {
    pub fn new(lattice: ToricLattice) -> Self {
        MatchDecoder {
            id: "match".into(),
            lattice,
        }
    }

    pub fn lattice(&self) -> &ToricLattice {
        &self.lattice
    }

    fn distance(&self, a: Coord, b: Coord) -> usize {
        let d = self.lattice.size();
        let dr = a.0.abs_diff(b.0);
        let dc = a.1.abs_diff(b.1);
        dr.min(d - dr) + dc.min(d - dc)
    }

    /// Shortest signed step count from `from` to `to` around a cycle of length `d`;
    /// the positive direction wins ties.
    fn steps(d: usize, from: usize, to: usize) -> isize {
        let fwd = (to + d - from) % d;
        if fwd <= d - fwd {
            fwd as isize
        } else {
            -((d - fwd) as isize)
        }
    }

    /// Edges crossed walking from `a` to `b`. With `dual` set the walk is
    /// between plaquettes, otherwise between vertices.
    fn path(&self, a: Coord, b: Coord, dual: bool, out: &mut BitVec) {
        let d = self.lattice.size();
        let (mut r, mut c) = a;
        let dr = Self::steps(d, a.0, b.0);
        let dc = Self::steps(d, a.1, b.1);
        for _ in 0..dr.unsigned_abs() {
            let next = if dr > 0 { (r + 1) % d } else { (r + d - 1) % d };
            let edge = match (dual, dr > 0) {
                // plaquettes (r,c) and (r+1,c) share horizontal edge (r+1,c)
                (true, true) => self.lattice.horizontal(next, c),
                (true, false) => self.lattice.horizontal(r, c),
                // vertices (r,c) and (r+1,c) share vertical edge (r,c)
                (false, true) => self.lattice.vertical(r, c),
                (false, false) => self.lattice.vertical(next, c),
            };
            out.flip(edge);
            r = next;
        }
        for _ in 0..dc.unsigned_abs() {
            let next = if dc > 0 { (c + 1) % d } else { (c + d - 1) % d };
            let edge = match (dual, dc > 0) {
                (true, true) => self.lattice.vertical(r, next),
                (true, false) => self.lattice.vertical(r, c),
                (false, true) => self.lattice.horizontal(r, c),
                (false, false) => self.lattice.horizontal(r, next),
            };
            out.flip(edge);
            c = next;
        }
    }

    fn correct(&self, defects: &[Coord], dual: bool) -> Result<BitVec> {
        if !defects.len().is_multiple_of(2) {
            return Err(Error::Decode(format!("odd number of defects ({})", defects.len())));
        }
        let mut out = BitVec::zeros(self.lattice.num_qubits());
        let pairs = min_weight_pairing(defects.len(), |i, j| self.distance(defects[i], defects[j]));
        for (i, j) in pairs {
            self.path(defects[i], defects[j], dual, &mut out);
        }
        Ok(out)
    }
}

impl Decoder for MatchDecoder {
    fn id(&self) -> &str {
        &self.id
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecoderOutcome> {
        let defects = self.lattice.defect_positions(syndrome)?;
        let x = self.correct(&defects.plaquettes, true)?;
        let z = self.correct(&defects.vertices, false)?;
        Ok(DecoderOutcome {
            correction: PauliError::new(x, z)?,
            decoder: self.id.clone(),
        })
    }
}

/// Pairs up `count` points (an even number) minimizing total `dist`.
///
/// Each returned pair is `(i, j)` with `i < j`, ordered by `i`.
pub fn min_weight_pairing(count: usize, dist: impl Fn(usize, usize) -> usize) -> Vec<(usize, usize)> {
    assert!(count.is_multiple_of(2), "pairing needs an even number of points");
    if count <= EXACT_MATCHING_LIMIT {
        exact_pairing(count, &dist)
    } else {
        greedy_pairing(count, &dist)
    }
}

fn exact_pairing(count: usize, dist: &impl Fn(usize, usize) -> usize) -> Vec<(usize, usize)> {
    let full = (1usize << count) - 1;
    // best[mask] = (cost, partner of the lowest point in mask)
    let mut best: Vec<Option<(usize, usize)>> = vec![None; full + 1];
    best[0] = Some((0, 0));

    fn solve(mask: usize, best: &mut Vec<Option<(usize, usize)>>, dist: &impl Fn(usize, usize) -> usize) -> usize {
        if let Some((cost, _)) = best[mask] {
            return cost;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut choice = (usize::MAX, 0);
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let cost = dist(i, j) + solve(rest & !(1 << j), best, dist);
            if cost < choice.0 {
                choice = (cost, j);
            }
        }
        best[mask] = Some(choice);
        choice.0
    }

    solve(full, &mut best, dist);
    let mut pairs = Vec::with_capacity(count / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let (_, j) = best[mask].expect("solved");
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs
}

fn greedy_pairing(count: usize, dist: &impl Fn(usize, usize) -> usize) -> Vec<(usize, usize)> {
    let mut open: Vec<usize> = (0..count).collect();
    let mut pairs = Vec::with_capacity(count / 2);
    while !open.is_empty() {
        let mut pick = (usize::MAX, 0, 0);
        for (a, &i) in open.iter().enumerate() {
            for (b, &j) in open.iter().enumerate().skip(a + 1) {
                let c = dist(i, j);
                if c < pick.0 {
                    pick = (c, a, b);
                }
            }
        }
        let (_, a, b) = pick;
        pairs.push((open[a], open[b]));
        open.remove(b);
        open.remove(a);
    }
    pairs.sort_unstable();
    pairs
}
