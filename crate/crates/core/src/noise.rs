//! Independent single-qubit Pauli noise with X/Z correlation parameter `eta`.
//!
//! `px = pz = p / (eta + 2)` and `py = eta·p / (eta + 2)`, so `px + py + pz = p`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::css::{Pauli, PauliError};
use crate::error::{Error, Result};

/// Correlation values swept by the harness by default.
pub const DEFAULT_ETAS: [f64; 3] = [0.25, 1.0, 3.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    p: f64,
    eta: f64,
    px: f64,
    py: f64,
    pz: f64,
}

impl NoiseModel {
    pub fn new(p: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Noise(format!("p must lie in [0, 1], got {p}")));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::Noise(format!("eta must be a finite value >= 0, got {eta}")));
        }
        let px = p / (eta + 2.0);
        let py = eta * p / (eta + 2.0);
        Ok(NoiseModel { p, eta, px, py, pz: px })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn px(&self) -> f64 {
        self.px
    }

    pub fn py(&self) -> f64 {
        self.py
    }

    pub fn pz(&self) -> f64 {
        self.pz
    }

    pub fn probability_of(&self, pauli: Pauli) -> f64 {
        match pauli {
            Pauli::I => 1.0 - self.p,
            Pauli::X => self.px,
            Pauli::Y => self.py,
            Pauli::Z => self.pz,
        }
    }

    /// Draws one single-qubit Pauli from a uniform variate.
    #[inline]
    pub fn sample_pauli<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let u: f64 = rng.gen();
        if u < self.px {
            Pauli::X
        } else if u < self.px + self.py {
            Pauli::Y
        } else if u < self.px + self.py + self.pz {
            Pauli::Z
        } else {
            Pauli::I
        }
    }

    pub fn sample_error<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliError {
        let mut e = PauliError::identity(n);
        for q in 0..n {
            let pauli = self.sample_pauli(rng);
            if pauli != Pauli::I {
                e.set(q, pauli);
            }
        }
        e
    }

    /// Probability of drawing exactly `e`.
    pub fn error_probability(&self, e: &PauliError) -> f64 {
        (0..e.num_qubits()).map(|q| self.probability_of(e.get(q))).product()
    }
}

/// Deterministic per-trial random streams.
///
/// The key is expanded from `seed` with ChaCha's `seed_from_u64`; the stream id
/// is `(point << 40) | trial`, so every `(seed, point, trial)` triple owns an
/// independent ChaCha12 stream regardless of thread scheduling or platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamSeeder {
    seed: u64,
}

impl StreamSeeder {
    pub const MAX_TRIALS: u64 = 1 << 40;

    pub fn new(seed: u64) -> Self {
        StreamSeeder { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, point: u64, trial: u64) -> ChaCha12Rng {
        assert!(trial < Self::MAX_TRIALS, "trial index {trial} exceeds 2^40");
        assert!(point < 1 << 24, "point index {point} exceeds 2^24");
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream((point << 40) | trial);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn invalid_parameters() {
        assert!(NoiseModel::new(-0.1, 1.0).is_err());
        assert!(NoiseModel::new(1.1, 1.0).is_err());
        assert!(NoiseModel::new(0.1, -1.0).is_err());
        assert!(NoiseModel::new(0.1, f64::NAN).is_err());
        assert!(NoiseModel::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn uniform_at_eta_one() {
        let m = NoiseModel::new(0.03, 1.0).unwrap();
        assert!(close(m.px(), 0.01) && close(m.py(), 0.01) && close(m.pz(), 0.01));
    }

    #[test]
    fn eta_three() {
        let m = NoiseModel::new(0.05, 3.0).unwrap();
        assert!(close(m.px(), 0.01));
        assert!(close(m.pz(), 0.01));
        assert!(close(m.py(), 0.03));
        assert!(close(m.px() + m.py() + m.pz(), 0.05));
    }

    #[test]
    fn zero_p_is_identity() {
        let m = NoiseModel::new(0.0, 1.0).unwrap();
        let mut rng = StreamSeeder::new(3).stream(0, 0);
        for _ in 0..100 {
            assert!(m.sample_error(23, &mut rng).is_identity());
        }
    }

    #[test]
    fn eta_zero_never_draws_y() {
        let m = NoiseModel::new(0.5, 0.0).unwrap();
        let mut rng = StreamSeeder::new(11).stream(0, 0);
        assert!((0..100_000).all(|_| m.sample_pauli(&mut rng) != Pauli::Y));
    }

    #[test]
    fn error_probabilities() {
        let m = NoiseModel::new(0.03, 1.0).unwrap();
        let id = PauliError::identity(23);
        assert!(close(m.error_probability(&id), 0.97f64.powi(23)));
        let x = PauliError::single(23, 4, Pauli::X);
        assert!(close(m.error_probability(&x), 0.01 * 0.97f64.powi(22)));
    }

    #[test]
    fn probabilities_normalise_over_two_qubits() {
        let m = NoiseModel::new(0.2, 0.25).unwrap();
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut total = 0.0;
        for a in all {
            for b in all {
                let mut e = PauliError::identity(2);
                e.set(0, a);
                e.set(1, b);
                total += m.error_probability(&e);
            }
        }
        assert!(close(total, 1.0));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let m = NoiseModel::new(0.3, 1.0).unwrap();
        let s = StreamSeeder::new(42);
        let a = m.sample_error(50, &mut s.stream(1, 7));
        let b = m.sample_error(50, &mut s.stream(1, 7));
        assert_eq!(a, b);
        let c = m.sample_error(50, &mut s.stream(1, 8));
        let d = m.sample_error(50, &mut s.stream(2, 7));
        assert!(a != c || a != d);
    }

    #[test]
    fn stream_values_are_pinned() {
        // guards against silent changes in the generator or key expansion
        let mut rng = StreamSeeder::new(2024).stream(3, 5);
        let first: u64 = rng.gen();
        let mut again = StreamSeeder::new(2024).stream(3, 5);
        assert_eq!(first, again.gen::<u64>());
        let m = NoiseModel::new(0.5, 1.0).unwrap();
        let e = m.sample_error(23, &mut StreamSeeder::new(2024).stream(3, 5));
        assert_eq!(e.to_string(), PINNED_SAMPLE);
    }

    const PINNED_SAMPLE: &str = "ZXZYIZYZZYXIIIIIIIIIIZI";
}
