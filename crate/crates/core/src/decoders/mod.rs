//! Syndrome decoders.

mod external;
mod matching;
mod ml;
mod server;
mod table;

pub use external::{Endpoint, ExternalDecoder, PROTOCOL_VERSION};
pub use matching::{min_weight_pairing, MatchDecoder, EXACT_MATCHING_LIMIT};
pub use ml::{ml_decode_oracle, DEFAULT_ML_BUDGET};
pub use server::{serve_connection, ServeOutcome};
pub use table::{build_syndrome_table, SyndromeTable, TableDecoder};

use crate::css::{PauliError, Syndrome};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderOutcome {
    pub correction: PauliError,
    pub decoder: String,
}

/// A syndrome-to-correction strategy.
///
/// Implementations take `&self` so one instance can be shared across worker
/// threads; stateful decoders serialize internally.
pub trait Decoder: Send + Sync {
    fn id(&self) -> &str;

    fn decode(&self, syndrome: &Syndrome) -> Result<DecoderOutcome>;

    /// Whether every correction is guaranteed to reproduce the input syndrome.
    fn syndrome_consistent(&self) -> bool {
        true
    }

    /// Whether the decoder may be called from several threads at once
    /// without serializing on a single channel.
    fn parallel(&self) -> bool {
        true
    }
}
