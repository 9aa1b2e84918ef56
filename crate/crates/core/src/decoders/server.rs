use std::io::{BufRead, Write};

use crate::css::CssCode;
use crate::decoders::external::PROTOCOL_VERSION;
use crate::decoders::Decoder;
use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ServeOutcome {
    pub requests: usize,
    /// False when the client disconnected without `BYE`.
    pub clean: bool,
}

/// Answers one client connection with `decoder`.
///
/// A handshake naming another code or other dimensions is refused with
/// `ERR code` / `ERR dims`, after which the connection ends. Request lines that
/// are not `n_syndrome` bits get `ERR syntax` and the session continues.
pub fn serve_connection(
    decoder: &dyn Decoder,
    code: &CssCode,
    reader: &mut dyn BufRead,
    writer: &mut dyn Write,
) -> Result<ServeOutcome> {
    let n_syndrome = code.syndrome_len();
    let n_output = code.label_len();
    let mut line = String::new();
    let reply = |w: &mut dyn Write, msg: &str| -> Result<()> {
        w.write_all(msg.as_bytes())?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    };

    if reader.read_line(&mut line)? == 0 {
        return Ok(ServeOutcome {
            requests: 0,
            clean: false,
        });
    }
    let parts: Vec<&str> = line.split_whitespace().collect();
    let refusal = match parts.as_slice() {
        ["HELLO", version, id, ns, no] if *version == PROTOCOL_VERSION => {
            if *id != code.name() {
                Some("ERR code")
            } else if ns.parse::<usize>().ok() != Some(n_syndrome) || no.parse::<usize>().ok() != Some(n_output) {
                Some("ERR dims")
            } else {
                None
            }
        }
        ["HELLO", ..] => Some("ERR version"),
        _ => Some("ERR syntax"),
    };
    if let Some(msg) = refusal {
        reply(writer, msg)?;
        return Err(Error::Protocol(format!(
            "refused handshake {:?}: {msg}",
            line.trim_end()
        )));
    }
    reply(writer, "OK")?;

    let mut requests = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Ok(ServeOutcome { requests, clean: false });
        }
        let msg = line.trim_end_matches(['\n', '\r']);
        if msg == "BYE" {
            return Ok(ServeOutcome { requests, clean: true });
        }
        let bits = match msg.parse::<BitVec>() {
            Ok(b) if b.len() == n_syndrome => b,
            _ => {
                reply(writer, "ERR syntax")?;
                continue;
            }
        };
        let syndrome = code.syndrome_from_bits(bits)?;
        let out = match decoder.decode(&syndrome) {
            Ok(o) => o.correction.to_label().to_string(),
            Err(e) => format!("ERR {e}"),
        };
        reply(writer, &out)?;
        requests += 1;
    }
}
