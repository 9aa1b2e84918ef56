//! Client side of the line protocol used to plug in out-of-process decoders.
//!
//! ```text
//! client: HELLO QGEC1 <code-id> <n_syndrome> <n_output>
//! server: OK                  (or ERR <reason>)
//! client: <n_syndrome bits>   server: <n_output bits>   (repeated)
//! client: BYE
//! ```
//!
//! Lines end in LF. The server may run as a subprocess speaking on its
//! stdin/stdout or listen on a TCP or Unix stream socket.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::path::PathBuf;
use std::process::{Child, Command, Stdio};
use std::sync::Mutex;

use crate::css::{PauliError, Syndrome};
use crate::decoders::{Decoder, DecoderOutcome};
use crate::error::{Error, Result};
use crate::gf2::BitVec;

pub const PROTOCOL_VERSION: &str = "QGEC1";

/// Where an external decoder lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// Program and arguments, spawned with piped stdin/stdout.
    Command(Vec<String>),
    /// `tcp://host:port`
    Tcp(String),
    /// `unix:/path/to/socket`
    Unix(PathBuf),
}

impl Endpoint {
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(addr) = s.strip_prefix("tcp://") {
            return Ok(Endpoint::Tcp(addr.to_string()));
        }
        if let Some(path) = s.strip_prefix("unix:") {
            return Ok(Endpoint::Unix(PathBuf::from(path)));
        }
        let argv: Vec<String> = s.split_whitespace().map(str::to_string).collect();
        if argv.is_empty() {
            return Err(Error::Config("empty external decoder command".into()));
        }
        Ok(Endpoint::Command(argv))
    }
}

struct Channel {
    reader: Box<dyn BufRead + Send>,
    writer: Box<dyn Write + Send>,
    child: Option<Child>,
    open: bool,
}

impl Channel {
    fn send(&mut self, line: &str) -> Result<()> {
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .and_then(|_| self.writer.flush())
            .map_err(|e| Error::Protocol(format!("channel closed while sending: {e}")))
    }

    fn receive(&mut self) -> Result<String> {
        let mut line = String::new();
        let read = self
            .reader
            .read_line(&mut line)
            .map_err(|e| Error::Protocol(format!("channel read failed: {e}")))?;
        if read == 0 {
            return Err(Error::Protocol("channel closed by decoder".into()));
        }
        if line.ends_with('\n') {
            line.pop();
        }
        Ok(line)
    }

    fn close(&mut self) {
        if self.open {
            self.open = false;
            let _ = self.send("BYE");
        }
        if let Some(mut child) = self.child.take() {
            let _ = child.wait();
        }
    }
}

/// A decoder reached over the line protocol. One request is in flight at a time.
pub struct ExternalDecoder {
    id: String,
    code_id: String,
    n_syndrome: usize,
    n_output: usize,
    channel: Mutex<Channel>,
}

impl ExternalDecoder {
    pub fn connect(endpoint: &Endpoint, code_id: &str, n_syndrome: usize, n_output: usize) -> Result<Self> {
        let channel = match endpoint {
            Endpoint::Command(argv) => {
                let mut child = Command::new(&argv[0])
                    .args(&argv[1..])
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::inherit())
                    .spawn()
                    .map_err(|e| Error::Protocol(format!("cannot start `{}`: {e}", argv.join(" "))))?;
                let stdin = child.stdin.take().expect("piped stdin");
                let stdout = child.stdout.take().expect("piped stdout");
                Channel {
                    reader: Box::new(BufReader::new(stdout)),
                    writer: Box::new(stdin),
                    child: Some(child),
                    open: true,
                }
            }
            Endpoint::Tcp(addr) => {
                let stream =
                    TcpStream::connect(addr).map_err(|e| Error::Protocol(format!("cannot connect to {addr}: {e}")))?;
                stream.set_nodelay(true)?;
                Channel {
                    reader: Box::new(BufReader::new(stream.try_clone()?)),
                    writer: Box::new(stream),
                    child: None,
                    open: true,
                }
            }
            #[cfg(unix)]
            Endpoint::Unix(path) => {
                let stream = std::os::unix::net::UnixStream::connect(path)
                    .map_err(|e| Error::Protocol(format!("cannot connect to {}: {e}", path.display())))?;
                Channel {
                    reader: Box::new(BufReader::new(stream.try_clone()?)),
                    writer: Box::new(stream),
                    child: None,
                    open: true,
                }
            }
            #[cfg(not(unix))]
            Endpoint::Unix(_) => return Err(Error::Config("unix sockets are not supported here".into())),
        };
        Self::handshake(channel, endpoint_label(endpoint), code_id, n_syndrome, n_output)
    }

    /// Runs the protocol over an already-open reader/writer pair.
    pub fn from_stream(
        reader: impl BufRead + Send + 'static,
        writer: impl Write + Send + 'static,
        code_id: &str,
        n_syndrome: usize,
        n_output: usize,
    ) -> Result<Self> {
        let channel = Channel {
            reader: Box::new(reader),
            writer: Box::new(writer),
            child: None,
            open: true,
        };
        Self::handshake(channel, "external:stream".into(), code_id, n_syndrome, n_output)
    }

    fn handshake(mut channel: Channel, id: String, code_id: &str, n_syndrome: usize, n_output: usize) -> Result<Self> {
        channel.send(&format!("HELLO {PROTOCOL_VERSION} {code_id} {n_syndrome} {n_output}"))?;
        let reply = channel.receive()?;
        if reply != "OK" {
            channel.open = false;
            channel.close();
            return Err(Error::Protocol(format!("handshake rejected: {reply}")));
        }
        Ok(ExternalDecoder {
            id,
            code_id: code_id.to_string(),
            n_syndrome,
            n_output,
            channel: Mutex::new(channel),
        })
    }

    pub fn code_id(&self) -> &str {
        &self.code_id
    }

    /// Sends `BYE` and waits for a spawned server to exit.
    pub fn close(self) {
        drop(self)
    }

    /// Raw request: syndrome bits in, correction bits out.
    pub fn request(&self, syndrome: &BitVec) -> Result<BitVec> {
        if syndrome.len() != self.n_syndrome {
            return Err(Error::DimensionMismatch {
                expected: self.n_syndrome,
                found: syndrome.len(),
            });
        }
        let mut channel = self.channel.lock().unwrap_or_else(|e| e.into_inner());
        if !channel.open {
            return Err(Error::Protocol("channel already closed".into()));
        }
        channel.send(&syndrome.to_string())?;
        let reply = channel.receive()?;
        if reply.len() != self.n_output {
            return Err(Error::Protocol(format!(
                "expected {} bits, got {} characters: {reply:?}",
                self.n_output,
                reply.len()
            )));
        }
        reply
            .parse::<BitVec>()
            .map_err(|e| Error::Protocol(format!("bad response {reply:?}: {e}")))
    }
}

fn endpoint_label(endpoint: &Endpoint) -> String {
    match endpoint {
        Endpoint::Command(argv) => format!("external:{}", argv.join(" ")),
        Endpoint::Tcp(addr) => format!("external:tcp://{addr}"),
        Endpoint::Unix(path) => format!("external:unix:{}", path.display()),
    }
}

impl Decoder for ExternalDecoder {
    fn id(&self) -> &str {
        &self.id
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecoderOutcome> {
        let label = self.request(syndrome.bits())?;
        Ok(DecoderOutcome {
            correction: PauliError::from_label(&label)?,
            decoder: self.id.clone(),
        })
    }

    fn syndrome_consistent(&self) -> bool {
        false
    }

    fn parallel(&self) -> bool {
        false
    }
}

impl Drop for ExternalDecoder {
    fn drop(&mut self) {
        self.channel.get_mut().unwrap_or_else(|e| e.into_inner()).close();
    }
}
