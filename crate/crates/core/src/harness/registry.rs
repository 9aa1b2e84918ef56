use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::decoders::{Decoder, Endpoint, ExternalDecoder, MatchDecoder, TableDecoder};
use crate::error::{Error, Result};
use crate::golay::{build_golay_css, PolyLabel};
use crate::toric::ToricLattice;

/// `golay:h1|h2|h3` or `toric:<d>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CodeId {
    Golay(PolyLabel),
    Toric(usize),
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeId::Golay(label) => write!(f, "golay:{label}"),
            CodeId::Toric(d) => write!(f, "toric:{d}"),
        }
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownCode(s.to_string());
        let (family, param) = s.split_once(':').ok_or_else(unknown)?;
        match family {
            "golay" => param.parse().map(CodeId::Golay).map_err(|_| unknown()),
            "toric" => match param.parse::<usize>() {
                Ok(d) if (2..=64).contains(&d) => Ok(CodeId::Toric(d)),
                _ => Err(unknown()),
            },
            _ => Err(unknown()),
        }
    }
}

impl TryFrom<String> for CodeId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CodeId> for String {
    fn from(id: CodeId) -> String {
        id.to_string()
    }
}

impl CodeId {
    pub fn build(self) -> Result<CodeBundle> {
        match self {
            CodeId::Golay(label) => Ok(CodeBundle {
                id: self,
                code: build_golay_css(label)?,
                lattice: None,
            }),
            CodeId::Toric(d) => {
                let lattice = ToricLattice::new(d)?;
                Ok(CodeBundle {
                    id: self,
                    code: lattice.css_code()?,
                    lattice: Some(lattice),
                })
            }
        }
    }
}

/// A constructed code plus whatever structure its native decoder needs.
#[derive(Clone, Debug)]
pub struct CodeBundle {
    pub id: CodeId,
    pub code: CssCode,
    pub lattice: Option<ToricLattice>,
}

impl CodeBundle {
    pub fn decoder(&self, id: &DecoderId) -> Result<Box<dyn Decoder>> {
        match id {
            DecoderId::Table => match self.id {
                CodeId::Golay(_) => Ok(Box::new(TableDecoder::new(&self.code)?)),
                _ => Err(Error::Config(format!(
                    "the table decoder needs a Golay code, not {}",
                    self.id
                ))),
            },
            DecoderId::Match => match &self.lattice {
                Some(lattice) => Ok(Box::new(MatchDecoder::new(lattice.clone()))),
                None => Err(Error::Config(format!(
                    "the match decoder needs a toric code, not {}",
                    self.id
                ))),
            },
            DecoderId::External(target) => Ok(Box::new(ExternalDecoder::connect(
                &Endpoint::parse(target)?,
                &self.id.to_string(),
                self.code.syndrome_len(),
                self.code.label_len(),
            )?)),
        }
    }

    /// The decoder used when none is named.
    pub fn default_decoder(&self) -> DecoderId {
        match self.id {
            CodeId::Golay(_) => DecoderId::Table,
            CodeId::Toric(_) => DecoderId::Match,
        }
    }
}

/// `table`, `match`, or `external:<command | tcp://addr | unix:path>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DecoderId {
    Table,
    Match,
    External(String),
}

impl fmt::Display for DecoderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderId::Table => f.write_str("table"),
            DecoderId::Match => f.write_str("match"),
            DecoderId::External(t) => write!(f, "external:{t}"),
        }
    }
}

impl FromStr for DecoderId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(DecoderId::Table),
            "match" => Ok(DecoderId::Match),
            _ => match s.strip_prefix("external:") {
                Some(t) if !t.trim().is_empty() => Ok(DecoderId::External(t.to_string())),
                _ => Err(Error::UnknownDecoder(s.to_string())),
            },
        }
    }
}

impl TryFrom<String> for DecoderId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DecoderId> for String {
    fn from(id: DecoderId) -> String {
        id.to_string()
    }
}
