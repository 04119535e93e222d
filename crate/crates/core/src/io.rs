//! File documents exchanged by the command-line tool.
//!
//! The default encoding is pretty-printed JSON, one document per file, with
//! doubles written as the shortest decimal that round-trips. Vector-only
//! documents (signal, seed, measurements, wavelet) can also be written in a
//! compact binary layout:
//!
//! ```text
//! bytes 0..8    magic  b"CIRCCSB1"
//! bytes 8..12   kind   u32 LE (1 signal, 2 seed, 3 measurements, 4 wavelet)
//! bytes 12..16  length u32 LE
//! then          length × f64 LE
//! measurements  then length × u8 validity flags
//! ```
//!
//! The binary layout drops metadata.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CsError, Result};
use crate::mask::ValidityMask;
use crate::multinode::ExchangeRecord;
use crate::types::{MaskedMeasurements, Seed, Signal, WaveletCoefficients};

pub const BINARY_MAGIC: &[u8; 8] = b"CIRCCSB1";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prng_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_label: Option<String>,
    /// Full seed of the sensing matrix the measurements were taken with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acquisition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    /// 1-based corrupted indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corruption: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl Meta {
    pub fn is_empty(&self) -> bool {
        *self == Meta::default()
    }

    pub fn push_operation(&mut self, op: impl Into<String>) {
        self.operations.get_or_insert_with(Vec::new).push(op.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub node_id: usize,
    pub data: Vec<f64>,
    pub valid: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeDoc {
    pub round: usize,
    pub from: usize,
    pub to: usize,
    pub length: usize,
}

impl From<&ExchangeRecord> for ExchangeDoc {
    fn from(r: &ExchangeRecord) -> Self {
        ExchangeDoc {
            round: r.round,
            from: r.from_node,
            to: r.to_node,
            length: r.vector_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Signal {
        data: Vec<f64>,
    },
    Seed {
        data: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Measurements {
        data: Vec<f64>,
        valid: Vec<bool>,
    },
    Wavelet {
        data: Vec<f64>,
    },
    Estimate {
        s_hat: i64,
        residual: f64,
        residuals_by_s: Vec<(i64, f64)>,
    },
    Ensemble {
        nodes: usize,
        m: usize,
        n: usize,
        shift_step: usize,
        base_rows: Vec<Vec<f64>>,
        measurements: Vec<NodeRecord>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        filtered: Option<Vec<NodeRecord>>,
        #[serde(default)]
        exchanges: Vec<ExchangeDoc>,
    },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Signal { .. } => "signal",
            Payload::Seed { .. } => "seed",
            Payload::Measurements { .. } => "measurements",
            Payload::Wavelet { .. } => "wavelet",
            Payload::Estimate { .. } => "estimate",
            Payload::Ensemble { .. } => "ensemble",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Meta::is_empty")]
    pub meta: Meta,
}

impl Document {
    pub fn new(payload: Payload, meta: Meta) -> Self {
        Document { payload, meta }
    }

    pub fn signal(x: &Signal) -> Self {
        let meta = Meta {
            n: Some(x.len()),
            ..Meta::default()
        };
        Document::new(Payload::Signal { data: x.as_slice().to_vec() }, meta)
    }

    pub fn seed(seed: &Seed, prng_seed: Option<u64>) -> Self {
        let meta = Meta {
            n: Some(seed.len()),
            prng_seed,
            ..Meta::default()
        };
        Document::new(
            Payload::Seed {
                data: seed.as_slice().to_vec(),
                label: seed.label().map(str::to_owned),
            },
            meta,
        )
    }

    /// Measurements document; `corruption` and `m` are filled from `y`.
    pub fn measurements(y: &MaskedMeasurements, mut meta: Meta) -> Self {
        meta.m = Some(y.len());
        meta.corruption = Some(y.corrupted_indices());
        if meta.seed_label.is_none() {
            meta.seed_label = y.seed_ref().map(str::to_owned);
        }
        Document::new(
            Payload::Measurements {
                data: y.data().to_vec(),
                valid: y.mask().as_slice().to_vec(),
            },
            meta,
        )
    }

    pub fn wavelet(theta: &WaveletCoefficients) -> Self {
        Document::new(Payload::Wavelet { data: theta.as_slice().to_vec() }, Meta::default())
    }

    fn wrong_kind(&self, want: &str) -> CsError {
        CsError::InvalidInput(format!("expected a {want} document, found {}", self.payload.kind()))
    }

    pub fn to_signal(&self) -> Result<Signal> {
        match &self.payload {
            Payload::Signal { data } => Signal::new(data.clone()),
            _ => Err(self.wrong_kind("signal")),
        }
    }

    pub fn to_seed(&self) -> Result<Seed> {
        match &self.payload {
            Payload::Seed { data, label } => {
                let seed = Seed::new(data.clone())?;
                Ok(match label {
                    Some(l) => seed.with_label(l.clone()),
                    None => seed,
                })
            }
            _ => Err(self.wrong_kind("seed")),
        }
    }

    pub fn to_measurements(&self) -> Result<MaskedMeasurements> {
        match &self.payload {
            Payload::Measurements { data, valid } => {
                let mask = ValidityMask::from_bools(valid.clone())?;
                Ok(MaskedMeasurements::new(data.clone(), mask)?.with_seed_ref(self.meta.seed_label.clone()))
            }
            _ => Err(self.wrong_kind("measurements")),
        }
    }

    pub fn to_wavelet(&self) -> Result<WaveletCoefficients> {
        match &self.payload {
            Payload::Wavelet { data } => WaveletCoefficients::new(data.clone()),
            _ => Err(self.wrong_kind("wavelet")),
        }
    }

    /// Seed recorded in the metadata, carrying the recorded label.
    pub fn meta_seed(&self) -> Result<Option<Seed>> {
        self.meta
            .seed
            .as_ref()
            .map(|data| {
                let seed = Seed::new(data.clone())?;
                Ok(match &self.meta.seed_label {
                    Some(l) => seed.with_label(l.clone()),
                    None => seed,
                })
            })
            .transpose()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| CsError::InvalidInput(format!("cannot encode document: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CsError::InvalidInput(format!("cannot parse document: {e}")))
    }

    pub fn to_binary(&self) -> Result<Vec<u8>> {
        let (kind, data, valid): (u32, &[f64], Option<&[bool]>) = match &self.payload {
            Payload::Signal { data } => (1, data, None),
            Payload::Seed { data, .. } => (2, data, None),
            Payload::Measurements { data, valid } => (3, data, Some(valid)),
            Payload::Wavelet { data } => (4, data, None),
            other => {
                return Err(CsError::InvalidInput(format!(
                    "{} documents have no binary encoding",
                    other.kind()
                )))
            }
        };
        let len = u32::try_from(data.len())
            .map_err(|_| CsError::InvalidInput("document too long for binary encoding".into()))?;
        let mut out = Vec::with_capacity(16 + 9 * data.len());
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&kind.to_le_bytes());
        out.extend_from_slice(&len.to_le_bytes());
        for v in data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        if let Some(valid) = valid {
            out.extend(valid.iter().map(|&b| u8::from(b)));
        }
        Ok(out)
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        let bad = |what: &str| CsError::InvalidInput(format!("malformed binary document: {what}"));
        if bytes.len() < 16 || &bytes[..8] != BINARY_MAGIC {
            return Err(bad("missing header"));
        }
        let kind = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
        let len = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes")) as usize;
        let body = &bytes[16..];
        let mask_len = if kind == 3 { len } else { 0 };
        if body.len() != 8 * len + mask_len {
            return Err(bad("length does not match header"));
        }
        let data: Vec<f64> = body[..8 * len]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let payload = match kind {
            1 => Payload::Signal { data },
            2 => Payload::Seed { data, label: None },
            3 => {
                let valid = body[8 * len..]
                    .iter()
                    .map(|&b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(bad("validity flag")),
                    })
                    .collect::<Result<_>>()?;
                Payload::Measurements { data, valid }
            }
            4 => Payload::Wavelet { data },
            _ => return Err(bad("unknown kind")),
        };
        Ok(Document::new(payload, Meta::default()))
    }
}

/// Reads a JSON or binary document, detected by the binary magic.
pub fn read_document(path: &Path) -> std::io::Result<Result<Document>> {
    let bytes = fs::read(path)?;
    Ok(if bytes.starts_with(BINARY_MAGIC) {
        Document::from_binary(&bytes)
    } else {
        match std::str::from_utf8(&bytes) {
            Ok(text) => Document::from_json(text),
            Err(_) => Err(CsError::InvalidInput("document is neither JSON nor binary".into())),
        }
    })
}

pub fn write_document(path: &Path, doc: &Document, binary: bool) -> std::io::Result<Result<()>> {
    let bytes = match if binary { doc.to_binary() } else { doc.to_json().map(String::into_bytes) } {
        Ok(b) => b,
        Err(e) => return Ok(Err(e)),
    };
    fs::write(path, bytes)?;
    Ok(Ok(()))
}
