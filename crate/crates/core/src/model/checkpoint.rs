//! Binary checkpoint: magic `SPPC`, `u32` version, length-prefixed JSON
//! header, then each parameter as (name, rank, dims, raw `f32`s), all
//! little-endian, closed by a CRC-32 of every preceding byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use super::network::{Model, Parameter};
use crate::error::{Error, Result};
use crate::sim::Measure;
use crate::tensor::Tensor;

pub const MAGIC: &[u8; 4] = b"SPPC";
pub const FORMAT_VERSION: u32 = 1;

/// What produced a checkpoint.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub epochs_run: usize,
    pub steps: usize,
    /// Mean training loss of the last epoch.
    pub final_loss: Option<f64>,
    /// Selection ξ of the stored parameters.
    pub best_xi: Option<f64>,
    pub best_epoch: Option<usize>,
    /// Hex SHA-256 over the training graphs and curves.
    pub dataset_fingerprint: String,
    pub measure: Option<Measure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelCheckpoint {
    pub model: Model,
    pub meta: TrainingMeta,
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    meta: TrainingMeta,
}

impl ModelCheckpoint {
    pub fn new(model: Model, meta: TrainingMeta) -> Self {
        Self { model, meta }
    }

    pub fn config(&self) -> &ModelConfig {
        self.model.config()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let header = serde_json::to_vec(&Header {
            config: self.model.config().clone(),
            meta: self.meta.clone(),
        })?;
        let mut out = Vec::with_capacity(16 + header.len() + 4 * self.model.parameter_count());
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, FORMAT_VERSION);
        put_len(&mut out, header.len())?;
        out.extend_from_slice(&header);
        for p in self.model.parameters() {
            put_len(&mut out, p.name.len())?;
            out.extend_from_slice(p.name.as_bytes());
            put_len(&mut out, p.value.rank())?;
            for &d in p.value.shape() {
                put_len(&mut out, d)?;
            }
            for &v in p.value.data() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        let crc = crc32fast::hash(&out);
        put_u32(&mut out, crc);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(Error::CorruptCheckpoint("missing SPPC magic".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != stored {
            return Err(Error::CorruptCheckpoint("checksum mismatch".into()));
        }
        let mut r = Reader { buf: body, pos: 8 };
        let header_len = r.u32()? as usize;
        let header: Header = serde_json::from_slice(r.take(header_len)?)
            .map_err(|e| Error::CorruptCheckpoint(format!("header: {e}")))?;
        let mut params = Vec::new();
        while r.pos < body.len() {
            let name_len = r.u32()? as usize;
            let name = std::str::from_utf8(r.take(name_len)?)
                .map_err(|_| Error::CorruptCheckpoint("parameter name is not UTF-8".into()))?
                .to_owned();
            let rank = r.u32()? as usize;
            if rank > 4 {
                return Err(Error::CorruptCheckpoint(format!("rank {rank} for {name}")));
            }
            let shape = (0..rank)
                .map(|_| r.u32().map(|d| d as usize))
                .collect::<Result<Vec<_>>>()?;
            let len: usize = shape.iter().product();
            let raw = r.take(len.checked_mul(4).ok_or_else(|| {
                Error::CorruptCheckpoint(format!("oversized tensor {name}"))
            })?)?;
            let data = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
                .collect();
            params.push(Parameter {
                name,
                value: Tensor::new(&shape, data)?,
            });
        }
        let model = Model::from_parameters(header.config, params)
            .map_err(|e| Error::CorruptCheckpoint(e.to_string()))?;
        Ok(Self {
            model,
            meta: header.meta,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_bytes()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_len(out: &mut Vec<u8>, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::Format(format!("{v} does not fit in u32")))?;
    put_u32(out, v);
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::CorruptCheckpoint("truncated".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
}
