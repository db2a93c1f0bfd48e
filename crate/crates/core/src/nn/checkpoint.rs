//! Binary checkpoint: `TOPOCKPT` magic, u32 version, little-endian payload of
//! model configuration, parameters, optimizer state and the run's config hash.

use std::fs;
use std::path::Path;

use super::model::{Activation, EdgeModel, ModelConfig};
use super::optim::{Adam, AdamConfig};
use crate::error::{Error, Result};
use crate::graph::Reader;

const MAGIC: &[u8; 8] = b"TOPOCKPT";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config_hash: String,
    pub model: EdgeModel,
    pub optimizer: Adam,
}

fn put_u64(out: &mut Vec<u8>, x: u64) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_f64s(out: &mut Vec<u8>, xs: &[f64]) {
    put_u64(out, xs.len() as u64);
    for x in xs {
        out.extend_from_slice(&x.to_bits().to_le_bytes());
    }
}

fn put_dims(out: &mut Vec<u8>, dims: &[usize]) {
    put_u64(out, dims.len() as u64);
    for &d in dims {
        put_u64(out, d as u64);
    }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        let c = self.model.config();
        put_u64(&mut out, c.input_dim as u64);
        put_u64(&mut out, c.edge_dim as u64);
        put_dims(&mut out, &c.encoder_dims);
        put_dims(&mut out, &c.classifier_dims);
        put_u64(&mut out, c.classes as u64);
        put_u64(&mut out, c.activation.tag());
        put_f64s(&mut out, &[c.dropout]);
        put_f64s(&mut out, &self.model.params_flat());
        let a = &self.optimizer.config;
        put_f64s(&mut out, &[a.lr, a.beta1, a.beta2, a.eps, a.weight_decay]);
        put_u64(&mut out, self.optimizer.t);
        put_f64s(&mut out, &self.optimizer.m);
        put_f64s(&mut out, &self.optimizer.v);
        put_u64(&mut out, self.config_hash.len() as u64);
        out.extend_from_slice(self.config_hash.as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(8)? != MAGIC {
            return Err(Error::Format("not a model checkpoint".into()));
        }
        let version = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(Error::Format(format!("unsupported checkpoint version {version}")));
        }
        let dims = |r: &mut Reader| -> Result<Vec<usize>> {
            let n = r.usize()?;
            (0..n).map(|_| r.usize()).collect()
        };
        let f64s = |r: &mut Reader| -> Result<Vec<f64>> {
            let n = r.usize()?;
            r.f64s(n)
        };
        let input_dim = r.usize()?;
        let edge_dim = r.usize()?;
        let encoder_dims = dims(&mut r)?;
        let classifier_dims = dims(&mut r)?;
        let classes = r.usize()?;
        let activation = Activation::from_tag(r.u64()?)?;
        let dropout = single(&f64s(&mut r)?)?;
        let config = ModelConfig {
            input_dim,
            edge_dim,
            encoder_dims,
            classifier_dims,
            classes,
            activation,
            dropout,
        };
        let params = f64s(&mut r)?;
        let mut model = EdgeModel::zeroed(config)?;
        model.set_params_flat(&params)?;
        let a = f64s(&mut r)?;
        if a.len() != 5 {
            return Err(Error::Format("bad optimizer header".into()));
        }
        let adam_config = AdamConfig {
            lr: a[0],
            beta1: a[1],
            beta2: a[2],
            eps: a[3],
            weight_decay: a[4],
        };
        let t = r.u64()?;
        let m = f64s(&mut r)?;
        let v = f64s(&mut r)?;
        if m.len() != params.len() || v.len() != params.len() {
            return Err(Error::Format("optimizer state does not match parameter count".into()));
        }
        let mut optimizer = Adam::new(adam_config, params.len())?;
        optimizer.t = t;
        optimizer.m = m;
        optimizer.v = v;
        let n = r.usize()?;
        let config_hash = std::str::from_utf8(r.take(n)?)
            .map_err(|_| Error::Format("config hash is not UTF-8".into()))?
            .to_string();
        r.finish()?;
        Ok(Self {
            config_hash,
            model,
            optimizer,
        })
    }
}

fn single(xs: &[f64]) -> Result<f64> {
    match xs {
        [x] => Ok(*x),
        _ => Err(Error::Format("expected one value".into())),
    }
}

pub fn save_checkpoint(checkpoint: &Checkpoint, path: &Path) -> Result<()> {
    fs::write(path, checkpoint.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Checkpoint::from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn sample() -> Checkpoint {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let config = ModelConfig {
            input_dim: 3,
            edge_dim: 2,
            encoder_dims: vec![4, 4],
            classifier_dims: vec![6],
            classes: 3,
            activation: Activation::Tanh,
            dropout: 0.25,
        };
        let model = EdgeModel::new(config, &mut rng).unwrap();
        let mut optimizer = Adam::new(AdamConfig::default(), model.param_count()).unwrap();
        let mut p = model.params_flat();
        let g: Vec<f64> = p.iter().map(|x| x.sin()).collect();
        optimizer.step_flat(&mut p, &g).unwrap();
        let mut model = model;
        model.set_params_flat(&p).unwrap();
        Checkpoint {
            config_hash: "abc123".into(),
            model,
            optimizer,
        }
    }

    #[test]
    fn round_trips_bit_exactly() {
        let ck = sample();
        let bytes = ck.to_bytes();
        let back = Checkpoint::from_bytes(&bytes).unwrap();
        assert_eq!(back, ck);
        assert_eq!(back.to_bytes(), bytes);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ckpt");
        save_checkpoint(&ck, &path).unwrap();
        assert_eq!(load_checkpoint(&path).unwrap(), ck);
    }

    #[test]
    fn rejects_corruption() {
        let bytes = sample().to_bytes();
        assert!(Checkpoint::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Checkpoint::from_bytes(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(Checkpoint::from_bytes(&extra).is_err());
    }
}
