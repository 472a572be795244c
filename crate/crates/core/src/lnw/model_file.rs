use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::features::{Variant, FEATURE_DIM};
use super::mlp::MlpParams;
use super::train::TrainConfig;
use crate::distribution::VOCAB_SIZE;
use crate::error::{Error, Result};

/// First line of a model file; the four parameter arrays follow as raw
/// little-endian f64 values in the order W1, b1, W2, b2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub variant: Variant,
    pub shapes: Vec<Vec<usize>>,
    pub seed: u64,
    pub cfg: TrainConfig,
}

fn shapes_of(p: &MlpParams) -> Vec<Vec<usize>> {
    vec![
        p.w1.shape().to_vec(),
        p.b1.shape().to_vec(),
        p.w2.shape().to_vec(),
        p.b2.shape().to_vec(),
    ]
}

pub fn write_model_to(
    params: &MlpParams,
    variant: Variant,
    cfg: &TrainConfig,
    w: &mut impl Write,
) -> Result<()> {
    let header = ModelHeader {
        variant,
        shapes: shapes_of(params),
        seed: cfg.seed,
        cfg: cfg.clone(),
    };
    serde_json::to_writer(&mut *w, &header)?;
    w.write_all(b"\n")?;
    for t in params.tensors() {
        for x in t {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn write_model(params: &MlpParams, variant: Variant, cfg: &TrainConfig, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_model_to(params, variant, cfg, &mut w)?;
    w.flush()?;
    Ok(())
}

fn read_f64s(r: &mut impl Read, n: usize) -> Result<Vec<f64>> {
    let mut buf = vec![0u8; n * 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::ModelFormat("parameter data truncated".into()))?;
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect())
}

pub fn read_model_from(r: impl Read) -> Result<(MlpParams, ModelHeader)> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: ModelHeader = serde_json::from_str(line.trim_end())
        .map_err(|e| Error::ModelFormat(format!("bad header: {e}")))?;
    let s = &header.shapes;
    let ok = s.len() == 4
        && s[0].len() == 2
        && s[0][1] == FEATURE_DIM
        && s[1] == [s[0][0]]
        && s[2] == [VOCAB_SIZE, s[0][0]]
        && s[3] == [VOCAB_SIZE];
    if !ok {
        return Err(Error::ModelFormat(format!("unexpected shapes {s:?}")));
    }
    let hidden = s[0][0];
    let w1 = Array2::from_shape_vec((hidden, FEATURE_DIM), read_f64s(&mut r, hidden * FEATURE_DIM)?)
        .expect("shape");
    let b1 = Array1::from_vec(read_f64s(&mut r, hidden)?);
    let w2 = Array2::from_shape_vec((VOCAB_SIZE, hidden), read_f64s(&mut r, VOCAB_SIZE * hidden)?)
        .expect("shape");
    let b2 = Array1::from_vec(read_f64s(&mut r, VOCAB_SIZE)?);
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::ModelFormat("trailing bytes after parameters".into()));
    }
    let params = MlpParams { w1, b1, w2, b2 };
    if !params.is_finite() {
        return Err(Error::ModelFormat("non-finite parameter".into()));
    }
    Ok((params, header))
}

pub fn read_model(path: &Path) -> Result<(MlpParams, ModelHeader)> {
    read_model_from(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut rng = crate::rng::seeded(9);
        let p = MlpParams::init(FEATURE_DIM, 5, VOCAB_SIZE, &mut rng);
        let cfg = TrainConfig { hidden: 5, seed: 9, ..TrainConfig::default() };
        let mut buf = Vec::new();
        write_model_to(&p, Variant::Binary, &cfg, &mut buf).unwrap();
        let (q, h) = read_model_from(&buf[..]).unwrap();
        assert_eq!(p, q);
        assert_eq!(h.variant, Variant::Binary);
        assert_eq!(h.cfg, cfg);
        assert_eq!(h.shapes, vec![vec![5, FEATURE_DIM], vec![5], vec![VOCAB_SIZE, 5], vec![VOCAB_SIZE]]);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let p = MlpParams::zeros(FEATURE_DIM, 3, VOCAB_SIZE);
        let mut buf = Vec::new();
        write_model_to(&p, Variant::Counts, &TrainConfig::default(), &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_model_from(&buf[..]), Err(Error::ModelFormat(_))));
    }
}
