//! Binary checkpoint: versioned header (magic, version, V, d_e, h, L)
//! followed by row-major little-endian f32 arrays per layer.

use std::io::{Read, Write};

use super::embedding::EmbeddingLayer;
use super::lstm::LstmLayer;
use super::tensor::Tensor;
use super::{DenseLayer, RnnClassifier, RnnError};

const MAGIC: &[u8; 8] = b"RNNCKPT\0";
const VERSION: u32 = 1;

pub fn save_checkpoint<W: Write>(model: &RnnClassifier<f32>, mut w: W) -> Result<(), RnnError> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for dim in [
        model.embedding.vocab_size as u64,
        model.embedding.dim as u64,
        model.lstm.hidden as u64,
        model.seq_len as u64,
    ] {
        w.write_all(&dim.to_le_bytes())?;
    }
    let arrays: [&[f32]; 5] = [
        &model.embedding.matrix.data,
        &model.lstm.w.data,
        &model.lstm.r.data,
        &model.lstm.b.data,
        &model.dense.weights.data,
    ];
    for array in arrays {
        for x in array {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.write_all(&model.dense.bias.to_le_bytes())?;
    Ok(())
}

pub fn load_checkpoint<R: Read>(mut r: R) -> Result<RnnClassifier<f32>, RnnError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(RnnError::BadCheckpoint("bad magic".into()));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != VERSION {
        return Err(RnnError::BadCheckpoint(format!(
            "unsupported version {version}"
        )));
    }
    let read_u64 = |r: &mut R| -> Result<usize, RnnError> {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        Ok(u64::from_le_bytes(buf) as usize)
    };
    let vocab = read_u64(&mut r)?;
    let dim = read_u64(&mut r)?;
    let hidden = read_u64(&mut r)?;
    let seq_len = read_u64(&mut r)?;

    let read_f32s = |len: usize, r: &mut R| -> Result<Vec<f32>, RnnError> {
        let mut buf = vec![0u8; len * 4];
        r.read_exact(&mut buf)?;
        Ok(buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect())
    };
    let gate = 4 * hidden;
    let embedding_data = read_f32s(vocab * dim, &mut r)?;
    let w = read_f32s(gate * dim, &mut r)?;
    let rec = read_f32s(gate * hidden, &mut r)?;
    let b = read_f32s(gate, &mut r)?;
    let dense_w = read_f32s(hidden, &mut r)?;
    let mut bias_buf = [0u8; 4];
    r.read_exact(&mut bias_buf)?;

    Ok(RnnClassifier {
        embedding: EmbeddingLayer {
            matrix: Tensor::from_vec(&[vocab, dim], embedding_data),
            vocab_size: vocab,
            dim,
        },
        lstm: LstmLayer {
            input_size: dim,
            hidden,
            w: Tensor::from_vec(&[gate, dim], w),
            r: Tensor::from_vec(&[gate, hidden], rec),
            b: Tensor::from_vec(&[gate], b),
        },
        dense: DenseLayer {
            weights: Tensor::from_vec(&[hidden], dense_w),
            bias: f32::from_le_bytes(bias_buf),
        },
        seq_len,
    })
}
