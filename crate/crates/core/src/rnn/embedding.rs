//! The frozen embedding layer and its loaders. Row 0 is the padding row and
//! stays exactly zero; training never updates the matrix.

use std::io::BufRead;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::math::lit;
use super::tensor::Tensor;
use super::RnnError;
use crate::textprep::Vocabulary;

#[derive(Debug, Clone)]
pub struct EmbeddingLayer<T> {
    /// V x dim, row-major; row 0 all-zero.
    pub matrix: Tensor<T>,
    pub vocab_size: usize,
    pub dim: usize,
}

impl<T: Float> EmbeddingLayer<T> {
    pub fn param_count(vocab_size: usize, dim: usize) -> usize {
        vocab_size * dim
    }

    pub fn zeros(vocab_size: usize, dim: usize) -> Self {
        EmbeddingLayer {
            matrix: Tensor::zeros(&[vocab_size, dim]),
            vocab_size,
            dim,
        }
    }

    pub fn row(&self, index: usize) -> &[T] {
        &self.matrix.data[index * self.dim..(index + 1) * self.dim]
    }

    /// Copies the rows for a padded sequence slice into `out`
    /// (batch x seq positions handled by the caller).
    pub fn gather(&self, indices: &[usize], out: &mut [T]) {
        debug_assert_eq!(out.len(), indices.len() * self.dim);
        for (slot, &idx) in indices.iter().enumerate() {
            let src = self.row(idx);
            out[slot * self.dim..(slot + 1) * self.dim].copy_from_slice(src);
        }
    }
}

/// Loads pretrained vectors in the text layout `word v1 v2 ... v_dim`.
/// Vocabulary words found in the file get their row; absent words stay
/// all-zero, as does the padding row.
pub fn load_embeddings<T: Float, R: BufRead>(
    reader: R,
    vocab: &Vocabulary,
    dim: usize,
) -> Result<EmbeddingLayer<T>, RnnError> {
    let mut layer = EmbeddingLayer::zeros(vocab.size(), dim);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let word = parts.next().ok_or(RnnError::MalformedEmbedding {
            line: idx + 1,
            reason: "empty line".into(),
        })?;
        let values: Vec<&str> = parts.collect();
        if values.len() != dim {
            return Err(RnnError::MalformedEmbedding {
                line: idx + 1,
                reason: format!("expected {dim} floats, got {}", values.len()),
            });
        }
        let Some(row) = vocab.index_of(word) else {
            continue; // word not in vocabulary
        };
        for (k, value) in values.iter().enumerate() {
            let parsed: f64 = value.parse().map_err(|_| RnnError::MalformedEmbedding {
                line: idx + 1,
                reason: format!("bad float {value:?}"),
            })?;
            layer.matrix.data[row * dim + k] = lit::<T>(parsed);
        }
    }
    Ok(layer)
}

/// Deterministic random embedding rows for runs without a pretrained file;
/// uniform in (-0.5, 0.5) scaled by 1/sqrt(dim), padding row zero.
pub fn random_embeddings<T: Float>(
    vocab_size: usize,
    dim: usize,
    seed: u64,
) -> EmbeddingLayer<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layer = EmbeddingLayer::zeros(vocab_size, dim);
    let scale = 1.0 / (dim as f64).sqrt();
    for row in 1..vocab_size {
        for k in 0..dim {
            layer.matrix.data[row * dim + k] = lit::<T>((rng.gen::<f64>() - 0.5) * scale);
        }
    }
    layer
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::TokenizedDoc;

    fn vocab_of(words: &[&str]) -> Vocabulary {
        let doc = TokenizedDoc::new("d", words.iter().map(|s| s.to_string()).collect());
        Vocabulary::build(&[doc])
    }

    #[test]
    fn loads_rows_for_vocab_words() {
        let vocab = vocab_of(&["alpha", "beta"]);
        let text = "alpha 0.5 -1.0\nbeta 2.0 3.0\nextra 9.0 9.0\n";
        let layer: EmbeddingLayer<f32> =
            load_embeddings(std::io::Cursor::new(text), &vocab, 2).unwrap();
        assert_eq!(layer.row(vocab.index_of("alpha").unwrap()), &[0.5, -1.0]);
        assert_eq!(layer.row(vocab.index_of("beta").unwrap()), &[2.0, 3.0]);
        assert_eq!(layer.row(0), &[0.0, 0.0]);
    }

    #[test]
    fn absent_word_stays_zero() {
        let vocab = vocab_of(&["alpha", "missing"]);
        let text = "alpha 1.0 1.0\n";
        let layer: EmbeddingLayer<f32> =
            load_embeddings(std::io::Cursor::new(text), &vocab, 2).unwrap();
        assert_eq!(layer.row(vocab.index_of("missing").unwrap()), &[0.0, 0.0]);
    }

    #[test]
    fn wrong_float_count_reports_line() {
        let vocab = vocab_of(&["alpha"]);
        let text = "alpha 1.0 2.0\nalpha 1.0\n";
        let err = load_embeddings::<f32, _>(std::io::Cursor::new(text), &vocab, 2).unwrap_err();
        match err {
            RnnError::MalformedEmbedding { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn random_rows_deterministic_and_padding_zero() {
        let a: EmbeddingLayer<f32> = random_embeddings(5, 3, 42);
        let b: EmbeddingLayer<f32> = random_embeddings(5, 3, 42);
        assert_eq!(a.matrix.data, b.matrix.data);
        assert!(a.row(0).iter().all(|&x| x == 0.0));
        assert!(a.row(1).iter().any(|&x| x != 0.0));
    }
}
