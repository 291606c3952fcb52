//! The trust classifier: a frozen embedding layer feeding a 128-unit LSTM
//! whose final hidden state drives a sigmoid dense head. Forward,
//! backpropagation through time, Adam, training, evaluation, and
//! single-article prediction are all implemented here; the embedding matrix
//! is never updated.

mod adam;
mod checkpoint;
mod embedding;
mod lstm;
mod math;
mod tensor;

pub use adam::{Adam, AdamConfig};
pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use embedding::{load_embeddings, random_embeddings, EmbeddingLayer};
pub use lstm::LstmLayer;
pub use tensor::Tensor;

use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::labeling::TrustClass;
use crate::textprep::{clean, pad, to_sequence, PaddedSequence, StopwordList, Vocabulary};
use math::{lit, sigmoid};

#[derive(Debug, Error)]
pub enum RnnError {
    #[error("embedding file line {line}: {reason}")]
    MalformedEmbedding { line: usize, reason: String },
    #[error("sequence index {index} out of range for vocabulary of {vocab}")]
    IndexOutOfRange { index: usize, vocab: usize },
    #[error("probability/label length mismatch: {probs} vs {labels}")]
    LengthMismatch { probs: usize, labels: usize },
    #[error("training set is empty")]
    EmptyTrainSet,
    #[error("evaluation set is empty")]
    EmptyEvalSet,
    #[error("non-finite parameters after epoch {epoch}")]
    NonFinite { epoch: usize },
    #[error("checkpoint file: {0}")]
    BadCheckpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Dense sigmoid head: hidden -> 1.
#[derive(Debug, Clone)]
pub struct DenseLayer<T> {
    pub weights: Tensor<T>,
    pub bias: T,
}

impl<T: Float> DenseLayer<T> {
    pub fn param_count(hidden: usize) -> usize {
        hidden + 1
    }

    fn init<R: Rng>(hidden: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (hidden + 1) as f64).sqrt();
        DenseLayer {
            weights: Tensor::from_vec(
                &[hidden],
                (0..hidden)
                    .map(|_| lit::<T>((rng.gen::<f64>() * 2.0 - 1.0) * limit))
                    .collect(),
            ),
            bias: T::zero(),
        }
    }
}

/// Model dimensions; parameter counts are closed-form and need no
/// allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelDims {
    pub vocab: usize,
    pub embed_dim: usize,
    pub hidden: usize,
    pub seq_len: usize,
}

impl Default for ModelDims {
    fn default() -> Self {
        ModelDims {
            vocab: 0,
            embed_dim: 100,
            hidden: 128,
            seq_len: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamCount {
    pub embedding: usize,
    pub lstm: usize,
    pub dense: usize,
    pub total: usize,
    pub trainable: usize,
    pub frozen: usize,
}

impl ModelDims {
    pub fn param_count(&self) -> ParamCount {
        let embedding = EmbeddingLayer::<f32>::param_count(self.vocab, self.embed_dim);
        let lstm = LstmLayer::<f32>::param_count(self.embed_dim, self.hidden);
        let dense = DenseLayer::<f32>::param_count(self.hidden);
        ParamCount {
            embedding,
            lstm,
            dense,
            total: embedding + lstm + dense,
            trainable: lstm + dense,
            frozen: embedding,
        }
    }
}

/// The full classifier. The decision threshold is fixed at 0.5, strictly
/// greater meaning trustworthy.
#[derive(Debug, Clone)]
pub struct RnnClassifier<T> {
    pub embedding: EmbeddingLayer<T>,
    pub lstm: LstmLayer<T>,
    pub dense: DenseLayer<T>,
    pub seq_len: usize,
}

pub const DECISION_THRESHOLD: f64 = 0.5;

impl<T: Float> RnnClassifier<T> {
    /// Builds the trainable layers around a ready embedding matrix.
    pub fn new(embedding: EmbeddingLayer<T>, hidden: usize, seq_len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lstm = LstmLayer::init(embedding.dim, hidden, &mut rng);
        let dense = DenseLayer::init(hidden, &mut rng);
        RnnClassifier {
            embedding,
            lstm,
            dense,
            seq_len,
        }
    }

    pub fn dims(&self) -> ModelDims {
        ModelDims {
            vocab: self.embedding.vocab_size,
            embed_dim: self.embedding.dim,
            hidden: self.lstm.hidden,
            seq_len: self.seq_len,
        }
    }

    pub fn param_count(&self) -> ParamCount {
        self.dims().param_count()
    }

    fn all_finite(&self) -> bool {
        self.lstm.w.all_finite()
            && self.lstm.r.all_finite()
            && self.lstm.b.all_finite()
            && self.dense.weights.all_finite()
            && self.dense.bias.is_finite()
    }

    /// Runs the batch through embedding, L LSTM steps, and the sigmoid head.
    /// Padding indices contribute zero rows; there is no masking.
    pub fn forward(&self, batch: &[PaddedSequence]) -> Result<Vec<T>, RnnError> {
        Ok(self.forward_cached(batch)?.probs)
    }

    fn forward_cached(&self, batch: &[PaddedSequence]) -> Result<ForwardCache<T>, RnnError> {
        let b = batch.len();
        let l = self.seq_len;
        let h = self.lstm.hidden;
        let d = self.embedding.dim;
        for seq in batch {
            debug_assert_eq!(seq.indices.len(), l);
            for &idx in &seq.indices {
                if idx >= self.embedding.vocab_size {
                    return Err(RnnError::IndexOutOfRange {
                        index: idx,
                        vocab: self.embedding.vocab_size,
                    });
                }
            }
        }

        let mut xs = Vec::with_capacity(l);
        let mut caches = Vec::with_capacity(l);
        let mut h_prev = vec![T::zero(); b * h];
        let mut c_prev = vec![T::zero(); b * h];
        let mut x_t = vec![T::zero(); b * d];
        let mut idx_t = vec![0usize; b];
        for t in 0..l {
            for (n, seq) in batch.iter().enumerate() {
                idx_t[n] = seq.indices[t];
            }
            self.embedding.gather(&idx_t, &mut x_t);
            let cache = self.lstm.step_forward(&x_t, &h_prev, &c_prev, b);
            h_prev.copy_from_slice(&cache.h);
            c_prev.copy_from_slice(&cache.c);
            xs.push(x_t.clone());
            caches.push(cache);
        }

        let mut probs = Vec::with_capacity(b);
        for n in 0..b {
            let hn = &h_prev[n * h..(n + 1) * h];
            let mut z = self.dense.bias;
            for (a, w) in hn.iter().zip(&self.dense.weights.data) {
                z = z + *a * *w;
            }
            let p = sigmoid(z);
            debug_assert!(p.is_finite());
            probs.push(p);
        }

        Ok(ForwardCache { xs, caches, probs })
    }

    /// Mean binary cross-entropy loss and parameter gradients for one batch,
    /// by backpropagation through all `seq_len` steps. The embedding receives
    /// no gradient.
    pub fn loss_and_grads(
        &self,
        batch: &[PaddedSequence],
        labels: &[TrustClass],
    ) -> Result<(f64, Grads<T>), RnnError> {
        if batch.len() != labels.len() {
            return Err(RnnError::LengthMismatch {
                probs: batch.len(),
                labels: labels.len(),
            });
        }
        let fwd = self.forward_cached(batch)?;
        let b = batch.len();
        let h = self.lstm.hidden;
        let loss = bce_loss(&fwd.probs, labels)?;

        let mut grads = Grads::zeros(&self.dims());

        // Head gradients; dz = (p - y) / B.
        let scale = lit::<T>(1.0 / b as f64);
        let last_h = &fwd.caches[self.seq_len - 1].h;
        let mut dh = vec![T::zero(); b * h];
        for n in 0..b {
            let y = lit::<T>(labels[n].as_u8() as f64);
            let dz = (fwd.probs[n] - y) * scale;
            grads.dense_b = grads.dense_b + dz;
            let hn = &last_h[n * h..(n + 1) * h];
            for (gw, a) in grads.dense_w.iter_mut().zip(hn) {
                *gw = *gw + dz * *a;
            }
            let out = &mut dh[n * h..(n + 1) * h];
            for (o, w) in out.iter_mut().zip(&self.dense.weights.data) {
                *o = dz * *w;
            }
        }

        // BPTT over all timesteps.
        let zeros = vec![T::zero(); b * h];
        let mut dc_next = vec![T::zero(); b * h];
        for t in (0..self.seq_len).rev() {
            let (h_prev, c_prev) = if t == 0 {
                (&zeros[..], &zeros[..])
            } else {
                (&fwd.caches[t - 1].h[..], &fwd.caches[t - 1].c[..])
            };
            let (dh_prev, dc_prev) = self.lstm.step_backward(
                &fwd.caches[t],
                &fwd.xs[t],
                h_prev,
                c_prev,
                &dh,
                &dc_next,
                b,
                &mut grads.w,
                &mut grads.r,
                &mut grads.b,
            );
            dh = dh_prev;
            dc_next = dc_prev;
        }

        Ok((loss, grads))
    }
}

struct ForwardCache<T> {
    xs: Vec<Vec<T>>,
    caches: Vec<lstm::StepCache<T>>,
    probs: Vec<T>,
}

/// Gradients of the trainable parameters, shaped like the layers.
#[derive(Debug, Clone)]
pub struct Grads<T> {
    pub w: Vec<T>,
    pub r: Vec<T>,
    pub b: Vec<T>,
    pub dense_w: Vec<T>,
    pub dense_b: T,
}

impl<T: Float> Grads<T> {
    fn zeros(dims: &ModelDims) -> Self {
        let gate = 4 * dims.hidden;
        Grads {
            w: vec![T::zero(); gate * dims.embed_dim],
            r: vec![T::zero(); gate * dims.hidden],
            b: vec![T::zero(); gate],
            dense_w: vec![T::zero(); dims.hidden],
            dense_b: T::zero(),
        }
    }
}

/// Mean of `-[y ln p + (1-y) ln(1-p)]` with probabilities clamped to
/// `[1e-7, 1 - 1e-7]`.
pub fn bce_loss<T: Float>(probs: &[T], labels: &[TrustClass]) -> Result<f64, RnnError> {
    if probs.len() != labels.len() {
        return Err(RnnError::LengthMismatch {
            probs: probs.len(),
            labels: labels.len(),
        });
    }
    if probs.is_empty() {
        return Ok(0.0);
    }
    let mut sum = 0.0f64;
    for (p, label) in probs.iter().zip(labels) {
        let p = p.to_f64().unwrap().clamp(1e-7, 1.0 - 1e-7);
        sum -= match label {
            TrustClass::Trustworthy => p.ln(),
            TrustClass::Untrustworthy => (1.0 - p).ln(),
        };
    }
    Ok(sum / probs.len() as f64)
}

#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub optimizer: AdamConfig,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            optimizer: AdamConfig::default(),
            batch_size: 128,
            epochs: 6,
            seed: 0,
        }
    }
}

/// Per-epoch curves: training metrics are averaged over the epoch's batches
/// as they are consumed; test metrics come from a full pass afterwards.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    pub epochs: Vec<EpochStats>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub test_loss: f64,
    pub test_acc: f64,
}

impl History {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "epoch,train_loss,train_acc,test_loss,test_acc")?;
        for e in &self.epochs {
            writeln!(
                w,
                "{},{},{},{},{}",
                e.epoch, e.train_loss, e.train_acc, e.test_loss, e.test_acc
            )?;
        }
        Ok(())
    }
}

pub type LabeledSequence = (PaddedSequence, TrustClass);

/// Mini-batch Adam on BCE. Deterministic for a fixed seed; the embedding
/// matrix is untouched throughout.
pub fn train<T: Float>(
    model: &mut RnnClassifier<T>,
    train_set: &[LabeledSequence],
    test_set: &[LabeledSequence],
    config: &TrainConfig,
) -> Result<History, RnnError> {
    if train_set.is_empty() {
        return Err(RnnError::EmptyTrainSet);
    }
    let dims = model.dims();
    let gate = 4 * dims.hidden;
    let group_sizes = [
        gate * dims.embed_dim,
        gate * dims.hidden,
        gate,
        dims.hidden,
        1,
    ];
    let mut adam: Adam<T> = Adam::new(config.optimizer, &group_sizes);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = History::default();

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0f64;
        let mut correct = 0usize;
        let mut seen = 0usize;
        let mut batch_count = 0usize;

        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<PaddedSequence> = chunk
                .iter()
                .map(|&i| train_set[i].0.clone())
                .collect();
            let labels: Vec<TrustClass> = chunk.iter().map(|&i| train_set[i].1).collect();

            let (loss, grads) = model.loss_and_grads(&batch, &labels)?;
            loss_sum += loss;
            batch_count += 1;

            // Batch accuracy from the same forward pass's decision rule.
            let probs = model.forward(&batch)?;
            for (p, label) in probs.iter().zip(&labels) {
                let predicted = p.to_f64().unwrap() > DECISION_THRESHOLD;
                if predicted == (*label == TrustClass::Trustworthy) {
                    correct += 1;
                }
                seen += 1;
            }

            adam.next_step();
            adam.update(0, &mut model.lstm.w.data, &grads.w);
            adam.update(1, &mut model.lstm.r.data, &grads.r);
            adam.update(2, &mut model.lstm.b.data, &grads.b);
            adam.update(3, &mut model.dense.weights.data, &grads.dense_w);
            let mut bias = [model.dense.bias];
            adam.update(4, &mut bias, &[grads.dense_b]);
            model.dense.bias = bias[0];
        }

        if !model.all_finite() {
            return Err(RnnError::NonFinite { epoch });
        }

        let (test_loss, test_acc) = if test_set.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            let m = evaluate(model, test_set)?;
            (m.loss, m.accuracy)
        };
        history.epochs.push(EpochStats {
            epoch: epoch + 1,
            train_loss: loss_sum / batch_count.max(1) as f64,
            train_acc: correct as f64 / seen.max(1) as f64,
            test_loss,
            test_acc,
        });
    }
    Ok(history)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub loss: f64,
    pub accuracy: f64,
    pub count: usize,
}

/// Loss and accuracy over a labeled set; prediction is `p > 0.5`.
pub fn evaluate<T: Float>(
    model: &RnnClassifier<T>,
    set: &[LabeledSequence],
) -> Result<Metrics, RnnError> {
    if set.is_empty() {
        return Err(RnnError::EmptyEvalSet);
    }
    let mut loss_sum = 0.0f64;
    let mut correct = 0usize;
    for chunk in set.chunks(256) {
        let batch: Vec<PaddedSequence> = chunk.iter().map(|e| e.0.clone()).collect();
        let labels: Vec<TrustClass> = chunk.iter().map(|e| e.1).collect();
        let probs = model.forward(&batch)?;
        loss_sum += bce_loss(&probs, &labels)? * chunk.len() as f64;
        for (p, label) in probs.iter().zip(&labels) {
            let predicted = p.to_f64().unwrap() > DECISION_THRESHOLD;
            if predicted == (*label == TrustClass::Trustworthy) {
                correct += 1;
            }
        }
    }
    Ok(Metrics {
        loss: loss_sum / set.len() as f64,
        accuracy: correct as f64 / set.len() as f64,
        count: set.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub probability: f64,
    pub class: TrustClass,
}

/// Cleans, indexes, pads, and classifies one raw article text.
pub fn predict_one<T: Float>(
    model: &RnnClassifier<T>,
    text: &str,
    vocab: &Vocabulary,
    stopwords: &StopwordList,
) -> Result<Prediction, RnnError> {
    let tokens = clean(text, stopwords);
    let seq = to_sequence(&tokens, vocab);
    let padded = pad(&seq, model.seq_len);
    let probs = model.forward(std::slice::from_ref(&padded))?;
    let probability = probs[0].to_f64().unwrap();
    let class = if probability > DECISION_THRESHOLD {
        TrustClass::Trustworthy
    } else {
        TrustClass::Untrustworthy
    };
    Ok(Prediction { probability, class })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model(seed: u64) -> RnnClassifier<f64> {
        // V=10, d_e=4, h=3, L=5
        let embedding = random_embeddings::<f64>(10, 4, seed);
        RnnClassifier::new(embedding, 3, 5, seed)
    }

    fn padded(indices: &[usize], len: usize) -> PaddedSequence {
        pad(indices, len)
    }

    #[test]
    fn fig_style_param_counts() {
        let dims = ModelDims {
            vocab: 542_393,
            embed_dim: 100,
            hidden: 128,
            seq_len: 100,
        };
        let counts = dims.param_count();
        assert_eq!(counts.embedding, 54_239_300);
        assert_eq!(counts.lstm, 117_248);
        assert_eq!(counts.dense, 129);
        assert_eq!(counts.total, 54_356_677);
        assert_eq!(counts.trainable, 117_377);
        assert_eq!(counts.frozen, 54_239_300);
    }

    #[test]
    fn zero_model_outputs_half() {
        let mut model = tiny_model(0);
        model.lstm.w.data.fill(0.0);
        model.lstm.r.data.fill(0.0);
        model.lstm.b.data.fill(0.0);
        model.dense.weights.data.fill(0.0);
        model.dense.bias = 0.0;
        let probs = model
            .forward(&[padded(&[1, 2, 3], 5), padded(&[], 5)])
            .unwrap();
        for p in probs {
            assert_eq!(p, 0.5);
        }
    }

    #[test]
    fn forward_rejects_out_of_range_index() {
        let model = tiny_model(1);
        let err = model.forward(&[padded(&[99], 5)]).unwrap_err();
        assert!(matches!(err, RnnError::IndexOutOfRange { index: 99, .. }));
    }

    #[test]
    fn forward_matches_straight_line_reference() {
        // Independent scalar recompute of the whole unrolled network.
        let model = tiny_model(42);
        let seq = padded(&[3, 1, 4, 1, 5], 5);
        let p = model.forward(std::slice::from_ref(&seq)).unwrap()[0];

        let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
        let h = 3usize;
        let d = 4usize;
        let mut hs = vec![0.0f64; h];
        let mut cs = vec![0.0f64; h];
        for t in 0..5 {
            let x = model.embedding.row(seq.indices[t]);
            let mut pre = vec![0.0f64; 4 * h];
            for (gi, value) in pre.iter_mut().enumerate() {
                let mut acc = model.lstm.b.data[gi];
                for k in 0..d {
                    acc += model.lstm.w.data[gi * d + k] * x[k];
                }
                for k in 0..h {
                    acc += model.lstm.r.data[gi * h + k] * hs[k];
                }
                *value = acc;
            }
            for k in 0..h {
                let i = sig(pre[k]);
                let f = sig(pre[h + k]);
                let g = pre[2 * h + k].tanh();
                let o = sig(pre[3 * h + k]);
                cs[k] = f * cs[k] + i * g;
                hs[k] = o * cs[k].tanh();
            }
        }
        let mut z = model.dense.bias;
        for k in 0..h {
            z += model.dense.weights.data[k] * hs[k];
        }
        assert!((p - sig(z)).abs() < 1e-6, "{p} vs {}", sig(z));
    }

    #[test]
    fn bce_analytic_values() {
        let half = vec![0.5f64];
        let loss = bce_loss(&half, &[TrustClass::Trustworthy]).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);

        let loss = bce_loss(&[0.9f64, 0.1], &[TrustClass::Trustworthy, TrustClass::Untrustworthy])
            .unwrap();
        let want = -(0.9f64.ln() + 0.9f64.ln()) / 2.0;
        assert!((loss - want).abs() < 1e-12);
        assert!((loss - 0.105_360_515_657_826_3).abs() < 1e-9);
    }

    #[test]
    fn bce_clamp_bounds_perfect_predictions() {
        let loss = bce_loss(&[1.0f64, 0.0], &[TrustClass::Trustworthy, TrustClass::Untrustworthy])
            .unwrap();
        assert!(loss <= -(1.0 - 1e-7f64).ln() + 1e-12);
        assert!(loss >= 0.0);
    }

    #[test]
    fn bce_rejects_length_mismatch() {
        assert!(matches!(
            bce_loss(&[0.5f64], &[]),
            Err(RnnError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn zero_learning_rate_freezes_parameters() {
        let mut model = tiny_model(5);
        let before = model.clone();
        let train_set: Vec<LabeledSequence> = vec![
            (padded(&[1, 2], 5), TrustClass::Trustworthy),
            (padded(&[3, 4], 5), TrustClass::Untrustworthy),
        ];
        let config = TrainConfig {
            optimizer: AdamConfig {
                lr: 0.0,
                ..AdamConfig::default()
            },
            batch_size: 2,
            epochs: 1,
            seed: 0,
        };
        train(&mut model, &train_set, &[], &config).unwrap();
        assert_eq!(before.lstm.w.data, model.lstm.w.data);
        assert_eq!(before.lstm.r.data, model.lstm.r.data);
        assert_eq!(before.lstm.b.data, model.lstm.b.data);
        assert_eq!(before.dense.weights.data, model.dense.weights.data);
        assert_eq!(before.dense.bias, model.dense.bias);
    }

    #[test]
    fn overfits_twenty_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut train_set = Vec::new();
        for i in 0..20 {
            let class = if i % 2 == 0 {
                TrustClass::Trustworthy
            } else {
                TrustClass::Untrustworthy
            };
            // Class-coded tokens make the set separable.
            let token_pool: Vec<usize> = if i % 2 == 0 { vec![1, 2, 3] } else { vec![6, 7, 8] };
            let indices: Vec<usize> = (0..5)
                .map(|_| token_pool[rng.gen_range(0..token_pool.len())])
                .collect();
            train_set.push((padded(&indices, 5), class));
        }
        let mut model = tiny_model(11);
        let config = TrainConfig {
            optimizer: AdamConfig {
                lr: 0.05,
                ..AdamConfig::default()
            },
            batch_size: 4,
            epochs: 60,
            seed: 1,
        };
        train(&mut model, &train_set, &[], &config).unwrap();
        let metrics = evaluate(&model, &train_set).unwrap();
        assert_eq!(metrics.accuracy, 1.0, "metrics: {metrics:?}");
    }

    #[test]
    fn training_deterministic_per_seed() {
        let make_set = || -> Vec<LabeledSequence> {
            (0..12)
                .map(|i| {
                    let class = if i % 2 == 0 {
                        TrustClass::Trustworthy
                    } else {
                        TrustClass::Untrustworthy
                    };
                    (padded(&[i % 9 + 1, (i * 3) % 9 + 1], 5), class)
                })
                .collect()
        };
        let run = || {
            let mut model = tiny_model(9);
            let history = train(
                &mut model,
                &make_set(),
                &make_set(),
                &TrainConfig {
                    batch_size: 4,
                    epochs: 3,
                    seed: 21,
                    ..TrainConfig::default()
                },
            )
            .unwrap();
            (history, model.lstm.w.data, model.dense.weights.data)
        };
        let (h1, w1, d1) = run();
        let (h2, w2, d2) = run();
        assert_eq!(h1, h2);
        assert_eq!(w1, w2);
        assert_eq!(d1, d2);
    }

    #[test]
    fn embedding_frozen_through_training() {
        let mut model = tiny_model(8);
        let before = model.embedding.matrix.data.clone();
        let train_set: Vec<LabeledSequence> = (0..8)
            .map(|i| {
                (
                    padded(&[i + 1], 5),
                    if i % 2 == 0 {
                        TrustClass::Trustworthy
                    } else {
                        TrustClass::Untrustworthy
                    },
                )
            })
            .collect();
        train(
            &mut model,
            &train_set,
            &[],
            &TrainConfig {
                batch_size: 4,
                epochs: 3,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert_eq!(before, model.embedding.matrix.data);
    }

    #[test]
    fn evaluate_zero_model_balanced_set() {
        let mut model = tiny_model(2);
        model.lstm.w.data.fill(0.0);
        model.lstm.r.data.fill(0.0);
        model.lstm.b.data.fill(0.0);
        model.dense.weights.data.fill(0.0);
        model.dense.bias = 0.0;
        let set: Vec<LabeledSequence> = vec![
            (padded(&[1], 5), TrustClass::Trustworthy),
            (padded(&[2], 5), TrustClass::Untrustworthy),
        ];
        let metrics = evaluate(&model, &set).unwrap();
        // p = 0.5 everywhere: loss = ln2, prediction is always class 0.
        assert!((metrics.loss - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(metrics.accuracy, 0.5);
    }

    #[test]
    fn evaluate_rejects_empty_set() {
        let model = tiny_model(0);
        assert!(matches!(
            evaluate(&model, &[]),
            Err(RnnError::EmptyEvalSet)
        ));
    }

    #[test]
    fn single_example_metrics() {
        let probs = [0.9f64];
        let loss = bce_loss(&probs, &[TrustClass::Trustworthy]).unwrap();
        assert!((loss - 0.105_360_515_657_826_3).abs() < 1e-9);
    }

    #[test]
    fn predict_threshold_is_strict() {
        use crate::textprep::TokenizedDoc;
        let mut model = tiny_model(4);
        model.lstm.w.data.fill(0.0);
        model.lstm.r.data.fill(0.0);
        model.lstm.b.data.fill(0.0);
        model.dense.weights.data.fill(0.0);
        model.dense.bias = 0.0;
        let vocab = Vocabulary::build(&[TokenizedDoc::new(
            "d",
            vec!["alpha".into(), "beta".into()],
        )]);
        let stop = StopwordList::bundled();
        let prediction = predict_one(&model, "alpha beta", &vocab, &stop).unwrap();
        assert_eq!(prediction.probability, 0.5);
        assert_eq!(prediction.class, TrustClass::Untrustworthy);
    }

    #[test]
    fn predict_empty_text_is_deterministic() {
        let model = tiny_model(12);
        let vocab = Vocabulary::build(std::iter::empty());
        let stop = StopwordList::bundled();
        let a = predict_one(&model, "", &vocab, &stop).unwrap();
        let b = predict_one(&model, "", &vocab, &stop).unwrap();
        assert_eq!(a, b);
        assert!(a.probability > 0.0 && a.probability < 1.0);
    }

    #[test]
    fn param_count_identity_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let dims = ModelDims {
                vocab: rng.gen_range(2..50),
                embed_dim: rng.gen_range(1..12),
                hidden: rng.gen_range(1..12),
                seq_len: rng.gen_range(1..10),
            };
            let model: RnnClassifier<f32> = RnnClassifier::new(
                random_embeddings(dims.vocab, dims.embed_dim, 0),
                dims.hidden,
                dims.seq_len,
                0,
            );
            let counts = dims.param_count();
            let actual_trainable = model.lstm.w.numel()
                + model.lstm.r.numel()
                + model.lstm.b.numel()
                + model.dense.weights.numel()
                + 1;
            let actual_frozen = model.embedding.matrix.numel();
            assert_eq!(counts.trainable, actual_trainable);
            assert_eq!(counts.frozen, actual_frozen);
            assert_eq!(counts.total, actual_trainable + actual_frozen);
        }
    }
}
