//! Paragraph-vector document embeddings trained with negative sampling:
//! PV-DBOW predicts each document word from the document vector alone, PV-DM
//! from the average of the document vector and the context word vectors.
//! Training is single-threaded and deterministic per seed.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::textprep::TokenizedDoc;

#[derive(Debug, Error)]
pub enum PvError {
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("query vector is zero")]
    ZeroQuery,
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("model file: {0}")]
    BadModelFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvMode {
    Dbow,
    Dm,
}

impl PvMode {
    fn code(self) -> u8 {
        match self {
            PvMode::Dbow => 0,
            PvMode::Dm => 1,
        }
    }

    fn from_code(code: u8) -> Option<PvMode> {
        match code {
            0 => Some(PvMode::Dbow),
            1 => Some(PvMode::Dm),
            _ => None,
        }
    }
}

impl std::str::FromStr for PvMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dbow" => Ok(PvMode::Dbow),
            "dm" => Ok(PvMode::Dm),
            other => Err(format!("unknown mode {other:?} (expected dbow or dm)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PvConfig {
    pub mode: PvMode,
    pub dim: usize,
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    pub initial_lr: f32,
    pub min_lr: f32,
    pub min_count: u64,
    pub seed: u64,
}

impl Default for PvConfig {
    fn default() -> Self {
        PvConfig {
            mode: PvMode::Dbow,
            dim: 100,
            window: 5,
            negative: 5,
            epochs: 20,
            initial_lr: 0.025,
            min_lr: 1e-4,
            min_count: 2,
            seed: 0,
        }
    }
}

/// Trained paragraph-vector model: per-document vectors, input word vectors
/// (only PV-DM trains them), output weights for negative sampling, and the
/// unigram^(3/4) noise distribution.
#[derive(Debug, Clone)]
pub struct PvModel {
    pub config: PvConfig,
    pub tags: Vec<String>,
    tag_rows: HashMap<String, usize>,
    pub words: Vec<String>,
    word_rows: HashMap<String, usize>,
    pub doc_vectors: Vec<f32>,
    pub word_vectors: Vec<f32>,
    pub output_weights: Vec<f32>,
    /// Cumulative noise distribution over words; last entry is 1 within 1e-9.
    pub noise_cdf: Vec<f64>,
    /// Mean negative-sampling loss per epoch, recorded during training.
    pub epoch_loss: Vec<f64>,
}

impl PvModel {
    pub fn ndocs(&self) -> usize {
        self.tags.len()
    }

    pub fn nwords(&self) -> usize {
        self.words.len()
    }

    pub fn doc_row(&self, tag: &str) -> Option<usize> {
        self.tag_rows.get(tag).copied()
    }

    pub fn doc_vector(&self, row: usize) -> &[f32] {
        let d = self.config.dim;
        &self.doc_vectors[row * d..(row + 1) * d]
    }

    /// Noise probabilities recovered from the stored CDF.
    pub fn noise_probs(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.noise_cdf
            .iter()
            .map(|&c| {
                let p = c - prev;
                prev = c;
                p
            })
            .collect()
    }
}

struct WordTable {
    words: Vec<String>,
    rows: HashMap<String, usize>,
    counts: Vec<u64>,
}

fn build_word_table(corpus: &[TokenizedDoc], min_count: u64) -> WordTable {
    let mut counts: HashMap<&str, (u64, usize)> = HashMap::new();
    let mut order = 0usize;
    for doc in corpus {
        for token in &doc.tokens {
            let entry = counts.entry(token.as_str()).or_insert_with(|| {
                let e = (0, order);
                order += 1;
                e
            });
            entry.0 += 1;
        }
    }
    let mut ranked: Vec<(&str, (u64, usize))> = counts
        .into_iter()
        .filter(|(_, (c, _))| *c >= min_count)
        .collect();
    ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)));
    let words: Vec<String> = ranked.iter().map(|(w, _)| w.to_string()).collect();
    let counts: Vec<u64> = ranked.iter().map(|(_, (c, _))| *c).collect();
    let rows = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    WordTable {
        words,
        rows,
        counts,
    }
}

/// Unigram counts raised to 3/4, normalized, as a cumulative distribution.
fn noise_cdf(counts: &[u64]) -> Vec<f64> {
    let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect()
}

fn sample_noise<R: Rng>(cdf: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    match cdf.binary_search_by(|c| c.partial_cmp(&x).unwrap()) {
        Ok(i) => (i + 1).min(cdf.len() - 1),
        Err(i) => i.min(cdf.len() - 1),
    }
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f32], b: &[f32]) -> f32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One negative-sampling update on an input vector (a doc vector, or the
/// PV-DM mean). Accumulates the input gradient, updates the output rows in
/// place, and returns the loss contribution.
#[allow(clippy::too_many_arguments)]
fn negative_sampling_step<R: Rng>(
    input: &[f32],
    target: usize,
    output_weights: &mut [f32],
    noise: &[f64],
    negative: usize,
    lr: f32,
    input_grad: &mut [f32],
    rng: &mut R,
) -> f64 {
    let d = input.len();
    let mut loss = 0.0f64;
    let mut step = |word: usize, label: f32, input_grad: &mut [f32]| {
        let row = &mut output_weights[word * d..(word + 1) * d];
        let score = sigmoid(dot(input, row));
        let g = (label - score) * lr;
        for (ig, r) in input_grad.iter_mut().zip(row.iter()) {
            *ig += g * *r;
        }
        for (r, x) in row.iter_mut().zip(input.iter()) {
            *r += g * *x;
        }
        let p = if label > 0.5 { score } else { 1.0 - score };
        loss -= (p.max(1e-7) as f64).ln();
    };
    step(target, 1.0, input_grad);
    for _ in 0..negative {
        let mut noise_word = sample_noise(noise, rng);
        let mut guard = 0;
        while noise_word == target && guard < 8 {
            noise_word = sample_noise(noise, rng);
            guard += 1;
        }
        if noise_word == target {
            continue;
        }
        step(noise_word, 0.0, input_grad);
    }
    loss
}

fn init_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<f32> {
    (0..dim)
        .map(|_| (rng.gen::<f32>() - 0.5) / dim as f32)
        .collect()
}

/// Trains paragraph vectors over the tagged corpus (tags are document ids).
pub fn train_pv(corpus: &[TokenizedDoc], config: PvConfig) -> Result<PvModel, PvError> {
    if corpus.is_empty() {
        return Err(PvError::EmptyCorpus);
    }
    for (name, value) in [
        ("dim", config.dim),
        ("window", config.window),
        ("negative", config.negative),
        ("epochs", config.epochs),
    ] {
        if value == 0 {
            return Err(PvError::BadConfig(format!("{name} must be >= 1")));
        }
    }

    let table = build_word_table(corpus, config.min_count);
    let d = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let tags: Vec<String> = corpus.iter().map(|doc| doc.id.clone()).collect();
    let tag_rows: HashMap<String, usize> = tags
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();

    let mut doc_vectors = Vec::with_capacity(corpus.len() * d);
    for _ in 0..corpus.len() {
        doc_vectors.extend(init_vector(d, &mut rng));
    }
    let mut word_vectors = Vec::with_capacity(table.words.len() * d);
    for _ in 0..table.words.len() {
        word_vectors.extend(init_vector(d, &mut rng));
    }
    let mut output_weights = vec![0.0f32; table.words.len() * d];
    let cdf = noise_cdf(&table.counts);

    // Documents as word-row sequences; words below min_count drop out.
    let sequences: Vec<Vec<usize>> = corpus
        .iter()
        .map(|doc| {
            doc.tokens
                .iter()
                .filter_map(|t| table.rows.get(t.as_str()).copied())
                .collect()
        })
        .collect();

    let total_positions: u64 = sequences.iter().map(|s| s.len() as u64).sum();
    let total_updates = (total_positions * config.epochs as u64).max(1);
    let mut done: u64 = 0;
    let mut epoch_loss = Vec::with_capacity(config.epochs);
    let mut input_grad = vec![0.0f32; d];
    let mut mean_input = vec![0.0f32; d];

    for _epoch in 0..config.epochs {
        let mut loss_sum = 0.0f64;
        let mut loss_count = 0u64;
        for (doc_idx, seq) in sequences.iter().enumerate() {
            let doc_range = doc_idx * d..(doc_idx + 1) * d;
            for (pos, &target) in seq.iter().enumerate() {
                let progress = done as f64 / total_updates as f64;
                let lr = config.initial_lr - (config.initial_lr - config.min_lr) * progress as f32;
                done += 1;
                input_grad.fill(0.0);

                match config.mode {
                    PvMode::Dbow => {
                        let loss = negative_sampling_step(
                            &doc_vectors[doc_range.clone()],
                            target,
                            &mut output_weights,
                            &cdf,
                            config.negative,
                            lr,
                            &mut input_grad,
                            &mut rng,
                        );
                        for (v, g) in doc_vectors[doc_range.clone()].iter_mut().zip(&input_grad) {
                            *v += g;
                        }
                        loss_sum += loss;
                        loss_count += 1;
                    }
                    PvMode::Dm => {
                        let lo = pos.saturating_sub(config.window);
                        let hi = (pos + config.window + 1).min(seq.len());
                        let context: Vec<usize> =
                            (lo..hi).filter(|&p| p != pos).map(|p| seq[p]).collect();
                        let count = (context.len() + 1) as f32;
                        mean_input.copy_from_slice(&doc_vectors[doc_range.clone()]);
                        for &w in &context {
                            for (m, x) in
                                mean_input.iter_mut().zip(&word_vectors[w * d..(w + 1) * d])
                            {
                                *m += x;
                            }
                        }
                        for m in mean_input.iter_mut() {
                            *m /= count;
                        }
                        let loss = negative_sampling_step(
                            &mean_input,
                            target,
                            &mut output_weights,
                            &cdf,
                            config.negative,
                            lr,
                            &mut input_grad,
                            &mut rng,
                        );
                        for g in input_grad.iter_mut() {
                            *g /= count;
                        }
                        for (v, g) in doc_vectors[doc_range.clone()].iter_mut().zip(&input_grad) {
                            *v += g;
                        }
                        for &w in &context {
                            for (v, g) in word_vectors[w * d..(w + 1) * d]
                                .iter_mut()
                                .zip(&input_grad)
                            {
                                *v += g;
                            }
                        }
                        loss_sum += loss;
                        loss_count += 1;
                    }
                }
            }
        }
        epoch_loss.push(if loss_count == 0 {
            0.0
        } else {
            loss_sum / loss_count as f64
        });
        assert!(
            doc_vectors.iter().all(|v| v.is_finite())
                && word_vectors.iter().all(|v| v.is_finite())
                && output_weights.iter().all(|v| v.is_finite()),
            "non-finite parameters during training"
        );
    }

    Ok(PvModel {
        config,
        tags,
        tag_rows,
        words: table.words,
        word_rows: table.rows,
        doc_vectors,
        word_vectors,
        output_weights,
        noise_cdf: cdf,
        epoch_loss,
    })
}

/// Optimizes a fresh document vector against frozen word tables. All-OOV
/// token lists see no gradient and return the seeded initialization.
pub fn infer_vector(
    model: &PvModel,
    tokens: &[String],
    steps: usize,
    lr: f32,
    seed: u64,
) -> Vec<f32> {
    let d = model.config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vector = init_vector(d, &mut rng);
    let seq: Vec<usize> = tokens
        .iter()
        .filter_map(|t| model.word_rows.get(t.as_str()).copied())
        .collect();
    if seq.is_empty() || steps == 0 {
        return vector;
    }

    let mut input_grad = vec![0.0f32; d];
    let total = (steps * seq.len()).max(1) as f64;
    let mut done = 0u64;
    for _ in 0..steps {
        for &target in &seq {
            let progress = done as f64 / total;
            let step_lr = lr - (lr - model.config.min_lr) * progress as f32;
            done += 1;
            input_grad.fill(0.0);
            let accumulate = |word: usize, label: f32, input_grad: &mut [f32]| {
                let row = &model.output_weights[word * d..(word + 1) * d];
                let score = sigmoid(dot(&vector, row));
                let g = (label - score) * step_lr;
                for (ig, r) in input_grad.iter_mut().zip(row) {
                    *ig += g * *r;
                }
            };
            accumulate(target, 1.0, &mut input_grad);
            for _ in 0..model.config.negative {
                let mut noise_word = sample_noise(&model.noise_cdf, &mut rng);
                let mut guard = 0;
                while noise_word == target && guard < 8 {
                    noise_word = sample_noise(&model.noise_cdf, &mut rng);
                    guard += 1;
                }
                if noise_word == target {
                    continue;
                }
                accumulate(noise_word, 0.0, &mut input_grad);
            }
            for (v, g) in vector.iter_mut().zip(&input_grad) {
                *v += g;
            }
        }
    }
    vector
}

/// Cosine similarity of the query against every stored document vector,
/// descending; ties broken by tag. Scores lie in [-1, 1].
pub fn most_similar(
    model: &PvModel,
    query: &[f32],
    topk: usize,
) -> Result<Vec<(String, f32)>, PvError> {
    let qnorm = dot(query, query).sqrt();
    if qnorm == 0.0 {
        return Err(PvError::ZeroQuery);
    }
    let mut scored: Vec<(String, f32)> = (0..model.ndocs())
        .map(|row| {
            let v = model.doc_vector(row);
            let vnorm = dot(v, v).sqrt();
            let cos = if vnorm == 0.0 {
                0.0
            } else {
                (dot(query, v) / (qnorm * vnorm)).clamp(-1.0, 1.0)
            };
            (model.tags[row].clone(), cos)
        })
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    scored.truncate(topk);
    Ok(scored)
}

const MODEL_MAGIC: &[u8; 8] = b"PVMODEL\0";
const MODEL_VERSION: u32 = 1;

/// Binary model file: magic, version, mode, dim, V, D, then the three
/// row-major little-endian f32 arrays, then the word and tag tables with the
/// word counts that regenerate the noise distribution.
pub fn save_model<W: Write>(model: &PvModel, mut w: W) -> Result<(), PvError> {
    w.write_all(MODEL_MAGIC)?;
    w.write_all(&MODEL_VERSION.to_le_bytes())?;
    w.write_all(&[model.config.mode.code()])?;
    for dim in [
        model.config.dim as u64,
        model.nwords() as u64,
        model.ndocs() as u64,
    ] {
        w.write_all(&dim.to_le_bytes())?;
    }
    for array in [
        &model.doc_vectors,
        &model.word_vectors,
        &model.output_weights,
    ] {
        for x in array.iter() {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    for p in model.noise_probs() {
        w.write_all(&p.to_le_bytes())?;
    }
    for list in [&model.words, &model.tags] {
        for item in list.iter() {
            let bytes = item.as_bytes();
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(bytes)?;
        }
    }
    Ok(())
}

pub fn load_model<R: Read>(mut r: R) -> Result<PvModel, PvError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MODEL_MAGIC {
        return Err(PvError::BadModelFile("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != MODEL_VERSION {
        return Err(PvError::BadModelFile(format!(
            "unsupported version {version}"
        )));
    }
    let mut mode_byte = [0u8; 1];
    r.read_exact(&mut mode_byte)?;
    let mode = PvMode::from_code(mode_byte[0])
        .ok_or_else(|| PvError::BadModelFile(format!("bad mode byte {}", mode_byte[0])))?;
    let dim = read_u64(&mut r)? as usize;
    let nwords = read_u64(&mut r)? as usize;
    let ndocs = read_u64(&mut r)? as usize;

    let read_f32s = |len: usize, r: &mut R| -> Result<Vec<f32>, PvError> {
        let mut buf = vec![0u8; len * 4];
        r.read_exact(&mut buf)?;
        Ok(buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect())
    };
    let doc_vectors = read_f32s(ndocs * dim, &mut r)?;
    let word_vectors = read_f32s(nwords * dim, &mut r)?;
    let output_weights = read_f32s(nwords * dim, &mut r)?;

    let mut noise_cdf = Vec::with_capacity(nwords);
    let mut acc = 0.0;
    for _ in 0..nwords {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        acc += f64::from_le_bytes(buf);
        noise_cdf.push(acc);
    }

    let read_strings = |count: usize, r: &mut R| -> Result<Vec<String>, PvError> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let len = read_u32(r)? as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf)?;
            out.push(
                String::from_utf8(buf)
                    .map_err(|_| PvError::BadModelFile("non-UTF-8 string".into()))?,
            );
        }
        Ok(out)
    };
    let words = read_strings(nwords, &mut r)?;
    let tags = read_strings(ndocs, &mut r)?;

    let word_rows = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let tag_rows = tags
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();

    Ok(PvModel {
        config: PvConfig {
            mode,
            dim,
            ..PvConfig::default()
        },
        tags,
        tag_rows,
        words,
        word_rows,
        doc_vectors,
        word_vectors,
        output_weights,
        noise_cdf,
        epoch_loss: Vec::new(),
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, PvError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, PvError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Tagged corpus loader for CLI use: `id<TAB>space-joined tokens` per line.
pub fn read_tagged_corpus<R: BufRead>(reader: R) -> Result<Vec<TokenizedDoc>, PvError> {
    crate::textprep::read_tokens(reader).map_err(|e| PvError::BadModelFile(e.to_string()))
}
