//! Exploratory corpus analytics: lexicon-based sentiment polarity, top-k
//! n-grams, and coarse part-of-speech counts. Everything here is plot-ready
//! data, not plots.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use crate::textprep::TokenizedDoc;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("lexicon line {line}: {reason}")]
    MalformedLexicon { line: usize, reason: String },
    #[error("polarity score {score} out of [-1, 1] at line {line}")]
    ScoreOutOfRange { line: usize, score: f64 },
    #[error("unknown part-of-speech tag {tag:?} at line {line}")]
    UnknownTag { line: usize, tag: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Word-level sentiment lexicon; every score lies in [-1, +1].
#[derive(Debug, Clone, Default)]
pub struct PolarityLexicon {
    scores: HashMap<String, f64>,
}

const BUNDLED_POLARITY: &str = include_str!("../data/polarity_lexicon.tsv");

impl PolarityLexicon {
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_POLARITY).expect("bundled polarity lexicon is well-formed")
    }

    /// `word<TAB>score` per line.
    pub fn from_tsv(text: &str) -> Result<Self, AnalysisError> {
        let mut scores = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, score) = line.split_once('\t').ok_or(AnalysisError::MalformedLexicon {
                line: idx + 1,
                reason: "missing tab".into(),
            })?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| AnalysisError::MalformedLexicon {
                    line: idx + 1,
                    reason: format!("bad score {score:?}"),
                })?;
            if !(-1.0..=1.0).contains(&score) {
                return Err(AnalysisError::ScoreOutOfRange {
                    line: idx + 1,
                    score,
                });
            }
            scores.insert(word.trim().to_string(), score);
        }
        Ok(PolarityLexicon { scores })
    }

    pub fn from_pairs<I: IntoIterator<Item = (S, f64)>, S: Into<String>>(pairs: I) -> Self {
        PolarityLexicon {
            scores: pairs.into_iter().map(|(w, s)| (w.into(), s)).collect(),
        }
    }

    pub fn read<R: BufRead>(mut reader: R) -> Result<Self, AnalysisError> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::from_tsv(&text)
    }

    pub fn score(&self, word: &str) -> Option<f64> {
        self.scores.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Mean lexicon score over matched tokens; 0.0 when nothing matches.
pub fn polarity(tokens: &[String], lexicon: &PolarityLexicon) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for token in tokens {
        if let Some(score) = lexicon.score(token) {
            sum += score;
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Histogram of per-document polarity over [-1, +1]: equal-width bins,
/// right-open except the last, plus the corpus mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityHistogram {
    pub counts: Vec<u64>,
    pub mean: f64,
    pub docs: u64,
}

impl PolarityHistogram {
    pub fn bin_edges(&self) -> Vec<(f64, f64)> {
        let bins = self.counts.len();
        let width = 2.0 / bins as f64;
        (0..bins)
            .map(|i| (-1.0 + i as f64 * width, -1.0 + (i + 1) as f64 * width))
            .collect()
    }
}

pub fn polarity_histogram(
    docs: &[TokenizedDoc],
    bins: usize,
    lexicon: &PolarityLexicon,
) -> PolarityHistogram {
    assert!(bins >= 1, "bins must be >= 1");
    let mut counts = vec![0u64; bins];
    let mut sum = 0.0;
    for doc in docs {
        let p = polarity(&doc.tokens, lexicon);
        sum += p;
        let width = 2.0 / bins as f64;
        let mut bin = ((p + 1.0) / width).floor() as usize;
        if bin >= bins {
            bin = bins - 1; // p == +1 lands in the closed last bin
        }
        counts[bin] += 1;
    }
    let mean = if docs.is_empty() {
        0.0
    } else {
        sum / docs.len() as f64
    };
    PolarityHistogram {
        counts,
        mean,
        docs: docs.len() as u64,
    }
}

/// N-gram counts over each document's token list independently; no n-gram
/// crosses a document boundary.
pub fn count_ngrams(docs: &[TokenizedDoc], n: usize) -> HashMap<Vec<String>, u64> {
    assert!(n >= 1, "n must be >= 1");
    let mut counts: HashMap<Vec<String>, u64> = HashMap::new();
    for doc in docs {
        if doc.tokens.len() < n {
            continue;
        }
        for window in doc.tokens.windows(n) {
            *counts.entry(window.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// Top-k n-grams by descending count, ties broken lexicographically.
pub fn top_ngrams(docs: &[TokenizedDoc], n: usize, k: usize) -> Vec<(Vec<String>, u64)> {
    assert!(k >= 1, "k must be >= 1");
    let mut ranked: Vec<(Vec<String>, u64)> = count_ngrams(docs, n).into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

/// Coarse part-of-speech tags, a closed ten-tag set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Prt,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Conj,
        PosTag::Prt,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Prt => "PRT",
            PosTag::X => "X",
        }
    }

    pub fn parse(s: &str) -> Option<PosTag> {
        PosTag::ALL.iter().copied().find(|t| t.as_str() == s)
    }
}

/// Deterministic tagger: closed-class lexicon lookup, then longest matching
/// suffix rule, then NOUN. A deliberate approximation, not a trained model.
#[derive(Debug, Clone)]
pub struct PosTagger {
    lexicon: HashMap<String, PosTag>,
    /// Sorted longest-first so the first match wins.
    suffix_rules: Vec<(String, PosTag)>,
}

const BUNDLED_POS_LEXICON: &str = include_str!("../data/pos_lexicon.tsv");
const BUNDLED_SUFFIX_RULES: &str = include_str!("../data/suffix_rules.tsv");

impl PosTagger {
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_POS_LEXICON, BUNDLED_SUFFIX_RULES)
            .expect("bundled tagger tables are well-formed")
    }

    pub fn from_tsv(lexicon_tsv: &str, suffix_tsv: &str) -> Result<Self, AnalysisError> {
        let mut lexicon = HashMap::new();
        for (idx, line) in lexicon_tsv.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line.split_once('\t').ok_or(AnalysisError::MalformedLexicon {
                line: idx + 1,
                reason: "missing tab".into(),
            })?;
            let tag = PosTag::parse(tag.trim()).ok_or(AnalysisError::UnknownTag {
                line: idx + 1,
                tag: tag.trim().into(),
            })?;
            lexicon.insert(word.trim().to_string(), tag);
        }
        let mut suffix_rules = Vec::new();
        for (idx, line) in suffix_tsv.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (suffix, tag) = line.split_once('\t').ok_or(AnalysisError::MalformedLexicon {
                line: idx + 1,
                reason: "missing tab".into(),
            })?;
            let tag = PosTag::parse(tag.trim()).ok_or(AnalysisError::UnknownTag {
                line: idx + 1,
                tag: tag.trim().into(),
            })?;
            suffix_rules.push((suffix.trim().to_string(), tag));
        }
        suffix_rules.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        Ok(PosTagger {
            lexicon,
            suffix_rules,
        })
    }

    /// Every word gets exactly one tag.
    pub fn tag(&self, word: &str) -> PosTag {
        if let Some(tag) = self.lexicon.get(word) {
            return *tag;
        }
        for (suffix, tag) in &self.suffix_rules {
            if word.len() > suffix.len() && word.ends_with(suffix.as_str()) {
                return *tag;
            }
        }
        PosTag::Noun
    }
}

/// Tag counts over the whole corpus; the total equals the token count.
pub fn pos_counts(docs: &[TokenizedDoc], tagger: &PosTagger) -> HashMap<PosTag, u64> {
    let mut counts = HashMap::new();
    for doc in docs {
        for token in &doc.tokens {
            *counts.entry(tagger.tag(token)).or_insert(0) += 1;
        }
    }
    counts
}

/// Tags ranked by descending count (ties by tag name), truncated to `k`.
pub fn top_pos(counts: &HashMap<PosTag, u64>, k: usize) -> Vec<(PosTag, u64)> {
    let mut ranked: Vec<(PosTag, u64)> = counts.iter().map(|(t, c)| (*t, *c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.as_str().cmp(b.0.as_str())));
    ranked.truncate(k);
    ranked
}
