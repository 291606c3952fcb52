//! Text cleaning and encoding: the four-step cleaning pipeline, a
//! frequency-ordered vocabulary, index sequences, and fixed-length padding.
//!
//! Cleaning is intentionally blunt: every character outside `[A-Za-z]`
//! becomes a space, so digits, punctuation, and non-Latin script all vanish.
//! No stemming or lemmatization.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use thiserror::Error;

/// Fixed sequence length for the classifier input.
pub const SEQUENCE_LEN: usize = 100;

/// An immutable set of lowercase words removed during cleaning.
#[derive(Debug, Clone)]
pub struct StopwordList {
    words: HashSet<String>,
}

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

impl StopwordList {
    /// The bundled 179-word English list.
    pub fn bundled() -> Self {
        Self::from_text(BUNDLED_STOPWORDS)
    }

    /// One word per line; blank lines ignored.
    pub fn from_text(text: &str) -> Self {
        StopwordList {
            words: text
                .lines()
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(str::to_string)
                .collect(),
        }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        StopwordList {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn read<R: BufRead>(mut reader: R) -> std::io::Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Ok(Self::from_text(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// A cleaned document: id plus ordered tokens, each lowercase alphabetic and
/// not a stopword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub id: String,
    pub tokens: Vec<String>,
}

impl TokenizedDoc {
    pub fn new(id: impl Into<String>, tokens: Vec<String>) -> Self {
        TokenizedDoc {
            id: id.into(),
            tokens,
        }
    }
}

/// The cleaning pipeline, in order: non-letters to spaces, lowercase, split
/// on whitespace, drop stopwords.
pub fn clean(text: &str, stopwords: &StopwordList) -> Vec<String> {
    let mut mapped = String::with_capacity(text.len());
    for ch in text.chars() {
        if ch.is_ascii_alphabetic() {
            mapped.push(ch.to_ascii_lowercase());
        } else {
            mapped.push(' ');
        }
    }
    mapped
        .split_whitespace()
        .filter(|token| !stopwords.contains(token))
        .map(str::to_string)
        .collect()
}

/// Word-to-index map. Index 0 is reserved for padding; words get 1..V-1 by
/// descending corpus frequency, ties broken by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, usize>,
    words: Vec<String>, // words[i] has index i+1
}

impl Vocabulary {
    pub fn build<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a TokenizedDoc>,
    {
        let mut counts: HashMap<&str, (u64, usize)> = HashMap::new(); // (count, first occurrence)
        let mut order = 0usize;
        for doc in docs {
            for token in &doc.tokens {
                let entry = counts.entry(token.as_str()).or_insert_with(|| {
                    let e = (0, order);
                    order += 1;
                    e
                });
                entry.0 += 1;
            }
        }
        let mut ranked: Vec<(&str, (u64, usize))> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)));
        let words: Vec<String> = ranked.into_iter().map(|(w, _)| w.to_string()).collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i + 1))
            .collect();
        Vocabulary { index, words }
    }

    /// Total size V including the reserved padding index 0.
    pub fn size(&self) -> usize {
        self.words.len() + 1
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Word for a nonzero index.
    pub fn word_at(&self, index: usize) -> Option<&str> {
        if index == 0 {
            None
        } else {
            self.words.get(index - 1).map(String::as_str)
        }
    }

    /// Words in index order (index 1 first).
    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// `word<TAB>index` per line, ascending index.
    pub fn write_tsv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, word) in self.words.iter().enumerate() {
            writeln!(w, "{}\t{}", word, i + 1)?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self, VocabFileError> {
        let mut words = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (word, index) = line.split_once('\t').ok_or(VocabFileError::Malformed {
                line: idx + 1,
                reason: "missing tab".into(),
            })?;
            let index: usize = index.parse().map_err(|_| VocabFileError::Malformed {
                line: idx + 1,
                reason: format!("bad index {index:?}"),
            })?;
            if index != words.len() + 1 {
                return Err(VocabFileError::Malformed {
                    line: idx + 1,
                    reason: format!("expected index {}, got {index}", words.len() + 1),
                });
            }
            words.push(word.to_string());
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i + 1))
            .collect();
        Ok(Vocabulary { index, words })
    }
}

#[derive(Debug, Error)]
pub enum VocabFileError {
    #[error("vocabulary line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Maps tokens to vocabulary indices in order; out-of-vocabulary tokens are
/// dropped.
pub fn to_sequence(tokens: &[String], vocab: &Vocabulary) -> Vec<usize> {
    tokens
        .iter()
        .filter_map(|t| vocab.index_of(t))
        .collect()
}

/// A fixed-length index sequence, zero pre-padded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedSequence {
    pub indices: Vec<usize>,
}

/// Pre-pads with zeros to length `len`, or keeps the last `len` entries when
/// longer, so the informative tail of a document sits at the end.
pub fn pad(indices: &[usize], len: usize) -> PaddedSequence {
    assert!(len >= 1, "pad length must be >= 1");
    let mut out = vec![0usize; len];
    if indices.len() >= len {
        out.copy_from_slice(&indices[indices.len() - len..]);
    } else {
        out[len - indices.len()..].copy_from_slice(indices);
    }
    PaddedSequence { indices: out }
}

/// Tokenized-corpus cache: one line per document, `id<TAB>space-joined tokens`.
pub fn write_tokens<W: std::io::Write>(
    mut w: W,
    docs: &[TokenizedDoc],
) -> std::io::Result<()> {
    for doc in docs {
        writeln!(w, "{}\t{}", doc.id, doc.tokens.join(" "))?;
    }
    Ok(())
}

pub fn read_tokens<R: BufRead>(reader: R) -> Result<Vec<TokenizedDoc>, VocabFileError> {
    let mut docs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').ok_or(VocabFileError::Malformed {
            line: idx + 1,
            reason: "missing tab".into(),
        })?;
        let tokens = rest.split_whitespace().map(str::to_string).collect();
        docs.push(TokenizedDoc::new(id, tokens));
    }
    Ok(docs)
}
