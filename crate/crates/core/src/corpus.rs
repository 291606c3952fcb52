//! Article and label ingestion, outlet joins, deterministic splits, and
//! synthetic corpora for desk-scale runs.
//!
//! Articles arrive as line-delimited JSON (`articles.jsonl`), labels as a
//! fixed-header CSV (`labels.csv`). Labels are outlet-level: every article
//! from an outlet inherits that outlet's row.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textprep::StopwordList;

/// A raw news item. Content is stored verbatim; no language filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub outlet: String,
    pub published: String,
    pub title: String,
    pub content: String,
}

/// The eight assessment sources that rate outlets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelSource {
    NewsGuard,
    PewResearch,
    Wikipedia,
    OpenSources,
    MediaBiasFactCheck,
    AllSides,
    BuzzFeedNews,
    Politifact,
}

impl LabelSource {
    pub const ALL: [LabelSource; 8] = [
        LabelSource::NewsGuard,
        LabelSource::PewResearch,
        LabelSource::Wikipedia,
        LabelSource::OpenSources,
        LabelSource::MediaBiasFactCheck,
        LabelSource::AllSides,
        LabelSource::BuzzFeedNews,
        LabelSource::Politifact,
    ];

    /// Column name in `labels.csv`.
    pub fn column(self) -> &'static str {
        match self {
            LabelSource::NewsGuard => "newsguard",
            LabelSource::PewResearch => "pew",
            LabelSource::Wikipedia => "wikipedia",
            LabelSource::OpenSources => "opensources",
            LabelSource::MediaBiasFactCheck => "mbfc",
            LabelSource::AllSides => "allsides",
            LabelSource::BuzzFeedNews => "buzzfeed",
            LabelSource::Politifact => "politifact",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for LabelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Per-outlet consolidated binary labels, one optional 0/1 per source.
/// An absent entry means the source did not rate the outlet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutletLabels {
    pub outlet: String,
    values: [Option<bool>; 8],
}

impl OutletLabels {
    pub fn new(outlet: impl Into<String>) -> Self {
        OutletLabels {
            outlet: outlet.into(),
            values: [None; 8],
        }
    }

    pub fn set(&mut self, source: LabelSource, value: bool) {
        self.values[source.index()] = Some(value);
    }

    pub fn with(mut self, source: LabelSource, value: bool) -> Self {
        self.set(source, value);
        self
    }

    pub fn get(&self, source: LabelSource) -> Option<bool> {
        self.values[source.index()]
    }

    /// Number of sources that rated this outlet.
    pub fn present(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.present() == 0
    }
}

/// An article joined with its outlet's labels. `labeled` is false when the
/// outlet was absent from the label table (all-absent labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledArticle {
    pub article: Article,
    pub labels: OutletLabels,
    pub labeled: bool,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed article record: {reason}")]
    MalformedArticle { line: usize, reason: String },
    #[error("duplicate article id {id:?}")]
    DuplicateId { id: String },
    #[error("labels header: unknown column {column:?}")]
    UnknownLabelColumn { column: String },
    #[error("labels header: expected {expected:?}, got {got:?}")]
    BadLabelHeader { expected: String, got: String },
    #[error("labels row {row}, column {column}: cell {cell:?} not 0, 1, or empty")]
    BadLabelCell {
        row: usize,
        column: String,
        cell: String,
    },
    #[error("labels row {row}: expected {expected} fields, got {got}")]
    BadLabelRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("cannot split an empty corpus")]
    EmptyCorpus,
    #[error("synthetic corpus: {0}")]
    BadSynthParams(String),
    #[error("split file line {line}: {reason}")]
    MalformedSplit { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads one article per line (JSON object with the five article fields).
/// Input order is preserved; duplicate ids are rejected.
pub fn ingest_articles<R: BufRead>(reader: R) -> Result<Vec<Article>, CorpusError> {
    let mut articles = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let article: Article =
            serde_json::from_str(&line).map_err(|e| CorpusError::MalformedArticle {
                line: idx + 1,
                reason: e.to_string(),
            })?;
        if article.id.is_empty() {
            return Err(CorpusError::MalformedArticle {
                line: idx + 1,
                reason: "empty id".into(),
            });
        }
        if !seen.insert(article.id.clone()) {
            return Err(CorpusError::DuplicateId { id: article.id });
        }
        articles.push(article);
    }
    Ok(articles)
}

/// Serializes articles back to line-delimited JSON (inverse of
/// [`ingest_articles`]).
pub fn write_articles<W: std::io::Write>(
    mut w: W,
    articles: &[Article],
) -> Result<(), CorpusError> {
    for article in articles {
        serde_json::to_writer(&mut w, article)
            .map_err(|e| CorpusError::Io(std::io::Error::other(e)))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

const LABELS_HEADER: &str = "outlet,newsguard,pew,wikipedia,opensources,mbfc,allsides,buzzfeed,politifact";

/// Parses the label table: header `outlet,<8 source columns>`, cells 0/1/empty.
pub fn ingest_labels<R: BufRead>(
    reader: R,
) -> Result<BTreeMap<String, OutletLabels>, CorpusError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => {
            return Err(CorpusError::BadLabelHeader {
                expected: LABELS_HEADER.into(),
                got: String::new(),
            })
        }
    };
    let cols: Vec<&str> = header.trim_end().split(',').collect();
    let expected: Vec<&str> = LABELS_HEADER.split(',').collect();
    if cols.len() != expected.len() || cols[0] != "outlet" {
        return Err(CorpusError::BadLabelHeader {
            expected: LABELS_HEADER.into(),
            got: header.clone(),
        });
    }
    for (col, exp) in cols.iter().zip(&expected) {
        if col != exp {
            return Err(CorpusError::UnknownLabelColumn {
                column: (*col).into(),
            });
        }
    }

    let mut map = BTreeMap::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 2; // 1-based, after the header
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            return Err(CorpusError::BadLabelRow {
                row,
                expected: 9,
                got: cells.len(),
            });
        }
        let mut labels = OutletLabels::new(cells[0]);
        for (source, cell) in LabelSource::ALL.iter().zip(&cells[1..]) {
            match cell.trim() {
                "" => {}
                "0" => labels.set(*source, false),
                "1" => labels.set(*source, true),
                other => {
                    return Err(CorpusError::BadLabelCell {
                        row,
                        column: source.column().into(),
                        cell: other.into(),
                    })
                }
            }
        }
        map.insert(labels.outlet.clone(), labels);
    }
    Ok(map)
}

/// Writes the label table in the canonical column order.
pub fn write_labels<W: std::io::Write>(
    mut w: W,
    labels: &BTreeMap<String, OutletLabels>,
) -> Result<(), CorpusError> {
    writeln!(w, "{LABELS_HEADER}")?;
    for outlet_labels in labels.values() {
        let mut line = outlet_labels.outlet.clone();
        for source in LabelSource::ALL {
            line.push(',');
            match outlet_labels.get(source) {
                Some(true) => line.push('1'),
                Some(false) => line.push('0'),
                None => {}
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Joins articles with their outlet's labels. Articles from unlisted outlets
/// are paired with all-absent labels and flagged unlabeled. Content is never
/// altered.
pub fn attach_labels(
    articles: Vec<Article>,
    labels: &BTreeMap<String, OutletLabels>,
) -> Vec<LabeledArticle> {
    articles
        .into_iter()
        .map(|article| match labels.get(&article.outlet) {
            Some(l) => LabeledArticle {
                labels: l.clone(),
                article,
                labeled: true,
            },
            None => LabeledArticle {
                labels: OutletLabels::new(article.outlet.clone()),
                article,
                labeled: false,
            },
        })
        .collect()
}

/// Train/test partition tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Train,
    Test,
}

impl Partition {
    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Test => "test",
        }
    }
}

/// An exact train fraction, default 2/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub const TWO_THIRDS: Fraction = Fraction { num: 2, den: 3 };

    /// `round(self * n)`, half away from zero.
    pub fn scale_round(self, n: u64) -> u64 {
        (2 * n * self.num + self.den) / (2 * self.den)
    }
}

impl std::str::FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<u64>().map_err(|e| e.to_string())?,
                b.trim().parse::<u64>().map_err(|e| e.to_string())?,
            ),
            None => (s.trim().parse::<u64>().map_err(|e| e.to_string())?, 1),
        };
        if den == 0 {
            return Err("zero denominator".into());
        }
        if num > den {
            return Err("fraction above 1".into());
        }
        Ok(Fraction { num, den })
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A deterministic train/test assignment over article ids.
#[derive(Debug, Clone)]
pub struct SplitAssignment {
    pub assignment: BTreeMap<String, Partition>,
    pub seed: u64,
    pub train_fraction: Fraction,
}

impl SplitAssignment {
    pub fn train_len(&self) -> usize {
        self.assignment
            .values()
            .filter(|p| **p == Partition::Train)
            .count()
    }

    pub fn test_len(&self) -> usize {
        self.assignment.len() - self.train_len()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<(), CorpusError> {
        writeln!(w, "id,partition")?;
        for (id, part) in &self.assignment {
            writeln!(w, "{},{}", id, part.as_str())?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R, seed: u64, train_fraction: Fraction) -> Result<Self, CorpusError> {
        let mut assignment = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if idx == 0 {
                if line.trim() != "id,partition" {
                    return Err(CorpusError::MalformedSplit {
                        line: 1,
                        reason: format!("bad header {line:?}"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (id, part) = line.rsplit_once(',').ok_or(CorpusError::MalformedSplit {
                line: idx + 1,
                reason: "missing comma".into(),
            })?;
            let part = match part {
                "train" => Partition::Train,
                "test" => Partition::Test,
                other => {
                    return Err(CorpusError::MalformedSplit {
                        line: idx + 1,
                        reason: format!("bad partition {other:?}"),
                    })
                }
            };
            assignment.insert(id.to_string(), part);
        }
        Ok(SplitAssignment {
            assignment,
            seed,
            train_fraction,
        })
    }
}

/// Randomly partitions the given ids into train/test with
/// `|train| = round(train_fraction * n)`. Deterministic for a fixed seed.
///
/// Callers pass the ids of the articles that actually enter the classifier
/// (labeled with a nonzero rating); unlabeled articles stay out of the split.
pub fn split<'a, I>(
    ids: I,
    train_fraction: Fraction,
    seed: u64,
) -> Result<SplitAssignment, CorpusError>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut ids: Vec<&str> = ids.into_iter().collect();
    if ids.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let n_train = train_fraction.scale_round(ids.len() as u64) as usize;
    let mut assignment = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        let part = if i < n_train {
            Partition::Train
        } else {
            Partition::Test
        };
        assignment.insert((*id).to_string(), part);
    }
    Ok(SplitAssignment {
        assignment,
        seed,
        train_fraction,
    })
}

/// A generated stand-in corpus: two balanced document classes drawn from
/// class-specific token distributions, plus the outlet labels that realize
/// the intended trust class.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub articles: Vec<Article>,
    pub labels: BTreeMap<String, OutletLabels>,
    /// Intended class per article, parallel to `articles` (1 = trustworthy).
    pub classes: Vec<u8>,
}

impl SynthCorpus {
    pub fn attach(&self) -> Vec<LabeledArticle> {
        attach_labels(self.articles.clone(), &self.labels)
    }
}

/// Generates a synthetic labeled corpus. Class 0 and class 1 are balanced
/// within one document; token supports overlap according to
/// `class_separation` (0 = identical distributions, 1 = disjoint).
pub fn synth_corpus(
    seed: u64,
    n_docs: usize,
    vocab_size: usize,
    class_separation: f64,
) -> Result<SynthCorpus, CorpusError> {
    if n_docs < 2 {
        return Err(CorpusError::BadSynthParams(format!(
            "n_docs must be >= 2, got {n_docs}"
        )));
    }
    if vocab_size < 10 {
        return Err(CorpusError::BadSynthParams(format!(
            "vocab_size must be >= 10, got {vocab_size}"
        )));
    }
    if !(0.0..=1.0).contains(&class_separation) {
        return Err(CorpusError::BadSynthParams(format!(
            "class_separation must be in [0,1], got {class_separation}"
        )));
    }

    let vocab = synth_vocab(vocab_size);
    let half = vocab_size / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    const OUTLETS_PER_CLASS: usize = 5;
    let mut labels = BTreeMap::new();
    for class in 0..2u8 {
        for k in 0..OUTLETS_PER_CLASS {
            let outlet = format!("outlet-c{class}-{k}");
            let mut l = OutletLabels::new(outlet.clone());
            l.set(LabelSource::NewsGuard, class == 1);
            l.set(LabelSource::Wikipedia, class == 1);
            labels.insert(outlet, l);
        }
    }

    let mut articles = Vec::with_capacity(n_docs);
    let mut classes = Vec::with_capacity(n_docs);
    for i in 0..n_docs {
        let class = (i % 2) as u8;
        let len = rng.gen_range(40..=80);
        let mut tokens = Vec::with_capacity(len);
        for _ in 0..len {
            let from_class_pool = rng.gen::<f64>() < class_separation;
            let idx = if from_class_pool {
                if class == 0 {
                    rng.gen_range(0..half)
                } else {
                    rng.gen_range(half..vocab_size)
                }
            } else {
                rng.gen_range(0..vocab_size)
            };
            tokens.push(vocab[idx].as_str());
        }
        let outlet = format!("outlet-c{class}-{}", (i / 2) % OUTLETS_PER_CLASS);
        articles.push(Article {
            id: format!("doc{i:06}"),
            outlet,
            published: format!("2018-{:02}-{:02}", 1 + (i % 11), 1 + (i % 28)),
            title: tokens[..3.min(tokens.len())].join(" "),
            content: tokens.join(" "),
        });
        classes.push(class);
    }

    Ok(SynthCorpus {
        articles,
        labels,
        classes,
    })
}

/// Deterministic pseudoword vocabulary: base-26 strings, skipping anything in
/// the bundled stopword list so cleaning leaves synthetic text intact.
fn synth_vocab(size: usize) -> Vec<String> {
    let stopwords = StopwordList::bundled();
    let mut words = Vec::with_capacity(size);
    let mut i = 0usize;
    while words.len() < size {
        let mut n = i;
        let mut word = String::with_capacity(5);
        for _ in 0..5 {
            word.insert(0, (b'a' + (n % 26) as u8) as char);
            n /= 26;
        }
        i += 1;
        if stopwords.contains(&word) {
            continue;
        }
        words.push(word);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn article_line(id: &str, outlet: &str) -> String {
        format!(
            r#"{{"id":"{id}","outlet":"{outlet}","published":"2018-03-01","title":"t","content":"c"}}"#
        )
    }

    #[test]
    fn ingest_empty_stream() {
        let articles = ingest_articles(Cursor::new("")).unwrap();
        assert!(articles.is_empty());
    }

    #[test]
    fn ingest_preserves_order() {
        let input = [
            article_line("a1", "x"),
            article_line("a2", "y"),
            article_line("a3", "x"),
        ]
        .join("\n");
        let articles = ingest_articles(Cursor::new(input)).unwrap();
        assert_eq!(articles.len(), 3);
        assert_eq!(articles[0].id, "a1");
        assert_eq!(articles[1].id, "a2");
        assert_eq!(articles[2].id, "a3");
    }

    #[test]
    fn ingest_rejects_duplicate_id() {
        let input = [article_line("a1", "x"), article_line("a1", "y")].join("\n");
        let err = ingest_articles(Cursor::new(input)).unwrap_err();
        match err {
            CorpusError::DuplicateId { id } => assert_eq!(id, "a1"),
            other => panic!("expected duplicate-id error, got {other}"),
        }
    }

    #[test]
    fn ingest_reports_line_number() {
        let input = format!("{}\nnot json\n", article_line("a1", "x"));
        let err = ingest_articles(Cursor::new(input)).unwrap_err();
        match err {
            CorpusError::MalformedArticle { line, .. } => assert_eq!(line, 2),
            other => panic!("expected malformed-article error, got {other}"),
        }
    }

    #[test]
    fn ingest_round_trips() {
        let input = [
            article_line("a1", "x"),
            article_line("a2", "y"),
        ]
        .join("\n");
        let articles = ingest_articles(Cursor::new(&input)).unwrap();
        let mut buf = Vec::new();
        write_articles(&mut buf, &articles).unwrap();
        let again = ingest_articles(Cursor::new(buf)).unwrap();
        assert_eq!(articles, again);
    }

    #[test]
    fn labels_row_with_sparse_cells() {
        let input = format!("{LABELS_HEADER}\nx,1,,0,,,,,\n");
        let map = ingest_labels(Cursor::new(input)).unwrap();
        let labels = &map["x"];
        assert_eq!(labels.get(LabelSource::NewsGuard), Some(true));
        assert_eq!(labels.get(LabelSource::Wikipedia), Some(false));
        assert_eq!(labels.present(), 2);
    }

    #[test]
    fn labels_header_only_is_empty() {
        let input = format!("{LABELS_HEADER}\n");
        let map = ingest_labels(Cursor::new(input)).unwrap();
        assert!(map.is_empty());
    }

    #[test]
    fn labels_reject_out_of_range_cell() {
        let input = format!("{LABELS_HEADER}\nx,2,,,,,,,\n");
        let err = ingest_labels(Cursor::new(input)).unwrap_err();
        match err {
            CorpusError::BadLabelCell { row, column, cell } => {
                assert_eq!(row, 2);
                assert_eq!(column, "newsguard");
                assert_eq!(cell, "2");
            }
            other => panic!("expected bad-cell error, got {other}"),
        }
    }

    #[test]
    fn labels_reject_unknown_header() {
        let input = "outlet,newsguard,pew,wikipedia,opensources,mbfc,allsides,buzzfeed,nonsense\nx,,,,,,,,\n";
        assert!(matches!(
            ingest_labels(Cursor::new(input)).unwrap_err(),
            CorpusError::UnknownLabelColumn { .. }
        ));
    }

    #[test]
    fn labels_round_trip() {
        let input = format!("{LABELS_HEADER}\na,1,,0,,,,,\nb,,,,1,0,1,0,1\n");
        let map = ingest_labels(Cursor::new(&input)).unwrap();
        let mut buf = Vec::new();
        write_labels(&mut buf, &map).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), input);
    }

    #[test]
    fn attach_inherits_outlet_labels() {
        let articles = ingest_articles(Cursor::new(
            [article_line("a1", "x"), article_line("a2", "x")].join("\n"),
        ))
        .unwrap();
        let mut labels = BTreeMap::new();
        labels.insert(
            "x".to_string(),
            OutletLabels::new("x").with(LabelSource::NewsGuard, true),
        );
        let joined = attach_labels(articles, &labels);
        assert!(joined.iter().all(|a| a.labeled));
        assert!(joined
            .iter()
            .all(|a| a.labels.get(LabelSource::NewsGuard) == Some(true)));
    }

    #[test]
    fn attach_flags_unlisted_outlet() {
        let articles = ingest_articles(Cursor::new(article_line("a1", "ghost"))).unwrap();
        let content_before = articles[0].content.clone();
        let joined = attach_labels(articles, &BTreeMap::new());
        assert!(!joined[0].labeled);
        assert!(joined[0].labels.is_empty());
        assert_eq!(joined[0].article.content, content_before);
    }

    #[test]
    fn attach_empty_corpus() {
        assert!(attach_labels(Vec::new(), &BTreeMap::new()).is_empty());
    }

    #[test]
    fn split_three_articles_two_thirds() {
        let ids = ["a", "b", "c"];
        let s = split(ids.iter().copied(), Fraction::TWO_THIRDS, 1).unwrap();
        assert_eq!(s.train_len(), 2);
        assert_eq!(s.test_len(), 1);
    }

    #[test]
    fn split_is_deterministic() {
        let ids: Vec<String> = (0..97).map(|i| format!("id{i}")).collect();
        let a = split(ids.iter().map(|s| s.as_str()), Fraction::TWO_THIRDS, 42).unwrap();
        let b = split(ids.iter().map(|s| s.as_str()), Fraction::TWO_THIRDS, 42).unwrap();
        assert_eq!(a.assignment, b.assignment);
        let c = split(ids.iter().map(|s| s.as_str()), Fraction::TWO_THIRDS, 43).unwrap();
        assert_ne!(a.assignment, c.assignment);
    }

    #[test]
    fn split_paper_scale_train_size() {
        // round(2/3 * 552,369) = 368,246
        assert_eq!(Fraction::TWO_THIRDS.scale_round(552_369), 368_246);
    }

    #[test]
    fn split_rejects_empty() {
        assert!(matches!(
            split(std::iter::empty(), Fraction::TWO_THIRDS, 0),
            Err(CorpusError::EmptyCorpus)
        ));
    }

    #[test]
    fn split_csv_round_trip() {
        let ids = ["a", "b", "c", "d", "e"];
        let s = split(ids.iter().copied(), Fraction::TWO_THIRDS, 7).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SplitAssignment::read_csv(Cursor::new(buf), 7, Fraction::TWO_THIRDS).unwrap();
        assert_eq!(s.assignment, back.assignment);
    }

    #[test]
    fn synth_same_seed_identical() {
        let a = synth_corpus(9, 50, 100, 0.5).unwrap();
        let b = synth_corpus(9, 50, 100, 0.5).unwrap();
        assert_eq!(a.articles, b.articles);
        assert_eq!(a.classes, b.classes);
    }

    #[test]
    fn synth_full_separation_disjoint_supports() {
        let c = synth_corpus(3, 2000, 500, 1.0).unwrap();
        let vocab = synth_vocab(500);
        let first_half: HashSet<&str> = vocab[..250].iter().map(|s| s.as_str()).collect();
        for (article, class) in c.articles.iter().zip(&c.classes) {
            for token in article.content.split_whitespace() {
                if *class == 0 {
                    assert!(first_half.contains(token));
                } else {
                    assert!(!first_half.contains(token));
                }
            }
        }
    }

    #[test]
    fn synth_classes_balanced() {
        let c = synth_corpus(1, 101, 60, 0.3).unwrap();
        let ones = c.classes.iter().filter(|c| **c == 1).count();
        let zeros = c.classes.len() - ones;
        assert!((ones as i64 - zeros as i64).abs() <= 1);
    }

    #[test]
    fn synth_rejects_bad_params() {
        assert!(synth_corpus(0, 1, 100, 0.5).is_err());
        assert!(synth_corpus(0, 10, 9, 0.5).is_err());
        assert!(synth_corpus(0, 10, 100, 1.5).is_err());
    }

    #[test]
    fn synth_vocab_avoids_stopwords() {
        let stopwords = StopwordList::bundled();
        for word in synth_vocab(2000) {
            assert!(!stopwords.contains(&word));
        }
    }
}
