//! Trust ratings: fold per-source binary labels into an integer rating
//! (positives minus negatives over five sources) and aggregate the rating
//! into a binary trust class. Zero ratings carry no signal and are excluded
//! from the labeled set.

use std::collections::BTreeMap;

use crate::corpus::{LabelSource, LabeledArticle, OutletLabels};

/// The five sources that enter the rating; the other three are parsed and
/// stored but never influence it.
pub const RATING_SOURCES: [LabelSource; 5] = [
    LabelSource::NewsGuard,
    LabelSource::PewResearch,
    LabelSource::Wikipedia,
    LabelSource::MediaBiasFactCheck,
    LabelSource::Politifact,
];

/// Integer trust rating in [-5, +5]; each rating source contributes +1, -1,
/// or nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rating(pub i8);

/// Binary trust class: 1 trustworthy, 0 untrustworthy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrustClass {
    Untrustworthy = 0,
    Trustworthy = 1,
}

impl TrustClass {
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_u8(v: u8) -> Option<TrustClass> {
        match v {
            0 => Some(TrustClass::Untrustworthy),
            1 => Some(TrustClass::Trustworthy),
            _ => None,
        }
    }
}

/// Positives minus negatives over the five rating sources.
pub fn compute_rating(labels: &OutletLabels) -> Rating {
    let mut value = 0i8;
    for source in RATING_SOURCES {
        match labels.get(source) {
            Some(true) => value += 1,
            Some(false) => value -= 1,
            None => {}
        }
    }
    Rating(value)
}

/// Positive ratings are trustworthy, negative untrustworthy, zero excluded.
pub fn binarize(rating: Rating) -> Option<TrustClass> {
    match rating.0 {
        v if v > 0 => Some(TrustClass::Trustworthy),
        v if v < 0 => Some(TrustClass::Untrustworthy),
        _ => None,
    }
}

/// One article's rating outputs, as emitted to `ratings.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleRating {
    pub id: String,
    pub rating: Rating,
    pub class: Option<TrustClass>,
}

/// Rates every article in a labeled corpus.
pub fn rate_corpus(corpus: &[LabeledArticle]) -> Vec<ArticleRating> {
    corpus
        .iter()
        .map(|a| {
            let rating = compute_rating(&a.labels);
            ArticleRating {
                id: a.article.id.clone(),
                rating,
                class: binarize(rating),
            }
        })
        .collect()
}

/// Counts per rating value and per trust class. Zero-rated articles appear in
/// `by_rating` under 0 but in neither class count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RatingDistribution {
    pub by_rating: BTreeMap<i8, u64>,
    pub untrustworthy: u64,
    pub trustworthy: u64,
}

impl RatingDistribution {
    pub fn classed_total(&self) -> u64 {
        self.untrustworthy + self.trustworthy
    }
}

/// Tallies ratings over any label sequence.
pub fn rating_distribution<'a, I>(labels: I) -> RatingDistribution
where
    I: IntoIterator<Item = &'a OutletLabels>,
{
    let mut dist = RatingDistribution::default();
    for l in labels {
        let rating = compute_rating(l);
        *dist.by_rating.entry(rating.0).or_insert(0) += 1;
        match binarize(rating) {
            Some(TrustClass::Trustworthy) => dist.trustworthy += 1,
            Some(TrustClass::Untrustworthy) => dist.untrustworthy += 1,
            None => {}
        }
    }
    dist
}

/// `id,rating,trust_class` with trust_class empty for excluded articles.
pub fn write_ratings<W: std::io::Write>(
    mut w: W,
    ratings: &[ArticleRating],
) -> std::io::Result<()> {
    writeln!(w, "id,rating,trust_class")?;
    for r in ratings {
        let class = r.class.map(|c| c.as_u8().to_string()).unwrap_or_default();
        writeln!(w, "{},{},{}", r.id, r.rating.0, class)?;
    }
    Ok(())
}

pub fn read_ratings<R: std::io::BufRead>(
    reader: R,
) -> Result<Vec<ArticleRating>, crate::corpus::CorpusError> {
    use crate::corpus::CorpusError;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(CorpusError::MalformedSplit {
                line: idx + 1,
                reason: "expected id,rating,trust_class".into(),
            });
        }
        let rating: i8 = parts[1].parse().map_err(|_| CorpusError::MalformedSplit {
            line: idx + 1,
            reason: format!("bad rating {:?}", parts[1]),
        })?;
        let class = match parts[2] {
            "" => None,
            "0" => Some(TrustClass::Untrustworthy),
            "1" => Some(TrustClass::Trustworthy),
            other => {
                return Err(CorpusError::MalformedSplit {
                    line: idx + 1,
                    reason: format!("bad trust_class {other:?}"),
                })
            }
        };
        out.push(ArticleRating {
            id: parts[0].to_string(),
            rating: Rating(rating),
            class,
        });
    }
    Ok(out)
}
