//! News-article trust classification workbench.
//!
//! The pipeline runs end to end on plain files: ingest articles and
//! outlet-level assessment labels, fold the per-source labels into an integer
//! trust rating and a binary trust class, clean and index the text, explore
//! the corpus (sentiment polarity, n-grams, part-of-speech counts), factor a
//! TF-IDF term-document matrix into topics, embed documents as paragraph
//! vectors, and train an LSTM classifier on padded index sequences. Every
//! learned component is implemented here from first principles; nothing is
//! delegated to an external ML runtime.
//!
//! Modules follow the pipeline order:
//!
//! - [`corpus`]: article/label ingestion, train/test splits, synthetic corpora
//! - [`labeling`]: trust ratings and their binary aggregation
//! - [`textprep`]: cleaning, vocabulary, index sequences, padding
//! - [`analysis`]: polarity, n-grams, part-of-speech counts
//! - [`topics`]: TF-IDF, truncated SVD, cosine similarity, exact t-SNE
//! - [`paravec`]: paragraph-vector embeddings with negative sampling
//! - [`rnn`]: the frozen-embedding LSTM classifier, trained by BPTT + Adam

pub mod analysis;
pub mod corpus;
pub mod labeling;
pub mod paravec;
pub mod rnn;
pub mod textprep;
pub mod topics;

pub use corpus::{Article, LabelSource, LabeledArticle, OutletLabels, Partition, SplitAssignment};
pub use labeling::{Rating, TrustClass};
pub use textprep::{PaddedSequence, StopwordList, TokenizedDoc, Vocabulary};
