//! Latent semantic analysis and 2-D projection: TF-IDF term-document matrix,
//! truncated SVD via block power iteration, per-topic top words, document
//! cosine similarity, and an exact t-SNE embedding of the document vectors.

mod svd;
mod tfidf;
mod tsne;

pub use svd::{
    doc_cosine, reconstruction_error, topic_top_words, truncated_svd, LsaModel, SvdOptions,
};
pub use tfidf::{build_tfidf, TermDocMatrix};
pub use tsne::{
    conditional_probs, joint_probs, kl_divergence, pairwise_sq_dists, tsne, TsneConfig,
    TsneEmbedding,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TopicsError {
    #[error("corpus has no usable terms (all documents empty after filtering)")]
    EmptyMatrix,
    #[error("k = {k} exceeds min(rows, cols) = {max}")]
    RankTooLarge { k: usize, max: usize },
    #[error("SVD did not converge in {iters} iterations (residual {residual:.3e} > tol {tol:.3e})")]
    NoConvergence {
        iters: usize,
        residual: f64,
        tol: f64,
    },
    #[error("document index {index} out of range ({len} documents)")]
    DocIndexOutOfRange { index: usize, len: usize },
    #[error("t-SNE requires more than 3 * perplexity documents (got {docs}, perplexity {perplexity})")]
    TooFewDocs { docs: usize, perplexity: f64 },
}
