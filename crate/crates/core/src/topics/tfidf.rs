//! Sparse TF-IDF term-document matrix: rows are terms, columns are documents,
//! weights are raw term frequency times smoothed inverse document frequency,
//! with each column L2-normalized.

use std::collections::HashMap;

use super::TopicsError;
use crate::textprep::TokenizedDoc;

/// Column-major sparse matrix of TF-IDF weights. Terms are sorted
/// lexicographically so row order never depends on hash iteration.
#[derive(Debug, Clone)]
pub struct TermDocMatrix {
    pub terms: Vec<String>,
    pub doc_ids: Vec<String>,
    /// Per document: sorted `(term_row, weight)` pairs, weight > 0.
    pub cols: Vec<Vec<(usize, f64)>>,
}

impl TermDocMatrix {
    pub fn rows(&self) -> usize {
        self.terms.len()
    }

    pub fn ndocs(&self) -> usize {
        self.cols.len()
    }

    /// y = A x, where x has one entry per document.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ndocs());
        debug_assert_eq!(y.len(), self.rows());
        y.fill(0.0);
        for (j, col) in self.cols.iter().enumerate() {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for &(row, w) in col {
                y[row] += w * xj;
            }
        }
    }

    /// y = A^T x, where x has one entry per term.
    pub fn mul_transpose_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows());
        debug_assert_eq!(y.len(), self.ndocs());
        for (j, col) in self.cols.iter().enumerate() {
            let mut sum = 0.0;
            for &(row, w) in col {
                sum += w * x[row];
            }
            y[j] = sum;
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.ndocs()]; self.rows()];
        for (j, col) in self.cols.iter().enumerate() {
            for &(row, w) in col {
                dense[row][j] = w;
            }
        }
        dense
    }
}

/// Builds the matrix: `weight(t, d) = tf(t, d) * (ln((1 + N) / (1 + df(t))) + 1)`
/// over terms whose corpus count is at least `min_count`, then L2-normalizes
/// each column. Documents left with no kept terms become all-zero columns.
pub fn build_tfidf(docs: &[TokenizedDoc], min_count: u64) -> Result<TermDocMatrix, TopicsError> {
    let mut corpus_count: HashMap<&str, u64> = HashMap::new();
    for doc in docs {
        for token in &doc.tokens {
            *corpus_count.entry(token.as_str()).or_insert(0) += 1;
        }
    }
    let mut terms: Vec<String> = corpus_count
        .iter()
        .filter(|(_, c)| **c >= min_count)
        .map(|(t, _)| t.to_string())
        .collect();
    terms.sort();
    if terms.is_empty() {
        return Err(TopicsError::EmptyMatrix);
    }
    let term_row: HashMap<&str, usize> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();

    // Document frequency over kept terms.
    let mut df = vec![0u64; terms.len()];
    let mut tf: HashMap<usize, u64> = HashMap::new();
    let mut cols = Vec::with_capacity(docs.len());
    let n = docs.len() as f64;

    // First pass per doc: term frequencies and df.
    let mut per_doc_tf: Vec<Vec<(usize, u64)>> = Vec::with_capacity(docs.len());
    for doc in docs {
        tf.clear();
        for token in &doc.tokens {
            if let Some(&row) = term_row.get(token.as_str()) {
                *tf.entry(row).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(usize, u64)> = tf.iter().map(|(r, c)| (*r, *c)).collect();
        entries.sort_by_key(|e| e.0);
        for &(row, _) in &entries {
            df[row] += 1;
        }
        per_doc_tf.push(entries);
    }

    let idf: Vec<f64> = df
        .iter()
        .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
        .collect();

    for entries in per_doc_tf {
        let mut col: Vec<(usize, f64)> = entries
            .into_iter()
            .map(|(row, count)| (row, count as f64 * idf[row]))
            .collect();
        let norm = col.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for entry in &mut col {
                entry.1 /= norm;
            }
        }
        cols.push(col);
    }

    Ok(TermDocMatrix {
        terms,
        doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
        cols,
    })
}
