//! Truncated SVD of the term-document matrix by block power iteration with
//! re-orthonormalization, plus topic word extraction and document cosine
//! similarity on the factored space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tfidf::TermDocMatrix;
use super::TopicsError;

/// Truncated factorization A ~= U_k S_k V_k^T. Row j of `v` scaled entrywise
/// by `s` is document j's topic-space vector.
#[derive(Debug, Clone)]
pub struct LsaModel {
    pub k: usize,
    /// terms x k, row-major.
    pub u: Vec<f64>,
    /// k singular values, non-increasing.
    pub s: Vec<f64>,
    /// docs x k, row-major.
    pub v: Vec<f64>,
    pub terms: Vec<String>,
    pub doc_ids: Vec<String>,
}

impl LsaModel {
    pub fn ndocs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Document j's vector: row j of V_k scaled by the singular values.
    pub fn doc_vector(&self, j: usize) -> Vec<f64> {
        (0..self.k)
            .map(|l| self.v[j * self.k + l] * self.s[l])
            .collect()
    }

    /// All document vectors, row-major docs x k.
    pub fn doc_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.ndocs()).map(|j| self.doc_vector(j)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SvdOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            max_iter: 500,
            tol: 1e-8,
            seed: 0,
        }
    }
}

/// Modified Gram-Schmidt, two passes. Columns stored as separate vectors.
/// Degenerate (near-zero) columns are replaced with zeros.
fn orthonormalize(cols: &mut [Vec<f64>]) {
    for _pass in 0..2 {
        for i in 0..cols.len() {
            for j in 0..i {
                let dot: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                let (left, right) = cols.split_at_mut(i);
                let cj = &left[j];
                for (x, y) in right[0].iter_mut().zip(cj) {
                    *x -= dot * y;
                }
            }
            let norm: f64 = cols[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-300 {
                for x in &mut cols[i] {
                    *x /= norm;
                }
            } else {
                cols[i].fill(0.0);
            }
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix (row-major
/// b x b). Returns eigenvalues (descending) and eigenvectors as columns of a
/// row-major matrix.
fn jacobi_eigen(a: &[f64], b: usize) -> (Vec<f64>, Vec<f64>) {
    let mut m = a.to_vec();
    let mut q = vec![0.0; b * b];
    for i in 0..b {
        q[i * b + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..b {
            for j in (i + 1)..b {
                off += m[i * b + j] * m[i * b + j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&m)) {
            break;
        }
        for p in 0..b {
            for r in (p + 1)..b {
                let apq = m[p * b + r];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * b + p];
                let aqq = m[r * b + r];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..b {
                    let mkp = m[k * b + p];
                    let mkq = m[k * b + r];
                    m[k * b + p] = c * mkp - s * mkq;
                    m[k * b + r] = s * mkp + c * mkq;
                }
                for k in 0..b {
                    let mpk = m[p * b + k];
                    let mqk = m[r * b + k];
                    m[p * b + k] = c * mpk - s * mqk;
                    m[r * b + k] = s * mpk + c * mqk;
                }
                for k in 0..b {
                    let qkp = q[k * b + p];
                    let qkq = q[k * b + r];
                    q[k * b + p] = c * qkp - s * qkq;
                    q[k * b + r] = s * qkp + c * qkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&i, &j| {
        m[j * b + j]
            .partial_cmp(&m[i * b + i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i * b + i]).collect();
    let mut vectors = vec![0.0; b * b];
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..b {
            vectors[k * b + new_col] = q[k * b + old_col];
        }
    }
    (eigenvalues, vectors)
}

fn frobenius(m: &[f64]) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Block power iteration on the document side with Rayleigh-Ritz extraction.
/// Converged when every one of the leading k triplets has
/// `||A^T u - sigma v|| <= tol`.
pub fn truncated_svd(
    matrix: &TermDocMatrix,
    k: usize,
    opts: SvdOptions,
) -> Result<LsaModel, TopicsError> {
    let m = matrix.rows();
    let n = matrix.ndocs();
    let max_rank = m.min(n);
    if k == 0 || k > max_rank {
        return Err(TopicsError::RankTooLarge { k, max: max_rank });
    }
    // Oversample the block for faster tail convergence.
    let b = (k + 4).min(max_rank);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut subspace: Vec<Vec<f64>> = (0..b)
        .map(|_| (0..n).map(|_| standard_normal(&mut rng)).collect())
        .collect();
    orthonormalize(&mut subspace);

    let mut term_buf = vec![0.0; m];
    let mut achieved = f64::INFINITY;

    for iter in 0..opts.max_iter {
        // Power step: V <- orth(A^T (A V)).
        for col in subspace.iter_mut() {
            matrix.mul_vec(col, &mut term_buf);
            matrix.mul_transpose_vec(&term_buf, col);
        }
        orthonormalize(&mut subspace);

        // Rayleigh-Ritz: eigen of (A V)^T (A V), rotate, measure residuals.
        let projected: Vec<Vec<f64>> = subspace
            .iter()
            .map(|col| {
                let mut w = vec![0.0; m];
                matrix.mul_vec(col, &mut w);
                w
            })
            .collect();
        let mut gram = vec![0.0; b * b];
        for i in 0..b {
            for j in i..b {
                let dot: f64 = projected[i].iter().zip(&projected[j]).map(|(a, c)| a * c).sum();
                gram[i * b + j] = dot;
                gram[j * b + i] = dot;
            }
        }
        let (_eigenvalues, rotation) = jacobi_eigen(&gram, b);

        // Rotate the doc-side basis: v_l = sum_c subspace[c] * rotation[c, l].
        let rotate = |cols: &[Vec<f64>], len: usize| -> Vec<Vec<f64>> {
            (0..b)
                .map(|l| {
                    let mut out = vec![0.0; len];
                    for (c, col) in cols.iter().enumerate() {
                        let r = rotation[c * b + l];
                        if r == 0.0 {
                            continue;
                        }
                        for (o, x) in out.iter_mut().zip(col) {
                            *o += r * x;
                        }
                    }
                    out
                })
                .collect()
        };
        let ritz_v = rotate(&subspace, n);
        let ritz_av = rotate(&projected, m);

        let sigmas: Vec<f64> = ritz_av
            .iter()
            .map(|w| w.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();

        // Residual of triplet l: ||A^T u_l - sigma_l v_l||.
        let mut max_residual = 0.0f64;
        let mut doc_buf = vec![0.0; n];
        for l in 0..k {
            let sigma = sigmas[l];
            let residual = if sigma > 1e-300 {
                let u: Vec<f64> = ritz_av[l].iter().map(|x| x / sigma).collect();
                matrix.mul_transpose_vec(&u, &mut doc_buf);
                doc_buf
                    .iter()
                    .zip(&ritz_v[l])
                    .map(|(a, v)| (a - sigma * v) * (a - sigma * v))
                    .sum::<f64>()
                    .sqrt()
            } else {
                sigma
            };
            max_residual = max_residual.max(residual);
        }
        achieved = max_residual;

        if max_residual <= opts.tol {
            let mut u = vec![0.0; m * k];
            let mut v = vec![0.0; n * k];
            let mut s = vec![0.0; k];
            for l in 0..k {
                s[l] = sigmas[l];
                if sigmas[l] > 1e-300 {
                    for (row, x) in ritz_av[l].iter().enumerate() {
                        u[row * k + l] = x / sigmas[l];
                    }
                }
                for (row, x) in ritz_v[l].iter().enumerate() {
                    v[row * k + l] = *x;
                }
            }
            return Ok(LsaModel {
                k,
                u,
                s,
                v,
                terms: matrix.terms.clone(),
                doc_ids: matrix.doc_ids.clone(),
            });
        }

        // Keep iterating from the rotated basis for faster separation.
        subspace = ritz_v;
        let _ = iter;
    }

    Err(TopicsError::NoConvergence {
        iters: opts.max_iter,
        residual: achieved,
        tol: opts.tol,
    })
}

/// Box-Muller; two uniform draws per normal keeps the stream simple and
/// seed-stable.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// For topic i, the `m` terms with the largest |U[., i]|, descending, ties
/// broken lexicographically.
pub fn topic_top_words(model: &LsaModel, m: usize) -> Vec<Vec<(String, f64)>> {
    assert!(m >= 1, "m must be >= 1");
    (0..model.k)
        .map(|topic| {
            let mut ranked: Vec<(String, f64)> = model
                .terms
                .iter()
                .enumerate()
                .map(|(row, term)| (term.clone(), model.u[row * model.k + topic]))
                .collect();
            ranked.sort_by(|a, b| {
                b.1.abs()
                    .partial_cmp(&a.1.abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| a.0.cmp(&b.0))
            });
            ranked.truncate(m);
            ranked
        })
        .collect()
}

/// Cosine of the two documents' LSA vectors; 0.0 when either vector is zero.
pub fn doc_cosine(model: &LsaModel, i: usize, j: usize) -> Result<f64, TopicsError> {
    let len = model.ndocs();
    for index in [i, j] {
        if index >= len {
            return Err(TopicsError::DocIndexOutOfRange { index, len });
        }
    }
    let a = model.doc_vector(i);
    let b = model.doc_vector(j);
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// ||A - U_j S_j V_j^T||_F using the leading j triplets of the model.
pub fn reconstruction_error(matrix: &TermDocMatrix, model: &LsaModel, j: usize) -> f64 {
    assert!(j <= model.k);
    let dense = matrix.to_dense();
    let mut err = 0.0;
    for (row, dense_row) in dense.iter().enumerate() {
        for (col, &a) in dense_row.iter().enumerate() {
            let mut approx = 0.0;
            for l in 0..j {
                approx += model.u[row * model.k + l] * model.s[l] * model.v[col * model.k + l];
            }
            err += (a - approx) * (a - approx);
        }
    }
    err.sqrt()
}
