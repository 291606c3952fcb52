//! Exact O(n^2) t-SNE: per-point Gaussian bandwidths found by bisection to
//! hit the target perplexity, symmetrized joint probabilities, Student-t
//! low-dimensional affinities, and momentum gradient descent with adaptive
//! per-coordinate gains and an early exaggeration phase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TopicsError;

#[derive(Debug, Clone, Copy)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub momentum_start: f64,
    pub momentum_final: f64,
    pub momentum_switch_iter: usize,
    pub early_exaggeration: f64,
    pub exaggeration_iters: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        TsneConfig {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            momentum_start: 0.5,
            momentum_final: 0.8,
            momentum_switch_iter: 250,
            early_exaggeration: 12.0,
            exaggeration_iters: 100,
            seed: 0,
        }
    }
}

/// The embedded points plus the KL divergence at initialization and after the
/// final iteration (both against the unexaggerated P).
#[derive(Debug, Clone)]
pub struct TsneEmbedding {
    /// docs x 2, row-major.
    pub points: Vec<[f64; 2]>,
    pub initial_kl: f64,
    pub final_kl: f64,
    pub config: TsneConfig,
}

/// Pairwise squared Euclidean distances, row-major n x n.
pub fn pairwise_sq_dists(data: &[Vec<f64>]) -> Vec<f64> {
    let n = data.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist: f64 = data[i]
                .iter()
                .zip(&data[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    d
}

/// Conditional distributions P(.|i): for each row, bisects the Gaussian
/// precision beta until the row perplexity exp(H) matches the target within
/// 1e-3. Returns the row-major conditional matrix and the betas.
pub fn conditional_probs(sq_dists: &[f64], n: usize, perplexity: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; n * n];
    let mut betas = vec![1.0; n];
    let target_entropy = perplexity.ln();

    for i in 0..n {
        let mut beta = 1.0f64;
        let mut beta_min = f64::NEG_INFINITY;
        let mut beta_max = f64::INFINITY;
        let row = &sq_dists[i * n..(i + 1) * n];

        for _ in 0..200 {
            // Row distribution at the current beta.
            let mut sum = 0.0;
            let mut weighted = 0.0;
            for (j, &d) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                let w = (-beta * d).exp();
                sum += w;
                weighted += w * d;
            }
            // Entropy H = ln(sum) + beta * E[d].
            let entropy = if sum > 0.0 {
                sum.ln() + beta * weighted / sum
            } else {
                0.0
            };
            let diff = entropy - target_entropy;
            // |exp(H) - perplexity| <= 1e-3 in perplexity units.
            if ((entropy.exp()) - perplexity).abs() <= 1e-3 {
                break;
            }
            if diff > 0.0 {
                beta_min = beta;
                beta = if beta_max.is_infinite() {
                    beta * 2.0
                } else {
                    (beta + beta_max) / 2.0
                };
            } else {
                beta_max = beta;
                beta = if beta_min.is_infinite() {
                    beta / 2.0
                } else {
                    (beta + beta_min) / 2.0
                };
            }
        }

        let mut sum = 0.0;
        for (j, &d) in row.iter().enumerate() {
            if j == i {
                continue;
            }
            let w = (-beta * d).exp();
            p[i * n + j] = w;
            sum += w;
        }
        if sum > 0.0 {
            for j in 0..n {
                p[i * n + j] /= sum;
            }
        }
        betas[i] = beta;
    }
    (p, betas)
}

/// Symmetrized joint distribution: p_ij = (p_{j|i} + p_{i|j}) / 2n, floored
/// for KL stability.
pub fn joint_probs(conditional: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            p[i * n + j] =
                ((conditional[i * n + j] + conditional[j * n + i]) / (2.0 * n as f64)).max(1e-12);
        }
    }
    p
}

/// Student-t affinities of the embedding. Returns (unnormalized weights,
/// their sum).
fn student_t_weights(points: &[[f64; 2]]) -> (Vec<f64>, f64) {
    let n = points.len();
    let mut w = vec![0.0; n * n];
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            let weight = 1.0 / (1.0 + dx * dx + dy * dy);
            w[i * n + j] = weight;
            w[j * n + i] = weight;
            sum += 2.0 * weight;
        }
    }
    (w, sum)
}

/// KL(P || Q) for the current embedding.
pub fn kl_divergence(p: &[f64], points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    let (w, sum) = student_t_weights(points);
    let mut kl = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pij = p[i * n + j];
            let qij = (w[i * n + j] / sum).max(1e-12);
            kl += pij * (pij / qij).ln();
        }
    }
    kl
}

/// Runs exact t-SNE on the document vectors. Requires
/// `docs > 3 * perplexity`.
pub fn tsne(data: &[Vec<f64>], config: TsneConfig) -> Result<TsneEmbedding, TopicsError> {
    let n = data.len();
    if (n as f64) <= 3.0 * config.perplexity {
        return Err(TopicsError::TooFewDocs {
            docs: n,
            perplexity: config.perplexity,
        });
    }

    let sq = pairwise_sq_dists(data);
    let (conditional, _betas) = conditional_probs(&sq, n, config.perplexity);
    let p = joint_probs(&conditional, n);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points: Vec<[f64; 2]> = (0..n)
        .map(|_| [normal(&mut rng) * 1e-4, normal(&mut rng) * 1e-4])
        .collect();

    let initial_kl = kl_divergence(&p, &points);

    let mut velocity = vec![[0.0f64; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    let mut grad = vec![[0.0f64; 2]; n];

    for iter in 0..config.iterations {
        let exaggeration = if iter < config.exaggeration_iters {
            config.early_exaggeration
        } else {
            1.0
        };
        let momentum = if iter < config.momentum_switch_iter {
            config.momentum_start
        } else {
            config.momentum_final
        };

        let (w, sum) = student_t_weights(&points);
        for g in grad.iter_mut() {
            *g = [0.0, 0.0];
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let qij = (w[i * n + j] / sum).max(1e-12);
                let mult = (exaggeration * p[i * n + j] - qij) * w[i * n + j];
                grad[i][0] += 4.0 * mult * (points[i][0] - points[j][0]);
                grad[i][1] += 4.0 * mult * (points[i][1] - points[j][1]);
            }
        }

        // Adaptive gains as in the reference implementation.
        for i in 0..n {
            for d in 0..2 {
                let same_sign = grad[i][d].signum() == velocity[i][d].signum();
                gains[i][d] = if same_sign {
                    (gains[i][d] * 0.8).max(0.01)
                } else {
                    gains[i][d] + 0.2
                };
                velocity[i][d] =
                    momentum * velocity[i][d] - config.learning_rate * gains[i][d] * grad[i][d];
                points[i][d] += velocity[i][d];
            }
        }

        // Re-center to remove the translational degree of freedom.
        let mut mean = [0.0f64; 2];
        for pt in &points {
            mean[0] += pt[0];
            mean[1] += pt[1];
        }
        mean[0] /= n as f64;
        mean[1] /= n as f64;
        for pt in points.iter_mut() {
            pt[0] -= mean[0];
            pt[1] -= mean[1];
        }
    }

    let final_kl = kl_divergence(&p, &points);
    Ok(TsneEmbedding {
        points,
        initial_kl,
        final_kl,
        config,
    })
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
