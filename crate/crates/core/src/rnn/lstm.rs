//! Single LSTM layer with gate order (input, forget, candidate, output) and
//! explicit backpropagation through time. The input weights multiply the
//! embedded token, the recurrent weights the previous hidden state; both
//! gradients are accumulated per timestep in the caller's driver.

use num_traits::Float;
use rand::Rng;

use super::math::{lit, sigmoid};
use super::tensor::Tensor;

#[derive(Debug, Clone)]
pub struct LstmLayer<T> {
    pub input_size: usize,
    pub hidden: usize,
    /// 4h x input_size, row-major; gate rows i, f, g, o in h-sized blocks.
    pub w: Tensor<T>,
    /// 4h x h, row-major.
    pub r: Tensor<T>,
    /// 4h; forget-gate block initialized to one.
    pub b: Tensor<T>,
}

/// Per-timestep activations kept for the backward pass; each buffer is
/// batch x hidden.
#[derive(Debug, Clone)]
pub struct StepCache<T> {
    pub i: Vec<T>,
    pub f: Vec<T>,
    pub g: Vec<T>,
    pub o: Vec<T>,
    pub c: Vec<T>,
    pub h: Vec<T>,
}

impl<T: Float> LstmLayer<T> {
    pub fn param_count(input_size: usize, hidden: usize) -> usize {
        4 * (input_size * hidden + hidden * hidden + hidden)
    }

    /// Glorot-uniform weights, zero biases except the forget gate at one.
    pub fn init<R: Rng>(input_size: usize, hidden: usize, rng: &mut R) -> Self {
        let gate = 4 * hidden;
        let limit_w = (6.0 / (input_size + hidden) as f64).sqrt();
        let limit_r = (6.0 / (2 * hidden) as f64).sqrt();
        let uniform = |limit: f64, rng: &mut R| -> T {
            lit::<T>((rng.gen::<f64>() * 2.0 - 1.0) * limit)
        };
        let w = Tensor::from_vec(
            &[gate, input_size],
            (0..gate * input_size).map(|_| uniform(limit_w, rng)).collect(),
        );
        let r = Tensor::from_vec(
            &[gate, hidden],
            (0..gate * hidden).map(|_| uniform(limit_r, rng)).collect(),
        );
        let mut b = Tensor::zeros(&[gate]);
        for x in &mut b.data[hidden..2 * hidden] {
            *x = T::one();
        }
        LstmLayer {
            input_size,
            hidden,
            w,
            r,
            b,
        }
    }

    /// One timestep over a batch. `x` is batch x input_size; `h_prev` and
    /// `c_prev` are batch x hidden.
    pub fn step_forward(
        &self,
        x: &[T],
        h_prev: &[T],
        c_prev: &[T],
        batch: usize,
    ) -> StepCache<T> {
        let h = self.hidden;
        let gate = 4 * h;
        let d = self.input_size;
        let mut gates = vec![T::zero(); batch * gate];

        // gates = x W^T + h_prev R^T + b
        for n in 0..batch {
            let xn = &x[n * d..(n + 1) * d];
            let hn = &h_prev[n * h..(n + 1) * h];
            let out = &mut gates[n * gate..(n + 1) * gate];
            for (gi, out_g) in out.iter_mut().enumerate() {
                let wrow = &self.w.data[gi * d..(gi + 1) * d];
                let rrow = &self.r.data[gi * h..(gi + 1) * h];
                let mut acc = self.b.data[gi];
                for (a, b) in xn.iter().zip(wrow) {
                    acc = acc + *a * *b;
                }
                for (a, b) in hn.iter().zip(rrow) {
                    acc = acc + *a * *b;
                }
                *out_g = acc;
            }
        }

        let mut cache = StepCache {
            i: vec![T::zero(); batch * h],
            f: vec![T::zero(); batch * h],
            g: vec![T::zero(); batch * h],
            o: vec![T::zero(); batch * h],
            c: vec![T::zero(); batch * h],
            h: vec![T::zero(); batch * h],
        };
        for n in 0..batch {
            let base = n * gate;
            for k in 0..h {
                let idx = n * h + k;
                let i = sigmoid(gates[base + k]);
                let f = sigmoid(gates[base + h + k]);
                let g = gates[base + 2 * h + k].tanh();
                let o = sigmoid(gates[base + 3 * h + k]);
                let c = f * c_prev[idx] + i * g;
                cache.i[idx] = i;
                cache.f[idx] = f;
                cache.g[idx] = g;
                cache.o[idx] = o;
                cache.c[idx] = c;
                cache.h[idx] = o * c.tanh();
            }
        }
        cache
    }

    /// One timestep of BPTT. `dh` is the total gradient on h_t (from the head
    /// and from t+1); `dc_next` the cell gradient flowing back from t+1.
    /// Accumulates parameter gradients and returns (dh_prev, dc_prev).
    #[allow(clippy::too_many_arguments)]
    pub fn step_backward(
        &self,
        cache: &StepCache<T>,
        x: &[T],
        h_prev: &[T],
        c_prev: &[T],
        dh: &[T],
        dc_next: &[T],
        batch: usize,
        grad_w: &mut [T],
        grad_r: &mut [T],
        grad_b: &mut [T],
    ) -> (Vec<T>, Vec<T>) {
        let h = self.hidden;
        let gate = 4 * h;
        let d = self.input_size;
        let one = T::one();

        // Pre-activation gate gradients, batch x 4h.
        let mut dgates = vec![T::zero(); batch * gate];
        let mut dc_prev = vec![T::zero(); batch * h];
        for n in 0..batch {
            for k in 0..h {
                let idx = n * h + k;
                let tanh_c = cache.c[idx].tanh();
                let dho = dh[idx];
                let dc = dho * cache.o[idx] * (one - tanh_c * tanh_c) + dc_next[idx];
                let di = dc * cache.g[idx] * cache.i[idx] * (one - cache.i[idx]);
                let df = dc * c_prev[idx] * cache.f[idx] * (one - cache.f[idx]);
                let dg = dc * cache.i[idx] * (one - cache.g[idx] * cache.g[idx]);
                let do_ = dho * tanh_c * cache.o[idx] * (one - cache.o[idx]);
                let base = n * gate;
                dgates[base + k] = di;
                dgates[base + h + k] = df;
                dgates[base + 2 * h + k] = dg;
                dgates[base + 3 * h + k] = do_;
                dc_prev[idx] = dc * cache.f[idx];
            }
        }

        // grad_w += dG^T X ; grad_r += dG^T H_prev ; grad_b += column sums.
        for n in 0..batch {
            let xn = &x[n * d..(n + 1) * d];
            let hn = &h_prev[n * h..(n + 1) * h];
            let dg_n = &dgates[n * gate..(n + 1) * gate];
            for (gi, &coeff) in dg_n.iter().enumerate() {
                if coeff == T::zero() {
                    continue;
                }
                grad_b[gi] = grad_b[gi] + coeff;
                let wrow = &mut grad_w[gi * d..(gi + 1) * d];
                for (target, a) in wrow.iter_mut().zip(xn) {
                    *target = *target + coeff * *a;
                }
                let rrow = &mut grad_r[gi * h..(gi + 1) * h];
                for (target, a) in rrow.iter_mut().zip(hn) {
                    *target = *target + coeff * *a;
                }
            }
        }

        // dh_prev = dG R
        let mut dh_prev = vec![T::zero(); batch * h];
        for n in 0..batch {
            let dg_n = &dgates[n * gate..(n + 1) * gate];
            let out = &mut dh_prev[n * h..(n + 1) * h];
            for (gi, &coeff) in dg_n.iter().enumerate() {
                if coeff == T::zero() {
                    continue;
                }
                let rrow = &self.r.data[gi * h..(gi + 1) * h];
                for (target, a) in out.iter_mut().zip(rrow) {
                    *target = *target + coeff * *a;
                }
            }
        }

        (dh_prev, dc_prev)
    }
}
