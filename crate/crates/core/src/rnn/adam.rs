//! Adam with bias correction, one moment pair per parameter group.

use num_traits::Float;

use super::math::lit;

#[derive(Debug, Clone, Copy)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug)]
pub struct Adam<T> {
    config: AdamConfig,
    m: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    step: u64,
}

impl<T: Float> Adam<T> {
    pub fn new(config: AdamConfig, group_sizes: &[usize]) -> Self {
        Adam {
            config,
            m: group_sizes.iter().map(|&s| vec![T::zero(); s]).collect(),
            v: group_sizes.iter().map(|&s| vec![T::zero(); s]).collect(),
            step: 0,
        }
    }

    /// Advances the shared step counter; call once per batch before updating
    /// the groups.
    pub fn next_step(&mut self) {
        self.step += 1;
    }

    pub fn update(&mut self, group: usize, params: &mut [T], grads: &[T]) {
        assert_eq!(params.len(), grads.len());
        let beta1 = lit::<T>(self.config.beta1);
        let beta2 = lit::<T>(self.config.beta2);
        let eps = lit::<T>(self.config.eps);
        let one = T::one();
        let t = self.step as i32;
        let correction1 = one - beta1.powi(t);
        let correction2 = one - beta2.powi(t);
        let lr = lit::<T>(self.config.lr);

        let m = &mut self.m[group];
        let v = &mut self.v[group];
        for ((p, &g), (mi, vi)) in params
            .iter_mut()
            .zip(grads)
            .zip(m.iter_mut().zip(v.iter_mut()))
        {
            *mi = beta1 * *mi + (one - beta1) * g;
            *vi = beta2 * *vi + (one - beta2) * g * g;
            let m_hat = *mi / correction1;
            let v_hat = *vi / correction2;
            *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_lr_leaves_params_unchanged() {
        let config = AdamConfig {
            lr: 0.0,
            ..AdamConfig::default()
        };
        let mut adam: Adam<f64> = Adam::new(config, &[3]);
        let mut params = vec![1.0, -2.0, 0.5];
        adam.next_step();
        adam.update(0, &mut params, &[0.3, -0.1, 4.0]);
        assert_eq!(params, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn first_step_moves_by_lr() {
        // With bias correction the first step is lr * sign(g) (up to eps).
        let mut adam: Adam<f64> = Adam::new(AdamConfig::default(), &[2]);
        let mut params = vec![0.0, 0.0];
        adam.next_step();
        adam.update(0, &mut params, &[0.5, -0.25]);
        assert!((params[0] + 1e-3).abs() < 1e-6);
        assert!((params[1] - 1e-3).abs() < 1e-6);
    }

    #[test]
    fn descends_a_quadratic() {
        let mut adam: Adam<f64> = Adam::new(
            AdamConfig {
                lr: 0.05,
                ..AdamConfig::default()
            },
            &[1],
        );
        let mut x = vec![3.0];
        for _ in 0..500 {
            let g = 2.0 * x[0];
            adam.next_step();
            adam.update(0, &mut x, &[g]);
        }
        assert!(x[0].abs() < 1e-2, "x = {}", x[0]);
    }
}
