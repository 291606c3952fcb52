//! Central finite-difference oracle for the analytic BPTT gradients, run in
//! f64 on the tiny network across ten seeds.

use newstrust::labeling::TrustClass;
use newstrust::rnn::{bce_loss, random_embeddings, RnnClassifier};
use newstrust::textprep::{pad, PaddedSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-4;
const TOLERANCE: f64 = 1e-4;

fn group_mut(model: &mut RnnClassifier<f64>, group: usize) -> &mut [f64] {
    match group {
        0 => &mut model.lstm.w.data,
        1 => &mut model.lstm.r.data,
        2 => &mut model.lstm.b.data,
        3 => &mut model.dense.weights.data,
        4 => std::slice::from_mut(&mut model.dense.bias),
        _ => unreachable!(),
    }
}

fn loss_of(model: &RnnClassifier<f64>, batch: &[PaddedSequence], labels: &[TrustClass]) -> f64 {
    let probs = model.forward(batch).unwrap();
    bce_loss(&probs, labels).unwrap()
}

#[test]
fn analytic_gradients_match_finite_differences_over_ten_seeds() {
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        // Tiny net: V=10, d_e=4, h=3, L=5.
        let mut model = RnnClassifier::new(random_embeddings::<f64>(10, 4, seed), 3, 5, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBEEF);
        let batch: Vec<PaddedSequence> = (0..4)
            .map(|_| {
                let len = rng.gen_range(1..=5);
                let indices: Vec<usize> = (0..len).map(|_| rng.gen_range(0..10)).collect();
                pad(&indices, 5)
            })
            .collect();
        let labels: Vec<TrustClass> = (0..4)
            .map(|i| {
                if i % 2 == 0 {
                    TrustClass::Trustworthy
                } else {
                    TrustClass::Untrustworthy
                }
            })
            .collect();

        let (_, grads) = model.loss_and_grads(&batch, &labels).unwrap();
        let analytic: [Vec<f64>; 5] = [
            grads.w.clone(),
            grads.r.clone(),
            grads.b.clone(),
            grads.dense_w.clone(),
            vec![grads.dense_b],
        ];

        for (group, analytic_group) in analytic.iter().enumerate() {
            for idx in 0..analytic_group.len() {
                let original = group_mut(&mut model, group)[idx];
                group_mut(&mut model, group)[idx] = original + STEP;
                let plus = loss_of(&model, &batch, &labels);
                group_mut(&mut model, group)[idx] = original - STEP;
                let minus = loss_of(&model, &batch, &labels);
                group_mut(&mut model, group)[idx] = original;

                let numeric = (plus - minus) / (2.0 * STEP);
                let a = analytic_group[idx];
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
                worst = worst.max(rel);
                assert!(
                    rel < TOLERANCE,
                    "seed {seed} group {group} param {idx}: analytic {a}, numeric {numeric}, rel {rel}"
                );
            }
        }
    }
    println!("max relative gradient error over 10 seeds: {worst:.3e}");
}
