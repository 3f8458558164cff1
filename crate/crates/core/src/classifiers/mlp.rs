use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{Label, Matrix};
use crate::rng;

use super::sigmoid;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub hidden_layers: usize,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub init_range: f64,
}

#[derive(Clone, Debug)]
struct Layer {
    n_in: usize,
    n_out: usize,
    /// row-major, `n_out × n_in`
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Layer {
    fn forward(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..self.n_out).map(|o| {
            let w = &self.weights[o * self.n_in..(o + 1) * self.n_in];
            sigmoid(super::dot(w, input) + self.biases[o])
        }));
    }
}

/// Fully connected feed-forward network with logistic activations and a
/// single sigmoid output, trained by per-sample SGD on cross-entropy.
/// Weights start uniform in `[-init_range, init_range]`; sample order is
/// reshuffled every epoch from the seeded stream.
#[derive(Clone, Debug)]
pub struct Mlp {
    layers: Vec<Layer>,
}

impl Mlp {
    pub(crate) fn fit(x: &Matrix, y: &[Label], s: Settings, seed: u64) -> Self {
        let mut r = rng::seeded(seed);
        let mut sizes = vec![x.n_cols()];
        sizes.extend(std::iter::repeat_n(s.hidden_units, s.hidden_layers));
        sizes.push(1);
        let mut layers: Vec<Layer> = sizes
            .windows(2)
            .map(|w| Layer {
                n_in: w[0],
                n_out: w[1],
                weights: (0..w[0] * w[1])
                    .map(|_| r.gen_range(-s.init_range..=s.init_range))
                    .collect(),
                biases: (0..w[1])
                    .map(|_| r.gen_range(-s.init_range..=s.init_range))
                    .collect(),
            })
            .collect();

        let targets: Vec<f64> = y.iter().map(|l| l.as_unit()).collect();
        let mut order: Vec<usize> = (0..y.len()).collect();
        let mut activations: Vec<Vec<f64>> = vec![Vec::new(); layers.len() + 1];
        let mut deltas: Vec<Vec<f64>> = layers.iter().map(|l| vec![0.0; l.n_out]).collect();
        for _ in 0..s.epochs {
            order.shuffle(&mut r);
            for &i in &order {
                activations[0].clear();
                activations[0].extend_from_slice(x.row(i));
                for (k, layer) in layers.iter().enumerate() {
                    let (done, rest) = activations.split_at_mut(k + 1);
                    layer.forward(&done[k], &mut rest[0]);
                }
                let last = layers.len() - 1;
                deltas[last][0] = activations[last + 1][0] - targets[i];
                for k in (0..last).rev() {
                    let next = &layers[k + 1];
                    let (lower, upper) = deltas.split_at_mut(k + 1);
                    let lower = &mut lower[k];
                    lower.fill(0.0);
                    for (o, delta) in upper[0].iter().enumerate() {
                        let w = &next.weights[o * next.n_in..(o + 1) * next.n_in];
                        for (d, wu) in lower.iter_mut().zip(w) {
                            *d += delta * wu;
                        }
                    }
                    for (d, a) in lower.iter_mut().zip(&activations[k + 1]) {
                        *d *= a * (1.0 - a);
                    }
                }
                for (k, layer) in layers.iter_mut().enumerate() {
                    let input = &activations[k];
                    for (o, delta) in deltas[k].iter().enumerate() {
                        let g = s.learning_rate * delta;
                        let w = &mut layer.weights[o * layer.n_in..(o + 1) * layer.n_in];
                        for (wj, a) in w.iter_mut().zip(input) {
                            *wj -= g * a;
                        }
                        layer.biases[o] -= g;
                    }
                }
            }
        }
        Mlp { layers }
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        for layer in &self.layers {
            layer.forward(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur[0]
    }

    pub fn n_hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> Label {
        Label::from_bool(self.probability(x) >= 0.5)
    }
}
