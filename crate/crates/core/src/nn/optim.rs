use alloc::vec::Vec;

use super::{Gradients, Network};

/// Stochastic gradient descent with classical momentum:
/// `v = μ·v + g`, `θ -= lr·v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sgd {
    pub learning_rate: f64,
    pub momentum: f64,
    velocity: Vec<Vec<f64>>,
}

impl Sgd {
    pub fn new(learning_rate: f64, momentum: f64) -> Self {
        Sgd { learning_rate, momentum, velocity: Vec::new() }
    }

    pub fn step(&mut self, net: &mut Network, grads: &Gradients) {
        if self.velocity.is_empty() {
            self.velocity = grads.blocks().map(|b| alloc::vec![0.0; b.len()]).collect();
        }
        for ((theta, g), v) in net.param_blocks_mut().into_iter().zip(grads.blocks()).zip(&mut self.velocity) {
            for ((t, g), v) in theta.iter_mut().zip(g).zip(v.iter_mut()) {
                *v = self.momentum * *v + g;
                *t -= self.learning_rate * *v;
            }
        }
    }
}
