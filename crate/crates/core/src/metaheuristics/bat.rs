//! Bat algorithm.
//!
//! Bats fly with frequency-tuned velocities relative to the best bat found
//! so far. A bat whose pulse rate is beaten by a uniform draw instead probes
//! a random point around the best bat, scaled by the population's mean
//! loudness. Candidates are accepted only if they improve the bat's own
//! cost and pass a loudness draw; acceptance lowers that bat's loudness and
//! resets its pulse rate to `R⁰·(1 − e^{−γt})`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng as SeededRng};

use super::{clamp_unit, BestTracker, OptimizeResult, Position};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaConfig {
    pub n_pop: usize,
    pub max_it: usize,
    pub loudness_init: f64,
    pub pulse_rate_init: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Loudness decay factor applied on acceptance.
    pub alpha: f64,
    /// Pulse-rate growth constant.
    pub gamma: f64,
    pub seed: u64,
}

impl Default for BaConfig {
    fn default() -> Self {
        BaConfig {
            n_pop: 10,
            max_it: 30,
            loudness_init: 0.9,
            pulse_rate_init: 0.6,
            f_min: 0.0,
            f_max: 2.0,
            alpha: 0.9,
            gamma: 0.9,
            seed: 0,
        }
    }
}

impl BaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::config(format!("ba: {m}")));
        if self.n_pop == 0 {
            return bad("n_pop must be at least 1".into());
        }
        if !(self.f_min.is_finite() && self.f_max.is_finite()) || self.f_min > self.f_max {
            return bad(format!(
                "need f_min <= f_max, got {} > {}",
                self.f_min, self.f_max
            ));
        }
        if !(self.loudness_init > 0.0 && self.loudness_init <= 1.0) {
            return bad(format!(
                "loudness_init must lie in (0, 1], got {}",
                self.loudness_init
            ));
        }
        if !(0.0..=1.0).contains(&self.pulse_rate_init) {
            return bad(format!(
                "pulse_rate_init must lie in [0, 1], got {}",
                self.pulse_rate_init
            ));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be non-negative, got {}", self.gamma));
        }
        Ok(())
    }
}

/// Frequency-tuned move of one bat:
/// `f = f_min + (f_max − f_min)·β`, `v' = v + (x − x*)·f`, `x' = x + v'`,
/// with `x'` clamped into the unit cube. Velocities are not clamped.
pub fn ba_move(
    position: &Position,
    velocity: &[f64],
    best: &Position,
    f_min: f64,
    f_max: f64,
    beta_draw: f64,
) -> (Vec<f64>, Position) {
    let f = f_min + (f_max - f_min) * beta_draw;
    let v: Vec<f64> = velocity
        .iter()
        .zip(position.coords())
        .zip(best.coords())
        .map(|((v, x), b)| v + (x - b) * f)
        .collect();
    let mut x: Vec<f64> = position
        .coords()
        .iter()
        .zip(&v)
        .map(|(x, v)| x + v)
        .collect();
    clamp_unit(&mut x);
    (v, Position(x))
}

/// Stepwise BA run; [`ba_optimize`] drives it to completion.
pub struct BatSwarm<F> {
    cfg: BaConfig,
    cost_fn: F,
    rng: SeededRng,
    positions: Vec<Position>,
    velocities: Vec<Vec<f64>>,
    costs: Vec<f64>,
    loudness: Vec<f64>,
    pulse_rates: Vec<f64>,
    tracker: BestTracker,
    evaluations: usize,
    iteration: usize,
}

impl<F: FnMut(&Position) -> f64> BatSwarm<F> {
    pub fn new(cost_fn: F, dim: usize, cfg: &BaConfig) -> Result<Self> {
        cfg.validate()?;
        if dim == 0 {
            return Err(Error::config("ba: dimension must be at least 1"));
        }
        let n = cfg.n_pop;
        let mut swarm = BatSwarm {
            cfg: cfg.clone(),
            cost_fn,
            rng: rng::seeded(cfg.seed),
            positions: Vec::with_capacity(n),
            velocities: vec![vec![0.0; dim]; n],
            costs: Vec::with_capacity(n),
            loudness: vec![cfg.loudness_init; n],
            pulse_rates: vec![cfg.pulse_rate_init; n],
            tracker: BestTracker::new(),
            evaluations: 0,
            iteration: 0,
        };
        for _ in 0..n {
            let p = Position((0..dim).map(|_| swarm.rng.gen::<f64>()).collect());
            let c = swarm.evaluate(&p);
            swarm.positions.push(p);
            swarm.costs.push(c);
        }
        swarm.tracker.record(0);
        Ok(swarm)
    }

    fn evaluate(&mut self, p: &Position) -> f64 {
        let cost = (self.cost_fn)(p);
        self.evaluations += 1;
        self.tracker.offer(p, cost);
        cost
    }

    /// One iteration: every bat moves (or probes locally), is evaluated
    /// once, and possibly accepts its candidate.
    pub fn step(&mut self) {
        self.iteration += 1;
        let t = self.iteration as f64;
        let mean_loudness = self.loudness.iter().sum::<f64>() / self.loudness.len() as f64;
        for i in 0..self.cfg.n_pop {
            let beta_draw = self.rng.gen::<f64>();
            let best = self.tracker.position().clone();
            let (v, moved) = ba_move(
                &self.positions[i],
                &self.velocities[i],
                &best,
                self.cfg.f_min,
                self.cfg.f_max,
                beta_draw,
            );
            self.velocities[i] = v;

            let candidate = if self.rng.gen::<f64>() > self.pulse_rates[i] {
                let mut local: Vec<f64> = best
                    .coords()
                    .iter()
                    .map(|b| b + self.rng.gen_range(-1.0..=1.0) * mean_loudness)
                    .collect();
                clamp_unit(&mut local);
                Position(local)
            } else {
                moved
            };
            let cost = self.evaluate(&candidate);

            if self.rng.gen::<f64>() < self.loudness[i] && cost < self.costs[i] {
                self.positions[i] = candidate;
                self.costs[i] = cost;
                self.loudness[i] *= self.cfg.alpha;
                self.pulse_rates[i] =
                    self.cfg.pulse_rate_init * (1.0 - (-self.cfg.gamma * t).exp());
            }
        }
        self.tracker.record(self.iteration);
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn loudness(&self) -> &[f64] {
        &self.loudness
    }

    pub fn pulse_rates(&self) -> &[f64] {
        &self.pulse_rates
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn best_cost(&self) -> f64 {
        self.tracker.cost()
    }

    pub fn finish(self) -> OptimizeResult {
        self.tracker.finish(self.evaluations)
    }
}

/// Minimize `cost_fn` over `[0, 1]^dim` for `cfg.max_it` iterations.
pub fn ba_optimize<F>(cost_fn: F, dim: usize, cfg: &BaConfig) -> Result<OptimizeResult>
where
    F: FnMut(&Position) -> f64,
{
    let mut swarm = BatSwarm::new(cost_fn, dim, cfg)?;
    for _ in 0..cfg.max_it {
        swarm.step();
    }
    Ok(swarm.finish())
}
