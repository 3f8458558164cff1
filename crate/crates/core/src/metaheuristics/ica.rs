//! Imperialist competitive algorithm.
//!
//! The population is split into imperialists (the best `n_imp` countries)
//! and colonies distributed among them in proportion to imperialist power.
//! Each iteration assimilates every colony toward its imperialist, revolts a
//! random subset, promotes colonies that beat their imperialist, hands the
//! weakest colony of the weakest empire to a rival chosen by possession
//! probability, and dissolves empires left without colonies.

use std::f64::consts::FRAC_PI_4;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng as SeededRng};

use super::{clamp_unit, BestTracker, OptimizeResult, Position};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IcaConfig {
    pub n_pop: usize,
    pub n_imp: usize,
    pub max_it: usize,
    /// Assimilation coefficient; colonies move `U[0, beta]` times their
    /// distance to the imperialist.
    pub beta: f64,
    /// Weight of the mean colony cost in an empire's total cost.
    pub zeta: f64,
    /// Half-range of the assimilation deviation angle, in radians.
    pub phi: f64,
    pub revolution_rate: f64,
    pub seed: u64,
}

impl Default for IcaConfig {
    fn default() -> Self {
        IcaConfig {
            n_pop: 10,
            n_imp: 5,
            max_it: 30,
            beta: 2.0,
            zeta: 0.1,
            phi: FRAC_PI_4,
            revolution_rate: 0.1,
            seed: 0,
        }
    }
}

impl IcaConfig {
    pub fn n_col(&self) -> usize {
        self.n_pop - self.n_imp
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::config(format!("ica: {m}")));
        if self.n_imp == 0 || self.n_imp >= self.n_pop {
            return bad(format!(
                "need 1 <= n_imp < n_pop, got n_imp={} n_pop={}",
                self.n_imp, self.n_pop
            ));
        }
        if !(1.0..=2.0).contains(&self.beta) {
            return bad(format!("beta must lie in [1, 2], got {}", self.beta));
        }
        if !(self.zeta > 0.0 && self.zeta < 1.0) {
            return bad(format!("zeta must lie in (0, 1), got {}", self.zeta));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&self.phi) {
            return bad(format!("phi must lie in [0, pi/2), got {}", self.phi));
        }
        if !(0.0..=1.0).contains(&self.revolution_rate) {
            return bad(format!(
                "revolution_rate must lie in [0, 1], got {}",
                self.revolution_rate
            ));
        }
        Ok(())
    }
}

/// Share of a total assigned to each entry from its distance to the worst
/// cost: `|Y_k / Σ Y|` with `Y_k = max(c) − c_k`. All-equal costs give a
/// uniform split.
fn normalized_share(costs: &[f64]) -> Vec<f64> {
    let worst = costs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gaps: Vec<f64> = costs.iter().map(|c| worst - c).collect();
    let total: f64 = gaps.iter().sum();
    if total > 0.0 && total.is_finite() {
        gaps.iter().map(|y| (y / total).abs()).collect()
    } else {
        vec![1.0 / costs.len() as f64; costs.len()]
    }
}

/// Normalized power of each imperialist from its cost.
pub fn ica_imperialist_power(costs: &[f64]) -> Vec<f64> {
    normalized_share(costs)
}

/// Imperialist cost plus `zeta` times the mean colony cost; an empire
/// without colonies is worth its imperialist alone.
pub fn ica_total_cost(imperialist_cost: f64, colony_costs: &[f64], zeta: f64) -> f64 {
    if colony_costs.is_empty() {
        return imperialist_cost;
    }
    let mean = colony_costs.iter().sum::<f64>() / colony_costs.len() as f64;
    imperialist_cost + zeta * mean
}

/// Probability of each empire taking possession of a contested colony.
pub fn ica_possession_probability(total_costs: &[f64]) -> Vec<f64> {
    normalized_share(total_costs)
}

/// Initial colony counts `round(P_k · n_col)`. A rounding surplus or
/// deficit is settled on the strongest imperialists first.
pub fn allocate_colonies(powers: &[f64], n_col: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = powers
        .iter()
        .map(|p| (p * n_col as f64).round() as usize)
        .collect();
    let mut order: Vec<usize> = (0..powers.len()).collect();
    order.sort_by(|&a, &b| powers[b].total_cmp(&powers[a]).then(a.cmp(&b)));
    let assigned: usize = counts.iter().sum();
    if assigned < n_col {
        counts[order[0]] += n_col - assigned;
    } else {
        let mut excess = assigned - n_col;
        for &k in &order {
            let take = excess.min(counts[k]);
            counts[k] -= take;
            excess -= take;
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq)]
pub struct Country {
    pub position: Position,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Empire {
    pub imperialist: Country,
    pub colonies: Vec<Country>,
    pub total_cost: f64,
}

impl Empire {
    fn refresh_total(&mut self, zeta: f64) {
        let costs: Vec<f64> = self.colonies.iter().map(|c| c.cost).collect();
        self.total_cost = ica_total_cost(self.imperialist.cost, &costs, zeta);
    }

    /// Swap the imperialist with its best colony when that colony is cheaper.
    fn promote_best_colony(&mut self) {
        let best = self
            .colonies
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cost.total_cmp(&b.1.cost).then(a.0.cmp(&b.0)));
        if let Some((idx, colony)) = best {
            if colony.cost < self.imperialist.cost {
                std::mem::swap(&mut self.imperialist, &mut self.colonies[idx]);
            }
        }
    }
}

/// Stepwise ICA run, exposed so that callers can inspect empires between
/// iterations. [`ica_optimize`] drives it to completion.
pub struct ImperialistCompetition<F> {
    cfg: IcaConfig,
    dim: usize,
    cost_fn: F,
    rng: SeededRng,
    empires: Vec<Empire>,
    tracker: BestTracker,
    evaluations: usize,
    iteration: usize,
}

impl<F: FnMut(&Position) -> f64> ImperialistCompetition<F> {
    pub fn new(cost_fn: F, dim: usize, cfg: &IcaConfig) -> Result<Self> {
        cfg.validate()?;
        if dim == 0 {
            return Err(Error::config("ica: dimension must be at least 1"));
        }
        let mut run = ImperialistCompetition {
            cfg: cfg.clone(),
            dim,
            cost_fn,
            rng: rng::seeded(cfg.seed),
            empires: Vec::new(),
            tracker: BestTracker::new(),
            evaluations: 0,
            iteration: 0,
        };
        run.initialize();
        Ok(run)
    }

    fn random_position(&mut self) -> Position {
        Position((0..self.dim).map(|_| self.rng.gen::<f64>()).collect())
    }

    fn evaluate(&mut self, position: Position) -> Country {
        let cost = (self.cost_fn)(&position);
        self.evaluations += 1;
        self.tracker.offer(&position, cost);
        Country { position, cost }
    }

    fn initialize(&mut self) {
        let mut countries: Vec<Country> = (0..self.cfg.n_pop)
            .map(|_| {
                let p = self.random_position();
                self.evaluate(p)
            })
            .collect();
        countries.sort_by(|a, b| a.cost.total_cmp(&b.cost));
        let mut colonies = countries.split_off(self.cfg.n_imp);
        colonies.shuffle(&mut self.rng);

        let costs: Vec<f64> = countries.iter().map(|c| c.cost).collect();
        let counts = allocate_colonies(&ica_imperialist_power(&costs), colonies.len());
        let mut pool = colonies.into_iter();
        self.empires = countries
            .into_iter()
            .zip(counts)
            .map(|(imperialist, n)| {
                let mut empire = Empire {
                    imperialist,
                    colonies: pool.by_ref().take(n).collect(),
                    total_cost: 0.0,
                };
                empire.promote_best_colony();
                empire.refresh_total(self.cfg.zeta);
                empire
            })
            .collect();
        self.tracker.record(0);
    }

    /// Move toward the imperialist by `U[0, beta]` times their offset, then
    /// deviate: each coordinate gets `tan(θ_j)·‖step‖/√d`, `θ_j ~ U[−φ, φ]`.
    fn assimilate(&mut self, colony: &Position, imperialist: &Position) -> Position {
        let u = self.rng.gen_range(0.0..=self.cfg.beta);
        let step: Vec<f64> = imperialist
            .coords()
            .iter()
            .zip(colony.coords())
            .map(|(i, c)| u * (i - c))
            .collect();
        let norm = step.iter().map(|s| s * s).sum::<f64>().sqrt();
        let scale = norm / (self.dim as f64).sqrt();
        let phi = self.cfg.phi;
        let mut moved: Vec<f64> = colony
            .coords()
            .iter()
            .zip(&step)
            .map(|(c, s)| {
                let theta = if phi > 0.0 {
                    self.rng.gen_range(-phi..=phi)
                } else {
                    0.0
                };
                c + s + theta.tan() * scale
            })
            .collect();
        clamp_unit(&mut moved);
        Position(moved)
    }

    /// One full iteration.
    pub fn step(&mut self) {
        self.iteration += 1;
        let zeta = self.cfg.zeta;
        for k in 0..self.empires.len() {
            let imperialist = self.empires[k].imperialist.position.clone();
            let colonies = std::mem::take(&mut self.empires[k].colonies);
            let mut moved = Vec::with_capacity(colonies.len());
            for colony in colonies {
                let mut p = self.assimilate(&colony.position, &imperialist);
                if self.rng.gen::<f64>() < self.cfg.revolution_rate {
                    p = self.random_position();
                }
                moved.push(self.evaluate(p));
            }
            let empire = &mut self.empires[k];
            empire.colonies = moved;
            empire.promote_best_colony();
            empire.refresh_total(zeta);
        }
        self.compete();
        self.dissolve_empty_empires();
        self.tracker.record(self.iteration);
    }

    fn compete(&mut self) {
        if self.empires.len() < 2 {
            return;
        }
        let weakest = index_of_max(self.empires.iter().map(|e| e.total_cost));
        let Some(colony_idx) = self.empires[weakest]
            .colonies
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cost.total_cmp(&b.1.cost).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
        else {
            return;
        };
        let totals: Vec<f64> = self.empires.iter().map(|e| e.total_cost).collect();
        let probs = ica_possession_probability(&totals);
        let scores: Vec<f64> = probs.iter().map(|p| p - self.rng.gen::<f64>()).collect();
        let winner = index_of_max(scores.into_iter());

        let colony = self.empires[weakest].colonies.remove(colony_idx);
        self.empires[weakest].refresh_total(self.cfg.zeta);
        let target = &mut self.empires[winner];
        target.colonies.push(colony);
        target.promote_best_colony();
        target.refresh_total(self.cfg.zeta);
    }

    fn dissolve_empty_empires(&mut self) {
        while self.empires.len() > 1 {
            let Some(empty) = self.empires.iter().position(|e| e.colonies.is_empty()) else {
                break;
            };
            let fallen = self.empires.remove(empty);
            let strongest = index_of_min(self.empires.iter().map(|e| e.total_cost));
            let target = &mut self.empires[strongest];
            target.colonies.push(fallen.imperialist);
            target.promote_best_colony();
            target.refresh_total(self.cfg.zeta);
        }
    }

    pub fn empires(&self) -> &[Empire] {
        &self.empires
    }

    pub fn iteration(&self) -> usize {
        self.iteration
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

fn index_of_max(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        })
        .0
}

fn index_of_min(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, v)| if v < best.1 { (i, v) } else { best },
        )
        .0
}

/// Minimize `cost_fn` over `[0, 1]^dim` for `cfg.max_it` iterations.
pub fn ica_optimize<F>(cost_fn: F, dim: usize, cfg: &IcaConfig) -> Result<OptimizeResult>
where
    F: FnMut(&Position) -> f64,
{
    let mut run = ImperialistCompetition::new(cost_fn, dim, cfg)?;
    for _ in 0..cfg.max_it {
        run.step();
    }
    Ok(run.finish())
}
