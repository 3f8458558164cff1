//! Population-based minimizers over the unit hypercube `[0, 1]^d`.
//!
//! Both optimizers keep continuous positions and hand them to the cost
//! function unchanged; feature-selection objectives read them through
//! [`binarize_position`]. Every update is clamped back into the cube, each
//! call owns its seeded RNG, and cost evaluations happen sequentially in a
//! fixed order so a seed fully determines the run.

mod bat;
mod ica;

use serde::{Deserialize, Serialize};

use crate::data::FeatureMask;

pub use bat::{ba_move, ba_optimize, BaConfig, BatSwarm};
pub use ica::{
    allocate_colonies, ica_imperialist_power, ica_optimize, ica_possession_probability,
    ica_total_cost, Country, Empire, IcaConfig, ImperialistCompetition,
};

/// Point in `[0, 1]^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<f64>);

impl Position {
    /// Coordinates are clamped into `[0, 1]`.
    pub fn new(mut coords: Vec<f64>) -> Self {
        clamp_unit(&mut coords);
        Position(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn clamp_unit(coords: &mut [f64]) {
    for c in coords {
        *c = if c.is_nan() { 0.0 } else { c.clamp(0.0, 1.0) };
    }
}

/// Bit `j` is set when coordinate `j` is at least 0.5.
pub fn binarize_position(p: &Position) -> FeatureMask {
    FeatureMask::new(p.coords().iter().map(|&c| c >= 0.5).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub best_position: Position,
    pub best_mask: FeatureMask,
    pub best_cost: f64,
    /// `(iteration, best cost so far)`, iteration 0 being initialization.
    pub history: Vec<(usize, f64)>,
    pub evaluations: usize,
}

/// Best-so-far bookkeeping. On exactly equal cost the candidate whose mask
/// selects fewer features wins.
#[derive(Clone, Debug)]
pub(crate) struct BestTracker {
    position: Option<Position>,
    cost: f64,
    selected: usize,
    history: Vec<(usize, f64)>,
}

impl BestTracker {
    pub(crate) fn new() -> Self {
        BestTracker {
            position: None,
            cost: f64::INFINITY,
            selected: usize::MAX,
            history: Vec::new(),
        }
    }

    pub(crate) fn offer(&mut self, p: &Position, cost: f64) {
        let selected = binarize_position(p).count_selected();
        let better = cost < self.cost || (cost == self.cost && selected < self.selected);
        if better || self.position.is_none() {
            self.position = Some(p.clone());
            self.cost = cost;
            self.selected = selected;
        }
    }

    pub(crate) fn position(&self) -> &Position {
        self.position
            .as_ref()
            .expect("tracker has seen a candidate")
    }

    pub(crate) fn cost(&self) -> f64 {
        self.cost
    }

    pub(crate) fn record(&mut self, iteration: usize) {
        self.history.push((iteration, self.cost));
    }

    pub(crate) fn finish(self, evaluations: usize) -> OptimizeResult {
        let best_position = self.position.expect("tracker has seen a candidate");
        OptimizeResult {
            best_mask: binarize_position(&best_position),
            best_position,
            best_cost: self.cost,
            history: self.history,
            evaluations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binarize_threshold() {
        let all = |v: f64| Position::new(vec![v; 4]);
        assert_eq!(binarize_position(&all(0.0)), FeatureMask::none(4));
        assert_eq!(binarize_position(&all(1.0)), FeatureMask::all(4));
        let p = Position::new(vec![0.49, 0.5, 0.51]);
        assert_eq!(binarize_position(&p).bits(), &[false, true, true]);
    }

    #[test]
    fn positions_are_clamped() {
        let p = Position::new(vec![-0.3, 0.4, 1.7, f64::NAN]);
        assert_eq!(p.coords(), &[0.0, 0.4, 1.0, 0.0]);
    }

    #[test]
    fn tracker_prefers_fewer_features_on_ties() {
        let mut t = BestTracker::new();
        t.offer(&Position::new(vec![0.9, 0.9]), 0.1);
        t.offer(&Position::new(vec![0.9, 0.1]), 0.1);
        assert_eq!(t.position().coords(), &[0.9, 0.1]);
        t.offer(&Position::new(vec![0.1, 0.1]), 0.2);
        assert_eq!(t.cost(), 0.1);
    }

    proptest! {
        #[test]
        fn binarize_depends_only_on_threshold_pattern(coords in proptest::collection::vec(0.0f64..=1.0, 1..20)) {
            let snapped: Vec<f64> = coords.iter().map(|&c| if c >= 0.5 { 0.5 + (c - 0.5) * 0.1 } else { c * 0.3 }).collect();
            prop_assert_eq!(
                binarize_position(&Position::new(coords)),
                binarize_position(&Position::new(snapped))
            );
        }
    }

    fn sphere(p: &Position) -> f64 {
        p.coords().iter().map(|x| x * x).sum()
    }

    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        let m = v.len();
        if m % 2 == 1 {
            v[m / 2]
        } else {
            0.5 * (v[m / 2 - 1] + v[m / 2])
        }
    }

    #[test]
    fn ica_climbs_to_the_upper_bound_in_one_dimension() {
        let best: Vec<f64> = (0..10)
            .map(|seed| {
                let cfg = IcaConfig {
                    seed,
                    ..IcaConfig::default()
                };
                ica_optimize(|p: &Position| (p.coords()[0] - 1.0).abs(), 1, &cfg)
                    .unwrap()
                    .best_position
                    .coords()[0]
            })
            .collect();
        assert!(median(best) >= 0.9);
    }

    #[test]
    fn same_seed_same_run() {
        let ica = IcaConfig {
            seed: 3,
            ..IcaConfig::default()
        };
        assert_eq!(
            ica_optimize(sphere, 6, &ica).unwrap(),
            ica_optimize(sphere, 6, &ica).unwrap()
        );
        let ba = BaConfig {
            seed: 3,
            ..BaConfig::default()
        };
        assert_eq!(
            ba_optimize(sphere, 6, &ba).unwrap(),
            ba_optimize(sphere, 6, &ba).unwrap()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn runs_respect_budget_and_monotone_history(
            seed in any::<u64>(),
            dim in 1usize..12,
            target in proptest::collection::vec(0.0f64..=1.0, 12),
        ) {
            let mut inside = true;
            let cost = |p: &Position| {
                inside &= p.coords().iter().all(|c| (0.0..=1.0).contains(c));
                p.coords().iter().zip(&target).map(|(x, t)| (x - t).abs()).sum::<f64>()
            };
            let ica = IcaConfig { seed, ..IcaConfig::default() };
            let r = ica_optimize(cost, dim, &ica).unwrap();
            prop_assert!(inside);
            prop_assert!(r.evaluations <= ica.n_pop * (ica.max_it + 1));
            prop_assert_eq!(r.history.len(), ica.max_it + 1);
            prop_assert!(r.history.windows(2).all(|w| w[1].1 <= w[0].1));
            prop_assert_eq!(r.history.last().unwrap().1, r.best_cost);

            let mut inside = true;
            let cost = |p: &Position| {
                inside &= p.coords().iter().all(|c| (0.0..=1.0).contains(c));
                p.coords().iter().zip(&target).map(|(x, t)| (x - t).abs()).sum::<f64>()
            };
            let ba = BaConfig { seed, ..BaConfig::default() };
            let r = ba_optimize(cost, dim, &ba).unwrap();
            prop_assert!(inside);
            prop_assert!(r.evaluations <= ba.n_pop * (ba.max_it + 1) + ba.n_pop * ba.max_it);
            prop_assert_eq!(r.history.len(), ba.max_it + 1);
            prop_assert!(r.history.windows(2).all(|w| w[1].1 <= w[0].1));
            prop_assert_eq!(r.history.last().unwrap().1, r.best_cost);
        }
    }
}
