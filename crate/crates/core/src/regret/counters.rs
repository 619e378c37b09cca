use crate::analysis::{support_containment, Reach};
use crate::error::{invalid_input, Result};
use crate::game::{ExtensiveFormGame, InfosetId, StrategyProfile};

/// Per-run diagnostics: zero-positive-regret frequencies and play counts
/// for explicitly registered actions, strategies and information sets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiagnosticCounters {
    pub iterations: u64,
    /// Iterations in which some evaluated information set had no positive regret.
    pub x_count: u64,
    /// Evaluations of an information set with no positive regret.
    pub xi_count: u64,
    pub tracked_actions: Vec<(InfosetId, usize)>,
    /// Iterations in which the tracked action had positive probability.
    pub y_action: Vec<u64>,
    tracked_strategies: Vec<(usize, StrategyProfile)>,
    /// Iterations whose current support contained the tracked strategy's support.
    pub y_strategy: Vec<u64>,
    pub tracked_reach: Vec<InfosetId>,
    /// Σ_{h∈I} π_{-i}(h) at the most recent iteration.
    pub reach_mass_last: Vec<f64>,
    /// Running sum of the per-iteration reach mass.
    pub reach_mass_sum: Vec<f64>,
}

impl DiagnosticCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn track_action(&mut self, game: &ExtensiveFormGame, infoset: InfosetId, action: usize) -> Result<usize> {
        if infoset >= game.infosets().len() || action >= game.infoset(infoset).num_actions() {
            return Err(invalid_input(format!("no action {action} at infoset {infoset}")));
        }
        self.tracked_actions.push((infoset, action));
        self.y_action.push(0);
        Ok(self.tracked_actions.len() - 1)
    }

    pub fn track_strategy(&mut self, game: &ExtensiveFormGame, player: usize, strategy: StrategyProfile) -> Result<usize> {
        strategy.validate(game)?;
        if player >= game.num_players() {
            return Err(invalid_input(format!("player {player} out of range")));
        }
        self.tracked_strategies.push((player, strategy));
        self.y_strategy.push(0);
        Ok(self.tracked_strategies.len() - 1)
    }

    pub fn track_reach(&mut self, game: &ExtensiveFormGame, infoset: InfosetId) -> Result<usize> {
        if infoset >= game.infosets().len() {
            return Err(invalid_input(format!("unknown infoset {infoset}")));
        }
        self.tracked_reach.push(infoset);
        self.reach_mass_last.push(0.0);
        self.reach_mass_sum.push(0.0);
        Ok(self.tracked_reach.len() - 1)
    }

    pub(crate) fn needs_profile(&self) -> bool {
        !(self.tracked_actions.is_empty() && self.tracked_strategies.is_empty() && self.tracked_reach.is_empty())
    }

    /// Update play counters from the profile σ^t played this iteration.
    pub(crate) fn record_profile(&mut self, game: &ExtensiveFormGame, current: &StrategyProfile) {
        for (&(i, a), y) in self.tracked_actions.iter().zip(self.y_action.iter_mut()) {
            if current.prob(i, a) > 0.0 {
                *y += 1;
            }
        }
        for ((player, cand), y) in self.tracked_strategies.iter().zip(self.y_strategy.iter_mut()) {
            if support_containment(game, *player, cand, current) {
                *y += 1;
            }
        }
        if !self.tracked_reach.is_empty() {
            let reach = Reach::compute(game, current);
            for (k, &i) in self.tracked_reach.iter().enumerate() {
                let set = game.infoset(i);
                let mass: f64 = set.nodes.iter().map(|&h| reach.others(h, set.player)).sum();
                self.reach_mass_last[k] = mass;
                self.reach_mass_sum[k] += mass;
            }
        }
    }

    pub(crate) fn record_iteration(&mut self, zero_visits: u64) {
        self.iterations += 1;
        self.xi_count += zero_visits;
        if zero_visits > 0 {
            self.x_count += 1;
        }
    }

    /// CSV header matching [`Self::csv_row`].
    pub fn csv_header(&self, game: &ExtensiveFormGame) -> Vec<String> {
        let mut cols = vec!["iteration".to_string(), "x_count".into(), "xi_count".into()];
        for &(i, a) in &self.tracked_actions {
            let set = game.infoset(i);
            cols.push(format!("y[{}:{}]", set.key, set.actions[a]));
        }
        for k in 0..self.tracked_strategies.len() {
            cols.push(format!("y_strategy[{k}]"));
        }
        for &i in &self.tracked_reach {
            cols.push(format!("reach_mass[{}]", game.infoset(i).key));
        }
        cols
    }

    pub fn csv_row(&self, iteration: u64) -> Vec<String> {
        let mut row = vec![iteration.to_string(), self.x_count.to_string(), self.xi_count.to_string()];
        row.extend(self.y_action.iter().map(u64::to_string));
        row.extend(self.y_strategy.iter().map(u64::to_string));
        row.extend(self.reach_mass_last.iter().map(f64::to_string));
        row
    }
}
