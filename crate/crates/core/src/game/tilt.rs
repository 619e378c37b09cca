use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExtensiveFormGame, Outcome};
use crate::error::{invalid_game, Error, Result};

/// Zero-sum tolerance for tilt inputs.
const ZERO_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiltKind {
    /// The winner of every hand gets `w`% extra.
    Orange,
    /// A showdown loser loses `w`% less; a winner by fold wins `w`% less.
    Green,
}

impl fmt::Display for TiltKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiltKind::Orange => "orange",
            TiltKind::Green => "green",
        })
    }
}

impl FromStr for TiltKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orange" => Ok(TiltKind::Orange),
            "green" => Ok(TiltKind::Green),
            other => Err(Error::InvalidParameters(format!("unknown tilt kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltSpec {
    pub kind: TiltKind,
    /// Percentage bonus or penalty.
    pub w: f64,
}

impl TiltSpec {
    pub fn new(kind: TiltKind, w: f64) -> Result<Self> {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidParameters(format!("tilt percentage must be finite and >= 0, got {w}")));
        }
        Ok(TiltSpec { kind, w })
    }

    /// Largest |u1 + u2| the tilt can introduce given the untilted range.
    pub fn delta_bound(&self, range: f64) -> f64 {
        range * self.w / 100.0
    }
}

/// Copy of a two-player zero-sum poker game with tilted terminal payoffs.
pub fn apply_tilt(game: &ExtensiveFormGame, tilt: &TiltSpec) -> Result<ExtensiveFormGame> {
    let tilt = TiltSpec::new(tilt.kind, tilt.w)?;
    if game.num_players() != 2 {
        return Err(invalid_game("tilts apply to two-player games only"));
    }
    if !game.is_zero_sum(ZERO_SUM_TOLERANCE) {
        return Err(invalid_game("tilts apply to zero-sum games only"));
    }
    let factor = tilt.w / 100.0;
    let name = format!("{}-{}{}", game.name(), tilt.kind, tilt.w);
    game.map_utilities(name, |u, outcome| {
        if outcome == Outcome::Unspecified {
            return Err(invalid_game("tilts need every terminal tagged showdown or fold"));
        }
        let mut out = u.to_vec();
        let winner = (0..2).find(|&p| u[p] > 0.0);
        if let Some(win) = winner {
            let lose = 1 - win;
            match (tilt.kind, outcome) {
                (TiltKind::Orange, _) => out[win] *= 1.0 + factor,
                (TiltKind::Green, Outcome::Showdown) => out[lose] *= 1.0 - factor,
                (TiltKind::Green, _) => out[win] *= 1.0 - factor,
            }
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_figure2_game, build_kuhn3_game, build_kuhn_game, NodeKind};

    fn find(game: &ExtensiveFormGame, u: [f64; 2], outcome: Outcome) -> usize {
        *game
            .terminals()
            .iter()
            .find(|&&z| matches!(&game.node(z).kind, NodeKind::Terminal { utilities, outcome: o } if utilities == &u && *o == outcome))
            .unwrap()
    }

    #[test]
    fn orange_bonus_on_showdown() {
        let game = build_kuhn_game();
        let z = find(&game, [2.0, -2.0], Outcome::Showdown);
        let tilted = apply_tilt(&game, &TiltSpec::new(TiltKind::Orange, 35.0).unwrap()).unwrap();
        let u = tilted.node(z).utilities().unwrap();
        assert!((u[0] - 2.7).abs() < 1e-12);
        assert_eq!(u[1], -2.0);
    }

    #[test]
    fn green_penalty_on_fold() {
        let game = build_kuhn_game();
        let z = find(&game, [1.0, -1.0], Outcome::Fold);
        let tilted = apply_tilt(&game, &TiltSpec::new(TiltKind::Green, 14.0).unwrap()).unwrap();
        let u = tilted.node(z).utilities().unwrap();
        assert!((u[0] - 0.86).abs() < 1e-12);
        assert_eq!(u[1], -1.0);
    }

    #[test]
    fn green_softens_showdown_loss() {
        let game = build_kuhn_game();
        let z = find(&game, [-2.0, 2.0], Outcome::Showdown);
        let tilted = apply_tilt(&game, &TiltSpec::new(TiltKind::Green, 50.0).unwrap()).unwrap();
        assert_eq!(tilted.node(z).utilities().unwrap(), &[-1.0, 2.0]);
    }

    #[test]
    fn zero_tilt_is_identity() {
        let game = build_kuhn_game();
        let tilted = apply_tilt(&game, &TiltSpec::new(TiltKind::Orange, 0.0).unwrap()).unwrap();
        assert_eq!(tilted.nodes(), game.nodes());
    }

    #[test]
    fn delta_bound_holds_per_terminal() {
        let game = build_kuhn_game();
        let range = game.utility_range(0);
        for kind in [TiltKind::Orange, TiltKind::Green] {
            for w in [0.0, 7.0, 14.0, 35.0] {
                let spec = TiltSpec::new(kind, w).unwrap();
                let tilted = apply_tilt(&game, &spec).unwrap();
                assert_eq!(tilted.terminals(), game.terminals());
                for &z in tilted.terminals() {
                    let u = tilted.node(z).utilities().unwrap();
                    assert!((u[0] + u[1]).abs() <= spec.delta_bound(range) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_unsuitable_games() {
        let spec = TiltSpec::new(TiltKind::Orange, 10.0).unwrap();
        assert!(matches!(apply_tilt(&build_kuhn3_game(), &spec), Err(Error::InvalidGame(_))));
        assert!(matches!(apply_tilt(&build_figure2_game(), &spec), Err(Error::InvalidGame(_))));
        let tilted = apply_tilt(&build_kuhn_game(), &spec).unwrap();
        assert!(matches!(apply_tilt(&tilted, &spec), Err(Error::InvalidGame(_))));
        assert!(TiltSpec::new(TiltKind::Green, -1.0).is_err());
    }
}
