use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominanceMode {
    Strict,
    Weak,
}

impl fmt::Display for DominanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceMode::Strict => "strict",
            DominanceMode::Weak => "weak",
        })
    }
}

impl FromStr for DominanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "strict" => Ok(DominanceMode::Strict),
            "weak" => Ok(DominanceMode::Weak),
            other => Err(Error::InvalidParameters(format!("unknown dominance mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportTarget {
    Strategies,
    Actions,
}

/// One removed pure strategy or action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub round: usize,
    pub player: usize,
    /// Pure-strategy label, or `infoset-key:action` for actions.
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infoset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<usize>,
    /// Dominating mixture keyed by pure strategy or continuation label.
    pub certificate: BTreeMap<String, f64>,
    /// Smallest advantage of the certificate over the removed item.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub mode: DominanceMode,
    pub target: ReportTarget,
    pub removals: Vec<Removal>,
    /// Surviving labels per player.
    pub survivors: Vec<Vec<String>>,
}

impl DominanceReport {
    pub fn rounds(&self) -> usize {
        self.removals.iter().map(|r| r.round).max().unwrap_or(0)
    }

    pub fn removed_in_round(&self, round: usize) -> Vec<&Removal> {
        self.removals.iter().filter(|r| r.round == round).collect()
    }

    pub fn removed_labels(&self) -> Vec<&str> {
        self.removals.iter().map(|r| r.label.as_str()).collect()
    }

    /// Plain-text table of removals grouped by round.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} dominance over {}", self.mode, match self.target {
            ReportTarget::Strategies => "strategies",
            ReportTarget::Actions => "actions",
        });
        if self.removals.is_empty() {
            out.push_str("nothing removed\n");
        }
        let width = self.removals.iter().map(|r| r.label.len()).max().unwrap_or(0);
        for round in 1..=self.rounds() {
            let _ = writeln!(out, "round {round}");
            for r in self.removed_in_round(round) {
                let _ = writeln!(out, "  player {}  {:<width$}  margin {:.6}", r.player + 1, r.label, r.margin);
            }
        }
        out
    }
}
