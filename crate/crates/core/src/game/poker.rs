use super::{ExtensiveFormGame, GameTree, Outcome};
use crate::error::{Error, Result};

const RANK_CHARS: &[u8] = b"23456789TJQKA";
const SUIT_CHARS: &[u8] = b"shdc";

fn showdown(u1: f64) -> GameTree {
    GameTree::Terminal { utilities: vec![u1, -u1], outcome: Outcome::Showdown }
}

fn fold(u1: f64) -> GameTree {
    GameTree::Terminal { utilities: vec![u1, -u1], outcome: Outcome::Fold }
}

/// Two-player Kuhn poker with a J/Q/K deck, 1-chip antes and a single 1-chip bet.
///
/// Player 1 acts first with check (`k`) or bet (`b`); a player facing a bet
/// folds (`f`) or calls (`c`). Infoset keys are `player:card:sequence`.
pub fn build_kuhn_game() -> ExtensiveFormGame {
    const CARDS: [&str; 3] = ["J", "Q", "K"];
    let mut deals = Vec::new();
    for c1 in 0..3 {
        for c2 in 0..3 {
            if c1 == c2 {
                continue;
            }
            let win = if c1 > c2 { 1.0 } else { -1.0 };
            let (n1, n2) = (CARDS[c1], CARDS[c2]);
            let after_check = GameTree::Decision {
                player: 1,
                infoset: format!("2:{n2}:k"),
                actions: vec![
                    ("k".into(), showdown(win)),
                    (
                        "b".into(),
                        GameTree::Decision {
                            player: 0,
                            infoset: format!("1:{n1}:kb"),
                            actions: vec![("f".into(), fold(-1.0)), ("c".into(), showdown(2.0 * win))],
                        },
                    ),
                ],
            };
            let after_bet = GameTree::Decision {
                player: 1,
                infoset: format!("2:{n2}:b"),
                actions: vec![("f".into(), fold(1.0)), ("c".into(), showdown(2.0 * win))],
            };
            let root = GameTree::Decision {
                player: 0,
                infoset: format!("1:{n1}:"),
                actions: vec![("k".into(), after_check), ("b".into(), after_bet)],
            };
            deals.push((format!("{n1}{n2}"), 1.0 / 6.0, root));
        }
    }
    ExtensiveFormGame::from_tree("kuhn", 2, GameTree::Chance { outcomes: deals })
        .expect("kuhn tree is well formed")
}

/// Three-player Kuhn poker on a J/Q/K/A deck: one ante each, one 1-chip bet,
/// a single betting round.
pub fn build_kuhn3_game() -> ExtensiveFormGame {
    let rules = PokerRules {
        num_players: 3,
        ranks: 4,
        suits: 1,
        rounds: 1,
        bets_per_round: 1,
        ante: 1.0,
        bet_sizes: vec![1.0],
    };
    rules.build("kuhn3").expect("kuhn3 rules are valid")
}

/// Two-player limit hold'em on a reduced deck.
///
/// Each player receives one private card; with `rounds = 2` a public card is
/// dealt before the second betting round. Bets are 1 chip in the first round
/// and 2 in the second, with at most `bets_per_round` bets or raises per round.
/// A private card pairing the public card beats any unpaired hand, otherwise
/// the higher private rank wins; ties split the pot.
pub fn build_mini_holdem(ranks: usize, suits: usize, rounds: usize, bets_per_round: usize) -> Result<ExtensiveFormGame> {
    let rules = PokerRules {
        num_players: 2,
        ranks,
        suits,
        rounds,
        bets_per_round,
        ante: 1.0,
        bet_sizes: vec![1.0, 2.0],
    };
    rules.build(&format!("miniholdem-{ranks}x{suits}-r{rounds}-b{bets_per_round}"))
}

/// Parameters of a small limit poker game.
#[derive(Clone, Debug, PartialEq)]
pub struct PokerRules {
    pub num_players: usize,
    pub ranks: usize,
    pub suits: usize,
    pub rounds: usize,
    pub bets_per_round: usize,
    pub ante: f64,
    /// Bet size per round; must cover `rounds` entries.
    pub bet_sizes: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Card {
    rank: usize,
    suit: usize,
}

#[derive(Clone, Debug)]
struct Betting {
    round: usize,
    contrib: Vec<f64>,
    active: Vec<bool>,
    pending: Vec<usize>,
    bets: usize,
    history: String,
}

impl PokerRules {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if self.num_players < 2 {
            return bad("poker needs at least two players".into());
        }
        if self.ranks == 0 || self.ranks > RANK_CHARS.len() {
            return bad(format!("ranks must be in 1..={}", RANK_CHARS.len()));
        }
        if self.suits == 0 || self.suits > SUIT_CHARS.len() {
            return bad(format!("suits must be in 1..={}", SUIT_CHARS.len()));
        }
        if !(1..=2).contains(&self.rounds) {
            return bad("rounds must be 1 or 2".into());
        }
        if self.bets_per_round == 0 {
            return bad("bets_per_round must be at least 1".into());
        }
        if self.bet_sizes.len() < self.rounds {
            return bad("a bet size is needed for every round".into());
        }
        let needed = self.num_players + self.rounds - 1;
        if self.ranks * self.suits < needed {
            return bad(format!(
                "deck of {} cards cannot deal {needed} cards",
                self.ranks * self.suits
            ));
        }
        Ok(())
    }

    fn label(&self, card: Card) -> String {
        let rank = RANK_CHARS[RANK_CHARS.len() - self.ranks + card.rank] as char;
        if self.suits == 1 {
            rank.to_string()
        } else {
            format!("{rank}{}", SUIT_CHARS[card.suit] as char)
        }
    }

    pub fn build(&self, name: &str) -> Result<ExtensiveFormGame> {
        self.validate()?;
        let deck: Vec<Card> = (0..self.ranks)
            .flat_map(|rank| (0..self.suits).map(move |suit| Card { rank, suit }))
            .collect();
        let mut deals = Vec::new();
        let mut current = Vec::new();
        ordered_deals(&deck, self.num_players, &mut current, &mut deals);
        let p = 1.0 / deals.len() as f64;
        let outcomes = deals
            .into_iter()
            .map(|hands| {
                let label = hands.iter().map(|&c| self.label(c)).collect::<Vec<_>>().join(",");
                let start = Betting {
                    round: 0,
                    contrib: vec![self.ante; self.num_players],
                    active: vec![true; self.num_players],
                    pending: (0..self.num_players).collect(),
                    bets: 0,
                    history: String::new(),
                };
                (label, p, self.betting(&deck, &hands, None, start))
            })
            .collect();
        ExtensiveFormGame::from_tree(name, self.num_players, GameTree::Chance { outcomes })
    }

    fn betting(&self, deck: &[Card], hands: &[Card], public: Option<Card>, state: Betting) -> GameTree {
        let player = state.pending[0];
        let max = state.contrib.iter().cloned().fold(f64::MIN, f64::max);
        let facing = state.contrib[player] < max;
        let can_raise = state.bets < self.bets_per_round;
        let mut actions = Vec::new();
        if facing {
            actions.push('f');
            actions.push('c');
            if can_raise {
                actions.push('r');
            }
        } else {
            actions.push('k');
            if can_raise {
                actions.push('b');
            }
        }
        let key = format!("{}:{}:{}", player + 1, self.label(hands[player]), state.history);
        let children = actions
            .into_iter()
            .map(|a| {
                let mut next = state.clone();
                next.history.push(a);
                next.pending.remove(0);
                match a {
                    'f' => next.active[player] = false,
                    'c' => next.contrib[player] = max,
                    'b' | 'r' => {
                        next.contrib[player] = max + self.bet_sizes[state.round];
                        next.bets += 1;
                        let n = self.num_players;
                        next.pending = (1..n)
                            .map(|k| (player + k) % n)
                            .filter(|&q| next.active[q])
                            .collect();
                    }
                    _ => {}
                }
                (a.to_string(), self.advance(deck, hands, public, next))
            })
            .collect();
        GameTree::Decision { player, infoset: key, actions: children }
    }

    fn advance(&self, deck: &[Card], hands: &[Card], public: Option<Card>, state: Betting) -> GameTree {
        let alive: Vec<usize> = (0..self.num_players).filter(|&q| state.active[q]).collect();
        if alive.len() == 1 {
            return self.payout(&state, &alive, Outcome::Fold);
        }
        if !state.pending.is_empty() {
            return self.betting(deck, hands, public, state);
        }
        if state.round + 1 < self.rounds {
            let remaining: Vec<Card> = deck.iter().copied().filter(|c| !hands.contains(c)).collect();
            let p = 1.0 / remaining.len() as f64;
            let outcomes = remaining
                .into_iter()
                .map(|card| {
                    let mut next = state.clone();
                    next.round += 1;
                    next.bets = 0;
                    next.pending = alive.clone();
                    next.history.push('/');
                    next.history.push_str(&self.label(card));
                    next.history.push('/');
                    (self.label(card), p, self.betting(deck, hands, Some(card), next))
                })
                .collect();
            return GameTree::Chance { outcomes };
        }
        let strength = |q: usize| {
            let paired = public.is_some_and(|c| c.rank == hands[q].rank);
            (paired as usize, hands[q].rank)
        };
        let best = alive.iter().map(|&q| strength(q)).max().unwrap_or((0, 0));
        let winners: Vec<usize> = alive.iter().copied().filter(|&q| strength(q) == best).collect();
        self.payout(&state, &winners, Outcome::Showdown)
    }

    fn payout(&self, state: &Betting, winners: &[usize], outcome: Outcome) -> GameTree {
        let pot: f64 = state.contrib.iter().sum();
        let share = pot / winners.len() as f64;
        let utilities = (0..self.num_players)
            .map(|q| if winners.contains(&q) { share - state.contrib[q] } else { -state.contrib[q] })
            .collect();
        GameTree::Terminal { utilities, outcome }
    }
}

fn ordered_deals(deck: &[Card], n: usize, current: &mut Vec<Card>, out: &mut Vec<Vec<Card>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for &card in deck {
        if !current.contains(&card) {
            current.push(card);
            ordered_deals(deck, n, current, out);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{InfosetId, NodeId, NodeKind};
    use std::collections::HashMap;

    fn terminal_by_path<'a>(game: &'a ExtensiveFormGame, deal: &str, seq: &str) -> &'a [f64] {
        let root = game.node(0);
        let d = game.action_labels(0).iter().position(|l| l == deal).unwrap();
        let mut node = root.children[d];
        for ch in seq.chars() {
            let a = game.action_labels(node).iter().position(|l| *l == ch.to_string()).unwrap();
            node = game.node(node).children[a];
        }
        game.node(node).utilities().unwrap()
    }

    #[test]
    fn kuhn_shape() {
        let game = build_kuhn_game();
        assert_eq!(game.infosets().len(), 12);
        assert_eq!(game.infosets_of(0).len(), 6);
        assert_eq!(game.infosets_of(1).len(), 6);
        assert_eq!(game.terminals().len(), 30);
        assert!(game.is_zero_sum(0.0));
    }

    #[test]
    fn kuhn_payoffs() {
        let game = build_kuhn_game();
        assert_eq!(terminal_by_path(&game, "KQ", "bc"), &[2.0, -2.0]);
        assert_eq!(terminal_by_path(&game, "JQ", "kbf")[0], -1.0);
        assert_eq!(terminal_by_path(&game, "QJ", "kk"), &[1.0, -1.0]);
    }

    #[test]
    fn kuhn3_conserves_chips() {
        let game = build_kuhn3_game();
        assert_eq!(game.num_players(), 3);
        for &z in game.terminals() {
            let u = game.node(z).utilities().unwrap();
            assert!(u.iter().sum::<f64>().abs() < 1e-12);
        }
        // all check: ace holder takes the 3-chip pot
        let u = terminal_by_path(&game, "A,J,Q", "kkk");
        assert_eq!(u, &[2.0, -1.0, -1.0]);
    }

    #[test]
    fn mini_holdem_parameter_checks() {
        assert!(build_mini_holdem(2, 1, 1, 1).is_ok());
        assert!(matches!(build_mini_holdem(1, 1, 1, 1), Err(Error::InvalidParameters(_))));
        assert!(matches!(build_mini_holdem(2, 1, 2, 1), Err(Error::InvalidParameters(_))));
        assert!(build_mini_holdem(3, 1, 3, 1).is_err());
    }

    #[test]
    fn leduc_sized_game_is_large() {
        let game = build_mini_holdem(6, 2, 2, 1).unwrap();
        assert!(game.infosets_of(0).len() > 100);
        assert!(game.infosets_of(1).len() > 100);
        assert!(game.is_zero_sum(1e-12));
    }

    #[test]
    fn pair_beats_high_card() {
        let game = build_mini_holdem(3, 2, 2, 1).unwrap();
        // P1 holds Qs, P2 holds As, board Qh: the pair wins despite the ace
        let root = game.node(0);
        let d = game.action_labels(0).iter().position(|l| l == "Qs,As").unwrap();
        let mut node = root.children[d];
        for step in ["k", "k", "Qh", "k", "k"] {
            let a = game.action_labels(node).iter().position(|l| l == step).unwrap();
            node = game.node(node).children[a];
        }
        assert_eq!(game.node(node).utilities().unwrap(), &[1.0, -1.0]);
    }

    /// Structural isomorphism: same shape, probabilities, players and payoffs,
    /// plus a consistent bijection between information sets.
    fn isomorphic(a: &ExtensiveFormGame, b: &ExtensiveFormGame) -> bool {
        fn walk(
            a: &ExtensiveFormGame,
            b: &ExtensiveFormGame,
            x: NodeId,
            y: NodeId,
            map: &mut HashMap<InfosetId, InfosetId>,
            back: &mut HashMap<InfosetId, InfosetId>,
        ) -> bool {
            let (nx, ny) = (a.node(x), b.node(y));
            if nx.children.len() != ny.children.len() {
                return false;
            }
            match (&nx.kind, &ny.kind) {
                (NodeKind::Terminal { utilities: u, .. }, NodeKind::Terminal { utilities: v, .. }) => return u == v,
                (NodeKind::Chance { probs: p }, NodeKind::Chance { probs: q }) => {
                    if p != q {
                        return false;
                    }
                }
                (NodeKind::Decision { player: p, infoset: i }, NodeKind::Decision { player: q, infoset: j }) => {
                    if p != q || *map.entry(*i).or_insert(*j) != *j || *back.entry(*j).or_insert(*i) != *i {
                        return false;
                    }
                }
                _ => return false,
            }
            nx.children.iter().zip(&ny.children).all(|(&c, &d)| walk(a, b, c, d, map, back))
        }
        walk(a, b, 0, 0, &mut HashMap::new(), &mut HashMap::new())
    }

    #[test]
    fn three_card_holdem_is_kuhn() {
        let kuhn = build_kuhn_game();
        let mini = build_mini_holdem(3, 1, 1, 1).unwrap();
        assert!(isomorphic(&kuhn, &mini));
        assert!(!isomorphic(&kuhn, &build_mini_holdem(3, 1, 1, 2).unwrap()));
    }
}
