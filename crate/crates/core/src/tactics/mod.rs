//! Tactic detectors: eyes, ladders, nets and the intent of a single placement.

mod eyes;
mod intent;
mod ladder;
mod nets;
pub(crate) mod scratch;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::board::{BoardError, BoardState, ChainId, Point};

pub use eyes::{detect_eyes, eye_owner, eye_points};
pub use intent::classify_move;
pub use ladder::{ladder_status, LadderOutcome};
pub use nets::{detect_nets, is_netted};

/// Ordered from weakest to strongest, so `max` picks the dominant kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize, serde::Deserialize)]
pub enum TacticKind {
    #[default]
    None,
    Connection,
    Reduction,
    Invasion,
    Ladder,
    Net,
    Eye,
}

impl TacticKind {
    pub const ALL: [TacticKind; 7] = [
        TacticKind::None,
        TacticKind::Connection,
        TacticKind::Reduction,
        TacticKind::Invasion,
        TacticKind::Ladder,
        TacticKind::Net,
        TacticKind::Eye,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TacticKind::None => "none",
            TacticKind::Connection => "connection",
            TacticKind::Reduction => "reduction",
            TacticKind::Invasion => "invasion",
            TacticKind::Ladder => "ladder",
            TacticKind::Net => "net",
            TacticKind::Eye => "eye",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("chain {0} does not exist")]
    UnknownChain(ChainId),
    #[error("illegal move: {0}")]
    IllegalMove(#[from] BoardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TacticConfig {
    pub ladder_depth: u32,
    pub net_depth: u32,
    /// Chebyshev radius inside which an ally stone rules out an invasion.
    pub invasion_ally_radius: u32,
    /// Chebyshev radius inside which an adversary stone makes a lone placement an invasion.
    pub invasion_adversary_radius: u32,
    pub reduction_radius: u32,
}

impl Default for TacticConfig {
    fn default() -> Self {
        Self {
            ladder_depth: 64,
            net_depth: 8,
            invasion_ally_radius: 2,
            invasion_adversary_radius: 4,
            reduction_radius: 2,
        }
    }
}

/// Intent recorded for every stone still on the board, keyed by point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StoneIntents {
    by_point: BTreeMap<Point, TacticKind>,
}

impl StoneIntents {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: Point) -> TacticKind {
        self.by_point.get(&p).copied().unwrap_or_default()
    }

    /// Records a placement and forgets stones that are no longer on `after`.
    pub fn record(&mut self, after: &BoardState, p: Point, kind: TacticKind) {
        self.by_point.retain(|&q, _| !after.is_empty_at(q));
        if kind != TacticKind::None {
            self.by_point.insert(p, kind);
        }
    }

    pub fn len(&self) -> usize {
        self.by_point.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_point.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternAnnotation {
    /// Eye count for every chain.
    pub eyes: BTreeMap<ChainId, u32>,
    /// Strongest tactic every chain takes part in.
    pub kinds: BTreeMap<ChainId, TacticKind>,
    /// Intent of the move that produced the position.
    pub move_intent: TacticKind,
}

impl PatternAnnotation {
    /// No eyes and no tactics: every chain is plain.
    pub fn plain(state: &BoardState) -> Self {
        Self {
            eyes: state.chains().iter().map(|c| (c.id, 0)).collect(),
            kinds: state.chains().iter().map(|c| (c.id, TacticKind::None)).collect(),
            move_intent: TacticKind::None,
        }
    }

    pub fn eye_count(&self, id: ChainId) -> u32 {
        self.eyes.get(&id).copied().unwrap_or(0)
    }

    pub fn kind(&self, id: ChainId) -> TacticKind {
        self.kinds.get(&id).copied().unwrap_or_default()
    }
}

/// Ladder victims: chains in or one move from atari that read out as captured.
pub fn ladder_victims(state: &BoardState, config: &TacticConfig) -> Vec<ChainId> {
    state
        .chains()
        .iter()
        .filter(|c| c.liberties() <= 2)
        .filter(|c| {
            matches!(ladder_status(state, c.id, config.ladder_depth), Ok(LadderOutcome::CapturedByLadder))
        })
        .map(|c| c.id)
        .collect()
}

/// Full annotation of a position.
///
/// Tactic membership goes to the chains that make the pattern: a ladder
/// belongs to the attacker chains touching the victim, a net to the attacker
/// chains within distance two of the trapped chain. Placement intents reach
/// a chain through its stones.
pub fn annotate(
    state: &BoardState,
    intents: &StoneIntents,
    move_intent: TacticKind,
    config: &TacticConfig,
) -> PatternAnnotation {
    let eyes = detect_eyes(state);
    let mut kinds: BTreeMap<ChainId, TacticKind> = BTreeMap::new();
    for chain in state.chains() {
        let mut kind = chain.points.iter().map(|&p| intents.get(p)).max().unwrap_or_default();
        if eyes.get(&chain.id).copied().unwrap_or(0) > 0 {
            kind = TacticKind::Eye;
        }
        kinds.insert(chain.id, kind);
    }
    let mut promote = |id: ChainId, kind: TacticKind| {
        let slot = kinds.entry(id).or_default();
        *slot = (*slot).max(kind);
    };

    let victims = ladder_victims(state, config);
    for &victim in &victims {
        for maker in adjacent_chains(state, victim) {
            promote(maker, TacticKind::Ladder);
        }
    }
    for (attacker, trapped) in nets::nets_excluding(state, config, &victims) {
        let Some(chain) = state.chain(trapped) else { continue };
        for other in state.chains().iter().filter(|c| c.color == attacker) {
            if chain_distance(&chain.points, &other.points) <= 2 {
                promote(other.id, TacticKind::Net);
            }
        }
    }

    PatternAnnotation { eyes, kinds, move_intent }
}

fn adjacent_chains(state: &BoardState, id: ChainId) -> Vec<ChainId> {
    let Some(chain) = state.chain(id) else { return Vec::new() };
    let mut out: Vec<ChainId> = chain
        .points
        .iter()
        .flat_map(|&p| state.neighbors(p))
        .filter(|&n| state.get(n) == Some(chain.color.opponent()))
        .filter_map(|n| state.chain_id_at(n))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn chain_distance(a: &[Point], b: &[Point]) -> u32 {
    a.iter().flat_map(|&p| b.iter().map(move |&q| p.manhattan(q))).min().unwrap_or(u32::MAX)
}
