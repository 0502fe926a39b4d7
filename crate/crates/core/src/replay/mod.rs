//! Move-by-move replay of a recorded game into a strength series, with
//! transition detection and a final verdict.

mod transitions;
mod verdict;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::board::{BoardError, BoardState, Color, Move, Point};
use crate::energy::{hamiltonian, ParameterSet};
use crate::sgf::SgfGame;
use crate::tactics::{annotate, classify_move, StoneIntents, TacticConfig, TacticError, TacticKind};

pub use transitions::{detect_gap_transitions, detect_transitions, TransitionConfig, TransitionEvent};
pub use verdict::{batch_evaluate, predict_winner, Agreement, BatchEntry, BatchSummary, GameVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("setup stones rejected: {0}")]
    Setup(BoardError),
    #[error("move {move_number}: {reason}")]
    IllegalRecordedMove { move_number: u32, reason: BoardError },
    #[error("the series has no records")]
    EmptySeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisConfig {
    pub params: ParameterSet,
    pub tactics: TacticConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveRecord {
    pub move_number: u32,
    pub color: Color,
    pub point: Option<Point>,
    pub s_black: f64,
    pub s_white: f64,
    pub h: f64,
    pub intent: TacticKind,
}

impl MoveRecord {
    pub fn gap(&self) -> f64 {
        self.s_black - self.s_white
    }

    /// SGF letters, or `pass`.
    pub fn coord(&self) -> String {
        self.point.map_or_else(|| "pass".to_string(), Point::to_sgf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameMeta {
    pub board_size: u8,
    pub komi: Option<f64>,
    pub result: Option<String>,
    pub black: Option<String>,
    pub white: Option<String>,
}

impl GameMeta {
    pub fn of(game: &SgfGame) -> Self {
        Self {
            board_size: game.board_size,
            komi: game.komi,
            result: game.result.clone(),
            black: game.players.black.clone(),
            white: game.players.white.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthSeries {
    pub records: Vec<MoveRecord>,
    pub params: ParameterSet,
    pub meta: GameMeta,
}

impl StrengthSeries {
    pub fn gaps(&self) -> Vec<f64> {
        self.records.iter().map(MoveRecord::gap).collect()
    }
}

pub fn replay(game: &SgfGame, params: &ParameterSet) -> Result<StrengthSeries, ReplayError> {
    replay_with(game, &AnalysisConfig { params: *params, tactics: TacticConfig::default() })
}

/// Positions are produced in order; their evaluation runs in parallel and is
/// collected back in move order.
pub fn replay_with(game: &SgfGame, config: &AnalysisConfig) -> Result<StrengthSeries, ReplayError> {
    let mut state = BoardState::replay_setup(game.board_size, &game.setup).map_err(ReplayError::Setup)?;
    let mut intents = StoneIntents::new();
    let mut expected = game.moves.first().map(|m| m.color);
    let mut positions: Vec<(Move, BoardState, StoneIntents, TacticKind)> = Vec::with_capacity(game.moves.len());
    for (i, &mv) in game.moves.iter().enumerate() {
        let move_number = i as u32 + 1;
        if expected.is_some_and(|c| c != mv.color) {
            log::warn!("move {move_number}: {} plays out of turn", mv.color);
        }
        expected = Some(mv.color.opponent());
        let illegal = |reason| ReplayError::IllegalRecordedMove { move_number, reason };
        let intent = match classify_move(&state, mv, &config.tactics) {
            Ok(kind) => kind,
            Err(TacticError::IllegalMove(e)) => return Err(illegal(e)),
            Err(TacticError::UnknownChain(_)) => TacticKind::None,
        };
        let next = state.apply_move(mv).map_err(illegal)?;
        if let Some(p) = mv.point() {
            intents.record(&next, p, intent);
        }
        positions.push((mv, next.clone(), intents.clone(), intent));
        state = next;
    }

    let records = positions
        .par_iter()
        .enumerate()
        .map(|(i, (mv, board, intents, intent))| {
            let annotations = annotate(board, intents, *intent, &config.tactics);
            let report = hamiltonian(board, &config.params, &annotations);
            MoveRecord {
                move_number: i as u32 + 1,
                color: mv.color,
                point: mv.point(),
                s_black: report.s_black,
                s_white: report.s_white,
                h: report.h,
                intent: *intent,
            }
        })
        .collect();
    Ok(StrengthSeries { records, params: config.params, meta: GameMeta::of(game) })
}
