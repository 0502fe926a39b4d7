use crate::board::{BoardState, ChainId, Color, Point};

use super::scratch::Scratch;
use super::TacticError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderOutcome {
    CapturedByLadder,
    Escapes,
    Unresolved,
}

impl LadderOutcome {
    /// Attacker preference: a capture beats an open question beats an escape.
    fn rank(self) -> u8 {
        match self {
            LadderOutcome::Escapes => 0,
            LadderOutcome::Unresolved => 1,
            LadderOutcome::CapturedByLadder => 2,
        }
    }

    fn best_for_attacker(self, other: LadderOutcome) -> LadderOutcome {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

/// Upper bound on reading nodes. Exceeding it means the whole read is
/// reported as unresolved, independent of visiting order.
const NODE_CAP: u32 = 1 << 15;

struct Reader {
    defender: Color,
    nodes: u32,
    aborted: bool,
}

/// Reads the forced run of a chain in (or one move from) atari.
///
/// The defender always extends on its sole liberty. The attacker answers on
/// whichever liberty leaves the defender fewest liberties after its next
/// extension; equally good answers are all read and the best one for the
/// attacker counts, which keeps the result independent of board orientation.
pub fn ladder_status(state: &BoardState, target: ChainId, max_depth: u32) -> Result<LadderOutcome, TacticError> {
    let chain = state.chain(target).ok_or(TacticError::UnknownChain(target))?;
    let anchor = chain.points[0];
    let mut reader = Reader { defender: chain.color, nodes: 0, aborted: false };
    let board = Scratch::from_state(state);
    let outcome = match chain.liberties() {
        1 => reader.defender_runs(&board, anchor, max_depth),
        2 => {
            if max_depth == 0 {
                LadderOutcome::Unresolved
            } else {
                let mut best = LadderOutcome::Escapes;
                for &lib in &chain.liberty_points {
                    let Some(next) = board.play(lib, reader.defender.opponent()) else { continue };
                    let libs = next.liberties(anchor).len();
                    let outcome = match libs {
                        0 => LadderOutcome::CapturedByLadder,
                        1 => reader.defender_runs(&next, anchor, max_depth - 1),
                        _ => LadderOutcome::Escapes,
                    };
                    best = best.best_for_attacker(outcome);
                }
                best
            }
        }
        _ => LadderOutcome::Escapes,
    };
    Ok(if reader.aborted { LadderOutcome::Unresolved } else { outcome })
}

impl Reader {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Defender to move with exactly one liberty.
    fn defender_runs(&mut self, board: &Scratch, anchor: Point, depth: u32) -> LadderOutcome {
        if !self.tick() {
            return LadderOutcome::Unresolved;
        }
        let libs = board.liberties(anchor);
        match libs.len() {
            0 => return LadderOutcome::CapturedByLadder,
            1 => {}
            _ => return LadderOutcome::Escapes,
        }
        if depth == 0 {
            return LadderOutcome::Unresolved;
        }
        let Some(extended) = board.play(libs[0], self.defender) else {
            return LadderOutcome::CapturedByLadder;
        };
        let libs = extended.liberties(anchor);
        match libs.len() {
            0 | 1 => return LadderOutcome::CapturedByLadder,
            2 => {}
            _ => return LadderOutcome::Escapes,
        }
        if depth == 1 {
            return LadderOutcome::Unresolved;
        }

        let attacker = self.defender.opponent();
        let mut candidates: Vec<(usize, Scratch)> = Vec::with_capacity(2);
        for &lib in &libs {
            let Some(next) = extended.play(lib, attacker) else { continue };
            let after = next.liberties(anchor);
            let score = match after.len() {
                0 => 0,
                1 => match next.play(after[0], self.defender) {
                    Some(ext) => ext.liberties(anchor).len(),
                    None => 0,
                },
                _ => usize::MAX,
            };
            candidates.push((score, next));
        }
        let Some(best_score) = candidates.iter().map(|(s, _)| *s).min() else {
            return LadderOutcome::Escapes;
        };
        if best_score >= 3 {
            return LadderOutcome::Escapes;
        }
        let mut outcome = LadderOutcome::Escapes;
        for (score, next) in candidates.iter().filter(|(s, _)| *s == best_score) {
            let o = if *score == 0 {
                LadderOutcome::CapturedByLadder
            } else {
                self.defender_runs(next, anchor, depth - 2)
            };
            outcome = outcome.best_for_attacker(o);
        }
        outcome
    }
}
