use std::collections::BTreeSet;

use crate::board::{BoardState, ChainId, Color, Point};

use super::scratch::Scratch;
use super::{ladder_victims, TacticConfig, TacticError};

/// Largest liberty count of a chain that is still examined for a net.
pub const NET_MAX_LIBERTIES: usize = 3;

/// Whether the attacker can capture `target` within `depth` plies whatever the
/// defender does, the defender moving first.
///
/// The defender may extend on any liberty or capture an adjacent attacker
/// chain that is in atari; the attacker fills liberties of the target.
pub fn is_netted(state: &BoardState, target: ChainId, depth: u32) -> Result<bool, TacticError> {
    let chain = state.chain(target).ok_or(TacticError::UnknownChain(target))?;
    let search = Search { defender: chain.color, anchor: chain.points[0] };
    Ok(search.defender_node(&Scratch::from_state(state), depth))
}

/// Netted chains that are not ladder victims, as `(attacker color, chain)`.
pub fn detect_nets(state: &BoardState, config: &TacticConfig) -> BTreeSet<(Color, ChainId)> {
    nets_excluding(state, config, &ladder_victims(state, config))
}

pub(crate) fn nets_excluding(
    state: &BoardState,
    config: &TacticConfig,
    ladder_victims: &[ChainId],
) -> BTreeSet<(Color, ChainId)> {
    state
        .chains()
        .iter()
        .filter(|c| c.liberties() <= NET_MAX_LIBERTIES && !ladder_victims.contains(&c.id))
        .filter(|c| is_netted(state, c.id, config.net_depth).unwrap_or(false))
        .map(|c| (c.color.opponent(), c.id))
        .collect()
}

struct Search {
    defender: Color,
    anchor: Point,
}

impl Search {
    fn defender_node(&self, board: &Scratch, depth: u32) -> bool {
        if board.get(self.anchor) != Some(self.defender) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let moves = self.defender_moves(board);
        if moves.is_empty() {
            return self.attacker_node(board, depth - 1);
        }
        moves.iter().all(|&p| match board.play(p, self.defender) {
            Some(next) => self.attacker_node(&next, depth - 1),
            None => true,
        })
    }

    fn attacker_node(&self, board: &Scratch, depth: u32) -> bool {
        if board.get(self.anchor) != Some(self.defender) {
            return true;
        }
        let libs = board.liberties(self.anchor);
        // Each attacker move removes at most one liberty.
        if depth == 0 || libs.len() as u32 > depth.div_ceil(2) {
            return false;
        }
        libs.iter().any(|&p| match board.play(p, self.defender.opponent()) {
            Some(next) => self.defender_node(&next, depth - 1),
            None => false,
        })
    }

    fn defender_moves(&self, board: &Scratch) -> Vec<Point> {
        let mut moves = board.liberties(self.anchor);
        for rep in board.adjacent_groups(self.anchor, self.defender.opponent()) {
            let libs = board.liberties(rep);
            if libs.len() == 1 {
                moves.push(libs[0]);
            }
        }
        moves.sort_unstable();
        moves.dedup();
        moves
    }
}
