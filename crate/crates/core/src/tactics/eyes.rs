use std::collections::BTreeMap;

use crate::board::{BoardState, ChainId, Color, Point};

/// Color owning the eye at `p`, if `p` is one.
///
/// Every orthogonal neighbour must be a stone of one color, and none of the
/// bordering chains may be in atari (filling the point would capture them).
/// The diagonals guard against false eyes: in the interior at most one
/// diagonal may hold an adversary stone; on the edge or in the corner every
/// diagonal must hold a friendly stone.
pub fn eye_owner(state: &BoardState, p: Point) -> Option<Color> {
    if !state.is_empty_at(p) {
        return None;
    }
    let mut owner = None;
    for n in state.neighbors(p) {
        let c = state.get(n)?;
        match owner {
            None => owner = Some(c),
            Some(o) if o != c => return None,
            _ => {}
        }
        let chain = state.chain_at(n).ok().flatten()?;
        if chain.liberties() < 2 {
            return None;
        }
    }
    let owner = owner?;
    let diagonals: Vec<Option<Color>> = state.diagonals(p).map(|d| state.get(d)).collect();
    let sound = if diagonals.len() == 4 {
        diagonals.iter().filter(|&&c| c == Some(owner.opponent())).count() <= 1
    } else {
        diagonals.iter().all(|&c| c == Some(owner))
    };
    sound.then_some(owner)
}

/// All eye points of the position, sorted.
pub fn eye_points(state: &BoardState) -> Vec<(Point, Color)> {
    state.points().filter_map(|p| eye_owner(state, p).map(|c| (p, c))).collect()
}

/// Eye count `k` for every chain: the number of eyes the chain borders.
pub fn detect_eyes(state: &BoardState) -> BTreeMap<ChainId, u32> {
    let mut counts: BTreeMap<ChainId, u32> = state.chains().iter().map(|c| (c.id, 0)).collect();
    for (p, _) in eye_points(state) {
        let mut bordering: Vec<ChainId> = state.neighbors(p).filter_map(|n| state.chain_id_at(n)).collect();
        bordering.sort_unstable();
        bordering.dedup();
        for id in bordering {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    counts
}
