use crate::board::{BoardState, Color, Move, Point};

use super::{TacticConfig, TacticError, TacticKind};

/// Intent of a placement judged from the position before it.
pub fn classify_move(before: &BoardState, mv: Move, config: &TacticConfig) -> Result<TacticKind, TacticError> {
    let Some(p) = mv.point() else { return Ok(TacticKind::None) };
    before.apply_move(mv)?;
    let color = mv.color;

    let mut merged: Vec<_> =
        before.neighbors(p).filter(|&n| before.get(n) == Some(color)).filter_map(|n| before.chain_id_at(n)).collect();
    merged.sort_unstable();
    merged.dedup();
    if merged.len() >= 2 {
        return Ok(TacticKind::Connection);
    }

    let ally_near = any_within(before, p, color, config.invasion_ally_radius);
    if !ally_near && any_within(before, p, color.opponent(), config.invasion_adversary_radius) {
        return Ok(TacticKind::Invasion);
    }
    if any_within(before, p, color.opponent(), config.reduction_radius) {
        return Ok(TacticKind::Reduction);
    }
    Ok(TacticKind::None)
}

fn any_within(state: &BoardState, p: Point, color: Color, radius: u32) -> bool {
    let r = radius as i32;
    let size = state.size() as i32;
    for dc in -r..=r {
        for dr in -r..=r {
            let (c, row) = (p.col as i32 + dc, p.row as i32 + dr);
            if (0..size).contains(&c) && (0..size).contains(&row) && (dc, dr) != (0, 0) {
                if state.get(Point::new(c as u8, row as u8)) == Some(color) {
                    return true;
                }
            }
        }
    }
    false
}
