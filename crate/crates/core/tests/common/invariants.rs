//! Position invariants shared by the property suite and the acceptance run.

use goising::board::{BoardState, ChainId, Point};
use goising::cfg::build_cfg;
use goising::energy::{hamiltonian, interaction_coefficient, stone_value, ParameterSet};
use goising::tactics::{annotate, detect_eyes, ladder_status, PatternAnnotation, StoneIntents, TacticConfig, TacticKind};

use super::close;

fn full(state: &BoardState) -> PatternAnnotation {
    annotate(state, &StoneIntents::new(), TacticKind::None, &TacticConfig::default())
}

pub fn determinism(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    let (a1, a2) = (full(state), full(state));
    if a1 != a2 {
        return Err("annotation differs between runs".into());
    }
    let (r1, r2) = (hamiltonian(state, &p, &a1), hamiltonian(state, &p, &a2));
    let bits = |r: &goising::energy::EnergyReport| (r.h.to_bits(), r.s_black.to_bits(), r.s_white.to_bits());
    if bits(&r1) != bits(&r2) {
        return Err("energy differs between runs".into());
    }
    Ok(())
}

pub fn color_swap(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    let swapped = state.color_swapped();
    let (a, b) = (full(state), full(&swapped));
    if a.eyes != b.eyes || a.kinds != b.kinds {
        return Err("tactic annotation is not color-swap equivariant".into());
    }
    let g = build_cfg(state);
    let gs = build_cfg(&swapped);
    if g.principal_nodes().len() != gs.principal_nodes().len()
        || g.principal_nodes().iter().zip(gs.principal_nodes()).any(|((i, n), (j, m))| i != j || n.size != m.size || n.color != m.color.opponent())
        || g.shared_liberty_pairs() != gs.shared_liberty_pairs()
    {
        return Err("common fate graph is not color-swap equivariant".into());
    }
    let (r, rs) = (hamiltonian(state, &p, &a), hamiltonian(&swapped, &p, &b));
    if r.s_black != rs.s_white || r.s_white != rs.s_black {
        return Err(format!("strengths do not swap: {:?} vs {:?}", (r.s_black, r.s_white), (rs.s_black, rs.s_white)));
    }
    let field = |r: &goising::energy::EnergyReport| -> f64 { r.values.iter().map(|(id, x)| r.fields[id] as f64 * x).sum() };
    let (f, fs) = (field(&r), field(&rs));
    if f != -fs {
        return Err("field part does not negate".into());
    }
    let pair = r.h + p.mu * f;
    let pair_s = rs.h + p.mu * fs;
    if !close(pair, pair_s) {
        return Err(format!("pair part changes under color swap: {pair} vs {pair_s}"));
    }
    Ok(())
}

pub fn dihedral(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    let base_ann = full(state);
    let base = hamiltonian(state, &p, &base_ann);
    let eyes = detect_eyes(state);
    let config = TacticConfig::default();
    for sym in super::symmetries() {
        let t = state.transformed(sym);
        let ann = full(&t);
        for c in state.chains() {
            let image = t.chain_id_at(sym.apply(c.points[0], state.size())).ok_or("chain vanished")?;
            if ann.kind(image) != base_ann.kind(c.id) || ann.eye_count(image) != eyes[&c.id] {
                return Err(format!("{sym:?}: annotation of chain {} changes", c.id));
            }
            if c.liberties() <= 2 {
                let l0 = ladder_status(state, c.id, config.ladder_depth).unwrap();
                let l1 = ladder_status(&t, image, config.ladder_depth).unwrap();
                if l0 != l1 {
                    return Err(format!("{sym:?}: ladder of {} reads {l0:?} vs {l1:?}", c.id));
                }
            }
        }
        let r = hamiltonian(&t, &p, &ann);
        if !close(r.h, base.h) || !close(r.s_black, base.s_black) || !close(r.s_white, base.s_white) {
            return Err(format!("{sym:?}: energy changes {} vs {}", r.h, base.h));
        }
    }
    Ok(())
}

pub fn w_symmetry(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    let ann = full(state);
    let chains = state.chains();
    for a in chains {
        for b in chains {
            if a.id >= b.id {
                continue;
            }
            let ab = interaction_coefficient(state, a.id, b.id, &ann, &p).unwrap();
            let ba = interaction_coefficient(state, b.id, a.id, &ann, &p).unwrap();
            if ab != ba {
                return Err(format!("w({}, {}) = {ab} but w({}, {}) = {ba}", a.id, b.id, b.id, a.id));
            }
        }
    }
    Ok(())
}

/// Chains of the pair plus every chain crossing their corridor.
fn involved(state: &BoardState, a: ChainId, b: ChainId, p: &ParameterSet) -> Vec<Point> {
    let corridor = goising::energy::corridor(state, a, b, p).unwrap();
    let mut pts: Vec<Point> = corridor.iter().copied().collect();
    let mut ids = vec![a, b];
    ids.extend(corridor.iter().filter_map(|&q| state.chain_id_at(q)));
    for id in ids {
        pts.extend(state.chain(id).unwrap().points.iter().copied());
    }
    pts
}

/// Edits away from the pair, its corridor and the chains touching it leave w unchanged.
pub fn locality(state: &BoardState, edits: &[(Point, Option<goising::board::Color>)]) -> Result<(), String> {
    let p = ParameterSet::default();
    let chains = state.chains();
    for a in chains {
        for b in chains {
            if a.id >= b.id || a.points[0].manhattan(b.points[0]) > 2 * p.d_max + 4 {
                continue;
            }
            let w = interaction_coefficient(state, a.id, b.id, &PatternAnnotation::plain(state), &p).unwrap();
            let zone = involved(state, a.id, b.id, &p);
            for &(q, color) in edits {
                let near = zone.iter().any(|&z| z.manhattan(q) <= 1);
                if near {
                    continue;
                }
                let edited = match color {
                    Some(c) if state.is_empty_at(q) => state.with_stone(q, c),
                    None if !state.is_empty_at(q) => state.without_stone(q),
                    _ => continue,
                };
                if edited.chain(a.id).is_none() || edited.chain(b.id).is_none() {
                    return Err(format!("edit at {q} disturbed the pair"));
                }
                let w2 = interaction_coefficient(&edited, a.id, b.id, &PatternAnnotation::plain(&edited), &p).unwrap();
                if w2 != w {
                    return Err(format!("edit at {q} changed w({}, {}) from {w} to {w2}", a.id, b.id));
                }
            }
        }
    }
    Ok(())
}

pub fn eye_monotonicity(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    for c in state.chains() {
        let mut last = stone_value(c, 0, &p).x.abs();
        if last != c.size() as f64 {
            return Err("eyeless stone value differs from size".into());
        }
        for k in 1..6 {
            let x = stone_value(c, k, &p).x;
            if x.abs() <= last || x.signum() != c.color.spin() {
                return Err(format!("|x| not increasing at k = {k}"));
            }
            last = x.abs();
        }
    }
    Ok(())
}

/// Removing an adversary stone from a same-color pair's corridor never lowers w.
pub fn adversary_removal(state: &BoardState) -> Result<(), String> {
    let p = ParameterSet::default();
    let chains = state.chains();
    for a in chains {
        for b in chains {
            if a.id >= b.id || a.color != b.color {
                continue;
            }
            let corridor = goising::energy::corridor(state, a.id, b.id, &p).unwrap();
            let w = interaction_coefficient(state, a.id, b.id, &PatternAnnotation::plain(state), &p).unwrap();
            for &q in &corridor {
                if state.get(q) != Some(a.color.opponent()) {
                    continue;
                }
                let edited = state.without_stone(q);
                let w2 = interaction_coefficient(&edited, a.id, b.id, &PatternAnnotation::plain(&edited), &p).unwrap();
                if w2 < w {
                    return Err(format!("removing {q} lowered w({}, {}) from {w} to {w2}", a.id, b.id));
                }
            }
        }
    }
    Ok(())
}

pub fn cfg_counts(state: &BoardState) -> Result<(), String> {
    let g = build_cfg(state);
    let total: usize = g.principal_nodes().values().map(|n| n.size).sum();
    if total != state.occupied_count() {
        return Err("principal labels do not add up to the stone count".into());
    }
    if g.secondary_nodes().any(|p| g.incident(p).is_empty() || !state.is_empty_at(p)) {
        return Err("secondary node without a chain".into());
    }
    Ok(())
}

pub const ALL: [(&str, fn(&BoardState) -> Result<(), String>); 7] = [
    ("determinism", determinism),
    ("color swap", color_swap),
    ("dihedral symmetry", dihedral),
    ("w symmetry", w_symmetry),
    ("eye monotonicity", eye_monotonicity),
    ("adversary removal", adversary_removal),
    ("graph counts", cfg_counts),
];
