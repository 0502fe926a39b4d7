#![allow(dead_code)]
pub mod invariants;


use std::collections::{BTreeMap, BTreeSet, VecDeque};

use goising::board::{BoardState, ChainId, Color, Move, Point, Symmetry};
use goising::energy::ParameterSet;
use goising::sgf::{Players, SgfGame};
use goising::tactics::{PatternAnnotation, TacticKind};
use rand::seq::SliceRandom;
use rand::Rng;

/// Position reached by random legal play; `fill` is the fraction of points tried.
pub fn random_position<R: Rng>(rng: &mut R, size: u8, fill: f64) -> BoardState {
    let mut state = BoardState::new(size).unwrap();
    let tries = (size as f64 * size as f64 * fill) as usize;
    let mut color = if rng.gen_bool(0.5) { Color::Black } else { Color::White };
    for _ in 0..tries {
        let p = Point::new(rng.gen_range(0..size), rng.gen_range(0..size));
        if let Ok(next) = state.apply_move(Move { color, action: goising::board::Action::Play(p) }) {
            state = next;
            color = color.opponent();
        }
    }
    state
}

/// Random placement of at most `stones` stones, captures ignored but every
/// chain keeps at least one liberty.
pub fn random_sparse<R: Rng>(rng: &mut R, size: u8, stones: usize) -> BoardState {
    let mut state = BoardState::new(size).unwrap();
    for _ in 0..stones {
        let p = Point::new(rng.gen_range(0..size), rng.gen_range(0..size));
        if !state.is_empty_at(p) {
            continue;
        }
        let color = if rng.gen_bool(0.5) { Color::Black } else { Color::White };
        let next = state.with_stone(p, color);
        if next.chains().iter().all(|c| c.liberties() > 0) {
            state = next;
        }
    }
    state
}

pub fn random_annotation<R: Rng>(rng: &mut R, state: &BoardState) -> PatternAnnotation {
    let mut a = PatternAnnotation::plain(state);
    for c in state.chains() {
        a.eyes.insert(c.id, rng.gen_range(0..3));
        a.kinds.insert(c.id, *TacticKind::ALL.choose(rng).unwrap());
    }
    a
}

/// Own flood fill on the raw grid: every stone's group and its size.
pub fn groups(state: &BoardState) -> BTreeMap<Point, (Point, usize)> {
    let size = state.size();
    let mut out = BTreeMap::new();
    for start in state.points() {
        let Some(color) = state.get(start) else { continue };
        if out.contains_key(&start) {
            continue;
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let (c, r) = (p.col as i32, p.row as i32);
            for (dc, dr) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nc, nr) = (c + dc, r + dr);
                if nc < 0 || nr < 0 || nc >= size as i32 || nr >= size as i32 {
                    continue;
                }
                let q = Point::new(nc as u8, nr as u8);
                if state.get(q) == Some(color) && seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        let rep = *seen.iter().next().unwrap();
        for &p in &seen {
            out.insert(p, (rep, seen.len()));
        }
    }
    out
}

/// Every monotone lattice path between two points, visited point by point.
fn walk(from: Point, to: Point, acc: &mut BTreeSet<Point>) {
    acc.insert(from);
    if from == to {
        return;
    }
    if from.col != to.col {
        let col = if to.col > from.col { from.col + 1 } else { from.col - 1 };
        walk(Point::new(col, from.row), to, acc);
    }
    if from.row != to.row {
        let row = if to.row > from.row { from.row + 1 } else { from.row - 1 };
        walk(Point::new(from.col, row), to, acc);
    }
}

/// Corridor by explicit enumeration of all shortest paths between the
/// closest point pairs of two stone sets.
pub fn oracle_corridor(a: &[Point], b: &[Point], d_max: u32) -> BTreeSet<Point> {
    let d = a.iter().flat_map(|&p| b.iter().map(move |&q| p.manhattan(q))).min().unwrap();
    let mut acc = BTreeSet::new();
    if d > d_max {
        return acc;
    }
    for &p in a {
        for &q in b {
            if p.manhattan(q) == d {
                walk(p, q, &mut acc);
            }
        }
    }
    acc.retain(|p| !a.contains(p) && !b.contains(p));
    acc
}

/// Term-by-term coefficient: each corridor point is visited, each crossing
/// group is priced once per perspective.
pub fn oracle_coefficient(
    state: &BoardState,
    a: ChainId,
    b: ChainId,
    annotation: &PatternAnnotation,
    params: &ParameterSet,
) -> f64 {
    let groups = groups(state);
    let members = |id: ChainId| -> Vec<Point> {
        let rep = groups[&id.0].0;
        groups.iter().filter(|(_, g)| g.0 == rep).map(|(&p, _)| p).collect()
    };
    let (pa, pb) = (members(a), members(b));
    let corridor = oracle_corridor(&pa, &pb, params.d_max);
    let mut total = 0.0;
    for side in [state.get(a.0).unwrap(), state.get(b.0).unwrap()] {
        let mut priced = BTreeSet::new();
        for &p in &corridor {
            match state.get(p) {
                None => total += params.r_sl,
                Some(color) => {
                    let (rep, n) = groups[&p];
                    if !priced.insert(rep) {
                        continue;
                    }
                    let id = state.chain_id_at(p).unwrap();
                    let k = annotation.eye_count(id);
                    let x = n as f64 + if k >= 1 { params.r_eye.powi(k as i32) } else { 0.0 };
                    let r = params.r_for(annotation.kind(id));
                    total += if color == side { r * x } else { -r * x };
                }
            }
        }
    }
    total / 2.0
}

/// Figure position: an 11-stone white corner chain with 6 liberties, one
/// shared with a white 5-chain below and one with an 18-stone black chain.
pub fn figure_position() -> BoardState {
    let mut stones = Vec::new();
    for col in 0..5 {
        for row in 0..2 {
            stones.push((Color::White, Point::new(col, row)));
        }
    }
    stones.push((Color::White, Point::new(0, 2)));
    stones.push((Color::Black, Point::new(6, 0)));
    for col in 5..19 {
        stones.push((Color::Black, Point::new(col, 1)));
    }
    for col in 6..9 {
        stones.push((Color::Black, Point::new(col, 2)));
    }
    for row in 3..8 {
        stones.push((Color::White, Point::new(3, row)));
    }
    BoardState::replay_setup(19, &stones).unwrap()
}

const TEXT_CHARS: &[char] = &['a', 'Z', ' ', ']', '\\', ':', '(', ')', ';', '\n', 'é', '李'];

fn random_text<R: Rng>(rng: &mut R) -> String {
    let len = rng.gen_range(1..12);
    (0..len).map(|_| *TEXT_CHARS.choose(rng).unwrap()).collect::<String>().trim().to_string()
}

/// Random game inside the subset the serializer writes.
pub fn random_game<R: Rng>(rng: &mut R) -> SgfGame {
    let size = rng.gen_range(5..=19u8);
    let mut setup_points = BTreeSet::new();
    for _ in 0..rng.gen_range(0..6) {
        setup_points.insert(Point::new(rng.gen_range(0..size), rng.gen_range(0..size)));
    }
    let mut setup: Vec<(Color, Point)> = setup_points
        .into_iter()
        .map(|p| (if rng.gen_bool(0.5) { Color::Black } else { Color::White }, p))
        .collect();
    setup.sort_by_key(|&(c, _)| c.index());
    let mut color = Color::Black;
    let moves = (0..rng.gen_range(0..40))
        .map(|_| {
            let mv = if rng.gen_bool(0.05) {
                Move::pass(color)
            } else {
                Move::play(color, rng.gen_range(0..size), rng.gen_range(0..size))
            };
            color = color.opponent();
            mv
        })
        .collect();
    let opt = |rng: &mut R| rng.gen_bool(0.7).then(|| random_text(rng)).filter(|s| !s.is_empty());
    SgfGame {
        board_size: size,
        komi: rng.gen_bool(0.8).then(|| rng.gen_range(-20..20) as f64 / 2.0),
        result: rng.gen_bool(0.7).then(|| ["B+R", "W+0.5", "B+12.5", "Void", "0"].choose(rng).unwrap().to_string()),
        players: Players { black: opt(rng), white: opt(rng) },
        setup,
        moves,
    }
}

pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub fn symmetries() -> [Symmetry; 8] {
    Symmetry::ALL
}
