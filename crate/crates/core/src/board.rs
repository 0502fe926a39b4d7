//! Go rules engine: stones, chains, liberties, captures, suicide and simple ko.
//!
//! A [`BoardState`] is an immutable value. [`BoardState::apply_move`] returns a
//! fresh snapshot and never mutates its receiver, so states can be shared
//! freely between threads.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BOARD_SIZE: u8 = 19;
pub const MIN_BOARD_SIZE: u8 = 5;
pub const MAX_BOARD_SIZE: u8 = 19;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("point {0} is outside the board")]
    OutOfBounds(Point),
    #[error("point {0} is already occupied")]
    OccupiedPoint(Point),
    #[error("playing at {0} would be suicide")]
    SuicideMove(Point),
    #[error("playing at {0} retakes a ko immediately")]
    KoViolation(Point),
    #[error("chain {0} does not belong to this position")]
    StaleChain(ChainId),
    #[error("unsupported board size {0} (expected {MIN_BOARD_SIZE}..={MAX_BOARD_SIZE})")]
    UnsupportedSize(u8),
}

/// A board intersection, 0-based, `col` grows to the right and `row` grows downwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub col: u8,
    pub row: u8,
}

impl Point {
    pub const fn new(col: u8, row: u8) -> Self {
        Self { col, row }
    }

    pub fn manhattan(self, other: Point) -> u32 {
        (self.col.abs_diff(other.col) as u32) + (self.row.abs_diff(other.row) as u32)
    }

    pub fn chebyshev(self, other: Point) -> u32 {
        self.col.abs_diff(other.col).max(self.row.abs_diff(other.row)) as u32
    }

    /// SGF letter coordinates, `'a'` is 0.
    pub fn to_sgf(self) -> String {
        let mut s = String::with_capacity(2);
        s.push((b'a' + self.col) as char);
        s.push((b'a' + self.row) as char);
        s
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::Black, Color::White];

    pub fn opponent(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    /// Ising spin sign: black is -1, white is +1.
    pub fn spin(self) -> f64 {
        match self {
            Color::Black => -1.0,
            Color::White => 1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Color::Black => 0,
            Color::White => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Black => 'B',
            Color::White => 'W',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Play(Point),
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub color: Color,
    pub action: Action,
}

impl Move {
    pub fn play(color: Color, col: u8, row: u8) -> Self {
        Self { color, action: Action::Play(Point::new(col, row)) }
    }

    pub fn pass(color: Color) -> Self {
        Self { color, action: Action::Pass }
    }

    pub fn point(&self) -> Option<Point> {
        match self.action {
            Action::Play(p) => Some(p),
            Action::Pass => None,
        }
    }

    pub fn color_swapped(self) -> Self {
        Self { color: self.color.opponent(), action: self.action }
    }

    pub fn transformed(self, sym: Symmetry, size: u8) -> Self {
        let action = match self.action {
            Action::Play(p) => Action::Play(sym.apply(p, size)),
            Action::Pass => Action::Pass,
        };
        Self { color: self.color, action }
    }
}

/// Identifies a chain within one position by its smallest point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainId(pub Point);

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_sgf())
    }
}

/// Maximal orthogonally connected group of same-colored stones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub id: ChainId,
    pub color: Color,
    /// Sorted.
    pub points: Vec<Point>,
    /// Distinct empty orthogonal neighbours, sorted.
    pub liberty_points: Vec<Point>,
}

impl Chain {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn liberties(&self) -> usize {
        self.liberty_points.len()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// The eight rotations and reflections of a square board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipHorizontal,
    FlipVertical,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipHorizontal,
        Symmetry::FlipVertical,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub fn apply(self, p: Point, size: u8) -> Point {
        let m = size - 1;
        let (c, r) = (p.col, p.row);
        let (c2, r2) = match self {
            Symmetry::Identity => (c, r),
            Symmetry::Rot90 => (m - r, c),
            Symmetry::Rot180 => (m - c, m - r),
            Symmetry::Rot270 => (r, m - c),
            Symmetry::FlipHorizontal => (m - c, r),
            Symmetry::FlipVertical => (c, m - r),
            Symmetry::Transpose => (r, c),
            Symmetry::AntiTranspose => (m - r, m - c),
        };
        Point::new(c2, r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct KoRestriction {
    point: Point,
    /// The color not allowed to play at `point` on the next move.
    forbidden: Color,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardState {
    size: u8,
    grid: Vec<Option<Color>>,
    /// Per point, index into `chains`.
    chain_slot: Vec<Option<u16>>,
    /// Sorted by id.
    chains: Vec<Chain>,
    captures: [u32; 2],
    ko: Option<KoRestriction>,
    move_number: u32,
}

impl BoardState {
    pub fn new(size: u8) -> Result<Self, BoardError> {
        if !(MIN_BOARD_SIZE..=MAX_BOARD_SIZE).contains(&size) {
            return Err(BoardError::UnsupportedSize(size));
        }
        let n = size as usize * size as usize;
        Ok(Self {
            size,
            grid: vec![None; n],
            chain_slot: vec![None; n],
            chains: Vec::new(),
            captures: [0; 2],
            ko: None,
            move_number: 0,
        })
    }

    /// Places setup stones (SGF `AB`/`AW`) with no rule checks beyond occupancy.
    pub fn replay_setup(size: u8, stones: &[(Color, Point)]) -> Result<Self, BoardError> {
        let mut state = Self::new(size)?;
        for &(color, p) in stones {
            let i = state.index_of(p)?;
            if state.grid[i].is_some() {
                return Err(BoardError::OccupiedPoint(p));
            }
            state.grid[i] = Some(color);
        }
        state.rebuild_chains();
        Ok(state)
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn move_number(&self) -> u32 {
        self.move_number
    }

    /// Stones captured *by* `color`.
    pub fn captures(&self, color: Color) -> u32 {
        self.captures[color.index()]
    }

    pub fn ko_point(&self) -> Option<Point> {
        self.ko.map(|k| k.point)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.col < self.size && p.row < self.size
    }

    fn index_of(&self, p: Point) -> Result<usize, BoardError> {
        if self.contains(p) {
            Ok(self.idx(p))
        } else {
            Err(BoardError::OutOfBounds(p))
        }
    }

    #[inline]
    fn idx(&self, p: Point) -> usize {
        p.row as usize * self.size as usize + p.col as usize
    }

    #[inline]
    fn point_at(&self, i: usize) -> Point {
        let s = self.size as usize;
        Point::new((i % s) as u8, (i / s) as u8)
    }

    /// Stone at `p`; `None` for empty or off-board points.
    pub fn get(&self, p: Point) -> Option<Color> {
        if self.contains(p) {
            self.grid[self.idx(p)]
        } else {
            None
        }
    }

    pub fn is_empty_at(&self, p: Point) -> bool {
        self.contains(p) && self.grid[self.idx(p)].is_none()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).flat_map(move |col| (0..self.size).map(move |row| Point::new(col, row)))
    }

    pub fn stones(&self) -> impl Iterator<Item = (Point, Color)> + '_ {
        self.points().filter_map(move |p| self.get(p).map(|c| (p, c)))
    }

    pub fn occupied_count(&self) -> usize {
        self.grid.iter().filter(|c| c.is_some()).count()
    }

    pub fn neighbors(&self, p: Point) -> impl Iterator<Item = Point> {
        neighbors_of(p, self.size)
    }

    pub fn diagonals(&self, p: Point) -> impl Iterator<Item = Point> {
        let size = self.size as i16;
        let (c, r) = (p.col as i16, p.row as i16);
        [(-1, -1), (1, -1), (-1, 1), (1, 1)]
            .into_iter()
            .map(move |(dc, dr)| (c + dc, r + dr))
            .filter(move |&(c, r)| c >= 0 && r >= 0 && c < size && r < size)
            .map(|(c, r)| Point::new(c as u8, r as u8))
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, id: ChainId) -> Option<&Chain> {
        self.chains.binary_search_by(|c| c.id.cmp(&id)).ok().map(|i| &self.chains[i])
    }

    pub fn chain_at(&self, p: Point) -> Result<Option<&Chain>, BoardError> {
        let i = self.index_of(p)?;
        Ok(self.chain_slot[i].map(|slot| &self.chains[slot as usize]))
    }

    pub fn chain_id_at(&self, p: Point) -> Option<ChainId> {
        if !self.contains(p) {
            return None;
        }
        self.chain_slot[self.idx(p)].map(|slot| self.chains[slot as usize].id)
    }

    /// Liberty count of a chain taken from this very position.
    pub fn liberties(&self, chain: &Chain) -> Result<usize, BoardError> {
        match self.chain(chain.id) {
            Some(own) if own == chain => Ok(own.liberties()),
            _ => Err(BoardError::StaleChain(chain.id)),
        }
    }

    pub fn apply_move(&self, mv: Move) -> Result<BoardState, BoardError> {
        let p = match mv.action {
            Action::Pass => {
                let mut next = self.clone();
                next.ko = None;
                next.move_number += 1;
                return Ok(next);
            }
            Action::Play(p) => p,
        };
        let at = self.index_of(p)?;
        if self.grid[at].is_some() {
            return Err(BoardError::OccupiedPoint(p));
        }
        if self.ko == Some(KoRestriction { point: p, forbidden: mv.color }) {
            return Err(BoardError::KoViolation(p));
        }

        let mut grid = self.grid.clone();
        grid[at] = Some(mv.color);
        let adversary = mv.color.opponent();
        let mut captured: Vec<usize> = Vec::new();
        for n in neighbors_of(p, self.size) {
            let ni = self.idx(n);
            if grid[ni] != Some(adversary) || captured.contains(&ni) {
                continue;
            }
            let (group, libs) = flood(&grid, self.size, ni);
            if libs == 0 {
                captured.extend(group);
            }
        }
        for &i in &captured {
            grid[i] = None;
        }
        let (own, own_libs) = flood(&grid, self.size, at);
        if own_libs == 0 {
            return Err(BoardError::SuicideMove(p));
        }

        let ko = if captured.len() == 1 && own.len() == 1 && own_libs == 1 {
            Some(KoRestriction { point: self.point_at(captured[0]), forbidden: adversary })
        } else {
            None
        };
        let mut captures = self.captures;
        captures[mv.color.index()] += captured.len() as u32;

        let mut next = BoardState {
            size: self.size,
            grid,
            chain_slot: Vec::new(),
            chains: Vec::new(),
            captures,
            ko,
            move_number: self.move_number + 1,
        };
        next.rebuild_chains();
        Ok(next)
    }

    /// Same position with every stone (and capture counter, and ko owner) recolored.
    pub fn color_swapped(&self) -> BoardState {
        let mut next = self.clone();
        for c in next.grid.iter_mut() {
            *c = c.map(Color::opponent);
        }
        next.captures = [self.captures[1], self.captures[0]];
        next.ko = self.ko.map(|k| KoRestriction { point: k.point, forbidden: k.forbidden.opponent() });
        next.rebuild_chains();
        next
    }

    pub fn transformed(&self, sym: Symmetry) -> BoardState {
        let mut next = self.clone();
        for p in self.points() {
            let q = sym.apply(p, self.size);
            next.grid[self.idx(q)] = self.grid[self.idx(p)];
        }
        next.ko = self.ko.map(|k| KoRestriction { point: sym.apply(k.point, self.size), forbidden: k.forbidden });
        next.rebuild_chains();
        next
    }

    /// Copy with the stone at `p` removed (or left empty). Bypasses the rules; meant for analysis.
    pub fn without_stone(&self, p: Point) -> BoardState {
        let mut next = self.clone();
        if self.contains(p) {
            next.grid[self.idx(p)] = None;
            next.ko = None;
            next.rebuild_chains();
        }
        next
    }

    /// Copy with a stone put at `p` without capture or suicide processing.
    pub fn with_stone(&self, p: Point, color: Color) -> BoardState {
        let mut next = self.clone();
        if self.contains(p) {
            next.grid[self.idx(p)] = Some(color);
            next.ko = None;
            next.rebuild_chains();
        }
        next
    }

    fn rebuild_chains(&mut self) {
        let n = self.grid.len();
        let mut slot: Vec<Option<u16>> = vec![None; n];
        let mut chains = Vec::new();
        // Visiting in `Point` order makes the first point of every flood its minimum.
        let order: Vec<Point> = self.points().collect();
        for start in order {
            let si = self.idx(start);
            let Some(color) = self.grid[si] else { continue };
            if slot[si].is_some() {
                continue;
            }
            let id = chains.len() as u16;
            let mut points = vec![start];
            let mut libs = Vec::new();
            slot[si] = Some(id);
            let mut k = 0;
            while k < points.len() {
                let q = points[k];
                k += 1;
                for nb in neighbors_of(q, self.size) {
                    let ni = self.idx(nb);
                    match self.grid[ni] {
                        None => libs.push(nb),
                        Some(c) if c == color && slot[ni].is_none() => {
                            slot[ni] = Some(id);
                            points.push(nb);
                        }
                        _ => {}
                    }
                }
            }
            points.sort_unstable();
            libs.sort_unstable();
            libs.dedup();
            chains.push(Chain { id: ChainId(start), color, points, liberty_points: libs });
        }
        self.chain_slot = slot;
        self.chains = chains;
    }
}

impl fmt::Display for BoardState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.size {
            for col in 0..self.size {
                let ch = match self.get(Point::new(col, row)) {
                    Some(Color::Black) => 'X',
                    Some(Color::White) => 'O',
                    None => '.',
                };
                write!(f, "{ch}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn neighbors_of(p: Point, size: u8) -> impl Iterator<Item = Point> {
    let (c, r) = (p.col, p.row);
    [
        (c > 0).then(|| Point::new(c.wrapping_sub(1), r)),
        (c + 1 < size).then(|| Point::new(c + 1, r)),
        (r > 0).then(|| Point::new(c, r.wrapping_sub(1))),
        (r + 1 < size).then(|| Point::new(c, r + 1)),
    ]
    .into_iter()
    .flatten()
}

/// Group containing grid index `start` and its distinct liberty count.
fn flood(grid: &[Option<Color>], size: u8, start: usize) -> (Vec<usize>, usize) {
    let s = size as usize;
    let color = grid[start];
    let mut seen = vec![false; grid.len()];
    let mut lib_seen = vec![false; grid.len()];
    let mut group = vec![start];
    seen[start] = true;
    let mut libs = 0;
    let mut k = 0;
    while k < group.len() {
        let i = group[k];
        k += 1;
        let p = Point::new((i % s) as u8, (i / s) as u8);
        for nb in neighbors_of(p, size) {
            let ni = nb.row as usize * s + nb.col as usize;
            match grid[ni] {
                None if !lib_seen[ni] => {
                    lib_seen[ni] = true;
                    libs += 1;
                }
                Some(_) if grid[ni] == color && !seen[ni] => {
                    seen[ni] = true;
                    group.push(ni);
                }
                _ => {}
            }
        }
    }
    (group, libs)
}
