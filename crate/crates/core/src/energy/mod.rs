//! Stone values, pairwise interaction coefficients, the Hamiltonian and the
//! per-color strength split.

mod params;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::board::{BoardState, Chain, ChainId, Color, Point};
use crate::tactics::PatternAnnotation;

pub use params::{ParamError, ParameterSet, PARAMETER_KEYS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnergyError {
    #[error("chain {0} does not exist")]
    UnknownChain(ChainId),
    #[error("a chain has no interaction with itself ({0})")]
    SameChain(ChainId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoneValue {
    pub chain: ChainId,
    pub x: f64,
}

/// `x = c (n + r_eye^k)` with an eye term only when `k >= 1`.
pub fn stone_value(chain: &Chain, k: u32, params: &ParameterSet) -> StoneValue {
    let n = chain.size() as f64;
    let magnitude = if k >= 1 { n + params.r_eye.powi(k as i32) } else { n };
    StoneValue { chain: chain.id, x: chain.color.spin() * magnitude }
}

/// Interaction coefficients, one entry per unordered pair within the corridor cap.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InteractionSet {
    pairs: BTreeMap<(ChainId, ChainId), f64>,
}

impl InteractionSet {
    fn key(a: ChainId, b: ChainId) -> (ChainId, ChainId) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Zero for pairs beyond the cap.
    pub fn get(&self, a: ChainId, b: ChainId) -> f64 {
        self.pairs.get(&Self::key(a, b)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((ChainId, ChainId), f64)> + '_ {
        self.pairs.iter().map(|(&k, &w)| (k, w))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub h: f64,
    pub s_black: f64,
    pub s_white: f64,
    pub values: BTreeMap<ChainId, f64>,
    pub fields: BTreeMap<ChainId, u32>,
    pub colors: BTreeMap<ChainId, Color>,
    pub interactions: InteractionSet,
    pub mu: f64,
}

/// Manhattan distance from every board point to the nearest stone of a chain.
struct DistanceMap {
    size: usize,
    dist: Vec<u32>,
}

impl DistanceMap {
    fn new(size: u8, points: &[Point]) -> Self {
        let n = size as usize;
        let mut dist = vec![u32::MAX; n * n];
        for row in 0..n {
            for col in 0..n {
                let p = Point::new(col as u8, row as u8);
                dist[row * n + col] = points.iter().map(|&q| p.manhattan(q)).min().unwrap_or(u32::MAX);
            }
        }
        Self { size: n, dist }
    }

    fn at(&self, p: Point) -> u32 {
        self.dist[p.row as usize * self.size + p.col as usize]
    }
}

/// Minimum Manhattan distance between two chains.
fn gap(a: &DistanceMap, b: &Chain) -> u32 {
    b.points.iter().map(|&p| a.at(p)).min().unwrap_or(u32::MAX)
}

fn nearest(points: &[Point], p: Point) -> u32 {
    points.iter().map(|&q| p.manhattan(q)).min().unwrap_or(u32::MAX)
}

/// Scans the bounding box of both chains, which holds every shortest path.
fn corridor_points(a: &Chain, b: &Chain, d: u32, dist_a: impl Fn(Point) -> u32, dist_b: impl Fn(Point) -> u32) -> Vec<Point> {
    let all = a.points.iter().chain(&b.points);
    let (mut c0, mut c1, mut r0, mut r1) = (u8::MAX, 0, u8::MAX, 0);
    for p in all {
        c0 = c0.min(p.col);
        c1 = c1.max(p.col);
        r0 = r0.min(p.row);
        r1 = r1.max(p.row);
    }
    let mut out = Vec::new();
    for col in c0..=c1 {
        for row in r0..=r1 {
            let p = Point::new(col, row);
            if dist_a(p) + dist_b(p) == d && !a.contains(p) && !b.contains(p) {
                out.push(p);
            }
        }
    }
    out
}

fn pair_corridor(a: &Chain, b: &Chain, d_max: u32) -> Vec<Point> {
    let d = a.points.iter().map(|&p| nearest(&b.points, p)).min().unwrap_or(u32::MAX);
    if d > d_max {
        return Vec::new();
    }
    corridor_points(a, b, d, |p| nearest(&a.points, p), |p| nearest(&b.points, p))
}

/// Points on the shortest rectilinear paths between two chains, excluding
/// the chains themselves. Empty beyond the corridor cap.
pub fn corridor(state: &BoardState, a: ChainId, b: ChainId, params: &ParameterSet) -> Result<BTreeSet<Point>, EnergyError> {
    let ca = state.chain(a).ok_or(EnergyError::UnknownChain(a))?;
    let cb = state.chain(b).ok_or(EnergyError::UnknownChain(b))?;
    if a == b {
        return Err(EnergyError::SameChain(a));
    }
    Ok(pair_corridor(ca, cb, params.d_max).into_iter().collect())
}

/// Symmetrised sum over both perspectives of the corridor terms.
fn coefficient(
    state: &BoardState,
    a: &Chain,
    b: &Chain,
    corridor: &[Point],
    magnitude: &dyn Fn(ChainId) -> f64,
    annotations: &PatternAnnotation,
    params: &ParameterSet,
) -> f64 {
    let mut empties = 0usize;
    let mut crossing: Vec<ChainId> = Vec::new();
    for &p in corridor {
        match state.chain_id_at(p) {
            None => empties += 1,
            Some(id) => crossing.push(id),
        }
    }
    crossing.sort_unstable();
    crossing.dedup();
    let open = params.r_sl * empties as f64;
    let mut total = 0.0;
    for side in [a.color, b.color] {
        let mut sum = open;
        for &id in &crossing {
            let Some(s) = state.chain(id) else { continue };
            let term = params.r_for(annotations.kind(id)) * magnitude(id);
            if s.color == side {
                sum += term;
            } else {
                sum -= term;
            }
        }
        total += sum;
    }
    total / 2.0
}

pub fn interaction_coefficient(
    state: &BoardState,
    a: ChainId,
    b: ChainId,
    annotations: &PatternAnnotation,
    params: &ParameterSet,
) -> Result<f64, EnergyError> {
    let ca = state.chain(a).ok_or(EnergyError::UnknownChain(a))?;
    let cb = state.chain(b).ok_or(EnergyError::UnknownChain(b))?;
    if a == b {
        return Err(EnergyError::SameChain(a));
    }
    let path = pair_corridor(ca, cb, params.d_max);
    let magnitude = |id: ChainId| {
        state.chain(id).map_or(0.0, |c| stone_value(c, annotations.eye_count(id), params).x.abs())
    };
    Ok(coefficient(state, ca, cb, &path, &magnitude, annotations, params))
}

/// `H = -Σ w_ij x_i x_j - μ Σ h_i x_i` with `h_i` the liberty count, plus the
/// per-color strength split.
pub fn hamiltonian(state: &BoardState, params: &ParameterSet, annotations: &PatternAnnotation) -> EnergyReport {
    let chains = state.chains();
    let size = state.size();
    let mut values = BTreeMap::new();
    let mut fields = BTreeMap::new();
    let mut colors = BTreeMap::new();
    for c in chains {
        values.insert(c.id, stone_value(c, annotations.eye_count(c.id), params).x);
        fields.insert(c.id, c.liberties() as u32);
        colors.insert(c.id, c.color);
    }
    let magnitude = |id: ChainId| values.get(&id).map_or(0.0, |x: &f64| x.abs());
    let maps: Vec<DistanceMap> = chains.iter().map(|c| DistanceMap::new(size, &c.points)).collect();

    let mut interactions = InteractionSet::default();
    for (i, a) in chains.iter().enumerate() {
        for (j, b) in chains.iter().enumerate().skip(i + 1) {
            let d = gap(&maps[i], b);
            if d > params.d_max {
                continue;
            }
            let path = corridor_points(a, b, d, |p| maps[i].at(p), |p| maps[j].at(p));
            let w = coefficient(state, a, b, &path, &magnitude, annotations, params);
            interactions.pairs.insert((a.id, b.id), w);
        }
    }

    let mut report = EnergyReport {
        h: 0.0,
        s_black: 0.0,
        s_white: 0.0,
        values,
        fields,
        colors,
        interactions,
        mu: params.mu,
    };
    let pair: f64 = report.interactions.iter().map(|((a, b), w)| w * report.values[&a] * report.values[&b]).sum();
    let field: f64 = report.values.iter().map(|(id, x)| report.fields[id] as f64 * x).sum();
    report.h = -pair - params.mu * field;
    let (sb, sw) = color_strength(&report);
    report.s_black = sb;
    report.s_white = sw;
    report
}

/// `S_c = μ Σ_c h|x| + Σ_{same-color pairs of c} w x x + ½ Σ_{cross pairs} w x x`.
pub fn color_strength(report: &EnergyReport) -> (f64, f64) {
    let mut s = [0.0f64; 2];
    for (id, x) in &report.values {
        s[report.colors[id].index()] += report.mu * report.fields[id] as f64 * x.abs();
    }
    for ((a, b), w) in report.interactions.iter() {
        let term = w * report.values[&a] * report.values[&b];
        let (ca, cb) = (report.colors[&a], report.colors[&b]);
        if ca == cb {
            s[ca.index()] += term;
        } else {
            s[0] += term / 2.0;
            s[1] += term / 2.0;
        }
    }
    (s[Color::Black.index()], s[Color::White.index()])
}
