//! Common fate graph: every chain collapses into one principal node labelled
//! with its stone count, every liberty becomes a secondary node, and edges
//! join chains to their liberties. Two chains are related when they share a
//! liberty.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::board::{BoardState, ChainId, Color, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfgError {
    #[error("chain {0} is not a node of this graph")]
    UnknownChain(ChainId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipalNode {
    pub color: Color,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommonFateGraph {
    principal: BTreeMap<ChainId, PrincipalNode>,
    /// Liberty point -> incident chains, sorted.
    secondary: BTreeMap<Point, Vec<ChainId>>,
    /// Chain -> its liberty points, sorted.
    liberties: BTreeMap<ChainId, Vec<Point>>,
}

pub fn build_cfg(state: &BoardState) -> CommonFateGraph {
    let mut g = CommonFateGraph::default();
    for chain in state.chains() {
        g.principal.insert(chain.id, PrincipalNode { color: chain.color, size: chain.size() });
        g.liberties.insert(chain.id, chain.liberty_points.clone());
        for &lib in &chain.liberty_points {
            g.secondary.entry(lib).or_default().push(chain.id);
        }
    }
    // Chains are visited in id order, so every incidence list is already sorted.
    g
}

impl CommonFateGraph {
    pub fn principal_nodes(&self) -> &BTreeMap<ChainId, PrincipalNode> {
        &self.principal
    }

    pub fn secondary_nodes(&self) -> impl Iterator<Item = Point> + '_ {
        self.secondary.keys().copied()
    }

    pub fn secondary_count(&self) -> usize {
        self.secondary.len()
    }

    /// Chains incident to a liberty point.
    pub fn incident(&self, p: Point) -> &[ChainId] {
        self.secondary.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn liberties_of(&self, id: ChainId) -> Result<&[Point], CfgError> {
        self.liberties.get(&id).map(Vec::as_slice).ok_or(CfgError::UnknownChain(id))
    }

    pub fn edge_count(&self) -> usize {
        self.secondary.values().map(Vec::len).sum()
    }

    pub fn shared_liberties(&self, a: ChainId, b: ChainId) -> Result<usize, CfgError> {
        let la = self.liberties_of(a)?;
        let lb = self.liberties_of(b)?;
        Ok(count_common(la, lb))
    }

    /// Every unordered pair of chains sharing at least one liberty, with the
    /// number of shared liberties. Pairs come out as `(smaller id, larger id)`.
    pub fn shared_liberty_pairs(&self) -> BTreeMap<(ChainId, ChainId), usize> {
        let mut pairs = BTreeMap::new();
        for chains in self.secondary.values() {
            for (i, &a) in chains.iter().enumerate() {
                for &b in &chains[i + 1..] {
                    *pairs.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        pairs
    }

    /// Plain-text listing, one principal node per line:
    /// `<id> <color> size=<n> liberties=<k> shares=<id>:<count>,...`
    pub fn adjacency_listing(&self) -> String {
        let pairs = self.shared_liberty_pairs();
        let mut out = String::new();
        for (&id, node) in &self.principal {
            let libs = self.liberties.get(&id).map_or(0, Vec::len);
            let shares: Vec<String> = pairs
                .iter()
                .filter_map(|(&(a, b), &n)| {
                    if a == id {
                        Some(format!("{b}:{n}"))
                    } else if b == id {
                        Some(format!("{a}:{n}"))
                    } else {
                        None
                    }
                })
                .collect();
            let _ = writeln!(out, "{id} {} size={} liberties={libs} shares={}", node.color, node.size, shares.join(","));
        }
        out
    }

    /// Chains of one color, ids sorted.
    pub fn chains_of(&self, color: Color) -> BTreeSet<ChainId> {
        self.principal.iter().filter(|(_, n)| n.color == color).map(|(&id, _)| id).collect()
    }
}

fn count_common(a: &[Point], b: &[Point]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
