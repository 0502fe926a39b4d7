use crate::board::{neighbors_of, BoardState, Color, Point};

/// Bare stone grid used by the readers. Captures and suicide follow the
/// normal rules; ko is not tracked.
#[derive(Clone)]
pub(crate) struct Scratch {
    size: u8,
    grid: Vec<Option<Color>>,
}

impl Scratch {
    pub fn from_state(state: &BoardState) -> Self {
        let size = state.size();
        let mut grid = vec![None; size as usize * size as usize];
        for (p, c) in state.stones() {
            grid[p.row as usize * size as usize + p.col as usize] = Some(c);
        }
        Self { size, grid }
    }

    #[inline]
    fn idx(&self, p: Point) -> usize {
        p.row as usize * self.size as usize + p.col as usize
    }

    pub fn get(&self, p: Point) -> Option<Color> {
        self.grid[self.idx(p)]
    }

    /// Stones of the group at `p` (which must be occupied) and its sorted liberties.
    pub fn group(&self, p: Point) -> (Vec<Point>, Vec<Point>) {
        let color = self.get(p);
        let mut seen = vec![false; self.grid.len()];
        seen[self.idx(p)] = true;
        let mut stones = vec![p];
        let mut libs = Vec::new();
        let mut k = 0;
        while k < stones.len() {
            let q = stones[k];
            k += 1;
            for n in neighbors_of(q, self.size) {
                let i = self.idx(n);
                match self.grid[i] {
                    None => libs.push(n),
                    c if c == color && !seen[i] => {
                        seen[i] = true;
                        stones.push(n);
                    }
                    _ => {}
                }
            }
        }
        libs.sort_unstable();
        libs.dedup();
        (stones, libs)
    }

    pub fn liberties(&self, p: Point) -> Vec<Point> {
        if self.get(p).is_none() {
            return Vec::new();
        }
        self.group(p).1
    }

    /// Plays a stone; `None` when the point is taken or the move is suicide.
    pub fn play(&self, p: Point, color: Color) -> Option<Scratch> {
        if self.get(p).is_some() {
            return None;
        }
        let mut next = self.clone();
        let at = next.idx(p);
        next.grid[at] = Some(color);
        for n in neighbors_of(p, self.size) {
            if next.get(n) == Some(color.opponent()) {
                let (stones, libs) = next.group(n);
                if libs.is_empty() {
                    for s in stones {
                        let i = next.idx(s);
                        next.grid[i] = None;
                    }
                }
            }
        }
        if next.group(p).1.is_empty() {
            return None;
        }
        Some(next)
    }

    /// Adjacent groups of `color` next to the group at `p`, one representative point each.
    pub fn adjacent_groups(&self, p: Point, color: Color) -> Vec<Point> {
        let (stones, _) = self.group(p);
        let mut reps: Vec<(Vec<Point>, Point)> = Vec::new();
        for s in stones {
            for n in neighbors_of(s, self.size) {
                if self.get(n) == Some(color) && !reps.iter().any(|(g, _)| g.contains(&n)) {
                    let (g, _) = self.group(n);
                    reps.push((g, n));
                }
            }
        }
        reps.into_iter().map(|(_, rep)| rep).collect()
    }
}
