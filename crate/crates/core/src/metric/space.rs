use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Dist, MetricError};
use crate::groups::{EnumeratedGroup, FiniteGroup, GroupAction};

/// Largest point count for which all pairwise graph distances are cached.
pub const DENSE_CROSSOVER: usize = 5000;
/// Below this size the metric axioms are checked on every triple.
pub const EXHAUSTIVE_AXIOMS: usize = 200;

const UNREACHED: u32 = u32::MAX;

#[derive(Debug)]
enum Metric {
    /// Shortest-path metric of an undirected unit-length graph (CSR).
    Graph {
        offsets: Vec<usize>,
        targets: Vec<u32>,
        table: OnceLock<Vec<u16>>,
    },
    Dense(Vec<Dist>),
    /// Disjoint union with components pushed apart by their indices.
    Disjoint {
        parts: Vec<Arc<FiniteMetricSpace>>,
        indices: Vec<u64>,
        offsets: Vec<usize>,
        diameters: Vec<Dist>,
    },
}

/// A finite metric space on points `0..len()`.
#[derive(Debug)]
pub struct FiniteMetricSpace {
    len: usize,
    metric: Metric,
    labels: Option<Vec<usize>>,
    action: Option<Arc<GroupAction>>,
    vertex_transitive: bool,
}

impl FiniteMetricSpace {
    /// Graph metric from an undirected edge list; the graph must be connected.
    pub fn from_edges(len: usize, edges: &[(usize, usize)]) -> Result<Self, MetricError> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); len];
        for &(u, v) in edges {
            if u >= len || v >= len {
                return Err(MetricError::PointOutOfRange(u.max(v)));
            }
            if u != v {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
        Self::from_adjacency(adj)
    }

    fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Result<Self, MetricError> {
        let len = adj.len();
        let mut offsets = Vec::with_capacity(len + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            targets.extend_from_slice(row);
            offsets.push(targets.len());
        }
        let space = Self {
            len,
            metric: Metric::Graph {
                offsets,
                targets,
                table: OnceLock::new(),
            },
            labels: None,
            action: None,
            vertex_transitive: false,
        };
        if len > 0 {
            let reached = space.bfs(0).iter().filter(|&&d| d != UNREACHED).count();
            if reached < len {
                return Err(MetricError::Disconnected { reached, total: len });
            }
        }
        Ok(space)
    }

    /// Dense metric from a row-major matrix, checked against the axioms.
    pub fn from_matrix(len: usize, entries: Vec<Dist>) -> Result<Self, MetricError> {
        if entries.len() != len * len {
            return Err(MetricError::NotSquare(entries.len()));
        }
        let space = Self {
            len,
            metric: Metric::Dense(entries),
            labels: None,
            action: None,
            vertex_transitive: false,
        };
        space.check_axioms(0)?;
        Ok(space)
    }

    pub fn path(len: usize) -> Self {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_edges(len, &edges).expect("paths are connected")
    }

    /// The cycle `C_len`, with its rotation action attached.
    pub fn cycle(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        let mut space = Self::from_edges(len, &edges).expect("cycles are connected");
        let group = Arc::new(FiniteGroup::cyclic(len));
        space.action = Some(Arc::new(GroupAction::left_regular(group)));
        space.vertex_transitive = true;
        space
    }

    pub fn complete(len: usize) -> Self {
        let edges: Vec<_> = (0..len).flat_map(|i| (i + 1..len).map(move |j| (i, j))).collect();
        let mut space = Self::from_edges(len, &edges).expect("complete graphs are connected");
        space.vertex_transitive = true;
        space
    }

    /// Word-metric Cayley graph of an enumerated finite group: vertex `x`
    /// is joined to `x * s` for every symmetric generator `s`. The left
    /// translation action is attached when the group is small enough to
    /// tabulate.
    pub fn cayley_graph(group: &EnumeratedGroup) -> Result<Self, MetricError> {
        if !group.is_closed() {
            return Err(MetricError::NotFinite);
        }
        let k = group.step_generators().len();
        let adj: Vec<Vec<u32>> = (0..group.order())
            .map(|x| (0..k).filter_map(|j| group.step(x, j)).collect())
            .collect();
        let mut space = Self::from_adjacency(adj)?;
        space.vertex_transitive = true;
        if let Ok(table) = FiniteGroup::from_enumerated("cayley", group) {
            space.action = Some(Arc::new(GroupAction::left_regular(Arc::new(table))));
        }
        Ok(space)
    }

    /// Cayley graph of a tabulated group on its stored generators, with
    /// `x` joined to `x * s` and the left-regular action attached.
    pub fn finite_cayley(group: Arc<FiniteGroup>) -> Result<Self, MetricError> {
        let adj: Vec<Vec<u32>> = (0..group.order())
            .map(|x| {
                let mut out: Vec<u32> = group
                    .generators()
                    .iter()
                    .flat_map(|&s| {
                        let s = s as usize;
                        [group.mul(x, s), group.mul(x, group.inv(s))]
                    })
                    .filter(|&y| y != x)
                    .map(|y| y as u32)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let mut space = Self::from_adjacency(adj)?;
        space.vertex_transitive = true;
        space.action = Some(Arc::new(GroupAction::left_regular(group)));
        Ok(space)
    }

    /// Graph metric on a finite ball of an infinite group; the ball is
    /// given with its right-multiplication table.
    pub fn ball_graph(ball: &EnumeratedGroup) -> Self {
        let k = ball.step_generators().len();
        let adj: Vec<Vec<u32>> = (0..ball.order())
            .map(|x| (0..k).filter_map(|j| ball.step(x, j)).collect())
            .collect();
        Self::from_adjacency(adj).expect("balls are connected")
    }

    /// Disjoint union of components with explicit indices `m`; points of
    /// different components are at distance `diam_m + diam_n + m + n + 1`.
    pub fn box_space_indexed(parts: Vec<Arc<FiniteMetricSpace>>, indices: Vec<u64>) -> Result<Self, MetricError> {
        if parts.len() != indices.len() {
            return Err(MetricError::NotSquare(indices.len()));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(MetricError::DuplicateIndex);
        }
        let mut offsets = vec![0];
        let mut labels = Vec::new();
        for (c, p) in parts.iter().enumerate() {
            offsets.push(offsets[c] + p.len());
            labels.extend(std::iter::repeat_n(c, p.len()));
        }
        let diameters = parts.iter().map(|p| p.diameter()).collect();
        Ok(Self {
            len: *offsets.last().unwrap(),
            metric: Metric::Disjoint {
                parts,
                indices,
                offsets,
                diameters,
            },
            labels: Some(labels),
            action: None,
            vertex_transitive: false,
        })
    }

    /// [`Self::box_space_indexed`] with component `i` carrying index `i`.
    pub fn box_space(parts: Vec<Arc<FiniteMetricSpace>>) -> Self {
        let indices = (0..parts.len() as u64).collect();
        Self::box_space_indexed(parts, indices).expect("positional indices are distinct")
    }

    /// Attaches an action, checking that it is isometric.
    pub fn with_action(mut self, action: Arc<GroupAction>) -> Result<Self, MetricError> {
        if action.degree() != self.len {
            return Err(MetricError::PointOutOfRange(action.degree()));
        }
        self.action = Some(action);
        self.check_isometric(0)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn action(&self) -> Option<&Arc<GroupAction>> {
        self.action.as_ref()
    }

    /// Component tag of each point, for disjoint unions.
    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn is_graph(&self) -> bool {
        matches!(self.metric, Metric::Graph { .. })
    }

    /// Neighbours in the underlying graph, if this is a graph metric.
    pub fn neighbors(&self, x: usize) -> Option<&[u32]> {
        match &self.metric {
            Metric::Graph { offsets, targets, .. } => Some(&targets[offsets[x]..offsets[x + 1]]),
            _ => None,
        }
    }

    /// Undirected edges `u < v` of a graph metric.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len)
            .flat_map(|u| {
                self.neighbors(u)
                    .unwrap_or(&[])
                    .iter()
                    .map(move |&v| (u, v as usize))
                    .filter(|(u, v)| u < v)
            })
            .collect()
    }

    fn bfs(&self, source: usize) -> Vec<u32> {
        let Metric::Graph { offsets, targets, .. } = &self.metric else {
            unreachable!("bfs on a non-graph metric")
        };
        let mut dist = vec![UNREACHED; self.len];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(x) = queue.pop_front() {
            for &y in &targets[offsets[x]..offsets[x + 1]] {
                let y = y as usize;
                if dist[y] == UNREACHED {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn graph_table(&self) -> Option<&[u16]> {
        let Metric::Graph { table, .. } = &self.metric else {
            return None;
        };
        if self.len > DENSE_CROSSOVER {
            return None;
        }
        Some(table.get_or_init(|| {
            let rows: Vec<Vec<u16>> = (0..self.len)
                .into_par_iter()
                .map(|s| self.bfs(s).into_iter().map(|d| d as u16).collect())
                .collect();
            rows.concat()
        }))
    }

    /// Integer distance for graph metrics.
    pub fn hops(&self, x: usize, y: usize) -> Option<u32> {
        if let Some(t) = self.graph_table() {
            return Some(t[x * self.len + y] as u32);
        }
        match &self.metric {
            Metric::Graph { .. } => Some(self.bfs(x)[y]),
            _ => None,
        }
    }

    pub fn dist(&self, x: usize, y: usize) -> Dist {
        match &self.metric {
            Metric::Graph { .. } => Rational64::from_integer(self.hops(x, y).unwrap() as i64),
            Metric::Dense(d) => d[x * self.len + y],
            Metric::Disjoint {
                parts,
                indices,
                offsets,
                diameters,
            } => {
                let cx = offsets.partition_point(|&o| o <= x) - 1;
                let cy = offsets.partition_point(|&o| o <= y) - 1;
                if cx == cy {
                    parts[cx].dist(x - offsets[cx], y - offsets[cy])
                } else {
                    diameters[cx] + diameters[cy] + Rational64::from_integer((indices[cx] + indices[cy] + 1) as i64)
                }
            }
        }
    }

    /// Distances from one point to every point.
    pub fn row(&self, x: usize) -> Vec<Dist> {
        match &self.metric {
            Metric::Graph { .. } if self.len > DENSE_CROSSOVER => {
                self.bfs(x).into_iter().map(|d| Rational64::from_integer(d as i64)).collect()
            }
            _ => (0..self.len).map(|y| self.dist(x, y)).collect(),
        }
    }

    /// Closed ball `{y : d(center, y) <= radius}`, sorted.
    pub fn ball(&self, center: usize, radius: Dist) -> Vec<usize> {
        if let (Metric::Graph { offsets, targets, .. }, true) = (&self.metric, self.len > DENSE_CROSSOVER) {
            // truncated BFS avoids touching the whole graph
            let r = radius.floor().to_integer().max(-1);
            if r < 0 {
                return Vec::new();
            }
            let mut dist = std::collections::HashMap::from([(center, 0i64)]);
            let mut queue = VecDeque::from([center]);
            while let Some(x) = queue.pop_front() {
                let d = dist[&x];
                if d == r {
                    continue;
                }
                for &y in &targets[offsets[x]..offsets[x + 1]] {
                    dist.entry(y as usize).or_insert_with(|| {
                        queue.push_back(y as usize);
                        d + 1
                    });
                }
            }
            let mut out: Vec<usize> = dist.into_keys().collect();
            out.sort_unstable();
            return out;
        }
        (0..self.len).filter(|&y| self.dist(center, y) <= radius).collect()
    }

    pub fn eccentricity(&self, x: usize) -> Dist {
        self.row(x).into_iter().max().unwrap_or_default()
    }

    pub fn diameter(&self) -> Dist {
        if self.len == 0 {
            return Dist::default();
        }
        if self.vertex_transitive {
            return self.eccentricity(0);
        }
        if let Metric::Disjoint { indices, diameters, .. } = &self.metric {
            if diameters.len() == 1 {
                return diameters[0];
            }
            // the two largest cross distances come from the top indices
            let mut best = Dist::default();
            for i in 0..diameters.len() {
                for j in i + 1..diameters.len() {
                    let d = diameters[i] + diameters[j] + Rational64::from_integer((indices[i] + indices[j] + 1) as i64);
                    best = best.max(d);
                }
            }
            return best;
        }
        (0..self.len)
            .into_par_iter()
            .map(|x| self.eccentricity(x))
            .max()
            .unwrap_or_default()
    }

    /// All distinct distances realized between pairs of points, ascending.
    pub fn realized_distances(&self) -> Vec<Dist> {
        let mut all: Vec<Dist> = (0..self.len).into_par_iter().flat_map_iter(|x| self.row(x)).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Checks positivity, symmetry and the triangle inequality; every
    /// triple below [`EXHAUSTIVE_AXIOMS`] points, sampled triples above.
    pub fn check_axioms(&self, seed: u64) -> Result<(), MetricError> {
        let n = self.len;
        let pair = |x: usize, y: usize| -> Result<(), MetricError> {
            let d = self.dist(x, y);
            if d < Dist::default() {
                return Err(MetricError::Negative(x, y));
            }
            if (d == Dist::default()) != (x == y) {
                return Err(MetricError::ZeroDistance(x, y));
            }
            if d != self.dist(y, x) {
                return Err(MetricError::Asymmetric(x, y));
            }
            Ok(())
        };
        let triple = |x: usize, y: usize, z: usize| -> Result<(), MetricError> {
            if self.dist(x, z) > self.dist(x, y) + self.dist(y, z) {
                return Err(MetricError::Triangle(x, y, z));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_AXIOMS {
            for x in 0..n {
                for y in 0..n {
                    pair(x, y)?;
                    for z in 0..n {
                        triple(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20_000 {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                pair(x, y)?;
                triple(x, y, z)?;
            }
        }
        Ok(())
    }

    /// Checks `d(gx, gy) = d(x, y)` for the attached action, exhaustively
    /// below [`EXHAUSTIVE_AXIOMS`] points and on samples above.
    pub fn check_isometric(&self, seed: u64) -> Result<(), MetricError> {
        let Some(action) = &self.action else {
            return Ok(());
        };
        let order = action.group().order();
        let check = |g: usize, x: usize, y: usize| {
            if self.dist(action.act(g, x), action.act(g, y)) != self.dist(x, y) {
                Err(MetricError::NotIsometric { g, x, y })
            } else {
                Ok(())
            }
        };
        if self.len <= EXHAUSTIVE_AXIOMS {
            for g in 0..order {
                for x in 0..self.len {
                    for y in 0..self.len {
                        check(g, x, y)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20_000 {
                check(rng.gen_range(0..order), rng.gen_range(0..self.len), rng.gen_range(0..self.len))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::QuotientTower;

    fn int(n: i64) -> Dist {
        Rational64::from_integer(n)
    }

    #[test]
    fn ten_cycle_as_cayley_graph() {
        let tower = QuotientTower::integers(&[10]).unwrap();
        let q = tower.enumerate_quotient(0, 1000).unwrap();
        let space = FiniteMetricSpace::cayley_graph(&q).unwrap();
        assert_eq!(space.len(), 10);
        assert_eq!(space.diameter(), int(5));
        space.check_axioms(0).unwrap();
        space.check_isometric(0).unwrap();
    }

    #[test]
    fn trivial_group_is_a_point() {
        let tower = QuotientTower::integers(&[1]).unwrap();
        let q = tower.enumerate_quotient(0, 10).unwrap();
        let space = FiniteMetricSpace::cayley_graph(&q).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space.diameter(), int(0));
    }

    #[test]
    fn sl2_f3_is_four_regular_and_connected() {
        let tower = QuotientTower::sanov(&[3]).unwrap();
        let q = tower.enumerate_quotient(0, 1000).unwrap();
        let space = FiniteMetricSpace::cayley_graph(&q).unwrap();
        assert_eq!(space.len(), 24);
        assert!((0..24).all(|x| space.neighbors(x).unwrap().len() == 4));
        space.check_isometric(0).unwrap();
    }

    #[test]
    fn disconnected_graph_is_an_error() {
        let err = FiniteMetricSpace::from_edges(4, &[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, MetricError::Disconnected { reached: 2, total: 4 }));
    }

    #[test]
    fn box_space_distances() {
        let pt = Arc::new(FiniteMetricSpace::path(1));
        let b = FiniteMetricSpace::box_space(vec![pt.clone(), pt]);
        assert_eq!(b.dist(0, 1), int(2));
        let b = FiniteMetricSpace::box_space(vec![Arc::new(FiniteMetricSpace::cycle(4)), Arc::new(FiniteMetricSpace::cycle(6))]);
        assert_eq!(b.dist(0, 4), int(7));
        assert_eq!(b.dist(1, 3), int(2));
        assert_eq!(b.dist(5, 9), int(2));
        assert_eq!(b.labels().unwrap()[5], 1);
        b.check_axioms(0).unwrap();
    }

    #[test]
    fn single_component_box_space_is_isometric() {
        let c = Arc::new(FiniteMetricSpace::cycle(7));
        let b = FiniteMetricSpace::box_space(vec![c.clone()]);
        for x in 0..7 {
            for y in 0..7 {
                assert_eq!(b.dist(x, y), c.dist(x, y));
            }
        }
        assert_eq!(b.diameter(), c.diameter());
    }

    #[test]
    fn balls_on_ten_cycle() {
        let c = FiniteMetricSpace::cycle(10);
        assert_eq!(c.ball(0, int(2)), vec![0, 1, 2, 8, 9]);
        assert_eq!(c.ball(3, int(0)), vec![3]);
        assert_eq!(c.ball(3, int(5)).len(), 10);
    }

    #[test]
    fn dense_metric_is_validated() {
        let ok = FiniteMetricSpace::from_matrix(2, vec![int(0), int(3), int(3), int(0)]);
        assert!(ok.is_ok());
        let bad = FiniteMetricSpace::from_matrix(3, vec![int(0), int(1), int(5), int(1), int(0), int(1), int(5), int(1), int(0)]);
        assert!(matches!(bad, Err(MetricError::Triangle(..))));
    }

    #[test]
    fn non_isometric_action_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        // swapping 0 and 1 on a 3-path is not an isometry
        let act = GroupAction::new(g, 3, |g, x| if g == 1 && x < 2 { 1 - x } else { x }).unwrap();
        let err = FiniteMetricSpace::path(3).with_action(Arc::new(act)).unwrap_err();
        assert!(matches!(err, MetricError::NotIsometric { .. }));
    }
}
