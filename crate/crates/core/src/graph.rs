//! Simple undirected graphs on `0..n` and the elementary algorithms the rest
//! of the crate relies on.
//!
//! The same [`Graph`] type holds base graphs and materialized supertoken
//! graphs. Adjacency lists are kept sorted so neighbor iteration is
//! deterministic and `has_edge` is a binary search.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// A base graph `G = (V, E)`; the name used throughout the token-graph API.
pub type BaseGraph = Graph;

/// Result of a bipartiteness test, with a checkable certificate either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartiteness {
    /// `coloring[v]` is 0 or 1 and every edge joins different colors.
    Bipartite { coloring: Vec<u8> },
    /// A closed walk `c[0] c[1] … c[l-1] c[0]` of odd length `l`.
    OddCycle { cycle: Vec<usize> },
}

impl Bipartiteness {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartiteness::Bipartite { .. })
    }
}

impl Graph {
    /// Graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Path `P_n` with edges `{i, i+1}`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Self::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle `C_n` with edges `{i, (i+1) mod n}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidFamily {
                family: "cycle",
                n,
                reason: "a cycle needs at least 3 vertices",
            });
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star `S_n`: `n + 1` vertices, center 0 joined to leaves `1..=n`.
    pub fn star(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFamily {
                family: "star",
                n,
                reason: "a star needs at least one leaf",
            });
        }
        Self::from_edges(n + 1, (1..=n).map(|i| (0, i)))
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Builds a graph from an edge list. Repeated pairs and both orientations
    /// collapse to a single edge.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop { vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        let degree_sum: usize = adj.iter().map(Vec::len).sum();
        Ok(Graph { adj, m: degree_sum / 2 })
    }

    /// Wraps adjacency rows that are already sorted, duplicate free and
    /// symmetric. Only checked in debug builds.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        debug_assert!(adj.iter().enumerate().all(|(u, row)| {
            row.windows(2).all(|w| w[0] < w[1]) && row.iter().all(|&v| v != u && adj[v].binary_search(&u).is_ok())
        }));
        let degree_sum: usize = adj.iter().map(Vec::len).sum();
        Graph { adj, m: degree_sum / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        Self::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|row| row.iter().map(|&v| v + shift).collect()));
        Graph::from_sorted_adjacency(adj)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path distance, or `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs_distances(u)[v])
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut components = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// At most one component. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// BFS 2-coloring per component; on conflict returns an odd cycle built
    /// from the two BFS-tree paths meeting at the offending edge.
    pub fn bipartition(&self) -> Bipartiteness {
        let n = self.n();
        let mut color: Vec<Option<u8>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap_or(0);
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cu);
                            parent[w] = u;
                            depth[w] = depth[u] + 1;
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => {
                            return Bipartiteness::OddCycle {
                                cycle: tree_cycle(u, w, &parent, &depth),
                            };
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Bipartiteness::Bipartite {
            coloring: color.into_iter().map(|c| c.unwrap_or(0)).collect(),
        }
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_bipartite()
    }

    /// Checks a bipartiteness certificate against this graph.
    pub fn check_bipartiteness(&self, cert: &Bipartiteness) -> bool {
        match cert {
            Bipartiteness::Bipartite { coloring } => {
                coloring.len() == self.n()
                    && coloring.iter().all(|&c| c <= 1)
                    && self.edges().all(|(u, v)| coloring[u] != coloring[v])
            }
            Bipartiteness::OddCycle { cycle } => {
                cycle.len() % 2 == 1
                    && cycle
                        .iter()
                        .zip(cycle.iter().cycle().skip(1))
                        .all(|(&a, &b)| self.has_edge(a, b))
            }
        }
    }
}

/// Cycle through the edge `u w` and the BFS tree paths to their common
/// ancestor. Both endpoints have equal color, so the cycle is odd.
fn tree_cycle(u: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}
