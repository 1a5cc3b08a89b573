//! Materialized supertoken graphs and on-the-fly neighbor generation.

use num_traits::ToPrimitive;

use crate::config::{check_config, enumerate_configs_with, Configuration, TokenMode, TokenSpec};
use crate::counting::order_of;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Exec};

pub const DEFAULT_BUILD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Largest order that will be materialized.
    pub cap: usize,
    pub exec: Exec,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            cap: DEFAULT_BUILD_CAP,
            exec: Exec::default(),
        }
    }
}

/// A built supertoken graph. Vertex `i` is `vertices[i]`, the configuration
/// of rank `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupertokenGraph {
    pub base: Graph,
    pub spec: TokenSpec,
    pub vertices: Vec<Configuration>,
    pub graph: Graph,
}

impl SupertokenGraph {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.graph.m()
    }

    pub fn vertex(&self, i: usize) -> &Configuration {
        &self.vertices[i]
    }

    /// Index of the configuration with these entries, if it is a vertex.
    pub fn index_of(&self, entries: &[usize]) -> Option<usize> {
        self.vertices.binary_search_by(|c| c.entries().cmp(entries)).ok()
    }

    /// Edges as configuration pairs, first endpoint of smaller index.
    pub fn config_edges(&self) -> impl Iterator<Item = (&Configuration, &Configuration)> + '_ {
        self.graph.edges().map(|(a, b)| (&self.vertices[a], &self.vertices[b]))
    }
}

pub fn build(g: &Graph, spec: &TokenSpec) -> Result<SupertokenGraph> {
    build_with(g, spec, &BuildOptions::default())
}

pub fn build_with(g: &Graph, spec: &TokenSpec, opts: &BuildOptions) -> Result<SupertokenGraph> {
    let order = order_of(g.n(), spec);
    match order.to_usize() {
        Some(o) if o <= opts.cap => {}
        _ => {
            return Err(Error::TooLarge {
                order: order.to_string(),
                cap: opts.cap,
            })
        }
    }
    let vertices = enumerate_configs_with(g.n(), spec, opts.exec);
    let index = |entries: &[usize]| {
        vertices
            .binary_search_by(|c| c.entries().cmp(entries))
            .expect("move targets are valid configurations")
    };
    let adj = par::map_slice(opts.exec, &vertices, |c| {
        let mut row: Vec<usize> = moves(g, spec, c.entries()).iter().map(|t| index(t)).collect();
        row.sort_unstable();
        row
    });
    Ok(SupertokenGraph {
        base: g.clone(),
        spec: *spec,
        vertices,
        graph: Graph::from_sorted_adjacency(adj),
    })
}

/// Entry vectors one token move away from `entries`, sorted and deduplicated.
fn moves(g: &Graph, spec: &TokenSpec, entries: &[usize]) -> Vec<Vec<usize>> {
    let mut occ = vec![0usize; g.n()];
    for &v in entries {
        occ[v] += 1;
    }
    let mut out = Vec::new();
    for (i, &u) in entries.iter().enumerate() {
        // equal entries of a multiset give the same moves
        if spec.mode() == TokenMode::Indistinguishable && i > 0 && entries[i - 1] == u {
            continue;
        }
        for &w in g.neighbors(u) {
            if occ[w] >= spec.s() {
                continue;
            }
            let mut next = entries.to_vec();
            next[i] = w;
            if spec.mode() == TokenMode::Indistinguishable {
                next.sort_unstable();
            }
            out.push(next);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Configurations reachable from `c` by one token move, in lexicographic
/// order. Works for any order; nothing is materialized.
pub fn neighbors(g: &Graph, spec: &TokenSpec, c: &Configuration) -> Result<Vec<Configuration>> {
    check_config(c, g.n(), spec)?;
    Ok(moves(g, spec, c.entries())
        .into_iter()
        .map(|e| Configuration::new(spec.mode(), e))
        .collect())
}

/// The base-graph move `(from, to)` turning `a` into `b`, if they differ by
/// exactly one token move (adjacency in the base graph is not checked).
pub fn token_move(a: &Configuration, b: &Configuration) -> Option<(usize, usize)> {
    let (x, y) = (a.entries(), b.entries());
    if a.mode() != b.mode() || x.len() != y.len() {
        return None;
    }
    match a.mode() {
        TokenMode::Distinguishable => {
            let mut diff = x.iter().zip(y).filter(|(p, q)| p != q);
            let first = diff.next()?;
            diff.next().is_none().then_some((*first.0, *first.1))
        }
        TokenMode::Indistinguishable => {
            let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
            let (mut i, mut j) = (0, 0);
            while i < x.len() && j < y.len() {
                if x[i] == y[j] {
                    i += 1;
                    j += 1;
                } else if x[i] < y[j] {
                    only_a.push(x[i]);
                    i += 1;
                } else {
                    only_b.push(y[j]);
                    j += 1;
                }
            }
            only_a.extend_from_slice(&x[i..]);
            only_b.extend_from_slice(&y[j..]);
            match (only_a.as_slice(), only_b.as_slice()) {
                ([p], [q]) => Some((*p, *q)),
                _ => None,
            }
        }
    }
}

/// Supertoken edges whose token move crosses the base edge `{u, v}`, as
/// vertex-index pairs oriented so the first configuration has the moving
/// token on `u`. Sorted by that first index.
pub fn edges_over_base_edge(st: &SupertokenGraph, u: usize, v: usize) -> Result<Vec<(usize, usize)>> {
    if u >= st.base.n() || v >= st.base.n() || !st.base.has_edge(u, v) {
        return Err(Error::NotAnEdge { u, v });
    }
    let mut out = Vec::new();
    for a in 0..st.order() {
        for &b in st.graph.neighbors(a) {
            if token_move(&st.vertices[a], &st.vertices[b]) == Some((u, v)) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::enumerate_configs;
    use crate::counting::{per_edge_multiplier, size_of};

    fn dist(e: &[usize]) -> Configuration {
        Configuration::distinguishable(e.to_vec())
    }

    #[test]
    fn small_examples() {
        let c4 = Graph::cycle(4).unwrap();
        let st = build(&c4, &TokenSpec::indist(2, 1).unwrap()).unwrap();
        assert_eq!((st.order(), st.size()), (6, 8));
        let st = build(&c4, &TokenSpec::dist(2, 2).unwrap()).unwrap();
        assert_eq!((st.order(), st.size()), (16, 32));
        let st = build(&c4, &TokenSpec::indist(4, 3).unwrap()).unwrap();
        assert_eq!((st.order(), st.size()), (31, 72));
    }

    #[test]
    fn neighbor_rows() {
        let c4 = Graph::cycle(4).unwrap();
        let spec = TokenSpec::dist(2, 2).unwrap();
        let got = neighbors(&c4, &spec, &dist(&[0, 0])).unwrap();
        assert_eq!(got, vec![dist(&[0, 1]), dist(&[0, 3]), dist(&[1, 0]), dist(&[3, 0])]);

        let p4 = Graph::path(4).unwrap();
        let spec = TokenSpec::dist(3, 1).unwrap();
        assert_eq!(
            neighbors(&p4, &spec, &dist(&[0, 1, 2])).unwrap(),
            vec![dist(&[0, 1, 3])]
        );

        let k1 = Graph::empty(1);
        let spec = TokenSpec::indist(2, 2).unwrap();
        let c = Configuration::indistinguishable(vec![0, 0]);
        assert!(neighbors(&k1, &spec, &c).unwrap().is_empty());
        assert!(neighbors(&k1, &spec, &Configuration::indistinguishable(vec![0, 1])).is_err());
    }

    #[test]
    fn rows_match_neighbors() {
        let g = Graph::star(3).unwrap();
        for spec in [TokenSpec::indist(3, 2).unwrap(), TokenSpec::dist(3, 2).unwrap()] {
            let st = build(&g, &spec).unwrap();
            assert_eq!(st.vertices, enumerate_configs(g.n(), &spec));
            for (i, c) in st.vertices.iter().enumerate() {
                let row: Vec<_> = st.graph.neighbors(i).iter().map(|&j| st.vertices[j].clone()).collect();
                assert_eq!(row, neighbors(&g, &spec, c).unwrap());
            }
        }
    }

    #[test]
    fn sequential_equals_parallel() {
        let g = Graph::complete(5).unwrap();
        let spec = TokenSpec::dist(5, 3).unwrap();
        let par = build_with(&g, &spec, &BuildOptions::default()).unwrap();
        let seq = build_with(
            &g,
            &spec,
            &BuildOptions {
                exec: Exec::Sequential,
                ..BuildOptions::default()
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::complete(6).unwrap();
        let opts = BuildOptions {
            cap: 100,
            ..BuildOptions::default()
        };
        let err = build_with(&g, &TokenSpec::dist(3, 3).unwrap(), &opts).unwrap_err();
        assert_eq!(
            err,
            Error::TooLarge {
                order: "216".into(),
                cap: 100
            }
        );
    }

    #[test]
    fn full_token_count_is_a_single_vertex() {
        for n in 1..=6 {
            let g = Graph::path(n).unwrap();
            let st = build(&g, &TokenSpec::indist(n, 1).unwrap()).unwrap();
            assert_eq!((st.order(), st.size()), (1, 0));
        }
    }

    #[test]
    fn edges_are_single_moves_over_base_edges() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        for mode in [TokenMode::Indistinguishable, TokenMode::Distinguishable] {
            for k in 1..=4 {
                for s in 1..=k {
                    let spec = TokenSpec::new(k, s, mode).unwrap();
                    let st = build(&g, &spec).unwrap();
                    for (a, b) in st.config_edges() {
                        let (p, q) = token_move(a, b).expect("edge is one move");
                        assert!(g.has_edge(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn per_edge_counts_are_uniform() {
        let graphs = [
            Graph::path(5).unwrap(),
            Graph::star(4).unwrap(),
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap(),
        ];
        for g in &graphs {
            for mode in [TokenMode::Indistinguishable, TokenMode::Distinguishable] {
                for k in 1..=4 {
                    for s in 1..=k {
                        let spec = TokenSpec::new(k, s, mode).unwrap();
                        let st = build(g, &spec).unwrap();
                        let want = per_edge_multiplier(g.n(), &spec).unwrap();
                        let mut union = Vec::new();
                        for (u, v) in g.edges() {
                            let mut pairs = edges_over_base_edge(&st, u, v).unwrap();
                            pairs.extend(edges_over_base_edge(&st, v, u).unwrap());
                            assert_eq!(want, (pairs.len() / 2).into(), "{spec} edge {u}{v}");
                            assert_eq!(edges_over_base_edge(&st, u, v).unwrap().len() * 2, pairs.len());
                            union.extend(pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))));
                        }
                        union.sort_unstable();
                        union.dedup();
                        assert_eq!(union, st.graph.edges().collect::<Vec<_>>());
                        assert_eq!(size_of(g, &spec), st.size().into());
                    }
                }
            }
        }
    }

    #[test]
    fn cartesian_degree_law() {
        let g = Graph::star(3).unwrap();
        let spec = TokenSpec::dist(3, 3).unwrap();
        let st = build(&g, &spec).unwrap();
        for (i, c) in st.vertices.iter().enumerate() {
            let want: usize = c.entries().iter().map(|&v| g.degree(v)).sum();
            assert_eq!(st.graph.degree(i), want);
        }
    }

    #[test]
    fn capacity_chain_is_nested() {
        let g = Graph::cycle(4).unwrap();
        for mode in [TokenMode::Indistinguishable, TokenMode::Distinguishable] {
            for s in 1..3 {
                let lo = build(&g, &TokenSpec::new(3, s, mode).unwrap()).unwrap();
                let hi = build(&g, &TokenSpec::new(3, s + 1, mode).unwrap()).unwrap();
                for (a, b) in lo.config_edges() {
                    let (i, j) = (hi.index_of(a.entries()).unwrap(), hi.index_of(b.entries()).unwrap());
                    assert!(hi.graph.has_edge(i, j));
                }
            }
        }
    }

    #[test]
    fn non_edge_is_rejected() {
        let st = build(&Graph::path(3).unwrap(), &TokenSpec::indist(1, 1).unwrap()).unwrap();
        assert_eq!(edges_over_base_edge(&st, 0, 2), Err(Error::NotAnEdge { u: 0, v: 2 }));
        assert_eq!(edges_over_base_edge(&st, 0, 1).unwrap(), vec![(0, 1)]);
    }
}
