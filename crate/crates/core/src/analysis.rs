//! Structural analysis of built graphs and explicit isomorphism witnesses.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::builder::{build, SupertokenGraph};
use crate::config::{Configuration, TokenSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Exec};

/// `|E| - |V| + c`; positive exactly when the graph has a cycle.
pub fn cycle_space_dimension(g: &Graph) -> usize {
    g.m() + g.connected_components().len() - g.n()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum ComponentClass {
    IsolatedVertex,
    /// Path on this many vertices (at least 2).
    Path(usize),
    /// Cycle on this many vertices (at least 3).
    Cycle(usize),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub order: usize,
    pub size: usize,
    pub class: ComponentClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ComponentSummary {
    pub components: Vec<Component>,
}

impl ComponentSummary {
    /// Number of components of each class.
    pub fn class_counts(&self) -> BTreeMap<ComponentClass, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.components {
            *counts.entry(c.class).or_insert(0) += 1;
        }
        counts
    }

    /// True when the graph is exactly `count` copies of one class.
    pub fn is_copies_of(&self, class: ComponentClass, count: usize) -> bool {
        self.components.len() == count && self.components.iter().all(|c| c.class == class)
    }

    pub fn total_order(&self) -> usize {
        self.components.iter().map(|c| c.order).sum()
    }

    pub fn total_size(&self) -> usize {
        self.components.iter().map(|c| c.size).sum()
    }
}

/// Components in order of their smallest vertex, classified by degree
/// profile.
pub fn component_summary(g: &Graph) -> ComponentSummary {
    let components = g
        .connected_components()
        .into_iter()
        .map(|comp| {
            let order = comp.len();
            let degree_sum: usize = comp.iter().map(|&v| g.degree(v)).sum();
            let size = degree_sum / 2;
            let max_deg = comp.iter().map(|&v| g.degree(v)).max().unwrap_or(0);
            let class = if order == 1 {
                ComponentClass::IsolatedVertex
            } else if size + 1 == order && max_deg <= 2 {
                ComponentClass::Path(order)
            } else if size == order && order >= 3 && comp.iter().all(|&v| g.degree(v) == 2) {
                ComponentClass::Cycle(order)
            } else {
                ComponentClass::Other
            };
            Component { order, size, class }
        })
        .collect();
    ComponentSummary { components }
}

/// A candidate isomorphism `a -> b` and the outcome of checking it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismWitness {
    /// `mapping[i]` is the image of vertex `i` of the first graph.
    pub mapping: Vec<usize>,
    pub check_result: bool,
    /// An edge of the first graph whose image is not an edge.
    pub failure_edge: Option<(usize, usize)>,
}

/// Checks that `mapping` is an isomorphism `a -> b`: a bijection with equal
/// edge counts that carries every edge to an edge (which forces non-edges
/// to non-edges).
pub fn check_mapping(a: &Graph, b: &Graph, mapping: Vec<usize>) -> IsomorphismWitness {
    check_mapping_with(a, b, mapping, Exec::default())
}

pub fn check_mapping_with(a: &Graph, b: &Graph, mapping: Vec<usize>, exec: Exec) -> IsomorphismWitness {
    let mut hit = vec![false; b.n()];
    let bijective = a.n() == b.n()
        && mapping.len() == a.n()
        && mapping
            .iter()
            .all(|&x| x < b.n() && !std::mem::replace(&mut hit[x], true));
    if !bijective || a.m() != b.m() {
        return IsomorphismWitness {
            mapping,
            check_result: false,
            failure_edge: None,
        };
    }
    let edges: Vec<(usize, usize)> = a.edges().collect();
    let bad = par::position_first(exec, edges.len(), |i| {
        let (u, v) = edges[i];
        !b.has_edge(mapping[u], mapping[v])
    });
    IsomorphismWitness {
        check_result: bad.is_none(),
        failure_edge: bad.map(|i| edges[i]),
        mapping,
    }
}

/// Token positions (0-based, increasing) on `P_n` encoded by the gap vector
/// `alpha` of length `k + 1`: `alpha[0]` free vertices before the first token,
/// `alpha[j]` between tokens `j` and `j + 1`, `alpha[k]` after the last.
pub fn path_gap_decode(alpha: &[usize]) -> Vec<usize> {
    let k = alpha.len().saturating_sub(1);
    let mut out = Vec::with_capacity(k);
    let mut pos = 0;
    for (j, &gap) in alpha.iter().take(k).enumerate() {
        pos += gap;
        out.push(pos + j);
    }
    out
}

/// Inverse of [`path_gap_decode`] for `positions` on a path of `n` vertices.
pub fn path_gap_encode(positions: &[usize], n: usize) -> Vec<usize> {
    let mut alpha = Vec::with_capacity(positions.len() + 1);
    let mut next_free = 0;
    for &p in positions {
        alpha.push(p - next_free);
        next_free = p + 1;
    }
    alpha.push(n - next_free);
    alpha
}

/// Witness for `F_k(P_n) ≅ F_{n-k}^{n-k}(P_{k+1})`: a `k`-subset of the
/// path is sent to its gap vector, read as the occupancy of `n - k`
/// tokens on `P_{k+1}`. Mapping indices run from the token graph to the
/// reduced power.
pub fn verify_path_token_isomorphism(n: usize, k: usize) -> Result<IsomorphismWitness> {
    if k == 0 || k >= n {
        return Err(Error::Precondition(format!(
            "path isomorphism needs 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    let a = build(&Graph::path(n)?, &TokenSpec::indist(k, 1)?)?;
    let b = build(&Graph::path(k + 1)?, &TokenSpec::indist(n - k, n - k)?)?;
    let mapping = a
        .vertices
        .iter()
        .map(|c| {
            let alpha = path_gap_encode(c.entries(), n);
            debug_assert_eq!(path_gap_decode(&alpha), c.entries());
            lookup(&b, &Configuration::from_occupancy(&alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(check_mapping(&a.graph, &b.graph, mapping))
}

fn lookup(st: &SupertokenGraph, c: &Configuration) -> Result<usize> {
    st.index_of(c.entries()).ok_or_else(|| Error::InvalidConfiguration {
        entries: c.entries().to_vec(),
        reason: "image is not a vertex of the target graph",
    })
}

/// Witness for `F_k(G) ≅ F_{n-k}(G)` by complementing each `k`-subset.
pub fn verify_complement_isomorphism(g: &Graph, k: usize) -> Result<IsomorphismWitness> {
    let n = g.n();
    if k == 0 || k >= n {
        return Err(Error::Precondition(format!(
            "complement isomorphism needs 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    let a = build(g, &TokenSpec::indist(k, 1)?)?;
    let b = build(g, &TokenSpec::indist(n - k, 1)?)?;
    let mapping = a
        .vertices
        .iter()
        .map(|c| {
            let occ: Vec<usize> = c.occupancy(n).into_iter().map(|x| 1 - x).collect();
            lookup(&b, &Configuration::from_occupancy(&occ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(check_mapping(&a.graph, &b.graph, mapping))
}

/// Index of the tuple `t` in the `k`-th Cartesian power: `Σ t_i n^(k-1-i)`.
pub fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

/// The `k`-fold Cartesian power of `g`, built directly on tuple indices.
pub fn cartesian_power(g: &Graph, k: usize, cap: usize) -> Result<Graph> {
    let n = g.n();
    let order = (n as u128)
        .checked_pow(k as u32)
        .filter(|&o| o <= cap as u128)
        .ok_or_else(|| Error::TooLarge {
            order: num_traits::pow(num_bigint::BigUint::from(n), k).to_string(),
            cap,
        })? as usize;
    if k == 0 {
        return Err(Error::InvalidTokenSpec { k, s: k });
    }
    let adj = par::map_range(Exec::default(), order, |x| {
        let mut row = Vec::new();
        let mut place = 1;
        let mut rest = x;
        for _ in 0..k {
            let digit = rest % n;
            rest /= n;
            for &w in g.neighbors(digit) {
                row.push(x - digit * place + w * place);
            }
            place *= n;
        }
        row.sort_unstable();
        row
    });
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Witness that the distinguishable supertoken graph with capacity `k` is
/// the Cartesian power: each tuple maps to itself.
pub fn verify_cartesian_isomorphism(g: &Graph, k: usize, cap: usize) -> Result<IsomorphismWitness> {
    let power = cartesian_power(g, k, cap)?;
    let st = crate::builder::build_with(
        g,
        &TokenSpec::dist(k, k)?,
        &crate::builder::BuildOptions {
            cap,
            ..Default::default()
        },
    )?;
    let mapping = st.vertices.iter().map(|c| tuple_index(c.entries(), g.n())).collect();
    Ok(check_mapping(&st.graph, &power, mapping))
}

pub const SMALL_GRAPH_CAP: usize = 64;

/// Exact isomorphism test for graphs with at most [`SMALL_GRAPH_CAP`]
/// vertices. Returns a verified mapping `a -> b` when one exists.
pub fn are_isomorphic_small(a: &Graph, b: &Graph) -> Result<Option<Vec<usize>>> {
    for g in [a, b] {
        if g.n() > SMALL_GRAPH_CAP {
            return Err(Error::TooLarge {
                order: g.n().to_string(),
                cap: SMALL_GRAPH_CAP,
            });
        }
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if a.n() != b.n() || a.m() != b.m() || da != db {
        return Ok(None);
    }
    let colours = (vec![0; a.n()], vec![0; b.n()]);
    Ok(search(a, b, colours))
}

type Colouring = (Vec<usize>, Vec<usize>);

/// Joint colour refinement of both graphs. None when the colour class
/// sizes differ between the graphs.
fn refine(a: &Graph, b: &Graph, (mut ca, mut cb): Colouring) -> Option<Colouring> {
    let mut classes = 0;
    loop {
        let signature = |g: &Graph, c: &[usize], v: usize| {
            let mut around: Vec<usize> = g.neighbors(v).iter().map(|&w| c[w]).collect();
            around.sort_unstable();
            (c[v], around)
        };
        let sa: Vec<_> = (0..a.n()).map(|v| signature(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.n()).map(|v| signature(b, &cb, v)).collect();
        let mut ids = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        ca = sa.iter().map(|s| ids[s]).collect();
        cb = sb.iter().map(|s| ids[s]).collect();
        let mut count = vec![0isize; ids.len()];
        for &c in &ca {
            count[c] += 1;
        }
        for &c in &cb {
            count[c] -= 1;
        }
        if count.iter().any(|&x| x != 0) {
            return None;
        }
        if ids.len() == classes {
            return Some((ca, cb));
        }
        classes = ids.len();
    }
}

fn search(a: &Graph, b: &Graph, colours: Colouring) -> Option<Vec<usize>> {
    let (ca, cb) = refine(a, b, colours)?;
    let mut size = BTreeMap::new();
    for &c in &ca {
        *size.entry(c).or_insert(0) += 1;
    }
    // individualize a vertex from the smallest non-singleton class
    let target = size
        .iter()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(_, &s)| s)
        .map(|(&c, _)| c);
    let Some(target) = target else {
        let mut mapping = vec![0; a.n()];
        for (v, &c) in ca.iter().enumerate() {
            mapping[v] = cb.iter().position(|&d| d == c).expect("class sizes match");
        }
        return check_mapping_with(a, b, mapping.clone(), Exec::Sequential)
            .check_result
            .then_some(mapping);
    };
    let x = ca.iter().position(|&c| c == target).expect("class is non-empty");
    let fresh = ca.len() + cb.len() + 1;
    for y in (0..b.n()).filter(|&y| cb[y] == target) {
        let (mut na, mut nb) = (ca.clone(), cb.clone());
        na[x] = fresh;
        nb[y] = fresh;
        if let Some(m) = search(a, b, (na, nb)) {
            return Some(m);
        }
    }
    None
}
