//! Structural results about supertoken graphs as executable checks.
//!
//! Every check returns a [`VerificationOutcome`]. Parameters outside a
//! result's hypotheses give [`Status::Inapplicable`] together with the
//! observed values; a failure always carries a [`Witness`] that can be
//! re-validated against the graph it was found in.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    check_mapping, component_summary, cycle_space_dimension, verify_cartesian_isomorphism,
    verify_complement_isomorphism, verify_path_token_isomorphism, ComponentClass, ComponentSummary, IsomorphismWitness,
};
use crate::builder::{build_with, neighbors, BuildOptions, SupertokenGraph};
use crate::config::{first_config, is_valid_config, next_config, Configuration, TokenMode, TokenSpec};
use crate::counting::{binomial, order_of, size_of};
use crate::graph::{Bipartiteness, Graph};
use crate::io::{Family, NamedGraph};
use crate::par::{self, Exec};
use crate::report::Count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub graph: String,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<TokenMode>,
}

impl Params {
    fn of(name: &str, spec: &TokenSpec) -> Self {
        Params {
            graph: name.to_string(),
            k: spec.k(),
            s: Some(spec.s()),
            mode: Some(spec.mode()),
        }
    }
}

/// Evidence for a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The graph has no cycle.
    Acyclic {
        cycle_space_dimension: usize,
    },
    /// No path joins the two configurations.
    Disconnected {
        from: Configuration,
        unreachable: Configuration,
    },
    /// A closed walk of odd length.
    OddCycle {
        cycle: Vec<Configuration>,
    },
    /// An edge whose endpoints have centre counts of equal parity.
    ParityBreak {
        a: Configuration,
        b: Configuration,
    },
    /// The component structure that was found instead of the expected one.
    Components {
        summary: ComponentSummary,
    },
    CountMismatch {
        order_formula: Count,
        order_enumerated: Count,
        size_formula: Count,
        size_enumerated: Count,
    },
    /// A vertex of the capacity-`s` graph missing at capacity `s + 1`.
    MissingVertex {
        s: usize,
        configuration: Configuration,
    },
    /// An edge of the capacity-`s` graph missing at capacity `s + 1`.
    MissingEdge {
        s: usize,
        a: Configuration,
        b: Configuration,
    },
    Mapping {
        witness: IsomorphismWitness,
    },
}

impl Witness {
    /// Re-validates the witness against the supertoken graph it refers to
    /// (for chain witnesses, the lower-capacity graph). Mapping witnesses
    /// involve two graphs and are re-checked by [`recheck_failure`].
    pub fn recheck_on(&self, st: &SupertokenGraph) -> bool {
        let idx = |c: &Configuration| st.index_of(c.entries());
        match self {
            Witness::Acyclic {
                cycle_space_dimension: d,
            } => *d == 0 && cycle_space_dimension(&st.graph) == 0,
            Witness::Disconnected { from, unreachable } => match (idx(from), idx(unreachable)) {
                (Some(a), Some(b)) => st.graph.bfs_distances(a)[b].is_none(),
                _ => false,
            },
            Witness::OddCycle { cycle } => {
                let ids: Option<Vec<usize>> = cycle.iter().map(idx).collect();
                ids.is_some_and(|ids| {
                    ids.len() % 2 == 1
                        && ids.len() >= 3
                        && (0..ids.len()).all(|i| st.graph.has_edge(ids[i], ids[(i + 1) % ids.len()]))
                })
            }
            Witness::ParityBreak { a, b } => match (idx(a), idx(b)) {
                (Some(x), Some(y)) => st.graph.has_edge(x, y) && centre_count(a) % 2 == centre_count(b) % 2,
                _ => false,
            },
            Witness::Components { summary } => component_summary(&st.graph) == *summary,
            Witness::CountMismatch {
                order_formula,
                order_enumerated,
                size_formula,
                size_enumerated,
            } => {
                order_formula.0 == order_of(st.base.n(), &st.spec)
                    && size_formula.0 == size_of(&st.base, &st.spec)
                    && order_enumerated.0 == st.order().into()
                    && size_enumerated.0 == st.size().into()
                    && (order_formula != order_enumerated || size_formula != size_enumerated)
            }
            Witness::MissingVertex { s, configuration } => {
                idx(configuration).is_some()
                    && st.spec.s() == *s
                    && st
                        .spec
                        .with_capacity(s + 1)
                        .is_ok_and(|hi| !is_valid_config(configuration.entries(), st.base.n(), &hi))
            }
            Witness::MissingEdge { s, a, b } => {
                let adjacent = matches!((idx(a), idx(b)), (Some(x), Some(y)) if st.graph.has_edge(x, y));
                adjacent
                    && st.spec.s() == *s
                    && st
                        .spec
                        .with_capacity(s + 1)
                        .is_ok_and(|hi| neighbors(&st.base, &hi, a).is_ok_and(|row| !row.contains(b)))
            }
            Witness::Mapping { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationOutcome {
    pub theorem_id: &'static str,
    pub params: Params,
    pub status: Status,
    pub note: Option<String>,
    pub witness: Option<Witness>,
    pub observed: BTreeMap<&'static str, Value>,
}

impl Serialize for VerificationOutcome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut out = serializer.serialize_struct("VerificationOutcome", 7)?;
        out.serialize_field("theorem_id", self.theorem_id)?;
        out.serialize_field("params", &self.params)?;
        out.serialize_field("status", &self.status)?;
        out.serialize_field("passed", &self.passed())?;
        match &self.note {
            Some(note) => out.serialize_field("note", note)?,
            None => out.skip_field("note")?,
        }
        match &self.witness {
            Some(w) => out.serialize_field("witness", w)?,
            None => out.skip_field("witness")?,
        }
        out.serialize_field("observed", &self.observed)?;
        out.end()
    }
}

impl VerificationOutcome {
    fn new(theorem_id: &'static str, params: Params) -> Self {
        VerificationOutcome {
            theorem_id,
            params,
            status: Status::Inapplicable,
            note: None,
            witness: None,
            observed: BTreeMap::new(),
        }
    }

    fn inapplicable(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Inapplicable;
        self.note = Some(note.into());
        self
    }

    fn decide(mut self, ok: bool, witness: impl FnOnce() -> Witness) -> Self {
        if ok {
            self.status = Status::Pass;
        } else {
            self.status = Status::Fail;
            self.witness = Some(witness());
        }
        self
    }

    fn observe(mut self, key: &'static str, value: Value) -> Self {
        self.observed.insert(key, value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub const THEOREM_IDS: [&str; 11] = [
    "no-tree",
    "connectivity",
    "star-bipartite",
    "path-structure",
    "cycle-structure",
    "counts",
    "chain",
    "path-isomorphism",
    "complement-isomorphism",
    "cartesian-isomorphism",
    "relabeling",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Largest supertoken order that is materialized.
    pub max_order: usize,
    /// Largest order explored by implicit search for connectivity.
    pub implicit_limit: usize,
    pub exec: Exec,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_order: 20_000,
            implicit_limit: 1_000_000,
            exec: Exec::default(),
            seed: 0,
        }
    }
}

fn try_build(g: &Graph, spec: &TokenSpec, opts: &SuiteOptions) -> Option<SupertokenGraph> {
    let bopts = BuildOptions {
        cap: opts.max_order,
        exec: opts.exec,
    };
    build_with(g, spec, &bopts).ok()
}

fn too_large(order: impl std::fmt::Display, opts: &SuiteOptions) -> String {
    format!("order {order} exceeds the cap of {}", opts.max_order)
}

fn centre_count(c: &Configuration) -> usize {
    c.entries().iter().filter(|&&v| v == 0).count()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// A connected base graph on `n ≥ 4` vertices never yields a tree for
/// `2 ≤ k ≤ n/2` (indistinguishable) or `2 ≤ k ≤ n - 2` (distinguishable).
pub fn verify_no_tree(base: &NamedGraph, spec: &TokenSpec, opts: &SuiteOptions) -> VerificationOutcome {
    let g = &base.graph;
    let (n, k) = (g.n(), spec.k());
    let out = VerificationOutcome::new("no-tree", Params::of(&base.name, spec));
    let upper = match spec.mode() {
        TokenMode::Indistinguishable => n / 2,
        TokenMode::Distinguishable => n.saturating_sub(2),
    };
    let applicable = g.is_connected() && n >= 4 && (2..=upper).contains(&k);
    let Some(st) = try_build(g, spec, opts) else {
        return out.inapplicable(too_large(order_of(n, spec), opts));
    };
    let dim = cycle_space_dimension(&st.graph);
    let out = out.observe("cycle_space_dimension", json!(dim));
    if !applicable {
        return out.inapplicable("outside the hypotheses (connected base, n >= 4, token range)");
    }
    out.decide(dim >= 1, || Witness::Acyclic {
        cycle_space_dimension: dim,
    })
}

/// Connected for `k < Δ` in both modes, and for `Δ ≤ k ≤ n` with
/// indistinguishable tokens except at `(k, s) = (n, 1)`.
pub fn verify_connectivity(base: &NamedGraph, spec: &TokenSpec, opts: &SuiteOptions) -> VerificationOutcome {
    let g = &base.graph;
    let (n, k, s) = (g.n(), spec.k(), spec.s());
    let out = VerificationOutcome::new("connectivity", Params::of(&base.name, spec));
    if !g.is_connected() {
        return out.inapplicable("base graph is disconnected");
    }
    let delta = g.max_degree();
    let hypothesis = if k < delta {
        Ok(())
    } else if spec.mode() == TokenMode::Indistinguishable && k <= n && (k, s) == (n, 1) {
        Err("exception (k, s) = (n, 1)")
    } else if spec.mode() == TokenMode::Indistinguishable && k <= n {
        Ok(())
    } else {
        Err("outside the hypotheses (k >= max degree with distinguishable tokens, or k > n)")
    };
    let order = order_of(n, spec);
    let (connected, witness, out) = if let Some(st) = try_build(g, spec, opts) {
        let comps = st.graph.connected_components();
        let witness = (comps.len() > 1).then(|| Witness::Disconnected {
            from: st.vertices[comps[0][0]].clone(),
            unreachable: st.vertices[comps[1][0]].clone(),
        });
        (comps.len() <= 1, witness, out.observe("components", json!(comps.len())))
    } else if order.to_usize().is_some_and(|o| o <= opts.implicit_limit) {
        let (connected, witness) = implicit_connectivity(g, spec);
        (connected, witness, out.observe("implicit_search", json!(true)))
    } else {
        return out.inapplicable(format!(
            "order {order} exceeds the search limit of {}",
            opts.implicit_limit
        ));
    };
    let out = out.observe("connected", json!(connected));
    match hypothesis {
        Ok(()) => out.decide(connected, || witness.expect("disconnected graphs yield a witness")),
        Err(reason) => out.inapplicable(reason),
    }
}

/// Breadth-first search over configurations without materializing the
/// graph. Returns connectivity and, if disconnected, an unreached vertex.
fn implicit_connectivity(g: &Graph, spec: &TokenSpec) -> (bool, Option<Witness>) {
    let Some(start) = first_config(g.n(), spec) else {
        return (true, None);
    };
    let start = Configuration::new(spec.mode(), start);
    let mut seen: HashSet<Configuration> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        for next in neighbors(g, spec, &c).expect("reachable configurations are valid") {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    if order_of(g.n(), spec) == seen.len().into() {
        return (true, None);
    }
    let mut cur = start.entries().to_vec();
    while next_config(&mut cur, g.n(), spec) {
        let c = Configuration::new(spec.mode(), cur.clone());
        if !seen.contains(&c) {
            return (
                false,
                Some(Witness::Disconnected {
                    from: start,
                    unreachable: c,
                }),
            );
        }
    }
    unreachable!("fewer configurations reached than exist, yet all were seen")
}

/// Both supertoken graphs of the star with `n` leaves are bipartite for
/// `s ≤ k ≤ n`; the parity of the number of tokens on the centre is a proper
/// 2-colouring.
pub fn verify_star_bipartite(n: usize, spec: &TokenSpec, opts: &SuiteOptions) -> VerificationOutcome {
    let base = match NamedGraph::family(Family::Star, n) {
        Ok(b) => b,
        Err(e) => {
            return VerificationOutcome::new("star-bipartite", Params::of(&format!("star:{n}"), spec))
                .inapplicable(e.to_string())
        }
    };
    let out = VerificationOutcome::new("star-bipartite", Params::of(&base.name, spec));
    let Some(st) = try_build(&base.graph, spec, opts) else {
        return out.inapplicable(too_large(order_of(base.graph.n(), spec), opts));
    };
    let parity_break = st
        .config_edges()
        .find(|(a, b)| centre_count(a) % 2 == centre_count(b) % 2);
    let bip = st.graph.bipartition();
    let out = out
        .observe("bipartite", json!(bip.is_bipartite()))
        .observe("centre_parity_colouring", json!(parity_break.is_none()));
    if spec.k() > n {
        return out.inapplicable("outside the hypotheses (k > n)");
    }
    match (bip, parity_break) {
        (Bipartiteness::OddCycle { cycle }, _) => out.decide(false, || Witness::OddCycle {
            cycle: cycle.into_iter().map(|v| st.vertices[v].clone()).collect(),
        }),
        (_, Some((a, b))) => out.decide(false, || Witness::ParityBreak {
            a: a.clone(),
            b: b.clone(),
        }),
        _ => out.decide(true, || unreachable!()),
    }
}

fn structure_outcome(
    id: &'static str,
    base: NamedGraph,
    k: usize,
    opts: &SuiteOptions,
    expect: impl FnOnce(usize, &ComponentSummary, usize) -> Option<bool>,
) -> VerificationOutcome {
    let spec = match TokenSpec::dist(k, 1) {
        Ok(s) => s,
        Err(e) => {
            let params = Params {
                graph: base.name,
                k,
                s: Some(1),
                mode: Some(TokenMode::Distinguishable),
            };
            return VerificationOutcome::new(id, params).inapplicable(e.to_string());
        }
    };
    let n = base.graph.n();
    let out = VerificationOutcome::new(id, Params::of(&base.name, &spec));
    let Some(st) = try_build(&base.graph, &spec, opts) else {
        return out.inapplicable(too_large(order_of(n, &spec), opts));
    };
    let summary = component_summary(&st.graph);
    let dim = cycle_space_dimension(&st.graph);
    let out = out
        .observe("cycle_space_dimension", json!(dim))
        .observe("components", json!(summary.components.len()));
    match expect(n, &summary, dim) {
        None => out.inapplicable("outside the hypotheses"),
        Some(ok) => {
            let acyclic_expected = k + 1 >= n;
            out.decide(ok, || {
                if acyclic_expected {
                    Witness::Components { summary }
                } else {
                    Witness::Acyclic {
                        cycle_space_dimension: dim,
                    }
                }
            })
        }
    }
}

/// One-per-vertex distinguishable tokens on `P_n`: a cycle for
/// `2 ≤ k ≤ n - 2`, `(n-1)!` copies of `P_n` for `k = n - 1`, `n!` isolated
/// vertices for `k = n`.
pub fn verify_path_structure(n: usize, k: usize, opts: &SuiteOptions) -> VerificationOutcome {
    let base = match NamedGraph::family(Family::Path, n) {
        Ok(b) => b,
        Err(e) => {
            let params = Params {
                graph: format!("path:{n}"),
                k,
                s: Some(1),
                mode: Some(TokenMode::Distinguishable),
            };
            return VerificationOutcome::new("path-structure", params).inapplicable(e.to_string());
        }
    };
    structure_outcome("path-structure", base, k, opts, |n, summary, dim| {
        if k == n {
            Some(summary.is_copies_of(ComponentClass::IsolatedVertex, factorial(n)))
        } else if k + 1 == n {
            Some(summary.is_copies_of(ComponentClass::Path(n), factorial(n - 1)))
        } else if (2..=n.saturating_sub(2)).contains(&k) {
            Some(dim >= 1)
        } else {
            None
        }
    })
}

/// One-per-vertex distinguishable tokens on `C_n`: a cycle for
/// `k ≤ n - 1`, `(n-2)!` copies of `C_{n(n-1)}` for `k = n - 1`, `n!`
/// isolated vertices for `k = n`.
pub fn verify_cycle_structure(n: usize, k: usize, opts: &SuiteOptions) -> VerificationOutcome {
    let base = match NamedGraph::family(Family::Cycle, n) {
        Ok(b) => b,
        Err(e) => {
            let params = Params {
                graph: format!("cycle:{n}"),
                k,
                s: Some(1),
                mode: Some(TokenMode::Distinguishable),
            };
            return VerificationOutcome::new("cycle-structure", params).inapplicable(e.to_string());
        }
    };
    structure_outcome("cycle-structure", base, k, opts, |n, summary, dim| {
        if k == n {
            Some(summary.is_copies_of(ComponentClass::IsolatedVertex, factorial(n)))
        } else if k + 1 == n {
            Some(dim >= 1 && summary.is_copies_of(ComponentClass::Cycle(n * (n - 1)), factorial(n - 2)))
        } else if k < n {
            Some(dim >= 1)
        } else {
            None
        }
    })
}

/// Closed-form order and size against a full enumeration.
pub fn verify_counts(base: &NamedGraph, spec: &TokenSpec, opts: &SuiteOptions) -> VerificationOutcome {
    match try_build(&base.graph, spec, opts) {
        Some(st) => verify_counts_on(&base.name, &st),
        None => VerificationOutcome::new("counts", Params::of(&base.name, spec))
            .inapplicable(too_large(order_of(base.graph.n(), spec), opts)),
    }
}

/// [`verify_counts`] against an already built (possibly modified) graph.
pub fn verify_counts_on(name: &str, st: &SupertokenGraph) -> VerificationOutcome {
    let order_formula = order_of(st.base.n(), &st.spec);
    let size_formula = size_of(&st.base, &st.spec);
    let ok = order_formula == st.order().into() && size_formula == st.size().into();
    VerificationOutcome::new("counts", Params::of(name, &st.spec))
        .observe("order", json!(Count::from(st.order())))
        .observe("size", json!(Count::from(st.size())))
        .decide(ok, || Witness::CountMismatch {
            order_formula: order_formula.into(),
            order_enumerated: st.order().into(),
            size_formula: size_formula.into(),
            size_enumerated: st.size().into(),
        })
}

/// Raising the capacity from `s` to `s + 1` keeps every vertex and edge.
/// Whether each link is also induced is observed, not asserted.
pub fn verify_subset_chain(base: &NamedGraph, k: usize, mode: TokenMode, opts: &SuiteOptions) -> VerificationOutcome {
    let params = Params {
        graph: base.name.clone(),
        k,
        s: None,
        mode: Some(mode),
    };
    let out = VerificationOutcome::new("chain", params);
    let graphs: Option<Vec<SupertokenGraph>> = (1..=k)
        .map(|s| {
            TokenSpec::new(k, s, mode)
                .ok()
                .and_then(|spec| try_build(&base.graph, &spec, opts))
        })
        .collect();
    let Some(graphs) = graphs else {
        return out.inapplicable(format!("an order in the chain exceeds the cap of {}", opts.max_order));
    };
    let mut induced = Vec::new();
    let mut witness = None;
    for (lo, hi) in graphs.iter().zip(graphs.iter().skip(1)) {
        let s = lo.spec.s();
        let map: Vec<Option<usize>> = lo.vertices.iter().map(|c| hi.index_of(c.entries())).collect();
        if let Some(i) = map.iter().position(Option::is_none) {
            witness.get_or_insert(Witness::MissingVertex {
                s,
                configuration: lo.vertices[i].clone(),
            });
            continue;
        }
        let map: Vec<usize> = map.into_iter().flatten().collect();
        if let Some((a, b)) = lo.graph.edges().find(|&(a, b)| !hi.graph.has_edge(map[a], map[b])) {
            witness.get_or_insert(Witness::MissingEdge {
                s,
                a: lo.vertices[a].clone(),
                b: lo.vertices[b].clone(),
            });
            continue;
        }
        let mut inside = vec![false; hi.order()];
        for &x in &map {
            inside[x] = true;
        }
        let hi_edges_inside = hi.graph.edges().filter(|&(a, b)| inside[a] && inside[b]).count();
        induced.push(hi_edges_inside == lo.size());
    }
    out.observe("induced", json!(induced))
        .decide(witness.is_none(), || witness.clone().unwrap())
}

fn mapping_outcome(out: VerificationOutcome, w: crate::error::Result<IsomorphismWitness>) -> VerificationOutcome {
    match w {
        Ok(w) => out
            .observe("vertices", json!(w.mapping.len()))
            .decide(w.check_result, || Witness::Mapping { witness: w.clone() }),
        Err(e) => out.inapplicable(e.to_string()),
    }
}

/// The explicit gap-vector bijection between `F_k(P_n)` and the reduced
/// power of `P_{k+1}` with `n - k` tokens.
pub fn verify_path_isomorphism(n: usize, k: usize, opts: &SuiteOptions) -> VerificationOutcome {
    let params = Params {
        graph: format!("path:{n}"),
        k,
        s: Some(1),
        mode: Some(TokenMode::Indistinguishable),
    };
    let out = VerificationOutcome::new("path-isomorphism", params);
    let order = binomial(n as i64, k as i64);
    if order > opts.max_order.into() {
        return out.inapplicable(too_large(order, opts));
    }
    mapping_outcome(out, verify_path_token_isomorphism(n, k))
}

/// Complementing `k`-subsets maps `F_k(G)` onto `F_{n-k}(G)`.
pub fn verify_complement(base: &NamedGraph, k: usize, opts: &SuiteOptions) -> VerificationOutcome {
    let params = Params {
        graph: base.name.clone(),
        k,
        s: Some(1),
        mode: Some(TokenMode::Indistinguishable),
    };
    let out = VerificationOutcome::new("complement-isomorphism", params);
    let order = binomial(base.graph.n() as i64, k as i64);
    if order > opts.max_order.into() {
        return out.inapplicable(too_large(order, opts));
    }
    mapping_outcome(out, verify_complement_isomorphism(&base.graph, k))
}

/// Distinguishable tokens with capacity `k` give the `k`-th Cartesian power
/// under the identity on tuples.
pub fn verify_cartesian(base: &NamedGraph, k: usize, opts: &SuiteOptions) -> VerificationOutcome {
    let params = Params {
        graph: base.name.clone(),
        k,
        s: Some(k),
        mode: Some(TokenMode::Distinguishable),
    };
    let out = VerificationOutcome::new("cartesian-isomorphism", params);
    mapping_outcome(out, verify_cartesian_isomorphism(&base.graph, k, opts.max_order))
}

/// Relabeling the base graph by a random permutation relabels the built
/// graph accordingly: the induced map on configurations is an isomorphism.
pub fn verify_relabeling(base: &NamedGraph, spec: &TokenSpec, seed: u64, opts: &SuiteOptions) -> VerificationOutcome {
    let out = VerificationOutcome::new("relabeling", Params::of(&base.name, spec)).observe("seed", json!(seed));
    let g = &base.graph;
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let h = g.relabel(&perm).expect("a permutation of a simple graph is simple");
    let (Some(a), Some(b)) = (try_build(g, spec, opts), try_build(&h, spec, opts)) else {
        return out.inapplicable(too_large(order_of(g.n(), spec), opts));
    };
    let mapping: Vec<usize> = a
        .vertices
        .iter()
        .map(|c| {
            let image = Configuration::new(spec.mode(), c.entries().iter().map(|&v| perm[v]).collect());
            b.index_of(image.entries())
                .expect("relabeled configurations are vertices")
        })
        .collect();
    let w = check_mapping(&a.graph, &b.graph, mapping);
    out.decide(w.check_result, || Witness::Mapping { witness: w.clone() })
}

/// Re-runs the check behind a failed outcome and confirms its witness.
pub fn recheck_failure(outcome: &VerificationOutcome, base: &Graph, opts: &SuiteOptions) -> bool {
    let Some(witness) = &outcome.witness else {
        return false;
    };
    let p = &outcome.params;
    let spec = |s: usize| p.mode.and_then(|m| TokenSpec::new(p.k, s, m).ok());
    let built = |s: usize| spec(s).and_then(|sp| try_build(base, &sp, opts));
    match witness {
        Witness::Mapping { witness } => {
            let n = base.n();
            let again = match outcome.theorem_id {
                "path-isomorphism" => verify_path_token_isomorphism(n, p.k).ok(),
                "complement-isomorphism" => verify_complement_isomorphism(base, p.k).ok(),
                "cartesian-isomorphism" => verify_cartesian_isomorphism(base, p.k, opts.max_order).ok(),
                _ => None,
            };
            again.is_some_and(|w| !w.check_result && w == *witness)
        }
        Witness::MissingVertex { s, .. } | Witness::MissingEdge { s, .. } => {
            built(*s).is_some_and(|st| witness.recheck_on(&st))
        }
        _ => p.s.and_then(built).is_some_and(|st| witness.recheck_on(&st)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    NoTree,
    Connectivity,
    Bipartite,
    Path,
    Cycle,
    Counts,
    Chain,
    Isomorphisms,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::NoTree,
        Suite::Connectivity,
        Suite::Bipartite,
        Suite::Path,
        Suite::Cycle,
        Suite::Counts,
        Suite::Chain,
        Suite::Isomorphisms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NoTree => "no-tree",
            Suite::Connectivity => "connectivity",
            Suite::Bipartite => "bipartite",
            Suite::Path => "path",
            Suite::Cycle => "cycle",
            Suite::Counts => "counts",
            Suite::Chain => "chain",
            Suite::Isomorphisms => "isomorphisms",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_list(name: &str) -> crate::error::Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .map(|s| vec![s])
            .ok_or_else(|| crate::error::Error::Usage(format!("unknown suite `{name}`")))
    }
}

/// Base graphs and token ranges swept by [`run_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub graphs: Vec<NamedGraph>,
    pub k_max: usize,
}

impl Grid {
    /// Paths, cycles, stars and complete graphs with parameter up to
    /// `n_max`, and up to `k_max` tokens.
    pub fn families(n_max: usize, k_max: usize) -> Self {
        let graphs = Family::ALL
            .into_iter()
            .flat_map(|f| (f.min_param()..=n_max).map(move |n| NamedGraph::family(f, n).expect("valid family size")))
            .collect();
        Grid { graphs, k_max }
    }

    pub fn empty() -> Self {
        Grid {
            graphs: Vec::new(),
            k_max: 0,
        }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::families(6, 4)
    }
}

#[derive(Debug, Clone)]
enum Task<'a> {
    Spec(Suite, &'a NamedGraph, TokenSpec),
    Star(usize, TokenSpec),
    PathStructure(usize, usize),
    CycleStructure(usize, usize),
    Chain(&'a NamedGraph, usize, TokenMode),
    PathIso(usize, usize),
    Complement(&'a NamedGraph, usize),
    Cartesian(&'a NamedGraph, usize),
    Relabel(&'a NamedGraph, TokenSpec),
}

fn specs(k_max: usize) -> Vec<TokenSpec> {
    let mut out = Vec::new();
    for mode in [TokenMode::Indistinguishable, TokenMode::Distinguishable] {
        for k in 1..=k_max {
            for s in 1..=k {
                out.push(TokenSpec::new(k, s, mode).expect("positive k and s"));
            }
        }
    }
    out
}

fn family_param(ng: &NamedGraph, family: Family) -> Option<usize> {
    ng.name.strip_prefix(family.name())?.strip_prefix(':')?.parse().ok()
}

fn tasks<'a>(grid: &'a Grid, suites: &[Suite]) -> Vec<Task<'a>> {
    let mut out = Vec::new();
    let all_specs = specs(grid.k_max);
    for &suite in suites {
        for ng in &grid.graphs {
            let n = ng.graph.n();
            match suite {
                Suite::NoTree | Suite::Connectivity | Suite::Counts => {
                    out.extend(all_specs.iter().map(|&sp| Task::Spec(suite, ng, sp)));
                }
                Suite::Bipartite => {
                    if let Some(leaves) = family_param(ng, Family::Star) {
                        out.extend(all_specs.iter().map(|&sp| Task::Star(leaves, sp)));
                    }
                }
                Suite::Path => {
                    if let Some(p) = family_param(ng, Family::Path) {
                        out.extend((1..=p).map(|k| Task::PathStructure(p, k)));
                    }
                }
                Suite::Cycle => {
                    if let Some(c) = family_param(ng, Family::Cycle) {
                        out.extend((1..=c).map(|k| Task::CycleStructure(c, k)));
                    }
                }
                Suite::Chain => {
                    for mode in [TokenMode::Indistinguishable, TokenMode::Distinguishable] {
                        out.extend((1..=grid.k_max).map(|k| Task::Chain(ng, k, mode)));
                    }
                }
                Suite::Isomorphisms => {
                    if let Some(p) = family_param(ng, Family::Path) {
                        out.extend((1..p).map(|k| Task::PathIso(p, k)));
                    }
                    out.extend((1..n).map(|k| Task::Complement(ng, k)));
                    out.extend((1..=grid.k_max).map(|k| Task::Cartesian(ng, k)));
                    out.extend(all_specs.iter().map(|&sp| Task::Relabel(ng, sp)));
                }
            }
        }
    }
    out
}

fn run_task(task: &Task<'_>, index: usize, opts: &SuiteOptions) -> VerificationOutcome {
    match *task {
        Task::Spec(Suite::NoTree, ng, sp) => verify_no_tree(ng, &sp, opts),
        Task::Spec(Suite::Connectivity, ng, sp) => verify_connectivity(ng, &sp, opts),
        Task::Spec(_, ng, sp) => verify_counts(ng, &sp, opts),
        Task::Star(n, sp) => verify_star_bipartite(n, &sp, opts),
        Task::PathStructure(n, k) => verify_path_structure(n, k, opts),
        Task::CycleStructure(n, k) => verify_cycle_structure(n, k, opts),
        Task::Chain(ng, k, mode) => verify_subset_chain(ng, k, mode, opts),
        Task::PathIso(n, k) => verify_path_isomorphism(n, k, opts),
        Task::Complement(ng, k) => verify_complement(ng, k, opts),
        Task::Cartesian(ng, k) => verify_cartesian(ng, k, opts),
        Task::Relabel(ng, sp) => verify_relabeling(ng, &sp, opts.seed.wrapping_add(index as u64), opts),
    }
}

fn task_base(task: &Task<'_>) -> Option<Graph> {
    match *task {
        Task::Spec(_, ng, _)
        | Task::Chain(ng, ..)
        | Task::Complement(ng, _)
        | Task::Cartesian(ng, _)
        | Task::Relabel(ng, _) => Some(ng.graph.clone()),
        Task::Star(n, _) => Graph::star(n).ok(),
        Task::PathStructure(n, _) | Task::PathIso(n, _) => Graph::path(n).ok(),
        Task::CycleStructure(n, _) => Graph::cycle(n).ok(),
    }
}

/// Runs the selected suites over the grid. Grid points run in parallel;
/// outcomes come back in grid order, then every failure is re-checked and
/// its `witness_rechecked` observation recorded.
pub fn run_suite(grid: &Grid, suites: &[Suite], opts: &SuiteOptions) -> Vec<VerificationOutcome> {
    let tasks = tasks(grid, suites);
    let mut outcomes = par::map_range(opts.exec, tasks.len(), |i| run_task(&tasks[i], i, opts));
    for (task, out) in tasks.iter().zip(outcomes.iter_mut()) {
        if out.status == Status::Fail {
            let ok = task_base(task).is_some_and(|g| recheck_failure(out, &g, opts));
            out.observed.insert("witness_rechecked", json!(ok));
        }
    }
    outcomes
}
