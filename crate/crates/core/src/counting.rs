//! Exact orders and sizes of supertoken graphs.
//!
//! `f(n, k, s)` counts placements of `k` indistinguishable tokens on `n`
//! vertices with at most `s` per vertex (the `(s+1)`-nomial coefficients);
//! `h(n, k, s)` counts the ordered version. Both are computed by
//! inclusion-exclusion over the vertices that exceed capacity. Sizes are
//! `|E(G)|` times a per-edge multiplier that does not depend on the edge.
//!
//! All functions are total over `i64` arguments: negative token counts give
//! 0, zero tokens give 1. Arithmetic is arbitrary precision throughout.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::builder::{build_with, BuildOptions};
use crate::config::{TokenMode, TokenSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;

fn to_unsigned(x: BigInt) -> BigUint {
    // inclusion-exclusion totals are counts, never negative
    debug_assert!(x.sign() != Sign::Minus, "negative count {x}");
    x.to_biguint().unwrap_or_default()
}

fn factorial(n: i64) -> BigUint {
    (2..=n.max(1) as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `n (n-1) … (n-len+1)`; zero once a factor reaches zero.
fn falling(n: i64, len: i64) -> BigUint {
    if len <= 0 {
        return BigUint::one();
    }
    if n < len {
        return BigUint::zero();
    }
    ((n - len + 1)..=n).fold(BigUint::one(), |acc, i| acc * i as u64)
}

fn pow(base: i64, exp: i64) -> BigUint {
    if exp == 0 {
        return BigUint::one();
    }
    if base <= 0 {
        return BigUint::zero();
    }
    num_traits::pow(BigUint::from(base as u64), exp as usize)
}

/// Binomial coefficient; 0 whenever `k < 0`, `n < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `k! / (t_1! ⋯ t_j! (k - Σt)!)`; 0 for a negative part or `Σt > k`.
pub fn multinomial(k: i64, parts: &[i64]) -> BigUint {
    let sum: i64 = parts.iter().sum();
    if k < 0 || parts.iter().any(|&t| t < 0) || sum > k {
        return BigUint::zero();
    }
    let denom = parts
        .iter()
        .chain(std::iter::once(&(k - sum)))
        .fold(BigUint::one(), |acc, &t| acc * factorial(t));
    factorial(k) / denom
}

/// Placements of `k` indistinguishable tokens on `n` vertices with at most
/// `s` tokens per vertex, by inclusion-exclusion on overfull vertices.
pub fn f_count(n: i64, k: i64, s: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    if k == 0 {
        return BigUint::one();
    }
    if n <= 0 || s <= 0 {
        return BigUint::zero();
    }
    let mut total = BigInt::zero();
    for i in 0..=k / (s + 1) {
        let term = BigInt::from(binomial(n, i) * binomial(n + k - 1 - i * (s + 1), n - 1));
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    to_unsigned(total)
}

/// Same value as [`f_count`], from `f(n,k,s) = Σ_{i=0}^{s} f(n-1, k-i, s)`
/// with `f(0, 0, s) = 1`.
pub fn f_count_recurrence(n: i64, k: i64, s: i64) -> BigUint {
    if k < 0 || n < 0 {
        return BigUint::from(u8::from(k == 0));
    }
    let width = k as usize + 1;
    let mut row = vec![BigUint::zero(); width];
    row[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); width];
        for (kk, slot) in next.iter_mut().enumerate() {
            for i in 0..=(s.max(0) as usize).min(kk) {
                *slot += &row[kk - i];
            }
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

/// Ordered `k`-tuples over `n` symbols using no symbol more than `s` times.
///
/// Inclusion-exclusion over the set of `j` symbols forced above capacity;
/// for each such set the inner sum runs over their exact multiplicities
/// `t_1, …, t_j ≥ s + 1` and places the remaining tokens freely on the other
/// `n - j` symbols. The `j = 0` inner sum is taken to be 1, leaving `n^k`.
pub fn h_count(n: i64, k: i64, s: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    if k == 0 {
        return BigUint::one();
    }
    if n <= 0 || s <= 0 {
        return BigUint::zero();
    }
    let mut total = BigInt::from(pow(n, k));
    for j in 1..=k / (s + 1) {
        let mut inner = BigUint::zero();
        let mut parts = Vec::with_capacity(j as usize);
        overfull_sum(n, k, s, j, &mut parts, &mut inner);
        let term = BigInt::from(binomial(n, j) * inner);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    to_unsigned(total)
}

/// Adds `multinomial(k; parts) (n - j)^(k - Σparts)` over all ordered
/// `parts` of length `j` with each part ≥ `s + 1` and sum ≤ `k`.
fn overfull_sum(n: i64, k: i64, s: i64, j: i64, parts: &mut Vec<i64>, acc: &mut BigUint) {
    let used: i64 = parts.iter().sum();
    if parts.len() as i64 == j {
        *acc += multinomial(k, parts) * pow(n - j, k - used);
        return;
    }
    let slots_left = j - parts.len() as i64 - 1;
    let mut t = s + 1;
    while used + t + slots_left * (s + 1) <= k {
        parts.push(t);
        overfull_sum(n, k, s, j, parts, acc);
        parts.pop();
        t += 1;
    }
}

/// Number of vertices of the supertoken graph on `n` base vertices.
///
/// Capacity 1 and capacity `k` use their classical closed forms (subsets,
/// multisets, partial permutations, all tuples); other capacities use
/// [`f_count`] or [`h_count`].
pub fn order_of(n: usize, spec: &TokenSpec) -> BigUint {
    let (n, k, s) = (n as i64, spec.k() as i64, spec.s() as i64);
    match (spec.mode(), s) {
        (TokenMode::Indistinguishable, 1) => binomial(n, k),
        (TokenMode::Indistinguishable, s) if s == k => binomial(n + k - 1, k),
        (TokenMode::Indistinguishable, s) => f_count(n, k, s),
        (TokenMode::Distinguishable, 1) => falling(n, k),
        (TokenMode::Distinguishable, s) if s == k => pow(n, k),
        (TokenMode::Distinguishable, s) => h_count(n, k, s),
    }
}

/// Per-edge sum for indistinguishable tokens at any capacity.
///
/// The tokens not crossing the edge `uv` put `t_u`, `t_v ≤ s - 1` tokens on
/// the endpoints. The first sum covers `t = t_u + t_v ≤ s - 1` (with `t + 1`
/// splits), the second `s ≤ t ≤ ω = min(2s - 2, k - 1)` (with `2s - 1 - t`
/// splits); the second sum is empty when `ω - s + 1 < 1`.
pub fn indist_edge_sum(n: i64, k: i64, s: i64) -> BigUint {
    let s = s.min(k);
    let omega = (2 * s - 2).min(k - 1);
    let mut total = BigUint::zero();
    for i in 1..=s {
        total += f_count(n - 2, k - i, s) * i as u64;
    }
    for j in 1..=(omega - s + 1) {
        total += f_count(n - 2, k - s - j, s) * (s - j) as u64;
    }
    total
}

/// Per-edge sum for distinguishable tokens at any capacity: `r_u`, `r_v`
/// count the other tokens on the endpoints, the moving token is one of the
/// `r_u + 1` tokens on `u`.
pub fn dist_edge_sum(n: i64, k: i64, s: i64) -> BigUint {
    let s = s.min(k);
    let mut total = BigUint::zero();
    for ru in 0..s {
        for rv in 0..s {
            if ru + rv > k - 1 {
                continue;
            }
            total += multinomial(k, &[ru + 1, rv]) * h_count(n - 2, k - ru - rv - 1, s) * (ru + 1) as u64;
        }
    }
    total
}

fn check_edge_bound(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::NoEdge { n })
    } else {
        Ok(())
    }
}

/// Supertoken edges lying over one fixed base edge, indistinguishable
/// tokens. Capacity `k` (reduced power) uses `C(n + k - 2, k - 1)`.
pub fn per_edge_multiplier_indist(n: usize, k: usize, s: usize) -> Result<BigUint> {
    check_edge_bound(n)?;
    let (n, k, s) = (n as i64, k as i64, s.min(k) as i64);
    Ok(if s == k {
        binomial(n + k - 2, k - 1)
    } else {
        indist_edge_sum(n, k, s)
    })
}

/// Supertoken edges lying over one fixed base edge, distinguishable tokens.
/// Capacity `k` (Cartesian power) uses `k n^(k-1)`.
pub fn per_edge_multiplier_dist(n: usize, k: usize, s: usize) -> Result<BigUint> {
    check_edge_bound(n)?;
    let (n, k, s) = (n as i64, k as i64, s.min(k) as i64);
    Ok(if s == k {
        pow(n, k - 1) * k as u64
    } else {
        dist_edge_sum(n, k, s)
    })
}

pub fn per_edge_multiplier(n: usize, spec: &TokenSpec) -> Result<BigUint> {
    match spec.mode() {
        TokenMode::Indistinguishable => per_edge_multiplier_indist(n, spec.k(), spec.s()),
        TokenMode::Distinguishable => per_edge_multiplier_dist(n, spec.k(), spec.s()),
    }
}

/// Number of edges of the supertoken graph of `g`.
pub fn size_of(g: &Graph, spec: &TokenSpec) -> BigUint {
    if g.m() == 0 {
        return BigUint::zero();
    }
    // m > 0 implies n >= 2
    per_edge_multiplier(g.n(), spec).unwrap_or_default() * g.m()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub order_formula: BigUint,
    pub order_enumerated: Option<BigUint>,
    pub size_formula: BigUint,
    pub size_enumerated: Option<BigUint>,
    /// Factor multiplying `|E(G)|`; 0 for base graphs on fewer than 2 vertices.
    pub per_edge_multiplier: BigUint,
    /// Set when enumeration was requested but skipped.
    pub notice: Option<String>,
}

impl CountReport {
    /// Formula and enumeration agree wherever both are present.
    pub fn consistent(&self) -> bool {
        self.order_enumerated.as_ref().is_none_or(|o| *o == self.order_formula)
            && self.size_enumerated.as_ref().is_none_or(|s| *s == self.size_formula)
    }
}

/// Closed-form counts, plus enumerated counts from a full build when
/// `with_enumeration` is set and the order is at most `cap`.
pub fn count_report(g: &Graph, spec: &TokenSpec, with_enumeration: bool, cap: usize) -> CountReport {
    let order_formula = order_of(g.n(), spec);
    let size_formula = size_of(g, spec);
    let per_edge = per_edge_multiplier(g.n(), spec).unwrap_or_default();
    let mut report = CountReport {
        order_formula,
        order_enumerated: None,
        size_formula,
        size_enumerated: None,
        per_edge_multiplier: per_edge,
        notice: None,
    };
    if with_enumeration {
        let opts = BuildOptions {
            cap,
            ..BuildOptions::default()
        };
        match build_with(g, spec, &opts) {
            Ok(st) => {
                report.order_enumerated = Some(BigUint::from(st.order()));
                report.size_enumerated = Some(BigUint::from(st.size()));
            }
            Err(e) => report.notice = Some(format!("enumeration skipped: {e}")),
        }
    }
    report
}
