//! Token configurations: the vertex sets of supertoken graphs.
//!
//! A configuration of `k` indistinguishable tokens is stored as its sorted
//! entry vector (the canonical multiset form); a configuration of
//! distinguishable tokens is the ordered tuple whose `i`-th entry is the
//! vertex holding token `i`. Every vertex may hold at most `s` tokens.
//!
//! Enumeration order is lexicographic on the entry vector, and this order is
//! the vertex indexing of every built graph. Ranking uses a completion-count
//! table computed by dynamic programming, independent of the closed forms in
//! [`crate::counting`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenMode {
    Indistinguishable,
    Distinguishable,
}

impl TokenMode {
    pub fn short_name(self) -> &'static str {
        match self {
            TokenMode::Indistinguishable => "indist",
            TokenMode::Distinguishable => "dist",
        }
    }
}

impl fmt::Display for TokenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for TokenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indist" => Ok(TokenMode::Indistinguishable),
            "dist" => Ok(TokenMode::Distinguishable),
            other => Err(Error::Usage(format!(
                "unknown token mode `{other}` (expected `indist` or `dist`)"
            ))),
        }
    }
}

/// Token count `k`, capacity `s` and token mode. A capacity above `k` can
/// never bind, so it is clamped to `k` on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TokenSpec {
    k: usize,
    s: usize,
    mode: TokenMode,
}

impl TokenSpec {
    pub fn new(k: usize, s: usize, mode: TokenMode) -> Result<Self> {
        if k == 0 || s == 0 {
            return Err(Error::InvalidTokenSpec { k, s });
        }
        Ok(TokenSpec { k, s: s.min(k), mode })
    }

    pub fn indist(k: usize, s: usize) -> Result<Self> {
        Self::new(k, s, TokenMode::Indistinguishable)
    }

    pub fn dist(k: usize, s: usize) -> Result<Self> {
        Self::new(k, s, TokenMode::Distinguishable)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    /// Same tokens with a different capacity.
    pub fn with_capacity(&self, s: usize) -> Result<Self> {
        Self::new(self.k, s, self.mode)
    }
}

impl fmt::Display for TokenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} s={} {}", self.k, self.s, self.mode)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    mode: TokenMode,
    entries: Vec<usize>,
}

impl Configuration {
    /// Multiset configuration; entries are sorted into canonical form.
    pub fn indistinguishable(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        Configuration {
            mode: TokenMode::Indistinguishable,
            entries,
        }
    }

    /// Ordered configuration; entry `i` is the vertex holding token `i`.
    pub fn distinguishable(entries: Vec<usize>) -> Self {
        Configuration {
            mode: TokenMode::Distinguishable,
            entries,
        }
    }

    pub fn new(mode: TokenMode, entries: Vec<usize>) -> Self {
        match mode {
            TokenMode::Indistinguishable => Self::indistinguishable(entries),
            TokenMode::Distinguishable => Self::distinguishable(entries),
        }
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// Number of tokens on each of the `n` base vertices.
    pub fn occupancy(&self, n: usize) -> Vec<usize> {
        let mut occ = vec![0; n];
        for &v in &self.entries {
            occ[v] += 1;
        }
        occ
    }

    /// Multiset configuration with `occupancy[v]` tokens on vertex `v`.
    pub fn from_occupancy(occupancy: &[usize]) -> Self {
        let entries = occupancy
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n(v, c))
            .collect();
        Configuration {
            mode: TokenMode::Indistinguishable,
            entries,
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.mode {
            TokenMode::Indistinguishable => ('{', '}'),
            TokenMode::Distinguishable => ('(', ')'),
        };
        write!(f, "{open}")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "{close}")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses `(1,2,4)` as a tuple and `{0,2,2}` as a multiset.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Usage(format!("malformed configuration `{s}`"));
        let mode = match (s.chars().next(), s.chars().last()) {
            (Some('('), Some(')')) => TokenMode::Distinguishable,
            (Some('{'), Some('}')) => TokenMode::Indistinguishable,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let entries = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Configuration::new(mode, entries))
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Serialize for TokenMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.short_name())
    }
}

/// True when `entries` is a configuration for `n` vertices under `spec`:
/// right length, entries in range, sorted in indistinguishable mode, and no
/// vertex above capacity.
pub fn is_valid_config(entries: &[usize], n: usize, spec: &TokenSpec) -> bool {
    validate(entries, n, spec).is_ok()
}

fn validate(entries: &[usize], n: usize, spec: &TokenSpec) -> Result<()> {
    let fail = |reason| {
        Err(Error::InvalidConfiguration {
            entries: entries.to_vec(),
            reason,
        })
    };
    if entries.len() != spec.k {
        return fail("wrong number of tokens");
    }
    if entries.iter().any(|&v| v >= n) {
        return fail("entry out of range");
    }
    if spec.mode == TokenMode::Indistinguishable && entries.windows(2).any(|w| w[0] > w[1]) {
        return fail("multiset entries must be sorted");
    }
    let mut occ = vec![0usize; n];
    for &v in entries {
        occ[v] += 1;
        if occ[v] > spec.s {
            return fail("capacity exceeded");
        }
    }
    Ok(())
}

/// Checks `c` against `(n, spec)` including its mode.
pub fn check_config(c: &Configuration, n: usize, spec: &TokenSpec) -> Result<()> {
    if c.mode != spec.mode {
        return Err(Error::ModeMismatch);
    }
    validate(&c.entries, n, spec)
}

/// Multiplicity-wise `|mult_a(v) - mult_b(v)|`, as a sorted multiset.
pub fn multiset_symmetric_difference(a: &Configuration, b: &Configuration) -> Result<Vec<usize>> {
    if a.mode != TokenMode::Indistinguishable || b.mode != TokenMode::Indistinguishable || a.k() != b.k() {
        return Err(Error::ModeMismatch);
    }
    let (x, y) = (&a.entries, &b.entries);
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p == q => {
                i += 1;
                j += 1;
            }
            (Some(&p), Some(&q)) if p < q => {
                out.push(p);
                i += 1;
            }
            (Some(&p), None) => {
                out.push(p);
                i += 1;
            }
            (_, Some(&q)) => {
                out.push(q);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(out)
}

/// Number of ways to place `r` tokens given remaining capacities `caps`:
/// multisets in indistinguishable mode, sequences in distinguishable mode.
pub(crate) fn count_completions(caps: &[usize], r: usize, mode: TokenMode) -> BigUint {
    let mut dp = vec![BigUint::zero(); r + 1];
    dp[0] = BigUint::from(1u8);
    // binomials C(j, c) for the distinguishable interleaving count
    let choose = pascal(r);
    for &cap in caps {
        let mut next = vec![BigUint::zero(); r + 1];
        for (j, ways) in dp.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            for c in 0..=cap.min(r - j) {
                match mode {
                    TokenMode::Indistinguishable => next[j + c] += ways,
                    TokenMode::Distinguishable => next[j + c] += ways * &choose[j + c][c],
                }
            }
        }
        dp = next;
    }
    dp.swap_remove(r)
}

fn pascal(r: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let mut row = vec![BigUint::from(1u8); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Number of configurations, by exhaustive-free DP.
pub fn config_count(n: usize, spec: &TokenSpec) -> BigUint {
    count_completions(&vec![spec.s; n], spec.k, spec.mode)
}

/// Records a token on `v`; in multiset mode later entries may not go below `v`.
fn take(caps: &mut [usize], v: usize, mode: TokenMode) {
    caps[v] -= 1;
    if mode == TokenMode::Indistinguishable {
        caps[..v].iter_mut().for_each(|c| *c = 0);
    }
}

/// Position of `c` in the lexicographic enumeration.
pub fn config_rank(c: &Configuration, n: usize, spec: &TokenSpec) -> Result<BigUint> {
    check_config(c, n, spec)?;
    let mut caps = vec![spec.s; n];
    let mut rank = BigUint::zero();
    for (i, &entry) in c.entries.iter().enumerate() {
        let rest = spec.k - i - 1;
        for v in 0..entry {
            if caps[v] == 0 {
                continue;
            }
            let mut trial = caps.clone();
            take(&mut trial, v, spec.mode);
            rank += count_completions(&trial, rest, spec.mode);
        }
        take(&mut caps, entry, spec.mode);
    }
    Ok(rank)
}

/// Configuration at position `index` of the lexicographic enumeration.
pub fn config_unrank(index: &BigUint, n: usize, spec: &TokenSpec) -> Result<Configuration> {
    let order = config_count(n, spec);
    if *index >= order {
        return Err(Error::IndexOutOfRange {
            index: index.to_string(),
            order: order.to_string(),
        });
    }
    let mut caps = vec![spec.s; n];
    let mut rest_index = index.clone();
    let mut entries = Vec::with_capacity(spec.k);
    for i in 0..spec.k {
        let rest = spec.k - i - 1;
        for v in 0..n {
            if caps[v] == 0 {
                continue;
            }
            let mut trial = caps.clone();
            take(&mut trial, v, spec.mode);
            let block = count_completions(&trial, rest, spec.mode);
            if rest_index < block {
                entries.push(v);
                caps = trial;
                break;
            }
            rest_index -= block;
        }
    }
    Ok(Configuration::new(spec.mode, entries))
}

/// Lexicographically smallest way to fill `entries[start..]` given the
/// occupancy of the prefix; false when no completion exists.
fn fill_minimal(entries: &mut [usize], start: usize, occ: &mut [usize], n: usize, spec: &TokenSpec) -> bool {
    let mut v = match spec.mode {
        TokenMode::Indistinguishable if start > 0 => entries[start - 1],
        _ => 0,
    };
    for slot in entries.iter_mut().skip(start) {
        while v < n && occ[v] >= spec.s {
            v += 1;
        }
        if v == n {
            return false;
        }
        *slot = v;
        occ[v] += 1;
        if spec.mode == TokenMode::Distinguishable {
            v = 0;
        }
    }
    true
}

/// First configuration in lexicographic order, if any exists.
pub fn first_config(n: usize, spec: &TokenSpec) -> Option<Vec<usize>> {
    let mut entries = vec![0; spec.k];
    let mut occ = vec![0; n];
    fill_minimal(&mut entries, 0, &mut occ, n, spec).then_some(entries)
}

/// Advances `entries` to the next configuration; false after the last one.
pub fn next_config(entries: &mut [usize], n: usize, spec: &TokenSpec) -> bool {
    let mut occ = vec![0usize; n];
    for &v in entries.iter() {
        occ[v] += 1;
    }
    for i in (0..entries.len()).rev() {
        occ[entries[i]] -= 1;
        for v in entries[i] + 1..n {
            if occ[v] >= spec.s {
                continue;
            }
            let mut trial_occ = occ.clone();
            trial_occ[v] += 1;
            let saved = entries[i];
            entries[i] = v;
            if fill_minimal(entries, i + 1, &mut trial_occ, n, spec) {
                return true;
            }
            entries[i] = saved;
        }
    }
    false
}

const ENUM_CHUNK: usize = 1 << 12;

/// All configurations in lexicographic order; empty when none exists.
pub fn enumerate_configs(n: usize, spec: &TokenSpec) -> Vec<Configuration> {
    enumerate_configs_with(n, spec, Exec::default())
}

/// [`enumerate_configs`] with an explicit execution mode. Parallel runs split
/// the rank range into chunks that concatenate to the lexicographic order.
pub fn enumerate_configs_with(n: usize, spec: &TokenSpec, exec: Exec) -> Vec<Configuration> {
    let total = config_count(n, spec).to_usize();
    match total {
        Some(total) if exec.is_parallel() && total > ENUM_CHUNK => {
            let chunks = total.div_ceil(ENUM_CHUNK);
            par::map_range(exec, chunks, |chunk| {
                let start = chunk * ENUM_CHUNK;
                let len = ENUM_CHUNK.min(total - start);
                enumerate_range(n, spec, start, len)
            })
            .into_iter()
            .flatten()
            .collect()
        }
        _ => {
            let mut out = Vec::with_capacity(total.unwrap_or(0));
            if let Some(mut cur) = first_config(n, spec) {
                loop {
                    out.push(Configuration::new(spec.mode, cur.clone()));
                    if !next_config(&mut cur, n, spec) {
                        break;
                    }
                }
            }
            out
        }
    }
}

/// `len` consecutive configurations starting at rank `start`.
pub fn enumerate_range(n: usize, spec: &TokenSpec, start: usize, len: usize) -> Vec<Configuration> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let Ok(first) = config_unrank(&BigUint::from(start), n, spec) else {
        return out;
    };
    let mut cur = first.into_entries();
    loop {
        out.push(Configuration::new(spec.mode, cur.clone()));
        if out.len() == len || !next_config(&mut cur, n, spec) {
            break;
        }
    }
    out
}
