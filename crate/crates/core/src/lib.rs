//! Generalized token graphs ("supertoken" graphs).
//!
//! Given a simple graph `G`, `k` tokens and a per-vertex capacity `s`, the
//! supertoken graph has one vertex per placement of the tokens on `G` with at
//! most `s` tokens per vertex; two placements are adjacent when one token
//! slides along an edge of `G`. Tokens are either indistinguishable
//! (placements are multisets) or distinguishable (placements are ordered
//! tuples), which gives six classical families depending on `s`:
//!
//! | capacity  | indistinguishable         | distinguishable            |
//! |-----------|---------------------------|----------------------------|
//! | `s = 1`   | token graph `F_k(G)`      | `F^1_{k×1}(G)`             |
//! | `1<s<k`   | `F_k^s(G)`                | `F^s_{k×1}(G)`             |
//! | `s = k`   | reduced power `F_k^k(G)`  | Cartesian power `G□…□G`    |
//!
//! The crate materializes these graphs ([`builder`]), counts their orders and
//! sizes in closed form with exact integers ([`counting`]), analyses their
//! structure ([`analysis`]) and checks the known structural results over
//! parameter grids ([`theorems`]).
//!
//! All vertex labels are 0-based. Figures in the literature usually label
//! path and cycle vertices `1..n`; subtract one to translate.

pub mod analysis;
pub mod builder;
pub mod cli;
pub mod config;
pub mod counting;
pub mod error;
pub mod graph;
pub mod io;
pub mod par;
pub mod report;
pub mod theorems;

pub use builder::{build, build_with, neighbors, BuildOptions, SupertokenGraph};
pub use config::{Configuration, TokenMode, TokenSpec};
pub use error::{Error, Result};
pub use graph::{BaseGraph, Graph};
pub use par::Exec;
