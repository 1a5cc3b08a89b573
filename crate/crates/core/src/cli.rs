//! The `supertoken` command line.
//!
//! Exit codes: 0 success, 1 a check failed (a failing suite outcome or a
//! formula/enumeration disagreement), 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builder::{build_with, BuildOptions, DEFAULT_BUILD_CAP};
use crate::config::{Configuration, TokenMode, TokenSpec};
use crate::counting::count_report;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{emit_edge_list, parse_graph_spec, to_dot, to_graph6, NamedGraph};
use crate::par::Exec;
use crate::report::{analyze, Count, SpecView, SuiteReport, SuiteSummary};
use crate::theorems::{run_suite, Grid, Suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(name = "supertoken", version, about = "Build, count and check supertoken graphs")]
struct Cli {
    /// Seed for the randomized relabeling checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TokenArgs {
    /// Base graph: path:N, cycle:N, star:N, complete:N or file:PATH.
    #[arg(long)]
    graph: String,
    /// Number of tokens.
    #[arg(long)]
    k: usize,
    /// Capacity per vertex (values above k are reduced to k).
    #[arg(long)]
    s: usize,
    /// indist or dist.
    #[arg(long)]
    mode: TokenMode,
}

impl TokenArgs {
    fn resolve(&self) -> Result<(NamedGraph, TokenSpec)> {
        Ok((
            parse_graph_spec(&self.graph)?,
            TokenSpec::new(self.k, self.s, self.mode)?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Graph6,
    Edges,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, size and per-edge multiplier from the closed forms.
    Count(TokenArgs),
    /// Materialize the supertoken graph and write it out.
    Build {
        #[command(flatten)]
        tokens: TokenArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUILD_CAP)]
        cap: usize,
    },
    /// Analysis report as JSON.
    Analyze {
        #[command(flatten)]
        tokens: TokenArgs,
        /// Build the graph and fill in the structural fields.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_BUILD_CAP)]
        cap: usize,
    },
    /// Run theorem suites over the family grid.
    Verify {
        /// all, no-tree, connectivity, bipartite, path, cycle, counts, chain or isomorphisms.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest supertoken order to materialize.
        #[arg(long, default_value_t = 20_000)]
        max_order: usize,
        /// Largest family parameter in the grid.
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Largest token count in the grid.
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Run grid points on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Write a base graph without token expansion.
    Export {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "edges")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct CountOutput {
    graph: String,
    spec: SpecView,
    order: Count,
    size: Count,
    per_edge_multiplier: Count,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    graph: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec: Option<SpecView>,
    order: usize,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<&'a [Configuration]>,
    edges: Vec<(usize, usize)>,
}

fn render(
    format: Format,
    name: &str,
    spec: Option<&TokenSpec>,
    g: &Graph,
    labels: Option<&[Configuration]>,
) -> Result<String> {
    Ok(match format {
        Format::Dot => to_dot(g, labels),
        Format::Graph6 => to_graph6(g)? + "\n",
        Format::Edges => emit_edge_list(g),
        Format::Json => {
            let doc = GraphJson {
                graph: name,
                spec: spec.map(SpecView::from),
                order: g.n(),
                size: g.m(),
                vertices: labels,
                edges: g.edges().collect(),
            };
            to_json(&doc)
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn emit(text: &str, dest: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match dest {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Count(tokens) => {
            let (base, spec) = tokens.resolve()?;
            let counts = count_report(&base.graph, &spec, false, 0);
            let doc = CountOutput {
                graph: base.name,
                spec: (&spec).into(),
                order: counts.order_formula.into(),
                size: counts.size_formula.into(),
                per_edge_multiplier: counts.per_edge_multiplier.into(),
            };
            emit(&to_json(&doc), None, out)?;
            Ok(0)
        }
        Command::Build {
            tokens,
            format,
            out: dest,
            cap,
        } => {
            let (base, spec) = tokens.resolve()?;
            let st = build_with(
                &base.graph,
                &spec,
                &BuildOptions {
                    cap,
                    exec: Exec::default(),
                },
            )?;
            let text = render(format, &base.name, Some(&spec), &st.graph, Some(&st.vertices))?;
            emit(&text, dest.as_ref(), out)?;
            Ok(0)
        }
        Command::Analyze { tokens, enumerate, cap } => {
            let (base, spec) = tokens.resolve()?;
            let report = analyze(&base, &spec, enumerate, cap);
            emit(&to_json(&report), None, out)?;
            let disagree = report.order_agrees == Some(false) || report.size_agrees == Some(false);
            Ok(i32::from(disagree))
        }
        Command::Verify {
            suite,
            max_order,
            n_max,
            k_max,
            sequential,
        } => {
            let suites = Suite::parse_list(&suite)?;
            let opts = SuiteOptions {
                max_order,
                exec: if sequential { Exec::Sequential } else { Exec::Parallel },
                seed: cli.seed,
                ..SuiteOptions::default()
            };
            let outcomes = run_suite(&Grid::families(n_max, k_max), &suites, &opts);
            let report = SuiteReport {
                suites: suites.iter().map(|s| s.name().to_string()).collect(),
                max_order,
                seed: cli.seed,
                summary: SuiteSummary::of(&outcomes),
                outcomes,
            };
            emit(&to_json(&report), None, out)?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Export {
            graph,
            format,
            out: dest,
        } => {
            let base = parse_graph_spec(&graph)?;
            let text = render(format, &base.name, None, &base.graph, None)?;
            emit(&text, dest.as_ref(), out)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("supertoken").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn count_command() {
        let (code, out, _) = call(&[
            "count", "--graph", "cycle:4", "--k", "3", "--s", "2", "--mode", "indist",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["order"].as_u64(), v["size"].as_u64()), (Some(16), Some(32)));
        assert_eq!(v["per_edge_multiplier"], 8);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            call(&["count", "--graph", "cycle:4", "--k", "3", "--s", "2", "--mode", "both"]).0,
            2
        );
        assert_eq!(
            call(&["count", "--graph", "wheel:4", "--k", "3", "--s", "2", "--mode", "dist"]).0,
            2
        );
        assert_eq!(call(&["verify", "--suite", "nothing"]).0, 2);
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn analyze_star() {
        let (code, out, _) = call(&[
            "analyze",
            "--graph",
            "star:4",
            "--k",
            "3",
            "--s",
            "2",
            "--mode",
            "dist",
            "--enumerate",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            (v["order"].clone(), v["size"].clone(), v["bipartite"].clone()),
            (120.into(), 276.into(), true.into())
        );
    }

    #[test]
    fn big_counts_are_strings() {
        let (_, out, _) = call(&[
            "count",
            "--graph",
            "complete:40",
            "--k",
            "20",
            "--s",
            "20",
            "--mode",
            "dist",
        ]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            v["order"],
            num_traits::pow(num_bigint::BigUint::from(40u8), 20).to_string()
        );
    }
}
