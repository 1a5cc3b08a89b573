//! JSON report types.
//!
//! Counts are exact. A count up to `2^53 - 1` is written as a JSON number,
//! anything larger as a decimal string so that readers using doubles never
//! round it.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::analysis::{component_summary, cycle_space_dimension, ComponentClass};
use crate::config::{TokenMode, TokenSpec};
use crate::counting::count_report;
use crate::io::NamedGraph;
use crate::theorems::{Status, VerificationOutcome};

pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Count(pub BigUint);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(x) if x <= MAX_SAFE_INTEGER => serializer.serialize_u64(x),
            _ => serializer.collect_str(&self.0),
        }
    }
}

impl From<BigUint> for Count {
    fn from(x: BigUint) -> Self {
        Count(x)
    }
}

impl From<usize> for Count {
    fn from(x: usize) -> Self {
        Count(x.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecView {
    pub k: usize,
    pub s: usize,
    pub mode: TokenMode,
}

impl From<&TokenSpec> for SpecView {
    fn from(spec: &TokenSpec) -> Self {
        SpecView {
            k: spec.k(),
            s: spec.s(),
            mode: spec.mode(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub class: ComponentClass,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub graph: String,
    pub base_order: usize,
    pub base_size: usize,
    pub spec: SpecView,
    pub order: Count,
    pub size: Count,
    pub per_edge_multiplier: Count,
    pub order_enumerated: Option<Count>,
    pub size_enumerated: Option<Count>,
    pub order_agrees: Option<bool>,
    pub size_agrees: Option<bool>,
    pub connected: Option<bool>,
    pub bipartite: Option<bool>,
    pub cycle_space_dimension: Option<usize>,
    pub components: Option<usize>,
    pub component_classes: Option<Vec<ClassCount>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

/// Closed-form counts, plus structure from a full build when `enumerate`
/// is set and the order is at most `cap`.
pub fn analyze(base: &NamedGraph, spec: &TokenSpec, enumerate: bool, cap: usize) -> AnalysisReport {
    let g = &base.graph;
    let counts = count_report(g, spec, false, cap);
    let mut report = AnalysisReport {
        graph: base.name.clone(),
        base_order: g.n(),
        base_size: g.m(),
        spec: spec.into(),
        order: counts.order_formula.clone().into(),
        size: counts.size_formula.clone().into(),
        per_edge_multiplier: counts.per_edge_multiplier.into(),
        order_enumerated: None,
        size_enumerated: None,
        order_agrees: None,
        size_agrees: None,
        connected: None,
        bipartite: None,
        cycle_space_dimension: None,
        components: None,
        component_classes: None,
        notice: None,
    };
    if !enumerate {
        return report;
    }
    let opts = crate::builder::BuildOptions {
        cap,
        ..Default::default()
    };
    match crate::builder::build_with(g, spec, &opts) {
        Ok(st) => {
            let summary = component_summary(&st.graph);
            report.order_agrees = Some(counts.order_formula == st.order().into());
            report.size_agrees = Some(counts.size_formula == st.size().into());
            report.order_enumerated = Some(st.order().into());
            report.size_enumerated = Some(st.size().into());
            report.connected = Some(st.graph.is_connected());
            report.bipartite = Some(st.graph.is_bipartite());
            report.cycle_space_dimension = Some(cycle_space_dimension(&st.graph));
            report.components = Some(summary.components.len());
            report.component_classes = Some(
                summary
                    .class_counts()
                    .into_iter()
                    .map(|(class, count)| ClassCount { class, count })
                    .collect(),
            );
        }
        Err(e) => report.notice = Some(format!("enumeration skipped: {e}")),
    }
    report
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
}

impl SuiteSummary {
    pub fn of(outcomes: &[VerificationOutcome]) -> Self {
        let mut s = SuiteSummary {
            total: outcomes.len(),
            ..Default::default()
        };
        for o in outcomes {
            match o.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inapplicable => s.inapplicable += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suites: Vec<String>,
    pub max_order: usize,
    pub seed: u64,
    pub summary: SuiteSummary,
    pub outcomes: Vec<VerificationOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }
}
