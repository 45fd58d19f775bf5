//! Machine-readable report shapes shared by the CLI's text and JSON output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analysis::DependencyGraph;
use crate::guide::GuideInput;
use crate::oracle::{EquivalenceOutcome, ExternalBehavior};
use crate::prover::ProofOutcome;

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub from: String,
    pub to: String,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgramAnalysis {
    pub path: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeReport>,
    pub edge_count: usize,
    pub non_positive_edge_count: usize,
    pub tight: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub private_recursion: Option<bool>,
}

impl ProgramAnalysis {
    pub fn new(path: &str, graph: &DependencyGraph) -> ProgramAnalysis {
        ProgramAnalysis {
            path: path.to_string(),
            vertices: graph.vertices.iter().map(|v| v.to_string()).collect(),
            edges: graph
                .edges
                .iter()
                .map(|e| EdgeReport {
                    from: e.from.to_string(),
                    to: e.to.to_string(),
                    positive: e.positive,
                })
                .collect(),
            edge_count: graph.edge_count(),
            non_positive_edge_count: graph.edge_count() - graph.positive_edge_count(),
            tight: !graph.has_positive_cycle(),
            private_recursion: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub programs: Vec<ProgramAnalysis>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub direction: String,
    pub status: String,
    pub seconds: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specification: Option<String>,
    pub tasks: Vec<TaskReport>,
    pub verdict: String,
}

impl VerifyReport {
    pub fn from_outcome(specification: String, outcome: &ProofOutcome) -> VerifyReport {
        VerifyReport {
            diagnostics: Vec::new(),
            specification: Some(specification),
            tasks: outcome
                .tasks
                .iter()
                .map(|t| TaskReport {
                    name: t.name.clone(),
                    direction: t.direction.to_string(),
                    status: t.status.to_string(),
                    seconds: t.seconds,
                })
                .collect(),
            verdict: outcome.overall.to_string(),
        }
    }
}

pub fn behavior_to_lists(behavior: &ExternalBehavior) -> Vec<Vec<String>> {
    behavior
        .iter()
        .map(|model| model.iter().map(|a| a.to_string()).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BehaviorReport {
    pub behaviors: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub valuation: BTreeMap<String, String>,
    pub facts: Vec<String>,
    pub behavior1: Vec<Vec<String>>,
    pub behavior2: Vec<Vec<String>>,
}

impl CounterexampleReport {
    pub fn new(
        input: &GuideInput,
        behavior1: &ExternalBehavior,
        behavior2: &ExternalBehavior,
    ) -> CounterexampleReport {
        CounterexampleReport {
            valuation: input
                .valuation
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            facts: input.atoms.iter().map(|a| a.to_string()).collect(),
            behavior1: behavior_to_lists(behavior1),
            behavior2: behavior_to_lists(behavior2),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

impl DiffReport {
    pub fn from_outcome(outcome: &EquivalenceOutcome) -> DiffReport {
        match outcome {
            EquivalenceOutcome::NoCounterexample { tested } => DiffReport {
                tested: *tested,
                counterexample: None,
            },
            EquivalenceOutcome::Counterexample {
                input,
                behavior1,
                behavior2,
            } => DiffReport {
                tested: 0,
                counterexample: Some(CounterexampleReport::new(input, behavior1, behavior2)),
            },
        }
    }
}
