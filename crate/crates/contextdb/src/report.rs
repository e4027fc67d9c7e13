//! Machine-readable analysis reports.
//!
//! Every analysis command of the CLI prints exactly one [`Report`] — a JSON
//! object with stable field names: the command, an echo of the input (path
//! and SHA-256 of the raw bytes, for reproducibility), the command-specific
//! `result`, and the elapsed wall time. The documents under `result` mirror
//! the library's outcome types closely enough that witnesses can be fed
//! back in: tuples appear as `{attribute: value}` maps, table rows as
//! `{tuple, value}` pairs, certificates as vectors of rationals in the
//! row order of the hidden-variable system.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gluing::{Classification, CompatibilityReport, GlueOutcome, LhvOutcome};
use crate::model::EmpiricalModel;
use crate::schema::{AttributeSet, Tuple};
use crate::semiring::render_rational;
use crate::solver::SearchOutcome;
use crate::structure::{AcyclicityResult, GyoStep, ParityCheck};
use crate::valuation::Valuation;

/// A tuple as a JSON object: attribute name to value token.
pub type TupleDoc = BTreeMap<String, String>;

pub fn tuple_doc(tuple: &Tuple) -> TupleDoc {
    tuple
        .iter()
        .map(|(a, v)| (a.name().to_string(), v.token().to_string()))
        .collect()
}

pub fn names(set: &AttributeSet) -> Vec<String> {
    set.iter().map(|a| a.name().to_string()).collect()
}

/// One weighted table row.
#[derive(Debug, Serialize)]
pub struct RowDoc {
    pub tuple: TupleDoc,
    pub value: String,
}

pub fn rows_doc(valuation: &Valuation) -> Vec<RowDoc> {
    valuation
        .iter()
        .map(|(t, v)| RowDoc {
            tuple: tuple_doc(t),
            value: v.render(),
        })
        .collect()
}

/// Echo of the analyzed input: the path as given (`-` for standard input)
/// and the SHA-256 of the raw bytes.
#[derive(Debug, Serialize)]
pub struct InputEcho {
    pub path: String,
    pub sha256: String,
}

/// The envelope every analysis command prints.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub result: T,
    pub elapsed_ms: u128,
}

impl<T: Serialize> Report<T> {
    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("reports serialize infallibly");
        text.push('\n');
        text
    }
}

/// `check`: the compatibility verdict with every violating overlap.
#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub compatible: bool,
    pub violations: Vec<ViolationDoc>,
}

#[derive(Debug, Serialize)]
pub struct ViolationDoc {
    pub left: usize,
    pub left_context: Vec<String>,
    pub right: usize,
    pub right_context: Vec<String>,
    pub overlap: Vec<String>,
    pub left_marginal: Vec<RowDoc>,
    pub right_marginal: Vec<RowDoc>,
}

pub fn check_doc(model: &EmpiricalModel, report: &CompatibilityReport) -> CheckDoc {
    let contexts = model.schema().contexts();
    CheckDoc {
        compatible: report.compatible(),
        violations: report
            .violations()
            .iter()
            .map(|v| ViolationDoc {
                left: v.left,
                left_context: names(&contexts[v.left]),
                right: v.right,
                right_context: names(&contexts[v.right]),
                overlap: names(&v.overlap),
                left_marginal: rows_doc(&v.left_marginal),
                right_marginal: rows_doc(&v.right_marginal),
            })
            .collect(),
    }
}

/// A universal-relation verdict: whether a glue exists and, when it does,
/// the joined table together with the largest-glue flag.
#[derive(Debug, Serialize)]
pub struct GlueDoc {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_largest: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<RowDoc>>,
}

pub fn glue_doc(outcome: &GlueOutcome) -> GlueDoc {
    match outcome {
        GlueOutcome::Exists {
            witness,
            is_largest,
        } => GlueDoc {
            exists: true,
            is_largest: Some(*is_largest),
            rows: Some(rows_doc(witness)),
        },
        GlueOutcome::NotExists => GlueDoc {
            exists: false,
            is_largest: None,
            rows: None,
        },
    }
}

/// A hidden-variable verdict: a global distribution or a Farkas
/// certificate (one rational per system row, in row order).
#[derive(Debug, Serialize)]
pub struct LhvDoc {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<RowDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
}

pub fn lhv_doc(outcome: &LhvOutcome) -> LhvDoc {
    match outcome {
        LhvOutcome::Feasible(distribution) => LhvDoc {
            feasible: true,
            distribution: Some(rows_doc(distribution.as_valuation())),
            certificate: None,
        },
        LhvOutcome::Infeasible(certificate) => LhvDoc {
            feasible: false,
            distribution: None,
            certificate: Some(
                certificate
                    .multipliers()
                    .iter()
                    .map(render_rational)
                    .collect(),
            ),
        },
    }
}

/// `glue`: the semiring decides which notion applies — the universal
/// relation for Boolean tables, hidden-variable feasibility for
/// probability tables.
#[derive(Debug, Serialize)]
pub struct GlueCommandDoc {
    pub semiring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhv: Option<LhvDoc>,
}

/// A global-assignment search verdict.
#[derive(Debug, Serialize)]
pub struct AssignmentDoc {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TupleDoc>,
}

pub fn assignment_doc(outcome: &SearchOutcome) -> AssignmentDoc {
    AssignmentDoc {
        exists: outcome.is_witness(),
        witness: outcome.witness().map(tuple_doc),
    }
}

/// `classify`: the hierarchy class plus whichever intermediate verdicts the
/// cascade produced.
#[derive(Debug, Serialize)]
pub struct ClassifyDoc {
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhv: Option<LhvDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_glue: Option<GlueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<AssignmentDoc>,
}

pub fn classify_doc(classification: &Classification) -> ClassifyDoc {
    ClassifyDoc {
        class: classification.class.name().to_string(),
        lhv: classification.lhv.as_ref().map(lhv_doc),
        support_glue: classification.support_glue.as_ref().map(glue_doc),
        assignment: classification.assignment.as_ref().map(assignment_doc),
    }
}

/// One GYO elimination step.
#[derive(Debug, Serialize)]
pub struct StepDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    pub context: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

pub fn step_doc(step: &GyoStep) -> StepDoc {
    match step {
        GyoStep::RemoveAttribute { attribute, context } => StepDoc {
            kind: "remove-attribute".to_string(),
            attribute: Some(attribute.name().to_string()),
            context: *context,
            witness: None,
        },
        GyoStep::RemoveContext { context, witness } => StepDoc {
            kind: "remove-context".to_string(),
            attribute: None,
            context: *context,
            witness: Some(*witness),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct AcyclicityDoc {
    pub acyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elimination: Option<Vec<StepDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<Vec<String>>>,
}

pub fn acyclicity_doc(result: &AcyclicityResult) -> AcyclicityDoc {
    match result {
        AcyclicityResult::Acyclic { elimination } => AcyclicityDoc {
            acyclic: true,
            elimination: Some(elimination.iter().map(step_doc).collect()),
            core: None,
        },
        AcyclicityResult::Cyclic { core } => AcyclicityDoc {
            acyclic: false,
            elimination: None,
            core: Some(core.iter().map(names).collect()),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct ParityDoc {
    pub no_global_section: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<u64>,
}

pub fn parity_doc(check: &ParityCheck) -> ParityDoc {
    match check {
        ParityCheck::NoGlobalSection { divisor } => ParityDoc {
            no_global_section: true,
            divisor: Some(*divisor),
        },
        ParityCheck::Inconclusive => ParityDoc {
            no_global_section: false,
            divisor: None,
        },
    }
}

#[derive(Debug, Serialize)]
pub struct KsDoc {
    pub section_exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TupleDoc>,
}

/// `schema`: whichever of the three analyses were requested.
#[derive(Debug, Serialize)]
pub struct SchemaAnalysisDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acyclicity: Option<AcyclicityDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsDoc>,
}
