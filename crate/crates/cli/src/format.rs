//! File formats: JSON structure-constant input and the JSON report.
//!
//! Rationals travel as strings (`"-3/2"` or `"0.25"`), never floats, so
//! exactness survives the wire.

use anyhow::{bail, Context, Result};
use bracketflow::decide::{Answer, Certainty, FlowSummary, Question, Verdict};
use bracketflow::qmat::QMat;
use bracketflow::rational::{format_rational, parse_rational, Q};
use bracketflow::{AlgebraClass, BracketTensor};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Calibrated proportionality constant between the moment map and the Ricci
/// tensor on unit-norm nilpotent brackets, `m = κ·Ric`.
pub const MOMENT_RICCI_KAPPA: &str = "2";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

/// One algebra per file: dimension, sparse structure constants (1-based
/// indices, `i < j`), an optional name, and an optional candidate splitting
/// as two index lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<(Vec<usize>, Vec<usize>)>,
}

impl AlgebraFile {
    pub fn to_tensor(&self) -> Result<BracketTensor> {
        if self.dim == 0 {
            bail!("dim must be positive");
        }
        let mut tensor = BracketTensor::zero(self.dim);
        let mut seen = BTreeSet::new();
        for (line, e) in self.brackets.iter().enumerate() {
            let ctx = |what: &str| format!("bracket entry {} ({what})", line + 1);
            if e.i == 0 || e.j == 0 || e.k == 0 || e.i > self.dim || e.j > self.dim || e.k > self.dim
            {
                bail!("{}: indices must be 1-based and at most dim", ctx("range"));
            }
            if e.i >= e.j {
                bail!("{}: requires i < j", ctx("order"));
            }
            if !seen.insert((e.i, e.j, e.k)) {
                bail!("{}: duplicate (i, j, k) key", ctx("duplicate"));
            }
            let c: Q = parse_rational(&e.c)
                .with_context(|| format!("bracket entry {}: bad rational {:?}", line + 1, e.c))?;
            tensor.set(e.i - 1, e.j - 1, e.k - 1, c);
        }
        if let Some((a, b)) = &self.splitting {
            let all: BTreeSet<usize> = a.iter().chain(b).copied().collect();
            if a.is_empty() || b.is_empty() {
                bail!("splitting parts must be nonempty");
            }
            if all.len() != a.len() + b.len() || all.iter().any(|&i| i == 0 || i > self.dim) {
                bail!("splitting must be two disjoint 1-based index lists within dim");
            }
        }
        Ok(tensor)
    }

    pub fn from_tensor(t: &BracketTensor, name: Option<String>) -> Self {
        AlgebraFile {
            dim: t.dim(),
            brackets: t
                .entries()
                .map(|(i, j, k, c)| BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    c: format_rational(c),
                })
                .collect(),
            name,
            splitting: None,
        }
    }
}

pub fn ingest(path: &Path) -> Result<(BracketTensor, AlgebraFile)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let file: AlgebraFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    let tensor = file.to_tensor()?;
    Ok((tensor, file))
}

pub fn rational_matrix(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect())
        .collect()
}

pub fn rational_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub nilpotent: bool,
    pub completely_solvable: bool,
    pub solvable: bool,
    pub unimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotency_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvability_steps: Option<usize>,
}

impl From<&AlgebraClass> for ClassificationJson {
    fn from(c: &AlgebraClass) -> Self {
        ClassificationJson {
            nilpotent: c.nilpotent,
            completely_solvable: c.completely_solvable,
            solvable: c.solvable,
            unimodular: c.unimodular,
            nilpotency_steps: c.nilpotency_steps,
            solvability_steps: c.solvability_steps,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessesJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_phi: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton_c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton_d: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub destabilizer: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reductivity_witness: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_element: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centralizer_basis: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_on_complement: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton_c_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soliton_residual_numeric: Option<f64>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowSummaryJson {
    pub converged: bool,
    pub steps: usize,
    pub time: f64,
    pub final_f: f64,
    pub final_residual: f64,
    pub der_dim_start: usize,
    pub der_dim_limit: usize,
    pub rank_gap: f64,
}

impl From<&FlowSummary> for FlowSummaryJson {
    fn from(s: &FlowSummary) -> Self {
        FlowSummaryJson {
            converged: s.converged,
            steps: s.steps,
            time: s.time,
            final_f: s.final_f,
            final_residual: s.final_residual,
            der_dim_start: s.der_dim_start,
            der_dim_limit: s.der_dim_limit,
            rank_gap: s.rank_gap,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub question: String,
    pub answer: String,
    pub certainty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
    pub witnesses: WitnessesJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_evidence: Option<FlowSummaryJson>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

pub fn question_str(q: Question) -> &'static str {
    match q {
        Question::EinsteinNilradical => "einstein_nilradical",
        Question::AdmitsFlat => "admits_flat",
        Question::AdmitsNegativeEinstein => "admits_negative_einstein",
        Question::AdmitsSolsoliton => "admits_solsoliton",
    }
}

pub fn answer_str(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Inconclusive => "inconclusive",
    }
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let w = &v.witnesses;
        VerdictJson {
            question: question_str(v.question).to_string(),
            answer: answer_str(v.answer).to_string(),
            certainty: match v.certainty {
                Certainty::Exact => "exact".to_string(),
                Certainty::Numeric => "numeric".to_string(),
            },
            failed_step: v.failed_step.clone(),
            witnesses: WitnessesJson {
                phi: w.phi.as_ref().map(rational_matrix),
                x_phi: w.x_phi.as_deref().map(rational_vec),
                soliton_c: w.soliton.as_ref().map(|c| format_rational(&c.c)),
                soliton_d: w.soliton.as_ref().map(|c| rational_matrix(&c.d)),
                soliton_kind: w.soliton.as_ref().map(|c| format!("{:?}", c.kind).to_lowercase()),
                destabilizer: w.destabilizer.as_ref().map(rational_matrix),
                reductivity_witness: w.reductivity_witness.as_ref().map(rational_matrix),
                bad_element: w.bad_element.as_deref().map(rational_vec),
                complement: w
                    .complement
                    .as_ref()
                    .map(|rows| rows.iter().map(|r| rational_vec(r)).collect()),
                centralizer_basis: w
                    .centralizer_basis
                    .as_ref()
                    .map(|rows| rows.iter().map(|r| rational_vec(r)).collect()),
                metric_on_complement: w.metric_on_complement.as_ref().map(rational_matrix),
                soliton_c_numeric: w.soliton_f64.map(|(c, _)| c),
                soliton_residual_numeric: w.soliton_f64.map(|(_, r)| r),
                verified: w.verified,
            },
            numeric_evidence: v.numeric_evidence.as_ref().map(FlowSummaryJson::from),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub input: AlgebraFile,
    pub classification: ClassificationJson,
    /// Calibration constant of `m = κ·Ric` on unit-norm nilpotent brackets.
    pub moment_ricci_kappa: String,
    pub verdicts: Vec<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowSummaryJson>,
    pub timing_ms: u128,
}

/// Writes a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("out")
        )),
        None => std::path::PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("out")
        )),
    };
    std::fs::write(&tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move report into place at {}", path.display()))?;
    Ok(())
}
