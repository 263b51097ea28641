//! JSON file formats for matrices, super-operators, structures, derivation
//! scripts, chains and loops.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use eqol_core::checker::{
    Axiom, DerivationScript, Justification, Partition, ScriptStep, StateSpec, Structure, Template,
};
use eqol_core::eqmc::ExogenousQmc;
use eqol_core::gqloop::{GeneralizedQuantumLoop, Guard};
use eqol_core::lang::{parse_formula, parse_term, Formula, Term};
use eqol_core::matrix::{log2_exact, ComplexMatrix, Operator};
use eqol_core::register::{QubitSet, Register};
use eqol_core::{DensityOperator, SuperOperator, ValuationSet, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    /// Formula or term text inside a file that does not parse.
    #[error("{0}")]
    Syntax(String),
}

impl IoError {
    fn invalid(what: impl std::fmt::Display) -> Self {
        IoError::Invalid(what.to_string())
    }
}

/// A matrix entry or diagonal entry: `[re, im]`, or a bare real number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub fn value(self) -> C64 {
        match self {
            Scalar::Real(r) => C64::new(r, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }

    fn pair(z: C64) -> Self {
        Scalar::Complex([z.re, z.im])
    }

    fn compact(z: C64) -> Self {
        if z.im == 0.0 {
            Scalar::Real(z.re)
        } else {
            Scalar::pair(z)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatrixJson {
    Dense { dim: usize, rows: Vec<Vec<Scalar>> },
    Diagonal { dim: usize, diag: Vec<Scalar> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperOpJson {
    pub dim: usize,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AdmissibleJson {
    Keyword(String),
    Valuations(Vec<String>),
}

impl Default for AdmissibleJson {
    fn default() -> Self {
        AdmissibleJson::Keyword("all".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateJson {
    Global(MatrixJson),
    /// Keyed by the block's qubits joined with `,`.
    Blocks(BTreeMap<String, MatrixJson>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureJson {
    pub qubits: Vec<String>,
    #[serde(rename = "V", default)]
    pub admissible: AdmissibleJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<String>>>,
    pub state: StateJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assign: BTreeMap<String, SuperOpJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JustJson {
    Tag(String),
    Axiom {
        axiom: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        binding: Option<BTreeMap<String, String>>,
    },
    Qmp {
        qmp: [usize; 2],
    },
    Cmp {
        cmp: [usize; 2],
    },
    Template {
        template: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<Vec<usize>>,
    },
    Discharge {
        discharge: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub formula: String,
    pub just: JustJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<Vec<String>>,
    pub steps: Vec<StepJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitJson {
    pub states: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub qubits: Vec<String>,
    pub epsilon: SuperOpJson,
    pub init: InitJson,
    #[serde(default)]
    pub ap: Vec<String>,
    #[serde(rename = "V", default)]
    pub admissible: AdmissibleJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GuardJson {
    Valuations(Vec<String>),
    Projector(MatrixJson),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopJson {
    pub qubits: Vec<String>,
    pub body: SuperOpJson,
    pub guard: GuardJson,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json { path: path.into(), source })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

// ---- matrices ----

pub fn operator_from_json(m: &MatrixJson) -> Result<Operator, IoError> {
    match m {
        MatrixJson::Dense { dim, rows } => {
            log2_exact(*dim).map_err(IoError::invalid)?;
            if rows.len() != *dim || rows.iter().any(|r| r.len() != *dim) {
                return Err(IoError::invalid(format!("dense matrix rows do not match dim {dim}")));
            }
            let rows = rows.iter().map(|r| r.iter().map(|s| s.value()).collect()).collect();
            let m = ComplexMatrix::from_rows(rows).map_err(IoError::invalid)?;
            if !m.is_finite() {
                return Err(IoError::invalid("matrix has non-finite entries"));
            }
            Ok(Operator::Dense(m))
        }
        MatrixJson::Diagonal { dim, diag } => {
            log2_exact(*dim).map_err(IoError::invalid)?;
            if diag.len() != *dim {
                return Err(IoError::invalid(format!("diagonal has {} entries, dim is {dim}", diag.len())));
            }
            let d: Vec<C64> = diag.iter().map(|s| s.value()).collect();
            if d.iter().any(|z| !z.is_finite()) {
                return Err(IoError::invalid("matrix has non-finite entries"));
            }
            Ok(Operator::Diagonal(d))
        }
    }
}

pub fn operator_to_json(op: &Operator) -> MatrixJson {
    match op {
        Operator::Diagonal(d) => {
            MatrixJson::Diagonal { dim: d.len(), diag: d.iter().map(|z| Scalar::compact(*z)).collect() }
        }
        Operator::Dense(m) => MatrixJson::Dense {
            dim: m.rows(),
            rows: (0..m.rows()).map(|r| m.row(r).iter().map(|z| Scalar::pair(*z)).collect()).collect(),
        },
    }
}

pub fn density_from_json(m: &MatrixJson, tol: f64) -> Result<DensityOperator, IoError> {
    DensityOperator::from_operator(operator_from_json(m)?, tol).map_err(IoError::invalid)
}

pub fn density_to_json(rho: &DensityOperator) -> MatrixJson {
    match rho {
        DensityOperator::Diagonal(p) => {
            MatrixJson::Diagonal { dim: p.len(), diag: p.iter().map(|x| Scalar::Real(*x)).collect() }
        }
        DensityOperator::Dense(_) => operator_to_json(&rho.to_operator()),
    }
}

pub fn superop_from_json(s: &SuperOpJson) -> Result<SuperOperator, IoError> {
    let kraus = s.kraus.iter().map(operator_from_json).collect::<Result<Vec<_>, _>>()?;
    SuperOperator::new(s.dim, kraus).map_err(IoError::invalid)
}

pub fn superop_to_json(e: &SuperOperator) -> SuperOpJson {
    SuperOpJson { dim: e.dim(), kraus: e.kraus().iter().map(operator_to_json).collect() }
}

// ---- structures ----

fn register_from(qubits: &[String]) -> Result<Register, IoError> {
    Register::new(qubits.iter().cloned()).map_err(IoError::invalid)
}

fn admissible_from(v: &AdmissibleJson, n: usize) -> Result<ValuationSet, IoError> {
    match v {
        AdmissibleJson::Keyword(k) if k == "all" => Ok(ValuationSet::all(n)),
        AdmissibleJson::Keyword(k) => Err(IoError::invalid(format!("V must be \"all\" or a list, got \"{k}\""))),
        AdmissibleJson::Valuations(vs) => ValuationSet::from_bitstrings(n, vs.iter()).map_err(IoError::invalid),
    }
}

fn admissible_to(v: &ValuationSet) -> AdmissibleJson {
    if v.is_full() {
        AdmissibleJson::Keyword("all".into())
    } else {
        AdmissibleJson::Valuations(v.to_bitstrings())
    }
}

fn partition_from(p: &Option<Vec<Vec<String>>>, register: &Register) -> Result<Partition, IoError> {
    match p {
        None => Ok(Partition::whole(register)),
        Some(blocks) => {
            let blocks = blocks.iter().map(|b| b.iter().cloned().collect::<QubitSet>()).collect();
            Partition::new(blocks, register).map_err(IoError::invalid)
        }
    }
}

/// Block qubits in register order.
fn block_names(block: &QubitSet, register: &Register) -> Vec<String> {
    register.names().iter().filter(|q| block.contains(*q)).cloned().collect()
}

fn block_key(block: &QubitSet, register: &Register) -> String {
    block_names(block, register).join(",")
}

pub fn structure_from_json(s: &StructureJson, tol: f64) -> Result<Structure, IoError> {
    let register = register_from(&s.qubits)?;
    let admissible = admissible_from(&s.admissible, register.len())?;
    let partition = partition_from(&s.partition, &register)?;
    let state = match &s.state {
        StateJson::Global(m) => StateSpec::Global(density_from_json(m, tol)?),
        StateJson::Blocks(map) => {
            let mut states = Vec::new();
            for b in partition.blocks() {
                let key = block_key(b, &register);
                let m = map.get(&key).ok_or_else(|| IoError::invalid(format!("no state for block \"{key}\"")))?;
                states.push(density_from_json(m, tol)?);
            }
            if let Some(k) = map.keys().find(|k| !partition.blocks().iter().any(|b| block_key(b, &register) == **k)) {
                return Err(IoError::invalid(format!("state given for \"{k}\", which is not a block")));
            }
            StateSpec::Blocks(states)
        }
    };
    let mut assignment = BTreeMap::new();
    for (x, e) in &s.assign {
        let name = x.strip_prefix('$').unwrap_or(x);
        assignment.insert(name.to_string(), superop_from_json(e)?);
    }
    Structure::new(register, admissible, partition, state, assignment).map_err(IoError::invalid)
}

pub fn structure_to_json(m: &Structure) -> StructureJson {
    let register = m.register();
    let blocks = m.partition().blocks();
    let state = match m.state() {
        StateSpec::Global(rho) => StateJson::Global(density_to_json(rho)),
        StateSpec::Blocks(states) => StateJson::Blocks(
            blocks.iter().zip(states).map(|(b, r)| (block_key(b, register), density_to_json(r))).collect(),
        ),
    };
    StructureJson {
        qubits: register.names().to_vec(),
        admissible: admissible_to(m.admissible()),
        partition: Some(blocks.iter().map(|b| block_names(b, register)).collect()),
        state,
        assign: m.assignment().iter().map(|(x, e)| (x.clone(), superop_to_json(e))).collect(),
    }
}

pub fn load_structure(path: &Path, tol: f64) -> Result<Structure, IoError> {
    structure_from_json(&read_json(path)?, tol)
}

// ---- derivations ----

fn formula_text(text: &str) -> Result<Formula, IoError> {
    parse_formula(text).map_err(|e| IoError::Syntax(format!("`{text}`: {e}")))
}

fn term_text(text: &str) -> Result<Term, IoError> {
    parse_term(text).map_err(|e| IoError::Syntax(format!("`{text}`: {e}")))
}

fn justification_from(j: &JustJson) -> Result<Justification, IoError> {
    Ok(match j {
        JustJson::Tag(t) => match t.as_str() {
            "P" => Justification::Premise,
            "H" => Justification::Hypothesis,
            other => return Err(IoError::invalid(format!("unknown justification \"{other}\""))),
        },
        JustJson::Axiom { axiom, from, pattern, binding } => {
            let axiom: Axiom = axiom.parse().map_err(IoError::invalid)?;
            let rcf = match (pattern, binding) {
                (None, None) => None,
                (Some(p), b) => {
                    let mut bound = BTreeMap::new();
                    for (x, t) in b.iter().flatten() {
                        bound.insert(x.strip_prefix('$').unwrap_or(x).to_string(), term_text(t)?);
                    }
                    Some((formula_text(p)?, bound))
                }
                (None, Some(_)) => return Err(IoError::invalid("binding given without pattern")),
            };
            Justification::Axiom { axiom, from: from.clone(), rcf }
        }
        JustJson::Qmp { qmp: [i, j] } => Justification::Qmp(*i, *j),
        JustJson::Cmp { cmp: [i, j] } => Justification::Cmp(*i, *j),
        JustJson::Template { template, from } => {
            Justification::Template { template: template.parse::<Template>().map_err(IoError::invalid)?, from: from.clone() }
        }
        JustJson::Discharge { discharge: [h, c] } => Justification::Discharge(*h, *c),
    })
}

fn justification_to(j: &Justification) -> JustJson {
    match j {
        Justification::Premise => JustJson::Tag("P".into()),
        Justification::Hypothesis => JustJson::Tag("H".into()),
        Justification::Axiom { axiom, from, rcf } => JustJson::Axiom {
            axiom: axiom.name().into(),
            from: from.clone(),
            pattern: rcf.as_ref().map(|(p, _)| eqol_core::lang::print_formula(p)),
            binding: rcf.as_ref().map(|(_, b)| {
                b.iter().map(|(x, t)| (x.clone(), eqol_core::lang::print_term(t))).collect()
            }),
        },
        Justification::Qmp(i, j) => JustJson::Qmp { qmp: [*i, *j] },
        Justification::Cmp(i, j) => JustJson::Cmp { cmp: [*i, *j] },
        Justification::Template { template, from } => {
            JustJson::Template { template: template.name().into(), from: from.clone() }
        }
        Justification::Discharge(h, c) => JustJson::Discharge { discharge: [*h, *c] },
    }
}

pub fn derivation_from_json(d: &DerivationJson) -> Result<DerivationScript, IoError> {
    let qubits = d.qubits.as_deref().map(register_from).transpose()?;
    let steps = d
        .steps
        .iter()
        .map(|s| Ok(ScriptStep { formula: s.formula.clone(), just: justification_from(&s.just)? }))
        .collect::<Result<_, IoError>>()?;
    Ok(DerivationScript { qubits, steps })
}

pub fn derivation_to_json(d: &DerivationScript) -> DerivationJson {
    DerivationJson {
        qubits: d.qubits.as_ref().map(|r| r.names().to_vec()),
        steps: d.steps.iter().map(|s| StepJson { formula: s.formula.clone(), just: justification_to(&s.just) }).collect(),
    }
}

pub fn load_derivation(path: &Path) -> Result<DerivationScript, IoError> {
    derivation_from_json(&read_json(path)?)
}

// ---- chains and loops ----

pub fn chain_from_json(c: &ChainJson, tol: f64) -> Result<ExogenousQmc, IoError> {
    let register = register_from(&c.qubits)?;
    let epsilon = superop_from_json(&c.epsilon)?;
    let init = c.init.states.iter().map(|m| density_from_json(m, tol)).collect::<Result<Vec<_>, _>>()?;
    if init.is_empty() {
        return Err(IoError::invalid("chain has no initial states"));
    }
    let ap = c.ap.iter().map(|t| formula_text(t)).collect::<Result<Vec<_>, _>>()?;
    let admissible = admissible_from(&c.admissible, register.len())?;
    let partition = partition_from(&c.partition, &register)?;
    ExogenousQmc::new(register, epsilon, init, ap, admissible, partition).map_err(IoError::invalid)
}

pub fn load_chain(path: &Path, tol: f64) -> Result<ExogenousQmc, IoError> {
    chain_from_json(&read_json(path)?, tol)
}

pub fn loop_from_json(l: &LoopJson) -> Result<GeneralizedQuantumLoop, IoError> {
    let register = register_from(&l.qubits)?;
    let body = superop_from_json(&l.body)?;
    let guard = match &l.guard {
        GuardJson::Valuations(vs) => {
            Guard::Valuations(ValuationSet::from_bitstrings(register.len(), vs.iter()).map_err(IoError::invalid)?)
        }
        GuardJson::Projector(m) => Guard::Projector(operator_from_json(m)?.to_dense()),
    };
    GeneralizedQuantumLoop::new(register, body, guard).map_err(IoError::invalid)
}

pub fn load_loop(path: &Path) -> Result<GeneralizedQuantumLoop, IoError> {
    loop_from_json(&read_json(path)?)
}

pub fn load_density(path: &Path, tol: f64) -> Result<DensityOperator, IoError> {
    density_from_json(&read_json(path)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_forms() {
        let m: MatrixJson = serde_json::from_str(r#"{"dim":2,"kind":"diagonal","diag":[0.25,[0.75,0]]}"#).unwrap();
        assert_eq!(
            operator_from_json(&m).unwrap(),
            Operator::Diagonal(vec![C64::new(0.25, 0.0), C64::new(0.75, 0.0)])
        );
        let bad: Result<MatrixJson, _> = serde_json::from_str(r#"{"dim":2,"kind":"sparse","diag":[1,0]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn shape_errors() {
        let m: MatrixJson = serde_json::from_str(r#"{"dim":3,"kind":"diagonal","diag":[1,0,0]}"#).unwrap();
        assert!(operator_from_json(&m).is_err());
        let m: MatrixJson = serde_json::from_str(r#"{"dim":2,"kind":"dense","rows":[[[1,0],[0,0]]]}"#).unwrap();
        assert!(operator_from_json(&m).is_err());
    }

    #[test]
    fn justification_forms() {
        let d: DerivationJson = serde_json::from_str(
            r#"{"steps":[
                {"formula":"QF","just":"P"},
                {"formula":"QF","just":{"axiom":"Unit"}},
                {"formula":"QF","just":{"qmp":[1,2]}},
                {"formula":"QF","just":{"template":"Contra","from":[1]}},
                {"formula":"QF","just":{"discharge":[1,2]}}]}"#,
        )
        .unwrap();
        let s = derivation_from_json(&d).unwrap();
        assert_eq!(s.steps[1].just, Justification::axiom(Axiom::Unit));
        assert_eq!(s.steps[2].just, Justification::Qmp(1, 2));
        assert_eq!(s.steps[4].just, Justification::Discharge(1, 2));
        assert_eq!(derivation_to_json(&s), d);
    }
}
