//! Replay of derivation scripts: premises, hypotheses, axiom instances, modus
//! ponens at both levels, the template library and hypothesis discharge.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::axioms::{is_axiom_instance, is_rcf_instance, sub_diff_instances, sub_union_instance, Axiom, AxiomContext};
use super::templates::{is_propositional, is_template_instance, supporting_instances, Template};
use crate::lang::{
    desugar, desugar_classical, is_tautology, parse_classical, parse_formula, quantum_atoms, skeleton_entails,
    Classical, Formula, ParseError, Term,
};
use crate::register::{QubitSet, Register};

#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    Premise,
    Hypothesis,
    /// An axiom instance; with `from`, a propositional consequence of the cited
    /// steps together with instances of the axiom.
    Axiom { axiom: Axiom, from: Option<Vec<usize>>, rcf: Option<(Formula, BTreeMap<String, Term>)> },
    /// Quantum modus ponens: step `.0` is the antecedent, step `.1` the implication.
    Qmp(usize, usize),
    /// Classical modus ponens, same layout as [`Justification::Qmp`].
    Cmp(usize, usize),
    Template { template: Template, from: Option<Vec<usize>> },
    /// `h => c` from a derivation of `c` under hypothesis `h`.
    Discharge(usize, usize),
}

impl Justification {
    pub fn axiom(axiom: Axiom) -> Self {
        Justification::Axiom { axiom, from: None, rcf: None }
    }

    /// Step numbers this justification refers to.
    pub fn cited(&self) -> Vec<usize> {
        match self {
            Justification::Premise | Justification::Hypothesis => Vec::new(),
            Justification::Axiom { from, .. } | Justification::Template { from, .. } => from.clone().unwrap_or_default(),
            Justification::Qmp(i, j) | Justification::Cmp(i, j) | Justification::Discharge(i, j) => alloc::vec![*i, *j],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptStep {
    pub formula: String,
    pub just: Justification,
}

/// Numbered steps (from 1) and optionally the declared qubits, which the
/// schemas mentioning `qB` need.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DerivationScript {
    pub qubits: Option<Register>,
    pub steps: Vec<ScriptStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error("step {step}: {source}")]
    Parse { step: usize, source: ParseError },
    #[error("step {step} cites step {cited}, which does not precede it")]
    IndexOutOfRange { step: usize, cited: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepStatus {
    Accepted,
    Rejected(String),
    Unsupported(String),
}

impl StepStatus {
    pub fn is_accepted(&self) -> bool {
        matches!(self, StepStatus::Accepted)
    }

    pub fn label(&self) -> &'static str {
        match self {
            StepStatus::Accepted => "ACCEPTED",
            StepStatus::Rejected(_) => "REJECTED",
            StepStatus::Unsupported(_) => "UNSUPPORTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepFormula {
    Quantum(Formula),
    Classical(Classical),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub index: usize,
    pub formula: StepFormula,
    pub status: StepStatus,
    /// Hypotheses (step numbers) the step rests on.
    pub depends_on: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationReport {
    pub steps: Vec<StepReport>,
}

impl DerivationReport {
    pub fn accepted(&self) -> usize {
        self.steps.iter().filter(|s| s.status.is_accepted()).count()
    }

    pub fn rejected(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.status, StepStatus::Rejected(_))).count()
    }

    pub fn unsupported(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.status, StepStatus::Unsupported(_))).count()
    }

    /// Every step accepted.
    pub fn is_valid(&self) -> bool {
        self.steps.iter().all(|s| s.status.is_accepted())
    }

    /// Hypotheses the last step still depends on.
    pub fn open_hypotheses(&self) -> BTreeSet<usize> {
        self.steps.last().map(|s| s.depends_on.clone()).unwrap_or_default()
    }
}

/// Formula text as a quantum formula, or failing that as a classical one.
pub fn parse_step(text: &str) -> Result<StepFormula, ParseError> {
    match parse_formula(text) {
        Ok(f) => Ok(StepFormula::Quantum(f)),
        Err(qe) => parse_classical(text).map(StepFormula::Classical).map_err(|_| qe),
    }
}

struct Replay<'a> {
    ctx: AxiomContext,
    done: Vec<StepReport>,
    script: &'a DerivationScript,
}

fn reject(msg: impl Into<String>) -> StepStatus {
    StepStatus::Rejected(msg.into())
}

impl Replay<'_> {
    fn get(&self, k: usize) -> &StepReport {
        &self.done[k - 1]
    }

    fn quantum(&self, k: usize) -> Option<&Formula> {
        match &self.get(k).formula {
            StepFormula::Quantum(f) => Some(f),
            StepFormula::Classical(_) => None,
        }
    }

    fn deps(&self, cited: &[usize]) -> BTreeSet<usize> {
        cited.iter().flat_map(|k| self.get(*k).depends_on.iter().copied()).collect()
    }

    /// First cited step that was not accepted, as the status to inherit.
    fn inherited(&self, cited: &[usize]) -> Option<StepStatus> {
        for k in cited {
            match &self.get(*k).status {
                StepStatus::Accepted => {}
                StepStatus::Rejected(_) => return Some(reject(format!("relies on rejected step {k}"))),
                StepStatus::Unsupported(_) => {
                    return Some(StepStatus::Unsupported(format!("relies on unsupported step {k}")))
                }
            }
        }
        None
    }

    fn cited_quantum(&self, cited: &[usize]) -> Result<Vec<Formula>, StepStatus> {
        cited
            .iter()
            .map(|k| self.quantum(*k).cloned().ok_or_else(|| reject(format!("step {k} is classical"))))
            .collect()
    }

    fn entailed(&self, premises: &[Formula], goal: &Formula) -> StepStatus {
        match skeleton_entails(premises, goal) {
            Ok(true) => StepStatus::Accepted,
            Ok(false) => reject("not a propositional consequence of the cited steps"),
            Err(e) => StepStatus::Unsupported(e.to_string()),
        }
    }

    fn axiom_step(
        &self,
        f: &StepFormula,
        axiom: Axiom,
        from: &Option<Vec<usize>>,
        rcf: &Option<(Formula, BTreeMap<String, Term>)>,
    ) -> StepStatus {
        let f = match f {
            StepFormula::Classical(a) => {
                return match (axiom, from) {
                    (Axiom::CTaut, None) => match is_tautology(a) {
                        Ok(true) => StepStatus::Accepted,
                        Ok(false) => reject("not a classical tautology"),
                        Err(e) => StepStatus::Unsupported(e.to_string()),
                    },
                    _ => reject(format!("{axiom} does not apply to classical formulae")),
                };
            }
            StepFormula::Quantum(f) => f,
        };
        let Some(cited) = from else {
            if let (Axiom::Rcf, Some((pattern, binding))) = (axiom, rcf) {
                return if is_rcf_instance(f, pattern, binding) {
                    StepStatus::Accepted
                } else {
                    StepStatus::Unsupported("not decided: RCF instance outside the propositional fragment".into())
                };
            }
            if is_axiom_instance(f, axiom, &self.ctx) {
                return StepStatus::Accepted;
            }
            return match axiom {
                Axiom::Rcf => StepStatus::Unsupported("not decided: RCF instance outside the propositional fragment".into()),
                Axiom::SubDiff | Axiom::Unit if self.ctx.register.is_none() => {
                    StepStatus::Unsupported(format!("{axiom} needs the script's qubit list"))
                }
                _ => reject(format!("not an instance of {axiom}")),
            };
        };
        let mut premises = match self.cited_quantum(cited) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match axiom {
            Axiom::QTaut => {}
            Axiom::SubEmpty => premises.push(Formula::SubSys(QubitSet::new())),
            Axiom::SubUnion => {
                let mut sets = BTreeSet::new();
                for g in premises.iter().chain(core::iter::once(f)).flat_map(quantum_atoms) {
                    if let Formula::SubSys(g) = g {
                        sets.insert(g);
                    }
                }
                for g1 in &sets {
                    for g2 in &sets {
                        premises.push(sub_union_instance(g1, g2));
                    }
                }
            }
            Axiom::SubDiff => match &self.ctx.register {
                Some(r) => premises.extend(sub_diff_instances(r)),
                None => return StepStatus::Unsupported("SubDiff needs the script's qubit list".into()),
            },
            _ => return StepStatus::Unsupported(format!("{axiom} cannot be combined with cited steps")),
        }
        self.entailed(&premises, f)
    }

    fn template_step(&self, f: &StepFormula, template: Template, from: &Option<Vec<usize>>) -> StepStatus {
        let StepFormula::Quantum(f) = f else { return reject("templates apply to quantum formulae only") };
        let Some(cited) = from else {
            return if is_template_instance(f, template) {
                StepStatus::Accepted
            } else {
                reject(format!("not an instance of {template}"))
            };
        };
        let mut premises = match self.cited_quantum(cited) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if !is_propositional(template) {
            let mut context = premises.clone();
            context.push(f.clone());
            premises.extend(supporting_instances(template, &context));
        }
        self.entailed(&premises, f)
    }

    fn modus_ponens(&self, f: &StepFormula, i: usize, j: usize) -> StepStatus {
        match (f, &self.get(i).formula, &self.get(j).formula) {
            (StepFormula::Quantum(b), StepFormula::Quantum(a), StepFormula::Quantum(imp)) => {
                match desugar(imp) {
                    Formula::Implies(x, y) if *x == desugar(a) && *y == desugar(b) => StepStatus::Accepted,
                    Formula::Implies(x, _) if *x != desugar(a) => {
                        reject(format!("antecedent of step {j} does not match step {i}"))
                    }
                    Formula::Implies(..) => reject(format!("consequent of step {j} does not match")),
                    _ => reject(format!("step {j} is not an implication")),
                }
            }
            _ => reject("QMP needs quantum formulae"),
        }
    }

    fn classical_mp(&self, f: &StepFormula, i: usize, j: usize) -> StepStatus {
        match (f, &self.get(i).formula, &self.get(j).formula) {
            (StepFormula::Classical(b), StepFormula::Classical(a), StepFormula::Classical(imp)) => {
                match desugar_classical(imp) {
                    Classical::Implies(x, y) if *x == desugar_classical(a) && *y == desugar_classical(b) => {
                        StepStatus::Accepted
                    }
                    Classical::Implies(..) => reject(format!("step {j} is not step {i} implying this step")),
                    _ => reject(format!("step {j} is not an implication")),
                }
            }
            _ => reject("CMP needs classical formulae"),
        }
    }

    fn discharge(&self, f: &StepFormula, h: usize, c: usize) -> (StepStatus, BTreeSet<usize>) {
        let mut deps = self.get(c).depends_on.clone();
        deps.remove(&h);
        if !matches!(self.script.steps[h - 1].just, Justification::Hypothesis) {
            return (reject(format!("step {h} is not a hypothesis")), deps);
        }
        let status = match (f, &self.get(h).formula, &self.get(c).formula) {
            (StepFormula::Quantum(g), StepFormula::Quantum(a), StepFormula::Quantum(b)) => {
                if desugar(g) == desugar(&Formula::implies(a.clone(), b.clone())) {
                    StepStatus::Accepted
                } else {
                    reject(format!("not step {h} implying step {c}"))
                }
            }
            (StepFormula::Classical(g), StepFormula::Classical(a), StepFormula::Classical(b)) => {
                if desugar_classical(g) == desugar_classical(&Classical::implies(a.clone(), b.clone())) {
                    StepStatus::Accepted
                } else {
                    reject(format!("not step {h} implying step {c}"))
                }
            }
            _ => reject("mixed classical and quantum steps"),
        };
        (status, deps)
    }
}

/// Check every step of `script`. Parse failures and citations of later steps
/// are errors; everything else is reported per step.
pub fn verify_derivation(script: &DerivationScript) -> Result<DerivationReport, DerivationError> {
    let mut replay =
        Replay { ctx: AxiomContext { register: script.qubits.clone() }, done: Vec::new(), script };
    for (k, step) in script.steps.iter().enumerate() {
        let index = k + 1;
        let formula = parse_step(&step.formula).map_err(|source| DerivationError::Parse { step: index, source })?;
        let cited = step.just.cited();
        if let Some(&bad) = cited.iter().find(|&&c| c == 0 || c >= index) {
            return Err(DerivationError::IndexOutOfRange { step: index, cited: bad });
        }
        let (status, depends_on) = match &step.just {
            Justification::Premise => (StepStatus::Accepted, BTreeSet::new()),
            Justification::Hypothesis => (StepStatus::Accepted, BTreeSet::from([index])),
            Justification::Discharge(h, c) => replay.discharge(&formula, *h, *c),
            other => {
                let status = match other {
                    Justification::Axiom { axiom, from, rcf } => replay.axiom_step(&formula, *axiom, from, rcf),
                    Justification::Template { template, from } => replay.template_step(&formula, *template, from),
                    Justification::Qmp(i, j) => replay.modus_ponens(&formula, *i, *j),
                    Justification::Cmp(i, j) => replay.classical_mp(&formula, *i, *j),
                    _ => unreachable!(),
                };
                (status, replay.deps(&cited))
            }
        };
        let status = match (status, replay.inherited(&cited)) {
            (StepStatus::Accepted, Some(inherited)) => inherited,
            (s, _) => s,
        };
        replay.done.push(StepReport { index, formula, status, depends_on });
    }
    Ok(DerivationReport { steps: replay.done })
}
