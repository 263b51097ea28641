//! Structures, satisfaction, axiom matching and derivation replay.

use alloc::string::String;

mod axioms;
mod derivation;
mod fuzz;
mod interp;
mod satisfy;
mod structure;
mod templates;

pub use axioms::{
    fadd_instance, is_axiom_instance, is_rcf_instance, matching_axioms, mo1_instance, mon_instance, prob_instance,
    sub_diff_instances, sub_union_instance, unit_instance, Axiom, AxiomContext, UnknownAxiom,
};
pub use derivation::{
    parse_step, verify_derivation, DerivationError, DerivationReport, DerivationScript, Justification, ScriptStep,
    StepFormula, StepReport, StepStatus,
};
pub use fuzz::{
    fuzz_instance, fuzz_range, fuzz_schema, instance, instance_seed, soundness_fuzz, Counterexample, FuzzOptions,
    FuzzReport, Schema, SchemaReport,
};
pub use interp::{eval_term, eval_terms, interp_term, split_scope, Interpreter};
pub use satisfy::{model_check, satisfies, AtomValue, CheckReport, Evaluator};
pub use templates::{
    contra_instance, eq_sym_instance, is_template_instance, leq_trans_instance, pos_tensor_instance,
    supporting_instances, Template, UnknownTemplate,
};
pub use structure::{global_density, Partition, StateSpec, Structure, StructureError, PRODUCT_TOL, SUPPORT_TOL};

use crate::lang::LangError;
use crate::register::RegisterError;
use crate::superop::SuperOpError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    SuperOp(#[from] SuperOpError),
    #[error(transparent)]
    Register(#[from] RegisterError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("variable `${0}` is not assigned")]
    UnboundVariable(String),
    #[error("malformed tensor: {0}")]
    MalformedTensor(String),
    #[error("term value {0} is negative; the structure is not physical")]
    NegativeValue(f64),
}
