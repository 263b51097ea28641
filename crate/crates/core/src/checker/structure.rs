//! Quantum operator structures: register, admissible valuations, partition,
//! state and variable assignment.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::density::{DensityError, DensityOperator};
use crate::matrix::inverse_permutation;
use crate::register::{QubitSet, Register, RegisterError};
use crate::superop::{join_names, SuperOperator};
use crate::valuation::{bitstring, ValuationSet};

/// Weight tolerated on valuations outside the admissible set.
pub const SUPPORT_TOL: f64 = 1e-8;
/// Tolerance of the product-state check for partitioned global states.
pub const PRODUCT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Register(#[from] RegisterError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("qubit `{0}` appears in more than one block")]
    PartitionOverlap(String),
    #[error("qubit `{0}` is not covered by the partition")]
    PartitionMissing(String),
    #[error("admissible valuation set is empty")]
    EmptyAdmissible,
    #[error("admissible valuations have width {0}, register has {1} qubits")]
    AdmissibleWidth(usize, usize),
    #[error("state has dimension {got}, expected {expected}")]
    StateDimension { got: usize, expected: usize },
    #[error("{got} block states given for {expected} blocks")]
    BlockCount { got: usize, expected: usize },
    #[error("no state given for block {{{0}}}")]
    MissingBlock(String),
    #[error("state puts weight {weight:e} on inadmissible valuation {valuation}")]
    OutsideAdmissible { valuation: String, weight: f64 },
    #[error("global state is not the product of its block marginals (deviation {0:e})")]
    NotProduct(f64),
    #[error("assignment of `{var}` has dimension {got}, expected {expected}")]
    AssignmentDimension { var: String, got: usize, expected: usize },
}

/// Partition of the register into non-empty disjoint blocks, kept in the given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<QubitSet>,
}

impl Partition {
    /// Empty blocks are dropped.
    pub fn new(blocks: Vec<QubitSet>, register: &Register) -> Result<Self, StructureError> {
        let mut seen = QubitSet::new();
        let mut kept = Vec::new();
        for b in blocks {
            for q in &b {
                register.require(q)?;
                if !seen.insert(q.clone()) {
                    return Err(StructureError::PartitionOverlap(q.clone()));
                }
            }
            if !b.is_empty() {
                kept.push(b);
            }
        }
        if let Some(q) = register.names().iter().find(|q| !seen.contains(*q)) {
            return Err(StructureError::PartitionMissing(q.clone()));
        }
        Ok(Self { blocks: kept })
    }

    /// One block holding the whole register.
    pub fn whole(register: &Register) -> Self {
        let all = register.all();
        Self { blocks: if all.is_empty() { Vec::new() } else { alloc::vec![all] } }
    }

    /// One block per qubit.
    pub fn discrete(register: &Register) -> Self {
        Self { blocks: register.names().iter().map(|q| crate::register::qubit_set([q.clone()])).collect() }
    }

    pub fn blocks(&self) -> &[QubitSet] {
        &self.blocks
    }

    /// `g` is a union of blocks.
    pub fn in_alg(&self, g: &QubitSet) -> bool {
        let covered: usize = self.blocks.iter().filter(|b| b.is_subset(g)).map(|b| b.len()).sum();
        let touched = self.blocks.iter().all(|b| b.is_subset(g) || b.is_disjoint(g));
        touched && covered == g.len()
    }

    /// All `2^|S|` unions of blocks, indexed by block bitmask.
    pub fn alg_of(&self) -> Vec<QubitSet> {
        let k = self.blocks.len();
        (0u64..(1u64 << k))
            .map(|mask| {
                let mut g = QubitSet::new();
                for (i, b) in self.blocks.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        g.extend(b.iter().cloned());
                    }
                }
                g
            })
            .collect()
    }
}

/// The state of a structure: either global, or one state per block (aligned with
/// the partition's block order, each over its qubits in canonical order).
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Global(DensityOperator),
    Blocks(Vec<DensityOperator>),
}

/// Tensor the block states together and reorder the factors canonically.
pub fn global_density(
    register: &Register,
    partition: &Partition,
    state: &StateSpec,
) -> Result<DensityOperator, StructureError> {
    match state {
        StateSpec::Global(rho) => {
            if rho.dim() != register.dim() {
                return Err(StructureError::StateDimension { got: rho.dim(), expected: register.dim() });
            }
            Ok(rho.clone())
        }
        StateSpec::Blocks(states) => {
            if states.len() != partition.blocks().len() {
                return Err(StructureError::BlockCount { got: states.len(), expected: partition.blocks().len() });
            }
            let mut acc = DensityOperator::Diagonal(alloc::vec![1.0]);
            let mut layout = Vec::with_capacity(register.len());
            for (b, s) in partition.blocks().iter().zip(states) {
                let expected = 1usize << b.len();
                if s.dim() != expected {
                    return Err(StructureError::StateDimension { got: s.dim(), expected });
                }
                acc = acc.tensor(s);
                layout.extend(register.positions(b)?);
            }
            Ok(acc.permute_qubits(&inverse_permutation(&layout)).expect("layout is a permutation"))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    register: Register,
    admissible: ValuationSet,
    partition: Partition,
    state: StateSpec,
    rho: DensityOperator,
    assignment: BTreeMap<String, SuperOperator>,
}

impl Structure {
    pub fn new(
        register: Register,
        admissible: ValuationSet,
        partition: Partition,
        state: StateSpec,
        assignment: BTreeMap<String, SuperOperator>,
    ) -> Result<Self, StructureError> {
        let n = register.len();
        if admissible.num_qubits() != n {
            return Err(StructureError::AdmissibleWidth(admissible.num_qubits(), n));
        }
        if admissible.is_empty() {
            return Err(StructureError::EmptyAdmissible);
        }
        for (x, e) in &assignment {
            if e.dim() != register.dim() {
                return Err(StructureError::AssignmentDimension {
                    var: x.clone(),
                    got: e.dim(),
                    expected: register.dim(),
                });
            }
        }
        let rho = global_density(&register, &partition, &state)?;
        for i in 0..rho.dim() {
            let w = rho.population(i);
            if !admissible.contains(i) && w > SUPPORT_TOL {
                return Err(StructureError::OutsideAdmissible { valuation: bitstring(i, n), weight: w });
            }
        }
        if let StateSpec::Global(_) = &state {
            if partition.blocks().len() > 1 {
                let mut marginals = Vec::new();
                for b in partition.blocks() {
                    marginals.push(rho.reduced(&register.positions(b)?).map_err(DensityError::from)?);
                }
                let product = global_density(&register, &partition, &StateSpec::Blocks(marginals))?;
                let dev = product.max_abs_diff(&rho);
                if dev > PRODUCT_TOL {
                    return Err(StructureError::NotProduct(dev));
                }
            }
        }
        Ok(Self { register, admissible, partition, state, rho, assignment })
    }

    /// A structure around `rho` with no consistency checks; used where states are
    /// produced by evolution rather than supplied.
    pub fn unchecked(
        register: Register,
        admissible: ValuationSet,
        partition: Partition,
        rho: DensityOperator,
        assignment: BTreeMap<String, SuperOperator>,
    ) -> Self {
        Self { register, admissible, partition, state: StateSpec::Global(rho.clone()), rho, assignment }
    }

    /// Same register, admissible set, partition and assignment with another global
    /// state; no validation.
    pub fn with_state_unchecked(&self, rho: DensityOperator) -> Self {
        Self {
            register: self.register.clone(),
            admissible: self.admissible.clone(),
            partition: self.partition.clone(),
            state: StateSpec::Global(rho.clone()),
            rho,
            assignment: self.assignment.clone(),
        }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn num_qubits(&self) -> usize {
        self.register.len()
    }

    pub fn admissible(&self) -> &ValuationSet {
        &self.admissible
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn state(&self) -> &StateSpec {
        &self.state
    }

    pub fn assignment(&self) -> &BTreeMap<String, SuperOperator> {
        &self.assignment
    }

    /// Global state in canonical qubit order.
    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn describe(&self) -> String {
        let blocks: Vec<String> = self.partition.blocks().iter().map(|b| format!("{{{}}}", join_names(b))).collect();
        format!(
            "qubits [{}], |V| = {}, partition [{}], {} state",
            self.register.names().join(","),
            self.admissible.len(),
            blocks.join(" "),
            if self.rho.is_diagonal() { "diagonal" } else { "dense" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::qubit_set;

    fn reg2() -> Register {
        Register::new(["qb1", "qb2"]).unwrap()
    }

    #[test]
    fn alg_of_whole_and_discrete() {
        let r = reg2();
        let whole = Partition::whole(&r);
        assert_eq!(whole.alg_of(), vec![QubitSet::new(), r.all()]);
        assert!(!whole.in_alg(&qubit_set(["qb1"])));
        let d = Partition::discrete(&r);
        assert_eq!(d.alg_of().len(), 4);
        assert!(d.in_alg(&qubit_set(["qb2"])));
    }

    #[test]
    fn partition_validation() {
        let r = reg2();
        assert!(Partition::new(vec![qubit_set(["qb1"]), qubit_set(["qb1", "qb2"])], &r).is_err());
        assert!(Partition::new(vec![qubit_set(["qb1"])], &r).is_err());
        let p = Partition::new(vec![QubitSet::new(), r.all()], &r).unwrap();
        assert_eq!(p.blocks().len(), 1);
    }

    #[test]
    fn block_order_does_not_matter() {
        let r = reg2();
        let zero = DensityOperator::basis_state(2, 0);
        let one = DensityOperator::basis_state(2, 1);
        let p1 = Partition::new(vec![qubit_set(["qb1"]), qubit_set(["qb2"])], &r).unwrap();
        let p2 = Partition::new(vec![qubit_set(["qb2"]), qubit_set(["qb1"])], &r).unwrap();
        let g1 = global_density(&r, &p1, &StateSpec::Blocks(vec![zero.clone(), one.clone()])).unwrap();
        let g2 = global_density(&r, &p2, &StateSpec::Blocks(vec![one, zero])).unwrap();
        assert_eq!(g1, DensityOperator::basis_state(4, 1));
        assert_eq!(g1, g2);
    }

    #[test]
    fn support_must_be_admissible() {
        let r = reg2();
        let v = ValuationSet::from_bitstrings(2, ["00"]).unwrap();
        let s = StateSpec::Global(DensityOperator::Diagonal(vec![0.5, 0.0, 0.0, 0.5]));
        let e = Structure::new(r, v, Partition::whole(&reg2()), s, BTreeMap::new()).unwrap_err();
        assert!(matches!(e, StructureError::OutsideAdmissible { .. }));
    }

    #[test]
    fn entangled_global_state_needs_whole_block() {
        let r = reg2();
        let bellish = DensityOperator::Diagonal(vec![0.5, 0.0, 0.0, 0.5]);
        let e = Structure::new(
            r.clone(),
            ValuationSet::all(2),
            Partition::discrete(&r),
            StateSpec::Global(bellish.clone()),
            BTreeMap::new(),
        );
        assert!(matches!(e, Err(StructureError::NotProduct(_))));
        assert!(Structure::new(r.clone(), ValuationSet::all(2), Partition::whole(&r), StateSpec::Global(bellish), BTreeMap::new()).is_ok());
    }
}
