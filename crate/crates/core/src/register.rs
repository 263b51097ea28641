//! Qubit names and their canonical order.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub type QubitSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegisterError {
    #[error("duplicate qubit name `{0}`")]
    Duplicate(String),
    #[error("invalid qubit name `{0}`")]
    InvalidName(String),
    #[error("undeclared qubit `{0}`")]
    Undeclared(String),
    #[error("register has {0} qubits, more than the supported {1}")]
    TooLarge(usize, usize),
}

/// Upper bound on register size; valuations are stored as machine words.
pub const MAX_QUBITS: usize = 24;

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered list of qubit names. Position 0 is the leftmost tensor factor
/// and the most significant bit of a valuation index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    names: Vec<String>,
}

impl Register {
    pub fn new<I, S>(names: I) -> Result<Self, RegisterError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !is_identifier(n) || n == "true" || n == "false" {
                return Err(RegisterError::InvalidName(n.clone()));
            }
            if !seen.insert(n.clone()) {
                return Err(RegisterError::Duplicate(n.clone()));
            }
        }
        if names.len() > MAX_QUBITS {
            return Err(RegisterError::TooLarge(names.len(), MAX_QUBITS));
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn dim(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, RegisterError> {
        self.position(name).ok_or_else(|| RegisterError::Undeclared(name.into()))
    }

    /// Positions of `set` in canonical order.
    pub fn positions(&self, set: &QubitSet) -> Result<Vec<usize>, RegisterError> {
        let mut out = Vec::with_capacity(set.len());
        for q in set {
            out.push(self.require(q)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn all(&self) -> QubitSet {
        self.names.iter().cloned().collect()
    }

    pub fn complement(&self, set: &QubitSet) -> QubitSet {
        self.names.iter().filter(|n| !set.contains(*n)).cloned().collect()
    }

    pub fn contains_all(&self, set: &QubitSet) -> bool {
        set.iter().all(|q| self.position(q).is_some())
    }

    /// The sub-register for `set`, in canonical order.
    pub fn restrict(&self, set: &QubitSet) -> Register {
        Register { names: self.names.iter().filter(|n| set.contains(*n)).cloned().collect() }
    }
}

pub fn qubit_set<I, S>(names: I) -> QubitSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names.into_iter().map(Into::into).collect()
}
