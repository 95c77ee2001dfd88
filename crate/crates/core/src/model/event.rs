use std::collections::BTreeMap;

use super::structure::NetworkStructure;
use crate::error::{Error, Result};

/// A conjunction of `variable = value` literals over a subset of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Event {
    values: BTreeMap<usize, usize>,
}

impl Event {
    /// Event from label pairs. Must be nonempty; each variable may appear once.
    pub fn new<S: AsRef<str>>(structure: &NetworkStructure, literals: &[(S, S)]) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::InvalidEvent("event is empty".into()));
        }
        let mut values = BTreeMap::new();
        for (name, label) in literals {
            let v = structure.lookup(name.as_ref())?;
            let value = structure.value_of(v, label.as_ref())?;
            if values.insert(v, value).is_some_and(|prev| prev != value) {
                return Err(Error::InvalidEvent(format!(
                    "conflicting values for `{}`",
                    name.as_ref()
                )));
            }
        }
        Ok(Self { values })
    }

    /// Parses `Var=value(,Var=value)*`.
    pub fn parse(structure: &NetworkStructure, expr: &str) -> Result<Self> {
        let literals = expr
            .split(',')
            .map(|lit| {
                let lit = lit.trim();
                lit.split_once('=')
                    .map(|(n, v)| (n.trim(), v.trim()))
                    .filter(|(n, v)| !n.is_empty() && !v.is_empty())
                    .ok_or_else(|| Error::InvalidEvent(format!("malformed literal `{lit}`")))
            })
            .collect::<Result<Vec<_>>>();
        if expr.trim().is_empty() {
            return Err(Error::InvalidEvent("event is empty".into()));
        }
        Self::new(structure, &literals?)
    }

    /// Event from variable and value indices.
    pub fn from_indices(structure: &NetworkStructure, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let values: BTreeMap<usize, usize> = pairs.into_iter().collect();
        for (&v, &x) in &values {
            if v >= structure.len() || x >= structure.cardinality(v) {
                return Err(Error::InvalidEvent(format!("literal ({v}, {x}) out of range")));
            }
        }
        Ok(Self { values })
    }

    /// The empty conjunction (always true); only meaningful for normalization checks.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.values.get(&v).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values.iter().map(|(&v, &x)| (v, x))
    }

    /// True when the full instantiation agrees with every literal.
    pub fn matches(&self, assignment: &[usize]) -> bool {
        self.values.iter().all(|(&v, &x)| assignment[v] == x)
    }

    pub fn format(&self, structure: &NetworkStructure) -> String {
        self.values
            .iter()
            .map(|(&v, &x)| format!("{}={}", structure.name(v), structure.variable(v).domain()[x]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Values of the indicator leaves λ, one vector per variable.
///
/// Marginalized variables have every indicator at 1; observed variables have
/// the observed value at 1 and the rest at 0. Arbitrary reals are allowed for
/// polynomial-identity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicators {
    lambda: Vec<Vec<f64>>,
}

impl Indicators {
    pub fn marginalized(structure: &NetworkStructure) -> Self {
        Self {
            lambda: (0..structure.len())
                .map(|v| vec![1.0; structure.cardinality(v)])
                .collect(),
        }
    }

    pub fn from_event(structure: &NetworkStructure, event: &Event) -> Self {
        let mut ind = Self::marginalized(structure);
        for (v, x) in event.iter() {
            for (i, l) in ind.lambda[v].iter_mut().enumerate() {
                *l = if i == x { 1.0 } else { 0.0 };
            }
        }
        ind
    }

    pub fn from_assignment(structure: &NetworkStructure, assignment: &[usize]) -> Self {
        let mut ind = Self::marginalized(structure);
        for (v, &x) in assignment.iter().enumerate() {
            for (i, l) in ind.lambda[v].iter_mut().enumerate() {
                *l = if i == x { 1.0 } else { 0.0 };
            }
        }
        ind
    }

    pub fn from_values(lambda: Vec<Vec<f64>>) -> Self {
        Self { lambda }
    }

    pub fn value(&self, v: usize, x: usize) -> f64 {
        self.lambda[v][x]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.lambda
    }
}
