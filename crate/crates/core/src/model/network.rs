use std::fmt;

use super::credal::CredalSet;
use super::structure::NetworkStructure;
use crate::error::{Error, Result};

/// A credal Bayesian network: a DAG with one credal set per (variable, parent
/// instantiation) row. Rows are indexed as in [`NetworkStructure::row_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct CredalNetwork {
    structure: NetworkStructure,
    cpds: Vec<Vec<Option<CredalSet>>>,
}

/// One invariant violation found by [`CredalNetwork::validate_network`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.message, self.path)
    }
}

impl CredalNetwork {
    /// Builds a network from complete tables. Shape problems are reported by
    /// `validate_network`, not here.
    pub fn new(structure: NetworkStructure, cpds: Vec<Vec<CredalSet>>) -> Self {
        let cpds = cpds
            .into_iter()
            .map(|rows| rows.into_iter().map(Some).collect())
            .collect();
        Self::from_partial(structure, cpds)
    }

    /// Builds a network whose tables may have gaps (e.g. while parsing).
    pub fn from_partial(structure: NetworkStructure, mut cpds: Vec<Vec<Option<CredalSet>>>) -> Self {
        cpds.resize(structure.len(), Vec::new());
        for (v, rows) in cpds.iter_mut().enumerate() {
            rows.resize(structure.row_count(v), None);
        }
        Self { structure, cpds }
    }

    pub fn from_fn(structure: NetworkStructure, mut f: impl FnMut(usize, usize) -> CredalSet) -> Self {
        let cpds = (0..structure.len())
            .map(|v| (0..structure.row_count(v)).map(|r| f(v, r)).collect())
            .collect();
        Self::new(structure, cpds)
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    pub fn credal_set(&self, v: usize, row: usize) -> Result<&CredalSet> {
        self.cpds
            .get(v)
            .and_then(|rows| rows.get(row))
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::MissingCpd(self.structure.row_path(v, row)))
    }

    /// Rows of `v` in row-index order; `None` marks a missing entry.
    pub fn rows(&self, v: usize) -> &[Option<CredalSet>] {
        &self.cpds[v]
    }

    pub(crate) fn set_row(&mut self, v: usize, row: usize, cs: CredalSet) {
        self.cpds[v][row] = Some(cs);
    }

    /// Every invariant violation, each with a path to the offending CPD entry.
    pub fn validate_network(&self) -> Vec<Violation> {
        let s = &self.structure;
        let mut out = Vec::new();
        for v in 0..s.len() {
            for (row, cs) in self.cpds[v].iter().enumerate() {
                let path = s.row_path(v, row);
                let Some(cs) = cs else {
                    out.push(Violation {
                        path,
                        message: "missing CPD entry".into(),
                    });
                    continue;
                };
                if cs.dim() != s.cardinality(v) {
                    out.push(Violation {
                        path,
                        message: format!(
                            "credal set dimension {} does not match domain size {}",
                            cs.dim(),
                            s.cardinality(v)
                        ),
                    });
                } else if let Err(issue) = cs.validate() {
                    out.push(Violation {
                        path,
                        message: issue.to_string(),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate_network().is_empty()
    }

    /// Fails with the first violation, if any.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate_network().into_iter().next() {
            None => Ok(()),
            Some(v) if v.message == "missing CPD entry" => Err(Error::MissingCpd(v.path)),
            Some(v) => Err(Error::InvalidCredalSet(v.to_string())),
        }
    }

    /// True when every credal set is a point (a precise Bayesian network).
    pub fn is_precise(&self) -> bool {
        self.cpds.iter().flatten().all(|cs| cs.as_ref().is_some_and(CredalSet::is_point))
    }

    /// The parameters of a precise network.
    pub fn point_parameters(&self) -> Result<Parameters> {
        let s = &self.structure;
        let mut table = Vec::with_capacity(s.len());
        for v in 0..s.len() {
            let mut rows = Vec::with_capacity(s.row_count(v));
            for row in 0..s.row_count(v) {
                let p = self
                    .credal_set(v, row)?
                    .as_point()
                    .ok_or_else(|| Error::NotPoint(s.row_path(v, row)))?;
                rows.push(p.to_vec());
            }
            table.push(rows);
        }
        Ok(Parameters::new(table))
    }

    /// Precise network with the given parameters on this structure.
    pub fn with_parameters(&self, params: &Parameters) -> Self {
        Self::from_fn(self.structure.clone(), |v, r| CredalSet::Point(params.row(v, r).to_vec()))
    }
}

/// A point parameterisation Θ: one probability vector per CPD row.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters {
    table: Vec<Vec<Vec<f64>>>,
}

impl Parameters {
    pub fn new(table: Vec<Vec<Vec<f64>>>) -> Self {
        Self { table }
    }

    pub fn row(&self, v: usize, row: usize) -> &[f64] {
        &self.table[v][row]
    }

    pub fn get(&self, v: usize, row: usize) -> Option<&[f64]> {
        self.table.get(v)?.get(row).map(Vec::as_slice)
    }

    pub fn set_row(&mut self, v: usize, row: usize, p: Vec<f64>) {
        self.table[v][row] = p;
    }

    pub fn variables(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self, v: usize) -> &[Vec<f64>] {
        &self.table[v]
    }

    /// True when every row lies in the matching credal set of `net`.
    pub fn is_feasible_for(&self, net: &CredalNetwork, tol: f64) -> bool {
        let s = net.structure();
        (0..s.len()).all(|v| {
            (0..s.row_count(v)).all(|r| {
                net.credal_set(v, r)
                    .map(|cs| self.get(v, r).is_some_and(|p| cs.contains(p, tol)))
                    .unwrap_or(false)
            })
        })
    }
}
