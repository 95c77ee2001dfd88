use super::credal::CredalSet;
use super::network::CredalNetwork;
use super::structure::{NetworkStructure, Variable};
use crate::error::{Error, Result};

/// An explicit decision function `F: X -> Y` given as a total table.
///
/// Rows follow the same mixed-radix convention as CPD rows: the first input is
/// the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    output: Variable,
    inputs: Vec<String>,
    outputs: Vec<usize>,
}

impl DecisionTable {
    /// Table from output value indices, one per input instantiation.
    pub fn new(output: Variable, inputs: Vec<String>, outputs: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = outputs.iter().find(|&&y| y >= output.cardinality()) {
            return Err(Error::InvalidDecision(format!(
                "output index {bad} outside domain of `{}`",
                output.name()
            )));
        }
        Ok(Self {
            output,
            inputs,
            outputs,
        })
    }

    /// Table built by evaluating `f` on every instantiation of `inputs`.
    pub fn from_fn<S: AsRef<str>>(
        output: Variable,
        inputs: &[S],
        structure: &NetworkStructure,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let ids = inputs
            .iter()
            .map(|n| structure.lookup(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let radix: Vec<usize> = ids.iter().map(|&v| structure.cardinality(v)).collect();
        let rows: usize = radix.iter().product();
        let mut outputs = Vec::with_capacity(rows);
        let mut x = vec![0; ids.len()];
        for _ in 0..rows {
            outputs.push(f(&x));
            for (digit, &k) in x.iter_mut().zip(&radix).rev() {
                *digit += 1;
                if *digit < k {
                    break;
                }
                *digit = 0;
            }
        }
        Self::new(
            output,
            inputs.iter().map(|s| s.as_ref().to_string()).collect(),
            outputs,
        )
    }

    pub fn output(&self) -> &Variable {
        &self.output
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    /// Output value index per input row.
    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Adds `Ŷ` with `pa(Ŷ) = X` and point-mass rows `p(Ŷ=y|x) = [y = F(x)]`.
    pub fn augment(&self, net: &CredalNetwork) -> Result<CredalNetwork> {
        let s = net.structure();
        let inputs = self
            .inputs
            .iter()
            .map(|n| s.lookup(n))
            .collect::<Result<Vec<_>>>()?;
        let expected: usize = inputs.iter().map(|&v| s.cardinality(v)).product();
        if expected != self.outputs.len() {
            return Err(Error::InvalidDecision(format!(
                "table has {} rows, inputs have {expected} instantiations",
                self.outputs.len()
            )));
        }
        let structure = s.with_variable(self.output.clone(), &inputs)?;
        let k = self.output.cardinality();
        let mut cpds: Vec<Vec<CredalSet>> = (0..s.len())
            .map(|v| {
                net.rows(v)
                    .iter()
                    .enumerate()
                    .map(|(r, cs)| cs.clone().ok_or_else(|| Error::MissingCpd(s.row_path(v, r))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        cpds.push(self.outputs.iter().map(|&y| CredalSet::point_mass(k, y)).collect());
        Ok(CredalNetwork::new(structure, cpds))
    }
}

/// Augments `net` with the decision node described by `f`.
pub fn augment_with_decision(net: &CredalNetwork, f: &DecisionTable) -> Result<CredalNetwork> {
    f.augment(net)
}
