use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rand::Rng;

use crate::error::{Error, Result};

/// A discrete variable with an ordered list of value labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    domain: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: impl Into<String>, domain: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if name.is_empty() || domain.is_empty() {
            return Err(Error::InvalidDomain(name));
        }
        let unique: BTreeSet<&String> = domain.iter().collect();
        if unique.len() != domain.len() {
            return Err(Error::InvalidDomain(name));
        }
        Ok(Self { name, domain })
    }

    /// Binary variable with labels `"0"` and `"1"`.
    pub fn binary(name: impl Into<String>) -> Self {
        Self::new(name, ["0", "1"]).expect("static domain")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn cardinality(&self) -> usize {
        self.domain.len()
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == label)
    }
}

/// The DAG of a Bayesian network. Variables are addressed by index; the parents
/// of each variable keep the order in which their edges were declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkStructure {
    variables: Vec<Variable>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl NetworkStructure {
    pub fn new<S: AsRef<str>>(variables: Vec<Variable>, edges: &[(S, S)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (p, c) in edges {
            let p = *index
                .get(p.as_ref())
                .ok_or_else(|| Error::UnknownVariable(p.as_ref().to_string()))?;
            let c = *index
                .get(c.as_ref())
                .ok_or_else(|| Error::UnknownVariable(c.as_ref().to_string()))?;
            resolved.push((p, c));
        }
        Self::from_indexed(variables, &resolved)
    }

    pub(crate) fn from_indexed(variables: Vec<Variable>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = variables.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in edges {
            if p >= n || c >= n {
                return Err(Error::InvalidArgument(format!("edge ({p}, {c}) out of range")));
            }
            if p == c {
                return Err(Error::Cycle(vec![variables[p].name.clone()]));
            }
            if !parents[c].contains(&p) {
                parents[c].push(p);
                children[p].push(c);
            }
        }
        let index = variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), i))
            .collect();
        let structure = Self {
            variables,
            parents,
            children,
            index,
        };
        structure.check_acyclic()?;
        Ok(structure)
    }

    fn check_acyclic(&self) -> Result<()> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    stack.push(c);
                }
            }
        }
        if seen == self.len() {
            return Ok(());
        }
        let cyclic = (0..self.len())
            .filter(|&v| indegree[v] > 0)
            .map(|v| self.variables[v].name.clone())
            .collect();
        Err(Error::Cycle(cyclic))
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: usize) -> &Variable {
        &self.variables[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v].name
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.variables[v].cardinality()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value_of(&self, v: usize, label: &str) -> Result<usize> {
        self.variables[v]
            .value_index(label)
            .ok_or_else(|| Error::UnknownValue {
                variable: self.name(v).to_string(),
                value: label.to_string(),
            })
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.parents[child].contains(&parent)
    }

    /// Edges as (parent, child), grouped by child in parent-declaration order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .collect()
    }

    /// Number of parent instantiations of `v`.
    pub fn row_count(&self, v: usize) -> usize {
        self.parents[v].iter().map(|&p| self.cardinality(p)).product()
    }

    /// Row index of the parent instantiation read from a value lookup over all
    /// variables. The first declared parent is the most significant digit.
    pub fn row_with(&self, v: usize, mut value: impl FnMut(usize) -> usize) -> usize {
        self.parents[v]
            .iter()
            .fold(0, |acc, &p| acc * self.cardinality(p) + value(p))
    }

    /// Row index for a full instantiation indexed by variable.
    pub fn row_index(&self, v: usize, assignment: &[usize]) -> usize {
        self.row_with(v, |p| assignment[p])
    }

    /// Parent values (in declared parent order) of row `row` of `v`.
    pub fn row_values(&self, v: usize, mut row: usize) -> Vec<usize> {
        let mut out = vec![0; self.parents[v].len()];
        for (slot, &p) in out.iter_mut().zip(&self.parents[v]).rev() {
            let k = self.cardinality(p);
            *slot = row % k;
            row /= k;
        }
        out
    }

    /// Human-readable CPD path, e.g. `V|s3` or `T|pos,sym`; root rows print as the bare name.
    pub fn row_path(&self, v: usize, row: usize) -> String {
        if self.parents[v].is_empty() {
            return self.name(v).to_string();
        }
        let labels: Vec<&str> = self
            .row_values(v, row)
            .iter()
            .zip(&self.parents[v])
            .map(|(&val, &p)| self.variables[p].domain[val].as_str())
            .collect();
        format!("{}|{}", self.name(v), labels.join(","))
    }

    /// Number of full instantiations, saturating at `u128::MAX`.
    pub fn instantiation_count(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.cardinality() as u128))
    }

    pub fn is_topological(&self, order: &[usize]) -> bool {
        self.check_order(order).is_ok()
    }

    pub fn check_order(&self, order: &[usize]) -> Result<()> {
        if order.len() != self.len() {
            return Err(Error::NotTopological(format!(
                "expected {} variables, got {}",
                self.len(),
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; self.len()];
        for (i, &v) in order.iter().enumerate() {
            if v >= self.len() || position[v] != usize::MAX {
                return Err(Error::NotTopological("not a permutation".into()));
            }
            position[v] = i;
        }
        for (p, c) in self.edges() {
            if position[p] > position[c] {
                return Err(Error::NotTopological(format!(
                    "{} precedes its parent {}",
                    self.name(c),
                    self.name(p)
                )));
            }
        }
        Ok(())
    }

    pub fn order_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let order = names
            .iter()
            .map(|n| self.lookup(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.check_order(&order)?;
        Ok(order)
    }

    pub fn order_names(&self, order: &[usize]) -> Vec<String> {
        order.iter().map(|&v| self.name(v).to_string()).collect()
    }

    /// The lexicographically smallest topological order by variable name.
    pub fn default_order(&self) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..self.len())
            .filter(|&v| indegree[v] == 0)
            .map(|v| Reverse((self.name(v), v)))
            .collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(Reverse((_, v))) = ready.pop() {
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse((self.name(c), c)));
                }
            }
        }
        order
    }

    /// A random topological order: Kahn's algorithm picking uniformly among ready variables.
    pub fn random_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..self.len()).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while !ready.is_empty() {
            let v = ready.swap_remove(rng.gen_range(0..ready.len()));
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(c);
                }
            }
        }
        order
    }

    /// Structure with extra edges; new parents are appended after the existing ones.
    pub fn with_extra_edges(&self, extra: &[(usize, usize)]) -> Result<Self> {
        let mut edges = self.edges();
        for &(p, c) in extra {
            if !self.has_edge(p, c) {
                edges.push((p, c));
            }
        }
        Self::from_indexed(self.variables.clone(), &edges)
    }

    /// Structure with one more variable whose parents are `parents`.
    pub fn with_variable(&self, variable: Variable, parents: &[usize]) -> Result<Self> {
        if self.index.contains_key(variable.name()) {
            return Err(Error::NameCollision(variable.name().to_string()));
        }
        let new = self.len();
        let mut variables = self.variables.clone();
        variables.push(variable);
        let mut edges = self.edges();
        edges.extend(parents.iter().map(|&p| (p, new)));
        Self::from_indexed(variables, &edges)
    }
}
