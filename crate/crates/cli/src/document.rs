//! JSON network documents.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use credal_core::model::{augment_with_decision, CredalNetwork, CredalSet, DecisionTable, NetworkStructure, Variable};

pub const NETWORK_VERSION: &str = "credal-network/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub version: String,
    pub variables: Vec<VariableDoc>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    pub cpds: Vec<CpdDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpdDoc {
    pub variable: String,
    #[serde(default)]
    pub parents: Vec<String>,
    pub rows: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    #[serde(default)]
    pub parent_values: Vec<String>,
    pub credal: CredalDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "lowercase")]
pub enum CredalDoc {
    Point(Vec<f64>),
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Vertices(Vec<Vec<f64>>),
}

/// Deterministic node `variable := table(inputs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDoc {
    pub variable: String,
    pub domain: Vec<String>,
    pub inputs: Vec<String>,
    pub table: Vec<DecisionRowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionRowDoc {
    pub inputs: Vec<String>,
    pub output: String,
}

impl From<&CredalSet> for CredalDoc {
    fn from(cs: &CredalSet) -> Self {
        match cs {
            CredalSet::Point(p) => CredalDoc::Point(p.clone()),
            CredalSet::Box { lower, upper } => CredalDoc::Box {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            CredalSet::Vertices(vs) => CredalDoc::Vertices(vs.clone()),
        }
    }
}

impl From<&CredalDoc> for CredalSet {
    fn from(doc: &CredalDoc) -> Self {
        match doc {
            CredalDoc::Point(p) => CredalSet::Point(p.clone()),
            CredalDoc::Box { lower, upper } => CredalSet::Box {
                lower: lower.clone(),
                upper: upper.clone(),
            },
            CredalDoc::Vertices(vs) => CredalSet::Vertices(vs.clone()),
        }
    }
}

impl NetworkDocument {
    /// Parses a document; errors carry serde's line and column.
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("parse error: {e}"))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }

    /// Document for a network, with every variable (decision nodes included)
    /// written as an ordinary CPD.
    pub fn from_network(net: &CredalNetwork) -> Self {
        let s = net.structure();
        let variables = s
            .variables()
            .iter()
            .map(|v| VariableDoc {
                name: v.name().to_string(),
                domain: v.domain().to_vec(),
            })
            .collect();
        let mut edges = Vec::new();
        let mut cpds = Vec::new();
        for v in 0..s.len() {
            for &p in s.parents(v) {
                edges.push((s.name(p).to_string(), s.name(v).to_string()));
            }
            let rows = net
                .rows(v)
                .iter()
                .enumerate()
                .filter_map(|(r, cs)| {
                    cs.as_ref().map(|cs| RowDoc {
                        parent_values: s
                            .row_values(v, r)
                            .iter()
                            .zip(s.parents(v))
                            .map(|(&x, &p)| s.variable(p).domain()[x].clone())
                            .collect(),
                        credal: cs.into(),
                    })
                })
                .collect();
            cpds.push(CpdDoc {
                variable: s.name(v).to_string(),
                parents: s.parents(v).iter().map(|&p| s.name(p).to_string()).collect(),
                rows,
            });
        }
        NetworkDocument {
            version: NETWORK_VERSION.to_string(),
            variables,
            edges,
            cpds,
            decision: None,
        }
    }

    /// Builds the network. Structural problems are errors; missing or invalid
    /// CPD rows are left for `validate_network` to report.
    pub fn to_network(&self) -> Result<CredalNetwork, Vec<String>> {
        if self.version != NETWORK_VERSION {
            return Err(vec![format!(
                "unsupported version `{}` (expected `{NETWORK_VERSION}`)",
                self.version
            )]);
        }
        let variables = self
            .variables
            .iter()
            .map(|v| Variable::new(v.name.clone(), v.domain.iter().cloned()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| vec![e.to_string()])?;
        let structure = NetworkStructure::new(variables, &self.edges).map_err(|e| vec![e.to_string()])?;

        let mut errors = Vec::new();
        let mut cpds: Vec<Vec<Option<CredalSet>>> = (0..structure.len())
            .map(|v| vec![None; structure.row_count(v)])
            .collect();
        let mut seen = BTreeSet::new();
        for cpd in &self.cpds {
            let v = match structure.lookup(&cpd.variable) {
                Ok(v) => v,
                Err(e) => {
                    errors.push(format!("cpd: {e}"));
                    continue;
                }
            };
            if !seen.insert(v) {
                errors.push(format!("duplicate cpd for `{}`", cpd.variable));
                continue;
            }
            let declared: BTreeSet<&str> = cpd.parents.iter().map(String::as_str).collect();
            let actual: BTreeSet<&str> = structure.parents(v).iter().map(|&p| structure.name(p)).collect();
            if declared != actual || declared.len() != cpd.parents.len() {
                errors.push(format!(
                    "cpd for `{}` lists parents {:?}, edges give {:?}",
                    cpd.variable, cpd.parents, actual
                ));
                continue;
            }
            let listed: Vec<usize> = cpd
                .parents
                .iter()
                .map(|p| structure.index_of(p).expect("checked above"))
                .collect();
            for (i, row) in cpd.rows.iter().enumerate() {
                match row_index(&structure, v, &listed, &row.parent_values) {
                    Ok(r) if cpds[v][r].is_some() => {
                        errors.push(format!("duplicate row {} of `{}`", structure.row_path(v, r), cpd.variable))
                    }
                    Ok(r) => cpds[v][r] = Some((&row.credal).into()),
                    Err(e) => errors.push(format!("row {i} of `{}`: {e}", cpd.variable)),
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let net = CredalNetwork::from_partial(structure, cpds);
        let Some(decision) = &self.decision else {
            return Ok(net);
        };
        let problems = net.validate_network();
        if !problems.is_empty() {
            return Err(problems.iter().map(ToString::to_string).collect());
        }
        decision_table(decision, net.structure())
            .and_then(|table| augment_with_decision(&net, &table).map_err(|e| e.to_string()))
            .map_err(|e| vec![format!("decision: {e}")])
    }
}

fn row_index(s: &NetworkStructure, v: usize, listed: &[usize], labels: &[String]) -> Result<usize, String> {
    if labels.len() != listed.len() {
        return Err(format!("expected {} parent values, found {}", listed.len(), labels.len()));
    }
    let mut values = vec![0; s.len()];
    for (&p, label) in listed.iter().zip(labels) {
        values[p] = s.value_of(p, label).map_err(|e| e.to_string())?;
    }
    Ok(s.row_with(v, |p| values[p]))
}

fn decision_table(doc: &DecisionDoc, s: &NetworkStructure) -> Result<DecisionTable, String> {
    let output = Variable::new(doc.variable.clone(), doc.domain.iter().cloned()).map_err(|e| e.to_string())?;
    let inputs = doc
        .inputs
        .iter()
        .map(|n| s.lookup(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let rows: usize = inputs.iter().map(|&v| s.cardinality(v)).product();
    let mut outputs = vec![None; rows];
    for row in &doc.table {
        if row.inputs.len() != inputs.len() {
            return Err(format!("table row {:?} has the wrong arity", row.inputs));
        }
        let mut index = 0;
        for (&v, label) in inputs.iter().zip(&row.inputs) {
            index = index * s.cardinality(v) + s.value_of(v, label).map_err(|e| e.to_string())?;
        }
        let y = output
            .value_index(&row.output)
            .ok_or_else(|| format!("`{}` has no value `{}`", doc.variable, row.output))?;
        if outputs[index].replace(y).is_some() {
            return Err(format!("duplicate table row {:?}", row.inputs));
        }
    }
    let outputs = outputs
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| "table is not total over its inputs".to_string())?;
    DecisionTable::new(output, doc.inputs.clone(), outputs).map_err(|e| e.to_string())
}
