//! Sum-product networks obtained from ordered arithmetic circuits.
//!
//! Every sum node of the SPN carries a [`Label`] naming the CPD row whose
//! parameters become its edge weights. Sum nodes that share a label are tied in
//! the original network; a [`CredalSpn`] constrains each of them separately.

use std::fmt::Write as _;

use crate::ac::{indicator_masks, parameter_label, AcNode, ArithmeticCircuit, NodeId};
use crate::error::{Error, Result};
use crate::model::{CredalNetwork, CredalSet, Indicators, NetworkStructure, Parameters, PROB_TOL};

/// For each circuit node and variable, the parent values conditioned on by
/// parameter leaves below the node, as a bitmask over the variable's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibleValues {
    masks: Vec<Vec<u64>>,
}

impl PossibleValues {
    pub fn mask(&self, node: NodeId, var: usize) -> u64 {
        self.masks[node.0][var]
    }

    pub fn values(&self, node: NodeId, var: usize) -> Vec<usize> {
        let m = self.mask(node, var);
        (0..64).filter(|b| m & (1 << b) != 0).collect()
    }

    /// The single possible value, if there is exactly one.
    pub fn unique(&self, node: NodeId, var: usize) -> Option<usize> {
        let m = self.mask(node, var);
        (m.count_ones() == 1).then(|| m.trailing_zeros() as usize)
    }
}

/// One reverse-topological pass: indicators contribute nothing, θ_{v|u} contributes
/// `u_i` for each parent `U_i` of `v`, inner nodes take the union of their children.
pub fn compute_possible_values(ac: &ArithmeticCircuit) -> PossibleValues {
    let s = ac.structure();
    let n = s.len();
    let mut masks = vec![vec![0u64; n]; ac.len()];
    for (i, node) in ac.nodes().iter().enumerate() {
        match *node {
            AcNode::Indicator { .. } => {}
            AcNode::Parameter { var, row, .. } => {
                for (&p, &u) in s.parents(var).iter().zip(&s.row_values(var, row)) {
                    masks[i][p] |= 1 << u;
                }
            }
            AcNode::Sum { ref children, .. } | AcNode::Product { ref children } => {
                for c in children {
                    for v in 0..n {
                        masks[i][v] |= masks[c.0][v];
                    }
                }
            }
        }
    }
    PossibleValues { masks }
}

/// The CPD row a sum node's weights stand for: θ_{var | row}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub var: usize,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpnNode {
    Sum {
        children: Vec<NodeId>,
        label: Label,
        /// Value of the split variable selected by each branch.
        values: Vec<usize>,
        /// Resolved weights for point credal sets; `None` until chosen.
        weights: Option<Vec<f64>>,
    },
    Product { children: Vec<NodeId> },
    Indicator { var: usize, value: usize },
}

impl SpnNode {
    pub fn children(&self) -> &[NodeId] {
        match self {
            SpnNode::Sum { children, .. } | SpnNode::Product { children } => children,
            SpnNode::Indicator { .. } => &[],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, SpnNode::Indicator { .. })
    }

    pub fn label(&self) -> Option<Label> {
        match self {
            SpnNode::Sum { label, .. } => Some(*label),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumProductNetwork {
    structure: NetworkStructure,
    nodes: Vec<SpnNode>,
    root: NodeId,
    order: Vec<usize>,
}

impl SumProductNetwork {
    pub fn new(structure: NetworkStructure, nodes: Vec<SpnNode>, root: NodeId, order: Vec<usize>) -> Result<Self> {
        if root.0 >= nodes.len() {
            return Err(Error::MalformedCircuit("root out of range".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.children().iter().any(|c| c.0 >= i) {
                return Err(Error::MalformedCircuit(format!("node {i} has a child that does not precede it")));
            }
            if let SpnNode::Sum {
                children,
                values,
                weights,
                label,
            } = node
            {
                if children.is_empty() || values.len() != children.len() || label.var >= structure.len() {
                    return Err(Error::MalformedCircuit(format!("sum node {i} is malformed")));
                }
                if weights.as_ref().is_some_and(|w| w.len() != children.len()) {
                    return Err(Error::DimensionMismatch {
                        expected: children.len(),
                        found: weights.as_ref().map_or(0, Vec::len),
                    });
                }
            }
        }
        Ok(Self {
            structure,
            nodes,
            root,
            order,
        })
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    pub fn nodes(&self) -> &[SpnNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SpnNode {
        &self.nodes[id.0]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    /// Ids of all sum nodes, ascending.
    pub fn sum_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, SpnNode::Sum { .. }))
            .map(|(i, _)| NodeId(i))
    }

    /// True when every sum node splits strictly earlier in `order` than every
    /// sum node below it.
    pub fn respects_order(&self, order: &[usize]) -> bool {
        let n = self.structure.len();
        if order.len() != n {
            return false;
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut below = vec![usize::MAX; self.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let mut m = usize::MAX;
            for c in node.children() {
                m = m.min(below[c.0]);
                if let Some(l) = self.node(*c).label() {
                    m = m.min(position[l.var]);
                }
            }
            below[i] = m;
            if let Some(l) = node.label() {
                if m <= position[l.var] {
                    return false;
                }
            }
        }
        true
    }

    /// True when every product node has only indicator children.
    pub fn products_have_leaf_children(&self) -> bool {
        self.nodes.iter().all(|n| match n {
            SpnNode::Product { children } => children.iter().all(|c| self.node(*c).is_leaf()),
            _ => true,
        })
    }

    /// Line-based dump: `id kind payload [label weights] children...`.
    pub fn to_text(&self) -> String {
        let s = &self.structure;
        let mut out = format!(
            "# spn root={} order={}\n",
            self.root.0,
            s.order_names(&self.order).join(",")
        );
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = match node {
                SpnNode::Sum {
                    label,
                    values,
                    weights,
                    ..
                } => {
                    let vals: Vec<&str> = values.iter().map(|&x| s.variable(label.var).domain()[x].as_str()).collect();
                    let w = weights.as_ref().map_or_else(
                        || "?".to_string(),
                        |w| w.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(","),
                    );
                    write!(
                        out,
                        "{i} sum split={}:{} label={} weights={w}",
                        s.name(label.var),
                        vals.join(","),
                        row_label(s, *label)
                    )
                }
                SpnNode::Product { .. } => write!(out, "{i} prod -"),
                SpnNode::Indicator { var, value } => {
                    write!(out, "{i} ind {}={}", s.name(*var), s.variable(*var).domain()[*value])
                }
            };
            for c in node.children() {
                let _ = write!(out, " {}", c.0);
            }
            out.push('\n');
        }
        out
    }
}

/// `V|s3`-style name of a CPD row.
pub fn row_label(s: &NetworkStructure, label: Label) -> String {
    s.row_path(label.var, label.row)
}

/// Moves every parameter leaf onto the edge of the sum node that splits its
/// variable, then removes the parameter leaves. Products left with a single
/// child are inlined. Point credal sets resolve their weights immediately.
pub fn ac_to_spn(ac: &ArithmeticCircuit, net: &CredalNetwork) -> Result<SumProductNetwork> {
    let s = ac.structure();
    if s != net.structure() {
        return Err(Error::InvalidArgument("circuit and network structures differ".into()));
    }
    let possible = compute_possible_values(ac);
    let ind_masks = indicator_masks(ac);
    let mut map: Vec<Option<NodeId>> = vec![None; ac.len()];
    let mut nodes: Vec<SpnNode> = Vec::new();
    for (i, node) in ac.nodes().iter().enumerate() {
        let mapped = match *node {
            AcNode::Parameter { .. } => None,
            AcNode::Indicator { var, value } => {
                nodes.push(SpnNode::Indicator { var, value });
                Some(NodeId(nodes.len() - 1))
            }
            AcNode::Product { ref children } => {
                let kids: Vec<NodeId> = children.iter().filter_map(|c| map[c.0]).collect();
                match kids.len() {
                    0 => return Err(Error::MalformedCircuit(format!("product {i} holds only parameters"))),
                    1 => Some(kids[0]),
                    _ => {
                        nodes.push(SpnNode::Product { children: kids });
                        Some(NodeId(nodes.len() - 1))
                    }
                }
            }
            AcNode::Sum { ref children, split } => {
                let mut parent_values = Vec::with_capacity(s.parents(split).len());
                for &w in s.parents(split) {
                    let u = possible.unique(NodeId(i), w).ok_or_else(|| {
                        Error::MalformedCircuit(format!(
                            "sum node {i} splitting {} sees {} values of parent {}",
                            s.name(split),
                            possible.mask(NodeId(i), w).count_ones(),
                            s.name(w)
                        ))
                    })?;
                    parent_values.push(u);
                }
                let row = s
                    .parents(split)
                    .iter()
                    .zip(&parent_values)
                    .fold(0, |acc, (&p, &u)| acc * s.cardinality(p) + u);
                let mut kids = Vec::with_capacity(children.len());
                let mut values = Vec::with_capacity(children.len());
                for c in children {
                    let m = ind_masks[c.0][split];
                    if m.count_ones() != 1 {
                        return Err(Error::MalformedCircuit(format!("sum node {i} does not split {}", s.name(split))));
                    }
                    values.push(m.trailing_zeros() as usize);
                    kids.push(map[c.0].ok_or_else(|| Error::MalformedCircuit(format!("sum node {i} has a parameter child")))?);
                }
                let weights = net
                    .credal_set(split, row)?
                    .as_point()
                    .map(|p| values.iter().map(|&x| p[x]).collect());
                nodes.push(SpnNode::Sum {
                    children: kids,
                    label: Label { var: split, row },
                    values,
                    weights,
                });
                Some(NodeId(nodes.len() - 1))
            }
        };
        map[i] = mapped;
    }
    let root = map[ac.root().0].ok_or_else(|| Error::MalformedCircuit("root is a parameter".into()))?;
    SumProductNetwork::new(s.clone(), nodes, root, ac.order().to_vec())
}

/// Per-node weight vectors for an SPN, indexed by node id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightAssignment {
    weights: Vec<Option<Vec<f64>>>,
}

impl WeightAssignment {
    pub fn new(len: usize) -> Self {
        Self { weights: vec![None; len] }
    }

    pub fn set(&mut self, node: NodeId, w: Vec<f64>) {
        if node.0 >= self.weights.len() {
            self.weights.resize(node.0 + 1, None);
        }
        self.weights[node.0] = Some(w);
    }

    pub fn get(&self, node: NodeId) -> Option<&[f64]> {
        self.weights.get(node.0).and_then(|w| w.as_deref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &[f64])> {
        self.weights
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_deref().map(|w| (NodeId(i), w)))
    }
}

/// Weights tied by label: every sum node uses θ_{label} from `params`.
pub fn tied_weights(spn: &SumProductNetwork, params: &Parameters) -> Result<WeightAssignment> {
    let mut out = WeightAssignment::new(spn.len());
    for id in spn.sum_nodes() {
        let SpnNode::Sum { label, values, .. } = spn.node(id) else {
            unreachable!()
        };
        let row = params
            .get(label.var, label.row)
            .ok_or_else(|| Error::MissingParameter(row_label(spn.structure(), *label)))?;
        let w = values
            .iter()
            .map(|&x| {
                row.get(x)
                    .copied()
                    .ok_or_else(|| Error::MissingParameter(parameter_label(spn.structure(), label.var, x, label.row)))
            })
            .collect::<Result<Vec<_>>>()?;
        out.set(id, w);
    }
    Ok(out)
}

/// Value of the SPN polynomial. Weights come from `weights` when present, else
/// from the node's resolved point weights.
pub fn evaluate_spn(spn: &SumProductNetwork, ind: &Indicators, weights: &WeightAssignment) -> Result<f64> {
    evaluate_spn_nodes(spn, ind, weights).map(|v| v[spn.root().0])
}

/// Values of every node (see [`evaluate_spn`]).
pub fn evaluate_spn_nodes(spn: &SumProductNetwork, ind: &Indicators, weights: &WeightAssignment) -> Result<Vec<f64>> {
    let mut values = vec![0.0; spn.len()];
    for (i, node) in spn.nodes().iter().enumerate() {
        values[i] = match node {
            SpnNode::Indicator { var, value } => ind.value(*var, *value),
            SpnNode::Product { children } => children.iter().map(|c| values[c.0]).product(),
            SpnNode::Sum {
                children,
                weights: eager,
                ..
            } => {
                let w = weights
                    .get(NodeId(i))
                    .or(eager.as_deref())
                    .ok_or(Error::UnassignedWeights(i))?;
                if w.len() != children.len() {
                    return Err(Error::DimensionMismatch {
                        expected: children.len(),
                        found: w.len(),
                    });
                }
                if (w.iter().sum::<f64>() - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidArgument(format!("weights of sum node {i} do not sum to 1")));
                }
                w.iter().zip(children).map(|(w, c)| w * values[c.0]).sum()
            }
        };
    }
    Ok(values)
}

/// An SPN with an independent credal set on each sum node.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalSpn {
    spn: SumProductNetwork,
    sets: Vec<Option<CredalSet>>,
}

impl CredalSpn {
    pub fn spn(&self) -> &SumProductNetwork {
        &self.spn
    }

    /// Credal set of a sum node, with coordinates in branch order.
    pub fn credal_set(&self, node: NodeId) -> Option<&CredalSet> {
        self.sets.get(node.0).and_then(Option::as_ref)
    }
}

/// Reorders coordinates so that coordinate `k` is the original `values[k]`.
fn permute(cs: &CredalSet, values: &[usize]) -> CredalSet {
    let pick = |p: &[f64]| values.iter().map(|&x| p[x]).collect::<Vec<f64>>();
    match cs {
        CredalSet::Point(p) => CredalSet::Point(pick(p)),
        CredalSet::Box { lower, upper } => CredalSet::Box {
            lower: pick(lower),
            upper: pick(upper),
        },
        CredalSet::Vertices(vs) => CredalSet::Vertices(vs.iter().map(|v| pick(v)).collect()),
    }
}

/// Constrains each sum node by the credal set of its label, independently of
/// every other node with the same label.
pub fn attach_credal_sets(spn: &SumProductNetwork, net: &CredalNetwork) -> Result<CredalSpn> {
    let mut sets = vec![None; spn.len()];
    for id in spn.sum_nodes() {
        let SpnNode::Sum { label, values, .. } = spn.node(id) else {
            unreachable!()
        };
        let cs = net.credal_set(label.var, label.row)?;
        let mut sorted = values.clone();
        sorted.sort_unstable();
        if sorted != (0..cs.dim()).collect::<Vec<_>>() {
            return Err(Error::DimensionMismatch {
                expected: cs.dim(),
                found: values.len(),
            });
        }
        sets[id.0] = Some(permute(cs, values));
    }
    Ok(CredalSpn { spn: spn.clone(), sets })
}

/// Upper limit on the number of nodes [`expand_spn`] may create.
pub const EXPANSION_GUARD: usize = 1_000_000;

struct Expander<'a> {
    src: &'a SumProductNetwork,
    position: Vec<usize>,
    nodes: Vec<SpnNode>,
    origin: Vec<Option<NodeId>>,
    ties: usize,
}

impl Expander<'_> {
    fn push(&mut self, node: SpnNode, origin: Option<NodeId>) -> Result<NodeId> {
        if self.nodes.len() >= EXPANSION_GUARD {
            return Err(Error::GuardExceeded {
                what: "expanded SPN nodes",
                size: self.nodes.len() as u128 + 1,
                limit: EXPANSION_GUARD as u128,
            });
        }
        self.nodes.push(node);
        self.origin.push(origin);
        Ok(NodeId(self.nodes.len() - 1))
    }

    fn expand(&mut self, id: NodeId) -> Result<NodeId> {
        match self.src.node(id) {
            SpnNode::Indicator { .. } => self.push(self.src.node(id).clone(), None),
            SpnNode::Sum {
                children,
                label,
                values,
                weights,
            } => {
                let kids = children.iter().map(|&c| self.expand(c)).collect::<Result<Vec<_>>>()?;
                self.push(
                    SpnNode::Sum {
                        children: kids,
                        label: *label,
                        values: values.clone(),
                        weights: weights.clone(),
                    },
                    Some(id),
                )
            }
            SpnNode::Product { children } => self.expand_product(children.clone()),
        }
    }

    fn expand_product(&mut self, mut children: Vec<NodeId>) -> Result<NodeId> {
        // associativity: absorb product children
        while let Some(k) = children
            .iter()
            .position(|c| matches!(self.src.node(*c), SpnNode::Product { .. }))
        {
            let inner = self.src.node(children[k]).children().to_vec();
            children.splice(k..=k, inner);
        }
        let sums: Vec<usize> = (0..children.len())
            .filter(|&k| self.src.node(children[k]).label().is_some())
            .collect();
        if sums.is_empty() {
            let leaves = children
                .iter()
                .map(|&c| self.push(self.src.node(c).clone(), None))
                .collect::<Result<Vec<_>>>()?;
            return self.push(SpnNode::Product { children: leaves }, None);
        }
        let rank = |k: &usize| self.position[self.src.node(children[*k]).label().expect("sum").var];
        let best = sums.iter().map(rank).min().expect("nonempty");
        if sums.iter().filter(|k| rank(k) == best).count() > 1 {
            self.ties += 1;
        }
        let pick = *sums.iter().find(|k| rank(k) == best).expect("nonempty");
        let source = children[pick];
        let SpnNode::Sum {
            children: branches,
            label,
            values,
            weights,
        } = self.src.node(children[pick]).clone()
        else {
            unreachable!()
        };
        let mut rest = children;
        rest.remove(pick);
        let mut kids = Vec::with_capacity(branches.len());
        for b in branches {
            let mut p = rest.clone();
            p.push(b);
            kids.push(self.expand_product(p)?);
        }
        self.push(
            SpnNode::Sum {
                children: kids,
                label,
                values,
                weights,
            },
            Some(source),
        )
    }
}

/// Result of [`expand_spn_traced`].
#[derive(Debug, Clone)]
pub struct Expansion {
    pub spn: SumProductNetwork,
    /// Source sum node of each expanded sum node.
    pub origin: Vec<Option<NodeId>>,
    /// Products whose earliest sum children split the same variable
    /// (resolved by child order).
    pub ties: usize,
}

impl Expansion {
    /// Per-node weights of the source SPN carried over to the expansion.
    pub fn pull_weights(&self, source: &WeightAssignment) -> WeightAssignment {
        let mut out = WeightAssignment::new(self.spn.len());
        for (i, o) in self.origin.iter().enumerate() {
            if let Some(w) = o.and_then(|o| source.get(o)) {
                out.set(NodeId(i), w.to_vec());
            }
        }
        out
    }
}

/// Distributes products over sums until every product has only leaf children.
/// The result is a tree with the same polynomial; labels are kept, so one
/// original sum node may appear several times.
pub fn expand_spn(spn: &SumProductNetwork) -> Result<SumProductNetwork> {
    expand_spn_traced(spn).map(|e| e.spn)
}

/// [`expand_spn`] with the map back to source sum nodes.
pub fn expand_spn_traced(spn: &SumProductNetwork) -> Result<Expansion> {
    let n = spn.structure().len();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in spn.order().iter().enumerate() {
        position[v] = i;
    }
    let mut ex = Expander {
        src: spn,
        position,
        nodes: Vec::new(),
        origin: Vec::new(),
        ties: 0,
    };
    let root = ex.expand(spn.root())?;
    Ok(Expansion {
        spn: SumProductNetwork::new(spn.structure().clone(), ex.nodes, root, spn.order().to_vec())?,
        origin: ex.origin,
        ties: ex.ties,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ac::compile_ordered_ac;
    use crate::model::{build_treatment_example, Variable};

    #[test]
    fn possible_values_of_treatment_leaves() {
        let (net, _) = build_treatment_example();
        let s = net.structure();
        let ac = compile_ordered_ac(s, &s.default_order()).unwrap();
        let pv = compute_possible_values(&ac);
        for (i, node) in ac.nodes().iter().enumerate() {
            match *node {
                AcNode::Indicator { .. } => {
                    assert!((0..s.len()).all(|v| pv.mask(NodeId(i), v) == 0));
                }
                AcNode::Parameter { var: 2, value: 0, row: 2 } => {
                    assert_eq!(pv.values(NodeId(i), 0), vec![2]);
                    assert!((1..s.len()).all(|v| pv.mask(NodeId(i), v) == 0));
                }
                AcNode::Sum { split: 2, .. } => {
                    // every +_V node sees a single strain
                    assert!(pv.unique(NodeId(i), 0).is_some());
                }
                _ => {}
            }
        }
    }

    #[test]
    fn single_variable_spn() {
        let s = NetworkStructure::new(vec![Variable::binary("A")], &[] as &[(&str, &str)]).unwrap();
        let net = CredalNetwork::from_fn(s.clone(), |_, _| CredalSet::point([0.3, 0.7]));
        let ac = compile_ordered_ac(&s, &[0]).unwrap();
        let spn = ac_to_spn(&ac, &net).unwrap();
        let SpnNode::Sum {
            children,
            label,
            weights,
            ..
        } = spn.node(spn.root())
        else {
            panic!("root must be a sum");
        };
        assert_eq!(*label, Label { var: 0, row: 0 });
        assert_eq!(weights.as_deref(), Some(&[0.3, 0.7][..]));
        // parameter leaves removed, singleton products inlined
        assert!(children.iter().all(|c| spn.node(*c).is_leaf()));
        assert_eq!(spn.len(), 3);
    }

    #[test]
    fn treatment_spn_moves_parameters_to_edges() {
        let (net, event) = build_treatment_example();
        let s = net.structure();
        let ac = compile_ordered_ac(s, &s.default_order()).unwrap();
        let spn = ac_to_spn(&ac, &net).unwrap();
        let SpnNode::Sum { children, label, weights, .. } = spn.node(spn.root()) else {
            panic!("root splits S");
        };
        assert_eq!(*label, Label { var: 0, row: 0 });
        assert!(weights.is_none());
        let s3 = spn.node(children[2]).children();
        assert_eq!(spn.node(s3[0]), &SpnNode::Indicator { var: 0, value: 2 });
        let SpnNode::Sum { label, weights, children: r_kids, .. } = spn.node(s3[1]) else {
            panic!("then R");
        };
        assert_eq!(*label, Label { var: 1, row: 2 });
        assert_eq!(weights.as_deref(), Some(&[0.5, 0.5][..]));
        for r in r_kids {
            let v_node = spn.node(*r).children()[1];
            assert_eq!(spn.node(v_node).label(), Some(Label { var: 2, row: 2 }));
        }
        let cspn = attach_credal_sets(&spn, &net).unwrap();
        let v_nodes: Vec<NodeId> = spn
            .sum_nodes()
            .filter(|&id| spn.node(id).label() == Some(Label { var: 2, row: 2 }))
            .collect();
        assert_eq!(v_nodes.len(), 2);
        for id in v_nodes {
            assert_eq!(cspn.credal_set(id), Some(&CredalSet::binary_interval(0.4, 0.8)));
        }
        // tied weights at a feasible point reproduce a probability
        let mut params = Parameters::new(
            (0..s.len())
                .map(|v| {
                    (0..s.row_count(v))
                        .map(|r| match net.credal_set(v, r).unwrap() {
                            CredalSet::Point(p) => p.clone(),
                            _ if v == 0 => vec![0.45, 0.45, 0.1],
                            _ => vec![0.5, 0.5],
                        })
                        .collect()
                })
                .collect(),
        );
        params.set_row(2, 2, vec![0.4, 0.6]);
        let w = tied_weights(&spn, &params).unwrap();
        let ind = Indicators::from_event(s, &event);
        let value = evaluate_spn(&spn, &ind, &w).unwrap();
        assert!((value - 0.1 * (0.5 * 0.6 + 0.5 * 0.4)).abs() < 1e-12);
    }

    #[test]
    fn unresolved_weights_are_an_error() {
        let (net, event) = build_treatment_example();
        let s = net.structure();
        let ac = compile_ordered_ac(s, &s.default_order()).unwrap();
        let spn = ac_to_spn(&ac, &net).unwrap();
        let ind = Indicators::from_event(s, &event);
        assert!(matches!(
            evaluate_spn(&spn, &ind, &WeightAssignment::default()),
            Err(Error::UnassignedWeights(_))
        ));
    }

    #[test]
    fn expansion_of_a_tree_only_flattens_products() {
        let s = NetworkStructure::new(vec![Variable::binary("A"), Variable::binary("B")], &[] as &[(&str, &str)]).unwrap();
        // prod(prod(λ_a), λ_b)
        let nodes = vec![
            SpnNode::Indicator { var: 0, value: 0 },
            SpnNode::Indicator { var: 1, value: 0 },
            SpnNode::Product { children: vec![NodeId(0)] },
            SpnNode::Product { children: vec![NodeId(2), NodeId(1)] },
        ];
        let spn = SumProductNetwork::new(s, nodes, NodeId(3), vec![0, 1]).unwrap();
        let ex = expand_spn(&spn).unwrap();
        let SpnNode::Product { children } = ex.node(ex.root()) else {
            panic!("product root");
        };
        assert_eq!(children.len(), 2);
        assert!(ex.products_have_leaf_children());
    }

    #[test]
    fn text_export_has_labels_and_weights() {
        let s = NetworkStructure::new(vec![Variable::new("A", ["a", "na"]).unwrap()], &[] as &[(&str, &str)]).unwrap();
        let net = CredalNetwork::from_fn(s.clone(), |_, _| CredalSet::point([0.25, 0.75]));
        let spn = ac_to_spn(&compile_ordered_ac(&s, &[0]).unwrap(), &net).unwrap();
        assert_eq!(
            spn.to_text(),
            "# spn root=2 order=A\n0 ind A=a\n1 ind A=na\n2 sum split=A:a,na label=A weights=0.25,0.75 0 1\n"
        );
    }
}
