//! Ordered arithmetic circuits.
//!
//! [`compile_ordered_ac`] builds a smooth, decomposable, deterministic circuit
//! for the network polynomial by top-down conditioning along a topological
//! order: the sum node at depth `i` splits on `order[i]`, and each branch
//! multiplies the indicator, the parameter for the current parent context and
//! the circuit for depth `i + 1`. Sub-circuits are shared between assignments
//! that agree on every assigned variable that still has an unassigned child.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Indicators, NetworkStructure, Parameters};
use crate::spn::compute_possible_values;

/// Index into a circuit's node pool. Children always have smaller ids than
/// their parents, so the pool is stored in topological order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AcNode {
    Sum { children: Vec<NodeId>, split: usize },
    Product { children: Vec<NodeId> },
    Indicator { var: usize, value: usize },
    /// θ_{var=value | row}, with `row` indexing the parent instantiation.
    Parameter { var: usize, value: usize, row: usize },
}

impl AcNode {
    pub fn children(&self) -> &[NodeId] {
        match self {
            AcNode::Sum { children, .. } | AcNode::Product { children } => children,
            _ => &[],
        }
    }
}

/// A leaf of an arithmetic circuit, as it appears in a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Indicator { var: usize, value: usize },
    Parameter { var: usize, value: usize, row: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticCircuit {
    structure: NetworkStructure,
    nodes: Vec<AcNode>,
    root: NodeId,
    order: Vec<usize>,
}

impl ArithmeticCircuit {
    /// Wraps a node pool. Children must precede parents; sum nodes need at least
    /// one child and a valid split variable.
    pub fn new(structure: NetworkStructure, nodes: Vec<AcNode>, root: NodeId, order: Vec<usize>) -> Result<Self> {
        if root.0 >= nodes.len() {
            return Err(Error::MalformedCircuit("root out of range".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.children().iter().any(|c| c.0 >= i) {
                return Err(Error::MalformedCircuit(format!("node {i} has a child that does not precede it")));
            }
            match *node {
                AcNode::Sum { ref children, split } if children.is_empty() || split >= structure.len() => {
                    return Err(Error::MalformedCircuit(format!("sum node {i} is malformed")));
                }
                AcNode::Indicator { var, value } | AcNode::Parameter { var, value, .. }
                    if var >= structure.len() || value >= structure.cardinality(var) =>
                {
                    return Err(Error::MalformedCircuit(format!("leaf {i} out of range")));
                }
                AcNode::Parameter { var, row, .. } if row >= structure.row_count(var) => {
                    return Err(Error::MalformedCircuit(format!("parameter {i} row out of range")));
                }
                _ => {}
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

    pub fn nodes(&self) -> &[AcNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &AcNode {
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

    /// Line-based dump: a header, then `id kind payload children...` per node.
    pub fn to_text(&self) -> String {
        let s = &self.structure;
        let mut out = format!(
            "# ac root={} order={}\n",
            self.root.0,
            s.order_names(&self.order).join(",")
        );
        for (i, node) in self.nodes.iter().enumerate() {
            let (kind, payload) = match *node {
                AcNode::Sum { split, .. } => ("sum", format!("split={}", s.name(split))),
                AcNode::Product { .. } => ("prod", "-".to_string()),
                AcNode::Indicator { var, value } => ("ind", format!("{}={}", s.name(var), s.variable(var).domain()[value])),
                AcNode::Parameter { var, value, row } => ("param", parameter_label(s, var, value, row)),
            };
            let _ = write!(out, "{i} {kind} {payload}");
            for c in node.children() {
                let _ = write!(out, " {}", c.0);
            }
            out.push('\n');
        }
        out
    }
}

/// `V=sym|s3`-style label of θ_{var=value|row}.
pub(crate) fn parameter_label(s: &NetworkStructure, var: usize, value: usize, row: usize) -> String {
    let head = format!("{}={}", s.name(var), s.variable(var).domain()[value]);
    if s.parents(var).is_empty() {
        return head;
    }
    let ctx: Vec<&str> = s
        .row_values(var, row)
        .iter()
        .zip(s.parents(var))
        .map(|(&x, &p)| s.variable(p).domain()[x].as_str())
        .collect();
    format!("{head}|{}", ctx.join(","))
}

struct Compiler<'a> {
    structure: &'a NetworkStructure,
    order: &'a [usize],
    /// For each depth, the assigned variables that still have an unassigned child.
    live: Vec<Vec<usize>>,
    nodes: Vec<AcNode>,
    leaves: HashMap<AcNode, NodeId>,
    contexts: Option<HashMap<(usize, Vec<usize>), NodeId>>,
}

impl Compiler<'_> {
    fn push(&mut self, node: AcNode) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() - 1)
    }

    fn leaf(&mut self, node: AcNode) -> NodeId {
        if let Some(&id) = self.leaves.get(&node) {
            return id;
        }
        let id = self.push(node.clone());
        self.leaves.insert(node, id);
        id
    }

    fn build(&mut self, depth: usize, assignment: &mut [usize]) -> NodeId {
        let key = self.contexts.as_ref().map(|_| {
            let ctx: Vec<usize> = self.live[depth].iter().map(|&v| assignment[v]).collect();
            (depth, ctx)
        });
        if let (Some(cache), Some(key)) = (&self.contexts, &key) {
            if let Some(&id) = cache.get(key) {
                return id;
            }
        }
        let var = self.order[depth];
        let row = self.structure.row_index(var, assignment);
        let mut branches = Vec::with_capacity(self.structure.cardinality(var));
        for value in 0..self.structure.cardinality(var) {
            assignment[var] = value;
            let ind = self.leaf(AcNode::Indicator { var, value });
            let par = self.leaf(AcNode::Parameter { var, value, row });
            let mut children = vec![ind, par];
            if depth + 1 < self.order.len() {
                children.push(self.build(depth + 1, assignment));
            }
            branches.push(self.push(AcNode::Product { children }));
        }
        let id = self.push(AcNode::Sum {
            children: branches,
            split: var,
        });
        if let (Some(cache), Some(key)) = (&mut self.contexts, key) {
            cache.insert(key, id);
        }
        id
    }
}

/// Compiles `structure` into a circuit that computes its network polynomial
/// and splits variables in `order`.
pub fn compile_ordered_ac(structure: &NetworkStructure, order: &[usize]) -> Result<ArithmeticCircuit> {
    compile(structure, order, true)
}

/// Same circuit family without context sharing: every assignment prefix gets its
/// own sub-circuit. Exponential; reference only.
pub fn compile_ordered_ac_unshared(structure: &NetworkStructure, order: &[usize]) -> Result<ArithmeticCircuit> {
    compile(structure, order, false)
}

fn compile(structure: &NetworkStructure, order: &[usize], share: bool) -> Result<ArithmeticCircuit> {
    structure.check_order(order)?;
    if structure.is_empty() {
        return Err(Error::InvalidArgument("network has no variables".into()));
    }
    let mut position = vec![0; structure.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let live = (0..order.len())
        .map(|depth| {
            order[..depth]
                .iter()
                .copied()
                .filter(|&v| structure.children(v).iter().any(|&c| position[c] >= depth))
                .collect()
        })
        .collect();
    let mut compiler = Compiler {
        structure,
        order,
        live,
        nodes: Vec::new(),
        leaves: HashMap::new(),
        contexts: share.then(HashMap::new),
    };
    let mut assignment = vec![0; structure.len()];
    let root = compiler.build(0, &mut assignment);
    ArithmeticCircuit::new(structure.clone(), compiler.nodes, root, order.to_vec())
}

/// Value of the circuit polynomial at indicators `ind` and parameters `params`,
/// in one bottom-up pass.
pub fn evaluate_ac(ac: &ArithmeticCircuit, ind: &Indicators, params: &Parameters) -> Result<f64> {
    let s = ac.structure();
    let mut values = vec![0.0; ac.len()];
    for (i, node) in ac.nodes().iter().enumerate() {
        values[i] = match *node {
            AcNode::Sum { ref children, .. } => children.iter().map(|c| values[c.0]).sum(),
            AcNode::Product { ref children } => children.iter().map(|c| values[c.0]).product(),
            AcNode::Indicator { var, value } => ind.value(var, value),
            AcNode::Parameter { var, value, row } => *params
                .get(var, row)
                .and_then(|p| p.get(value))
                .ok_or_else(|| Error::MissingParameter(parameter_label(s, var, value, row)))?,
        };
    }
    Ok(values[ac.root().0])
}

/// Upper limit on the number of complete subcircuits [`enumerate_terms`] will list.
pub const TERM_GUARD: u128 = 100_000;

/// One term (sorted leaf multiset) per complete subcircuit.
pub fn enumerate_terms(ac: &ArithmeticCircuit) -> Result<Vec<Vec<Leaf>>> {
    let mut counts = vec![0u128; ac.len()];
    for (i, node) in ac.nodes().iter().enumerate() {
        counts[i] = match node {
            AcNode::Sum { children, .. } => children.iter().fold(0u128, |a, c| a.saturating_add(counts[c.0])),
            AcNode::Product { children } => children.iter().fold(1u128, |a, c| a.saturating_mul(counts[c.0])),
            _ => 1,
        };
    }
    let total = counts[ac.root().0];
    if total > TERM_GUARD {
        return Err(Error::GuardExceeded {
            what: "complete subcircuits",
            size: total,
            limit: TERM_GUARD,
        });
    }
    let mut memo: HashMap<NodeId, Vec<Vec<Leaf>>> = HashMap::new();
    let mut terms = terms_of(ac, ac.root(), &mut memo);
    for t in &mut terms {
        t.sort_unstable();
    }
    Ok(terms)
}

fn terms_of(ac: &ArithmeticCircuit, id: NodeId, memo: &mut HashMap<NodeId, Vec<Vec<Leaf>>>) -> Vec<Vec<Leaf>> {
    if let Some(t) = memo.get(&id) {
        return t.clone();
    }
    let out = match *ac.node(id) {
        AcNode::Indicator { var, value } => vec![vec![Leaf::Indicator { var, value }]],
        AcNode::Parameter { var, value, row } => vec![vec![Leaf::Parameter { var, value, row }]],
        AcNode::Sum { ref children, .. } => children.iter().flat_map(|&c| terms_of(ac, c, memo)).collect(),
        AcNode::Product { ref children } => {
            let mut acc: Vec<Vec<Leaf>> = vec![Vec::new()];
            for &c in children {
                let sub = terms_of(ac, c, memo);
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        sub.iter().map(move |b| {
                            let mut t = a.clone();
                            t.extend_from_slice(b);
                            t
                        })
                    })
                    .collect();
            }
            acc
        }
    };
    memo.insert(id, out.clone());
    out
}

/// Structural properties of an ordered circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedReport {
    /// Sum children share a scope and the root covers every variable.
    pub smooth: bool,
    /// Product children have disjoint scopes.
    pub decomposable: bool,
    /// Each sum child fixes a distinct value of the split variable.
    pub deterministic: bool,
    /// Sum descendants split strictly later in the order.
    pub split_ordered: bool,
    /// Every sum node sees a single value of each parent of its split variable,
    /// and every path into the node indicates that same value.
    pub parents_determined: bool,
}

impl OrderedReport {
    pub fn all(&self) -> bool {
        self.smooth && self.decomposable && self.deterministic && self.split_ordered && self.parents_determined
    }
}

/// Per-node masks of the indicator values of each variable occurring below.
pub(crate) fn indicator_masks(ac: &ArithmeticCircuit) -> Vec<Vec<u64>> {
    let n = ac.structure().len();
    let mut masks = vec![vec![0u64; n]; ac.len()];
    for (i, node) in ac.nodes().iter().enumerate() {
        match *node {
            AcNode::Indicator { var, value } => masks[i][var] = 1 << value,
            AcNode::Parameter { .. } => {}
            AcNode::Sum { ref children, .. } | AcNode::Product { ref children } => {
                for c in children {
                    for v in 0..n {
                        masks[i][v] |= masks[c.0][v];
                    }
                }
            }
        }
    }
    masks
}

fn full_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1 << k) - 1
    }
}

/// Checks the ordered-circuit properties against `order`, each structurally.
pub fn check_ordered_properties(ac: &ArithmeticCircuit, order: &[usize]) -> OrderedReport {
    let s = ac.structure();
    let n = s.len();
    let masks = indicator_masks(ac);
    let scope = |i: usize| -> Vec<bool> { masks[i].iter().map(|&m| m != 0).collect() };

    let mut smooth = masks[ac.root().0].iter().all(|&m| m != 0);
    let mut decomposable = true;
    let mut deterministic = true;
    for node in ac.nodes() {
        match *node {
            AcNode::Sum { ref children, split } => {
                let first = scope(children[0].0);
                if children.iter().any(|c| scope(c.0) != first) {
                    smooth = false;
                }
                let mut seen = 0u64;
                for c in children {
                    let m = masks[c.0][split];
                    if m.count_ones() != 1 || seen & m != 0 {
                        deterministic = false;
                    }
                    seen |= m;
                }
            }
            AcNode::Product { ref children } => {
                let mut used = vec![false; n];
                for c in children {
                    for (v, u) in used.iter_mut().enumerate() {
                        if masks[c.0][v] != 0 {
                            if *u {
                                decomposable = false;
                            }
                            *u = true;
                        }
                    }
                }
            }
            _ => {}
        }
    }

    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v < n {
            position[v] = i;
        }
    }
    // earliest split position strictly below each node
    let mut below = vec![usize::MAX; ac.len()];
    let mut split_ordered = order.len() == n && s.is_topological(order);
    for (i, node) in ac.nodes().iter().enumerate() {
        let mut m = usize::MAX;
        for c in node.children() {
            m = m.min(below[c.0]);
            if let AcNode::Sum { split, .. } = *ac.node(*c) {
                m = m.min(position[split]);
            }
        }
        below[i] = m;
        if let AcNode::Sum { split, .. } = *node {
            if position[split] == usize::MAX || m <= position[split] {
                split_ordered = false;
            }
        }
    }

    // Top-down: values of each variable indicated on the paths reaching a node.
    // A parameter row below a sum node must agree with every such path.
    let mut context: Vec<Option<Vec<u64>>> = vec![None; ac.len()];
    context[ac.root().0] = Some((0..n).map(|v| full_mask(s.cardinality(v))).collect());
    let merge = |slot: &mut Option<Vec<u64>>, c: &[u64]| match slot {
        Some(prev) => prev.iter_mut().zip(c).for_each(|(a, b)| *a |= b),
        None => *slot = Some(c.to_vec()),
    };
    for i in (0..ac.len()).rev() {
        let Some(ctx) = context[i].clone() else {
            continue;
        };
        match ac.node(NodeId(i)) {
            AcNode::Sum { children, .. } => {
                for c in children {
                    merge(&mut context[c.0], &ctx);
                }
            }
            AcNode::Product { children } => {
                for (k, c) in children.iter().enumerate() {
                    let mut narrowed = ctx.clone();
                    for (j, sib) in children.iter().enumerate() {
                        if j != k {
                            for (v, m) in narrowed.iter_mut().enumerate() {
                                if masks[sib.0][v] != 0 {
                                    *m &= masks[sib.0][v];
                                }
                            }
                        }
                    }
                    merge(&mut context[c.0], &narrowed);
                }
            }
            _ => {}
        }
    }
    let possible = compute_possible_values(ac);
    let parents_determined = ac.nodes().iter().enumerate().all(|(i, node)| match *node {
        AcNode::Sum { split, .. } => s.parents(split).iter().all(|&w| {
            let mask = possible.mask(NodeId(i), w);
            let reached = context[i].as_ref().map_or(0, |c| c[w]);
            mask.count_ones() == 1 && reached & !mask == 0
        }),
        _ => true,
    });

    OrderedReport {
        smooth,
        decomposable,
        deterministic,
        split_ordered,
        parents_determined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_treatment_example, Variable};

    fn single() -> NetworkStructure {
        NetworkStructure::new(vec![Variable::new("A", ["a", "na"]).unwrap()], &[] as &[(&str, &str)]).unwrap()
    }

    fn chain() -> NetworkStructure {
        NetworkStructure::new(
            ["A", "B", "C"].map(Variable::binary).to_vec(),
            &[("A", "B"), ("B", "C")],
        )
        .unwrap()
    }

    #[test]
    fn single_variable_circuit() {
        let s = single();
        let ac = compile_ordered_ac(&s, &[0]).unwrap();
        let AcNode::Sum { children, split } = ac.node(ac.root()) else {
            panic!("root must be a sum");
        };
        assert_eq!(*split, 0);
        assert_eq!(children.len(), 2);
        for (value, c) in children.iter().enumerate() {
            let AcNode::Product { children: leaves } = ac.node(*c) else {
                panic!("branch must be a product");
            };
            let kinds: Vec<&AcNode> = leaves.iter().map(|l| ac.node(*l)).collect();
            assert_eq!(
                kinds,
                [&AcNode::Indicator { var: 0, value }, &AcNode::Parameter { var: 0, value, row: 0 }]
            );
        }
        let terms = enumerate_terms(&ac).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(check_ordered_properties(&ac, &[0]).all());
    }

    #[test]
    fn chain_shares_the_last_subcircuit() {
        let s = chain();
        let shared = compile_ordered_ac(&s, &[0, 1, 2]).unwrap();
        let unshared = compile_ordered_ac_unshared(&s, &[0, 1, 2]).unwrap();
        assert!(shared.len() < unshared.len(), "{} vs {}", shared.len(), unshared.len());
        let mut a = enumerate_terms(&shared).unwrap();
        let mut b = enumerate_terms(&unshared).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn rejects_non_topological_order() {
        assert!(matches!(
            compile_ordered_ac(&chain(), &[1, 0, 2]),
            Err(Error::NotTopological(_))
        ));
    }

    #[test]
    fn treatment_circuit_has_one_term_per_instantiation() {
        let (net, _) = build_treatment_example();
        let s = net.structure();
        let ac = compile_ordered_ac(s, &s.default_order()).unwrap();
        let terms = enumerate_terms(&ac).unwrap();
        assert_eq!(terms.len(), 24);
        for t in &terms {
            for v in 0..s.len() {
                let lambdas = t.iter().filter(|l| matches!(l, Leaf::Indicator { var, .. } if *var == v)).count();
                let thetas = t.iter().filter(|l| matches!(l, Leaf::Parameter { var, .. } if *var == v)).count();
                assert_eq!((lambdas, thetas), (1, 1));
            }
        }
        assert!(check_ordered_properties(&ac, ac.order()).all());
    }

    #[test]
    fn treatment_s3_branch_splits_strain_then_test_then_symptom() {
        let (net, _) = build_treatment_example();
        let s = net.structure();
        let ac = compile_ordered_ac(s, &s.default_order()).unwrap();
        let AcNode::Sum { children, split: 0 } = ac.node(ac.root()) else {
            panic!("root splits S");
        };
        let s3 = ac.node(children[2]).children();
        assert_eq!(ac.node(s3[0]), &AcNode::Indicator { var: 0, value: 2 });
        assert_eq!(ac.node(s3[1]), &AcNode::Parameter { var: 0, value: 2, row: 0 });
        let AcNode::Sum { children: r_branches, split: 1 } = ac.node(s3[2]) else {
            panic!("then R");
        };
        let mut v_nodes = Vec::new();
        for (value, b) in r_branches.iter().enumerate() {
            let kids = ac.node(*b).children();
            assert_eq!(ac.node(kids[1]), &AcNode::Parameter { var: 1, value, row: 2 });
            let AcNode::Sum { children: v_branches, split: 2 } = ac.node(kids[2]) else {
                panic!("then V");
            };
            for (vv, vb) in v_branches.iter().enumerate() {
                let leaves = ac.node(*vb).children();
                assert_eq!(ac.node(leaves[1]), &AcNode::Parameter { var: 2, value: vv, row: 2 });
                assert!(matches!(ac.node(leaves[2]), AcNode::Sum { split: 3, .. }));
            }
            v_nodes.push(kids[2]);
        }
        // the (V, s3) split is duplicated per test result
        assert_ne!(v_nodes[0], v_nodes[1]);
    }

    #[test]
    fn detects_split_below_child() {
        // B's sum sits above A's sum although A is B's parent
        let s = NetworkStructure::new(vec![Variable::binary("A"), Variable::binary("B")], &[("A", "B")]).unwrap();
        let mut nodes = Vec::new();
        let mut push = |n: AcNode| {
            nodes.push(n);
            NodeId(nodes.len() - 1)
        };
        let la = [push(AcNode::Indicator { var: 0, value: 0 }), push(AcNode::Indicator { var: 0, value: 1 })];
        let ta = [push(AcNode::Parameter { var: 0, value: 0, row: 0 }), push(AcNode::Parameter { var: 0, value: 1, row: 0 })];
        let pa: Vec<NodeId> = (0..2).map(|x| push(AcNode::Product { children: vec![la[x], ta[x]] })).collect();
        let sa = push(AcNode::Sum { children: pa, split: 0 });
        let lb = [push(AcNode::Indicator { var: 1, value: 0 }), push(AcNode::Indicator { var: 1, value: 1 })];
        let tb = [push(AcNode::Parameter { var: 1, value: 0, row: 0 }), push(AcNode::Parameter { var: 1, value: 1, row: 0 })];
        let pb: Vec<NodeId> = (0..2).map(|x| push(AcNode::Product { children: vec![lb[x], tb[x], sa] })).collect();
        let root = push(AcNode::Sum { children: pb, split: 1 });
        let ac = ArithmeticCircuit::new(s, nodes, root, vec![0, 1]).unwrap();
        let report = check_ordered_properties(&ac, &[0, 1]);
        assert!(!report.split_ordered);
        assert!(report.smooth && report.decomposable && report.deterministic);
    }

    #[test]
    fn detects_sharing_across_parent_contexts() {
        // one B|a sum node reused under A=na
        let s = NetworkStructure::new(vec![Variable::binary("A"), Variable::binary("B")], &[("A", "B")]).unwrap();
        let build = |shared: bool| {
            let mut nodes = Vec::new();
            let mut push = |n: AcNode| {
                nodes.push(n);
                NodeId(nodes.len() - 1)
            };
            let mut b_sums = Vec::new();
            for row in 0..if shared { 1 } else { 2 } {
                let terms = (0..2)
                    .map(|x| {
                        let l = push(AcNode::Indicator { var: 1, value: x });
                        let t = push(AcNode::Parameter { var: 1, value: x, row });
                        push(AcNode::Product { children: vec![l, t] })
                    })
                    .collect();
                b_sums.push(push(AcNode::Sum { children: terms, split: 1 }));
            }
            let branches = (0..2)
                .map(|x| {
                    let l = push(AcNode::Indicator { var: 0, value: x });
                    let t = push(AcNode::Parameter { var: 0, value: x, row: 0 });
                    push(AcNode::Product { children: vec![l, t, b_sums[x.min(b_sums.len() - 1)]] })
                })
                .collect();
            let root = push(AcNode::Sum { children: branches, split: 0 });
            ArithmeticCircuit::new(s.clone(), nodes, root, vec![0, 1]).unwrap()
        };
        assert!(check_ordered_properties(&build(false), &[0, 1]).all());
        let report = check_ordered_properties(&build(true), &[0, 1]);
        assert!(!report.parents_determined);
        assert!(report.smooth && report.decomposable && report.deterministic && report.split_ordered);
    }

    #[test]
    fn text_export_lists_every_node() {
        let ac = compile_ordered_ac(&single(), &[0]).unwrap();
        let text = ac.to_text();
        let expected = "\
# ac root=6 order=A
0 ind A=a
1 param A=a
2 prod - 0 1
3 ind A=na
4 param A=na
5 prod - 3 4
6 sum split=A 2 5
";
        assert_eq!(text, expected);
    }
}
