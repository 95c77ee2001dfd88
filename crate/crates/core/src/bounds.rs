//! Bounds on `MAR_max` through credal SPNs.
//!
//! [`mar_max_cspn`] solves the credal SPN exactly with one bottom-up pass and
//! a local linear program per sum node. Because the credal SPN drops the ties
//! between same-label sum nodes, its optimum bounds the network's `MAR_max`
//! from above ([`cub`], [`cub_max`]). [`clb`] projects the per-node optimum back
//! onto one weight vector per label, which is a legal parameter choice and so a
//! lower bound.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ac::{compile_ordered_ac, NodeId};
use crate::error::{Error, Result};
use crate::model::{CredalNetwork, CredalSet, Event, Indicators, PROB_TOL};
use crate::spn::{ac_to_spn, attach_credal_sets, evaluate_spn, CredalSpn, Label, SpnNode, WeightAssignment};

/// Tolerance for bound parity and witness checks.
pub const BOUND_TOL: f64 = 1e-9;

/// Default number of orders searched by `cub_max`.
pub const DEFAULT_ORDERS: usize = 30;

/// Default cap on label-change trials in `clb`.
pub const DEFAULT_MAX_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Max,
    Min,
}

/// Optimum of a linear objective over one credal set.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution {
    pub value: f64,
    pub weights: Vec<f64>,
    /// Whether the solver is exact for this kind of set (always true here).
    pub tight: bool,
}

/// Optimizes `Σ_j w_j c_j` over `w ∈ cs`.
///
/// Points are a dot product and vertex lists a scan. For a box intersected with
/// the simplex, start every coordinate at its lower bound and pour the remaining
/// mass into coordinates by decreasing child value (increasing for `Min`), each
/// up to its upper bound. Ties go to the lower coordinate index.
pub fn local_max(cs: &CredalSet, child_values: &[f64], direction: Direction) -> Result<LocalSolution> {
    if cs.dim() != child_values.len() {
        return Err(Error::DimensionMismatch {
            expected: cs.dim(),
            found: child_values.len(),
        });
    }
    if child_values.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::InvalidArgument("child values must be finite and nonnegative".into()));
    }
    cs.validate()
        .map_err(|issue| Error::InvalidCredalSet(issue.to_string()))?;
    let dot = |w: &[f64]| w.iter().zip(child_values).map(|(a, b)| a * b).sum::<f64>();
    let weights = match cs {
        CredalSet::Point(p) => p.clone(),
        CredalSet::Vertices(vs) => {
            let mut best = 0;
            let mut best_value = dot(&vs[0]);
            for (i, v) in vs.iter().enumerate().skip(1) {
                let value = dot(v);
                let better = match direction {
                    Direction::Max => value > best_value,
                    Direction::Min => value < best_value,
                };
                if better {
                    best = i;
                    best_value = value;
                }
            }
            vs[best].clone()
        }
        CredalSet::Box { lower, upper } => {
            let mut w = lower.clone();
            let mut remaining = 1.0 - lower.iter().sum::<f64>();
            let mut idx: Vec<usize> = (0..w.len()).collect();
            match direction {
                Direction::Max => idx.sort_by(|&a, &b| child_values[b].total_cmp(&child_values[a]).then(a.cmp(&b))),
                Direction::Min => idx.sort_by(|&a, &b| child_values[a].total_cmp(&child_values[b]).then(a.cmp(&b))),
            }
            for i in idx {
                if remaining <= 0.0 {
                    break;
                }
                let add = remaining.min(upper[i] - lower[i]);
                w[i] += add;
                remaining -= add;
            }
            w
        }
    };
    Ok(LocalSolution {
        value: dot(&weights),
        weights,
        tight: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    /// An upper bound on the maximum (CSPN maximum).
    UpperOnMax,
    /// A lower bound on the maximum (value of a legal parameter choice).
    LowerOnMax,
    /// A lower bound on the minimum (CSPN minimum).
    LowerOnMin,
}

impl BoundDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundDirection::UpperOnMax => "upper_on_max",
            BoundDirection::LowerOnMax => "lower_on_max",
            BoundDirection::LowerOnMin => "lower_on_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub bound: f64,
    pub direction: BoundDirection,
    /// Weights chosen at each sum node, in branch order.
    pub witness: WeightAssignment,
    /// One weight vector per CPD label (in domain order) when the witness is tied.
    pub tied: Option<BTreeMap<Label, Vec<f64>>>,
    pub order: Vec<usize>,
    pub orders_tried: usize,
    pub steps: usize,
    pub elapsed: Duration,
    pub compile_time: Duration,
}

/// Compiles `net` under `order` into its credal SPN.
pub fn compile_cspn(net: &CredalNetwork, order: &[usize]) -> Result<CredalSpn> {
    net.ensure_valid()?;
    let ac = compile_ordered_ac(net.structure(), order)?;
    let spn = ac_to_spn(&ac, net)?;
    attach_credal_sets(&spn, net)
}

/// Node values and per-node optimal weights of one bottom-up credal pass.
fn credal_pass(cspn: &CredalSpn, ind: &Indicators, direction: Direction) -> Result<(Vec<f64>, WeightAssignment)> {
    let spn = cspn.spn();
    let mut values = vec![0.0; spn.len()];
    let mut witness = WeightAssignment::new(spn.len());
    for (i, node) in spn.nodes().iter().enumerate() {
        values[i] = match node {
            SpnNode::Indicator { var, value } => ind.value(*var, *value),
            SpnNode::Product { children } => children.iter().map(|c| values[c.0]).product(),
            SpnNode::Sum { children, .. } => {
                let cs = cspn
                    .credal_set(NodeId(i))
                    .ok_or_else(|| Error::MalformedCircuit(format!("sum node {i} has no credal set")))?;
                let child_values: Vec<f64> = children.iter().map(|c| values[c.0]).collect();
                let sol = local_max(cs, &child_values, direction)?;
                witness.set(NodeId(i), sol.weights);
                sol.value
            }
        };
    }
    Ok((values, witness))
}

fn cspn_bound(cspn: &CredalSpn, e: &Event, direction: Direction) -> Result<BoundResult> {
    let start = Instant::now();
    let ind = Indicators::from_event(cspn.spn().structure(), e);
    let (values, witness) = credal_pass(cspn, &ind, direction)?;
    Ok(BoundResult {
        bound: values[cspn.spn().root().0],
        direction: match direction {
            Direction::Max => BoundDirection::UpperOnMax,
            Direction::Min => BoundDirection::LowerOnMin,
        },
        witness,
        tied: None,
        order: cspn.spn().order().to_vec(),
        orders_tried: 1,
        steps: 0,
        elapsed: start.elapsed(),
        compile_time: Duration::ZERO,
    })
}

/// Exact maximum of the event probability over the credal SPN.
pub fn mar_max_cspn(cspn: &CredalSpn, e: &Event) -> Result<BoundResult> {
    cspn_bound(cspn, e, Direction::Max)
}

/// Exact minimum over the credal SPN: a lower bound on the network's minimum.
pub fn mar_min_cspn(cspn: &CredalSpn, e: &Event) -> Result<BoundResult> {
    cspn_bound(cspn, e, Direction::Min)
}

fn timed_compile(net: &CredalNetwork, order: &[usize]) -> Result<(CredalSpn, Duration)> {
    let start = Instant::now();
    let cspn = compile_cspn(net, order)?;
    Ok((cspn, start.elapsed()))
}

/// Upper bound on `MAR_max(net, e)` from the credal SPN compiled under `order`.
pub fn cub(net: &CredalNetwork, e: &Event, order: &[usize]) -> Result<BoundResult> {
    let (cspn, compile_time) = timed_compile(net, order)?;
    let mut result = mar_max_cspn(&cspn, e)?;
    result.compile_time = compile_time;
    Ok(result)
}

/// Lower bound on `MAR_min(net, e)` from the credal SPN compiled under `order`.
pub fn min_lower_bound(net: &CredalNetwork, e: &Event, order: &[usize]) -> Result<BoundResult> {
    let (cspn, compile_time) = timed_compile(net, order)?;
    let mut result = mar_min_cspn(&cspn, e)?;
    result.compile_time = compile_time;
    Ok(result)
}

/// The orders `cub_max` evaluates: the default order first, then seeded random
/// topological orders, rejecting duplicates for up to ten times `n_orders`
/// draws. Returned without duplicates.
pub fn sample_orders(net: &CredalNetwork, n_orders: usize, seed: u64) -> Vec<Vec<usize>> {
    let s = net.structure();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = vec![s.default_order()];
    let mut draws = 0;
    while orders.len() < n_orders && draws < 10 * n_orders {
        draws += 1;
        let o = s.random_order(&mut rng);
        if !orders.contains(&o) {
            orders.push(o);
        }
    }
    orders.truncate(n_orders.max(1));
    orders
}

/// The smallest `cub` over sampled topological orders. Ties between orders go
/// to the lexicographically smallest order (by variable name), so the result
/// does not depend on scheduling.
pub fn cub_max(net: &CredalNetwork, e: &Event, n_orders: usize, seed: u64) -> Result<BoundResult> {
    if n_orders == 0 {
        return Err(Error::InvalidArgument("n_orders must be at least 1".into()));
    }
    net.ensure_valid()?;
    let start = Instant::now();
    let s = net.structure();
    let orders = sample_orders(net, n_orders, seed);
    let results = orders
        .par_iter()
        .map(|o| cub(net, e, o))
        .collect::<Result<Vec<_>>>()?;
    let tried = results.len();
    let compile_time = results.iter().map(|r| r.compile_time).sum();
    let mut best = results
        .into_iter()
        .min_by(|a, b| {
            a.bound
                .total_cmp(&b.bound)
                .then_with(|| s.order_names(&a.order).cmp(&s.order_names(&b.order)))
        })
        .expect("at least one order");
    best.orders_tried = tried;
    best.compile_time = compile_time;
    best.elapsed = start.elapsed();
    Ok(best)
}

/// Reorders branch-ordered weights of a sum node into domain order.
fn to_domain_order(values: &[usize], w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    for (&x, &wk) in values.iter().zip(w) {
        out[x] = wk;
    }
    out
}

/// Per-node weights obtained by giving every sum node its label's representative weights.
fn tie_weights(cspn: &CredalSpn, chosen: &BTreeMap<Label, Vec<f64>>) -> WeightAssignment {
    let spn = cspn.spn();
    let mut out = WeightAssignment::new(spn.len());
    for id in spn.sum_nodes() {
        let SpnNode::Sum { label, values, .. } = spn.node(id) else {
            unreachable!()
        };
        let row = &chosen[label];
        out.set(id, values.iter().map(|&x| row[x]).collect());
    }
    out
}

/// Greedy lower bound on `MAR_max` by projection.
///
/// Starts from the credal-SPN optimum, ties each label to the weights of its
/// highest-valued sum node, then tries swapping single labels to other nodes'
/// weights (round robin over labels, first strict improvement kept). Stops at
/// parity with the upper bound, after a full pass without improvement, or after
/// `max_steps` trials.
pub fn clb(net: &CredalNetwork, e: &Event, order: &[usize], max_steps: usize) -> Result<BoundResult> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    let (cspn, compile_time) = timed_compile(net, order)?;
    let start = Instant::now();
    let spn = cspn.spn();
    let ind = Indicators::from_event(spn.structure(), e);
    let (values, witness) = credal_pass(&cspn, &ind, Direction::Max)?;
    let upper = values[spn.root().0];

    // candidate weights per label, in node-id order, deduplicated
    let mut candidates: BTreeMap<Label, Vec<(NodeId, Vec<f64>)>> = BTreeMap::new();
    let mut initial: BTreeMap<Label, (NodeId, f64)> = BTreeMap::new();
    for id in spn.sum_nodes() {
        let SpnNode::Sum { label, values: branch, .. } = spn.node(id) else {
            unreachable!()
        };
        let w = to_domain_order(branch, witness.get(id).expect("pass sets every sum node"));
        let slot = candidates.entry(*label).or_default();
        if !slot.iter().any(|(_, c)| *c == w) {
            slot.push((id, w));
        }
        let entry = initial.entry(*label).or_insert((id, values[id.0]));
        if values[id.0] > entry.1 {
            *entry = (id, values[id.0]);
        }
    }
    let weights_of = |node: NodeId| -> Vec<f64> {
        let SpnNode::Sum { values: branch, .. } = spn.node(node) else {
            unreachable!()
        };
        to_domain_order(branch, witness.get(node).expect("pass sets every sum node"))
    };
    let mut chosen: BTreeMap<Label, Vec<f64>> = initial
        .iter()
        .map(|(label, &(node, _))| (*label, weights_of(node)))
        .collect();
    let evaluate = |chosen: &BTreeMap<Label, Vec<f64>>| evaluate_spn(spn, &ind, &tie_weights(&cspn, chosen));
    let mut best = evaluate(&chosen)?;

    let mut steps = 0;
    'search: while best < upper - BOUND_TOL && steps < max_steps {
        let mut improved = false;
        for (label, alternatives) in &candidates {
            for (_, w) in alternatives {
                if chosen[label] == *w {
                    continue;
                }
                if steps >= max_steps {
                    break 'search;
                }
                steps += 1;
                let mut trial = chosen.clone();
                trial.insert(*label, w.clone());
                let value = evaluate(&trial)?;
                if value > best {
                    best = value;
                    chosen = trial;
                    improved = true;
                    if best >= upper - BOUND_TOL {
                        break 'search;
                    }
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }

    Ok(BoundResult {
        bound: best,
        direction: BoundDirection::LowerOnMax,
        witness: tie_weights(&cspn, &chosen),
        tied: Some(chosen),
        order: order.to_vec(),
        orders_tried: 1,
        steps,
        elapsed: start.elapsed(),
        compile_time,
    })
}

/// True when every witness vector lies in its node's credal set.
pub fn witness_is_feasible(cspn: &CredalSpn, witness: &WeightAssignment) -> bool {
    cspn.spn().sum_nodes().all(|id| {
        match (cspn.credal_set(id), witness.get(id)) {
            (Some(cs), Some(w)) => cs.contains(w, PROB_TOL),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_treatment_example, NetworkStructure, Variable};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn box_pair_prefers_low_weight_when_first_child_is_zero() {
        let cs = CredalSet::binary_interval(0.4, 0.8);
        let sol = local_max(&cs, &[0.0, 1.0], Direction::Max).unwrap();
        assert!(close(sol.value, 0.6));
        assert!(close(sol.weights[0], 0.4) && close(sol.weights[1], 0.6));
        assert!(sol.tight);
    }

    #[test]
    fn box_pair_prefers_high_weight_when_first_child_is_one() {
        let cs = CredalSet::binary_interval(0.4, 0.8);
        let sol = local_max(&cs, &[1.0, 0.0], Direction::Max).unwrap();
        assert!(close(sol.value, 0.8));
        assert!(close(sol.weights[0], 0.8) && close(sol.weights[1], 0.2));
    }

    #[test]
    fn point_is_a_dot_product() {
        let cs = CredalSet::point([0.2, 0.3, 0.5]);
        let sol = local_max(&cs, &[1.0, 2.0, 3.0], Direction::Min).unwrap();
        assert!(close(sol.value, 2.3));
        assert_eq!(sol.weights, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn capped_prevalence_box() {
        let cs = CredalSet::interval([0.0, 0.0, 0.0], [1.0, 1.0, 0.1]);
        let sol = local_max(&cs, &[0.0, 0.0, 0.7], Direction::Max).unwrap();
        assert!(close(sol.value, 0.07));
        assert!(close(sol.weights[2], 0.1));
        // same cap on the middle coordinate
        let cs = CredalSet::interval([0.0, 0.0, 0.0], [1.0, 0.1, 1.0]);
        let sol = local_max(&cs, &[0.0, 0.7, 0.0], Direction::Max).unwrap();
        assert!(close(sol.value, 0.07));
        assert_eq!(sol.weights, vec![0.9, 0.1, 0.0]);
    }

    #[test]
    fn ties_break_to_lowest_index() {
        let cs = CredalSet::full_simplex(3);
        let sol = local_max(&cs, &[0.5, 0.5, 0.5], Direction::Max).unwrap();
        assert_eq!(sol.weights, vec![1.0, 0.0, 0.0]);
        let sol = local_max(&cs, &[0.5, 0.5, 0.5], Direction::Min).unwrap();
        assert_eq!(sol.weights, vec![1.0, 0.0, 0.0]);
        let vs = CredalSet::Vertices(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(local_max(&vs, &[1.0, 1.0], Direction::Max).unwrap().weights, vec![0.5, 0.5]);
    }

    #[test]
    fn vertex_scan_and_min_direction() {
        let cs = CredalSet::Vertices(vec![vec![0.2, 0.8], vec![0.7, 0.3], vec![0.5, 0.5]]);
        let max = local_max(&cs, &[1.0, 0.0], Direction::Max).unwrap();
        assert_eq!(max.weights, vec![0.7, 0.3]);
        let min = local_max(&cs, &[1.0, 0.0], Direction::Min).unwrap();
        assert_eq!(min.weights, vec![0.2, 0.8]);
    }

    #[test]
    fn infeasible_and_mismatched_sets_fail() {
        let empty = CredalSet::interval([0.6, 0.6], [1.0, 1.0]);
        assert!(matches!(local_max(&empty, &[1.0, 0.0], Direction::Max), Err(Error::InvalidCredalSet(_))));
        let cs = CredalSet::full_simplex(2);
        assert!(matches!(
            local_max(&cs, &[1.0], Direction::Max),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn treatment_bound_and_witness() {
        let (net, e) = build_treatment_example();
        let order = net.structure().default_order();
        let cspn = compile_cspn(&net, &order).unwrap();
        let r = mar_max_cspn(&cspn, &e).unwrap();
        assert!((r.bound - 0.07).abs() < 1e-12);
        assert!(witness_is_feasible(&cspn, &r.witness));
        let w = evaluate_spn(cspn.spn(), &Indicators::from_event(net.structure(), &e), &r.witness).unwrap();
        assert!((w - r.bound).abs() < 1e-12);
        let min = mar_min_cspn(&cspn, &e).unwrap();
        assert_eq!(min.bound, 0.0);
        assert_eq!(min.direction, BoundDirection::LowerOnMin);
    }

    #[test]
    fn clb_on_precise_network_matches_cub() {
        let s = NetworkStructure::new(
            vec![Variable::binary("A"), Variable::binary("B")],
            &[("A", "B")],
        )
        .unwrap();
        let net = CredalNetwork::from_fn(s, |v, r| CredalSet::point(if v == 0 { [0.3, 0.7] } else if r == 0 { [0.9, 0.1] } else { [0.2, 0.8] }));
        let e = Event::new(net.structure(), &[("B", "1")]).unwrap();
        let order = [0, 1];
        let upper = cub(&net, &e, &order).unwrap();
        let lower = clb(&net, &e, &order, 100).unwrap();
        let exact = 0.3 * 0.1 + 0.7 * 0.8;
        assert!((upper.bound - exact).abs() < 1e-12);
        assert!((lower.bound - exact).abs() < 1e-12);
        assert_eq!(lower.steps, 0);
    }

    #[test]
    fn cub_max_argument_checks() {
        let (net, e) = build_treatment_example();
        assert!(cub_max(&net, &e, 0, 0).is_err());
        assert!(clb(&net, &e, &net.structure().default_order(), 0).is_err());
        let one = cub_max(&net, &e, 1, 3).unwrap();
        assert_eq!(one.order, net.structure().default_order());
    }
}
