//! Brute-force references. Nothing here shares code with the circuit path
//! beyond the model types; everything is enumeration over instantiations and
//! credal-set vertices, guarded by hard size limits.

use crate::error::{Error, Result};
use crate::model::{enrich_maximal, CredalNetwork, CredalSet, Event, Indicators, NetworkStructure, Parameters, PROB_TOL};

/// Largest number of full instantiations the joint enumeration will visit.
pub const INSTANTIATION_GUARD: u128 = 10_000_000;

/// Largest number of vertex combinations `mar_max_bruteforce` will visit.
pub const VERTEX_PRODUCT_GUARD: u128 = 1_000_000;

/// Largest credal-set dimension `credal_vertices` accepts.
pub const VERTEX_DIM_GUARD: usize = 8;

/// Extreme points of a credal set.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexList(pub Vec<Vec<f64>>);

impl VertexList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Calls `visit` on every full instantiation (last variable fastest).
fn for_each_instantiation(s: &NetworkStructure, mut visit: impl FnMut(&[usize])) -> Result<()> {
    let total = s.instantiation_count();
    if total > INSTANTIATION_GUARD {
        return Err(Error::GuardExceeded {
            what: "instantiations",
            size: total,
            limit: INSTANTIATION_GUARD,
        });
    }
    let mut x = vec![0; s.len()];
    loop {
        visit(&x);
        let mut v = s.len();
        loop {
            if v == 0 {
                return Ok(());
            }
            v -= 1;
            x[v] += 1;
            if x[v] < s.cardinality(v) {
                break;
            }
            x[v] = 0;
        }
    }
}

/// The network polynomial `Σ_x Π_i θ_{x_i|u_i} λ_{x_i}` by direct summation.
pub fn network_polynomial(s: &NetworkStructure, params: &Parameters, ind: &Indicators) -> Result<f64> {
    let mut total = 0.0;
    for_each_instantiation(s, |x| {
        let mut term = 1.0;
        for v in 0..s.len() {
            term *= params.row(v, s.row_index(v, x))[x[v]] * ind.value(v, x[v]);
        }
        total += term;
    })?;
    Ok(total)
}

/// `p(e)` for a precise network, summing the factorized joint over every
/// instantiation consistent with `e`.
pub fn joint_marginal_bruteforce(net: &CredalNetwork, e: &Event) -> Result<f64> {
    let params = net.point_parameters()?;
    marginal_with(net.structure(), &params, e)
}

/// `p_Θ(e)` for explicit parameters.
pub fn marginal_with(s: &NetworkStructure, params: &Parameters, e: &Event) -> Result<f64> {
    let mut total = 0.0;
    for_each_instantiation(s, |x| {
        if e.matches(x) {
            total += (0..s.len())
                .map(|v| params.row(v, s.row_index(v, x))[x[v]])
                .product::<f64>();
        }
    })?;
    Ok(total)
}

/// Vertices of a credal set. For a box ∩ simplex every vertex has at most one
/// coordinate strictly inside its bounds, so it is enough to pin all other
/// coordinates to a bound and solve the free one from the sum constraint.
pub fn credal_vertices(cs: &CredalSet) -> Result<VertexList> {
    if cs.dim() > VERTEX_DIM_GUARD {
        return Err(Error::GuardExceeded {
            what: "credal set dimension",
            size: cs.dim() as u128,
            limit: VERTEX_DIM_GUARD as u128,
        });
    }
    cs.validate()
        .map_err(|issue| Error::InvalidCredalSet(issue.to_string()))?;
    match cs {
        CredalSet::Point(p) => Ok(VertexList(vec![p.clone()])),
        CredalSet::Vertices(vs) => Ok(VertexList(vs.clone())),
        CredalSet::Box { lower, upper } => {
            let k = lower.len();
            let mut out: Vec<Vec<f64>> = Vec::new();
            for free in 0..k {
                for pins in 0u32..(1 << (k - 1)) {
                    let mut w = vec![0.0; k];
                    let mut bit = 0;
                    for (i, slot) in w.iter_mut().enumerate() {
                        if i == free {
                            continue;
                        }
                        *slot = if pins & (1 << bit) != 0 { upper[i] } else { lower[i] };
                        bit += 1;
                    }
                    let rest: f64 = w.iter().sum();
                    let f = 1.0 - rest;
                    if f < lower[free] - PROB_TOL || f > upper[free] + PROB_TOL {
                        continue;
                    }
                    w[free] = f.clamp(lower[free], upper[free]);
                    if !out
                        .iter()
                        .any(|o| o.iter().zip(&w).all(|(a, b)| (a - b).abs() <= 1e-12))
                    {
                        out.push(w);
                    }
                }
            }
            Ok(VertexList(out))
        }
    }
}

/// Exact optimum with the parameters that attain it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptimum {
    pub value: f64,
    pub argmax: Parameters,
}

fn optimize_bruteforce(net: &CredalNetwork, e: &Event, maximize: bool) -> Result<OracleOptimum> {
    let s = net.structure();
    let mut rows: Vec<(usize, usize, Vec<Vec<f64>>)> = Vec::new();
    let mut combos: u128 = 1;
    for v in 0..s.len() {
        for r in 0..s.row_count(v) {
            let vs = credal_vertices(net.credal_set(v, r)?)?.0;
            combos = combos.saturating_mul(vs.len() as u128);
            rows.push((v, r, vs));
        }
    }
    if combos > VERTEX_PRODUCT_GUARD {
        return Err(Error::GuardExceeded {
            what: "vertex combinations",
            size: combos,
            limit: VERTEX_PRODUCT_GUARD,
        });
    }

    // instantiations consistent with e, with the CPD row index of each variable
    let mut consistent: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for_each_instantiation(s, |x| {
        if e.matches(x) {
            consistent.push((x.to_vec(), (0..s.len()).map(|v| s.row_index(v, x)).collect()));
        }
    })?;
    let mut slot = vec![Vec::new(); s.len()];
    for (i, (v, _, _)) in rows.iter().enumerate() {
        slot[*v].push(i);
    }

    let mut choice = vec![0usize; rows.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let value: f64 = consistent
            .iter()
            .map(|(x, r)| {
                (0..s.len())
                    .map(|v| rows[slot[v][r[v]]].2[choice[slot[v][r[v]]]][x[v]])
                    .product::<f64>()
            })
            .sum();
        let better = match &best {
            None => true,
            Some((b, _)) if maximize => value > *b,
            Some((b, _)) => value < *b,
        };
        if better {
            best = Some((value, choice.clone()));
        }
        // odometer, last row fastest
        let mut i = rows.len();
        loop {
            if i == 0 {
                let (value, choice) = best.expect("at least one combination");
                let mut table: Vec<Vec<Vec<f64>>> = (0..s.len()).map(|v| vec![Vec::new(); s.row_count(v)]).collect();
                for (k, (v, r, vs)) in rows.iter().enumerate() {
                    table[*v][*r] = vs[choice[k]].clone();
                }
                return Ok(OracleOptimum {
                    value,
                    argmax: Parameters::new(table),
                });
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < rows[i].2.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Exact `MAR_max(net, e)`: the joint is multilinear in each row, so the
/// maximum over the product of credal sets sits on a product of vertices.
pub fn mar_max_bruteforce(net: &CredalNetwork, e: &Event) -> Result<OracleOptimum> {
    optimize_bruteforce(net, e, true)
}

/// Exact `MAR_min(net, e)` over vertex products.
pub fn mar_min_bruteforce(net: &CredalNetwork, e: &Event) -> Result<OracleOptimum> {
    optimize_bruteforce(net, e, false)
}

/// Exact `MAR_max` of the maximal enrichment of `net` under `order`.
///
/// In the maximal enrichment the row of the variable at depth `i` is fixed by
/// the values of the first `i` variables, so each row is used on exactly one
/// branch of the prefix tree and the maximum can be taken branch by branch,
/// scanning the vertices of each row.
pub fn mar_max_enriched_bruteforce(net: &CredalNetwork, order: &[usize], e: &Event) -> Result<f64> {
    let enriched = enrich_maximal(net, order)?;
    let s = enriched.structure();
    let leaves: u128 = s.instantiation_count();
    if leaves > INSTANTIATION_GUARD {
        return Err(Error::GuardExceeded {
            what: "instantiations",
            size: leaves,
            limit: INSTANTIATION_GUARD,
        });
    }
    let mut assignment = vec![0; s.len()];
    prefix_max(&enriched, order, e, 0, &mut assignment)
}

fn prefix_max(net: &CredalNetwork, order: &[usize], e: &Event, depth: usize, x: &mut [usize]) -> Result<f64> {
    if depth == order.len() {
        return Ok(1.0);
    }
    let s = net.structure();
    let v = order[depth];
    let row = s.row_index(v, x);
    let mut below = vec![0.0; s.cardinality(v)];
    for (value, slot) in below.iter_mut().enumerate() {
        if e.get(v).is_some_and(|obs| obs != value) {
            continue;
        }
        x[v] = value;
        *slot = prefix_max(net, order, e, depth + 1, x)?;
    }
    let vertices = credal_vertices(net.credal_set(v, row)?)?;
    Ok(vertices
        .0
        .iter()
        .map(|w| w.iter().zip(&below).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max))
}
