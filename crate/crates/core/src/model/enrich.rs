//! Constructions that change which parameter choices a credal network allows:
//! intervention sets encoded as credal sets, and structural enrichment.

use super::credal::CredalSet;
use super::network::CredalNetwork;
use crate::error::{Error, Result};

/// Encodes a parametric intervention on `targets` as a credal network: targeted
/// variables get the full simplex on every row, the rest keep their points.
pub fn credal_from_intervention<S: AsRef<str>>(net: &CredalNetwork, targets: &[S]) -> Result<CredalNetwork> {
    let s = net.structure();
    let mut hit = vec![false; s.len()];
    for name in targets {
        hit[s.lookup(name.as_ref())?] = true;
    }
    let mut out = net.clone();
    for v in 0..s.len() {
        for row in 0..s.row_count(v) {
            let cs = net.credal_set(v, row)?;
            if !cs.is_point() {
                return Err(Error::NotPoint(s.row_path(v, row)));
            }
            if hit[v] {
                out.set_row(v, row, CredalSet::full_simplex(s.cardinality(v)));
            }
        }
    }
    Ok(out)
}

/// Adds `extra_edges` (by name) and copies each credal set across the new
/// parent contexts. The copies are independent rows of the result.
pub fn enrich<S: AsRef<str>>(net: &CredalNetwork, extra_edges: &[(S, S)]) -> Result<CredalNetwork> {
    let s = net.structure();
    let extra = extra_edges
        .iter()
        .map(|(p, c)| Ok((s.lookup(p.as_ref())?, s.lookup(c.as_ref())?)))
        .collect::<Result<Vec<_>>>()?;
    enrich_indexed(net, &extra)
}

pub(crate) fn enrich_indexed(net: &CredalNetwork, extra: &[(usize, usize)]) -> Result<CredalNetwork> {
    let old = net.structure();
    let structure = old.with_extra_edges(extra)?;
    let mut cpds = Vec::with_capacity(structure.len());
    for v in 0..structure.len() {
        let kept = old.parents(v).len();
        let mut rows = Vec::with_capacity(structure.row_count(v));
        for row in 0..structure.row_count(v) {
            let values = structure.row_values(v, row);
            let old_row = old.parents(v)
                .iter()
                .zip(&values[..kept])
                .fold(0, |acc, (&p, &x)| acc * old.cardinality(p) + x);
            rows.push(net.credal_set(v, old_row)?.clone());
        }
        cpds.push(rows);
    }
    Ok(CredalNetwork::new(structure, cpds))
}

/// The maximal enrichment under `order`: every earlier variable becomes a parent
/// of every later one.
pub fn enrich_maximal(net: &CredalNetwork, order: &[usize]) -> Result<CredalNetwork> {
    let s = net.structure();
    s.check_order(order)?;
    let mut extra = Vec::new();
    for (j, &child) in order.iter().enumerate() {
        for &parent in &order[..j] {
            if !s.has_edge(parent, child) {
                extra.push((parent, child));
            }
        }
    }
    enrich_indexed(net, &extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::structure::{NetworkStructure, Variable};
    use crate::model::treatment::build_treatment_example;

    fn abc() -> CredalNetwork {
        let s = NetworkStructure::new(
            vec![Variable::binary("A"), Variable::binary("B"), Variable::binary("C")],
            &[("A", "C")],
        )
        .unwrap();
        CredalNetwork::from_fn(s, |v, r| match (v, r) {
            (2, 0) => CredalSet::binary_interval(0.3, 0.8),
            (2, _) => CredalSet::point([0.5, 0.5]),
            _ => CredalSet::point([0.4, 0.6]),
        })
    }

    #[test]
    fn empty_enrichment_is_identity() {
        let net = abc();
        assert_eq!(enrich::<&str>(&net, &[]).unwrap(), net);
    }

    #[test]
    fn new_parent_duplicates_rows() {
        let net = abc();
        let e = enrich(&net, &[("B", "C")]).unwrap();
        assert_eq!(e.structure().parents(2), &[0, 1]);
        // rows (A=0,B=0) and (A=0,B=1)
        assert_eq!(e.credal_set(2, 0).unwrap(), &CredalSet::binary_interval(0.3, 0.8));
        assert_eq!(e.credal_set(2, 1).unwrap(), &CredalSet::binary_interval(0.3, 0.8));
        assert_eq!(e.credal_set(2, 2).unwrap(), &CredalSet::point([0.5, 0.5]));
        assert!(e.is_valid());
    }

    #[test]
    fn enrichment_rejects_cycles() {
        let net = abc();
        assert!(matches!(enrich(&net, &[("C", "A")]), Err(Error::Cycle(_))));
    }

    #[test]
    fn treatment_enrichment_duplicates_symptom_rows_per_test_result() {
        let (net, _) = build_treatment_example();
        let e = enrich(&net, &[("R", "V")]).unwrap();
        let s = e.structure();
        let v = s.lookup("V").unwrap();
        assert_eq!(s.row_count(v), 6);
        for row in 0..6 {
            let strain = s.row_values(v, row)[0];
            assert_eq!(e.credal_set(v, row).unwrap(), net.credal_set(v, strain).unwrap());
        }
    }

    #[test]
    fn maximal_enrichment_of_treatment_adds_missing_pairs() {
        let (net, _) = build_treatment_example();
        let s = net.structure();
        let order = s.order_from_names(&["S", "R", "V", "T"]).unwrap();
        let e = enrich_maximal(&net, &order).unwrap();
        let added: Vec<(String, String)> = e
            .structure()
            .edges()
            .into_iter()
            .filter(|&(p, c)| !s.has_edge(p, c))
            .map(|(p, c)| (s.name(p).to_string(), s.name(c).to_string()))
            .collect();
        assert_eq!(added, [("R".to_string(), "V".to_string()), ("S".into(), "T".into())]);
        assert!(e.is_valid());
    }

    #[test]
    fn maximal_enrichment_of_independent_pair_adds_one_edge() {
        let s = NetworkStructure::new(vec![Variable::binary("A"), Variable::binary("B")], &[] as &[(&str, &str)]).unwrap();
        let net = CredalNetwork::from_fn(s, |_, _| CredalSet::full_simplex(2));
        let e = enrich_maximal(&net, &[0, 1]).unwrap();
        assert_eq!(e.structure().edges(), [(0, 1)]);
        assert!(enrich_maximal(&e, &[0, 1]).unwrap() == e);
        assert!(matches!(enrich_maximal(&e, &[1, 0]), Err(Error::NotTopological(_))));
    }

    #[test]
    fn intervention_widens_only_targets() {
        let s = NetworkStructure::new(
            vec![Variable::binary("A"), Variable::binary("B"), Variable::binary("C")],
            &[("A", "B"), ("B", "C")],
        )
        .unwrap();
        let net = CredalNetwork::from_fn(s, |_, _| CredalSet::point([0.3, 0.7]));
        assert_eq!(credal_from_intervention::<&str>(&net, &[]).unwrap(), net);
        let mid = credal_from_intervention(&net, &["B"]).unwrap();
        for v in 0..3 {
            for r in 0..mid.structure().row_count(v) {
                let cs = mid.credal_set(v, r).unwrap();
                assert_eq!(cs.is_full_simplex(), v == 1);
            }
        }
        let all = credal_from_intervention(&net, &["A", "B", "C"]).unwrap();
        assert!(all.rows(2).iter().flatten().all(CredalSet::is_full_simplex));
        assert!(matches!(credal_from_intervention(&mid, &["A"]), Err(Error::NotPoint(_))));
    }
}
