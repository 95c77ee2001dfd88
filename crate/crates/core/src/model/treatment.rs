//! The strain / test / symptom / treatment example used throughout the docs and
//! golden tests.
//!
//! `S` is the strain (`s3` is severe), `R` the test result, `V` the symptom
//! status and `T` the deterministic treatment decision `T := [R = V]`.

use super::credal::CredalSet;
use super::decision::{augment_with_decision, DecisionTable};
use super::event::Event;
use super::network::CredalNetwork;
use super::structure::{NetworkStructure, Variable};

/// Builds the augmented treatment network and the event `T=0 ∧ S=s3`
/// (a severe case that is not treated).
pub fn build_treatment_example() -> (CredalNetwork, Event) {
    let structure = NetworkStructure::new(
        vec![
            Variable::new("S", ["s1", "s2", "s3"]).expect("domain"),
            Variable::new("R", ["pos", "neg"]).expect("domain"),
            Variable::new("V", ["sym", "asym"]).expect("domain"),
        ],
        &[("S", "R"), ("S", "V")],
    )
    .expect("acyclic");

    // prevalence of s3 at most 0.1, closed
    let strain = CredalSet::interval([0.0, 0.0, 0.0], [1.0, 1.0, 0.1]);
    let test = [0.95, 0.05, 0.5];
    let symptom = [(0.1, 0.3), (0.7, 0.9), (0.4, 0.8)];

    let base = CredalNetwork::from_fn(structure, |v, row| match v {
        0 => strain.clone(),
        1 => CredalSet::point([test[row], 1.0 - test[row]]),
        _ => CredalSet::binary_interval(symptom[row].0, symptom[row].1),
    });

    let rule = DecisionTable::from_fn(
        Variable::binary("T"),
        &["R", "V"],
        base.structure(),
        |x| usize::from(x[0] == x[1]),
    )
    .expect("total table");
    let net = augment_with_decision(&base, &rule).expect("fresh output name");
    let event = Event::new(net.structure(), &[("T", "0"), ("S", "s3")]).expect("known labels");
    (net, event)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_the_tabulated_credal_sets() {
        let (net, event) = build_treatment_example();
        assert!(net.is_valid());
        let s = net.structure();
        let (sv, r, v, t) = (0, 1, 2, 3);
        assert_eq!(s.order_names(&s.default_order()), ["S", "R", "V", "T"]);
        assert_eq!(net.credal_set(v, 0).unwrap(), &CredalSet::binary_interval(0.1, 0.3));
        assert_eq!(net.credal_set(r, 1).unwrap(), &CredalSet::point([0.05, 0.95]));
        assert_eq!(
            net.credal_set(sv, 0).unwrap(),
            &CredalSet::interval([0.0, 0.0, 0.0], [1.0, 1.0, 0.1])
        );
        assert_eq!(s.parents(t), &[r, v]);
        assert_eq!(event.get(t), Some(0));
        assert_eq!(event.get(sv), Some(2));
        assert_eq!(event.format(s), "S=s3,T=0");
        // treatment exactly when test and symptom agree
        for row in 0..4 {
            let x = s.row_values(t, row);
            let expect = usize::from(x[0] == x[1]);
            assert_eq!(net.credal_set(t, row).unwrap(), &CredalSet::point_mass(2, expect));
        }
    }
}
