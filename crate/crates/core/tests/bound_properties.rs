mod common;

use proptest::prelude::*;
use rand::Rng;

use credal_core::bounds::{
    clb, compile_cspn, cub, cub_max, local_max, mar_max_cspn, mar_min_cspn, min_lower_bound, sample_orders,
    witness_is_feasible, Direction,
};
use credal_core::model::{enrich_maximal, CredalNetwork, CredalSet, Indicators, Parameters};
use credal_core::oracle::{
    credal_vertices, mar_max_bruteforce, mar_max_enriched_bruteforce, mar_min_bruteforce, marginal_with,
};
use credal_core::spn::{evaluate_spn, WeightAssignment};
use credal_core::synth::{random_box, random_event};
use credal_core::Error;

use common::{config, for_each_combination, network};

const SLACK: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lower_exact_upper_sandwich(seed in any::<u64>()) {
        let (net, mut rng) = network(seed, &config(5, 3));
        let e = random_event(&mut rng, net.structure());
        let order = net.structure().random_order(&mut rng);
        let exact = mar_max_bruteforce(&net, &e).unwrap().value;
        let upper = cub(&net, &e, &order).unwrap().bound;
        let lower = clb(&net, &e, &order, 100).unwrap().bound;
        prop_assert!(lower <= exact + SLACK, "clb {} exact {}", lower, exact);
        prop_assert!(exact <= upper + SLACK, "exact {} cub {}", exact, upper);
        let min_exact = mar_min_bruteforce(&net, &e).unwrap().value;
        let min_lower = min_lower_bound(&net, &e, &order).unwrap().bound;
        prop_assert!(min_lower <= min_exact + SLACK, "minlb {} exact min {}", min_lower, min_exact);
    }

    #[test]
    fn relaxation_equals_the_maximal_enrichment(seed in any::<u64>()) {
        let (net, mut rng) = network(seed, &config(4, 3));
        let e = random_event(&mut rng, net.structure());
        let exact = mar_max_bruteforce(&net, &e).unwrap().value;
        let order = net.structure().random_order(&mut rng);
        let upper = cub(&net, &e, &order).unwrap().bound;
        let enriched = mar_max_enriched_bruteforce(&net, &order, &e).unwrap();
        prop_assert!((upper - enriched).abs() <= 1e-9, "cub {} enriched {}", upper, enriched);
        prop_assert!(enriched >= exact - SLACK);
        // the prefix-tree oracle agrees with plain vertex enumeration when that fits
        match mar_max_bruteforce(&enrich_maximal(&net, &order).unwrap(), &e) {
            Ok(direct) => prop_assert!((direct.value - enriched).abs() <= 1e-9),
            Err(Error::GuardExceeded { .. }) => {}
            Err(other) => prop_assert!(false, "{}", other),
        }
    }

    #[test]
    fn credal_spn_optimum_matches_vertex_enumeration(seed in any::<u64>()) {
        let (net, mut rng) = network(seed, &config(3, 3));
        let e = random_event(&mut rng, net.structure());
        let order = net.structure().random_order(&mut rng);
        let cspn = compile_cspn(&net, &order).unwrap();
        let spn = cspn.spn();
        let sums: Vec<_> = spn.sum_nodes().collect();
        let vertices: Vec<Vec<Vec<f64>>> = sums
            .iter()
            .map(|&id| credal_vertices(cspn.credal_set(id).unwrap()).unwrap().0)
            .collect();
        let sizes: Vec<usize> = vertices.iter().map(Vec::len).collect();
        let combos: u128 = sizes.iter().map(|&k| k as u128).product();
        prop_assume!(combos <= 50_000);
        let ind = Indicators::from_event(spn.structure(), &e);
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for_each_combination(&sizes, |pick| {
            let mut w = WeightAssignment::new(spn.len());
            for (k, &id) in sums.iter().enumerate() {
                w.set(id, vertices[k][pick[k]].clone());
            }
            let v = evaluate_spn(spn, &ind, &w).unwrap();
            hi = hi.max(v);
            lo = lo.min(v);
        });
        let max = mar_max_cspn(&cspn, &e).unwrap();
        let min = mar_min_cspn(&cspn, &e).unwrap();
        prop_assert!((max.bound - hi).abs() <= 1e-9, "pass {} enumeration {}", max.bound, hi);
        prop_assert!((min.bound - lo).abs() <= 1e-9, "pass {} enumeration {}", min.bound, lo);
    }

    #[test]
    fn witnesses_are_feasible_and_reproduce_the_bound(seed in any::<u64>()) {
        let (net, mut rng) = network(seed, &config(5, 3));
        let s = net.structure();
        let e = random_event(&mut rng, s);
        let order = s.random_order(&mut rng);
        let cspn = compile_cspn(&net, &order).unwrap();
        let ind = Indicators::from_event(s, &e);
        for r in [mar_max_cspn(&cspn, &e).unwrap(), mar_min_cspn(&cspn, &e).unwrap()] {
            prop_assert!(witness_is_feasible(&cspn, &r.witness));
            let again = evaluate_spn(cspn.spn(), &ind, &r.witness).unwrap();
            prop_assert!((again - r.bound).abs() <= 1e-9);
        }

        // the lower bound is the value of one legal parameter choice
        let lower = clb(&net, &e, &order, 100).unwrap();
        let tied = lower.tied.as_ref().unwrap();
        prop_assert!(witness_is_feasible(&cspn, &lower.witness));
        let again = evaluate_spn(cspn.spn(), &ind, &lower.witness).unwrap();
        prop_assert!(again <= lower.bound + 1e-9);
        let mut table: Vec<Vec<Vec<f64>>> = (0..s.len()).map(|v| vec![Vec::new(); s.row_count(v)]).collect();
        for (label, w) in tied {
            prop_assert!(net.credal_set(label.var, label.row).unwrap().contains(w, 1e-9));
            table[label.var][label.row] = w.clone();
        }
        if table.iter().flatten().all(|row| !row.is_empty()) {
            let p = marginal_with(s, &Parameters::new(table), &e).unwrap();
            prop_assert!((p - lower.bound).abs() <= 1e-9, "legal value {} vs clb {}", p, lower.bound);
        }
        prop_assert!(lower.steps <= 100);
    }

    #[test]
    fn widening_a_box_loosens_both_bounds(seed in any::<u64>()) {
        let (net, mut rng) = network(seed, &config(4, 3));
        let s = net.structure();
        let e = random_event(&mut rng, s);
        let order = s.random_order(&mut rng);
        let boxes: Vec<(usize, usize)> = (0..s.len())
            .flat_map(|v| (0..s.row_count(v)).map(move |r| (v, r)))
            .filter(|&(v, r)| matches!(net.credal_set(v, r).unwrap(), CredalSet::Box { .. }))
            .collect();
        prop_assume!(!boxes.is_empty());
        let (v, r) = boxes[rng.gen_range(0..boxes.len())];
        let CredalSet::Box { lower, upper } = net.credal_set(v, r).unwrap().clone() else { unreachable!() };
        let d: f64 = rng.gen_range(0.01..0.2);
        let wider = CredalSet::interval(
            lower.iter().map(|l| (l - d).max(0.0)).collect::<Vec<_>>(),
            upper.iter().map(|u| (u + d).min(1.0)).collect::<Vec<_>>(),
        );
        let widened = CredalNetwork::from_fn(s.clone(), |var, row| {
            if (var, row) == (v, r) { wider.clone() } else { net.credal_set(var, row).unwrap().clone() }
        });
        let before = cub(&net, &e, &order).unwrap().bound;
        let after = cub(&widened, &e, &order).unwrap().bound;
        prop_assert!(after >= before - SLACK, "cub {} -> {}", before, after);
        let before = min_lower_bound(&net, &e, &order).unwrap().bound;
        let after = min_lower_bound(&widened, &e, &order).unwrap().bound;
        prop_assert!(after <= before + SLACK, "minlb {} -> {}", before, after);
    }

    #[test]
    fn order_search_takes_the_smallest_sampled_bound(seed in any::<u64>(), n in 1usize..8) {
        let (net, mut rng) = network(seed, &config(5, 3));
        let e = random_event(&mut rng, net.structure());
        let orders = sample_orders(&net, n, seed);
        prop_assert_eq!(&orders[0], &net.structure().default_order());
        prop_assert!(orders.len() <= n);
        let exact = mar_max_bruteforce(&net, &e).unwrap().value;
        let bounds: Vec<f64> = orders.iter().map(|o| cub(&net, &e, o).unwrap().bound).collect();
        prop_assert!(bounds.iter().all(|&b| b >= exact - SLACK));
        let best = cub_max(&net, &e, n, seed).unwrap();
        let min = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(best.bound, min);
        prop_assert_eq!(best.orders_tried, orders.len());
        prop_assert!(orders.contains(&best.order));
    }

    #[test]
    fn greedy_box_solver_matches_a_vertex_scan(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = common::rng(seed);
        let cs = random_box(&mut rng, k);
        let child: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..2.0)).collect();
        let vs = credal_vertices(&cs).unwrap().0;
        let dot = |w: &[f64]| w.iter().zip(&child).map(|(a, b)| a * b).sum::<f64>();
        let best = vs.iter().map(|w| dot(w)).fold(f64::NEG_INFINITY, f64::max);
        let worst = vs.iter().map(|w| dot(w)).fold(f64::INFINITY, f64::min);
        let max = local_max(&cs, &child, Direction::Max).unwrap();
        let min = local_max(&cs, &child, Direction::Min).unwrap();
        prop_assert!((max.value - best).abs() <= 1e-12);
        prop_assert!((min.value - worst).abs() <= 1e-12);
        prop_assert!(cs.contains(&max.weights, 1e-12) && cs.contains(&min.weights, 1e-12));
    }
}
