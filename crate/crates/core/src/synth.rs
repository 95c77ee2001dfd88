//! Random and synthetic networks for fuzzing and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{CredalNetwork, CredalSet, Event, Indicators, NetworkStructure, Parameters, Variable};
use crate::oracle::credal_vertices;

/// Shape limits for [`random_network`].
#[derive(Debug, Clone)]
pub struct RandomNetworkConfig {
    pub max_vars: usize,
    pub max_card: usize,
    pub max_parents: usize,
    /// Relative frequency of point, box and vertex-list rows.
    pub mix: [u32; 3],
    /// Rows beyond this vertex-combination count fall back to points.
    pub vertex_budget: u128,
}

impl Default for RandomNetworkConfig {
    fn default() -> Self {
        RandomNetworkConfig {
            max_vars: 5,
            max_card: 3,
            max_parents: 2,
            mix: [1, 2, 1],
            vertex_budget: 4096,
        }
    }
}

impl RandomNetworkConfig {
    pub fn precise(max_vars: usize, max_card: usize) -> Self {
        RandomNetworkConfig {
            max_vars,
            max_card,
            mix: [1, 0, 0],
            ..Self::default()
        }
    }
}

/// Random DAG over `X0..Xn`. Edges only go from lower to higher index, but
/// names are shuffled so the default order is not always the index order.
pub fn random_structure<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomNetworkConfig) -> NetworkStructure {
    let n = rng.gen_range(1..=cfg.max_vars);
    let mut names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    names.shuffle(rng);
    let variables = names
        .iter()
        .map(|name| {
            let k = rng.gen_range(2..=cfg.max_card.max(2));
            Variable::new(name.clone(), (0..k).map(|j| format!("v{j}"))).expect("distinct labels")
        })
        .collect();
    let mut edges = Vec::new();
    for child in 1..n {
        let mut pool: Vec<usize> = (0..child).collect();
        pool.shuffle(rng);
        let count = rng.gen_range(0..=cfg.max_parents.min(child));
        for &p in &pool[..count] {
            edges.push((names[p].clone(), names[child].clone()));
        }
    }
    NetworkStructure::new(variables, &edges).expect("forward edges are acyclic")
}

/// A random probability vector, occasionally with a zero entry.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    if k > 1 && rng.gen_bool(0.1) {
        w[rng.gen_range(0..k)] = 0.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// A random box around a random distribution; 10% of the time the whole simplex.
pub fn random_box<R: Rng + ?Sized>(rng: &mut R, k: usize) -> CredalSet {
    if rng.gen_bool(0.1) {
        return CredalSet::full_simplex(k);
    }
    let center = random_distribution(rng, k);
    let eps = rng.gen_range(0.02..0.3);
    CredalSet::interval(
        center.iter().map(|c| (c - eps).max(0.0)).collect::<Vec<_>>(),
        center.iter().map(|c| (c + eps).min(1.0)).collect::<Vec<_>>(),
    )
}

fn random_vertices<R: Rng + ?Sized>(rng: &mut R, k: usize) -> CredalSet {
    let n = rng.gen_range(2..=3);
    CredalSet::Vertices((0..n).map(|_| random_distribution(rng, k)).collect())
}

/// Random credal network. Each row is a point, box or vertex list according
/// to `cfg.mix`, subject to the vertex budget.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomNetworkConfig) -> CredalNetwork {
    let structure = random_structure(rng, cfg);
    let total: u32 = cfg.mix.iter().sum();
    let mut combos: u128 = 1;
    let mut cpds = Vec::new();
    for v in 0..structure.len() {
        let k = structure.cardinality(v);
        let mut rows = Vec::new();
        for _ in 0..structure.row_count(v) {
            let pick = rng.gen_range(0..total);
            let mut cs = if pick < cfg.mix[0] {
                CredalSet::point(random_distribution(rng, k))
            } else if pick < cfg.mix[0] + cfg.mix[1] {
                random_box(rng, k)
            } else {
                random_vertices(rng, k)
            };
            let count = credal_vertices(&cs).expect("small valid set").len() as u128;
            if combos * count > cfg.vertex_budget {
                cs = CredalSet::point(random_distribution(rng, k));
            } else {
                combos *= count;
            }
            rows.push(cs);
        }
        cpds.push(rows);
    }
    CredalNetwork::new(structure, cpds)
}

/// A random member of a credal set (random convex combination of its vertices).
pub fn random_member<R: Rng + ?Sized>(rng: &mut R, cs: &CredalSet) -> Vec<f64> {
    let vs = credal_vertices(cs).expect("small valid set").0;
    let mix = random_distribution(rng, vs.len());
    let mut w = vec![0.0; cs.dim()];
    for (m, v) in mix.iter().zip(&vs) {
        for (wi, vi) in w.iter_mut().zip(v) {
            *wi += m * vi;
        }
    }
    w
}

/// One random member per CPD row.
pub fn random_parameters<R: Rng + ?Sized>(rng: &mut R, net: &CredalNetwork) -> Parameters {
    let s = net.structure();
    Parameters::new(
        (0..s.len())
            .map(|v| {
                (0..s.row_count(v))
                    .map(|r| random_member(rng, net.credal_set(v, r).expect("complete")))
                    .collect()
            })
            .collect(),
    )
}

/// A nonempty event with between one and three literals.
pub fn random_event<R: Rng + ?Sized>(rng: &mut R, s: &NetworkStructure) -> Event {
    let mut vars: Vec<usize> = (0..s.len()).collect();
    vars.shuffle(rng);
    let n = rng.gen_range(1..=s.len().min(3));
    Event::from_indices(
        s,
        vars[..n].iter().map(|&v| (v, rng.gen_range(0..s.cardinality(v)))),
    )
    .expect("distinct in-range literals")
}

/// Indicator values drawn uniformly from `[0, 1]`.
pub fn random_indicators<R: Rng + ?Sized>(rng: &mut R, s: &NetworkStructure) -> Indicators {
    Indicators::from_values(
        (0..s.len())
            .map(|v| (0..s.cardinality(v)).map(|_| rng.gen()).collect())
            .collect(),
    )
}

/// Binary chain of three-variable collider blocks `A_b → C_b ← B_b`, where
/// `C_{b-1}` feeds both `A_b` and `B_b`, and every third block also links
/// `C_{b-1} → C_b`. A trailing variable hangs off the last collider when
/// `n` is not a multiple of three. Live-parent width stays at most three under
/// any topological order. Credal sets are binary intervals drawn from `seed`.
pub fn chain_with_colliders(n: usize, seed: u64) -> CredalNetwork {
    assert!(n >= 3, "need at least one block");
    let blocks = n / 3;
    let mut names = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for b in 0..blocks {
        let (a, bb, c) = (format!("A{b:02}"), format!("B{b:02}"), format!("C{b:02}"));
        if b > 0 {
            let prev = format!("C{:02}", b - 1);
            edges.push((prev.clone(), a.clone()));
            edges.push((prev.clone(), bb.clone()));
            if b % 3 == 0 {
                edges.push((prev, c.clone()));
            }
        }
        edges.push((a.clone(), c.clone()));
        edges.push((bb.clone(), c.clone()));
        names.extend([a, bb, c]);
    }
    let last = format!("C{:02}", blocks - 1);
    for t in 0..n % 3 {
        let name = format!("D{t}");
        edges.push((last.clone(), name.clone()));
        names.push(name);
    }
    let structure =
        NetworkStructure::new(names.into_iter().map(Variable::binary).collect(), &edges).expect("acyclic blocks");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CredalNetwork::from_fn(structure, |_, _| {
        let lo: f64 = rng.gen_range(0.05..0.85);
        let hi = (lo + rng.gen_range(0.0..0.1)).min(0.95);
        if rng.gen_bool(0.25) {
            CredalSet::point([lo, 1.0 - lo])
        } else {
            CredalSet::binary_interval(lo, hi)
        }
    })
}
