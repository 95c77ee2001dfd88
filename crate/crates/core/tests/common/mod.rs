#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use credal_core::model::{CredalNetwork, Parameters};
use credal_core::synth::{random_network, RandomNetworkConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn config(max_vars: usize, max_card: usize) -> RandomNetworkConfig {
    RandomNetworkConfig {
        max_vars,
        max_card,
        ..RandomNetworkConfig::default()
    }
}

pub fn network(seed: u64, cfg: &RandomNetworkConfig) -> (CredalNetwork, ChaCha8Rng) {
    let mut r = rng(seed);
    let net = random_network(&mut r, cfg);
    (net, r)
}

/// Points of the probability simplex in `k` dimensions whose coordinates are
/// multiples of `1 / steps`.
pub fn simplex_grid(k: usize, steps: usize) -> Vec<Vec<f64>> {
    fn go(k: usize, left: usize, steps: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == k - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / steps as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(k, left - c, steps, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, steps, steps, &mut Vec::new(), &mut out);
    out
}

/// All combinations of one choice per slot, last slot fastest.
pub fn for_each_combination(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut pick = vec![0; sizes.len()];
    loop {
        f(&pick);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < sizes[i] {
                break;
            }
            pick[i] = 0;
        }
    }
}

pub fn parameters_like(net: &CredalNetwork, mut row: impl FnMut(usize, usize) -> Vec<f64>) -> Parameters {
    let s = net.structure();
    Parameters::new(
        (0..s.len())
            .map(|v| (0..s.row_count(v)).map(|r| row(v, r)).collect())
            .collect(),
    )
}
