//! Seeded occupation-frequency estimates.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; trial `t`
//! uses stream `t` of that generator, so trials are independent and any single
//! trial can be replayed on its own.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Dist, Kernel, State};
use crate::rational::{self, Q};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug)]
pub struct McEstimate<S: Ord> {
    pub dist: Dist<S>,
    pub steps: u64,
    pub burn_in: u64,
    pub trials: u64,
}

/// Runs `trials` independent chains from the first state, discarding `burn_in`
/// steps and pooling the next `steps` occupation counts of every trial.
pub fn mc_estimate<S: State>(k: &Kernel<S>, steps: u64, burn_in: u64, seed: u64, trials: u64) -> McEstimate<S> {
    let samplers: Vec<(Vec<usize>, WeightedIndex<f64>)> = (0..k.len())
        .map(|i| {
            let row = k.row(i);
            let targets = row.iter().map(|(j, _)| *j).collect();
            let weights: Vec<f64> = row.iter().map(|(_, p)| rational::to_f64(p)).collect();
            (targets, WeightedIndex::new(weights).expect("rows have positive mass"))
        })
        .collect();
    let counts: Vec<Vec<u64>> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut counts = vec![0u64; k.len()];
            let mut s = 0usize;
            for step in 0..burn_in + steps {
                let (targets, w) = &samplers[s];
                s = targets[w.sample(&mut rng)];
                if step >= burn_in {
                    counts[s] += 1;
                }
            }
            counts
        })
        .collect();
    let total = steps * trials.max(1);
    let dist = Dist::from_entries((0..k.len()).map(|i| {
        let c: u64 = counts.iter().map(|v| v[i]).sum();
        (k.states()[i].clone(), Q::new(c.into(), total.into()))
    }));
    McEstimate { dist, steps, burn_in, trials: trials.max(1) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use num_traits::One;

    #[test]
    fn point_mass_for_single_state() {
        let k = Kernel::from_moves(vec![7u8], |_| vec![]).unwrap();
        let est = mc_estimate(&k, 100, 0, 1, 1);
        assert_eq!(est.dist.get(&7), Q::one());
    }

    #[test]
    fn deterministic_and_close() {
        let k = Kernel::from_moves(vec![0u8, 1], |s| vec![(1 - s, q(1, 3 + *s as i64))]).unwrap();
        let a = mc_estimate(&k, 200_000, 100, 42, 2);
        let b = mc_estimate(&k, 200_000, 100, 42, 2);
        assert_eq!(a.dist, b.dist);
        let exact = k.exact_stationary().unwrap();
        assert!(rational::to_f64(&a.dist.tv_distance(&exact)) < 0.01);
    }
}
