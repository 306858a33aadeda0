//! The `D*` chain: a two-species bulk with `*` reservoirs at the end sites.

use num_traits::{One, Zero};

use super::{dstar_states, DStarParams, Letter, Word};
use crate::error::Result;
use crate::markov::Kernel;
use crate::rational::Q;

use Letter::{Minus as M, Plus as P, Star as S, Zero as Z};

#[derive(Clone, Copy)]
enum Rate {
    One,
    Alpha,
    AlphaStar,
    Beta,
    BetaStar,
}

type Rule = ([Letter; 2], [Letter; 2], Rate);

const LEFT: [Rule; 3] = [([S, M], [S, P], Rate::Alpha), ([S, Z], [Z, P], Rate::AlphaStar), ([Z, M], [S, Z], Rate::One)];
const RIGHT: [Rule; 3] = [([P, S], [M, S], Rate::Beta), ([Z, S], [M, Z], Rate::BetaStar), ([P, Z], [Z, S], Rate::One)];
const SORT: [Rule; 3] = [([P, M], [M, P], Rate::One), ([P, Z], [Z, P], Rate::One), ([Z, M], [M, Z], Rate::One)];

fn rate(r: Rate, p: &DStarParams) -> Q {
    match r {
        Rate::One => Q::one(),
        Rate::Alpha => p.alpha.clone(),
        Rate::AlphaStar => p.alpha_star.clone(),
        Rate::Beta => p.beta.clone(),
        Rate::BetaStar => p.beta_star.clone(),
    }
}

/// Table for the edge between sites `ℓ` and `ℓ+1` (1-based) of an `n`-site word.
fn table(l: usize, n: usize) -> &'static [Rule] {
    if l == 1 {
        &LEFT
    } else if l == n - 1 {
        &RIGHT
    } else {
        &SORT
    }
}

/// The `D*` chain on `n ≥ 3` sites with `n0` zeros. Edge `ℓ ∈ 1..n` is chosen
/// with probability `1/(n-1)` and then fires with its rate multiplier.
pub fn build_dstar(n: usize, n0: usize, params: &DStarParams) -> Result<Kernel<Word>> {
    let states = dstar_states(n, n0)?;
    let edge = Q::new(1.into(), ((n - 1) as i64).into());
    Kernel::from_moves(states, |w| {
        let mut out = Vec::new();
        for l in 1..n {
            let (a, b) = (w.0[l - 1], w.0[l]);
            let Some((_, to, r)) = table(l, n).iter().find(|(from, _, _)| from[0] == a && from[1] == b) else {
                continue;
            };
            let p = rate(*r, params) * &edge;
            if p.is_zero() {
                continue;
            }
            let mut v = w.0.clone();
            v[l - 1] = to[0];
            v[l] = to[1];
            out.push((Word(v), p));
        }
        out
    })
}
