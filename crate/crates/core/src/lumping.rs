//! Maps between chains and an exact check that a map is a lumping.
//!
//! A map `f` from the states of `X` to those of `Y` is a lumping when, for every
//! class `[ω] = f⁻¹(ω)`, the aggregated probability `P_X(σ → f⁻¹(ω′))` is the
//! same for all `σ ∈ [ω]` and equals `P_Y(ω → ω′)`.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::markov::{Dist, Kernel, State};
use crate::models::{Letter, Word};
use crate::rational::{fmt_q, Q};
use crate::weyl::SignedPerm;

/// `f_k`: species `i ≥ k` become `1`, species `i ≤ -k` become `¬1`, the rest `0`.
pub fn k_coloring(w: &SignedPerm, k: usize) -> Word {
    let k = k as i32;
    Word(
        w.window()
            .iter()
            .map(|&v| {
                if v >= k {
                    Letter::Plus
                } else if v <= -k {
                    Letter::Minus
                } else {
                    Letter::Zero
                }
            })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseMode {
    /// Prepend a `*` site and turn a final `±1` into `*`; the word grows by one.
    LastSite,
    /// Turn a `±1` at the first or last site into `*`, in place.
    BothEnds,
}

pub fn star_collapse(t: &Word, mode: CollapseMode) -> Word {
    let star = |l: Letter| if l.is_particle() { Letter::Star } else { l };
    let mut v = t.0.clone();
    match mode {
        CollapseMode::LastSite => {
            if let Some(last) = v.last_mut() {
                *last = star(*last);
            }
            v.insert(0, Letter::Star);
        }
        CollapseMode::BothEnds => {
            if let Some(first) = v.first_mut() {
                *first = star(*first);
            }
            if let Some(last) = v.last_mut() {
                *last = star(*last);
            }
        }
    }
    Word(v)
}

/// `τ ↦ (*, τ, *)`, the embedding of Č-type words into `D*` words.
pub fn wrap_in_stars(t: &Word) -> Word {
    let mut v = Vec::with_capacity(t.len() + 2);
    v.push(Letter::Star);
    v.extend_from_slice(&t.0);
    v.push(Letter::Star);
    Word(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The image of a state is not a state of the small chain.
    Unmapped { state: String, image: String },
    /// Two states of one class disagree on the mass sent into `target`.
    NotConstant { sigma: String, tau: String, target: String, p_sigma: String, p_tau: String },
    /// The class row disagrees with the small chain's row.
    Mismatch { class: String, target: String, lumped: String, small: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LumpingReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl LumpingReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn aggregated_row<S: State, T: State>(big: &Kernel<S>, i: usize, f: &(impl Fn(&S) -> T + Sync)) -> BTreeMap<T, Q> {
    let mut out: BTreeMap<T, Q> = BTreeMap::new();
    for (j, p) in big.row(i) {
        *out.entry(f(&big.states()[*j])).or_insert_with(Q::zero) += p;
    }
    out
}

/// Exhaustively checks that `f` lumps `big` onto `small`.
pub fn verify_lumping<S, T>(big: &Kernel<S>, f: impl Fn(&S) -> T + Sync, small: &Kernel<T>) -> LumpingReport
where
    S: State + Display,
    T: State + Display,
{
    let rows: Vec<(T, BTreeMap<T, Q>)> =
        (0..big.len()).into_par_iter().map(|i| (f(&big.states()[i]), aggregated_row(big, i, &f))).collect();
    let mut classes: BTreeMap<&T, Vec<usize>> = BTreeMap::new();
    for (i, (image, _)) in rows.iter().enumerate() {
        classes.entry(image).or_default().push(i);
    }
    let get = |m: &BTreeMap<T, Q>, t: &T| m.get(t).cloned().unwrap_or_else(Q::zero);
    let mut violations = Vec::new();
    for (image, members) in classes {
        let Some(_) = small.index_of(image) else {
            violations
                .push(Violation::Unmapped { state: big.states()[members[0]].to_string(), image: image.to_string() });
            continue;
        };
        let rep = &rows[members[0]].1;
        for &m in &members[1..] {
            let row = &rows[m].1;
            for target in rep.keys().chain(row.keys()) {
                let (a, b) = (get(rep, target), get(row, target));
                if a != b {
                    violations.push(Violation::NotConstant {
                        sigma: big.states()[members[0]].to_string(),
                        tau: big.states()[m].to_string(),
                        target: target.to_string(),
                        p_sigma: fmt_q(&a),
                        p_tau: fmt_q(&b),
                    });
                }
            }
        }
        let small_row = small.row_map(image);
        for target in rep.keys().chain(small_row.keys()) {
            let (a, b) = (get(rep, target), get(&small_row, target));
            if a != b {
                violations.push(Violation::Mismatch {
                    class: image.to_string(),
                    target: target.to_string(),
                    lumped: fmt_q(&a),
                    small: fmt_q(&b),
                });
            }
        }
    }
    violations.dedup();
    LumpingReport { pass: violations.is_empty(), violations }
}

/// `f` is a bijection onto the states of `small` and carries `big` onto it.
pub fn is_isomorphism<S, T>(big: &Kernel<S>, f: impl Fn(&S) -> T + Sync, small: &Kernel<T>) -> bool
where
    S: State + Display,
    T: State + Display,
{
    let mut images: Vec<T> = big.states().iter().map(&f).collect();
    images.sort();
    images.dedup();
    images.len() == big.len() && images.as_slice() == small.states() && verify_lumping(big, f, small).pass
}

/// `π_Y(ω) = Σ_{f(σ) = ω} π_X(σ)`.
pub fn project_distribution<S: State, T: State>(d: &Dist<S>, f: impl Fn(&S) -> T) -> Dist<T> {
    d.map(f)
}
