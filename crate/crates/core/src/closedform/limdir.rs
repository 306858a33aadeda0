//! Limiting directions of the reduced alcove walk, in closed form and by
//! exact evaluation of `Σ_{r_θ w > w} π(w) w⁻¹·θ`.

use num_traits::Zero;
use serde::Serialize;

use super::numbers::binom;
use super::tasep::{semiperm_density, zd};
use crate::error::{Error, Result};
use crate::markov::Dist;
use crate::models::{build_multi, DStarParams, Letter};
use crate::rational::{fmt_q, q, qi, to_f64, Q};
use crate::tworow;
use crate::weyl::{inverse_act_theta, theta_raises, Family, SignedPerm, WeylKind};

/// `Σ c_i e_i`, meaningful up to a positive scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionVector {
    pub kind: WeylKind,
    pub coefficients: Vec<Q>,
}

impl DirectionVector {
    pub fn new(kind: WeylKind, coefficients: Vec<Q>) -> Self {
        DirectionVector { kind, coefficients }
    }

    /// Coefficients divided by their sum.
    pub fn normalized(&self) -> Vec<Q> {
        let total: Q = self.coefficients.iter().sum();
        self.coefficients.iter().map(|c| c / &total).collect()
    }

    /// Whether `self = λ·other` for some rational `λ > 0`.
    pub fn is_positive_multiple_of(&self, other: &DirectionVector) -> bool {
        if self.coefficients.len() != other.coefficients.len() {
            return false;
        }
        let Some(k) = other.coefficients.iter().position(|c| !c.is_zero()) else {
            return self.coefficients.iter().all(Zero::is_zero);
        };
        let lambda = &self.coefficients[k] / &other.coefficients[k];
        lambda > Q::zero() && self.coefficients.iter().zip(&other.coefficients).all(|(a, b)| *a == &lambda * b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(to_f64).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            kind: String,
            n: usize,
            raw: Vec<String>,
            normalized: Vec<String>,
        }
        serde_json::to_value(Out {
            kind: self.kind.family().to_string(),
            n: self.kind.rank(),
            raw: self.coefficients.iter().map(fmt_q).collect(),
            normalized: self.normalized().iter().map(fmt_q).collect(),
        })
        .expect("direction serializes")
    }
}

/// `c_i = (i-1)/(n+i-2)·binom(2n-3, n-i)/Z_{n,i} − (i-2)/(n+i-3)·binom(2n-3, n-i+1)/Z_{n,i-1}`.
fn d_coefficient(n: i64, i: i64) -> Q {
    let term = |k: i64| -> Q {
        if k <= 1 {
            return Q::zero();
        }
        q(k - 1, n + k - 2) * qi(binom(2 * n - 3, n - k)) / qi(zd(n, k))
    };
    term(i) - term(i - 1)
}

/// `c_i = P(w_n = 1)` with `i-1` zeros minus the same with `i` zeros, in the
/// semipermeable process at `α = β = 1/2`.
fn c_route(n: usize) -> Result<Vec<Q>> {
    let half = q(1, 2);
    let last = |n0: usize| -> Result<Q> {
        if n0 == n {
            return Ok(Q::zero());
        }
        semiperm_density(n, n0, n, &half, &half)
    };
    (1..=n).map(|i| Ok(last(i - 1)? - last(i)?)).collect()
}

/// Last-two-site marginals of the B̌ two-species chain on `n` sites, read off
/// the `D*` law on `n + 1` sites: `(⟨1⟩, ⟨1,·⟩, ⟨1,¬1⟩, ⟨¬1,1⟩)`. A particle at
/// the last site is `1` or `¬1` with equal probability.
fn bcheck_marginals(n: usize, n0: usize) -> Result<[Q; 4]> {
    if n0 == n {
        return Ok(std::array::from_fn(|_| Q::zero()));
    }
    let params = DStarParams::new(q(1, 2), Q::zero(), q(1, 2), q(1, 2))?;
    let (dist, _) = tworow::stationary(n + 1, n0, &params)?;
    let top = tworow::project_top_row(&dist);
    let half = q(1, 2);
    let at = |a: Option<Letter>, b: Letter| top.mass(|w| a.is_none_or(|a| w.0[n - 1] == a) && w.0[n] == b);
    Ok([
        at(None, Letter::Star) * &half,
        top.mass(|w| w.0[n - 1] == Letter::Plus),
        at(Some(Letter::Plus), Letter::Star) * &half,
        at(Some(Letter::Minus), Letter::Star) * &half,
    ])
}

/// `Row_k − Hd_k + Col_k − Hu_k` from the B̌ two-species marginals with `k-1` and `k` zeros.
fn bcheck_route(n: usize) -> Result<Vec<Q>> {
    let marginals: Vec<[Q; 4]> = (0..=n).map(|n0| bcheck_marginals(n, n0)).collect::<Result<_>>()?;
    Ok((1..=n)
        .map(|k| {
            let d: Vec<Q> = (0..4).map(|t| &marginals[k - 1][t] - &marginals[k][t]).collect();
            &d[1] - &d[2] + &d[0] - &d[3]
        })
        .collect())
}

/// Closed-form limiting direction, as stated per type.
pub fn limdir_closed(kind: WeylKind) -> Result<DirectionVector> {
    let n = kind.rank();
    let m = n as i64;
    let coefficients = match kind.family() {
        Family::Ccheck => (1..=m).map(|i| q(2 * i + 1, 2 * m * (2 * m + 1))).collect(),
        Family::B if n >= 2 => (1..=m).map(|k| q(2 * k - 1, m * (2 * m - 1))).collect(),
        Family::D if n == 2 => vec![q(1, 2), q(1, 2)],
        Family::D => (1..=m).map(|i| d_coefficient(m, i)).collect(),
        Family::C => c_route(n)?,
        Family::Bcheck if n >= 2 => bcheck_route(n)?,
        f => return Err(Error::Range(format!("no closed-form route for {f}{n}"))),
    };
    Ok(DirectionVector::new(kind, coefficients))
}

/// `Σ_{w : r_θ w > w} π(w) w⁻¹·θ` for a given law on the Weyl group.
pub fn lam_direction(kind: WeylKind, pi: &Dist<SignedPerm>) -> DirectionVector {
    let mut acc = vec![Q::zero(); kind.rank()];
    for (w, p) in pi.iter().filter(|(w, _)| theta_raises(w, kind)) {
        for (a, v) in acc.iter_mut().zip(inverse_act_theta(w, kind)) {
            *a += p * qi(v);
        }
    }
    DirectionVector::new(kind, acc)
}

/// Lam's sum over the exact stationary law of the multispecies chain.
pub fn limdir_exact_lam(kind: WeylKind) -> Result<DirectionVector> {
    let pi = build_multi(kind)?.exact_stationary()?;
    Ok(lam_direction(kind, &pi))
}
