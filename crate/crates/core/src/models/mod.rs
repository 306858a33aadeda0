//! State spaces and transition kernels of the exclusion processes.
//!
//! Multispecies chains live on signed permutations. The two-species chains and
//! the boundary-driven `D*` chain live on words over `{¬1, 0, 1, *}`.

mod dstar;
mod multi;
mod two_species;

use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::weyl::{SignedPerm, WeylKind};

pub use dstar::build_dstar;
pub use multi::{build_multi, multi_edge_prob, multi_move};
pub use two_species::build_two_species;

/// One site of a two-species or `D*` word. The order `¬1 < 0 < 1` is the
/// species order; `*` sorts last and never takes part in bulk moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Minus,
    Zero,
    Plus,
    Star,
}

impl Letter {
    pub fn flipped(self) -> Letter {
        match self {
            Letter::Minus => Letter::Plus,
            Letter::Plus => Letter::Minus,
            l => l,
        }
    }

    pub fn is_particle(self) -> bool {
        matches!(self, Letter::Minus | Letter::Plus)
    }

    fn parse(s: &str) -> Result<Letter> {
        match s.trim() {
            "-1" | "¬1" | "m" => Ok(Letter::Minus),
            "0" => Ok(Letter::Zero),
            "1" | "+1" | "p" => Ok(Letter::Plus),
            "*" => Ok(Letter::Star),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::Minus => "-1",
            Letter::Zero => "0",
            Letter::Plus => "1",
            Letter::Star => "*",
        })
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Letter::Minus => s.serialize_i8(-1),
            Letter::Zero => s.serialize_i8(0),
            Letter::Plus => s.serialize_i8(1),
            Letter::Star => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            _ => return Err(serde::de::Error::custom(format!("bad site {v}"))),
        };
        Letter::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A word over `{¬1, 0, 1, *}`; serves both the two-species and the `D*` chains.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::Zero).count()
    }

    /// A two-species word: letters in `{¬1, 0, 1}`.
    pub fn is_two_species(&self) -> bool {
        self.0.iter().all(|&l| l != Letter::Star)
    }

    /// A `D*` word: ends in `{0, *}`, interior in `{¬1, 0, 1}`.
    pub fn is_dstar(&self) -> bool {
        let n = self.len();
        n >= 2
            && self.0.iter().enumerate().all(|(i, &l)| {
                if i == 0 || i == n - 1 {
                    matches!(l, Letter::Zero | Letter::Star)
                } else {
                    l != Letter::Star
                }
            })
    }

    /// `(τ_1, …, τ_n) ↦ (-τ_n, …, -τ_1)`.
    pub fn reversed_negated(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.flipped()).collect())
    }

    /// Parses `"1,0,-1"`, `"1 0 -1"` or `"[1,0,\"*\"]"`.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| Letter::parse(t.trim_matches('"')))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Boundary rates `(α, α*, β, β*)` of the `D*` chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DStarParams {
    #[serde(with = "rational::serde_q")]
    pub alpha: Q,
    #[serde(with = "rational::serde_q")]
    pub alpha_star: Q,
    #[serde(with = "rational::serde_q")]
    pub beta: Q,
    #[serde(with = "rational::serde_q")]
    pub beta_star: Q,
}

impl DStarParams {
    pub fn new(alpha: Q, alpha_star: Q, beta: Q, beta_star: Q) -> Result<Self> {
        for (name, x) in [("alpha", &alpha), ("alpha*", &alpha_star), ("beta", &beta), ("beta*", &beta_star)] {
            if !rational::is_unit_interval(x) {
                return Err(Error::Range(format!("{name} = {} not in [0,1]", rational::fmt_q(x))));
            }
        }
        if alpha.is_zero() {
            return Err(Error::ZeroParameter("alpha"));
        }
        if beta.is_zero() {
            return Err(Error::ZeroParameter("beta"));
        }
        Ok(DStarParams { alpha, alpha_star, beta, beta_star })
    }

    /// All four rates equal to `x`.
    pub fn uniform(x: Q) -> Result<Self> {
        Self::new(x.clone(), x.clone(), x.clone(), x)
    }
}

/// A state space descriptor for [`enumerate_states`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Multi(WeylKind),
    TwoSpecies { n: usize, n0: usize },
    DStar { n: usize, n0: usize },
}

/// Canonically ordered, duplicate-free states of a multispecies chain.
pub fn multi_states(kind: WeylKind) -> Vec<SignedPerm> {
    kind.elements()
}

/// All words over `{¬1, 0, 1}` of length `n` with `n0` zeros, sorted.
pub fn two_species_states(n: usize, n0: usize) -> Result<Vec<Word>> {
    if n0 > n {
        return Err(Error::InvalidCounts { n, n0 });
    }
    let letters = [Letter::Minus, Letter::Zero, Letter::Plus];
    let mut out: Vec<Word> =
        (0..n).map(|_| letters).multi_cartesian_product().map(Word).filter(|w| w.zeros() == n0).collect();
    if n == 0 {
        out = vec![Word(Vec::new())];
    }
    out.sort();
    Ok(out)
}

/// All `D*` words with `n` sites and `n0` zeros, sorted.
pub fn dstar_states(n: usize, n0: usize) -> Result<Vec<Word>> {
    if n < 3 || n0 > n {
        return Err(Error::InvalidCounts { n, n0 });
    }
    let ends = [Letter::Zero, Letter::Star];
    let mut out = Vec::new();
    for &first in &ends {
        for &last in &ends {
            let inner_zeros = n0 as isize - (first == Letter::Zero) as isize - (last == Letter::Zero) as isize;
            if inner_zeros < 0 || inner_zeros as usize > n - 2 {
                continue;
            }
            for mid in two_species_states(n - 2, inner_zeros as usize)? {
                let mut w = Vec::with_capacity(n);
                w.push(first);
                w.extend(mid.0);
                w.push(last);
                out.push(Word(w));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Word-valued state spaces; multispecies spaces are returned by [`multi_states`].
pub fn enumerate_states(space: Space) -> Result<Vec<Word>> {
    match space {
        Space::TwoSpecies { n, n0 } => two_species_states(n, n0),
        Space::DStar { n, n0 } => dstar_states(n, n0),
        Space::Multi(kind) => Err(Error::UnsupportedKind(format!("{kind} has signed-permutation states"))),
    }
}

/// Edge `ℓ` is chosen with probability `a_ℓ / Σa`.
pub(crate) fn edge_probs(kind: WeylKind) -> Vec<Q> {
    let kac = crate::weyl::kac_weights(kind);
    let total = Q::from_integer(kac.total.into());
    kac.weights.iter().map(|&a| Q::from_integer(a.into()) / &total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use num_traits::One;

    #[test]
    fn word_parse_and_json() {
        let w = Word::parse("[0,-1,*]").unwrap();
        assert_eq!(w.0, vec![Letter::Zero, Letter::Minus, Letter::Star]);
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, r#"[0,-1,"*"]"#);
        let back: Word = serde_json::from_str(&js).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn dstar_three_one_is_the_listed_space() {
        let got = dstar_states(3, 1).unwrap();
        let want: Vec<Word> =
            ["0,-1,*", "0,1,*", "*,-1,0", "*,1,0", "*,0,*"].iter().map(|s| Word::parse(s).unwrap()).sorted().collect();
        assert_eq!(got, want);
        assert!(got.iter().all(Word::is_dstar));
    }

    #[test]
    fn two_species_counts() {
        for n in 0..6 {
            for n0 in 0..=n {
                let expect = num_integer::binomial(n, n0) * (1 << (n - n0));
                assert_eq!(two_species_states(n, n0).unwrap().len(), expect);
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(DStarParams::new(q(1, 2), Q::zero(), q(1, 2), q(1, 2)).is_ok());
        assert_eq!(DStarParams::new(Q::zero(), Q::one(), Q::one(), Q::one()), Err(Error::ZeroParameter("alpha")));
        assert!(DStarParams::new(q(3, 2), Q::one(), Q::one(), Q::one()).is_err());
    }
}
