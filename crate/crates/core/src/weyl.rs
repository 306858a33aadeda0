//! Finite Weyl groups of types B, C and D as signed permutations.
//!
//! The action on `R^n` is `w·e_i = e_{w^{-1}(i)}` with `e_{-i} = -e_i`, so in
//! coordinates `(w·v)_j = sign(w_j) v_{|w_j|}`. Group products are taken in the
//! order that makes this a left action: `act(w.mul(v), x) = act(w, act(v, x))`.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    B,
    C,
    Bcheck,
    Ccheck,
    D,
}

impl Family {
    /// The finite root system underlying the family.
    pub fn base(self) -> Family {
        match self {
            Family::B | Family::Bcheck => Family::B,
            Family::C | Family::Ccheck => Family::C,
            Family::D => Family::D,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::B => "B",
            Family::C => "C",
            Family::Bcheck => "Bcheck",
            Family::Ccheck => "Ccheck",
            Family::D => "D",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(Family::B),
            "c" => Ok(Family::C),
            "bcheck" | "b-check" | "b̌" => Ok(Family::Bcheck),
            "ccheck" | "c-check" | "č" => Ok(Family::Ccheck),
            "d" => Ok(Family::D),
            _ => Err(Error::UnsupportedKind(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylKind {
    family: Family,
    rank: usize,
}

impl WeylKind {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = if family == Family::D { 2 } else { 1 };
        if rank < min {
            return Err(Error::InvalidRank { family: family.to_string(), rank });
        }
        Ok(WeylKind { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All group elements in canonical order. Type D keeps only even sign changes.
    pub fn elements(&self) -> Vec<SignedPerm> {
        SignedPerm::all(self.rank, self.family == Family::D)
    }

    pub fn contains(&self, w: &SignedPerm) -> bool {
        w.n() == self.rank && (self.family != Family::D || w.negatives().is_multiple_of(2))
    }
}

impl fmt::Display for WeylKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A signed permutation in window notation `[w_1, …, w_n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(Vec<i32>);

impl SignedPerm {
    pub fn new(window: Vec<i32>) -> Result<Self> {
        let n = window.len() as i32;
        let mut seen = vec![false; window.len()];
        for &x in &window {
            let a = x.unsigned_abs() as usize;
            if x == 0 || x.abs() > n || seen[a - 1] {
                return Err(Error::InvalidPerm(window));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPerm(window))
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i32).collect())
    }

    pub fn window(&self) -> &[i32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `w_i` for `1 ≤ i ≤ n`.
    pub fn get(&self, i: usize) -> i32 {
        self.0[i - 1]
    }

    /// `w(j)` extended to negative arguments by `w(-j) = -w(j)`.
    pub fn value_at(&self, j: i32) -> i32 {
        let v = self.0[j.unsigned_abs() as usize - 1];
        if j < 0 {
            -v
        } else {
            v
        }
    }

    pub fn negatives(&self) -> usize {
        self.0.iter().filter(|&&x| x < 0).count()
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut inv = vec![0; self.n()];
        for (j, &x) in self.0.iter().enumerate() {
            let pos = (j + 1) as i32;
            inv[x.unsigned_abs() as usize - 1] = if x > 0 { pos } else { -pos };
        }
        SignedPerm(inv)
    }

    /// The product with `act(self.mul(rhs), x) = act(self, act(rhs, x))`.
    pub fn mul(&self, rhs: &SignedPerm) -> SignedPerm {
        SignedPerm(self.0.iter().map(|&x| rhs.value_at(x)).collect())
    }

    /// All signed permutations of rank `n`; with `even_only`, those with an even number of negatives.
    pub fn all(n: usize, even_only: bool) -> Vec<SignedPerm> {
        let mut out = Vec::new();
        for perm in (1..=n as i32).permutations(n) {
            for mask in 0u32..(1 << n) {
                if even_only && mask.count_ones() % 2 == 1 {
                    continue;
                }
                let w = perm.iter().enumerate().map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x }).collect();
                out.push(SignedPerm(w));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Vec::<i32>::deserialize(d)?;
        SignedPerm::new(w).map_err(serde::de::Error::custom)
    }
}

/// `(w·v)_j = sign(w_j) v_{|w_j|}`.
pub fn act<T>(w: &SignedPerm, v: &[T]) -> Result<Vec<T>>
where
    T: Clone + std::ops::Neg<Output = T>,
{
    if v.len() != w.n() {
        return Err(Error::DimensionMismatch { expected: w.n(), got: v.len() });
    }
    Ok(w.0
        .iter()
        .map(|&x| {
            let c = v[x.unsigned_abs() as usize - 1].clone();
            if x < 0 {
                -c
            } else {
                c
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub positive_roots: Vec<Vec<i64>>,
    /// `α_0, …, α_{n-1}`.
    pub simple_roots: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
}

impl RootSystem {
    pub fn is_positive(&self, v: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r == v)
    }

    pub fn is_negative(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.is_positive(&neg)
    }
}

fn unit(n: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i - 1] = c;
    v
}

fn plus(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn minus(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn root_data(kind: WeylKind) -> RootSystem {
    let n = kind.rank;
    let e = |i| unit(n, i, 1);
    let base = kind.family.base();
    let mut positive = Vec::new();
    for i in 1..=n {
        match base {
            Family::B => positive.push(e(i)),
            Family::C => positive.push(unit(n, i, 2)),
            _ => {}
        }
        for j in i + 1..=n {
            positive.push(minus(&e(j), &e(i)));
            positive.push(plus(&e(j), &e(i)));
        }
    }
    let mut simple = vec![match base {
        Family::B => e(1),
        Family::C => unit(n, 1, 2),
        _ => plus(&e(1), &e(2)),
    }];
    for i in 1..n {
        simple.push(minus(&e(i + 1), &e(i)));
    }
    let theta = match base {
        Family::C => unit(n, n, 2),
        Family::B if n == 1 => e(1),
        _ => plus(&e(n - 1), &e(n)),
    };
    RootSystem { positive_roots: positive, simple_roots: simple, theta }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacWeights {
    /// `a_0, …, a_n`; `a_n` is the weight of `r_θ`.
    pub weights: Vec<u32>,
    pub total: u32,
}

pub fn kac_weights(kind: WeylKind) -> KacWeights {
    let n = kind.rank;
    let weights: Vec<u32> = (0..=n)
        .map(|i| match kind.family {
            Family::Ccheck => 1,
            Family::C => u32::from(i != 0 && i != n) + 1,
            Family::B => u32::from(i + 1 < n) + 1,
            Family::Bcheck => u32::from(i != 0 && i + 1 < n) + 1,
            Family::D => u32::from(i >= 2 && i + 2 <= n) + 1,
        })
        .collect();
    let total = weights.iter().sum();
    KacWeights { weights, total }
}

/// The reflection in `root` as a signed permutation.
fn reflection(root: &[i64]) -> SignedPerm {
    let norm: i64 = root.iter().map(|x| x * x).sum();
    let x: Vec<i64> = (1..=root.len() as i64).collect();
    let dot: i64 = root.iter().zip(&x).map(|(a, b)| a * b).sum();
    let window = x.iter().zip(root).map(|(xi, ri)| (xi - 2 * dot * ri / norm) as i32).collect();
    SignedPerm(window)
}

/// `s_g·w` for `0 ≤ g < n`, and `r_θ·w` for `g = n`.
pub fn apply_generator(w: &SignedPerm, g: usize, kind: WeylKind) -> Result<SignedPerm> {
    let n = kind.rank;
    if g > n {
        return Err(Error::Range(format!("generator {g} for rank {n}")));
    }
    if w.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.n() });
    }
    let rs = root_data(kind);
    let root = if g == n { &rs.theta } else { &rs.simple_roots[g] };
    Ok(reflection(root).mul(w))
}

/// `#{α > 0 : w·α < 0}`.
pub fn length(w: &SignedPerm, kind: WeylKind) -> usize {
    let rs = root_data(kind);
    rs.positive_roots
        .iter()
        .filter(|a| {
            let img = act(w, a).expect("rank checked by caller");
            // Positive roots are exactly those whose last nonzero coordinate is positive.
            img.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c < 0)
        })
        .count()
}

/// `w^{-1}·θ`.
pub fn inverse_act_theta(w: &SignedPerm, kind: WeylKind) -> Vec<i64> {
    let rs = root_data(kind);
    act(&w.inverse(), &rs.theta).expect("rank checked by caller")
}

/// Whether `r_θ w > w`. For C this is `w_n > 0`; for B and D the entry of larger
/// absolute value among `w_{n-1}, w_n` must be positive.
pub fn theta_raises(w: &SignedPerm, kind: WeylKind) -> bool {
    let n = w.n();
    match kind.family.base() {
        Family::C => w.get(n) > 0,
        _ if n == 1 => w.get(1) > 0,
        _ => {
            let (a, b) = (w.get(n - 1), w.get(n));
            if a.abs() > b.abs() {
                a > 0
            } else {
                b > 0
            }
        }
    }
}

pub fn positive_root_sum(kind: WeylKind) -> Vec<i64> {
    let rs = root_data(kind);
    rs.positive_roots.iter().fold(vec![0; kind.rank], |acc, r| plus(&acc, r))
}

/// Minimal word lengths in `s_0, …, s_{n-1}` by breadth-first search from the identity.
pub fn bfs_lengths(kind: WeylKind) -> std::collections::HashMap<SignedPerm, usize> {
    let mut dist = std::collections::HashMap::new();
    let id = SignedPerm::identity(kind.rank);
    dist.insert(id.clone(), 0);
    let mut frontier = vec![id];
    let mut seen: HashSet<SignedPerm> = dist.keys().cloned().collect();
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..kind.rank {
                let v = apply_generator(w, g, kind).expect("valid generator");
                if seen.insert(v.clone()) {
                    dist.insert(v.clone(), d);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(f: Family, n: usize) -> WeylKind {
        WeylKind::new(f, n).unwrap()
    }

    const FAMILIES: [Family; 5] = [Family::B, Family::C, Family::Bcheck, Family::Ccheck, Family::D];

    #[test]
    fn rank_constraints() {
        assert!(WeylKind::new(Family::D, 1).is_err());
        assert!(WeylKind::new(Family::B, 0).is_err());
        assert!(WeylKind::new(Family::C, 1).is_ok());
    }

    #[test]
    fn root_data_examples() {
        assert_eq!(root_data(kind(Family::B, 2)).theta, vec![1, 1]);
        let c1 = root_data(kind(Family::C, 1));
        assert_eq!(c1.positive_roots, vec![vec![2]]);
        assert_eq!(c1.theta, vec![2]);
        assert_eq!(root_data(kind(Family::D, 3)).positive_roots.len(), 6);
    }

    #[test]
    fn theta_is_kac_combination_of_simple_roots() {
        for f in [Family::B, Family::C, Family::D] {
            for n in 1..=6 {
                if f == Family::D && n < 3 {
                    continue;
                }
                let k = kind(f, n);
                let rs = root_data(k);
                let a = kac_weights(k).weights;
                let mut sum = vec![0; n];
                for (ai, alpha) in a.iter().zip(&rs.simple_roots) {
                    sum = plus(&sum, &alpha.iter().map(|x| x * *ai as i64).collect::<Vec<_>>());
                }
                assert_eq!(sum, rs.theta, "{k}");
                assert!(rs.simple_roots.iter().all(|r| rs.is_positive(r)));
                assert!(rs.is_positive(&rs.theta));
            }
        }
    }

    #[test]
    fn kac_rows() {
        assert_eq!(kac_weights(kind(Family::B, 4)).weights, vec![2, 2, 2, 1, 1]);
        assert_eq!(kac_weights(kind(Family::B, 4)).total, 8);
        assert_eq!(kac_weights(kind(Family::Ccheck, 3)).weights, vec![1, 1, 1, 1]);
        assert_eq!(kac_weights(kind(Family::D, 3)).weights, vec![1, 1, 1, 1]);
        assert_eq!(kac_weights(kind(Family::D, 5)).weights, vec![1, 1, 2, 2, 1, 1]);
        assert_eq!(kac_weights(kind(Family::C, 3)).weights, vec![1, 2, 2, 1]);
        assert_eq!(kac_weights(kind(Family::Bcheck, 4)).weights, vec![1, 2, 2, 1, 1]);
        assert_eq!(kac_weights(kind(Family::Bcheck, 2)).weights, vec![1, 1, 1]);
    }

    #[test]
    fn action_examples() {
        let e1 = vec![1i64, 0];
        let w = SignedPerm::new(vec![2, 1]).unwrap();
        assert_eq!(act(&w, &e1).unwrap(), vec![0, 1]);
        let m = SignedPerm::new(vec![-1]).unwrap();
        assert_eq!(act(&m, &[1i64]).unwrap(), vec![-1]);
        assert!(act(&w, &[1i64]).is_err());
        for w in SignedPerm::all(3, false) {
            for i in 1..=3 {
                let e = unit(3, i, 1);
                let back = act(&w.inverse(), &act(&w, &e).unwrap()).unwrap();
                assert_eq!(back, e);
            }
        }
    }

    #[test]
    fn inverse_theta_examples() {
        let b3 = kind(Family::B, 3);
        assert_eq!(inverse_act_theta(&SignedPerm::identity(3), b3), vec![0, 1, 1]);
        let w = SignedPerm::new(vec![1, -3, 2]).unwrap();
        assert_eq!(inverse_act_theta(&w, b3), vec![0, 1, -1]);
        let c2 = kind(Family::C, 2);
        assert_eq!(inverse_act_theta(&SignedPerm::new(vec![2, 1]).unwrap(), c2), vec![2, 0]);
    }

    #[test]
    fn inverse_theta_closed_pattern() {
        for f in FAMILIES {
            for n in 2..=4 {
                let k = kind(f, n);
                for w in k.elements() {
                    let mut expect = vec![0i64; n];
                    let mut add = |x: i32, c: i64| {
                        expect[x.unsigned_abs() as usize - 1] += if x > 0 { c } else { -c };
                    };
                    if f.base() == Family::C {
                        add(w.get(n), 2);
                    } else {
                        add(w.get(n - 1), 1);
                        add(w.get(n), 1);
                    }
                    assert_eq!(inverse_act_theta(&w, k), expect);
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let id2 = SignedPerm::identity(2);
        let b2 = kind(Family::B, 2);
        assert_eq!(apply_generator(&id2, 1, b2).unwrap().window(), &[2, 1]);
        assert_eq!(apply_generator(&id2, 0, b2).unwrap().window(), &[-1, 2]);
        let b3 = kind(Family::B, 3);
        let r = apply_generator(&SignedPerm::identity(3), 3, b3).unwrap();
        assert_eq!(r.window(), &[1, -3, -2]);
        let d3 = kind(Family::D, 3);
        let s0 = apply_generator(&SignedPerm::new(vec![-1, -2, 3]).unwrap(), 0, d3).unwrap();
        assert_eq!(s0.window(), &[2, 1, 3]);
        let c2 = kind(Family::C, 2);
        assert_eq!(apply_generator(&id2, 2, c2).unwrap().window(), &[1, -2]);
    }

    #[test]
    fn generators_are_involutions_with_odd_length_change() {
        for f in FAMILIES {
            for n in 1..=4 {
                let Ok(k) = WeylKind::new(f, n) else { continue };
                for w in k.elements() {
                    let l = length(&w, k);
                    for g in 0..=n {
                        let v = apply_generator(&w, g, k).unwrap();
                        assert_eq!(apply_generator(&v, g, k).unwrap(), w);
                        assert!(k.contains(&v), "{k} parity");
                        let d = l.abs_diff(length(&v, k));
                        if g < n {
                            assert_eq!(d, 1, "{k} {w:?} g={g}");
                        } else {
                            assert_eq!(d % 2, 1, "{k} {w:?} r_theta");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn length_matches_bfs() {
        for f in [Family::B, Family::C, Family::D] {
            for n in 1..=4 {
                let Ok(k) = WeylKind::new(f, n) else { continue };
                let bfs = bfs_lengths(k);
                assert_eq!(bfs.len(), k.elements().len());
                for (w, d) in bfs {
                    assert_eq!(length(&w, k), d, "{k} {w:?}");
                }
            }
        }
        assert_eq!(length(&SignedPerm::new(vec![-1]).unwrap(), kind(Family::B, 1)), 1);
        assert_eq!(length(&SignedPerm::new(vec![2, 1]).unwrap(), kind(Family::C, 2)), 1);
    }

    #[test]
    fn theta_raises_pattern_matches_length() {
        for f in FAMILIES {
            for n in 1..=4 {
                let Ok(k) = WeylKind::new(f, n) else { continue };
                for w in k.elements() {
                    let r = apply_generator(&w, n, k).unwrap();
                    assert_eq!(theta_raises(&w, k), length(&r, k) > length(&w, k), "{k} {w:?}");
                }
                assert!(theta_raises(&SignedPerm::identity(n), k));
            }
        }
        let b2 = kind(Family::B, 2);
        assert!(!theta_raises(&SignedPerm::new(vec![1, -2]).unwrap(), b2));
        assert!(theta_raises(&SignedPerm::new(vec![-1, 2]).unwrap(), b2));
    }

    #[test]
    fn positive_root_sums() {
        assert_eq!(positive_root_sum(kind(Family::C, 2)), vec![2, 4]);
        assert_eq!(positive_root_sum(kind(Family::B, 3)), vec![1, 3, 5]);
        assert_eq!(positive_root_sum(kind(Family::D, 2)), vec![0, 2]);
        for n in 2..=6 {
            let b: Vec<i64> = (1..=n as i64).map(|i| 2 * i - 1).collect();
            assert_eq!(positive_root_sum(kind(Family::Bcheck, n)), b);
            let d: Vec<i64> = (1..=n as i64).map(|i| 2 * i - 2).collect();
            assert_eq!(positive_root_sum(kind(Family::D, n)), d);
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(kind(Family::B, 2).elements().len(), 8);
        assert_eq!(kind(Family::D, 3).elements().len(), 24);
        assert_eq!(kind(Family::C, 4).elements().len(), 384);
    }
}
