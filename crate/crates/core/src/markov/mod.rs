//! Finite discrete-time Markov chains over exact rationals.

pub mod montecarlo;
mod solve;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{One, Signed, Zero};
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub use montecarlo::{mc_estimate, McEstimate};

pub trait State: Clone + Eq + Hash + Ord + Debug + Send + Sync {}
impl<T: Clone + Eq + Hash + Ord + Debug + Send + Sync> State for T {}

/// A row-stochastic matrix. Every row sums to exactly 1, self-loops included.
#[derive(Clone, Debug)]
pub struct Kernel<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    rows: Vec<Vec<(usize, Q)>>,
}

impl<S: State> Kernel<S> {
    /// Builds a kernel from the off-diagonal moves of each state; the leftover
    /// mass becomes the holding probability. Moves to the state itself are allowed.
    pub fn from_moves<F>(states: Vec<S>, mut moves: F) -> Result<Self>
    where
        F: FnMut(&S) -> Vec<(S, Q)>,
    {
        let index: HashMap<S, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        if index.len() != states.len() {
            return Err(Error::InvalidKernel("duplicate states".into()));
        }
        let mut rows = Vec::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            let mut row: BTreeMap<usize, Q> = BTreeMap::new();
            for (t, p) in moves(s) {
                if p.is_negative() {
                    return Err(Error::InvalidKernel(format!("negative probability from {s:?}")));
                }
                if p.is_zero() {
                    continue;
                }
                let j = *index
                    .get(&t)
                    .ok_or_else(|| Error::InvalidKernel(format!("{s:?} moves to unknown state {t:?}")))?;
                *row.entry(j).or_insert_with(Q::zero) += p;
            }
            let out: Q = row.iter().filter(|(&j, _)| j != i).map(|(_, p)| p.clone()).sum();
            if out > Q::one() {
                return Err(Error::InvalidKernel(format!("row of {s:?} exceeds 1")));
            }
            row.insert(i, Q::one() - out);
            rows.push(row.into_iter().filter(|(_, p)| !p.is_zero()).collect());
        }
        Ok(Kernel { states, index, rows })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn row(&self, i: usize) -> &[(usize, Q)] {
        &self.rows[i]
    }

    pub fn prob(&self, from: &S, to: &S) -> Q {
        let (Some(i), Some(j)) = (self.index_of(from), self.index_of(to)) else {
            return Q::zero();
        };
        self.rows[i].iter().find(|(k, _)| *k == j).map(|(_, p)| p.clone()).unwrap_or_else(Q::zero)
    }

    /// The row of `s` keyed by target state.
    pub fn row_map(&self, s: &S) -> BTreeMap<S, Q> {
        self.index_of(s)
            .map(|i| self.rows[i].iter().map(|(j, p)| (self.states[*j].clone(), p.clone())).collect())
            .unwrap_or_default()
    }

    /// Strongly connected components; a class is closed when no mass leaves it.
    pub fn communicating_classes(&self) -> Vec<CommClass> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.len(), 0);
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, _) in row {
                if *j != i {
                    g.add_edge(nodes[i], nodes[*j], ());
                }
            }
        }
        let mut classes: Vec<CommClass> = petgraph::algo::tarjan_scc(&g)
            .into_iter()
            .map(|comp| {
                let mut members: Vec<usize> = comp.into_iter().map(|n| n.index()).collect();
                members.sort_unstable();
                let closed =
                    members.iter().all(|&i| self.rows[i].iter().all(|(j, _)| members.binary_search(j).is_ok()));
                CommClass { members, closed }
            })
            .collect();
        classes.sort_by_key(|c| c.members[0]);
        classes
    }

    /// The chain restricted to a closed set of states.
    pub fn restrict(&self, members: &[usize]) -> Result<Kernel<S>> {
        let mut local = HashMap::new();
        for (k, &i) in members.iter().enumerate() {
            local.insert(i, k);
        }
        let mut rows = Vec::with_capacity(members.len());
        for &i in members {
            let mut row = Vec::with_capacity(self.rows[i].len());
            for (j, p) in &self.rows[i] {
                let k = local
                    .get(j)
                    .ok_or_else(|| Error::InvalidKernel("restriction to a set that is not closed".into()))?;
                row.push((*k, p.clone()));
            }
            row.sort_by_key(|(k, _)| *k);
            rows.push(row);
        }
        let states: Vec<S> = members.iter().map(|&i| self.states[i].clone()).collect();
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Kernel { states, index, rows })
    }

    /// The chain restricted to its unique closed class.
    pub fn closed_class(&self) -> Result<Kernel<S>> {
        let closed: Vec<CommClass> = self.communicating_classes().into_iter().filter(|c| c.closed).collect();
        if closed.len() != 1 {
            return Err(Error::NotIrreducible { closed: closed.len() });
        }
        if closed[0].members.len() == self.len() {
            return Ok(self.clone());
        }
        self.restrict(&closed[0].members)
    }

    /// The unique stationary law, supported on the unique closed class.
    pub fn exact_stationary(&self) -> Result<Dist<S>> {
        let chain = self.closed_class()?;
        let probs = solve::stationary(&chain.rows)?;
        let dist = Dist::from_entries(chain.states.iter().cloned().zip(probs));
        if !dist.is_stationary_for(self) {
            return Err(Error::InvalidKernel("stationary verification failed".into()));
        }
        Ok(dist)
    }

    /// Whether every state's row equals `other`'s row for the same state.
    pub fn same_as(&self, other: &Kernel<S>) -> bool {
        self.len() == other.len() && self.states.iter().all(|s| self.row_map(s) == other.row_map(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommClass {
    pub members: Vec<usize>,
    pub closed: bool,
}

/// A probability distribution; states absent from the map have probability 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dist<S: Ord> {
    probs: BTreeMap<S, Q>,
}

impl<S: State> Dist<S> {
    /// Collects entries, summing repeated states and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (S, Q)>) -> Self {
        let mut probs: BTreeMap<S, Q> = BTreeMap::new();
        for (s, p) in entries {
            *probs.entry(s).or_insert_with(Q::zero) += p;
        }
        probs.retain(|_, p| !p.is_zero());
        Dist { probs }
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(entries: impl IntoIterator<Item = (S, Q)>) -> Result<Self> {
        let d = Self::from_entries(entries);
        let total = d.total();
        if total.is_zero() || d.probs.values().any(|p| p.is_negative()) {
            return Err(Error::Range("weights must be nonnegative with positive sum".into()));
        }
        Ok(Dist { probs: d.probs.into_iter().map(|(s, p)| (s, p / &total)).collect() })
    }

    pub fn point(s: S) -> Self {
        Dist { probs: BTreeMap::from([(s, Q::one())]) }
    }

    pub fn get(&self, s: &S) -> Q {
        self.probs.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &Q)> {
        self.probs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> Q {
        self.probs.values().sum()
    }

    /// Probability of the event `pred`.
    pub fn mass(&self, pred: impl Fn(&S) -> bool) -> Q {
        self.probs.iter().filter(|(s, _)| pred(s)).map(|(_, p)| p.clone()).sum()
    }

    /// Pushes the law forward along `f`.
    pub fn map<T: State>(&self, f: impl Fn(&S) -> T) -> Dist<T> {
        Dist::from_entries(self.probs.iter().map(|(s, p)| (f(s), p.clone())))
    }

    /// `πP = π` exactly, with `Σπ = 1`.
    pub fn is_stationary_for(&self, k: &Kernel<S>) -> bool {
        if self.total() != Q::one() {
            return false;
        }
        let mut image = vec![Q::zero(); k.len()];
        for (s, p) in &self.probs {
            let Some(i) = k.index_of(s) else { return false };
            for (j, pij) in k.row(i) {
                image[*j] += p * pij;
            }
        }
        k.states.iter().zip(image).all(|(s, v)| self.get(s) == v)
    }

    pub fn tv_distance(&self, other: &Dist<S>) -> Q {
        let mut keys: Vec<&S> = self.probs.keys().chain(other.probs.keys()).collect();
        keys.sort();
        keys.dedup();
        let sum: Q = keys.into_iter().map(|s| (self.get(s) - other.get(s)).abs()).sum();
        sum / rational::qi(2)
    }
}

#[derive(Serialize)]
struct Entry<'a, S> {
    state: &'a S,
    p: String,
}

impl<S: State + Serialize> Dist<S> {
    /// `[{"state": …, "p": "p/q"}, …]` in canonical state order.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Entry<S>> =
            self.probs.iter().map(|(state, p)| Entry { state, p: rational::fmt_q(p) }).collect();
        serde_json::to_value(entries).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two_state(a: Q, b: Q) -> Kernel<u8> {
        Kernel::from_moves(vec![0u8, 1], |s| if *s == 0 { vec![(1, a.clone())] } else { vec![(0, b.clone())] }).unwrap()
    }

    #[test]
    fn rows_sum_to_one() {
        let k = two_state(q(1, 3), q(1, 2));
        for i in 0..k.len() {
            let s: Q = k.row(i).iter().map(|(_, p)| p.clone()).sum();
            assert_eq!(s, Q::one());
        }
        assert_eq!(k.prob(&0, &0), q(2, 3));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(Kernel::from_moves(vec![0u8], |_| vec![(1u8, q(1, 2))]).is_err());
        assert!(Kernel::from_moves(vec![0u8, 1], |_| vec![(1u8, q(3, 2))]).is_err());
    }

    #[test]
    fn single_state() {
        let k = Kernel::from_moves(vec!["x"], |_| vec![]).unwrap();
        let classes = k.communicating_classes();
        assert_eq!(classes, vec![CommClass { members: vec![0], closed: true }]);
        assert_eq!(k.exact_stationary().unwrap(), Dist::point("x"));
    }

    #[test]
    fn doubly_stochastic_is_uniform() {
        let k = two_state(q(1, 3), q(1, 3));
        let d = k.exact_stationary().unwrap();
        assert_eq!(d.get(&0), q(1, 2));
        assert_eq!(d.get(&1), q(1, 2));
    }

    #[test]
    fn two_state_balance() {
        let d = two_state(q(1, 3), q(1, 5)).exact_stationary().unwrap();
        assert_eq!(d.get(&0), q(3, 8));
        assert!(d.is_stationary_for(&two_state(q(1, 3), q(1, 5))));
    }

    #[test]
    fn transient_states_get_zero() {
        // 0 -> 1 <-> 2, state 0 transient.
        let k = Kernel::from_moves(vec![0u8, 1, 2], |s| match s {
            0 => vec![(1, q(1, 2))],
            1 => vec![(2, q(1, 4))],
            _ => vec![(1, q(1, 2))],
        })
        .unwrap();
        let classes = k.communicating_classes();
        assert_eq!(classes.iter().filter(|c| c.closed).count(), 1);
        let d = k.exact_stationary().unwrap();
        assert_eq!(d.get(&0), Q::zero());
        assert_eq!(d.get(&1), q(2, 3));
    }

    #[test]
    fn two_closed_classes_rejected() {
        let k = Kernel::from_moves(vec![0u8, 1], |_| vec![]).unwrap();
        assert_eq!(k.exact_stationary(), Err(Error::NotIrreducible { closed: 2 }));
    }

    #[test]
    fn json_format() {
        let d = Dist::from_weights([(1u8, q(1, 1)), (2, q(2, 1))]).unwrap();
        let v = d.to_json();
        assert_eq!(v[1]["p"], "2/3");
        assert_eq!(v[0]["state"], 1);
    }
}
