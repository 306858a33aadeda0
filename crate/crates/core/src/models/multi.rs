//! Multispecies chains on signed permutations.
//!
//! The boundary tables are written out pattern by pattern. In a pattern, `i`
//! and `j` are the smaller and larger absolute values of the two sites.

use num_traits::Zero;

use super::edge_probs;
use crate::error::{Error, Result};
use crate::markov::Kernel;
use crate::rational::Q;
use crate::weyl::{Family, SignedPerm, WeylKind};

#[derive(Clone, Copy, Debug)]
enum Slot {
    I,
    J,
    NotI,
    NotJ,
}

use Slot::*;

type PairRule = ([Slot; 2], [Slot; 2]);

/// Sort moves at the last two sites.
const LAST_SORT: [PairRule; 4] =
    [([J, I], [I, J]), ([J, NotI], [NotI, J]), ([I, NotJ], [NotJ, I]), ([NotI, NotJ], [NotJ, NotI])];

/// Swap-and-negate moves of `r_θ` at the last two sites.
const LAST_THETA: [PairRule; 4] =
    [([J, I], [NotI, NotJ]), ([I, J], [NotJ, NotI]), ([J, NotI], [I, NotJ]), ([NotI, J], [NotJ, I])];

/// Swap-and-negate moves of `s_0` at the first two sites in type D.
const FIRST_D: [PairRule; 4] =
    [([NotI, NotJ], [J, I]), ([I, NotJ], [J, NotI]), ([NotJ, NotI], [I, J]), ([NotJ, I], [NotI, J])];

/// Sort moves at the first two sites in type D.
const FIRST_SORT: [PairRule; 4] =
    [([NotI, NotJ], [NotJ, NotI]), ([I, NotJ], [NotJ, I]), ([J, NotI], [NotI, J]), ([J, I], [I, J])];

#[derive(Clone, Copy, Debug)]
enum Edge {
    /// `¬k → k` at the first site.
    RaiseFirst,
    /// `k → ¬k` at the last site.
    LowerLast,
    /// `m k → k m` for `k < m` at sites `ℓ, ℓ+1`.
    Sort(usize),
    /// A literal table at sites `p, p+1`.
    Table(usize, &'static [PairRule]),
}

fn slot_value(s: Slot, i: i32, j: i32) -> i32 {
    match s {
        I => i,
        J => j,
        NotI => -i,
        NotJ => -j,
    }
}

fn apply_table(a: i32, b: i32, table: &[PairRule]) -> Option<(i32, i32)> {
    let (i, j) = (a.abs().min(b.abs()), a.abs().max(b.abs()));
    table.iter().find_map(|(from, to)| {
        (slot_value(from[0], i, j) == a && slot_value(from[1], i, j) == b)
            .then(|| (slot_value(to[0], i, j), slot_value(to[1], i, j)))
    })
}

fn edges(kind: WeylKind) -> Result<Vec<Edge>> {
    let n = kind.rank();
    let bulk = |range: std::ops::Range<usize>| range.map(Edge::Sort);
    let out: Vec<Edge> = match kind.family() {
        Family::Ccheck => std::iter::once(Edge::RaiseFirst).chain(bulk(1..n)).chain([Edge::LowerLast]).collect(),
        Family::B if n >= 2 => std::iter::once(Edge::RaiseFirst)
            .chain(bulk(1..n - 1))
            .chain([Edge::Table(n - 2, &LAST_SORT), Edge::Table(n - 2, &LAST_THETA)])
            .collect(),
        Family::D if n >= 3 => [Edge::Table(0, &FIRST_D), Edge::Table(0, &FIRST_SORT)]
            .into_iter()
            .chain(bulk(2..n - 1))
            .chain([Edge::Table(n - 2, &LAST_SORT), Edge::Table(n - 2, &LAST_THETA)])
            .collect(),
        // Rank 2: the edge between the two sites is a single sort edge.
        Family::D => vec![Edge::Table(0, &FIRST_D), Edge::Table(0, &FIRST_SORT), Edge::Table(0, &LAST_THETA)],
        Family::B => return Err(Error::InvalidRank { family: "B".into(), rank: n }),
        f => return Err(Error::UnsupportedKind(format!("{f}-MultiTASEP"))),
    };
    debug_assert_eq!(out.len(), n + 1);
    Ok(out)
}

fn apply_edge(w: &[i32], e: Edge) -> Option<Vec<i32>> {
    let mut v = w.to_vec();
    match e {
        Edge::RaiseFirst if v[0] < 0 => v[0] = -v[0],
        Edge::LowerLast if v[v.len() - 1] > 0 => {
            let last = v.len() - 1;
            v[last] = -v[last];
        }
        Edge::Sort(l) if v[l - 1] > v[l] => v.swap(l - 1, l),
        Edge::Table(p, table) => {
            let (a, b) = apply_table(v[p], v[p + 1], table)?;
            v[p] = a;
            v[p + 1] = b;
        }
        _ => return None,
    }
    Some(v)
}

/// The multispecies chain of type Č, B or D; edge `ℓ` is chosen with
/// probability `a_ℓ/Σa` from the Kac (or dual Kac) labels.
pub fn build_multi(kind: WeylKind) -> Result<Kernel<SignedPerm>> {
    let edges = edges(kind)?;
    let probs = edge_probs(kind);
    Kernel::from_moves(kind.elements(), |w| {
        edges
            .iter()
            .zip(&probs)
            .filter_map(|(&e, p)| {
                let v = apply_edge(w.window(), e)?;
                Some((SignedPerm::new(v).expect("moves preserve signed permutations"), p.clone()))
            })
            .collect::<Vec<(SignedPerm, Q)>>()
    })
}

/// The move on edge `ℓ` from `w`, if any.
pub fn multi_move(kind: WeylKind, w: &SignedPerm, edge: usize) -> Result<Option<SignedPerm>> {
    let edges = edges(kind)?;
    let e = *edges.get(edge).ok_or_else(|| Error::Range(format!("edge {edge}")))?;
    Ok(apply_edge(w.window(), e).map(|v| SignedPerm::new(v).expect("moves preserve signed permutations")))
}

/// Probability of choosing edge `ℓ`, exposed for the Kac-ratio check.
pub fn multi_edge_prob(kind: WeylKind, edge: usize) -> Q {
    edge_probs(kind).get(edge).cloned().unwrap_or_else(Q::zero)
}
