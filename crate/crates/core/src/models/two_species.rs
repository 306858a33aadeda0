//! Two-species chains on words over `{¬1, 0, 1}` with a fixed number of zeros.

use super::{edge_probs, two_species_states, Letter, Word};
use crate::error::{Error, Result};
use crate::markov::Kernel;
use crate::weyl::{Family, WeylKind};

use Letter::{Minus as M, Plus as P, Zero as Z};

type Rule = ([Letter; 2], [Letter; 2]);

const SORT: [Rule; 3] = [([P, M], [M, P]), ([P, Z], [Z, P]), ([Z, M], [M, Z])];
const LAST_THETA: [Rule; 3] = [([P, P], [M, M]), ([Z, P], [M, Z]), ([P, Z], [Z, M])];
const FIRST_D: [Rule; 3] = [([M, M], [P, P]), ([M, Z], [Z, P]), ([Z, M], [P, Z])];

#[derive(Clone, Copy)]
enum Edge {
    RaiseFirst,
    LowerLast,
    /// A table acting on sites `p, p+1`.
    Pair(usize, &'static [Rule]),
}

fn edges(family: Family, n: usize) -> Result<Vec<Edge>> {
    let sort = |p: usize| Edge::Pair(p, &SORT);
    let out: Vec<Edge> = match family {
        Family::Ccheck if n >= 1 => {
            std::iter::once(Edge::RaiseFirst).chain((0..n - 1).map(sort)).chain([Edge::LowerLast]).collect()
        }
        Family::B if n >= 2 => std::iter::once(Edge::RaiseFirst)
            .chain((0..n - 1).map(sort))
            .chain([Edge::Pair(n - 2, &LAST_THETA)])
            .collect(),
        Family::D if n >= 2 => std::iter::once(Edge::Pair(0, &FIRST_D))
            .chain((0..n - 1).map(sort))
            .chain([Edge::Pair(n - 2, &LAST_THETA)])
            .collect(),
        Family::Ccheck | Family::B | Family::D => {
            return Err(Error::InvalidRank { family: family.to_string(), rank: n })
        }
        f => return Err(Error::UnsupportedKind(format!("{f}-TASEP"))),
    };
    Ok(out)
}

fn apply(w: &Word, e: Edge) -> Option<Word> {
    let mut v = w.0.clone();
    let last = v.len() - 1;
    match e {
        Edge::RaiseFirst if v[0] == M => v[0] = P,
        Edge::LowerLast if v[last] == P => v[last] = M,
        Edge::Pair(p, table) => {
            let (_, to) = table.iter().find(|(from, _)| from[0] == v[p] && from[1] == v[p + 1])?;
            v[p] = to[0];
            v[p + 1] = to[1];
        }
        _ => return None,
    }
    Some(Word(v))
}

/// The two-species chain of type Č, B or D on `n` sites with `n0` zeros. Edge
/// probabilities are the same Kac ratios as in the multispecies chain.
pub fn build_two_species(family: Family, n: usize, n0: usize) -> Result<Kernel<Word>> {
    let edges = edges(family, n)?;
    let probs = edge_probs(WeylKind::new(family, n)?);
    let states = two_species_states(n, n0)?;
    Kernel::from_moves(states, |w| {
        edges.iter().zip(&probs).filter_map(|(&e, p)| Some((apply(w, e)?, p.clone()))).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn table_examples() {
        let k = build_two_species(Family::Ccheck, 3, 1).unwrap();
        assert_eq!(k.prob(&w("1,0,-1"), &w("0,1,-1")), q(1, 4));
        let k = build_two_species(Family::B, 3, 2).unwrap();
        assert_eq!(k.prob(&w("0,1,0"), &w("0,0,-1")), q(1, 6));
        let k = build_two_species(Family::D, 3, 0).unwrap();
        assert_eq!(k.prob(&w("1,1,1"), &w("1,-1,-1")), q(1, 4));
        assert_eq!(k.prob(&w("-1,-1,1"), &w("1,1,1")), q(1, 4));
    }

    #[test]
    fn b_last_pair_ten_has_two_exits() {
        let k = build_two_species(Family::B, 3, 1).unwrap();
        let row = k.row_map(&w("-1,1,0"));
        assert_eq!(row[&w("-1,0,1")], q(1, 6));
        assert_eq!(row[&w("-1,0,-1")], q(1, 6));
    }

    #[test]
    fn reversal_symmetry_for_ccheck_and_d() {
        for family in [Family::Ccheck, Family::D] {
            for n in 2..=5 {
                for n0 in 0..=n {
                    let k = build_two_species(family, n, n0).unwrap();
                    for s in k.states() {
                        let mapped: std::collections::BTreeMap<Word, _> =
                            k.row_map(s).into_iter().map(|(t, p)| (t.reversed_negated(), p)).collect();
                        assert_eq!(k.row_map(&s.reversed_negated()), mapped, "{family} {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_counts() {
        assert_eq!(build_two_species(Family::B, 2, 3).unwrap_err(), Error::InvalidCounts { n: 2, n0: 3 });
        assert!(build_two_species(Family::C, 3, 1).is_err());
    }
}
