//! The two-row `D*` process.
//!
//! A configuration is a sequence of columns. Each column is a `*`-column, a
//! `0`-column or a pair of particles (top over bottom). Moves pick a wall `i`
//! (between columns `i` and `i+1`, 1-based) and relocate particles along runs of
//! equal top-row letters, so the top row performs exactly the `D*` moves.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{Dist, Kernel};
use crate::models::{DStarParams, Letter, Word};
use crate::rational::{pow_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Star,
    Zero,
    /// `1` over `1`.
    PP,
    /// `¬1` over `¬1`.
    MM,
    /// `¬1` over `1`.
    MP,
    /// `1` over `¬1`.
    PM,
}

impl Column {
    pub const ALL: [Column; 6] = [Column::Star, Column::Zero, Column::PP, Column::MM, Column::MP, Column::PM];

    pub fn top(self) -> Letter {
        match self {
            Column::Star => Letter::Star,
            Column::Zero => Letter::Zero,
            Column::PP | Column::PM => Letter::Plus,
            Column::MM | Column::MP => Letter::Minus,
        }
    }

    pub fn bottom(self) -> Letter {
        match self {
            Column::Star => Letter::Star,
            Column::Zero => Letter::Zero,
            Column::PP | Column::MP => Letter::Plus,
            Column::MM | Column::PM => Letter::Minus,
        }
    }

    pub fn from_letters(top: Letter, bottom: Letter) -> Option<Column> {
        Column::ALL.into_iter().find(|c| c.top() == top && c.bottom() == bottom)
    }

    fn is_delimiter(self) -> bool {
        matches!(self, Column::Star | Column::Zero)
    }
}

/// A two-row configuration, stored column by column. Not necessarily valid;
/// see [`validate`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoRowConfig(pub Vec<Column>);

impl TwoRowConfig {
    pub fn from_rows(top: &Word, bottom: &Word) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::DimensionMismatch { expected: top.len(), got: bottom.len() });
        }
        top.0
            .iter()
            .zip(&bottom.0)
            .map(|(&t, &b)| Column::from_letters(t, b).ok_or_else(|| Error::InvalidConfig(format!("column {t}/{b}"))))
            .collect::<Result<Vec<_>>>()
            .map(TwoRowConfig)
    }

    pub fn parse(top: &str, bottom: &str) -> Result<Self> {
        Self::from_rows(&Word::parse(top)?, &Word::parse(bottom)?)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Word {
        Word(self.0.iter().map(|c| c.top()).collect())
    }

    pub fn bottom(&self) -> Word {
        Word(self.0.iter().map(|c| c.bottom()).collect())
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&c| c == Column::Zero).count()
    }

    /// Column `k`, 1-based.
    fn col(&self, k: usize) -> Column {
        self.0[k - 1]
    }
}

impl fmt::Debug for TwoRowConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.top(), self.bottom())
    }
}

impl fmt::Display for TwoRowConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct Rows {
    top: Word,
    bottom: Word,
}

impl Serialize for TwoRowConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Rows { top: self.top(), bottom: self.bottom() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoRowConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Rows::deserialize(d)?;
        TwoRowConfig::from_rows(&r.top, &r.bottom).map_err(serde::de::Error::custom)
    }
}

/// Checks the column, border, balance and positivity conditions. Balance is
/// per run between delimiters (`0`-columns and the two ends).
pub fn validate(c: &TwoRowConfig) -> bool {
    let n = c.len();
    if n < 2 || !c.0[0].is_delimiter() || !c.0[n - 1].is_delimiter() {
        return false;
    }
    if c.0[1..n - 1].contains(&Column::Star) {
        return false;
    }
    let mut depth = 0i64;
    for &col in &c.0 {
        match col {
            Column::PP => depth += 1,
            Column::MM => depth -= 1,
            Column::Zero | Column::Star if depth != 0 => return false,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn check(c: &TwoRowConfig) -> Result<()> {
    if validate(c) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(c.to_string()))
    }
}

/// All valid configurations with `n` columns and `n0` zero-columns, sorted.
pub fn enumerate(n: usize, n0: usize) -> Result<Vec<TwoRowConfig>> {
    if n < 2 || n0 > n {
        return Err(Error::InvalidCounts { n, n0 });
    }
    let mut out = Vec::new();
    for first in [Column::Zero, Column::Star] {
        for last in [Column::Zero, Column::Star] {
            let fixed = (first == Column::Zero) as usize + (last == Column::Zero) as usize;
            if fixed > n0 || n0 - fixed > n - 2 {
                continue;
            }
            let mut cur = vec![first];
            fill(&mut cur, n, n0 - fixed, 0, last, &mut out);
        }
    }
    out.sort();
    Ok(out)
}

fn fill(cur: &mut Vec<Column>, n: usize, zeros_left: usize, depth: usize, last: Column, out: &mut Vec<TwoRowConfig>) {
    let remaining = n - 1 - cur.len();
    if remaining == 0 {
        if zeros_left == 0 && depth == 0 {
            cur.push(last);
            out.push(TwoRowConfig(cur.clone()));
            cur.pop();
        }
        return;
    }
    // Closing the open blocks needs `depth` more columns besides the zeros.
    if depth + zeros_left > remaining {
        return;
    }
    for col in [Column::Zero, Column::PP, Column::MM, Column::MP, Column::PM] {
        let (z, d) = match col {
            Column::Zero if zeros_left > 0 && depth == 0 => (zeros_left - 1, depth),
            Column::PP => (zeros_left, depth + 1),
            Column::MM if depth > 0 => (zeros_left, depth - 1),
            Column::MP | Column::PM => (zeros_left, depth),
            _ => continue,
        };
        cur.push(col);
        fill(cur, n, z, d, last, out);
        cur.pop();
    }
}

/// Number of star-free runs of `k` columns with `n0` zero-columns that satisfy
/// balance and positivity, by enumeration.
pub fn count_segment(k: usize, n0: usize) -> usize {
    if n0 > k {
        return 0;
    }
    // Pad with a zero-column on each side and reuse the full enumeration.
    enumerate(k + 2, n0 + 2)
        .map(|v| v.iter().filter(|c| c.0[0] == Column::Zero && c.0[k + 1] == Column::Zero).count())
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub n_y: usize,
    pub n_z: usize,
    pub n_y_star: usize,
    pub n_z_star: usize,
}

/// Counts the `y`, `z`, `y*` and `z*` labels.
///
/// A block is a matched `1/1 … ¬1/¬1` pair together with everything between.
/// A `1/1` opening a block at the top level is not inside any block and is
/// labelled `y` under the same conditions as a `¬1/1`.
pub fn label_counts(c: &TwoRowConfig) -> Result<LabelCounts> {
    check(c)?;
    let n = c.len();
    let leftmost0 = c.0.iter().position(|&x| x == Column::Zero).unwrap_or(n);
    let rightmost0 = c.0.iter().rposition(|&x| x == Column::Zero);
    let mut counts = LabelCounts {
        n_y_star: (c.0[0] == Column::Star) as usize,
        n_z_star: (c.0[n - 1] == Column::Star) as usize,
        ..Default::default()
    };
    let mut depth = 0usize;
    let mut seen_z_prime = false;
    for (k, &col) in c.0.iter().enumerate() {
        // `inside`: strictly between the ends of a block; `in_block`: also counting the ends.
        let (inside, in_block) = match col {
            Column::PP => {
                depth += 1;
                (depth > 1, true)
            }
            Column::MM => {
                depth -= 1;
                (depth > 0, true)
            }
            _ => (depth > 0, depth > 0),
        };
        let left_of_zeros = k < leftmost0;
        match col.bottom() {
            Letter::Minus if !in_block => {
                if rightmost0.is_none_or(|r| k > r) {
                    counts.n_z += 1;
                }
                if left_of_zeros {
                    seen_z_prime = true;
                }
            }
            Letter::Plus if !inside && left_of_zeros && !seen_z_prime => counts.n_y += 1,
            _ => {}
        }
    }
    Ok(counts)
}

fn check_ignorable(x: &Q, count: usize, name: &'static str) -> Result<Q> {
    if x.is_zero() {
        return if count == 0 { Ok(Q::one()) } else { Err(Error::ZeroParameter(name)) };
    }
    Ok(pow_q(x, -(count as i32)))
}

/// `q(ω) = 1/(α^{n_y} α*^{n_y*} β^{n_z} β*^{n_z*})`. A vanishing `α*` or `β*`
/// drops its factor.
pub fn q_weight(c: &TwoRowConfig, p: &DStarParams) -> Result<Q> {
    let l = label_counts(c)?;
    let a = check_ignorable(&p.alpha, l.n_y, "alpha")?;
    let b = check_ignorable(&p.beta, l.n_z, "beta")?;
    let a_s = if p.alpha_star.is_zero() { Q::one() } else { pow_q(&p.alpha_star, -(l.n_y_star as i32)) };
    let b_s = if p.beta_star.is_zero() { Q::one() } else { pow_q(&p.beta_star, -(l.n_z_star as i32)) };
    Ok(a * a_s * b * b_s)
}

/// The rule a move follows; `None` in [`tstar_bar`] output means no move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    B1,
    B2,
    L1,
    L2,
    L3,
    R1,
    R2,
    R3,
}

impl Rule {
    pub fn rate(self, p: &DStarParams) -> Q {
        match self {
            Rule::B1 | Rule::B2 | Rule::L3 | Rule::R3 => Q::one(),
            Rule::L1 => p.alpha.clone(),
            Rule::L2 => p.alpha_star.clone(),
            Rule::R1 => p.beta.clone(),
            Rule::R2 => p.beta_star.clone(),
        }
    }
}

/// Largest column `c ≤ i-1` whose top is not `¬1`; as a wall index.
fn j1(c: &TwoRowConfig, i: usize) -> usize {
    (1..i).rev().find(|&k| c.col(k).top() != Letter::Minus).expect("first column is a delimiter")
}

/// Largest wall `w ≥ i+1` such that columns `i+2..=w` all have top `1`.
fn j2(c: &TwoRowConfig, i: usize) -> usize {
    let mut w = i + 1;
    while w < c.len() && c.col(w + 1).top() == Letter::Plus {
        w += 1;
    }
    w
}

/// Removes the top at column `a` and the bottom at column `b`, then places a top
/// `1` at column `j2` and a bottom `¬1` either diagonally below-right (when the
/// top at column `j2+1` is `¬1`) or directly beneath it.
fn move_pair_right(c: &TwoRowConfig, a: usize, b: usize, j: usize) -> TwoRowConfig {
    let diagonal = c.col(j + 1).top() == Letter::Minus;
    let mut top = c.top().0;
    let mut bottom = c.bottom().0;
    top.remove(a - 1);
    bottom.remove(b - 1);
    top.insert(j - 1, Letter::Plus);
    bottom.insert(if diagonal { j } else { j - 1 }, Letter::Minus);
    TwoRowConfig::from_rows(&Word(top), &Word(bottom)).expect("relocation keeps columns aligned")
}

/// Removes column `r` and inserts a `¬1/1` column right of wall `j`.
fn move_column_left(c: &TwoRowConfig, r: usize, j: usize) -> TwoRowConfig {
    let mut cols = c.0.clone();
    cols.remove(r - 1);
    cols.insert(j, Column::MP);
    TwoRowConfig(cols)
}

fn set_pair(c: &TwoRowConfig, i: usize, a: Column, b: Column) -> TwoRowConfig {
    let mut cols = c.0.clone();
    cols[i - 1] = a;
    cols[i] = b;
    TwoRowConfig(cols)
}

fn wall_check(c: &TwoRowConfig, i: usize) -> Result<()> {
    let max = c.len().saturating_sub(1);
    if i == 0 || i > max {
        return Err(Error::InvalidWall { wall: i, max });
    }
    Ok(())
}

/// `T̄*(ω, i)` together with the rule used; the configuration is unchanged and
/// `j = i` when no rule applies.
pub fn tstar_rule(c: &TwoRowConfig, i: usize) -> Result<(TwoRowConfig, usize, Option<Rule>)> {
    check(c)?;
    wall_check(c, i)?;
    let n = c.len();
    let (a, b) = (c.col(i), c.col(i + 1));
    let moved = if i == 1 {
        match (a, b) {
            (Column::Star, Column::MP) => Some((move_pair_right(c, 2, 2, j2(c, i)), j2(c, i), Rule::L1)),
            (Column::Star, Column::Zero) => Some((move_pair_right(c, 1, 1, j2(c, i)), j2(c, i), Rule::L2)),
            (Column::Zero, Column::MP) => Some((set_pair(c, 1, Column::Star, Column::Zero), 1, Rule::L3)),
            _ => None,
        }
    } else if i == n - 1 {
        match (a, b) {
            (Column::PM, Column::Star) => Some((move_column_left(c, n - 1, j1(c, i)), j1(c, i), Rule::R1)),
            (Column::Zero, Column::Star) => Some((move_column_left(c, n, j1(c, i)), j1(c, i), Rule::R2)),
            (Column::PM, Column::Zero) => Some((set_pair(c, n - 1, Column::Zero, Column::Star), n - 1, Rule::R3)),
            _ => None,
        }
    } else {
        let top_one = a.top() == Letter::Plus;
        match (a, b) {
            (_, Column::MP) if top_one || a == Column::Zero => {
                Some((move_column_left(c, i + 1, j1(c, i)), j1(c, i), Rule::B1))
            }
            (_, Column::MM) if top_one => Some((move_pair_right(c, i, i + 1, j2(c, i)), j2(c, i), Rule::B2)),
            (Column::PM, Column::Zero) => Some((move_pair_right(c, i, i, j2(c, i)), j2(c, i), Rule::B2)),
            _ => None,
        }
    };
    Ok(match moved {
        Some((next, j, rule)) => {
            debug_assert!(validate(&next), "{c} wall {i} gave {next}");
            (next, j, Some(rule))
        }
        None => (c.clone(), i, None),
    })
}

/// `T*(ω, i)`.
pub fn tstar(c: &TwoRowConfig, i: usize) -> Result<TwoRowConfig> {
    tstar_rule(c, i).map(|(next, _, _)| next)
}

/// `T̄*(ω, i) = (T*(ω, i), j)`.
pub fn tstar_bar(c: &TwoRowConfig, i: usize) -> Result<(TwoRowConfig, usize)> {
    tstar_rule(c, i).map(|(next, j, _)| (next, j))
}

/// `λ(ω[i])`: the rate of the rule at wall `i`, or `1` when none applies.
pub fn rate_at(c: &TwoRowConfig, i: usize, p: &DStarParams) -> Result<Q> {
    Ok(tstar_rule(c, i)?.2.map_or_else(Q::one, |r| r.rate(p)))
}

/// The two-row chain: a wall is chosen uniformly from `1..n` and its rule fires
/// with probability `λ`.
pub fn kernel(n: usize, n0: usize, p: &DStarParams) -> Result<Kernel<TwoRowConfig>> {
    if n < 3 {
        return Err(Error::InvalidCounts { n, n0 });
    }
    let states = enumerate(n, n0)?;
    let wall = Q::new(1.into(), ((n - 1) as i64).into());
    Kernel::from_moves(states, |c| {
        (1..n)
            .filter_map(|i| {
                let (next, _, rule) = tstar_rule(c, i).expect("enumerated states are valid");
                let rate = rule?.rate(p);
                (!rate.is_zero()).then(|| (next, rate * &wall))
            })
            .collect::<Vec<_>>()
    })
}

/// Configurations reachable from everywhere: a `*` first column when `α* = 0`
/// and a `*` last column when `β* = 0`.
fn in_closed_class(c: &TwoRowConfig, p: &DStarParams) -> bool {
    (!p.alpha_star.is_zero() || c.0[0] == Column::Star) && (!p.beta_star.is_zero() || c.0[c.len() - 1] == Column::Star)
}

/// Product-form stationary law `q(ω)/Z*` over the closed class, with `Z*`.
pub fn stationary(n: usize, n0: usize, p: &DStarParams) -> Result<(Dist<TwoRowConfig>, Q)> {
    if n < 3 {
        return Err(Error::InvalidCounts { n, n0 });
    }
    let weights = enumerate(n, n0)?
        .into_iter()
        .filter(|c| in_closed_class(c, p))
        .map(|c| {
            let w = q_weight(&c, p)?;
            Ok((c, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let z = weights.iter().fold(Q::zero(), |acc, (_, w)| acc + w);
    if z.is_zero() {
        return Err(Error::InvalidCounts { n, n0 });
    }
    Ok((Dist::from_weights(weights)?, z))
}

/// `Z*_{n,n0}`.
pub fn partition_function(n: usize, n0: usize, p: &DStarParams) -> Result<Q> {
    stationary(n, n0, p).map(|(_, z)| z)
}

/// Marginal law of the top row.
pub fn project_top_row(d: &Dist<TwoRowConfig>) -> Dist<Word> {
    d.map(TwoRowConfig::top)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::models::build_dstar;
    use crate::rational::q;

    fn cfg(top: &str, bottom: &str) -> TwoRowConfig {
        TwoRowConfig::parse(top, bottom).unwrap()
    }

    fn params(a: Q, a_s: Q, b: Q, b_s: Q) -> DStarParams {
        DStarParams::new(a, a_s, b, b_s).unwrap()
    }

    fn generic() -> Vec<DStarParams> {
        vec![
            params(q(1, 2), q(1, 3), q(2, 5), q(3, 7)),
            params(q(5, 6), q(1, 1), q(1, 4), q(2, 9)),
            params(q(1, 7), q(3, 4), q(1, 1), q(1, 2)),
        ]
    }

    #[test]
    fn listed_spaces() {
        let got: BTreeSet<_> = enumerate(3, 1).unwrap().into_iter().collect();
        let want: BTreeSet<_> = [
            cfg("0,1,*", "0,-1,*"),
            cfg("0,-1,*", "0,1,*"),
            cfg("*,0,*", "*,0,*"),
            cfg("*,1,0", "*,-1,0"),
            cfg("*,-1,0", "*,1,0"),
        ]
        .into();
        assert_eq!(got, want);
        let got: BTreeSet<_> = enumerate(4, 0).unwrap().into_iter().collect();
        let want: BTreeSet<_> = [
            cfg("*,-1,-1,*", "*,1,1,*"),
            cfg("*,-1,1,*", "*,1,-1,*"),
            cfg("*,1,-1,*", "*,1,-1,*"),
            cfg("*,1,-1,*", "*,-1,1,*"),
            cfg("*,1,1,*", "*,-1,-1,*"),
        ]
        .into();
        assert_eq!(got, want);
        assert!(!validate(&cfg("*,1,1,*", "*,1,1,*")));
        assert!(!validate(&cfg("0,*,0", "0,*,0")));
        assert_eq!(enumerate(2, 2).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 2..=6 {
            for n0 in 0..=n {
                let brute: Vec<TwoRowConfig> = (0..n)
                    .map(|_| Column::ALL)
                    .fold(vec![vec![]], |acc: Vec<Vec<Column>>, cols| {
                        acc.into_iter().flat_map(|p| cols.iter().map(move |&c| [p.clone(), vec![c]].concat())).collect()
                    })
                    .into_iter()
                    .map(TwoRowConfig)
                    .filter(|c| validate(c) && c.zeros() == n0)
                    .collect();
                let mut brute = brute;
                brute.sort();
                assert_eq!(enumerate(n, n0).unwrap(), brute, "n={n} n0={n0}");
            }
        }
    }

    #[test]
    fn segment_counts() {
        assert_eq!(count_segment(3, 1), 14);
        assert_eq!(count_segment(2, 2), 1);
        let catalan = [1, 1, 2, 5, 14, 42, 132];
        for k in 0..=5 {
            assert_eq!(count_segment(k, 0), catalan[k + 1]);
        }
    }

    #[test]
    fn labels_of_small_configs() {
        let zero = cfg("0,0,0", "0,0,0");
        assert_eq!(label_counts(&zero).unwrap(), LabelCounts::default());
        let p = params(q(1, 2), Q::zero(), q(1, 2), q(1, 2));
        assert_eq!(q_weight(&cfg("*,-1,0", "*,1,0"), &p).unwrap(), q(2, 1));
        assert_eq!(q_weight(&zero, &p).unwrap(), Q::one());
    }

    #[test]
    fn top_level_opening_column_is_labelled() {
        let l = label_counts(&cfg("*,1,-1,*", "*,1,-1,*")).unwrap();
        assert_eq!(l, LabelCounts { n_y: 1, n_z: 0, n_y_star: 1, n_z_star: 1 });
        // 1/1 ¬1/1 ¬1/¬1 ¬1/1 1/¬1 ¬1/1 0 1/1 ¬1/¬1 1/¬1 behind a starred first column.
        let c = cfg("*,1,-1,-1,-1,1,-1,0,1,-1,1,*", "*,1,1,-1,1,-1,1,0,1,-1,-1,*");
        assert_eq!(label_counts(&c).unwrap(), LabelCounts { n_y: 2, n_z: 1, n_y_star: 1, n_z_star: 1 });
    }

    #[test]
    fn l3_example() {
        let c = cfg("0,-1,1,*", "0,1,-1,*");
        let (next, j, rule) = tstar_rule(&c, 1).unwrap();
        assert_eq!(next, cfg("*,0,1,*", "*,0,-1,*"));
        assert_eq!((j, rule), (1, Some(Rule::L3)));
    }

    #[test]
    fn b1_relocates_past_the_run_of_minus() {
        // 0 | ¬1/1 ¬1/1 1/¬1 | ¬1/1 … : the moved column lands right of wall 1.
        let c = cfg("0,-1,-1,1,-1,0", "0,1,1,-1,1,0");
        let (next, j, rule) = tstar_rule(&c, 4).unwrap();
        assert_eq!(rule, Some(Rule::B1));
        assert_eq!(j, 1);
        assert_eq!(next, cfg("0,-1,-1,-1,1,0", "0,1,1,1,-1,0"));
    }

    #[test]
    fn invalid_wall() {
        let c = cfg("0,-1,1,*", "0,1,-1,*");
        assert_eq!(tstar(&c, 0).unwrap_err(), Error::InvalidWall { wall: 0, max: 3 });
        assert!(tstar(&c, 4).is_err());
    }

    #[test]
    fn tstar_bar_is_a_bijection() {
        for n in 3..=7 {
            for n0 in 0..=3.min(n) {
                let states = enumerate(n, n0).unwrap();
                let mut images = BTreeSet::new();
                for c in &states {
                    for i in 1..n {
                        assert!(images.insert(tstar_bar(c, i).unwrap()), "collision at {c} wall {i}");
                    }
                }
                assert_eq!(images.len(), states.len() * (n - 1));
            }
        }
    }

    #[test]
    fn transfer_identity() {
        for p in generic() {
            for n in 3..=7 {
                for n0 in 0..=3.min(n) {
                    for c in enumerate(n, n0).unwrap() {
                        for i in 1..n {
                            let (next, j) = tstar_bar(&c, i).unwrap();
                            let lhs = rate_at(&c, i, &p).unwrap() * q_weight(&c, &p).unwrap();
                            let rhs = rate_at(&next, j, &p).unwrap() * q_weight(&next, &p).unwrap();
                            assert_eq!(lhs, rhs, "{c} wall {i} -> {next} wall {j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_form_is_stationary() {
        let mut points = generic();
        points.push(params(q(1, 1), Q::zero(), q(1, 1), Q::zero()));
        points.push(params(q(1, 2), Q::zero(), q(1, 2), q(1, 2)));
        for p in &points {
            for n in 3..=5 {
                for n0 in 0..=n {
                    // With both starred rates zero the class needs two free end columns.
                    let Ok((d, _)) = stationary(n, n0, p) else { continue };
                    let k = kernel(n, n0, p).unwrap().closed_class().unwrap();
                    assert_eq!(d.support_len(), k.len());
                    assert!(d.is_stationary_for(&k), "n={n} n0={n0} {p:?}");
                }
            }
        }
    }

    #[test]
    fn top_row_is_the_dstar_law() {
        let mut points = generic();
        points.push(DStarParams::uniform(q(1, 2)).unwrap());
        points.push(params(q(1, 1), Q::zero(), q(1, 1), Q::zero()));
        for p in &points {
            for n in 3..=5 {
                for n0 in 0..=3.min(n) {
                    let Ok((d, _)) = stationary(n, n0, p) else { continue };
                    let exact = build_dstar(n, n0, p).unwrap().closed_class().unwrap().exact_stationary().unwrap();
                    assert_eq!(project_top_row(&d), exact, "n={n} n0={n0}");
                }
            }
        }
    }

    #[test]
    fn starred_ends_only_class() {
        let p = params(q(1, 1), Q::zero(), q(1, 1), Q::zero());
        let (d, z) = stationary(3, 1, &p).unwrap();
        assert_eq!(d.support_len(), 1);
        assert_eq!(z, Q::one());
        let (d, _) = stationary(4, 1, &p).unwrap();
        assert_eq!(d.support_len(), 4);
        assert!(d.iter().all(|(c, w)| c.0[0] == Column::Star && c.0[3] == Column::Star && *w == q(1, 4)));
    }
}
