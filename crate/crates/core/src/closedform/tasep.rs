//! Partition functions, site densities and last-two-site tables of the
//! two-species chains.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::numbers::{binom, c};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, pow_q, qi, Q};

/// Probabilities indexed by a pair of species or letters, with `⟨j,0⟩ = ⟨0,j⟩ = 0`
/// wherever the zero letter does not occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationTable {
    pub model: String,
    pub n: usize,
    pub n0: usize,
    pub entries: BTreeMap<(i32, i32), Q>,
}

#[derive(Serialize)]
struct EntryJson {
    i: i32,
    j: i32,
    value: String,
}

impl CorrelationTable {
    pub fn get(&self, i: i32, j: i32) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// `Σ_j ⟨i, j⟩`.
    pub fn row_sum(&self, i: i32) -> Q {
        self.entries.iter().filter(|((a, _), _)| *a == i).map(|(_, v)| v).sum()
    }

    /// `Σ_i ⟨i, j⟩`.
    pub fn col_sum(&self, j: i32) -> Q {
        self.entries.iter().filter(|((_, b), _)| *b == j).map(|(_, v)| v).sum()
    }

    pub fn total(&self) -> Q {
        self.entries.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<EntryJson> =
            self.entries.iter().map(|(&(i, j), v)| EntryJson { i, j, value: fmt_q(v) }).collect();
        serde_json::json!({ "model": self.model, "n": self.n, "n0": self.n0, "entries": entries })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,value\n");
        for ((i, j), v) in &self.entries {
            out.push_str(&format!("{i},{j},{}\n", fmt_q(v)));
        }
        out
    }
}

fn check_counts(n: usize, n0: usize) -> Result<()> {
    if n0 > n {
        return Err(Error::InvalidCounts { n, n0 });
    }
    Ok(())
}

fn positive(x: &Q, name: &'static str) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::ZeroParameter(name));
    }
    Ok(())
}

/// Arita's partition function of the semipermeable process, zero when `n < n0`.
/// The `α = β` branch is chosen by exact comparison.
pub fn z_semiperm(n: usize, n0: usize, alpha: &Q, beta: &Q) -> Result<Q> {
    positive(alpha, "alpha")?;
    positive(beta, "beta")?;
    Ok(z_semi(n as i64, n0 as i64, alpha, beta))
}

fn z_semi(n: i64, n0: i64, alpha: &Q, beta: &Q) -> Q {
    if n < n0 {
        return Q::zero();
    }
    let ballot = |k: i64| qi(c(n + n0 - 1, n - n0 - k));
    if alpha == beta {
        return (0..=n - n0).map(|k| ballot(k) * qi(k + 1) * pow_q(alpha, -(k as i32))).sum();
    }
    let (ia, ib) = (alpha.recip(), beta.recip());
    let denom = &ib - &ia;
    (0..=n - n0)
        .map(|k| {
            let e = (k + 1) as usize;
            ballot(k) * (num_traits::pow(ib.clone(), e) - num_traits::pow(ia.clone(), e)) / &denom
        })
        .sum()
}

/// Probability that site `j` holds a `1` in the semipermeable process.
pub fn semiperm_density(n: usize, n0: usize, j: usize, alpha: &Q, beta: &Q) -> Result<Q> {
    check_counts(n, n0)?;
    if j == 0 || j > n {
        return Err(Error::Range(format!("site {j} of {n}")));
    }
    positive(alpha, "alpha")?;
    positive(beta, "beta")?;
    let (n, n0, j) = (n as i64, n0 as i64, j as i64);
    let z = z_semi(n, n0, alpha, beta);
    let bulk: Q = (0..n - j).map(|i| qi(c(i, i)) * z_semi(n - i - 1, n0, alpha, beta)).sum();
    let tail: Q = (0..=n - j).map(|k| qi(c(n - j - 1, n - j - k)) * pow_q(beta, -(k as i32 + 1))).sum();
    Ok((bulk + z_semi(j - 1, n0, alpha, beta) * tail) / z)
}

/// `P(w_n = 1)` in the semipermeable process at `α = β = 1`.
pub fn semiperm_last_density_unit(n: usize, n0: usize) -> Q {
    let (n, n0) = (n as i64, n0 as i64);
    Q::new(((n - n0) * (n + n0 + 2)).into(), (2 * n * (2 * n + 1)).into())
}

/// Probability that the last site of the Č multispecies chain holds species `i`.
pub fn ccheck_last_density(n: usize, i: usize) -> Result<Q> {
    if i == 0 || i > n {
        return Err(Error::Range(format!("species {i} for n = {n}")));
    }
    let one = Q::one();
    Ok(semiperm_density(n, i - 1, n, &one, &one)? - semiperm_density(n, i, n, &one, &one)?)
}

/// `binom(2n, n - n0)`.
pub fn z_b(n: usize, n0: usize) -> Result<BigInt> {
    check_counts(n, n0)?;
    Ok(binom(2 * n as i64, (n - n0) as i64))
}

fn table(model: &str, n: usize, n0: usize, cells: Vec<((i32, i32), BigInt)>, z: &BigInt) -> CorrelationTable {
    let z = qi(z.clone());
    let entries = cells.into_iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, qi(v) / &z)).collect();
    CorrelationTable { model: model.into(), n, n0, entries }
}

/// Last-two-site law of the B two-species chain. Letters are `-1, 0, 1`.
pub fn b_pair_table(n: usize, n0: usize) -> Result<CorrelationTable> {
    check_counts(n, n0)?;
    if n < 2 {
        return Err(Error::Range(format!("pair table needs n ≥ 2, got {n}")));
    }
    let (m, k) = (n as i64, n0 as i64);
    let mm = binom(2 * m - 2, m - k - 2);
    let pm: BigInt = binom(2 * m - 3, m - k - 2) * 2u32;
    let z0 = c(m + k - 2, m - k - 1);
    let cells = vec![
        ((-1, -1), mm.clone()),
        // The ballot form of this cell does not vanish at n0 = 0.
        ((-1, 0), if k == 0 { BigInt::zero() } else { c(m + k - 1, m - k - 1) }),
        ((-1, 1), mm),
        ((0, -1), z0.clone()),
        ((0, 0), c(m + k - 3, m - k)),
        ((0, 1), z0.clone()),
        ((1, -1), pm.clone()),
        ((1, 0), z0),
        ((1, 1), pm),
    ];
    Ok(table("B", n, n0, cells, &z_b(n, n0)?))
}

/// `Σ_j binom(2j, j) binom(2n-2j-2, n-j-n0)` for `n0 ≥ 1`, and `4^n` for `n0 = 0`.
pub fn z_d(n: usize, n0: usize) -> Result<BigInt> {
    check_counts(n, n0)?;
    Ok(zd(n as i64, n0 as i64))
}

pub(crate) fn zd(n: i64, n0: i64) -> BigInt {
    if n0 > n || n0 < 0 {
        return BigInt::zero();
    }
    if n0 == 0 {
        return BigInt::from(4).pow(n as u32);
    }
    (0..=n - n0).map(|j| binom(2 * j, j) * binom(2 * n - 2 * j - 2, n - j - n0)).sum()
}

/// `Σ_{j=2}^{n-n0} binom(2j-2, j) binom(2n-2j-2, n-j-n0)`.
pub(crate) fn d_minus_sum(n: i64, n0: i64) -> BigInt {
    (2..=n - n0).map(|j| binom(2 * j - 2, j) * binom(2 * n - 2 * j - 2, n - j - n0)).sum()
}

/// `Σ_{j=1}^{n-1-n0} binom(2j, j) binom(2n-2j-4, n-j-n0-1)`.
pub(crate) fn d_plus_sum(n: i64, n0: i64) -> BigInt {
    (1..n - n0).map(|j| binom(2 * j, j) * binom(2 * n - 2 * j - 4, n - j - n0 - 1)).sum()
}

/// Last-two-site law of the D two-species chain, `n0 ≥ 1`.
pub fn d_pair_table(n: usize, n0: usize) -> Result<CorrelationTable> {
    check_counts(n, n0)?;
    if n0 == 0 || n < 3 {
        return Err(Error::Range(format!("D pair table needs n ≥ 3 and n0 ≥ 1, got ({n}, {n0})")));
    }
    let (m, k) = (n as i64, n0 as i64);
    let minus = d_minus_sum(m, k);
    let plus = d_plus_sum(m, k);
    let zero_row = binom(2 * m - 4, m - k - 1);
    // With a single zero the `00` term cannot occur; its weight belongs to `¬1 0`.
    let (minus_zero, zero_zero) = if k == 1 {
        (binom(2 * m - 3, m - 2) + binom(2 * m - 4, m - 1), BigInt::zero())
    } else {
        (binom(2 * m - 3, m - k - 1), binom(2 * m - 4, m - k))
    };
    let cells = vec![
        ((-1, -1), minus.clone()),
        ((-1, 1), minus),
        ((-1, 0), minus_zero),
        ((0, -1), zero_row.clone()),
        ((0, 1), zero_row.clone()),
        ((0, 0), zero_zero),
        ((1, -1), plus.clone()),
        ((1, 1), plus),
        ((1, 0), zero_row),
    ];
    Ok(table("D", n, n0, cells, &z_d(n, n0)?))
}

/// Coefficients of `t^{n0}/(1-4t) · ((1-√(1-4t))/(2t))^{2n0-2}` up to `t^order`.
/// The bracket is the Catalan series.
pub fn z_d_generating_series(n0: usize, order: usize) -> Vec<BigInt> {
    let len = order + 1;
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let catalan: Vec<BigInt> = (0..len as i64).map(|k| c(k, k)).collect();
    let mut series = vec![BigInt::zero(); len];
    if n0 < len {
        series[n0] = BigInt::one();
    }
    let geometric: Vec<BigInt> = (0..len as u32).map(|k| BigInt::from(4).pow(k)).collect();
    series = mul(&series, &geometric);
    for _ in 0..(2 * n0).saturating_sub(2) {
        series = mul(&series, &catalan);
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn semiperm_values() {
        let one = Q::one();
        assert_eq!(z_semiperm(3, 1, &one, &one).unwrap(), qi(14));
        for n in 0..6 {
            assert_eq!(z_semiperm(n, n, &q(2, 3), &q(1, 3)).unwrap(), one);
            for n0 in 0..=n {
                assert_eq!(z_semiperm(n, n0, &one, &one).unwrap(), qi(c((n + n0 + 1) as i64, (n - n0) as i64)));
            }
        }
        assert_eq!(semiperm_density(4, 1, 4, &one, &one).unwrap(), q(7, 24));
        assert_eq!(semiperm_density(3, 3, 2, &one, &one).unwrap(), Q::zero());
        assert_eq!(ccheck_last_density(4, 2).unwrap(), q(5, 72));
        assert_eq!(ccheck_last_density(2, 2).unwrap(), q(5, 20));
        assert!(z_semiperm(3, 1, &Q::zero(), &one).is_err());
    }

    #[test]
    fn equal_branch_is_the_limit() {
        let one = Q::one();
        let eps = q(1, 1_000_000);
        let at = z_semiperm(4, 1, &one, &one).unwrap();
        let lo = z_semiperm(4, 1, &one, &(&one - &eps)).unwrap();
        let hi = z_semiperm(4, 1, &one, &(&one + &eps)).unwrap();
        assert!((&lo - &at).abs() < q(1, 1000) && (&hi - &at).abs() < q(1, 1000));
        assert!((lo - &at) * (hi - &at) < Q::zero());
    }

    #[test]
    fn last_density_closed_form() {
        let one = Q::one();
        for n in 1..8 {
            for n0 in 0..=n {
                assert_eq!(semiperm_density(n, n0, n, &one, &one).unwrap(), semiperm_last_density_unit(n, n0));
            }
        }
    }

    #[test]
    fn partition_values() {
        assert_eq!(z_b(4, 1).unwrap(), BigInt::from(56));
        assert_eq!(z_d(3, 1).unwrap(), BigInt::from(16));
        assert_eq!(z_d(4, 2).unwrap(), BigInt::from(29));
        for n in 1..10 {
            assert_eq!(z_d(n, 1).unwrap(), BigInt::from(4).pow(n as u32 - 1));
        }
    }

    #[test]
    fn b_table_cells() {
        let t = b_pair_table(3, 2).unwrap();
        assert_eq!(t.get(0, 0), q(2, 6));
        for n in 2..9 {
            for n0 in 0..=n {
                let t = b_pair_table(n, n0).unwrap();
                assert_eq!(t.total(), Q::one(), "({n}, {n0})");
                assert_eq!(t.col_sum(1), q((n - n0) as i64, 2 * n as i64));
                assert_eq!(t.col_sum(1), t.col_sum(-1));
            }
        }
    }

    #[test]
    fn d_table_cells() {
        for n in 3..9 {
            for n0 in 1..=n {
                let t = d_pair_table(n, n0).unwrap();
                assert_eq!(t.total(), Q::one(), "({n}, {n0})");
                let (m, k) = (n as i64, n0 as i64);
                let z = qi(zd(m, k));
                assert_eq!(t.col_sum(0), qi(binom(2 * m - 2, m - k)) / &z);
                if k >= 2 {
                    assert_eq!(t.get(-1, 0) * &z, qi(binom(2 * m - 3, m - k - 1)));
                }
            }
            assert!(d_pair_table(n, 1).unwrap().get(0, 0).is_zero());
        }
        assert_eq!(d_pair_table(4, 1).unwrap().get(-1, 0), q(7, 32));
        assert_eq!(d_pair_table(6, 1).unwrap().get(-1, 0), q(91, 512));
    }

    #[test]
    fn d_generating_function() {
        for n0 in [2usize, 3] {
            let series = z_d_generating_series(n0, 12);
            for (n, coeff) in series.iter().enumerate() {
                assert_eq!(*coeff, if n < n0 { BigInt::zero() } else { zd(n as i64, n0 as i64) }, "t^{n}, n0={n0}");
            }
        }
    }
}
