//! Row, column and hook sums of the last-two-site law of the B and D
//! multispecies chains, the first-site law of type B, and the conjectured
//! last-two-site values of type B.

use num_traits::Zero;
use serde::Serialize;

use super::numbers::binom;
use super::tasep::{d_minus_sum, d_plus_sum, zd, CorrelationTable};
use crate::error::{Error, Result};
use crate::markov::Dist;
use crate::rational::{qi, serde_q, Q};
use crate::weyl::{Family, SignedPerm};

/// `Row_i`, `Col_i`, and for `i ≥ 1` the down-hook `Hd_i` and up-hook `Hu_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiSums {
    #[serde(with = "serde_q")]
    pub row: Q,
    #[serde(with = "serde_q")]
    pub col: Q,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_q")]
    pub hd: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_q")]
    pub hu: Option<Q>,
}

fn opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => serde_q::serialize(v, s),
        None => s.serialize_none(),
    }
}

impl MultiSums {
    /// The sums read directly off a last-two-site table of species pairs.
    pub fn from_table(t: &CorrelationTable, i: i32) -> MultiSums {
        let n = t.n as i32;
        let hook = |f: &dyn Fn(i32) -> Q| (i >= 1).then(|| (i + 1..=n).map(f).sum());
        MultiSums {
            row: t.row_sum(i),
            col: t.col_sum(i),
            hd: hook(&|j| t.get(i, -j) + t.get(j, -i)),
            hu: hook(&|j| t.get(-j, i) + t.get(-i, j)),
        }
    }

    /// `Row_i − Hd_i + Col_i − Hu_i`, the coefficient of `e_i` in the limiting direction.
    pub fn direction_coefficient(&self) -> Option<Q> {
        Some(&self.row - self.hd.as_ref()? + &self.col - self.hu.as_ref()?)
    }
}

/// Law of the last two sites of a multispecies stationary distribution.
pub fn last_two_table(d: &Dist<SignedPerm>, model: &str) -> CorrelationTable {
    let n = d.iter().next().map_or(0, |(w, _)| w.n());
    let mut entries = std::collections::BTreeMap::new();
    for (w, p) in d.iter() {
        *entries.entry((w.get(n - 1), w.get(n))).or_insert_with(Q::zero) += p;
    }
    CorrelationTable { model: model.into(), n, n0: 0, entries }
}

fn check_species(n: usize, i: i32, min_n: usize) -> Result<()> {
    if n < min_n || i == 0 || i.unsigned_abs() as usize > n {
        return Err(Error::Range(format!("species {i} for n = {n}")));
    }
    Ok(())
}

fn frac(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

fn b_sums(n: i64, i: i64) -> MultiSums {
    let d = 2 * n * (2 * n - 1) * (n - 1);
    let row = match i {
        i if i <= -2 => frac(1, 2 * n),
        -1 => frac(n - 1, 2 * n * (2 * n - 1)),
        i => frac(n * n + 2 * n * (2 * i - 1) - 3 * i * i - i + 1, d),
    };
    MultiSums {
        row,
        col: frac(1, 2 * n),
        hd: (i >= 1).then(|| frac((n - i) * (n + 3 * i - 1), d)),
        hu: (i >= 1).then(|| frac(n - i, n * (2 * n - 1))),
    }
}

fn d_sums(n: i64, i: i64) -> MultiSums {
    let a = i.abs();
    let z = |k: i64| qi(zd(n, k));
    let pow4 = qi(num_bigint::BigInt::from(4).pow((n - 1) as u32));
    let col = if a == 1 {
        qi(binom(2 * n - 2, n - 1)) / (&pow4 * qi(2))
    } else {
        qi(binom(2 * n - 2, n - a)) / (qi(2) * z(a)) - qi(binom(2 * n - 2, n - a + 1)) / (qi(2) * z(a - 1))
    };
    // Two-species row sums of `¬1` and `1` at the second-to-last site.
    let minus_row = |k: i64| {
        let single_zero = if k == 1 { binom(2 * n - 4, n - 1) } else { Zero::zero() };
        (qi(d_minus_sum(n, k) * 2u32) + qi(binom(2 * n - 3, n - k - 1) + single_zero)) / z(k)
    };
    let plus_row = |k: i64| (qi(d_plus_sum(n, k) * 2u32) + qi(binom(2 * n - 4, n - k - 1))) / z(k);
    let row = match i {
        1 => qi(binom(2 * n - 4, n - 2)) / &pow4,
        -1 => qi(binom(2 * n - 4, n - 2)) / &pow4,
        i if i < 0 => minus_row(a - 1) - minus_row(a),
        i => plus_row(i - 1) - plus_row(i),
    };
    let hd = match i {
        1 => Some(qi(binom(2 * n - 4, n - 2)) / &pow4),
        i if i > 1 => Some(qi(d_plus_sum(n, i - 1)) / z(i - 1) - qi(d_plus_sum(n, i)) / z(i)),
        _ => None,
    };
    let hu = match i {
        1 => Some(qi(binom(2 * n - 3, n - 2)) / &pow4),
        i if i > 1 => Some(qi(d_minus_sum(n, i - 1)) / z(i - 1) - qi(d_minus_sum(n, i)) / z(i)),
        _ => None,
    };
    MultiSums { row, col, hd, hu }
}

/// Closed-form row, column and hook sums for species `i` of the B (`n ≥ 2`) or
/// D (`n ≥ 3`) multispecies chain.
pub fn multi_sums(family: Family, n: usize, i: i32) -> Result<MultiSums> {
    match family {
        Family::B => {
            check_species(n, i, 2)?;
            Ok(b_sums(n as i64, i as i64))
        }
        Family::D => {
            check_species(n, i, 3)?;
            Ok(d_sums(n as i64, i as i64))
        }
        f => Err(Error::UnsupportedKind(format!("row and hook sums for {f}"))),
    }
}

/// Probability that the first site of the B multispecies chain holds species `k`.
pub fn b_first_site(n: usize, k: i32) -> Result<Q> {
    check_species(n, k, 2)?;
    let (n, k) = (n as i64, k as i64);
    Ok(match k {
        k if k < 0 => frac(2 * k.abs() - 1, 2 * n * (2 * n - 1)),
        1 => frac(n * n + n - 1, 2 * n * (2 * n - 1)),
        _ => frac(1, 2 * n),
    })
}

/// Which of the five conjectured families contains the last-two-site pair `(i, j)`.
pub fn conjecture_b_case(n: usize, i: i32, j: i32) -> Option<u8> {
    let n = n as i32;
    if i == 0 || j >= 0 || i.abs() > n || j.abs() > n {
        return None;
    }
    let b = -j;
    if i < 0 {
        let a = -i;
        if a >= 3 && b <= a - 2 {
            Some(1)
        } else if a == b + 1 {
            Some(2)
        } else if b > a {
            Some(3)
        } else {
            None
        }
    } else if b >= i + 2 {
        Some(3)
    } else if b == i + 1 {
        Some(4)
    } else if b < i {
        Some(5)
    } else {
        None
    }
}

/// The conjectured value of `⟨i, j⟩` in the B multispecies chain, for `j < 0`.
pub fn conjecture_b_value(n: usize, i: i32, j: i32) -> Result<Q> {
    let case = conjecture_b_case(n, i, j)
        .ok_or_else(|| Error::Range(format!("no conjectured value for ⟨{i},{j}⟩, n = {n}")))?;
    let (n, a, b) = (n as i64, i.abs() as i64, j.abs() as i64);
    if n < 2 {
        return Err(Error::Range(format!("n = {n}")));
    }
    let m = 2 * n * n * (2 * n - 1);
    Ok(match case {
        1 => frac(1, 4 * n * n),
        2 => frac(1, 4 * n * n) + frac(n * n - b * b, 4 * n * n * (2 * n - 1)),
        3 if i < 0 => frac(b - a, m),
        3 => frac(a + b - 1, m),
        4 => frac(a * (n * n - a * a + 2 * n - 2), m * (n - 1)),
        _ => frac(3 * (a - b) * (a + b - 1), 2 * m * (n - 1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn b_examples() {
        for i in (-4..=4).filter(|&i| i != 0) {
            assert_eq!(multi_sums(Family::B, 4, i).unwrap().col, q(1, 8));
        }
        assert_eq!(multi_sums(Family::B, 4, 1).unwrap().hd, Some(q(3, 28)));
        assert_eq!(multi_sums(Family::B, 4, -1).unwrap().row, q(3, 56));
        assert!(multi_sums(Family::C, 4, 1).is_err());
        assert!(multi_sums(Family::B, 4, 5).is_err());
    }

    #[test]
    fn d_negative_rows_with_one_zero() {
        let row = |i| multi_sums(Family::D, 4, i).unwrap().row;
        assert_eq!(row(-1), q(3, 32));
        assert_eq!(row(-1), row(1));
        assert_eq!(row(-2), q(153, 928));
        let total: Q = (-4..=4).filter(|&i| i != 0).map(row).sum();
        assert_eq!(total, q(1, 1));
    }

    #[test]
    fn b_coefficient_is_odd_numbers() {
        for n in 2..10 {
            for k in 1..=n as i64 {
                let s = multi_sums(Family::B, n, k as i32).unwrap();
                assert_eq!(s.direction_coefficient().unwrap(), frac(2 * k - 1, n as i64 * (2 * n as i64 - 1)));
            }
        }
    }

    #[test]
    fn first_site() {
        assert_eq!(b_first_site(4, -2).unwrap(), q(3, 56));
        assert_eq!(b_first_site(3, 1).unwrap(), q(11, 30));
        for n in 2..10 {
            let total: Q = (-(n as i32)..=n as i32).filter(|&k| k != 0).map(|k| b_first_site(n, k).unwrap()).sum();
            assert_eq!(total, q(1, 1));
        }
    }

    #[test]
    fn conjecture_examples() {
        assert_eq!(conjecture_b_case(4, -4, -2), Some(1));
        assert_eq!(conjecture_b_value(4, -4, -2).unwrap(), q(1, 64));
        assert_eq!(conjecture_b_value(4, -1, -4).unwrap(), q(3, 224));
        assert_eq!(conjecture_b_value(4, 4, -1).unwrap(), q(3, 112));
        assert_eq!(conjecture_b_value(4, -3, -2).unwrap(), q(19, 448));
        assert_eq!(conjecture_b_case(4, 1, -2), Some(4));
        assert_eq!(conjecture_b_case(4, 2, -2), None);
        assert_eq!(conjecture_b_case(4, -2, -2), None);
        assert!(conjecture_b_value(4, 1, 2).is_err());
    }
}
