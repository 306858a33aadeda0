//! Binomial, ballot and Catalan numbers, and the path generating functions
//! `V_k(α, β)` and `M_k(β)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow_q, qi, Q};

/// `binom(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k.min(n - k)))
}

/// Total ballot number: `C^n_k` for `0 ≤ k ≤ n`, `C^{-1}_0 = 1`, zero elsewhere.
pub(crate) fn c(n: i64, k: i64) -> BigInt {
    if n == -1 && k == 0 {
        return BigInt::one();
    }
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    binom(n + k, n) - binom(n + k, n + 1)
}

/// `C^n_k = binom(n+k, n) − binom(n+k, n+1)`.
pub fn ballot(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return Err(Error::Range(format!("ballot C^{n}_{k} needs k ≤ n")));
    }
    Ok(c(n as i64, k as i64))
}

pub fn catalan(n: usize) -> BigInt {
    c(n as i64, n as i64)
}

fn nonzero(x: &Q, name: &'static str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::ZeroParameter(name));
    }
    Ok(())
}

/// `M_k(β) = Σ_i C^k_{k-i} β^{-i}`.
pub fn m_poly(k: usize, beta: &Q) -> Result<Q> {
    nonzero(beta, "beta")?;
    let k = k as i64;
    Ok((0..=k).map(|i| qi(c(k, k - i)) * pow_q(beta, -(i as i32))).sum())
}

/// `V_k(α, β) = Σ_{i,j} C^{k-1}_{k-i-j} α^{-i} β^{-j}`.
pub fn v_poly(k: usize, alpha: &Q, beta: &Q) -> Result<Q> {
    nonzero(alpha, "alpha")?;
    nonzero(beta, "beta")?;
    let k = k as i64;
    let mut total = Q::zero();
    for i in 0..=k {
        for j in 0..=k - i {
            total += qi(c(k - 1, k - i - j)) * pow_q(alpha, -(i as i32)) * pow_q(beta, -(j as i32));
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Up,
    Down,
    /// Horizontal step of the `1/α` colour.
    FlatA,
    /// Horizontal step of the `1/β` colour.
    FlatB,
}

/// Weight of one path: `1/β` per `FlatB` on the axis; `1/α` per `Up` or `FlatA`
/// leaving the axis, unless a `1/β` weight lies to its left.
fn path_weight(path: &[Step], ia: &Q, ib: &Q) -> Q {
    let mut w = Q::one();
    let mut height = 0i32;
    let mut seen_beta = false;
    for &s in path {
        match s {
            Step::FlatB if height == 0 => {
                w *= ib;
                seen_beta = true;
            }
            Step::Up | Step::FlatA if height == 0 && !seen_beta => w *= ia,
            _ => {}
        }
        match s {
            Step::Up => height += 1,
            Step::Down => height -= 1,
            _ => {}
        }
    }
    w
}

fn extend(path: &mut Vec<Step>, height: usize, k: usize, ia: &Q, ib: &Q, total: &mut Q) {
    let left = k - path.len();
    if left == 0 {
        *total += path_weight(path, ia, ib);
        return;
    }
    for s in [Step::Up, Step::Down, Step::FlatA, Step::FlatB] {
        let h = match s {
            Step::Up if height < left - 1 => height + 1,
            Step::Down if height > 0 => height - 1,
            Step::FlatA | Step::FlatB if height < left => height,
            _ => continue,
        };
        path.push(s);
        extend(path, h, k, ia, ib, total);
        path.pop();
    }
}

/// Weighted count of bicoloured Motzkin paths of length `k`, by brute force.
pub fn enumerate_bicolored_motzkin(k: usize, alpha: &Q, beta: &Q) -> Result<Q> {
    nonzero(alpha, "alpha")?;
    nonzero(beta, "beta")?;
    let mut total = Q::zero();
    extend(&mut Vec::with_capacity(k), 0, k, &alpha.recip(), &beta.recip(), &mut total);
    Ok(total)
}

/// `Σ_{i=j}^b C^{a-i}_{b-i} C^i_{i-j} = C^{a+1}_{b-j}` for `a ≥ b ≥ j ≥ 0`.
pub fn ballot_convolution_holds(a: usize, b: usize, j: usize) -> bool {
    let (a, b, j) = (a as i64, b as i64, j as i64);
    let lhs: BigInt = (j..=b).map(|i| c(a - i, b - i) * c(i, i - j)).sum();
    lhs == c(a + 1, b - j)
}

/// `Σ_{i=0}^{n-b} C^{i+d}_i binom(2n-2i-d-a, n-b-i) = binom(2n-a+1, n-b)` for
/// `n ≥ b` and `b - d - a ≥ 0`.
pub fn ballot_binomial_holds(n: usize, a: usize, b: usize, d: usize) -> bool {
    let (n, a, b, d) = (n as i64, a as i64, b as i64, d as i64);
    let lhs: BigInt = (0..=n - b).map(|i| c(i + d, i) * binom(2 * n - 2 * i - d - a, n - b - i)).sum();
    lhs == binom(2 * n - a + 1, n - b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn ballot_triangle() {
        let rows: Vec<Vec<u32>> = vec![vec![1], vec![1, 1], vec![1, 2, 2], vec![1, 3, 5, 5], vec![1, 4, 9, 14, 14]];
        for (n, row) in rows.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                assert_eq!(ballot(n, k).unwrap(), BigInt::from(v));
            }
        }
        assert_eq!(catalan(3), BigInt::from(5));
        assert!(ballot(2, 3).is_err());
    }

    #[test]
    fn ballot_recurrence() {
        for n in 1..15 {
            for k in 1..n {
                assert_eq!(c(n, k), c(n - 1, k) + c(n, k - 1));
            }
            assert_eq!(c(n, n), c(n, n - 1));
        }
    }

    #[test]
    fn v2_expansion() {
        let (a, b) = (q(2, 3), q(5, 7));
        let (ia, ib) = (a.recip(), b.recip());
        let expect = &ia * &ia + &ib * &ib + &ia * &ib + &ia + &ib;
        assert_eq!(v_poly(2, &a, &b).unwrap(), expect);
        assert_eq!(enumerate_bicolored_motzkin(2, &a, &b).unwrap(), expect);
    }

    #[test]
    fn small_values() {
        let one = Q::one();
        assert_eq!(m_poly(2, &q(1, 2)).unwrap(), qi(10));
        assert_eq!(v_poly(2, &one, &one).unwrap(), qi(5));
        assert_eq!(enumerate_bicolored_motzkin(0, &one, &one).unwrap(), one);
        assert_eq!(enumerate_bicolored_motzkin(2, &one, &one).unwrap(), qi(5));
        assert_eq!(m_poly(1, &Q::zero()), Err(Error::ZeroParameter("beta")));
    }

    #[test]
    fn motzkin_enumeration_matches_v() {
        for (a, b) in [(q(1, 2), q(1, 3)), (q(3, 4), q(2, 1)), (q(1, 1), q(1, 1))] {
            for k in 0..=8 {
                assert_eq!(enumerate_bicolored_motzkin(k, &a, &b).unwrap(), v_poly(k, &a, &b).unwrap(), "k={k}");
            }
        }
    }
}
