//! Exact stationary vectors by p-adic lifting.
//!
//! The balance equations are scaled to integers and one of them is replaced by
//! the normalization `Σπ = 1`, giving a nonsingular system `Aπ = b`. A single
//! LU factorization modulo a word-sized prime drives Dixon's lifting, and the
//! p-adic solution is turned into rationals by rational reconstruction. The
//! reconstructed vector is accepted only after `Aπ = b` checks exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Primes below 2^25: squares stay under 2^50, leaving 14 bits of headroom for
/// unreduced accumulation in `u64`.
const PRIMES: [u64; 6] = [33_554_393, 33_554_383, 33_554_371, 33_554_341, 33_554_317, 33_554_201];
const LAZY_STEPS: usize = 1 << 13;

/// `rows[i]` lists `(j, P_ij)` for an irreducible stochastic matrix.
pub(crate) fn stationary(rows: &[Vec<(usize, Q)>]) -> Result<Vec<Q>> {
    let m = rows.len();
    if m == 1 {
        return Ok(vec![Q::one()]);
    }
    let system = IntSystem::new(rows)?;
    for &p in &PRIMES {
        if let Some(lu) = ModLu::factor(&system.dense_mod(p), m, p) {
            return lift(&system, &lu);
        }
    }
    Err(Error::InvalidKernel("balance system singular modulo every prime tried".into()))
}

/// `A` stored by rows; row `j` is the balance equation of state `j` except the
/// last row, which is all ones.
struct IntSystem {
    m: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl IntSystem {
    fn new(p_rows: &[Vec<(usize, Q)>]) -> Result<Self> {
        let m = p_rows.len();
        let mut lcm = BigInt::one();
        for row in p_rows {
            for (_, p) in row {
                lcm = lcm.lcm(p.denom());
            }
        }
        let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m];
        for (i, row) in p_rows.iter().enumerate() {
            for (j, p) in row {
                let scaled = (p * Q::from_integer(lcm.clone())).to_integer();
                let v =
                    scaled.to_i64().ok_or_else(|| Error::InvalidKernel("transition denominators too large".into()))?;
                rows[*j].push((i, v));
            }
        }
        let l = lcm.to_i64().ok_or_else(|| Error::InvalidKernel("transition denominators too large".into()))?;
        for (j, row) in rows.iter_mut().enumerate() {
            match row.iter_mut().find(|(i, _)| *i == j) {
                Some(e) => e.1 -= l,
                None => row.push((j, -l)),
            }
        }
        rows[m - 1] = (0..m).map(|i| (i, 1)).collect();
        Ok(IntSystem { m, rows })
    }

    fn dense_mod(&self, p: u64) -> Vec<u64> {
        let mut a = vec![0u64; self.m * self.m];
        for (j, row) in self.rows.iter().enumerate() {
            for &(i, v) in row {
                a[j * self.m + i] = v.rem_euclid(p as i64) as u64;
            }
        }
        a
    }

    /// `b - A x` for a small integer vector `x`.
    fn residual(&self, b: &[i128], x: &[u64]) -> Vec<i128> {
        self.rows
            .iter()
            .zip(b)
            .map(|(row, bj)| bj - row.iter().map(|&(i, v)| v as i128 * x[i] as i128).sum::<i128>())
            .collect()
    }

    fn hadamard_bits(&self) -> u64 {
        self.rows
            .iter()
            .map(|row| {
                let s: f64 = row.iter().map(|&(_, v)| (v as f64) * (v as f64)).sum();
                (s.sqrt().log2().ceil().max(0.0)) as u64 + 1
            })
            .sum()
    }
}

struct ModLu {
    m: usize,
    p: u64,
    /// Unit lower factor below the diagonal, upper factor on and above it.
    a: Vec<u64>,
    perm: Vec<usize>,
}

impl ModLu {
    fn factor(a: &[u64], m: usize, p: u64) -> Option<Self> {
        let mut a = a.to_vec();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut nz = Vec::with_capacity(m);
        for c in 0..m {
            if c > 0 && c % LAZY_STEPS == 0 {
                for r in c..m {
                    for v in &mut a[r * m + c..(r + 1) * m] {
                        *v %= p;
                    }
                }
            }
            let pivot = (c..m).find(|&r| !a[r * m + c].is_multiple_of(p))?;
            if pivot != c {
                for k in 0..m {
                    a.swap(c * m + k, pivot * m + k);
                }
                perm.swap(c, pivot);
            }
            for v in &mut a[c * m + c..(c + 1) * m] {
                *v %= p;
            }
            let inv = mod_inv(a[c * m + c], p);
            nz.clear();
            nz.extend((c + 1..m).filter(|&k| a[c * m + k] != 0));
            let (head, tail) = a.split_at_mut((c + 1) * m);
            let piv = &head[c * m..];
            for row in tail.chunks_exact_mut(m) {
                let v = row[c] % p;
                if v == 0 {
                    row[c] = 0;
                    continue;
                }
                let f = v * inv % p;
                row[c] = f;
                let g = p - f;
                if nz.len() * 4 < m - c {
                    for &k in &nz {
                        row[k] += g * piv[k];
                    }
                } else {
                    for (x, &y) in row[c + 1..].iter_mut().zip(&piv[c + 1..]) {
                        *x += g * y;
                    }
                }
            }
        }
        Some(ModLu { m, p, a, perm })
    }

    /// Solves `A x ≡ b (mod p)` for `b` given modulo `p`.
    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let (m, p) = (self.m, self.p);
        let mut y: Vec<u64> = self.perm.iter().map(|&r| b[r]).collect();
        for r in 0..m {
            let row = &self.a[r * m..r * m + r];
            let s: u128 = row.iter().zip(&y[..r]).map(|(&l, &v)| l as u128 * v as u128).sum();
            y[r] = ((y[r] as u128 + (p as u128 - s % p as u128)) % p as u128) as u64;
        }
        for r in (0..m).rev() {
            let row = &self.a[r * m + r + 1..(r + 1) * m];
            let s: u128 = row.iter().zip(&y[r + 1..]).map(|(&u, &v)| u as u128 * v as u128).sum();
            let t = ((y[r] as u128 + (p as u128 - s % p as u128)) % p as u128) as u64;
            y[r] = t * mod_inv(self.a[r * m + r], p) % p;
        }
        y
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

fn lift(system: &IntSystem, lu: &ModLu) -> Result<Vec<Q>> {
    let m = system.m;
    let p = lu.p;
    let mut b = vec![0i128; m];
    b[m - 1] = 1;
    let mut r = b.clone();
    let mut acc = vec![BigInt::zero(); m];
    let mut modulus = BigInt::one();
    let max_steps = (2 * system.hadamard_bits() + 8) / 24 + 4;
    let mut next_try = 1u64;
    for step in 1..=max_steps {
        let rm: Vec<u64> = r.iter().map(|v| v.rem_euclid(p as i128) as u64).collect();
        let x = lu.solve(&rm);
        r = system.residual(&r, &x);
        for v in &mut r {
            debug_assert_eq!(*v % p as i128, 0);
            *v /= p as i128;
        }
        for (a, &xi) in acc.iter_mut().zip(&x) {
            *a += &modulus * xi;
        }
        modulus *= p;
        if step >= next_try || step == max_steps {
            next_try = step + step / 3 + 1;
            if let Some(sol) = reconstruct(&acc, &modulus) {
                if verify(system, &sol) {
                    return Ok(sol);
                }
            }
        }
    }
    Err(Error::InvalidKernel("p-adic lifting did not converge".into()))
}

fn reconstruct(acc: &[BigInt], modulus: &BigInt) -> Option<Vec<Q>> {
    let bound = (modulus / 2u32).sqrt();
    let half = modulus / 2u32;
    let mut den = BigInt::one();
    let mut out = Vec::with_capacity(acc.len());
    for a in acc {
        let mut y = (a * &den).mod_floor(modulus);
        if y > half {
            y -= modulus;
        }
        if y.abs() <= bound {
            out.push(Q::new(y, den.clone()));
            continue;
        }
        let (num, d) = ratrecon(&y, modulus, &bound)?;
        den *= &d;
        if den > bound {
            return None;
        }
        out.push(Q::new(num, den.clone()));
    }
    Some(out)
}

/// Finds `n/d ≡ u (mod m)` with `|n|, d ≤ bound`.
fn ratrecon(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

fn verify(system: &IntSystem, sol: &[Q]) -> bool {
    let den = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums: Vec<BigInt> = sol.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    if nums.iter().any(|x| x.is_negative()) {
        return false;
    }
    system.rows.iter().enumerate().all(|(j, row)| {
        let s: BigInt = row.iter().map(|&(i, v)| &nums[i] * v).sum();
        if j + 1 == system.m {
            s == den
        } else {
            s.is_zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn inverse_mod_p() {
        let p = PRIMES[0];
        for a in [1u64, 2, 12345, p - 1] {
            assert_eq!(a * mod_inv(a, p) % p, 1);
        }
    }

    #[test]
    fn ratrecon_roundtrip() {
        let m = BigInt::from(PRIMES[0]) * BigInt::from(PRIMES[1]);
        let bound = (&m / 2u32).sqrt();
        let den = BigInt::from(448);
        let x = Q::new(BigInt::from(19), den.clone());
        let u = (BigInt::from(19) * den.extended_gcd(&m).x).mod_floor(&m);
        let (n, d) = ratrecon(&u, &m, &bound).unwrap();
        assert_eq!(Q::new(n, d), x);
    }

    #[test]
    fn three_state_cycle() {
        // 0 -> 1 -> 2 -> 0 with different holding.
        let rows = vec![vec![(0, q(1, 2)), (1, q(1, 2))], vec![(1, q(2, 3)), (2, q(1, 3))], vec![(0, q(1, 1))]];
        let pi = stationary(&rows).unwrap();
        assert_eq!(pi, vec![q(1, 3), q(1, 2), q(1, 6)]);
    }
}
