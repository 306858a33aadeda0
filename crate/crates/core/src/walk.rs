//! The reduced random walk on alcoves of the affine Weyl group.
//!
//! Hyperplanes are `⟨α, x⟩ = k` for every positive root `α` and `k ∈ ℤ`; the
//! fundamental alcove is `⟨α_i, x⟩ > 0`, `⟨θ, x⟩ < 1`. The walk sits in the
//! alcove `u(A_0)` and proposes to cross wall `g` of it, i.e. to move to
//! `u ∘ r_g`. The proposal is accepted when the crossed hyperplane has not been
//! crossed before; otherwise the walk holds.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::limdir_closed;
use crate::error::{Error, Result};
use crate::markov::montecarlo::trial_rng;
use crate::rational::{fmt_q, qi, Q};
use crate::weyl::{act, apply_generator, kac_weights, root_data, Family, SignedPerm, WeylKind};

/// `x ↦ L x + t` with `L` a signed permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineIsometry {
    pub linear: SignedPerm,
    pub translation: Vec<Q>,
}

impl AffineIsometry {
    pub fn identity(n: usize) -> Self {
        AffineIsometry { linear: SignedPerm::identity(n), translation: vec![Q::zero(); n] }
    }

    /// Reflection in wall `g` of the fundamental alcove: `s_g` for `g < n`, and
    /// the reflection in `⟨θ, x⟩ = 1` for `g = n`.
    pub fn generator(kind: WeylKind, g: usize) -> Result<Self> {
        let n = kind.rank();
        let linear = apply_generator(&SignedPerm::identity(n), g, kind)?;
        let translation = if g == n {
            let theta = root_data(kind).theta;
            let norm: i64 = theta.iter().map(|x| x * x).sum();
            theta.iter().map(|&c| Q::new((2 * c).into(), norm.into())).collect()
        } else {
            vec![Q::zero(); n]
        };
        Ok(AffineIsometry { linear, translation })
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let lx = act(&self.linear, x).expect("dimensions agree");
        lx.into_iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        AffineIsometry { linear: self.linear.mul(&other.linear), translation: self.apply(&other.translation) }
    }
}

fn dot(a: &[i64], x: &[Q]) -> Q {
    a.iter().zip(x).map(|(c, v)| qi(*c) * v).sum()
}

/// Gaussian elimination over the rationals for a square nonsingular system.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &pivot_row[col];
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `D_2` is reducible: its "highest root" is the simple root `e_1 + e_2`, so
/// the walls do not bound an alcove.
fn check_kind(kind: WeylKind) -> Result<()> {
    if kind.family() == Family::D && kind.rank() < 3 {
        return Err(Error::Range("the alcove walk needs D_n with n ≥ 3".into()));
    }
    Ok(())
}

/// Barycenter of the vertices of the fundamental alcove. Panics for `D_2`.
pub fn fundamental_point(kind: WeylKind) -> Vec<Q> {
    let n = kind.rank();
    let rs = root_data(kind);
    let mut walls: Vec<(Vec<i64>, Q)> = rs.simple_roots.iter().map(|a| (a.clone(), Q::zero())).collect();
    walls.push((rs.theta.clone(), Q::one()));
    let mut sum = vec![Q::zero(); n];
    for skip in 0..walls.len() {
        let (a, b): (Vec<Vec<Q>>, Vec<Q>) = walls
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, (r, v))| (r.iter().map(|&c| qi(c)).collect(), v.clone()))
            .unzip();
        let vertex = solve(a, b).expect("alcove walls are independent");
        for (s, v) in sum.iter_mut().zip(vertex) {
            *s += v;
        }
    }
    let count = qi(walls.len() as i64);
    sum.into_iter().map(|s| s / &count).collect()
}

/// Number of hyperplanes separating `x` from the fundamental point.
pub fn separation_count(x: &[Q], kind: WeylKind) -> Result<usize> {
    check_kind(kind)?;
    let x0 = fundamental_point(kind);
    let mut total = 0usize;
    for alpha in &root_data(kind).positive_roots {
        let v = dot(alpha, x);
        if v.is_integer() {
            return Err(Error::NonGenericPoint);
        }
        // `⟨α, x_0⟩ ∈ (0, 1)`, so this counts the integers strictly between.
        let crossed = if v.is_positive() { v.floor() } else { (-v).floor() + Q::one() };
        total += crossed.to_integer().to_usize().expect("count fits");
        debug_assert!(dot(alpha, &x0) > Q::zero() && dot(alpha, &x0) < Q::one());
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkState {
    pub isometry: AffineIsometry,
    pub point: Vec<Q>,
    pub crossings: usize,
}

impl WalkState {
    pub fn start(kind: WeylKind) -> Self {
        WalkState { isometry: AffineIsometry::identity(kind.rank()), point: fundamental_point(kind), crossings: 0 }
    }
}

/// One proposal of generator `g`, accepted iff it crosses a new hyperplane.
pub fn step(s: &WalkState, g: usize, kind: WeylKind) -> Result<WalkState> {
    check_kind(kind)?;
    let u = s.isometry.compose(&AffineIsometry::generator(kind, g)?);
    let x = u.apply(&fundamental_point(kind));
    let crossings = separation_count(&x, kind)?;
    if crossings == s.crossings + 1 {
        return Ok(WalkState { isometry: u, point: x, crossings });
    }
    debug_assert_eq!(crossings + 1, s.crossings);
    Ok(s.clone())
}

/// Integer form of the walk: every point is stored as `D·x` for the common
/// denominator `D` of the fundamental point, which all walk points share.
struct Engine {
    n: usize,
    x0: Vec<i64>,
    /// `D·r_g(x_0)`.
    images: Vec<Vec<i64>>,
    /// `(R_g, D·t_g)`.
    gens: Vec<(Vec<i32>, Vec<i64>)>,
    denom: i64,
    sampler: WeightedIndex<u32>,
}

fn lin(l: &[i32], v: &[i64]) -> Vec<i64> {
    l.iter().map(|&w| w.signum() as i64 * v[w.unsigned_abs() as usize - 1]).collect()
}

impl Engine {
    fn new(kind: WeylKind) -> Result<Self> {
        check_kind(kind)?;
        let n = kind.rank();
        let x0 = fundamental_point(kind);
        let denom = x0.iter().fold(num_bigint::BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        let scale = Q::from_integer(denom.clone());
        let to_int = |v: &[Q]| -> Vec<i64> {
            v.iter()
                .map(|c| {
                    let s = c * &scale;
                    assert!(s.is_integer(), "walk points share the denominator of x_0");
                    s.to_integer().to_i64().expect("small")
                })
                .collect()
        };
        let mut images = Vec::new();
        let mut gens = Vec::new();
        for g in 0..=n {
            let r = AffineIsometry::generator(kind, g)?;
            images.push(to_int(&r.apply(&x0)));
            gens.push((r.linear.window().to_vec(), to_int(&r.translation)));
        }
        let sampler = WeightedIndex::new(kac_weights(kind).weights).expect("positive weights");
        Ok(Engine { n, x0: to_int(&x0), images, gens, denom: denom.to_i64().expect("small"), sampler })
    }

    /// Runs `steps` proposals from the fundamental alcove; returns `D·x_T` and the
    /// number of accepted steps.
    fn run(&self, steps: u64, rng: &mut impl Rng, mut path: Option<&mut Vec<Vec<i64>>>) -> (Vec<i64>, u64) {
        let mut l: Vec<i32> = (1..=self.n as i32).collect();
        let mut t = vec![0i64; self.n];
        let mut x = self.x0.clone();
        let mut accepted = 0;
        for _ in 0..steps {
            let g = self.sampler.sample(rng);
            let y: Vec<i64> = lin(&l, &self.images[g]).iter().zip(&t).map(|(a, b)| a + b).collect();
            // The wall is the perpendicular bisector of x and y; accept iff x_0 is on x's side.
            let side: i64 = (0..self.n).map(|i| (x[i] - y[i]) * (2 * self.x0[i] - x[i] - y[i])).sum();
            if side > 0 {
                let (rg, tg) = &self.gens[g];
                let lt = lin(&l, tg);
                t.iter_mut().zip(lt).for_each(|(a, b)| *a += b);
                l = l.iter().map(|&w| w.signum() * rg[w.unsigned_abs() as usize - 1]).collect();
                x = y;
                accepted += 1;
                if let Some(p) = path.as_deref_mut() {
                    p.push(x.clone());
                }
            }
        }
        (x, accepted)
    }
}

/// Signed permutation `w` and dominant point `d` with `y = w·d`.
fn fold(y: &[f64], family: Family) -> (Vec<i32>, Vec<f64>) {
    let n = y.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| y[a].abs().total_cmp(&y[b].abs()));
    let mut d: Vec<f64> = order.iter().map(|&j| y[j].abs()).collect();
    let mut rank = vec![0i32; n];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r as i32 + 1;
    }
    let odd = y.iter().filter(|v| **v < 0.0).count() % 2 == 1;
    let flip_first = family == Family::D && odd;
    if flip_first {
        d[0] = -d[0];
    }
    let w = (0..n)
        .map(|j| {
            let s = if y[j] < 0.0 { -1 } else { 1 };
            let s = if flip_first && rank[j] == 1 { -s } else { s };
            s * rank[j]
        })
        .collect();
    (w, d)
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkSummary {
    pub kind: String,
    pub n: usize,
    pub steps: u64,
    pub accepted: u64,
    /// `x_T` as exact rationals.
    pub final_point: Vec<String>,
    /// The Weyl chamber `w(C_0)` containing `x_T`, in window notation.
    pub chamber: Vec<i32>,
}

fn summarize(kind: WeylKind, e: &Engine, x: &[i64], steps: u64, accepted: u64) -> WalkSummary {
    let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    WalkSummary {
        kind: kind.family().to_string(),
        n: kind.rank(),
        steps,
        accepted,
        final_point: x.iter().map(|&v| fmt_q(&Q::new(v.into(), e.denom.into()))).collect(),
        chamber: fold(&xf, kind.family().base()).0,
    }
}

/// A single walk of `steps` proposals, reproducible from `seed`.
pub fn run_walk(kind: WeylKind, steps: u64, seed: u64) -> Result<WalkSummary> {
    let e = Engine::new(kind)?;
    let (x, accepted) = e.run(steps, &mut trial_rng(seed, 0), None);
    Ok(summarize(kind, &e, &x, steps, accepted))
}

/// The accepted points of a walk, as floats, starting at the fundamental point.
pub fn walk_path(kind: WeylKind, steps: u64, seed: u64) -> Result<Vec<Vec<f64>>> {
    let e = Engine::new(kind)?;
    let mut path = vec![e.x0.clone()];
    e.run(steps, &mut trial_rng(seed, 0), Some(&mut path));
    Ok(path.into_iter().map(|p| p.iter().map(|&v| v as f64 / e.denom as f64).collect()).collect())
}

/// Polyline drawing of a rank-2 walk path.
pub fn path_svg(path: &[Vec<f64>]) -> Result<String> {
    if path.iter().any(|p| p.len() != 2) {
        return Err(Error::Range("SVG paths need rank 2".into()));
    }
    let r = path.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs())) * 1.05;
    let points: Vec<String> = path.iter().map(|p| format!("{:.4},{:.4}", p[0], -p[1])).collect();
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
         <line x1=\"{}\" y1=\"0\" x2=\"{r}\" y2=\"0\" stroke=\"gray\" stroke-width=\"{w}\"/>\n\
         <line x1=\"0\" y1=\"{}\" x2=\"0\" y2=\"{r}\" stroke=\"gray\" stroke-width=\"{w}\"/>\n\
         <polyline fill=\"none\" stroke=\"goldenrod\" stroke-width=\"{w}\" points=\"{}\"/>\n</svg>\n",
        -r,
        -r,
        2.0 * r,
        2.0 * r,
        -r,
        -r,
        points.join(" "),
        w = r / 200.0,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionEstimate {
    pub kind: String,
    pub n: usize,
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    /// Mean over trials of `x_T/‖x_T‖`, folded into the dominant chamber.
    pub direction_estimate: Vec<f64>,
    pub closed_form: Option<Vec<f64>>,
    pub cosine_vs_closed_form: Option<f64>,
    pub acceptance_rate: f64,
    /// Fraction of trials confined to each chamber.
    pub chambers: Vec<(Vec<i32>, f64)>,
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / (na * nb)
}

/// Runs `trials` independent walks in parallel and averages their directions.
pub fn estimate_direction(kind: WeylKind, steps: u64, trials: u64, seed: u64) -> Result<DirectionEstimate> {
    if steps == 0 {
        return Err(Error::Range("steps must be at least 1".into()));
    }
    let e = Engine::new(kind)?;
    let trials = trials.max(1);
    let runs: Vec<(Vec<i64>, u64)> =
        (0..trials).into_par_iter().map(|t| e.run(steps, &mut trial_rng(seed, t), None)).collect();
    let n = kind.rank();
    let mut mean = vec![0.0; n];
    let mut chambers: std::collections::BTreeMap<Vec<i32>, u64> = Default::default();
    for (x, _) in &runs {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let (w, d) = fold(&xf, kind.family().base());
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        mean.iter_mut().zip(&d).for_each(|(m, v)| *m += v / norm / trials as f64);
        *chambers.entry(w).or_default() += 1;
    }
    let closed = limdir_closed(kind).ok().map(|d| d.to_f64());
    let accepted: u64 = runs.iter().map(|(_, a)| a).sum();
    Ok(DirectionEstimate {
        kind: kind.family().to_string(),
        n,
        steps,
        trials,
        seed,
        cosine_vs_closed_form: closed.as_ref().map(|c| cosine(&mean, c)),
        direction_estimate: mean,
        closed_form: closed,
        acceptance_rate: accepted as f64 / (steps * trials) as f64,
        chambers: chambers.into_iter().map(|(w, c)| (w, c as f64 / trials as f64)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn kind(f: Family, n: usize) -> WeylKind {
        WeylKind::new(f, n).unwrap()
    }

    const KINDS: [(Family, usize); 9] = [
        (Family::B, 2),
        (Family::B, 3),
        (Family::C, 2),
        (Family::Ccheck, 3),
        (Family::Bcheck, 3),
        (Family::D, 3),
        (Family::D, 4),
        (Family::C, 1),
        (Family::B, 1),
    ];

    #[test]
    fn fundamental_point_is_generic_and_inside() {
        let x = fundamental_point(kind(Family::B, 2));
        assert!(x[0] > Q::zero() && x[0] < x[1] && &x[0] + &x[1] < Q::one());
        for (f, n) in KINDS {
            let k = kind(f, n);
            let x = fundamental_point(k);
            assert_eq!(separation_count(&x, k).unwrap(), 0);
        }
        assert_eq!(separation_count(&[q(1, 2), q(1, 1)], kind(Family::B, 2)), Err(Error::NonGenericPoint));
        assert!(run_walk(kind(Family::D, 2), 10, 1).is_err());
    }

    #[test]
    fn theta_reflection_crosses_one_hyperplane() {
        let k = kind(Family::B, 2);
        let x = AffineIsometry::generator(k, 2).unwrap().apply(&fundamental_point(k));
        assert_eq!(separation_count(&x, k).unwrap(), 1);
    }

    #[test]
    fn figure_word_is_reduced() {
        let k = kind(Family::B, 2);
        let mut s = WalkState::start(k);
        for (t, g) in [2, 0, 1, 0, 2, 0, 2, 1].into_iter().enumerate() {
            s = step(&s, g, k).unwrap();
            assert_eq!(s.crossings, t + 1);
        }
        let xf: Vec<f64> = s.point.iter().map(crate::rational::to_f64).collect();
        assert_eq!(fold(&xf, Family::B).0, vec![1, 2]);
    }

    #[test]
    fn first_proposals_accepted_and_repeats_rejected() {
        for (f, n) in KINDS {
            let k = kind(f, n);
            let s0 = WalkState::start(k);
            for g in 0..=n {
                let s1 = step(&s0, g, k).unwrap();
                assert_eq!(s1.crossings, 1);
                assert_eq!(step(&s1, g, k).unwrap(), s1);
            }
        }
    }

    #[test]
    fn integer_engine_matches_exact_steps() {
        for (f, n) in KINDS {
            let k = kind(f, n);
            let e = Engine::new(k).unwrap();
            let mut rng = trial_rng(9, 0);
            let mut s = WalkState::start(k);
            for _ in 0..300 {
                let g = e.sampler.sample(&mut rng);
                let before = s.crossings;
                s = step(&s, g, k).unwrap();
                assert!(s.crossings == before || s.crossings == before + 1);
            }
            let (x, acc) = e.run(300, &mut trial_rng(9, 0), None);
            let scaled: Vec<Q> = s.point.iter().map(|v| v * qi(e.denom)).collect();
            assert_eq!(scaled, x.iter().map(|&v| qi(v)).collect::<Vec<_>>(), "{f}{n}");
            assert_eq!(acc as usize, s.crossings);
            assert_eq!(separation_count(&s.point, k).unwrap(), s.crossings);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let k = kind(Family::D, 3);
        let a = run_walk(k, 5000, 3).unwrap();
        let b = run_walk(k, 5000, 3).unwrap();
        assert_eq!(a.final_point, b.final_point);
        let est = estimate_direction(k, 2000, 4, 1).unwrap();
        let total: f64 = est.chambers.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn svg_only_for_rank_two() {
        let path = walk_path(kind(Family::B, 2), 50, 1).unwrap();
        assert!(path_svg(&path).unwrap().starts_with("<svg"));
        assert!(path_svg(&walk_path(kind(Family::B, 3), 5, 1).unwrap()).is_err());
    }
}
