//! Extremal systems: root schemes, their numerical realization with exact
//! verification, and the circuits on which the sharp bounds are attained.
//!
//! A scheme is realized by placing one of its letters at 0 and the last one at
//! infinity, prescribing the large block of consecutive r-roots near x = 1 and
//! solving for the remaining letter positions and the scale by damped Newton
//! steps. The remaining single r-roots then lie in gaps where P/Q runs between
//! 0 and infinity. Every candidate is rounded to rationals and checked exactly.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::theorem_bounds;
use crate::circuit::Circuit;
use crate::counting::{positive_count, real_count};
use crate::eliminant;
use crate::error::{Error, Result};
use crate::galesystem::CircuitSystem;
use crate::lattice::{integer_kernel, kernel_mod2, IntMatrix};
use crate::scalar::{best_rational, Int, Rational};
use crate::upoly::{complex_roots, FloatPoly, RatPoly, RealRoots};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    P,
    Q,
    R,
}

impl Letter {
    fn swapped(self) -> Letter {
        match self {
            Letter::P => Letter::Q,
            Letter::Q => Letter::P,
            Letter::R => Letter::R,
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::P => 'p',
            Letter::Q => 'q',
            Letter::R => 'r',
        }
    }
}

/// Real roots of P, Q and f = P - Q in increasing order, each with its letter
/// and multiplicity. A letter at infinity is recorded last, by degree deficit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootScheme {
    pub entries: Vec<(Letter, u32)>,
    pub degree: usize,
}

impl RootScheme {
    pub fn new(entries: Vec<(Letter, u32)>, degree: usize) -> Result<RootScheme> {
        if entries.iter().any(|&(_, m)| m == 0) {
            return Err(Error::Domain("scheme multiplicities must be positive".into()));
        }
        let s = RootScheme { entries, degree };
        for l in [Letter::P, Letter::Q, Letter::R] {
            let c = s.total(l) as usize;
            if c > degree || (degree - c) % 2 != 0 {
                return Err(Error::Domain(format!(
                    "{} letters of total multiplicity {c} do not fit degree {degree}",
                    l.symbol()
                )));
            }
        }
        Ok(s)
    }

    /// Sum of the multiplicities carried by `letter`.
    pub fn total(&self, letter: Letter) -> u32 {
        self.entries.iter().filter(|e| e.0 == letter).map(|e| e.1).sum()
    }

    /// The same scheme with p and q exchanged, i.e. the scheme of (Q, P).
    pub fn swapped(&self) -> RootScheme {
        RootScheme { entries: self.entries.iter().map(|&(l, m)| (l.swapped(), m)).collect(), degree: self.degree }
    }
}

impl fmt::Display for RootScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(l, m)| format!("{}{}", l.symbol(), m)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn repeat(seq: &[(Letter, u32)], times: usize) -> Vec<(Letter, u32)> {
    (0..times).flat_map(|_| seq.iter().copied()).collect()
}

/// Target scheme for n + 1 positive solutions, of degree n + 1.
pub fn scheme_positive(n: usize) -> RootScheme {
    use Letter::*;
    assert!(n >= 1, "scheme_positive needs n >= 1");
    let k = n / 2;
    let mut e = repeat(&[(Q, 2), (P, 2)], k);
    if n % 2 == 0 {
        e.push((Q, 1));
    } else {
        e.extend([(Q, 2), (P, 1)]);
    }
    e.extend(repeat(&[(R, 1)], n + 1));
    e.push((P, 1));
    RootScheme::new(e, n + 1).expect("consistent by construction")
}

/// Target scheme for 2^{n-R}(n+R+1) real solutions, of degree n + R + 1.
///
/// When n - R is even and positive the leading block alternates (q,2),(p,2);
/// the order (p,2),(q,2) would put two poles next to each other and needs
/// more critical points of P/Q than a map of this degree has. For odd R >= 3
/// every pair of consecutive p/q letters of the tail is separated by an r.
pub fn scheme_ij(n: usize, r: usize) -> RootScheme {
    use Letter::*;
    assert!(r >= 1 && r <= n, "scheme_ij needs 0 < R <= n");
    let d = n - r;
    let mut e = if d % 2 == 0 {
        repeat(&[(Q, 2), (P, 2)], d / 2)
    } else {
        let mut v = repeat(&[(P, 2), (Q, 2)], (d - 1) / 2);
        v.push((P, 2));
        v
    };
    e.extend([(Q, 3), (R, 1), (P, 2)]);
    e.extend(repeat(&[(R, 1)], d + 1));
    let mut j = repeat(&[(R, 1)], r);
    if r == 1 {
        j.push((P, 1));
    } else if r % 2 == 0 {
        j.push((Q, 2));
        j.extend(repeat(&[(R, 1), (P, 4), (R, 1), (Q, 4)], r / 2 - 1));
        j.extend([(R, 1), (P, 3)]);
    } else {
        j.push((P, 2));
        j.extend(repeat(&[(R, 1), (Q, 4), (R, 1), (P, 4)], (r - 3) / 2));
        j.extend([(R, 1), (Q, 4), (R, 1), (P, 3)]);
    }
    if d % 2 == 1 {
        j = j.into_iter().map(|(l, m)| (l.swapped(), m)).collect();
    }
    e.extend(j);
    RootScheme::new(e, n + r + 1).expect("consistent by construction")
}

// ---------------------------------------------------------------------------
// Scheme extraction

struct Located {
    letter: Letter,
    poly: usize,
    index: usize,
}

fn overlaps(a: &crate::upoly::IsolatedRoot, b: &crate::upoly::IsolatedRoot) -> bool {
    match (a.is_exact(), b.is_exact()) {
        (true, true) => a.lo == b.lo,
        (true, false) => b.lo < a.lo && a.lo < b.hi,
        (false, true) => a.lo < b.lo && b.lo < a.hi,
        (false, false) => a.lo < b.hi && b.lo < a.hi,
    }
}

/// The root scheme of (P, Q).
pub fn extract_scheme(p: &RatPoly, q: &RatPoly) -> Result<RootScheme> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Domain("P and Q must be nonzero".into()));
    }
    let f = p - q;
    if f.is_zero() {
        return Err(Error::ZeroEliminant);
    }
    let common = p.gcd(q);
    if common.degree().is_some_and(|d| d > 0) && !RealRoots::new(&common)?.is_empty() {
        return Err(Error::SharedRoot);
    }
    let mut sets = [RealRoots::new(p)?, RealRoots::new(q)?, RealRoots::new(&f)?];
    let letters = [Letter::P, Letter::Q, Letter::R];
    let mut all: Vec<Located> = Vec::new();
    for (k, set) in sets.iter().enumerate() {
        all.extend((0..set.len()).map(|index| Located { letter: letters[k], poly: k, index }));
    }
    loop {
        all.sort_by(|a, b| {
            let ra = &sets[a.poly].roots[a.index];
            let rb = &sets[b.poly].roots[b.index];
            ra.lo.cmp(&rb.lo).then(ra.hi.cmp(&rb.hi))
        });
        let clash = all.windows(2).find_map(|w| {
            let ra = &sets[w[0].poly].roots[w[0].index];
            let rb = &sets[w[1].poly].roots[w[1].index];
            overlaps(ra, rb).then_some(((w[0].poly, w[0].index), (w[1].poly, w[1].index)))
        });
        let Some((a, b)) = clash else { break };
        let ra = sets[a.0].roots[a.1].clone();
        let rb = sets[b.0].roots[b.1].clone();
        if ra.is_exact() && rb.is_exact() {
            return Err(Error::SharedRoot);
        }
        for (poly, index) in [a, b] {
            let w = sets[poly].roots[index].width();
            if !w.is_zero() {
                sets[poly].refine_index(index, &(w / Rational::from_integer(Int::from(2))));
            }
        }
    }
    let mut entries: Vec<(Letter, u32)> =
        all.iter().map(|e| (e.letter, sets[e.poly].roots[e.index].multiplicity as u32)).collect();
    let degree = p.degree().unwrap().max(q.degree().unwrap());
    let df = f.degree().unwrap();
    for (letter, dg) in [(Letter::P, p.degree().unwrap()), (Letter::Q, q.degree().unwrap()), (Letter::R, df)] {
        if dg < degree {
            entries.push((letter, (degree - dg) as u32));
        }
    }
    RootScheme::new(entries, degree)
}

// ---------------------------------------------------------------------------
// Numerical realization

/// Search controls: a wall-clock budget and the base seed of the trials.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: Duration,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: Duration::from_secs(120), seed: 0 }
    }
}

/// Exact polynomials realizing a scheme: f = alpha * P0 - Q0 where P0 and Q0
/// are the monic products over the finite p- and q-letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub scheme: RootScheme,
    /// Index, among the finite p/q letters, of the letter placed at 0.
    pub zero: usize,
    /// Positions of the finite p/q letters in scheme order.
    pub positions: Vec<Rational>,
    pub alpha: Rational,
    pub p: RatPoly,
    pub q: RatPoly,
    pub seed: u64,
}

/// Shape of a scheme as seen by the search.
#[derive(Clone, Debug)]
struct Shape {
    finite: Vec<(Letter, u32)>,
    /// need[j] = number of r-roots between finite letters j-1 and j.
    need: Vec<u32>,
    block: usize,
}

impl Shape {
    fn of(s: &RootScheme) -> Result<Shape> {
        let last = s.entries.last().ok_or_else(|| Error::Domain("empty scheme".into()))?;
        if last.0 == Letter::R {
            return Err(Error::Domain("the search needs a p or q letter at infinity".into()));
        }
        let body = &s.entries[..s.entries.len() - 1];
        let finite: Vec<(Letter, u32)> = body.iter().copied().filter(|e| e.0 != Letter::R).collect();
        let mut need = vec![0u32; finite.len() + 1];
        let mut j = 0;
        for &(l, m) in body {
            if l == Letter::R {
                if m != 1 {
                    return Err(Error::Domain("the search needs simple r-roots".into()));
                }
                need[j] += 1;
            } else {
                j += 1;
            }
        }
        let block = (0..need.len()).max_by_key(|&j| (need[j], std::cmp::Reverse(j))).unwrap();
        if need[block] as usize != finite.len() {
            return Err(Error::Domain(format!(
                "the search needs a block of {} consecutive r-roots, found {}",
                finite.len(),
                need[block]
            )));
        }
        Ok(Shape { finite, need, block })
    }

    fn k(&self) -> usize {
        self.finite.len()
    }
}

/// A floating-point realization: positions of the finite letters and alpha.
#[derive(Clone, Debug)]
struct FloatRealization {
    positions: Vec<f64>,
    alpha: f64,
}

fn float_product(shape: &Shape, pos: &[f64], letter: Letter, shift: f64) -> FloatPoly {
    let mut out = FloatPoly::one();
    for (i, &(l, m)) in shape.finite.iter().enumerate() {
        if l == letter {
            let lin = FloatPoly::linear(shift - pos[i], 1.0);
            out = &out * &lin.pow(m).expect("nonzero factor");
        }
    }
    out
}

struct Problem<'a> {
    shape: &'a Shape,
    zero: usize,
    center: f64,
    sign: f64,
}

impl Problem<'_> {
    fn positions(&self, theta: &[f64]) -> Vec<f64> {
        let mut pos = theta[..self.shape.k() - 1].to_vec();
        pos.insert(self.zero, 0.0);
        pos
    }

    /// Remainder of alpha P0 - Q0 modulo prod (u - nodes_j), u = x - center,
    /// scaled by |Q0(center)|.
    fn residual(&self, theta: &[f64], nodes: &[f64]) -> Option<Vec<f64>> {
        let k = self.shape.k();
        let pos = self.positions(theta);
        let a = theta[k - 1];
        if a.abs() > 600.0 {
            return None;
        }
        let p = float_product(self.shape, &pos, Letter::P, self.center);
        let q = float_product(self.shape, &pos, Letter::Q, self.center);
        let f = &p.scale(&(self.sign * a.exp())) - &q;
        let modulus = nodes.iter().fold(FloatPoly::one(), |acc, &s| &acc * &FloatPoly::linear(-s, 1.0));
        let (_, rem) = f.div_rem(&modulus).ok()?;
        let norm = q.coeff(0).abs();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        let out: Vec<f64> = (0..k).map(|i| rem.coeff(i) / norm).collect();
        out.iter().all(|v| v.is_finite()).then_some(out)
    }
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Levenberg-Marquardt with forward-difference Jacobians.
fn levenberg_marquardt(res: &dyn Fn(&[f64]) -> Option<Vec<f64>>, mut x: Vec<f64>, iters: usize) -> (Vec<f64>, f64) {
    let Some(mut r) = res(&x) else { return (x, f64::INFINITY) };
    let mut cost = sum_sq(&r);
    let mut mu = 1e-3;
    for _ in 0..iters {
        if cost < 1e-28 {
            break;
        }
        let n = x.len();
        let mut jac = vec![vec![0.0; n]; r.len()];
        for i in 0..n {
            let h = 1e-7 * (1.0 + x[i].abs());
            let mut xx = x.clone();
            xx[i] += h;
            let Some(ri) = res(&xx) else { return (x, cost) };
            for (row, (a, b)) in jac.iter_mut().zip(ri.iter().zip(&r)) {
                row[i] = (a - b) / h;
            }
        }
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for (row, ri) in jac.iter().zip(&r) {
            for i in 0..n {
                jtr[i] -= row[i] * ri;
                for j in 0..n {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }
        loop {
            let mut a = jtj.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] += mu * (jtj[i][i] + 1e-12);
            }
            if let Some(d) = solve_dense(a, jtr.clone()) {
                let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
                if let Some(rn) = res(&xn) {
                    let cn = sum_sq(&rn);
                    if cn < cost {
                        x = xn;
                        r = rn;
                        cost = cn;
                        mu = (mu / 3.0).max(1e-12);
                        break;
                    }
                }
            }
            mu *= 4.0;
            if mu > 1e12 {
                return (x, cost);
            }
        }
    }
    (x, cost)
}

fn random_positions(shape: &Shape, zero: usize, center: f64, width: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = shape.k();
    let g = shape.block;
    let mut pos = vec![0.0; k];
    let step = |rng: &mut ChaCha8Rng| rng.gen_range(-1.5f64..1.5).exp();
    if g > zero {
        for i in (0..zero).rev() {
            pos[i] = pos[i + 1] - step(rng);
        }
        let mut mids: Vec<f64> = (zero + 1..g).map(|_| rng.gen_range(0.05..0.95) * (center - width)).collect();
        mids.sort_by(f64::total_cmp);
        for (i, v) in (zero + 1..g).zip(mids) {
            pos[i] = v;
        }
        let mut last = center + width;
        for p in pos.iter_mut().take(k).skip(g) {
            last += step(rng);
            *p = last;
        }
    } else {
        for i in zero + 1..k {
            pos[i] = pos[i - 1] + step(rng);
        }
        let mut mids: Vec<f64> = (g..zero).map(|_| rng.gen_range(0.05..0.95) * (center + width)).collect();
        mids.sort_by(|a, b| b.total_cmp(a));
        for (i, v) in (g..zero).rev().zip(mids) {
            pos[i] = v;
        }
        let mut last = center - width;
        for i in (0..g).rev() {
            last -= step(rng);
            pos[i] = last;
        }
    }
    pos
}

fn gap_of(pos: &[f64], x: f64) -> usize {
    pos.iter().filter(|&&p| x > p).count()
}

/// One randomized attempt at a floating-point realization.
fn float_trial(shape: &Shape, zero: usize, rng: &mut ChaCha8Rng) -> Option<FloatRealization> {
    let k = shape.k();
    let center = if shape.block > zero { 1.0 } else { -1.0 };
    let width = rng.gen_range(0.05..0.5);
    let pos = random_positions(shape, zero, center, width, rng);
    let mut parity = 0u32;
    let mut log_ratio = 0.0;
    for (i, &(l, m)) in shape.finite.iter().enumerate() {
        let d = center - pos[i];
        if d < 0.0 && m % 2 == 1 {
            parity += 1;
        }
        let v = f64::from(m) * d.abs().ln();
        log_ratio += if l == Letter::P { -v } else { v };
    }
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    let problem = Problem { shape, zero, center, sign };
    let mut theta: Vec<f64> = pos.iter().enumerate().filter(|&(i, _)| i != zero).map(|(_, &p)| p).collect();
    theta.push(log_ratio);
    let nodes: Vec<f64> =
        (0..k).map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / k as f64).cos()).collect();
    for step in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let scaled: Vec<f64> = nodes.iter().map(|v| v * width * step).collect();
        let (t, cost) = levenberg_marquardt(&|th| problem.residual(th, &scaled), theta, 200);
        if cost > 1e-20 {
            return None;
        }
        theta = t;
    }
    let pos = problem.positions(&theta);
    if pos.windows(2).any(|w| w[1] <= w[0]) {
        return None;
    }
    let lo = if shape.block > 0 { pos[shape.block - 1] } else { f64::NEG_INFINITY };
    let hi = if shape.block < k { pos[shape.block] } else { f64::INFINITY };
    if !(lo < center - width && center + width < hi) {
        return None;
    }
    let alpha = sign * theta[k - 1].exp();
    let p = float_product(shape, &pos, Letter::P, 0.0);
    let q = float_product(shape, &pos, Letter::Q, 0.0);
    let f = &p.scale(&alpha) - &q;
    let mut have = vec![0u32; k + 1];
    for z in complex_roots(&f) {
        if z.im.abs() < 1e-7 * (1.0 + z.re.abs()) {
            have[gap_of(&pos, z.re)] += 1;
        }
    }
    (have == shape.need).then_some(FloatRealization { positions: pos, alpha })
}

fn exact_product(shape: &Shape, pos: &[Rational], letter: Letter) -> RatPoly {
    let mut out = RatPoly::one();
    for (i, &(l, m)) in shape.finite.iter().enumerate() {
        if l == letter {
            out = &out * &RatPoly::linear(-pos[i].clone(), Rational::one()).pow(m).expect("nonzero factor");
        }
    }
    out
}

const DENOMINATORS: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

fn round_positions(fr: &FloatRealization, zero: usize, den: u64) -> Option<Vec<Rational>> {
    fr.positions
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == zero { Some(Rational::zero()) } else { best_rational(x, den) })
        .collect()
}

/// Rounds a number to a rational with a relative precision governed by `den`.
fn round_relative(x: f64, den: u64) -> Option<Rational> {
    let scale = x.abs().max(1e-300);
    let bound = (den as f64 / scale.min(1.0)).min(1e15) as u64;
    best_rational(x, bound.max(den))
}

fn exact_realization(target: &RootScheme, shape: &Shape, zero: usize, fr: &FloatRealization, seed: u64) -> Option<Realization> {
    for den in DENOMINATORS {
        let positions = round_positions(fr, zero, den)?;
        let alpha = round_relative(fr.alpha, den)?;
        if alpha.is_zero() {
            continue;
        }
        let p = exact_product(shape, &positions, Letter::P).scale(&alpha);
        let q = exact_product(shape, &positions, Letter::Q);
        if extract_scheme(&p, &q).ok().as_ref() == Some(target) {
            return Some(Realization { scheme: target.clone(), zero, positions, alpha, p, q, seed });
        }
    }
    None
}

fn zero_candidates(shape: &Shape) -> Vec<usize> {
    let mut c: Vec<usize> = (0..shape.k()).collect();
    c.sort_by_key(|&i| {
        let d = if i < shape.block { shape.block - 1 - i } else { i - shape.block };
        (d, i)
    });
    c
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Searches for exact rational P, Q whose scheme is `target`.
pub fn realize_scheme(target: &RootScheme, opts: &SearchOptions) -> Result<Realization> {
    let shape = Shape::of(target)?;
    let start = Instant::now();
    let zeros = zero_candidates(&shape);
    let mut trial = 0u64;
    while start.elapsed() < opts.budget {
        let mut rng = trial_rng(opts.seed, trial);
        for &z in &zeros {
            if let Some(fr) = float_trial(&shape, z, &mut rng) {
                if let Some(r) = exact_realization(target, &shape, z, &fr, opts.seed.wrapping_add(trial)) {
                    return Ok(r);
                }
            }
        }
        trial += 1;
    }
    Err(Error::BudgetExhausted(format!("no realization of {target} after {trial} trials")))
}

// ---------------------------------------------------------------------------
// Circuit assembly

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Positive,
    Real,
}

/// A constructed system together with the count it is claimed to attain.
#[derive(Clone, Debug)]
pub struct WitnessSystem {
    pub system: CircuitSystem,
    /// Circuit points as constructed, w_{-1} first.
    pub points: Vec<Vec<i64>>,
    /// (a_i, b_i) of x^{w_i} = a_i + b_i x^{w_0}, against `points`.
    pub gs: Vec<(Rational, Rational)>,
    pub claimed_count: u64,
    pub measured_count: u64,
    pub kind: WitnessKind,
    pub provenance: String,
    pub scheme: Option<RootScheme>,
    pub n: usize,
    pub m: usize,
    pub r: usize,
}

/// Placement of the scheme letters on a circuit.
#[derive(Clone, Debug)]
struct Plan {
    points: Vec<Vec<i64>>,
    /// slot i (equation of w_{i+1}) -> index among the nonzero finite letters
    slots: Vec<usize>,
    /// required sign of the leading coefficient of g, per slot
    fixed: Vec<Option<i8>>,
    /// free slot with odd exponent used to match the sign of the scale
    sign_fixer: Option<usize>,
    /// slot whose coefficient carries the scale
    carrier: usize,
    provenance: &'static str,
}

/// Letters of a realized scheme seen from the letter placed at 0.
#[derive(Clone, Debug)]
struct Letters {
    /// finite nonzero letters in scheme order, as indices into the finite list
    order: Vec<usize>,
    /// signed exponent: positive on the side of the zero letter
    kappa: Vec<i64>,
    kappa0: i64,
    zero_is_q: bool,
    /// sign of (r - rho) at the positive and at the negative roots of f, if constant
    plus: Vec<Option<i8>>,
    minus: Vec<Option<i8>>,
    admissible: Vec<bool>,
}

fn letters_of(target: &RootScheme, shape: &Shape, zero: usize) -> Letters {
    let zero_letter = shape.finite[zero].0;
    let order: Vec<usize> = (0..shape.k()).filter(|&i| i != zero).collect();
    let kappa = order
        .iter()
        .map(|&i| {
            let (l, m) = shape.finite[i];
            if l == zero_letter {
                i64::from(m)
            } else {
                -i64::from(m)
            }
        })
        .collect();
    // Position in the scheme of each finite letter and each r.
    let mut finite_at = Vec::new();
    let mut roots_at = Vec::new();
    for (idx, &(l, _)) in target.entries[..target.entries.len() - 1].iter().enumerate() {
        if l == Letter::R {
            roots_at.push(idx);
        } else {
            finite_at.push(idx);
        }
    }
    let zero_at = finite_at[zero];
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut admissible = Vec::new();
    for &i in &order {
        let at = finite_at[i];
        let mut sp = Vec::new();
        let mut sm = Vec::new();
        for &r in &roots_at {
            let s = if r > at { 1i8 } else { -1 };
            if r > zero_at {
                sp.push(s);
            } else {
                sm.push(s);
            }
        }
        let constant = |v: &[i8]| -> (bool, Option<i8>) {
            match v.first() {
                None => (true, None),
                Some(&s) => (v.iter().all(|&t| t == s), Some(s)),
            }
        };
        let (cp, p) = constant(&sp);
        let (cm, m) = constant(&sm);
        plus.push(p);
        minus.push(m);
        admissible.push(cp && cm);
    }
    Letters {
        order,
        kappa,
        kappa0: i64::from(shape.finite[zero].1),
        zero_is_q: zero_letter == Letter::Q,
        plus,
        minus,
        admissible,
    }
}

impl Letters {
    /// Sign of the leading coefficient making c_i(r) positive at every root.
    fn positive_sign(&self, i: usize) -> i8 {
        self.plus[i].or(self.minus[i]).unwrap_or(1)
    }

    /// Parity of l_i making c_i(r) positive at every root.
    fn parity(&self, i: usize) -> u8 {
        match (self.plus[i], self.minus[i]) {
            (Some(a), Some(b)) if a != b => 1,
            _ => 0,
        }
    }

    fn carrier(&self) -> usize {
        (0..self.kappa.len()).min_by_key(|&i| (self.kappa[i].abs(), i)).unwrap()
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// One integer solution of sum a_i y_i = b.
fn diophantine(a: &[i64], b: i64) -> Option<Vec<i64>> {
    let mut g = 0i128;
    let mut u = vec![0i128; a.len()];
    for i in 0..a.len() {
        let (h, x, y) = ext_gcd(g, i128::from(a[i]));
        for c in u[..i].iter_mut() {
            *c *= x;
        }
        u[i] = y;
        g = h;
    }
    if g == 0 {
        return (b == 0).then(|| vec![0; a.len()]);
    }
    if i128::from(b) % g != 0 {
        return None;
    }
    let t = i128::from(b) / g;
    u.iter().map(|c| i64::try_from(c * t).ok()).collect()
}

/// First coordinates l_i with kappa0 + sum kappa_i l_i = 0 and the given parities.
fn solve_first_coordinates(kappa: &[i64], kappa0: i64, parity: &[Option<u8>]) -> Option<Vec<i64>> {
    let a: Vec<i64> = kappa.iter().zip(parity).map(|(&k, p)| if p.is_some() { 2 * k } else { k }).collect();
    let b = -kappa0 - kappa.iter().zip(parity).map(|(&k, p)| k * i64::from(p.unwrap_or(0))).sum::<i64>();
    let y = diophantine(&a, b)?;
    Some(y.iter().zip(parity).map(|(&v, p)| p.map_or(v, |p| i64::from(p) + 2 * v)).collect())
}

fn to_i64_matrix(m: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_i64()).collect()).collect()
}

fn mod2_rank(vectors: &[Vec<u8>]) -> usize {
    let mut rows: Vec<Vec<u8>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i][c] == 1 {
                    let pr = rows[rank].clone();
                    rows[i].iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Inverse of a square matrix over Z/2 given by its rows.
fn mod2_inverse(m: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
    let n = m.len();
    let mut a: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| a[i][c] == 1)?;
        a.swap(c, p);
        for i in 0..n {
            if i != c && a[i][c] == 1 {
                let pr = a[c].clone();
                a[i].iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Circuit {0, e1, w_1..w_n} whose primitive relation is kappa0 e1 + sum kappa_i w_i = 0.
///
/// With `real = Some(E)` the column matrix B of the v_i has kernel mod 2
/// spanned by the e_i, i in E, so rk(B mod 2) = n - |E|.
fn lattice_points(kappa: &[i64], kappa0: i64, real: Option<&[usize]>, parity: &[Option<u8>]) -> Option<Vec<Vec<i64>>> {
    let n = kappa.len();
    let kernel = integer_kernel(&IntMatrix::from_i64(1, n, kappa));
    let k = kernel.transpose();
    let b = match real {
        None => k,
        Some(e) => {
            let dim = n - 1;
            let cols: Vec<Vec<u8>> =
                e.iter().map(|&i| (0..dim).map(|r| u8::from(k[(r, i)].is_odd_int())).collect()).collect();
            let mut basis: Vec<Vec<u8>> = Vec::new();
            for c in cols {
                let mut cand = basis.clone();
                cand.push(c.clone());
                if mod2_rank(&cand) > basis.len() {
                    basis.push(c);
                }
            }
            let free = basis.len();
            if free + 1 != e.len() {
                return None;
            }
            for i in 0..dim {
                let unit: Vec<u8> = (0..dim).map(|j| u8::from(i == j)).collect();
                let mut cand = basis.clone();
                cand.push(unit.clone());
                if mod2_rank(&cand) > basis.len() {
                    basis.push(unit);
                }
            }
            // basis vectors are the columns of M; S = M^{-1}.
            let m_rows: Vec<Vec<u8>> = (0..dim).map(|r| basis.iter().map(|v| v[r]).collect()).collect();
            let s = mod2_inverse(&m_rows)?;
            let mut ds = IntMatrix::zeros(dim, dim);
            for i in 0..dim {
                let scale = if i < free { 2 } else { 1 };
                for j in 0..dim {
                    ds[(i, j)] = Int::from(scale * i64::from(s[i][j]));
                }
            }
            ds.mul(&k)
        }
    };
    let l = solve_first_coordinates(kappa, kappa0, parity)?;
    let b = to_i64_matrix(&b)?;
    let mut points = vec![vec![0i64; n]];
    let mut e1 = vec![0i64; n];
    e1[0] = 1;
    points.push(e1);
    for i in 0..n {
        let mut w = vec![l[i]];
        w.extend(b.iter().map(|row| row[i]));
        points.push(w);
    }
    if let Some(e) = real {
        let bm = IntMatrix::from_rows(b.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect());
        let bm = if n == 1 { IntMatrix::zeros(0, 1) } else { bm };
        let ker = kernel_mod2(&bm);
        if ker.len() != e.len() {
            return None;
        }
        for &i in e {
            let unit: Vec<u8> = (0..n).map(|j| u8::from(i == j)).collect();
            if !ker.contains(&unit) {
                return None;
            }
        }
    }
    Some(points)
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for Int {
    fn is_odd_int(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

fn choose<T: Clone>(items: &[T], k: usize, limit: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out, limit);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out, limit);
    out
}

/// Lattice circuits for n + R + 1 real solutions: the sign conditions reduce
/// to c_i(r) > 0 for the letters of E other than one odd letter j.
fn lattice_real_plans(lt: &Letters, r: usize) -> Vec<Plan> {
    let n = lt.kappa.len();
    let size = n + 1 - r;
    let odd: Vec<usize> = (0..n).filter(|&i| lt.kappa[i] % 2 != 0).collect();
    let fillers: Vec<usize> = (0..n).filter(|&i| lt.kappa[i] % 2 == 0 && lt.admissible[i]).collect();
    let mut plans = Vec::new();
    for &j in &odd {
        if odd.iter().any(|&i| i != j && !lt.admissible[i]) || odd.len() > size {
            continue;
        }
        for extra in choose(&fillers, size - odd.len(), 16) {
            let mut e: Vec<usize> = odd.iter().copied().chain(extra).collect();
            e.sort_unstable();
            let parity: Vec<Option<u8>> =
                (0..n).map(|i| (e.contains(&i) && i != j).then(|| lt.parity(i))).collect();
            if let Some(points) = lattice_points(&lt.kappa, lt.kappa0, Some(&e), &parity) {
                let fixed = (0..n).map(|i| (e.contains(&i) && i != j).then(|| lt.positive_sign(i))).collect();
                plans.push(Plan {
                    points,
                    slots: (0..n).collect(),
                    fixed,
                    sign_fixer: Some(j),
                    carrier: lt.carrier(),
                    provenance: "lattice circuit",
                });
            }
            if plans.len() >= 8 {
                return plans;
            }
        }
    }
    plans
}

fn lattice_positive_plan(lt: &Letters) -> Option<Plan> {
    let n = lt.kappa.len();
    let points = lattice_points(&lt.kappa, lt.kappa0, None, &vec![None; n])?;
    Some(Plan {
        points,
        slots: (0..n).collect(),
        fixed: (0..n).map(|i| Some(lt.positive_sign(i))).collect(),
        sign_fixer: None,
        carrier: lt.carrier(),
        provenance: "lattice circuit",
    })
}

/// w_0 = e1, w_i = e_{i+1}, w_n = 2(e_1 + .. + e_k - e_{k+1} - .. - e_n) for n = 2k.
fn even_positive_plan(lt: &Letters, shape: &Shape) -> Option<Plan> {
    let n = lt.kappa.len();
    if n % 2 != 0 {
        return None;
    }
    let k = n / 2;
    let mut points = vec![vec![0i64; n]];
    for i in 0..n {
        let mut w = vec![0i64; n];
        w[i] = 1;
        points.push(w);
    }
    points.push((0..n).map(|c| if c < k { 2 } else { -2 }).collect());
    let ps: Vec<usize> = (0..n).filter(|&i| shape.finite[lt.order[i]].0 == Letter::P).collect();
    let qs: Vec<usize> = (0..n).filter(|&i| shape.finite[lt.order[i]].0 == Letter::Q).collect();
    if ps.len() != k - 1 || qs.len() != k + 1 || lt.zero_is_q {
        return None;
    }
    let slots: Vec<usize> = ps.iter().chain(&qs).copied().collect();
    Some(Plan {
        points,
        fixed: slots.iter().map(|&i| Some(lt.positive_sign(i))).collect(),
        sign_fixer: None,
        carrier: n - 1,
        slots,
        provenance: "explicit circuit, even n",
    })
}

/// The explicit circuit for n and R both even.
fn even_real_plan(lt: &Letters, shape: &Shape, r: usize) -> Option<Plan> {
    let n = lt.kappa.len();
    if n % 2 != 0 || r % 2 != 0 || r == 0 || lt.zero_is_q {
        return None;
    }
    let (h, hr) = (n / 2, (n - r) / 2);
    let letter = |i: usize| shape.finite[lt.order[i]];
    let by = |l: Letter, m: u32| -> Vec<usize> { (0..n).filter(|&i| letter(i) == (l, m)).collect() };
    let p2 = by(Letter::P, 2);
    let p4 = by(Letter::P, 4);
    let q3 = by(Letter::Q, 3);
    let q2 = by(Letter::Q, 2);
    let q4 = by(Letter::Q, 4);
    if p2.len() != hr || p4.len() != r / 2 - 1 || q3.len() != 1 || q2.len() != hr + 1 || q4.len() != r / 2 - 1 {
        return None;
    }
    // slot i (1-based) -> letter
    let mut slots = Vec::with_capacity(n);
    slots.extend(&p2);
    slots.extend(&p4);
    slots.push(q3[0]);
    slots.extend(&q2);
    slots.extend(&q4);
    let dim = n - 1;
    let mut v = vec![vec![0i64; dim]; n];
    for i in 1..=n {
        let col = &mut v[i - 1];
        if i <= hr {
            col[i - 1] = 2;
        } else if i < h {
            col[i - 1] = 1;
        } else if i == h {
            col.iter_mut().for_each(|x| *x = 2);
        } else if i <= n - r / 2 {
            col[i - 2] = -2;
        } else if i == n - r / 2 + 1 {
            col.iter_mut().for_each(|x| *x = -1);
            col[dim - 1] = -3;
        } else {
            col[i - 3] = -1;
        }
    }
    let kappa: Vec<i64> = slots.iter().map(|&i| lt.kappa[i]).collect();
    let l = solve_first_coordinates(&kappa, lt.kappa0, &vec![Some(0); n])?;
    let mut points = vec![vec![0i64; n]];
    let mut e1 = vec![0i64; n];
    e1[0] = 1;
    points.push(e1);
    for i in 0..n {
        let mut w = vec![l[i]];
        w.extend(&v[i]);
        points.push(w);
    }
    let positive: Vec<usize> = p2.iter().chain(&q3).chain(&q2[..hr]).copied().collect();
    let fixed = slots
        .iter()
        .map(|&i| (positive.contains(&i) && i != q3[0]).then(|| lt.positive_sign(i)))
        .collect();
    let carrier = (0..n).min_by_key(|&s| (kappa[s].abs(), s)).unwrap();
    Some(Plan {
        points,
        slots,
        fixed,
        sign_fixer: Some(h - 1),
        carrier,
        provenance: "explicit circuit, even n and R",
    })
}

struct Assembled {
    points: Vec<Vec<i64>>,
    gs: Vec<(Rational, Rational)>,
    system: CircuitSystem,
}

/// Builds the system of `plan` from exact positions and the float scale.
fn assemble(
    target: &RootScheme,
    shape: &Shape,
    lt: &Letters,
    plan: &Plan,
    positions: &[Rational],
    alpha: f64,
    den: u64,
) -> Option<Assembled> {
    let n = lt.kappa.len();
    // f is proportional to gamma * Z0 - O0 in terms of the zero side Z0.
    let gamma = if lt.zero_is_q { 1.0 / alpha } else { alpha };
    let kappa: Vec<i64> = plan.slots.iter().map(|&i| lt.kappa[i]).collect();
    let mut signs: Vec<i8> = plan.fixed.iter().map(|s| s.unwrap_or(1)).collect();
    let odd_negative = (0..n).filter(|&s| kappa[s] % 2 != 0 && signs[s] < 0).count();
    let want_negative = gamma < 0.0;
    if (odd_negative % 2 == 1) != want_negative {
        let j = plan.sign_fixer?;
        if plan.fixed[j].is_some() || kappa[j] % 2 == 0 {
            return None;
        }
        signs[j] = -signs[j];
    }
    let c = plan.carrier;
    let magnitude = gamma.abs().powf(1.0 / kappa[c] as f64);
    let mut coeffs: Vec<Rational> = signs.iter().map(|&s| Rational::from_integer(Int::from(s))).collect();
    let mag = round_relative(magnitude, den)?;
    if mag.is_zero() {
        return None;
    }
    coeffs[c] = &coeffs[c] * mag;
    let gs: Vec<(Rational, Rational)> = (0..n)
        .map(|s| {
            let rho = &positions[lt.order[plan.slots[s]]];
            (-(&coeffs[s] * rho), coeffs[s].clone())
        })
        .collect();
    // Check the scheme of the assembled P and Q.
    let mut zside = RatPoly::monomial(Rational::one(), lt.kappa0 as usize);
    let mut oside = RatPoly::one();
    for s in 0..n {
        let g = RatPoly::linear(gs[s].0.clone(), gs[s].1.clone()).pow(kappa[s].unsigned_abs() as u32).ok()?;
        if kappa[s] > 0 {
            zside = &zside * &g;
        } else {
            oside = &oside * &g;
        }
    }
    let expected = if lt.zero_is_q { target.swapped() } else { target.clone() };
    if extract_scheme(&zside, &oside).ok()? != expected {
        return None;
    }
    let _ = shape;
    let circuit = Circuit::validate(plan.points.clone()).ok()?;
    let system = CircuitSystem::from_reduced(&circuit, gs.clone()).ok()?;
    Some(Assembled { points: plan.points.clone(), gs, system })
}

fn measure(system: &CircuitSystem, kind: WitnessKind) -> Result<u64> {
    match kind {
        WitnessKind::Positive => positive_count(system),
        WitnessKind::Real => Ok(real_count(system)?.real),
    }
}

/// Realizes `target` with the letter `zero` at 0 and assembles a system on
/// one of the circuits produced by `plans`, until the count reaches `claim`.
#[allow(clippy::too_many_arguments)]
fn build_witness(
    target: &RootScheme,
    zero: usize,
    plans: &dyn Fn(&Letters, &Shape) -> Vec<Plan>,
    kind: WitnessKind,
    claim: u64,
    n: usize,
    r: usize,
    opts: &SearchOptions,
) -> Result<WitnessSystem> {
    let shape = Shape::of(target)?;
    let lt = letters_of(target, &shape, zero);
    if lt.kappa.len() != n {
        return Err(Error::Internal(format!("scheme {target} has the wrong number of letters")));
    }
    let candidates = plans(&lt, &shape);
    if candidates.is_empty() {
        return Err(Error::Internal(format!("no circuit fits scheme {target}")));
    }
    let start = Instant::now();
    let mut trial = 0u64;
    while start.elapsed() < opts.budget {
        let mut rng = trial_rng(opts.seed, trial);
        trial += 1;
        let Some(fr) = float_trial(&shape, zero, &mut rng) else { continue };
        for den in DENOMINATORS {
            let Some(positions) = round_positions(&fr, zero, den) else { continue };
            for plan in &candidates {
                let Some(a) = assemble(target, &shape, &lt, plan, &positions, fr.alpha, den) else { continue };
                if measure(&a.system, kind)? == claim {
                    let m = a.system.circuit().m();
                    let rank = a.system.rank_mod2();
                    return Ok(WitnessSystem {
                        system: a.system,
                        points: a.points,
                        gs: a.gs,
                        claimed_count: claim,
                        measured_count: claim,
                        kind,
                        provenance: plan.provenance.to_string(),
                        scheme: Some(target.clone()),
                        n,
                        m,
                        r: if kind == WitnessKind::Real { rank } else { r },
                    });
                }
            }
        }
    }
    Err(Error::BudgetExhausted(format!("no witness for scheme {target} after {trial} trials")))
}

/// Index among the finite letters of the letter placed at 0 for positive schemes.
fn positive_zero(n: usize) -> usize {
    // even: the last p before the final q; odd: the last q, before the final p.
    if n % 2 == 0 {
        n - 1
    } else {
        n - 1
    }
}

/// A system on a circuit in Z^n with exactly n + 1 positive solutions.
pub fn witness_positive(n: usize, opts: &SearchOptions) -> Result<WitnessSystem> {
    if n == 0 {
        return Err(Error::Domain("witness_positive needs n >= 1".into()));
    }
    let target = scheme_positive(n);
    let plans = |lt: &Letters, shape: &Shape| -> Vec<Plan> {
        let mut v = Vec::new();
        if let Some(p) = even_positive_plan(lt, shape) {
            v.push(p);
        }
        if let Some(p) = lattice_positive_plan(lt) {
            v.push(p);
        }
        v
    };
    let mut w = build_witness(&target, positive_zero(n), &plans, WitnessKind::Positive, n as u64 + 1, n, 0, opts)?;
    w.r = w.system.rank_mod2();
    Ok(w)
}

fn ij_zero(target: &RootScheme) -> usize {
    // The p right after (q,3),(r,1) of the leading block.
    let mut finite = 0;
    let mut seen_q3 = false;
    for &(l, m) in &target.entries {
        if l == Letter::R {
            continue;
        }
        if seen_q3 && l == Letter::P {
            return finite;
        }
        if (l, m) == (Letter::Q, 3) {
            seen_q3 = true;
        }
        finite += 1;
    }
    unreachable!("schemes from scheme_ij contain (q,3),(r,1),(p,2)")
}

/// Doubles every point: real solutions of the new system are the sign
/// choices over the positive solutions of the old one.
fn doubled(w: &WitnessSystem, claim: u64) -> Result<WitnessSystem> {
    let points: Vec<Vec<i64>> = w.points.iter().map(|p| p.iter().map(|v| 2 * v).collect()).collect();
    let circuit = Circuit::validate(points.clone())?;
    let system = CircuitSystem::from_reduced(&circuit, w.gs.clone())?;
    let measured = real_count(&system)?.real;
    Ok(WitnessSystem {
        m: system.circuit().m(),
        r: system.rank_mod2(),
        system,
        points,
        gs: w.gs.clone(),
        claimed_count: claim,
        measured_count: measured,
        kind: WitnessKind::Real,
        provenance: "doubled positive witness".to_string(),
        scheme: w.scheme.clone(),
        n: w.n,
    })
}

/// x^3 = 3x - 1, three real roots on the circuit {0, 1, 3}.
fn trinomial_witness() -> Result<WitnessSystem> {
    let points = vec![vec![0], vec![1], vec![3]];
    let gs = vec![(Rational::from_integer(Int::from(-1)), Rational::from_integer(Int::from(3)))];
    let circuit = Circuit::validate(points.clone())?;
    let system = CircuitSystem::from_reduced(&circuit, gs.clone())?;
    let measured = real_count(&system)?.real;
    Ok(WitnessSystem {
        m: system.circuit().m(),
        r: system.rank_mod2(),
        system,
        points,
        gs,
        claimed_count: 3,
        measured_count: measured,
        kind: WitnessKind::Real,
        provenance: "trinomial".to_string(),
        scheme: None,
        n: 1,
    })
}

/// A system on a non-degenerate circuit in Z^n with rk = R and exactly
/// 2^{n-R}(n+R+1) real solutions.
pub fn witness_real(n: usize, r: usize, opts: &SearchOptions) -> Result<WitnessSystem> {
    if n == 0 || r > n {
        return Err(Error::Domain(format!("witness_real needs 0 <= R <= n and n >= 1, got n={n}, R={r}")));
    }
    let claim = (1u64 << (n - r)) * (n + r + 1) as u64;
    if r == 0 {
        let w = doubled(&witness_positive(n, opts)?, claim)?;
        if w.measured_count != claim {
            return Err(Error::Internal(format!("doubled witness has {} real solutions", w.measured_count)));
        }
        return Ok(w);
    }
    if n == 1 {
        return trinomial_witness();
    }
    let target = scheme_ij(n, r);
    let plans = move |lt: &Letters, shape: &Shape| -> Vec<Plan> {
        let mut v = Vec::new();
        if let Some(p) = even_real_plan(lt, shape, r) {
            v.push(p);
        }
        v.extend(lattice_real_plans(lt, r));
        v
    };
    build_witness(&target, ij_zero(&target), &plans, WitnessKind::Real, claim, n, r, opts)
}

/// Smallest root of the eliminant, rounded down.
fn floor_of_smallest_root(sys: &CircuitSystem) -> Result<Option<Int>> {
    let e = eliminant::build(sys)?;
    let roots = RealRoots::new(&e.f)?;
    Ok(roots.roots.first().map(|r| r.lo.floor().to_integer()))
}

/// Embeds the m-dimensional witness into Z^n by padding.
///
/// Padded points are e_i (x_i = g_i(x_1), one choice) or 2e_i (x_i^2 = g_i(x_1),
/// two choices); every padded g_i is positive at the real roots of f.
pub fn witness_general(n: usize, m: usize, r: usize, positive: bool, opts: &SearchOptions) -> Result<WitnessSystem> {
    if m < 1 || m > n || r > n {
        return Err(Error::Domain(format!("witness_general needs 1 <= m <= n and 0 <= R <= n, got n={n}, m={m}, R={r}")));
    }
    let (kind, core, claim) = if positive {
        (WitnessKind::Positive, witness_positive(m, opts)?, m as u64 + 1)
    } else {
        (WitnessKind::Real, witness_real(m, r.min(m), opts)?, theorem_bounds(n, m, r)?.1)
    };
    if n == m {
        return Ok(core);
    }
    let ell = core.points[1][0];
    let mut points: Vec<Vec<i64>> = core
        .points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.resize(n, 0);
            q
        })
        .collect();
    let mut gs = core.gs.clone();
    let taken: Vec<Rational> = gs.iter().map(|(a, b)| -(a / b)).collect();
    let mut next = if ell % 2 == 1 {
        floor_of_smallest_root(&core.system)?.unwrap_or_else(Int::zero) - Int::one()
    } else {
        Int::one()
    };
    for i in m..n {
        let scale = if positive || i < r { 1 } else { 2 };
        let mut w = vec![0i64; n];
        w[i] = scale;
        points.push(w);
        // g = x^l - rho^l with rho below every root (l odd), or g = x^l + k (l even).
        loop {
            let v = Rational::from_integer(next.clone());
            let root_value = if ell % 2 == 1 { v.clone() } else { -v.clone() };
            let collide = taken.contains(&root_value) || gs.iter().any(|(a, b)| -(a / b) == root_value);
            if !collide {
                let a = if ell % 2 == 1 { -num_traits::Pow::pow(&v, ell as u32) } else { v };
                gs.push((a, Rational::one()));
                break;
            }
            if ell % 2 == 1 {
                next -= Int::one();
            } else {
                next += Int::one();
            }
        }
        if ell % 2 == 1 {
            next -= Int::one();
        } else {
            next += Int::one();
        }
    }
    let circuit = Circuit::validate(points.clone())?;
    let system = CircuitSystem::from_reduced(&circuit, gs.clone())?;
    let measured = measure(&system, kind)?;
    Ok(WitnessSystem {
        m: system.circuit().m(),
        r: system.rank_mod2(),
        system,
        points,
        gs,
        claimed_count: claim,
        measured_count: measured,
        kind,
        provenance: format!("padded {}", core.provenance),
        scheme: core.scheme,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use Letter::*;

    #[test]
    fn scheme_examples() {
        assert_eq!(scheme_positive(2).entries, vec![(Q, 2), (P, 2), (Q, 1), (R, 1), (R, 1), (R, 1), (P, 1)]);
        assert_eq!(scheme_positive(1).entries, vec![(Q, 2), (P, 1), (R, 1), (R, 1), (P, 1)]);
        assert_eq!(scheme_positive(4).to_string(), "q2 p2 q2 p2 q1 r1 r1 r1 r1 r1 p1");
        assert_eq!(scheme_ij(1, 1).entries, vec![(Q, 3), (R, 1), (P, 2), (R, 1), (R, 1), (P, 1)]);
        assert_eq!(scheme_ij(2, 2).to_string(), "q3 r1 p2 r1 r1 r1 q2 r1 p3");
        assert_eq!(scheme_ij(3, 1).to_string(), "q2 p2 q3 r1 p2 r1 r1 r1 r1 p1");
        assert_eq!(scheme_ij(3, 3).to_string(), "q3 r1 p2 r1 r1 r1 r1 p2 r1 q4 r1 p3");
        assert_eq!(scheme_ij(4, 3).to_string(), "p2 q3 r1 p2 r1 r1 r1 r1 r1 q2 r1 p4 r1 q3");
    }

    #[test]
    fn scheme_letter_counts() {
        for n in 1..=8 {
            assert_eq!(scheme_positive(n).total(R), n as u32 + 1);
            for r in 1..=n {
                let s = scheme_ij(n, r);
                assert_eq!(s.total(R) as usize, n + r + 1, "n={n} R={r}");
                assert_eq!(s.degree, n + r + 1);
                assert_eq!(s.entries.iter().filter(|e| e.0 != R).count(), n + 2);
            }
        }
    }

    #[test]
    fn extract_running_example() {
        let p = RatPoly::monomial(rat_int(1), 2);
        let q = &RatPoly::linear(rat_int(1), rat_int(1)).pow(2).unwrap() * &RatPoly::linear(rat(-2, 73), rat(20, 73));
        assert_eq!(extract_scheme(&p, &q).unwrap(), scheme_positive(2));
        let s = extract_scheme(&RatPoly::x(), &RatPoly::one()).unwrap();
        assert_eq!(s.entries, vec![(P, 1), (R, 1), (Q, 1)]);
        assert!(matches!(extract_scheme(&p, &p), Err(Error::ZeroEliminant)));
        let shared = &RatPoly::x() * &RatPoly::linear(rat_int(-1), rat_int(1));
        assert!(matches!(extract_scheme(&shared, &RatPoly::linear(rat_int(-1), rat_int(1))), Err(Error::SharedRoot)));
    }

    #[test]
    fn diophantine_solutions() {
        let y = diophantine(&[4, 6, 9], 1).unwrap();
        assert_eq!(4 * y[0] + 6 * y[1] + 9 * y[2], 1);
        assert!(diophantine(&[4, 6], 1).is_none());
        assert!(solve_first_coordinates(&[2, -3, 2], 2, &[Some(0), Some(1), None]).is_none());
        let l = solve_first_coordinates(&[2, -3, 2], 1, &[Some(0), Some(1), None]).unwrap();
        assert_eq!(1 + 2 * l[0] - 3 * l[1] + 2 * l[2], 0);
        assert_eq!(l[0] % 2, 0);
        assert_eq!(l[1].rem_euclid(2), 1);
    }

    #[test]
    fn lattice_points_have_the_relation_and_rank() {
        let kappa = [2, -2, -3, 2];
        let e = [0, 1, 2];
        let pts = lattice_points(&kappa, 2, Some(&e), &[Some(0), Some(0), None, None]).unwrap();
        let c = Circuit::validate(pts).unwrap();
        assert_eq!(c.rank_mod2(), 2);
        assert_eq!(c.m(), 4);
    }

    #[test]
    fn realize_small_schemes() {
        let opts = SearchOptions { budget: Duration::from_secs(30), seed: 0 };
        for s in [scheme_positive(1), scheme_positive(2), scheme_ij(1, 1), scheme_ij(2, 2)] {
            let r = realize_scheme(&s, &opts).unwrap();
            assert_eq!(extract_scheme(&r.p, &r.q).unwrap(), s);
        }
    }

    #[test]
    fn small_witnesses() {
        let opts = SearchOptions { budget: Duration::from_secs(30), seed: 0 };
        let w = witness_positive(2, &opts).unwrap();
        assert_eq!(w.measured_count, 3);
        assert_eq!(w.system.circuit().normalized_volume(), Int::from(3));
        let w = witness_real(2, 2, &opts).unwrap();
        assert_eq!(real_count(&w.system).unwrap().real, 5);
        assert_eq!(w.system.rank_mod2(), 2);
        let w = witness_real(2, 0, &opts).unwrap();
        assert_eq!(w.measured_count, 12);
    }

    #[test]
    fn general_witness_examples() {
        let opts = SearchOptions { budget: Duration::from_secs(30), seed: 0 };
        let w = witness_general(3, 1, 0, false, &opts).unwrap();
        assert_eq!((w.measured_count, w.m, w.r), (16, 1, 0));
        let w = witness_general(3, 2, 2, false, &opts).unwrap();
        assert_eq!((w.measured_count, w.m, w.r), (10, 2, 2));
        let w = witness_general(3, 2, 0, true, &opts).unwrap();
        assert_eq!((w.measured_count, w.m), (3, 2));
    }
}
