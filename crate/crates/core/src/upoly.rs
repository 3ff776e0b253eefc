//! Univariate polynomials over a generic scalar ring, with exact real-root
//! isolation for rational polynomials (Sturm chains on integer primitive
//! parts) and floating-point complex root finding for the numerical search.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{Field, Int, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial raised to the power 0")]
    ZeroToZeroPower,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type RatPoly = Poly<Rational>;
pub type IntPoly = Poly<Int>;
pub type FloatPoly = Poly<f64>;

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    /// `c * x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `c0 + c1 * x`
    pub fn linear(c0: T, c1: T) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Largest k with x^k dividing the polynomial (0 for the zero polynomial).
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Exact division by x^k; `None` if x^k does not divide.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.order_at_zero() < k {
            return None;
        }
        Some(Poly { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        if e == 0 {
            return if self.is_zero() { Err(PolyError::ZeroToZeroPower) } else { Ok(Poly::one()) };
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits the scalar"))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// p(x^k)
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly::new(coeffs)
    }

    /// The polynomial h with p(x) = h(x^k), if every exponent is a multiple of k.
    pub fn compress(&self, k: usize) -> Option<Self> {
        assert!(k >= 1);
        if self.coeffs.iter().enumerate().any(|(i, c)| i % k != 0 && !c.is_zero()) {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().step_by(k).cloned().collect()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division: `self = q * d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = d.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Quotient when `d` divides exactly, `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Scales to leading coefficient one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{}", a)?;
                } else {
                    write!(f, "({})", a)?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<T: Scalar> $trait<&Poly<T>> for &Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &Poly<T>) -> Poly<T> {
                $body(self, rhs)
            }
        }
        impl<T: Scalar> $trait<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                $body(&self, &rhs)
            }
        }
    };
}

fn add_impl<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| a.coeff(i) + b.coeff(i)).collect())
}

fn sub_impl<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| a.coeff(i) - b.coeff(i)).collect())
}

fn mul_impl<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![T::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    Poly::new(out)
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Integer primitive parts and gcds

fn int_content(p: &IntPoly) -> Int {
    p.coeffs.iter().fold(Int::zero(), |g, c| g.gcd(c))
}

/// Divides by the (positive) content; the sign of the polynomial is kept.
fn int_primitive(p: &IntPoly) -> IntPoly {
    let g = int_content(p);
    if g.is_zero() || g.is_one() {
        return p.clone();
    }
    Poly::new(p.coeffs.iter().map(|c| c / &g).collect())
}

/// A positive rational multiple of `p` with coprime integer coefficients.
pub fn primitive_int(p: &RatPoly) -> IntPoly {
    let l = p.coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
    int_primitive(&Poly::new(p.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()))
}

pub fn to_rat(p: &IntPoly) -> RatPoly {
    p.map(|c| Rational::from_integer(c.clone()))
}

/// Pseudo-remainder scaled by a positive factor, so the result is a positive
/// multiple of `a mod b`.
fn int_prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.leading().unwrap().clone();
    let mut r = a.clone();
    let mut steps = 0u32;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading().unwrap().clone();
        r = &r.scale(&lb) - &b.shift(dr - db).scale(&lr);
        steps += 1;
    }
    if lb.is_negative() && steps % 2 == 1 {
        r = -r;
    }
    r
}

fn int_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = (int_primitive(a), int_primitive(b));
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = int_primitive(&int_prem(&a, &b));
        a = b;
        b = r;
    }
    if a.leading().is_some_and(Signed::is_negative) {
        a = -a;
    }
    a
}

impl RatPoly {
    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() && other.is_zero() {
            return Poly::zero();
        }
        to_rat(&int_gcd(&primitive_int(self), &primitive_int(other))).monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> RatPoly {
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Yun decomposition: factors `a_1, a_2, ...` (monic, squarefree, pairwise
    /// coprime) with `self = c * prod a_i^i`. Trailing constant factors are kept
    /// so that index i always means multiplicity i + 1.
    pub fn squarefree_decomposition(&self) -> Vec<RatPoly> {
        let mut out = Vec::new();
        if self.degree().is_none_or(|d| d == 0) {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.exact_div(&a0).unwrap();
        let c = d.exact_div(&a0).unwrap();
        let mut dd = &c - &b.derivative();
        while b.degree().is_some_and(|k| k > 0) {
            let a = b.gcd(&dd);
            let nb = b.exact_div(&a).unwrap();
            let nc = dd.exact_div(&a).unwrap();
            dd = &nc - &nb.derivative();
            out.push(a.monic());
            b = nb;
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Exact sign at a rational point.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_i(&self.eval(x))
    }
}

fn sign_i<T: Signed>(v: &T) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of an integer polynomial at a rational point, by homogenized Horner
/// evaluation (no rational arithmetic).
fn int_sign_at(p: &IntPoly, x: &Rational) -> i8 {
    let Some(_) = p.degree() else { return 0 };
    let (a, b) = (x.numer(), x.denom());
    let mut acc = p.leading().unwrap().clone();
    let mut bp = Int::one();
    for c in p.coeffs.iter().rev().skip(1) {
        bp *= b;
        acc = acc * a + c * &bp;
    }
    sign_i(&acc)
}

// ---------------------------------------------------------------------------
// Sturm chains and isolation

/// Sturm chain of a nonzero integer polynomial, built from primitive
/// pseudo-remainders.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let mut polys = vec![int_primitive(p)];
        let d = int_primitive(&p.derivative());
        if !d.is_zero() {
            polys.push(d);
        }
        while polys.len() >= 2 {
            let k = polys.len();
            let r = int_prem(&polys[k - 2], &polys[k - 1]);
            if r.is_zero() {
                break;
            }
            polys.push(-int_primitive(&r));
        }
        SturmChain { polys }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.polys.iter().map(|p| int_sign_at(p, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.polys.iter().map(|p| {
            let s = sign_i(p.leading().unwrap());
            if positive || p.degree().unwrap() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Distinct real roots in the half-open interval (lo, hi].
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// A real root of a polynomial: either an exact rational point, or an open
/// interval whose endpoints are not roots and which contains exactly one
/// distinct root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// Sign of the root itself. Isolating intervals never contain 0 unless
    /// 0 is the (exact) root.
    pub fn sign(&self) -> i8 {
        if self.lo.is_positive() {
            1
        } else if self.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn approx(&self) -> f64 {
        crate::scalar::to_f64(&self.midpoint())
    }
}

/// Cached isolation data for one polynomial.
#[derive(Clone, Debug)]
pub struct RealRoots {
    sqf: IntPoly,
    pub roots: Vec<IsolatedRoot>,
}

const RATIONAL_ROOT_LC_LIMIT: u64 = 1_000_000_000_000;

impl RealRoots {
    pub fn new(p: &RatPoly) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let sqf = primitive_int(&p.squarefree_part());
        let mut roots = Vec::new();
        if sqf.degree().unwrap() > 0 {
            let chain = SturmChain::new(&sqf);
            let bound = cauchy_bound(&sqf);
            let mut intervals = Vec::new();
            let zero_root = int_sign_at(&sqf, &Rational::zero()) == 0;
            if zero_root {
                intervals.push((Rational::zero(), Rational::zero()));
            }
            // Every nonzero root r satisfies beta < |r| < bound.
            let beta = inner_bound(&sqf);
            let mut stack = vec![(-bound.clone(), -beta.clone()), (beta, bound)];
            while let Some((a, b)) = stack.pop() {
                let k = chain.count(&a, &b);
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    intervals.push((a, b));
                    continue;
                }
                let mid = split_point(&sqf, &a, &b);
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
            intervals.sort_by(|x, y| x.0.cmp(&y.0));
            roots = intervals.into_iter().map(|(lo, hi)| IsolatedRoot { lo, hi, multiplicity: 1 }).collect();
        }
        let mut rr = RealRoots { sqf, roots };
        rr.detect_rational_roots();
        rr.assign_multiplicities(p);
        Ok(rr)
    }

    fn detect_rational_roots(&mut self) {
        let Some(lc) = self.sqf.leading().and_then(|l| l.abs().to_u64()) else { return };
        if lc > RATIONAL_ROOT_LC_LIMIT || self.roots.is_empty() {
            return;
        }
        let divisors = divisors(lc);
        let width = Rational::new(Int::one(), Int::from(lc) * Int::from(2));
        for i in 0..self.roots.len() {
            self.refine_index(i, &width);
            if self.roots[i].is_exact() {
                continue;
            }
            let r = &self.roots[i];
            for &q in &divisors {
                let qr = Rational::from_integer(Int::from(q));
                let p = (&r.lo * &qr).floor() + Rational::one();
                let cand = p / qr;
                if cand < r.hi && int_sign_at(&self.sqf, &cand) == 0 {
                    self.roots[i].lo = cand.clone();
                    self.roots[i].hi = cand;
                    break;
                }
            }
        }
    }

    fn assign_multiplicities(&mut self, p: &RatPoly) {
        let factors: Vec<IntPoly> = p.squarefree_decomposition().iter().map(primitive_int).collect();
        for r in &mut self.roots {
            r.multiplicity = factors
                .iter()
                .position(|f| {
                    f.degree().is_some_and(|d| d > 0)
                        && if r.is_exact() {
                            int_sign_at(f, &r.lo) == 0
                        } else {
                            int_sign_at(f, &r.lo) != int_sign_at(f, &r.hi)
                        }
                })
                .map_or(1, |k| k + 1);
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Bisects root `i` until its width is at most `width`.
    pub fn refine_index(&mut self, i: usize, width: &Rational) {
        let two = Rational::from_integer(Int::from(2));
        let r = &mut self.roots[i];
        if r.is_exact() {
            return;
        }
        let s_lo = int_sign_at(&self.sqf, &r.lo);
        while &(&r.hi - &r.lo) > width {
            let mid = (&r.lo + &r.hi) / &two;
            match int_sign_at(&self.sqf, &mid) {
                0 => {
                    r.lo = mid.clone();
                    r.hi = mid;
                    return;
                }
                s if s == s_lo => r.lo = mid,
                _ => r.hi = mid,
            }
        }
    }

    /// Halves root `i` once (no-op on exact roots).
    fn bisect_once(&mut self, i: usize) {
        let w = self.roots[i].width() / Rational::from_integer(Int::from(2));
        self.refine_index(i, &w);
    }

    /// Sign of `g` at root `i`; 0 exactly when `g` vanishes there.
    pub fn sign_of(&mut self, i: usize, g: &RatPoly) -> i8 {
        if g.is_zero() {
            return 0;
        }
        if self.roots[i].is_exact() {
            return g.sign_at(&self.roots[i].lo);
        }
        let d = g.gcd(&to_rat(&self.sqf));
        if d.degree().is_some_and(|k| k > 0) {
            let di = primitive_int(&d.squarefree_part());
            let r = &self.roots[i];
            if int_sign_at(&di, &r.lo) != int_sign_at(&di, &r.hi) {
                return 0;
            }
        }
        let gi = primitive_int(&g.squarefree_part());
        if gi.degree() == Some(0) {
            return g.sign_at(&self.roots[i].lo);
        }
        let chain = SturmChain::new(&gi);
        loop {
            let r = &self.roots[i];
            if r.is_exact() {
                return g.sign_at(&r.lo);
            }
            if int_sign_at(&gi, &r.lo) != 0 && chain.count(&r.lo, &r.hi) == 0 {
                return g.sign_at(&r.lo);
            }
            self.bisect_once(i);
        }
    }
}

fn cauchy_bound(p: &IntPoly) -> Rational {
    let lc = p.leading().unwrap().abs();
    let max = p.coeffs[..p.coeffs.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_else(Int::zero);
    Rational::one() + Rational::new(max, lc)
}

/// Strict lower bound on the absolute value of the nonzero roots.
fn inner_bound(p: &IntPoly) -> Rational {
    let k = p.order_at_zero();
    let rev: Vec<Int> = p.coeffs[k..].iter().rev().cloned().collect();
    Rational::one() / cauchy_bound(&Poly::new(rev))
}

/// A point strictly inside (a, b) that is not a root of `p`, near the midpoint.
fn split_point(p: &IntPoly, a: &Rational, b: &Rational) -> Rational {
    let half = Rational::new(Int::one(), Int::from(2));
    let w = b - a;
    let mut offset = Rational::zero();
    let mut k = 2u32;
    loop {
        for t in [&half + &offset, &half - &offset] {
            let m = a + &w * &t;
            if int_sign_at(p, &m) != 0 {
                return m;
            }
        }
        offset = Rational::new(Int::one(), Int::from(2).pow(k));
        k += 1;
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// One entry per distinct real root, sorted increasingly.
pub fn isolate_real_roots(p: &RatPoly) -> Result<Vec<IsolatedRoot>, PolyError> {
    Ok(RealRoots::new(p)?.roots)
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &RatPoly) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let sqf = primitive_int(&p.squarefree_part());
    Ok(if sqf.degree() == Some(0) { 0 } else { SturmChain::new(&sqf).count_all() })
}

/// Shrinks an isolating interval of a root of `p` to at most `width`.
pub fn refine(root: &IsolatedRoot, p: &RatPoly, width: &Rational) -> IsolatedRoot {
    let mut rr = RealRoots { sqf: primitive_int(&p.squarefree_part()), roots: vec![root.clone()] };
    rr.refine_index(0, width);
    rr.roots.pop().unwrap()
}

/// Sign of `g` at an isolated root of `f`.
pub fn sign_at_root(g: &RatPoly, root: &IsolatedRoot, f: &RatPoly) -> i8 {
    let mut rr = RealRoots { sqf: primitive_int(&f.squarefree_part()), roots: vec![root.clone()] };
    rr.sign_of(0, g)
}

// ---------------------------------------------------------------------------
// Floating-point roots for the numerical search

/// All complex roots by Aberth–Ehrlich iteration.
pub fn complex_roots(p: &FloatPoly) -> Vec<Complex64> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let lead = *p.leading().unwrap();
    let c: Vec<f64> = p.coeffs.iter().map(|a| a / lead).collect();
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius.min(1e6) * 0.5 + 0.1, th)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(1.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c[..n].iter().rev() {
            d = d * x + v;
            v = v * x + *a;
        }
        (v, d)
    };
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
