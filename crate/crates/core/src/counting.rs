//! Exact counting of positive and real solutions through the eliminant and
//! sign conditions, binomial (simplex) system solving, and direct numerical
//! enumeration of the real solutions.

use num_traits::{Signed, Zero};

use crate::eliminant::{self, Eliminant};
use crate::error::{Error, Result};
use crate::galesystem::CircuitSystem;
use crate::lattice::{kernel_mod2, rank_mod2, smith_normal_form, IntMatrix, Mod2Basis};
use crate::scalar::{ln_abs, sign_of, Int, Rational};
use crate::upoly::RealRoots;

/// Sign conditions prod_{i in S} c_i(r) > 0, one per vector of the reduced
/// echelon basis of ker(B mod 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignConditionSet {
    pub kernel_basis: Mod2Basis,
    /// Index sets (0-based) of the conditions.
    pub conditions: Vec<Vec<usize>>,
    pub leading: Vec<usize>,
    pub complement: Vec<usize>,
    /// lambda modulo 2; it lies in the kernel and its condition holds at
    /// every root of f, so it is implied by the others plus f(r) = 0.
    pub lambda_bar: Vec<u8>,
}

pub fn sign_conditions(sys: &CircuitSystem) -> SignConditionSet {
    let basis = kernel_mod2(sys.b_matrix());
    let conditions = basis
        .vectors
        .iter()
        .map(|v| (0..v.len()).filter(|&i| v[i] == 1).collect())
        .collect();
    let leading = basis.leading_indices();
    let complement = (0..sys.n()).filter(|i| !leading.contains(i)).collect();
    let k = sys.relation().signed(sys.n());
    let lambda_bar = k.iter().map(|v| (v.rem_euclid(2)) as u8).collect();
    SignConditionSet { kernel_basis: basis, conditions, leading, complement, lambda_bar }
}

/// Data attached to one real root r of f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
    pub sign: i8,
    /// sign of g_i(r)
    pub g_signs: Vec<i8>,
    /// sign of c_i(r) = g_i(r) / r^{l_i}
    pub c_signs: Vec<i8>,
    pub positive: bool,
    pub real: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub positive: u64,
    pub real: u64,
    pub multiplier: u64,
    pub qualifying_roots: u64,
    pub complex: Int,
    /// Set when f has a multiple root that carries solutions, or some g_i
    /// vanishes at a root of f.
    pub non_generic: bool,
    pub warnings: Vec<String>,
    pub roots: Vec<RootReport>,
}

struct Analysis {
    reports: Vec<RootReport>,
    non_generic: bool,
    warnings: Vec<String>,
}

fn analyze(sys: &CircuitSystem, elim: &Eliminant, conds: &SignConditionSet) -> Result<Analysis> {
    let n = sys.n();
    let mut roots = RealRoots::new(&elim.f)?;
    let gs: Vec<_> = (0..n).map(|i| sys.g(i)).collect();
    let mut reports = Vec::with_capacity(roots.len());
    let mut non_generic = false;
    let mut warnings = Vec::new();
    for idx in 0..roots.len() {
        let sign = roots.roots[idx].sign();
        let g_signs: Vec<i8> = gs.iter().map(|g| roots.sign_of(idx, g)).collect();
        let c_signs: Vec<i8> = g_signs
            .iter()
            .zip(sys.l())
            .map(|(&s, &l)| if sign < 0 && l.rem_euclid(2) == 1 { -s } else { s })
            .collect();
        let torus = sign != 0 && g_signs.iter().all(|&s| s != 0);
        if sign != 0 && !torus {
            non_generic = true;
            warnings.push(format!("some g_i vanishes at root {}", idx));
        }
        let positive = torus && sign > 0 && g_signs.iter().all(|&s| s > 0);
        let first_odd = sys.relation().lambdas.first().is_some_and(|l| l % 2 == 1);
        if first_odd && torus && sign > 0 && g_signs[1..].iter().all(|&s| s > 0) {
            debug_assert!(g_signs[0] > 0, "positivity of g_1 follows from the others at a positive root");
        }
        let real = torus
            && conds
                .conditions
                .iter()
                .all(|set| set.iter().filter(|&&i| c_signs[i] < 0).count() % 2 == 0);
        if real {
            let lam: usize = (0..n).filter(|&i| conds.lambda_bar[i] == 1 && c_signs[i] < 0).count();
            debug_assert!(lam % 2 == 0, "the lambda condition holds at roots of f");
        }
        let r = &roots.roots[idx];
        if (positive || real) && r.multiplicity > 1 {
            non_generic = true;
            warnings.push(format!("root {} of f has multiplicity {}", idx, r.multiplicity));
        }
        reports.push(RootReport {
            lo: r.lo.clone(),
            hi: r.hi.clone(),
            multiplicity: r.multiplicity,
            sign,
            g_signs,
            c_signs,
            positive,
            real,
        });
    }
    Ok(Analysis { reports, non_generic, warnings })
}

/// Number of solutions with all coordinates positive.
pub fn positive_count(sys: &CircuitSystem) -> Result<u64> {
    let elim = eliminant::build(sys)?;
    let a = analyze(sys, &elim, &sign_conditions(sys))?;
    Ok(a.reports.iter().filter(|r| r.positive).count() as u64)
}

/// Counts of positive and real solutions.
pub fn real_count(sys: &CircuitSystem) -> Result<SolutionCount> {
    let n = sys.n();
    let complex = sys.circuit().normalized_volume();
    let elim = eliminant::build(sys)?;
    let conds = sign_conditions(sys);
    let a = analyze(sys, &elim, &conds)?;
    let positive = a.reports.iter().filter(|r| r.positive).count() as u64;
    if sys.rank_mod2() == 0 {
        let half = sys.halved().ok_or(Error::NotNormalized)?;
        let helim = eliminant::build(&half)?;
        let ha = analyze(&half, &helim, &sign_conditions(&half))?;
        let q = ha.reports.iter().filter(|r| r.positive).count() as u64;
        let multiplier = 1u64 << n;
        let mut warnings = a.warnings;
        warnings.extend(ha.warnings);
        return Ok(SolutionCount {
            positive,
            real: multiplier * q,
            multiplier,
            qualifying_roots: q,
            complex,
            non_generic: a.non_generic || ha.non_generic,
            warnings,
            roots: ha.reports,
        });
    }
    if sys.ell() % 2 == 0 {
        return Err(Error::NotNormalized);
    }
    let q = a.reports.iter().filter(|r| r.real).count() as u64;
    let multiplier = 1u64 << (n - 1 - rank_mod2(sys.b_matrix()));
    Ok(SolutionCount {
        positive,
        real: multiplier * q,
        multiplier,
        qualifying_roots: q,
        complex,
        non_generic: a.non_generic,
        warnings: a.warnings,
        roots: a.reports,
    })
}

/// A nonzero real number as (sign, ln|x|).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignLog {
    pub sign: i8,
    pub log: f64,
}

impl SignLog {
    pub fn of(q: &Rational) -> SignLog {
        SignLog { sign: sign_of(q), log: ln_abs(q) }
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log.exp()
    }
}

/// Real solutions of x^{u_i} = c_i (u_i the columns of `u`), in sign/log form.
pub fn simplex_solutions(u: &IntMatrix, c: &[SignLog]) -> Vec<Vec<SignLog>> {
    let n = u.cols();
    assert_eq!(u.rows(), n, "simplex systems are square");
    assert_eq!(c.len(), n);
    if n == 0 {
        return vec![Vec::new()];
    }
    let snf = smith_normal_form(u);
    let to_i = |v: &Int| -> i64 { num_traits::ToPrimitive::to_i64(v).expect("transform entries fit in i64") };
    let mut options: Vec<Vec<SignLog>> = Vec::with_capacity(n);
    for i in 0..n {
        let a = to_i(&snf.d[(i, i)]);
        assert!(a > 0, "exponent matrix must be nonsingular");
        let mut sign = 1i8;
        let mut log = 0.0;
        for (j, cj) in c.iter().enumerate() {
            let e = to_i(&snf.right[(j, i)]);
            if e.rem_euclid(2) == 1 {
                sign *= cj.sign;
            }
            log += e as f64 * cj.log;
        }
        let root = log / a as f64;
        if a % 2 == 0 {
            if sign < 0 {
                return Vec::new();
            }
            options.push(vec![SignLog { sign: 1, log: root }, SignLog { sign: -1, log: root }]);
        } else {
            options.push(vec![SignLog { sign, log: root }]);
        }
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    loop {
        let yt: Vec<SignLog> = (0..n).map(|i| options[i][pick[i]]).collect();
        let x: Vec<SignLog> = (0..n)
            .map(|j| {
                let mut s = 1i8;
                let mut l = 0.0;
                for (k, y) in yt.iter().enumerate() {
                    let e = to_i(&snf.left[(k, j)]);
                    if e.rem_euclid(2) == 1 {
                        s *= y.sign;
                    }
                    l += e as f64 * y.log;
                }
                SignLog { sign: s, log: l }
            })
            .collect();
        out.push(x);
        let mut i = 0;
        while i < n {
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// All real solutions of the binomial system x^{u_i} = c_i. The count is 0
/// or 2^{n - rank(u mod 2)}; values come from closed-form real roots.
pub fn solve_simplex(u: &IntMatrix, c: &[Rational]) -> Vec<Vec<f64>> {
    assert!(c.iter().all(|x| !x.is_zero()), "right-hand sides must be nonzero");
    let c: Vec<SignLog> = c.iter().map(SignLog::of).collect();
    simplex_solutions(u, &c).iter().map(|x| x.iter().map(SignLog::value).collect()).collect()
}

/// A numerically enumerated real solution, in the coordinates of the
/// original (unnormalized) circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSolution {
    pub coords: Vec<f64>,
    pub signs: Vec<i8>,
    pub log_abs: Vec<f64>,
    /// index of the root of f (of the halved system's f when the circuit
    /// lies in 2Z^n) carrying this solution
    pub root: usize,
    /// largest relative residual over the original equations
    pub residual: f64,
}

fn refine_relative(roots: &mut RealRoots, idx: usize, rel: f64) -> Rational {
    let r = &roots.roots[idx];
    if r.is_exact() {
        return r.lo.clone();
    }
    let scale = r.lo.abs().min(r.hi.abs());
    let tol = scale * Rational::from_float(rel).expect("finite tolerance");
    roots.refine_index(idx, &tol);
    roots.roots[idx].midpoint()
}

/// max_i |d ln g_i / d ln x| at r.
fn worst_condition(sys: &CircuitSystem, r: &Rational) -> f64 {
    let ell = sys.ell();
    let log_r = ln_abs(r);
    sys.gs()
        .iter()
        .map(|(a, b)| {
            let g = a + b * num_traits::Pow::pow(r, ell as u32);
            if g.is_zero() {
                return f64::INFINITY;
            }
            ((ell as f64).ln() + ln_abs(b) + ell as f64 * log_r - ln_abs(&g)).exp()
        })
        .fold(0.0, f64::max)
}

/// Solutions in normalized coordinates lying over each root of f; only
/// positive ones when `positive_only`.
fn lift(sys: &CircuitSystem, eps: f64, positive_only: bool) -> Result<Vec<(usize, Vec<SignLog>)>> {
    let n = sys.n();
    let elim = eliminant::build(sys)?;
    let mut roots = RealRoots::new(&elim.f)?;
    let j = sys.relation().first_odd();
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let u = {
        let cols: Vec<Vec<Int>> = others.iter().map(|&i| sys.v()[i].iter().map(|&x| Int::from(x)).collect()).collect();
        IntMatrix::from_columns(n - 1, &cols)
    };
    let gs: Vec<_> = (0..n).map(|i| sys.g(i)).collect();
    let mut out = Vec::new();
    for idx in 0..roots.len() {
        let sign = roots.roots[idx].sign();
        if sign == 0 || (positive_only && sign < 0) {
            continue;
        }
        let g_signs: Vec<i8> = gs.iter().map(|g| roots.sign_of(idx, g)).collect();
        if g_signs.iter().any(|&s| s == 0) {
            continue;
        }
        // Near a root of some g_i, ln|g_i(r)| is ill-conditioned in r; tighten
        // the relative width by the worst condition number.
        let mut r = refine_relative(&mut roots, idx, eps.min(1e-20));
        for _ in 0..3 {
            let cond = worst_condition(sys, &r);
            if cond <= 1.0 {
                break;
            }
            let rel = (eps.min(1e-20) / (cond * 1e3)).max(1e-290);
            r = refine_relative(&mut roots, idx, rel);
        }
        let log_r = ln_abs(&r);
        let c: Vec<SignLog> = others
            .iter()
            .map(|&i| {
                let l = sys.l()[i];
                let s = if sign < 0 && l.rem_euclid(2) == 1 { -g_signs[i] } else { g_signs[i] };
                SignLog { sign: s, log: ln_abs(&gs[i].eval(&r)) - l as f64 * log_r }
            })
            .collect();
        for y in simplex_solutions(&u, &c) {
            if positive_only && y.iter().any(|s| s.sign < 0) {
                continue;
            }
            let mut x = vec![SignLog { sign, log: log_r }];
            x.extend(y);
            out.push((idx, x));
        }
    }
    Ok(out)
}

/// Maps normalized coordinates y to original coordinates x_j = prod_i y_i^{U_ij}.
fn to_original(sys: &CircuitSystem, y: &[SignLog]) -> Vec<SignLog> {
    let Some(z) = sys.circuit().normalization() else { return y.to_vec() };
    let u = &z.basis_change;
    (0..y.len())
        .map(|j| {
            let mut s = 1i8;
            let mut l = 0.0;
            for (i, yi) in y.iter().enumerate() {
                let e = num_traits::ToPrimitive::to_i64(&u[(i, j)]).expect("basis change fits in i64");
                if e.rem_euclid(2) == 1 {
                    s *= yi.sign;
                }
                l += e as f64 * yi.log;
            }
            SignLog { sign: s, log: l }
        })
        .collect()
}

/// Largest relative residual |sum_k M_ik x^{p_k}| / sum_k |M_ik x^{p_k}| over
/// the original equations.
pub fn relative_residual(sys: &CircuitSystem, x: &[SignLog]) -> f64 {
    let pts = sys.original().points();
    let mut worst = 0.0f64;
    for row in sys.equations() {
        let terms: Vec<(f64, f64)> = row
            .iter()
            .zip(pts)
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, p)| {
                let mut s = f64::from(sign_of(m));
                let mut l = ln_abs(m);
                for (xj, &e) in x.iter().zip(p) {
                    if e.rem_euclid(2) == 1 {
                        s *= f64::from(xj.sign);
                    }
                    l += e as f64 * xj.log;
                }
                (s, l)
            })
            .collect();
        let lmax = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let num: f64 = terms.iter().map(|(s, l)| s * (l - lmax).exp()).sum();
        let den: f64 = terms.iter().map(|(_, l)| (l - lmax).exp()).sum();
        worst = worst.max(num.abs() / den);
    }
    worst
}

fn finish(sys: &CircuitSystem, root: usize, y: &[SignLog]) -> RealSolution {
    let x = to_original(sys, y);
    RealSolution {
        coords: x.iter().map(SignLog::value).collect(),
        signs: x.iter().map(|s| s.sign).collect(),
        log_abs: x.iter().map(|s| s.log).collect(),
        root,
        residual: relative_residual(sys, &x),
    }
}

/// Every real solution, by solving the binomial system over each real root
/// of the eliminant. Independent of the sign-condition count.
pub fn enumerate_real_solutions(sys: &CircuitSystem, eps: f64) -> Result<Vec<RealSolution>> {
    let n = sys.n();
    if sys.rank_mod2() == 0 {
        let half = sys.halved().ok_or(Error::NotNormalized)?;
        let mut out = Vec::new();
        for (root, y) in lift(&half, eps, true)? {
            for mask in 0..(1u32 << n) {
                let x: Vec<SignLog> = y
                    .iter()
                    .enumerate()
                    .map(|(i, s)| SignLog { sign: if mask >> i & 1 == 1 { -1 } else { 1 }, log: s.log / 2.0 })
                    .collect();
                out.push(finish(sys, root, &x));
            }
        }
        return Ok(out);
    }
    if sys.ell() % 2 == 0 {
        return Err(Error::NotNormalized);
    }
    Ok(lift(sys, eps, false)?.iter().map(|(root, y)| finish(sys, *root, y)).collect())
}
