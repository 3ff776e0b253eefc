//! Polynomial systems supported on a circuit, in the reduced form
//! x^{w_i} = g_i(x_1) = a_i + b_i x_1^l, i = 1..n, on a normalized circuit.

use num_traits::{One, Zero};

use crate::circuit::{AffineRelation, Circuit};
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::scalar::{Int, Rational};
use crate::upoly::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitSystem {
    circuit: Circuit,
    relation: AffineRelation,
    gs: Vec<(Rational, Rational)>,
    l: Vec<i64>,
    v: Vec<Vec<i64>>,
    b: IntMatrix,
    original: Circuit,
    equations: Vec<Vec<Rational>>,
}

impl CircuitSystem {
    /// Builds the system x^{w_i} = a_i + b_i x^{w_0} (monomials taken relative
    /// to w_{-1}) from the points of `circuit` in their given order.
    ///
    /// When `circuit` is not normalized it is normalized first and the
    /// equations are re-solved for the new ordering.
    pub fn from_reduced(circuit: &Circuit, gs: Vec<(Rational, Rational)>) -> Result<CircuitSystem> {
        let n = circuit.n();
        if gs.len() != n {
            return Err(Error::WrongEquationCount { expected: n, got: gs.len() });
        }
        for (i, (a, b)) in gs.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::ZeroCoefficient { index: i + 1, which: "a" });
            }
            if b.is_zero() {
                return Err(Error::ZeroCoefficient { index: i + 1, which: "b" });
            }
        }
        let rows: Vec<Vec<Rational>> = gs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let mut row = vec![Rational::zero(); n + 2];
                row[0] = -a.clone();
                row[1] = -b.clone();
                row[i + 2] = Rational::one();
                row
            })
            .collect();
        CircuitSystem::from_general(circuit, rows)
    }

    /// Builds the system from `n` equations `sum_k M[i][k] x^{p_k} = 0` on the
    /// points of `circuit`, by Gaussian elimination on the columns of w_1..w_n.
    pub fn from_general(circuit: &Circuit, equations: Vec<Vec<Rational>>) -> Result<CircuitSystem> {
        let n = circuit.n();
        if equations.len() != n {
            return Err(Error::WrongEquationCount { expected: n, got: equations.len() });
        }
        if equations.iter().any(|r| r.len() != n + 2) {
            return Err(Error::Domain(format!("each equation needs {} coefficients", n + 2)));
        }
        let (normal, original) = if circuit.is_normalized() {
            (circuit.clone(), circuit.clone())
        } else {
            (circuit.normalize(), circuit.clone())
        };
        let order = normal.normalization().expect("normalized").order.clone();
        let mut m: Vec<Vec<Rational>> =
            equations.iter().map(|row| order.iter().map(|&k| row[k].clone()).collect()).collect();

        // Reduce the block on columns 2..n+2 to the identity.
        for col in 0..n {
            let c = col + 2;
            let pivot = (col..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::SingularPivot)?;
            m.swap(col, pivot);
            let inv = Rational::one() / &m[col][c];
            m[col].iter_mut().for_each(|x| *x *= &inv);
            for r in 0..n {
                if r != col && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let prow = m[col].clone();
                    m[r].iter_mut().zip(&prow).for_each(|(x, p)| *x -= &f * p);
                }
            }
        }
        let gs: Vec<(Rational, Rational)> = m.iter().map(|row| (-row[0].clone(), -row[1].clone())).collect();
        CircuitSystem::assemble(normal, gs, original, equations)
    }

    fn assemble(
        circuit: Circuit,
        gs: Vec<(Rational, Rational)>,
        original: Circuit,
        equations: Vec<Vec<Rational>>,
    ) -> Result<CircuitSystem> {
        let n = circuit.n();
        for (i, (a, b)) in gs.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::ZeroCoefficient { index: i + 1, which: "a" });
            }
            if b.is_zero() {
                return Err(Error::ZeroCoefficient { index: i + 1, which: "b" });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if &gs[i].0 * &gs[j].1 == &gs[j].0 * &gs[i].1 {
                    return Err(Error::CoincidentRoots(i + 1, j + 1));
                }
            }
        }
        let relation = circuit.primitive_relation()?;
        let w = &circuit.points()[2..];
        let l: Vec<i64> = w.iter().map(|p| p[0]).collect();
        let v: Vec<Vec<i64>> = w.iter().map(|p| p[1..].to_vec()).collect();
        let mut b = IntMatrix::zeros(n - 1, n);
        for (j, vj) in v.iter().enumerate() {
            for (i, &x) in vj.iter().enumerate() {
                b[(i, j)] = Int::from(x);
            }
        }
        Ok(CircuitSystem { circuit, relation, gs, l, v, b, original, equations })
    }

    pub fn n(&self) -> usize {
        self.circuit.n()
    }

    pub fn ell(&self) -> i64 {
        self.circuit.ell().expect("normalized")
    }

    /// The normalized circuit.
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// The circuit as given by the caller, before normalization.
    pub fn original(&self) -> &Circuit {
        &self.original
    }

    /// The equations against the points of `original()`.
    pub fn equations(&self) -> &[Vec<Rational>] {
        &self.equations
    }

    pub fn relation(&self) -> &AffineRelation {
        &self.relation
    }

    pub fn gs(&self) -> &[(Rational, Rational)] {
        &self.gs
    }

    /// g_i(x) = a_i + b_i x^l, for 0-based i.
    pub fn g(&self, i: usize) -> RatPoly {
        let (a, b) = &self.gs[i];
        let mut p = RatPoly::monomial(b.clone(), self.ell() as usize);
        p = &p + &RatPoly::constant(a.clone());
        p
    }

    /// First coordinates l_i of w_i.
    pub fn l(&self) -> &[i64] {
        &self.l
    }

    /// w_i without its first coordinate.
    pub fn v(&self) -> &[Vec<i64>] {
        &self.v
    }

    /// The (n-1) x n matrix with columns v_1..v_n.
    pub fn b_matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn rank_mod2(&self) -> usize {
        self.circuit.rank_mod2()
    }

    /// For a circuit inside 2Z^n, the system obtained by halving every
    /// exponent (x_i^2 replaced by x_i).
    pub fn halved(&self) -> Option<CircuitSystem> {
        let h = self.circuit.halved()?;
        let n = self.n();
        let eqs = self
            .gs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let mut row = vec![Rational::zero(); n + 2];
                row[0] = -a.clone();
                row[1] = -b.clone();
                row[i + 2] = Rational::one();
                row
            })
            .collect();
        CircuitSystem::assemble(h.clone(), self.gs.clone(), h, eqs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    pub(crate) fn running() -> CircuitSystem {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap();
        CircuitSystem::from_reduced(&c, vec![(rat_int(1), rat_int(1)), (rat(-2, 73), rat(20, 73))]).unwrap()
    }

    #[test]
    fn running_decomposition() {
        let s = running();
        assert_eq!(s.l(), &[0, 2]);
        assert_eq!(s.v(), &[vec![1], vec![-2]]);
        assert_eq!(s.gs()[1], (rat(-2, 73), rat(20, 73)));
        assert_eq!(s.b_matrix(), &IntMatrix::from_i64(1, 2, &[1, -2]));
    }

    #[test]
    fn genericity_errors() {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap();
        let e = CircuitSystem::from_reduced(&c, vec![(rat_int(1), rat_int(1)), (rat_int(2), rat_int(2))]);
        assert_eq!(e, Err(Error::CoincidentRoots(1, 2)));
        let e = CircuitSystem::from_reduced(&c, vec![(rat_int(1), rat_int(1)), (rat_int(2), rat_int(0))]);
        assert!(matches!(e, Err(Error::ZeroCoefficient { index: 2, which: "b" })));
    }

    #[test]
    fn general_form_identity_block() {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap();
        let rows = vec![
            vec![rat_int(-1), rat_int(-1), rat_int(1), rat_int(0)],
            vec![rat(2, 73), rat(-20, 73), rat_int(0), rat_int(1)],
        ];
        assert_eq!(CircuitSystem::from_general(&c, rows).unwrap().gs(), running().gs());
    }

    #[test]
    fn general_form_mixed_rows() {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap();
        let r1 = vec![rat_int(-1), rat_int(-1), rat_int(1), rat_int(0)];
        let r2 = vec![rat(2, 73), rat(-20, 73), rat_int(0), rat_int(1)];
        let mix: Vec<Rational> = r1.iter().zip(&r2).map(|(a, b)| a * rat(3, 2) + b * rat(-5, 1)).collect();
        let mix2: Vec<Rational> = r1.iter().zip(&r2).map(|(a, b)| a + b * rat(2, 1)).collect();
        assert_eq!(CircuitSystem::from_general(&c, vec![mix, mix2]).unwrap().gs(), running().gs());
        let e = CircuitSystem::from_general(&c, vec![r1.clone(), r1.iter().map(|x| x * rat_int(2)).collect()]);
        assert_eq!(e, Err(Error::SingularPivot));
    }

    #[test]
    fn relations_five_and_six_hold() {
        let s = running();
        let rel = s.relation();
        let k = rel.signed(s.n());
        let lhs: i64 = rel.lambda0 + k.iter().zip(s.l()).map(|(a, b)| a * b).sum::<i64>();
        assert_eq!(lhs, 0);
        let dim = s.n() - 1;
        for c in 0..dim {
            assert_eq!(k.iter().zip(s.v()).map(|(a, v)| a * v[c]).sum::<i64>(), 0);
        }
    }
}
