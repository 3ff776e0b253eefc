//! Circuits: n+2 lattice points affinely spanning R^n. Validation, the
//! standard position {0, l*e1, w_1, ..., w_n}, the primitive affine relation,
//! rank modulo 2 and normalized volume.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, integer_kernel, rank_mod2, IntMatrix};
use crate::scalar::Int;

/// How a normalized circuit was obtained from the input points: the new
/// point k is `basis_change * (old[order[k]] - translation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub translation: Vec<i64>,
    pub basis_change: IntMatrix,
    pub order: Vec<usize>,
    pub ell: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    points: Vec<Vec<i64>>,
    normalization: Option<Normalization>,
}

/// Primitive relation `lambda0*e1 + sum_{i<=t} lambda_i w_i = sum_{i>t} lambda_i w_i`
/// on a normalized circuit. Indices refer to w_1..w_nu; the points
/// w_{nu+1}..w_n do not take part in the relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRelation {
    pub lambda0: i64,
    pub lambdas: Vec<i64>,
    pub t: usize,
    pub nu: usize,
    /// lambda0 + sum_{i<=t} lambda_i - sum_{i>t} lambda_i
    pub delta: i64,
    /// Coefficient of w_{-1} in the same relation written on the circuit
    /// itself (scaled by l): lambda0 + l*(delta - lambda0).
    pub delta_circuit: i64,
    pub m: usize,
}

impl AffineRelation {
    /// Signed coefficients k_1..k_n with `lambda0*e1 + sum k_i w_i = 0`.
    pub fn signed(&self, n: usize) -> Vec<i64> {
        let mut k = vec![0; n];
        for (i, &l) in self.lambdas.iter().enumerate() {
            k[i] = if i < self.t { l } else { -l };
        }
        k
    }

    /// Index (0-based among w_1..w_n) of the first odd lambda_i.
    pub fn first_odd(&self) -> usize {
        self.lambdas.iter().position(|l| l % 2 != 0).expect("some lambda_i is odd")
    }
}

fn int_to_i64(v: &Int) -> Result<i64> {
    v.to_i64().ok_or(Error::Overflow)
}

fn columns_matrix(rows: usize, cols: &[Vec<i64>]) -> IntMatrix {
    let cols: Vec<Vec<Int>> = cols.iter().map(|c| c.iter().map(|&v| Int::from(v)).collect()).collect();
    IntMatrix::from_columns(rows, &cols)
}

fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

impl Circuit {
    /// Checks the circuit axioms; the dimension is read from the first point.
    pub fn validate(points: Vec<Vec<i64>>) -> Result<Circuit> {
        let n = points.first().map_or(0, Vec::len);
        Circuit::with_dimension(n, points)
    }

    /// Checks the circuit axioms against a declared dimension.
    pub fn with_dimension(n: usize, points: Vec<Vec<i64>>) -> Result<Circuit> {
        if n == 0 {
            return Err(Error::Domain("circuits need dimension at least 1".into()));
        }
        if points.len() != n + 2 {
            return Err(Error::WrongCardinality { n, expected: n + 2, got: points.len() });
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(Error::DimensionMismatch { index, n, got: p.len() });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        let c = Circuit { n, points, normalization: None };
        if c.differences().rank() != n {
            return Err(Error::DegenerateSpan);
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn normalization(&self) -> Option<&Normalization> {
        self.normalization.as_ref()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization.is_some()
    }

    pub fn ell(&self) -> Option<i64> {
        self.normalization.as_ref().map(|z| z.ell)
    }

    /// Columns p_k - p_0 for k = 1..n+1.
    fn differences(&self) -> IntMatrix {
        let cols: Vec<Vec<i64>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(&self.points[0]).map(|(a, b)| a - b).collect())
            .collect();
        columns_matrix(self.n, &cols)
    }

    /// Primitive affine relation on the n+2 points, first nonzero entry positive.
    pub fn relation_on_points(&self) -> Vec<i64> {
        let mut m = IntMatrix::zeros(self.n + 1, self.n + 2);
        for (k, p) in self.points.iter().enumerate() {
            m[(0, k)] = Int::from(1);
            for (i, &v) in p.iter().enumerate() {
                m[(i + 1, k)] = Int::from(v);
            }
        }
        let ker = integer_kernel(&m);
        assert_eq!(ker.cols(), 1, "a circuit has a one-dimensional relation space");
        let mut c: Vec<Int> = ker.column(0);
        if c.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
            c.iter_mut().for_each(|v| *v = -v.clone());
        }
        c.iter().map(|v| v.to_i64().expect("relation coefficients fit in i64")).collect()
    }

    /// Dimension of the affine span of the minimal dependent subset.
    pub fn m(&self) -> usize {
        self.relation_on_points().iter().filter(|&&v| v != 0).count() - 2
    }

    /// Rank modulo 2 of the difference vectors.
    pub fn rank_mod2(&self) -> usize {
        rank_mod2(&self.differences())
    }

    /// Normalized volume of the convex hull (unit cube has volume n!), from
    /// the triangulation that omits, one at a time, the points with positive
    /// relation coefficient.
    pub fn normalized_volume(&self) -> Int {
        let c = self.relation_on_points();
        let mut vol = Int::zero();
        for k in (0..self.n + 2).filter(|&k| c[k] > 0) {
            let rest: Vec<&Vec<i64>> = self.points.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p).collect();
            let cols: Vec<Vec<i64>> = rest[1..]
                .iter()
                .map(|p| p.iter().zip(rest[0]).map(|(a, b)| a - b).collect())
                .collect();
            vol += columns_matrix(self.n, &cols).determinant().abs();
        }
        vol
    }

    /// Image under `p -> u*p + shift`; `u` must be unimodular.
    pub fn transformed(&self, u: &IntMatrix, shift: &[i64]) -> Result<Circuit> {
        assert!(u.is_unimodular(), "basis change must be unimodular");
        let pts = self
            .points
            .iter()
            .map(|p| {
                let v: Vec<Int> = p.iter().map(|&x| Int::from(x)).collect();
                u.mul_vec(&v).iter().zip(shift).map(|(a, &s)| int_to_i64(a).map(|a| a + s)).collect()
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        Circuit::with_dimension(self.n, pts)
    }

    /// The same points in another order: new point k is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Circuit {
        Circuit { n: self.n, points: perm.iter().map(|&k| self.points[k].clone()).collect(), normalization: None }
    }

    /// Standard position: w_{-1} = 0, w_0 = l*e1, the remaining points
    /// ordered by the sign of their relation coefficient (positive, negative,
    /// zero; original order inside each block).
    ///
    /// The pair (w_{-1}, w_0) is the lexicographically smallest pair of input
    /// indices such that w_{-1} belongs to the dependent subset and, when the
    /// rank modulo 2 is nonzero, l is odd.
    pub fn normalize(&self) -> Circuit {
        let n = self.n;
        let c = self.relation_on_points();
        let r = self.rank_mod2();
        let diff = |i: usize, j: usize| -> Vec<i64> {
            self.points[j].iter().zip(&self.points[i]).map(|(a, b)| a - b).collect()
        };
        let pairs: Vec<(usize, usize)> =
            (0..n + 2).flat_map(|i| (0..n + 2).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let odd_ok = |&(i, j): &(usize, usize)| r == 0 || content(&diff(i, j)) % 2 != 0;
        let (i0, j0) = pairs
            .iter()
            .copied()
            .find(|p| c[p.0] != 0 && odd_ok(p))
            .or_else(|| pairs.iter().copied().find(odd_ok))
            .unwrap_or((0, 1));

        let d = diff(i0, j0);
        let hf = hermite_normal_form(&columns_matrix(n, &[d]));
        let u = hf.u;
        let ell = int_to_i64(&hf.h[(0, 0)]).expect("l fits in i64");
        let map = |p: &Vec<i64>| -> Vec<i64> {
            let v: Vec<Int> = p.iter().zip(&self.points[i0]).map(|(a, b)| Int::from(a - b)).collect();
            u.mul_vec(&v).iter().map(|x| x.to_i64().expect("coordinates fit in i64")).collect()
        };
        let rest: Vec<usize> = (0..n + 2).filter(|&k| k != i0 && k != j0).collect();
        let w: Vec<Vec<i64>> = rest.iter().map(|&k| map(&self.points[k])).collect();
        let k = standard_kernel(n, &w);
        let mut order_rest: Vec<usize> = (0..n).filter(|&i| k[i + 1] > 0).collect();
        order_rest.extend((0..n).filter(|&i| k[i + 1] < 0));
        order_rest.extend((0..n).filter(|&i| k[i + 1] == 0));

        let mut points = vec![vec![0; n], map(&self.points[j0])];
        points.extend(order_rest.iter().map(|&i| w[i].clone()));
        let mut order = vec![i0, j0];
        order.extend(order_rest.iter().map(|&i| rest[i]));
        Circuit {
            n,
            points,
            normalization: Some(Normalization { translation: self.points[i0].clone(), basis_change: u, order, ell }),
        }
    }

    /// The primitive relation on {0, e1, w_1, ..., w_n} of a normalized circuit.
    pub fn primitive_relation(&self) -> Result<AffineRelation> {
        let ell = self.ell().ok_or(Error::NotNormalized)?;
        let k = standard_kernel(self.n, &self.points[2..]);
        let lambda0 = k[0];
        let nu = k[1..].iter().filter(|&&v| v != 0).count();
        let t = k[1..].iter().filter(|&&v| v > 0).count();
        if k[1..].iter().take(nu).any(|&v| v == 0) || k[1..t + 1].iter().any(|&v| v < 0) {
            return Err(Error::NotNormalized);
        }
        let lambdas: Vec<i64> = k[1..=nu].iter().map(|v| v.abs()).collect();
        let delta = lambda0 + lambdas[..t].iter().sum::<i64>() - lambdas[t..].iter().sum::<i64>();
        let delta_circuit = lambda0 + ell * (delta - lambda0);
        let m = nu - usize::from(lambda0 == 0) - usize::from(delta_circuit == 0);
        Ok(AffineRelation { lambda0, lambdas, t, nu, delta, delta_circuit, m })
    }

    /// For a normalized circuit inside 2Z^n: the circuit with every point halved.
    pub fn halved(&self) -> Option<Circuit> {
        let z = self.normalization.as_ref()?;
        if self.points.iter().flatten().any(|v| v % 2 != 0) {
            return None;
        }
        Some(Circuit {
            n: self.n,
            points: self.points.iter().map(|p| p.iter().map(|v| v / 2).collect()).collect(),
            normalization: Some(Normalization { ell: z.ell / 2, ..z.clone() }),
        })
    }
}

/// Kernel (k0, k1, ..., kn) of [e1 | w_1 .. w_n], primitive, with k0 >= 0 and
/// the first nonzero entry positive when k0 = 0.
fn standard_kernel(n: usize, w: &[Vec<i64>]) -> Vec<i64> {
    let mut cols = vec![{
        let mut e1 = vec![0; n];
        e1[0] = 1;
        e1
    }];
    cols.extend(w.iter().cloned());
    let ker = integer_kernel(&columns_matrix(n, &cols));
    assert_eq!(ker.cols(), 1, "standard position has a one-dimensional relation space");
    let mut k: Vec<i64> = ker.column(0).iter().map(|v| v.to_i64().expect("relation fits in i64")).collect();
    if k.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        k.iter_mut().for_each(|v| *v = -*v);
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running() -> Circuit {
        Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(running().n() == 2);
        assert_eq!(
            Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![3, 0]]),
            Err(Error::DegenerateSpan)
        );
        assert!(matches!(
            Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1]]),
            Err(Error::WrongCardinality { .. })
        ));
        assert!(matches!(
            Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicatePoint(1, 3))
        ));
    }

    #[test]
    fn running_example_is_already_standard() {
        let c = running().normalize();
        assert_eq!(c.points(), running().points());
        assert_eq!(c.ell(), Some(1));
        let rel = c.primitive_relation().unwrap();
        assert_eq!(rel.lambda0, 2);
        assert_eq!(rel.lambdas, vec![2, 1]);
        assert_eq!((rel.t, rel.nu, rel.delta, rel.m), (0, 2, -1, 2));
        assert_eq!(c.rank_mod2(), 2);
        assert_eq!(c.normalized_volume(), Int::from(3));
    }

    #[test]
    fn translation_invariance() {
        let moved = running().transformed(&IntMatrix::identity(2), &[5, 7]).unwrap();
        assert_eq!(moved.normalize().points(), running().normalize().points());
    }

    #[test]
    fn even_circuit_halves() {
        let even = Circuit::validate(vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![4, -4]]).unwrap();
        let z = even.normalize();
        assert_eq!(z.ell(), Some(2));
        assert_eq!(z.rank_mod2(), 0);
        let h = z.halved().unwrap();
        assert_eq!(h.points(), running().points());
        assert_eq!(h.ell(), Some(1));
    }

    #[test]
    fn collinear_triple_gives_m_one() {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(c.m(), 1);
        let z = c.normalize();
        assert_eq!(z.primitive_relation().unwrap().m, 1);
    }

    #[test]
    fn volumes() {
        let square = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(square.normalized_volume(), Int::from(2));
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 2]]).unwrap();
        // triangle (0,0),(1,0),(1,2) plus (0,1): hull area 3/2
        assert_eq!(c.normalized_volume(), Int::from(3));
    }

    #[test]
    fn relation_with_large_ell() {
        // {0, 3, 1} in Z: relation on the points is 2*0 - 1*3 + 3*1 = 0 up to sign
        let c = Circuit::validate(vec![vec![0], vec![3], vec![1]]).unwrap();
        assert_eq!(c.m(), 1);
        let z = c.normalize();
        assert_eq!(z.primitive_relation().unwrap().m, 1);
    }

    #[test]
    fn normalized_points_and_record_agree() {
        let c = Circuit::validate(vec![vec![1, 1], vec![3, 2], vec![1, 4], vec![-2, 0]]).unwrap();
        let z = c.normalize();
        let rec = z.normalization().unwrap();
        assert!(rec.basis_change.is_unimodular());
        assert_eq!(z.points()[0], vec![0, 0]);
        assert_eq!(z.points()[1], vec![rec.ell, 0]);
        for (k, &o) in rec.order.iter().enumerate() {
            let v: Vec<Int> = c.points()[o].iter().zip(&rec.translation).map(|(a, b)| Int::from(a - b)).collect();
            let img: Vec<i64> = rec.basis_change.mul_vec(&v).iter().map(|x| x.to_i64().unwrap()).collect();
            assert_eq!(img, z.points()[k]);
        }
        assert_eq!(z.m(), c.m());
        assert_eq!(z.rank_mod2(), c.rank_mod2());
        assert_eq!(z.normalized_volume(), c.normalized_volume());
    }
}
