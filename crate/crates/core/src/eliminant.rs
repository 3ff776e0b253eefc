//! The eliminant f = P - Q of a circuit system and the auxiliary polynomial
//! H = (P'Q - PQ') / (x^{lambda0 - 1} prod g_i^{lambda_i - 1}) = h(x^l).

use crate::error::{Error, Result};
use crate::galesystem::CircuitSystem;
use crate::upoly::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eliminant {
    pub p: RatPoly,
    pub q: RatPoly,
    pub f: RatPoly,
    pub big_h: RatPoly,
    pub h: RatPoly,
    /// Factored form of P: x^{lambda0} prod g_i^{e_i}; pairs (i, e_i), 0-based.
    pub p_factors: Vec<(usize, u32)>,
    /// Factored form of Q: prod g_i^{e_i}.
    pub q_factors: Vec<(usize, u32)>,
    pub lambda0: u32,
}

fn exponent(v: i64) -> u32 {
    u32::try_from(v).expect("relation coefficients are small nonnegative integers")
}

/// P, Q and f = P - Q.
pub fn build_pq(sys: &CircuitSystem) -> (RatPoly, RatPoly, Vec<(usize, u32)>, Vec<(usize, u32)>) {
    let rel = sys.relation();
    let p_factors: Vec<(usize, u32)> = (0..rel.t).map(|i| (i, exponent(rel.lambdas[i]))).collect();
    let q_factors: Vec<(usize, u32)> = (rel.t..rel.nu).map(|i| (i, exponent(rel.lambdas[i]))).collect();
    let prod = |fs: &[(usize, u32)]| {
        fs.iter().fold(RatPoly::one(), |acc, &(i, e)| &acc * &sys.g(i).pow(e).expect("g_i is nonzero"))
    };
    let p = prod(&p_factors).shift(exponent(rel.lambda0) as usize);
    let q = prod(&q_factors);
    (p, q, p_factors, q_factors)
}

/// H and h with H(x) = h(x^l).
pub fn build_h(sys: &CircuitSystem) -> Result<(RatPoly, RatPoly)> {
    let (p, q, _, _) = build_pq(sys);
    let rel = sys.relation();
    let ell = sys.ell() as usize;
    let num = &(&p.derivative() * &q) - &(&p * &q.derivative());
    let x_power = if rel.lambda0 == 0 { ell - 1 } else { rel.lambda0 as usize - 1 };
    let denom = (0..rel.nu).fold(RatPoly::one(), |acc, i| {
        &acc * &sys.g(i).pow(exponent(rel.lambdas[i] - 1)).expect("g_i is nonzero")
    });
    let big_h = num
        .unshift(x_power)
        .and_then(|r| r.exact_div(&denom))
        .ok_or(Error::InexactDivision)?;
    let h = big_h.compress(ell).ok_or(Error::InexactDivision)?;
    Ok((big_h, h))
}

pub fn build(sys: &CircuitSystem) -> Result<Eliminant> {
    let (p, q, p_factors, q_factors) = build_pq(sys);
    let f = &p - &q;
    if f.is_zero() {
        return Err(Error::ZeroEliminant);
    }
    let (big_h, h) = build_h(sys)?;
    Ok(Eliminant { p, q, f, big_h, h, p_factors, q_factors, lambda0: exponent(sys.relation().lambda0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::scalar::{rat, rat_int};
    use num_traits::Zero;

    fn running() -> CircuitSystem {
        let c = Circuit::validate(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, -2]]).unwrap();
        CircuitSystem::from_reduced(&c, vec![(rat_int(1), rat_int(1)), (rat(-2, 73), rat(20, 73))]).unwrap()
    }

    #[test]
    fn running_eliminant() {
        let e = build(&running()).unwrap();
        assert_eq!(e.p, RatPoly::monomial(rat_int(1), 2));
        // Q = (x + 1)^2 (20x - 2)/73 and 3.65 f = 3.65 x^2 - (x - 1/10)(x + 1)^2
        let q = &RatPoly::linear(rat_int(1), rat_int(1)).pow(2).unwrap() * &RatPoly::linear(rat(-2, 73), rat(20, 73));
        assert_eq!(e.q, q);
        let alt = &RatPoly::monomial(rat(73, 20), 2)
            - &(&RatPoly::linear(rat(-1, 10), rat_int(1)) * &RatPoly::linear(rat_int(1), rat_int(1)).pow(2).unwrap());
        assert_eq!(e.f.scale(&rat(73, 20)), alt);
        assert_eq!(e.h.degree(), Some(2));
        assert!(!e.h.coeff(0).is_zero());
    }

    #[test]
    fn right_hand_side_one_when_all_positive() {
        // {0, e1, w1} in Z with w1 = -1: relation e1 + w1 = 0, t = 1, Q = 1
        let c = Circuit::validate(vec![vec![0], vec![1], vec![-1]]).unwrap();
        let s = CircuitSystem::from_reduced(&c, vec![(rat_int(2), rat_int(-3))]).unwrap();
        let e = build(&s).unwrap();
        assert_eq!(e.q, RatPoly::one());
        assert_eq!(e.f, &e.p - &RatPoly::one());
    }

    #[test]
    fn h_when_lambda0_vanishes() {
        // w1 = (0,1), w2 = (0,-1) relation w1 + w2 = 0 with lambda0 = 0, l = 3
        let c = Circuit::validate(vec![vec![0, 0], vec![3, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let s = CircuitSystem::from_reduced(&c, vec![(rat_int(1), rat_int(2)), (rat_int(-1), rat_int(5))]).unwrap();
        assert_eq!(s.relation().lambda0, 0);
        let (big_h, h) = build_h(&s).unwrap();
        assert_eq!(h.substitute_power(3), big_h);
        assert_eq!(h.degree(), Some(s.relation().m));
    }
}
