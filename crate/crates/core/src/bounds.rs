//! Closed-form bounds on the number of solutions and an audit comparing the
//! exact counts of a system against them.

use num_traits::Pow;

use crate::counting::{real_count, SolutionCount};
use crate::error::{Error, Result};
use crate::galesystem::CircuitSystem;
use crate::scalar::Int;

/// Bound on positive solutions m + 1 and on real solutions:
/// 2^{n-R}(m+R+1) when R <= m, 2^{n-R}(2m+1) otherwise.
pub fn theorem_bounds(n: usize, m: usize, r: usize) -> Result<(u64, u64)> {
    if m < 1 || m > n || r > n || n > 62 {
        return Err(Error::Domain(format!("need 1 <= m <= n and 0 <= R <= n, got n={n}, m={m}, R={r}")));
    }
    let mult = 1u64 << (n - r);
    let real = if r <= m { mult * (m + r + 1) as u64 } else { mult * (2 * m + 1) as u64 };
    Ok((m as u64 + 1, real))
}

/// 2^n * 2^{C(k,2)} * (n+1)^k for a support of size k.
pub fn khovanskii_bound(n: usize, support_size: usize) -> Int {
    let k = support_size as u64;
    let pairs = k * k.saturating_sub(1) / 2;
    let two = Int::from(2);
    Pow::pow(&two, n as u64) * Pow::pow(&two, pairs) * Pow::pow(&Int::from(n as u64 + 1), k)
}

/// 2^{n - rank}: the maximal number of real solutions for a simplex support.
pub fn simplex_bound(n: usize, rank: usize) -> Result<u64> {
    if rank > n || n > 63 {
        return Err(Error::Domain(format!("need 0 <= rank <= n, got n={n}, rank={rank}")));
    }
    Ok(1u64 << (n - rank))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: &'static str,
    pub value: Int,
    pub bound: Int,
    pub satisfied: bool,
    pub sharp: bool,
}

impl Verdict {
    fn new(name: &'static str, value: Int, bound: Int) -> Verdict {
        Verdict { name, satisfied: value <= bound, sharp: value == bound, value, bound }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub volume: Int,
    pub positive_bound: u64,
    pub real_bound: u64,
    pub khovanskii: Int,
    pub counts: SolutionCount,
    pub verdicts: Vec<Verdict>,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.verdicts.iter().all(|v| v.satisfied)
    }
}

pub fn audit(sys: &CircuitSystem) -> Result<BoundReport> {
    let n = sys.n();
    let m = sys.circuit().m();
    let r = sys.rank_mod2();
    let counts = real_count(sys)?;
    let (positive_bound, real_bound) = theorem_bounds(n, m, r)?;
    let volume = counts.complex.clone();
    let khovanskii = khovanskii_bound(n, n + 2);
    let real = Int::from(counts.real);
    let verdicts = vec![
        Verdict::new("positive <= m+1", Int::from(counts.positive), Int::from(positive_bound)),
        Verdict::new("real <= real bound", real.clone(), Int::from(real_bound)),
        Verdict::new("real <= volume", real.clone(), volume.clone()),
        Verdict::new("real <= khovanskii", real, khovanskii.clone()),
        Verdict::new(
            "real = multiplier * qualifying roots",
            Int::from(counts.real),
            Int::from(counts.multiplier) * Int::from(counts.qualifying_roots),
        ),
    ];
    Ok(BoundReport { n, m, r, volume, positive_bound, real_bound, khovanskii, counts, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_values() {
        assert_eq!(theorem_bounds(2, 2, 2).unwrap(), (3, 5));
        assert_eq!(theorem_bounds(4, 4, 3).unwrap(), (5, 16));
        assert_eq!(theorem_bounds(3, 1, 0).unwrap(), (2, 16));
        assert!(theorem_bounds(2, 0, 1).is_err());
        assert!(theorem_bounds(2, 3, 1).is_err());
    }

    #[test]
    fn khovanskii_values() {
        assert_eq!(khovanskii_bound(2, 4), Int::from(20736));
        assert_eq!(khovanskii_bound(1, 2), Int::from(16));
    }

    #[test]
    fn simplex_values() {
        assert_eq!(simplex_bound(3, 3).unwrap(), 1);
        assert_eq!(simplex_bound(3, 0).unwrap(), 8);
        assert_eq!(simplex_bound(2, 1).unwrap(), 2);
    }

    #[test]
    fn real_bound_non_increasing_beyond_m() {
        for n in 1..=10 {
            for m in 1..=n {
                for r in m..n {
                    let a = theorem_bounds(n, m, r).unwrap().1;
                    let b = theorem_bounds(n, m, r + 1).unwrap().1;
                    assert!(b <= a, "n={n} m={m} R={r}");
                }
            }
        }
    }
}
