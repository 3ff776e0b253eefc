use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use circuit_count::counting::real_count;
use circuit_count::io::{format_rational, parse_rational};
use circuit_count::lattice::{hermite_normal_form, kernel_mod2, rank_mod2, smith_normal_form};
use circuit_count::scalar::{rat, rat_int};
use circuit_count::upoly::{count_real_roots, isolate_real_roots};
use circuit_count::witness::{extract_scheme, realize_scheme, scheme_ij, scheme_positive, SearchOptions};
use circuit_count::{Circuit, CircuitSystem, Int, IntMatrix, RatPoly, Rational};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d))
    })
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=3)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2i64..=2, n), n + 2))
        .prop_filter_map("not a circuit", |pts| Circuit::validate(pts).ok())
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (1i64..=9, any::<bool>()).prop_map(|(v, neg)| rat_int(if neg { -v } else { v }))
}

fn system() -> impl Strategy<Value = CircuitSystem> {
    circuit()
        .prop_flat_map(|c| {
            let n = c.n();
            (Just(c), prop::collection::vec((coefficient(), coefficient()), n))
        })
        .prop_filter_map("non-generic", |(c, gs)| {
            let sys = CircuitSystem::from_reduced(&c, gs).ok()?;
            let deg = circuit_count::eliminant::build(&sys).ok()?.f.degree()?;
            (deg <= 24).then_some(sys)
        })
}

fn unimodular(n: usize, steps: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in steps {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for c in 0..n {
            let v = &u[(j, c)] * Int::from(k);
            u[(i, c)] += v;
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn hermite_reconstructs(m in matrix()) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(h.u.mul(&m), h.h);
        prop_assert!(h.u.determinant().abs() == Int::from(1));
    }

    #[test]
    fn smith_reconstructs_and_divides(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.d.clone());
        prop_assert!(s.left.is_unimodular() && s.right.is_unimodular());
        let d = s.diagonal();
        for w in d.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        if m.rows() == m.cols() && !m.determinant().is_zero() {
            let prod = d.iter().fold(Int::from(1), |a, b| a * b.abs());
            prop_assert_eq!(prod, m.determinant().abs());
        }
    }

    #[test]
    fn mod2_rank_nullity(m in matrix()) {
        let k = kernel_mod2(&m);
        prop_assert_eq!(rank_mod2(&m) + k.len(), m.cols());
        for v in &k.vectors {
            let w: Vec<Int> = v.iter().map(|&b| Int::from(b)).collect();
            prop_assert!(m.mul_vec(&w).iter().all(|x| x.is_even()));
        }
    }

    #[test]
    fn sturm_matches_isolation(coeffs in prop::collection::vec(-50i64..=50, 2..=13)) {
        let p = RatPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect());
        prop_assume!(p.degree().is_some_and(|d| d >= 1));
        let roots = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), count_real_roots(&p).unwrap());
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        let d = p.degree().unwrap();
        prop_assert!(total <= d && (d - total) % 2 == 0);
        for r in &roots {
            if !r.is_exact() {
                let (a, b) = (p.sign_at(&r.lo), p.sign_at(&r.hi));
                prop_assert!(a != 0 && b != 0);
                if r.multiplicity % 2 == 1 {
                    prop_assert_eq!(a, -b);
                }
            }
        }
    }

    #[test]
    fn circuit_invariants_under_lattice_maps(
        c in circuit(),
        steps in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..4),
        shift in prop::collection::vec(-3i64..=3, 3),
        perm_seed in any::<u64>(),
    ) {
        let n = c.n();
        let u = unimodular(n, &steps);
        let moved = c.transformed(&u, &shift[..n]).unwrap();
        let mut perm: Vec<usize> = (0..n + 2).collect();
        let mut s = perm_seed;
        for i in (1..perm.len()).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        for other in [moved.clone(), c.permuted(&perm)] {
            prop_assert_eq!(other.m(), c.m());
            prop_assert_eq!(other.rank_mod2(), c.rank_mod2());
            prop_assert_eq!(other.normalized_volume(), c.normalized_volume());
        }
        prop_assert!(c.m() >= 1 && c.m() <= n);
        let rel = c.relation_on_points();
        let g = rel.iter().fold(0i64, |a, &b| a.gcd(&b));
        prop_assert_eq!(g, 1);
        prop_assert_eq!(rel.iter().sum::<i64>(), 0);
        for j in 0..n {
            prop_assert_eq!(rel.iter().zip(c.points()).map(|(k, p)| k * p[j]).sum::<i64>(), 0);
        }
        let r = c.normalize().primitive_relation().unwrap();
        prop_assert!(r.lambdas.iter().any(|l| l % 2 != 0));
    }

    #[test]
    fn counts_within_bounds_and_invariant(
        sys in system(),
        steps in prop::collection::vec((0usize..3, 0usize..3, -1i64..=1), 0..3),
    ) {
        let n = sys.n();
        let c = real_count(&sys);
        prop_assume!(c.as_ref().is_ok_and(|c| !c.non_generic));
        let c = c.unwrap();
        let circ = sys.circuit();
        let (pb, rb) = circuit_count::bounds::theorem_bounds(n, circ.m(), circ.rank_mod2()).unwrap();
        prop_assert!(c.positive <= pb && c.real <= rb);
        prop_assert!(Int::from(c.real) <= circ.normalized_volume());
        prop_assert_eq!(c.real, c.multiplier * c.qualifying_roots);
        // The same equations on a unimodular image of the support.
        let u = unimodular(n, &steps);
        let Ok(moved) = sys.original().transformed(&u, &vec![1; n]) else { return Ok(()) };
        let other = CircuitSystem::from_general(&moved, sys.equations().to_vec()).unwrap();
        let d = real_count(&other).unwrap();
        prop_assert_eq!((d.positive, d.real), (c.positive, c.real));
    }

    #[test]
    fn row_mixing_gives_the_same_system(
        sys in system(),
        steps in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 1..4),
    ) {
        let n = sys.n();
        let mix = unimodular(n, &steps);
        let rows = sys.equations();
        let mixed: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n + 2)
                    .map(|k| (0..n).map(|j| Rational::from_integer(mix[(i, j)].clone()) * &rows[j][k]).sum())
                    .collect()
            })
            .collect();
        let other = CircuitSystem::from_general(sys.original(), mixed).unwrap();
        prop_assert_eq!(other.gs(), sys.gs());

        // The relation coefficients of w_1..w_n lie in ker B, hence in ker B mod 2.
        let k: Vec<Int> = sys.relation().signed(n).into_iter().map(Int::from).collect();
        prop_assert!(sys.b_matrix().mul_vec(&k).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn realizations_round_trip(seed in any::<u64>(), which in 0usize..5) {
        let s = [scheme_positive(2), scheme_positive(3), scheme_ij(1, 1), scheme_ij(2, 1), scheme_ij(2, 2)][which].clone();
        let opts = SearchOptions { budget: std::time::Duration::from_secs(60), seed };
        let r = realize_scheme(&s, &opts).unwrap();
        prop_assert_eq!(extract_scheme(&r.p, &r.q).unwrap(), s);
    }
}
