mod common;

use common::{random_point, to_naive};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use schubert_core::combinat::SchubertProblem;
use schubert_core::formulate::{hybrid, paired, primal_dual};
use schubert_core::io::generate_flags;
use schubert_core::polysys::{Monomial, Polynomial, PolynomialSystem};
use schubert_core::rng::SeededRng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..ProptestConfig::default()
    }
}

fn random_system(seed: u64, n_vars: usize, n_polys: usize, max_deg: u32) -> PolynomialSystem {
    let mut rng = SeededRng::new(seed);
    let polys = (0..n_polys)
        .map(|_| {
            let terms = (0..1 + rng.next_u64() % 8)
                .map(|_| {
                    let mut exps: Vec<(u32, u32)> = (0..n_vars as u32)
                        .filter_map(|v| {
                            let e = (rng.next_u64() % (max_deg as u64 + 1)) as u32;
                            (e > 0 && rng.next_u64().is_multiple_of(2)).then_some((v, e))
                        })
                        .collect();
                    exps.sort_unstable();
                    Monomial {
                        coeff: rng.complex_square(),
                        exponents: exps,
                    }
                })
                .collect();
            Polynomial::from_terms(terms)
        })
        .collect();
    let labels = (0..n_polys).map(|i| format!("p{i}")).collect();
    PolynomialSystem::new(n_vars, polys, labels).unwrap()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn evaluation_matches_term_by_term(seed in any::<u64>(), n_vars in 1usize..6, n_polys in 1usize..6, deg in 1u32..4) {
        let s = random_system(seed, n_vars, n_polys, deg);
        let naive = to_naive(&s);
        let x = random_point(n_vars, &mut SeededRng::new(seed.wrapping_add(1)));
        let fast = s.evaluate(&x).unwrap();
        let accurate = s.evaluate_accurate(&x).unwrap();
        for ((a, b), c) in fast.iter().zip(naive.evaluate(&x)).zip(&accurate) {
            let scale = 1.0 + b.norm();
            prop_assert!((a - b).norm() <= 1e-12 * scale);
            prop_assert!((c - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn evaluation_is_linear_in_the_system(seed in any::<u64>(), n_vars in 1usize..5) {
        let s = random_system(seed, n_vars, 3, 3);
        let t = random_system(seed ^ 0xabcdef, n_vars, 3, 3);
        let mut rng = SeededRng::new(seed.wrapping_mul(3));
        let c = rng.complex_square();
        let x = random_point(n_vars, &mut rng);
        let lhs = s.scale(c).add(&t).unwrap().evaluate(&x).unwrap();
        let fs = s.evaluate(&x).unwrap();
        let ft = t.evaluate(&x).unwrap();
        for ((l, a), b) in lhs.iter().zip(&fs).zip(&ft) {
            let rhs = c * a + b;
            prop_assert!((l - rhs).norm() <= 1e-12 * (1.0 + rhs.norm() + a.norm()));
        }
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), n_vars in 1usize..5, n_polys in 1usize..5) {
        let s = random_system(seed, n_vars, n_polys, 3);
        let back = PolynomialSystem::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        let x = random_point(n_vars, &mut SeededRng::new(seed));
        prop_assert_eq!(back.evaluate(&x).unwrap(), s.evaluate(&x).unwrap());
    }
}

#[test]
fn bilinear_jacobian_matches_finite_differences() {
    let p = SchubertProblem::from_lists(6, 2, &vec![vec![3, 6]; 4]).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let flags = generate_flags(6, 4, seed, seed % 2 == 0).unwrap();
        let form = if seed % 3 == 0 {
            primal_dual(&p, &flags)
        } else {
            paired(&p, &flags)
        }
        .unwrap();
        let s = &form.system;
        let x = random_point(s.n_vars(), &mut SeededRng::new(seed));
        let jac = s.jacobian(&x).unwrap();
        let fd = to_naive(s).jacobian_fd(&x, 1e-6);
        for (i, row) in fd.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((jac[(i, j)] - v).norm());
            }
        }
        assert!(worst < 1e-6, "seed {seed}: {worst:e}");
    }
}

#[test]
fn random_system_jacobian_matches_finite_differences() {
    for seed in 0..50 {
        let s = random_system(seed, 4, 4, 3);
        let x = random_point(4, &mut SeededRng::new(seed + 100));
        let jac = s.jacobian(&x).unwrap();
        let fd = to_naive(&s).jacobian_fd(&x, 1e-6);
        for (i, row) in fd.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((jac[(i, j)] - v).norm() < 1e-6 * (1.0 + v.norm()));
            }
        }
    }
}

#[test]
fn cubic_determinant_has_constant_third_derivative() {
    // every condition of Gr(3,6) with codimension one, imposed as a determinant
    let p = SchubertProblem::from_lists(6, 3, &vec![vec![3, 5, 6]; 9]).unwrap();
    let flags = generate_flags(6, 9, 4, false).unwrap();
    let form = hybrid(&p, &flags, &(0..9).collect::<Vec<_>>()).unwrap();
    let s = &form.system;
    assert_eq!(s.max_degree(), 3);
    let naive = to_naive(s);
    let mut rng = SeededRng::new(17);
    let (x, y) = (random_point(9, &mut rng), random_point(9, &mut rng));
    let mut checked = 0;
    for poly in 0..s.n_polys() {
        for idx in [[0, 4, 8], [1, 5, 6], [2, 3, 7]] {
            let a = naive.third_difference(poly, &x, idx, 1e-2);
            let b = naive.third_difference(poly, &y, idx, 1e-2);
            assert!((a - b).norm() < 1e-4, "poly {poly} {idx:?}: {a} vs {b}");
            checked += usize::from(a.norm() > 1e-6);
        }
    }
    assert!(checked > 0, "every probed third derivative vanished");
}
