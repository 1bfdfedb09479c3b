mod common;

use hyperbalance::balancer::{self, balance, balance_from, loads, variational_gap, verify_balanced, Allocation, SolveParams};
use hyperbalance::{seed, Baseload};
use proptest::prelude::*;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn loads_do_not_depend_on_the_start(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 16);
        let b = random_baseload(&mut rng, h.n());
        let (theta, reference) = balance(&h, &b, &SolveParams::exact()).unwrap();
        prop_assert!(verify_balanced(&h, &theta, &b, 1e-8).passed);
        for _ in 0..3 {
            let init = Allocation::random(&h, &mut rng);
            let (_, l) = balance_from(&h, &b, init, &SolveParams::exact()).unwrap();
            prop_assert!(l.sup_distance(&reference) < 1e-6);
        }
    }

    #[test]
    fn balanced_loads_solve_the_quadratic_program(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 10);
        let b = random_baseload(&mut rng, h.n());
        let (_, l) = balance(&h, &b, &SolveParams::exact()).unwrap();
        prop_assert!(sup_distance(&l.loads, &qp_loads(&h, &b, 1e-10)) < 1e-5);
    }

    #[test]
    fn no_allocation_has_smaller_square_sum(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 12);
        let b = Baseload::zeros(h.n());
        let (_, best) = balance(&h, &b, &SolveParams::exact()).unwrap();
        let obj = |l: &[f64]| l.iter().map(|x| x * x).sum::<f64>();
        for _ in 0..20 {
            let other = loads(&h, &Allocation::random(&h, &mut rng), &b).unwrap();
            prop_assert!(obj(&best.loads) <= obj(&other.loads) + 1e-9);
        }
    }

    #[test]
    fn variational_identity(s in any::<u64>(), t in -0.5f64..3.0) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 14);
        let (theta, _) = balance(&h, &Baseload::zeros(h.n()), &SolveParams::exact()).unwrap();
        prop_assert!(variational_gap(&h, &theta, t).unwrap() <= 1e-6);
    }

    #[test]
    fn epsilon_loads_approach_balanced_loads(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 8);
        let b = Baseload::zeros(h.n());
        let (_, exact) = balance(&h, &b, &SolveParams::exact()).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let theta = balancer::epsilon_balance(&h, &b, &SolveParams::with_epsilon(eps)).unwrap();
            let gap = loads(&h, &theta, &b).unwrap().sup_distance(&exact);
            prop_assert!(gap <= last + 1e-9, "eps {eps}: {gap} after {last}");
            last = gap;
        }
        prop_assert!(last < 5e-3);
    }
}

#[test]
fn total_load_is_edge_count_plus_baseload() {
    let mut rng = seed::rng(5);
    for _ in 0..20 {
        let h = random_hypergraph(&mut rng, 20);
        let b = random_baseload(&mut rng, h.n());
        let (_, l) = balance(&h, &b, &SolveParams::exact()).unwrap();
        assert!((l.sum() - h.num_edges() as f64 - b.total()).abs() < 1e-9);
    }
}
