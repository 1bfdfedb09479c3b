mod common;

use hyperbalance::balancer::{balance, SolveParams};
use hyperbalance::hypercore::canonical_code;
use hyperbalance::treesolver::{response_inverse, root_load_exceeds, tree_loads, DirectedSubtree};
use hyperbalance::{seed, Baseload, RootedHypertree};
use proptest::prelude::*;
use rand::Rng;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypertree_test_agrees_with_closed_path_search(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = if rng.gen_bool(0.5) { random_hypertree(&mut rng, 9) } else { random_hypergraph(&mut rng, 7) };
        prop_assert_eq!(h.is_hypertree(), !has_closed_path(&h));
    }

    #[test]
    fn recursion_loads_match_balancing(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let t = random_hypertree(&mut rng, 40);
        let root = rng.gen_range(0..t.n());
        let (_, l) = balance(&t, &Baseload::zeros(t.n()), &SolveParams::exact()).unwrap();
        let tree = RootedHypertree::spanning(t, root).unwrap();
        let r = tree_loads(&tree, 1e-9).unwrap();
        prop_assert!(sup_distance(&r, &l.loads) < 1e-6);
        let x = l.loads[root];
        prop_assert!(root_load_exceeds(&tree, x - 1e-7));
        prop_assert!(!root_load_exceeds(&tree, x + 1e-7));
    }

    #[test]
    fn response_is_nondecreasing_and_nonexpansive(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let h = random_hypergraph(&mut rng, 10);
        let i = rng.gen_range(0..h.n());
        let rho = |t: f64| balance(&h, &Baseload::point(h.n(), i, t), &SolveParams::exact()).unwrap().1.loads[i];
        let grid: Vec<f64> = (0..8).map(|k| 0.4 * k as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| rho(t)).collect();
        for (t, v) in grid.iter().zip(&vals) {
            prop_assert!(v - t >= -1e-8 && v - t <= h.degree(i) as f64 + 1e-8);
        }
        for k in 1..grid.len() {
            let d = vals[k] - vals[k - 1];
            prop_assert!(d >= -1e-8 && d <= grid[k] - grid[k - 1] + 1e-8);
        }
    }

    #[test]
    fn inverse_response_grows_at_least_like_t(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let t = random_hypertree(&mut rng, 25);
        let i = rng.gen_range(0..t.n());
        let cut = t.incident(i).first().copied().filter(|_| rng.gen_bool(0.5));
        let sub = DirectedSubtree::new(&t, cut, i).unwrap();
        let grid: Vec<f64> = (0..30).map(|k| -1.0 + 0.2 * k as f64).collect();
        for w in grid.windows(2) {
            let d = response_inverse(&sub, w[1]) - response_inverse(&sub, w[0]);
            // ρ is nondecreasing with slope at most 1, so its inverse
            // grows at least as fast as t
            prop_assert!(d >= w[1] - w[0] - 1e-12, "{w:?}: {d}");
        }
    }

    #[test]
    fn canonical_codes_detect_isomorphism(s in any::<u64>()) {
        let mut rng = seed::rng(s);
        let a = random_hypertree(&mut rng, 7);
        let b = random_hypertree(&mut rng, 7);
        let (ra, rb) = (rng.gen_range(0..a.n()), rng.gen_range(0..b.n()));
        let ca = canonical_code(&RootedHypertree::spanning(a.clone(), ra).unwrap()).unwrap();
        let cb = canonical_code(&RootedHypertree::spanning(b.clone(), rb).unwrap()).unwrap();
        prop_assert_eq!(ca == cb, rooted_isomorphic(&a, ra, &b, rb));
    }
}

#[test]
fn relabelled_copies_share_a_code() {
    let mut rng = seed::rng(3);
    for _ in 0..50 {
        let a = random_hypertree(&mut rng, 12);
        let mut perm: Vec<usize> = (0..a.n()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let edges = a.edges().iter().rev().map(|e| e.iter().rev().map(|&v| perm[v]).collect()).collect();
        let b = hyperbalance::Hypergraph::new(a.n(), edges).unwrap();
        let ca = canonical_code(&RootedHypertree::spanning(a, 0).unwrap()).unwrap();
        let cb = canonical_code(&RootedHypertree::spanning(b, perm[0]).unwrap()).unwrap();
        assert_eq!(ca, cb);
    }
}
