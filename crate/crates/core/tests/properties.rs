mod common;

use proptest::prelude::*;

use common::all_configs;
use mrcsp::algebra::{Algebra, Vector, VectorAlgebra};
use mrcsp::enumeration::Status;
use mrcsp::graph::generate_acyclic;
use mrcsp::instance::{Instance, Problem};
use mrcsp::io::parse_instance;
use mrcsp::oracle::{oracle_solve, DEFAULT_PATH_CAP};
use mrcsp::pipeline::run;
use mrcsp::stochastic::{convolve, less_eq_st_tol, meet_st, DiscreteDistribution, DEFAULT_SUPPORT_CAP};

/// `(total, highest prefix total)` under concatenation: order matters.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PrefixAlgebra;

impl Algebra for PrefixAlgebra {
    type Elem = (f64, f64);

    fn zero(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    fn combine(&self, x: &(f64, f64), y: &(f64, f64)) -> (f64, f64) {
        (x.0 + y.0, x.1.max(x.0 + y.1))
    }

    fn meet(&self, x: &(f64, f64), y: &(f64, f64)) -> (f64, f64) {
        (x.0.min(y.0), x.1.min(y.1))
    }

    fn less_eq(&self, x: &(f64, f64), y: &(f64, f64)) -> bool {
        x.0 <= y.0 && x.1 <= y.1
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn is_distributive(&self) -> bool {
        false
    }
}

/// Minimize the total while the running total never exceeds `cap`.
#[derive(Debug, Clone, PartialEq)]
struct PrefixCap {
    cap: f64,
}

impl Problem for PrefixCap {
    type A = PrefixAlgebra;

    fn algebra(&self) -> &PrefixAlgebra {
        &PrefixAlgebra
    }

    fn cost(&self, x: &(f64, f64)) -> f64 {
        x.0
    }

    fn infeasible(&self, x: &(f64, f64)) -> bool {
        x.1 > self.cap
    }

    fn scalarize(&self, x: &(f64, f64)) -> f64 {
        x.0
    }

    fn morphism(&self, x: &(f64, f64)) -> Option<f64> {
        Some(x.0)
    }

    fn morphism_bounds_cost(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "prefix"
    }
}

fn dist(offset: i64, weights: &[f64]) -> DiscreteDistribution {
    let total: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
    DiscreteDistribution::from_probabilities(offset, &p).unwrap()
}

fn dist_strategy() -> impl Strategy<Value = DiscreteDistribution> {
    (-5i64..5, prop::collection::vec(0.01f64..1.0, 1..12)).prop_map(|(o, w)| dist(o, &w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn non_commutative_prefix_problem_matches_oracle(
        n in 4usize..8,
        extra in 0usize..8,
        seed in 0u64..1000,
        weights in prop::collection::vec(-5i32..10, 32),
        cap in 0i32..25,
    ) {
        let g = generate_acyclic(n, (n + extra).min(n * (n - 1) / 2), seed).unwrap();
        let res: Vec<(f64, f64)> = (0..g.graph.arc_count())
            .map(|a| {
                let w = weights[a % weights.len()] as f64;
                (w, w.max(0.0))
            })
            .collect();
        let inst = Instance::new(g.graph, g.origin, g.destination, res, PrefixCap { cap: cap as f64 }).unwrap();
        let opt = oracle_solve(&inst, DEFAULT_PATH_CAP).unwrap();
        for options in all_configs(true, 3) {
            let r = run(&inst, &options).unwrap().solve;
            match &opt {
                None => prop_assert_eq!(r.status, Status::Infeasible),
                Some(s) => {
                    prop_assert_eq!(r.status, Status::Optimal, "{}", options.config.tag());
                    prop_assert_eq!(r.upper_bound, s.cost, "{}", options.config.tag());
                    let path = r.path.unwrap();
                    prop_assert_eq!(inst.path_resource(&path.arcs), r.resource.unwrap());
                }
            }
        }
    }

    #[test]
    fn vector_algebra_laws(
        x in prop::collection::vec(-50i32..50, 3),
        y in prop::collection::vec(-50i32..50, 3),
        z in prop::collection::vec(-50i32..50, 3),
    ) {
        let alg = VectorAlgebra::new(3);
        let v = |c: &[i32]| Vector(c.iter().map(|&a| a as f64).collect());
        let (x, y, z) = (v(&x), v(&y), v(&z));
        prop_assert_eq!(alg.combine(&alg.combine(&x, &y), &z), alg.combine(&x, &alg.combine(&y, &z)));
        prop_assert_eq!(alg.combine(&x, &alg.zero()), x.clone());
        let m = alg.meet(&x, &y);
        prop_assert!(alg.less_eq(&m, &x) && alg.less_eq(&m, &y));
        if alg.less_eq(&z, &x) && alg.less_eq(&z, &y) {
            prop_assert!(alg.less_eq(&z, &m));
        }
        prop_assert_eq!(alg.combine(&z, &m), alg.meet(&alg.combine(&z, &x), &alg.combine(&z, &y)));
        if alg.less_eq(&x, &y) {
            prop_assert!(alg.less_eq(&alg.combine(&x, &z), &alg.combine(&y, &z)));
        }
    }

    #[test]
    fn convolution_is_associative_and_commutative(a in dist_strategy(), b in dist_strategy(), c in dist_strategy()) {
        let conv = |x: &DiscreteDistribution, y: &DiscreteDistribution| convolve(x, y, DEFAULT_SUPPORT_CAP).unwrap();
        let l = conv(&conv(&a, &b), &c);
        let r = conv(&a, &conv(&b, &c));
        prop_assert!(less_eq_st_tol(&l, &r, 1e-12) && less_eq_st_tol(&r, &l, 1e-12));
        let ab = conv(&a, &b);
        let ba = conv(&b, &a);
        prop_assert!(less_eq_st_tol(&ab, &ba, 1e-12) && less_eq_st_tol(&ba, &ab, 1e-12));
        prop_assert!((ab.expectation() - a.expectation() - b.expectation()).abs() < 1e-9);
    }

    #[test]
    fn meet_is_greatest_lower_bound(a in dist_strategy(), b in dist_strategy(), c in dist_strategy()) {
        let m = meet_st(&a, &b);
        prop_assert!(less_eq_st_tol(&m, &a, 0.0) && less_eq_st_tol(&m, &b, 0.0));
        let lower = meet_st(&m, &c);
        prop_assert!(less_eq_st_tol(&lower, &m, 0.0));
        prop_assert!(m.support_min() == a.support_min().min(b.support_min()));
    }

    #[test]
    fn instance_text_round_trips(seed in 0u64..200) {
        let item = common::small_instance(seed);
        let text = item.instance.to_text();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
    }
}
