mod common;

use bestpair::harness::metric_ddelta;
use bestpair::operators::{argmax_dual, prox_norm_diff, prox_sqnorm_diff, subgrad_norm_diff};
use bestpair::problem::{Ball, BoxSet, Halfspace, PairedHalfspaces};
use bestpair::{
    builtin_toy, load_problem, serialize_problem, ConvexSetSpec, Exponent, ObjectiveParams, Pair,
    Vector,
};
use proptest::prelude::*;

const N: usize = 3;

fn vector(scale: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-scale..scale, N).prop_map(Vector::from)
}

fn nonzero_vector() -> impl Strategy<Value = Vector> {
    vector(5.0).prop_filter("normal must not vanish", |v| v.norm() > 1e-3)
}

fn pair() -> impl Strategy<Value = Pair> {
    (vector(20.0), vector(20.0)).prop_map(|(x, y)| Pair::new(x, y))
}

fn set() -> impl Strategy<Value = ConvexSetSpec> {
    prop_oneof![
        (nonzero_vector(), -5.0..5.0f64)
            .prop_map(|(a, b)| ConvexSetSpec::Halfspace(Halfspace::new(a, b).unwrap())),
        (
            prop::collection::vec(-5.0..5.0f64, N),
            prop::collection::vec(0.0..5.0f64, N)
        )
            .prop_map(|(lo, w)| {
                let hi = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
                ConvexSetSpec::Box(BoxSet::new(lo, hi).unwrap())
            }),
        (vector(5.0), 0.01..5.0f64)
            .prop_map(|(c, r)| ConvexSetSpec::Ball(Ball::new(c, r).unwrap())),
        (
            nonzero_vector(),
            -5.0..5.0f64,
            nonzero_vector(),
            -5.0..5.0f64
        )
            .prop_filter_map("intersection must be nonempty", |(a1, b1, a2, b2)| {
                PairedHalfspaces::new(
                    Halfspace::new(a1, b1).unwrap(),
                    Halfspace::new(a2, b2).unwrap(),
                )
                .ok()
                .map(ConvexSetSpec::PairedHalfspaces)
            }),
    ]
}

proptest! {
    #[test]
    fn projection_lands_in_set_and_is_idempotent(s in set(), w in vector(20.0)) {
        let p = s.project(&w);
        prop_assert!(s.distance(&p) <= 1e-9 * (1.0 + p.norm()));
        prop_assert!(s.project(&p).dist(&p) <= 1e-10 * (1.0 + p.norm()));
    }

    #[test]
    fn projection_is_firmly_nonexpansive(s in set(), u in vector(20.0), v in vector(20.0)) {
        let d = &s.project(&u) - &s.project(&v);
        prop_assert!(d.norm_sq() <= d.dot(&(&u - &v)) + 1e-10 * (1.0 + u.norm_sq() + v.norm_sq()));
    }

    #[test]
    fn prox_maps_keep_the_sum(z in pair(), alpha in 0.01..10.0f64) {
        let sum = &z.x + &z.y;
        for p in [prox_norm_diff(alpha, &z), prox_sqnorm_diff(alpha, &z)] {
            prop_assert!((&p.x + &p.y).dist(&sum) <= 1e-10 * (1.0 + sum.norm()));
        }
    }

    #[test]
    fn prox_norm_diff_matches_newton(z in pair(), alpha in 0.05..8.0f64) {
        let oracle = common::oracle_prox_norm_diff(alpha, &z);
        prop_assert!(prox_norm_diff(alpha, &z).dist(&oracle) < 1e-6);
    }

    #[test]
    fn argmax_zeroes_the_gradient(s in pair(), alpha in 0.01..10.0f64, eps in 0.01..2.0f64) {
        let params = ObjectiveParams::new(alpha, Exponent::Two, eps).unwrap();
        let w = argmax_dual(&params, &s).unwrap();
        prop_assert!(common::grad_f0(alpha, eps, &w).dist(&s) <= 1e-9 * (1.0 + s.norm()));
    }

    #[test]
    fn norm_subgradient_inequality(z in pair(), d in pair(), alpha in 0.01..10.0f64, diag in any::<bool>()) {
        let z = if diag { Pair::diagonal(z.x.clone()) } else { z };
        let h = |w: &Pair| alpha * w.gap().norm();
        let g = subgrad_norm_diff(alpha, &z);
        let moved = &z + &d;
        prop_assert!(h(&moved) >= h(&z) + g.dot(&d) - 1e-10 * (1.0 + h(&moved)));
    }

    #[test]
    fn ddelta_dominates_gap(x in prop::collection::vec(-20.0..20.0f64, 2), y in prop::collection::vec(-20.0..20.0f64, 2)) {
        let toy = builtin_toy();
        let z = Pair::new(Vector::from(x), Vector::from(y));
        let feasible = toy.constraints().iter().all(|c| c.distance(&z) == 0.0);
        let d = metric_ddelta(&z, &toy, 0.1);
        prop_assert!(d >= z.gap().norm());
        prop_assert_eq!(d == z.gap().norm(), feasible);
    }

    #[test]
    fn problem_documents_round_trip(a in prop::collection::vec((nonzero_vector(), -5.0..5.0f64), 1..4)) {
        let sets: Vec<_> = a.into_iter().map(|(n, b)| ConvexSetSpec::halfspace(n, b).unwrap()).collect();
        let problem = bestpair::ProblemInstance::new(N, sets.clone(), vec![ConvexSetSpec::unbounded(N)], None).unwrap();
        let back = load_problem(&serialize_problem(&problem)).unwrap();
        prop_assert_eq!(back, problem);
    }
}
