use banach_cover::covering::{
    estimate_covering_constant, theoretical_covering_constant, witness_zero_ball, witness_zero_cone,
    witness_zero_cylinder, Target, WitnessRecord,
};
use banach_cover::{ConvexSet, IndexMask, LpVector, MeasureGrid, Point, StepFunction};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.5), Just(2.0), Just(3.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_witnesses_certify(p in exponent(), x in prop::collection::vec(-3.0f64..3.0, 1..=5), eta in 1e-3f64..5.0, r in 0.2f64..3.0) {
        let v = LpVector::new(p, x).unwrap();
        let set = ConvexSet::ball(r).unwrap();
        match witness_zero_ball(&v, eta, r) {
            Some(w) => {
                prop_assert!(w.certify(&set, &v, eta).unwrap());
                prop_assert!((w.dual.norm() - 1.0).abs() <= 1e-9);
            }
            // only when every admissible point is interior
            None => prop_assert!(eta < r - v.norm()),
        }
    }

    #[test]
    fn cylinder_witnesses_certify(p in exponent(), x in prop::collection::vec(-3.0f64..3.0, 2..=5), eta in 1e-3f64..5.0, r in 0.2f64..3.0) {
        let v = LpVector::new(p, x).unwrap();
        let mask = IndexMask::from_zero_based(0..v.len() - 1).unwrap();
        let set = ConvexSet::cylinder(r, mask.clone()).unwrap();
        match witness_zero_cylinder(&v, eta, r, &mask).unwrap() {
            Some(w) => prop_assert!(w.certify(&set, &v, eta).unwrap()),
            None => prop_assert!(eta < r - v.restrict(&mask).unwrap().norm()),
        }
    }

    #[test]
    fn cone_witnesses_always_apply(p in exponent(), (f, w) in (2usize..=8).prop_flat_map(|n| (
        prop::collection::vec(-4.0f64..4.0, n),
        prop::collection::vec(0.05f64..3.0, n),
    )), eta in 1e-4f64..5.0) {
        let grid = MeasureGrid::new(w).unwrap();
        let f = StepFunction::new(p, f).unwrap();
        let wit = witness_zero_cone(&f, eta, &grid).unwrap();
        prop_assert!(wit.certify(eta).unwrap());
        prop_assert!((wit.grid.total_measure() - grid.total_measure()).abs() <= 1e-12 * grid.total_measure());
    }

    #[test]
    fn reports_are_monotone_upper_bounds(p in exponent(), x in prop::collection::vec(-2.0f64..2.0, 2..=4), seed in any::<u64>()) {
        let base = Point::Vector(LpVector::new(p, x).unwrap());
        let target = Target::Projection(ConvexSet::ball(1.0).unwrap());
        let etas = banach_cover::covering::default_eta_grid(&target, &base).unwrap();
        let report = estimate_covering_constant(&target, &base, &etas, 20, seed).unwrap();
        prop_assert!(report.per_eta_inf.windows(2).all(|w| w[1] <= w[0]));
        let max = report.per_eta_inf.iter().copied().fold(0.0, f64::max);
        prop_assert_eq!(report.alpha_hat, max);
        let theory = theoretical_covering_constant(&target, &base).unwrap();
        prop_assert!((report.alpha_hat - theory).abs() <= 1e-9);
        for w in &report.witnesses {
            prop_assert!(matches!(w.witness, WitnessRecord::Vector(_)));
        }
    }
}
