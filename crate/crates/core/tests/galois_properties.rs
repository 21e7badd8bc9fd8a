//! Properties of the inf-extension, the two closure operators and the random
//! set `Q(U)`.

use cone_quantile_core::galois::{
    adjunction_check, cl_phi_member, cl_psi_member, inf_extension, level_from_quantiles, PhiClosure,
};
use cone_quantile_core::random_set::{capacity_exact, capacity_mc, draw, hits};
use cone_quantile_core::{
    CompactTestSet, ConeCdf, ConvexCone, EmpiricalSample, GenSet, ProbeGrid, QuantileFn, SeededRng, Vector, MASS_TOL,
};
use proptest::prelude::*;

const RES: usize = 48;

fn point(lo: f64, hi: f64) -> impl Strategy<Value = Vector> {
    (lo..hi, lo..hi).prop_map(|(x, y)| Vector::from([x, y]))
}

fn sample() -> impl Strategy<Value = EmpiricalSample> {
    prop::collection::vec(point(0.0, 1.0), 2..20).prop_map(|v| EmpiricalSample::new(v).unwrap())
}

fn genset(max: usize) -> impl Strategy<Value = GenSet> {
    prop::collection::vec(point(-0.2, 1.2), 1..=max).prop_map(|v| GenSet::new(2, v).unwrap())
}

fn cone() -> impl Strategy<Value = ConvexCone> {
    prop_oneof![
        Just(ConvexCone::orthant(2)),
        Just(ConvexCone::zero(2)),
        (0.0..std::f64::consts::TAU, 0.1..3.0f64).prop_map(|(a, w)| {
            let b = a + w;
            ConvexCone::from_generators(2, vec![Vector::from([a.cos(), a.sin()]), Vector::from([b.cos(), b.sin()])])
                .unwrap()
        }),
    ]
}

fn quantile(s: EmpiricalSample, cone: ConvexCone) -> QuantileFn {
    QuantileFn::new(ConeCdf::new(s, cone, RES).unwrap())
}

fn probes(q: &QuantileFn, set: &GenSet) -> Vec<Vector> {
    ProbeGrid::around(q.cdf().model(), set.points(), 11).unwrap().points().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjunction(s in sample(), cone in cone(), set in genset(5), p in 0.0..=1.0f64) {
        let q = quantile(s, cone);
        let (lhs, rhs) = adjunction_check(&q, p, &set).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_closure_laws(s in sample(), cone in cone(), set in genset(4), extra in genset(2)) {
        let q = quantile(s, cone);
        let region = set.region(q.cdf()).unwrap();
        let larger = set.union(&extra).unwrap();
        let zs = probes(&q, &set);
        let closure: Vec<bool> = zs.iter().map(|z| cl_psi_member(&q, &set, z).unwrap()).collect();
        let mut points = set.points().to_vec();
        points.extend(zs.iter().zip(&closure).filter(|(_, &c)| c).map(|(z, _)| z.clone()));
        let closed = GenSet::new(2, points).unwrap();
        for (z, &inside) in zs.iter().zip(&closure) {
            if region.member(z).unwrap() {
                prop_assert!(inside);
            }
            if inside {
                prop_assert!(cl_psi_member(&q, &larger, z).unwrap());
            }
            prop_assert_eq!(cl_psi_member(&q, &closed, z).unwrap(), inside);
        }
    }

    #[test]
    fn phi_closure_laws(s in sample(), set in genset(3), extra in genset(2)) {
        let q = quantile(s, ConvexCone::orthant(2));
        let cdf = q.cdf();
        let region = set.region(cdf).unwrap();
        let larger = set.union(&extra).unwrap();
        let zs = probes(&q, &set);
        let phi = PhiClosure::new(cdf, &set).unwrap();
        let closure: Vec<bool> = zs.iter().map(|z| phi.contains(z).unwrap()).collect();
        let mut points = set.points().to_vec();
        points.extend(zs.iter().zip(&closure).filter(|(_, &c)| c).map(|(z, _)| z.clone()));
        let closed = GenSet::new(2, points).unwrap();
        let phi_larger = PhiClosure::new(cdf, &larger).unwrap();
        let phi_closed = PhiClosure::new(cdf, &closed).unwrap();
        for (z, &inside) in zs.iter().zip(&closure) {
            if region.member(z).unwrap() {
                prop_assert!(inside);
            }
            if inside {
                prop_assert!(phi_larger.contains(z).unwrap());
            }
            prop_assert_eq!(phi_closed.contains(z).unwrap(), inside);
        }
    }

    #[test]
    fn sandwich(s in sample(), cone in cone(), set in genset(4)) {
        let q = quantile(s, cone);
        let region = set.region(q.cdf()).unwrap();
        for z in probes(&q, &set) {
            let phi = cl_phi_member(q.cdf(), &set, &z).unwrap();
            if region.member(&z).unwrap() {
                prop_assert!(phi);
            }
            if phi {
                prop_assert!(cl_psi_member(&q, &set, &z).unwrap());
            }
        }
    }

    #[test]
    fn ray_dual_closures_agree(s in sample(), a in 0.0..std::f64::consts::TAU, set in genset(4)) {
        let cone = ConvexCone::halfspace(Vector::from([a.cos(), a.sin()])).unwrap();
        let q = quantile(s, cone);
        for z in probes(&q, &set) {
            prop_assert_eq!(cl_phi_member(q.cdf(), &set, &z).unwrap(), cl_psi_member(&q, &set, &z).unwrap());
        }
    }

    #[test]
    fn inf_stability(s in sample(), cone in cone(), family in prop::collection::vec(genset(4), 1..=4)) {
        let q = quantile(s, cone);
        let merged = family[1..].iter().fold(family[0].clone(), |acc, g| acc.union(g).unwrap());
        let each = family.iter().map(|g| inf_extension(q.cdf(), g).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(inf_extension(q.cdf(), &merged).unwrap(), each);
    }

    #[test]
    fn reconstruction(s in sample(), cone in cone(), set in genset(4), z in point(-0.2, 1.2), p in 0.0..=1.0f64) {
        let q = quantile(s, cone);
        let value = inf_extension(q.cdf(), &set).unwrap();
        let level = level_from_quantiles(&q, &set, 100).unwrap();
        prop_assert!(level <= value + MASS_TOL && level >= value - 0.01 - MASS_TOL);
        let single = GenSet::new(2, vec![z.clone()]).unwrap();
        let from_sets = p <= 0.0 || inf_extension(q.cdf(), &single).unwrap() >= p - MASS_TOL;
        prop_assert_eq!(q.member(p, &z).unwrap(), from_sets);
    }

    #[test]
    fn shift_lowers_inf_extension(s in sample(), set in genset(4), a in 0.0..0.5f64, b in 0.0..0.5f64) {
        let shifted = s.shifted(&[a, b]).unwrap();
        let before = inf_extension(quantile(s, ConvexCone::orthant(2)).cdf(), &set).unwrap();
        let after = inf_extension(quantile(shifted, ConvexCone::orthant(2)).cdf(), &set).unwrap();
        prop_assert!(after <= before);
    }

    #[test]
    fn hits_match_capacity(s in sample(), ks in prop::collection::vec(point(-0.2, 1.2), 1..6), us in prop::collection::vec(0.0..1.0f64, 20)) {
        let q = quantile(s, ConvexCone::orthant(2));
        let k = CompactTestSet::new(ks).unwrap();
        let t = capacity_exact(q.cdf(), &k).unwrap();
        for u in us {
            prop_assert_eq!(hits(&q, u, &k).unwrap(), u <= t + MASS_TOL);
        }
    }

    #[test]
    fn capacity_structure(s in sample(), k1 in prop::collection::vec(point(-0.2, 1.2), 1..5), k2 in prop::collection::vec(point(-0.2, 1.2), 1..5)) {
        let q = quantile(s, ConvexCone::orthant(2));
        let t1 = capacity_exact(q.cdf(), &CompactTestSet::new(k1.clone()).unwrap()).unwrap();
        let t2 = capacity_exact(q.cdf(), &CompactTestSet::new(k2.clone()).unwrap()).unwrap();
        let both = capacity_exact(q.cdf(), &CompactTestSet::new([k1.clone(), k2].concat()).unwrap()).unwrap();
        prop_assert_eq!(both, t1.max(t2));
        prop_assert!(t1 <= both);
        let single = capacity_exact(q.cdf(), &CompactTestSet::new(vec![k1[0].clone()]).unwrap()).unwrap();
        prop_assert_eq!(single, q.cdf().lower_cdf(&k1[0]).unwrap());
    }

    #[test]
    fn seeded_draws_repeat(s in sample(), seed in any::<u64>()) {
        let q = quantile(s, ConvexCone::orthant(2));
        let (mut a, mut b) = (SeededRng::new(seed), SeededRng::new(seed));
        for _ in 0..5 {
            let (x, y) = (draw(&q, &mut a).unwrap(), draw(&q, &mut b).unwrap());
            prop_assert_eq!(x.u.to_bits(), y.u.to_bits());
            prop_assert_eq!(x.region, y.region);
        }
    }
}

#[test]
fn monte_carlo_within_three_errors() {
    let s = EmpiricalSample::new(vec![
        Vector::from([0.0, 0.0]),
        Vector::from([1.0, 0.0]),
        Vector::from([0.0, 1.0]),
        Vector::from([1.0, 1.0]),
    ])
    .unwrap();
    let q = quantile(s, ConvexCone::orthant(2));
    let k = CompactTestSet::new(vec![Vector::from([0.0, 0.0]), Vector::from([0.5, 2.0])]).unwrap();
    let within = (0..100u64)
        .filter(|&seed| {
            let e = capacity_mc(&q, &k, 5000, seed).unwrap();
            (e.mc_estimate - e.exact).abs() <= 3.0 * e.std_error
        })
        .count();
    assert!(within >= 99, "{within}/100");
}
