use proptest::prelude::*;
use twisted_schur::cohomology::{h2_class_representatives, twisted_multiplier, UnitCocycle};
use twisted_schur::extensions::build_extension;
use twisted_schur::group::standard_group;
use twisted_schur::repgroups::{twisted_representation_groups, SearchOptions};
use twisted_schur::semiprojective::{
    extract_cocycle, lift_over_extension, regular_semiprojective_rep, verify_lift, verify_semiprojective,
    LiftOutcome, MonomialMap,
};
use twisted_schur::{Budget, FiniteGroup, SignCharacter, StandardFamily, TwistedModule};

fn grp(f: StandardFamily) -> FiniteGroup {
    standard_group(&f, &Budget::default()).unwrap()
}

#[test]
fn z2_conj_lifts_over_z4_to_the_quarter_turn() {
    let b = Budget::default();
    let z2 = grp(StandardFamily::Cyclic { n: 2 });
    let conj = SignCharacter::from_generators(&z2, &[-1]).unwrap();
    let mult = twisted_multiplier(&z2, &conj, &b).unwrap();
    let alpha = UnitCocycle::from_fn(2, 2, 2, |_| 1).unwrap();
    let f = regular_semiprojective_rep(&z2, &alpha, &conj).unwrap();
    let a = TwistedModule::trivial(&z2, 0, &[2]).unwrap();
    let classes = h2_class_representatives(&z2, &a, &b).unwrap();
    let z4 = build_extension(&z2, &a, &classes[1], &b).unwrap();
    let LiftOutcome::Lifted(lift) = lift_over_extension(&f, &z4, &mult, &b).unwrap() else {
        panic!("lift over Z4 must exist");
    };
    let gen = &lift.maps[z4.section()[1]];
    assert_eq!(gen, &MonomialMap::new(vec![1, 0], vec![0, 1], true, 2).unwrap());
    assert_eq!(z4.gamma().element_order(z4.section()[1]), 4);

    let split = build_extension(&z2, &a, &classes[0], &b).unwrap();
    let LiftOutcome::Failed(fail) = lift_over_extension(&f, &split, &mult, &b).unwrap() else {
        panic!("no lift over the split extension");
    };
    assert_eq!(fail.required_class, vec![1]);
    assert_eq!(fail.transgression_image, vec![vec![0]]);
}

#[test]
fn trivial_class_lifts_with_trivial_character() {
    let b = Budget::default();
    let d4 = grp(StandardFamily::Dihedral { n: 4 });
    let phi = SignCharacter::from_generators(&d4, &[1, -1]).unwrap();
    let mult = twisted_multiplier(&d4, &phi, &b).unwrap();
    let f = regular_semiprojective_rep(&d4, &UnitCocycle::zero(8, 2), &phi).unwrap();
    let a = TwistedModule::trivial(&d4, 0, &[2]).unwrap();
    let ext = build_extension(&d4, &a, &h2_class_representatives(&d4, &a, &b).unwrap()[3], &b).unwrap();
    let LiftOutcome::Lifted(lift) = lift_over_extension(&f, &ext, &mult, &b).unwrap() else {
        panic!("trivial class must lift");
    };
    assert!(lift.lambda.is_trivial());
}

/// Every class over μ_N lifts to every representation group.
#[test]
fn lift_completeness_on_representation_groups() {
    let b = Budget::default();
    let cases = [
        (grp(StandardFamily::Cyclic { n: 2 }), vec![vec![-1]]),
        (grp(StandardFamily::Dihedral { n: 4 }), vec![vec![1, 1], vec![-1, -1], vec![1, -1], vec![-1, 1]]),
    ];
    for (g, actions) in cases {
        for signs in actions {
            let phi = SignCharacter::from_generators(&g, &signs).unwrap();
            let mult = twisted_multiplier(&g, &phi, &b).unwrap();
            let n = mult.exponent();
            let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|&x| vec![vec![phi.value(x)]]).collect();
            let mu = TwistedModule::finite(&g, &[n], &gens).unwrap();
            let reps = twisted_representation_groups(&g, &phi, &b, &SearchOptions::default()).unwrap();
            for cls in h2_class_representatives(&g, &mu, &b).unwrap() {
                let alpha = UnitCocycle::new(n, cls).unwrap();
                let f = regular_semiprojective_rep(&g, &alpha, &phi).unwrap();
                for out in &reps.groups {
                    match lift_over_extension(&f, &out.witness, &mult, &b).unwrap() {
                        LiftOutcome::Lifted(l) => verify_lift(&f, &out.witness, &l.maps).unwrap(),
                        LiftOutcome::Failed(e) => panic!("{signs:?}: no lift to {}: {e:?}", out.group.name()),
                    }
                }
            }
        }
    }
}

fn small_groups() -> Vec<(FiniteGroup, Vec<Vec<i64>>)> {
    vec![
        (grp(StandardFamily::Cyclic { n: 2 }), vec![vec![1], vec![-1]]),
        (grp(StandardFamily::Cyclic { n: 4 }), vec![vec![1], vec![-1]]),
        (grp(StandardFamily::Dihedral { n: 2 }), vec![vec![1, 1], vec![-1, 1], vec![-1, -1]]),
        (grp(StandardFamily::Dihedral { n: 3 }), vec![vec![1, 1], vec![-1, 1]]),
        (grp(StandardFamily::Dihedral { n: 4 }), vec![vec![1, 1], vec![1, -1]]),
        (grp(StandardFamily::GeneralizedQuaternion { order: 8 }), vec![vec![1, 1], vec![-1, 1]]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    /// Random cocycles: coboundary shifts of random class combinations.
    #[test]
    fn extract_inverts_regular(gi in 0usize..6, ai in 0usize..3, n in 1u64..9, seed in proptest::collection::vec(-20i64..20, 8), pick in 0usize..64) {
        let b = Budget::default();
        let (g, actions) = &small_groups()[gi];
        let phi = SignCharacter::from_generators(g, &actions[ai % actions.len()]).unwrap();
        let alpha = if n >= 2 {
            let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|&x| vec![vec![phi.value(x)]]).collect();
            let mu = TwistedModule::finite(g, &[n], &gens).unwrap();
            let classes = h2_class_representatives(g, &mu, &b).unwrap();
            let base = UnitCocycle::new(n, classes[pick % classes.len()].clone()).unwrap();
            let tau = UnitCocycle::from_fn(g.order(), 1, n, |t| seed[t[0] % seed.len()]).unwrap();
            let z = twisted_schur::TwistedModule::sign_module(g, &phi).unwrap();
            let dtau = UnitCocycle::new(n, twisted_schur::cohomology::coboundary(g, &z, tau.table())).unwrap();
            base.add(&dtau).unwrap()
        } else {
            UnitCocycle::zero(g.order(), 2)
        };
        prop_assert!(alpha.is_cocycle(g, &phi).unwrap());
        let f = regular_semiprojective_rep(g, &alpha, &phi).unwrap();
        prop_assert!(verify_semiprojective(g, &f));
        let back = extract_cocycle(g, &f).unwrap();
        prop_assert_eq!(back.with_modulus(alpha.modulus()).unwrap(), alpha.clone());
        prop_assert!(back.is_cocycle(g, &phi).unwrap());
    }

    #[test]
    fn monomial_composition_is_associative(
        p in proptest::collection::vec(Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), 3),
        e in proptest::collection::vec(proptest::collection::vec(0i64..12, 4), 3),
        c in proptest::collection::vec(any::<bool>(), 3),
        m in proptest::collection::vec(1u64..7, 3),
    ) {
        let maps: Vec<MonomialMap> = (0..3).map(|i| MonomialMap::new(p[i].clone(), e[i].clone(), c[i], m[i]).unwrap()).collect();
        let left = maps[0].compose(&maps[1]).compose(&maps[2]);
        let right = maps[0].compose(&maps[1].compose(&maps[2]));
        prop_assert_eq!(left.normalized(), right.normalized());
        prop_assert_eq!(left.conj, c[0] ^ c[1] ^ c[2]);
    }
}
