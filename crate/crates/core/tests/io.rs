use twisted_schur::cohomology::{cohomology_group, twisted_multiplier, UnitCocycle};
use twisted_schur::cyclotomic::{HeisenbergSetup, SemilinearMatrix};
use twisted_schur::io::*;
use twisted_schur::repgroups::{twisted_representation_groups, SearchOptions};
use twisted_schur::semiprojective::regular_semiprojective_rep;
use twisted_schur::{Budget, Error, StandardFamily};

fn text(v: &serde_json::Value) -> String {
    to_pretty(v)
}

#[test]
fn permutation_files_accept_both_bases() {
    let b = Budget::default();
    let zero = parse_group(r#"{"permutations": [[1,2,3,0],[0,3,2,1]]}"#, &b).unwrap();
    let one = parse_group(r#"{"permutations": [[2,3,4,1],[1,4,3,2]]}"#, &b).unwrap();
    assert_eq!(zero.order(), 8);
    assert_eq!(zero.cayley_table(), one.cayley_table());
    assert_eq!(zero.generators().len(), 2);
    assert!(matches!(parse_group(r#"{"permutations": [[0,0,1]]}"#, &b), Err(Error::Input(_))));
}

#[test]
fn group_files_round_trip() {
    let b = Budget::default();
    let g = parse_group(r#"{"family": "dihedral", "params": {"n": 4}}"#, &b).unwrap();
    let again = parse_group(&text(&group_json(&g)), &b).unwrap();
    assert_eq!(g.cayley_table(), again.cayley_table());
    assert_eq!(g.generators(), again.generators());
    assert_eq!(g.name(), again.name());
    let he = parse_group(r#"{"family": "heisenberg27"}"#, &b).unwrap();
    assert_eq!(he.order(), 27);
    let prod = parse_group(
        r#"{"family": "direct_product", "params": {"left": {"family": "cyclic", "params": {"n": 2}},
            "right": {"family": "cyclic", "params": {"n": 2}}}}"#,
        &b,
    )
    .unwrap();
    assert_eq!(prod.order(), 4);
    assert!(matches!(parse_group("{", &b), Err(Error::Input(_))));
    assert!(matches!(parse_group(r#"{"schema": "other/9", "cayley": [[0]]}"#, &b), Err(Error::Input(_))));
}

#[test]
fn action_lengths_must_match_generators() {
    let b = Budget::default();
    let g = parse_group(r#"{"family": "dihedral", "params": {"n": 4}}"#, &b).unwrap();
    assert!(parse_action(&g, "1,-1").is_ok());
    assert!(matches!(parse_action(&g, "-1"), Err(Error::Input(_))));
    assert!(matches!(parse_action(&g, "1,-1,1"), Err(Error::Input(_))));
    assert!(matches!(parse_action(&g, "1,2"), Err(Error::Input(_))));
}

#[test]
fn module_specs() {
    let b = Budget::default();
    let g = parse_group(r#"{"family": "dihedral", "params": {"n": 4}}"#, &b).unwrap();
    let sign = parse_module(&g, r#"{"sign": [1, -1]}"#).unwrap();
    assert_eq!(sign.free_rank(), 1);
    let fin = parse_module(&g, r#"{"moduli": [2, 2], "action": {"1": [[0,1],[1,0]]}}"#).unwrap();
    assert_eq!(fin.order(), Some(4));
    assert!(!fin.is_trivial_action());
    assert!(matches!(parse_module(&g, r#"{"moduli": [2], "action": {"5": [[1]]}}"#), Err(Error::Input(_))));
    let h = cohomology_group(&g, &fin, 2, &b).unwrap();
    let v = cohomology_json(&h, true);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["representatives"].as_array().unwrap().len(), h.invariants().len());
}

#[test]
fn cocycle_and_rep_files_round_trip() {
    let b = Budget::default();
    let g = parse_group(r#"{"family": "cyclic", "params": {"n": 2}}"#, &b).unwrap();
    let alpha = parse_cocycle(&g, r#"{"degree": 2, "modulus": 2, "values": {"1,1": 1}}"#).unwrap();
    assert_eq!(parse_cocycle(&g, &text(&cocycle_json(&alpha))).unwrap(), alpha);
    assert!(matches!(
        parse_cocycle(&g, r#"{"degree": 2, "modulus": 2, "values": {"0,1": 1}}"#),
        Err(Error::Input(_))
    ));
    assert!(matches!(
        parse_cocycle(&g, r#"{"degree": 2, "modulus": 2, "values": {"1": 1}}"#),
        Err(Error::Input(_))
    ));
    let phi = parse_action(&g, "-1").unwrap();
    let f = regular_semiprojective_rep(&g, &alpha, &phi).unwrap();
    assert_eq!(parse_rep(&g, &text(&rep_json(&f))).unwrap(), f);
    assert!(matches!(parse_rep(&g, r#"{"modulus": 2, "maps": {"0": {"perm": [0,1], "exps": [0,0]}}}"#), Err(Error::Input(_))));
    let mult = twisted_multiplier(&g, &phi, &b).unwrap();
    let v = class_json(mult.invariants(), &mult.bockstein_class(&alpha).unwrap());
    assert_eq!(v["coordinates"], serde_json::json!([1]));
    let zero = UnitCocycle::zero(2, 2);
    assert_eq!(cocycle_json(&zero)["values"], serde_json::json!({}));
}

#[test]
fn repgroups_output_witnesses_round_trip() {
    let b = Budget::default();
    let g = twisted_schur::group::standard_group(&StandardFamily::Dihedral { n: 4 }, &b).unwrap();
    let phi = parse_action(&g, "-1,1").unwrap();
    let res = twisted_representation_groups(&g, &phi, &b, &SearchOptions::default()).unwrap();
    let v = repgroups_json(&res);
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.len(), res.groups.len());
    for (out, x) in groups.iter().zip(&res.groups) {
        assert_eq!(out["order"], x.group.order());
        let ext = parse_extension(&text(&out["witness"]), &b).unwrap();
        assert_eq!(ext.gamma().cayley_table(), x.witness.gamma().cayley_table());
        assert_eq!(ext.gamma().name(), x.witness.gamma().name());
    }
}

#[test]
fn matrix_and_lattice_files_round_trip() {
    let s = HeisenbergSetup::new().unwrap();
    for m in s.generators.iter().chain(&s.schrodinger) {
        let (f, back) = parse_matrix(&text(&matrix_json(&s.field, m))).unwrap();
        assert_eq!(f.conductor(), 3);
        assert_eq!(&back, m);
    }
    for l in [&s.lambda1, &s.lambda2] {
        let (_, back) = parse_lattice(&text(&lattice_json(l))).unwrap();
        assert_eq!(&back, l);
    }
    let (f, m) = parse_matrix(r#"{"conductor": 4, "rows": [[[0, 1]]]}"#).unwrap();
    assert_eq!(m, SemilinearMatrix::scalar(&f, 1, f.zeta(1)));
    let (_, l) = parse_lattice(r#"{"conductor": 4, "generators": [[[1]], [[0, 1]], [["1/2", "1/2"]]]}"#).unwrap();
    let half = num_rational::BigRational::new(1.into(), 2.into());
    assert!(l.contains(&[f.from_coeffs(&[half.clone(), half])]));
    assert!(matches!(parse_matrix(r#"{"conductor": 3, "rows": [[[0]]]}"#), Err(Error::Input(_))));
    assert!(matches!(parse_matrix(r#"{"conductor": 3, "rows": [[[0.5]]]}"#), Err(Error::Input(_))));
}
