//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always shown. The
//! process fails if any criterion fails, except for the D₈ count
//! discrepancy listed in `KNOWN_DISCREPANCIES`, which is printed as FAIL
//! with its explanation.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_schur::cohomology::{
    coboundary, coboundary_matrix, cohomology_group, h2_class_representatives, twisted_multiplier, TwistedMultiplier,
    UnitCocycle,
};
use twisted_schur::cyclotomic::heisenberg_demo;
use twisted_schur::extensions::{build_extension, is_stem};
use twisted_schur::group::{is_isomorphic, standard_group};
use twisted_schur::repgroups::{
    minimality_check, satisfies_criterion, twisted_representation_groups, SearchOptions, SearchResult,
};
use twisted_schur::semiprojective::{
    extract_cocycle, lift_over_extension, regular_semiprojective_rep, verify_lift, verify_semiprojective,
    LiftOutcome, MonomialMap,
};
use twisted_schur::snf::smith_normal_form;
use twisted_schur::{Budget, FiniteGroup, SignCharacter, SparseIntMatrix, StandardFamily, TwistedModule};

/// Criteria whose stated values the engine does not reproduce, with the
/// reason. They are reported as FAIL but do not abort the run.
const KNOWN_DISCREPANCIES: &[(&str, &str)] = &[(
    "2",
    "the action (-1,-1) is carried to (1,-1) by the automorphism s -> st, t -> t of D8, \
     so both rows must list the same groups; the engine finds 4 for both",
)];

type Outcome = Result<String, String>;

struct Line {
    id: &'static str,
    title: &'static str,
    outcome: Outcome,
    elapsed: Duration,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn grp(f: StandardFamily) -> FiniteGroup {
    standard_group(&f, &Budget::default()).unwrap()
}

fn signs(g: &FiniteGroup, s: &[i64]) -> SignCharacter {
    SignCharacter::from_generators(g, s).unwrap()
}

// -------------------------------------------------------------- criterion 1

fn z2_conjugation() -> Outcome {
    let b = Budget::default();
    let g = grp(StandardFamily::Cyclic { n: 2 });
    let conj = signs(&g, &[-1]);
    let res = twisted_representation_groups(&g, &conj, &b, &SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure(res.multiplier == [2], || format!("multiplier {:?}, expected [2]", res.multiplier))?;
    ensure(res.groups.len() == 1, || format!("{} groups, expected 1", res.groups.len()))?;
    let out = &res.groups[0];
    let z4 = grp(StandardFamily::Cyclic { n: 4 });
    ensure(out.group.order() == 4 && is_isomorphic(&out.group, &z4, &b).unwrap().is_some(), || {
        format!("output {} is not cyclic of order 4", out.group.name())
    })?;

    let mult = twisted_multiplier(&g, &conj, &b).unwrap();
    let alpha = UnitCocycle::from_fn(2, 2, 2, |_| 1).unwrap();
    let f = regular_semiprojective_rep(&g, &alpha, &conj).unwrap();
    let LiftOutcome::Lifted(lift) = lift_over_extension(&f, &out.witness, &mult, &b).map_err(|e| e.to_string())? else {
        return Err("the regular representation does not lift over Z4".into());
    };
    verify_lift(&f, &out.witness, &lift.maps).map_err(|e| e.to_string())?;
    // [[0,-1],[1,0]] with conjugation: e0 -> e1, e1 -> -e0
    let quarter_turn = MonomialMap::new(vec![1, 0], vec![0, 1], true, 2).unwrap();
    let image = lift.maps[out.witness.section()[1]].normalized();
    ensure(image == quarter_turn.normalized(), || format!("generator image {image:?}"))?;
    Ok("one group, C4; multiplier Z2; generator lifts to [[0,-1],[1,0]]·conj".into())
}

// -------------------------------------------------------------- criterion 2

struct D8Row {
    signs: [i64; 2],
    phi: SignCharacter,
    mult: TwistedMultiplier,
    result: SearchResult,
}

fn d8_rows() -> Vec<D8Row> {
    let b = Budget::default();
    let g = grp(StandardFamily::Dihedral { n: 4 });
    [[1, 1], [-1, -1], [1, -1], [-1, 1]]
        .into_iter()
        .map(|s| {
            let phi = signs(&g, &s);
            let mult = twisted_multiplier(&g, &phi, &b).unwrap();
            let result = twisted_representation_groups(&g, &phi, &b, &SearchOptions::default()).unwrap();
            D8Row { signs: s, phi, mult, result }
        })
        .collect()
}

fn d8_table(rows: &[D8Row]) -> Outcome {
    let b = Budget::default();
    let expected_mult: [&[u64]; 4] = [&[2], &[2, 2], &[2, 2], &[2, 2]];
    let expected_count = [3usize, 2, 4, 3];
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    for ((row, mult), count) in rows.iter().zip(expected_mult).zip(expected_count) {
        let r = &row.result;
        ensure(r.multiplier == mult, || format!("{:?}: multiplier {:?}, expected {mult:?}", row.signs, r.multiplier))?;
        let order = 8 * row.mult.order() as usize;
        for (i, x) in r.groups.iter().enumerate() {
            ensure(x.group.order() == order, || format!("{:?}: group of order {}", row.signs, x.group.order()))?;
            for y in &r.groups[i + 1..] {
                ensure(is_isomorphic(&x.group, &y.group, &b).unwrap().is_none(), || {
                    format!("{:?}: duplicate isomorphism type", row.signs)
                })?;
            }
        }
        counts.push(r.groups.len());
        if r.groups.len() != count {
            problems.push(format!("{:?}: {} groups, expected {count}", row.signs, r.groups.len()));
        }
    }
    let trivial: BTreeSet<&str> = rows[0].result.groups.iter().filter_map(|x| x.identified_as.as_deref()).collect();
    ensure(trivial == BTreeSet::from(["D16", "Q16", "SD16"]), || format!("trivial action gives {trivial:?}"))?;
    let summary = format!("multipliers Z2, Z2^2 x3; counts {counts:?}; trivial action gives D16, SD16, Q16");
    if problems.is_empty() { Ok(summary) } else { Err(format!("{}; {summary}", problems.join("; "))) }
}

// -------------------------------------------------------------- criterion 3

fn heisenberg() -> Outcome {
    let r = heisenberg_demo(&Budget::default()).map_err(|e| e.to_string())?;
    ensure(r.closure_order == 2592, || format!("closure order {}", r.closure_order))?;
    ensure(r.lambda1_stabilizer.order() == 6 && r.lambda1_stabilizer.generator == 1 && r.lambda1_stabilizer.modulus == 6, || {
        format!("scalar stabilizer of Lambda1 {:?}", r.lambda1_stabilizer)
    })?;
    ensure(r.scalar_order == 6, || format!("scalar subgroup of order {}", r.scalar_order))?;
    ensure(r.lattice_preservation.len() == 8 && r.lattice_preservation.iter().all(|c| c.preserves), || {
        "a generator fails to preserve a lattice".into()
    })?;
    ensure(r.quotient_order == 432, || format!("quotient order {}", r.quotient_order))?;
    Ok("closure 2592, scalars <zeta6> of order 6, quotient 432, C1..C4 preserve both lattices".into())
}

// -------------------------------------------------------------- criterion 4

fn all_actions(g: &FiniteGroup) -> Vec<SignCharacter> {
    let k = g.generators().len();
    (0..1u32 << k)
        .filter_map(|mask| {
            let s: Vec<i64> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            SignCharacter::from_generators(g, &s).ok()
        })
        .collect()
}

fn sample_groups() -> Vec<FiniteGroup> {
    use StandardFamily::*;
    [Cyclic { n: 2 }, Cyclic { n: 3 }, Cyclic { n: 4 }, Cyclic { n: 6 }, Dihedral { n: 3 }, Dihedral { n: 4 }, GeneralizedQuaternion { order: 8 }]
        .into_iter()
        .map(grp)
        .collect()
}

fn chain_property() -> Result<usize, String> {
    let b = Budget::default();
    let mut count = 0;
    let mut groups = sample_groups();
    groups.push(grp(StandardFamily::Heisenberg27));
    for g in &groups {
        for phi in all_actions(g) {
            let m = TwistedModule::sign_module(g, &phi).unwrap();
            let top = if g.order() > 8 { 2 } else { 3 };
            for n in 1..=top {
                let d = coboundary_matrix(g, &m, n, &b).unwrap().clone();
                let d2 = coboundary_matrix(g, &m, n + 1, &b).unwrap();
                ensure(d2.mul(&d).is_zero(), || format!("{} degree {n}", g.name()))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn snf_random(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for k in 0..100 {
        let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
        let mut triples = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(0.3) {
                    triples.push((i, j, BigInt::from(rng.gen_range(-30i64..=30))));
                }
            }
        }
        let m = SparseIntMatrix::from_triples(r, c, triples).unwrap();
        let snf = smith_normal_form(&m);
        let u = SparseIntMatrix::from_dense(&snf.u_matrix());
        let v = SparseIntMatrix::from_dense(&snf.v_matrix());
        ensure(u.mul(&m).mul(&v).to_dense() == snf.diagonal_matrix(), || format!("matrix {k}: U·M·V ≠ D"))?;
        for i in 0..r {
            let mut col: Vec<BigInt> = (0..r).map(|x| u.get(x, i)).collect();
            snf.apply_u_inv(&mut col);
            ensure(col.iter().enumerate().all(|(x, y)| if x == i { y.is_one() } else { y.is_zero() }), || {
                format!("matrix {k}: U not unimodular")
            })?;
        }
        for j in 0..c {
            let mut col: Vec<BigInt> = (0..c).map(|x| v.get(x, j)).collect();
            snf.apply_v_inv(&mut col);
            ensure(col.iter().enumerate().all(|(x, y)| if x == j { y.is_one() } else { y.is_zero() }), || {
                format!("matrix {k}: V not unimodular")
            })?;
        }
        ensure(snf.invariant_factors().windows(2).all(|w| w[1].is_multiple_of(&w[0])), || {
            format!("matrix {k}: divisibility")
        })?;
    }
    Ok(100)
}

/// `Hⁿ(C_m, ℤ_ε)` from the periodic resolution.
fn periodic(m: u64, eps: i64, n: usize) -> Vec<u64> {
    match (eps, n % 2) {
        (1, 0) => vec![m],
        (-1, 1) => vec![2],
        _ => vec![],
    }
}

fn cyclic_oracle() -> Result<usize, String> {
    let b = Budget::default();
    let mut count = 0;
    for m in 2..=8usize {
        let g = grp(StandardFamily::Cyclic { n: m });
        for eps in [1i64, -1] {
            if eps == -1 && m % 2 == 1 {
                continue;
            }
            let z = TwistedModule::sign_module(&g, &signs(&g, &[eps])).unwrap();
            for n in 1..=4 {
                let h = cohomology_group(&g, &z, n, &b).unwrap();
                let want = periodic(m as u64, eps, n);
                ensure(h.invariants() == want.as_slice(), || format!("H^{n}(C{m}, eps={eps}) = {:?}", h.invariants()))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn exponent_divides_order() -> Result<usize, String> {
    let b = Budget::default();
    let mut count = 0;
    for g in sample_groups() {
        for phi in all_actions(&g) {
            let e = twisted_multiplier(&g, &phi, &b).unwrap().exponent();
            ensure(g.order() as u64 % e == 0, || format!("{}: exponent {e}", g.name()))?;
            count += 1;
        }
    }
    Ok(count)
}

fn random_alpha(rng: &mut ChaCha8Rng, g: &FiniteGroup, phi: &SignCharacter, n: u64) -> UnitCocycle {
    let b = Budget::default();
    let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|&x| vec![vec![phi.value(x)]]).collect();
    let mu = TwistedModule::finite(g, &[n], &gens).unwrap();
    let classes = h2_class_representatives(g, &mu, &b).unwrap();
    let base = UnitCocycle::new(n, classes[rng.gen_range(0..classes.len())].clone()).unwrap();
    let shift: Vec<i64> = (0..g.order()).map(|x| if x == 0 { 0 } else { rng.gen_range(0..n as i64) }).collect();
    let tau = UnitCocycle::from_fn(g.order(), 1, n, |t| shift[t[0]]).unwrap();
    let z = TwistedModule::sign_module(g, phi).unwrap();
    base.add(&UnitCocycle::new(n, coboundary(g, &z, tau.table())).unwrap()).unwrap()
}

fn cocycle_recovery(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let groups = sample_groups();
    for k in 0..50 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let actions = all_actions(g);
        let phi = &actions[rng.gen_range(0..actions.len())];
        let n = rng.gen_range(2..9u64);
        let alpha = random_alpha(rng, g, phi, n);
        let f = regular_semiprojective_rep(g, &alpha, phi).map_err(|e| e.to_string())?;
        ensure(verify_semiprojective(g, &f), || format!("instance {k}: not semi-projective"))?;
        let back = extract_cocycle(g, &f).map_err(|e| e.to_string())?;
        ensure(back.with_modulus(n).ok() == Some(alpha.clone()), || format!("instance {k} on {}", g.name()))?;
    }
    Ok(50)
}

fn lifting(rows: &[D8Row]) -> Result<usize, String> {
    let b = Budget::default();
    let z2 = grp(StandardFamily::Cyclic { n: 2 });
    let conj = signs(&z2, &[-1]);
    let z2_row = (
        z2.clone(),
        conj.clone(),
        twisted_multiplier(&z2, &conj, &b).unwrap(),
        twisted_representation_groups(&z2, &conj, &b, &SearchOptions::default()).unwrap(),
    );
    let d8 = grp(StandardFamily::Dihedral { n: 4 });
    let mut cases = vec![z2_row];
    for r in rows {
        cases.push((d8.clone(), r.phi.clone(), r.mult.clone(), r.result.clone()));
    }
    let mut lifts = 0;
    for (g, phi, mult, res) in &cases {
        let n = mult.exponent();
        let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|&x| vec![vec![phi.value(x)]]).collect();
        let mu = TwistedModule::finite(g, &[n], &gens).unwrap();
        for cls in h2_class_representatives(g, &mu, &b).unwrap() {
            let alpha = UnitCocycle::new(n, cls).unwrap();
            let f = regular_semiprojective_rep(g, &alpha, phi).unwrap();
            for out in &res.groups {
                match lift_over_extension(&f, &out.witness, mult, &b).map_err(|e| e.to_string())? {
                    LiftOutcome::Lifted(l) => verify_lift(&f, &out.witness, &l.maps).map_err(|e| e.to_string())?,
                    LiftOutcome::Failed(e) => return Err(format!("no lift to {}: {e:?}", out.group.name())),
                }
                lifts += 1;
            }
        }
    }
    Ok(lifts)
}

fn stem_and_order(rows: &[D8Row]) -> Result<usize, String> {
    let d8 = grp(StandardFamily::Dihedral { n: 4 });
    let mut count = 0;
    for r in rows {
        for x in &r.result.groups {
            ensure(minimality_check(&d8, &r.mult, &x.group), || format!("{:?}: |Γ| = {}", r.signs, x.group.order()))?;
            if r.phi.is_trivial() {
                ensure(is_stem(&x.witness), || format!("{} is not a stem extension", x.group.name()))?;
            }
            count += 1;
        }
    }
    Ok(count)
}

fn bockstein_shifts(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let b = Budget::default();
    let groups = sample_groups();
    for k in 0..40 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let actions = all_actions(g);
        let phi = &actions[rng.gen_range(0..actions.len())];
        let mult = twisted_multiplier(g, phi, &b).unwrap();
        let n = rng.gen_range(2..9u64);
        let alpha = random_alpha(rng, g, phi, n);
        let big = n * rng.gen_range(1..6u64);
        let shift: Vec<i64> = (0..g.order()).map(|x| if x == 0 { 0 } else { rng.gen_range(0..big as i64) }).collect();
        let tau = UnitCocycle::from_fn(g.order(), 1, big, |t| shift[t[0]]).unwrap();
        let z = TwistedModule::sign_module(g, phi).unwrap();
        let shifted = alpha.add(&UnitCocycle::new(big, coboundary(g, &z, tau.table())).unwrap()).unwrap();
        let (a, s) = (mult.bockstein_class(&alpha).unwrap(), mult.bockstein_class(&shifted).unwrap());
        ensure(a == s, || format!("instance {k}: {a:?} vs {s:?}"))?;
    }
    Ok(40)
}

fn property_suites(rows: &[D8Row]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let parts: Vec<(&str, Result<usize, String>)> = vec![
        ("chain", chain_property()),
        ("snf", snf_random(&mut rng)),
        ("cyclic", cyclic_oracle()),
        ("exponent", exponent_divides_order()),
        ("recovery", cocycle_recovery(&mut rng)),
        ("lift", lifting(rows)),
        ("stem+order", stem_and_order(rows)),
        ("bockstein", bockstein_shifts(&mut rng)),
    ];
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for (name, r) in parts {
        match r {
            Ok(n) => ok.push(format!("{name} {n}")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    if bad.is_empty() { Ok(ok.join(", ")) } else { Err(bad.join("; ")) }
}

// -------------------------------------------------------------- criterion 5

fn negative_control() -> Outcome {
    let b = Budget::default();
    let g = grp(StandardFamily::Cyclic { n: 2 });
    let conj = signs(&g, &[-1]);
    let mult = twisted_multiplier(&g, &conj, &b).unwrap();
    let a = TwistedModule::trivial(&g, 0, &[2]).unwrap();
    let split_class = &h2_class_representatives(&g, &a, &b).unwrap()[0];
    ensure(split_class.is_zero(), || "first class is not the split one".into())?;
    let split = build_extension(&g, &a, split_class, &b).unwrap();
    ensure(split.gamma().exponent() == 2, || "split extension is not Z2 x Z2".into())?;
    let r = satisfies_criterion(&split, &mult, &b).map_err(|e| e.to_string())?;
    ensure(!r.cond_h1 && !r.verdict(), || format!("split extension accepted: {r:?}"))?;
    Ok(format!("rejected with cond_h1 = false (|H1(G)| = {}, |H1(Gamma)| = {})", r.h1_base, r.h1_extension))
}

// -------------------------------------------------------------- driver

fn timed(id: &'static str, title: &'static str, limit: Duration, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let mut outcome = f();
    let elapsed = start.elapsed();
    if elapsed > limit {
        outcome = Err(format!("took {elapsed:.1?}, limit {limit:?}"));
    }
    Line { id, title, outcome, elapsed }
}

fn main() {
    let mut lines = Vec::new();
    lines.push(timed("1", "Z2 with conjugation", Duration::from_secs(1), z2_conjugation));

    let start = Instant::now();
    let rows = d8_rows();
    let search_time = start.elapsed();
    let mut line = timed("2", "D8 table", Duration::from_secs(600), || d8_table(&rows));
    line.elapsed += search_time;
    if line.elapsed > Duration::from_secs(600) {
        line.outcome = Err(format!("took {:.1?}", line.elapsed));
    }
    lines.push(line);

    lines.push(timed("3", "Heisenberg semilinear group", Duration::from_secs(30), heisenberg));
    lines.push(timed("4", "property suites", Duration::from_secs(3600), || property_suites(&rows)));
    lines.push(timed("5", "split extension negative control", Duration::from_secs(60), negative_control));

    let mut fatal = 0;
    for l in &lines {
        match &l.outcome {
            Ok(detail) => println!("PASS criterion {} ({}) [{:.2?}]: {detail}", l.id, l.title, l.elapsed),
            Err(detail) => {
                let known = KNOWN_DISCREPANCIES.iter().find(|(id, _)| *id == l.id);
                println!("FAIL criterion {} ({}) [{:.2?}]: {detail}", l.id, l.title, l.elapsed);
                match known {
                    Some((_, why)) => println!("     known discrepancy: {why}"),
                    None => fatal += 1,
                }
            }
        }
    }
    if fatal > 0 {
        eprintln!("{fatal} acceptance criteria failed");
        std::process::exit(1);
    }
}
