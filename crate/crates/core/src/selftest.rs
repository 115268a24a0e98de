//! Seeded runtime checks of the engine's core invariants, for the
//! `selftest` subcommand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::cohomology::{
    coboundary, coboundary_matrix, cohomology_group, h2_class_representatives, twisted_multiplier, UnitCocycle,
};
use crate::cyclotomic::heisenberg_demo;
use crate::error::Result;
use crate::gmodule::{SignCharacter, TwistedModule};
use crate::group::{standard_group, FiniteGroup, StandardFamily};
use crate::semiprojective::{extract_cocycle, regular_semiprojective_rep, verify_semiprojective};
use crate::snf::{smith_normal_form, SparseIntMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelfCheck>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Small groups with every sign character on their generators.
fn sample_groups(budget: &Budget) -> Result<Vec<(FiniteGroup, Vec<SignCharacter>)>> {
    use StandardFamily::*;
    let fams = [
        Cyclic { n: 2 },
        Cyclic { n: 3 },
        Cyclic { n: 4 },
        Cyclic { n: 6 },
        Dihedral { n: 3 },
        Dihedral { n: 4 },
        GeneralizedQuaternion { order: 8 },
    ];
    let mut out = Vec::new();
    for f in fams {
        let g = standard_group(&f, budget)?;
        let k = g.generators().len();
        let phis = (0..1u32 << k)
            .filter_map(|mask| {
                let signs: Vec<i64> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                SignCharacter::from_generators(&g, &signs).ok()
            })
            .collect();
        out.push((g, phis));
    }
    Ok(out)
}

fn check(name: &str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) -> SelfCheck {
    let (passed, detail) = match f() {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, e.to_string()),
    };
    SelfCheck { name: name.to_string(), passed, detail }
}

pub fn run_selftest(seed: u64, budget: &Budget) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    checks.push(check("chain property", || {
        let mut count = 0;
        for (g, phis) in sample_groups(budget)? {
            for phi in &phis {
                let m = TwistedModule::sign_module(&g, phi)?;
                for n in 1..4 {
                    let d0 = coboundary_matrix(&g, &m, n, budget)?;
                    let d1 = coboundary_matrix(&g, &m, n + 1, budget)?;
                    if !d1.mul(&d0).is_zero() {
                        return Ok(Err(format!("∂∂ ≠ 0 on {} in degree {n}", g.name())));
                    }
                    count += 1;
                }
            }
        }
        Ok(Ok(format!("{count} complexes")))
    }));

    let mats: Vec<SparseIntMatrix> = (0..40)
        .map(|_| {
            let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let mut triples = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    if rng.gen_bool(0.35) {
                        triples.push((i, j, BigInt::from(rng.gen_range(-20i64..=20))));
                    }
                }
            }
            SparseIntMatrix::from_triples(r, c, triples).expect("distinct positions")
        })
        .collect();
    checks.push(check("smith normal form", || {
        for (k, m) in mats.iter().enumerate() {
            let snf = smith_normal_form(m);
            let u = SparseIntMatrix::from_dense(&snf.u_matrix());
            let v = SparseIntMatrix::from_dense(&snf.v_matrix());
            if u.mul(m).mul(&v).to_dense() != snf.diagonal_matrix() {
                return Ok(Err(format!("U·M·V ≠ D for matrix {k}")));
            }
            for i in 0..m.rows() {
                let mut col: Vec<BigInt> = (0..m.rows()).map(|r| u.get(r, i)).collect();
                snf.apply_u_inv(&mut col);
                if col.iter().enumerate().any(|(r, x)| if r == i { !x.is_one() } else { !x.is_zero() }) {
                    return Ok(Err(format!("U is not invertible for matrix {k}")));
                }
            }
            if snf.invariant_factors().windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
                return Ok(Err(format!("divisibility fails for matrix {k}")));
            }
        }
        Ok(Ok(format!("{} random matrices", mats.len())))
    }));

    checks.push(check("cyclic periodicity", || {
        for m in 2..=8usize {
            let g = standard_group(&StandardFamily::Cyclic { n: m }, budget)?;
            let mut phis = vec![SignCharacter::trivial(&g)];
            if m % 2 == 0 {
                phis.push(SignCharacter::from_generators(&g, &[-1])?);
            }
            for phi in phis {
                let module = TwistedModule::sign_module(&g, &phi)?;
                for n in 1..=4 {
                    let expect: Vec<u64> = match (phi.is_trivial(), n % 2) {
                        (true, 0) => vec![m as u64],
                        (false, 1) => vec![2],
                        _ => vec![],
                    };
                    let h = cohomology_group(&g, &module, n, budget)?;
                    if h.invariants() != expect.as_slice() {
                        return Ok(Err(format!("H^{n}(C{m}) = {:?}, expected {expect:?}", h.invariants())));
                    }
                }
            }
        }
        Ok(Ok("C2..C8, degrees 1..4".into()))
    }));

    checks.push(check("multiplier exponent divides |G|", || {
        for (g, phis) in sample_groups(budget)? {
            for phi in &phis {
                let e = twisted_multiplier(&g, phi, budget)?.exponent();
                if g.order() as u64 % e != 0 {
                    return Ok(Err(format!("exponent {e} on {}", g.name())));
                }
            }
        }
        Ok(Ok("all sample groups".into()))
    }));

    checks.push(check("cocycle recovery", || {
        let groups = sample_groups(budget)?;
        for _ in 0..20 {
            let (g, phis) = &groups[rng.gen_range(0..groups.len())];
            let phi = &phis[rng.gen_range(0..phis.len())];
            let n: u64 = rng.gen_range(2..9);
            let gens: Vec<Vec<Vec<i64>>> = g.generators().iter().map(|&x| vec![vec![phi.value(x)]]).collect();
            let mu = TwistedModule::finite(g, &[n], &gens)?;
            let classes = h2_class_representatives(g, &mu, budget)?;
            let base = UnitCocycle::new(n, classes[rng.gen_range(0..classes.len())].clone())?;
            let shift: Vec<i64> = (0..g.order()).map(|_| rng.gen_range(0..n as i64)).collect();
            let tau = UnitCocycle::from_fn(g.order(), 1, n, |t| if t[0] == 0 { 0 } else { shift[t[0]] })?;
            let z = TwistedModule::sign_module(g, phi)?;
            let alpha = base.add(&UnitCocycle::new(n, coboundary(g, &z, tau.table()))?)?;
            let f = regular_semiprojective_rep(g, &alpha, phi)?;
            if !verify_semiprojective(g, &f) || extract_cocycle(g, &f)?.with_modulus(n)? != alpha {
                return Ok(Err(format!("round trip fails on {}", g.name())));
            }
        }
        Ok(Ok("20 random cocycles".into()))
    }));

    checks.push(check("dihedral multipliers", || {
        let d4 = standard_group(&StandardFamily::Dihedral { n: 4 }, budget)?;
        for (signs, expect) in [([1, 1], vec![2u64]), ([-1, -1], vec![2, 2]), ([1, -1], vec![2, 2]), ([-1, 1], vec![2, 2])] {
            let phi = SignCharacter::from_generators(&d4, &signs)?;
            let got = twisted_multiplier(&d4, &phi, budget)?.invariants().to_vec();
            if got != expect {
                return Ok(Err(format!("{signs:?}: {got:?}")));
            }
        }
        Ok(Ok("D8 with all four actions".into()))
    }));

    checks.push(check("semilinear closure", || {
        let r = heisenberg_demo(budget)?;
        let ok = r.closure_order == 2592 && r.scalar_order == 6 && r.lattice_preservation.iter().all(|c| c.preserves);
        Ok(if ok { Ok("order 2592".into()) } else { Err(format!("order {}", r.closure_order)) })
    }));

    SelftestReport { seed, checks }
}
