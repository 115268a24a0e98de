//! The order-27 Heisenberg group acting on `ℂ³`: the Schrödinger
//! representation, the semilinear group generated by `C₁..C₄` and the
//! two lattices `Λ₁ ⊂ Λ₂` it is checked against.

use num_rational::BigRational;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::Result;
use crate::group::{is_isomorphic, standard_group, FiniteGroup, StandardFamily};

use super::field::{CyclotomicField, CyclotomicNumber};
use super::lattice::{lattice_scalar_stabilizer, preserves_lattice, ComplexLattice, ScalarStabilizer};
use super::semilinear::{semilinear_group_closure, SemilinearMatrix};

/// Exact objects of the construction over `ℚ(ζ₃)`.
pub struct HeisenbergSetup {
    pub field: CyclotomicField,
    /// `ρ(g), ρ(h), ρ(k)`.
    pub schrodinger: [SemilinearMatrix; 3],
    /// `C₁, C₂, C₃, C₄`.
    pub generators: [SemilinearMatrix; 4],
    pub lambda1: ComplexLattice,
    pub lambda2: ComplexLattice,
}

/// `u = (1 + 2ζ₃)/3`.
pub fn u(field: &CyclotomicField) -> CyclotomicNumber {
    let third = |k: i64| BigRational::new(k.into(), 3.into());
    field.from_coeffs(&[third(1), third(2)])
}

impl HeisenbergSetup {
    pub fn new() -> Result<Self> {
        let f = CyclotomicField::new(3)?;
        let z = |k| f.zeta(k);
        let o = f.zero();
        let one = f.one();
        let u = u(&f);
        let mat = |rows: Vec<Vec<CyclotomicNumber>>, conj| SemilinearMatrix::new(&f, rows, conj);
        let scale = |c: &CyclotomicNumber, rows: Vec<Vec<CyclotomicNumber>>| -> Vec<Vec<CyclotomicNumber>> {
            rows.into_iter().map(|r| r.iter().map(|x| f.mul(c, x)).collect()).collect()
        };

        let rho_g = mat(vec![vec![o.clone(), o.clone(), one.clone()], vec![one.clone(), o.clone(), o.clone()], vec![o.clone(), one.clone(), o.clone()]], false)?;
        let rho_h = mat(vec![vec![one.clone(), o.clone(), o.clone()], vec![o.clone(), z(2), o.clone()], vec![o.clone(), o.clone(), z(1)]], false)?;
        let rho_k = SemilinearMatrix::scalar(&f, 3, z(1));

        let c1 = mat(vec![vec![z(1), o.clone(), o.clone()], vec![o.clone(), z(2), o.clone()], vec![o.clone(), o.clone(), one.clone()]], false)?;
        let minus_u = f.neg(&u);
        let c2 = mat(
            scale(&minus_u, vec![vec![one.clone(), z(2), z(2)], vec![z(2), one.clone(), z(2)], vec![z(2), z(2), one.clone()]]),
            false,
        )?;
        let c3 = mat(
            scale(&u, vec![vec![one.clone(), one.clone(), one.clone()], vec![one.clone(), z(2), z(1)], vec![one.clone(), z(1), z(2)]]),
            false,
        )?;
        let c4 = SemilinearMatrix::conjugation(&f, 3);

        let mut gens1 = Vec::new();
        for i in 0..3 {
            for k in 0..2 {
                let mut v = vec![f.zero(); 3];
                v[i] = f.zeta(k);
                gens1.push(v);
            }
        }
        gens1.push(vec![u.clone(), u.clone(), u.clone()]);
        let mut gens2 = gens1.clone();
        gens2.push(vec![u.clone(), minus_u, f.zero()]);
        let lambda1 = ComplexLattice::from_generators(&f, &gens1)?;
        let lambda2 = ComplexLattice::from_generators(&f, &gens2)?;

        Ok(HeisenbergSetup {
            schrodinger: [rho_g, rho_h, rho_k],
            generators: [c1, c2, c3, c4],
            lambda1,
            lambda2,
            field: f,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeCheck {
    pub generator: String,
    pub lattice: String,
    pub preserves: bool,
}

/// A finite matrix group together with its subgroup of scalar matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarContent {
    pub closure_order: usize,
    pub scalar_order: usize,
    /// Scalars as exponents of `ζ_m`.
    pub scalar_exponents: Vec<u32>,
    pub scalar_modulus: u32,
    pub quotient_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeisenbergReport {
    pub closure_order: usize,
    pub scalar_order: usize,
    pub scalar_generator: String,
    pub quotient_order: usize,
    pub generators: ScalarContent,
    pub schrodinger: ScalarContent,
    pub schrodinger_is_heisenberg: bool,
    pub lattice_preservation: Vec<LatticeCheck>,
    pub lambda1_stabilizer: ScalarStabilizer,
    pub lambda2_stabilizer: ScalarStabilizer,
    pub not_reproduced: Vec<String>,
}

fn scalar_content(
    field: &CyclotomicField,
    gens: &[SemilinearMatrix],
    max_order: usize,
) -> Result<(FiniteGroup, ScalarContent)> {
    let (group, elements) = semilinear_group_closure(field, gens, max_order)?;
    let (m, z) = field.root_of_unity_generator();
    let powers: Vec<CyclotomicNumber> = (0..m as u64).map(|k| field.pow(&z, k)).collect();
    let mut scalar_exponents: Vec<u32> = elements
        .iter()
        .filter_map(|e| e.as_scalar())
        .filter_map(|mu| powers.iter().position(|p| p == mu).map(|k| k as u32))
        .collect();
    scalar_exponents.sort_unstable();
    let scalar_order = elements.iter().filter(|e| e.as_scalar().is_some()).count();
    let content = ScalarContent {
        closure_order: elements.len(),
        scalar_order,
        scalar_exponents,
        scalar_modulus: m,
        quotient_order: elements.len() / scalar_order,
    };
    Ok((group, content))
}

pub fn heisenberg_demo(budget: &Budget) -> Result<HeisenbergReport> {
    let s = HeisenbergSetup::new()?;
    let f = &s.field;
    let (_, generators) = scalar_content(f, &s.generators, budget.max_closure_order)?;
    let (heis, schrodinger) = scalar_content(f, &s.schrodinger, budget.max_closure_order)?;
    let he3 = standard_group(&StandardFamily::Heisenberg27, budget)?;
    let schrodinger_is_heisenberg = is_isomorphic(&heis, &he3, budget)?.is_some();

    let mut lattice_preservation = Vec::new();
    for (i, c) in s.generators.iter().enumerate() {
        for (name, l) in [("Lambda1", &s.lambda1), ("Lambda2", &s.lambda2)] {
            lattice_preservation.push(LatticeCheck {
                generator: format!("C{}", i + 1),
                lattice: name.to_string(),
                preserves: preserves_lattice(f, c, l)?,
            });
        }
    }
    let lambda1_stabilizer = lattice_scalar_stabilizer(f, &s.lambda1);
    let lambda2_stabilizer = lattice_scalar_stabilizer(f, &s.lambda2);
    let g = lambda1_stabilizer.generator;
    let scalar_generator = if g == 0 { "1".to_string() } else { format!("zeta{}", lambda1_stabilizer.modulus / g) };

    Ok(HeisenbergReport {
        closure_order: generators.closure_order,
        scalar_order: generators.scalar_order,
        scalar_generator,
        quotient_order: generators.quotient_order,
        generators,
        schrodinger,
        schrodinger_is_heisenberg,
        lattice_preservation,
        lambda1_stabilizer,
        lambda2_stabilizer,
        not_reproduced: vec![
            "H^1(Stab(chi_R), C*) and H^1(N, C*) at orders 432 and 2592".to_string(),
            "maximality of the closure among lattice-preserving lifts".to_string(),
        ],
    })
}
