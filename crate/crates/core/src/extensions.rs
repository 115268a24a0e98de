//! Extensions `1 → A → Γ → G → 1` with finite abelian kernel.
//!
//! Elements of `Γ` are pairs `(a, g)` with index `a_index·|G| + g`, where
//! `a_index` is the mixed-radix index of `a`, and
//! `(a, g)·(b, h) = (a + g∗b + β(g, h), gh)`.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cohomology::{is_cocycle, CocycleTable, TwistedMultiplier, UnitCocycle};
use crate::error::{Error, Result};
use crate::gmodule::{enumerate_mixed_radix, is_equivariant_character, DualCharacter, TwistedModule};
use crate::group::FiniteGroup;

/// Upper bound on candidate matrices or action assignments examined.
const MAX_CANDIDATES: u64 = 1_000_000;

/// Automorphisms of `⊕ ℤ/mᵢ` as matrices (columns are images of the
/// standard generators); the identity comes first.
pub fn automorphisms(moduli: &[u64], budget: &Budget) -> Result<Vec<Vec<Vec<i64>>>> {
    let order: u64 = moduli.iter().product();
    if order > budget.max_module_order as u64 {
        return Err(Error::resource("coefficient module order", order, budget.max_module_order as u64));
    }
    let k = moduli.len();
    let elements = enumerate_mixed_radix(moduli);
    // admissible images of generator j: elements killed by m_j
    let columns: Vec<Vec<&Vec<i64>>> = moduli
        .iter()
        .map(|&mj| {
            elements
                .iter()
                .filter(|v| v.iter().zip(moduli).all(|(&x, &mi)| (x * mj as i64) % mi as i64 == 0))
                .collect()
        })
        .collect();
    let total = columns.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if total > MAX_CANDIDATES {
        return Err(Error::resource("candidate endomorphisms", total, MAX_CANDIDATES));
    }
    let radix: Vec<u64> = columns.iter().map(|c| c.len() as u64).collect();
    let mut out = Vec::new();
    for choice in enumerate_mixed_radix(&radix) {
        let mat: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| columns[j][choice[j] as usize][i]).collect())
            .collect();
        if is_bijective(&mat, moduli, &elements) {
            out.push(mat);
        }
    }
    let id: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    out.sort_by_key(|m| *m != id);
    Ok(out)
}

fn apply(mat: &[Vec<i64>], moduli: &[u64], v: &[i64]) -> Vec<i64> {
    mat.iter()
        .zip(moduli)
        .map(|(row, &m)| row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m as i64))
        .collect()
}

fn is_bijective(mat: &[Vec<i64>], moduli: &[u64], elements: &[Vec<i64>]) -> bool {
    let mut hit = vec![false; elements.len()];
    for v in elements {
        let w = apply(mat, moduli, v);
        let idx = w.iter().zip(moduli).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize);
        if hit[idx] {
            return false;
        }
        hit[idx] = true;
    }
    true
}

/// All actions of `G` on `⊕ ℤ/mᵢ` by automorphisms, i.e. homomorphisms
/// `G → Aut(A)`, found from images of the generators and verified on the
/// whole table. The trivial action comes first.
pub fn enumerate_module_structures(g: &FiniteGroup, moduli: &[u64], budget: &Budget) -> Result<Vec<TwistedModule>> {
    if let Some(m) = moduli.iter().find(|&&m| m < 2) {
        return Err(Error::input(format!("modulus {m} must be at least 2")));
    }
    let auts = automorphisms(moduli, budget)?;
    let ngens = g.generators().len();
    let total = (0..ngens)
        .try_fold(1u64, |acc, _| acc.checked_mul(auts.len() as u64))
        .unwrap_or(u64::MAX);
    if total > MAX_CANDIDATES {
        return Err(Error::resource("candidate actions", total, MAX_CANDIDATES));
    }
    let radix = vec![auts.len() as u64; ngens];
    let mut out = Vec::new();
    for choice in enumerate_mixed_radix(&radix) {
        let gens: Vec<Vec<Vec<i64>>> = choice.iter().map(|&c| auts[c as usize].clone()).collect();
        match TwistedModule::finite(g, moduli, &gens) {
            Ok(m) => out.push(m),
            Err(Error::Input(_)) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// An extension of `base` by the finite module `module` with cocycle `beta`.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    base: FiniteGroup,
    module: TwistedModule,
    beta: CocycleTable,
    gamma: FiniteGroup,
    inclusion: Vec<usize>,
    projection: Vec<usize>,
    section: Vec<usize>,
}

/// Builds `Γ` from a normalized 2-cocycle.
pub fn build_extension(g: &FiniteGroup, module: &TwistedModule, beta: &CocycleTable, budget: &Budget) -> Result<ExtensionData> {
    if !module.is_finite() {
        return Err(Error::input("extensions need a finite kernel"));
    }
    if module.group_order() != g.order() {
        return Err(Error::input("module belongs to a group of a different order"));
    }
    if beta.degree() != 2 || beta.dim() != module.dim() || beta.group_order() != g.order() {
        return Err(Error::input("β must be a 2-cochain with values in the module"));
    }
    if !is_cocycle(g, module, beta) {
        return Err(Error::precondition("β is not a 2-cocycle for this action"));
    }
    let na = module.order().expect("finite") as usize;
    let ng = g.order();
    let n = na * ng;
    if n > budget.max_group_order {
        return Err(Error::resource("extension order", n as u64, budget.max_group_order as u64));
    }
    let elements = module.elements()?;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (ai, gi) = (x / ng, x % ng);
        for y in 0..n {
            let (bi, hi) = (y / ng, y % ng);
            let mut c = module.act(gi, &elements[bi]);
            for ((ci, ai), bij) in c.iter_mut().zip(&elements[ai]).zip(beta.get(&[gi, hi])) {
                *ci += ai + bij;
            }
            module.reduce(&mut c);
            mul.push((module.element_index(&c) * ng + g.mul(gi, hi)) as u32);
        }
    }
    let mut gens: Vec<usize> = (0..module.dim())
        .map(|j| {
            let mut e = vec![0i64; module.dim()];
            e[j] = 1;
            module.element_index(&e) * ng
        })
        .collect();
    gens.extend(g.generators().iter().copied());
    let gamma = FiniteGroup::from_flat(n, mul, Some(gens), format!("ext({}, {:?})", g.name(), module.moduli()))?;
    Ok(ExtensionData {
        base: g.clone(),
        module: module.clone(),
        beta: beta.clone(),
        gamma,
        inclusion: (0..na).map(|a| a * ng).collect(),
        projection: (0..n).map(|x| x % ng).collect(),
        section: (0..ng).collect(),
    })
}

impl ExtensionData {
    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn module(&self) -> &TwistedModule {
        &self.module
    }

    pub fn beta(&self) -> &CocycleTable {
        &self.beta
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    /// `A → Γ`, indexed by the mixed-radix index of `a`.
    pub fn inclusion(&self) -> &[usize] {
        &self.inclusion
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// `G → Γ`, `g ↦ (0, g)`.
    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// Splits an element of `Γ` as `(a, g)`.
    pub fn decompose(&self, x: usize) -> (Vec<i64>, usize) {
        let ng = self.base.order();
        let moduli = self.module.moduli();
        let mut idx = x / ng;
        let mut a = vec![0i64; moduli.len()];
        for (slot, &m) in a.iter_mut().zip(moduli).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        (a, x % ng)
    }

    pub fn compose(&self, a: &[i64], g: usize) -> usize {
        self.module.element_index(a) * self.base.order() + g
    }

    pub fn with_gamma_name(mut self, name: impl Into<String>) -> Self {
        self.gamma = self.gamma.with_name(name);
        self
    }

    /// Checks the defining identities: projection∘section = id, the kernel
    /// of the projection is the image of `A`, and conjugation by `s(g)`
    /// induces the module action.
    pub fn verify(&self) -> bool {
        let gam = &self.gamma;
        let sec_ok = self.section.iter().enumerate().all(|(g, &s)| self.projection[s] == g) && self.section[0] == 0;
        let kernel: Vec<usize> = (0..gam.order()).filter(|&x| self.projection[x] == 0).collect();
        let mut image = self.inclusion.clone();
        image.sort_unstable();
        let hom_ok = (0..gam.order())
            .all(|x| (0..gam.order()).all(|y| self.projection[gam.mul(x, y)] == self.base.mul(self.projection[x], self.projection[y])));
        let elements = self.module.elements().unwrap_or_default();
        let conj_ok = self.section.iter().enumerate().all(|(g, &s)| {
            elements.iter().enumerate().all(|(ai, a)| {
                let lhs = gam.mul(gam.mul(s, self.inclusion[ai]), gam.inv(s));
                lhs == self.inclusion[self.module.element_index(&self.module.act(g, a))]
            })
        });
        sec_ok && kernel == image && hom_ok && conj_ok
    }
}

/// `λ∘β` as a root-of-unity 2-cocycle over `μ_N`, `N` the character's modulus.
pub fn compose_character(lambda: &DualCharacter, ext: &ExtensionData) -> Result<UnitCocycle> {
    if lambda.exponents.len() != ext.module.dim() {
        return Err(Error::input("character and kernel have different ranks"));
    }
    UnitCocycle::from_fn(ext.base.order(), 2, lambda.modulus, |t| lambda.eval(&ext.beta.get(t)))
}

/// `tra(λ) = [λ∘β]` as coordinates in the twisted multiplier.
pub fn transgression(lambda: &DualCharacter, ext: &ExtensionData, mult: &TwistedMultiplier) -> Result<Vec<u64>> {
    if mult.group().cayley_table() != ext.base.cayley_table() {
        return Err(Error::input("extension and multiplier are over different groups"));
    }
    if !is_equivariant_character(&ext.base, lambda, &ext.module, mult.phi()) {
        return Err(Error::input("transgression needs an equivariant character"));
    }
    mult.bockstein_class(&compose_character(lambda, ext)?)
}

/// Central kernel contained in the commutator subgroup.
pub fn is_stem(ext: &ExtensionData) -> bool {
    let center = ext.gamma.center();
    let derived = ext.gamma.derived_subgroup();
    ext.inclusion
        .iter()
        .all(|a| center.binary_search(a).is_ok() && derived.binary_search(a).is_ok())
}

/// Portable description of an extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDump {
    pub base_cayley: Vec<Vec<usize>>,
    pub base_generators: Vec<usize>,
    pub moduli: Vec<u64>,
    pub action: Vec<Vec<Vec<i64>>>,
    pub beta: Vec<i64>,
    pub gamma_cayley: Vec<Vec<usize>>,
    pub inclusion: Vec<usize>,
    pub projection: Vec<usize>,
    pub section: Vec<usize>,
}

impl ExtensionData {
    pub fn dump(&self) -> ExtensionDump {
        ExtensionDump {
            base_cayley: self.base.cayley_table(),
            base_generators: self.base.generators().to_vec(),
            moduli: self.module.moduli().to_vec(),
            action: self.module.generator_matrices(&self.base),
            beta: self.beta.values().to_vec(),
            gamma_cayley: self.gamma.cayley_table(),
            inclusion: self.inclusion.clone(),
            projection: self.projection.clone(),
            section: self.section.clone(),
        }
    }

    /// Rebuilds from a dump and checks that the stored `Γ` matches.
    pub fn from_dump(d: &ExtensionDump, budget: &Budget) -> Result<Self> {
        let base = FiniteGroup::from_cayley(&d.base_cayley, Some(d.base_generators.clone()), "G")?;
        let module = TwistedModule::finite(&base, &d.moduli, &d.action)?;
        let beta = CocycleTable::from_values(base.order(), 2, module.dim(), d.beta.clone())?;
        let ext = build_extension(&base, &module, &beta, budget)?;
        if ext.gamma.cayley_table() != d.gamma_cayley
            || ext.inclusion != d.inclusion
            || ext.projection != d.projection
            || ext.section != d.section
        {
            return Err(Error::input("extension dump is inconsistent with its cocycle"));
        }
        Ok(ext)
    }
}
