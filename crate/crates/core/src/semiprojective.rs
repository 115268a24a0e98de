//! Semi-projective representations by monomial matrices over roots of unity.
//!
//! A [`MonomialMap`] sends `e_j` to `ζ_N^{exps[j]}·e_{perm[j]}` and carries a
//! field automorphism flag (identity or complex conjugation). Products
//! follow `(A, ε)·(B, ε') = (A·ε(B), εε')`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cohomology::{CoboundaryWitness, TwistedMultiplier, UnitCocycle};
use crate::error::{Error, Result};
use crate::extensions::{compose_character, ExtensionData};
use crate::gmodule::{dual_characters, is_equivariant_character, DualCharacter, SignCharacter};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialMap {
    pub perm: Vec<usize>,
    pub exps: Vec<i64>,
    pub conj: bool,
    pub modulus: u64,
}

impl MonomialMap {
    pub fn new(perm: Vec<usize>, exps: Vec<i64>, conj: bool, modulus: u64) -> Result<Self> {
        let d = perm.len();
        if exps.len() != d {
            return Err(Error::input("permutation and exponent vector have different lengths"));
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::input("monomial map permutation is not a bijection"));
            }
        }
        if modulus == 0 {
            return Err(Error::input("root-of-unity modulus must be positive"));
        }
        let m = modulus as i64;
        Ok(MonomialMap {
            perm,
            exps: exps.into_iter().map(|e| e.rem_euclid(m)).collect(),
            conj,
            modulus,
        })
    }

    pub fn identity(dim: usize) -> Self {
        MonomialMap {
            perm: (0..dim).collect(),
            exps: vec![0; dim],
            conj: false,
            modulus: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn auto_sign(&self) -> i64 {
        if self.conj {
            -1
        } else {
            1
        }
    }

    /// The same map written over `μ_m`, `m` a multiple of the modulus.
    pub fn with_modulus(&self, m: u64) -> MonomialMap {
        assert!(m % self.modulus == 0, "modulus {m} is not a multiple of {}", self.modulus);
        let k = (m / self.modulus) as i64;
        MonomialMap {
            perm: self.perm.clone(),
            exps: self.exps.iter().map(|e| e * k).collect(),
            conj: self.conj,
            modulus: m,
        }
    }

    /// `self ∘ other` in the semilinear sense.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.with_modulus(m), other.with_modulus(m));
        let s = a.auto_sign();
        let perm: Vec<usize> = b.perm.iter().map(|&j| a.perm[j]).collect();
        let exps = (0..b.dim())
            .map(|j| (s * b.exps[j] + a.exps[b.perm[j]]).rem_euclid(m as i64))
            .collect();
        MonomialMap {
            perm,
            exps,
            conj: a.conj != b.conj,
            modulus: m,
        }
    }

    /// `ζ^(k/modulus) · self` for a scalar given over `μ_modulus`.
    pub fn scale(&self, k: i64, modulus: u64) -> MonomialMap {
        let m = self.modulus.lcm(&modulus);
        let mut out = self.with_modulus(m);
        let k = k * (m / modulus) as i64;
        for e in &mut out.exps {
            *e = (*e + k).rem_euclid(m as i64);
        }
        out
    }

    /// `k/modulus` with `self = ζ^k·other`, when the maps differ by a scalar.
    pub fn scalar_ratio(&self, other: &MonomialMap) -> Option<(i64, u64)> {
        if self.perm != other.perm || self.conj != other.conj || self.dim() != other.dim() {
            return None;
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.with_modulus(m), other.with_modulus(m));
        let mut diffs = a.exps.iter().zip(&b.exps).map(|(x, y)| (x - y).rem_euclid(m as i64));
        let first = diffs.next().unwrap_or(0);
        diffs.all(|d| d == first).then_some((first, m))
    }

    /// Reduces to the smallest modulus that still represents the exponents.
    pub fn normalized(&self) -> MonomialMap {
        let g = self
            .exps
            .iter()
            .fold(self.modulus as i64, |acc, &e| acc.gcd(&e))
            .max(1) as u64;
        MonomialMap {
            perm: self.perm.clone(),
            exps: self.exps.iter().map(|e| e / g as i64).collect(),
            conj: self.conj,
            modulus: self.modulus / g,
        }
    }
}

/// A chosen representative in `ΓL(V)` for every group element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiProjectiveRep {
    maps: Vec<MonomialMap>,
}

impl SemiProjectiveRep {
    /// Takes one map per group element; the identity's representative is
    /// divided out so that `rep(1)` is the identity.
    pub fn new(g: &FiniteGroup, maps: Vec<MonomialMap>) -> Result<Self> {
        if maps.len() != g.order() {
            return Err(Error::input(format!("expected {} maps, got {}", g.order(), maps.len())));
        }
        let dim = maps[0].dim();
        if maps.iter().any(|m| m.dim() != dim) {
            return Err(Error::input("representatives have different dimensions"));
        }
        let id = MonomialMap::identity(dim);
        let (k, m) = maps[0]
            .scalar_ratio(&id)
            .ok_or_else(|| Error::input("the identity is not represented by a scalar"))?;
        let maps = maps.into_iter().map(|f| f.scale(-k, m)).collect();
        Ok(SemiProjectiveRep { maps })
    }

    pub fn map(&self, g: usize) -> &MonomialMap {
        &self.maps[g]
    }

    pub fn maps(&self) -> &[MonomialMap] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn modulus(&self) -> u64 {
        self.maps.iter().fold(1, |acc, m| acc.lcm(&m.modulus))
    }

    /// The induced action on the field, as a sign function on elements.
    pub fn phi(&self, g: &FiniteGroup) -> Result<SignCharacter> {
        let values: Vec<i64> = self.maps.iter().map(MonomialMap::auto_sign).collect();
        SignCharacter::from_values(g, &values)
    }
}

/// `R_g(e_h) = α(g,h)⁻¹·e_{gh}`, paired with `φ(g)`.
pub fn regular_semiprojective_rep(g: &FiniteGroup, alpha: &UnitCocycle, phi: &SignCharacter) -> Result<SemiProjectiveRep> {
    if alpha.degree() != 2 || alpha.group_order() != g.order() {
        return Err(Error::input("expected a 2-cocycle on this group"));
    }
    if !alpha.is_cocycle(g, phi)? {
        return Err(Error::precondition("α is not a 2-cocycle for this action"));
    }
    let n = g.order();
    let maps = (0..n)
        .map(|x| {
            MonomialMap::new(
                (0..n).map(|h| g.mul(x, h)).collect(),
                (0..n).map(|h| -alpha.exponent(&[x, h])).collect(),
                phi.value(x) == -1,
                alpha.modulus(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    SemiProjectiveRep::new(g, maps)
}

/// `α(g,h)` with `rep(gh) = α(g,h)·(rep(g)∘rep(h))`.
pub fn extract_cocycle(g: &FiniteGroup, f: &SemiProjectiveRep) -> Result<UnitCocycle> {
    if f.maps.len() != g.order() {
        return Err(Error::input("representation and group have different orders"));
    }
    let n = f.modulus();
    let mut failure = None;
    let alpha = UnitCocycle::from_fn(g.order(), 2, n, |t| {
        let (x, y) = (t[0], t[1]);
        match f.maps[g.mul(x, y)].scalar_ratio(&f.maps[x].compose(&f.maps[y])) {
            Some((k, m)) => k * (n / m) as i64,
            None => {
                failure = Some((x, y));
                0
            }
        }
    })?;
    if let Some((x, y)) = failure {
        return Err(Error::input(format!(
            "rep({x})∘rep({y}) is not a scalar multiple of rep({x}·{y}); the map is not semi-projective"
        )));
    }
    Ok(alpha)
}

/// Whether products agree with representatives up to scalars and the
/// automorphism flags form a character.
pub fn verify_semiprojective(g: &FiniteGroup, f: &SemiProjectiveRep) -> bool {
    f.maps.len() == g.order()
        && g.elements().all(|x| {
            g.elements()
                .all(|y| f.maps[g.mul(x, y)].scalar_ratio(&f.maps[x].compose(&f.maps[y])).is_some())
        })
}

/// A genuine semi-linear representation of `Γ` lifting `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearLift {
    pub maps: Vec<MonomialMap>,
    pub lambda: DualCharacter,
    pub tau: CoboundaryWitness,
}

/// Why no lift exists: the class needed from the transgression is missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftFailure {
    /// Class of `α` in the twisted multiplier.
    pub alpha_class: Vec<u64>,
    /// Class `−[α]` that `λ∘β` would have to represent.
    pub required_class: Vec<u64>,
    /// Transgression images of all equivariant characters.
    pub transgression_image: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LiftOutcome {
    Lifted(LinearLift),
    Failed(LiftFailure),
}

/// Lifts `f` to a semi-linear representation of `Γ`:
/// `F(a·s(g)) = λ(a)·τ(g)·f_g` with `∂τ = α + λ∘β`.
pub fn lift_over_extension(
    f: &SemiProjectiveRep,
    ext: &ExtensionData,
    mult: &TwistedMultiplier,
    _budget: &Budget,
) -> Result<LiftOutcome> {
    let g = ext.base();
    if mult.group().cayley_table() != g.cayley_table() || f.maps.len() != g.order() {
        return Err(Error::input("representation, extension and multiplier must share the group"));
    }
    if f.phi(g)? != *mult.phi() {
        return Err(Error::input("the representation's field action differs from the multiplier's"));
    }
    let alpha = extract_cocycle(g, f)?;
    let alpha_class = mult.bockstein_class(&alpha)?;
    let required: Vec<u64> = alpha_class
        .iter()
        .zip(mult.invariants())
        .map(|(&c, &d)| (d - c) % d)
        .collect();
    let mut image = Vec::new();
    for lambda in dual_characters(ext.module())? {
        if !is_equivariant_character(g, &lambda, ext.module(), mult.phi()) {
            continue;
        }
        let lb = compose_character(&lambda, ext)?;
        let class = mult.bockstein_class(&lb)?;
        if class != required {
            image.push(class);
            continue;
        }
        let target = alpha.add(&lb)?;
        let tau = mult
            .solve_coboundary(&target)?
            .ok_or_else(|| Error::Arithmetic("class vanishes but no coboundary witness was found".into()))?;
        let maps = assemble(f, ext, &lambda, &tau);
        verify_lift(f, ext, &maps)?;
        return Ok(LiftOutcome::Lifted(LinearLift { maps, lambda, tau }));
    }
    image.sort();
    image.dedup();
    Ok(LiftOutcome::Failed(LiftFailure {
        alpha_class,
        required_class: required,
        transgression_image: image,
    }))
}

fn assemble(f: &SemiProjectiveRep, ext: &ExtensionData, lambda: &DualCharacter, tau: &CoboundaryWitness) -> Vec<MonomialMap> {
    (0..ext.gamma().order())
        .map(|x| {
            let (a, g) = ext.decompose(x);
            f.maps[g]
                .scale(lambda.eval(&a), lambda.modulus)
                .scale(tau.numerators[g], tau.denominator)
                .normalized()
        })
        .collect()
}

/// Checks `F(x)∘F(y) = F(xy)` exactly and `[F(x)] = f(π(x))`.
pub fn verify_lift(f: &SemiProjectiveRep, ext: &ExtensionData, maps: &[MonomialMap]) -> Result<()> {
    let gam = ext.gamma();
    for x in gam.elements() {
        if maps[x].scalar_ratio(&f.maps[ext.projection()[x]]).is_none() {
            return Err(Error::Arithmetic(format!("F({x}) does not project to f")));
        }
        for y in gam.elements() {
            if maps[x].compose(&maps[y]).normalized() != maps[gam.mul(x, y)].normalized() {
                return Err(Error::Arithmetic(format!("F is not multiplicative at ({x}, {y})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard_group, StandardFamily};

    #[test]
    fn z2_conj_regular_rep_matrix() {
        let b = Budget::default();
        let z2 = standard_group(&StandardFamily::Cyclic { n: 2 }, &b).unwrap();
        let conj = SignCharacter::from_generators(&z2, &[-1]).unwrap();
        let alpha = UnitCocycle::from_fn(2, 2, 2, |_| 1).unwrap();
        let f = regular_semiprojective_rep(&z2, &alpha, &conj).unwrap();
        let r = f.map(1);
        // e₀ ↦ e₁, e₁ ↦ −e₀: the matrix [[0, −1], [1, 0]]
        assert_eq!(r.perm, vec![1, 0]);
        assert_eq!(r.exps, vec![0, 1]);
        assert!(r.conj);
        assert_eq!(extract_cocycle(&z2, &f).unwrap(), alpha);
    }

    #[test]
    fn perturbation_breaks_semiprojectivity() {
        let b = Budget::default();
        let z3 = standard_group(&StandardFamily::Cyclic { n: 3 }, &b).unwrap();
        let alpha = UnitCocycle::zero(3, 2);
        let mut f = regular_semiprojective_rep(&z3, &alpha, &SignCharacter::trivial(&z3)).unwrap();
        assert!(verify_semiprojective(&z3, &f));
        f.maps[1] = MonomialMap::new(f.maps[1].perm.clone(), vec![0, 1, 0], false, 2).unwrap();
        assert!(!verify_semiprojective(&z3, &f));
        assert!(extract_cocycle(&z3, &f).is_err());
    }

    #[test]
    fn one_dimensional_maps_are_scalar() {
        let b = Budget::default();
        let z4 = standard_group(&StandardFamily::Cyclic { n: 4 }, &b).unwrap();
        let maps = (0..4).map(|k| MonomialMap::new(vec![0], vec![k * 3], false, 7).unwrap()).collect();
        let f = SemiProjectiveRep::new(&z4, maps).unwrap();
        assert!(verify_semiprojective(&z4, &f));
    }
}
