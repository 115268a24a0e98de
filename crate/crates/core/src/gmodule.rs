//! Coefficient modules: finitely generated abelian groups `ℤʳ ⊕ ⊕ ℤ/mᵢ`
//! with a group acting by integer matrices, sign characters, and the
//! character group of a finite abelian group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A homomorphism `G → {±1}`, stored on every element.
///
/// Through the identification of complex conjugation with `-1` this is the
/// action of `G` on `ℂ` (and on `ℤ`, `ℤ/N` by negation).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignCharacter {
    values: Vec<i8>,
}

impl SignCharacter {
    pub fn trivial(g: &FiniteGroup) -> Self {
        SignCharacter { values: vec![1; g.order()] }
    }

    /// Extends values on the recorded generators of `g` to a homomorphism.
    pub fn from_generators(g: &FiniteGroup, signs: &[i64]) -> Result<Self> {
        if signs.len() != g.generators().len() {
            return Err(Error::input(format!(
                "action lists {} signs but the group has {} generators",
                signs.len(),
                g.generators().len()
            )));
        }
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::input(format!("sign {s} is not ±1")));
        }
        let mut values = vec![0i8; g.order()];
        values[0] = 1;
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (&gen, &s) in g.generators().iter().zip(signs) {
                let y = g.mul(x, gen);
                let v = values[x] * s as i8;
                if values[y] == 0 {
                    values[y] = v;
                    queue.push(y);
                } else if values[y] != v {
                    return Err(Error::precondition(
                        "the sign assignment does not extend to a homomorphism G → {±1}",
                    ));
                }
            }
            i += 1;
        }
        Ok(SignCharacter { values })
    }

    /// Accepts an explicit value on every element and verifies it.
    pub fn from_values(g: &FiniteGroup, values: &[i64]) -> Result<Self> {
        if values.len() != g.order() || values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::input("a sign character needs one ±1 value per element"));
        }
        let values: Vec<i8> = values.iter().map(|&v| v as i8).collect();
        for a in g.elements() {
            for b in g.elements() {
                if values[g.mul(a, b)] != values[a] * values[b] {
                    return Err(Error::precondition("values are not multiplicative"));
                }
            }
        }
        Ok(SignCharacter { values })
    }

    #[inline]
    pub fn value(&self, g: usize) -> i64 {
        self.values[g] as i64
    }

    pub fn values(&self) -> Vec<i64> {
        self.values.iter().map(|&v| v as i64).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    pub fn on_generators(&self, g: &FiniteGroup) -> Vec<i64> {
        g.generators().iter().map(|&x| self.value(x)).collect()
    }

    /// The composite `φ ∘ π` for a projection given as an element map.
    pub fn pull_back(&self, projection: &[usize]) -> SignCharacter {
        SignCharacter {
            values: projection.iter().map(|&x| self.values[x]).collect(),
        }
    }

    pub fn group_order(&self) -> usize {
        self.values.len()
    }
}

/// Square integer matrix acting on module coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        IntMatrix { dim, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("action matrix is not square"));
        }
        Ok(IntMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.dim.max(1)).take(self.dim).map(<[i64]>::to_vec).collect()
    }

    fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim;
        let mut data = vec![0; d * d];
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                if a != 0 {
                    for j in 0..d {
                        data[i * d + j] += a * other.get(l, j);
                    }
                }
            }
        }
        IntMatrix { dim: d, data }
    }
}

/// `ℤʳ ⊕ ℤ/m₁ ⊕ … ⊕ ℤ/m_k` with a left action of a finite group.
///
/// Coordinates `0..r` are free, coordinates `r..r+k` are torsion. Entries of
/// torsion rows are kept reduced modulo that row's modulus; torsion
/// coordinates never map into free ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedModule {
    free_rank: usize,
    moduli: Vec<u64>,
    action: Vec<IntMatrix>,
}

impl TwistedModule {
    /// `ℤ` with `g` acting by `φ(g)`.
    pub fn sign_module(g: &FiniteGroup, phi: &SignCharacter) -> Result<Self> {
        if phi.group_order() != g.order() {
            return Err(Error::input("sign character belongs to a different group"));
        }
        let action = g
            .elements()
            .map(|x| IntMatrix { dim: 1, data: vec![phi.value(x)] })
            .collect();
        Ok(TwistedModule { free_rank: 1, moduli: vec![], action })
    }

    /// Module with trivial action.
    pub fn trivial(g: &FiniteGroup, free_rank: usize, moduli: &[u64]) -> Result<Self> {
        let dim = free_rank + moduli.len();
        let gens = vec![IntMatrix::identity(dim).rows(); g.generators().len()];
        Self::from_generator_action(g, free_rank, moduli, &gens)
    }

    /// A finite module `⊕ ℤ/mᵢ` with the given matrices on the generators.
    pub fn finite(g: &FiniteGroup, moduli: &[u64], gens: &[Vec<Vec<i64>>]) -> Result<Self> {
        Self::from_generator_action(g, 0, moduli, gens)
    }

    /// General constructor: validates the generator matrices and extends them
    /// along the multiplication table, rejecting inconsistent assignments.
    pub fn from_generator_action(
        g: &FiniteGroup,
        free_rank: usize,
        moduli: &[u64],
        gens: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::input(format!("torsion modulus {m} must be at least 2")));
        }
        if gens.len() != g.generators().len() {
            return Err(Error::input(format!(
                "{} action matrices given for {} generators",
                gens.len(),
                g.generators().len()
            )));
        }
        let dim = free_rank + moduli.len();
        let skeleton = TwistedModule {
            free_rank,
            moduli: moduli.to_vec(),
            action: Vec::new(),
        };
        let mut gen_mats = Vec::with_capacity(gens.len());
        for rows in gens {
            let m = IntMatrix::from_rows(rows)?;
            if m.dim != dim {
                return Err(Error::input(format!(
                    "action matrix has size {}, module has {dim} coordinates",
                    m.dim
                )));
            }
            skeleton.check_well_defined(&m)?;
            gen_mats.push(skeleton.reduce_matrix(m));
        }
        let mut action: Vec<Option<IntMatrix>> = vec![None; g.order()];
        action[0] = Some(IntMatrix::identity(dim));
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (&gen, m) in g.generators().iter().zip(&gen_mats) {
                let y = g.mul(x, gen);
                let prod = skeleton.reduce_matrix(action[x].as_ref().unwrap().mul(m));
                match &action[y] {
                    None => {
                        action[y] = Some(prod);
                        queue.push(y);
                    }
                    Some(existing) if *existing != prod => {
                        return Err(Error::precondition(format!(
                            "generator action does not extend to a homomorphism (conflict at element {y})"
                        )));
                    }
                    Some(_) => {}
                }
            }
            i += 1;
        }
        Ok(TwistedModule {
            free_rank,
            moduli: moduli.to_vec(),
            action: action.into_iter().map(Option::unwrap).collect(),
        })
    }

    fn check_well_defined(&self, m: &IntMatrix) -> Result<()> {
        let r = self.free_rank;
        for i in 0..m.dim {
            for j in r..m.dim {
                let mj = self.moduli[j - r] as i64;
                let a = m.get(i, j);
                let ok = if i < r {
                    a == 0
                } else {
                    (a * mj).rem_euclid(self.moduli[i - r] as i64) == 0
                };
                if !ok {
                    return Err(Error::precondition(format!(
                        "action entry ({i},{j}) = {a} is not well defined on the torsion coordinates"
                    )));
                }
            }
        }
        Ok(())
    }

    fn reduce_matrix(&self, mut m: IntMatrix) -> IntMatrix {
        let d = m.dim;
        for i in self.free_rank..d {
            let mi = self.moduli[i - self.free_rank] as i64;
            for j in 0..d {
                m.data[i * d + j] = m.data[i * d + j].rem_euclid(mi);
            }
        }
        m
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.moduli.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn group_order(&self) -> usize {
        self.action.len()
    }

    /// Number of elements of a finite module.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.moduli.iter().product())
    }

    /// Modulus of a coordinate, `None` for free coordinates.
    pub fn coordinate_modulus(&self, i: usize) -> Option<u64> {
        (i >= self.free_rank).then(|| self.moduli[i - self.free_rank])
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// `g·v`, reduced.
    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        let m = &self.action[g];
        let mut out: Vec<i64> = (0..m.dim)
            .map(|i| (0..m.dim).map(|j| m.get(i, j) * v[j]).sum())
            .collect();
        self.reduce(&mut out);
        out
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (i, x) in v.iter_mut().enumerate().skip(self.free_rank) {
            *x = x.rem_euclid(self.moduli[i - self.free_rank] as i64);
        }
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = IntMatrix::identity(self.dim());
        self.action.iter().all(|m| *m == id)
    }

    /// Generator matrices in the group's generator order.
    pub fn generator_matrices(&self, g: &FiniteGroup) -> Vec<Vec<Vec<i64>>> {
        g.generators().iter().map(|&x| self.action[x].rows()).collect()
    }

    /// All elements of a finite module in mixed-radix order (first
    /// coordinate most significant).
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return Err(Error::input("cannot enumerate an infinite module"));
        }
        Ok(enumerate_mixed_radix(&self.moduli))
    }

    /// Mixed-radix index of a reduced element of a finite module.
    pub fn element_index(&self, v: &[i64]) -> usize {
        v.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }
}

pub(crate) fn enumerate_mixed_radix(moduli: &[u64]) -> Vec<Vec<i64>> {
    let total: u64 = moduli.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0i64; moduli.len()];
            for (slot, &m) in v.iter_mut().zip(moduli).rev() {
                *slot = (idx % m) as i64;
                idx /= m;
            }
            v
        })
        .collect()
}

/// A character `A → μ_N` of a finite abelian group `A = ⊕ ℤ/mᵢ`, stored by
/// the exponents of its values on the standard generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualCharacter {
    pub modulus: u64,
    pub exponents: Vec<i64>,
}

impl DualCharacter {
    /// Exponent of `χ(a)` modulo `N`.
    pub fn eval(&self, a: &[i64]) -> i64 {
        let n = self.modulus as i64;
        self.exponents
            .iter()
            .zip(a)
            .fold(0i64, |acc, (&e, &x)| (acc + e * x).rem_euclid(n))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// All characters of `⊕ ℤ/mᵢ`, valued in `μ_N` with `N` the exponent,
/// listed in mixed-radix order of their generator values.
pub fn dual_characters_of(moduli: &[u64]) -> Result<Vec<DualCharacter>> {
    if let Some(m) = moduli.iter().find(|&&m| m < 2) {
        return Err(Error::input(format!("modulus {m} must be at least 2")));
    }
    let n = moduli.iter().copied().fold(1u64, num_integer::lcm);
    Ok(enumerate_mixed_radix(moduli)
        .into_iter()
        .map(|t| DualCharacter {
            modulus: n,
            exponents: t
                .iter()
                .zip(moduli)
                .map(|(&ti, &m)| ti * (n / m) as i64)
                .collect(),
        })
        .collect())
}

pub fn dual_characters(module: &TwistedModule) -> Result<Vec<DualCharacter>> {
    if !module.is_finite() {
        return Err(Error::input("characters are only enumerated for finite modules"));
    }
    dual_characters_of(module.moduli())
}

/// Whether `χ(g∗a) = φ(g)·χ(a)` (written additively in the exponents) for
/// every generator `g` of the group and every standard generator `a` of `A`.
pub fn is_equivariant_character(
    g: &FiniteGroup,
    chi: &DualCharacter,
    module: &TwistedModule,
    phi: &SignCharacter,
) -> bool {
    let n = chi.modulus as i64;
    let dim = module.dim();
    g.generators().iter().all(|&x| {
        (0..dim).all(|j| {
            let mut e = vec![0i64; dim];
            e[j] = 1;
            let lhs = chi.eval(&module.act(x, &e));
            let rhs = (phi.value(x) * chi.eval(&e)).rem_euclid(n);
            lhs == rhs
        })
    })
}
