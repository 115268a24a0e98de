//! Cohomology of finite groups from the normalized bar complex.
//!
//! Cochains of degree `n` are indexed by `n`-tuples of non-identity
//! elements; a tuple containing the identity carries the value zero. The
//! tuple `(g₁,…,gₙ)` has index `Σ (gᵢ−1)(|G|−1)^{n−1−i}` and a module-valued
//! cochain is stored flat with coordinate `tuple_index·dim + component`.
//!
//! The differential is
//! `(∂τ)(g₁..gₙ) = g₁·τ(g₂..gₙ) + Σⱼ (−1)ʲ τ(…, gⱼgⱼ₊₁, …) + (−1)ⁿ τ(g₁..gₙ₋₁)`.
//!
//! Two routes compute `Hⁿ(G, M)`:
//!
//! * For a free module (`M ≅ ℤʳ`) and `n ≥ 1`, `Hⁿ ⊗ ℚ = 0`, so the cocycles
//!   are the saturation of the coboundaries and `Hⁿ` is the torsion of
//!   `coker ∂ⁿ`. One Smith form of `∂ⁿ` gives invariants, representatives
//!   and coordinates.
//! * Otherwise cocycles are computed as the kernel of `∂ⁿ⁺¹` modulo the
//!   torsion lattice, and the quotient by coboundaries is taken in a basis
//!   of that kernel.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gmodule::{SignCharacter, TwistedModule};
use crate::group::FiniteGroup;
use crate::snf::{smith_normal_form, SmithNormalForm, SparseIntMatrix};

/// Number of normalized `n`-tuples, checked against the budget.
pub fn tuple_count(order: usize, n: usize, budget: &Budget) -> Result<usize> {
    let base = order.saturating_sub(1) as u64;
    let count = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(base)).unwrap_or(u64::MAX);
    if count > budget.max_tuples as u64 {
        return Err(Error::resource(
            format!("normalized {n}-cochains of a group of order {order}"),
            count,
            budget.max_tuples as u64,
        ));
    }
    Ok(count as usize)
}

fn raw_count(order: usize, n: usize) -> usize {
    (order.saturating_sub(1)).pow(n as u32)
}

pub(crate) fn encode(tuple: &[usize], order: usize) -> usize {
    let base = order - 1;
    tuple.iter().fold(0, |acc, &g| acc * base + (g - 1))
}

pub(crate) fn decode(mut idx: usize, n: usize, order: usize) -> Vec<usize> {
    let base = order - 1;
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = idx % base + 1;
        idx /= base;
    }
    t
}

/// A normalized cochain `Gⁿ → M` with values stored as integer vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CocycleTable {
    degree: usize,
    group_order: usize,
    dim: usize,
    values: Vec<i64>,
}

impl CocycleTable {
    pub fn zero(group_order: usize, degree: usize, dim: usize) -> Self {
        CocycleTable {
            degree,
            group_order,
            dim,
            values: vec![0; raw_count(group_order, degree) * dim],
        }
    }

    /// Takes the flat coordinate vector (`tuple_index·dim + component`).
    pub fn from_values(group_order: usize, degree: usize, dim: usize, values: Vec<i64>) -> Result<Self> {
        let expected = raw_count(group_order, degree) * dim;
        if values.len() != expected {
            return Err(Error::input(format!(
                "a degree-{degree} cochain of a group of order {group_order} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(CocycleTable {
            degree,
            group_order,
            dim,
            values,
        })
    }

    /// Fills a cochain from a function of non-identity tuples.
    pub fn from_fn(group_order: usize, degree: usize, dim: usize, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Self {
        let count = raw_count(group_order, degree);
        let mut values = Vec::with_capacity(count * dim);
        for idx in 0..count {
            let v = f(&decode(idx, degree, group_order));
            assert_eq!(v.len(), dim);
            values.extend(v);
        }
        CocycleTable {
            degree,
            group_order,
            dim,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn num_tuples(&self) -> usize {
        raw_count(self.group_order, self.degree)
    }

    /// Value at an arbitrary tuple (zero when it contains the identity).
    pub fn get(&self, tuple: &[usize]) -> Vec<i64> {
        debug_assert_eq!(tuple.len(), self.degree);
        if tuple.contains(&0) {
            return vec![0; self.dim];
        }
        let i = encode(tuple, self.group_order) * self.dim;
        self.values[i..i + self.dim].to_vec()
    }

    pub fn set(&mut self, tuple: &[usize], v: &[i64]) -> Result<()> {
        if tuple.contains(&0) {
            if v.iter().all(|&x| x == 0) {
                return Ok(());
            }
            return Err(Error::input("normalized cochains vanish on tuples containing the identity"));
        }
        let i = encode(tuple, self.group_order) * self.dim;
        self.values[i..i + self.dim].copy_from_slice(v);
        Ok(())
    }

    /// Non-identity tuples paired with their values.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &[i64])> {
        (0..self.num_tuples()).map(move |i| {
            (
                decode(i, self.degree, self.group_order),
                &self.values[i * self.dim..(i + 1) * self.dim],
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    fn to_big(&self) -> Vec<BigInt> {
        self.values.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn from_big(group_order: usize, degree: usize, module: &TwistedModule, v: &[BigInt]) -> Result<Self> {
        let dim = module.dim();
        let mut values = Vec::with_capacity(v.len());
        for (i, x) in v.iter().enumerate() {
            let x = match module.coordinate_modulus(i % dim) {
                Some(m) => x.mod_floor(&BigInt::from(m)),
                None => x.clone(),
            };
            values.push(x.to_i64().ok_or_else(|| Error::Arithmetic("cochain entry exceeds 64 bits".into()))?);
        }
        Self::from_values(group_order, degree, dim, values)
    }

    /// Entrywise `self + k·other`, reduced in `module`.
    pub fn add_scaled(&self, other: &CocycleTable, k: i64, module: &TwistedModule) -> CocycleTable {
        assert_eq!(self.values.len(), other.values.len());
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a += k * b;
        }
        for chunk in out.values.chunks_mut(self.dim.max(1)) {
            module.reduce(chunk);
        }
        out
    }
}

/// Matrix of `∂: Cⁿ⁻¹ → Cⁿ` in the flat coordinates (free coordinates are
/// treated over `ℤ`; torsion is accounted for separately).
pub fn coboundary_matrix(g: &FiniteGroup, m: &TwistedModule, n: usize, budget: &Budget) -> Result<SparseIntMatrix> {
    if n == 0 {
        return Err(Error::input("coboundary degree must be at least 1"));
    }
    if m.group_order() != g.order() {
        return Err(Error::input("module belongs to a group of a different order"));
    }
    let order = g.order();
    let rows_t = tuple_count(order, n, budget)?;
    let cols_t = raw_count(order, n - 1);
    let dim = m.dim();
    let mut lists: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rows_t * dim];
    for rt in 0..rows_t {
        let t = decode(rt, n, order);
        let push_identity = |ct: usize, sign: i64, lists: &mut Vec<Vec<(usize, i64)>>| {
            for i in 0..dim {
                lists[rt * dim + i].push((ct * dim + i, sign));
            }
        };
        // g₁·τ(g₂..gₙ)
        let first = encode(&t[1..], order);
        let a = m.action(t[0]);
        for i in 0..dim {
            for j in 0..dim {
                let v = a.get(i, j);
                if v != 0 {
                    lists[rt * dim + i].push((first * dim + j, v));
                }
            }
        }
        for j in 1..n {
            let prod = g.mul(t[j - 1], t[j]);
            if prod == 0 {
                continue;
            }
            let mut s: Vec<usize> = Vec::with_capacity(n - 1);
            s.extend_from_slice(&t[..j - 1]);
            s.push(prod);
            s.extend_from_slice(&t[j + 1..]);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            push_identity(encode(&s, order), sign, &mut lists);
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        push_identity(encode(&t[..n - 1], order), sign, &mut lists);
    }
    Ok(SparseIntMatrix::from_row_lists(rows_t * dim, cols_t * dim, lists))
}

/// `∂c` evaluated directly, reduced in `m`.
pub fn coboundary(g: &FiniteGroup, m: &TwistedModule, c: &CocycleTable) -> CocycleTable {
    let n = c.degree + 1;
    let order = g.order();
    let dim = m.dim();
    CocycleTable::from_fn(order, n, dim, |t| {
        let mut out = m.act(t[0], &c.get(&t[1..]));
        for j in 1..n {
            let mut s: Vec<usize> = Vec::with_capacity(n - 1);
            s.extend_from_slice(&t[..j - 1]);
            s.push(g.mul(t[j - 1], t[j]));
            s.extend_from_slice(&t[j + 1..]);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            for (o, v) in out.iter_mut().zip(c.get(&s)) {
                *o += sign * v;
            }
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for (o, v) in out.iter_mut().zip(c.get(&t[..n - 1])) {
            *o += sign * v;
        }
        m.reduce(&mut out);
        out
    })
}

pub fn is_cocycle(g: &FiniteGroup, m: &TwistedModule, c: &CocycleTable) -> bool {
    c.dim == m.dim() && c.group_order == g.order() && coboundary(g, m, c).is_zero()
}

#[derive(Debug, Clone)]
enum ClassMap {
    /// Free coefficients: Smith form of `∂ⁿ`; invariant `i` sits at
    /// diagonal position `positions[i]`.
    Free { snf: Arc<SmithNormalForm> },
    /// General coefficients: `zsnf` is the Smith form of a generating matrix
    /// of the cocycle lattice, `hsnf` that of the coboundaries written in the
    /// resulting cocycle basis.
    General {
        zsnf: SmithNormalForm,
        hsnf: SmithNormalForm,
    },
}

/// `Hⁿ(G, M)` with explicit representatives and a class-coordinate map.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    group: FiniteGroup,
    module: TwistedModule,
    degree: usize,
    invariants: Vec<u64>,
    positions: Vec<usize>,
    representatives: Vec<CocycleTable>,
    map: ClassMap,
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn module(&self) -> &TwistedModule {
        &self.module
    }

    /// Invariant factors `d₁ | d₂ | …`, all at least 2.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// One cocycle per invariant factor; its coordinates are the unit vector.
    pub fn representatives(&self) -> &[CocycleTable] {
        &self.representatives
    }

    /// Class coordinates of a cocycle, each reduced modulo its invariant.
    pub fn coordinates(&self, c: &CocycleTable) -> Result<Vec<u64>> {
        if c.degree != self.degree || c.dim != self.module.dim() || c.group_order != self.group.order() {
            return Err(Error::input("cochain does not match this cohomology group"));
        }
        if !is_cocycle(&self.group, &self.module, c) {
            return Err(Error::precondition(format!("the given {}-cochain is not a cocycle", self.degree)));
        }
        let mut x = c.to_big();
        let transformed = match &self.map {
            ClassMap::Free { snf } => {
                snf.apply_u(&mut x);
                if x[snf.rank()..].iter().any(|v| !v.is_zero()) {
                    return Err(Error::precondition("cochain is not a cocycle"));
                }
                x
            }
            ClassMap::General { zsnf, hsnf } => {
                let mut y = z_coordinates(zsnf, x)
                    .ok_or_else(|| Error::precondition("cochain is not a cocycle"))?;
                hsnf.apply_u(&mut y);
                y
            }
        };
        Ok(self
            .positions
            .iter()
            .zip(&self.invariants)
            .map(|(&p, &d)| transformed[p].mod_floor(&BigInt::from(d)).to_u64().expect("reduced"))
            .collect())
    }

    /// The cocycle `Σ cᵢ·repᵢ`.
    pub fn representative_of(&self, coords: &[u64]) -> Result<CocycleTable> {
        if coords.len() != self.invariants.len() {
            return Err(Error::input(format!(
                "expected {} class coordinates, got {}",
                self.invariants.len(),
                coords.len()
            )));
        }
        let mut acc = CocycleTable::zero(self.group.order(), self.degree, self.module.dim());
        for ((&k, &d), r) in coords.iter().zip(&self.invariants).zip(&self.representatives) {
            acc = acc.add_scaled(r, (k % d) as i64, &self.module);
        }
        Ok(acc)
    }

    /// Every class with its representative, in lexicographic coordinate order.
    pub fn enumerate_classes(&self, limit: u64) -> Result<Vec<(Vec<u64>, CocycleTable)>> {
        let total = self.order();
        if total > limit {
            return Err(Error::resource("cohomology classes to enumerate", total, limit));
        }
        crate::gmodule::enumerate_mixed_radix(&self.invariants)
            .into_iter()
            .map(|c| {
                let c: Vec<u64> = c.into_iter().map(|x| x as u64).collect();
                let rep = self.representative_of(&c)?;
                Ok((c, rep))
            })
            .collect()
    }

    pub(crate) fn free_snf(&self) -> Option<&SmithNormalForm> {
        match &self.map {
            ClassMap::Free { snf } => Some(snf),
            ClassMap::General { .. } => None,
        }
    }
}

/// Coordinates in the cocycle basis `U_P⁻¹(dᵢeᵢ)`, or `None` when `x` is
/// outside the lattice.
fn z_coordinates(zsnf: &SmithNormalForm, mut x: Vec<BigInt>) -> Option<Vec<BigInt>> {
    zsnf.apply_u(&mut x);
    let r = zsnf.rank();
    if x[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(r);
    for (v, d) in x.into_iter().zip(zsnf.invariant_factors()) {
        let (q, rem) = v.div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        out.push(q);
    }
    Some(out)
}

fn to_u64(d: &BigInt) -> Result<u64> {
    d.to_u64().ok_or_else(|| Error::Arithmetic("invariant factor exceeds 64 bits".into()))
}

fn column_vectors(m: &SparseIntMatrix) -> Vec<Vec<(usize, BigInt)>> {
    let t = m.transpose();
    (0..t.rows()).map(|c| t.row(c).to_vec()).collect()
}

/// `Hⁿ(G, M)` for `n ≥ 1`.
pub fn cohomology_group(g: &FiniteGroup, m: &TwistedModule, n: usize, budget: &Budget) -> Result<CohomologyGroup> {
    if n == 0 {
        return Err(Error::input("cohomology degree must be at least 1"));
    }
    if m.moduli().is_empty() {
        free_route(g, m, n, budget)
    } else {
        general_route(g, m, n, budget)
    }
}

fn free_route(g: &FiniteGroup, m: &TwistedModule, n: usize, budget: &Budget) -> Result<CohomologyGroup> {
    let d = coboundary_matrix(g, m, n, budget)?;
    let snf = smith_normal_form(&d);
    let mut invariants = Vec::new();
    let mut positions = Vec::new();
    let mut representatives = Vec::new();
    for (i, di) in snf.invariant_factors().iter().enumerate() {
        if di.is_one() {
            continue;
        }
        invariants.push(to_u64(di)?);
        positions.push(i);
        let mut e = vec![BigInt::zero(); d.rows()];
        e[i] = BigInt::one();
        snf.apply_u_inv(&mut e);
        representatives.push(CocycleTable::from_big(g.order(), n, m, &e)?);
    }
    Ok(CohomologyGroup {
        group: g.clone(),
        module: m.clone(),
        degree: n,
        invariants,
        positions,
        representatives,
        map: ClassMap::Free { snf: Arc::new(snf) },
    })
}

/// Flat positions of torsion coordinates of a cochain space with `tuples`
/// tuples, with their moduli.
fn torsion_positions(m: &TwistedModule, tuples: usize) -> Vec<(usize, u64)> {
    let dim = m.dim();
    (0..tuples)
        .flat_map(|t| (m.free_rank()..dim).map(move |k| (t * dim + k, k)))
        .map(|(p, k)| (p, m.coordinate_modulus(k).expect("torsion coordinate")))
        .collect()
}

fn general_route(g: &FiniteGroup, m: &TwistedModule, n: usize, budget: &Budget) -> Result<CohomologyGroup> {
    let order = g.order();
    let dn = coboundary_matrix(g, m, n, budget)?;
    let dn1 = coboundary_matrix(g, m, n + 1, budget)?;
    let a_n = dn.rows();
    let a_n1 = dn1.rows();

    // Cocycles: x with ∂x in the torsion lattice of Cⁿ⁺¹.
    let tors_n1 = torsion_positions(m, raw_count(order, n + 1));
    let mut triples: Vec<(usize, usize, BigInt)> = dn1.triples().map(|(r, c, v)| (r, c, v.clone())).collect();
    for (k, &(p, modulus)) in tors_n1.iter().enumerate() {
        triples.push((p, a_n + k, BigInt::from(modulus)));
    }
    let stacked = SparseIntMatrix::from_triples(a_n1, a_n + tors_n1.len(), triples)?;
    let ksnf = smith_normal_form(&stacked);
    let mut p_triples = Vec::new();
    for (col, i) in (ksnf.rank()..stacked.cols()).enumerate() {
        let mut e = vec![BigInt::zero(); stacked.cols()];
        e[i] = BigInt::one();
        ksnf.apply_v(&mut e);
        for (r, v) in e.into_iter().take(a_n).enumerate() {
            if !v.is_zero() {
                p_triples.push((r, col, v));
            }
        }
    }
    let p = SparseIntMatrix::from_triples(a_n, stacked.cols() - ksnf.rank(), p_triples)?;
    let zsnf = smith_normal_form(&p);
    let zr = zsnf.rank();

    // Coboundaries and the torsion lattice of Cⁿ, in cocycle coordinates.
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for col in column_vectors(&dn) {
        let mut x = vec![BigInt::zero(); a_n];
        for (r, v) in col {
            x[r] = v;
        }
        gens.push(x);
    }
    for (pos, modulus) in torsion_positions(m, raw_count(order, n)) {
        let mut x = vec![BigInt::zero(); a_n];
        x[pos] = BigInt::from(modulus);
        gens.push(x);
    }
    let mut c_triples = Vec::new();
    for (col, x) in gens.into_iter().enumerate() {
        let y = z_coordinates(&zsnf, x)
            .ok_or_else(|| Error::Arithmetic("a coboundary is not a cocycle; module action is inconsistent".into()))?;
        for (r, v) in y.into_iter().enumerate() {
            if !v.is_zero() {
                c_triples.push((r, col, v));
            }
        }
    }
    let ncols = c_triples.iter().map(|t| t.1 + 1).max().unwrap_or(0);
    let cmat = SparseIntMatrix::from_triples(zr, ncols, c_triples)?;
    let hsnf = smith_normal_form(&cmat);
    if hsnf.rank() < zr {
        return Err(Error::Arithmetic(format!(
            "H^{n} has a free summand; the coefficient data is inconsistent"
        )));
    }

    let mut invariants = Vec::new();
    let mut positions = Vec::new();
    let mut representatives = Vec::new();
    for (i, di) in hsnf.invariant_factors().iter().enumerate() {
        if di.is_one() {
            continue;
        }
        invariants.push(to_u64(di)?);
        positions.push(i);
        let mut v = vec![BigInt::zero(); zr];
        v[i] = BigInt::one();
        hsnf.apply_u_inv(&mut v);
        let mut x = vec![BigInt::zero(); a_n];
        for (j, (vj, dj)) in v.into_iter().zip(zsnf.invariant_factors()).enumerate() {
            x[j] = vj * dj;
        }
        zsnf.apply_u_inv(&mut x);
        representatives.push(CocycleTable::from_big(order, n, m, &x)?);
    }
    Ok(CohomologyGroup {
        group: g.clone(),
        module: m.clone(),
        degree: n,
        invariants,
        positions,
        representatives,
        map: ClassMap::General { zsnf, hsnf },
    })
}

/// One normalized 2-cocycle per class of `H²(G, A)`, listed in
/// lexicographic order of class coordinates.
pub fn h2_class_representatives(g: &FiniteGroup, a: &TwistedModule, budget: &Budget) -> Result<Vec<CocycleTable>> {
    if !a.is_finite() {
        return Err(Error::input("H² class enumeration needs a finite coefficient module"));
    }
    if g.order() == 1 {
        return Ok(vec![CocycleTable::zero(1, 2, a.dim())]);
    }
    let h = cohomology_group(g, a, 2, budget)?;
    let limit = budget.max_group_order as u64;
    Ok(h.enumerate_classes(limit)?.into_iter().map(|(_, c)| c).collect())
}

/// A normalized cochain valued in the `N`-th roots of unity, stored by
/// exponents in `0..N` (entry `e` stands for `exp(2πi·e/N)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitCocycle {
    modulus: u64,
    table: CocycleTable,
}

impl UnitCocycle {
    pub fn new(modulus: u64, table: CocycleTable) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::input("root-of-unity modulus must be positive"));
        }
        if table.dim != 1 {
            return Err(Error::input("root-of-unity cochains are one-dimensional"));
        }
        let mut table = table;
        for v in &mut table.values {
            *v = v.rem_euclid(modulus as i64);
        }
        Ok(UnitCocycle { modulus, table })
    }

    pub fn zero(group_order: usize, degree: usize) -> Self {
        UnitCocycle {
            modulus: 1,
            table: CocycleTable::zero(group_order, degree, 1),
        }
    }

    pub fn from_fn(group_order: usize, degree: usize, modulus: u64, mut f: impl FnMut(&[usize]) -> i64) -> Result<Self> {
        Self::new(modulus, CocycleTable::from_fn(group_order, degree, 1, |t| vec![f(t)]))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.table.degree
    }

    pub fn group_order(&self) -> usize {
        self.table.group_order
    }

    pub fn table(&self) -> &CocycleTable {
        &self.table
    }

    pub fn exponent(&self, tuple: &[usize]) -> i64 {
        self.table.get(tuple)[0]
    }

    /// The same cochain written over `μ_M` for a multiple `M` of the modulus.
    pub fn with_modulus(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.modulus != 0 {
            return Err(Error::input(format!("{m} is not a multiple of {}", self.modulus)));
        }
        let k = (m / self.modulus) as i64;
        Self::new(m, CocycleTable { values: self.table.values.iter().map(|v| v * k).collect(), ..self.table.clone() })
    }

    /// Pointwise product (sum of exponents) over the lcm of the moduli.
    pub fn add(&self, other: &UnitCocycle) -> Result<Self> {
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.with_modulus(m)?, other.with_modulus(m)?);
        let values = a.table.values.iter().zip(&b.table.values).map(|(x, y)| x + y).collect();
        Self::new(m, CocycleTable { values, ..a.table })
    }

    pub fn negate(&self) -> Self {
        let values = self.table.values.iter().map(|v| -v).collect();
        Self::new(self.modulus, CocycleTable { values, ..self.table.clone() }).expect("valid")
    }

    /// The integer cochain `∂ã` of the lift `ã` with entries in `0..N`.
    fn lifted_coboundary(&self, g: &FiniteGroup, phi: &SignCharacter) -> Result<CocycleTable> {
        let z = TwistedModule::sign_module(g, phi)?;
        Ok(coboundary(g, &z, &self.table))
    }

    /// Whether this is a cocycle for the action of `phi` on roots of unity.
    pub fn is_cocycle(&self, g: &FiniteGroup, phi: &SignCharacter) -> Result<bool> {
        let n = self.modulus as i64;
        Ok(self.lifted_coboundary(g, phi)?.values.iter().all(|v| v % n == 0))
    }
}

/// `τ: G → ℚ/ℤ` with `τ(g) = numerators[g]/denominator`, standing for the
/// root of unity `exp(2πi·τ(g))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoboundaryWitness {
    pub denominator: u64,
    pub numerators: Vec<i64>,
}

impl CoboundaryWitness {
    pub fn value(&self, g: usize) -> BigRational {
        BigRational::new(BigInt::from(self.numerators[g]), BigInt::from(self.denominator))
    }

    /// `τ` as a 1-cochain over `μ_denominator`.
    pub fn as_cochain(&self) -> UnitCocycle {
        let order = self.numerators.len();
        UnitCocycle::from_fn(order, 1, self.denominator, |t| self.numerators[t[0]]).expect("positive denominator")
    }
}

/// `H²(G, ℂ*_φ)`, realized as `H³(G, ℤ_φ)` through the exponential sequence.
#[derive(Debug, Clone)]
pub struct TwistedMultiplier {
    phi: SignCharacter,
    module: TwistedModule,
    h3: CohomologyGroup,
    d2: SmithNormalForm,
}

pub fn twisted_multiplier(g: &FiniteGroup, phi: &SignCharacter, budget: &Budget) -> Result<TwistedMultiplier> {
    let module = TwistedModule::sign_module(g, phi)?;
    let h3 = cohomology_group(g, &module, 3, budget)?;
    let d2 = smith_normal_form(&coboundary_matrix(g, &module, 2, budget)?);
    Ok(TwistedMultiplier {
        phi: phi.clone(),
        module,
        h3,
        d2,
    })
}

impl TwistedMultiplier {
    pub fn group(&self) -> &FiniteGroup {
        self.h3.group()
    }

    pub fn phi(&self) -> &SignCharacter {
        &self.phi
    }

    pub fn invariants(&self) -> &[u64] {
        self.h3.invariants()
    }

    pub fn order(&self) -> u64 {
        self.h3.order()
    }

    pub fn exponent(&self) -> u64 {
        self.h3.exponent()
    }

    /// The underlying `H³(G, ℤ_φ)`.
    pub fn cohomology(&self) -> &CohomologyGroup {
        &self.h3
    }

    fn check(&self, alpha: &UnitCocycle) -> Result<CocycleTable> {
        if alpha.degree() != 2 || alpha.group_order() != self.group().order() {
            return Err(Error::input("expected a 2-cochain on the multiplier's group"));
        }
        let mut b = alpha.lifted_coboundary(self.group(), &self.phi)?;
        let n = alpha.modulus as i64;
        for v in &mut b.values {
            if *v % n != 0 {
                return Err(Error::precondition("the given root-of-unity 2-cochain is not a cocycle"));
            }
            *v /= n;
        }
        Ok(b)
    }

    /// Image of `[α]` under `H²(G, μ_N) → H²(G, ℂ*_φ) ≅ H³(G, ℤ_φ)`.
    pub fn bockstein_class(&self, alpha: &UnitCocycle) -> Result<Vec<u64>> {
        let b = self.check(alpha)?;
        self.h3.coordinates(&b)
    }

    /// `τ` with `∂τ = α` in `ℂ*`, or `None` when `[α]` is nontrivial.
    pub fn solve_coboundary(&self, alpha: &UnitCocycle) -> Result<Option<CoboundaryWitness>> {
        let b = self.check(alpha)?;
        if self.h3.coordinates(&b)?.iter().any(|&c| c != 0) {
            return Ok(None);
        }
        let order = self.group().order();
        let n = BigInt::from(alpha.modulus);

        // Integer c with ∂c = b, so that ã − N·c is a rational coboundary.
        let d3 = self.h3.free_snf().expect("free coefficients");
        let mut y = b.to_big();
        d3.apply_u(&mut y);
        let mut w = vec![BigInt::zero(); d3.cols()];
        for (i, d) in d3.invariant_factors().iter().enumerate() {
            let (q, r) = y[i].div_rem(d);
            if !r.is_zero() {
                return Err(Error::Arithmetic("Bockstein lift is not divisible".into()));
            }
            w[i] = q;
        }
        d3.apply_v(&mut w);
        let target: Vec<BigInt> = alpha.table.to_big().into_iter().zip(&w).map(|(a, c)| a - &n * c).collect();

        // Rational solution of ∂τ = target/N.
        let mut u = target;
        self.d2.apply_u(&mut u);
        if u[self.d2.rank()..].iter().any(|v| !v.is_zero()) {
            return Err(Error::Arithmetic("rational coboundary system is inconsistent".into()));
        }
        let mut denom = BigInt::one();
        let mut z: Vec<BigRational> = vec![BigRational::zero(); self.d2.cols()];
        for (i, d) in self.d2.invariant_factors().iter().enumerate() {
            z[i] = BigRational::new(u[i].clone(), &n * d);
            denom = denom.lcm(z[i].denom());
        }
        let mut num: Vec<BigInt> = z.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
        self.d2.apply_v(&mut num);
        let mut tau = vec![BigRational::zero(); order];
        for (k, v) in num.into_iter().enumerate() {
            tau[k + 1] = BigRational::new(v, denom.clone()).fract();
            if tau[k + 1].is_negative() {
                tau[k + 1] += BigRational::one();
            }
        }
        let denominator = tau.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let den = to_u64(&denominator)?;
        let numerators = tau
            .iter()
            .map(|q| (q.numer() * (&denominator / q.denom())).to_i64().expect("bounded by denominator"))
            .collect();
        let witness = CoboundaryWitness {
            denominator: den,
            numerators,
        };
        if !self.verify_witness(alpha, &witness)? {
            return Err(Error::Arithmetic("coboundary witness failed verification".into()));
        }
        Ok(Some(witness))
    }

    /// Checks `∂τ = α` exactly.
    pub fn verify_witness(&self, alpha: &UnitCocycle, w: &CoboundaryWitness) -> Result<bool> {
        let m = alpha.modulus.lcm(&w.denominator);
        let tau = w.as_cochain().with_modulus(m)?;
        let dtau = UnitCocycle::new(m, coboundary(self.group(), &self.module, &tau.table))?;
        Ok(dtau == alpha.with_modulus(m)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard_group, StandardFamily};

    fn grp(f: StandardFamily) -> FiniteGroup {
        standard_group(&f, &Budget::default()).unwrap()
    }

    fn sign(g: &FiniteGroup, s: &[i64]) -> SignCharacter {
        SignCharacter::from_generators(g, s).unwrap()
    }

    #[test]
    fn tuple_index_round_trip() {
        for idx in 0..343 {
            assert_eq!(encode(&decode(idx, 3, 8), 8), idx);
        }
    }

    #[test]
    fn z2_sign_small_differentials() {
        let g = grp(StandardFamily::Cyclic { n: 2 });
        let m = TwistedModule::sign_module(&g, &sign(&g, &[-1])).unwrap();
        let b = Budget::default();
        assert!(coboundary_matrix(&g, &m, 2, &b).unwrap().is_zero());
        let d2 = coboundary_matrix(&g, &m, 3, &b).unwrap();
        assert_eq!(d2.to_dense(), vec![vec![BigInt::from(-2)]]);
    }

    #[test]
    fn multiplier_values() {
        let b = Budget::default();
        let z2 = grp(StandardFamily::Cyclic { n: 2 });
        assert_eq!(twisted_multiplier(&z2, &sign(&z2, &[-1]), &b).unwrap().invariants(), &[2]);
        assert!(twisted_multiplier(&z2, &sign(&z2, &[1]), &b).unwrap().invariants().is_empty());
        let d4 = grp(StandardFamily::Dihedral { n: 4 });
        assert_eq!(twisted_multiplier(&d4, &sign(&d4, &[1, 1]), &b).unwrap().invariants(), &[2]);
        assert_eq!(twisted_multiplier(&d4, &sign(&d4, &[-1, -1]), &b).unwrap().invariants(), &[2, 2]);
    }

    #[test]
    fn h2_class_counts() {
        let b = Budget::default();
        let z2 = grp(StandardFamily::Cyclic { n: 2 });
        let a2 = TwistedModule::trivial(&z2, 0, &[2]).unwrap();
        assert_eq!(h2_class_representatives(&z2, &a2, &b).unwrap().len(), 2);
        let a3 = TwistedModule::trivial(&z2, 0, &[3]).unwrap();
        assert_eq!(h2_class_representatives(&z2, &a3, &b).unwrap().len(), 1);
        let triv = grp(StandardFamily::Cyclic { n: 1 });
        let a = TwistedModule::trivial(&triv, 0, &[5]).unwrap();
        assert_eq!(h2_class_representatives(&triv, &a, &b).unwrap().len(), 1);
    }

    #[test]
    fn z2_bockstein_and_witness() {
        let b = Budget::default();
        let z2 = grp(StandardFamily::Cyclic { n: 2 });
        let alpha = UnitCocycle::from_fn(2, 2, 2, |_| 1).unwrap();
        let conj = twisted_multiplier(&z2, &sign(&z2, &[-1]), &b).unwrap();
        assert_eq!(conj.bockstein_class(&alpha).unwrap(), vec![1]);
        assert!(conj.solve_coboundary(&alpha).unwrap().is_none());
        let triv = twisted_multiplier(&z2, &sign(&z2, &[1]), &b).unwrap();
        let w = triv.solve_coboundary(&alpha).unwrap().unwrap();
        // τ(g) is a quarter turn: τ(g)² = −1.
        assert_eq!(w.value(1).denom(), &BigInt::from(4));
        assert!(triv.verify_witness(&alpha, &w).unwrap());
    }

    #[test]
    fn free_and_general_routes_agree() {
        let b = Budget::default();
        for (g, signs) in [
            (grp(StandardFamily::Cyclic { n: 4 }), vec![-1]),
            (grp(StandardFamily::Cyclic { n: 3 }), vec![1]),
            (grp(StandardFamily::Dihedral { n: 3 }), vec![-1, 1]),
            (grp(StandardFamily::DirectProduct {
                left: Box::new(StandardFamily::Cyclic { n: 2 }),
                right: Box::new(StandardFamily::Cyclic { n: 2 }),
            }), vec![1, -1]),
        ] {
            let m = TwistedModule::sign_module(&g, &sign(&g, &signs)).unwrap();
            for n in 1..=3 {
                let a = free_route(&g, &m, n, &b).unwrap();
                let c = general_route(&g, &m, n, &b).unwrap();
                assert_eq!(a.invariants(), c.invariants(), "{} degree {n}", g.name());
                for r in a.representatives() {
                    assert!(c.coordinates(r).unwrap().iter().any(|&x| x != 0));
                }
            }
        }
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let b = Budget::default();
        let z3 = grp(StandardFamily::Cyclic { n: 3 });
        let m = twisted_multiplier(&z3, &SignCharacter::trivial(&z3), &b).unwrap();
        let bad = UnitCocycle::from_fn(3, 2, 3, |t| if t == [1, 1] { 1 } else { 0 }).unwrap();
        assert!(matches!(m.bockstein_class(&bad), Err(Error::Precondition(_))));
    }
}
