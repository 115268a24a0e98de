//! Finite groups given by complete multiplication tables.
//!
//! Every group in the crate is a [`FiniteGroup`]: elements are the indices
//! `0..order`, element `0` is the identity, and products are looked up in a
//! flat table. Groups built by closing generators order their elements by
//! breadth-first discovery (right multiplication by the generators, in the
//! order given), so identical inputs always give identical tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Orders up to this bound get a full associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
/// Number of random triples checked above [`FULL_ASSOCIATIVITY_LIMIT`].
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 10_000;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
    name: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a Cayley table (`table[a][b]` is the index of `a·b`).
    ///
    /// When `generators` is `None` a small generating set is chosen greedily.
    pub fn from_cayley(
        table: &[Vec<usize>],
        generators: Option<Vec<usize>>,
        name: impl Into<String>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::input("empty Cayley table"));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "Cayley table row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::input(format!("Cayley entry {x} out of range")));
                }
                mul.push(x as u32);
            }
        }
        Self::from_flat(n, mul, generators, name.into())
    }

    pub(crate) fn from_flat(
        order: usize,
        mul: Vec<u32>,
        generators: Option<Vec<usize>>,
        name: String,
    ) -> Result<Self> {
        debug_assert_eq!(mul.len(), order * order);
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::precondition(
                    "element 0 is not a two-sided identity",
                ));
            }
        }
        // Each row must be a permutation; this also yields right inverses.
        let mut inv = vec![u32::MAX; order];
        let mut seen = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                let c = mul[a * order + b] as usize;
                if seen[c] == a {
                    return Err(Error::precondition(format!(
                        "row {a} of the table is not a permutation"
                    )));
                }
                seen[c] = a;
                if c == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        for a in 0..order {
            if mul[inv[a] as usize * order + a] != 0 {
                return Err(Error::precondition(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
        }
        let mut group = FiniteGroup {
            order,
            mul,
            inv,
            generators: Vec::new(),
            name,
        };
        group.check_associativity()?;
        match generators {
            Some(gens) => {
                if let Some(&bad) = gens.iter().find(|&&g| g >= order) {
                    return Err(Error::input(format!("generator {bad} out of range")));
                }
                if group.subgroup(&gens).len() != order {
                    return Err(Error::precondition(
                        "the given generators do not generate the group",
                    ));
                }
                group.generators = gens;
            }
            None => group.generators = group.small_generating_set(),
        }
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 1..n {
                for b in 1..n {
                    for c in 1..n {
                        if bad(a, b, c) {
                            return Err(Error::precondition(format!(
                                "multiplication is not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // Probabilistic above the limit; the seed is fixed so runs agree.
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::precondition(format!(
                        "multiplication is not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Closure of permutations of `{0..points-1}`; each permutation is given
    /// by its list of images. The product `a·b` is the composite `a∘b`.
    pub fn from_permutations(points: usize, perms: &[Vec<usize>], budget: &Budget) -> Result<Self> {
        for p in perms {
            if p.len() != points {
                return Err(Error::input(format!(
                    "permutation {p:?} does not act on {points} points"
                )));
            }
            let mut hit = vec![false; points];
            for &x in p {
                if x >= points || hit[x] {
                    return Err(Error::input(format!("{p:?} is not a bijection")));
                }
                hit[x] = true;
            }
        }
        let identity: Vec<usize> = (0..points).collect();
        let (group, _) = closure(
            identity,
            perms,
            |a: &Vec<usize>, b: &Vec<usize>| b.iter().map(|&x| a[x]).collect(),
            budget.max_group_order,
            format!("perm group on {points} points"),
        )?;
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the recorded generators after checking they generate.
    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<Self> {
        if gens.iter().any(|&g| g >= self.order) || self.subgroup(&gens).len() != self.order {
            return Err(Error::precondition("generators do not generate the group"));
        }
        self.generators = gens;
        Ok(self)
    }

    /// The table as nested rows, for serialization.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|x| self.element_order(x)).collect()
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|x| self.element_order(x))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, &a)| {
            self.generators[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| {
                self.generators
                    .iter()
                    .all(|&g| self.mul(z, g) == self.mul(g, z))
            })
            .collect()
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = vec![false; self.order];
        for a in self.elements() {
            for b in self.elements() {
                comms[self.commutator(a, b)] = true;
            }
        }
        let gens: Vec<usize> = self.elements().filter(|&c| comms[c]).collect();
        self.subgroup(&gens)
    }

    /// Conjugacy classes, each sorted, listed by smallest representative.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = Vec::new();
            for g in self.elements() {
                let y = self.mul(self.mul(g, x), self.inv(g));
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    class.push(y);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Size of the conjugacy class of each element.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.order];
        for class in self.conjugacy_classes() {
            for &x in &class {
                sizes[x] = class.len();
            }
        }
        sizes
    }

    /// A small generating set chosen greedily: repeatedly add the element
    /// that enlarges the generated subgroup the most.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = vec![0usize];
        while current.len() < self.order {
            let mut member = vec![false; self.order];
            for &x in &current {
                member[x] = true;
            }
            let mut best: Option<(usize, Vec<usize>)> = None;
            for x in self.elements().filter(|&x| !member[x]) {
                let mut trial = gens.clone();
                trial.push(x);
                let sub = self.subgroup(&trial);
                if best.as_ref().map_or(true, |(_, b)| sub.len() > b.len()) {
                    let full = sub.len() == self.order;
                    best = Some((x, sub));
                    if full {
                        break;
                    }
                }
            }
            let (x, sub) = best.expect("a non-member exists while the subgroup is proper");
            gens.push(x);
            current = sub;
        }
        gens
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let orders = self.element_orders();
        let mut class_sizes: Vec<usize> = self.conjugacy_classes().iter().map(Vec::len).collect();
        class_sizes.sort_unstable();
        let mut element_orders = orders.clone();
        element_orders.sort_unstable();
        let derived = self.derived_subgroup();
        GroupFingerprint {
            order: self.order,
            exponent: orders.iter().copied().fold(1, num_integer::lcm),
            abelian_invariants: self.abelian_invariants_modulo(&derived),
            center_order: self.center().len(),
            derived_order: derived.len(),
            class_sizes,
            element_orders,
        }
    }

    /// Invariant factors of the abelian quotient `G/N` for a normal
    /// subgroup `N` containing the derived subgroup.
    fn abelian_invariants_modulo(&self, normal: &[usize]) -> Vec<u64> {
        let mut in_n = vec![false; self.order];
        for &x in normal {
            in_n[x] = true;
        }
        let quotient = (self.order / normal.len()) as u64;
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, e) in factorize(quotient) {
            // counts[k] = |{cosets c : c^(p^k) = 1}|
            let mut counts = vec![1u64];
            let mut pk = 1usize;
            let full = p.pow(e);
            while *counts.last().unwrap() < full {
                pk *= p as usize;
                let c = self
                    .elements()
                    .filter(|&x| in_n[self.pow(x, pk)])
                    .count() as u64
                    / normal.len() as u64;
                // Only the p-part of the quotient contributes.
                counts.push(gcd_u64(c, full));
            }
            // number of cyclic factors with exponent >= k
            let ge: Vec<u32> = counts
                .windows(2)
                .map(|w| ilog(w[1] / w[0], p))
                .collect();
            let mut exps = Vec::new();
            for (k, &cnt) in ge.iter().enumerate() {
                let next = ge.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(cnt - next) {
                    exps.push(k as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push((p, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|j| {
                per_prime
                    .iter()
                    .map(|(p, e)| e.get(j).map_or(1, |&k| p.pow(k)))
                    .product()
            })
            .collect();
        factors.reverse();
        factors
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

fn ilog(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Isomorphism invariants used to reject non-isomorphic pairs quickly and to
/// sort outputs deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: usize,
    pub exponent: usize,
    pub abelian_invariants: Vec<u64>,
    pub center_order: usize,
    pub derived_order: usize,
    pub class_sizes: Vec<usize>,
    pub element_orders: Vec<usize>,
}

impl GroupFingerprint {
    pub fn involutions(&self) -> usize {
        self.element_orders.iter().filter(|&&o| o == 2).count()
    }
}

/// Breadth-first closure of `gens` under `mul`, returning the abstract group
/// together with the concrete element of each index.
///
/// The Cayley table is filled from the right-multiplication table by the
/// generators, so only `order · gens.len()` concrete products are formed.
pub fn closure<T, F>(
    identity: T,
    gens: &[T],
    mul: F,
    max_order: usize,
    name: String,
) -> Result<(FiniteGroup, Vec<T>)>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let k = gens.len();
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    // right[x*k + i] = x · gens[i]
    let mut right: Vec<u32> = Vec::new();
    // parent[y] = (x, i) with y = x · gens[i]
    let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (i, g) in gens.iter().enumerate() {
            let y = mul(&elements[x], g);
            let idx = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= max_order {
                        return Err(Error::resource("group closure order", j as u64 + 1, max_order as u64));
                    }
                    index.insert(y.clone(), j);
                    elements.push(y);
                    parent.push((x as u32, i as u32));
                    queue.push_back(j);
                    j
                }
            };
            debug_assert_eq!(right.len(), x * k + i);
            right.push(idx as u32);
        }
    }
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        table[x * n] = x as u32;
        for y in 1..n {
            let (p, i) = parent[y];
            let xp = table[x * n + p as usize] as usize;
            table[x * n + y] = right[xp * k + i as usize];
        }
    }
    // The generators themselves, as indices (duplicates and the identity kept
    // so that generator positions line up with the caller's list).
    let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
    let group = FiniteGroup::from_flat(n, table, Some(gen_idx), name)?;
    Ok((group, elements))
}

/// Families of groups with a built-in construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum StandardFamily {
    /// Cyclic group of order `n`, generator `[x]`.
    Cyclic { n: usize },
    /// Symmetries of the regular `n`-gon (order `2n`), generators `[s, t]`
    /// with `s² = tⁿ = 1`, `sts⁻¹ = t⁻¹`.
    Dihedral { n: usize },
    /// `⟨x, y | x^(m/2) = 1, y² = x^(m/4), yxy⁻¹ = x⁻¹⟩` of order `m = 2^k ≥ 8`.
    GeneralizedQuaternion { order: usize },
    /// `⟨x, y | x^(m/2) = y² = 1, yxy⁻¹ = x^(m/4 - 1)⟩` of order `m = 2^k ≥ 16`.
    Semidihedral { order: usize },
    /// Heisenberg group of order 27, generators `[g, h, k]` with
    /// `g³ = h³ = k³ = [g,k] = [h,k] = 1`, `[g,h] = k`.
    Heisenberg27,
    /// Direct product; element `(a, b)` has index `a·|H| + b`.
    DirectProduct {
        left: Box<StandardFamily>,
        right: Box<StandardFamily>,
    },
}

fn is_pow2(n: usize) -> bool {
    n.is_power_of_two()
}

pub fn standard_group(family: &StandardFamily, budget: &Budget) -> Result<FiniteGroup> {
    match family {
        StandardFamily::Cyclic { n } => {
            if *n == 0 {
                return Err(Error::input("cyclic group order must be positive"));
            }
            let n = *n;
            let gens: Vec<usize> = if n == 1 { vec![] } else { vec![1] };
            let (g, _) = closure(0usize, &gens, |a, b| (a + b) % n, budget.max_group_order, format!("C{n}"))?;
            Ok(g)
        }
        StandardFamily::Dihedral { n } => {
            if *n < 2 {
                return Err(Error::input("dihedral group needs n >= 2"));
            }
            let n = *n as i64;
            // (i, j) stands for s^i t^j
            let mul = move |a: &(i64, i64), b: &(i64, i64)| {
                let j = if b.0 == 1 { -a.1 } else { a.1 };
                ((a.0 + b.0) % 2, (j + b.1).rem_euclid(n))
            };
            let (g, _) = closure((0, 0), &[(1, 0), (0, 1)], mul, budget.max_group_order, format!("D{}", 2 * n))?;
            Ok(g)
        }
        StandardFamily::GeneralizedQuaternion { order } => {
            let m = *order;
            if m < 8 || !is_pow2(m) {
                return Err(Error::input("generalized quaternion order must be a power of 2, at least 8"));
            }
            let half = (m / 2) as i64;
            let quarter = (m / 4) as i64;
            // (j, i) stands for x^j y^i
            let mul = move |a: &(i64, i64), b: &(i64, i64)| {
                let j = a.0 + if a.1 == 1 { -b.0 } else { b.0 };
                let i = a.1 + b.1;
                if i == 2 {
                    ((j + quarter).rem_euclid(half), 0)
                } else {
                    (j.rem_euclid(half), i)
                }
            };
            let (g, _) = closure((0, 0), &[(1, 0), (0, 1)], mul, budget.max_group_order, format!("Q{m}"))?;
            Ok(g)
        }
        StandardFamily::Semidihedral { order } => {
            let m = *order;
            if m < 16 || !is_pow2(m) {
                return Err(Error::input("semidihedral order must be a power of 2, at least 16"));
            }
            let half = (m / 2) as i64;
            let twist = (m / 4) as i64 - 1;
            let mul = move |a: &(i64, i64), b: &(i64, i64)| {
                let j = a.0 + if a.1 == 1 { b.0 * twist } else { b.0 };
                (j.rem_euclid(half), (a.1 + b.1) % 2)
            };
            let (g, _) = closure((0, 0), &[(1, 0), (0, 1)], mul, budget.max_group_order, format!("SD{m}"))?;
            Ok(g)
        }
        StandardFamily::Heisenberg27 => {
            // unitriangular 3x3 matrices over F_3: (a, b, c)(a', b', c') = (a+a', b+b', c+c'+ab')
            let mul = |x: &[u8; 3], y: &[u8; 3]| {
                [
                    (x[0] + y[0]) % 3,
                    (x[1] + y[1]) % 3,
                    (x[2] + y[2] + x[0] * y[1]) % 3,
                ]
            };
            let (g, _) = closure(
                [0u8; 3],
                &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                mul,
                budget.max_group_order,
                "He3".to_string(),
            )?;
            Ok(g)
        }
        StandardFamily::DirectProduct { left, right } => {
            let a = standard_group(left, budget)?;
            let b = standard_group(right, budget)?;
            direct_product(&a, &b, budget)
        }
    }
}

/// `G × H` with element `(a, b)` at index `a·|H| + b`; generators are those
/// of `G` (paired with 1) followed by those of `H`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, budget: &Budget) -> Result<FiniteGroup> {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    if n > budget.max_group_order {
        return Err(Error::resource("direct product order", n as u64, budget.max_group_order as u64));
    }
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (a, b) = (x / nh, x % nh);
        for y in 0..n {
            let (c, d) = (y / nh, y % nh);
            mul.push((g.mul(a, c) * nh + h.mul(b, d)) as u32);
        }
    }
    let gens = g
        .generators()
        .iter()
        .map(|&a| a * nh)
        .chain(h.generators().iter().copied())
        .collect();
    FiniteGroup::from_flat(n, mul, Some(gens), format!("{}x{}", g.name(), h.name()))
}

/// Searches for an isomorphism `G → H`; returns the element map when one exists.
///
/// Generator images are chosen by backtracking over elements with matching
/// order and conjugacy class size; each partial assignment is checked for
/// consistency on the subgroup it generates.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup, budget: &Budget) -> Result<Option<Vec<usize>>> {
    for grp in [g, h] {
        if grp.order() > budget.max_iso_order {
            return Err(Error::resource("isomorphism test order", grp.order() as u64, budget.max_iso_order as u64));
        }
    }
    if g.fingerprint() != h.fingerprint() {
        return Ok(None);
    }
    let gens = g.small_generating_set();
    let (og, oh) = (g.element_orders(), h.element_orders());
    let (cg, ch) = (g.class_sizes(), h.class_sizes());
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            h.elements()
                .filter(|&y| oh[y] == og[x] && ch[y] == cg[x])
                .collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    let found = backtrack(g, h, &gens, &candidates, &mut images);
    if let Some(map) = &found {
        debug_assert!(is_homomorphism(g, h, map));
    }
    Ok(found)
}

fn backtrack(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = images.len();
    if depth == gens.len() {
        let map = extend_map(g, h, gens, images)?;
        let mut hit = vec![false; h.order()];
        for &y in &map {
            if hit[y] {
                return None;
            }
            hit[y] = true;
        }
        return Some(map);
    }
    for &y in &candidates[depth] {
        images.push(y);
        if extend_map(g, h, &gens[..=depth], images).is_some() {
            if let Some(map) = backtrack(g, h, gens, candidates, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

/// Extends generator images to the subgroup they generate; `None` on an
/// inconsistency or a non-injective partial map. Unreached entries of the
/// returned map are `usize::MAX`.
fn extend_map(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, *s);
            let target = h.mul(map[x], img);
            if map[y] == usize::MAX {
                if used[target] {
                    return None;
                }
                used[target] = true;
                map[y] = target;
                queue.push(y);
            } else if map[y] != target {
                return None;
            }
        }
        i += 1;
    }
    Some(map)
}

pub fn is_homomorphism(g: &FiniteGroup, h: &FiniteGroup, map: &[usize]) -> bool {
    map.len() == g.order()
        && g.elements().all(|a| {
            g.elements()
                .all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b]))
        })
}
