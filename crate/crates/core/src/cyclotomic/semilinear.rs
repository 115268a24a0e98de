use crate::error::{Error, Result};
use crate::group::{closure, FiniteGroup};

use super::field::{CyclotomicField, CyclotomicNumber};

/// A semilinear map `v ↦ A·ε(v)` of `ℚ(ζₙ)^d`, with `ε` the identity or
/// complex conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearMatrix {
    dim: usize,
    /// Row-major.
    entries: Vec<CyclotomicNumber>,
    conj: bool,
}

impl SemilinearMatrix {
    /// Checks shape, conductor and invertibility.
    pub fn new(field: &CyclotomicField, rows: Vec<Vec<CyclotomicNumber>>, conj: bool) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("semilinear matrix must be square and non-empty"));
        }
        if rows.iter().flatten().any(|x| x.conductor() != field.conductor()) {
            return Err(Error::input("matrix entries belong to a different cyclotomic field"));
        }
        let m = SemilinearMatrix { dim, entries: rows.into_iter().flatten().collect(), conj };
        if determinant(field, &m).is_zero() {
            return Err(Error::input("semilinear matrix is singular"));
        }
        Ok(m)
    }

    pub fn identity(field: &CyclotomicField, dim: usize) -> Self {
        Self::scalar(field, dim, field.one())
    }

    pub fn scalar(field: &CyclotomicField, dim: usize, mu: CyclotomicNumber) -> Self {
        let mut entries = vec![field.zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = mu.clone();
        }
        SemilinearMatrix { dim, entries, conj: false }
    }

    /// `(I, conj)`.
    pub fn conjugation(field: &CyclotomicField, dim: usize) -> Self {
        SemilinearMatrix { conj: true, ..Self::identity(field, dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_conj(&self) -> bool {
        self.conj
    }

    pub fn entry(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    /// The scalar `μ` if this is `(μ·I, id)`.
    pub fn as_scalar(&self) -> Option<&CyclotomicNumber> {
        if self.conj {
            return None;
        }
        let mu = self.entry(0, 0);
        let ok = (0..self.dim).all(|i| {
            (0..self.dim).all(|j| if i == j { self.entry(i, j) == mu } else { self.entry(i, j).is_zero() })
        });
        ok.then_some(mu)
    }

    pub fn apply(&self, field: &CyclotomicField, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        assert_eq!(v.len(), self.dim);
        let v: Vec<_> = v.iter().map(|x| field.apply_auto(x, self.conj)).collect();
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(field.zero(), |acc, j| field.add(&acc, &field.mul(self.entry(i, j), &v[j])))
            })
            .collect()
    }
}

/// `(A, ε_A)·(B, ε_B) = (A·ε_A(B), ε_A ε_B)`.
pub fn semilinear_compose(
    field: &CyclotomicField,
    a: &SemilinearMatrix,
    b: &SemilinearMatrix,
) -> Result<SemilinearMatrix> {
    if a.dim != b.dim {
        return Err(Error::input(format!("dimension mismatch: {} vs {}", a.dim, b.dim)));
    }
    Ok(compose_unchecked(field, a, b))
}

fn compose_unchecked(field: &CyclotomicField, a: &SemilinearMatrix, b: &SemilinearMatrix) -> SemilinearMatrix {
    let d = a.dim;
    let bt: Vec<CyclotomicNumber> = b.entries.iter().map(|x| field.apply_auto(x, a.conj)).collect();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = field.zero();
            for k in 0..d {
                let x = a.entry(i, k);
                let y = &bt[k * d + j];
                if !x.is_zero() && !y.is_zero() {
                    acc = field.add(&acc, &field.mul(x, y));
                }
            }
            entries.push(acc);
        }
    }
    SemilinearMatrix { dim: d, entries, conj: a.conj != b.conj }
}

/// Determinant of the linear part.
pub fn determinant(field: &CyclotomicField, m: &SemilinearMatrix) -> CyclotomicNumber {
    let d = m.dim;
    let mut a = m.entries.clone();
    let mut det = field.one();
    for c in 0..d {
        let Some(p) = (c..d).find(|&r| !a[r * d + c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            for j in 0..d {
                a.swap(p * d + j, c * d + j);
            }
            det = field.neg(&det);
        }
        let pivot = a[c * d + c].clone();
        det = field.mul(&det, &pivot);
        let inv = field.inv(&pivot).expect("pivot is nonzero");
        for r in c + 1..d {
            if a[r * d + c].is_zero() {
                continue;
            }
            let f = field.mul(&a[r * d + c], &inv);
            for j in c..d {
                let t = field.mul(&f, &a[c * d + j]);
                a[r * d + j] = field.sub(&a[r * d + j], &t);
            }
        }
    }
    det
}

/// Breadth-first closure of `⟨gens⟩`; element `0` is the identity and
/// the element list is indexed like the returned group.
pub fn semilinear_group_closure(
    field: &CyclotomicField,
    gens: &[SemilinearMatrix],
    max_order: usize,
) -> Result<(FiniteGroup, Vec<SemilinearMatrix>)> {
    let Some(first) = gens.first() else {
        return Err(Error::input("closure needs at least one generator"));
    };
    if gens.iter().any(|g| g.dim != first.dim) {
        return Err(Error::input("generators have different dimensions"));
    }
    let id = SemilinearMatrix::identity(field, first.dim);
    closure(id, gens, |a, b| compose_unchecked(field, a, b), max_order, "semilinear".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_squares_to_identity() {
        let f = CyclotomicField::new(3).unwrap();
        let c4 = SemilinearMatrix::conjugation(&f, 3);
        let id = SemilinearMatrix::identity(&f, 3);
        assert_eq!(semilinear_compose(&f, &c4, &c4).unwrap(), id);
        let z = f.zeta(1);
        let a = SemilinearMatrix::new(&f, vec![vec![z.clone(), f.one()], vec![f.zero(), f.one()]], true).unwrap();
        let b = SemilinearMatrix::new(&f, vec![vec![f.one(), z.clone()], vec![f.zero(), z]], true).unwrap();
        let ab = semilinear_compose(&f, &a, &b).unwrap();
        assert!(!ab.is_conj());
        // A·conj(B) = [[ζ, 1],[0,1]]·[[1, ζ²],[0, ζ²]]
        assert_eq!(ab.entry(0, 1), &f.add(&f.zeta(0), &f.zeta(2)));
        let id2 = SemilinearMatrix::identity(&f, 2);
        assert_eq!(semilinear_compose(&f, &id2, &a).unwrap(), a);
        assert_eq!(semilinear_compose(&f, &a, &id2).unwrap(), a);
        assert!(semilinear_compose(&f, &a, &c4).is_err());
    }

    #[test]
    fn singular_rejected() {
        let f = CyclotomicField::new(4).unwrap();
        let one = f.one();
        assert!(SemilinearMatrix::new(&f, vec![vec![one.clone(), one.clone()], vec![one.clone(), one]], false).is_err());
    }
}
