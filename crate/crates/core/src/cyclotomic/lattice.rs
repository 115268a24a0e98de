use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

use super::field::{is_integer, lcm_denominators, CyclotomicField, CyclotomicNumber};
use super::semilinear::SemilinearMatrix;

/// A full lattice in `ℂ^d`, given by `2d` vectors over a quadratic
/// cyclotomic field (`n ∈ {3, 4, 6}`), so that `{1, ζₙ}` is an
/// `ℝ`-basis of `ℂ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexLattice {
    dim: usize,
    conductor: u32,
    basis: Vec<Vec<CyclotomicNumber>>,
    /// Inverse of the real coordinate matrix whose columns are the basis.
    inverse: Vec<Vec<BigRational>>,
}

impl ComplexLattice {
    pub fn new(field: &CyclotomicField, basis: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        check_field(field)?;
        let dim = basis.first().map_or(0, Vec::len);
        if dim == 0 || basis.len() != 2 * dim || basis.iter().any(|v| v.len() != dim) {
            return Err(Error::input("a lattice in ℂ^d needs 2d basis vectors of length d"));
        }
        if basis.iter().flatten().any(|x| x.conductor() != field.conductor()) {
            return Err(Error::input("lattice vectors belong to a different cyclotomic field"));
        }
        let cols: Vec<Vec<BigRational>> = basis.iter().map(|v| real_coords(v)).collect();
        let inverse = invert(&transpose(&cols)).ok_or_else(|| Error::input("lattice basis is not ℝ-linearly independent"))?;
        Ok(ComplexLattice { dim, conductor: field.conductor(), basis, inverse })
    }

    /// The `ℤ`-span of arbitrary generators, which must have full rank.
    pub fn from_generators(field: &CyclotomicField, gens: &[Vec<CyclotomicNumber>]) -> Result<Self> {
        check_field(field)?;
        let dim = gens.first().map_or(0, Vec::len);
        if dim == 0 || gens.iter().any(|v| v.len() != dim) {
            return Err(Error::input("lattice generators must be non-empty vectors of equal length"));
        }
        let coords: Vec<Vec<BigRational>> = gens.iter().map(|v| real_coords(v)).collect();
        let l = lcm_denominators(coords.iter().flatten());
        let l_q = BigRational::from_integer(l.clone());
        let rows: Vec<Vec<BigInt>> =
            coords.iter().map(|r| r.iter().map(|q| (q * &l_q).to_integer()).collect()).collect();
        let echelon = row_echelon(rows, 2 * dim);
        if echelon.len() != 2 * dim {
            return Err(Error::input("lattice generators do not span a full-rank lattice"));
        }
        let basis = echelon
            .into_iter()
            .map(|row| {
                (0..dim)
                    .map(|i| {
                        let c0 = BigRational::new(row[2 * i].clone(), l.clone());
                        let c1 = BigRational::new(row[2 * i + 1].clone(), l.clone());
                        field.from_coeffs(&[c0, c1])
                    })
                    .collect()
            })
            .collect();
        Self::new(field, basis)
    }

    /// `ℤ[ζₙ]^d`.
    pub fn standard(field: &CyclotomicField, dim: usize) -> Result<Self> {
        let mut basis = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for k in 0..2 {
                let mut v = vec![field.zero(); dim];
                v[i] = field.zeta(k);
                basis.push(v);
            }
        }
        Self::new(field, basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn basis(&self) -> &[Vec<CyclotomicNumber>] {
        &self.basis
    }

    /// Rational coordinates of `v` in the lattice basis.
    pub fn coordinates(&self, v: &[CyclotomicNumber]) -> Vec<BigRational> {
        let r = real_coords(v);
        self.inverse
            .iter()
            .map(|row| row.iter().zip(&r).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn contains(&self, v: &[CyclotomicNumber]) -> bool {
        v.len() == self.dim && self.coordinates(v).iter().all(is_integer)
    }
}

fn check_field(field: &CyclotomicField) -> Result<()> {
    if field.degree() != 2 {
        return Err(Error::input(format!(
            "lattices are supported over ℚ(ζₙ) of degree 2 (n = 3, 4, 6), got n = {}",
            field.conductor()
        )));
    }
    Ok(())
}

fn real_coords(v: &[CyclotomicNumber]) -> Vec<BigRational> {
    v.iter().flat_map(|x| x.coeffs().iter().cloned()).collect()
}

fn transpose(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    (0..m[0].len()).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}

/// Nonzero rows of an integer row-echelon form with the same row span.
fn row_echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    out.push(rows.swap_remove(r));
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| rows[r][c].abs()).unwrap();
            let pivot = rows[p].clone();
            for &r in &nz {
                if r != p {
                    let q = rows[r][c].div_floor(&pivot[c]);
                    for (x, y) in rows[r].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }
    out
}

/// `m·L = L`: images of the basis have integer coordinates and the
/// resulting integer matrix is unimodular.
pub fn preserves_lattice(field: &CyclotomicField, m: &SemilinearMatrix, lattice: &ComplexLattice) -> Result<bool> {
    if m.dim() != lattice.dim {
        return Err(Error::input(format!("matrix dimension {} vs lattice dimension {}", m.dim(), lattice.dim)));
    }
    if field.conductor() != lattice.conductor {
        return Err(Error::input("lattice and field conductors differ"));
    }
    let mut cols = Vec::with_capacity(lattice.basis.len());
    for b in &lattice.basis {
        let c = lattice.coordinates(&m.apply(field, b));
        if !c.iter().all(is_integer) {
            return Ok(false);
        }
        cols.push(c);
    }
    Ok(rational_det(&cols).abs().is_one())
}

/// The roots of unity `μ ∈ ℚ(ζₙ)` with `μ·L = L`, written as powers of
/// `ζ_m`, `m = lcm(2, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarStabilizer {
    pub modulus: u32,
    pub exponents: Vec<u32>,
    pub generator: u32,
}

impl ScalarStabilizer {
    pub fn order(&self) -> usize {
        self.exponents.len()
    }
}

pub fn lattice_scalar_stabilizer(field: &CyclotomicField, lattice: &ComplexLattice) -> ScalarStabilizer {
    let (m, z) = field.root_of_unity_generator();
    let mut mu = field.one();
    let mut exponents = Vec::new();
    for k in 0..m {
        let s = SemilinearMatrix::scalar(field, lattice.dim, mu.clone());
        if preserves_lattice(field, &s, lattice).expect("shapes agree") {
            exponents.push(k);
        }
        mu = field.mul(&mu, &z);
    }
    let generator = exponents.iter().fold(m, |g, &k| g.gcd(&k));
    ScalarStabilizer { modulus: m, exponents, generator: generator % m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers() {
        let f = CyclotomicField::new(4).unwrap();
        let l = ComplexLattice::standard(&f, 1).unwrap();
        let s = lattice_scalar_stabilizer(&f, &l);
        assert_eq!((s.modulus, s.order(), s.generator), (4, 4, 1));

        let one_plus_2i = f.add(&f.one(), &f.mul(&f.integer(2), &f.zeta(1)));
        let l2 = ComplexLattice::new(&f, vec![vec![f.one()], vec![one_plus_2i]]).unwrap();
        let s2 = lattice_scalar_stabilizer(&f, &l2);
        assert_eq!(s2.exponents, vec![0, 2]);
        assert!(!l2.contains(&[f.zeta(1)]));
    }

    #[test]
    fn doubling_does_not_preserve() {
        let f = CyclotomicField::new(3).unwrap();
        let l = ComplexLattice::standard(&f, 2).unwrap();
        let two = SemilinearMatrix::scalar(&f, 2, f.integer(2));
        assert!(!preserves_lattice(&f, &two, &l).unwrap());
        assert!(preserves_lattice(&f, &SemilinearMatrix::conjugation(&f, 2), &l).unwrap());
    }

    #[test]
    fn degenerate_inputs() {
        let f = CyclotomicField::new(3).unwrap();
        assert!(ComplexLattice::new(&f, vec![vec![f.one()], vec![f.integer(2)]]).is_err());
        assert!(ComplexLattice::from_generators(&f, &[vec![f.one()]]).is_err());
        let f5 = CyclotomicField::new(5).unwrap();
        assert!(ComplexLattice::standard(&f5, 1).is_err());
    }

    #[test]
    fn generators_reduce_to_basis() {
        let f = CyclotomicField::new(6).unwrap();
        let gens = vec![vec![f.one()], vec![f.zeta(1)], vec![f.zeta(2)], vec![f.integer(3)]];
        let l = ComplexLattice::from_generators(&f, &gens).unwrap();
        assert_eq!(l.basis().len(), 2);
        assert!(l.contains(&[f.zeta(5)]));
        assert!(!l.contains(&[f.rational(BigRational::new(1.into(), 2.into()))]));
    }
}
