use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of `ℚ(ζₙ)`: coefficients of its reduced representative
/// modulo the `n`-th cyclotomic polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational number this is, if it lies in `ℚ`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }
}

/// Integer coefficients (constant term first) of the `n`-th cyclotomic
/// polynomial, from `xⁿ − 1 = ∏_{d | n} Φ_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// Arithmetic in `ℚ(ζₙ)`.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    n: u32,
    degree: usize,
    /// `x^k mod Φₙ` for `k < max(n, 2·degree)`.
    powers: Vec<Vec<BigRational>>,
}

impl CyclotomicField {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("cyclotomic conductor must be positive"));
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(n).into_iter().map(BigRational::from_integer).collect();
        let degree = phi.len() - 1;
        let count = (n as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigRational::zero(); degree];
        cur[0] = BigRational::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce with x^degree = −Σ φ_i x^i
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigRational::zero();
            for i in 0..degree {
                cur[i] -= &top * &phi[i];
            }
        }
        Ok(CyclotomicField { n, degree, powers })
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn make(&self, coeffs: Vec<BigRational>) -> CyclotomicNumber {
        CyclotomicNumber { conductor: self.n, coeffs }
    }

    fn check(&self, a: &CyclotomicNumber) {
        assert_eq!(a.conductor, self.n, "element of ℚ(ζ{}) used in ℚ(ζ{})", a.conductor, self.n);
    }

    pub fn zero(&self) -> CyclotomicNumber {
        self.make(vec![BigRational::zero(); self.degree])
    }

    pub fn one(&self) -> CyclotomicNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, q: BigRational) -> CyclotomicNumber {
        let mut c = vec![BigRational::zero(); self.degree];
        c[0] = q;
        self.make(c)
    }

    pub fn integer(&self, k: i64) -> CyclotomicNumber {
        self.rational(BigRational::from_integer(k.into()))
    }

    /// `ζₙᵏ` for any integer `k`.
    pub fn zeta(&self, k: i64) -> CyclotomicNumber {
        let k = k.rem_euclid(self.n as i64) as usize;
        self.make(self.powers[k].clone())
    }

    /// From coefficients of any length, reduced modulo `Φₙ`.
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> CyclotomicNumber {
        let mut out = vec![BigRational::zero(); self.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.powers[k % self.n as usize];
            for (o, pk) in out.iter_mut().zip(p) {
                *o += c * pk;
            }
        }
        self.make(out)
    }

    pub fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        self.check(a);
        self.check(b);
        self.make(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        self.make(a.coeffs.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        self.check(a);
        self.check(b);
        let mut prod = vec![BigRational::zero(); 2 * self.degree - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = prod[..self.degree].to_vec();
        for (k, c) in prod.iter().enumerate().skip(self.degree) {
            if c.is_zero() {
                continue;
            }
            for (o, pk) in out.iter_mut().zip(&self.powers[k]) {
                *o += c * pk;
            }
        }
        self.make(out)
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        self.check(a);
        let n = self.n as usize;
        let mut out = vec![BigRational::zero(); self.degree];
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, pk) in out.iter_mut().zip(&self.powers[(n - k) % n]) {
                *o += c * pk;
            }
        }
        self.make(out)
    }

    /// `ε(a)` for an automorphism flag (`true` = conjugation).
    pub fn apply_auto(&self, a: &CyclotomicNumber, conj: bool) -> CyclotomicNumber {
        if conj {
            self.conj(a)
        } else {
            a.clone()
        }
    }

    pub fn inv(&self, a: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::Arithmetic("inverse of zero in a cyclotomic field".into()));
        }
        // Columns of the multiplication-by-a matrix are a·xʲ.
        let d = self.degree;
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self.mul(a, &self.make(self.powers[j].clone()));
            for i in 0..d {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m[0][d] = BigRational::one();
        let x = solve_rational(m).ok_or_else(|| Error::Arithmetic("singular multiplication matrix".into()))?;
        Ok(self.make(x))
    }

    /// `ζ_m` for `m = lcm(2, n)`, the generator of all roots of unity in
    /// the field.
    pub fn root_of_unity_generator(&self) -> (u32, CyclotomicNumber) {
        if self.n % 2 == 0 {
            (self.n, self.zeta(1))
        } else {
            (2 * self.n, self.neg(&self.zeta((self.n as i64 + 1) / 2)))
        }
    }

    pub fn pow(&self, a: &CyclotomicNumber, k: u64) -> CyclotomicNumber {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// Solves an augmented `d × (d+1)` rational system with a unique solution.
pub(crate) fn solve_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let d = m.len();
    for c in 0..d {
        let p = (c..d).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

pub(crate) fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

pub(crate) fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom())).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn polynomials() {
        let c = |n| cyclotomic_polynomial(n).into_iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(c(1), vec![-1, 1]);
        assert_eq!(c(3), vec![1, 1, 1]);
        assert_eq!(c(4), vec![1, 0, 1]);
        assert_eq!(c(6), vec![1, -1, 1]);
        assert_eq!(c(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta3_identities() {
        let f = CyclotomicField::new(3).unwrap();
        let z = f.zeta(1);
        assert_eq!(f.add(&z, &f.mul(&z, &z)), f.integer(-1));
        assert_eq!(f.conj(&z), f.zeta(2));
        let u = f.from_coeffs(&[q(1, 3), q(2, 3)]);
        assert_eq!(f.mul(&u, &f.conj(&u)), f.rational(q(1, 3)));
        let (m, z6) = f.root_of_unity_generator();
        assert_eq!(m, 6);
        assert_eq!(f.pow(&z6, 6), f.one());
        assert_ne!(f.pow(&z6, 3), f.one());
        assert_ne!(f.pow(&z6, 2), f.one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = CyclotomicField::new(5).unwrap();
        assert!(f.inv(&f.zero()).is_err());
        let a = f.add(&f.zeta(1), &f.integer(2));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }
}
