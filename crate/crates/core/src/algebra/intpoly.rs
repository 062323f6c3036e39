use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::ring::Ring;

/// The ring ℤ of exact integers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

pub type IntPoly = Poly<BigInt>;

pub fn int_poly(c: &[i64]) -> IntPoly {
    Poly::new(&Integers, c.iter().map(|&x| BigInt::from(x)).collect())
}

/// Exact quotient a / b over ℤ, if b divides a (b need not be monic).
pub fn int_poly_exact_div(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let bl = b.lead()?.clone();
    let bd = b.degree()?;
    let mut rem: Vec<BigInt> = a.coeffs().to_vec();
    if rem.len() < b.coeffs().len() {
        return if a.is_zero() { Some(Poly::zero()) } else { None };
    }
    let mut quo = vec![BigInt::zero(); rem.len() - bd];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + bd];
        if c.is_zero() {
            continue;
        }
        if !(c % &bl).is_zero() {
            return None;
        }
        let qc = c / &bl;
        for (j, bj) in b.coeffs().iter().enumerate() {
            rem[i + j] -= &qc * bj;
        }
        quo[i] = qc;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(Poly::new(&Integers, quo))
    } else {
        None
    }
}

/// Square matrices over a ring object, row-major.
pub type Matrix<E> = Vec<Vec<E>>;

pub fn mat_mul<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(r.zero(), |acc, t| r.add(&acc, &r.mul(&a[i][t], &b[t][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_identity<R: Ring>(r: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect())
        .collect()
}

pub fn mat_pow<R: Ring>(r: &R, a: &Matrix<R::Elem>, mut e: u64) -> Matrix<R::Elem> {
    let mut acc = mat_identity(r, a.len());
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(r, &acc, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mat_mul(r, &b, &b);
        }
    }
    acc
}

/// Companion matrix of a monic polynomial (last column holds -cᵢ).
pub fn companion<R: Ring>(r: &R, f: &Poly<R::Elem>) -> Matrix<R::Elem> {
    let n = f.degree().expect("nonzero polynomial");
    let mut m = vec![vec![r.zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = r.one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = r.neg(&f.coeff(r, i));
    }
    m
}

/// Characteristic polynomial det(X·I − M), by cofactor expansion over the
/// polynomial ring (division free, so valid over any commutative ring).
pub fn charpoly<R: Ring>(r: &R, m: &Matrix<R::Elem>) -> Poly<R::Elem> {
    let n = m.len();
    let entries: Vec<Vec<Poly<R::Elem>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = r.neg(&m[i][j]);
                    if i == j {
                        Poly::new(r, vec![c, r.one()])
                    } else {
                        Poly::new(r, vec![c])
                    }
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    det_poly(r, &entries, 0, &cols)
}

fn det_poly<R: Ring>(r: &R, m: &[Vec<Poly<R::Elem>>], row: usize, cols: &[usize]) -> Poly<R::Elem> {
    if cols.is_empty() {
        return Poly::one(r);
    }
    let mut acc = Poly::zero();
    for (idx, &c) in cols.iter().enumerate() {
        let e = &m[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = e.mul(r, &det_poly(r, m, row + 1, &rest));
        acc = if idx % 2 == 0 { acc.add(r, &term) } else { acc.sub(r, &term) };
    }
    acc
}

/// Determinant over ℤ by fraction-free Gaussian elimination (Bareiss).
pub fn det_bigint(m: &Matrix<BigInt>) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Discriminant of a nonconstant integer polynomial:
/// (−1)^{n(n−1)/2} · Res(f, f′) / lc(f).
pub fn discriminant(f: &IntPoly) -> BigInt {
    let n = f.degree().expect("nonzero polynomial");
    if n == 1 {
        return BigInt::one();
    }
    let df = f.derivative(&Integers);
    let res = resultant(f, &df);
    let s = if (n * (n - 1) / 2).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    s * res / f.lead().unwrap()
}

/// Resultant via the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    det_bigint(&s)
}
