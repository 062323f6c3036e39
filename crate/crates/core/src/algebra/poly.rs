//! Dense univariate polynomials over a [`Ring`] object. Coefficients are
//! stored constant term first and kept trimmed, so the zero polynomial is the
//! empty vector.

use super::ring::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn new<R: Ring<Elem = E>>(r: &R, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| r.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant<R: Ring<Elem = E>>(r: &R, c: E) -> Self {
        Self::new(r, vec![c])
    }

    pub fn one<R: Ring<Elem = E>>(r: &R) -> Self {
        Self::constant(r, r.one())
    }

    /// The monomial x.
    pub fn x<R: Ring<Elem = E>>(r: &R) -> Self {
        Poly { coeffs: vec![r.zero(), r.one()] }
    }

    /// x - a
    pub fn linear<R: Ring<Elem = E>>(r: &R, a: &E) -> Self {
        Poly { coeffs: vec![r.neg(a), r.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention deg 0 = -1.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, r: &R, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| r.zero())
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn is_monic<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.lead().is_some_and(|c| r.is_one(c))
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| r.add(&self.coeff(r, i), &o.coeff(r, i))).collect();
        Self::new(r, c)
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| r.sub(&self.coeff(r, i), &o.coeff(r, i))).collect();
        Self::new(r, c)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| r.neg(c)).collect() }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![r.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = r.add(&c[i + j], &r.mul(a, b));
            }
        }
        Self::new(r, c)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, s: &E) -> Self {
        Self::new(r, self.coeffs.iter().map(|c| r.mul(c, s)).collect())
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, e: u32) -> Self {
        let mut acc = Self::one(r);
        for _ in 0..e {
            acc = acc.mul(r, self);
        }
        acc
    }

    pub fn eval<R: Ring<Elem = E>>(&self, r: &R, x: &E) -> E {
        let mut acc = r.zero();
        for c in self.coeffs.iter().rev() {
            acc = r.add(&r.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| r.mul(c, &r.from_i64(i as i64)))
            .collect();
        Self::new(r, c)
    }

    /// Division by a monic divisor; valid over any ring.
    pub fn divrem_monic<R: Ring<Elem = E>>(&self, r: &R, d: &Self) -> (Self, Self) {
        assert!(d.is_monic(r), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![r.zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = rem[i + dd].clone();
            if r.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] = r.sub(&rem[i + j], &r.mul(&c, dj));
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (Self::new(r, quo), Self::new(r, rem))
    }

    /// Map coefficients into another ring.
    pub fn map<R2: Ring, G: Fn(&E) -> R2::Elem>(&self, r2: &R2, g: G) -> Poly<R2::Elem> {
        Poly::new(r2, self.coeffs.iter().map(g).collect())
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(f, &f.inv(l).expect("nonzero lead")),
        }
    }

    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> (Self, Self) {
        let l = d.lead().expect("division by the zero polynomial");
        let li = f.inv(l).expect("nonzero lead");
        let (q, rem) = self.divrem_monic(f, &d.scale(f, &li));
        (q.scale(f, &li), rem)
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Self {
        if d.is_monic(f) {
            self.divrem_monic(f, d).1
        } else {
            self.divrem(f, d).1
        }
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: (g, s, t) with g = s·self + t·o, g monic.
    pub fn xgcd<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = f.inv(l).unwrap();
                (r0.scale(f, &li), s0.scale(f, &li), t0.scale(f, &li))
            }
        }
    }

    pub fn mulmod<F: Field<Elem = E>>(&self, f: &F, o: &Self, m: &Self) -> Self {
        self.mul(f, o).rem(f, m)
    }

    /// self^e mod m, e given as big-endian bits of an arbitrary integer.
    pub fn powmod_big<F: Field<Elem = E>>(&self, f: &F, e: &num_bigint::BigUint, m: &Self) -> Self {
        let mut acc = Self::one(f).rem(f, m);
        let base = self.rem(f, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(f, &acc, m);
            if e.bit(i) {
                acc = acc.mulmod(f, &base, m);
            }
        }
        acc
    }

    pub fn powmod<F: Field<Elem = E>>(&self, f: &F, e: u64, m: &Self) -> Self {
        self.powmod_big(f, &num_bigint::BigUint::from(e), m)
    }
}
