use std::fmt::Debug;
use std::hash::Hash;

/// A commutative ring given as a runtime object; elements are plain values
/// and every operation goes through the ring.
pub trait Ring {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    /// Square-and-multiply; `pow(0, 0) = 1`.
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Number of elements.
    fn order(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Square root in a finite field of odd order by Tonelli-Shanks.
///
/// `non_residue` must be a quadratic non-residue of `f`.
pub fn tonelli_shanks<F: Field>(f: &F, a: &F::Elem, non_residue: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let qm1 = f.order() - 1;
    if !f.is_one(&f.pow(a, qm1 / 2)) {
        return None;
    }
    let mut s = 0u32;
    let mut odd = qm1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = f.pow(non_residue, odd);
    let mut t = f.pow(a, odd);
    let mut r = f.pow(a, odd.div_ceil(2));
    while !f.is_one(&t) {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !f.is_one(&t2) {
            t2 = f.square(&t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.square(&b);
        }
        m = i;
        c = f.square(&b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}
