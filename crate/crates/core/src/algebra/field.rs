use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use super::ntheory::{factor_u64, is_prime};
use super::poly::Poly;
use super::ring::{tonelli_shanks, Field, Ring};
use super::AlgebraError;

/// Largest supported field size.
pub const FIELD_CAP: u64 = 1 << 31;
/// Fields up to this size get log/exp tables and exhaustive root finding.
pub const TABLE_CAP: u64 = 1 << 20;

/// An element of some 𝔽_{p^a}, encoded as Σ cᵢ·pⁱ where cᵢ is the
/// coefficient of uⁱ in the polynomial basis. The encoding is only meaningful
/// together with the [`FieldContext`] it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u32);

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FieldContext {
    p: u32,
    a: u32,
    q: u32,
    /// Monic modulus, constant term first, length a + 1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
    non_residue: FieldElement,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.a)
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.a == o.a
    }
}
impl Eq for FieldContext {}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<FieldContext>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FieldContext>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch) the context for 𝔽_{p^a} with its canonical modulus.
pub fn field_create(p: u64, a: u32) -> Result<Arc<FieldContext>, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if !(1..=12).contains(&a) {
        return Err(AlgebraError::DegreeOutOfRange(a));
    }
    let q = p.checked_pow(a).filter(|&q| q <= FIELD_CAP);
    let Some(q) = q else {
        return Err(AlgebraError::FieldTooLarge);
    };
    let key = (p as u32, a);
    if let Some(ctx) = cache().lock().unwrap().get(&key) {
        return Ok(ctx.clone());
    }
    let modulus = if a == 1 { vec![0, 1] } else { canonical_modulus(p as u32, a) };
    let ctx = Arc::new(FieldContext::build(p as u32, a, q as u32, modulus));
    let mut c = cache().lock().unwrap();
    Ok(c.entry(key).or_insert(ctx).clone())
}

/// Lexicographically least monic irreducible of degree a over 𝔽_p, with the
/// coefficient tuple compared constant term first.
fn canonical_modulus(p: u32, a: u32) -> Vec<u32> {
    let fp = field_create(p as u64, 1).expect("prime field");
    let total = (p as u64).pow(a);
    for n in 0..total {
        let mut c = vec![0u32; a as usize + 1];
        let mut rest = n;
        for i in (0..a as usize).rev() {
            c[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        c[a as usize] = 1;
        let f = Poly::new(&*fp, c.iter().map(|&x| FieldElement(x)).collect());
        if is_irreducible(&fp, &f) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Ben-Or irreducibility test over a prime field.
pub fn is_irreducible(fp: &FieldContext, f: &Poly<FieldElement>) -> bool {
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    let x = Poly::x(fp);
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = xp.powmod(fp, fp.order(), f);
        let g = xp.sub(fp, &x).gcd(fp, f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

impl FieldContext {
    fn build(p: u32, a: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut ctx = FieldContext { p, a, q, modulus, tables: None, non_residue: FieldElement(0) };
        if (q as u64) <= TABLE_CAP && q > 2 {
            ctx.tables = Some(ctx.build_tables());
        }
        if p != 2 {
            let nr = (1..q)
                .map(FieldElement)
                .find(|x| !ctx.is_square(x))
                .expect("odd-order fields have non-squares");
            ctx.non_residue = nr;
        }
        ctx
    }

    fn build_tables(&self) -> Tables {
        let order = self.q as u64 - 1;
        let fac = factor_u64(order);
        let gen = (1..self.q)
            .map(FieldElement)
            .find(|g| fac.iter().all(|&(r, _)| !self.is_one(&self.pow_slow(g, order / r))))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = FieldElement(1);
        for k in 0..order as u32 {
            exp.push(x.0);
            log[x.0 as usize] = k;
            x = self.mul_slow(&x, &gen);
        }
        Tables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn size(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.a == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Coefficients of the polynomial-basis representation, constant first.
    pub fn to_coeffs(&self, x: &FieldElement) -> Vec<u32> {
        let mut v = x.0;
        (0..self.a)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[i64]) -> FieldElement {
        assert!(c.len() <= self.a as usize, "too many coefficients");
        let p = self.p as i64;
        let mut v = 0u32;
        for &ci in c.iter().rev() {
            v = v * self.p + ci.rem_euclid(p) as u32;
        }
        FieldElement(v)
    }

    /// Ordering by coefficient tuples compared constant term first.
    pub fn lex_key(&self, x: &FieldElement) -> Vec<u32> {
        self.to_coeffs(x)
    }

    pub fn fe_inv(&self, x: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.inv(x).ok_or(AlgebraError::DivisionByZero)
    }

    pub fn fe_pow_big(&self, x: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    pub fn is_square(&self, x: &FieldElement) -> bool {
        if x.0 == 0 {
            return true;
        }
        if self.p == 2 {
            return true;
        }
        match &self.tables {
            Some(t) => t.log[x.0 as usize] % 2 == 0,
            None => self.is_one(&self.pow(x, (self.q as u64 - 1) / 2)),
        }
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn chi(&self, x: &FieldElement) -> i32 {
        if x.0 == 0 {
            0
        } else if self.is_square(x) {
            1
        } else {
            -1
        }
    }

    /// Some square root, or `None` for non-squares.
    pub fn sqrt(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.0 == 0 {
            return Some(*x);
        }
        if let Some(t) = &self.tables {
            let l = t.log[x.0 as usize];
            return if l % 2 == 0 { Some(FieldElement(t.exp[(l / 2) as usize])) } else { None };
        }
        tonelli_shanks(self, x, &self.non_residue)
    }

    pub fn non_residue(&self) -> FieldElement {
        self.non_residue
    }

    /// x ↦ x^(p^k).
    pub fn frobenius(&self, x: &FieldElement, k: u32) -> FieldElement {
        let mut y = *x;
        for _ in 0..k % self.a {
            y = self.pow(&y, self.p as u64);
        }
        y
    }

    fn mul_slow(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if self.a == 1 {
            return FieldElement(((x.0 as u64 * y.0 as u64) % self.p as u64) as u32);
        }
        let p = self.p as u64;
        let a = self.a as usize;
        let xc = self.to_coeffs(x);
        let yc = self.to_coeffs(y);
        let mut prod = vec![0u64; 2 * a - 1];
        for i in 0..a {
            if xc[i] == 0 {
                continue;
            }
            for j in 0..a {
                prod[i + j] = (prod[i + j] + xc[i] as u64 * yc[j] as u64) % p;
            }
        }
        for i in (a..2 * a - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..a {
                let sub = c * self.modulus[j] as u64 % p;
                prod[i - a + j] = (prod[i - a + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        let mut v = 0u32;
        for &c in prod[..a].iter().rev() {
            v = v * self.p + c as u32;
        }
        FieldElement(v)
    }

    fn pow_slow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement(1);
        let mut b = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(&acc, &b);
            }
            b = self.mul_slow(&b, &b);
            e >>= 1;
        }
        acc
    }

    fn digitwise(&self, x: u32, y: u32, sub: bool) -> u32 {
        let p = self.p;
        let (mut x, mut y) = (x, y);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.a {
            let (dx, dy) = (x % p, y % p);
            x /= p;
            y /= p;
            let d = if sub { (dx + p - dy) % p } else { (dx + dy) % p };
            out += d * scale;
            scale = scale.wrapping_mul(p);
        }
        out
    }

    /// All roots (with multiplicity) of a nonzero polynomial, by exhaustive
    /// evaluation; multiplicities by repeated division.
    pub fn poly_roots(&self, f: &Poly<FieldElement>) -> Result<Vec<FieldElement>, AlgebraError> {
        if f.is_zero() {
            return Err(AlgebraError::BothZero);
        }
        if self.size() > TABLE_CAP {
            return Err(AlgebraError::FieldTooLarge);
        }
        let mut out = Vec::new();
        let mut g = f.clone();
        for x in self.elements() {
            if g.degree() == Some(0) {
                break;
            }
            while g.degree().unwrap_or(0) > 0 && self.is_zero(&g.eval(self, &x)) {
                g = g.divrem(self, &Poly::linear(self, &x)).0;
                out.push(x);
            }
        }
        Ok(out)
    }
}

impl Ring for FieldContext {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if self.a == 1 {
            let s = x.0 + y.0;
            FieldElement(if s >= self.p { s - self.p } else { s })
        } else {
            FieldElement(self.digitwise(x.0, y.0, false))
        }
    }

    fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if self.a == 1 {
            FieldElement(if x.0 >= y.0 { x.0 - y.0 } else { x.0 + self.p - y.0 })
        } else {
            FieldElement(self.digitwise(x.0, y.0, true))
        }
    }

    fn neg(&self, x: &FieldElement) -> FieldElement {
        self.sub(&FieldElement(0), x)
    }

    fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement(0);
        }
        if self.a == 1 {
            return FieldElement(((x.0 as u64 * y.0 as u64) % self.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len();
                let mut k = t.log[x.0 as usize] as usize + t.log[y.0 as usize] as usize;
                if k >= n {
                    k -= n;
                }
                FieldElement(t.exp[k])
            }
            None => self.mul_slow(x, y),
        }
    }

    fn from_i64(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    fn is_zero(&self, x: &FieldElement) -> bool {
        x.0 == 0
    }

    fn is_one(&self, x: &FieldElement) -> bool {
        x.0 == 1
    }

    fn pow(&self, x: &FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if x.0 == 0 {
            return FieldElement(0);
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u128;
                let k = (t.log[x.0 as usize] as u128 * e as u128) % n;
                FieldElement(t.exp[k as usize])
            }
            None => self.pow_slow(x, e),
        }
    }
}

impl Field for FieldContext {
    fn inv(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.0 == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len();
                let l = t.log[x.0 as usize] as usize;
                Some(FieldElement(t.exp[(n - l) % n]))
            }
            None => Some(self.pow_slow(x, self.q as u64 - 2)),
        }
    }

    fn order(&self) -> u64 {
        self.q as u64
    }
}

/// Ring homomorphism 𝔽_{p^a} → 𝔽_{p^b} with a | b.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Arc<FieldContext>,
    dst: Arc<FieldContext>,
    /// Image of the source generator u.
    gen_image: FieldElement,
}

impl Embedding {
    pub fn new(src: &Arc<FieldContext>, dst: &Arc<FieldContext>) -> Result<Self, AlgebraError> {
        if src.p != dst.p || !dst.a.is_multiple_of(src.a) {
            return Err(AlgebraError::NotASubfield);
        }
        let gen_image = if src.a == 1 {
            FieldElement(0)
        } else if src.a == dst.a {
            FieldElement(src.p)
        } else {
            let m = Poly::new(&**dst, src.modulus.iter().map(|&c| FieldElement(c)).collect());
            let mut roots = dst.poly_roots(&m)?;
            roots.sort_by_key(|r| dst.lex_key(r));
            roots[0]
        };
        Ok(Embedding { src: src.clone(), dst: dst.clone(), gen_image })
    }

    pub fn source(&self) -> &Arc<FieldContext> {
        &self.src
    }

    pub fn target(&self) -> &Arc<FieldContext> {
        &self.dst
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        if self.src.a == 1 || self.src.a == self.dst.a {
            // prime-subfield elements keep their encoding
            return *x;
        }
        let d = &*self.dst;
        let mut acc = d.zero();
        for c in self.src.to_coeffs(x).iter().rev() {
            acc = d.add(&d.mul(&acc, &self.gen_image), &FieldElement(*c));
        }
        acc
    }

    pub fn apply_poly(&self, f: &Poly<FieldElement>) -> Poly<FieldElement> {
        f.map(&*self.dst, |c| self.apply(c))
    }
}

/// Convenience wrapper matching the operation name used in reports.
pub fn embed_subfield(
    x: &FieldElement,
    src: &Arc<FieldContext>,
    target: &Arc<FieldContext>,
) -> Result<FieldElement, AlgebraError> {
    Ok(Embedding::new(src, target)?.apply(x))
}

/// The quadratic extension F[x]/(x² + c1·x + c0) of a finite field, for an
/// irreducible modulus. Elements are (e0, e1) meaning e0 + e1·x.
pub struct QuadExt<'a> {
    pub base: &'a FieldContext,
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl Ring for QuadExt<'_> {
    type Elem = (FieldElement, FieldElement);

    fn zero(&self) -> Self::Elem {
        (FieldElement(0), FieldElement(0))
    }

    fn one(&self) -> Self::Elem {
        (FieldElement(1), FieldElement(0))
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.base.add(&x.0, &y.0), self.base.add(&x.1, &y.1))
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.base.sub(&x.0, &y.0), self.base.sub(&x.1, &y.1))
    }

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        (self.base.neg(&x.0), self.base.neg(&x.1))
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let b = self.base;
        // (a0 + a1 t)(b0 + b1 t) with t² = -c1 t - c0
        let hh = b.mul(&x.1, &y.1);
        let lo = b.sub(&b.mul(&x.0, &y.0), &b.mul(&hh, &self.c0));
        let mid = b.add(&b.mul(&x.0, &y.1), &b.mul(&x.1, &y.0));
        let hi = b.sub(&mid, &b.mul(&hh, &self.c1));
        (lo, hi)
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        (self.base.from_i64(n), FieldElement(0))
    }
}

impl Field for QuadExt<'_> {
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem> {
        // x^(Q²-2)
        if self.is_zero(x) {
            return None;
        }
        let q = self.base.size();
        Some(self.pow(x, q * q - 2))
    }

    fn order(&self) -> u64 {
        let q = self.base.size();
        q * q
    }
}

impl QuadExt<'_> {
    pub fn sqrt(&self, x: &(FieldElement, FieldElement)) -> Option<(FieldElement, FieldElement)> {
        let b = self.base;
        // an element of the base field that is a non-square there becomes a
        // square here, so search along x + c
        let nr = (0..b.size())
            .map(|c| (FieldElement(c as u32), FieldElement(1)))
            .find(|z| !self.is_one(&self.pow(z, (self.order() - 1) / 2)))
            .expect("quadratic extension has non-squares");
        tonelli_shanks(self, x, &nr)
    }
}
