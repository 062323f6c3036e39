//! Divisor-class arithmetic on y² = f(x).
//!
//! Quintic models use Cantor's algorithm with the single point at infinity.
//! Sextic models (leading coefficient a square c², two points at infinity
//! ∞₊ and ∞₋ where y/x³ → ±c) use the balanced representation: a class is
//! D₀ + n·∞₊ + (2 − deg D₀ − n)·∞₋ − (∞₊ + ∞₋) with D₀ an affine reduced
//! divisor given by (u, v) and 0 ≤ n ≤ 2 − deg u.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rng::SeededRng;
use super::{CurveError, CurveModel, ModelKind};
use crate::algebra::ntheory::trial_factor;
use crate::algebra::{field_create, Embedding, Field, FieldContext, FieldElement, Poly, QuadExt, Ring, UniPoly};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MumfordDivisor {
    pub u: UniPoly,
    pub v: UniPoly,
    /// Weight at ∞₊ for sextic models; always 0 for quintic models.
    pub n: u8,
}

impl MumfordDivisor {
    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }
}

/// A factor of a Miller function produced by one group-law step.
#[derive(Clone, Debug)]
pub enum StepFunction {
    /// A polynomial g(x).
    X(UniPoly),
    /// (y − v(x)) / w(x).
    Line { v: UniPoly, den: UniPoly },
}

#[derive(Clone, Debug)]
pub struct JacobianContext {
    curve: CurveModel,
    field: Arc<FieldContext>,
    m: u32,
    f: UniPoly,
    /// Sextic only: V₊ with leading coefficient c and deg(f − V₊²) ≤ 2.
    vplus: Option<UniPoly>,
    /// Sextic only: whether the base-field Frobenius swaps ∞₊ and ∞₋.
    swaps_infinity: bool,
}

impl JacobianContext {
    /// Jacobian of `curve` over 𝔽_{q^m}.
    pub fn new(curve: &CurveModel, m: u32) -> Result<Self, CurveError> {
        let base = curve.base();
        let field = field_create(base.p(), base.degree() * m)?;
        let emb = Embedding::new(base, &field)?;
        let f = emb.apply_poly(curve.f());
        let (vplus, swaps_infinity) = match curve.kind() {
            ModelKind::Quintic => (None, false),
            ModelKind::Sextic => {
                let k = &*field;
                let c = k.sqrt(f.lead().unwrap()).ok_or(CurveError::ModelUnsupported)?;
                let swaps = k.frobenius(&c, base.degree()) != c;
                (Some(sqrt_top(k, &f, c)), swaps)
            }
        };
        Ok(JacobianContext { curve: curve.clone(), field, m, f, vplus, swaps_infinity })
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    /// Extension degree of the working field over the curve's base field.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn f(&self) -> &UniPoly {
        &self.f
    }

    pub fn is_sextic(&self) -> bool {
        self.vplus.is_some()
    }

    fn k(&self) -> &FieldContext {
        &self.field
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor { u: Poly::one(self.k()), v: Poly::zero(), n: u8::from(self.is_sextic()) }
    }

    pub fn is_identity(&self, d: &MumfordDivisor) -> bool {
        *d == self.identity()
    }

    /// Membership and normal-form check.
    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        let k = self.k();
        let Some(du) = d.u.degree() else { return false };
        if du > 2 || !d.u.is_monic(k) || d.v.deg() >= du as isize {
            return false;
        }
        let n_ok = if self.is_sextic() { (d.n as usize) <= 2 - du } else { d.n == 0 };
        n_ok && self.f.sub(k, &d.v.mul(k, &d.v)).rem(k, &d.u).is_zero()
    }

    pub fn neg(&self, d: &MumfordDivisor) -> MumfordDivisor {
        let n = if self.is_sextic() { (2 - d.degree()) as u8 - d.n } else { 0 };
        MumfordDivisor { u: d.u.clone(), v: d.v.neg(self.k()), n }
    }

    pub fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        self.add_traced(a, b, None)
    }

    /// Group law; when `trace` is given, pushes functions h with
    /// a + b = result + div(h) as divisors.
    pub fn add_traced(
        &self,
        a: &MumfordDivisor,
        b: &MumfordDivisor,
        mut trace: Option<&mut Vec<StepFunction>>,
    ) -> MumfordDivisor {
        let k = self.k();
        let (u, v, delta) = self.compose(a, b);
        if let Some(t) = trace.as_deref_mut() {
            if delta.degree().unwrap_or(0) > 0 {
                t.push(StepFunction::X(delta.clone()));
            }
        }
        let delta_deg = delta.degree().unwrap_or(0) as i64;
        match &self.vplus {
            None => {
                let (mut u, mut v) = (u, v);
                while u.degree().unwrap() > 2 {
                    let up = self.f.sub(k, &v.mul(k, &v)).divrem(k, &u).0.monic(k);
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(StepFunction::Line { v: v.clone(), den: up.clone() });
                    }
                    v = v.neg(k).rem(k, &up);
                    u = up;
                }
                MumfordDivisor { u, v, n: 0 }
            }
            Some(vplus) => {
                let (da, db) = (a.degree() as i64, b.degree() as i64);
                let mut wa = a.n as i64 + b.n as i64 + delta_deg;
                let mut wb = (2 - da - a.n as i64) + (2 - db - b.n as i64) + delta_deg;
                let (mut u, mut v) = (u, v);
                for _ in 0..4 {
                    let d = u.degree().unwrap();
                    if d <= 2 && wa >= 1 && wb >= 1 {
                        return MumfordDivisor { u, v, n: (wa - 1) as u8 };
                    }
                    let plus = d == 4 || wa >= 1;
                    let vs = if plus { vplus.clone() } else { vplus.neg(k) };
                    let w = v.sub(k, &vs).rem(k, &u);
                    let vb = vs.add(k, &w);
                    let num = self.f.sub(k, &vb.mul(k, &vb));
                    let e = num.degree().unwrap() as i64;
                    let up = num.divrem(k, &u).0.monic(k);
                    let dp = up.degree().unwrap() as i64;
                    let ord_s = if w.is_zero() { 3 - e } else { -(w.degree().unwrap() as i64) };
                    let ord_o = -e - ord_s;
                    let (ord_p, ord_m) = if plus { (ord_s, ord_o) } else { (ord_o, ord_s) };
                    wa -= dp + ord_p;
                    wb -= dp + ord_m;
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(StepFunction::Line { v: vb.clone(), den: up.clone() });
                    }
                    v = vb.neg(k).rem(k, &up);
                    u = up;
                }
                unreachable!("balanced reduction normalizes within four steps")
            }
        }
    }

    /// Cantor composition: semi-reduced (u, v) with v reduced mod u, and the
    /// gcd polynomial whose divisor accounts for cancelled pairs.
    fn compose(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> (UniPoly, UniPoly, UniPoly) {
        let k = self.k();
        let (d0, e1, e2) = a.u.xgcd(k, &b.u);
        let vsum = a.v.add(k, &b.v);
        let (d, c1, c2) = d0.xgcd(k, &vsum);
        let s1 = c1.mul(k, &e1);
        let s2 = c1.mul(k, &e2);
        let u = a.u.mul(k, &b.u).divrem(k, &d.mul(k, &d)).0;
        let t = s1
            .mul(k, &a.u)
            .mul(k, &b.v)
            .add(k, &s2.mul(k, &b.u).mul(k, &a.v))
            .add(k, &c2.mul(k, &a.v.mul(k, &b.v).add(k, &self.f)));
        let v = t.divrem(k, &d).0.rem(k, &u);
        (u, v, d)
    }

    pub fn double(&self, a: &MumfordDivisor) -> MumfordDivisor {
        self.add(a, a)
    }

    pub fn scalar_mul(&self, d: &MumfordDivisor, n: &BigInt) -> MumfordDivisor {
        let base = if n.is_negative() { self.neg(d) } else { d.clone() };
        let e = n.magnitude();
        let mut acc = self.identity();
        for i in (0..e.bits()).rev() {
            acc = self.double(&acc);
            if e.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    pub fn scalar_mul_u64(&self, d: &MumfordDivisor, n: u64) -> MumfordDivisor {
        self.scalar_mul(d, &BigInt::from(n))
    }

    /// Exact order of `d`, given a multiple of it.
    pub fn divisor_order(&self, d: &MumfordDivisor, hint: &BigInt) -> Result<BigInt, CurveError> {
        if hint.is_zero() || !self.is_identity(&self.scalar_mul(d, hint)) {
            return Err(CurveError::HintDoesNotAnnihilate);
        }
        let mut ord = hint.abs();
        let (factors, rest) = trial_factor(&ord, 10_000_000);
        let mut primes: Vec<BigInt> = factors.iter().map(|&(r, _)| BigInt::from(r)).collect();
        if !rest.is_one() {
            primes.push(BigInt::from(rest));
        }
        for r in primes {
            while (&ord % &r).is_zero() && self.is_identity(&self.scalar_mul(d, &(&ord / &r))) {
                ord /= &r;
            }
        }
        Ok(ord)
    }

    /// All v (deg v < deg u) with u | f − v², for monic u of degree ≤ 2,
    /// excluding non-reduced cases.
    pub fn v_candidates(&self, u: &UniPoly) -> Vec<UniPoly> {
        let k = self.k();
        let f = &self.f;
        let signs = |y: FieldElement| -> Vec<FieldElement> {
            if k.is_zero(&y) {
                vec![y]
            } else {
                vec![y, k.neg(&y)]
            }
        };
        match u.degree().unwrap() {
            0 => vec![Poly::zero()],
            1 => {
                let a = k.neg(&u.coeff(k, 0));
                match k.sqrt(&f.eval(k, &a)) {
                    None => vec![],
                    Some(y) => signs(y).into_iter().map(|y| Poly::constant(k, y)).collect(),
                }
            }
            _ => {
                let (c0, c1) = (u.coeff(k, 0), u.coeff(k, 1));
                let disc = k.sub(&k.mul(&c1, &c1), &k.mul(&k.from_i64(4), &c0));
                if k.is_zero(&disc) {
                    let a = k.neg(&k.div(&c1, &k.from_i64(2)).unwrap());
                    let fa = f.eval(k, &a);
                    if k.is_zero(&fa) {
                        return vec![];
                    }
                    let Some(y) = k.sqrt(&fa) else { return vec![] };
                    let fpa = f.derivative(k).eval(k, &a);
                    signs(y)
                        .into_iter()
                        .map(|y| {
                            let slope = k.div(&fpa, &k.add(&y, &y)).unwrap();
                            Poly::new(k, vec![k.sub(&y, &k.mul(&slope, &a)), slope])
                        })
                        .collect()
                } else if let Some(sd) = k.sqrt(&disc) {
                    let two_inv = k.inv(&k.from_i64(2)).unwrap();
                    let a = k.mul(&k.sub(&sd, &c1), &two_inv);
                    let b = k.mul(&k.sub(&k.neg(&sd), &c1), &two_inv);
                    let (Some(ya), Some(yb)) = (k.sqrt(&f.eval(k, &a)), k.sqrt(&f.eval(k, &b))) else {
                        return vec![];
                    };
                    let inv_ba = k.inv(&k.sub(&b, &a)).unwrap();
                    let mut out = Vec::new();
                    for ya in signs(ya) {
                        for yb in signs(yb) {
                            let slope = k.mul(&k.sub(&yb, &ya), &inv_ba);
                            out.push(Poly::new(k, vec![k.sub(&ya, &k.mul(&slope, &a)), slope]));
                        }
                    }
                    out
                } else {
                    let ext = QuadExt { base: k, c0, c1 };
                    let r = f.rem(k, u);
                    let r = (r.coeff(k, 0), r.coeff(k, 1));
                    match ext.sqrt(&r) {
                        None => vec![],
                        Some(s) => {
                            let v = Poly::new(k, vec![s.0, s.1]);
                            if v.is_zero() {
                                vec![v]
                            } else {
                                vec![v.clone(), v.neg(k)]
                            }
                        }
                    }
                }
            }
        }
    }

    /// Every class with first coordinate u.
    pub fn classes_over(&self, u: &UniPoly) -> Vec<MumfordDivisor> {
        let d = u.degree().unwrap();
        let ns: Vec<u8> = if self.is_sextic() { (0..=(2 - d) as u8).collect() } else { vec![0] };
        let mut out = Vec::new();
        for v in self.v_candidates(u) {
            for &n in &ns {
                out.push(MumfordDivisor { u: u.clone(), v: v.clone(), n });
            }
        }
        out
    }

    /// Monic polynomial of degree ≤ 2 with the given index in
    /// [0, 1 + Q + Q²).
    fn monic_by_index(&self, mut idx: u64) -> UniPoly {
        let k = self.k();
        let q = k.size();
        if idx == 0 {
            return Poly::one(k);
        }
        idx -= 1;
        if idx < q {
            return Poly::new(k, vec![FieldElement(idx as u32), k.one()]);
        }
        idx -= q;
        Poly::new(k, vec![FieldElement((idx % q) as u32), FieldElement((idx / q) as u32), k.one()])
    }

    /// All classes over the working field, in lexicographic order of
    /// (u, v, n) coefficients.
    pub fn enumerate(&self) -> Result<Vec<MumfordDivisor>, CurveError> {
        let q = self.k().size();
        if q > 256 {
            return Err(CurveError::FieldTooLarge);
        }
        let mut out = Vec::new();
        for idx in 0..1 + q + q * q {
            out.extend(self.classes_over(&self.monic_by_index(idx)));
        }
        let key = |d: &MumfordDivisor| -> (Vec<Vec<u32>>, Vec<Vec<u32>>, u8) {
            (
                d.u.coeffs().iter().map(|c| self.k().lex_key(c)).collect(),
                d.v.coeffs().iter().map(|c| self.k().lex_key(c)).collect(),
                d.n,
            )
        };
        out.sort_by_cached_key(key);
        Ok(out)
    }

    /// Uniform random class: uniform u, then one of four slots, accepted
    /// when the slot indexes an existing class over u.
    pub fn random_with(&self, rng: &mut SeededRng) -> MumfordDivisor {
        let q = self.k().size();
        let total = 1 + q + q * q;
        loop {
            let u = self.monic_by_index(rng.below(total));
            let slot = rng.below(4) as usize;
            let classes = self.classes_over(&u);
            if slot < classes.len() {
                return classes[slot].clone();
            }
        }
    }

    pub fn random(&self, seed: u64) -> MumfordDivisor {
        self.random_with(&mut SeededRng::new(seed))
    }

    /// The q^j-power Frobenius of the curve's base field, applied to
    /// Mumford coordinates.
    pub fn frobenius(&self, d: &MumfordDivisor, j: u32) -> MumfordDivisor {
        let k = self.k();
        let steps = self.curve.base().degree() * j;
        let fr = |p: &UniPoly| p.map(k, |c| k.frobenius(c, steps));
        let mut n = d.n;
        if self.swaps_infinity && j % 2 == 1 {
            n = (2 - d.degree()) as u8 - d.n;
        }
        MumfordDivisor { u: fr(&d.u), v: fr(&d.v), n }
    }

    pub fn to_u64_order(n: &BigInt) -> Option<u64> {
        n.to_u64()
    }
}

/// The polynomial V of degree 3 with leading coefficient c and
/// deg(f − V²) ≤ 2.
fn sqrt_top(k: &FieldContext, f: &UniPoly, c: FieldElement) -> UniPoly {
    let mut v = vec![k.zero(); 4];
    v[3] = c;
    let two_c_inv = k.inv(&k.add(&c, &c)).unwrap();
    for i in (0..3).rev() {
        let vp = Poly::new(k, v.clone());
        let rem = f.sub(k, &vp.mul(k, &vp));
        // coefficient of x^{3+i} must vanish
        let r = rem.coeff(k, 3 + i);
        v[i] = k.mul(&r, &two_c_inv);
    }
    Poly::new(k, v)
}
