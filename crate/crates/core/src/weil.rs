//! Integer Weil polynomials X⁴ + sX³ + tX² + sQX + Q² (Q = q^m): counts,
//! Frobenius powers, reduction mod ℓ, factorization over ℚ, ramification
//! of the Weil-number field and embedding degrees.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::intpoly::{charpoly, companion, discriminant, int_poly_exact_div, mat_pow};
use crate::algebra::ntheory::{factor_u64, is_prime, mult_order_mod, squarefree_kernel, trial_factor};
use crate::algebra::{field_create, poly_distinct_degree_factor, AlgebraError, FieldContext, IntPoly, Integers, Poly, Ring, UniPoly};
use crate::analysis::{classify_torsion, TheoremApplied};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("power index must be at least 1")]
    BadPowerIndex,
    #[error("(s, t) violates the Hasse-Weil bounds")]
    NotWeil,
    #[error("point counts outside the Hasse-Weil range")]
    CountsOutOfRange,
    #[error("point counts give a non-integral t")]
    NonIntegralT,
    #[error("ℓ divides q")]
    EllDividesQ,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is reducible over ℚ")]
    Reducible,
    #[error("ℓ does not divide P(1)")]
    EllDoesNotDivideOrder,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Smallest prime factor and exponent when n is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factor_u64(n).as_slice() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilPolynomial {
    q: u64,
    m: u32,
    s: BigInt,
    t: BigInt,
}

impl WeilPolynomial {
    /// Screened constructor: the real polynomial X² + sX + (t − 2Q) must
    /// have both roots in [−2√Q, 2√Q].
    pub fn new(q: u64, m: u32, s: BigInt, t: BigInt) -> Result<Self, WeilError> {
        if prime_power(q).is_none() {
            return Err(WeilError::NotPrimePower(q));
        }
        if m == 0 {
            return Err(WeilError::BadPowerIndex);
        }
        let w = WeilPolynomial { q, m, s, t };
        if !w.passes_screen() {
            return Err(WeilError::NotWeil);
        }
        Ok(w)
    }

    pub fn from_i64(q: u64, m: u32, s: i64, t: i64) -> Result<Self, WeilError> {
        Self::new(q, m, BigInt::from(s), BigInt::from(t))
    }

    fn passes_screen(&self) -> bool {
        let qm = self.field_size();
        let s2 = &self.s * &self.s;
        let disc = &s2 - BigInt::from(4) * (&self.t - BigInt::from(2) * &qm);
        let h = BigInt::from(2) * &qm + &self.t;
        disc >= BigInt::zero()
            && s2 <= BigInt::from(16) * &qm
            && h >= BigInt::zero()
            && &h * &h >= BigInt::from(4) * &s2 * &qm
    }

    /// Base field size q.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }

    /// Characteristic of the base field.
    pub fn p(&self) -> u64 {
        prime_power(self.q).unwrap().0
    }

    /// Q = q^m.
    pub fn field_size(&self) -> BigInt {
        BigInt::from(self.q).pow(self.m)
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> [BigInt; 5] {
        let qm = self.field_size();
        [&qm * &qm, &self.s * &qm, self.t.clone(), self.s.clone(), BigInt::one()]
    }

    pub fn poly(&self) -> IntPoly {
        Poly::new(&Integers, self.coeffs().to_vec())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs().iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn two_sigma(&self) -> BigInt {
        self.s.clone()
    }

    /// 4τ = 8Q + s² − 4t.
    pub fn four_tau(&self) -> BigInt {
        BigInt::from(8) * self.field_size() + &self.s * &self.s - BigInt::from(4) * &self.t
    }
}

pub fn sigma_tau(p: &WeilPolynomial) -> (BigInt, BigInt) {
    (p.two_sigma(), p.four_tau())
}

/// P(1), the order of the Jacobian over 𝔽_Q.
pub fn jacobian_order(p: &WeilPolynomial) -> BigInt {
    p.eval(&BigInt::one())
}

/// Weil polynomial over 𝔽_q from M₁ = #C(𝔽_q) and M₂ = #C(𝔽_{q²}), with
/// the convention M₁ = q + 1 + s.
pub fn weil_from_counts(m1: u64, m2: u64, q: u64) -> Result<WeilPolynomial, WeilError> {
    let qb = BigInt::from(q);
    let s = BigInt::from(m1) - &qb - 1;
    if &s * &s > BigInt::from(16) * &qb {
        return Err(WeilError::CountsOutOfRange);
    }
    let num: BigInt = BigInt::from(m2) - &qb * &qb - 1 + &s * &s;
    if num.is_odd() {
        return Err(WeilError::NonIntegralT);
    }
    WeilPolynomial::new(q, 1, s, num / 2).map_err(|e| match e {
        WeilError::NotWeil => WeilError::CountsOutOfRange,
        e => e,
    })
}

/// Characteristic polynomial of the k-th power of Frobenius (power index
/// m·k), from the k-th power of the companion matrix.
pub fn frobenius_power(p: &WeilPolynomial, k: u32) -> WeilPolynomial {
    assert!(k >= 1);
    let c = companion(&Integers, &p.poly());
    let cp = charpoly(&Integers, &mat_pow(&Integers, &c, k as u64));
    let w = WeilPolynomial { q: p.q, m: p.m * k, s: cp.coeff(&Integers, 3), t: cp.coeff(&Integers, 2) };
    debug_assert_eq!(cp.coeffs(), w.coeffs().as_slice());
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModFactor {
    /// Monic, constant term first, entries in [0, ℓ).
    pub poly: Vec<u64>,
    /// Degree of each irreducible factor inside `poly`.
    pub factor_degree: usize,
    pub multiplicity: u32,
}

/// P mod ℓ split into roots (with multiplicity) and a remainder given as
/// distinct-degree pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModFactorization {
    pub ell: u64,
    pub roots: Vec<(u64, u32)>,
    pub rest: Vec<ModFactor>,
}

impl ModFactorization {
    /// Roots in 𝔽_ℓ repeated by multiplicity.
    pub fn root_multiset(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &(r, e) in &self.roots {
            out.extend(std::iter::repeat_n(r, e as usize));
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.roots.iter().all(|r| r.1 == 1) && self.rest.iter().all(|f| f.multiplicity == 1)
    }
}

fn reduce_poly(fl: &FieldContext, p: &IntPoly) -> UniPoly {
    let ell = BigInt::from(fl.p());
    Poly::new(fl, p.coeffs().iter().map(|c| fl.from_i64(c.mod_floor(&ell).to_i64().unwrap())).collect())
}

fn check_ell(ell: u64, q: u64) -> Result<(), WeilError> {
    if !is_prime(ell) {
        return Err(WeilError::NotPrime(ell));
    }
    if q.is_multiple_of(ell) {
        return Err(WeilError::EllDividesQ);
    }
    Ok(())
}

pub fn reduce_and_factor_mod(p: &WeilPolynomial, ell: u64) -> Result<ModFactorization, WeilError> {
    check_ell(ell, p.q)?;
    let fl = field_create(ell, 1)?;
    let fl = &*fl;
    let mut g = reduce_poly(fl, &p.poly());
    let mut roots: Vec<(u64, u32)> = Vec::new();
    for r in fl.poly_roots(&g)? {
        match roots.last_mut() {
            Some(last) if last.0 == r.0 as u64 => last.1 += 1,
            _ => roots.push((r.0 as u64, 1)),
        }
        g = g.divrem(fl, &Poly::linear(fl, &r)).0;
    }
    let mut rest = Vec::new();
    if g.degree().unwrap() > 0 {
        // No linear factors remain and deg ≤ 4, so the only possible
        // repeated factor is the square of an irreducible quadratic.
        let dg = g.derivative(fl);
        let (sqfree, mult) = if dg.is_zero() {
            // characteristic 2: g(x) = h(x)², and squaring fixes 𝔽₂
            (Poly::new(fl, g.coeffs().iter().step_by(2).copied().collect()), 2)
        } else {
            let h = g.gcd(fl, &dg);
            if h.degree().unwrap() > 0 {
                (h, 2)
            } else {
                (g, 1)
            }
        };
        for (d, piece) in poly_distinct_degree_factor(fl, &sqfree)? {
            rest.push(ModFactor {
                poly: piece.coeffs().iter().map(|c| c.0 as u64).collect(),
                factor_degree: d,
                multiplicity: mult,
            });
        }
    }
    Ok(ModFactorization { ell, roots, rest })
}

/// Signed divisors of a nonzero integer (trial division to 10⁶; an
/// unfactored cofactor is treated as prime).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let (factors, rest) = trial_factor(n, 1_000_000);
    let mut primes: Vec<(BigInt, u32)> = factors.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
    if !rest.is_one() {
        primes.push((BigInt::from(rest), 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    let neg: Vec<BigInt> = out.iter().map(|d| -d).collect();
    out.extend(neg);
    out
}

fn linear(r: &BigInt) -> IntPoly {
    Poly::new(&Integers, vec![-r, BigInt::one()])
}

fn quadratic(a: &BigInt, b: &BigInt) -> IntPoly {
    Poly::new(&Integers, vec![b.clone(), a.clone(), BigInt::one()])
}

/// Split a monic quartic without rational roots into two monic integer
/// quadratics, if possible. For each divisor b of the constant term the
/// remaining coefficients are forced by the coefficient equations.
fn split_quartic(g: &IntPoly) -> Option<(IntPoly, IntPoly)> {
    let c: Vec<BigInt> = (0..4).map(|i| g.coeff(&Integers, i)).collect();
    for b in divisors(&c[0]) {
        let d = &c[0] / &b;
        let mut choices = Vec::new();
        if d != b {
            let num = &c[1] - &b * &c[3];
            let den = &d - &b;
            if (&num % &den).is_zero() {
                choices.push(num / den);
            }
        } else {
            let disc = &c[3] * &c[3] - BigInt::from(4) * (&c[2] - BigInt::from(2) * &b);
            if let Some(r) = crate::algebra::ntheory::exact_sqrt(&disc) {
                for sr in [&c[3] + &r, &c[3] - &r] {
                    if sr.is_even() {
                        choices.push(sr / 2);
                    }
                }
            }
        }
        for a in choices {
            let cc = &c[3] - &a;
            let f1 = quadratic(&a, &b);
            let f2 = quadratic(&cc, &d);
            if f1.mul(&Integers, &f2) == *g {
                return Some((f1, f2));
            }
        }
    }
    None
}

/// Factorization over ℚ of a monic integer polynomial of degree ≤ 4 with
/// nonzero constant term: monic irreducible factors with multiplicity,
/// sorted by (degree, coefficients).
pub fn factor_over_q(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut found: Vec<IntPoly> = Vec::new();
    let mut g = f.clone();
    let c0 = g.coeff(&Integers, 0);
    assert!(!c0.is_zero(), "constant term must be nonzero");
    for r in divisors(&c0) {
        while g.degree().unwrap() > 0 && g.eval(&Integers, &r).is_zero() {
            let l = linear(&r);
            g = int_poly_exact_div(&g, &l).unwrap();
            found.push(l);
        }
    }
    match g.degree().unwrap() {
        0 => {}
        4 => match split_quartic(&g) {
            Some((a, b)) => {
                found.push(a);
                found.push(b);
            }
            None => found.push(g),
        },
        d if d <= 3 => found.push(g),
        _ => unimplemented!("factorization above degree 4"),
    }
    found.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    let mut out: Vec<(IntPoly, u32)> = Vec::new();
    for h in found {
        match out.last_mut() {
            Some(last) if last.0 == h => last.1 += 1,
            _ => out.push((h, 1)),
        }
    }
    out
}

pub fn rational_factorization(p: &WeilPolynomial) -> Vec<(IntPoly, u32)> {
    factor_over_q(&p.poly())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeilNumberKind {
    RationalInteger,
    Quadratic,
    Cubic,
    Quartic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilNumberDescription {
    pub kind: WeilNumberKind,
    pub minpoly: IntPoly,
    pub discriminant: BigInt,
    pub multiplicity: u32,
}

/// One description per distinct irreducible factor of P.
pub fn weil_numbers(p: &WeilPolynomial) -> Vec<WeilNumberDescription> {
    rational_factorization(p)
        .into_iter()
        .map(|(g, e)| {
            let kind = match g.degree().unwrap() {
                1 => WeilNumberKind::RationalInteger,
                2 => WeilNumberKind::Quadratic,
                3 => WeilNumberKind::Cubic,
                _ => WeilNumberKind::Quartic,
            };
            WeilNumberDescription { kind, discriminant: discriminant(&g), minpoly: g, multiplicity: e }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ramification {
    Yes,
    No,
    Inconclusive,
}

/// Discriminant of the quadratic field ℚ(√D).
pub fn quadratic_field_discriminant(d: &BigInt) -> BigInt {
    let k = squarefree_kernel(d);
    if k.mod_floor(&BigInt::from(4)) == BigInt::one() {
        k
    } else {
        k * 4
    }
}

/// Whether ℓ is unramified in the field generated by a root of `minpoly`.
pub fn is_unramified(ell: u64, minpoly: &IntPoly) -> Result<Ramification, WeilError> {
    let fac = factor_over_q(minpoly);
    if fac.len() != 1 || fac[0].1 != 1 {
        return Err(WeilError::Reducible);
    }
    let l = BigInt::from(ell);
    Ok(match minpoly.degree().unwrap() {
        1 => Ramification::Yes,
        2 => {
            let dk = quadratic_field_discriminant(&discriminant(minpoly));
            if (dk % &l).is_zero() {
                Ramification::No
            } else {
                Ramification::Yes
            }
        }
        _ => {
            if (discriminant(minpoly) % &l).is_zero() {
                Ramification::Inconclusive
            } else {
                Ramification::Yes
            }
        }
    })
}

/// Least k with q^k ≡ 1 (mod ℓ).
pub fn embedding_degree(q: &BigInt, ell: u64) -> Result<u64, WeilError> {
    if !is_prime(ell) {
        return Err(WeilError::NotPrime(ell));
    }
    if (q % BigInt::from(ell)).is_zero() {
        return Err(WeilError::EllDividesQ);
    }
    Ok(mult_order_mod(q, ell)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FullEmbeddingDegree {
    Exact(u64),
    /// Increasing candidates; the true value is one of them.
    Candidates(Vec<u64>),
}

impl FullEmbeddingDegree {
    pub fn exact(&self) -> Option<u64> {
        match self {
            FullEmbeddingDegree::Exact(k) => Some(*k),
            FullEmbeddingDegree::Candidates(_) => None,
        }
    }

    pub fn values(&self) -> Vec<u64> {
        match self {
            FullEmbeddingDegree::Exact(k) => vec![*k],
            FullEmbeddingDegree::Candidates(v) => v.clone(),
        }
    }

    /// The same quantity measured in multiples of m: n ↦ lcm(n, m).
    pub fn lift(&self, m: u64) -> FullEmbeddingDegree {
        match self {
            FullEmbeddingDegree::Exact(k) => FullEmbeddingDegree::Exact(k.lcm(&m)),
            FullEmbeddingDegree::Candidates(v) => {
                let mut w: Vec<u64> = v.iter().map(|k| k.lcm(&m)).collect();
                w.dedup();
                FullEmbeddingDegree::Candidates(w)
            }
        }
    }
}

/// Prime factorization of ℓ^d − 1 (d ≤ 4) assembled from its cyclotomic
/// pieces, which stay small enough for trial division.
fn factor_ell_power_minus_one(ell: u64, d: usize) -> Vec<(BigInt, u32)> {
    let l = ell as u128;
    let pieces: Vec<u128> = match d {
        1 => vec![l - 1],
        2 => vec![l - 1, l + 1],
        3 => vec![l - 1, l * l + l + 1],
        4 => vec![l - 1, l + 1, l * l + 1],
        _ => unreachable!("degree above 4"),
    };
    let mut acc: Vec<(BigInt, u32)> = Vec::new();
    for piece in pieces {
        let (fs, rest) = trial_factor(&BigInt::from(piece), 1 << 32);
        let mut all: Vec<(BigInt, u32)> = fs.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
        if !rest.is_one() {
            all.push((BigInt::from(rest), 1));
        }
        for (p, e) in all {
            match acc.iter_mut().find(|x| x.0 == p) {
                Some(x) => x.1 += e,
                None => acc.push((p, e)),
            }
        }
    }
    acc
}

/// Order of X in (𝔽_ℓ[X]/g)ˣ for g squarefree with every irreducible
/// factor of degree d.
fn x_order_equal_degree(fl: &FieldContext, g: &UniPoly, d: usize) -> BigUint {
    let ell = fl.p();
    let x = Poly::x(fl);
    let one = Poly::one(fl);
    let mut k = BigUint::from(ell).pow(d as u32) - 1u32;
    for (r, e) in factor_ell_power_minus_one(ell, d) {
        let r = r.to_biguint().unwrap();
        for _ in 0..e {
            let cand = &k / &r;
            if (&k % &r).is_zero() && x.powmod_big(fl, &cand, g) == one {
                k = cand;
            } else {
                break;
            }
        }
    }
    k
}

/// Order of X modulo P mod ℓ, i.e. the order of the companion matrix.
/// Returns (order of X mod the radical, order of X mod P).
pub fn companion_order_mod(p: &WeilPolynomial, ell: u64) -> Result<(u64, u64), WeilError> {
    let fac = reduce_and_factor_mod(p, ell)?;
    let fl = field_create(ell, 1)?;
    let fl = &*fl;
    let mut k0 = BigUint::one();
    for &(r, _) in &fac.roots {
        let o = mult_order_mod(&BigInt::from(r), ell)?;
        k0 = k0.lcm(&BigUint::from(o));
    }
    for piece in &fac.rest {
        let g = Poly::new(fl, piece.poly.iter().map(|&c| fl.from_i64(c as i64)).collect());
        k0 = k0.lcm(&x_order_equal_degree(fl, &g, piece.factor_degree));
    }
    let pbar = reduce_poly(fl, &p.poly());
    let x = Poly::x(fl);
    let one = Poly::one(fl);
    let mut full = k0.clone();
    while x.powmod_big(fl, &full, &pbar) != one {
        full *= ell;
    }
    Ok((k0.to_u64().expect("order fits in u64"), full.to_u64().expect("order fits in u64")))
}

/// Full embedding degree read off the companion matrix mod ℓ: exact when
/// P mod ℓ is squarefree (Frobenius is then semisimple on J[ℓ]), else the
/// chain κ₀, ℓκ₀, … up to the order of the companion matrix.
pub fn companion_kappa(p: &WeilPolynomial, ell: u64) -> Result<FullEmbeddingDegree, WeilError> {
    let fac = reduce_and_factor_mod(p, ell)?;
    let (k0, full) = companion_order_mod(p, ell)?;
    if fac.is_squarefree() {
        return Ok(FullEmbeddingDegree::Exact(full));
    }
    let mut cands = vec![k0];
    while *cands.last().unwrap() < full {
        let next = cands.last().unwrap() * ell;
        cands.push(next);
    }
    Ok(FullEmbeddingDegree::Candidates(cands))
}

/// Full embedding degree (least κ with J[ℓ] ⊆ J(𝔽_{Q^κ})), decided from
/// P alone where possible.
pub fn symbolic_full_embedding_degree(p: &WeilPolynomial, ell: u64) -> Result<FullEmbeddingDegree, WeilError> {
    check_ell(ell, p.q)?;
    if !(jacobian_order(p) % BigInt::from(ell)).is_zero() {
        return Err(WeilError::EllDoesNotDivideOrder);
    }
    let kappa = companion_kappa(p, ell)?;
    if kappa.exact().is_some() {
        return Ok(kappa);
    }
    if let Ok(rep) = classify_torsion(p, ell, 1) {
        if matches!(rep.theorem, TheoremApplied::Thm7Case1 | TheoremApplied::Thm7Case2) {
            if let Some(k) = rep.kappa.exact() {
                return Ok(FullEmbeddingDegree::Exact(k));
            }
        }
    }
    Ok(kappa)
}
