//! Miller functions and the reduced Tate and Weil pairings.
//!
//! Functions are evaluated on degree-zero sums of affine effective divisors
//! given in Mumford form. The value of g(x) + h(x)·y on the points of (u, v)
//! is the resultant of u with g + h·v, so no point needs to be split off
//! into an extension field.

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::ntheory::pow_mod;
use crate::algebra::{poly_roots, Field, FieldContext, FieldElement, Ring, UniPoly};
use crate::curve::{JacobianContext, MumfordDivisor, SeededRng, StepFunction};

/// Randomized representatives tried before giving up.
const RETRIES: u32 = 16;
/// Candidates drawn per representative while looking for one without
/// rational points.
const PREFER_TRIES: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("an intermediate Miller function vanishes or has a pole on the evaluation divisor")]
    SupportCollision,
    #[error("ℓ does not divide |𝔽ˣ|")]
    MuEllNotInField,
    #[error("divisor is not ℓ-torsion")]
    NotTorsion,
    #[error("evaluation divisor does not have degree zero")]
    NotDegreeZero,
    #[error("pairing value is not an ℓ-th root of unity")]
    NotInMuEll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairingValue {
    pub value: FieldElement,
    pub ell: u64,
}

/// Σ aᵢ·Eᵢ with each Eᵢ the affine effective divisor of a Mumford pair.
#[derive(Clone, Debug, Default)]
pub struct PointSum(pub Vec<(UniPoly, UniPoly, i64)>);

impl PointSum {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(u, _, a)| u.degree().unwrap_or(0) as i64 * a).sum()
    }
}

/// ∏ g(P) over the points P of u counted with multiplicity, for monic u of
/// degree ≤ 2.
fn norm(k: &FieldContext, u: &UniPoly, g: &UniPoly) -> FieldElement {
    let r = g.rem(k, u);
    match u.degree().unwrap_or(0) {
        0 => k.one(),
        1 => r.coeff(k, 0),
        _ => {
            let (a, b) = (r.coeff(k, 0), r.coeff(k, 1));
            let (c0, c1) = (u.coeff(k, 0), u.coeff(k, 1));
            // a² − a·b·c₁ + b²·c₀
            let t = k.sub(&k.mul(&a, &a), &k.mul(&k.mul(&a, &b), &c1));
            k.add(&t, &k.mul(&k.mul(&b, &b), &c0))
        }
    }
}

fn eval_step(k: &FieldContext, h: &StepFunction, e: &PointSum) -> Result<FieldElement, PairingError> {
    let mut acc = k.one();
    for (u, v, a) in &e.0 {
        let val = match h {
            StepFunction::X(g) => norm(k, u, g),
            StepFunction::Line { v: vb, den } => {
                let num = norm(k, u, &v.sub(k, vb));
                let d = norm(k, u, den);
                if k.is_zero(&d) {
                    return Err(PairingError::SupportCollision);
                }
                k.div(&num, &d).unwrap()
            }
        };
        if k.is_zero(&val) {
            return Err(PairingError::SupportCollision);
        }
        let val = if *a < 0 { k.inv(&val).unwrap() } else { val };
        acc = k.mul(&acc, &k.pow(&val, a.unsigned_abs()));
    }
    Ok(acc)
}

/// f_{n,x}(E) with n·X = [n·x] + div(f_{n,x}), X the normal-form divisor
/// of x; also returns n·x.
fn miller(
    ctx: &JacobianContext,
    x: &MumfordDivisor,
    n: u64,
    e: &PointSum,
) -> Result<(FieldElement, MumfordDivisor), PairingError> {
    let k = &**ctx.field();
    let mut acc = x.clone();
    let mut val = k.one();
    let mut steps = Vec::new();
    for i in (0..63 - n.leading_zeros()).rev() {
        steps.clear();
        acc = ctx.add_traced(&acc, &acc, Some(&mut steps));
        val = k.mul(&val, &val);
        for h in &steps {
            val = k.mul(&val, &eval_step(k, h, e)?);
        }
        if (n >> i) & 1 == 1 {
            steps.clear();
            acc = ctx.add_traced(&acc, x, Some(&mut steps));
            for h in &steps {
                val = k.mul(&val, &eval_step(k, h, e)?);
            }
        }
    }
    Ok((val, acc))
}

/// f_x(E) for x of order dividing ℓ, where div(f_x) = ℓ·X.
pub fn miller_eval(ctx: &JacobianContext, x: &MumfordDivisor, ell: u64, e: &PointSum) -> Result<FieldElement, PairingError> {
    if e.degree() != 0 {
        return Err(PairingError::NotDegreeZero);
    }
    let (val, lx) = miller(ctx, x, ell, e)?;
    if !ctx.is_identity(&lx) {
        return Err(PairingError::NotTorsion);
    }
    Ok(val)
}

/// An affine degree-zero divisor in the class of y together with the
/// auxiliary class r: S₀ − R₀ where s = y + r and S₀, R₀ are the affine
/// parts of the normal forms, whose infinite parts agree.
fn affine_representative(ctx: &JacobianContext, y: &MumfordDivisor, rng: &mut SeededRng) -> (PointSum, MumfordDivisor) {
    // Rational points are few and Miller chains pass through most of them
    // over tiny fields, so prefer supports with no rational point.
    let mut fallback = None;
    for _ in 0..PREFER_TRIES {
        let r = ctx.random_with(rng);
        let s = ctx.add(y, &r);
        if s.degree() != r.degree() || s.n != r.n {
            continue;
        }
        let pick = (PointSum(vec![(s.u.clone(), s.v, 1), (r.u.clone(), r.v.clone(), -1)]), r);
        if off_field(ctx, &s.u) && off_field(ctx, &pick.1.u) {
            return pick;
        }
        fallback.get_or_insert(pick);
    }
    if let Some(pick) = fallback {
        return pick;
    }
    loop {
        let r = ctx.random_with(rng);
        let s = ctx.add(y, &r);
        if s.degree() == r.degree() && s.n == r.n {
            return (PointSum(vec![(s.u, s.v, 1), (r.u.clone(), r.v.clone(), -1)]), r);
        }
    }
}

/// u is an irreducible quadratic over the working field.
fn off_field(ctx: &JacobianContext, u: &UniPoly) -> bool {
    u.degree() == Some(2) && poly_roots(ctx.field(), u).is_ok_and(|r| r.is_empty())
}

fn is_torsion(ctx: &JacobianContext, x: &MumfordDivisor, ell: u64) -> bool {
    ctx.is_identity(&ctx.scalar_mul_u64(x, ell))
}

/// (|𝔽ˣ|)/ℓ, or MuEllNotInField.
fn final_exponent(k: &FieldContext, ell: u64) -> Result<BigUint, PairingError> {
    let n = k.size() - 1;
    if !n.is_multiple_of(ell) {
        return Err(PairingError::MuEllNotInField);
    }
    Ok(BigUint::from(n / ell))
}

/// ê(x, ȳ) = f_x(E_y)^{(|𝔽|−1)/ℓ} for x ∈ J(𝔽)[ℓ] and y ∈ J(𝔽), 𝔽 the
/// working field.
pub fn reduced_tate(
    ctx: &JacobianContext,
    x: &MumfordDivisor,
    y: &MumfordDivisor,
    ell: u64,
    seed: u64,
) -> Result<PairingValue, PairingError> {
    let k = &**ctx.field();
    let exp = final_exponent(k, ell)?;
    if !is_torsion(ctx, x, ell) {
        return Err(PairingError::NotTorsion);
    }
    let mut rng = SeededRng::new(seed);
    for _ in 0..RETRIES {
        let (e, _) = affine_representative(ctx, y, &mut rng);
        match miller_eval(ctx, x, ell, &e) {
            Ok(v) => return Ok(PairingValue { value: k.fe_pow_big(&v, &exp), ell }),
            Err(PairingError::SupportCollision) => continue,
            Err(err) => return Err(err),
        }
    }
    Err(PairingError::SupportCollision)
}

/// e(x, y) = F_x(E_y) / F_y(E_x) with div(F_x) = ℓ·E_x, div(F_y) = ℓ·E_y
/// for disjoint affine representatives E_x, E_y.
///
/// F_x is f_{ℓ,s}/f_{ℓ,r} with s = x + r: both Miller functions end at the
/// same class ℓ·s = ℓ·r, so their quotient has divisor ℓ(S − R).
pub fn weil_pairing(
    ctx: &JacobianContext,
    x: &MumfordDivisor,
    y: &MumfordDivisor,
    ell: u64,
    seed: u64,
) -> Result<PairingValue, PairingError> {
    let k = &**ctx.field();
    if !is_torsion(ctx, x, ell) || !is_torsion(ctx, y, ell) {
        return Err(PairingError::NotTorsion);
    }
    let mut rng = SeededRng::new(seed);
    let half = |d: &MumfordDivisor, r: &MumfordDivisor, e: &PointSum| -> Result<FieldElement, PairingError> {
        let s = ctx.add(d, r);
        let (fs, ls) = miller(ctx, &s, ell, e)?;
        let (fr, lr) = miller(ctx, r, ell, e)?;
        debug_assert_eq!(ls, lr);
        Ok(k.div(&fs, &fr).unwrap())
    };
    for _ in 0..RETRIES {
        let (ex, rx) = affine_representative(ctx, x, &mut rng);
        let (ey, ry) = affine_representative(ctx, y, &mut rng);
        let num = match half(x, &rx, &ey) {
            Ok(v) => v,
            Err(PairingError::SupportCollision) => continue,
            Err(e) => return Err(e),
        };
        let den = match half(y, &ry, &ex) {
            Ok(v) => v,
            Err(PairingError::SupportCollision) => continue,
            Err(e) => return Err(e),
        };
        let value = k.div(&num, &den).unwrap();
        if !k.is_one(&k.pow(&value, ell)) {
            return Err(PairingError::NotInMuEll);
        }
        return Ok(PairingValue { value, ell });
    }
    Err(PairingError::SupportCollision)
}

/// ê(x, ȳ)/ê(y, x̄), which is e(x, y)^{(|𝔽|−1)/ℓ}: a non-degenerate
/// pairing exactly when ℓ² ∤ |𝔽| − 1.
pub fn tate_ratio(
    ctx: &JacobianContext,
    x: &MumfordDivisor,
    y: &MumfordDivisor,
    ell: u64,
    seed: u64,
) -> Result<PairingValue, PairingError> {
    let k = &**ctx.field();
    let a = reduced_tate(ctx, x, y, ell, seed)?;
    let b = reduced_tate(ctx, y, x, ell, seed.wrapping_add(1))?;
    Ok(PairingValue { value: k.div(&a.value, &b.value).unwrap(), ell })
}

/// The first nonzero power of a fixed element of 𝔽ˣ landing in μ_ℓ.
pub fn mu_ell_generator(k: &FieldContext, ell: u64) -> Result<FieldElement, PairingError> {
    let exp = final_exponent(k, ell)?;
    Ok(k
        .elements()
        .skip(1)
        .map(|x| k.fe_pow_big(&x, &exp))
        .find(|z| !k.is_one(z))
        .expect("μ_ℓ is nontrivial"))
}

/// i in [0, ℓ) with ζ^i = w, by exhaustion.
pub fn dlog(k: &FieldContext, zeta: &FieldElement, w: &FieldElement, ell: u64) -> Option<u64> {
    let mut cur = k.one();
    for i in 0..ell {
        if cur == *w {
            return Some(i);
        }
        cur = k.mul(&cur, zeta);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nondegeneracy {
    /// Every nonzero element of the span pairs nontrivially with some
    /// generator; `witness` records one such pair for the first generator.
    Nondegenerate { witness: (MumfordDivisor, MumfordDivisor) },
    /// This nonzero element pairs trivially with the whole span.
    Degenerate { element: MumfordDivisor },
    /// The span is trivial.
    Empty,
}

impl Nondegeneracy {
    pub fn holds(&self) -> bool {
        matches!(self, Nondegeneracy::Nondegenerate { .. })
    }
}

/// Exhaustive non-degeneracy check of the Weil pairing on the span of
/// `gens`: every nonzero x is paired against each generator, which
/// suffices since e(x, ·) is a homomorphism.
pub fn nondegenerate_on(
    ctx: &JacobianContext,
    gens: &[MumfordDivisor],
    ell: u64,
    seed: u64,
) -> Result<Nondegeneracy, PairingError> {
    let k = &**ctx.field();
    let mut span = vec![ctx.identity()];
    for g in gens {
        let prev = std::mem::take(&mut span);
        for d in prev {
            let mut cur = d;
            for _ in 0..ell {
                span.push(cur.clone());
                cur = ctx.add(&cur, g);
            }
        }
    }
    let mut witness = None;
    let mut salt = seed;
    for x in span.iter().filter(|x| !ctx.is_identity(x)) {
        let mut partner = None;
        for g in gens {
            salt = salt.wrapping_add(1);
            if !k.is_one(&weil_pairing(ctx, x, g, ell, salt)?.value) {
                partner = Some(g.clone());
                break;
            }
        }
        match partner {
            None => return Ok(Nondegeneracy::Degenerate { element: x.clone() }),
            Some(g) => {
                witness.get_or_insert((x.clone(), g));
            }
        }
    }
    Ok(match witness {
        Some(witness) => Nondegeneracy::Nondegenerate { witness },
        None => Nondegeneracy::Empty,
    })
}

/// Matrix of discrete logs of e(gᵢ, gⱼ) to the base ζ.
pub fn weil_gram_matrix(
    ctx: &JacobianContext,
    gens: &[MumfordDivisor],
    ell: u64,
    zeta: &FieldElement,
    seed: u64,
) -> Result<Vec<Vec<u64>>, PairingError> {
    let k = &**ctx.field();
    let mut out = vec![vec![0u64; gens.len()]; gens.len()];
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            let v = weil_pairing(ctx, a, b, ell, seed.wrapping_add((i * gens.len() + j) as u64))?;
            out[i][j] = dlog(k, zeta, &v.value, ell).ok_or(PairingError::NotInMuEll)?;
        }
    }
    Ok(out)
}

/// Rank of a matrix over ℤ/ℓℤ.
pub fn rank_mod(mut a: Vec<Vec<u64>>, ell: u64) -> usize {
    let inv = |x: u64| pow_mod(x, ell - 2, ell);
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_multiple_of(ell)) else { continue };
        a.swap(rank, p);
        let iv = inv(a[rank][c] % ell);
        for x in a[rank].iter_mut() {
            *x = *x * iv % ell;
        }
        for r in 0..rows {
            if r != rank && !a[r][c].is_multiple_of(ell) {
                let f = a[r][c] % ell;
                for cc in 0..cols {
                    a[r][cc] = (a[r][cc] + ell * ell - f * a[rank][cc] % ell) % ell;
                }
            }
        }
        rank += 1;
    }
    rank
}
