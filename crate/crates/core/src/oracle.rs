//! Brute-force ground truth: group structure by enumeration, ℓ-torsion
//! bases, the Frobenius matrix mod ℓ, measured full embedding degree and
//! exhaustive curve search.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::intpoly::{charpoly, det_bigint, Integers, Matrix};
use crate::algebra::ntheory::factor_u64;
use crate::algebra::{field_create, AlgebraError, Embedding, FieldContext, FieldElement, Poly, Ring};
use crate::curve::{CurveError, CurveModel, JacobianContext, MumfordDivisor, SeededRng};
use crate::weil::{embedding_degree, frobenius_power, jacobian_order, weil_from_counts, WeilError, WeilPolynomial};

/// Working fields up to this size are enumerated.
pub const ENUMERATION_CAP: u64 = 256;
/// Largest ℓ-Sylow subgroup the sampling mode closes exactly.
const SYLOW_CAP: u64 = 1 << 18;
/// Largest span the Frobenius-matrix coordinate table holds.
const SPAN_CAP: u64 = 1 << 22;
/// Consecutive samples without span growth before sampling stops.
const QUIET_SAMPLES: u32 = 64;
/// Largest base field for exhaustive search.
pub const SEARCH_CAP: u64 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("field too large for enumeration")]
    FieldTooLarge,
    #[error("no full torsion up to extension degree {0}")]
    ExceedsCap(u64),
    #[error("basis does not span a Frobenius-invariant subgroup")]
    BasisNotInvariant,
    #[error("span too large to tabulate")]
    SpanTooLarge,
    #[error("field too large for exhaustive curve search")]
    FieldTooLargeForSearch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

impl From<AlgebraError> for OracleError {
    fn from(e: AlgebraError) -> Self {
        OracleError::Curve(CurveError::from(e))
    }
}

/// Invariant factors d₁ | d₂ | … of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub invariants: Vec<u64>,
}

impl GroupStructure {
    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Exponents of the ℓ-primary part, largest first.
    pub fn primary_exponents(&self, ell: u64) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .invariants
            .iter()
            .map(|&d| {
                let mut d = d;
                let mut e = 0;
                while d % ell == 0 {
                    d /= ell;
                    e += 1;
                }
                e
            })
            .filter(|&e| e > 0)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    /// Every class of the group was listed.
    Enumeration,
    /// Sampling closed the whole ℓ-Sylow subgroup.
    Exact,
    /// Sampling stopped after a run of samples without span growth.
    Statistical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionBasis {
    pub ell: u64,
    pub basis: Vec<MumfordDivisor>,
    pub mode: RankMode,
}

impl TorsionBasis {
    pub fn rank(&self) -> u8 {
        self.basis.len() as u8
    }
}

/// Weil polynomial of a curve over its base field, from two point counts.
pub fn curve_weil_polynomial(curve: &CurveModel) -> Result<WeilPolynomial, OracleError> {
    Ok(weil_from_counts(curve.count_points(1)?, curve.count_points(2)?, curve.q())?)
}

/// Order of the Jacobian over the working field of `ctx`.
pub fn working_order(ctx: &JacobianContext) -> Result<BigInt, OracleError> {
    let p = curve_weil_polynomial(ctx.curve())?;
    Ok(jacobian_order(&frobenius_power(&p, ctx.m())))
}

fn check_enumerable(ctx: &JacobianContext) -> Result<(), OracleError> {
    if ctx.field().size() > ENUMERATION_CAP {
        return Err(OracleError::FieldTooLarge);
    }
    Ok(())
}

/// Invariant factors of J(𝔽_{q^m}) from a full listing, reading off each
/// primary part from the sizes of its ℓⁱ-torsion subgroups.
pub fn group_structure(ctx: &JacobianContext) -> Result<GroupStructure, OracleError> {
    check_enumerable(ctx)?;
    let all = ctx.enumerate()?;
    Ok(structure_of(ctx, &all))
}

fn structure_of(ctx: &JacobianContext, all: &[MumfordDivisor]) -> GroupStructure {
    let n = all.len() as u64;
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for (ell, v) in factor_u64(n) {
        let pv = ell.pow(v);
        let cof = BigInt::from(n / pv);
        // exponent_counts[e] = number of classes whose ℓ-primary part has order ℓ^e
        let mut exponent_counts = vec![0u64; v as usize + 1];
        for d in all {
            let mut y = ctx.scalar_mul(d, &cof);
            let mut e = 0;
            while !ctx.is_identity(&y) {
                y = ctx.scalar_mul_u64(&y, ell);
                e += 1;
            }
            exponent_counts[e] += 1;
        }
        // log_ℓ |G[ℓ^i]| for i = 0..v
        let mut cum = 0;
        let logs: Vec<u32> = exponent_counts
            .iter()
            .map(|c| {
                cum += c;
                ilog(cum / (n / pv), ell)
            })
            .collect();
        // r[i] = number of cyclic factors of exponent > i
        let r: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let width = r.first().copied().unwrap_or(0);
        let exps = (1..=width).map(|j| r.iter().filter(|&&x| x >= j).count() as u32).collect();
        primary.push((ell, exps));
    }
    // the j-th largest invariant factor takes the j-th largest exponent of
    // every prime
    let width = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut inv = vec![1u64; width];
    for (ell, exps) in &primary {
        for (j, &e) in exps.iter().enumerate() {
            inv[j] *= ell.pow(e);
        }
    }
    inv.reverse();
    GroupStructure { invariants: inv }
}

fn ilog(mut x: u64, b: u64) -> u32 {
    let mut e = 0;
    while x > 1 {
        debug_assert_eq!(x % b, 0);
        x /= b;
        e += 1;
    }
    e
}

/// A subgroup listed explicitly.
struct Span {
    elems: Vec<MumfordDivisor>,
    set: HashSet<MumfordDivisor>,
}

impl Span {
    fn trivial(ctx: &JacobianContext) -> Self {
        let id = ctx.identity();
        Span { elems: vec![id.clone()], set: HashSet::from([id]) }
    }

    fn contains(&self, d: &MumfordDivisor) -> bool {
        self.set.contains(d)
    }

    /// Adjoin g; returns the index of the old span in the new one.
    fn adjoin(&mut self, ctx: &JacobianContext, g: &MumfordDivisor, cap: u64) -> Result<u64, OracleError> {
        let mut multiples = Vec::new();
        let mut cur = g.clone();
        while !self.contains(&cur) {
            multiples.push(cur.clone());
            if (self.elems.len() as u64) * (multiples.len() as u64 + 1) > cap {
                return Err(OracleError::SpanTooLarge);
            }
            cur = ctx.add(&cur, g);
        }
        let old = self.elems.clone();
        for m in &multiples {
            for e in &old {
                let s = ctx.add(e, m);
                self.set.insert(s.clone());
                self.elems.push(s);
            }
        }
        Ok(multiples.len() as u64 + 1)
    }
}

fn ell_torsion_of(ctx: &JacobianContext, ell: u64, elems: &[MumfordDivisor]) -> Vec<MumfordDivisor> {
    elems.iter().filter(|d| ctx.is_identity(&ctx.scalar_mul_u64(d, ell))).cloned().collect()
}

/// Greedy basis of the span of `candidates`, all assumed ℓ-torsion.
fn greedy_basis(ctx: &JacobianContext, candidates: &[MumfordDivisor]) -> Result<Vec<MumfordDivisor>, OracleError> {
    let mut span = Span::trivial(ctx);
    let mut basis = Vec::new();
    for c in candidates {
        if !span.contains(c) {
            span.adjoin(ctx, c, u64::MAX)?;
            basis.push(c.clone());
        }
    }
    Ok(basis)
}

/// Basis of J(𝔽_{q^m})[ℓ] from an explicit list of all classes.
pub fn torsion_basis_in(ctx: &JacobianContext, ell: u64, all: &[MumfordDivisor]) -> Result<Vec<MumfordDivisor>, OracleError> {
    greedy_basis(ctx, &ell_torsion_of(ctx, ell, all))
}

/// Basis of J(𝔽_{q^m})[ℓ]: by enumeration for working fields of size at
/// most 256, otherwise by sampling cofactor multiples of random classes.
pub fn torsion_basis(ctx: &JacobianContext, ell: u64, seed: u64) -> Result<TorsionBasis, OracleError> {
    if !crate::algebra::ntheory::is_prime(ell) {
        return Err(OracleError::NotPrime(ell));
    }
    if ctx.field().size() <= ENUMERATION_CAP {
        let all = ctx.enumerate()?;
        return Ok(TorsionBasis { ell, basis: torsion_basis_in(ctx, ell, &all)?, mode: RankMode::Enumeration });
    }
    torsion_basis_sampled(ctx, ell, seed)
}

/// Sampling-mode basis, whatever the field size.
pub fn torsion_basis_sampled(ctx: &JacobianContext, ell: u64, seed: u64) -> Result<TorsionBasis, OracleError> {
    let n = working_order(ctx)?;
    let l = BigInt::from(ell);
    let mut cof = n.clone();
    let mut sylow = BigInt::one();
    while (&cof % &l).is_zero() {
        cof /= &l;
        sylow *= &l;
    }
    if sylow.is_one() {
        return Ok(TorsionBasis { ell, basis: vec![], mode: RankMode::Exact });
    }
    let mut rng = SeededRng::new(seed);
    let mut quiet = 0;
    match sylow.to_u64().filter(|&s| s <= SYLOW_CAP) {
        Some(sylow) => {
            // close the whole Sylow subgroup, then read off its ℓ-torsion
            let mut span = Span::trivial(ctx);
            while (span.elems.len() as u64) < sylow && quiet < QUIET_SAMPLES {
                let x = ctx.scalar_mul(&ctx.random_with(&mut rng), &cof);
                if span.contains(&x) {
                    quiet += 1;
                } else {
                    span.adjoin(ctx, &x, sylow)?;
                    quiet = 0;
                }
            }
            let mode = if span.elems.len() as u64 == sylow { RankMode::Exact } else { RankMode::Statistical };
            let tors = ell_torsion_of(ctx, ell, &span.elems);
            Ok(TorsionBasis { ell, basis: greedy_basis(ctx, &tors)?, mode })
        }
        None => {
            // project each sample onto J[ℓ] through its last nonzero ℓ-power
            let mut span = Span::trivial(ctx);
            let mut basis = Vec::new();
            while quiet < QUIET_SAMPLES && basis.len() < 4 {
                let mut x = ctx.scalar_mul(&ctx.random_with(&mut rng), &cof);
                if ctx.is_identity(&x) {
                    quiet += 1;
                    continue;
                }
                loop {
                    let y = ctx.scalar_mul_u64(&x, ell);
                    if ctx.is_identity(&y) {
                        break;
                    }
                    x = y;
                }
                if span.contains(&x) {
                    quiet += 1;
                } else {
                    span.adjoin(ctx, &x, u64::MAX)?;
                    basis.push(x);
                    quiet = 0;
                }
            }
            let mode = if basis.len() == 4 { RankMode::Exact } else { RankMode::Statistical };
            Ok(TorsionBasis { ell, basis, mode })
        }
    }
}

/// log_ℓ |J(𝔽_{q^m})[ℓ]| together with how it was measured.
pub fn ell_torsion_rank(ctx: &JacobianContext, ell: u64, seed: u64) -> Result<(u8, RankMode), OracleError> {
    let b = torsion_basis(ctx, ell, seed)?;
    Ok((b.rank(), b.mode))
}

/// Matrix of the q^m-power Frobenius on the span of `basis` over ℤ/ℓℤ;
/// column j holds the coordinates of φ(basis[j]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusMatrix {
    pub ell: u64,
    pub rows: Vec<Vec<u64>>,
}

impl FrobeniusMatrix {
    fn as_bigint(&self) -> Matrix<BigInt> {
        self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Characteristic polynomial mod ℓ, constant term first.
    pub fn charpoly(&self) -> Vec<u64> {
        let l = BigInt::from(self.ell);
        charpoly(&Integers, &self.as_bigint())
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&l).to_u64().unwrap())
            .collect()
    }

    pub fn det(&self) -> u64 {
        if self.rows.is_empty() {
            return 1 % self.ell;
        }
        det_bigint(&self.as_bigint()).mod_floor(&BigInt::from(self.ell)).to_u64().unwrap()
    }

    /// Eigenvalues in 𝔽_ℓ with algebraic multiplicity, ascending.
    pub fn eigenvalues(&self) -> Vec<u64> {
        let cp = self.charpoly();
        let l = self.ell;
        let mut poly: Vec<u64> = cp;
        let mut out = Vec::new();
        for r in 0..l {
            loop {
                let (q, rem) = synthetic_div(&poly, r, l);
                if rem != 0 || poly.len() <= 1 {
                    break;
                }
                out.push(r);
                poly = q;
            }
        }
        out
    }
}

fn synthetic_div(p: &[u64], r: u64, l: u64) -> (Vec<u64>, u64) {
    if p.len() <= 1 {
        return (vec![], p.first().copied().unwrap_or(0));
    }
    let d = p.len() - 1;
    let mut q = vec![0u64; d];
    let mut acc = 0u64;
    for i in (0..=d).rev() {
        acc = (acc * r + p[i]) % l;
        if i > 0 {
            q[i - 1] = acc;
        }
    }
    (q, acc)
}

/// Coordinates of every element in the span of an independent ℓ-torsion
/// family.
pub fn span_coordinates(
    ctx: &JacobianContext,
    ell: u64,
    basis: &[MumfordDivisor],
) -> Result<HashMap<MumfordDivisor, Vec<u64>>, OracleError> {
    let size = (ell as u128).pow(basis.len() as u32);
    if size > SPAN_CAP as u128 {
        return Err(OracleError::SpanTooLarge);
    }
    let mut table = vec![(ctx.identity(), vec![0u64; basis.len()])];
    for (j, b) in basis.iter().enumerate() {
        let prev = std::mem::take(&mut table);
        for (d, c) in prev {
            let mut cur = d;
            for a in 0..ell {
                let mut cc = c.clone();
                cc[j] = a;
                table.push((cur.clone(), cc));
                cur = ctx.add(&cur, b);
            }
        }
    }
    let map: HashMap<_, _> = table.into_iter().collect();
    if map.len() as u128 != size {
        return Err(OracleError::BasisNotInvariant);
    }
    Ok(map)
}

/// Matrix of the q^m-Frobenius (q the curve's base field) on the span of
/// `basis`, found by looking images up in the tabulated span.
pub fn frobenius_matrix(
    ctx: &JacobianContext,
    ell: u64,
    m: u32,
    basis: &[MumfordDivisor],
) -> Result<FrobeniusMatrix, OracleError> {
    let coords = span_coordinates(ctx, ell, basis)?;
    let r = basis.len();
    let mut rows = vec![vec![0u64; r]; r];
    for (j, b) in basis.iter().enumerate() {
        let img = ctx.frobenius(b, m);
        let c = coords.get(&img).ok_or(OracleError::BasisNotInvariant)?;
        for i in 0..r {
            rows[i][j] = c[i];
        }
    }
    Ok(FrobeniusMatrix { ell, rows })
}

/// Least κ ≤ cap with J[ℓ] ⊆ J(𝔽_{q^κ}), trying multiples of the embedding
/// degree and skipping extensions whose order is not divisible by ℓ⁴.
pub fn full_embedding_degree_measured(
    curve: &CurveModel,
    ell: u64,
    cap: u64,
    seed: u64,
) -> Result<(u64, RankMode), OracleError> {
    let p = curve_weil_polynomial(curve)?;
    let k = embedding_degree(&BigInt::from(curve.q()), ell)?;
    let l4 = BigInt::from(ell).pow(4);
    for n in (k..=cap).step_by(k as usize) {
        if !(jacobian_order(&frobenius_power(&p, n as u32)) % &l4).is_zero() {
            continue;
        }
        let ctx = match JacobianContext::new(curve, n as u32) {
            Ok(c) => c,
            Err(CurveError::Algebra(AlgebraError::FieldTooLarge | AlgebraError::DegreeOutOfRange(_))) => {
                return Err(OracleError::ExceedsCap(n - 1))
            }
            Err(e) => return Err(e.into()),
        };
        let (rank, mode) = ell_torsion_rank(&ctx, ell, seed)?;
        if rank == 4 {
            return Ok((n, mode));
        }
    }
    Err(OracleError::ExceedsCap(cap))
}

/// What a curve search looks for.
pub enum SearchTarget<'a> {
    Weil(WeilPolynomial),
    Pair(&'a dyn Fn(i64, i64) -> bool),
}

/// Point counter for many curves over one base field.
struct Counter {
    base: Arc<FieldContext>,
    ext: Arc<FieldContext>,
    emb: Embedding,
    chi1: Vec<i8>,
    chi2: Vec<i8>,
}

impl Counter {
    fn new(base: &Arc<FieldContext>) -> Result<Self, OracleError> {
        let ext = field_create(base.p(), base.degree() * 2)?;
        let emb = Embedding::new(base, &ext)?;
        let chi1 = base.elements().map(|x| base.chi(&x) as i8).collect();
        let chi2 = ext.elements().map(|x| ext.chi(&x) as i8).collect();
        Ok(Counter { base: base.clone(), ext, emb, chi1, chi2 })
    }

    fn count(k: &FieldContext, chi: &[i8], f: &Poly<FieldElement>, sextic: bool) -> u64 {
        let mut total: i64 = k.size() as i64;
        for x in k.elements() {
            total += chi[f.eval(k, &x).0 as usize] as i64;
        }
        total += if sextic { 1 + chi[f.lead().unwrap().0 as usize] as i64 } else { 1 };
        total as u64
    }

    fn m1(&self, f: &Poly<FieldElement>, sextic: bool) -> u64 {
        Self::count(&self.base, &self.chi1, f, sextic)
    }

    fn m2(&self, f: &Poly<FieldElement>, sextic: bool) -> u64 {
        Self::count(&self.ext, &self.chi2, &self.emb.apply_poly(f), sextic)
    }
}

/// Exhaustive search over monic quintics, then sextics with leading
/// coefficient 1, then sextics with the least non-square leading
/// coefficient; each family in lexicographic coefficient order.
pub fn search_curves(base: &Arc<FieldContext>, target: &SearchTarget, limit: usize) -> Result<Vec<CurveModel>, OracleError> {
    let q = base.size();
    if q > SEARCH_CAP || base.p() == 2 {
        return Err(OracleError::FieldTooLargeForSearch);
    }
    let counter = Counter::new(base)?;
    let k = &**base;
    let nonsq = k.elements().find(|x| !k.is_zero(x) && !k.is_square(x)).unwrap();
    let mut by_lex: Vec<FieldElement> = k.elements().collect();
    by_lex.sort_by_key(|x| k.lex_key(x));
    let mut out = Vec::new();
    for (lead, low) in [(k.one(), 5usize), (k.one(), 6), (nonsq, 6)] {
        let sextic = low == 6;
        let total = q.pow(low as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(low + 1);
            // most significant coefficient varies slowest: the constant term
            let mut r = idx;
            let mut digits = vec![0u64; low];
            for d in digits.iter_mut().rev() {
                *d = r % q;
                r /= q;
            }
            for &d in &digits {
                c.push(by_lex[d as usize]);
            }
            c.push(lead);
            let f = Poly::new(k, c);
            let m1 = counter.m1(&f, sextic);
            let s = m1 as i64 - q as i64 - 1;
            if let SearchTarget::Weil(w) = target {
                if BigInt::from(s) != *w.s() {
                    continue;
                }
            }
            let m2 = counter.m2(&f, sextic);
            let qi = q as i64;
            let num = m2 as i64 - qi * qi - 1 + s * s;
            if num % 2 != 0 {
                continue;
            }
            let t = num / 2;
            let hit = match target {
                SearchTarget::Weil(w) => BigInt::from(t) == *w.t(),
                SearchTarget::Pair(pred) => pred(s, t),
            };
            if !hit {
                continue;
            }
            if let Ok(model) = CurveModel::new(counter.base.clone(), f) {
                out.push(model);
                if out.len() >= limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}
