//! Exact arithmetic: prime and extension fields, polynomials over them,
//! integer polynomials and small integer matrices.

pub mod field;
pub mod intpoly;
pub mod ntheory;
pub mod poly;
pub mod ring;

use thiserror::Error;

pub use field::{embed_subfield, field_create, Embedding, FieldContext, FieldElement, QuadExt};
pub use intpoly::{IntPoly, Integers};
pub use ntheory::mult_order_mod;
pub use poly::Poly;
pub use ring::{Field, Ring};

pub type UniPoly = Poly<FieldElement>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..=12")]
    DegreeOutOfRange(u32),
    #[error("field too large")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("source field is not a subfield of the target")]
    NotASubfield,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("arguments are not coprime")]
    NotCoprime,
}

pub fn poly_gcd(ctx: &FieldContext, f: &UniPoly, g: &UniPoly) -> Result<UniPoly, AlgebraError> {
    if f.is_zero() && g.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    Ok(f.gcd(ctx, g))
}

pub fn is_squarefree(ctx: &FieldContext, f: &UniPoly) -> bool {
    !f.is_zero() && f.gcd(ctx, &f.derivative(ctx)).degree() == Some(0)
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// (d, product of the irreducible factors of degree d), d increasing.
pub fn poly_distinct_degree_factor(
    ctx: &FieldContext,
    f: &UniPoly,
) -> Result<Vec<(usize, UniPoly)>, AlgebraError> {
    if !is_squarefree(ctx, f) {
        return Err(AlgebraError::NotSquarefree);
    }
    let mut rest = f.monic(ctx);
    let x = Poly::x(ctx);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(ctx, ctx.size(), &rest);
        let g = h.sub(ctx, &x).gcd(ctx, &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(ctx, &g).0;
            h = h.rem(ctx, &rest);
            out.push((d, g));
        }
        d += 1;
    }
    if let Some(k) = rest.degree().filter(|&k| k > 0) {
        out.push((k, rest));
    }
    Ok(out)
}

pub fn poly_roots(ctx: &FieldContext, f: &UniPoly) -> Result<Vec<FieldElement>, AlgebraError> {
    ctx.poly_roots(f)
}
