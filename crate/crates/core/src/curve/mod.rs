//! Genus-2 curves y² = f(x) in odd characteristic: validation, point
//! counting, and the Jacobian group law.

pub mod jacobian;
pub mod rng;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::field::TABLE_CAP;
use crate::algebra::{field_create, is_squarefree, AlgebraError, Embedding, FieldContext, Poly, Ring, UniPoly};

pub use jacobian::{JacobianContext, MumfordDivisor, StepFunction};
pub use rng::SeededRng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("characteristic 2 is not supported for curve arithmetic")]
    EvenCharacteristic,
    #[error("f must be monic of degree 5 or have degree 6")]
    BadDegree,
    #[error("f is not squarefree")]
    Singular,
    #[error("field too large for this operation")]
    FieldTooLarge,
    #[error("group law needs a sextic model whose leading coefficient is a square")]
    ModelUnsupported,
    #[error("hint does not annihilate the divisor")]
    HintDoesNotAnnihilate,
    #[error("invalid curve description: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Quintic,
    Sextic,
}

#[derive(Clone, Debug)]
pub struct CurveModel {
    base: Arc<FieldContext>,
    kind: ModelKind,
    f: UniPoly,
}

impl PartialEq for CurveModel {
    fn eq(&self, o: &Self) -> bool {
        *self.base == *o.base && self.f == o.f
    }
}

impl CurveModel {
    pub fn new(base: Arc<FieldContext>, f: UniPoly) -> Result<Self, CurveError> {
        if base.p() == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        let kind = match f.degree() {
            Some(5) if f.is_monic(&*base) => ModelKind::Quintic,
            Some(6) => ModelKind::Sextic,
            _ => return Err(CurveError::BadDegree),
        };
        if !is_squarefree(&base, &f) {
            return Err(CurveError::Singular);
        }
        Ok(CurveModel { base, kind, f })
    }

    pub fn base(&self) -> &Arc<FieldContext> {
        &self.base
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn f(&self) -> &UniPoly {
        &self.f
    }

    /// Base field size q.
    pub fn q(&self) -> u64 {
        self.base.size()
    }

    /// Number of points over 𝔽_{q^m}, by the quadratic character of f(x).
    pub fn count_points(&self, m: u32) -> Result<u64, CurveError> {
        let big = (self.q() as u128).checked_pow(m).unwrap_or(u128::MAX);
        if big > TABLE_CAP as u128 {
            return Err(CurveError::FieldTooLarge);
        }
        let ext = field_create(self.base.p(), self.base.degree() * m)?;
        let emb = Embedding::new(&self.base, &ext)?;
        let f = emb.apply_poly(&self.f);
        let mut total: i64 = 0;
        for x in ext.elements() {
            total += 1 + ext.chi(&f.eval(&*ext, &x)) as i64;
        }
        total += match self.kind {
            ModelKind::Quintic => 1,
            ModelKind::Sextic => {
                if ext.is_square(f.lead().unwrap()) {
                    2
                } else {
                    0
                }
            }
        };
        Ok(total as u64)
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            p: self.base.p(),
            a: self.base.degree(),
            modulus: Some(self.base.modulus().iter().map(|&c| c as i64).collect()),
            model: self.kind,
            f: self
                .f
                .coeffs()
                .iter()
                .map(|c| self.base.to_coeffs(c).iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }

    /// Compact description, constant term first.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .f
            .coeffs()
            .iter()
            .map(|c| {
                let v = self.base.to_coeffs(c);
                if v.len() == 1 {
                    v[0].to_string()
                } else {
                    format!("{:?}", v)
                }
            })
            .collect();
        format!("y^2 = f(x), f = [{}] over GF({}^{})", parts.join(", "), self.base.p(), self.base.degree())
    }
}

/// Validate a curve given by coefficient vectors over 𝔽_p (constant term
/// first, each coefficient a length-a vector) in the canonical field.
pub fn curve_validate(p: u64, a: u32, coeffs: &[Vec<i64>]) -> Result<CurveModel, CurveError> {
    if p == 2 {
        return Err(CurveError::EvenCharacteristic);
    }
    let base = field_create(p, a)?;
    if coeffs.iter().any(|c| c.len() > a as usize) {
        return Err(CurveError::Invalid("coefficient vector longer than a".into()));
    }
    let f = Poly::new(&*base, coeffs.iter().map(|c| base.from_coeffs(c)).collect());
    CurveModel::new(base, f)
}

/// On-disk curve description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub p: u64,
    pub a: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
    pub model: ModelKind,
    pub f: Vec<Vec<i64>>,
}

impl CurveFile {
    /// Build the model; a non-canonical modulus is translated into the
    /// canonical field through the least root of that modulus.
    pub fn to_model(&self) -> Result<CurveModel, CurveError> {
        if self.p == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        let base = field_create(self.p, self.a)?;
        let coeffs: Vec<_> = match &self.modulus {
            Some(m) if m.iter().map(|&c| c.rem_euclid(self.p as i64) as u32).ne(base.modulus().iter().copied()) => {
                if m.len() != self.a as usize + 1 {
                    return Err(CurveError::Invalid("modulus must have degree a".into()));
                }
                let fp = field_create(self.p, 1)?;
                let mp = Poly::new(&*fp, m.iter().map(|&c| fp.from_i64(c)).collect());
                if !mp.is_monic(&*fp) || !crate::algebra::field::is_irreducible(&fp, &mp) {
                    return Err(CurveError::Invalid("modulus is not monic irreducible".into()));
                }
                let image = Poly::new(&*base, mp.coeffs().to_vec());
                let mut roots = base.poly_roots(&image)?;
                roots.sort_by_key(|r| base.lex_key(r));
                let alpha = roots[0];
                self.f
                    .iter()
                    .map(|c| {
                        c.iter().rev().fold(base.zero(), |acc, &ci| base.add(&base.mul(&acc, &alpha), &base.from_i64(ci)))
                    })
                    .collect()
            }
            _ => {
                if self.f.iter().any(|c| c.len() > self.a as usize) {
                    return Err(CurveError::Invalid("coefficient vector longer than a".into()));
                }
                self.f.iter().map(|c| base.from_coeffs(c)).collect()
            }
        };
        let model = CurveModel::new(base.clone(), Poly::new(&*base, coeffs))?;
        if model.kind != self.model {
            return Err(CurveError::Invalid("declared model does not match the degree of f".into()));
        }
        Ok(model)
    }
}
