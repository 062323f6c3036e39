//! The nine supersingular (s, t) patterns and the torsion facts attached
//! to each.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{AnalysisError, Shape};
use crate::algebra::ntheory::{exact_sqrt, is_prime};
use crate::weil::embedding_degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 9] = [
        CaseLabel::I,
        CaseLabel::II,
        CaseLabel::III,
        CaseLabel::IV,
        CaseLabel::V,
        CaseLabel::VI,
        CaseLabel::VII,
        CaseLabel::VIII,
        CaseLabel::IX,
    ];

    /// Degree of the extension over which J[ℓ] becomes rational.
    pub fn field_exponent(self) -> u32 {
        match self {
            CaseLabel::I => 4,
            CaseLabel::II | CaseLabel::III => 6,
            CaseLabel::IV | CaseLabel::V => 10,
            CaseLabel::VI => 24,
            CaseLabel::VII | CaseLabel::VIII => 2,
            CaseLabel::IX => 3,
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            CaseLabel::I => "a odd, p != 2; or a even, p != 1 mod 8",
            CaseLabel::II => "a odd",
            CaseLabel::III => "a odd, p != 3; or a even, p != 1 mod 12",
            CaseLabel::IV => "a even, p != 1 mod 5",
            CaseLabel::V => "a odd, p = 5",
            CaseLabel::VI => "a odd, p = 2",
            CaseLabel::VII => "a odd",
            CaseLabel::VIII => "a even, p = 1 mod 4",
            CaseLabel::IX => "a even, p = 1 mod 3",
        }
    }

    fn side_condition(self, p: u64, a: u32) -> bool {
        let odd = a % 2 == 1;
        match self {
            CaseLabel::I => (odd && p != 2) || (!odd && p % 8 != 1),
            CaseLabel::II | CaseLabel::VII => odd,
            CaseLabel::III => (odd && p != 3) || (!odd && p % 12 != 1),
            CaseLabel::IV => !odd && p % 5 != 1,
            CaseLabel::V => odd && p == 5,
            CaseLabel::VI => odd && p == 2,
            CaseLabel::VIII => !odd && p % 4 == 1,
            CaseLabel::IX => !odd && p % 3 == 1,
        }
    }

    /// (|s|, t) pattern for q, or None when its radicand is not a square.
    fn pattern(self, q: &BigInt) -> Option<(BigInt, BigInt)> {
        let zero = BigInt::zero();
        Some(match self {
            CaseLabel::I => (zero, BigInt::zero()),
            CaseLabel::II => (zero, q.clone()),
            CaseLabel::III => (zero, -q),
            CaseLabel::IV => (exact_sqrt(q)?, q.clone()),
            CaseLabel::V => (exact_sqrt(&(q * 5))?, q * 3),
            CaseLabel::VI => (exact_sqrt(&(q * 2))?, q.clone()),
            CaseLabel::VII => (zero, q * -2),
            CaseLabel::VIII => (zero, q * 2),
            CaseLabel::IX => (exact_sqrt(q)? * 2, q * 3),
        })
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersingularCase {
    pub label: CaseLabel,
    pub s: BigInt,
    pub t: BigInt,
    pub p: u64,
    pub a: u32,
    pub condition: &'static str,
}

impl SupersingularCase {
    pub fn q(&self) -> BigInt {
        BigInt::from(self.p).pow(self.a)
    }

    /// P(1) = 1 + s + t + sq + q².
    pub fn order(&self) -> BigInt {
        let q = self.q();
        BigInt::one() + &self.s + &self.t + &self.s * &q + &q * &q
    }
}

/// The unique row of the table matching (s, t) over 𝔽_{p^a}, if any.
pub fn classify_supersingular(s: &BigInt, t: &BigInt, p: u64, a: u32) -> Option<SupersingularCase> {
    if !is_prime(p) || a == 0 {
        return None;
    }
    let q = BigInt::from(p).pow(a);
    CaseLabel::ALL.into_iter().find_map(|label| {
        let (sa, tt) = label.pattern(&q)?;
        (s.abs() == sa && *t == tt && label.side_condition(p, a)).then(|| SupersingularCase {
            label,
            s: s.clone(),
            t: t.clone(),
            p,
            a,
            condition: label.condition(),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersingularReport {
    pub case: CaseLabel,
    pub q: BigInt,
    pub ell: u64,
    pub congruences: Vec<Congruence>,
    /// J[ℓ] ⊆ J(𝔽_{q^e}) for this e.
    pub field_exponent: Option<u32>,
    /// Shape of J(𝔽_q)[ℓ] when claimed.
    pub shape: Option<Shape>,
    /// Whether the whole group J(𝔽_q) is claimed cyclic.
    pub group_cyclic: bool,
    pub embedding_degree: u64,
    /// Set when ℓ is excluded by the case and only part of the claims remain.
    pub reduced: bool,
}

/// ±q^e ≡ 1 (mod ℓ), or its negation when `holds_expected` is false.
fn congruence(q: &BigInt, ell: u64, neg: bool, e: u32, expect_one: bool) -> Congruence {
    let l = BigInt::from(ell);
    let mut v = q.modpow(&BigInt::from(e), &l);
    if neg {
        v = (&l - v) % &l;
    }
    let is_one = v == BigInt::one() % &l;
    let lhs = match (neg, e) {
        (false, 1) => "q".to_string(),
        (true, 1) => "-q".to_string(),
        (false, e) => format!("q^{e}"),
        (true, e) => format!("-q^{e}"),
    };
    let rel = if expect_one { "≡" } else { "≢" };
    Congruence { statement: format!("{lhs} {rel} 1 (mod {ell})"), holds: is_one == expect_one }
}

/// Congruences and torsion claims for a table row and a prime ℓ | P(1).
/// Excluded values of ℓ yield `EllExceptional` carrying the claims that
/// survive; a failed congruence is `CongruenceFailure`.
pub fn supersingular_report(case: &SupersingularCase, ell: u64) -> Result<SupersingularReport, AnalysisError> {
    let q = case.q();
    if !is_prime(ell) {
        return Err(AnalysisError::PreconditionViolated(format!("{ell} is not prime")));
    }
    if (&q % BigInt::from(ell)).is_zero() {
        return Err(AnalysisError::PreconditionViolated("ℓ divides q".into()));
    }
    if !(case.order() % BigInt::from(ell)).is_zero() {
        return Err(AnalysisError::PreconditionViolated("ℓ does not divide P(1)".into()));
    }
    let c = |neg, e, one| congruence(&q, ell, neg, e, one);
    let label = case.label;
    let mut reduced = false;
    let mut exponent = Some(label.field_exponent());
    let mut group_cyclic = false;
    let (congruences, shape) = match label {
        CaseLabel::I => {
            reduced = ell == 2;
            (vec![c(true, 2, true), c(false, 4, true)], (ell != 2).then_some(Shape::Cyclic))
        }
        CaseLabel::II => {
            group_cyclic = true;
            let mut v = vec![c(false, 3, true)];
            if ell != 3 {
                v.push(c(false, 1, false));
            } else {
                reduced = true;
            }
            (v, Some(Shape::Cyclic))
        }
        CaseLabel::III => {
            reduced = ell == 3;
            (vec![c(true, 3, true), c(false, 6, true)], (ell != 3).then_some(Shape::Cyclic))
        }
        CaseLabel::IV | CaseLabel::V => {
            group_cyclic = true;
            (vec![c(false, 1, false), c(false, 5, true)], Some(Shape::Cyclic))
        }
        CaseLabel::VI => {
            group_cyclic = true;
            (vec![c(true, 6, true), c(false, 12, true)], Some(Shape::Cyclic))
        }
        CaseLabel::VII => {
            reduced = ell == 2;
            (vec![c(false, 1, true)], (ell != 2).then_some(Shape::Bicyclic))
        }
        CaseLabel::VIII => {
            reduced = ell == 2;
            (vec![c(true, 1, true), c(false, 2, true)], (ell != 2).then_some(Shape::Bicyclic))
        }
        CaseLabel::IX => {
            if ell == 3 {
                reduced = true;
                exponent = None;
                (vec![], None)
            } else {
                (vec![c(false, 1, false), c(false, 3, true)], Some(Shape::Bicyclic))
            }
        }
    };
    let report = SupersingularReport {
        case: label,
        q: q.clone(),
        ell,
        congruences,
        field_exponent: exponent,
        shape,
        group_cyclic,
        embedding_degree: embedding_degree(&q, ell)?,
        reduced,
    };
    if let Some(bad) = report.congruences.iter().find(|c| !c.holds) {
        return Err(AnalysisError::CongruenceFailure(bad.statement.clone()));
    }
    if reduced {
        return Err(AnalysisError::EllExceptional(Box::new(report)));
    }
    Ok(report)
}

/// For ℓ > 3: (full-torsion field exponent, rank bound of J(𝔽_q)[ℓ]).
pub fn cor15_check(case: &SupersingularCase, ell: u64) -> Result<(u32, u32), AnalysisError> {
    if ell <= 3 {
        return Err(AnalysisError::EllTooSmall);
    }
    let rep = supersingular_report(case, ell)?;
    let e = rep.field_exponent.expect("exponent present for ℓ > 3");
    assert!(e <= 24, "field exponent above 24");
    assert!(matches!(rep.shape, Some(Shape::Cyclic | Shape::Bicyclic)));
    Ok((e, 2))
}
