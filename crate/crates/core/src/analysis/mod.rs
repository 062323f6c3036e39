//! Symbolic torsion analysis from the Weil polynomial alone.

pub mod supersingular;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::ntheory::is_prime;
use crate::weil::{
    companion_kappa, embedding_degree, frobenius_power, is_unramified, jacobian_order, rational_factorization,
    FullEmbeddingDegree, Ramification, WeilError, WeilPolynomial,
};

pub use supersingular::{
    classify_supersingular, cor15_check, supersingular_report, CaseLabel, Congruence, SupersingularCase,
    SupersingularReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("ℓ divides q − 1; the rank theorems do not apply")]
    Thm6NotApplicable(Box<TorsionReport>),
    #[error("the group order is odd")]
    OrderOdd,
    #[error("characteristic 2")]
    EvenCharacteristic,
    #[error("congruence failed: {0}")]
    CongruenceFailure(String),
    #[error("ℓ is an excluded value for this case; only reduced claims hold")]
    EllExceptional(Box<SupersingularReport>),
    #[error("ℓ must exceed 3")]
    EllTooSmall,
    #[error(transparent)]
    Weil(#[from] WeilError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "cyclic")]
    Cyclic,
    #[serde(rename = "bicyclic")]
    Bicyclic,
    #[serde(rename = "full")]
    Full,
    #[serde(rename = "bounded-by-2")]
    BoundedBy2,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Shape {
    pub fn from_rank(r: u8) -> Shape {
        match r {
            0 => Shape::Trivial,
            1 => Shape::Cyclic,
            2 => Shape::Bicyclic,
            4 => Shape::Full,
            _ => Shape::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremApplied {
    #[serde(rename = "Thm6")]
    Thm6,
    #[serde(rename = "Thm7-case1")]
    Thm7Case1,
    #[serde(rename = "Thm7-case2")]
    Thm7Case2,
    #[serde(rename = "oracle-needed")]
    OracleNeeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub ell_divides_four_tau: bool,
    pub ell_divides_qm_minus_1: bool,
    pub unramified: Option<Ramification>,
    pub omega_integral: Option<bool>,
    /// Power index whose Weil number carried the rank-2 argument when the
    /// conclusion at m was obtained by descending to a divisor of m.
    pub descended_to: Option<u32>,
}

/// Symbolic description of J(𝔽_{Q^m})[ℓ], Q the field size of P.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub ell: u64,
    pub m: u32,
    /// Exact ℤ/ℓℤ-rank when decided.
    pub rank: Option<u8>,
    pub rank_bound: u8,
    pub shape: Shape,
    /// Embedding degree of Q modulo ℓ.
    pub k: u64,
    /// Least n divisible by m with J[ℓ] ⊆ J(𝔽_{Q^n}); for m = 1 this is the
    /// full embedding degree.
    pub kappa: FullEmbeddingDegree,
    pub theorem: TheoremApplied,
    pub hypotheses: Hypotheses,
}

fn divides(ell: u64, x: &BigInt) -> bool {
    (x % BigInt::from(ell)).is_zero()
}

/// Data of branch (b) at power index m: Some(unramified, ω ∈ ℤ) when P_m
/// has a single irreducible factor.
fn weil_number_data(pm: &WeilPolynomial, ell: u64) -> Result<Option<(Ramification, bool)>, WeilError> {
    let fac = rational_factorization(pm);
    if fac.len() != 1 {
        return Ok(None);
    }
    let g = &fac[0].0;
    Ok(Some((is_unramified(ell, g)?, g.degree() == Some(1))))
}

pub fn classify_torsion(p: &WeilPolynomial, ell: u64, m: u32) -> Result<TorsionReport, AnalysisError> {
    let q = p.field_size();
    if ell == 2 || !is_prime(ell) {
        return Err(AnalysisError::PreconditionViolated(format!("ℓ = {ell} is not an odd prime")));
    }
    if divides(ell, &q) {
        return Err(AnalysisError::PreconditionViolated("ℓ divides q".into()));
    }
    if !divides(ell, &jacobian_order(p)) {
        return Err(AnalysisError::PreconditionViolated("ℓ does not divide P(1)".into()));
    }
    if m == 0 {
        return Err(AnalysisError::PreconditionViolated("m must be at least 1".into()));
    }
    let k = embedding_degree(&q, ell)?;
    let pm = frobenius_power(p, m);
    let qm = pm.field_size();
    let ell_div_4tau = divides(ell, &pm.four_tau());
    let ell_div_qm1 = divides(ell, &(&qm - 1));
    let mut rep = TorsionReport {
        ell,
        m,
        rank: None,
        rank_bound: 4,
        shape: Shape::Inconclusive,
        k,
        kappa: companion_kappa(p, ell)?.lift(m as u64),
        theorem: TheoremApplied::OracleNeeded,
        hypotheses: Hypotheses {
            ell_divides_four_tau: ell_div_4tau,
            ell_divides_qm_minus_1: ell_div_qm1,
            unramified: None,
            omega_integral: None,
            descended_to: None,
        },
    };
    if divides(ell, &(&q - 1)) {
        return Err(AnalysisError::Thm6NotApplicable(Box::new(rep)));
    }
    if !ell_div_4tau {
        let r = if ell_div_qm1 { 2 } else { 1 };
        rep.rank = Some(r);
        rep.rank_bound = 2;
        rep.shape = Shape::from_rank(r);
        rep.theorem = TheoremApplied::Thm6;
        return Ok(rep);
    }
    let Some((unram, integral)) = weil_number_data(&pm, ell)? else {
        return Ok(rep);
    };
    rep.hypotheses.unramified = Some(unram);
    rep.hypotheses.omega_integral = Some(integral);
    if unram != Ramification::Yes {
        return Ok(rep);
    }
    let full = |mut rep: TorsionReport, theorem| {
        rep.rank = Some(4);
        rep.shape = Shape::Full;
        rep.theorem = theorem;
        rep.kappa = FullEmbeddingDegree::Exact(m as u64);
        rep
    };
    if integral {
        return Ok(full(rep, TheoremApplied::Thm7Case1));
    }
    if !ell_div_qm1 {
        let km = embedding_degree(&qm, ell)?;
        rep.rank = Some(2);
        rep.rank_bound = 2;
        rep.shape = Shape::Bicyclic;
        rep.theorem = TheoremApplied::Thm7Case2;
        rep.kappa = FullEmbeddingDegree::Exact(m as u64 * km);
        return Ok(rep);
    }
    // ω_m ∉ ℤ yet ℓ | Q^m − 1: the rank-2 conclusion cannot hold at m.
    // Descend to a divisor m0 where it does; then J[ℓ] is rational over
    // 𝔽_{Q^{m0·k0}} with k0 | m/m0, hence over 𝔽_{Q^m}.
    for m0 in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let p0 = frobenius_power(p, m0);
        if !divides(ell, &p0.four_tau()) || divides(ell, &(p0.field_size() - BigInt::one())) {
            continue;
        }
        if let Some((Ramification::Yes, false)) = weil_number_data(&p0, ell)? {
            rep.hypotheses.descended_to = Some(m0);
            return Ok(full(rep, TheoremApplied::Thm7Case2));
        }
    }
    Ok(rep)
}

/// Degree D with J[2] ⊆ J(𝔽_{Q^D}), from the parity of s for P_m.
pub fn two_torsion_field(p: &WeilPolynomial, m: u32) -> Result<u32, AnalysisError> {
    if p.p() == 2 {
        return Err(AnalysisError::EvenCharacteristic);
    }
    let pm = frobenius_power(p, m);
    if jacobian_order(&pm).is_odd() {
        return Err(AnalysisError::OrderOdd);
    }
    Ok(if pm.s().is_even() { 4 * m } else { 6 * m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cor10Certificate {
    pub ell: u64,
    pub k: u64,
    pub statement: String,
}

/// Hypotheses of the claim that the Weil pairing is non-degenerate on
/// J(𝔽_{q^k})[ℓ], k the embedding degree: ℓ odd, ℓ | P(1), ℓ ∤ q, ℓ ∤ q − 1.
///
/// The claim holds when `classify_torsion` at m = k settles the rank. It
/// can fail when ℓ | 4τ and ℓ is not unramified: Frobenius may then act on
/// J[ℓ] through Jordan blocks, and the pairing vanishes on J(𝔽_{q^k})[ℓ].
pub fn cor10_applicability(p: &WeilPolynomial, ell: u64) -> Option<Cor10Certificate> {
    let q = p.field_size();
    if ell == 2 || !is_prime(ell) || divides(ell, &q) || divides(ell, &(&q - 1)) {
        return None;
    }
    if !divides(ell, &jacobian_order(p)) {
        return None;
    }
    let k = embedding_degree(&q, ell).ok()?;
    Some(Cor10Certificate {
        ell,
        k,
        statement: format!("Weil pairing non-degenerate on J(F_{{{q}^{k}}})[{ell}] x J(F_{{{q}^{k}}})[{ell}]"),
    })
}
