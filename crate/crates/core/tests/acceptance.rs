//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use g2torsion::algebra::field::TABLE_CAP;
use g2torsion::algebra::ntheory::trial_factor;
use g2torsion::algebra::{field_create, poly_distinct_degree_factor, Field, Ring};
use g2torsion::analysis::*;
use g2torsion::cli::{cmd_example9, Mode, Request, EXIT_OK};
use g2torsion::curve::*;
use g2torsion::oracle::*;
use g2torsion::pairing::*;
use g2torsion::weil::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Instance {
    curve: CurveModel,
    weil: WeilPolynomial,
}

impl Instance {
    fn new(curve: CurveModel) -> Self {
        let weil = curve_weil_polynomial(&curve).unwrap();
        Instance { curve, weil }
    }

    fn q(&self) -> u64 {
        self.curve.q()
    }

    fn order(&self) -> BigInt {
        jacobian_order(&self.weil)
    }

    fn label(&self) -> String {
        self.curve.describe()
    }
}

fn example9() -> CurveModel {
    let f: Vec<Vec<i64>> = [1, 0, 2, 1, 2, 0, 1].iter().map(|&x| vec![x]).collect();
    curve_validate(3, 1, &f).unwrap()
}

/// One curve per Weil polynomial over 𝔽₃, first in search order.
fn f3_classes() -> Vec<Instance> {
    let f3 = field_create(3, 1).unwrap();
    let all = search_curves(&f3, &SearchTarget::Pair(&|_, _| true), usize::MAX).unwrap();
    let mut seen = BTreeMap::new();
    for c in all {
        let inst = Instance::new(c);
        seen.entry((inst.weil.s().clone(), inst.weil.t().clone())).or_insert(inst);
    }
    seen.into_values().collect()
}

/// Seeded random squarefree models over 𝔽_p, alternating quintic and
/// sextic shapes.
fn random_curves(p: u64, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let deg = if out.len() % 2 == 0 { 5 } else { 6 };
        let mut f: Vec<Vec<i64>> = (0..deg).map(|_| vec![rng.below(p) as i64]).collect();
        f.push(vec![1]);
        if let Ok(c) = curve_validate(p, 1, &f) {
            out.push(Instance::new(c));
        }
    }
    out
}

fn random_corpus() -> Vec<Instance> {
    let mut v = random_curves(5, 20, 11);
    v.extend(random_curves(7, 20, 13));
    v
}

fn odd_primes_dividing(n: &BigInt, bound: u64) -> Vec<u64> {
    trial_factor(n, bound).0.into_iter().map(|(p, _)| p).filter(|&p| p != 2 && p <= bound).collect()
}

fn divides(ell: u64, n: &BigInt) -> bool {
    (n % BigInt::from(ell)).is_zero()
}

fn pow_fits(q: u64, m: u32, cap: u64) -> bool {
    (q as u128).pow(m) <= cap as u128
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let env = cmd_example9(&Request { mode: Some(Mode::Example9), ..Default::default() });
    let elapsed = t0.elapsed();
    let checks = env.json["oracle"]["checks"].as_array().cloned().unwrap_or_default();
    let failed: Vec<_> = checks.iter().filter(|c| c["pass"] != true).map(|c| c["check"].to_string()).collect();
    ensure(env.exit == EXIT_OK && failed.is_empty(), || format!("exit {} failed checks {failed:?}", env.exit))?;
    ensure(env.json["oracle"]["structure"] == serde_json::json!([5, 5]), || "structure".into())?;
    ensure(env.json["oracle"]["rank"] == serde_json::json!([2, 2, 2, 4]), || "ranks".into())?;
    ensure(env.json["oracle"]["kappa"] == 4, || "kappa".into())?;
    ensure(env.json["pairing"]["nondegenerate"] == true, || "pairing".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} checks, {:.1}s", checks.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let corpus = random_corpus();
    let mut instances = 0;
    let mut curves_used = std::collections::BTreeSet::new();
    for (ci, inst) in corpus.iter().enumerate() {
        let q = inst.q();
        let ells: Vec<u64> =
            odd_primes_dividing(&inst.order(), 100).into_iter().filter(|&l| q % l != 0 && (q - 1) % l != 0).collect();
        for m in (1..).take_while(|&m| pow_fits(q, m, ENUMERATION_CAP)) {
            // τ belongs to P_m, the Frobenius polynomial over 𝔽_{q^m}
            let four_tau = frobenius_power(&inst.weil, m).four_tau();
            let eligible: Vec<u64> = ells.iter().copied().filter(|&l| !divides(l, &four_tau)).collect();
            if eligible.is_empty() {
                continue;
            }
            curves_used.insert(ci);
            let ctx = JacobianContext::new(&inst.curve, m).unwrap();
            for ell in eligible {
                let (rank, _) = ell_torsion_rank(&ctx, ell, 0).unwrap();
                let bicyclic_expected = (q.pow(m) - 1) % ell == 0;
                ensure(rank <= 2 && (rank == 2) == bicyclic_expected, || {
                    format!("{} ℓ={ell} m={m}: rank {rank}", inst.label())
                })?;
                let rep = classify_torsion(&inst.weil, ell, m).unwrap();
                ensure(rep.theorem == TheoremApplied::Thm6 && rep.rank == Some(rank), || {
                    format!("{} ℓ={ell} m={m}: symbolic {:?} vs {rank}", inst.label(), rep.rank)
                })?;
                instances += 1;
            }
        }
    }
    ensure(corpus.len() >= 30 && instances > 0, || format!("{} curves, {instances} instances", corpus.len()))?;
    Ok(format!(
        "{} curves ({} with eligible ℓ), {instances} instances, 0 counterexamples",
        corpus.len(),
        curves_used.len()
    ))
}

/// Field-size cap for the oracle measurements in the ℓ | 4τ criterion.
const MEASURE_CAP: u64 = 1 << 13;

fn criterion_3() -> Outcome {
    let mut corpus = vec![Instance::new(example9())];
    corpus.extend(f3_classes());
    corpus.extend(random_corpus());
    let mut checked = 0;
    let mut beyond_caps = 0;
    let mut ex9_seen = false;
    for inst in &corpus {
        let q = inst.q();
        let kcap = (1..).take_while(|&n| pow_fits(q, n, MEASURE_CAP)).last().unwrap_or(1) as u64;
        for ell in odd_primes_dividing(&inst.order(), 100).into_iter().filter(|&l| q % l != 0) {
            let mut measured_kappa = None;
            for m in 1..=4u32 {
                let Ok(rep) = classify_torsion(&inst.weil, ell, m) else { continue };
                if !matches!(rep.theorem, TheoremApplied::Thm7Case1 | TheoremApplied::Thm7Case2) {
                    continue;
                }
                if !pow_fits(q, m, MEASURE_CAP) {
                    beyond_caps += 1;
                    continue;
                }
                let ctx = JacobianContext::new(&inst.curve, m).unwrap();
                let (rank, _) = ell_torsion_rank(&ctx, ell, 0).unwrap();
                ensure(rep.rank == Some(rank), || {
                    format!("{} ℓ={ell} m={m}: symbolic {:?} oracle {rank}", inst.label(), rep.rank)
                })?;
                let kappa = measured_kappa
                    .get_or_insert_with(|| full_embedding_degree_measured(&inst.curve, ell, kcap, 0).map(|x| x.0));
                match (rep.kappa.exact(), kappa) {
                    (Some(sym), Ok(meas)) => {
                        let want = meas.lcm(&(m as u64));
                        ensure(sym == want, || format!("{} ℓ={ell} m={m}: κ {sym} vs {want}", inst.label()))?;
                    }
                    _ => {
                        beyond_caps += 1;
                        continue;
                    }
                }
                if inst.q() == 3 && inst.weil.s() == &BigInt::from(2) && inst.weil.t() == &BigInt::from(7) {
                    ex9_seen = true;
                }
                checked += 1;
            }
        }
    }
    ensure(checked > 0 && ex9_seen, || format!("{checked} instances, reference curve covered: {ex9_seen}"))?;
    Ok(format!("{checked} instances, 0 counterexamples ({beyond_caps} beyond oracle caps)"))
}

fn criterion_4() -> Outcome {
    let mut corpus = f3_classes();
    corpus.extend(random_corpus());
    let mut checked = 0;
    for inst in &corpus {
        let k = inst.curve.base();
        let degrees: Vec<usize> = poly_distinct_degree_factor(k, inst.curve.f()).unwrap().into_iter().map(|x| x.0).collect();
        for m in 1..=4u32 {
            let Ok(d) = two_torsion_field(&inst.weil, m) else { continue };
            ensure(d == 4 * m || d == 6 * m, || format!("D = {d}"))?;
            ensure(degrees.iter().all(|&e| (d as usize).is_multiple_of(e)), || {
                format!("{} m={m}: D={d}, factor degrees {degrees:?}", inst.label())
            })?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no even-order instances".into())?;
    Ok(format!("{checked} (curve, m) instances, 0 counterexamples"))
}

/// Every applicable instance is checked. Instances the rank theorems leave
/// to the oracle at m = k (ℓ | 4τ without unramified ℓ) can be degenerate:
/// with Frobenius ≡ Jordan blocks for 1 and q mod ℓ, Galois equivariance
/// forces ker(π − 1) ⊥ ker(π − q), and those two lines span J(𝔽_{q^k})[ℓ].
fn criterion_5() -> Outcome {
    let mut corpus = vec![Instance::new(example9())];
    corpus.extend(f3_classes());
    corpus.extend(random_corpus());
    let mut covered = 0;
    let mut uncovered = 0;
    let mut degenerate = Vec::new();
    for inst in &corpus {
        for ell in odd_primes_dividing(&inst.order(), 100) {
            let Some(cert) = cor10_applicability(&inst.weil, ell) else { continue };
            if !pow_fits(inst.q(), cert.k as u32, 81) {
                continue;
            }
            let ctx = JacobianContext::new(&inst.curve, cert.k as u32).unwrap();
            let basis = torsion_basis(&ctx, ell, 0).unwrap().basis;
            let verdict = nondegenerate_on(&ctx, &basis, ell, 0).map_err(|e| format!("{}: {e}", inst.label()))?;
            let theorem = classify_torsion(&inst.weil, ell, cert.k as u32).unwrap().theorem;
            let on_route = theorem != TheoremApplied::OracleNeeded;
            if on_route {
                covered += 1;
            } else {
                uncovered += 1;
            }
            if !verdict.holds() {
                ensure(!on_route, || format!("{} ℓ={ell}: degenerate on a {theorem:?} instance", inst.label()))?;
                degenerate.push(format!("(s,t)=({},{}) q={} ℓ={ell} rank {}", inst.weil.s(), inst.weil.t(), inst.q(), basis.len()));
            }
        }
    }
    ensure(covered >= 5, || format!("only {covered} instances covered by the rank theorems"))?;
    let summary = format!(
        "{} instances; {covered} with rank theorem at m = k all non-degenerate; {} of {uncovered} oracle-only instances degenerate",
        covered + uncovered,
        degenerate.len()
    );
    if degenerate.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}: {}", degenerate.join("; ")))
    }
}

fn criterion_6() -> Outcome {
    let mut cases = 0;
    let mut pairs = 0;
    for p in [2u64, 3, 5, 7, 13, 17] {
        for a in [1u32, 2] {
            let q = p.pow(a) as i64;
            let smax = 4 * (q as f64).sqrt().ceil() as i64;
            for s in -smax..=smax {
                for t in -3 * q..=3 * q {
                    let Some(case) = classify_supersingular(&BigInt::from(s), &BigInt::from(t), p, a) else { continue };
                    cases += 1;
                    let weil = WeilPolynomial::from_i64(q as u64, 1, s, t).unwrap();
                    let small = trial_factor(&case.order(), 10_000).0;
                    for (ell, _) in small.into_iter().filter(|&(l, _)| l != p && l <= 10_000) {
                        let tag = || format!("{} over {p}^{a}, ℓ={ell}", case.label);
                        let rep = match supersingular_report(&case, ell) {
                            Ok(r) => r,
                            Err(AnalysisError::EllExceptional(r)) => *r,
                            Err(e) => return Err(format!("{}: {e}", tag())),
                        };
                        ensure(rep.congruences.iter().all(|c| c.holds), tag)?;
                        let k = (1..).find(|&k| BigInt::from(q).modpow(&BigInt::from(k), &BigInt::from(ell)) == 1.into());
                        ensure(k == Some(rep.embedding_degree), tag)?;
                        if let Some(e) = rep.field_exponent {
                            ensure((e as u64).is_multiple_of(rep.embedding_degree), tag)?;
                            if !rep.reduced && ell != 2 {
                                // full ℓ-torsion over 𝔽_{q^e} forces ℓ⁴ | P_e(1)
                                let pe = jacobian_order(&frobenius_power(&weil, e));
                                ensure((&pe % BigInt::from(ell).pow(4)).is_zero(), || format!("{}: ℓ⁴ ∤ P_e(1)", tag()))?;
                            }
                        }
                        if ell > 3 {
                            let (e, r) = cor15_check(&case, ell).map_err(|e| format!("{}: {e}", tag()))?;
                            ensure(e <= 24 && r <= 2, tag)?;
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} cases on the grid, {pairs} (case, ℓ) pairs, 0 failures"))
}

fn criterion_7() -> Outcome {
    let mut corpus = vec![Instance::new(example9())];
    corpus.extend(f3_classes());
    corpus.extend(random_corpus());
    let mut checked = 0;
    for inst in &corpus {
        let q = inst.q();
        let ells = odd_primes_dividing(&inst.order(), 100);
        for m in (1..).take_while(|&m| pow_fits(q, m, ENUMERATION_CAP)) {
            let n = jacobian_order(&frobenius_power(&inst.weil, m));
            let full: Vec<u64> = ells.iter().copied().filter(|&l| q % l != 0 && divides(l.pow(4), &n)).collect();
            if full.is_empty() {
                continue;
            }
            let ctx = JacobianContext::new(&inst.curve, m).unwrap();
            for ell in full {
                let b = torsion_basis(&ctx, ell, 0).unwrap();
                if b.rank() != 4 {
                    continue;
                }
                for j in 1..=m {
                    let fm = frobenius_matrix(&ctx, ell, j, &b.basis).map_err(|e| e.to_string())?;
                    let pj = frobenius_power(&inst.weil, j);
                    let want: Vec<u64> = pj.coeffs().iter().map(|c| c.mod_floor(&BigInt::from(ell)).to_u64().unwrap()).collect();
                    let det = BigInt::from(q).modpow(&BigInt::from(2 * j), &BigInt::from(ell)).to_u64().unwrap();
                    ensure(fm.charpoly() == want && fm.det() == det, || {
                        format!("{} ℓ={ell} over degree {m}, power {j}", inst.label())
                    })?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked > 0, || "no full bases".into())?;
    Ok(format!("{checked} (basis, power) instances, 0 mismatches"))
}

fn field_axioms(p: u64, a: u32) -> Result<(), String> {
    let k = field_create(p, a).map_err(|e| e.to_string())?;
    let els: Vec<_> = k.elements().collect();
    ensure(els.len() as u64 == k.size(), || "element count".into())?;
    for x in &els {
        ensure(k.is_zero(&k.add(x, &k.neg(x))), || "additive inverse".into())?;
        if !k.is_zero(x) {
            ensure(k.is_one(&k.mul(x, &k.inv(x).unwrap())), || "inverse".into())?;
            ensure(k.is_one(&k.pow(x, k.size() - 1)), || "Fermat".into())?;
        }
        for y in els.iter().step_by(3) {
            ensure(k.mul(x, y) == k.mul(y, x) && k.add(x, y) == k.add(y, x), || "commutativity".into())?;
            for z in els.iter().step_by(7) {
                ensure(k.mul(&k.mul(x, y), z) == k.mul(x, &k.mul(y, z)), || "associativity".into())?;
                ensure(k.mul(x, &k.add(y, z)) == k.add(&k.mul(x, y), &k.mul(x, z)), || "distributivity".into())?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for (p, a) in [(2, 4), (3, 2), (3, 4), (5, 2), (7, 1), (13, 1)] {
        field_axioms(p, a)?;
    }
    parts.push("field axioms");

    let mut corpus = vec![Instance::new(example9())];
    corpus.extend(random_curves(5, 4, 21));
    corpus.extend(random_curves(7, 2, 23));
    for inst in &corpus {
        for m in 1..=2 {
            let ctx = JacobianContext::new(&inst.curve, m).unwrap();
            let all = ctx.enumerate().unwrap();
            let want = jacobian_order(&frobenius_power(&inst.weil, m));
            ensure(BigInt::from(all.len()) == want, || format!("{}: |J| over degree {m}", inst.label()))?;
            let id = ctx.identity();
            for seed in 0..20u64 {
                let (x, y, z) = (ctx.random(seed), ctx.random(seed + 100), ctx.random(seed + 200));
                ensure(ctx.add(&x, &id) == x && ctx.is_identity(&ctx.add(&x, &ctx.neg(&x))), || "identity/inverse".into())?;
                ensure(ctx.add(&x, &y) == ctx.add(&y, &x), || "commutativity".into())?;
                ensure(ctx.add(&ctx.add(&x, &y), &z) == ctx.add(&x, &ctx.add(&y, &z)), || "associativity".into())?;
                ensure(ctx.is_valid(&ctx.add(&x, &y)), || "closure".into())?;
            }
        }
    }
    parts.push("group axioms");
    parts.push("|J| = P_m(1)");

    let mut hw = corpus.iter().collect::<Vec<_>>();
    let classes = f3_classes();
    hw.extend(classes.iter());
    for inst in &hw {
        let q = inst.q();
        for m in 1..=4u32 {
            if !pow_fits(q, m, TABLE_CAP) {
                break;
            }
            let n = inst.curve.count_points(m).map_err(|e| e.to_string())? as f64;
            let qm = (q as f64).powi(m as i32);
            ensure((n - qm - 1.0).abs() <= 4.0 * qm.sqrt(), || format!("{}: Hasse-Weil at m={m}", inst.label()))?;
        }
        for (a, b) in [(1u32, 2u32), (2, 2), (2, 3), (3, 1)] {
            let lhs = frobenius_power(&frobenius_power(&inst.weil, a), b);
            ensure(lhs == frobenius_power(&inst.weil, a * b), || "frobenius_power composition".into())?;
        }
    }
    parts.push("Hasse-Weil bounds");
    parts.push("frobenius_power composition");

    let ctx = JacobianContext::new(&example9(), 4).unwrap();
    let k = ctx.field().clone();
    let b = torsion_basis(&ctx, 5, 0).unwrap().basis;
    let w = |x: &MumfordDivisor, y: &MumfordDivisor, s| weil_pairing(&ctx, x, y, 5, s).unwrap().value;
    for t in 0..5u64 {
        let x1 = ctx.add(&b[(t % 4) as usize], &ctx.scalar_mul_u64(&b[((t + 1) % 4) as usize], t + 1));
        let x2 = ctx.scalar_mul_u64(&b[((t + 2) % 4) as usize], 2);
        let y = ctx.add(&b[3], &b[(t % 3) as usize]);
        ensure(w(&ctx.add(&x1, &x2), &y, t) == k.mul(&w(&x1, &y, t + 1), &w(&x2, &y, t + 2)), || "bilinearity".into())?;
        ensure(k.is_one(&k.mul(&w(&x1, &y, t), &w(&y, &x1, t + 3))), || "anti-symmetry".into())?;
        let z = ctx.random(t + 40);
        let y2 = ctx.add(&y, &ctx.scalar_mul_u64(&z, 5));
        let r = ctx.random(t + 70);
        let base = reduced_tate(&ctx, &x1, &r, 5, t).unwrap();
        ensure(reduced_tate(&ctx, &x1, &ctx.add(&r, &ctx.scalar_mul_u64(&z, 5)), 5, t + 9).unwrap() == base, || {
            "representative independence".into()
        })?;
        let _ = y2;
    }
    parts.push("pairing laws");
    Ok(parts.join(", "))
}

/// Criteria whose failure is a reproduced counterexample to the claim
/// itself rather than to the implementation; see the decisions ledger.
const EXPECTED_FAILURES: [usize; 1] = [5];

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("reference curve over F3 end to end", criterion_1),
        ("rank equivalence when ℓ ∤ 4τ", criterion_2),
        ("rank and κ when ℓ | 4τ, unramified", criterion_3),
        ("2-torsion field degree", criterion_4),
        ("pairing non-degeneracy at the embedding degree", criterion_5),
        ("supersingular table grid", criterion_6),
        ("Frobenius matrix law", criterion_7),
        ("structural suites", criterion_8),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        let expected_fail = EXPECTED_FAILURES.contains(&n);
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!("criterion {n} PASS {name}: {detail} [{secs:.1}s]");
                if expected_fail {
                    unexpected.push(format!("criterion {n} passed but is recorded as failing"));
                }
            }
            Err(detail) => {
                println!("criterion {n} FAIL {name}: {detail} [{secs:.1}s]");
                if !expected_fail {
                    unexpected.push(format!("criterion {n}"));
                }
            }
        }
    }
    println!("{passed}/{} criteria pass", criteria.len());
    if !unexpected.is_empty() {
        println!("unexpected: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
