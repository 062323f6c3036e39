use g2torsion::algebra::intpoly::int_poly;
use g2torsion::algebra::ntheory::pow_mod;
use g2torsion::curve::{curve_validate, JacobianContext};
use g2torsion::weil::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn w(q: u64, s: i64, t: i64) -> WeilPolynomial {
    WeilPolynomial::from_i64(q, 1, s, t).unwrap()
}

fn ex9() -> WeilPolynomial {
    w(3, 2, 7)
}

fn st(p: &WeilPolynomial) -> (i64, i64) {
    (p.s().to_i64().unwrap(), p.t().to_i64().unwrap())
}

/// All (s, t) over q passing the real-root screen.
fn weil_pairs(q: u64) -> Vec<(i64, i64)> {
    let q = q as i64;
    let mut out = Vec::new();
    for s in -4 * (q as f64).sqrt().ceil() as i64..=4 * (q as f64).sqrt().ceil() as i64 {
        for t in -2 * q..=6 * q {
            if WeilPolynomial::from_i64(q as u64, 1, s, t).is_ok() {
                out.push((s, t));
            }
        }
    }
    out
}

#[test]
fn from_counts() {
    for q in [3u64, 5, 9] {
        assert_eq!(st(&weil_from_counts(q + 1, q * q + 1, q).unwrap()), (0, 0));
    }
    let p = weil_from_counts(6, 20, 3).unwrap();
    assert_eq!(p.coeffs().to_vec(), [9, 6, 7, 2, 1].map(BigInt::from).to_vec());
    assert_eq!(jacobian_order(&p), BigInt::from(25));
    assert_eq!(weil_from_counts(100, 20, 3).unwrap_err(), WeilError::CountsOutOfRange);
    assert_eq!(weil_from_counts(6, 21, 3).unwrap_err(), WeilError::NonIntegralT);
}

/// The sign convention M₁ = q + 1 + s is pinned by comparing P(1) with the
/// enumerated group order.
#[test]
fn sign_convention_matches_enumeration() {
    let curves = [
        curve_validate(3, 1, &[vec![1], vec![0], vec![0], vec![0], vec![0], vec![1]]).unwrap(),
        curve_validate(5, 1, &[vec![2], vec![1], vec![0], vec![3], vec![0], vec![1]]).unwrap(),
        curve_validate(7, 1, &[vec![3], vec![1], vec![0], vec![0], vec![0], vec![1]]).unwrap(),
        curve_validate(3, 1, &[vec![1], vec![0], vec![2], vec![1], vec![2], vec![0], vec![1]]).unwrap(),
    ];
    for c in &curves {
        let p = weil_from_counts(c.count_points(1).unwrap(), c.count_points(2).unwrap(), c.q()).unwrap();
        for m in 1..=2 {
            if c.q().pow(m) > 256 {
                continue;
            }
            let n = JacobianContext::new(c, m).unwrap().enumerate().unwrap().len();
            assert_eq!(jacobian_order(&frobenius_power(&p, m)), BigInt::from(n), "{}", c.describe());
        }
    }
}

#[test]
fn order_and_sigma_tau() {
    assert_eq!(jacobian_order(&ex9()), BigInt::from(25));
    assert_eq!(jacobian_order(&w(3, 0, 0)), BigInt::from(10));
    assert_eq!(jacobian_order(&w(3, 0, 3)), BigInt::from(13));
    assert_eq!(sigma_tau(&w(3, 0, 0)), (BigInt::from(0), BigInt::from(24)));
    assert_eq!(sigma_tau(&w(3, 0, 3)), (BigInt::from(0), BigInt::from(12)));
    assert_eq!(sigma_tau(&ex9()), (BigInt::from(2), BigInt::from(0)));
}

/// Independent oracle: P_m from power sums of the roots via Newton's
/// identities, e₁ = p_m and e₂ = (p_m² − p_{2m}) / 2.
fn newton_power(q: i128, s: i128, t: i128, m: u32) -> (i128, i128) {
    let e = [-s, t, -s * q, q * q];
    let n = 2 * m as usize;
    let mut ps = vec![0i128; n + 1];
    for k in 1..=n {
        let mut acc = 0i128;
        for i in 1..k.min(4) + 1 {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let term = if i == k { e[i - 1] * k as i128 } else { e[i - 1] * ps[k - i] };
            acc += sign * term;
        }
        ps[k] = acc;
    }
    let pm = ps[m as usize];
    (-pm, (pm * pm - ps[n]) / 2)
}

#[test]
fn frobenius_power_examples() {
    assert_eq!(frobenius_power(&ex9(), 1), ex9());
    assert_eq!(st(&frobenius_power(&ex9(), 2)), (10, 43));
    let p4 = frobenius_power(&ex9(), 4);
    assert_eq!(st(&p4), (-14, 211));
    assert_eq!(p4.m(), 4);
    assert_eq!(p4.coeffs()[0], BigInt::from(81 * 81));
    assert_eq!(rational_factorization(&p4), vec![(int_poly(&[81, -7, 1]), 2)]);
}

#[test]
fn reduction_mod_ell() {
    let f = reduce_and_factor_mod(&ex9(), 5).unwrap();
    assert_eq!(f.root_multiset(), vec![1, 1, 3, 3]);
    assert!(f.rest.is_empty());
    assert_eq!(reduce_and_factor_mod(&w(3, 0, 0), 5).unwrap().root_multiset(), vec![1, 2, 3, 4]);
    let f = reduce_and_factor_mod(&w(3, 0, 3), 13).unwrap();
    let roots = f.root_multiset();
    assert_eq!(roots.len(), 4);
    for &r in &roots {
        let image = 3 * pow_mod(r, 11, 13) % 13;
        assert!(roots.contains(&image));
    }
    assert_eq!(reduce_and_factor_mod(&ex9(), 3).unwrap_err(), WeilError::EllDividesQ);
    assert_eq!(reduce_and_factor_mod(&ex9(), 9).unwrap_err(), WeilError::NotPrime(9));
}

#[test]
fn factorization_over_q() {
    assert_eq!(rational_factorization(&ex9()), vec![(int_poly(&[3, 1, 1]), 2)]);
    assert_eq!(rational_factorization(&w(3, 0, 0)), vec![(int_poly(&[9, 0, 0, 0, 1]), 1)]);
    assert_eq!(rational_factorization(&w(3, 0, -6)), vec![(int_poly(&[-3, 0, 1]), 2)]);
    // (X − 3)²(X + 3)² over q = 9
    assert_eq!(
        rational_factorization(&w(9, 0, -18)),
        vec![(int_poly(&[-3, 1]), 2), (int_poly(&[3, 1]), 2)]
    );
}

#[test]
fn weil_number_descriptions() {
    let d = weil_numbers(&ex9());
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].kind, WeilNumberKind::Quadratic);
    assert_eq!(d[0].minpoly, int_poly(&[3, 1, 1]));
    assert_eq!(d[0].discriminant, BigInt::from(-11));
    let d = weil_numbers(&w(9, 0, -18));
    assert!(d.iter().any(|x| x.kind == WeilNumberKind::RationalInteger));
    let d = weil_numbers(&w(3, 0, 0));
    assert_eq!(d[0].kind, WeilNumberKind::Quartic);
}

#[test]
fn ramification() {
    let g = int_poly(&[3, 1, 1]);
    assert_eq!(is_unramified(5, &g).unwrap(), Ramification::Yes);
    assert_eq!(is_unramified(11, &g).unwrap(), Ramification::No);
    assert_eq!(is_unramified(2, &int_poly(&[25, 0, 1])).unwrap(), Ramification::No);
    assert_eq!(is_unramified(3, &int_poly(&[-1, 0, 1])).unwrap_err(), WeilError::Reducible);
    // disc(X²−7X+81) = −275 = −11·5², field discriminant −11
    assert_eq!(is_unramified(5, &int_poly(&[81, -7, 1])).unwrap(), Ramification::Yes);
    assert_eq!(is_unramified(7, &int_poly(&[-5, 1])).unwrap(), Ramification::Yes);
}

#[test]
fn embedding_degrees() {
    assert_eq!(embedding_degree(&BigInt::from(3), 5).unwrap(), 4);
    assert_eq!(embedding_degree(&BigInt::from(7), 3).unwrap(), 1);
    assert_eq!(embedding_degree(&BigInt::from(3), 13).unwrap(), 3);
    assert_eq!(embedding_degree(&BigInt::from(9), 3).unwrap_err(), WeilError::EllDividesQ);
}

/// Independent oracle: order of the companion matrix mod ℓ by iterating
/// matrix powers.
fn companion_order_brute(p: &WeilPolynomial, ell: u64) -> u64 {
    let l = ell as i128;
    let c: Vec<i128> = p.coeffs().iter().map(|x| (x % BigInt::from(ell)).to_i128().unwrap().rem_euclid(l)).collect();
    let mut comp = [[0i128; 4]; 4];
    for i in 1..4 {
        comp[i][i - 1] = 1;
    }
    for i in 0..4 {
        comp[i][3] = (l - c[i]) % l;
    }
    let id = {
        let mut m = [[0i128; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        m
    };
    let mut cur = comp;
    let mut k = 1u64;
    while cur != id {
        let mut next = [[0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|r| cur[i][r] * comp[r][j]).sum::<i128>() % l;
            }
        }
        cur = next;
        k += 1;
    }
    k
}

#[test]
fn symbolic_kappa_examples() {
    assert_eq!(symbolic_full_embedding_degree(&w(3, 0, 0), 5).unwrap(), FullEmbeddingDegree::Exact(4));
    assert_eq!(symbolic_full_embedding_degree(&ex9(), 5).unwrap(), FullEmbeddingDegree::Exact(4));
    assert_eq!(symbolic_full_embedding_degree(&w(3, 0, 3), 13).unwrap(), FullEmbeddingDegree::Exact(6));
    assert_eq!(companion_order_brute(&w(3, 0, 3), 13), 6);
    assert_eq!(symbolic_full_embedding_degree(&ex9(), 7).unwrap_err(), WeilError::EllDoesNotDivideOrder);
}

#[test]
fn symbolic_kappa_grid() {
    for q in [3u64, 5, 7, 9, 11] {
        for (s, t) in weil_pairs(q) {
            let p = w(q, s, t);
            let n = jacobian_order(&p).to_u64().unwrap();
            for ell in (3..=97u64).filter(|&l| g2torsion::algebra::ntheory::is_prime(l)) {
                if !n.is_multiple_of(ell) || q % ell == 0 {
                    continue;
                }
                let k = embedding_degree(&BigInt::from(q), ell).unwrap();
                let kappa = symbolic_full_embedding_degree(&p, ell).unwrap();
                let brute = companion_order_brute(&p, ell);
                for v in kappa.values() {
                    assert_eq!(v % k, 0, "q={q} s={s} t={t} ell={ell}");
                    assert_eq!(brute % v, 0);
                }
                if reduce_and_factor_mod(&p, ell).unwrap().is_squarefree() {
                    assert_eq!(kappa, FullEmbeddingDegree::Exact(brute));
                }
            }
        }
    }
}

/// Whenever ℓ | 4τ and ℓ | P_m(1), P_m ≡ (X − 1)²(X − Q)² mod ℓ.
#[test]
fn double_root_shape_on_tau_branch() {
    let mut hits = 0;
    for q in [3u64, 5, 7, 9] {
        for (s, t) in weil_pairs(q) {
            let p = w(q, s, t);
            for m in 1..=3 {
                let pm = frobenius_power(&p, m);
                let n = jacobian_order(&pm);
                let qm = pm.field_size();
                for ell in [3u64, 5, 7, 11, 13] {
                    let l = BigInt::from(ell);
                    if (&qm % &l) == BigInt::from(0) || (&n % &l) != BigInt::from(0) || (pm.four_tau() % &l) != BigInt::from(0) {
                        continue;
                    }
                    hits += 1;
                    let qr = (&qm % &l).to_u64().unwrap();
                    let mut expect = vec![1, 1, qr, qr];
                    expect.sort();
                    assert_eq!(reduce_and_factor_mod(&pm, ell).unwrap().root_multiset(), expect);
                }
            }
        }
    }
    assert!(hits > 10);
}

fn weil_strategy() -> impl Strategy<Value = WeilPolynomial> {
    prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 25, 27]).prop_flat_map(|q| {
        let pairs = weil_pairs(q);
        prop::sample::select(pairs).prop_map(move |(s, t)| w(q, s, t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn frobenius_power_composes(p in weil_strategy(), m in 1u32..=4, k in 1u32..=4) {
        prop_assert_eq!(frobenius_power(&frobenius_power(&p, m), k), frobenius_power(&p, m * k));
        let (s, t) = newton_power(p.q() as i128, p.s().to_i128().unwrap(), p.t().to_i128().unwrap(), m);
        let pm = frobenius_power(&p, m);
        prop_assert_eq!((pm.s().to_i128().unwrap(), pm.t().to_i128().unwrap()), (s, t));
    }

    #[test]
    fn factorization_reconstructs(p in weil_strategy(), m in 1u32..=3) {
        let pm = frobenius_power(&p, m);
        let fac = rational_factorization(&pm);
        let mut prod = int_poly(&[1]);
        for (g, e) in &fac {
            for _ in 0..*e {
                prod = prod.mul(&g2torsion::algebra::Integers, g);
            }
            // each factor is itself a product of Weil roots: |root|² = Q
            let d = g.degree().unwrap();
            let c0 = g.coeff(&g2torsion::algebra::Integers, 0);
            let qm = pm.field_size();
            let norm = qm.pow(d as u32);
            prop_assert_eq!(&c0 * &c0, norm);
        }
        prop_assert_eq!(prod, pm.poly());
    }

    #[test]
    fn mod_roots_closed_under_pairing(p in weil_strategy(), ell in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23])) {
        prop_assume!(p.q() % ell != 0);
        let f = reduce_and_factor_mod(&p, ell).unwrap();
        let roots = f.root_multiset();
        let q = p.q() % ell;
        let mut images: Vec<u64> = roots.iter().map(|&r| q * pow_mod(r, ell - 2, ell) % ell).collect();
        images.sort();
        prop_assert_eq!(images, roots);
    }
}
