use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::AlgebraError;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Full factorization by trial division. Fine for n up to ~10^14.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Trial division of |n| by all d <= bound. Returns the prime powers found
/// and the unfactored cofactor (1 when the factorization is complete).
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(u64, u32)>, BigUint) {
    let mut rest = n.magnitude().clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut d = 2u64;
    while d <= bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        if (&rest % &dd).is_zero() {
            let mut e = 0;
            while (&rest % &dd).is_zero() {
                rest /= &dd;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // whatever remains is prime when it is below bound^2
    if rest > BigUint::one() {
        let b = BigUint::from(bound);
        if rest <= &b * &b {
            out.push((rest.to_u64().expect("cofactor below bound^2"), 1));
            rest = BigUint::one();
        }
    }
    out.sort();
    (out, rest)
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    acc
}

/// Reduce a (possibly negative, possibly huge) integer into [0, n).
pub fn reduce_mod(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n)).to_u64().unwrap()
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Least k >= 1 with x^k = 1 (mod n), given the factorization of some
/// multiple `bound` of that order.
pub fn order_dividing(x: u64, n: u64, bound: u64, bound_factors: &[(u64, u32)]) -> u64 {
    let mut k = bound;
    for &(r, e) in bound_factors {
        for _ in 0..e {
            if k.is_multiple_of(r) && pow_mod(x, k / r, n) == 1 {
                k /= r;
            } else {
                break;
            }
        }
    }
    k
}

/// Multiplicative order of x modulo n.
pub fn mult_order_mod(x: &BigInt, n: u64) -> Result<u64, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::NotCoprime);
    }
    let xr = reduce_mod(x, n);
    if xr.gcd(&n) != 1 {
        return Err(AlgebraError::NotCoprime);
    }
    let phi = euler_phi(n);
    Ok(order_dividing(xr, n, phi, &factor_u64(phi)))
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Integer square root of a nonnegative big integer, if exact.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == num_bigint::Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_kernel(n: &BigInt) -> BigInt {
    let (factors, rest) = trial_factor(n, 1_000_000);
    let mut k = BigInt::from(rest);
    for (p, e) in factors {
        if e % 2 == 1 {
            k *= p;
        }
    }
    if n.sign() == num_bigint::Sign::Minus {
        -k
    } else {
        k
    }
}
