//! Discrete logarithms in the cyclic group `(Z/p^k)^*` by Pohlig–Hellman,
//! with baby-step giant-step inside each prime-order layer.

use std::collections::HashMap;

use crate::arith::{self, mod_inv, mod_mul, mod_pow};
use crate::error::{Error, Precondition, Result};

/// `x` in `[0, p^(k-1)(p-1))` with `g^x = t mod p^k`.
pub fn dlog(t: u64, g: u64, p: u64, k: u32) -> Result<u64> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Precondition::NotOddPrime(p).into());
    }
    if k == 0 {
        return Err(Error::OutOfDomain("exponent k must be at least 1".into()));
    }
    let m = p.pow(k);
    if t.is_multiple_of(p) {
        return Err(Error::NotAUnit);
    }
    let n = arith::euler_phi_prime_power(p, k);
    let (t, g) = (t % m, g % m);
    if arith::multiplicative_order(g, m, n) != Some(n) {
        return Err(Precondition::NotPrimitiveRoot { g, p }.into());
    }
    let mut x = 0u64;
    let mut modulus = 1u64;
    for (q, e) in arith::factorize(n) {
        let qe = q.pow(e);
        let gi = mod_pow(g, n / qe, m);
        let hi = mod_pow(t, n / qe, m);
        let gi_inv = mod_inv(gi, m).ok_or(Error::NotAUnit)?;
        let gamma = mod_pow(gi, qe / q, m);
        let mut xi = 0u64;
        let mut qj = 1u64;
        for j in 0..e {
            let reduced = mod_mul(mod_pow(gi_inv, xi, m), hi, m);
            let hj = mod_pow(reduced, q.pow(e - 1 - j), m);
            let d = bsgs(gamma, hj, q, m).ok_or_else(|| {
                Error::Internal(format!("no discrete log of {t} base {g} mod {m}"))
            })?;
            xi += d * qj;
            qj *= q;
        }
        x = crt(x, modulus, xi, qe);
        modulus *= qe;
    }
    if mod_pow(g, x, m) != t {
        return Err(Error::Internal(format!(
            "discrete log check failed for {t} base {g} mod {m}"
        )));
    }
    Ok(x)
}

/// `x < order` with `base^x = target mod m`, `base` of the given order.
fn bsgs(base: u64, target: u64, order: u64, m: u64) -> Option<u64> {
    let s = arith::isqrt(order) + 1;
    let mut baby = HashMap::with_capacity(s as usize);
    let mut cur = 1u64;
    for j in 0..s {
        baby.entry(cur).or_insert(j);
        cur = mod_mul(cur, base, m);
    }
    let giant = mod_inv(mod_pow(base, s, m), m)?;
    let mut gamma = target;
    for i in 0..=s {
        if let Some(&j) = baby.get(&gamma) {
            let x = i * s + j;
            if x < order {
                return Some(x);
            }
        }
        gamma = mod_mul(gamma, giant, m);
    }
    None
}

fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    // x = a mod m, x = b mod n, gcd(m, n) = 1
    let inv = mod_inv(m % n, n).unwrap_or(0);
    let diff = (b + n - a % n) % n;
    a + m * mod_mul(diff, inv, n)
}
