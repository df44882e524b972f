//! Small machine-integer number theory helpers shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
pub fn residue(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(residue(x, m))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Trial-division factorisation, ascending primes with multiplicity.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
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

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factorize(n) {
        let len = out.len();
        let mut pw = 1;
        for _ in 0..e {
            pw *= q;
            for i in 0..len {
                out.push(out[i] * pw);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Order of `a` in `(Z/m)^*`, given a multiple `group_order` of that order.
pub fn multiplicative_order(a: u64, m: u64, group_order: u64) -> Option<u64> {
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut t = group_order;
    for (q, _) in factorize(group_order) {
        while t.is_multiple_of(q) && mod_pow(a, t / q, m) == 1 {
            t /= q;
        }
    }
    Some(t)
}

pub fn euler_phi_prime_power(p: u64, n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        p.pow(n - 1) * (p - 1)
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt(n as u64);
        r * r == n as u64
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// True iff `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        is_squarefree(d.unsigned_abs())
    } else if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        (r == 2 || r == 3) && is_squarefree(q.unsigned_abs())
    } else {
        false
    }
}

/// Exponent of `p` in a nonzero big integer.
pub fn ord_p(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        x = q;
        e += 1;
    }
}

/// Sign of `r + s*sqrt(d)` for `d > 0` not a square.
pub fn sign_of_surd(r: &BigInt, s: &BigInt, d: &BigInt) -> i32 {
    use std::cmp::Ordering;
    let sr = r.signum();
    let ss = s.signum();
    if ss.is_zero() {
        return sign_to_i32(&sr);
    }
    if sr == ss || sr.is_zero() {
        return sign_to_i32(&ss);
    }
    // opposite signs: compare r^2 with s^2 d
    let lhs = r * r;
    let rhs = s * s * d;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sign_to_i32(&sr),
        Ordering::Less => sign_to_i32(&ss),
        Ordering::Equal => 0,
    }
}

fn sign_to_i32(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
