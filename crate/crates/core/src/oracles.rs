//! Independent cross-checks: Kronecker symbols, class numbers by reduced
//! binary quadratic forms, and `L(0, chi) = -B_{1,chi}` by direct summation.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{self, isqrt};
use crate::cyclo::{CharacterTable, CycloNumber};
use crate::error::{Error, Precondition, Result};

/// Kronecker symbol `(a | n)`.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a | n) for odd positive n
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Quadratic character `(disc | .)` of a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCharacter {
    pub disc: i64,
}

impl QuadCharacter {
    pub fn new(disc: i64) -> Result<Self> {
        if !arith::is_fundamental_discriminant(disc) {
            return Err(Error::NotFundamental(disc));
        }
        Ok(Self { disc })
    }

    pub fn eval(&self, m: i64) -> i32 {
        kronecker_symbol(self.disc, m)
    }

    pub fn conductor(&self) -> u64 {
        self.disc.unsigned_abs()
    }
}

/// `D = D1 * D2` into two negative field discriminants, `-D1` an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusSplit {
    pub d1: i64,
    pub d2: i64,
}

/// Writes a fundamental discriminant as a product of prime discriminants
/// `-4, 8, -8, (-1)^((q-1)/2) q`.
pub fn prime_discriminants(d: i64) -> Result<Vec<i64>> {
    if !arith::is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let mut out = Vec::new();
    let mut odd_part = 1i64;
    for (q, _) in arith::factorize(d.unsigned_abs()) {
        if q == 2 {
            continue;
        }
        let q = q as i64;
        let pd = if q % 4 == 1 { q } else { -q };
        odd_part *= pd;
        out.push(pd);
    }
    if d % 4 == 0 {
        let rest = d / odd_part;
        out.insert(0, rest);
    }
    Ok(out)
}

/// Genus factorisation of a real quadratic discriminant whose class number is
/// one and which is divisible by a prime `3 mod 4`.
pub fn genus_split(d: i64) -> Result<GenusSplit> {
    let parts = prime_discriminants(d)?;
    if d <= 0 {
        return Err(Error::OutOfDomain(format!(
            "{d} is not a real quadratic discriminant"
        )));
    }
    if !parts.iter().any(|&x| x < 0 && x % 4 != 0) {
        return Err(Precondition::NoPrimeThreeModFour(d).into());
    }
    if parts.len() != 2 || parts.iter().any(|&x| x > 0) {
        return Err(Precondition::NoGenusSplit(d).into());
    }
    let (a, b) = (parts[0], parts[1]);
    // D1 the odd prime of largest absolute value
    let (d1, d2) = if a % 4 == 0 || (b % 4 != 0 && b.abs() > a.abs()) {
        (b, a)
    } else {
        (a, b)
    };
    Ok(GenusSplit { d1, d2 })
}

/// Class number of a negative fundamental discriminant by counting reduced
/// forms `(a, b, c)`, `|b| <= a <= c`, `b >= 0` if `|b| = a` or `a = c`.
pub fn imaginary_class_number(disc: i64) -> Result<u64> {
    if disc >= 0 || !arith::is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let n = -disc;
    let mut h = 0;
    let a_max = isqrt((n / 3) as u64) as i64;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += 1;
        }
    }
    Ok(h)
}

type Form = (i64, i64, i64);

fn is_reduced_indefinite(a: i64, b: i64, d: i64) -> bool {
    // sqrt(D) - b < 2|a| < sqrt(D) + b, with 0 < b < sqrt(D)
    let two_a = 2 * a.abs();
    let lower = (two_a + b) * (two_a + b) > d;
    let upper = two_a - b <= 0 || (two_a - b) * (two_a - b) < d;
    lower && upper
}

/// Reduction operator on a reduced indefinite form.
fn rho(f: Form, d: i64, sqrt_floor: i64) -> Form {
    let (_, b, c) = f;
    let two_c = 2 * c.abs();
    // r = -b mod 2|c| with sqrt(D) - 2|c| < r < sqrt(D)
    let base = (-b).rem_euclid(two_c);
    // largest r = base (mod 2|c|) with r <= floor(sqrt D)
    let r = base + ((sqrt_floor - base).div_euclid(two_c)) * two_c;
    (c, r, (r * r - d) / (4 * c))
}

/// Narrow and wide class numbers of the real quadratic field of
/// discriminant `d`, from cycles of reduced indefinite forms.
pub fn real_class_numbers(d: i64) -> Result<(u64, u64)> {
    if d <= 0 || !arith::is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let s = isqrt(d as u64) as i64;
    let mut forms = Vec::new();
    let mut b = s;
    while b > 0 {
        if (b * b - d) % 4 == 0 {
            let ac = (b * b - d) / 4; // negative
            let n = -ac;
            for a in 1..=n {
                if n % a != 0 {
                    continue;
                }
                for a in [a, -a] {
                    if is_reduced_indefinite(a, b, d) {
                        forms.push((a, b, ac / a));
                    }
                }
            }
        }
        b -= 1;
    }
    let mut seen: HashSet<Form> = HashSet::new();
    let mut cycles = 0u64;
    let mut principal_has_minus_one = false;
    let principal_b = forms
        .iter()
        .filter(|f| f.0 == 1)
        .map(|f| f.1)
        .max()
        .ok_or_else(|| Error::Internal(format!("no principal reduced form for {d}")))?;
    let principal = (1, principal_b, (principal_b * principal_b - d) / 4);
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut cur = f;
        let mut contains_principal = false;
        let mut contains_minus_one = false;
        loop {
            seen.insert(cur);
            contains_principal |= cur == principal;
            contains_minus_one |= cur.0 == -1;
            cur = rho(cur, d, s);
            if cur == f {
                break;
            }
            if !is_reduced_indefinite(cur.0, cur.1, d) {
                return Err(Error::Internal(format!(
                    "rho left the reduced forms at {cur:?}"
                )));
            }
        }
        if contains_principal {
            principal_has_minus_one = contains_minus_one;
        }
    }
    // a unit of norm -1 exists iff the principal cycle meets a form (-1, b, c)
    let wide = if principal_has_minus_one {
        cycles
    } else {
        cycles / 2
    };
    Ok((cycles, wide))
}

pub fn real_class_number_is_one(d: i64) -> Result<bool> {
    Ok(real_class_numbers(d)?.1 == 1)
}

/// Checks Assumption A for `d` and returns the genus split.
pub fn check_assumption_a(d: i64) -> Result<GenusSplit> {
    if d <= 0 || !arith::is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let (_, h) = real_class_numbers(d)?;
    if h != 1 {
        return Err(Precondition::ClassNumberNotOne { d, h }.into());
    }
    genus_split(d)
}

/// `L(0, eps) = -(1/f) sum_{a=1}^{f} eps(a) a` for the quadratic character of
/// discriminant `disc`.
pub fn bernoulli_l0(disc: i64) -> Result<BigRational> {
    let chi = QuadCharacter::new(disc)?;
    let f = chi.conductor() as i64;
    let s: i64 = (1..=f).map(|a| chi.eval(a) as i64 * a).sum();
    Ok(-BigRational::new(BigInt::from(s), BigInt::from(f)))
}

/// `L(0, eps psi) = -(1/f) sum_{a=1}^{f} eps(a) psi(a) a`, with conductor
/// `f = |disc| p^(n+1)`.
pub fn bernoulli_l0_twisted(disc: i64, table: &CharacterTable) -> Result<CycloNumber> {
    let chi = QuadCharacter::new(disc)?;
    let spec = table.spec();
    if disc % spec.p as i64 == 0 {
        return Err(Error::OutOfDomain(format!("{} divides {disc}", spec.p)));
    }
    let f = chi.conductor() * table.modulus();
    let mut buckets = vec![0i128; table.order() as usize];
    for a in 1..=f {
        let e = chi.eval(a as i64);
        if e == 0 {
            continue;
        }
        if let Some(k) = table.exponent(a as i64) {
            buckets[k as usize] += e as i128 * a as i128;
        }
    }
    let den = BigInt::from(f);
    let coeffs: Vec<BigRational> = buckets
        .into_iter()
        .map(|s| -BigRational::new(BigInt::from(s), den.clone()))
        .collect();
    CycloNumber::from_exponent_sums(spec.p, spec.n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn brute_legendre(a: i64, q: i64) -> i32 {
        let a = a.rem_euclid(q);
        if a == 0 {
            return 0;
        }
        if (1..q).any(|x| x * x % q == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_against_squares() {
        for q in [3i64, 5, 7, 11, 13, 47, 239] {
            for a in -60..60 {
                assert_eq!(kronecker_symbol(a, q), brute_legendre(a, q), "({a}|{q})");
            }
        }
        assert_eq!(kronecker_symbol(-4, 3), -1);
        assert_eq!(kronecker_symbol(-4, 5), 1);
        assert_eq!(kronecker_symbol(-47, 1), 1);
        assert_eq!(kronecker_symbol(5, 2), -1);
        assert_eq!(kronecker_symbol(-7, 2), 1);
        assert_eq!(kronecker_symbol(8, 3), -1);
    }

    #[test]
    fn genus_splits() {
        assert_eq!(genus_split(188).unwrap(), GenusSplit { d1: -47, d2: -4 });
        assert_eq!(genus_split(956).unwrap(), GenusSplit { d1: -239, d2: -4 });
        assert_eq!(genus_split(21).unwrap(), GenusSplit { d1: -7, d2: -3 });
        assert_eq!(genus_split(24).unwrap(), GenusSplit { d1: -3, d2: -8 });
        assert!(genus_split(13).is_err());
        assert!(genus_split(4 * 13).is_err());
    }

    #[test]
    fn imaginary_class_numbers() {
        assert_eq!(imaginary_class_number(-47).unwrap(), 5);
        assert_eq!(imaginary_class_number(-4).unwrap(), 1);
        assert_eq!(imaginary_class_number(-239).unwrap(), 15);
        assert_eq!(imaginary_class_number(-3).unwrap(), 1);
        assert_eq!(imaginary_class_number(-23).unwrap(), 3);
        assert!(imaginary_class_number(-12).is_err());
    }

    #[test]
    fn real_class_numbers_small() {
        assert!(real_class_number_is_one(188).unwrap());
        assert!(real_class_number_is_one(956).unwrap());
        assert!(real_class_number_is_one(5).unwrap());
        assert!(!real_class_number_is_one(4 * 79).unwrap());
        assert_eq!(real_class_numbers(4 * 79).unwrap().1, 3);
        assert_eq!(real_class_numbers(4 * 10).unwrap().1, 2);
        assert_eq!(real_class_numbers(4 * 3).unwrap(), (2, 1));
        // Q(sqrt 2) has a unit of norm -1
        assert_eq!(real_class_numbers(8).unwrap(), (1, 1));
    }

    #[test]
    fn rational_bernoulli() {
        assert_eq!(
            bernoulli_l0(-4).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            bernoulli_l0(-47).unwrap(),
            BigRational::from_integer(5.into())
        );
        assert_eq!(
            bernoulli_l0(-3).unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert!(bernoulli_l0(-12).is_err());
    }

    #[test]
    fn zero_bernoulli_sum_is_zero() {
        assert!(bernoulli_l0(5).unwrap().is_zero());
    }
}
