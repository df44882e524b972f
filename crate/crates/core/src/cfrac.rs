//! Minus continued fractions `b0 - 1/(b1 - 1/(b2 - ...))` of real quadratic
//! irrationals, their convergents, the totally positive fundamental unit and
//! the class-number formula built from the partial quotients.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith;
use crate::error::{Error, Result};
use crate::oracles::genus_split;
use crate::scalar::Scalar;

/// `(P + sqrt(D)) / Q`, kept with `Q | D - P^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd<T> {
    p: T,
    q: T,
    d: T,
}

impl<T: Scalar> QuadraticSurd<T> {
    pub fn new(p: T, q: T, d: T) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !d.is_positive() || is_perfect_square(&d) {
            return Err(Error::NotIrrational(d.to_string()));
        }
        let rem = (d.clone() - p.clone() * p.clone()).mod_floor(&q);
        if rem.is_zero() {
            return Ok(Self { p, q, d });
        }
        // scale numerator and denominator by |Q| so that Q | D - P^2
        let s = q.abs();
        Ok(Self {
            p: p * s.clone(),
            d: d * s.clone() * s.clone(),
            q: q * s,
        })
    }

    /// `sqrt(n)`.
    pub fn sqrt(n: T) -> Result<Self> {
        Self::new(T::zero(), T::one(), n)
    }

    /// `(delta + sqrt(D)) / 2` with `delta = D mod 4`.
    pub fn quadratic_integer(d: T) -> Result<Self> {
        let delta = d.mod_floor(&T::lit(4));
        if delta > T::one() {
            return Err(Error::OutOfDomain(format!("{d} is not 0 or 1 mod 4")));
        }
        Self::new(delta, T::lit(2), d)
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn floor(&self) -> T {
        let s = self.d.sqrt();
        if self.q.is_positive() {
            (self.p.clone() + s).div_floor(&self.q)
        } else {
            (-self.p.clone() - s - T::one()).div_floor(&(-self.q.clone()))
        }
    }

    /// Irrational, so the ceiling is always `floor + 1`.
    pub fn ceil(&self) -> T {
        self.floor() + T::one()
    }

    /// `1 / (b - self)`.
    fn minus_step(&self, b: &T) -> Self {
        let p = b.clone() * self.q.clone() - self.p.clone();
        let q = (p.clone() * p.clone() - self.d.clone()) / self.q.clone();
        Self {
            p,
            q,
            d: self.d.clone(),
        }
    }

    /// Conjugate `(P - sqrt(D)) / Q` as a floating-point value (test oracle only).
    pub fn conjugate_f64(&self) -> f64 {
        let (p, q, d) = self.as_f64_parts();
        (p - d.sqrt()) / q
    }

    pub fn to_f64(&self) -> f64 {
        let (p, q, d) = self.as_f64_parts();
        (p + d.sqrt()) / q
    }

    fn as_f64_parts(&self) -> (f64, f64, f64) {
        (
            self.p.to_f64().unwrap_or(f64::NAN),
            self.q.to_f64().unwrap_or(f64::NAN),
            self.d.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl<T: Scalar> fmt::Display for QuadraticSurd<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + √{})/{}", self.p, self.d, self.q)
    }
}

fn is_perfect_square<T: Scalar>(d: &T) -> bool {
    let r = d.sqrt();
    r.clone() * r == *d
}

/// Eventually periodic minus continued fraction `[[head; period...]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinusContinuedFraction<T> {
    head: Vec<T>,
    period: Vec<T>,
    radicand: T,
    delta: Option<u8>,
}

impl<T: Scalar> MinusContinuedFraction<T> {
    /// Expansion of `(delta + sqrt(D))/2`; `D` must be `0` or `1 mod 4`.
    pub fn for_discriminant(d: T, max_steps: usize) -> Result<Self> {
        let surd = QuadraticSurd::quadratic_integer(d.clone())?;
        let delta = d.mod_floor(&T::lit(4)).to_u8();
        let mut cf = expand_minus_cf(&surd, max_steps)?;
        cf.radicand = d;
        cf.delta = delta;
        Ok(cf)
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    /// Minimal period length `m`.
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn radicand(&self) -> &T {
        &self.radicand
    }

    /// `Some(delta)` when built by [`MinusContinuedFraction::for_discriminant`].
    pub fn delta(&self) -> Option<u8> {
        self.delta
    }

    /// Partial quotient `b_k` for any `k >= 0`.
    pub fn term(&self, k: usize) -> &T {
        if k < self.head.len() {
            &self.head[k]
        } else {
            &self.period[(k - self.head.len()) % self.period.len()]
        }
    }

    pub fn terms(&self, count: usize) -> Vec<T> {
        (0..count).map(|k| self.term(k).clone()).collect()
    }

    /// Sum of the partial quotients in one period.
    pub fn period_sum(&self) -> T {
        self.period.iter().fold(T::zero(), |acc, b| acc + b.clone())
    }

    /// Checks `b_m = 2 b0 - delta` and the palindrome `b_k = b_{m-k}`.
    pub fn has_palindromic_period(&self) -> bool {
        let Some(delta) = self.delta else {
            return false;
        };
        if self.head.len() != 1 {
            return false;
        }
        let m = self.period.len();
        let two_b0 = self.head[0].clone() * T::lit(2) - T::lit(delta as i64);
        if self.period[m - 1] != two_b0 {
            return false;
        }
        (1..m).all(|k| self.period[k - 1] == self.period[m - k - 1])
    }

    fn canonicalize(&mut self) {
        // shrink the period to its minimal length
        let len = self.period.len();
        for d in arith::divisors(len as u64) {
            let d = d as usize;
            if d < len && (0..len).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // move the boundary left while the head's tail repeats the period's tail
        while let Some(last) = self.head.last() {
            if last == self.period.last().unwrap() {
                let x = self.head.pop().unwrap();
                self.period.pop();
                self.period.insert(0, x);
            } else {
                break;
            }
        }
    }
}

impl<T: Scalar> fmt::Display for MinusContinuedFraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| {
            v.iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        if self.head.is_empty() {
            write!(f, "[[; {}]]", join(&self.period))
        } else {
            write!(f, "[[{}; {}]]", join(&self.head), join(&self.period))
        }
    }
}

/// Expands `surd` with `b = ceil(alpha)`, `alpha' = 1/(b - alpha)` until a
/// surd state repeats.
pub fn expand_minus_cf<T: Scalar>(
    surd: &QuadraticSurd<T>,
    max_steps: usize,
) -> Result<MinusContinuedFraction<T>> {
    let mut seen: HashMap<(T, T), usize> = HashMap::new();
    let mut terms = Vec::new();
    let mut cur = surd.clone();
    for step in 0..max_steps {
        let key = (cur.p.clone(), cur.q.clone());
        if let Some(&start) = seen.get(&key) {
            let period = terms.split_off(start);
            let mut cf = MinusContinuedFraction {
                head: terms,
                period,
                radicand: surd.d.clone(),
                delta: None,
            };
            cf.canonicalize();
            return Ok(cf);
        }
        seen.insert(key, step);
        let b = cur.ceil();
        cur = cur.minus_step(&b);
        terms.push(b);
    }
    Err(Error::PeriodOverflow(max_steps))
}

/// Lazy conversion of a plus expansion `[a0; a1, a2, ...]` into the minus one:
/// `(a0+1, 2 x (a1-1), a2+2, 2 x (a3-1), a4+2, ...)`.
pub struct PlusToMinus<I: Iterator> {
    src: I,
    pending_twos: Option<I::Item>,
    first: Option<I::Item>,
}

pub fn plus_to_minus<T, I>(plus: I) -> Result<PlusToMinus<I::IntoIter>>
where
    T: Scalar,
    I: IntoIterator<Item = T>,
{
    let mut src = plus.into_iter();
    let a0 = src.next().ok_or(Error::EmptyExpansion)?;
    Ok(PlusToMinus {
        src,
        pending_twos: None,
        first: Some(a0 + T::one()),
    })
}

impl<T: Scalar, I: Iterator<Item = T>> Iterator for PlusToMinus<I> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if let Some(b0) = self.first.take() {
            return Some(b0);
        }
        loop {
            match self.pending_twos.take() {
                Some(left) if left.is_positive() => {
                    self.pending_twos = Some(left - T::one());
                    return Some(T::lit(2));
                }
                Some(_) => {
                    // the twos of an odd-indexed term are done; next comes a_{2j} + 2
                    return self.src.next().map(|a| a + T::lit(2));
                }
                None => {
                    let odd = self.src.next()?;
                    self.pending_twos = Some(odd - T::one());
                }
            }
        }
    }
}

/// `(p_k, q_k)` of the `k`-th convergent `[[b0; b1, ..., bk]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair<T> {
    pub k: i64,
    pub p: T,
    pub q: T,
}

/// Exact convergents for `k = -1 .. count-1` via `p_k = b_k p_{k-1} - p_{k-2}`.
pub fn convergents<T: Scalar>(
    cf: &MinusContinuedFraction<T>,
    count: usize,
) -> Vec<ConvergentPair<T>> {
    let mut out = Vec::with_capacity(count + 1);
    let (mut p2, mut q2) = (T::zero(), -T::one());
    let (mut p1, mut q1) = (T::one(), T::zero());
    out.push(ConvergentPair {
        k: -1,
        p: p1.clone(),
        q: q1.clone(),
    });
    for k in 0..count {
        let b = cf.term(k).clone();
        let p = b.clone() * p1.clone() - p2;
        let q = b * q1.clone() - q2;
        out.push(ConvergentPair {
            k: k as i64,
            p: p.clone(),
            q: q.clone(),
        });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// Convergents reduced into `[0, modulus)` for `k = -1 .. count-1`.
pub fn convergents_mod<T: Scalar>(
    cf: &MinusContinuedFraction<T>,
    count: usize,
    modulus: u64,
) -> Vec<ConvergentPair<u64>> {
    assert!(modulus > 0, "modulus must be positive");
    let m = modulus as i128;
    let mut out = Vec::with_capacity(count + 1);
    let (mut p2, mut q2) = (0i128, m - 1);
    let (mut p1, mut q1) = (1 % m, 0i128);
    out.push(ConvergentPair {
        k: -1,
        p: p1 as u64,
        q: q1 as u64,
    });
    for k in 0..count {
        let b: BigInt = cf.term(k).clone().into();
        let b = (b % BigInt::from(modulus)).to_i128().unwrap();
        let p = (b * p1 - p2).rem_euclid(m);
        let q = (b * q1 - q2).rem_euclid(m);
        out.push(ConvergentPair {
            k: k as i64,
            p: p as u64,
            q: q as u64,
        });
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
    }
    out
}

/// Generator `a + b*omega > 1` of the totally positive units, with
/// `omega = (delta + sqrt(D))/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit<T> {
    pub a: T,
    pub b: T,
    pub d: T,
    pub delta: u8,
}

impl<T: Scalar> FundamentalUnit<T> {
    pub fn norm(&self) -> T {
        let delta = T::lit(self.delta as i64);
        let c = (self.d.clone() - delta.clone()) / T::lit(4);
        self.a.clone() * self.a.clone() + delta * self.a.clone() * self.b.clone()
            - self.b.clone() * self.b.clone() * c
    }

    /// `(2a + b*delta, b)`: the unit is `(r + s sqrt(D))/2`.
    fn doubled(&self) -> (BigInt, BigInt) {
        let a: BigInt = self.a.clone().into();
        let b: BigInt = self.b.clone().into();
        (a * 2 + &b * BigInt::from(self.delta), b)
    }

    pub fn exceeds_one(&self) -> bool {
        let (r, s) = self.doubled();
        arith::sign_of_surd(&(r - 2), &s, &self.d.clone().into()) > 0
    }

    pub fn is_totally_positive(&self) -> bool {
        let (r, s) = self.doubled();
        let d: BigInt = self.d.clone().into();
        arith::sign_of_surd(&r, &s, &d) > 0 && arith::sign_of_surd(&r, &(-s), &d) > 0
    }

    /// Coordinates `(u, v)` of `u + v*sqrt(D/4)` when `D = 4*ell`.
    pub fn sqrt_coordinates(&self) -> Option<(T, T)> {
        (self.delta == 0).then(|| (self.a.clone(), self.b.clone()))
    }
}

impl<T: Scalar> fmt::Display for FundamentalUnit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delta == 0 {
            let ell = self.d.clone() / T::lit(4);
            write!(f, "{} + {}√{}", self.a, self.b, ell)
        } else {
            write!(f, "{} + {}·(1+√{})/2", self.a, self.b, self.d)
        }
    }
}

const MAX_STEPS: usize = 1 << 20;

/// Totally positive fundamental unit of the real quadratic field of
/// discriminant `d`, read off the purely periodic expansion of
/// `(2 b0 - delta + sqrt(D))/2`.
pub fn fundamental_unit<T: Scalar>(d: T) -> Result<FundamentalUnit<T>> {
    let d_small = d
        .to_i64()
        .ok_or_else(|| Error::OutOfDomain(format!("{d} too large")))?;
    if d_small <= 0 || !arith::is_fundamental_discriminant(d_small) {
        return Err(Error::NotFundamental(d_small));
    }
    let cf = MinusContinuedFraction::for_discriminant(d.clone(), MAX_STEPS)?;
    let delta = cf.delta().unwrap_or(0);
    let delta_t = T::lit(delta as i64);
    let b0 = cf.head()[0].clone();
    let varpi = QuadraticSurd::new(
        b0.clone() * T::lit(2) - delta_t.clone(),
        T::lit(2),
        d.clone(),
    )?;
    let pure = expand_minus_cf(&varpi, MAX_STEPS)?;
    if !pure.head().is_empty() {
        return Err(Error::UnitConstruction(format!(
            "expansion of {varpi} is not purely periodic"
        )));
    }
    let m = pure.period_len();
    let conv = convergents(&pure, m);
    // conv[k + 1] holds index k
    let q_last = conv[m].q.clone();
    let q_prev = conv[m - 1].q.clone();
    // varpi = (b0 - delta) + omega
    let unit = FundamentalUnit {
        a: q_last.clone() * (b0 - delta_t) - q_prev,
        b: q_last,
        d,
        delta,
    };
    if !unit.norm().is_one() {
        return Err(Error::UnitConstruction(format!(
            "norm of {unit} is {}",
            unit.norm()
        )));
    }
    if !unit.exceeds_one() || !unit.is_totally_positive() {
        return Err(Error::UnitConstruction(format!(
            "{unit} is not a totally positive unit > 1"
        )));
    }
    Ok(unit)
}

/// Number of roots of unity in the imaginary quadratic field of discriminant `d`.
pub fn roots_of_unity(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// `h(D1) h(D2) = (w1 w2 / 24) * sum_{k=1}^{m} (b_k - 3)` for the expansion of
/// `(delta + sqrt(D))/2`.
pub fn hz_class_number_product(d: i64) -> Result<u64> {
    let split = genus_split(d)?;
    let cf = MinusContinuedFraction::for_discriminant(BigInt::from(d), MAX_STEPS)?;
    let m = cf.period_len() as i64;
    let excess = cf.period_sum() - BigInt::from(3 * m);
    let w = roots_of_unity(split.d1) * roots_of_unity(split.d2);
    let value = BigRational::new(excess * BigInt::from(w), BigInt::from(24));
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::AssumptionViolation(format!(
            "class number product {value} for D = {d} is not a positive integer"
        )));
    }
    value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Internal("class number overflow".into()))
}

/// `(1/3)(b_1 + ... + b_m) - m` for the expansion of `sqrt(ell)`.
pub fn hz_class_number_abstract(ell: i64) -> Result<BigRational> {
    let cf = MinusContinuedFraction::for_discriminant(BigInt::from(4 * ell), MAX_STEPS)?;
    let m = BigInt::from(cf.period_len());
    Ok(BigRational::new(cf.period_sum(), BigInt::from(3)) - BigRational::from_integer(m))
}
