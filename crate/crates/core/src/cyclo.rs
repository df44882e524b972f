//! Exact arithmetic in `Q(zeta_{p^n})` in the power basis `1, zeta, ...,
//! zeta^(phi(p^n)-1)`, Dirichlet characters of `p`-power order and the
//! valuation at the prime `(1 - zeta)` above `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, euler_phi_prime_power};
use crate::error::{Error, Precondition, Result};
use crate::quadring::dlog;
use crate::scalar::Scalar;

/// Element of `Q(zeta_{p^n})`, always reduced modulo `Phi_{p^n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T: Clone + Integer> {
    p: u64,
    n: u32,
    coeffs: Vec<Ratio<T>>,
}

pub type CycloNumber = Cyclotomic<BigInt>;

/// `ord_{(1 - zeta)}` of an algebraic integer; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "∞"),
        }
    }
}

impl<T: Scalar> Cyclotomic<T> {
    pub fn zero(p: u64, n: u32) -> Self {
        assert!(
            n >= 1 && arith::is_prime(p),
            "invalid cyclotomic level p={p} n={n}"
        );
        let phi = euler_phi_prime_power(p, n) as usize;
        Self {
            p,
            n,
            coeffs: vec![Ratio::zero(); phi],
        }
    }

    pub fn from_rational(p: u64, n: u32, r: Ratio<T>) -> Self {
        let mut x = Self::zero(p, n);
        x.coeffs[0] = r;
        x
    }

    pub fn one(p: u64, n: u32) -> Self {
        Self::from_rational(p, n, Ratio::one())
    }

    /// `zeta^e`, any integer `e`.
    pub fn zeta_power(p: u64, n: u32, e: i64) -> Self {
        let order = p.pow(n);
        let mut full = vec![Ratio::zero(); order as usize];
        full[arith::residue(e as i128, order) as usize] = Ratio::one();
        Self::from_full(p, n, full)
    }

    /// From power-basis coefficients of any length up to `p^n`.
    pub fn from_coeffs(p: u64, n: u32, coeffs: Vec<Ratio<T>>) -> Result<Self> {
        Self::from_exponent_sums(p, n, coeffs)
    }

    /// `sum_e sums[e] zeta^e` for `e < p^n`.
    pub fn from_exponent_sums(p: u64, n: u32, mut sums: Vec<Ratio<T>>) -> Result<Self> {
        let order = p.pow(n) as usize;
        if sums.len() > order {
            return Err(Error::LevelMismatch);
        }
        sums.resize(order, Ratio::zero());
        Ok(Self::from_full(p, n, sums))
    }

    fn from_full(p: u64, n: u32, mut full: Vec<Ratio<T>>) -> Self {
        let phi = euler_phi_prime_power(p, n) as usize;
        let step = p.pow(n - 1) as usize;
        // zeta^(phi + r) = - sum_{j=0}^{p-2} zeta^(r + j p^(n-1))
        for i in phi..full.len() {
            let c = std::mem::replace(&mut full[i], Ratio::zero());
            if c.is_zero() {
                continue;
            }
            let r = i - phi;
            for j in 0..(p as usize - 1) {
                let idx = r + j * step;
                full[idx] = full[idx].clone() - c.clone();
            }
        }
        full.truncate(phi);
        Self { p, n, coeffs: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn phi(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Ratio<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.p == other.p && self.n == other.n {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            p: self.p,
            n: self.n,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let order = self.p.pow(self.n) as usize;
        let mut full = vec![Ratio::zero(); order];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % order;
                full[k] = full[k].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self::from_full(self.p, self.n, full))
    }

    pub fn scale(&self, r: &Ratio<T>) -> Self {
        Self {
            p: self.p,
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.clone() * r.clone()).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under `zeta -> zeta^a`, `gcd(a, p) = 1`.
    pub fn galois(&self, a: u64) -> Result<Self> {
        if a.is_multiple_of(self.p) {
            return Err(Error::OutOfDomain(format!(
                "{a} is not prime to {}",
                self.p
            )));
        }
        let order = self.p.pow(self.n);
        let mut full = vec![Ratio::zero(); order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = (i as u64 * (a % order) % order) as usize;
            full[idx] = full[idx].clone() + c.clone();
        }
        Ok(Self::from_full(self.p, self.n, full))
    }

    /// Smallest `a` with `self.galois(a) == other`, if any.
    pub fn galois_conjugate_index(&self, other: &Self) -> Option<u64> {
        if self.check_level(other).is_err() {
            return None;
        }
        let order = self.p.pow(self.n);
        (1..order)
            .filter(|a| a % self.p != 0)
            .find(|&a| self.galois(a).map(|x| &x == other).unwrap_or(false))
    }

    pub fn to_bigint(&self) -> CycloNumber {
        Cyclotomic {
            p: self.p,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Ratio::new(c.numer().clone().into(), c.denom().clone().into()))
                .collect(),
        }
    }

    fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.numer().clone().into())
            .collect())
    }

    /// Absolute norm, the determinant of multiplication by `self`.
    pub fn norm(&self) -> Result<BigInt> {
        let x = self.integer_coeffs()?;
        let phi = x.len();
        let order = self.p.pow(self.n) as usize;
        let big = |v: &[BigInt]| Cyclotomic::<BigInt> {
            p: self.p,
            n: self.n,
            coeffs: v.iter().map(|c| Ratio::from_integer(c.clone())).collect(),
        };
        let mut cols = Vec::with_capacity(phi);
        let mut cur = big(&x);
        for _ in 0..phi {
            cols.push(
                cur.coeffs
                    .iter()
                    .map(|c| c.to_integer())
                    .collect::<Vec<_>>(),
            );
            // multiply by zeta
            let mut full = vec![Ratio::zero(); order];
            for (i, c) in cur.coeffs.iter().enumerate() {
                full[(i + 1) % order] = c.clone();
            }
            cur = Cyclotomic::from_full(self.p, self.n, full);
        }
        // rows/cols transposition does not change the determinant
        Ok(det_bareiss(cols))
    }

    /// `ord_{(1 - zeta)}(self) = ord_p |N(self)|` since the prime is totally
    /// ramified of residue degree one.
    pub fn valuation(&self) -> Result<Valuation> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let norm = self.norm()?;
        arith::ord_p(&norm, self.p)
            .map(Valuation::Finite)
            .ok_or_else(|| Error::Internal("nonzero element with zero norm".into()))
    }

    /// Same valuation by repeated exact division by `1 - zeta`, using
    /// `1/(1 - zeta) = R(zeta)/p` with `Phi(X) - p = (X - 1) R(X)`.
    pub fn valuation_by_division(&self) -> Result<Valuation> {
        let mut x = self.to_bigint();
        if !x.is_integral() {
            return Err(Error::NotIntegral);
        }
        if x.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let phi = x.phi();
        let step = self.p.pow(self.n - 1) as usize;
        // Phi coefficients, degree phi
        let mut cyc = vec![BigInt::zero(); phi + 1];
        for j in 0..self.p as usize {
            cyc[j * step] = BigInt::one();
        }
        cyc[0] -= BigInt::from(self.p);
        // synthetic division by (X - 1)
        let mut quot = vec![BigInt::zero(); phi];
        let mut carry = BigInt::zero();
        for i in (1..=phi).rev() {
            carry += &cyc[i];
            quot[i - 1] = carry.clone();
        }
        let inv = Cyclotomic::<BigInt>::from_coeffs(
            self.p,
            self.n,
            quot.into_iter().map(Ratio::from_integer).collect(),
        )?
        .scale(&Ratio::new(BigInt::one(), BigInt::from(self.p)));
        let mut v = 0;
        loop {
            let y = &x * &inv;
            if !y.is_integral() {
                return Ok(Valuation::Finite(v));
            }
            x = y;
            v += 1;
        }
    }
}

fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl<T: Scalar> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.try_add(rhs).expect("level mismatch")
    }
}

impl<T: Scalar> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self.try_sub(rhs).expect("level mismatch")
    }
}

impl<T: Scalar> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.try_mul(rhs).expect("level mismatch")
    }
}

impl<T: Scalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            p: self.p,
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if mag.is_integer() {
                mag.to_integer().to_string()
            } else {
                format!("({mag})")
            };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}")?;
                    }
                    write!(f, "ζ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    p: u64,
    n: u32,
    coeffs: Vec<String>,
}

impl<T: Scalar> Serialize for Cyclotomic<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            p: self.p,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Cyclotomic<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.n == 0 || !arith::is_prime(repr.p) {
            return Err(D::Error::custom("invalid cyclotomic level"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| {
                parse_ratio::<T>(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coeffs.len() != euler_phi_prime_power(repr.p, repr.n) as usize {
            return Err(D::Error::custom("coefficient count differs from phi(p^n)"));
        }
        Ok(Cyclotomic {
            p: repr.p,
            n: repr.n,
            coeffs,
        })
    }
}

fn parse_ratio<T: Scalar>(s: &str) -> Option<Ratio<T>> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: T = num.trim().parse().ok()?;
    let den: T = den.trim().parse().ok()?;
    (!den.is_zero()).then(|| Ratio::new(num, den))
}

/// Character `psi` of conductor `p^(n+1)` and order `p^n` with
/// `psi(g) = zeta^twist`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub p: u64,
    pub n: u32,
    pub g: u64,
    pub twist: u64,
}

impl CharacterSpec {
    pub fn new(p: u64, n: u32, g: u64) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Precondition::NotOddPrime(p).into());
        }
        if n == 0 {
            return Err(Error::OutOfDomain(
                "character level n must be at least 1".into(),
            ));
        }
        let p2 = p * p;
        if arith::multiplicative_order(g % p2, p2, p * (p - 1)) != Some(p * (p - 1)) {
            return Err(Precondition::NotPrimitiveRoot { g, p }.into());
        }
        Ok(Self { p, n, g, twist: 1 })
    }

    /// `psi^k`; the twist is taken mod `p^n`.
    pub fn with_twist(self, k: u64) -> Self {
        Self {
            twist: k % self.order(),
            ..self
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n + 1)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n)
    }
}

/// Precomputed exponents `t -> twist * log_g(t) mod p^n` for `t` mod `p^(n+1)`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    spec: CharacterSpec,
    exps: Vec<u32>,
}

const NON_UNIT: u32 = u32::MAX;

impl CharacterTable {
    pub fn new(spec: CharacterSpec) -> Self {
        let f = spec.modulus();
        let order = spec.order();
        let mut exps = vec![NON_UNIT; f as usize];
        let mut x = 1u64;
        for i in 0..order * (spec.p - 1) {
            exps[x as usize] = ((i % order) * spec.twist % order) as u32;
            x = arith::mod_mul(x, spec.g, f);
        }
        Self { spec, exps }
    }

    pub fn spec(&self) -> &CharacterSpec {
        &self.spec
    }

    pub fn modulus(&self) -> u64 {
        self.spec.modulus()
    }

    pub fn order(&self) -> u64 {
        self.spec.order()
    }

    /// Exponent of `psi(t)` as a power of zeta, `None` when `p | t`.
    pub fn exponent(&self, t: i64) -> Option<u64> {
        let e = self.exps[arith::residue(t as i128, self.modulus()) as usize];
        (e != NON_UNIT).then_some(e as u64)
    }

    pub fn value<T: Scalar>(&self, t: i64) -> Cyclotomic<T> {
        match self.exponent(t) {
            Some(e) => Cyclotomic::zeta_power(self.spec.p, self.spec.n, e as i64),
            None => Cyclotomic::zero(self.spec.p, self.spec.n),
        }
    }
}

/// `psi(t)`: zero when `p | t`, else `zeta^(twist * log_g t)`.
pub fn psi_value(t: i64, spec: &CharacterSpec) -> Result<CycloNumber> {
    if t.rem_euclid(spec.p as i64) == 0 {
        return Ok(CycloNumber::zero(spec.p, spec.n));
    }
    let f = spec.modulus();
    let e = dlog(arith::residue(t as i128, f), spec.g, spec.p, spec.n + 1)?;
    let order = spec.order();
    Ok(CycloNumber::zeta_power(
        spec.p,
        spec.n,
        ((e % order) * spec.twist % order) as i64,
    ))
}
