//! The `c_k` sequence of a ray class, Yamamoto's `zeta(0, c)`, and twisted
//! homogeneous Dedekind sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, residue};
use crate::cfrac::{convergents_mod, MinusContinuedFraction};
use crate::cyclo::{CharacterSpec, CharacterTable, CycloNumber};
use crate::error::{Error, Result};
use crate::quadring::QuadRing;
use crate::scalar::Scalar;

/// `alpha = x + y*omega`, a unit modulo `p^(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayClassRep {
    pub x: BigInt,
    pub y: BigInt,
    pub d: i64,
    pub p: u64,
    pub n: u32,
}

impl RayClassRep {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, d: i64, p: u64, n: u32) -> Result<Self> {
        let rep = Self {
            x: x.into(),
            y: y.into(),
            d,
            p,
            n,
        };
        let ring = QuadRing::new(d, p, n + 1)?;
        let (x, y) = rep.residues();
        if !ring.elem(x as i128, y as i128).is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(rep)
    }

    /// `p^(n+1)`.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n + 1)
    }

    pub fn residues(&self) -> (u64, u64) {
        let m = BigInt::from(self.modulus());
        let r = |v: &BigInt| {
            let r = ((v % &m) + &m) % &m;
            r.to_u64().expect("residue fits")
        };
        (r(&self.x), r(&self.y))
    }

    pub fn is_totally_positive(&self) -> bool {
        let d = BigInt::from(self.d);
        let delta = BigInt::from(self.d.rem_euclid(4));
        let r = &self.x * 2 + &self.y * delta;
        arith::sign_of_surd(&r, &self.y, &d) > 0 && arith::sign_of_surd(&r, &(-&self.y), &d) > 0
    }
}

/// `c_k = numerators[k + 2] / modulus` for `k >= -2`, each in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CkSequence {
    modulus: u64,
    numerators: Vec<u64>,
}

impl CkSequence {
    /// Every `c_k = 0`, for `k = -2 .. count-1`.
    pub fn zeros(count: usize) -> Self {
        Self {
            modulus: 1,
            numerators: vec![0; count + 2],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of stored terms, counting `c_{-2}` and `c_{-1}`.
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerator(&self, k: i64) -> u64 {
        self.numerators[(k + 2) as usize]
    }

    pub fn get(&self, k: i64) -> BigRational {
        BigRational::new(BigInt::from(self.numerator(k)), BigInt::from(self.modulus))
    }

    pub fn values(&self) -> Vec<BigRational> {
        (0..self.len() as i64).map(|i| self.get(i - 2)).collect()
    }
}

fn delta_of<T: Scalar>(cf: &MinusContinuedFraction<T>) -> Result<u8> {
    cf.delta()
        .ok_or_else(|| Error::OutOfDomain("expansion is not of (delta + sqrt(D))/2".into()))
}

fn lit_mod<T: Scalar>(v: &T, m: u64) -> i128 {
    let b: BigInt = v.clone().into();
    (b % BigInt::from(m))
        .to_i128()
        .expect("reduced below modulus")
}

/// `c_{-2} = {(x - (b0 - delta) y)/f}`, `c_k = {-(x q_k + y p_k)/f}` for
/// `k = -1 .. count-1`.
pub fn c_sequence<T: Scalar>(
    rep: &RayClassRep,
    cf: &MinusContinuedFraction<T>,
    count: usize,
) -> Result<CkSequence> {
    let delta = delta_of(cf)?;
    let f = rep.modulus();
    let (x, y) = rep.residues();
    let (x, y) = (x as i128, y as i128);
    let b0 = lit_mod(cf.term(0), f);
    let mut numerators = Vec::with_capacity(count + 2);
    numerators.push(residue(x - (b0 - delta as i128) * y, f));
    for c in convergents_mod(cf, count, f) {
        numerators.push(residue(-(x * c.q as i128 + y * c.p as i128), f));
    }
    Ok(CkSequence {
        modulus: f,
        numerators,
    })
}

/// Same sequence from `c_k = {B_k c_{k-1} - c_{k-2}}` with `B_0 = 2 b0 - delta`
/// and `B_k = b_k` otherwise.
pub fn c_sequence_recursive<T: Scalar>(
    rep: &RayClassRep,
    cf: &MinusContinuedFraction<T>,
    count: usize,
) -> Result<CkSequence> {
    let delta = delta_of(cf)?;
    let f = rep.modulus();
    let seed = c_sequence(rep, cf, 0)?;
    let mut numerators = seed.numerators;
    for k in 0..count {
        let b = lit_mod(cf.term(k), f);
        let b = if k == 0 { 2 * b - delta as i128 } else { b };
        let c1 = numerators[k + 1] as i128;
        let c2 = numerators[k] as i128;
        numerators.push(residue(b * c1 - c2, f));
    }
    Ok(CkSequence {
        modulus: f,
        numerators,
    })
}

fn b1(x: &BigRational) -> BigRational {
    x - BigRational::new(1.into(), 2.into())
}

fn b2(x: &BigRational) -> BigRational {
    x * x - x + BigRational::new(1.into(), 6.into())
}

/// `sum_{k=1}^{terms} (b_k/2) B2(c_{k-1}) - B1(c_{k-1}) B1(c_{k-2})`.
pub fn zeta0_from_sequence<T: Scalar>(
    c: &CkSequence,
    cf: &MinusContinuedFraction<T>,
    terms: usize,
) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    (1..=terms).fold(BigRational::zero(), |acc, k| {
        let b = BigRational::from_integer(cf.term(k).clone().into());
        let c1 = c.get(k as i64 - 1);
        let c2 = c.get(k as i64 - 2);
        acc + &half * b * b2(&c1) - b1(&c1) * b1(&c2)
    })
}

/// Yamamoto's `zeta(0, [(alpha)])`, summed over `rn * m` terms.
pub fn yamamoto_zeta0<T: Scalar>(
    rep: &RayClassRep,
    cf: &MinusContinuedFraction<T>,
    rn: u64,
) -> Result<BigRational> {
    let terms = rn as usize * cf.period_len();
    let c = c_sequence(rep, cf, terms)?;
    Ok(zeta0_from_sequence(&c, cf, terms))
}

/// The class-dependent part `sum (b_k/2) B1(c_{k-1})^2 - B1(c_{k-1}) B1(c_{k-2})`.
pub fn yamamoto_prep<T: Scalar>(
    rep: &RayClassRep,
    cf: &MinusContinuedFraction<T>,
    rn: u64,
) -> Result<BigRational> {
    let terms = rn as usize * cf.period_len();
    let c = c_sequence(rep, cf, terms)?;
    let f = c.modulus() as i128;
    // 8 f^2 times each summand is an integer
    let mut acc = BigInt::zero();
    for k in 1..=terms {
        let b: BigInt = cf.term(k).clone().into();
        let u1 = 2 * c.numerator(k as i64 - 1) as i128 - f;
        let u2 = 2 * c.numerator(k as i64 - 2) as i128 - f;
        acc += b * BigInt::from(u1 * u1) - BigInt::from(2 * u1 * u2);
    }
    Ok(BigRational::new(acc, BigInt::from(8 * f * f)))
}

/// `C = -(rn/24) sum_{k=1}^{m} b_k`, shared by every class.
pub fn yamamoto_constant<T: Scalar>(cf: &MinusContinuedFraction<T>, rn: u64) -> BigRational {
    let s: BigInt = cf.period_sum().into();
    -BigRational::new(s * BigInt::from(rn), BigInt::from(24))
}

/// Units `t mod f` paired with the exponent of `psi(t)`.
pub fn unit_exponents(table: &CharacterTable) -> Vec<(u64, u64)> {
    (1..table.modulus())
        .filter_map(|t| table.exponent(t as i64).map(|e| (t, e)))
        .collect()
}

/// `4 f^2 D_psi(a, b)` as integer coefficients of `zeta^e`, `e < p^n`.
pub fn twisted_dedekind_scaled(a: i64, b: i64, table: &CharacterTable) -> Vec<i128> {
    let f = table.modulus();
    let (a, b) = (residue(a as i128, f), residue(b as i128, f));
    let mut buckets = vec![0i128; table.order() as usize];
    for (t, e) in unit_exponents(table) {
        let u1 = 2 * arith::mod_mul(a, t, f) as i128 - f as i128;
        let u2 = 2 * arith::mod_mul(b, t, f) as i128 - f as i128;
        buckets[e as usize] += u1 * u2;
    }
    buckets
}

/// `D_psi(a, b) = sum_{t=1}^{f} psi(t) ({at/f} - 1/2)({bt/f} - 1/2)`.
pub fn twisted_dedekind(a: i64, b: i64, spec: &CharacterSpec) -> CycloNumber {
    twisted_dedekind_with(a, b, &CharacterTable::new(*spec))
}

pub fn twisted_dedekind_with(a: i64, b: i64, table: &CharacterTable) -> CycloNumber {
    let f = table.modulus() as i128;
    let spec = table.spec();
    scaled_to_cyclo(spec, twisted_dedekind_scaled(a, b, table), 4 * f * f)
}

pub(crate) fn scaled_to_cyclo(spec: &CharacterSpec, buckets: Vec<i128>, den: i128) -> CycloNumber {
    let den = BigInt::from(den);
    let coeffs = buckets
        .into_iter()
        .map(|s| BigRational::new(BigInt::from(s), den.clone()))
        .collect();
    CycloNumber::from_exponent_sums(spec.p, spec.n, coeffs).expect("bucket count is p^n")
}

/// `(conj(psi(a)) / f^2) sum_{t=1}^{f-1} psi(t) t^2`.
pub fn dedekind_diag_closed_form(a: i64, spec: &CharacterSpec) -> CycloNumber {
    let table = CharacterTable::new(*spec);
    let Some(ea) = table.exponent(a) else {
        return CycloNumber::zero(spec.p, spec.n);
    };
    let order = table.order();
    let f = table.modulus();
    let mut buckets = vec![0i128; order as usize];
    for (t, e) in unit_exponents(&table) {
        let shifted = (e + order - ea) % order;
        buckets[shifted as usize] += (t as i128) * (t as i128);
    }
    scaled_to_cyclo(spec, buckets, (f as i128) * (f as i128))
}

/// `sum_t psi(t) {t/f}`, which vanishes for nontrivial `psi`.
pub fn character_fraction_sum(table: &CharacterTable) -> CycloNumber {
    let mut buckets = vec![0i128; table.order() as usize];
    for (t, e) in unit_exponents(table) {
        buckets[e as usize] += t as i128;
    }
    scaled_to_cyclo(table.spec(), buckets, table.modulus() as i128)
}
