//! Arithmetic in `O_K / (p^k)` for a real quadratic field `K` and an odd
//! prime `p` not dividing the discriminant, plus the parameter set (unit
//! orders, primitive root, auxiliary generator) the lambda sum is built from.

mod dlog;

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use dlog::dlog;

use crate::arith::{self, mod_mul, residue};
use crate::cfrac::{fundamental_unit, FundamentalUnit};
use crate::error::{Error, Precondition, Result};
use crate::oracles::kronecker_symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitType {
    Inert,
    Split,
}

/// `O_K / (p^k)` with `O_K = Z + omega Z`, `omega = (delta + sqrt(D))/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadRing {
    d: i64,
    delta: u8,
    p: u64,
    k: u32,
    modulus: u64,
    /// `omega^2 = omega_sq + delta * omega`
    omega_sq: u64,
    split: SplitType,
}

impl QuadRing {
    pub fn new(d: i64, p: u64, k: u32) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Precondition::NotOddPrime(p).into());
        }
        if k == 0 {
            return Err(Error::OutOfDomain("exponent k must be at least 1".into()));
        }
        if d % p as i64 == 0 {
            return Err(Precondition::PDividesD { p, d }.into());
        }
        let delta = d.rem_euclid(4);
        if delta > 1 || arith::is_square(d) {
            return Err(Error::OutOfDomain(format!(
                "{d} is not a quadratic discriminant"
            )));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|m| *m < 1 << 31)
            .ok_or_else(|| Error::OutOfDomain(format!("{p}^{k} too large")))?;
        let split = match kronecker_symbol(d, p as i64) {
            1 => SplitType::Split,
            _ => SplitType::Inert,
        };
        Ok(Self {
            d,
            delta: delta as u8,
            p,
            k,
            modulus,
            omega_sq: residue(((d - delta) / 4) as i128, modulus),
            split,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn delta(&self) -> u8 {
        self.delta
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn split_type(&self) -> SplitType {
        self.split
    }

    pub fn elem(&self, x: i128, y: i128) -> RingElem {
        RingElem {
            ring: *self,
            x: residue(x, self.modulus),
            y: residue(y, self.modulus),
        }
    }

    pub fn one(&self) -> RingElem {
        self.elem(1, 0)
    }

    pub fn from_int(&self, x: i128) -> RingElem {
        self.elem(x, 0)
    }

    /// Same field and prime, modulus `p^k`.
    pub fn with_exponent(&self, k: u32) -> Result<Self> {
        Self::new(self.d, self.p, k)
    }

    /// `|(O_K/(p^k))^*|`.
    pub fn unit_group_order(&self) -> u64 {
        let pk = self.p.pow(2 * (self.k - 1));
        match self.split {
            SplitType::Inert => pk * (self.p * self.p - 1),
            SplitType::Split => pk * (self.p - 1) * (self.p - 1),
        }
    }

    /// Exponent of the unit group.
    pub fn unit_group_exponent(&self) -> u64 {
        let pk = self.p.pow(self.k - 1);
        match self.split {
            SplitType::Inert => pk * (self.p * self.p - 1),
            SplitType::Split => pk * (self.p - 1),
        }
    }

    /// All units, ordered by `(y, x)`.
    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        let m = self.modulus;
        (0..m)
            .flat_map(move |y| (0..m).map(move |x| (x, y)))
            .map(move |(x, y)| RingElem { ring: *self, x, y })
            .filter(RingElem::is_unit)
    }
}

/// `x + y * omega` modulo `p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: QuadRing,
    x: u64,
    y: u64,
}

impl RingElem {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let m = self.ring.modulus;
        Ok(Self {
            ring: self.ring,
            x: (self.x + other.x) % m,
            y: (self.y + other.y) % m,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.ring.modulus;
        let yy = mod_mul(self.y, other.y, m);
        let x = (mod_mul(self.x, other.x, m) + mod_mul(yy, self.ring.omega_sq, m)) % m;
        let y = (mod_mul(self.x, other.y, m)
            + mod_mul(self.y, other.x, m)
            + if self.ring.delta == 1 { yy } else { 0 })
            % m;
        Self {
            ring: self.ring,
            x,
            y,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus;
        Self {
            ring: self.ring,
            x: (m - self.x) % m,
            y: (m - self.y) % m,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        self.x == 1 % self.ring.modulus && self.y == 0
    }

    /// Galois conjugate, using `omega' = delta - omega`.
    pub fn conj(&self) -> Self {
        let m = self.ring.modulus;
        let x = (self.x + if self.ring.delta == 1 { self.y } else { 0 }) % m;
        Self {
            ring: self.ring,
            x,
            y: (m - self.y) % m,
        }
    }

    /// `x^2 + delta x y - y^2 (D - delta)/4` modulo `p^k`.
    pub fn norm(&self) -> u64 {
        let m = self.ring.modulus;
        let xx = mod_mul(self.x, self.x, m);
        let xy = if self.ring.delta == 1 {
            mod_mul(self.x, self.y, m)
        } else {
            0
        };
        let yy = mod_mul(mod_mul(self.y, self.y, m), self.ring.omega_sq, m);
        (xx + xy + m - yy) % m
    }

    pub fn is_unit(&self) -> bool {
        !self.norm().is_multiple_of(self.ring.p)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = arith::mod_inv(self.norm(), self.ring.modulus).ok_or(Error::NotAUnit)?;
        let c = self.conj();
        Ok(Self {
            ring: self.ring,
            x: mod_mul(c.x, inv, self.ring.modulus),
            y: mod_mul(c.y, inv, self.ring.modulus),
        })
    }

    /// Image in `O_K / (p^j)` for `j <= k`.
    pub fn reduce_to(&self, ring: &QuadRing) -> Result<Self> {
        if ring.d != self.ring.d || ring.p != self.ring.p || ring.k > self.ring.k {
            return Err(Error::RingMismatch);
        }
        Ok(ring.elem(self.x as i128, self.y as i128))
    }
}

impl Mul for RingElem {
    type Output = RingElem;

    fn mul(self, rhs: RingElem) -> RingElem {
        self.try_mul(&rhs).expect("ring mismatch")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ω (mod {})", self.x, self.y, self.ring.modulus)
    }
}

/// Least `t >= 1` with `a^t = 1`, descending from the group exponent.
pub fn order_of(a: &RingElem) -> Result<u64> {
    if !a.is_unit() {
        return Err(Error::NotAUnit);
    }
    let exp = a.ring.unit_group_exponent();
    if !a.pow(exp).is_one() {
        return Err(Error::Internal(format!(
            "{a} does not divide the group exponent {exp}"
        )));
    }
    let mut t = exp;
    for (q, _) in arith::factorize(exp) {
        while t.is_multiple_of(q) && a.pow(t / q).is_one() {
            t /= q;
        }
    }
    Ok(t)
}

/// Smallest `g >= 2` generating `(Z/p^2)^*`, hence every `(Z/p^k)^*`.
pub fn primitive_root(p: u64) -> u64 {
    let p2 = p * p;
    let n = p * (p - 1);
    (2..)
        .find(|&g| arith::multiplicative_order(g, p2, n) == Some(n))
        .expect("odd primes have primitive roots")
}

/// Outcome of testing `p^2 | eps^r0 - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionB {
    pub p: u64,
    pub epsilon: FundamentalUnit<BigInt>,
    /// Order of `eps` mod `p`.
    pub r0: u64,
    /// `eps^r0` mod `p^2`.
    pub witness: RingElem,
    pub holds: bool,
}

pub fn unit_residue(unit: &FundamentalUnit<BigInt>, ring: &QuadRing) -> RingElem {
    let m = BigInt::from(ring.modulus());
    let x = (&unit.a % &m).to_i128().unwrap_or(0);
    let y = (&unit.b % &m).to_i128().unwrap_or(0);
    ring.elem(x, y)
}

pub fn check_assumption_b(d: i64, p: u64) -> Result<AssumptionB> {
    let ring1 = QuadRing::new(d, p, 1)?;
    let ring2 = ring1.with_exponent(2)?;
    let epsilon = fundamental_unit(BigInt::from(d))?;
    let r0 = order_of(&unit_residue(&epsilon, &ring1))?;
    let witness = unit_residue(&epsilon, &ring2).pow(r0);
    Ok(AssumptionB {
        p,
        epsilon,
        r0,
        holds: !witness.is_one(),
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMethod {
    /// Quotient is trivial; `eta = 1`.
    Trivial,
    /// Eighth root of unity lifted from `1 + sqrt(ell)` (p = 3).
    HenselLift,
    /// First unit in `(y, x)` order whose class generates the quotient.
    SubgroupSearch,
}

/// Generator of `(O_K/(p^(n+1)))^* / <eps, g>` of `p`-prime order, with a
/// totally positive lift to `O_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eta {
    pub residue: RingElem,
    /// `(x, y)` with `x + y*omega` totally positive and congruent to `residue`.
    pub lift: (BigInt, BigInt),
    pub method: EtaMethod,
}

/// The subgroup `<eps, g>` as a set of `(x, y)` residues.
pub fn subgroup_generated(epsilon: &RingElem, g: u64) -> Result<HashSet<(u64, u64)>> {
    let ring = *epsilon.ring();
    let g = ring.from_int(g as i128);
    let eps_powers = cyclic_powers(epsilon)?;
    let g_powers = cyclic_powers(&g)?;
    let mut set = HashSet::with_capacity(eps_powers.len() * g_powers.len());
    for a in &eps_powers {
        for b in &g_powers {
            let c = a.mul_unchecked(b);
            set.insert((c.x, c.y));
        }
    }
    Ok(set)
}

fn cyclic_powers(a: &RingElem) -> Result<Vec<RingElem>> {
    let t = order_of(a)?;
    let mut out = Vec::with_capacity(t as usize);
    let mut cur = a.ring.one();
    for _ in 0..t {
        out.push(cur);
        cur = cur.mul_unchecked(a);
    }
    Ok(out)
}

/// Whether the class of `cand` has order exactly `v` in the quotient by `h`.
fn generates_quotient(cand: &RingElem, v: u64, h: &HashSet<(u64, u64)>) -> bool {
    arith::factorize(v).iter().all(|&(q, _)| {
        let c = cand.pow(v / q);
        !h.contains(&(c.x, c.y))
    })
}

pub fn find_eta(epsilon: &RingElem, g: u64, v: u64) -> Result<Eta> {
    let ring = *epsilon.ring();
    let (residue, method) = if v == 1 {
        (ring.one(), EtaMethod::Trivial)
    } else if hensel_applies(&ring, v) {
        (hensel_eighth_root(&ring)?, EtaMethod::HenselLift)
    } else {
        let h = subgroup_generated(epsilon, g)?;
        let quotient = ring.unit_group_order() / h.len() as u64;
        if quotient != v || !ring.unit_group_order().is_multiple_of(h.len() as u64) {
            return Err(Error::Internal(format!(
                "quotient by <eps, g> has order {quotient}, expected {v}"
            )));
        }
        // kill the p-part so that psi(N(eta)) = 1
        let p_part = ring.p().pow(ring.k() - 1);
        let cand = ring
            .units()
            .find(|c| generates_quotient(c, v, &h))
            .ok_or(Error::NoGenerator)?;
        (cand.pow(p_part), EtaMethod::SubgroupSearch)
    };
    Ok(Eta {
        lift: totally_positive_lift(&residue),
        residue,
        method,
    })
}

fn hensel_applies(ring: &QuadRing, v: u64) -> bool {
    ring.p() == 3
        && ring.delta() == 0
        && (ring.d() / 4).rem_euclid(3) == 2
        && ring.split_type() == SplitType::Inert
        && 8 % v == 0
}

/// Newton iteration for `x^8 = 1` starting from `1 + sqrt(ell)`.
fn hensel_eighth_root(ring: &QuadRing) -> Result<RingElem> {
    let mut eta = ring.elem(1, 1);
    let eight = ring.from_int(8);
    for _ in 0..64 {
        let f = eta.pow(8).try_sub(&ring.one())?;
        if f.x == 0 && f.y == 0 {
            if order_of(&eta)? != 8 {
                return Err(Error::NoGenerator);
            }
            return Ok(eta);
        }
        let deriv = eight.mul_unchecked(&eta.pow(7));
        eta = eta.try_sub(&f.mul_unchecked(&deriv.inverse()?))?;
    }
    Err(Error::NoGenerator)
}

/// Adds multiples of the modulus to `x` until `x + y*omega` is totally positive.
fn totally_positive_lift(a: &RingElem) -> (BigInt, BigInt) {
    let ring = a.ring();
    let m = BigInt::from(ring.modulus());
    let d = BigInt::from(ring.d());
    let y = BigInt::from(a.y);
    let mut x = BigInt::from(a.x);
    loop {
        // 2 (x + y omega) = (2x + delta y) +/- y sqrt(D)
        let r = &x * 2 + &y * BigInt::from(ring.delta());
        if arith::sign_of_surd(&r, &y, &d) > 0 && arith::sign_of_surd(&r, &(-&y), &d) > 0 {
            return (x, y);
        }
        x += &m;
    }
}

/// Everything the lambda sum needs at level `n`, working modulo `p^(n+1)`.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub d: i64,
    pub p: u64,
    pub n: u32,
    pub ring: QuadRing,
    pub g: u64,
    pub epsilon_exact: FundamentalUnit<BigInt>,
    pub epsilon: RingElem,
    pub r0: u64,
    pub rn: u64,
    pub u: u32,
    pub v: u64,
    pub eta: Eta,
    pub split_type: SplitType,
    /// `ell = g^e1 mod p^(n+1)` when `D = 4 ell`.
    pub e1: Option<u64>,
    /// `2 e2 = e1 mod p^n`.
    pub e2: Option<u64>,
}

impl PipelineParams {
    pub fn build(d: i64, p: u64, n: u32, g: Option<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfDomain("level n must be at least 1".into()));
        }
        let ring = QuadRing::new(d, p, n + 1)?;
        let b = check_assumption_b(d, p)?;
        if !b.holds {
            return Err(Precondition::AssumptionB { p, r0: b.r0 }.into());
        }
        let g = match g {
            Some(g) => {
                let p2 = p * p;
                if arith::multiplicative_order(g % p2, p2, p * (p - 1)) != Some(p * (p - 1)) {
                    return Err(Precondition::NotPrimitiveRoot { g, p }.into());
                }
                g
            }
            None => primitive_root(p),
        };
        let epsilon = unit_residue(&b.epsilon, &ring);
        let rn = order_of(&epsilon)?;
        let pn = p.pow(n);
        if rn != pn * b.r0 {
            return Err(Error::Internal(format!(
                "order of eps mod {p}^{} is {rn}, expected {}",
                n + 1,
                pn * b.r0
            )));
        }
        let u = u32::from(b.r0 % 2 == 0);
        let sign_term = match ring.split_type() {
            SplitType::Inert => p + 1,
            SplitType::Split => p - 1,
        };
        if (sign_term << u) % b.r0 != 0 {
            return Err(Error::Internal(format!(
                "r0 = {} does not divide 2^u (p ± 1)",
                b.r0
            )));
        }
        let v = (sign_term << u) / b.r0;
        let eta = find_eta(&epsilon, g, v)?;
        let (e1, e2) = if ring.delta() == 0 {
            let f = ring.modulus();
            let e1 = dlog(residue((d / 4) as i128, f), g, p, n + 1)?;
            let inv2 = arith::mod_inv(2, pn).unwrap_or(0);
            (Some(e1), Some(mod_mul(e1 % pn, inv2, pn)))
        } else {
            (None, None)
        };
        Ok(Self {
            d,
            p,
            n,
            ring,
            g,
            epsilon_exact: b.epsilon,
            epsilon,
            r0: b.r0,
            rn,
            u,
            v,
            eta,
            split_type: ring.split_type(),
            e1,
            e2,
        })
    }

    /// `p^(n+1)`.
    pub fn modulus(&self) -> u64 {
        self.ring.modulus()
    }

    /// `phi(p^n)`.
    pub fn phi_pn(&self) -> u64 {
        arith::euler_phi_prime_power(self.p, self.n)
    }

    pub fn g_elem(&self) -> RingElem {
        self.ring.from_int(self.g as i128)
    }

    pub fn eta_power(&self, j: u64) -> RingElem {
        self.eta.residue.pow(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_laws_and_norms() {
        let r = QuadRing::new(188, 5, 2).unwrap();
        let e = r.elem(48, 7);
        assert_eq!(e.norm(), 1);
        assert_eq!(e * r.one(), e);
        let a = r.elem(3, 11);
        let b = r.elem(17, 4);
        assert_eq!((a * b).norm(), mod_mul(a.norm(), b.norm(), 25));
        assert_eq!(a * a.inverse().unwrap(), r.one());
        assert_eq!(a.conj().conj(), a);
        let r5 = QuadRing::new(5, 3, 2).unwrap();
        let w = r5.elem(0, 1);
        // omega^2 = 1 + omega when D = 5
        assert_eq!(w * w, r5.elem(1, 1));
        assert_eq!(w.norm(), 8); // -1 mod 9
    }

    #[test]
    fn ring_mismatch() {
        let a = QuadRing::new(188, 5, 2).unwrap().one();
        let b = QuadRing::new(188, 5, 1).unwrap().one();
        assert_eq!(a.try_mul(&b), Err(Error::RingMismatch));
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn bad_rings() {
        assert!(matches!(
            QuadRing::new(188, 47, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            QuadRing::new(188, 2, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            QuadRing::new(188, 9, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sqrt239_to_the_fourth() {
        let r = QuadRing::new(956, 3, 1).unwrap();
        let s = r.elem(0, 1);
        assert!(s.pow(4).is_one());
        assert_eq!(order_of(&s).unwrap(), 4);
    }

    #[test]
    fn unit_orders() {
        let r = QuadRing::new(92, 7, 1).unwrap();
        assert_eq!(order_of(&r.elem(24, 5)).unwrap(), 3);
        assert_eq!(order_of(&r.one()).unwrap(), 1);
        assert_eq!(order_of(&r.elem(0, 0)), Err(Error::NotAUnit));
        let r = QuadRing::new(956, 3, 1).unwrap();
        assert_eq!(order_of(&r.elem(6195120, 400729)).unwrap(), 4);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        // 10 is a primitive root mod 487 but not mod 487^2
        assert_ne!(primitive_root(487), 10);
    }

    #[test]
    fn assumption_b_examples() {
        let b = check_assumption_b(92, 7).unwrap();
        assert_eq!((b.r0, b.holds), (3, false));
        let b = check_assumption_b(956, 3).unwrap();
        assert_eq!((b.r0, b.holds), (4, true));
        assert_eq!((b.witness.x(), b.witness.y()), (1, 3));
        let b = check_assumption_b(188, 5).unwrap();
        assert_eq!((b.r0, b.holds), (6, true));
    }

    #[test]
    fn eta_for_239() {
        for n in 1..=3 {
            let params = PipelineParams::build(956, 3, n, None).unwrap();
            assert_eq!((params.u, params.v), (1, 2));
            assert_eq!(params.eta.method, EtaMethod::HenselLift);
            let eta = params.eta.residue;
            assert_eq!(order_of(&eta).unwrap(), 8);
            assert_eq!(eta.pow(4), eta.ring().from_int(-1));
            let h = subgroup_generated(&params.epsilon, params.g).unwrap();
            assert!(generates_quotient(&eta, params.v, &h));
            assert_eq!(params.rn, 4 * 3u64.pow(n));
        }
    }

    #[test]
    fn eta_by_search_is_p_prime() {
        let params = PipelineParams::build(188, 5, 2, None).unwrap();
        assert_eq!(params.eta.method, EtaMethod::SubgroupSearch);
        let t = order_of(&params.eta.residue).unwrap();
        assert_ne!(t % 5, 0);
        let (x, y) = &params.eta.lift;
        let back = params.ring.elem(
            (x % 125u32).to_i128().unwrap(),
            (y % 125u32).to_i128().unwrap(),
        );
        assert_eq!(back, params.eta.residue);
    }

    #[test]
    fn group_orders() {
        for (d, p, k) in [
            (188i64, 5u64, 1u32),
            (188, 3, 2),
            (956, 3, 2),
            (21, 5, 1),
            (28, 3, 2),
        ] {
            let r = QuadRing::new(d, p, k).unwrap();
            assert_eq!(
                r.units().count() as u64,
                r.unit_group_order(),
                "D={d} p={p} k={k}"
            );
            for u in r.units().step_by(7) {
                assert_eq!(r.unit_group_exponent() % order_of(&u).unwrap(), 0);
            }
        }
    }
}
