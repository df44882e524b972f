//! Assembly of `lambda_p(D1) + lambda_p(D2)` from twisted Dedekind sums over
//! the ray class group, the inert fast path, and the verdict logic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, mod_mul, residue};
use crate::cfrac::{convergents_mod, fundamental_unit};
use crate::cyclo::{CharacterSpec, CharacterTable, CycloNumber, Valuation};
use crate::error::{Error, Precondition, Result};
use crate::oracles::{self, GenusSplit};
use crate::quadring::{
    dlog, order_of, primitive_root, unit_residue, EtaMethod, PipelineParams, QuadRing, SplitType,
};
use crate::zetavals::{scaled_to_cyclo, unit_exponents};
use crate::MinusCF;

const MAX_STEPS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Verdict {
    /// `lambda_p(D1) + lambda_p(D2)` equals the value.
    Exact(u64),
    /// The sum is at least the value.
    LowerBound(u64),
    /// No level was computed.
    Inconclusive,
}

impl Verdict {
    pub fn from_valuation(val: Valuation, phi_pn: u64) -> Self {
        match val {
            Valuation::Finite(v) if (v as u64) < phi_pn => Verdict::Exact(v as u64),
            _ => Verdict::LowerBound(phi_pn),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::Exact(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    General,
    InertFast,
}

/// Reproducibility echo of every choice behind a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub path: PathKind,
    pub g: u64,
    /// `psi(g) = zeta^twist`.
    pub twist: u64,
    pub period_len: usize,
    pub r0: u64,
    pub rn: u64,
    pub u: u32,
    pub v: u64,
    pub split_type: SplitType,
    pub eta: Option<EtaEcho>,
    pub e1: Option<u64>,
    pub e2: Option<u64>,
    pub half_k: bool,
    pub half_i: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaEcho {
    pub x: String,
    pub y: String,
    pub residue: (u64, u64),
    pub method: EtaMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitReason {
    /// One prime above `p` and `p` prime to the class number: lambda = 0.
    OnePrimeCoprimeClassNumber,
    /// `p` splits: lambda >= 1.
    SplitPrime,
    /// `p` divides the class number: lambda >= 1.
    PDividesClassNumber,
    /// Bound forced by the other summand.
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBound {
    pub disc: i64,
    pub lower: u64,
    pub upper: u64,
    pub reasons: Vec<SplitReason>,
}

impl SplitBound {
    pub fn forced(&self) -> Option<u64> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    /// `(lambda_p(D1), lambda_p(D2))` when the bounds pin both.
    pub values: Option<(u64, u64)>,
    pub bounds: [SplitBound; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "D1")]
    pub d1: i64,
    #[serde(rename = "D2")]
    pub d2: i64,
    pub p: u64,
    pub n: u32,
    pub value: CycloNumber,
    pub valuation: Valuation,
    pub phi_pn: u64,
    pub verdict: Verdict,
    pub split: Option<SplitResult>,
    pub params: ParamsEcho,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Primitive root; the least one mod `p^2` when absent.
    pub g: Option<u64>,
    /// Use the inert fast path (requires `D = 4 ell`).
    pub fast_inert: bool,
    /// Fast path: sum `k` over the first half of the period only.
    pub half_k: bool,
    /// Fast path, `p = 1 mod 4`: sum `i` over the first half only.
    pub half_i: bool,
}

/// Per-level reports and the final one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaTrace {
    pub trace: Vec<LambdaReport>,
    pub verdict: Verdict,
}

impl LambdaTrace {
    pub fn last(&self) -> Option<&LambdaReport> {
        self.trace.last()
    }
}

/// Assumption A with both genus discriminants negative, `p` odd and prime to `D`.
pub fn check_preconditions(d: i64, p: u64) -> Result<GenusSplit> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Precondition::NotOddPrime(p).into());
    }
    if d % p as i64 == 0 {
        return Err(Precondition::PDividesD { p, d }.into());
    }
    oracles::check_assumption_a(d)
}

fn expansion(d: i64) -> Result<MinusCF> {
    MinusCF::for_discriminant(BigInt::from(d), MAX_STEPS)
}

fn partial_quotients(cf: &MinusCF, count: usize) -> Result<Vec<i128>> {
    (0..count)
        .map(|k| {
            cf.term(k)
                .to_i128()
                .ok_or_else(|| Error::Internal("partial quotient overflow".into()))
        })
        .collect()
}

fn finish(
    d: i64,
    split: GenusSplit,
    p: u64,
    n: u32,
    value: CycloNumber,
    params: ParamsEcho,
) -> Result<LambdaReport> {
    if !value.is_integral() {
        return Err(Error::Internal(format!(
            "aggregate {value} is not an algebraic integer"
        )));
    }
    let valuation = value.valuation()?;
    let phi_pn = arith::euler_phi_prime_power(p, n);
    let verdict = Verdict::from_valuation(valuation, phi_pn);
    let mut report = LambdaReport {
        d,
        d1: split.d1,
        d2: split.d2,
        p,
        n,
        value,
        valuation,
        phi_pn,
        verdict,
        split: None,
        params,
    };
    report.split = split_lambdas(&report, split.d1, split.d2)?;
    Ok(report)
}

/// `sum_{j<v} sum_{k=1}^{rn m} (b_k/2) D(h_{j,k-1}, h_{j,k-1}) - D(h_{j,k-1}, h_{j,k-2})`.
pub fn aggregate(
    params: &PipelineParams,
    cf: &MinusCF,
    table: &CharacterTable,
) -> Result<CycloNumber> {
    let f = params.modulus();
    if table.modulus() != f {
        return Err(Error::LevelMismatch);
    }
    let terms = params.rn as usize * cf.period_len();
    let conv = convergents_mod(cf, terms, f);
    let b = partial_quotients(cf, terms + 1)?;
    let units = unit_exponents(table);
    let order = table.order() as usize;
    let fi = f as i128;
    // h_{j,k} for k = -1 .. terms-1, stored at index k + 1
    let hs: Vec<Vec<u64>> = (0..params.v)
        .map(|j| {
            let eta = params.eta_power(j);
            let (x, y) = (eta.x() as i128, eta.y() as i128);
            conv.iter()
                .map(|c| residue(-(x * c.q as i128 + y * c.p as i128), f))
                .collect()
        })
        .collect();
    // 8 f^2 times the aggregate, bucketed by the exponent of psi(t)
    let buckets = hs
        .par_iter()
        .flat_map_iter(|h| (1..=terms).map(move |k| (h, k)))
        .fold(
            || vec![0i128; order],
            |mut acc, (h, k)| {
                let (h1, h2) = (h[k], h[k - 1]);
                for &(t, e) in &units {
                    let u1 = 2 * mod_mul(h1, t, f) as i128 - fi;
                    let u2 = 2 * mod_mul(h2, t, f) as i128 - fi;
                    acc[e as usize] += b[k] * u1 * u1 - 2 * u1 * u2;
                }
                acc
            },
        )
        .reduce(
            || vec![0i128; order],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(scaled_to_cyclo(table.spec(), buckets, 8 * fi * fi))
}

pub fn lambda_sum_general(d: i64, p: u64, n: u32) -> Result<LambdaReport> {
    lambda_sum_general_with(d, p, n, &PipelineOptions::default())
}

pub fn lambda_sum_general_with(
    d: i64,
    p: u64,
    n: u32,
    opts: &PipelineOptions,
) -> Result<LambdaReport> {
    let split = check_preconditions(d, p)?;
    let params = PipelineParams::build(d, p, n, opts.g)?;
    let cf = expansion(d)?;
    let spec = CharacterSpec::new(p, n, params.g)?;
    let value = aggregate(&params, &cf, &CharacterTable::new(spec))?;
    let (ex, ey) = &params.eta.lift;
    let echo = ParamsEcho {
        path: PathKind::General,
        g: params.g,
        twist: spec.twist,
        period_len: cf.period_len(),
        r0: params.r0,
        rn: params.rn,
        u: params.u,
        v: params.v,
        split_type: params.split_type,
        eta: Some(EtaEcho {
            x: ex.to_string(),
            y: ey.to_string(),
            residue: (params.eta.residue.x(), params.eta.residue.y()),
            method: params.eta.method,
        }),
        e1: params.e1,
        e2: params.e2,
        half_k: false,
        half_i: false,
    };
    finish(d, split, p, n, value, echo)
}

/// Checks every hypothesis of the inert fast path; returns the order `r` of
/// the unit mod `p`.
pub fn check_inert_fast(ell: i64, p: u64) -> Result<u64> {
    if ell <= 0 || ell % 4 != 3 || !arith::is_prime(ell as u64) {
        return Err(Precondition::NotEllThreeModFour(ell).into());
    }
    if p == 2 || !arith::is_prime(p) {
        return Err(Precondition::NotOddPrime(p).into());
    }
    let d = 4 * ell;
    if d % p as i64 == 0 {
        return Err(Precondition::PDividesD { p, d }.into());
    }
    let (_, h) = oracles::real_class_numbers(d)?;
    if h != 1 {
        return Err(Precondition::ClassNumberNotOne { d, h }.into());
    }
    if oracles::kronecker_symbol(-ell, p as i64) != -1 {
        return Err(Precondition::NotInertImaginary { p, ell }.into());
    }
    let unit = fundamental_unit(BigInt::from(d))?;
    let r = order_of(&unit_residue(&unit, &QuadRing::new(d, p, 1)?))?;
    let expected = if p % 4 == 1 { p + 1 } else { (p - 1) / 2 };
    if r != expected {
        return Err(Precondition::UnitOrder { p, r, expected }.into());
    }
    if unit_residue(&unit, &QuadRing::new(d, p, 2)?)
        .pow(r)
        .is_one()
    {
        return Err(Precondition::AssumptionB { p, r0: r }.into());
    }
    Ok(r)
}

pub fn lambda_sum_inert_fast(ell: i64, p: u64, n: u32) -> Result<LambdaReport> {
    lambda_sum_inert_fast_with(ell, p, n, &PipelineOptions::default())
}

/// `sum_i zeta^i sum_k (t_k q_{k-1} + zeta^{e2} s_k p_{k-1}) / (2 p^(n+1))`.
pub fn lambda_sum_inert_fast_with(
    ell: i64,
    p: u64,
    n: u32,
    opts: &PipelineOptions,
) -> Result<LambdaReport> {
    if n == 0 {
        return Err(Error::OutOfDomain("level n must be at least 1".into()));
    }
    let r = check_inert_fast(ell, p)?;
    if opts.half_i && opts.half_k {
        // each halving is exact only against the other range in full
        return Err(Error::OutOfDomain(
            "halve at most one of the i- and k-ranges".into(),
        ));
    }
    if (opts.half_i || opts.half_k) && p % 4 != 1 {
        // with r odd the k = N/2 and k = N terms differ, so the half sum is not half the total
        return Err(Error::OutOfDomain(format!(
            "halving a range needs p = 1 mod 4, got {p}"
        )));
    }
    let d = 4 * ell;
    let split = oracles::genus_split(d)?;
    let g = match opts.g {
        Some(g) => {
            CharacterSpec::new(p, n, g)?;
            g
        }
        None => primitive_root(p),
    };
    let f = p.pow(n + 1);
    let pn = p.pow(n);
    let e1 = dlog(residue(ell as i128, f), g, p, n + 1)?;
    let e2 = mod_mul(e1 % pn, arith::mod_inv(2, pn).unwrap_or(0), pn);
    let cf = expansion(d)?;
    let full = (pn * r) as usize * cf.period_len();
    let k_max = if opts.half_k { full / 2 } else { full };
    let i_max = if opts.half_i {
        pn * (p - 1) / 2
    } else {
        pn * (p - 1)
    };
    let conv = convergents_mod(&cf, k_max + 1, f);
    let b = partial_quotients(&cf, k_max + 1)?;
    let fi = f as i128;
    let order = pn as usize;
    // indices into conv: k -> k + 1
    let buckets = (1..=i_max)
        .into_par_iter()
        .fold(
            || vec![0i128; order],
            |mut acc, i| {
                let gi = arith::mod_pow(g, i, f);
                let scaled = |v: u64| mod_mul(gi, v, f) as i128;
                let (mut sum_t, mut sum_s) = (0i128, 0i128);
                for k in 1..=k_max {
                    let (p0, p1, p2) = (
                        scaled(conv[k + 1].p),
                        scaled(conv[k].p),
                        scaled(conv[k - 1].p),
                    );
                    let (q0, q1, q2) = (
                        scaled(conv[k + 1].q),
                        scaled(conv[k].q),
                        scaled(conv[k - 1].q),
                    );
                    let s = (b[k] * p1 - p2 - p0) / fi;
                    let t = (b[k] * q1 - q2 - q0) / fi;
                    sum_t += t * q1;
                    sum_s += s * p1;
                }
                acc[(i % pn) as usize] += sum_t;
                acc[((i + e2) % pn) as usize] += sum_s;
                acc
            },
        )
        .reduce(
            || vec![0i128; order],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let spec = CharacterSpec::new(p, n, g)?;
    let value = scaled_to_cyclo(&spec, buckets, 2 * fi);
    let echo = ParamsEcho {
        path: PathKind::InertFast,
        g,
        twist: 1,
        period_len: cf.period_len(),
        r0: r,
        rn: pn * r,
        u: u32::from(r % 2 == 0),
        v: (if p % 4 == 1 { p + 1 } else { p - 1 } << u32::from(r % 2 == 0)) / r,
        split_type: QuadRing::new(d, p, 1)?.split_type(),
        eta: None,
        e1: Some(e1),
        e2: Some(e2),
        half_k: opts.half_k,
        half_i: opts.half_i,
    };
    finish(d, split, p, n, value, echo)
}

/// Dispatches on `opts.fast_inert`; `D = 4 ell` on the fast path.
pub fn lambda_sum(d: i64, p: u64, n: u32, opts: &PipelineOptions) -> Result<LambdaReport> {
    if opts.fast_inert {
        if d % 4 != 0 {
            return Err(Precondition::NotEllThreeModFour(d).into());
        }
        lambda_sum_inert_fast_with(d / 4, p, n, opts)
    } else {
        lambda_sum_general_with(d, p, n, opts)
    }
}

/// Runs `n = 1, 2, ...` until the verdict is exact or `n = n_max`.
pub fn iterate_n(d: i64, p: u64, n_max: u32, opts: &PipelineOptions) -> Result<LambdaTrace> {
    check_preconditions(d, p)?;
    let mut trace = Vec::new();
    let mut verdict = Verdict::Inconclusive;
    for n in 1..=n_max {
        let report = lambda_sum(d, p, n, opts)?;
        verdict = report.verdict;
        trace.push(report);
        if verdict.is_exact() {
            break;
        }
    }
    Ok(LambdaTrace { trace, verdict })
}

/// Bounds on `lambda_p(D1)` and `lambda_p(D2)` from an exact sum.
pub fn split_lambdas(report: &LambdaReport, d1: i64, d2: i64) -> Result<Option<SplitResult>> {
    let Verdict::Exact(total) = report.verdict else {
        return Ok(None);
    };
    let p = report.p;
    let mut bounds = [d1, d2].map(|disc| SplitBound {
        disc,
        lower: 0,
        upper: total,
        reasons: Vec::new(),
    });
    for b in bounds.iter_mut() {
        let h = oracles::imaginary_class_number(b.disc)?;
        let splits = oracles::kronecker_symbol(b.disc, p as i64) == 1;
        if !splits && h % p != 0 {
            b.upper = 0;
            b.reasons.push(SplitReason::OnePrimeCoprimeClassNumber);
        }
        if splits {
            b.lower = b.lower.max(1);
            b.reasons.push(SplitReason::SplitPrime);
        }
        if h % p == 0 {
            b.lower = b.lower.max(1);
            b.reasons.push(SplitReason::PDividesClassNumber);
        }
    }
    let other: Vec<(u64, u64)> = bounds.iter().rev().map(|b| (b.lower, b.upper)).collect();
    for (x, &(lo, hi)) in bounds.iter_mut().zip(&other) {
        let lower = total.saturating_sub(hi);
        let upper = total.saturating_sub(lo);
        if lower > x.lower || upper < x.upper {
            x.reasons.push(SplitReason::Complement);
        }
        x.lower = x.lower.max(lower);
        x.upper = x.upper.min(upper);
    }
    let [a, b] = bounds;
    if a.lower > a.upper || b.lower > b.upper {
        return Err(Error::Internal(format!(
            "split rules contradict the exact sum {total} for ({d1}, {d2})"
        )));
    }
    let values = a.forced().zip(b.forced());
    Ok(Some(SplitResult {
        values,
        bounds: [a, b],
    }))
}

/// `lambda_2(Q(sqrt(Delta))) = -1 + sum_{odd l | Delta} 2^(ord_2(l^2 - 1) - 3)`.
pub fn ferrero_kida_lambda2(delta: i64) -> Result<i64> {
    if delta >= 0 || delta == -4 || delta == -8 {
        return Err(Error::OutOfDomain(format!(
            "Ferrero-Kida needs a negative discriminant other than -4, -8; got {delta}"
        )));
    }
    if !arith::is_fundamental_discriminant(delta) {
        return Err(Error::NotFundamental(delta));
    }
    let sum: i64 = arith::factorize(delta.unsigned_abs())
        .into_iter()
        .filter(|&(l, _)| l != 2)
        .map(|(l, _)| {
            let v = ((l as u128) * (l as u128) - 1).trailing_zeros();
            1i64 << (v - 3)
        })
        .sum();
    Ok(sum - 1)
}

/// `2^(u-1) L(0, eps1 psi') L(0, eps2 psi')` with `psi'^2` the character of
/// the report, which equals the aggregate.
pub fn oracle_value(report: &LambdaReport) -> Result<CycloNumber> {
    let p = report.p;
    let pn = p.pow(report.n);
    let half = mod_mul(report.params.twist, arith::mod_inv(2, pn).unwrap_or(0), pn);
    let spec = CharacterSpec::new(p, report.n, report.params.g)?.with_twist(half);
    let table = CharacterTable::new(spec);
    let l1 = oracles::bernoulli_l0_twisted(report.d1, &table)?;
    let l2 = oracles::bernoulli_l0_twisted(report.d2, &table)?;
    let factor = if report.params.u == 1 {
        BigRational::one()
    } else {
        BigRational::new(1.into(), 2.into())
    };
    Ok(l1.try_mul(&l2)?.scale(&factor))
}

/// Compares a report with the Bernoulli oracle exactly; a halved range must
/// give half the oracle value.
pub fn verify_report(report: &LambdaReport) -> Result<CycloNumber> {
    let mut oracle = oracle_value(report)?;
    if report.params.half_k || report.params.half_i {
        oracle = oracle.scale(&BigRational::new(1.into(), 2.into()));
    }
    if oracle == report.value {
        Ok(oracle)
    } else {
        Err(Error::OracleMismatch(format!(
            "aggregate {} (valuation {}) but Bernoulli product {} (valuation {})",
            report.value,
            report.valuation,
            oracle,
            oracle.valuation()?
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(p: u64, n: u32, e: i64) -> CycloNumber {
        CycloNumber::zeta_power(p, n, e)
    }

    fn int(p: u64, n: u32, c: i64) -> CycloNumber {
        CycloNumber::from_rational(p, n, BigRational::from_integer(c.into()))
    }

    fn conjugate(a: &CycloNumber, b: &CycloNumber) -> bool {
        a.galois_conjugate_index(b).is_some()
    }

    #[test]
    fn ell_239_level_one() {
        let r = lambda_sum_general(956, 3, 1).unwrap();
        let known = &(&int(3, 1, -12) * &zeta(3, 1, 1)) - &int(3, 1, 24);
        assert!(conjugate(&r.value, &known), "{}", r.value);
        assert_eq!(r.valuation, Valuation::Finite(3));
        assert_eq!(r.verdict, Verdict::LowerBound(2));
        assert_eq!((r.d1, r.d2), (-239, -4));
        verify_report(&r).unwrap();
    }

    #[test]
    fn ell_47_general_and_fast() {
        let general = lambda_sum_general(188, 5, 1).unwrap();
        let fast = lambda_sum_inert_fast(47, 5, 1).unwrap();
        assert_eq!(general.value, fast.value);
        assert_eq!(general.verdict, Verdict::Exact(2));
        let s = general.split.clone().unwrap();
        assert_eq!(s.values, Some((1, 1)));
        verify_report(&general).unwrap();
        verify_report(&fast).unwrap();
    }

    #[test]
    fn fast_path_rejections() {
        assert!(matches!(
            lambda_sum_inert_fast(13, 5, 1),
            Err(Error::Precondition(Precondition::NotEllThreeModFour(13)))
        ));
        assert!(matches!(
            lambda_sum_inert_fast(79, 5, 1),
            Err(Error::Precondition(Precondition::ClassNumberNotOne { .. }))
        ));
        // 3 splits in Q(sqrt(-47))
        assert!(matches!(
            lambda_sum_inert_fast(47, 3, 1),
            Err(Error::Precondition(Precondition::NotInertImaginary { .. }))
        ));
        let half_k = PipelineOptions {
            half_k: true,
            ..Default::default()
        };
        assert!(matches!(
            lambda_sum_inert_fast_with(127, 7, 1, &half_k),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn assumption_b_rejected() {
        let err = lambda_sum_general(92, 7, 1).unwrap_err();
        assert_eq!(
            err,
            Error::Precondition(Precondition::AssumptionB { p: 7, r0: 3 })
        );
        assert_eq!(err.to_string(), "Assumption B fails: 7² | ε^3 − 1");
    }

    #[test]
    fn empty_iteration() {
        let t = iterate_n(188, 5, 0, &PipelineOptions::default()).unwrap();
        assert!(t.trace.is_empty());
        assert_eq!(t.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdict_rule() {
        assert_eq!(
            Verdict::from_valuation(Valuation::Finite(1), 2),
            Verdict::Exact(1)
        );
        assert_eq!(
            Verdict::from_valuation(Valuation::Finite(2), 2),
            Verdict::LowerBound(2)
        );
        assert_eq!(
            Verdict::from_valuation(Valuation::Infinite, 4),
            Verdict::LowerBound(4)
        );
    }

    #[test]
    fn ferrero_kida() {
        assert_eq!(ferrero_kida_lambda2(-3).unwrap(), 0);
        assert_eq!(ferrero_kida_lambda2(-7).unwrap(), 1);
        assert_eq!(ferrero_kida_lambda2(-15).unwrap(), 1);
        assert!(matches!(
            ferrero_kida_lambda2(-4),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            ferrero_kida_lambda2(-8),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            ferrero_kida_lambda2(5),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            ferrero_kida_lambda2(-27),
            Err(Error::NotFundamental(-27))
        ));
    }

    #[test]
    fn report_round_trip() {
        let r = lambda_sum_general(188, 5, 1).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: LambdaReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
