//! Deterministic invariant checks shared by the property and acceptance suites.

#![allow(dead_code)]

use std::collections::HashMap;

use iwalambda::arith::{self, mod_mul, mod_pow};
use iwalambda::cyclo::{CharacterSpec, CharacterTable};
use iwalambda::pipeline::{
    check_inert_fast, lambda_sum_inert_fast, lambda_sum_inert_fast_with, PipelineOptions,
};
use iwalambda::quadring::{primitive_root, PipelineParams};
use iwalambda::zetavals::{
    c_sequence, c_sequence_recursive, dedekind_diag_closed_form, twisted_dedekind, RayClassRep,
};
use iwalambda::{convergents_mod, CycloNumber, MinusCF, Valuation};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

pub fn expansion(d: i64) -> MinusCF {
    MinusCF::for_discriminant(BigInt::from(d), 1 << 20).expect("expansion")
}

/// Discriminants where Assumptions A and B hold for `p`.
pub const QUALIFYING: &[(i64, u64)] = &[
    (956, 3),
    (188, 5),
    (12, 5),
    (21, 5),
    (28, 3),
    (33, 7),
    (44, 3),
    (217, 3),
    (237, 7),
    (253, 13),
];

/// `(ell, p)` where every hypothesis of the inert fast path holds.
pub const FAST: &[(i64, u64)] = &[(47, 5), (103, 5), (107, 7), (151, 7), (167, 5), (263, 5)];

/// `b_m = 2 b0 - delta` and `b_k = b_{m-k}` for every fundamental `5 <= D < limit`.
pub fn palindromic_periods(limit: i64) -> Check {
    let mut seen = 0;
    for d in 5..limit {
        if !arith::is_fundamental_discriminant(d) {
            continue;
        }
        let cf = expansion(d);
        ensure!(
            cf.has_palindromic_period(),
            "D = {d}: {cf} lacks the palindromic shape"
        );
        seen += 1;
    }
    ensure!(seen > 0, "no discriminants below {limit}");
    Ok(())
}

/// Closed form of `c_k` against the recursion for `reps` random representatives.
pub fn ck_recursion(reps: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < reps {
        let (d, p) = QUALIFYING[rng.gen_range(0..QUALIFYING.len())];
        let n = rng.gen_range(1..=2u32);
        let x: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let y: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let Ok(rep) = RayClassRep::new(x, y, d, p, n) else {
            continue;
        };
        let cf = expansion(d);
        let count = 3 * cf.period_len() + 5;
        let closed = c_sequence(&rep, &cf, count).map_err(|e| e.to_string())?;
        let rec = c_sequence_recursive(&rep, &cf, count).map_err(|e| e.to_string())?;
        ensure!(
            closed == rec,
            "D = {d}, p = {p}, n = {n}, alpha = {x} + {y} omega"
        );
        done += 1;
    }
    Ok(())
}

/// `D(a, a)` by direct summation against the closed form, every residue `a`.
pub fn dedekind_diagonal(p: u64, max_n: u32) -> Check {
    for n in 1..=max_n {
        let spec = CharacterSpec::new(p, n, primitive_root(p)).map_err(|e| e.to_string())?;
        let f = spec.modulus() as i64;
        for a in -f..=f {
            let direct = twisted_dedekind(a, a, &spec);
            let closed = dedekind_diag_closed_form(a, &spec);
            ensure!(
                direct == closed,
                "p = {p}, n = {n}, a = {a}: {direct} vs {closed}"
            );
            if a % p as i64 == 0 {
                ensure!(direct.is_zero(), "p = {p}, n = {n}, a = {a}: expected 0");
            }
        }
    }
    Ok(())
}

/// `p_{k-1} = p_{N-k-1}`, `q_{k-1} = -q_{N-k-1}` and `b_k = b_{N-k}` mod
/// `p^(n+1)` on the fast path, `N = p^n r m`.
pub fn palindromic_residues() -> Check {
    for &(ell, p) in FAST {
        let r = check_inert_fast(ell, p).map_err(|e| e.to_string())?;
        for n in 1..=2u32 {
            let f = p.pow(n + 1);
            let cf = expansion(4 * ell);
            let big_n = (p.pow(n) * r) as usize * cf.period_len();
            let conv = convergents_mod(&cf, big_n + 1, f);
            let g = primitive_root(p);
            for i in [0u64, 1, 2, p + 1] {
                let gi = mod_pow(g, i, f);
                for k in 1..big_n {
                    let a = &conv[k];
                    let b = &conv[big_n - k];
                    ensure!(
                        mod_mul(gi, a.p, f) == mod_mul(gi, b.p, f),
                        "ell = {ell}, p = {p}, n = {n}, k = {k}: p residues differ"
                    );
                    ensure!(
                        (mod_mul(gi, a.q, f) + mod_mul(gi, b.q, f)).is_multiple_of(f),
                        "ell = {ell}, p = {p}, n = {n}, k = {k}: q residues not opposite"
                    );
                    ensure!(cf.term(k) == cf.term(big_n - k), "b_{k} != b_{}", big_n - k);
                }
            }
        }
    }
    Ok(())
}

/// For `p = 1 mod 4` halving the `k`- or `i`-range gives exactly half the
/// total, so the valuation is unchanged; for `p = 3 mod 4` halving is refused.
pub fn half_range_valuations() -> Check {
    let half = BigRational::new(1.into(), 2.into());
    for &(ell, p) in FAST {
        let halves = [
            PipelineOptions {
                half_k: true,
                ..Default::default()
            },
            PipelineOptions {
                half_i: true,
                ..Default::default()
            },
        ];
        for n in 1..=2u32 {
            let full = lambda_sum_inert_fast(ell, p, n).map_err(|e| e.to_string())?;
            for opts in &halves {
                let res = lambda_sum_inert_fast_with(ell, p, n, opts);
                if p % 4 == 3 {
                    ensure!(res.is_err(), "ell = {ell}, p = {p}: {opts:?} accepted");
                    continue;
                }
                let res = res.map_err(|e| e.to_string())?;
                ensure!(
                    res.value == full.value.scale(&half),
                    "ell = {ell}, p = {p}, n = {n}, {opts:?}: {} is not half of {}",
                    res.value,
                    full.value
                );
                ensure!(
                    res.valuation == full.valuation,
                    "ell = {ell}, p = {p}, n = {n}, {opts:?}: {} vs {}",
                    res.valuation,
                    full.valuation
                );
            }
        }
    }
    Ok(())
}

/// `sum_{k=1}^{N} (q_k q_{k-1} - q_{k-1} q_{k-2})` and the same for `p` vanish
/// on least residues of `g^i q_k`, `g^i p_k` mod `p^(n+1)`, `N = rn m`.
pub fn telescoping() -> Check {
    for &(d, p) in QUALIFYING {
        for n in 1..=2u32 {
            let params = PipelineParams::build(d, p, n, None).map_err(|e| e.to_string())?;
            let f = params.modulus();
            let cf = expansion(d);
            let big_n = params.rn as usize * cf.period_len();
            let conv = convergents_mod(&cf, big_n + 1, f);
            for i in 0..4u64 {
                let gi = mod_pow(params.g, i, f) as i128;
                let sc = |v: u64| gi * v as i128 % f as i128;
                let (mut sp, mut sq) = (0i128, 0i128);
                // conv[k + 1] holds index k
                for k in 1..=big_n {
                    sp += sc(conv[k + 1].p) * sc(conv[k].p) - sc(conv[k].p) * sc(conv[k - 1].p);
                    sq += sc(conv[k + 1].q) * sc(conv[k].q) - sc(conv[k].q) * sc(conv[k - 1].q);
                }
                ensure!(
                    sp == 0 && sq == 0,
                    "D = {d}, p = {p}, n = {n}, i = {i}: sums {sp}, {sq}"
                );
            }
        }
    }
    Ok(())
}

pub fn random_integral(rng: &mut StdRng, p: u64, n: u32, bound: i64) -> CycloNumber {
    let phi = arith::euler_phi_prime_power(p, n) as usize;
    let coeffs = (0..phi)
        .map(|_| BigRational::from_integer(rng.gen_range(-bound..=bound).into()))
        .collect();
    CycloNumber::from_coeffs(p, n, coeffs).expect("phi coefficients")
}

/// `v(xy) = v(x) + v(y)`, `v(sigma_a x) = v(x)`, and the norm and division
/// routes agree.
pub fn valuation_properties(samples: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for &(p, n) in &[(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)] {
        let f = p.pow(n);
        for _ in 0..samples {
            let x = random_integral(&mut rng, p, n, 30);
            let y = random_integral(&mut rng, p, n, 30);
            let vx = x.valuation().map_err(|e| e.to_string())?;
            let vy = y.valuation().map_err(|e| e.to_string())?;
            let vxy = (&x * &y).valuation().map_err(|e| e.to_string())?;
            let expected = match (vx, vy) {
                (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
                _ => Valuation::Infinite,
            };
            ensure!(
                vxy == expected,
                "p = {p}, n = {n}: v({x} * {y}) = {vxy}, expected {expected}"
            );
            ensure!(
                x.valuation_by_division().map_err(|e| e.to_string())? == vx,
                "p = {p}, n = {n}: routes disagree on {x}"
            );
            let a = loop {
                let a = rng.gen_range(1..f);
                if a % p != 0 {
                    break a;
                }
            };
            let conj = x.galois(a).map_err(|e| e.to_string())?;
            ensure!(
                conj.valuation().map_err(|e| e.to_string())? == vx,
                "p = {p}, n = {n}: sigma_{a} changes the valuation of {x}"
            );
        }
    }
    Ok(())
}

/// Sum of `psi(t) {t/f}` vanishes for every level used here.
pub fn character_sums() -> Check {
    for &(p, n) in &[
        (3u64, 1u32),
        (3, 2),
        (3, 3),
        (5, 1),
        (5, 2),
        (7, 1),
        (13, 1),
    ] {
        let table = CharacterTable::new(CharacterSpec::new(p, n, primitive_root(p)).unwrap());
        let s = iwalambda::zetavals::character_fraction_sum(&table);
        ensure!(s.is_zero(), "p = {p}, n = {n}: {s}");
    }
    Ok(())
}

/// Every unit mod `p^(n+1)` is `g^i eta^j eps^k` for exactly `2^u` triples with
/// `i < p^n (p-1)`, `j < v`, `k < rn`.
pub fn index_map_multiplicity(d: i64, p: u64, n: u32) -> Check {
    let params = PipelineParams::build(d, p, n, None).map_err(|e| e.to_string())?;
    let ring = &params.ring;
    let g = params.g_elem();
    let order_g = arith::euler_phi_prime_power(p, n + 1);
    let mut hits: HashMap<(u64, u64), u32> = HashMap::new();
    let mut gi = ring.one();
    for _ in 0..order_g {
        let mut gij = gi;
        for _ in 0..params.v {
            let mut cur = gij;
            for _ in 0..params.rn {
                *hits.entry((cur.x(), cur.y())).or_default() += 1;
                cur = cur * params.epsilon;
            }
            gij = gij * params.eta.residue;
        }
        gi = gi * g;
    }
    let expected = 1u32 << params.u;
    ensure!(
        hits.len() as u64 == ring.unit_group_order(),
        "D = {d}, p = {p}, n = {n}: {} of {} units reached",
        hits.len(),
        ring.unit_group_order()
    );
    ensure!(
        hits.values().all(|&c| c == expected),
        "D = {d}, p = {p}, n = {n}: multiplicity differs from {expected}"
    );
    Ok(())
}
