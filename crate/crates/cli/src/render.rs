//! Plain-text rendering of expansions and lambda traces.

use std::fmt::Write;

use iwalambda::arith;
use iwalambda::pipeline::{LambdaTrace, PathKind, SplitResult, Verdict};
use iwalambda::{convergents, fundamental_unit, Error, MinusCF};

pub fn expansion(d: i64, cf: &MinusCF) -> Result<String, Error> {
    let mut out = String::new();
    let m = cf.period_len();
    writeln!(out, "D = {d}").unwrap();
    writeln!(out, "expansion: {cf}").unwrap();
    writeln!(out, "period length: {m}").unwrap();
    if cf.has_palindromic_period() {
        writeln!(out, "sum of period: {}", cf.period_sum()).unwrap();
    }
    writeln!(out, "convergents:").unwrap();
    writeln!(out, "{:>5}  {:>24}  {:>24}", "k", "p_k", "q_k").unwrap();
    for c in convergents(cf, cf.head().len() + m).iter().skip(1) {
        writeln!(out, "{:>5}  {:>24}  {:>24}", c.k, c.p, c.q).unwrap();
    }
    if arith::is_fundamental_discriminant(d) {
        let unit = fundamental_unit(cf.radicand().clone())?;
        writeln!(out, "fundamental unit: {unit}").unwrap();
    } else {
        writeln!(
            out,
            "fundamental unit: skipped, {d} is not a field discriminant"
        )
        .unwrap();
    }
    Ok(out)
}

fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Exact(x) => format!("exact {x}"),
        Verdict::LowerBound(x) => format!("at least {x}"),
        Verdict::Inconclusive => "inconclusive".to_string(),
    }
}

fn split(s: &SplitResult, p: u64) -> String {
    let mut out = String::new();
    for b in &s.bounds {
        let range = match b.forced() {
            Some(v) => format!("= {v}"),
            None => format!("in [{}, {}]", b.lower, b.upper),
        };
        writeln!(out, "  lambda_{p}({}) {range}", b.disc).unwrap();
    }
    out
}

pub fn trace(t: &LambdaTrace) -> String {
    let mut out = String::new();
    let Some(last) = t.last() else {
        writeln!(out, "no levels computed; verdict {}", verdict(&t.verdict)).unwrap();
        return out;
    };
    writeln!(
        out,
        "D = {} = ({}) ({}), p = {}",
        last.d, last.d1, last.d2, last.p
    )
    .unwrap();
    writeln!(
        out,
        "{} path, g = {}, period length {}, r0 = {}",
        match last.params.path {
            PathKind::General => "general",
            PathKind::InertFast => "inert fast",
        },
        last.params.g,
        last.params.period_len,
        last.params.r0
    )
    .unwrap();
    writeln!(
        out,
        "{:>3}  {:>6}  {:>9}  {:<14}  value",
        "n", "phi", "valuation", "verdict"
    )
    .unwrap();
    for r in &t.trace {
        writeln!(
            out,
            "{:>3}  {:>6}  {:>9}  {:<14}  {}",
            r.n,
            r.phi_pn,
            r.valuation.to_string(),
            verdict(&r.verdict),
            r.value
        )
        .unwrap();
    }
    writeln!(
        out,
        "lambda_{p}({}) + lambda_{p}({}): {}",
        last.d1,
        last.d2,
        verdict(&t.verdict),
        p = last.p
    )
    .unwrap();
    if let Some(s) = &last.split {
        out.push_str(&split(s, last.p));
    }
    out
}
