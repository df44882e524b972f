//! `iwalambda`: continued fractions, class numbers and lambda invariants from
//! the command line.

mod render;
mod survey;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iwalambda::pipeline::{iterate_n, verify_report, PipelineOptions, Verdict};
use iwalambda::{Error, MinusCF};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(
    name = "iwalambda",
    version,
    about = "Iwasawa lambda invariants from minus continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minus continued fraction of (delta + sqrt(D))/2, convergents and unit.
    Expand(Disc),
    /// h(-ell) h(-4) from the continued fraction of sqrt(ell).
    Classnum {
        #[arg(long)]
        ell: i64,
        /// Cross-check against reduced binary quadratic forms.
        #[arg(long)]
        verify: bool,
    },
    /// lambda_p(D1) + lambda_p(D2) for D = D1 D2, raising n until exact.
    Lambda(LambdaArgs),
    /// Run `lambda` over a range of ell with a resumable JSON-lines cache.
    Survey(SurveyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Disc {
    /// Use D = 4 ell.
    #[arg(long)]
    ell: Option<i64>,
    /// Discriminant D, 0 or 1 mod 4.
    #[arg(long)]
    d: Option<i64>,
}

impl Disc {
    fn value(&self) -> i64 {
        self.d.unwrap_or_else(|| 4 * self.ell.unwrap_or_default())
    }
}

#[derive(Args)]
struct LambdaArgs {
    #[command(flatten)]
    disc: Disc,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Print the trace as JSON.
    #[arg(long)]
    json: bool,
    /// Check every level against the Bernoulli product.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Clone)]
struct PipelineFlags {
    /// Inert fast path (D = 4 ell, ell prime, p inert in Q(sqrt(-ell))).
    #[arg(long)]
    fast_inert: bool,
    /// Primitive root mod p^2; the least one by default.
    #[arg(long)]
    g: Option<u64>,
    /// Fast path: sum k over half the range.
    #[arg(long, requires = "fast_inert")]
    half_k: bool,
    /// Fast path: sum i over half the range.
    #[arg(long, requires = "fast_inert")]
    half_i: bool,
}

impl PipelineFlags {
    fn options(&self) -> PipelineOptions {
        PipelineOptions {
            g: self.g,
            fast_inert: self.fast_inert,
            half_k: self.half_k,
            half_i: self.half_i,
        }
    }
}

#[derive(Args)]
struct SurveyArgs {
    /// First ell, inclusive.
    #[arg(long)]
    from: i64,
    /// Last ell, inclusive.
    #[arg(long)]
    to: i64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    /// JSON-lines cache; defaults to $IWALAMBDA_CACHE, then iwalambda-survey.jsonl.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV summary of every record in range.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineFlags,
    #[arg(long)]
    verify: bool,
}

const EXIT_PRECONDITION: u8 = 2;
const EXIT_NOT_EXACT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// 2 for bad input or failed hypotheses, 4 for anything that signals a bug.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition(_)
        | Error::NotFundamental(_)
        | Error::OutOfDomain(_)
        | Error::NotIrrational(_)
        | Error::NotAUnit
        | Error::ZeroDenominator
        | Error::EmptyExpansion
        | Error::AssumptionViolation(_) => EXIT_PRECONDITION,
        _ => EXIT_INTERNAL,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand(disc) => expand(disc.value()),
        Command::Classnum { ell, verify } => classnum(ell, verify),
        Command::Lambda(args) => lambda(&args),
        Command::Survey(args) => survey::run(&args),
    };
    result.unwrap_or_else(fail)
}

fn expand(d: i64) -> Result<ExitCode, Error> {
    let cf = MinusCF::for_discriminant(BigInt::from(d), 1 << 20)?;
    print!("{}", render::expansion(d, &cf)?);
    Ok(ExitCode::SUCCESS)
}

fn classnum(ell: i64, verify: bool) -> Result<ExitCode, Error> {
    use iwalambda::oracles::{check_assumption_a, imaginary_class_number};
    if ell <= 0 || ell % 4 != 3 {
        return Err(iwalambda::Precondition::NotEllThreeModFour(ell).into());
    }
    let d = 4 * ell;
    let split = check_assumption_a(d)?;
    let h = iwalambda::hz_class_number_product(d)?;
    println!("h({}) h({}) = {h}", split.d1, split.d2);
    if verify {
        let forms = imaginary_class_number(split.d1)? * imaginary_class_number(split.d2)?;
        if forms != h {
            return Err(Error::OracleMismatch(format!(
                "continued fraction gives {h}, reduced forms give {forms}"
            )));
        }
        println!("reduced forms agree");
    }
    Ok(ExitCode::SUCCESS)
}

fn lambda(args: &LambdaArgs) -> Result<ExitCode, Error> {
    let d = args.disc.value();
    let trace = iterate_n(d, args.p, args.n_max, &args.pipeline.options())?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&trace).expect("reports serialize")
        );
    } else {
        print!("{}", render::trace(&trace));
    }
    if args.verify {
        for report in &trace.trace {
            verify_report(report)?;
        }
        if !args.json {
            println!("Bernoulli product agrees at every level");
        }
    }
    Ok(match trace.verdict {
        Verdict::Exact(_) => ExitCode::SUCCESS,
        _ => ExitCode::from(EXIT_NOT_EXACT),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use iwalambda::Precondition;

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code(&Precondition::AssumptionB { p: 7, r0: 3 }.into()),
            2
        );
        assert_eq!(exit_code(&Error::NotIrrational("4".into())), 2);
        assert_eq!(exit_code(&Error::OracleMismatch(String::new())), 4);
        assert_eq!(exit_code(&Error::Internal(String::new())), 4);
    }

    #[test]
    fn disc_from_ell() {
        let d = Disc {
            ell: Some(47),
            d: None,
        };
        assert_eq!(d.value(), 188);
        let d = Disc {
            ell: None,
            d: Some(5),
        };
        assert_eq!(d.value(), 5);
    }
}
