//! Exact arithmetic for Iwasawa lambda invariants of imaginary quadratic
//! fields, computed from minus continued fractions of real quadratic surds.

pub mod arith;
pub mod cfrac;
pub mod cyclo;
pub mod error;
pub mod oracles;
pub mod pipeline;
pub mod quadring;
pub mod scalar;
pub mod zetavals;

use num_bigint::BigInt;

pub use cfrac::{
    convergents, convergents_mod, expand_minus_cf, fundamental_unit, hz_class_number_product,
    plus_to_minus, ConvergentPair, FundamentalUnit, MinusContinuedFraction, QuadraticSurd,
};
pub use cyclo::{CharacterSpec, CharacterTable, CycloNumber, Cyclotomic, Valuation};
pub use error::{Error, Precondition, Result};
pub use scalar::Scalar;

pub type Surd = QuadraticSurd<BigInt>;
pub type MinusCF = MinusContinuedFraction<BigInt>;
pub type Unit = FundamentalUnit<BigInt>;

/// Library version, part of every survey cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
