use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer type backing the generic surd, continued-fraction and
/// cyclotomic types: `i64`, `i128` or `BigInt`.
///
/// Fixed-width scalars are faster but may overflow on large fundamental units
/// or long Dedekind sums; `BigInt` never does.
pub trait Scalar:
    Integer
    + Signed
    + Roots
    + Clone
    + Debug
    + Display
    + Hash
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Into<BigInt>
    + Send
    + Sync
    + 'static
{
    fn lit(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Debug
        + Display
        + Hash
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Into<BigInt>
        + Send
        + Sync
        + 'static
{
}
