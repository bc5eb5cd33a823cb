//! Exact integer scalars for the matrix layer.
//!
//! Everything in [`crate::abelian`] and [`crate::lemma2`] is written against
//! [`IntScalar`] so the same code runs on machine integers (fast, for small
//! test matrices) and on [`num_bigint::BigInt`] (the default, immune to
//! overflow).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + FromStr + Hash + From<i64> + Send + Sync + 'static
{
    /// Lossy conversion used only for diagnostics and small-entry fast paths.
    fn to_i128(&self) -> Option<i128>;
}

impl IntScalar for i64 {
    fn to_i128(&self) -> Option<i128> {
        Some(*self as i128)
    }
}

impl IntScalar for i128 {
    fn to_i128(&self) -> Option<i128> {
        Some(*self)
    }
}

impl IntScalar for BigInt {
    fn to_i128(&self) -> Option<i128> {
        num_traits::ToPrimitive::to_i128(self)
    }
}
