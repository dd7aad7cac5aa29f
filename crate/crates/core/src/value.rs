use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};

/// Integer type usable as a domain value.
///
/// Signed primitive integers only: offsets into dense occurrence vectors and
/// bitsets are computed as `v - lo`, which must not wrap.
pub trait Value:
    PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Distance from `base` as an index. Panics if `self < base`.
    #[inline]
    fn offset_from(self, base: Self) -> usize {
        (self - base)
            .to_usize()
            .expect("value below base or offset too large")
    }

    #[inline]
    fn at_offset(base: Self, offset: usize) -> Self {
        base + Self::from(offset).expect("offset not representable")
    }
}

impl<T> Value for T where
    T: PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}
