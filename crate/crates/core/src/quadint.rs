use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Element a + b*w of Z[w], stored on the integral basis {1, w}.
///
/// The meaning of `w` (and hence multiplication, norm, conjugation) comes from
/// a [`FieldContext`](crate::field::FieldContext); addition and negation are
/// coordinate-wise and need no context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new<A: Into<BigInt>, B: Into<BigInt>>(a: A, b: B) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        QuadInt::new(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn from_int<A: Into<BigInt>>(a: A) -> Self {
        QuadInt::new(a, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl fmt::Display for QuadInt {
    /// Canonical text form `a+b*w` (or `a-b*w` for negative b).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadInt({})", self)
    }
}

/// Total order on coordinates, by (b, a). Used for canonical-associate
/// selection and deterministic factor ordering.
pub fn coord_cmp(x: &QuadInt, y: &QuadInt) -> std::cmp::Ordering {
    x.b.cmp(&y.b).then_with(|| x.a.cmp(&y.a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_folds_negative_omega_coordinate() {
        assert_eq!(QuadInt::new(6, -1).to_string(), "6-1*w");
        assert_eq!(QuadInt::new(-3, 2).to_string(), "-3+2*w");
        assert_eq!(QuadInt::new(800, 0).to_string(), "800+0*w");
    }

    #[test]
    fn coordinate_arithmetic() {
        let x = QuadInt::new(1, 2);
        let y = QuadInt::new(3, -5);
        assert_eq!(&x + &y, QuadInt::new(4, -3));
        assert_eq!(&x - &y, QuadInt::new(-2, 7));
        assert_eq!(-&x, QuadInt::new(-1, -2));
    }
}
