//! Coordinate arithmetic in Z[w]/(f) for an arbitrary modulus f >= 1.
//!
//! Order and conductor membership of products only depend on coordinates
//! mod f, so subset and partition scans run here instead of on exact
//! integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::field::FieldContext;
use crate::quadint::QuadInt;

/// Residue pair (a, b) of an element a + b*w mod f.
pub(crate) type Pair = (u64, u64);

#[derive(Clone, Debug)]
pub(crate) struct ModRing {
    pub f: u64,
    t: u64,
    n: u64,
}

impl ModRing {
    pub fn new(ctx: &FieldContext, f: u64) -> Self {
        assert!(f >= 1);
        let (t, n) = ctx.min_poly();
        ModRing {
            f,
            t: t.rem_euclid(f as i64) as u64,
            n: n.rem_euclid(f as i64) as u64,
        }
    }

    pub fn reduce(&self, x: &QuadInt) -> Pair {
        let fb = BigInt::from(self.f);
        (
            x.a.mod_floor(&fb).to_u64().unwrap(),
            x.b.mod_floor(&fb).to_u64().unwrap(),
        )
    }

    pub fn one(&self) -> Pair {
        (1 % self.f, 0)
    }

    pub fn mul(&self, x: Pair, y: Pair) -> Pair {
        let f = self.f as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        let (c, e) = (y.0 as u128, y.1 as u128);
        let bb = b * e % f;
        let ra = (a * c % f + (f - self.n as u128 % f) % f * bb) % f;
        let rb = (a * e % f + b * c % f + self.t as u128 * bb) % f;
        (ra as u64, rb as u64)
    }

    /// Membership of a lift in Z[f*w]: the w-coordinate vanishes mod f.
    pub fn in_order(&self, x: Pair) -> bool {
        x.1 == 0
    }

    /// Membership of a lift in the conductor ideal f*Z[w].
    pub fn in_conductor(&self, x: Pair) -> bool {
        x.0 == 0 && x.1 == 0
    }
}
