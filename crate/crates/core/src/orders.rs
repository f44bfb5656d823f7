//! Orders Z[f*w] of Z[w]: membership, conductor membership, the class-number
//! formula, and the (always satisfied) Galois-invariance check.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::intfactor::{factor_u64, kronecker_at_prime};
use crate::quadint::QuadInt;

/// The order Z[f*w] of conductor f >= 1 inside Z[w]; f = 1 is the maximal
/// order. An element a + b*w lies in the order iff f | b, and in the
/// conductor ideal f*Z[w] iff f divides both coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    ctx: FieldContext,
    f: u64,
}

impl Order {
    pub fn new(ctx: FieldContext, f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::Precondition("conductor must be >= 1".into()));
        }
        Ok(Order { ctx, f })
    }

    pub fn maximal(ctx: FieldContext) -> Self {
        Order { ctx, f: 1 }
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    /// Membership in Z[f*w].
    pub fn contains(&self, x: &QuadInt) -> bool {
        (&x.b % BigInt::from(self.f)).is_zero()
    }

    /// Membership in the conductor ideal f*Z[w].
    pub fn conductor_contains(&self, x: &QuadInt) -> bool {
        let f = BigInt::from(self.f);
        (&x.a % &f).is_zero() && (&x.b % &f).is_zero()
    }

    /// Units of the order itself: {+1, -1} whenever f > 1, the full unit
    /// group of Z[w] for the maximal order.
    pub fn units(&self) -> Vec<QuadInt> {
        if self.f == 1 {
            self.ctx.units().to_vec()
        } else {
            vec![QuadInt::one(), -&QuadInt::one()]
        }
    }

    pub fn is_unit(&self, x: &QuadInt) -> bool {
        self.units().contains(x)
    }
}

/// |Cl(Z[f*w])| = h * psi_d(f) / u for f > 1, where
/// psi_d(f) = f * prod_{q | f} (1 - (d/q)/q) over the distinct prime
/// divisors of f, and u is the unit-group index (Z[w]^* : Z[f*w]^*).
///
/// The caller supplies h, the class number of Z[w] (1 for the built-in
/// class-number-1 fields).
pub fn class_number_of_order(order: &Order, h_field: u64) -> Result<u64> {
    if h_field == 0 {
        return Err(Error::Precondition("class number must be >= 1".into()));
    }
    let f = order.conductor();
    if f == 1 {
        return Err(Error::ConductorIsOne);
    }
    let d = order.ctx().d();
    // psi = f * prod (q - chi(q)) / prod q, assembled exactly.
    let mut num = f as i128;
    let mut den = 1i128;
    for (q, _) in factor_u64(f) {
        let chi = kronecker_at_prime(d, q) as i128;
        num *= q as i128 - chi;
        den *= q as i128;
    }
    if num % den != 0 {
        return Err(Error::Internal("psi is not integral".into()));
    }
    let psi = num / den;
    let u = unit_index(order);
    let total = h_field as i128 * psi;
    if total % u as i128 != 0 || total <= 0 {
        return Err(Error::Internal(format!(
            "class number h*psi/u = {}*{}/{} is not a positive integer",
            h_field, psi, u
        )));
    }
    Ok((total / u as i128) as u64)
}

/// Unit index u = |U(Z[w])| / |U(Z[f*w])|. For f > 1 the order's units are
/// {+1, -1}: no unit with a nonzero w-coordinate has it divisible by f.
fn unit_index(order: &Order) -> u64 {
    if order.conductor() == 1 {
        1
    } else {
        (order.ctx().units().len() / 2) as u64
    }
}

/// Every quadratic order is closed under conjugation; this makes the fact
/// executable. Returns the check outcome together with the witness
/// conj(f*w) = f*tr(w) - f*w, which the trace identity puts back in the order.
pub fn is_galois_invariant(order: &Order) -> (bool, QuadInt) {
    let ctx = order.ctx();
    let f = order.conductor() as i64;
    let fw = QuadInt::new(0, f);
    let witness = ctx.conj(&fw);
    (order.contains(&witness), witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn membership() {
        let g = make_field(-1).unwrap();
        let o7 = Order::new(g.clone(), 7).unwrap();
        assert!(!o7.contains(&QuadInt::new(3, -1)));
        assert!(o7.contains(&QuadInt::new(21, -7)));
        assert!(o7.contains(&QuadInt::from_int(-40)));
        assert!(o7.conductor_contains(&QuadInt::from_int(7)));
        assert!(!o7.conductor_contains(&QuadInt::new(1, 7)));
        let o5 = Order::new(g, 5).unwrap();
        assert!(o5.conductor_contains(&QuadInt::new(10, 5)));
        assert!(Order::new(make_field(-1).unwrap(), 0).is_err());
    }

    #[test]
    fn class_numbers() {
        let f7 = make_field(-7).unwrap();
        let o = Order::new(f7, 5).unwrap();
        assert_eq!(class_number_of_order(&o, 1).unwrap(), 6);

        let g = make_field(-1).unwrap();
        let o5 = Order::new(g.clone(), 5).unwrap();
        assert_eq!(class_number_of_order(&o5, 1).unwrap(), 2);
        let o3 = Order::new(g.clone(), 3).unwrap();
        assert_eq!(class_number_of_order(&o3, 1).unwrap(), 2);
        let o19 = Order::new(g.clone(), 19).unwrap();
        assert_eq!(class_number_of_order(&o19, 1).unwrap(), 10);

        let max = Order::maximal(g);
        assert_eq!(class_number_of_order(&max, 1), Err(Error::ConductorIsOne));
    }

    #[test]
    fn class_number_composite_conductor() {
        // psi is multiplicative over the distinct prime divisors, q = 2
        // handled through the Kronecker symbol.
        let g = make_field(-1).unwrap();
        let o6 = Order::new(g, 6).unwrap();
        // (-1/2) = +1 since -1 = 7 mod 8, (-1/3) = -1:
        // psi = 6 * (1 - 1/2) * (1 + 1/3) = 4; u = 2 -> 2
        assert_eq!(class_number_of_order(&o6, 1).unwrap(), 2);
    }

    #[test]
    fn galois_invariance_witness() {
        let f7 = make_field(-7).unwrap();
        let o = Order::new(f7, 5).unwrap();
        let (ok, witness) = is_galois_invariant(&o);
        assert!(ok);
        assert_eq!(witness, QuadInt::new(5, -5));

        let g = make_field(-1).unwrap();
        let (ok, _) = is_galois_invariant(&Order::new(g.clone(), 3).unwrap());
        assert!(ok);
        let (ok, _) = is_galois_invariant(&Order::maximal(g));
        assert!(ok);
    }

    #[test]
    fn order_units() {
        let g = make_field(-1).unwrap();
        let o = Order::new(g.clone(), 7).unwrap();
        assert_eq!(o.units().len(), 2);
        assert!(!o.is_unit(&QuadInt::new(0, 1)));
        assert!(Order::maximal(g).is_unit(&QuadInt::new(0, 1)));
    }
}
