//! The residue field Z[w]/(p) for inert p, isomorphic to F_{p^2}, and the
//! quotient groups F_{p^2}^* / H for H = F_p^* or its unit-corrected
//! enlargement.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::factorization::{find_prime_in_residue_class, splitting_tag, SplitTag};
use crate::field::FieldContext;
use crate::intfactor::factor_u64;
use crate::quadint::QuadInt;

/// Element of Z[w]/(p) as a coordinate pair mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueElement {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

impl ResidueElement {
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Image of Z[p*w]: the cosets with zero w-coordinate.
    pub fn in_base_field(&self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*w mod {}", self.a, self.b, self.p)
    }
}

/// Arithmetic in F_{p^2} realized as F_p[w] with w^2 reduced through the
/// minimal polynomial of w mod p. Requires p odd and inert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    t: u64,
    n: u64,
}

impl ResidueField {
    pub fn new(ctx: &FieldContext, p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        if splitting_tag(p, ctx) != SplitTag::Inert {
            return Err(Error::NotInert(p));
        }
        let (t, n) = ctx.min_poly();
        Ok(ResidueField {
            p,
            t: t.rem_euclid(p as i64) as u64,
            n: n.rem_euclid(p as i64) as u64,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Order of the quotient group F_{p^2}^* / F_p^*.
    pub fn base_quotient_order(&self) -> u64 {
        self.p + 1
    }

    pub fn reduce(&self, x: &QuadInt) -> ResidueElement {
        let pb = BigInt::from(self.p);
        ResidueElement {
            a: x.a.mod_floor(&pb).to_u64().unwrap(),
            b: x.b.mod_floor(&pb).to_u64().unwrap(),
            p: self.p,
        }
    }

    pub fn element(&self, a: u64, b: u64) -> ResidueElement {
        ResidueElement {
            a: a % self.p,
            b: b % self.p,
            p: self.p,
        }
    }

    pub fn one(&self) -> ResidueElement {
        self.element(1, 0)
    }

    pub fn mul(&self, x: ResidueElement, y: ResidueElement) -> ResidueElement {
        debug_assert!(x.p == self.p && y.p == self.p);
        let p = self.p as u128;
        let (a, b, c, e) = (x.a as u128, x.b as u128, y.a as u128, y.b as u128);
        let bb = b * e % p;
        let ra = (a * c % p + (p - self.n as u128 % p) * bb) % p;
        let rb = (a * e % p + b * c % p + self.t as u128 * bb) % p;
        ResidueElement {
            a: ra as u64,
            b: rb as u64,
            p: self.p,
        }
    }

    pub fn pow(&self, x: ResidueElement, e: u64) -> ResidueElement {
        let mut acc = self.one();
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, x: ResidueElement) -> ResidueElement {
        let p = self.p;
        ResidueElement {
            a: (x.a + self.t * x.b) % p,
            b: (p - x.b % p) % p,
            p,
        }
    }

    /// Norm down to F_p: x * conj(x).
    pub fn norm(&self, x: ResidueElement) -> u64 {
        self.mul(x, self.conj(x)).a
    }

    pub fn inv(&self, x: ResidueElement) -> Result<ResidueElement> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let nrm = self.norm(x);
        let ninv = pow_mod(nrm, self.p - 2, self.p);
        let c = self.conj(x);
        Ok(self.element(c.a * ninv % self.p, c.b * ninv % self.p))
    }

    /// Multiplicative order in F_{p^2}^*.
    pub fn element_order(&self, x: ResidueElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let full = self.p * self.p - 1;
        let mut e = full;
        for (q, _) in factor_u64(full) {
            while e.is_multiple_of(q) && self.pow(x, e / q) == self.one() {
                e /= q;
            }
        }
        Ok(e)
    }

    /// Canonical representative of the coset x * F_p^*: scaled so that
    /// b = 1 when b != 0, else a = 1.
    pub fn canonical_coset(&self, x: ResidueElement) -> Result<ResidueElement> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        if x.b == 0 {
            Ok(self.one())
        } else {
            let binv = pow_mod(x.b, self.p - 2, self.p);
            Ok(self.element(x.a * binv % self.p, 1))
        }
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupMode {
    /// H = F_p^*; the quotient has order p + 1.
    BaseField,
    /// H generated by F_p^* together with the images of U(Z[w]).
    BaseFieldWithUnits,
}

/// A subgroup F_p^* <= H <= F_{p^2}^*, stored as the canonical coset
/// representatives of H / F_p^*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCorrectedSubgroup {
    mode: SubgroupMode,
    cosets: BTreeSet<ResidueElement>,
    quotient_order: u64,
}

impl UnitCorrectedSubgroup {
    pub fn new(fld: &ResidueField, ctx: &FieldContext, mode: SubgroupMode) -> Result<Self> {
        let mut cosets: BTreeSet<ResidueElement> = BTreeSet::new();
        cosets.insert(fld.one());
        if mode == SubgroupMode::BaseFieldWithUnits {
            for u in ctx.units() {
                cosets.insert(fld.canonical_coset(fld.reduce(u))?);
            }
            // close under multiplication
            loop {
                let mut next = cosets.clone();
                for x in &cosets {
                    for y in &cosets {
                        next.insert(fld.canonical_coset(fld.mul(*x, *y))?);
                    }
                }
                if next.len() == cosets.len() {
                    break;
                }
                cosets = next;
            }
        }
        let h = cosets.len() as u64;
        if !fld.base_quotient_order().is_multiple_of(h) {
            return Err(Error::Internal(
                "subgroup size does not divide p + 1".into(),
            ));
        }
        Ok(UnitCorrectedSubgroup {
            mode,
            quotient_order: fld.base_quotient_order() / h,
            cosets,
        })
    }

    pub fn mode(&self) -> SubgroupMode {
        self.mode
    }

    /// Order of the quotient group F_{p^2}^* / H.
    pub fn quotient_order(&self) -> u64 {
        self.quotient_order
    }

    pub fn contains(&self, fld: &ResidueField, x: ResidueElement) -> Result<bool> {
        Ok(self.cosets.contains(&fld.canonical_coset(x)?))
    }
}

/// Smallest k >= 1 with x^k in H. Divides the quotient-group order.
pub fn coset_order(
    fld: &ResidueField,
    x: ResidueElement,
    h: &UnitCorrectedSubgroup,
) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut y = x;
    for k in 1..=fld.base_quotient_order() {
        if h.contains(fld, y)? {
            if !h.quotient_order().is_multiple_of(k) {
                return Err(Error::Internal(format!(
                    "coset order {} does not divide the quotient order {}",
                    k,
                    h.quotient_order()
                )));
            }
            return Ok(k);
        }
        y = fld.mul(y, x);
    }
    Err(Error::Internal("no power landed in the subgroup".into()))
}

/// Whether the coset of x generates the quotient F_{p^2}^* / H.
pub fn is_generator(
    fld: &ResidueField,
    x: ResidueElement,
    h: &UnitCorrectedSubgroup,
) -> Result<bool> {
    Ok(coset_order(fld, x, h)? == h.quotient_order())
}

/// A prime element of Z[w] whose residue generates the quotient by H:
/// scan residue classes for a generator, then find a prime in that class.
pub fn find_generator_prime(
    ctx: &FieldContext,
    p: u64,
    h: &UnitCorrectedSubgroup,
    budget: usize,
) -> Result<QuadInt> {
    let fld = ResidueField::new(ctx, p)?;
    if h.quotient_order() == 1 {
        return Err(Error::Precondition("quotient group is trivial".into()));
    }
    for b in 0..p {
        for a in 0..p {
            if a == 0 && b == 0 {
                continue;
            }
            let r = fld.element(a, b);
            if is_generator(&fld, r, h)? {
                let lift = QuadInt::new(a as i64, b as i64);
                return find_prime_in_residue_class(&lift, p, ctx, budget);
            }
        }
    }
    Err(Error::Internal(
        "cyclic quotient must have a generator".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_CLASS_SEARCH_BUDGET;
    use crate::field::make_field;

    #[test]
    fn field_construction_requirements() {
        let g = make_field(-1).unwrap();
        assert!(ResidueField::new(&g, 3).is_ok());
        assert_eq!(ResidueField::new(&g, 5), Err(Error::NotInert(5)));
        let h = make_field(-11).unwrap();
        assert_eq!(ResidueField::new(&h, 2), Err(Error::UnsupportedPrime(2)));
    }

    #[test]
    fn reduce_powers_d_minus_7() {
        let f7 = make_field(-7).unwrap();
        let fld = ResidueField::new(&f7, 5).unwrap();
        let w = fld.reduce(&f7.omega());
        let w2 = fld.pow(w, 2);
        assert_eq!((w2.a, w2.b), (3, 1)); // -2 + w mod 5
        assert!(!w2.in_base_field());
        let w6 = fld.pow(w, 6);
        assert_eq!((w6.a, w6.b), (2, 0));
        assert!(w6.in_base_field());
        // multiples of p reduce to zero
        let x = QuadInt::new(10, -5);
        assert!(fld.reduce(&x).is_zero());
    }

    #[test]
    fn reduction_is_ring_homomorphism() {
        let f7 = make_field(-7).unwrap();
        let fld = ResidueField::new(&f7, 5).unwrap();
        let x = QuadInt::new(12, -7);
        let y = QuadInt::new(-3, 11);
        let lhs = fld.reduce(&f7.mul(&x, &y));
        let rhs = fld.mul(fld.reduce(&x), fld.reduce(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverses() {
        let f7 = make_field(-7).unwrap();
        let fld = ResidueField::new(&f7, 5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let x = fld.element(a, b);
                if x.is_zero() {
                    assert!(fld.inv(x).is_err());
                } else {
                    assert_eq!(fld.mul(x, fld.inv(x).unwrap()), fld.one());
                }
            }
        }
    }

    #[test]
    fn coset_orders() {
        let f7 = make_field(-7).unwrap();
        let fld = ResidueField::new(&f7, 5).unwrap();
        let base = UnitCorrectedSubgroup::new(&fld, &f7, SubgroupMode::BaseField).unwrap();
        assert_eq!(base.quotient_order(), 6);
        let w = fld.reduce(&f7.omega());
        assert_eq!(coset_order(&fld, w, &base).unwrap(), 6);
        assert!(is_generator(&fld, w, &base).unwrap());

        let g = make_field(-1).unwrap();
        let fld19 = ResidueField::new(&g, 19).unwrap();
        let corrected =
            UnitCorrectedSubgroup::new(&fld19, &g, SubgroupMode::BaseFieldWithUnits).unwrap();
        assert_eq!(corrected.quotient_order(), 10);
        let x = fld19.reduce(&QuadInt::new(2, 3));
        assert_eq!(coset_order(&fld19, x, &corrected).unwrap(), 10);
        let basefield = UnitCorrectedSubgroup::new(&fld19, &g, SubgroupMode::BaseField).unwrap();
        assert_eq!(coset_order(&fld19, x, &basefield).unwrap(), 20);
        assert!(is_generator(&fld19, x, &basefield).unwrap());

        // rational residues sit in the trivial coset
        let r = fld19.reduce(&QuadInt::from_int(7));
        assert_eq!(coset_order(&fld19, r, &basefield).unwrap(), 1);
        assert!(!is_generator(&fld19, r, &basefield).unwrap());
    }

    #[test]
    fn extended_context_coset_order_by_direct_powering() {
        // d = -14, p = 11: the image of 325 + 42*sqrt(-14) lands in F_11 at
        // the sixth power already (x^3 = 6w, x^6 = 2), so its coset order is
        // 6 and its multiplicative order is 60, not the full 120.
        let nf = make_field(-14).unwrap();
        let fld = ResidueField::new(&nf, 11).unwrap();
        let x = fld.reduce(&QuadInt::new(325, 42));
        assert_eq!((x.a, x.b), (6, 9));
        let x3 = fld.pow(x, 3);
        assert_eq!((x3.a, x3.b), (0, 6));
        let x6 = fld.pow(x, 6);
        assert_eq!((x6.a, x6.b), (2, 0));
        let base = UnitCorrectedSubgroup::new(&fld, &nf, SubgroupMode::BaseField).unwrap();
        assert_eq!(coset_order(&fld, x, &base).unwrap(), 6);
        assert_eq!(fld.element_order(x).unwrap(), 60);
        // the conjugate class representative behaves identically
        let y = fld.reduce(&QuadInt::new(325, -42));
        assert_eq!(coset_order(&fld, y, &base).unwrap(), 6);
        // 9 + sqrt(-14), the ideal generator the class above came from, does
        // generate the quotient
        let z = fld.reduce(&QuadInt::new(9, 1));
        assert_eq!(coset_order(&fld, z, &base).unwrap(), 12);
        assert_eq!(fld.element_order(z).unwrap(), 120);
    }

    #[test]
    fn generator_primes() {
        let f7 = make_field(-7).unwrap();
        let fld = ResidueField::new(&f7, 5).unwrap();
        let base = UnitCorrectedSubgroup::new(&fld, &f7, SubgroupMode::BaseField).unwrap();
        let gamma = find_generator_prime(&f7, 5, &base, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(gamma, f7.omega());

        let g = make_field(-1).unwrap();
        let fld19 = ResidueField::new(&g, 19).unwrap();
        let corrected =
            UnitCorrectedSubgroup::new(&fld19, &g, SubgroupMode::BaseFieldWithUnits).unwrap();
        let gamma = find_generator_prime(&g, 19, &corrected, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(
            coset_order(&fld19, fld19.reduce(&gamma), &corrected).unwrap(),
            10
        );

        let fld3 = ResidueField::new(&g, 3).unwrap();
        let corrected3 =
            UnitCorrectedSubgroup::new(&fld3, &g, SubgroupMode::BaseFieldWithUnits).unwrap();
        assert_eq!(corrected3.quotient_order(), 2);
        let gamma = find_generator_prime(&g, 3, &corrected3, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(
            coset_order(&fld3, fld3.reduce(&gamma), &corrected3).unwrap(),
            2
        );
    }

    #[test]
    fn base_field_identification_matches_order_membership() {
        use crate::orders::Order;
        for (d, p) in [(-1i64, 3u64), (-7, 5)] {
            let ctx = make_field(d).unwrap();
            let fld = ResidueField::new(&ctx, p).unwrap();
            let order = Order::new(ctx.clone(), p).unwrap();
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    let x = QuadInt::new(a, b);
                    assert_eq!(fld.reduce(&x).in_base_field(), order.contains(&x));
                }
            }
        }
    }

    #[test]
    fn generator_counts_match_euler_phi() {
        // the cyclic quotient of order p+1 has phi(p+1) generator cosets
        for (d, p, phi) in [(-7i64, 5u64, 2u64), (-7, 3, 2), (-1, 7, 4), (-11, 7, 4)] {
            let ctx = make_field(d).unwrap();
            let fld = ResidueField::new(&ctx, p).unwrap();
            let base = UnitCorrectedSubgroup::new(&fld, &ctx, SubgroupMode::BaseField).unwrap();
            let mut coset_reps = BTreeSet::new();
            let mut residue_generators = 0u64;
            for a in 0..p {
                for b in 0..p {
                    let x = fld.element(a, b);
                    if x.is_zero() {
                        continue;
                    }
                    if is_generator(&fld, x, &base).unwrap() {
                        residue_generators += 1;
                        coset_reps.insert(fld.canonical_coset(x).unwrap());
                    }
                }
            }
            assert_eq!(coset_reps.len() as u64, phi, "d={} p={}", d, p);
            assert_eq!(residue_generators, phi * (p - 1));
        }
    }
}
