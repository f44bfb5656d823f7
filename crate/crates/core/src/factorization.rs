//! Unique factorization of elements of Z[w] into canonical primes, driven by
//! norm factorization and splitting-type analysis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{FieldContext, OmegaKind};
use crate::intfactor::{factor_bigint, is_prime_u64, kronecker_at_prime};
use crate::quadint::{coord_cmp, QuadInt};

/// Default cap on the residue-class prime search (rings of candidates).
pub const DEFAULT_CLASS_SEARCH_BUDGET: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitTag {
    Inert,
    Split,
    Ramified,
}

/// How a rational prime q behaves in Z[w], with a prime element witness:
/// a prime above q for split/ramified q, the prime q itself when inert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub tag: SplitTag,
    pub witness: QuadInt,
}

/// Tag-only splitting decision: the Kronecker symbol of d at q, with the
/// discriminant-based rule at q = 2.
pub fn splitting_tag(q: u64, ctx: &FieldContext) -> SplitTag {
    debug_assert!(is_prime_u64(q), "splitting needs a prime");
    let d = ctx.d();
    if q == 2 {
        match ctx.omega_kind() {
            OmegaKind::SqrtD => SplitTag::Ramified,
            OmegaKind::HalfOnePlusSqrtD => {
                if d.rem_euclid(8) == 1 {
                    SplitTag::Split
                } else {
                    SplitTag::Inert
                }
            }
        }
    } else if d.unsigned_abs().is_multiple_of(q) {
        SplitTag::Ramified
    } else {
        match kronecker_at_prime(d, q) {
            1 => SplitTag::Split,
            -1 => SplitTag::Inert,
            _ => unreachable!("q does not divide d here"),
        }
    }
}

/// Splitting behavior of a rational prime together with a prime witness.
/// The witness search can fail only in the non-UFD extension context, where
/// a prime above q need not be principal.
pub fn splitting_type(q: u64, ctx: &FieldContext) -> Result<SplittingType> {
    let tag = splitting_tag(q, ctx);
    let witness = match tag {
        SplitTag::Inert => QuadInt::from_int(q),
        SplitTag::Split | SplitTag::Ramified => prime_above(q, ctx)?,
    };
    Ok(SplittingType { tag, witness })
}

/// Solve N(a + b*w) = q by scanning b in 0..floor(2*sqrt(q/|d|))+1 and
/// testing the induced quadratic in a. Returns a canonical associate.
fn prime_above(q: u64, ctx: &FieldContext) -> Result<QuadInt> {
    let abs_d = ctx.d().unsigned_abs() as u128;
    let q = q as u128;
    let mut b = 0u128;
    while abs_d * b * b <= 4 * q {
        match ctx.omega_kind() {
            OmegaKind::SqrtD => {
                if abs_d * b * b <= q {
                    let rhs = q - abs_d * b * b;
                    let a = rhs.isqrt();
                    if a * a == rhs {
                        let (c, _) = ctx.canonical_associate(&QuadInt::new(a as i64, b as i64))?;
                        return Ok(c);
                    }
                }
            }
            OmegaKind::HalfOnePlusSqrtD => {
                // (2a + b)^2 = 4q - |d| b^2
                let rhs = 4 * q - abs_d * b * b;
                let s = rhs.isqrt();
                if s * s == rhs && (s % 2) == (b % 2) {
                    let a = (s as i64 - b as i64) / 2;
                    let (c, _) = ctx.canonical_associate(&QuadInt::new(a, b as i64))?;
                    return Ok(c);
                }
            }
        }
        b += 1;
    }
    // Reachable only for non-UFD contexts, where a prime above q need not be
    // principal.
    Err(Error::UnsupportedParameters(format!(
        "no principal prime above {} in d = {}",
        q,
        ctx.d()
    )))
}

/// Prime-element predicate for class-number-1 fields: the norm is a rational
/// prime, or the element is an associate of an inert rational prime.
pub fn is_prime_element(x: &QuadInt, ctx: &FieldContext) -> Result<bool> {
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    if x.is_zero() {
        return Ok(false);
    }
    let n = ctx.norm(x);
    if n.is_one() {
        return Ok(false);
    }
    if let Some(n64) = n.to_u64() {
        if is_prime_u64(n64) {
            return Ok(true);
        }
        let q = n64.isqrt();
        if q * q == n64 && is_prime_u64(q) {
            let st = splitting_type(q, ctx)?;
            if st.tag == SplitTag::Inert {
                // norm q^2 and q inert force x to be an associate of q
                return Ok(true);
            }
        }
        return Ok(false);
    }
    // Desk-scale norms fit u64 whenever primality actually matters; larger
    // inputs are composite products built by the library itself.
    let f = factor_bigint(&n);
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// A unit times a multiset of canonical prime elements with exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub unit: QuadInt,
    pub factors: Vec<(QuadInt, u32)>,
}

impl PrimeFactorization {
    /// Reassemble unit * prod(p^e) exactly.
    pub fn product(&self, ctx: &FieldContext) -> QuadInt {
        let mut acc = self.unit.clone();
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = ctx.mul(&acc, p);
            }
        }
        acc
    }

    /// Total number of prime factors counted with multiplicity.
    pub fn count(&self) -> usize {
        self.factors.iter().map(|(_, e)| *e as usize).sum()
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, e) in &self.factors {
            write!(f, " * ({})^{}", p, e)?;
        }
        Ok(())
    }
}

/// Canonical prime factorization of a nonzero element of a class-number-1
/// ring Z[w]. Deterministic: primes are canonical associates, ordered by
/// (norm, b, a).
pub fn factor_element(x: &QuadInt, ctx: &FieldContext) -> Result<PrimeFactorization> {
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = ctx.norm(x);
    let mut remaining = x.clone();
    let mut factors: Vec<(QuadInt, u32)> = Vec::new();
    for (q, m) in factor_bigint(&n) {
        let q64 = q.to_u64().ok_or_else(|| {
            Error::UnsupportedParameters(format!("norm prime factor {} exceeds the desk scale", q))
        })?;
        let st = splitting_type(q64, ctx)?;
        match st.tag {
            SplitTag::Inert => {
                debug_assert!(m % 2 == 0, "inert prime enters a norm with even exponent");
                let e = m / 2;
                let p = QuadInt::from_int(q64);
                for _ in 0..e {
                    remaining = ctx.exact_div(&p, &remaining)?;
                }
                factors.push((p, e));
            }
            SplitTag::Ramified => {
                let p = st.witness;
                for _ in 0..m {
                    remaining = ctx.exact_div(&p, &remaining)?;
                }
                factors.push((p, m));
            }
            SplitTag::Split => {
                let p = st.witness;
                let (pbar, _) = ctx.canonical_associate(&ctx.conj(&p))?;
                let mut e1 = 0u32;
                while ctx.divides(&p, &remaining)? {
                    remaining = ctx.exact_div(&p, &remaining)?;
                    e1 += 1;
                }
                let mut e2 = 0u32;
                while ctx.divides(&pbar, &remaining)? {
                    remaining = ctx.exact_div(&pbar, &remaining)?;
                    e2 += 1;
                }
                debug_assert_eq!(e1 + e2, m);
                if e1 > 0 {
                    factors.push((p, e1));
                }
                if e2 > 0 {
                    factors.push((pbar, e2));
                }
            }
        }
    }
    if !ctx.is_unit(&remaining) {
        return Err(Error::Internal(format!(
            "residual {} after dividing out all norm primes",
            remaining
        )));
    }
    factors.sort_by(|(p, _), (q, _)| ctx.norm(p).cmp(&ctx.norm(q)).then_with(|| coord_cmp(p, q)));
    Ok(PrimeFactorization {
        unit: remaining,
        factors,
    })
}

/// Find a prime element congruent to r mod p (p inert, r nonzero mod p) by
/// enumerating the class r + p*(s + t*w) in rings of increasing
/// max(|s|, |t|), up to `budget` rings.
pub fn find_prime_in_residue_class(
    r: &QuadInt,
    p: u64,
    ctx: &FieldContext,
    budget: usize,
) -> Result<QuadInt> {
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    let st = splitting_type(p, ctx)?;
    if st.tag != SplitTag::Inert {
        return Err(Error::NotInert(p));
    }
    let pb = BigInt::from(p);
    let r0 = QuadInt {
        a: r.a.mod_floor(&pb),
        b: r.b.mod_floor(&pb),
    };
    if r0.is_zero() {
        return Err(Error::ZeroResidueClass(p));
    }
    for m in 0..=(budget as i64) {
        for s in -m..=m {
            for t in -m..=m {
                if s.abs().max(t.abs()) != m {
                    continue;
                }
                let cand = QuadInt {
                    a: &r0.a + BigInt::from(s) * &pb,
                    b: &r0.b + BigInt::from(t) * &pb,
                };
                if is_prime_element(&cand, ctx)? {
                    return Ok(cand);
                }
            }
        }
    }
    Err(Error::SearchBudgetExceeded(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn splitting_examples() {
        let g = make_field(-1).unwrap();
        assert_eq!(splitting_type(3, &g).unwrap().tag, SplitTag::Inert);
        let five = splitting_type(5, &g).unwrap();
        assert_eq!(five.tag, SplitTag::Split);
        let (expected, _) = g.canonical_associate(&QuadInt::new(2, 1)).unwrap();
        assert_eq!(five.witness, expected);
        assert_eq!(splitting_type(2, &g).unwrap().tag, SplitTag::Ramified);

        let f = make_field(-7).unwrap();
        assert_eq!(splitting_type(5, &f).unwrap().tag, SplitTag::Inert);
        assert_eq!(splitting_type(2, &f).unwrap().tag, SplitTag::Split);
        assert_eq!(splitting_type(7, &f).unwrap().tag, SplitTag::Ramified);
        let h = make_field(-11).unwrap();
        assert_eq!(splitting_type(2, &h).unwrap().tag, SplitTag::Inert);
    }

    #[test]
    fn split_witness_properties() {
        for (d, qs) in [
            (-1i64, vec![5u64, 13, 29]),
            (-7, vec![2, 11, 23]),
            (-3, vec![7, 13]),
        ] {
            let ctx = make_field(d).unwrap();
            for q in qs {
                let st = splitting_type(q, &ctx).unwrap();
                assert_eq!(st.tag, SplitTag::Split, "d={} q={}", d, q);
                let w = &st.witness;
                assert_eq!(ctx.norm(w), BigInt::from(q));
                // w * conj(w) = q up to a unit, and w does not divide conj(w)
                let prod = ctx.mul(w, &ctx.conj(w));
                let (c, _) = ctx.canonical_associate(&prod).unwrap();
                let (cq, _) = ctx.canonical_associate(&QuadInt::from_int(q)).unwrap();
                assert_eq!(c, cq);
                assert!(!ctx.divides(w, &ctx.conj(w)).unwrap());
            }
        }
    }

    #[test]
    fn prime_predicate() {
        let g = make_field(-1).unwrap();
        assert!(is_prime_element(&QuadInt::new(1, 1), &g).unwrap());
        assert!(is_prime_element(&QuadInt::new(2, 3), &g).unwrap());
        assert!(is_prime_element(&QuadInt::from_int(3), &g).unwrap());
        assert!(!is_prime_element(&QuadInt::from_int(5), &g).unwrap());
        assert!(!is_prime_element(&QuadInt::from_int(1), &g).unwrap());
        assert!(!is_prime_element(&QuadInt::zero(), &g).unwrap());
        let nf = make_field(-14).unwrap();
        assert!(is_prime_element(&QuadInt::new(1, 1), &nf).is_err());
    }

    fn canonical_of(ctx: &FieldContext, raw: &[QuadInt]) -> Vec<(QuadInt, u32)> {
        let mut canon: Vec<QuadInt> = raw
            .iter()
            .map(|x| ctx.canonical_associate(x).unwrap().0)
            .collect();
        canon.sort_by(|p, q| ctx.norm(p).cmp(&ctx.norm(q)).then_with(|| coord_cmp(p, q)));
        let mut out: Vec<(QuadInt, u32)> = Vec::new();
        for p in canon {
            if let Some(last) = out.last_mut() {
                if last.0 == p {
                    last.1 += 1;
                    continue;
                }
            }
            out.push((p, 1));
        }
        out
    }

    #[test]
    fn factor_490_in_gaussian_integers() {
        let g = make_field(-1).unwrap();
        let x = QuadInt::from_int(490);
        let f = factor_element(&x, &g).unwrap();
        let expected = canonical_of(
            &g,
            &[
                QuadInt::from_int(7),
                QuadInt::from_int(7),
                QuadInt::new(1, 1),
                QuadInt::new(1, -1),
                QuadInt::new(1, 2),
                QuadInt::new(1, -2),
            ],
        );
        assert_eq!(f.factors, expected);
        assert_eq!(f.product(&g), x);
    }

    #[test]
    fn factor_800_in_d_minus_7() {
        let f7 = make_field(-7).unwrap();
        let x = QuadInt::from_int(800);
        let f = factor_element(&x, &f7).unwrap();
        let w = f7.omega();
        let mut raw = vec![QuadInt::from_int(5), QuadInt::from_int(5)];
        for _ in 0..5 {
            raw.push(w.clone());
            raw.push(f7.conj(&w));
        }
        assert_eq!(f.factors, canonical_of(&f7, &raw));
        assert_eq!(f.product(&f7), x);
    }

    #[test]
    fn factor_units_and_zero() {
        let g = make_field(-1).unwrap();
        let i = QuadInt::new(0, 1);
        let f = factor_element(&i, &g).unwrap();
        assert_eq!(f.unit, i);
        assert!(f.factors.is_empty());
        assert_eq!(
            factor_element(&QuadInt::zero(), &g),
            Err(Error::ZeroElement)
        );
        let nf = make_field(-14).unwrap();
        assert_eq!(
            factor_element(&QuadInt::from_int(2), &nf),
            Err(Error::NonUfdContext(-14))
        );
    }

    #[test]
    fn residue_class_prime_search() {
        let f7 = make_field(-7).unwrap();
        let w = f7.omega();
        let got = find_prime_in_residue_class(&w, 5, &f7, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(got, w);

        let g = make_field(-1).unwrap();
        let r = QuadInt::new(2, 3);
        let got = find_prime_in_residue_class(&r, 19, &g, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(got, r);

        assert_eq!(
            find_prime_in_residue_class(&QuadInt::zero(), 3, &g, 10),
            Err(Error::ZeroResidueClass(3))
        );
        assert_eq!(
            find_prime_in_residue_class(&QuadInt::one(), 5, &g, 10),
            Err(Error::NotInert(5))
        );
    }
}
