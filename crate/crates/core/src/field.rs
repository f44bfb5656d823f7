use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadint::{coord_cmp, QuadInt};

/// The nine imaginary quadratic discriminants with class number 1.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// Extended discriminant admitted for residue and norm cross-checks only.
/// Its ring of integers is not a UFD, so factorization-dependent operations
/// refuse to run in this context.
pub const NON_UFD_EXTENSION: i64 = -14;

/// Shape of the canonical generator w of the ring of integers of Q(sqrt(d)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaKind {
    /// d = 2, 3 mod 4: w = sqrt(d), minimal polynomial x^2 - d.
    SqrtD,
    /// d = 1 mod 4: w = (1 + sqrt(d))/2, minimal polynomial x^2 - x + (1-d)/4.
    HalfOnePlusSqrtD,
}

/// An imaginary quadratic field Q(sqrt(d)) together with its ring of integers
/// Z[w]: the discriminant data, the minimal polynomial of w, and the full
/// (finite) unit group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    d: i64,
    kind: OmegaKind,
    ufd: bool,
    units: Vec<QuadInt>,
}

impl FieldContext {
    /// Build the context for a supported discriminant.
    ///
    /// Supported: the nine class-number-1 values, plus d = -14 with the
    /// non-UFD flag set.
    pub fn new(d: i64) -> Result<Self> {
        let ufd = if CLASS_NUMBER_ONE.contains(&d) {
            true
        } else if d == NON_UFD_EXTENSION {
            false
        } else {
            return Err(Error::UnsupportedDiscriminant(d));
        };
        let kind = if d.rem_euclid(4) == 1 {
            OmegaKind::HalfOnePlusSqrtD
        } else {
            OmegaKind::SqrtD
        };
        let units = match d {
            -1 => vec![
                QuadInt::new(1, 0),
                QuadInt::new(-1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(0, -1),
            ],
            -3 => vec![
                QuadInt::new(1, 0),
                QuadInt::new(-1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(0, -1),
                QuadInt::new(-1, 1),
                QuadInt::new(1, -1),
            ],
            _ => vec![QuadInt::new(1, 0), QuadInt::new(-1, 0)],
        };
        Ok(FieldContext {
            d,
            kind,
            ufd,
            units,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn is_ufd(&self) -> bool {
        self.ufd
    }

    pub fn units(&self) -> &[QuadInt] {
        &self.units
    }

    /// Minimal polynomial of w as (t, n) with x^2 - t*x + n.
    /// t = trace(w), n = norm(w).
    pub fn min_poly(&self) -> (i64, i64) {
        match self.kind {
            OmegaKind::SqrtD => (0, -self.d),
            OmegaKind::HalfOnePlusSqrtD => (1, (1 - self.d) / 4),
        }
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    /// Exact product, reducing w^2 through the minimal polynomial.
    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let (t, n) = self.min_poly();
        let bb = &x.b * &y.b;
        let a = &x.a * &y.a - &bb * n;
        let b = &x.a * &y.b + &x.b * &y.a + &bb * t;
        QuadInt { a, b }
    }

    pub fn pow(&self, x: &QuadInt, e: u32) -> QuadInt {
        let mut acc = QuadInt::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Galois conjugate: the image of x under the nontrivial automorphism.
    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        match self.kind {
            OmegaKind::SqrtD => QuadInt {
                a: x.a.clone(),
                b: -&x.b,
            },
            // conj(w) = 1 - w, so conj(a + b*w) = (a + b) - b*w.
            OmegaKind::HalfOnePlusSqrtD => QuadInt {
                a: &x.a + &x.b,
                b: -&x.b,
            },
        }
    }

    /// Field norm x * conj(x), a nonnegative rational integer.
    pub fn norm(&self, x: &QuadInt) -> BigInt {
        let (t, n) = self.min_poly();
        // N(a + b*w) = a^2 + t*a*b + n*b^2.
        &x.a * &x.a + &x.a * &x.b * t + &x.b * &x.b * n
    }

    /// Field trace x + conj(x).
    pub fn trace(&self, x: &QuadInt) -> BigInt {
        let (t, _) = self.min_poly();
        2 * &x.a + &x.b * t
    }

    pub fn is_unit(&self, x: &QuadInt) -> bool {
        self.norm(x).is_one()
    }

    /// The canonical associate of a nonzero element and the unit carrying x
    /// to it: among all unit multiples, the one with b > 0 (or b = 0, a > 0),
    /// smallest in the (b, a) coordinate order.
    pub fn canonical_associate(&self, x: &QuadInt) -> Result<(QuadInt, QuadInt)> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut best: Option<(QuadInt, QuadInt)> = None;
        for u in &self.units {
            let y = self.mul(u, x);
            let admissible = y.b.is_positive() || (y.b.is_zero() && y.a.is_positive());
            if !admissible {
                continue;
            }
            match &best {
                Some((cur, _)) if coord_cmp(&y, cur) != std::cmp::Ordering::Less => {}
                _ => best = Some((y, u.clone())),
            }
        }
        best.ok_or_else(|| Error::Internal("no admissible associate found".into()))
    }

    /// Whether x divides y in Z[w].
    pub fn divides(&self, x: &QuadInt, y: &QuadInt) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(x);
        let t = self.mul(y, &self.conj(x));
        Ok((&t.a % &n).is_zero() && (&t.b % &n).is_zero())
    }

    /// Exact quotient y / x, or an error if x does not divide y.
    pub fn exact_div(&self, x: &QuadInt, y: &QuadInt) -> Result<QuadInt> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(x);
        let t = self.mul(y, &self.conj(x));
        let (qa, ra) = t.a.div_rem(&n);
        let (qb, rb) = t.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Ok(QuadInt { a: qa, b: qb })
        } else {
            Err(Error::NotDivisible(x.to_string(), y.to_string()))
        }
    }

    /// Parse the `a+b*w` element grammar: `[-]?<int>([+-]<int>\*?[wi])?`,
    /// whitespace-insensitive. `i` is accepted as an alias for `w` only when
    /// d = -1.
    pub fn parse_element(&self, input: &str) -> Result<QuadInt> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::ParseElement(input.to_string());
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return Err(err());
        }
        let mut pos = 0usize;
        let read_int = |pos: &mut usize| -> Result<BigInt> {
            let start = *pos;
            if *pos < bytes.len() && (bytes[*pos] == b'+' || bytes[*pos] == b'-') {
                *pos += 1;
            }
            let digits_start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == digits_start {
                return Err(err());
            }
            s[start..*pos].parse::<BigInt>().map_err(|_| err())
        };
        let a = read_int(&mut pos)?;
        if pos == bytes.len() {
            return Ok(QuadInt {
                a,
                b: BigInt::zero(),
            });
        }
        if bytes[pos] != b'+' && bytes[pos] != b'-' {
            return Err(err());
        }
        let b = read_int(&mut pos)?;
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        if pos + 1 != bytes.len() {
            return Err(err());
        }
        match bytes[pos] {
            b'w' => Ok(QuadInt { a, b }),
            b'i' if self.d == -1 => Ok(QuadInt { a, b }),
            _ => Err(err()),
        }
    }
}

/// Convenience constructor mirroring the library entry point.
pub fn make_field(d: i64) -> Result<FieldContext> {
    FieldContext::new(d)
}
