//! Rational-integer helpers: primality, factorization, quadratic symbols.
//!
//! Factorization is deterministic trial division up to 10^6 with a Pollard
//! rho fallback, sized for desk-scale norms.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 1_000_000;

/// Primes up to the trial-division bound, sieved once.
fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        let mut out = Vec::new();
        for p in 2..=n {
            if sieve[p] {
                out.push(p as u32);
                let mut m = p * p;
                while m <= n {
                    sieve[m] = false;
                    m += p;
                }
            }
        }
        out
    })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12 bases below cover all of u64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_u64(n: u64) -> u64 {
    // n is odd, composite, and has no factor <= 37 at this point.
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mulmod(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Factor a positive u64 into (prime, exponent) pairs, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for &p in trial_primes() {
        let p = p as u64;
        if p.saturating_mul(p) > n {
            break;
        }
        while n.is_multiple_of(p) {
            push(p, &mut out);
            n /= p;
        }
    }
    // remaining cofactor: prime, or cracked by rho
    let mut stack = vec![n];
    let mut rest: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
        } else {
            let d = pollard_rho_u64(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    rest.sort_unstable();
    for p in rest {
        push(p, &mut out);
    }
    out.sort_unstable();
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (p, e) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    merged
}

/// Strong probable-prime test on BigInt with the fixed u64 base set
/// (deterministic within u64 range, strongly reliable beyond).
fn is_prime_bigint(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let r = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> r;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_bigint(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let mut c = BigInt::one();
    loop {
        let mut x = BigInt::from(2u32);
        let mut y = BigInt::from(2u32);
        let mut d = BigInt::one();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += &one;
    }
}

/// Factor a positive BigInt. Fast u64 path when it fits.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor_bigint needs a positive input");
    if let Some(v) = n.to_u64() {
        return factor_u64(v)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut rem = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for &p in trial_primes() {
        if rem.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if (&pb * &pb) > rem {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rem.div_rem(&pb);
            if r.is_zero() {
                rem = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            out.push((pb, e));
        }
        if let Some(v) = rem.to_u64() {
            for (q, e) in factor_u64(v) {
                out.push((BigInt::from(q), e));
            }
            rem = BigInt::one();
            break;
        }
    }
    let mut stack = vec![rem];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_bigint(&m) {
            out.push((m, 1));
        } else {
            let d = pollard_rho_bigint(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    merged
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i64 {
    debug_assert!(p > 2 && is_prime_u64(p));
    let r = (a.rem_euclid(p as i64)) as u64;
    if r == 0 {
        return 0;
    }
    let e = powmod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (a/q) restricted to prime q (including q = 2).
pub fn kronecker_at_prime(a: i64, q: u64) -> i64 {
    if q == 2 {
        if a.rem_euclid(2) == 0 {
            0
        } else {
            match a.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            }
        }
    } else {
        legendre(a, q)
    }
}
