//! Exact integer utilities, certified interval reals and continued fractions.

mod contfrac;
mod hpreal;

pub use contfrac::{cf_sqrt, convergents, expand_enclosure, ContinuedFraction};
pub use hpreal::{certify, HPReal, Tri, DEFAULT_DIGITS, DEFAULT_RETRIES};

use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Arbitrary-precision signed integer used for every exact quantity.
pub type Integer = BigInt;

/// `⌊√n⌋` for `n ≥ 0`.
pub fn isqrt_floor(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::Negative(n.clone()));
    }
    Ok(n.sqrt())
}

/// Returns `Some(√n)` when `n` is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Result<Option<BigInt>> {
    let root = isqrt_floor(n)?;
    Ok((&root * &root == *n).then_some(root))
}

pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && matches!(isqrt_exact(n), Ok(Some(_)))
}

/// `⌊√n⌋` for machine integers, corrected after the floating-point guess.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = ((n as f64).sqrt() as u128).min(u64::MAX as u128);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Outcome of a primality test together with the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Primality {
    Composite,
    /// Deterministic answer (n < 2^64, fixed witness set).
    Prime,
    /// Passed 64 random Miller–Rabin rounds, error probability below 2^-128.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const RANDOM_ROUNDS: usize = 64;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigInt, d: &BigInt, s: u64, a: &BigInt) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality with the regime flag: deterministic below 2^64, probabilistic above.
pub fn primality(n: &BigInt) -> Primality {
    if n.sign() != Sign::Plus {
        return Primality::Composite;
    }
    if let Some(small) = n.to_u64() {
        return if miller_rabin_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_1: BigInt = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // Fixed seed keeps reports reproducible.
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_d10f);
    let lo = BigInt::from(2u32);
    let hi = n - 1u32;
    for _ in 0..RANDOM_ROUNDS {
        let a = rng.gen_bigint_range(&lo, &hi);
        if !miller_rabin_round(n, &d, s, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &BigInt) -> bool {
    primality(n).is_prime()
}

fn pollard_brent(n: &BigInt, seed: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2u32));
    }
    let c = BigInt::from(seed);
    let f = |x: &BigInt| (x * x + &c) % n;
    let (mut y, mut r, mut q) = (BigInt::from(seed + 1), 1u64, BigInt::one());
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    const BATCH: u64 = 64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn factor_into(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for seed in 1u64.. {
        if let Some(d) = pollard_brent(&n, seed) {
            let rest = &n / &d;
            factor_into(d, out);
            factor_into(rest, out);
            return;
        }
    }
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut rest = n.abs();
    let mut primes = Vec::new();
    if rest.is_zero() {
        return Vec::new();
    }
    for p in 2u32..1000 {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % p).is_zero() {
            primes.push(bp.clone());
            rest /= p;
        }
    }
    factor_into(rest, &mut primes);
    primes.sort();
    let mut grouped: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match grouped.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => grouped.push((p, 1)),
        }
    }
    grouped
}

/// Number of distinct prime factors of `|n|`.
pub fn omega(n: &BigInt) -> usize {
    factorize(n).len()
}

/// Floor and ceiling division for signed integers.
pub fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt_exact(&big(49)).unwrap(), Some(big(7)));
        assert_eq!(isqrt_exact(&big(28561)).unwrap(), Some(big(169)));
        assert_eq!(isqrt_exact(&big(50)).unwrap(), None);
        assert!(matches!(isqrt_exact(&big(-4)), Err(Error::Negative(_))));
    }

    #[test]
    fn isqrt_agrees_with_floor_oracle_up_to_a_million() {
        let mut root = 0u64;
        for n in 0u64..=1_000_000 {
            while (root + 1) * (root + 1) <= n {
                root += 1;
            }
            let exact = isqrt_exact(&BigInt::from(n)).unwrap();
            assert_eq!(exact.is_some(), root * root == n, "n = {n}");
        }
    }

    #[test]
    fn isqrt_u128_boundaries() {
        for n in [0u128, 1, 2, 3, 4, 15, 16, 17, u64::MAX as u128, u128::MAX] {
            let r = isqrt_u128(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|sq| sq > n));
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(5)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(0)));
        assert!(is_prime(&big(11)));
        assert!(is_prime(&big(2069)));
        // Strong pseudoprime to bases 2..=37 would need n > 3.3e24; check a Carmichael number.
        assert!(!is_prime(&big(561)));
        assert_eq!(primality(&big(1_000_000_007)), Primality::Prime);
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..20_000 {
            let trial = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(&BigInt::from(n)), trial, "n = {n}");
        }
    }

    #[test]
    fn large_primality_is_flagged_probabilistic() {
        let m127 = (BigInt::one() << 127) - 1u32;
        assert_eq!(primality(&m127), Primality::ProbablePrime);
        let composite = &m127 * BigInt::from(1_000_000_007u64);
        assert_eq!(primality(&composite), Primality::Composite);
    }

    #[test]
    fn factorization_and_omega() {
        assert_eq!(omega(&big(-5)), 1);
        assert_eq!(omega(&big(-1)), 0);
        assert_eq!(omega(&big(-55)), 2);
        assert_eq!(factorize(&big(360)), vec![(big(2), 3), (big(3), 2), (big(5), 1)]);
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        assert_eq!(factorize(&n), vec![(big(998_244_353), 1), (big(1_000_000_007), 1)]);
    }
}
