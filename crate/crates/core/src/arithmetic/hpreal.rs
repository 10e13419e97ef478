//! Certified real enclosures with dyadic endpoints.
//!
//! An [`HPReal`] is a closed interval `[lo, hi]` whose endpoints are dyadic
//! rationals `mant · 2^exp`. Every operation rounds the lower endpoint down and
//! the upper endpoint up, so the true value always stays inside.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Not, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Starting precision (decimal digits) of the retry policy.
pub const DEFAULT_DIGITS: u32 = 50;
/// Number of precision doublings attempted before giving up.
pub const DEFAULT_RETRIES: u32 = 4;

const GUARD_BITS: u64 = 16;
const SERIES_GUARD_BITS: u64 = 32;

fn digits_to_bits(digits: u32) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + GUARD_BITS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Down,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, shift: u64, dir: Dir) -> BigInt {
    match dir {
        // BigInt >> rounds toward negative infinity.
        Dir::Down => m >> shift,
        Dir::Up => -((-m) >> shift),
    }
}

impl Dyadic {
    fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    fn int(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        (a, b, e)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    fn shift(&self, by: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + by }
    }

    fn round(self, bits: u64, dir: Dir) -> Dyadic {
        let len = self.mant.bits();
        if len <= bits {
            return self;
        }
        let drop = len - bits;
        Dyadic::new(shr_round(&self.mant, drop, dir), self.exp + drop as i64)
    }

    fn div(&self, other: &Dyadic, bits: u64, dir: Dir) -> Dyadic {
        debug_assert!(!other.is_zero());
        let shift = (bits as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << shift as u64;
        let q = match dir {
            Dir::Down => num.div_floor(&other.mant),
            Dir::Up => -((-num).div_floor(&other.mant)),
        };
        Dyadic::new(q, self.exp - other.exp - shift).round(bits, dir)
    }

    /// Square root of a nonnegative dyadic, rounded in `dir`.
    fn sqrt(&self, bits: u64, dir: Dir) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let target = 2 * bits + 4;
        let mut shift = target.saturating_sub(self.mant.bits()) as i64;
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let root = m.sqrt();
        let root = if dir == Dir::Up && &root * &root != m { root + 1u32 } else { root };
        Dyadic::new(root, (self.exp - shift) / 2).round(bits, dir)
    }

    fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    fn to_f64(&self) -> f64 {
        let len = self.mant.bits() as i64;
        let keep = 60;
        let (m, e) = if len > keep {
            (&self.mant >> (len - keep) as u64, self.exp + len - keep)
        } else {
            (self.mant.clone(), self.exp)
        };
        m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-valued outcome of a comparison between enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Not for Tri {
    type Output = Tri;
    fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn definite(self) -> Option<bool> {
        match self {
            Tri::True => Some(true),
            Tri::False => Some(false),
            Tri::Unknown => None,
        }
    }
}

/// Certified enclosure of a real number at a working precision.
#[derive(Clone, Debug)]
pub struct HPReal {
    lo: Dyadic,
    hi: Dyadic,
    digits: u32,
}

impl HPReal {
    fn bits(&self) -> u64 {
        digits_to_bits(self.digits)
    }

    fn from_bounds(lo: Dyadic, hi: Dyadic, digits: u32) -> HPReal {
        let bits = digits_to_bits(digits);
        HPReal { lo: lo.round(bits, Dir::Down), hi: hi.round(bits, Dir::Up), digits }
    }

    pub fn from_int(n: &BigInt, digits: u32) -> HPReal {
        let d = Dyadic::int(n.clone());
        HPReal::from_bounds(d.clone(), d, digits)
    }

    pub fn from_i64(n: i64, digits: u32) -> HPReal {
        HPReal::from_int(&BigInt::from(n), digits)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, digits: u32) -> Result<HPReal> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let bits = digits_to_bits(digits);
        let n = Dyadic::int(num.clone());
        let d = Dyadic::int(den.clone());
        let (lo, hi) = if den.is_negative() {
            (n.neg().div(&d.neg(), bits, Dir::Down), n.neg().div(&d.neg(), bits, Dir::Up))
        } else {
            (n.div(&d, bits, Dir::Down), n.div(&d, bits, Dir::Up))
        };
        Ok(HPReal { lo, hi, digits })
    }

    /// Enclosure of a decimal literal such as `"67578.15"`, parsed exactly.
    pub fn from_decimal(text: &str, digits: u32) -> Result<HPReal> {
        let bad = || Error::InvalidInput(format!("not a decimal literal: {text:?}"));
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = all_digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
        HPReal::from_ratio(&num, &den, digits)
    }

    pub fn from_rational(q: &BigRational, digits: u32) -> Result<HPReal> {
        HPReal::from_ratio(q.numer(), q.denom(), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Same enclosure, different working precision for subsequent operations.
    pub fn with_digits(&self, digits: u32) -> HPReal {
        HPReal::from_bounds(self.lo.clone(), self.hi.clone(), digits)
    }

    pub fn lower(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn upper(&self) -> BigRational {
        self.hi.to_rational()
    }

    pub fn lower_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn upper_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    /// `width ≤ 10^exp10`.
    pub fn width_at_most_pow10(&self, exp10: i32) -> bool {
        let ten = BigRational::from_integer(BigInt::from(10u32));
        let bound = if exp10 >= 0 {
            num_traits::pow(ten, exp10 as usize)
        } else {
            num_traits::pow(ten, (-exp10) as usize).recip()
        };
        self.width() <= bound
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lower() <= *q && *q <= self.upper()
    }

    pub fn is_subset_of(&self, other: &HPReal) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Hull of two enclosures.
    pub fn hull(&self, other: &HPReal) -> HPReal {
        HPReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            digits: self.digits.max(other.digits),
        }
    }

    pub fn gt(&self, other: &HPReal) -> Tri {
        if self.lo > other.hi {
            Tri::True
        } else if self.hi <= other.lo {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn lt(&self, other: &HPReal) -> Tri {
        other.gt(self)
    }

    pub fn is_positive(&self) -> Tri {
        if self.lo.is_positive() {
            Tri::True
        } else if !self.hi.is_positive() {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn is_negative(&self) -> Tri {
        self.neg_ref().is_positive()
    }

    fn neg_ref(&self) -> HPReal {
        HPReal { lo: self.hi.neg(), hi: self.lo.neg(), digits: self.digits }
    }

    pub fn abs(&self) -> HPReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg_ref()
        } else {
            let hi = self.hi.clone().max(self.lo.neg());
            HPReal { lo: Dyadic::zero(), hi, digits: self.digits }
        }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> HPReal {
        HPReal { lo: self.lo.shift(k), hi: self.hi.shift(k), digits: self.digits }
    }

    /// `⌊x⌋` when the enclosure pins it down.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    pub fn floor_lower(&self) -> BigInt {
        self.lo.floor()
    }

    pub fn ceil_upper(&self) -> BigInt {
        self.hi.ceil()
    }

    /// Enclosure of `‖x‖`, the distance to the nearest integer.
    pub fn dist_to_nearest_integer(&self) -> HPReal {
        let dist = |d: &Dyadic| {
            let f = Dyadic::int(d.floor());
            let c = Dyadic::int(d.ceil());
            d.sub(&f).min(c.sub(d))
        };
        let half = Dyadic::new(BigInt::one(), -1);
        let contains_integer = self.lo.ceil() <= self.hi.floor();
        let two_lo = self.lo.shift(1).sub(&Dyadic::int(BigInt::one()));
        let two_hi = self.hi.shift(1).sub(&Dyadic::int(BigInt::one()));
        // x + 1/2 integer  <=>  2x - 1 even integer; check for an odd integer in [2lo, 2hi].
        let contains_half = {
            let a = two_lo.ceil();
            let b = two_hi.floor();
            a < b || (a == b && a.is_even())
        };
        let (dl, dh) = (dist(&self.lo), dist(&self.hi));
        let lo = if contains_integer { Dyadic::zero() } else { dl.clone().min(dh.clone()) };
        let hi = if contains_half { half } else { dl.max(dh) };
        HPReal::from_bounds(lo, hi, self.digits)
    }

    pub fn recip(&self) -> Result<HPReal> {
        HPReal::from_i64(1, self.digits).div(self)
    }

    /// Division; fails when the divisor's sign is not certified.
    pub fn div(&self, other: &HPReal) -> Result<HPReal> {
        if !(other.lo.is_positive() || other.hi.is_negative()) {
            return Err(Error::Undecidable { digits: other.digits });
        }
        let digits = self.digits.max(other.digits);
        let bits = digits_to_bits(digits);
        let cands = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = cands.iter().map(|(a, b)| a.div(b, bits, Dir::Down)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| a.div(b, bits, Dir::Up)).max().unwrap();
        Ok(HPReal { lo, hi, digits })
    }

    fn div_small(&self, n: u64) -> HPReal {
        let bits = self.bits();
        let d = Dyadic::int(BigInt::from(n));
        HPReal { lo: self.lo.div(&d, bits, Dir::Down), hi: self.hi.div(&d, bits, Dir::Up), digits: self.digits }
    }

    pub fn powi(&self, n: u32) -> HPReal {
        let mut acc = HPReal::from_i64(1, self.digits);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Tight square: `[0, ..]` when the enclosure straddles zero.
    pub fn square(&self) -> HPReal {
        let a = self.abs();
        HPReal::from_bounds(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.digits)
    }

    pub fn sqrt(&self) -> Result<HPReal> {
        if self.lo.is_negative() {
            return Err(Error::NonPositive);
        }
        let bits = self.bits();
        Ok(HPReal { lo: self.lo.sqrt(bits, Dir::Down), hi: self.hi.sqrt(bits, Dir::Up), digits: self.digits })
    }

    /// Natural logarithm; requires a certified positive argument.
    pub fn ln(&self) -> Result<HPReal> {
        match self.is_positive() {
            Tri::True => {}
            Tri::False => return Err(Error::NonPositive),
            Tri::Unknown => return Err(Error::Undecidable { digits: self.digits }),
        }
        let lo = ln_point(&self.lo, self.digits).lo;
        let hi = ln_point(&self.hi, self.digits).hi;
        Ok(HPReal::from_bounds(lo, hi, self.digits))
    }

    pub fn exp(&self) -> Result<HPReal> {
        let lo = exp_point(&self.lo, self.digits)?.lo;
        let hi = exp_point(&self.hi, self.digits)?.hi;
        Ok(HPReal::from_bounds(lo, hi, self.digits))
    }

    fn point(d: Dyadic, digits: u32) -> HPReal {
        HPReal { lo: d.clone(), hi: d, digits }
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lower_f64(), self.upper_f64())
    }
}

impl Add for &HPReal {
    type Output = HPReal;
    fn add(self, rhs: &HPReal) -> HPReal {
        HPReal::from_bounds(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), self.digits.max(rhs.digits))
    }
}

impl Sub for &HPReal {
    type Output = HPReal;
    fn sub(self, rhs: &HPReal) -> HPReal {
        HPReal::from_bounds(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), self.digits.max(rhs.digits))
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        self.neg_ref()
    }
}

impl Mul for &HPReal {
    type Output = HPReal;
    fn mul(self, rhs: &HPReal) -> HPReal {
        let prods = [self.lo.mul(&rhs.lo), self.lo.mul(&rhs.hi), self.hi.mul(&rhs.lo), self.hi.mul(&rhs.hi)];
        let lo = prods.iter().min().unwrap().clone();
        let hi = prods.iter().max().unwrap().clone();
        HPReal::from_bounds(lo, hi, self.digits.max(rhs.digits))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        self.neg_ref()
    }
}

/// `atanh(z) = Σ z^(2j+1)/(2j+1)` for `|z| ≤ 1/2`, with the tail folded in.
fn atanh_series(z: &HPReal) -> HPReal {
    let digits = z.digits;
    let z2 = z.square();
    let z2_hi = z2.hi.to_f64();
    debug_assert!(z2_hi <= 0.26);
    let cutoff = Dyadic::new(BigInt::one(), -(z.bits() as i64 + 4));
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut j = 1u64;
    loop {
        power = &power * &z2;
        let term = power.div_small(2 * j + 1);
        sum = &sum + &term;
        let mag = power.abs().hi;
        if mag < cutoff {
            break;
        }
        j += 1;
    }
    // Remaining terms are bounded by |power|·z²/(1 - z²).
    let z2_abs = z2.abs();
    let one = HPReal::from_i64(1, digits);
    let tail_hi =
        (&power.abs() * &z2_abs).div(&(&one - &z2_abs)).map(|t| t.hi).unwrap_or_else(|_| Dyadic::int(BigInt::one()));
    let tail = HPReal { lo: tail_hi.neg(), hi: tail_hi, digits };
    &sum + &tail
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, HPReal>> = RefCell::new(HashMap::new());
}

fn ln2(digits: u32) -> HPReal {
    if let Some(v) = LN2_CACHE.with(|c| c.borrow().get(&digits).cloned()) {
        return v;
    }
    let third = HPReal::from_ratio(&BigInt::one(), &BigInt::from(3u32), digits).expect("nonzero");
    let v = atanh_series(&third).mul_pow2(1);
    LN2_CACHE.with(|c| c.borrow_mut().insert(digits, v.clone()));
    v
}

fn working_digits(digits: u32) -> u32 {
    digits + (SERIES_GUARD_BITS as f64 / std::f64::consts::LOG2_10).ceil() as u32
}

fn ln_point(d: &Dyadic, digits: u32) -> HPReal {
    debug_assert!(d.is_positive());
    let w = working_digits(digits);
    let mut n = d.mant.bits() as i64 + d.exp;
    let mut y = Dyadic::new(d.mant.clone(), d.exp - n);
    // Move y into [1/√2, √2).
    if y.mul(&y).shift(1) < Dyadic::int(BigInt::one()) {
        n -= 1;
        y = y.shift(1);
    }
    let one = HPReal::from_i64(1, w);
    let yr = HPReal::point(y, w);
    let z = (&yr - &one).div(&(&yr + &one)).expect("y + 1 > 0");
    let ln_y = atanh_series(&z).mul_pow2(1);
    let scaled = &ln2(w) * &HPReal::from_i64(n, w);
    let r = &scaled + &ln_y;
    HPReal::from_bounds(r.lo, r.hi, digits)
}

fn exp_point(x: &Dyadic, digits: u32) -> Result<HPReal> {
    let approx = x.to_f64();
    if !approx.is_finite() || approx.abs() > 1.0e7 {
        return Err(Error::InvalidInput(format!("exp argument out of range: {approx}")));
    }
    const HALVINGS: i64 = 8;
    let w = working_digits(digits) + 8;
    let l2 = ln2(w);
    let n = (approx / std::f64::consts::LN_2).round() as i64;
    let r = &HPReal::point(x.clone(), w) - &(&l2 * &HPReal::from_i64(n, w));
    let r = r.mul_pow2(-HALVINGS);
    let cutoff = Dyadic::new(BigInt::one(), -(digits_to_bits(w) as i64 + 4));
    let mut term = HPReal::from_i64(1, w);
    let mut sum = term.clone();
    let mut j = 1u64;
    loop {
        term = (&term * &r).div_small(j);
        sum = &sum + &term;
        if term.abs().hi < cutoff {
            break;
        }
        j += 1;
    }
    // |r| < 1/2 here, so the tail is at most twice the next term.
    let next = (&term.abs() * &r.abs()).div_small(j + 1).mul_pow2(1);
    let tail = HPReal { lo: next.hi.neg(), hi: next.hi, digits: w };
    let mut v = &sum + &tail;
    for _ in 0..HALVINGS {
        v = v.square();
    }
    let v = v.mul_pow2(n);
    Ok(HPReal::from_bounds(v.lo, v.hi, digits))
}

/// Runs a three-valued check, doubling the precision while it is undecidable.
///
/// Returns the definite answer and the precision (decimal digits) that
/// decided it. After `retries` doublings a hard error is raised.
pub fn certify<F>(start_digits: u32, retries: u32, mut check: F) -> Result<(bool, u32)>
where
    F: FnMut(u32) -> Result<Tri>,
{
    let mut digits = start_digits;
    for attempt in 0..=retries {
        match check(digits) {
            Ok(t) => {
                if let Some(b) = t.definite() {
                    return Ok((b, digits));
                }
            }
            Err(Error::Undecidable { .. }) => {}
            Err(e) => return Err(e),
        }
        if attempt < retries {
            digits *= 2;
        }
    }
    Err(Error::PrecisionExhausted { retries, digits })
}
