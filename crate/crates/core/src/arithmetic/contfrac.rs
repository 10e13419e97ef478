use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{isqrt_exact, HPReal};
use crate::{Error, Result};

/// Simple continued fraction `[head; terms..., (period)...]`.
///
/// Quadratic irrationals carry a nonempty `period` that repeats forever after
/// `terms`; rationals and truncated expansions have an empty period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub head: BigInt,
    pub terms: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Expansion of `num/den` by the Euclidean algorithm.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let (mut n, mut d) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let head = n.div_floor(&d);
        let mut terms = Vec::new();
        let mut rem = &n - &head * &d;
        while !rem.is_zero() {
            n = std::mem::replace(&mut d, rem);
            let q = n.div_floor(&d);
            rem = &n - &q * &d;
            terms.push(q);
        }
        Ok(ContinuedFraction { head, terms, period: Vec::new() })
    }

    /// Partial quotients after the head, cycling through the period.
    pub fn tail_quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        let cycle: Box<dyn Iterator<Item = &BigInt>> =
            if self.period.is_empty() { Box::new(std::iter::empty()) } else { Box::new(self.period.iter().cycle()) };
        self.terms.iter().chain(cycle)
    }
}

/// Periodic expansion of `√D` via the exact `(P, Q)` state recursion.
///
/// The period closes when the state after the first step reappears; the
/// closing quotient is checked to equal `2⌊√D⌋`.
pub fn cf_sqrt(d: &BigInt) -> Result<ContinuedFraction> {
    if *d < BigInt::from(2u32) {
        return Err(Error::InvalidInput(format!("D = {d} must be at least 2")));
    }
    if isqrt_exact(d)?.is_some() {
        return Err(Error::SquareDiscriminant(d.clone()));
    }
    let a0 = super::isqrt_floor(d)?;
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let mut period = Vec::new();
    let mut first_state = None;
    loop {
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
        let state = (p.clone(), q.clone());
        match &first_state {
            None => first_state = Some(state),
            Some(s) if *s == state => break,
            Some(_) => {}
        }
        a = (&a0 + &p) / &q;
        period.push(a.clone());
    }
    if period.last() != Some(&(&a0 * 2u32)) {
        return Err(Error::InvalidInput(format!("period of sqrt({d}) failed verification")));
    }
    Ok(ContinuedFraction { head: a0, terms: Vec::new(), period })
}

/// The first `count` convergents `p/q`, in lowest terms.
///
/// Denominators are nondecreasing and strictly increasing from the second
/// convergent on. Finite expansions stop at their last term.
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (cf.head.clone(), BigInt::one());
    out.push((p.clone(), q.clone()));
    for a in cf.tail_quotients().take(count - 1) {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Partial quotients shared by every real in the enclosure.
///
/// Expansion stops at the first quotient the enclosure cannot pin down, or
/// after `max_terms` quotients.
pub fn expand_enclosure(x: &HPReal, max_terms: usize) -> ContinuedFraction {
    let lo = x.lower();
    let hi = x.upper();
    // Both endpoints as fractions n/d with d > 0; each step maps x to 1/(x - a),
    // which swaps the roles of the endpoints.
    let (mut n_lo, mut d_lo) = (lo.numer().clone(), lo.denom().clone());
    let (mut n_hi, mut d_hi) = (hi.numer().clone(), hi.denom().clone());
    let mut quotients = Vec::new();
    while quotients.len() < max_terms {
        let a = n_lo.div_floor(&d_lo);
        if a != n_hi.div_floor(&d_hi) {
            break;
        }
        let r_lo = &n_lo - &a * &d_lo;
        let r_hi = &n_hi - &a * &d_hi;
        quotients.push(a);
        if r_lo.is_zero() || r_hi.is_zero() {
            break;
        }
        let (new_n_lo, new_d_lo) = (d_hi, r_hi);
        let (new_n_hi, new_d_hi) = (d_lo, r_lo);
        n_lo = new_n_lo;
        d_lo = new_d_lo;
        n_hi = new_n_hi;
        d_hi = new_d_hi;
    }
    let mut iter = quotients.into_iter();
    match iter.next() {
        Some(head) => ContinuedFraction { head, terms: iter.collect(), period: Vec::new() },
        None => ContinuedFraction { head: x.floor_lower(), terms: Vec::new(), period: Vec::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(big).collect()
    }

    #[test]
    fn sqrt_expansions() {
        let six = cf_sqrt(&big(6)).unwrap();
        assert_eq!((six.head.clone(), six.period.clone()), (big(2), bigs(&[2, 4])));
        let two = cf_sqrt(&big(2)).unwrap();
        assert_eq!((two.head.clone(), two.period.clone()), (big(1), bigs(&[2])));
        let fifty_six = cf_sqrt(&big(56)).unwrap();
        assert_eq!((fifty_six.head.clone(), fifty_six.period.clone()), (big(7), bigs(&[2, 14])));
    }

    #[test]
    fn sqrt_rejects_squares_and_small() {
        assert!(matches!(cf_sqrt(&big(49)), Err(Error::SquareDiscriminant(_))));
        assert!(matches!(cf_sqrt(&big(1)), Err(Error::InvalidInput(_))));
        assert!(matches!(cf_sqrt(&big(-3)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn convergent_examples() {
        let six = cf_sqrt(&big(6)).unwrap();
        assert_eq!(convergents(&six, 2), vec![(big(2), big(1)), (big(5), big(2))]);
        let seven_thirds = ContinuedFraction::from_ratio(&big(7), &big(3)).unwrap();
        assert_eq!(convergents(&seven_thirds, 10), vec![(big(2), big(1)), (big(7), big(3))]);
        let fifty_six = cf_sqrt(&big(56)).unwrap();
        assert_eq!(convergents(&fifty_six, 2), vec![(big(7), big(1)), (big(15), big(2))]);
    }

    #[test]
    fn negative_ratio_has_floor_head() {
        let cf = ContinuedFraction::from_ratio(&big(-7), &big(3)).unwrap();
        assert_eq!(cf.head, big(-3));
        let last = convergents(&cf, 10).pop().unwrap();
        assert_eq!(last, (big(-7), big(3)));
    }

    #[test]
    fn period_convergent_solves_unit_equation_up_to_ten_thousand() {
        for d in 2i64..=10_000 {
            let root = (d as f64).sqrt() as i64;
            if root * root == d || (root + 1) * (root + 1) == d {
                continue;
            }
            let cf = cf_sqrt(&big(d)).unwrap();
            let len = cf.period.len();
            let (p, q) = convergents(&cf, len).pop().unwrap();
            let norm = &p * &p - big(d) * &q * &q;
            assert!(norm == big(1) || norm == big(-1), "D = {d}");
            let qs: Vec<BigInt> = convergents(&cf, len + 1).into_iter().map(|(_, q)| q).collect();
            assert!(qs.windows(2).skip(1).all(|w| w[0] < w[1]), "D = {d}");
        }
    }

    #[test]
    fn enclosure_expansion_matches_exact_rational_prefix() {
        let x = HPReal::from_int(&big(24), 60).sqrt().unwrap();
        let cf = expand_enclosure(&x, 40);
        // √24 = [4; 1, 8 repeating].
        assert_eq!(cf.head, big(4));
        for (i, a) in cf.terms.iter().enumerate() {
            assert_eq!(*a, if i % 2 == 0 { big(1) } else { big(8) });
        }
        assert!(cf.terms.len() >= 20);
        let q = BigRational::new(big(355), big(113));
        let pi_ish = HPReal::from_rational(&q, 30).unwrap();
        let cf = expand_enclosure(&pi_ish, 10);
        // 355/113 = [3; 7, 16]; outward rounding leaves the final quotient undecided.
        assert_eq!(cf.head, big(3));
        assert_eq!(cf.terms[0], big(7));
        assert!(cf.terms.len() <= 2);
    }
}
