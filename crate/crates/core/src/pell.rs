//! Generalized Pell equations `t^2 - D s^2 = N`.
//!
//! Solutions fall into finitely many classes: two solutions are in the same
//! class when their quotient in `Z[√D]` is a unit of norm one. Each class has
//! a fundamental solution with the least nonnegative `s`; every other member
//! is the fundamental solution times a power of the unit `T + U√D`, up to sign.
//!
//! Fundamental solutions are found either by scanning `s` up to Nagell's bound
//! or, when that bound is large, by the Lagrange–Matthews–Mollin method
//! (PQa expansions of `(z + √D)/m` for square roots `z` of `D` modulo `m`).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arithmetic::{cf_sqrt, convergents, factorize, isqrt_exact, isqrt_floor, isqrt_u128};
use crate::{Error, Result};

/// Largest search effort (scan length or residue count) accepted.
pub const MAX_SEARCH: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellEquation {
    d: BigInt,
    n: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PellSolution {
    pub t: BigInt,
    pub s: BigInt,
}

/// A class of solutions: its fundamental member and the unit generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionClass {
    pub fundamental: PellSolution,
    pub unit: (BigInt, BigInt),
}

/// A solution tagged with the index of its class in the fundamental list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedSolution {
    pub solution: PellSolution,
    pub class: usize,
}

impl PellSolution {
    pub fn new(t: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        PellSolution { t: t.into(), s: s.into() }
    }

    /// Sign normalization: `s ≥ 0`, and `t ≥ 0` when `s = 0`.
    fn normalized(self) -> Self {
        if self.s.is_negative() || (self.s.is_zero() && self.t.is_negative()) {
            PellSolution { t: -self.t, s: -self.s }
        } else {
            self
        }
    }
}

impl std::fmt::Display for PellSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.t, self.s)
    }
}

impl PellEquation {
    pub fn new(d: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let (d, n) = (d.into(), n.into());
        if d < BigInt::from(2u32) {
            return Err(Error::InvalidInput(format!("D = {d} must be at least 2")));
        }
        if isqrt_exact(&d)?.is_some() {
            return Err(Error::SquareDiscriminant(d));
        }
        if n.is_zero() {
            return Err(Error::InvalidInput("N must be nonzero".into()));
        }
        Ok(PellEquation { d, n })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn norm(&self, sol: &PellSolution) -> BigInt {
        &sol.t * &sol.t - &self.d * &sol.s * &sol.s
    }

    pub fn is_solution(&self, sol: &PellSolution) -> bool {
        self.norm(sol) == self.n
    }

    fn mul(&self, sol: &PellSolution, unit: &(BigInt, BigInt), inverse: bool) -> PellSolution {
        let (tt, uu) = unit;
        if inverse {
            PellSolution { t: &sol.t * tt - &self.d * &sol.s * uu, s: &sol.s * tt - &sol.t * uu }
        } else {
            PellSolution { t: &sol.t * tt + &self.d * &sol.s * uu, s: &sol.s * tt + &sol.t * uu }
        }
    }
}

/// Least positive `(T, U)` with `T^2 - D U^2 = 1`.
pub fn minimal_unit_solution(d: &BigInt) -> Result<(BigInt, BigInt)> {
    let cf = cf_sqrt(d)?;
    let len = cf.period.len();
    let (p, q) = convergents(&cf, len).pop().expect("period is nonempty");
    if len % 2 == 0 {
        Ok((p, q))
    } else {
        Ok((&p * &p + d * &q * &q, BigInt::from(2u32) * &p * &q))
    }
}

/// Least positive solution of `x^2 - D y^2 = -1`, if one exists.
pub fn negative_unit_solution(d: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    let cf = cf_sqrt(d)?;
    let len = cf.period.len();
    if len % 2 == 0 {
        return Ok(None);
    }
    Ok(convergents(&cf, len).pop())
}

/// Class test: `t t' ≡ D s s'` and `t s' ≡ t' s` modulo `N`.
pub fn same_class(u: &PellSolution, v: &PellSolution, eq: &PellEquation) -> Result<bool> {
    for sol in [u, v] {
        if !eq.is_solution(sol) {
            return Err(Error::InvalidInput(format!("{sol} does not solve t^2 - {}s^2 = {}", eq.d, eq.n)));
        }
    }
    Ok(same_class_unchecked(u, v, eq))
}

fn same_class_unchecked(u: &PellSolution, v: &PellSolution, eq: &PellEquation) -> bool {
    let m = eq.n.abs();
    let first = &u.t * &v.t - &eq.d * &u.s * &v.s;
    let second = &u.t * &v.s - &v.t * &u.s;
    first.mod_floor(&m).is_zero() && second.mod_floor(&m).is_zero()
}

/// `2^ω(|N|)`, the bound on the number of primitive classes.
pub fn class_count_bound(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::InvalidInput("N must be nonzero".into()));
    }
    Ok(BigInt::one() << crate::arithmetic::omega(n))
}

/// Nagell's bound on the `s` of a fundamental solution, widened by one.
///
/// `N > 0`: `s ≤ U √(N / (2(T+1)))`; `N < 0`: `s ≤ U √(|N| / (2(T-1)))`.
pub fn nagell_bound(eq: &PellEquation, unit: &(BigInt, BigInt)) -> BigInt {
    let (tt, uu) = unit;
    let denom = if eq.n.is_positive() { BigInt::from(2u32) * (tt + 1u32) } else { BigInt::from(2u32) * (tt - 1u32) };
    let inner = (uu * uu * eq.n.abs()) / denom;
    isqrt_floor(&inner).expect("nonnegative") + 1u32
}

/// Greedy descent along the unit orbit to the least `s`, preferring `t ≥ 0` on ties.
///
/// Along an orbit `|s|` is unimodal, so a local minimum is the global one.
pub fn canonicalize(sol: &PellSolution, eq: &PellEquation, unit: &(BigInt, BigInt)) -> PellSolution {
    let mut cur = sol.clone().normalized();
    loop {
        let up = eq.mul(&cur, unit, false).normalized();
        let down = eq.mul(&cur, unit, true).normalized();
        let best = if up.s < down.s { up } else { down };
        if best.s < cur.s {
            cur = best;
            continue;
        }
        if best.s == cur.s && best.t > cur.t {
            cur = best;
        }
        return cur;
    }
}

fn scan_fundamentals(eq: &PellEquation, unit: &(BigInt, BigInt)) -> Result<Vec<PellSolution>> {
    let bound = nagell_bound(eq, unit);
    let start: u64 = if eq.n.is_positive() { 0 } else { 1 };
    let mut found = Vec::new();
    let fast = eq.d.to_i128().zip(eq.n.to_i128()).zip(bound.to_i128()).filter(|((d, n), b)| {
        b.checked_mul(*b)
            .and_then(|b2| b2.checked_mul(*d))
            .and_then(|v| v.checked_add(n.abs()))
            .is_some_and(|v| v < i128::MAX / 4)
    });
    if let Some(((d, n), b)) = fast {
        for s in start as i128..=b {
            let v = n + d * s * s;
            if v < 0 {
                continue;
            }
            let root = isqrt_u128(v as u128) as i128;
            if root * root == v {
                found.push(PellSolution::new(root, s));
                if root != 0 {
                    found.push(PellSolution::new(-root, s));
                }
            }
        }
    } else {
        let mut s = BigInt::from(start);
        while s <= bound {
            let v = &eq.n + &eq.d * &s * &s;
            if !v.is_negative() {
                if let Some(root) = isqrt_exact(&v)? {
                    if !root.is_zero() {
                        found.push(PellSolution { t: -&root, s: s.clone() });
                    }
                    found.push(PellSolution { t: root, s: s.clone() });
                }
            }
            s += 1u32;
        }
    }
    Ok(found)
}

/// Solutions of `z^2 ≡ D (mod m)` with `-m/2 < z ≤ m/2`.
fn sqrt_residues(d: &BigInt, m: u64) -> Vec<i64> {
    let dm = d.mod_floor(&BigInt::from(m)).to_u64().expect("reduced modulo m");
    let half = (m / 2) as i64;
    let low = half - m as i64 + 1;
    (low..=half).filter(|z| ((*z as i128 * *z as i128).rem_euclid(m as i128)) as u64 == dm).collect()
}

/// PQa expansion of `(P0 + √D)/Q0`; returns `(G_{i-1}, B_{i-1})` at the first
/// `i` with `Q_i = ±1`, scanning until a state repeats.
fn pqa_first_unit_q(p0: &BigInt, q0: &BigInt, d: &BigInt, root_floor: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let (mut b_prev2, mut b_prev1) = (BigInt::one(), BigInt::zero());
    let (mut g_prev2, mut g_prev1) = (-p0, q0.clone());
    let mut seen = BTreeSet::new();
    loop {
        if q.abs().is_one() {
            return Some((g_prev1, b_prev1));
        }
        if !seen.insert((p.clone(), q.clone())) {
            return None;
        }
        let a = if q.is_positive() { (&p + root_floor).div_floor(&q) } else { (&p + root_floor + 1u32).div_floor(&q) };
        let b_i = &a * &b_prev1 + &b_prev2;
        let g_i = &a * &g_prev1 + &g_prev2;
        b_prev2 = std::mem::replace(&mut b_prev1, b_i);
        g_prev2 = std::mem::replace(&mut g_prev1, g_i);
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
    }
}

fn lmm_cost(n: &BigInt) -> Option<u64> {
    let mut total: u64 = 0;
    for f in square_divisors(n) {
        let m = (n.abs() / (&f * &f)).to_u64()?;
        total = total.saturating_add(m);
    }
    Some(total)
}

fn square_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for d in &divisors {
            let mut pow = BigInt::one();
            for _ in 0..=e / 2 {
                next.push(d * &pow);
                pow *= &p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    divisors
}

fn lmm_fundamentals(eq: &PellEquation) -> Result<Vec<PellSolution>> {
    let d = &eq.d;
    let root_floor = isqrt_floor(d)?;
    let neg_unit = negative_unit_solution(d)?;
    let mut found = Vec::new();
    for f in square_divisors(&eq.n) {
        let target = &eq.n / (&f * &f);
        let m = target.abs().to_u64().ok_or_else(|| Error::SearchTooLarge(format!("modulus {target}")))?;
        let q0 = BigInt::from(m);
        for z in sqrt_residues(d, m) {
            let Some((r, s)) = pqa_first_unit_q(&BigInt::from(z), &q0, d, &root_floor) else {
                continue;
            };
            let norm = &r * &r - d * &s * &s;
            if norm == target {
                found.push(PellSolution { t: &f * r, s: &f * s });
            } else if let Some((t, u)) = &neg_unit {
                debug_assert_eq!(norm, -&target);
                let t2 = &r * t + &s * u * d;
                let s2 = &r * u + &s * t;
                found.push(PellSolution { t: &f * t2, s: &f * s2 });
            }
        }
    }
    Ok(found)
}

fn dedupe_classes(eq: &PellEquation, unit: &(BigInt, BigInt), candidates: Vec<PellSolution>) -> Vec<PellSolution> {
    let mut canon: Vec<PellSolution> = candidates.iter().map(|c| canonicalize(c, eq, unit)).collect();
    canon.sort_by(|a, b| a.s.cmp(&b.s).then(b.t.cmp(&a.t)));
    let mut reps: Vec<PellSolution> = Vec::new();
    for c in canon {
        if !reps.iter().any(|r| same_class_unchecked(r, &c, eq)) {
            reps.push(c);
        }
    }
    reps
}

/// Class representatives with the least nonnegative `s`, relative to the
/// minimal unit. Ordered by `s`, then by decreasing `t`.
pub fn fundamental_solutions(eq: &PellEquation) -> Result<Vec<PellSolution>> {
    let unit = minimal_unit_solution(&eq.d)?;
    let scan = nagell_bound(eq, &unit);
    let lmm = lmm_cost(&eq.n);
    let scan_cost = scan.to_u64().unwrap_or(u64::MAX);
    let candidates = match lmm {
        Some(cost) if cost < scan_cost => {
            if cost > MAX_SEARCH {
                return Err(Error::SearchTooLarge(format!("D = {}, N = {}", eq.d, eq.n)));
            }
            lmm_fundamentals(eq)?
        }
        _ => {
            if scan_cost > MAX_SEARCH {
                return Err(Error::SearchTooLarge(format!("Nagell bound {scan} for D = {}, N = {}", eq.d, eq.n)));
            }
            scan_fundamentals(eq, &unit)?
        }
    };
    Ok(dedupe_classes(eq, &unit, candidates))
}

/// Class representatives relative to an arbitrary unit `T + U√D` (`T > 1`),
/// found by a Nagell scan.
pub fn fundamental_solutions_with_unit(eq: &PellEquation, unit: &(BigInt, BigInt)) -> Result<Vec<PellSolution>> {
    let (tt, uu) = unit;
    if tt * tt - &eq.d * uu * uu != BigInt::one() || *tt <= BigInt::one() || !uu.is_positive() {
        return Err(Error::InvalidInput(format!("({tt}, {uu}) is not a nontrivial unit for D = {}", eq.d)));
    }
    let bound = nagell_bound(eq, unit);
    if bound.to_u64().is_none_or(|b| b > MAX_SEARCH) {
        return Err(Error::SearchTooLarge(format!("Nagell bound {bound}")));
    }
    let candidates = scan_fundamentals(eq, unit)?;
    Ok(dedupe_classes(eq, unit, candidates))
}

pub fn solution_classes(eq: &PellEquation) -> Result<Vec<SolutionClass>> {
    let unit = minimal_unit_solution(&eq.d)?;
    Ok(fundamental_solutions(eq)?
        .into_iter()
        .map(|fundamental| SolutionClass { fundamental, unit: unit.clone() })
        .collect())
}

/// All solutions with `0 < s ≤ s_max`, sorted by `(s, t)`, tagged by class.
pub fn enumerate_solutions(eq: &PellEquation, s_max: &BigInt) -> Result<Vec<ClassifiedSolution>> {
    let unit = minimal_unit_solution(&eq.d)?;
    let reps = fundamental_solutions(eq)?;
    Ok(walk_orbits(eq, &unit, &reps, s_max))
}

/// As [`enumerate_solutions`], with classes taken relative to `unit`.
pub fn enumerate_solutions_with_unit(
    eq: &PellEquation,
    unit: &(BigInt, BigInt),
    s_max: &BigInt,
) -> Result<Vec<ClassifiedSolution>> {
    let reps = fundamental_solutions_with_unit(eq, unit)?;
    Ok(walk_orbits(eq, unit, &reps, s_max))
}

fn walk_orbits(
    eq: &PellEquation,
    unit: &(BigInt, BigInt),
    reps: &[PellSolution],
    s_max: &BigInt,
) -> Vec<ClassifiedSolution> {
    let mut out = BTreeSet::new();
    for (class, rep) in reps.iter().enumerate() {
        for inverse in [false, true] {
            let mut cur = rep.clone();
            let mut previous_s = cur.s.clone();
            loop {
                if cur.s.is_positive() && cur.s <= *s_max {
                    out.insert((cur.s.clone(), cur.t.clone(), class));
                }
                let next = eq.mul(&cur, unit, inverse).normalized();
                // Past the minimum |s| only grows; one equal step is possible at a tie.
                if next.s > *s_max && next.s >= previous_s {
                    break;
                }
                previous_s = cur.s.clone();
                cur = next;
            }
        }
    }
    out.into_iter().map(|(s, t, class)| ClassifiedSolution { solution: PellSolution { t, s }, class }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn sol(t: i64, s: i64) -> PellSolution {
        PellSolution::new(t, s)
    }

    fn set(v: &[PellSolution]) -> BTreeSet<PellSolution> {
        v.iter().cloned().collect()
    }

    fn brute(d: i64, n: i64, s_max: i64) -> Vec<PellSolution> {
        let mut out = Vec::new();
        for s in 1..=s_max {
            let v = n as i128 + d as i128 * (s as i128) * (s as i128);
            if v < 0 {
                continue;
            }
            let r = isqrt_u128(v as u128) as i128;
            if r * r == v {
                out.push(sol(r as i64, s));
                if r != 0 {
                    out.push(sol(-r as i64, s));
                }
            }
        }
        out
    }

    #[test]
    fn unit_examples() {
        assert_eq!(minimal_unit_solution(&big(6)).unwrap(), (big(5), big(2)));
        assert_eq!(minimal_unit_solution(&big(2)).unwrap(), (big(3), big(2)));
        assert_eq!(minimal_unit_solution(&big(56)).unwrap(), (big(15), big(2)));
        assert!(matches!(minimal_unit_solution(&big(36)), Err(Error::SquareDiscriminant(_))));
        // Odd period: √13 has a norm -1 unit (18, 5).
        assert_eq!(negative_unit_solution(&big(13)).unwrap(), Some((big(18), big(5))));
        assert_eq!(minimal_unit_solution(&big(13)).unwrap(), (big(649), big(180)));
    }

    #[test]
    fn unit_is_minimal_by_scan() {
        for (d, u) in [(6i64, 2i64), (2, 2), (56, 2)] {
            for smaller in 1..u {
                assert!(isqrt_exact(&big(1 + d * smaller * smaller)).unwrap().is_none());
            }
        }
    }

    #[test]
    fn fundamental_examples() {
        let eq = PellEquation::new(6, -5).unwrap();
        assert_eq!(set(&fundamental_solutions(&eq).unwrap()), set(&[sol(1, 1), sol(-1, 1)]));
        let eq = PellEquation::new(56, -55).unwrap();
        let f = fundamental_solutions(&eq).unwrap();
        assert!(f.contains(&sol(13, 2)));
        assert_eq!(set(&f), set(&[sol(1, 1), sol(-1, 1), sol(13, 2), sol(-13, 2)]));
        let eq = PellEquation::new(6, 1).unwrap();
        assert_eq!(fundamental_solutions(&eq).unwrap(), vec![sol(1, 0)]);
    }

    #[test]
    fn class_examples() {
        let eq = PellEquation::new(6, -5).unwrap();
        // (-1, 1)(5 + 2√6) = 7 + 3√6 and (1, 1)(5 - 2√6) = -7 + 3√6.
        assert!(same_class(&sol(-1, 1), &sol(7, 3), &eq).unwrap());
        assert!(same_class(&sol(1, 1), &sol(-7, 3), &eq).unwrap());
        assert!(!same_class(&sol(1, 1), &sol(7, 3), &eq).unwrap());
        assert!(same_class(&sol(1, 1), &sol(1, 1), &eq).unwrap());
        assert!(!same_class(&sol(1, 1), &sol(-1, 1), &eq).unwrap());
        assert!(matches!(same_class(&sol(1, 2), &sol(1, 1), &eq), Err(Error::InvalidInput(_))));
        let eq56 = PellEquation::new(56, -55).unwrap();
        assert!(!same_class(&sol(13, 2), &sol(-13, 2), &eq56).unwrap());
    }

    #[test]
    fn class_bound_examples() {
        assert_eq!(class_count_bound(&big(-5)).unwrap(), big(2));
        assert_eq!(class_count_bound(&big(-1)).unwrap(), big(1));
        assert_eq!(class_count_bound(&big(-55)).unwrap(), big(4));
    }

    #[test]
    fn shared_factor_can_exceed_the_class_bound() {
        let eq = PellEquation::new(27, -27).unwrap();
        let f = fundamental_solutions(&eq).unwrap();
        let primitive = f.iter().filter(|s| s.t.gcd(&s.s).is_one()).count();
        assert_eq!(set(&f), set(&[sol(0, 1), sol(9, 2), sol(-9, 2)]));
        assert!(BigInt::from(primitive) > class_count_bound(&big(-27)).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let eq = PellEquation::new(6, -5).unwrap();
        let s: BTreeSet<BigInt> =
            enumerate_solutions(&eq, &big(10)).unwrap().into_iter().map(|c| c.solution.s).collect();
        assert_eq!(s, [1, 3, 7].into_iter().map(big).collect());
        let eq = PellEquation::new(6, 1).unwrap();
        let all: Vec<PellSolution> =
            enumerate_solutions(&eq, &big(2)).unwrap().into_iter().map(|c| c.solution).collect();
        assert_eq!(set(&all), set(&[sol(5, 2), sol(-5, 2)]));
        let eq = PellEquation::new(56, -55).unwrap();
        let s: BTreeSet<BigInt> =
            enumerate_solutions(&eq, &big(2)).unwrap().into_iter().map(|c| c.solution.s).collect();
        assert_eq!(s, [1, 2].into_iter().map(big).collect());
    }

    #[test]
    fn extra_class_family() {
        for g in 3i64..=6 {
            let k = g * g - 2;
            let d = k * (k + 1);
            let eq = PellEquation::new(d, 1 - d).unwrap();
            let f = fundamental_solutions(&eq).unwrap();
            assert!(f.contains(&sol(g * g * g - g * g - 2 * g + 1, g - 1)), "g = {g}");
        }
    }

    #[test]
    fn prime_family_has_exactly_two_classes() {
        for k in 1i64..=200 {
            let d = k * (k + 1);
            if !crate::arithmetic::is_prime(&big(d - 1)) {
                continue;
            }
            let eq = PellEquation::new(d, 1 - d).unwrap();
            assert_eq!(set(&fundamental_solutions(&eq).unwrap()), set(&[sol(1, 1), sol(-1, 1)]), "k = {k}");
        }
    }

    #[test]
    fn both_methods_agree() {
        for d in 2i64..=120 {
            let Ok(unit) = minimal_unit_solution(&big(d)) else { continue };
            for n in -60i64..=60 {
                if n == 0 {
                    continue;
                }
                let eq = PellEquation::new(d, n).unwrap();
                let scan = dedupe_classes(&eq, &unit, scan_fundamentals(&eq, &unit).unwrap());
                let lmm = dedupe_classes(&eq, &unit, lmm_fundamentals(&eq).unwrap());
                assert_eq!(set(&scan), set(&lmm), "D = {d}, N = {n}");
            }
        }
    }

    #[test]
    fn custom_unit_classes_refine_minimal_ones() {
        // (r, 1) with r^2 - ab = 1 for the pair {2, 12}: D = 24, unit (5, 1).
        let eq = PellEquation::new(24, 120).unwrap();
        let reps = fundamental_solutions_with_unit(&eq, &(big(5), big(1))).unwrap();
        for r in &reps {
            assert!(eq.is_solution(r));
        }
        let listed: Vec<PellSolution> = enumerate_solutions_with_unit(&eq, &(big(5), big(1)), &big(5000))
            .unwrap()
            .into_iter()
            .map(|c| c.solution)
            .collect();
        assert_eq!(set(&listed), set(&brute(24, 120, 5000)));
        assert!(fundamental_solutions_with_unit(&eq, &(big(4), big(1))).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn enumeration_matches_brute_force(d in 2i64..=500, n in -500i64..=500) {
            prop_assume!(n != 0);
            prop_assume!(isqrt_exact(&big(d)).unwrap().is_none());
            let eq = PellEquation::new(d, n).unwrap();
            let listed: Vec<PellSolution> = enumerate_solutions(&eq, &big(10_000)).unwrap().into_iter().map(|c| c.solution).collect();
            prop_assert_eq!(set(&listed), set(&brute(d, n, 10_000)));
            prop_assert_eq!(listed.len(), set(&listed).len());
        }

        #[test]
        fn same_class_is_an_equivalence(d in 2i64..=200, n in -200i64..=200) {
            prop_assume!(n != 0);
            prop_assume!(isqrt_exact(&big(d)).unwrap().is_none());
            let eq = PellEquation::new(d, n).unwrap();
            let sols: Vec<PellSolution> = brute(d, n, 2_000).into_iter().take(12).collect();
            for a in &sols {
                prop_assert!(same_class(a, a, &eq).unwrap());
                for b in &sols {
                    let ab = same_class(a, b, &eq).unwrap();
                    prop_assert_eq!(ab, same_class(b, a, &eq).unwrap());
                    for c in &sols {
                        if ab && same_class(b, c, &eq).unwrap() {
                            prop_assert!(same_class(a, c, &eq).unwrap());
                        }
                    }
                }
            }
        }

        #[test]
        fn unit_multiplication_preserves_class(d in 2i64..=300, n in -300i64..=300) {
            prop_assume!(n != 0);
            prop_assume!(isqrt_exact(&big(d)).unwrap().is_none());
            let eq = PellEquation::new(d, n).unwrap();
            let unit = minimal_unit_solution(&big(d)).unwrap();
            for s in brute(d, n, 1_000) {
                let next = eq.mul(&s, &unit, false);
                prop_assert!(eq.is_solution(&next));
                prop_assert!(same_class(&s, &next, &eq).unwrap());
                if s.t.is_positive() {
                    prop_assert!(next.s > s.s);
                }
            }
        }

        #[test]
        fn primitive_classes_respect_bound_for_odd_coprime_n(d in 2i64..=500, n in -499i64..=499) {
            prop_assume!(n % 2 != 0);
            prop_assume!(isqrt_exact(&big(d)).unwrap().is_none());
            prop_assume!(big(d).gcd(&big(n)).is_one());
            let eq = PellEquation::new(d, n).unwrap();
            let f = fundamental_solutions(&eq).unwrap();
            let primitive = f.iter().filter(|s| s.t.gcd(&s.s).is_one()).count();
            prop_assert!(BigInt::from(primitive) <= class_count_bound(&big(n)).unwrap());
        }
    }
}
