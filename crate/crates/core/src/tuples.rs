//! Diophantine tuples, regularity, the pair `{2, b}` and its triple family.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{is_square, isqrt_exact, isqrt_floor};
use crate::pell::{enumerate_solutions_with_unit, PellEquation};
use crate::{Error, Result};

/// A set of distinct positive integers whose pairwise products plus one are squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DTuple {
    elements: Vec<BigInt>,
}

impl DTuple {
    pub fn new(mut elements: Vec<BigInt>) -> Result<Self> {
        validate_elements(&elements)?;
        elements.sort();
        if !all_pairs_square(&elements) {
            return Err(Error::NotDiophantine(format_set(&elements)));
        }
        Ok(DTuple { elements })
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }
}

/// The pair `{2, b}` with `b = 2k(k+1)` and `2b + 1 = r^2`, `r = 2k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair2B {
    pub k: u64,
    pub b: BigInt,
    pub r: BigInt,
}

/// Which of the two sign branches of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn signum(self) -> i32 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    fn apply(self, x: BigInt) -> BigInt {
        match self {
            Branch::Plus => x,
            Branch::Minus => -x,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

/// A member `{2, b, c}` of the family, with `2c + 1 = s^2` and `bc + 1 = t^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleFamily {
    pub pair: Pair2B,
    pub nu: u32,
    pub branch: Branch,
    pub c: BigInt,
    pub s: BigInt,
    pub t: BigInt,
}

impl TripleFamily {
    /// The triple as a sorted set; `c` precedes `b` when `c < b`.
    pub fn elements(&self) -> [BigInt; 3] {
        let mut e = [BigInt::from(2u32), self.pair.b.clone(), self.c.clone()];
        e.sort();
        e
    }
}

/// A quadruple-completing `d` found by [`brute_force_extensions`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    #[serde(with = "crate::bigint_string")]
    pub d: BigInt,
    pub regular: bool,
}

fn format_set(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn validate_elements(xs: &[BigInt]) -> Result<()> {
    if let Some(bad) = xs.iter().find(|x| !x.is_positive()) {
        return Err(Error::InvalidInput(format!("element {bad} is not positive")));
    }
    let mut sorted = xs.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!("duplicate elements in {}", format_set(xs))));
    }
    Ok(())
}

fn all_pairs_square(xs: &[BigInt]) -> bool {
    xs.iter().enumerate().all(|(i, x)| xs[i + 1..].iter().all(|y| is_square(&(x * y + 1u32))))
}

/// Whether every pairwise product plus one is a square.
pub fn is_diophantine_tuple(xs: &[BigInt]) -> Result<bool> {
    validate_elements(xs)?;
    Ok(all_pairs_square(xs))
}

fn require_diophantine(xs: &[BigInt]) -> Result<()> {
    if is_diophantine_tuple(xs)? {
        Ok(())
    } else {
        Err(Error::NotDiophantine(format_set(xs)))
    }
}

/// `(c - b - a)^2 = 4(ab + 1)`.
pub fn is_regular_triple(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<bool> {
    require_diophantine(&[a.clone(), b.clone(), c.clone()])?;
    let lhs = c - b - a;
    Ok(&lhs * &lhs == BigInt::from(4u32) * (a * b + 1u32))
}

/// `(d + c - a - b)^2 = 4(ab + 1)(cd + 1)`.
pub fn is_regular_quadruple(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<bool> {
    require_diophantine(&[a.clone(), b.clone(), c.clone(), d.clone()])?;
    Ok(regular_quadruple_unchecked(a, b, c, d))
}

fn regular_quadruple_unchecked(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> bool {
    let lhs = d + c - a - b;
    &lhs * &lhs == BigInt::from(4u32) * (a * b + 1u32) * (c * d + 1u32)
}

fn root_of(x: BigInt) -> BigInt {
    isqrt_exact(&x).ok().flatten().expect("checked square")
}

/// The regular extensions `d± = a + b + c + 2(abc ± rst)`.
///
/// Both satisfy `a d + 1 = (at ± rs)^2`, `b d + 1 = (bs ± rt)^2` and
/// `c d + 1 = (cr ± st)^2`; these are checked before returning.
pub fn d_plus_minus(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<(BigInt, BigInt)> {
    require_diophantine(&[a.clone(), b.clone(), c.clone()])?;
    let r = root_of(a * b + 1u32);
    let s = root_of(a * c + 1u32);
    let t = root_of(b * c + 1u32);
    let base = a + b + c + BigInt::from(2u32) * a * b * c;
    let rst = BigInt::from(2u32) * &r * &s * &t;
    let plus = &base + &rst;
    let minus = &base - &rst;
    for (d, sign) in [(&plus, Branch::Plus), (&minus, Branch::Minus)] {
        let checks = [
            (a * d + 1u32, a * &t + sign.apply(&r * &s)),
            (b * d + 1u32, b * &s + sign.apply(&r * &t)),
            (c * d + 1u32, c * &r + sign.apply(&s * &t)),
        ];
        for (lhs, root) in checks {
            if lhs != &root * &root {
                return Err(Error::InvalidInput(format!(
                    "extension identity failed for {}",
                    format_set(&[a.clone(), b.clone(), c.clone()])
                )));
            }
        }
    }
    Ok((plus, minus))
}

pub fn pair_from_k(k: u64) -> Result<Pair2B> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let kb = BigInt::from(k);
    let b = BigInt::from(2u32) * &kb * (&kb + 1u32);
    let r = BigInt::from(2u32) * &kb + 1u32;
    debug_assert_eq!(BigInt::from(2u32) * &b + 1u32, &r * &r);
    Ok(Pair2B { k, b, r })
}

/// `(t_nu, s_nu)` from `t_0 = ±1, t_1 = b ± r`, `s_0 = 1, s_1 = r ± 2`, kernel `(2r, -1)`.
pub fn family_roots(pair: &Pair2B, nu: u32, branch: Branch) -> (BigInt, BigInt) {
    let (b, r) = (&pair.b, &pair.r);
    let mut t = (branch.apply(BigInt::one()), b + branch.apply(r.clone()));
    let mut s = (BigInt::one(), r + branch.apply(BigInt::from(2u32)));
    for _ in 0..nu {
        t = (t.1.clone(), BigInt::from(2u32) * r * &t.1 - &t.0);
        s = (s.1.clone(), BigInt::from(2u32) * r * &s.1 - &s.0);
    }
    (t.0, s.0)
}

fn closed_form_c(pair: &Pair2B, nu: u32, branch: Branch) -> BigInt {
    let (b, r) = (&pair.b, &pair.r);
    let sg = |x: BigInt| branch.apply(x);
    let two = BigInt::from(2u32);
    match nu {
        1 => &two + b + sg(&two * r),
        2 => BigInt::from(4u32) * r * (r + sg(two.clone())) * (b + sg(r.clone())),
        _ => {
            BigInt::from(64u32) * b * b * (&two + b + sg(&two * r))
                + BigInt::from(16u32) * b * (BigInt::from(6u32) + BigInt::from(3u32) * b + sg(BigInt::from(4u32) * r))
                + BigInt::from(3u32) * (BigInt::from(6u32) + BigInt::from(3u32) * b + sg(&two * r))
        }
    }
}

/// The triple `{2, b, c_nu^±}` for `nu ∈ {1, 2, 3}`.
pub fn c_family(pair: &Pair2B, nu: u32, branch: Branch) -> Result<TripleFamily> {
    if !(1..=3).contains(&nu) {
        return Err(Error::InvalidInput(format!("nu = {nu} must be 1, 2 or 3")));
    }
    let c = closed_form_c(pair, nu, branch);
    if !c.is_positive() {
        return Err(Error::Degenerate(format!("c = {c} for k = {}, nu = {nu}, sign {branch}", pair.k)));
    }
    let (t, s) = family_roots(pair, nu, branch);
    let (t, s) = (t.abs(), s.abs());
    if (&s * &s - 1u32) != BigInt::from(2u32) * &c || &t * &t != &pair.b * &c + 1u32 {
        return Err(Error::InvalidInput(format!("closed form and recurrence disagree at k = {}, nu = {nu}", pair.k)));
    }
    if c == pair.b {
        return Err(Error::Degenerate(format!("c = b = {c}")));
    }
    Ok(TripleFamily { pair: pair.clone(), nu, branch, c, s, t })
}

/// The regular quadruples `{a, b, a + b ± 2r, d+}` built on a pair, sorted.
///
/// A branch is kept when `a + b ± 2r` is positive and new; `d+` of the
/// resulting triple equals `4r(a ± r)(b ± r)` whenever that is positive.
pub fn extend_pair_regular(a: &BigInt, b: &BigInt) -> Result<Vec<[BigInt; 4]>> {
    require_diophantine(&[a.clone(), b.clone()])?;
    let r = root_of(a * b + 1u32);
    let mut out = Vec::new();
    for branch in Branch::BOTH {
        let c = a + b + branch.apply(BigInt::from(2u32) * &r);
        if !c.is_positive() || c == *a || c == *b {
            continue;
        }
        let (d, _) = d_plus_minus(a, b, &c)?;
        let mut quad = [a.clone(), b.clone(), c, d];
        quad.sort();
        out.push(quad);
    }
    Ok(out)
}

/// `b r / 12 = k(k+1)(2k+1)/6`, the square pyramidal number.
pub fn pyramidal_identity(k: u64) -> bool {
    let Ok(pair) = pair_from_k(k) else { return false };
    let kb = BigInt::from(k);
    let lhs = &pair.b * &pair.r;
    let pyramid = &kb * (&kb + 1u32) * (BigInt::from(2u32) * &kb + 1u32);
    lhs.is_multiple_of(&BigInt::from(12u32)) && lhs / 12u32 == pyramid / 6u32
}

/// Every `d` in `(max(a, b, c), d_max]` extending the triple, tagged by regularity.
///
/// With `x < y` the two smallest elements and `r^2 = xy + 1`, an extension
/// needs `x d + 1 = u^2` and `y d + 1 = v^2`, so `T = y u`, `S = v` solve
/// `T^2 - xy S^2 = y(y - x)`. Those solutions are enumerated class by class
/// with the unit `r + √(xy)` up to `S ≤ √(y d_max + 1)`, and each candidate
/// `d` is checked against the third element.
pub fn brute_force_extensions(a: &BigInt, b: &BigInt, c: &BigInt, d_max: &BigInt) -> Result<Vec<Extension>> {
    require_diophantine(&[a.clone(), b.clone(), c.clone()])?;
    let mut e = [a.clone(), b.clone(), c.clone()];
    e.sort();
    let [x, y, z] = e;
    if *d_max <= z {
        return Ok(Vec::new());
    }
    let r = root_of(&x * &y + 1u32);
    let eq = PellEquation::new(&x * &y, &y * (&y - &x))?;
    let s_max = isqrt_floor(&(&y * d_max + 1u32))?;
    let mut found = std::collections::BTreeSet::new();
    for sol in enumerate_solutions_with_unit(&eq, &(r, BigInt::one()), &s_max)? {
        let (u, rem) = sol.solution.t.abs().div_rem(&y);
        if !rem.is_zero() {
            continue;
        }
        let (d, rem) = (&u * &u - 1u32).div_rem(&x);
        if !rem.is_zero() || d <= z || d > *d_max {
            continue;
        }
        if &y * &d + 1u32 == &sol.solution.s * &sol.solution.s && is_square(&(&z * &d + 1u32)) {
            found.insert(d);
        }
    }
    Ok(found
        .into_iter()
        .map(|d| {
            let regular = regular_quadruple_unchecked(&x, &y, &z, &d);
            Extension { d, regular }
        })
        .collect())
}
