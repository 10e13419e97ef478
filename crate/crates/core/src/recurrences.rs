//! Second-order recurrences behind the extension problem.
//!
//! An extension `d` of `{2, b, c}` gives `2d + 1 = x^2`, `bd + 1 = y^2` and
//! `cd + 1 = z^2`; each pair of these is a Pell equation, and `x`, `y`, `z`
//! appear as common terms of two binary recurrences. The main search solves
//! `x = V_m = p_l`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::pell::{fundamental_solutions, PellEquation};
use crate::tuples::{is_regular_quadruple, Branch, Pair2B, TripleFamily};
use crate::{Error, Result};

/// `u_{i+2} = A u_{i+1} + B u_i` with memoized terms.
#[derive(Debug)]
pub struct SecondOrderSeq {
    u0: BigInt,
    u1: BigInt,
    kernel: (BigInt, BigInt),
    memo: Mutex<Vec<BigInt>>,
}

impl Clone for SecondOrderSeq {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().expect("memo lock").clone();
        SecondOrderSeq { u0: self.u0.clone(), u1: self.u1.clone(), kernel: self.kernel.clone(), memo: Mutex::new(memo) }
    }
}

impl PartialEq for SecondOrderSeq {
    fn eq(&self, other: &Self) -> bool {
        self.u0 == other.u0 && self.u1 == other.u1 && self.kernel == other.kernel
    }
}

impl SecondOrderSeq {
    pub fn new(u0: impl Into<BigInt>, u1: impl Into<BigInt>, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        let (u0, u1) = (u0.into(), u1.into());
        let memo = Mutex::new(vec![u0.clone(), u1.clone()]);
        SecondOrderSeq { u0, u1, kernel: (a.into(), b.into()), memo }
    }

    /// Kernel `(2c, -1)`, the shape of every Pell-derived sequence here.
    pub fn pell_kernel(u0: impl Into<BigInt>, u1: impl Into<BigInt>, c: &BigInt) -> Self {
        Self::new(u0, u1, BigInt::from(2u32) * c, -1)
    }

    pub fn kernel(&self) -> &(BigInt, BigInt) {
        &self.kernel
    }

    pub fn initial(&self) -> (&BigInt, &BigInt) {
        (&self.u0, &self.u1)
    }

    pub fn at(&self, i: usize) -> BigInt {
        let mut memo = self.memo.lock().expect("memo lock");
        while memo.len() <= i {
            let n = memo.len();
            let next = &self.kernel.0 * &memo[n - 1] + &self.kernel.1 * &memo[n - 2];
            memo.push(next);
        }
        memo[i].clone()
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        if n > 0 {
            self.at(n - 1);
        }
        self.memo.lock().expect("memo lock")[..n].to_vec()
    }
}

/// Term `i` of a sequence; negative indices are rejected.
pub fn seq_at(seq: &SecondOrderSeq, i: i64) -> Result<BigInt> {
    let i = usize::try_from(i).map_err(|_| Error::InvalidInput(format!("negative index {i}")))?;
    Ok(seq.at(i))
}

/// Odd-indexed terms `u_1, u_3, ...`, which satisfy kernel `(A^2 + 2B, -B^2)`.
pub fn halve_odd_indices(seq: &SecondOrderSeq) -> SecondOrderSeq {
    let (a, b) = &seq.kernel;
    SecondOrderSeq::new(seq.at(1), seq.at(3), a * a + BigInt::from(2u32) * b, -(b * b))
}

/// `t_nu^±` of the family: `t_0 = ±1`, `t_1 = b ± r`.
pub fn family_t_seq(pair: &Pair2B, branch: Branch) -> SecondOrderSeq {
    let sign = BigInt::from(branch.signum());
    SecondOrderSeq::pell_kernel(sign.clone(), &pair.b + &sign * &pair.r, &pair.r)
}

/// `s_nu^±` of the family: `s_0 = 1`, `s_1 = r ± 2`.
pub fn family_s_seq(pair: &Pair2B, branch: Branch) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(1, &pair.r + BigInt::from(2 * branch.signum()), &pair.r)
}

/// `T_nu` with `(r + √(2b))^nu = T_nu + U_nu √(2b)`.
pub fn unit_t_seq(pair: &Pair2B) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(1, pair.r.clone(), &pair.r)
}

pub fn unit_u_seq(pair: &Pair2B) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(0, 1, &pair.r)
}

/// `z`-side sequence from `2z^2 - c x^2 = 2 - c`: `v_1 = s z_0 + c x_0`.
pub fn v_seq(fam: &TripleFamily, z0: &BigInt, x0: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(z0.clone(), &fam.s * z0 + &fam.c * x0, &fam.s)
}

/// `z`-side sequence from `b z^2 - c y^2 = b - c`: `w_1 = t z_1 + c y_1`.
pub fn w_seq(fam: &TripleFamily, z1: &BigInt, y1: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(z1.clone(), &fam.t * z1 + &fam.c * y1, &fam.t)
}

/// `y`-side sequence from `b z^2 - c y^2 = b - c`: `W_1 = t y_1 + b z_1`.
pub fn big_w_seq(fam: &TripleFamily, z1: &BigInt, y1: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(y1.clone(), &fam.t * y1 + &fam.pair.b * z1, &fam.t)
}

/// `y`-side sequence from `2y^2 - b x^2 = 2 - b`: `q_1 = r y_2 + b x_2`.
pub fn q_seq(pair: &Pair2B, y2: &BigInt, x2: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(y2.clone(), &pair.r * y2 + &pair.b * x2, &pair.r)
}

/// `x`-side sequence from `2z^2 - c x^2 = 2 - c`: `V_1 = s x_0 + 2 z_0`.
pub fn big_v_seq(fam: &TripleFamily, z0: &BigInt, x0: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(x0.clone(), &fam.s * x0 + BigInt::from(2u32) * z0, &fam.s)
}

/// `x`-side sequence from `2y^2 - b x^2 = 2 - b`: `p_1 = r x_2 + 2 y_2`.
pub fn p_seq(pair: &Pair2B, y2: &BigInt, x2: &BigInt) -> SecondOrderSeq {
    SecondOrderSeq::pell_kernel(x2.clone(), &pair.r * x2 + BigInt::from(2u32) * y2, &pair.r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// The three shapes of initial data that can produce an extension.
///
/// `A`: `l, m` even, `z_0 = ±1`. `B`: `m` odd, `z_0 = t`. `C`: `m` odd, `z_0 = -t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseKind {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCase {
    pub kind: CaseKind,
    pub parity: Parity,
    pub z0: BigInt,
    pub x0: BigInt,
    pub y2: BigInt,
    pub x2: BigInt,
    /// Index shift: 0 for `A`, 1 for `B`, -1 for `C`.
    pub lambda: i8,
}

impl FundamentalCase {
    /// The six admissible initial-data combinations for a family member.
    pub fn all(fam: &TripleFamily) -> Vec<FundamentalCase> {
        let one = BigInt::one();
        let r = fam.pair.r.clone();
        let mut out = Vec::with_capacity(6);
        for z0 in [1i32, -1] {
            out.push(FundamentalCase {
                kind: CaseKind::A,
                parity: Parity::Even,
                z0: BigInt::from(z0),
                x0: one.clone(),
                y2: one.clone(),
                x2: one.clone(),
                lambda: 0,
            });
        }
        for (kind, lambda) in [(CaseKind::B, 1i8), (CaseKind::C, -1)] {
            for y2 in [1i32, -1] {
                out.push(FundamentalCase {
                    kind,
                    parity: Parity::Odd,
                    z0: BigInt::from(lambda) * &fam.t,
                    x0: r.clone(),
                    y2: BigInt::from(y2),
                    x2: one.clone(),
                    lambda,
                });
            }
        }
        out
    }

    /// Short label such as `A(z0=-1)` or `B(y2=+1)`.
    pub fn label(&self) -> String {
        match self.kind {
            CaseKind::A => format!("A(z0={:+})", self.z0),
            kind => format!("{kind:?}(y2={:+})", self.y2),
        }
    }
}

/// `(V, p)` for the equation `x = V_m = p_l`.
pub fn build_case_sequences(fam: &TripleFamily, case: &FundamentalCase) -> Result<(SecondOrderSeq, SecondOrderSeq)> {
    let consistent = match case.kind {
        CaseKind::A => case.z0.abs().is_one() && case.x0.is_one() && case.y2.is_one() && case.lambda == 0,
        CaseKind::B => case.z0 == fam.t && case.x0 == fam.pair.r && case.y2.abs().is_one() && case.lambda == 1,
        CaseKind::C => case.z0 == -&fam.t && case.x0 == fam.pair.r && case.y2.abs().is_one() && case.lambda == -1,
    };
    if !consistent || !case.x2.is_one() {
        return Err(Error::InvalidInput(format!("inconsistent case data {}", case.label())));
    }
    Ok((big_v_seq(fam, &case.z0, &case.x0), p_seq(&fam.pair, &case.y2, &case.x2)))
}

/// How the exclusion of other fundamental solutions was justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Justification {
    /// `b > 4000`: residues modulo `b` pin `y_2` down since `|y_2| < b/2`.
    Analytic,
    /// `b ≤ 4000`: every fundamental solution was enumerated and checked.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedY2 {
    pub y2: BigInt,
    pub x2: BigInt,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Y2Classification {
    pub cases: Vec<FundamentalCase>,
    pub accepted: Vec<(BigInt, BigInt)>,
    pub rejected: Vec<RejectedY2>,
    /// Fundamental solutions no argument disposes of; nonempty means unresolved.
    pub unexplained: Vec<(BigInt, BigInt)>,
    pub justification: Justification,
}

/// Classifies the fundamental solutions `(y_2, x_2)` of `2y^2 - b x^2 = 2 - b`.
///
/// A common term `y = W_n = q_l` forces `y_2 ≡ ±1` or `±r (mod b)`. Residue
/// `±r` would give `x_2^2 = 5`; residue `±1` leaves `y_2 = ±1`.
pub fn classify_y2(pair: &Pair2B, fam: &TripleFamily) -> Result<Y2Classification> {
    let half = &pair.b / 2u32;
    let eq = PellEquation::new(half.clone(), BigInt::one() - &half)?;
    let reps = fundamental_solutions(&eq)?;
    let b = &pair.b;
    let r = &pair.r;
    let residue = |y: &BigInt| y.mod_floor(b);
    let ones = [residue(&BigInt::one()), residue(&-BigInt::one())];
    let rs = [residue(r), residue(&-r)];
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    let mut unexplained = Vec::new();
    for rep in reps {
        let (y2, x2) = (rep.t, rep.s);
        let res = residue(&y2);
        if ones.contains(&res) {
            if y2.abs().is_one() && x2.is_one() {
                accepted.push((y2, x2));
            } else {
                unexplained.push((y2, x2));
            }
        } else if rs.contains(&res) {
            if y2.abs() == *r {
                rejected.push(RejectedY2 { y2, x2, reason: "y2 = ±r forces x2^2 = 5".into() });
            } else {
                unexplained.push((y2, x2));
            }
        } else {
            rejected.push(RejectedY2 { y2, x2, reason: format!("y2 ≡ {res} (mod {b}) is not ±1 or ±r") });
        }
    }
    let justification = if *b > BigInt::from(4000u32) { Justification::Analytic } else { Justification::Oracle };
    Ok(Y2Classification { cases: FundamentalCase::all(fam), accepted, rejected, unexplained, justification })
}

/// `Δ = l - λ - ν m`.
pub fn delta_of(l: i64, lambda: i64, nu: i64, m: i64) -> i64 {
    l - lambda - nu * m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionSolution {
    pub m: u64,
    pub l: u64,
    pub x: BigInt,
    pub delta: i64,
    /// Whether `(m, l)` has the parity its case requires.
    pub parity_ok: bool,
    /// `d = (x^2 - 1)/2`; zero for the trivial coincidence.
    pub d: BigInt,
    /// `d > 0` and `{2, b, c, d}` is a regular quadruple.
    pub regular: bool,
}

/// All `(m, l)` with `m ≤ m_max` and `V_m = p_l`.
///
/// Terms of `p` are indexed by value up to the largest `V_m`; solutions of
/// the wrong parity are kept and flagged.
pub fn solve_intersection(
    v: &SecondOrderSeq,
    p: &SecondOrderSeq,
    m_max: u64,
    case: &FundamentalCase,
    fam: &TripleFamily,
) -> Vec<IntersectionSolution> {
    let v_terms = v.terms(m_max as usize + 1);
    let ceiling = v_terms.iter().max().cloned().unwrap_or_default();
    let mut index: HashMap<BigInt, Vec<u64>> = HashMap::new();
    let mut l = 0usize;
    loop {
        let term = p.at(l);
        if term > ceiling && l >= 2 {
            break;
        }
        index.entry(term).or_default().push(l as u64);
        l += 1;
    }
    let nu = i64::from(fam.nu);
    let mut out = Vec::new();
    for (m, x) in v_terms.iter().enumerate() {
        let Some(ls) = index.get(x) else { continue };
        for &l in ls {
            let m = m as u64;
            let parity_ok = match case.parity {
                Parity::Even => m.is_multiple_of(2) && l.is_multiple_of(2),
                Parity::Odd => m % 2 == 1,
            };
            let d = (x * x - 1u32) / 2u32;
            let regular = d.is_positive() && regular_with_family(fam, &d);
            out.push(IntersectionSolution {
                m,
                l,
                x: x.clone(),
                delta: delta_of(l as i64, i64::from(case.lambda), nu, m as i64),
                parity_ok,
                d,
                regular,
            });
        }
    }
    out
}

fn regular_with_family(fam: &TripleFamily, d: &BigInt) -> bool {
    let [a, b, c] = fam.elements();
    if *d == a || *d == b || *d == c {
        return false;
    }
    is_regular_quadruple(&a, &b, &c, d).unwrap_or(false)
}

/// One failed check, with the index that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaStatus {
    Checked,
    /// The branch is covered by another family member.
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub status: DeltaStatus,
    pub checks: u64,
    pub violations: Vec<Violation>,
    /// Indices `m` where `V_m` meets its comparison term in a regular quadruple.
    pub regular_equalities: Vec<u64>,
}

impl DeltaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, term by term up to `m_max`, the orderings that rule out `Δ = 0`.
///
/// Each `V_m` is compared with `p_{νm+λ}`. From `m = 2` on, `V_m` is larger on
/// the `+` branch and smaller on the `-` branch. At `m = 1` case `A` has a fixed
/// direction (smaller unless `z_0 = 1` on the `+` branch); in every case an
/// equality must give `d = 0` or a regular quadruple. Alongside: the doubling identity
/// `p_{mν+2ν} = 2T_ν p_{mν+ν} - p_{mν}`, `p_ν = x_2 T_ν + 2y_2 U_ν`, and for
/// `ν = 3` the bounds `(8r^3-4r^2-4r+1) p_j < p_{j+3} < (8r^3-4r) p_j`.
pub fn verify_delta_inequalities(fam: &TripleFamily, case: &FundamentalCase, m_max: u64) -> Result<DeltaReport> {
    if m_max < 3 {
        return Err(Error::InvalidInput("m_max must be at least 3".into()));
    }
    if fam.nu == 1 && fam.branch == Branch::Minus {
        return Ok(DeltaReport {
            status: DeltaStatus::NotApplicable("c < b: the triple is the nu = 1, + member for k - 1".into()),
            checks: 0,
            violations: Vec::new(),
            regular_equalities: Vec::new(),
        });
    }
    let (v, p) = build_case_sequences(fam, case)?;
    let pair = &fam.pair;
    let nu = fam.nu as usize;
    let t_nu = unit_t_seq(pair).at(nu);
    let u_nu = unit_u_seq(pair).at(nu);
    let mut report =
        DeltaReport { status: DeltaStatus::Checked, checks: 0, violations: Vec::new(), regular_equalities: Vec::new() };
    let check = |ok: bool, name: &str, index: u64, report: &mut DeltaReport| {
        report.checks += 1;
        if !ok {
            report.violations.push(Violation { check: name.to_string(), index });
        }
    };

    check(
        p.at(nu) == &case.x2 * &t_nu + BigInt::from(2u32) * &case.y2 * &u_nu,
        "p_nu = x2 T_nu + 2 y2 U_nu",
        nu as u64,
        &mut report,
    );
    for m in 0..=m_max as usize {
        let lhs = p.at(m * nu + 2 * nu);
        let rhs = BigInt::from(2u32) * &t_nu * p.at(m * nu + nu) - p.at(m * nu);
        check(lhs == rhs, "p doubling identity", m as u64, &mut report);
    }

    let plus = fam.branch == Branch::Plus;
    for m in 1..=m_max {
        let j = m as i64 * nu as i64 + i64::from(case.lambda);
        let (vm, pj) = (v.at(m as usize), p.at(j as usize));
        let ord = vm.cmp(&pj);
        if ord.is_eq() {
            let d = (&vm * &vm - 1u32) / 2u32;
            let regular = m <= 2 && d.is_positive() && regular_with_family(fam, &d);
            check(regular || d.is_zero(), "equality only at d = 0 or a regular quadruple", m, &mut report);
            if regular {
                report.regular_equalities.push(m);
            }
            continue;
        }
        let expected = if m >= 2 {
            Some(plus)
        } else if case.kind == CaseKind::A {
            Some(plus && case.z0.is_positive())
        } else {
            None
        };
        if let Some(greater) = expected {
            let name = if greater { "V_m > p_(nu m + lambda)" } else { "V_m < p_(nu m + lambda)" };
            check(ord.is_gt() == greater, name, m, &mut report);
        }
    }

    if nu == 3 {
        let r = &pair.r;
        let r2 = r * r;
        let r3 = &r2 * r;
        let low = BigInt::from(8u32) * &r3 - BigInt::from(4u32) * &r2 - BigInt::from(4u32) * r + 1u32;
        let high = BigInt::from(8u32) * &r3 - BigInt::from(4u32) * r;
        for m in 1..=m_max as usize {
            let base = p.at(3 * m - 2);
            let top = p.at(3 * m + 1);
            check(&low * &base < top && top < &high * &base, "sandwich for p_(3m+1)", m as u64, &mut report);
        }
    }
    Ok(report)
}

/// `s_ν^± = T_ν ± 2U_ν`.
pub fn s_from_unit(pair: &Pair2B, nu: u32, branch: Branch) -> BigInt {
    let t = unit_t_seq(pair).at(nu as usize);
    let u = unit_u_seq(pair).at(nu as usize);
    t + BigInt::from(2 * branch.signum()) * u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuples::{c_family, family_roots, pair_from_k};
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(big).collect()
    }

    fn fam(k: u64, nu: u32, branch: Branch) -> TripleFamily {
        c_family(&pair_from_k(k).unwrap(), nu, branch).unwrap()
    }

    fn case_of(f: &TripleFamily, label: &str) -> FundamentalCase {
        FundamentalCase::all(f).into_iter().find(|c| c.label() == label).unwrap()
    }

    #[test]
    fn sequence_examples() {
        let pair = pair_from_k(2).unwrap();
        assert_eq!(family_t_seq(&pair, Branch::Plus).terms(4), bigs(&[1, 17, 169, 1673]));
        assert_eq!(family_s_seq(&pair, Branch::Plus).terms(4), bigs(&[1, 7, 69, 683]));
        assert_eq!(unit_t_seq(&pair).terms(4), bigs(&[1, 5, 49, 485]));
        assert_eq!(unit_u_seq(&pair).terms(4), bigs(&[0, 1, 10, 99]));
        assert!(seq_at(&unit_t_seq(&pair), -1).is_err());
        assert_eq!(seq_at(&unit_t_seq(&pair), 3).unwrap(), big(485));
    }

    #[test]
    fn halving_examples() {
        let h = halve_odd_indices(&SecondOrderSeq::new(0, 1, 10, -1));
        assert_eq!(h.kernel(), &(big(98), big(-1)));
        let fib = SecondOrderSeq::new(0, 1, 1, 1);
        let odd = halve_odd_indices(&fib);
        assert_eq!(odd.kernel(), &(big(3), big(-1)));
        assert_eq!(odd.terms(6), bigs(&[1, 2, 5, 13, 34, 89]));
        let p = p_seq(&pair_from_k(2).unwrap(), &big(1), &big(1));
        let h = halve_odd_indices(&p);
        for i in 0..10 {
            assert_eq!(h.at(i), p.at(2 * i + 1));
        }
        assert_eq!(p.at(1), big(7));
        assert_eq!(p.at(5), big(98) * p.at(3) - p.at(1));
    }

    #[test]
    fn case_sequence_examples() {
        let f = fam(2, 1, Branch::Plus);
        let (v, p) = build_case_sequences(&f, &case_of(&f, "A(z0=+1)")).unwrap();
        assert_eq!(v.terms(3), bigs(&[1, 9, 125]));
        assert_eq!(p.terms(3), bigs(&[1, 7, 69]));
        let (v, _) = build_case_sequences(&f, &case_of(&f, "A(z0=-1)")).unwrap();
        assert_eq!(v.terms(3), bigs(&[1, 5, 69]));
        let f2 = fam(2, 2, Branch::Plus);
        let (_, p) = build_case_sequences(&f2, &case_of(&f2, "A(z0=+1)")).unwrap();
        assert_eq!(p.at(2), big(69));
        let (v, _) = build_case_sequences(&f, &case_of(&f, "B(y2=+1)")).unwrap();
        assert_eq!(v.terms(2), vec![big(5), big(5) * &f.s + big(2) * &f.t]);
        let mut bad = case_of(&f, "B(y2=+1)");
        bad.z0 = big(3);
        assert!(build_case_sequences(&f, &bad).is_err());
    }

    #[test]
    fn case_c_first_term_is_positive() {
        for k in 1..=200 {
            for nu in 1..=3 {
                for branch in Branch::BOTH {
                    let Ok(f) = c_family(&pair_from_k(k).unwrap(), nu, branch) else { continue };
                    let v1 = &f.pair.r * &f.s - big(2) * &f.t;
                    assert!(v1.is_positive());
                    assert_eq!(&v1 * (&f.pair.r * &f.s + big(2) * &f.t), big(2) * &f.pair.b + big(2) * &f.c - 3);
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let f = fam(2, 1, Branch::Plus);
        let case = case_of(&f, "A(z0=-1)");
        let (v, p) = build_case_sequences(&f, &case).unwrap();
        let sols = solve_intersection(&v, &p, 20, &case, &f);
        let pairs: Vec<(u64, u64)> = sols.iter().map(|s| (s.m, s.l)).collect();
        assert_eq!(pairs, vec![(0, 0), (2, 2)]);
        assert_eq!(sols[1].x, big(69));
        assert_eq!(sols[1].d, big(2380));
        assert!(sols[1].regular && sols[1].parity_ok);
        assert_eq!(sols[1].delta, 0);
        assert_eq!(sols[0].d, big(0));

        let f = fam(3, 2, Branch::Minus);
        for case in FundamentalCase::all(&f) {
            let (v, p) = build_case_sequences(&f, &case).unwrap();
            for s in solve_intersection(&v, &p, 50, &case, &f) {
                assert!(s.m == 0 || s.regular, "{} m = {}", case.label(), s.m);
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_of(2, 0, 1, 2), 0);
        assert_eq!(delta_of(5, 1, 2, 2), 0);
        assert_eq!(delta_of(7, 0, 3, 2), 1);
    }

    #[test]
    fn delta_inequalities_at_k45() {
        let f = fam(45, 1, Branch::Plus);
        let r = verify_delta_inequalities(&f, &case_of(&f, "A(z0=-1)"), 30).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        let f = fam(45, 3, Branch::Minus);
        let r = verify_delta_inequalities(&f, &case_of(&f, "B(y2=+1)"), 20).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        let f = fam(2, 1, Branch::Plus);
        let r = verify_delta_inequalities(&f, &case_of(&f, "A(z0=-1)"), 10).unwrap();
        assert_eq!(r.regular_equalities, vec![2]);
        assert!(r.holds());
        let f = fam(5, 1, Branch::Minus);
        let r = verify_delta_inequalities(&f, &case_of(&f, "A(z0=+1)"), 10).unwrap();
        assert!(matches!(r.status, DeltaStatus::NotApplicable(_)));
    }

    #[test]
    fn delta_inequalities_hold_for_every_case() {
        for k in (2..=60).chain([100, 1000]) {
            for nu in 1..=3 {
                for branch in Branch::BOTH {
                    let f = fam(k, nu, branch);
                    for case in FundamentalCase::all(&f) {
                        let r = verify_delta_inequalities(&f, &case, 25).unwrap();
                        assert!(r.holds(), "k = {k}, nu = {nu}, {branch}, {}: {:?}", case.label(), r.violations);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_identities() {
        for k in 1..=200 {
            let pair = pair_from_k(k).unwrap();
            let (t, u) = (unit_t_seq(&pair), unit_u_seq(&pair));
            for nu in 0..=50 {
                let (tn, un) = (t.at(nu), u.at(nu));
                assert_eq!(&tn * &tn - big(2) * &pair.b * &un * &un, big(1));
            }
            for nu in 1..=3u32 {
                for branch in Branch::BOTH {
                    let (_, s) = family_roots(&pair, nu, branch);
                    assert_eq!(s, s_from_unit(&pair, nu, branch));
                }
            }
        }
    }

    #[test]
    fn congruence_scheme() {
        for k in 1..=60 {
            let pair = pair_from_k(k).unwrap();
            let b = &pair.b;
            for nu in 1..=3 {
                for branch in Branch::BOTH {
                    let Ok(f) = c_family(&pair, nu, branch) else { continue };
                    for (z1, y1) in
                        [(big(1), big(1)), (big(-1), big(1)), (f.s.clone(), pair.r.clone()), (-&f.s, pair.r.clone())]
                    {
                        let w = big_w_seq(&f, &z1, &y1);
                        for n in 0..=25 {
                            assert_eq!((w.at(2 * n) - &y1).mod_floor(b), big(0));
                            assert_eq!((w.at(2 * n + 1) - &f.t * &y1).mod_floor(b), big(0));
                        }
                    }
                    for y2 in [big(1), big(-1)] {
                        let q = q_seq(&pair, &y2, &big(1));
                        for l in 0..=25 {
                            assert_eq!((q.at(2 * l) - &y2).mod_floor(b), big(0));
                            assert_eq!((q.at(2 * l + 1) - &pair.r * &y2).mod_floor(b), big(0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn z_sides_agree_with_x_sides() {
        // Every common z-term gives the same d as the matching x-term.
        let f = fam(2, 1, Branch::Plus);
        let v = v_seq(&f, &big(-1), &big(1));
        let w = w_seq(&f, &big(-1), &big(1));
        let d = big(2380);
        let z = (&f.c * &d + 1u32).sqrt();
        assert!((0..6).any(|m| v.at(m) == z));
        assert!((0..6).any(|n| w.at(n) == z));
    }

    #[test]
    fn y2_classification() {
        let f = fam(45, 1, Branch::Plus);
        let c = classify_y2(&f.pair, &f).unwrap();
        assert_eq!(c.justification, Justification::Analytic);
        assert!(c.unexplained.is_empty());
        assert_eq!(c.cases.len(), 6);
        let f = fam(2, 1, Branch::Plus);
        let c = classify_y2(&f.pair, &f).unwrap();
        assert_eq!(c.justification, Justification::Oracle);
        assert!(c.unexplained.is_empty());
        assert_eq!(c.accepted.len(), 2);
        // k = 7: the extra class (±13, 2) fails the residue test modulo 112.
        let f = fam(7, 1, Branch::Plus);
        let c = classify_y2(&f.pair, &f).unwrap();
        assert_eq!(c.rejected.len(), 2);
        assert!(c.rejected.iter().all(|r| r.x2 == big(2) && r.y2.abs() == big(13)));
        assert!(c.unexplained.is_empty());
    }

    #[test]
    fn y2_equal_to_r_is_impossible() {
        for k in 1..=500 {
            let pair = pair_from_k(k).unwrap();
            // 2r^2 - b x^2 = 2 - b gives x^2 = 5.
            let x2sq = (big(2) * &pair.r * &pair.r - big(2) + &pair.b) / &pair.b;
            assert_eq!(x2sq, big(5));
        }
    }

    fn naive(v: &SecondOrderSeq, p: &SecondOrderSeq, n: usize) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for m in 0..=n {
            for l in 0..=n {
                if v.at(m) == p.at(l) {
                    out.push((m as u64, l as u64));
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn halving_matches_odd_extraction(u0 in -50i64..50, u1 in -50i64..50, a in -20i64..20, b in -20i64..20) {
            let seq = SecondOrderSeq::new(u0, u1, a, b);
            let h = halve_odd_indices(&seq);
            for i in 0..20 {
                prop_assert_eq!(h.at(i), seq.at(2 * i + 1));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn merge_agrees_with_double_loop(k in 1u64..=30, nu in 1u32..=3, plus in prop::bool::ANY, case_index in 0usize..6) {
            let branch = if plus { Branch::Plus } else { Branch::Minus };
            let Ok(f) = c_family(&pair_from_k(k).unwrap(), nu, branch) else { return Ok(()) };
            let case = FundamentalCase::all(&f)[case_index].clone();
            let (v, p) = build_case_sequences(&f, &case).unwrap();
            let fast: Vec<(u64, u64)> = solve_intersection(&v, &p, 60, &case, &f).into_iter().map(|s| (s.m, s.l)).collect();
            // Index bound: p grows no faster than V per step, so l ≤ ν m + 2 covers m ≤ 60.
            let slow: Vec<(u64, u64)> = naive(&v, &p, 190).into_iter().filter(|(m, _)| *m <= 60).collect();
            prop_assert_eq!(fast, slow);
        }
    }
}
