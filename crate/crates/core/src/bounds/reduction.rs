//! Baker–Davenport reduction of the bound on `m`.
//!
//! Dividing `|Λ| ≤ C β^(-2m)` by `log β` gives `|lκ - m + μ| < A·B^(-m)`
//! with `κ = log α/log β`, `μ = log γ/log β`, `A = max(1, C)/log β`, `B = β^2`,
//! where `C` is [`lambda_window_constant`].
//! For a convergent `p/q` of `κ` with `q > 6L` and
//! `ε = ‖qμ‖ - L‖qκ‖ > 0`, every solution with `l ≤ L` has
//! `m < log(Aq/ε)/log B`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{lambda_window_constant, make_context, root, LinearFormContext, GUARD_DIGITS};
use crate::arithmetic::{convergents, expand_enclosure, HPReal, Tri};
use crate::recurrences::FundamentalCase;
use crate::tuples::TripleFamily;
use crate::{Error, Result};

/// Convergents tried past the first admissible one before giving up on a round.
pub const MAX_SKIP: usize = 60;
/// Rounds of reduction before reporting failure.
pub const MAX_ROUNDS: u32 = 5;
/// Precision doublings allowed within one round.
const MAX_DOUBLINGS: u32 = 4;
/// Partial quotients of `κ` expanded per attempt.
const MAX_QUOTIENTS: usize = 600;

/// Inputs of one reduction step.
#[derive(Debug, Clone)]
pub struct ReductionParams {
    pub kappa: HPReal,
    pub mu: HPReal,
    pub a: HPReal,
    pub b: HPReal,
    /// Current bound on `m`.
    pub m_bound: BigInt,
    /// Bound on `l` implied by `m_bound`.
    pub l_bound: BigInt,
    pub digits: u32,
}

/// What one reduction step produced.
#[derive(Debug, Clone, PartialEq)]
pub enum ReductionStep {
    /// Every solution has `m ≤ bound`.
    NewBound { bound: BigInt, q: BigInt, epsilon: f64 },
    /// `ε ≤ 0` for this convergent; try a later one.
    IncreaseQ,
    /// The enclosures cannot decide `ε` or pin enough convergents.
    IncreasePrecision,
}

/// `L(M) = νM + |λ| + ⌈2√2 M/(√b log α)⌉ + 2`.
///
/// Valid because `|log β/log α - ν| ≤ 2√2/(√b log α)`, which is certified here.
pub fn reduction_params(ctx: &LinearFormContext, m_bound: &BigInt) -> Result<ReductionParams> {
    let w = ctx.digits + GUARD_DIGITS;
    let sqrt_b = root(&ctx.fam.pair.b, w)?;
    let slack = root(&BigInt::from(8u32), w)?.div(&(&sqrt_b * &ctx.log_alpha))?;
    let drift = (ctx.log_beta.div(&ctx.log_alpha)? - HPReal::from_i64(i64::from(ctx.nu), w)).abs();
    match drift.lt(&slack) {
        Tri::True => {}
        Tri::False => {
            return Err(Error::InvalidInput(format!(
                "log β/log α drifts from ν by more than 2√2/(√b log α) at k = {}",
                ctx.fam.pair.k
            )))
        }
        Tri::Unknown => return Err(Error::Undecidable { digits: ctx.digits }),
    }
    let extra = (slack * HPReal::from_int(m_bound, w)).ceil_upper();
    let l_bound = BigInt::from(ctx.nu) * m_bound + i64::from(ctx.lambda.abs()) + extra + 2;
    let one = HPReal::from_i64(1, w);
    let window = lambda_window_constant(ctx)?;
    let scale = if window.lt(&one) == Tri::True { one } else { window };
    Ok(ReductionParams {
        kappa: ctx.log_alpha.div(&ctx.log_beta)?,
        mu: ctx.log_gamma.div(&ctx.log_beta)?,
        a: scale.div(&ctx.log_beta)?,
        b: ctx.beta.square(),
        m_bound: m_bound.clone(),
        l_bound,
        digits: ctx.digits,
    })
}

/// One reduction step using the `skip`-th convergent with `q > 6L`.
pub fn bd_reduce(params: &ReductionParams, skip: usize) -> Result<ReductionStep> {
    let cf = expand_enclosure(&params.kappa, MAX_QUOTIENTS);
    let count = cf.terms.len() + 1;
    let floor_q = BigInt::from(6u32) * &params.l_bound;
    let Some((_, q)) = convergents(&cf, count).into_iter().filter(|(_, q)| *q > floor_q).nth(skip) else {
        return Ok(ReductionStep::IncreasePrecision);
    };
    let w = params.kappa.digits();
    let qv = HPReal::from_int(&q, w);
    let epsilon = (&qv * &params.mu).dist_to_nearest_integer()
        - HPReal::from_int(&params.l_bound, w) * (&qv * &params.kappa).dist_to_nearest_integer();
    match epsilon.is_positive() {
        Tri::True => {}
        Tri::False => return Ok(ReductionStep::IncreaseQ),
        Tri::Unknown => {
            // A certainly nonpositive ε needs a later convergent, not more digits.
            return Ok(if epsilon.upper() <= num_rational::BigRational::zero() {
                ReductionStep::IncreaseQ
            } else {
                ReductionStep::IncreasePrecision
            });
        }
    }
    let ratio = (&params.a * &qv).div(&epsilon)?.ln()?.div(&params.b.ln()?)?;
    let bound = ratio.ceil_upper() - BigInt::one();
    let bound = if bound.is_negative() { BigInt::zero() } else { bound };
    Ok(ReductionStep::NewBound { bound, q, epsilon: epsilon.lower_f64() })
}

/// One successful round of [`reduce_case`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionRound {
    #[serde(with = "crate::bigint_string")]
    pub m_in: BigInt,
    #[serde(with = "crate::bigint_string")]
    pub l_bound: BigInt,
    #[serde(with = "crate::bigint_string")]
    pub q: BigInt,
    pub skip: usize,
    pub epsilon: f64,
    #[serde(with = "crate::bigint_string")]
    pub m_out: BigInt,
    pub digits: u32,
}

/// Final state of the reduction for one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionResult {
    #[serde(with = "crate::bigint_string")]
    pub final_bound: BigInt,
    /// Rounds that lowered the bound.
    pub rounds: u32,
    pub history: Vec<ReductionRound>,
    /// Whether the bound reached 3 or less.
    pub reached_target: bool,
}

/// Default precision for a bound `M`: `60 + 2⌈log10 M⌉` digits.
pub fn default_digits(m_bound: &BigInt) -> u32 {
    let log10 = m_bound.to_string().trim_start_matches('-').len() as u32;
    60 + 2 * log10
}

/// Reduces the bound on `m` from `m0` until it is at most 3 or stops improving.
///
/// `digits` overrides the starting precision.
pub fn reduce_case(
    fam: &TripleFamily,
    case: &FundamentalCase,
    m0: &BigInt,
    digits: Option<u32>,
) -> Result<ReductionResult> {
    let mut m = m0.clone();
    let mut history = Vec::new();
    let mut digits = digits.unwrap_or_else(|| default_digits(m0));
    let mut ctx = make_context(fam, case, digits)?;
    let target = BigInt::from(3u32);
    while (history.len() as u32) < MAX_ROUNDS && m > target {
        let mut doublings = 0;
        let found = 'round: loop {
            let params = reduction_params(&ctx, &m)?;
            for skip in 0..MAX_SKIP {
                match bd_reduce(&params, skip)? {
                    ReductionStep::NewBound { bound, q, epsilon } => {
                        break 'round Some((bound, q, epsilon, skip, params.l_bound));
                    }
                    ReductionStep::IncreaseQ => continue,
                    ReductionStep::IncreasePrecision => break,
                }
            }
            if doublings == MAX_DOUBLINGS {
                break None;
            }
            doublings += 1;
            digits *= 2;
            ctx = make_context(fam, case, digits)?;
        };
        let Some((bound, q, epsilon, skip, l_bound)) = found else {
            return Err(Error::PrecisionExhausted { retries: MAX_DOUBLINGS, digits });
        };
        if bound >= m {
            break;
        }
        history.push(ReductionRound { m_in: m.clone(), l_bound, q, skip, epsilon, m_out: bound.clone(), digits });
        m = bound;
    }
    Ok(ReductionResult { reached_target: m <= target, final_bound: m, rounds: history.len() as u32, history })
}

/// The final bound as a machine integer, when it fits.
pub fn bound_as_u64(result: &ReductionResult) -> Option<u64> {
    result.final_bound.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrences::{build_case_sequences, solve_intersection};
    use crate::tuples::{c_family, pair_from_k, Branch};

    fn m0() -> BigInt {
        BigInt::from(133u32) * BigInt::from(10u64).pow(16)
    }

    #[test]
    fn small_k_reduces_in_two_rounds() {
        for k in [45u64, 46, 100, 1000] {
            for nu in 1..=3 {
                for branch in Branch::BOTH {
                    if nu == 1 && branch == Branch::Minus {
                        continue;
                    }
                    let fam = c_family(&pair_from_k(k).unwrap(), nu, branch).unwrap();
                    for case in FundamentalCase::all(&fam) {
                        let res = reduce_case(&fam, &case, &m0(), None).unwrap();
                        assert!(res.reached_target, "k = {k}, nu = {nu}, {branch}, {}: {res:?}", case.label());
                        assert!(res.rounds <= 2, "k = {k}, nu = {nu}, {branch}, {}: {res:?}", case.label());
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_bound_is_sound() {
        for k in [45u64, 47] {
            for nu in 1..=2 {
                let fam = c_family(&pair_from_k(k).unwrap(), nu, Branch::Plus).unwrap();
                for case in FundamentalCase::all(&fam) {
                    let res = reduce_case(&fam, &case, &m0(), None).unwrap();
                    let bound = bound_as_u64(&res).unwrap();
                    let (v, p) = build_case_sequences(&fam, &case).unwrap();
                    for sol in solve_intersection(&v, &p, 10 * bound.max(1), &case, &fam)
                        .into_iter()
                        .filter(|s| s.d.is_positive())
                    {
                        assert!(sol.m <= bound, "{}: {sol:?} above {bound}", case.label());
                    }
                }
            }
        }
    }

    #[test]
    fn digits_follow_the_bound() {
        assert_eq!(default_digits(&m0()), 60 + 2 * 19);
        assert_eq!(default_digits(&BigInt::from(3)), 62);
    }

    #[test]
    fn round_trip() {
        let fam = c_family(&pair_from_k(45).unwrap(), 1, Branch::Plus).unwrap();
        let case = FundamentalCase::all(&fam).remove(0);
        let res = reduce_case(&fam, &case, &m0(), None).unwrap();
        let text = serde_json::to_string(&res).unwrap();
        assert_eq!(serde_json::from_str::<ReductionResult>(&text).unwrap(), res);
    }
}
