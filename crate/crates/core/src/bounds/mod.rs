//! The linear form in logarithms and the bounds it yields on the index `m`.
//!
//! With `α = r + √(2b)`, `β = s + √(2c)` and `γ` built from the initial
//! data, a solution `V_m = p_l` makes `Λ = l log α - m log β + log γ` tiny.
//! A lower bound on `m` (from `Δ ≠ 0`) and an upper bound (two-logarithm
//! linear forms) meet only for small `k`; below that, the reduction in
//! [`reduction`] shrinks the bound on `m` directly.

pub mod reduction;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{certify, HPReal, Tri};
use crate::recurrences::{unit_t_seq, unit_u_seq, FundamentalCase};
use crate::tuples::{pair_from_k, Branch, Pair2B, TripleFamily};
use crate::{Error, Result};

pub use reduction::{
    bd_reduce, reduce_case, reduction_params, ReductionParams, ReductionResult, ReductionRound, ReductionStep,
};

/// Extra working digits carried beyond the requested precision.
const GUARD_DIGITS: u32 = 20;

/// Constants of the two-logarithm estimate, as published.
pub const LOWER_COEFFICIENT: &str = "0.69";
pub const UPPER_SLOPE: &str = "67578.15";
pub const UPPER_OFFSET: &str = "1351.57";
pub const FIXPOINT_COEFFICIENT: &str = "289.264";
pub const FIXPOINT_SHIFT: &str = "0.38";
pub const FIXPOINT_OFFSET: &str = "0.07";
/// `30/D` with `D = 4`: the threshold on `log b' + 0.38`.
pub const SMALL_BRANCH_LIMIT: &str = "7.5";
pub const PUBLISHED_SQRT_B_BOUND: &str = "1077590.56";
pub const PUBLISHED_K_BOUND: u64 = 761_970;
/// `b > 4000` holds exactly from this `k` on.
pub const K_ANALYTIC: u64 = 45;
/// The upper bound on `m` is stated for `k` from here on.
pub const K_UPPER_BOUND: u64 = 1000;

fn constant(text: &str, digits: u32) -> HPReal {
    HPReal::from_decimal(text, digits).expect("valid literal")
}

fn int(n: &BigInt, digits: u32) -> HPReal {
    HPReal::from_int(n, digits)
}

fn root(n: &BigInt, digits: u32) -> Result<HPReal> {
    int(n, digits).sqrt()
}

/// `p√u + q√v`, rationalized when the signs differ to avoid cancellation.
fn signed_root_sum(p: &BigInt, u: &BigInt, q: &BigInt, v: &BigInt, digits: u32) -> Result<HPReal> {
    let a = int(p, digits) * root(u, digits)?;
    let b = int(q, digits) * root(v, digits)?;
    if p.is_negative() == q.is_negative() || p.is_zero() || q.is_zero() {
        return Ok(a + b);
    }
    let num = p * p * u - q * q * v;
    int(&num, digits).div(&(a - b))
}

/// Certified enclosures of `α`, `β`, `γ` and their logarithms for one case.
#[derive(Debug, Clone)]
pub struct LinearFormContext {
    pub fam: TripleFamily,
    pub case: FundamentalCase,
    pub digits: u32,
    pub alpha: HPReal,
    pub beta: HPReal,
    pub gamma: HPReal,
    pub log_alpha: HPReal,
    pub log_beta: HPReal,
    pub log_gamma: HPReal,
    pub nu: u32,
    pub lambda: i8,
}

/// `α = r + √(2b)`, `β = s + √(2c)`,
/// `γ = √c (y_2√2 + x_2√b) / (√b (z_0√2 + x_0√c))`.
pub fn make_context(fam: &TripleFamily, case: &FundamentalCase, digits: u32) -> Result<LinearFormContext> {
    let w = digits + GUARD_DIGITS;
    let two = BigInt::from(2u32);
    let (b, r, c, s) = (&fam.pair.b, &fam.pair.r, &fam.c, &fam.s);
    let alpha = int(r, w) + root(&(&two * b), w)?;
    let beta = int(s, w) + root(&(&two * c), w)?;
    let numerator = root(c, w)? * signed_root_sum(&case.y2, &two, &case.x2, b, w)?;
    let denominator = root(b, w)? * signed_root_sum(&case.z0, &two, &case.x0, c, w)?;
    let gamma = numerator.div(&denominator)?;
    if gamma.is_positive() != Tri::True {
        return Err(Error::InvalidInput(format!("gamma is not positive for {}", case.label())));
    }
    Ok(LinearFormContext {
        fam: fam.clone(),
        case: case.clone(),
        digits,
        log_alpha: alpha.ln()?,
        log_beta: beta.ln()?,
        log_gamma: gamma.ln()?,
        alpha,
        beta,
        gamma,
        nu: fam.nu,
        lambda: case.lambda,
    })
}

impl LinearFormContext {
    fn w(&self) -> u32 {
        self.digits + GUARD_DIGITS
    }

    fn sqrt_b(&self) -> Result<HPReal> {
        root(&self.fam.pair.b, self.w())
    }
}

/// `Λ = l log α - m log β + log γ`.
pub fn lambda_value(ctx: &LinearFormContext, l: u64, m: u64) -> HPReal {
    let w = ctx.w();
    HPReal::from_int(&BigInt::from(l), w) * &ctx.log_alpha - HPReal::from_int(&BigInt::from(m), w) * &ctx.log_beta
        + &ctx.log_gamma
}

/// A constant `C` with `|Λ| ≤ C β^(-2m)` for every solution with `m ≥ 1`.
///
/// Solving `V_m = p_l` exactly gives `e^Λ - 1 = β^(-2m) (ρ - K e^(-Λ))` with
/// `ρ = (x_0√c - z_0√2)/(x_0√c + z_0√2)` and `K = c(b - 2)/(b (x_0√c + z_0√2)^2)`,
/// so `ρ - K = 2(c - b)/(b (x_0√c + z_0√2)^2)` and, using `Λ ≤ e^Λ - 1` and
/// `e^(-Λ) ≥ 1 - Λ`, `Λ ≤ (ρ - K) β^(-2m) / (1 - K β^(-2))`.
/// Cases A and B give `C < 1`; case C, where `x_0√c + z_0√2 = r√c - t√2` is
/// small, gives `C ≈ 16`.
pub fn lambda_window_constant(ctx: &LinearFormContext) -> Result<HPReal> {
    let w = ctx.w();
    let (b, c) = (&ctx.fam.pair.b, &ctx.fam.c);
    if c <= b {
        return Err(Error::InvalidInput(format!("c = {c} must exceed b = {b}")));
    }
    let two = BigInt::from(2u32);
    let lead = signed_root_sum(&ctx.case.x0, c, &ctx.case.z0, &two, w)?.square();
    let rho_minus_k = int(&(&two * (c - b)), w).div(&(int(b, w) * &lead))?;
    let k = int(&(c * (b - &two)), w).div(&(int(b, w) * &lead))?;
    let slack = HPReal::from_i64(1, w) - k.div(&ctx.beta.square())?;
    if slack.is_positive() != Tri::True {
        return Err(Error::InvalidInput("K β^(-2) is not below 1".into()));
    }
    rho_minus_k.div(&slack)
}

/// Certifies `0 < Λ < β^(-2m)` for a solution, raising the precision up to `max_digits`.
///
/// Returns the two verdicts and the precision that decided them.
pub fn certify_lambda_window(
    fam: &TripleFamily,
    case: &FundamentalCase,
    l: u64,
    m: u64,
    max_digits: u32,
) -> Result<(bool, bool, u32)> {
    let start = starting_digits(fam, m);
    let mut digits = start.min(max_digits);
    loop {
        let ctx = make_context(fam, case, digits)?;
        let lam = lambda_value(&ctx, l, m);
        let window = ctx.beta.powi(2 * m as u32).recip()?;
        let positive = lam.is_positive();
        let below = lam.lt(&window);
        if let (Some(p), Some(q)) = (positive.definite(), below.definite()) {
            return Ok((p, q, digits));
        }
        if digits >= max_digits {
            return Err(Error::PrecisionExhausted { retries: 0, digits });
        }
        digits = (digits * 2).min(max_digits);
    }
}

/// Enough digits to resolve `β^(-2m)` with margin.
fn starting_digits(fam: &TripleFamily, m: u64) -> u32 {
    let log10_beta = (fam.s.bits() as f64 + 2.0) * std::f64::consts::LOG10_2;
    (30.0 + 2.0 * m as f64 * log10_beta).ceil() as u32
}

/// Certifies `|(l - λ) log α - m log β| < 2√2/√b`.
pub fn check_two_log_gap(fam: &TripleFamily, case: &FundamentalCase, l: u64, m: u64, max_digits: u32) -> Result<bool> {
    let (ok, _) = certify(starting_digits(fam, 0), 3, |digits| {
        if digits > max_digits {
            return Err(Error::PrecisionExhausted { retries: 0, digits });
        }
        let ctx = make_context(fam, case, digits)?;
        let w = ctx.w();
        let shift = BigInt::from(l as i64 - i64::from(ctx.lambda));
        let form = (int(&shift, w) * &ctx.log_alpha - int(&BigInt::from(m), w) * &ctx.log_beta).abs();
        let gap = (root(&BigInt::from(8u32), w)?).div(&ctx.sqrt_b()?)?;
        Ok(form.lt(&gap))
    })?;
    Ok(ok)
}

/// `0.69 |Δ| √b log α`, the lower bound on `m` when `Δ ≠ 0`.
pub fn lower_bound_m(delta: i64, b: &BigInt, log_alpha: &HPReal) -> Result<HPReal> {
    if delta == 0 {
        return Err(Error::InvalidInput("delta must be nonzero".into()));
    }
    if *b <= BigInt::from(4000u32) {
        return Err(Error::InvalidInput(format!("b = {b} must exceed 4000")));
    }
    let w = log_alpha.digits();
    Ok(constant(LOWER_COEFFICIENT, w) * HPReal::from_i64(delta.abs(), w) * root(b, w)? * log_alpha)
}

/// `log α` for the pair at `k`.
pub fn log_alpha_for(pair: &Pair2B, digits: u32) -> Result<HPReal> {
    let w = digits + GUARD_DIGITS;
    (int(&pair.r, w) + root(&(BigInt::from(2u32) * &pair.b), w)?).ln()
}

/// Height majorants `h_1 = (ν/2) log α + 0.01` and
/// `h_2 = ((|Δ+λ| + 3 + 2ν)/2) log α + 0.01`.
#[derive(Debug, Clone)]
pub struct Heights {
    pub h1: HPReal,
    pub h2: HPReal,
    pub delta_plus_lambda: u64,
    /// `k < 1000`, outside the range the estimates are stated for.
    pub below_range: bool,
}

pub fn heights(ctx: &LinearFormContext, delta_plus_lambda: u64) -> Heights {
    let w = ctx.w();
    let hundredth = constant("0.01", w);
    let half = HPReal::from_ratio(&BigInt::from(1u32), &BigInt::from(2u32), w).expect("nonzero");
    let h1 = &half * &HPReal::from_i64(i64::from(ctx.nu), w) * &ctx.log_alpha + &hundredth;
    let weight = delta_plus_lambda as i64 + 3 + 2 * i64::from(ctx.nu);
    let h2 = &half * &HPReal::from_i64(weight, w) * &ctx.log_alpha + &hundredth;
    Heights { h1, h2, delta_plus_lambda, below_range: ctx.fam.pair.k < K_UPPER_BOUND }
}

/// Coefficients of the quartic with root `α_1 = α^ν/β`:
/// `X^4 - 4sT X^3 + (4T^2 + 8c + 2) X^2 - 4sT X + 1`.
pub fn alpha1_polynomial(fam: &TripleFamily) -> [BigInt; 5] {
    let t = unit_t_seq(&fam.pair).at(fam.nu as usize);
    let e1 = BigInt::from(4u32) * &fam.s * &t;
    let e2 = BigInt::from(4u32) * &t * &t + BigInt::from(8u32) * &fam.c + 2u32;
    [BigInt::from(1u32), -e1.clone(), e2, -e1, BigInt::from(1u32)]
}

/// The quartic evaluated on an enclosure of `α_1`; it must contain zero.
pub fn alpha1_residual(ctx: &LinearFormContext) -> Result<HPReal> {
    let w = ctx.w();
    let pair = &ctx.fam.pair;
    let t = unit_t_seq(pair).at(ctx.nu as usize);
    let u = unit_u_seq(pair).at(ctx.nu as usize);
    let alpha_nu = int(&t, w) + int(&u, w) * root(&(BigInt::from(2u32) * &pair.b), w)?;
    let x = alpha_nu.div(&ctx.beta)?;
    let coeffs = alpha1_polynomial(&ctx.fam);
    let mut acc = HPReal::from_i64(0, w);
    for c in coeffs {
        acc = acc * &x + int(&c, w);
    }
    Ok(acc)
}

/// `h(γ) ≤ ½ log(b + √(2b)) + ½ log(rc + t√(2c)) < ½ log(4rbc) < (3/2) log α + log β`.
pub fn gamma_height_chain(ctx: &LinearFormContext) -> Result<Tri> {
    let w = ctx.w();
    let (b, r, c, t) = (&ctx.fam.pair.b, &ctx.fam.pair.r, &ctx.fam.c, &ctx.fam.t);
    let two = BigInt::from(2u32);
    let first =
        (int(b, w) + root(&(&two * b), w)?).ln()? + (int(&(r * c), w) + int(t, w) * root(&(&two * c), w)?).ln()?;
    let middle = int(&(BigInt::from(4u32) * r * b * c), w).ln()?;
    let last = HPReal::from_i64(3, w) * &ctx.log_alpha + &two_of(&ctx.log_beta);
    Ok(first.lt(&middle).and(middle.lt(&last)))
}

fn two_of(x: &HPReal) -> HPReal {
    x.mul_pow2(1)
}

/// `(β - α^ν)/α^ν`, bounded by `1.42/√b` for `b > 4000`.
pub fn beta_alpha_power_gap(ctx: &LinearFormContext) -> Result<HPReal> {
    let w = ctx.w();
    let alpha_nu = ctx.alpha.powi(ctx.nu);
    (&ctx.beta - &alpha_nu).div(&alpha_nu).map(|x| x.with_digits(w))
}

/// `67578.15 (|Δ+λ| + 3 + 2ν) log α + 1351.57`, the upper bound on `m`.
pub fn upper_bound_m(ctx: &LinearFormContext, delta: i64) -> Result<HPReal> {
    if ctx.fam.pair.k < K_UPPER_BOUND {
        return Err(Error::InvalidInput(format!("k = {} is below {K_UPPER_BOUND}", ctx.fam.pair.k)));
    }
    let weight = (delta + i64::from(ctx.lambda)).abs() + 3 + 2 * i64::from(ctx.nu);
    Ok(upper_bound_from(weight, &ctx.log_alpha))
}

fn upper_bound_from(weight: i64, log_alpha: &HPReal) -> HPReal {
    let w = log_alpha.digits();
    constant(UPPER_SLOPE, w) * HPReal::from_i64(weight, w) * log_alpha + constant(UPPER_OFFSET, w)
}

/// Integer limits on `b'` from `b' - 0.07 < 289.264 (log b' + 0.38)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPrimeBounds {
    /// Largest integer satisfying the inequality when `log b' + 0.38 > 7.5`.
    pub large: u64,
    /// `⌊e^(7.5 - 0.38)⌋`, the limit when `log b' + 0.38 ≤ 7.5`.
    pub small: u64,
    pub digits: u32,
}

fn fixpoint_gap(x: u64, digits: u32) -> Result<HPReal> {
    let xv = HPReal::from_int(&BigInt::from(x), digits);
    let inner = xv.ln()? + constant(FIXPOINT_SHIFT, digits);
    Ok(constant(FIXPOINT_COEFFICIENT, digits) * inner.square() - xv + constant(FIXPOINT_OFFSET, digits))
}

/// Solves the `b'` inequality by certified bisection.
///
/// The gap `f(x) = 289.264 (log x + 0.38)^2 - (x - 0.07)` is positive on
/// `[e^7.12, 6000]` (there `f ≥ 289.264·7.5^2 - 6000`) and strictly
/// decreasing from 6000 on (`f'(6000) < 0` and `(log x + 0.38)/x` decreases),
/// so its last integer with `f > 0` is found by bisection on `[6000, 10^6]`.
pub fn b_prime_bounds(digits: u32) -> Result<BPrimeBounds> {
    let sign = |x: u64| -> Result<bool> { Ok(certify(digits, 4, |d| Ok(fixpoint_gap(x, d)?.is_positive()))?.0) };
    let w = digits;
    let plateau =
        constant(FIXPOINT_COEFFICIENT, w) * constant(SMALL_BRANCH_LIMIT, w).square() - HPReal::from_i64(6000, w);
    let slope_at_start = constant(FIXPOINT_COEFFICIENT, w).mul_pow2(1)
        * (HPReal::from_i64(6000, w).ln()? + constant(FIXPOINT_SHIFT, w)).div(&HPReal::from_i64(6000, w))?;
    let ok = plateau.is_positive().and(slope_at_start.lt(&HPReal::from_i64(1, w)));
    if ok != Tri::True {
        return Err(Error::Undecidable { digits: w });
    }
    let (mut lo, mut hi) = (6000u64, 1_000_000u64);
    if !sign(lo)? || sign(hi)? {
        return Err(Error::InvalidInput("b' bisection bracket failed".into()));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if sign(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let threshold = constant(SMALL_BRANCH_LIMIT, w) - constant(FIXPOINT_SHIFT, w);
    let small = threshold.exp()?.floor().and_then(|f| f.to_u64()).ok_or(Error::Undecidable { digits: w })?;
    Ok(BPrimeBounds { large: lo, small, digits })
}

/// Outcome of comparing the lower and upper bounds on `m` for one branch.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub k: u64,
    pub nu: u32,
    pub branch: Branch,
    pub lambda: i8,
    pub delta_range: String,
    pub lower: HPReal,
    pub upper: HPReal,
    /// Certified `lower > upper` for every `|Δ| ≥ 1`.
    pub contradiction: bool,
}

/// Compares the bounds at `|Δ| = 1` (the worst case, `|Δ+λ| = 1 + |λ|`) and
/// certifies that the lower bound grows faster in `|Δ|`: `0.69 √b > 67578.15`.
pub fn bound_report(k: u64, nu: u32, branch: Branch, lambda: i8, digits: u32) -> Result<BoundReport> {
    let pair = pair_from_k(k)?;
    let log_alpha = log_alpha_for(&pair, digits)?;
    let w = log_alpha.digits();
    let lower = lower_bound_m(1, &pair.b, &log_alpha)?;
    let weight = 1 + i64::from(lambda.abs()) + 3 + 2 * i64::from(nu);
    let upper = upper_bound_from(weight, &log_alpha);
    let slope = constant(LOWER_COEFFICIENT, w) * root(&pair.b, w)? - constant(UPPER_SLOPE, w);
    let contradiction = k >= K_UPPER_BOUND && lower.gt(&upper).and(slope.is_positive()) == Tri::True;
    Ok(BoundReport { k, nu, branch, lambda, delta_range: "|Δ| ≥ 1".into(), lower, upper, contradiction })
}

/// The bound on `k` implied by meeting the two bounds on `m`.
#[derive(Debug, Clone)]
pub struct GlobalBound {
    /// Enclosure of the bound on `√b`.
    pub sqrt_b: HPReal,
    /// Largest `(|Δ+λ| + 3 + 2ν)/|Δ|` over the cases considered, exactly.
    pub worst_ratio: BigRational,
    /// Largest `k` not excluded.
    pub k_max: u64,
    /// `k_max` minus the published value.
    pub discrepancy: i64,
}

/// `(|Δ+λ| + 3 + 2ν)/|Δ|` is largest at `Δ = λ = 1`, where it is `2ν + 5`:
/// for `|Δ| ≥ 2` it is at most `(|Δ| + 4 + 2ν)/|Δ| ≤ ν + 3`.
fn worst_ratio(nus: &[u32]) -> BigRational {
    let mut best = BigRational::zero();
    for &nu in nus {
        for lambda in -1i64..=1 {
            for delta in (-4i64..=4).filter(|d| *d != 0) {
                let q = BigRational::new(
                    BigInt::from((delta + lambda).abs() + 3 + 2 * i64::from(nu)),
                    BigInt::from(delta.abs()),
                );
                if q > best {
                    best = q;
                }
            }
        }
    }
    best
}

/// `√b < 67578.15 ρ / 0.69 + 1351.57 / (0.69 log 2000)` with `ρ` the worst
/// ratio; `log α > log 2000` holds for `k ≥ 1000`.
pub fn global_k_bound_for(nus: &[u32], digits: u32) -> Result<GlobalBound> {
    let w = digits + GUARD_DIGITS;
    let ratio = worst_ratio(nus);
    let coeff = constant(LOWER_COEFFICIENT, w);
    let first = constant(UPPER_SLOPE, w) * HPReal::from_rational(&ratio, w)?.div(&coeff)?;
    let second = constant(UPPER_OFFSET, w).div(&(coeff * HPReal::from_i64(2000, w).ln()?))?;
    let sqrt_b = first + second;
    // Largest k with 2k(k+1) below the upper end of the bound squared.
    let cap = sqrt_b.square().ceil_upper();
    let mut k = ((cap.to_f64().unwrap_or(f64::MAX) / 2.0).sqrt() as u64).max(1);
    let b_of = |k: u64| BigInt::from(2u32) * BigInt::from(k) * BigInt::from(k + 1);
    while b_of(k + 1) < cap {
        k += 1;
    }
    while b_of(k) >= cap {
        k -= 1;
    }
    // k + 1 is excluded: √b(k+1) certifiably exceeds the bound.
    if root(&b_of(k + 1), w)?.gt(&sqrt_b) != Tri::True {
        return Err(Error::Undecidable { digits: w });
    }
    Ok(GlobalBound { sqrt_b, worst_ratio: ratio, k_max: k, discrepancy: k as i64 - PUBLISHED_K_BOUND as i64 })
}

pub fn global_k_bound(digits: u32) -> Result<GlobalBound> {
    global_k_bound_for(&[1, 2, 3], digits)
}
