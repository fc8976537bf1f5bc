//! Exact finite-size evaluation of the counting bounds.
//!
//! All comparisons between astronomically large counts happen in log2 space
//! with explicit outward rounding: upper bounds are rounded up, exact counts
//! down, so a passed comparison can never be a floating-point artifact.
//! Binomial coefficients on the ground-set scale are exact integers first
//! and only then converted to logs.

use num_bigint::BigUint;
use serde::Serialize;

use crate::johnson::binomial;
use crate::{Error, Limits, Result};

/// Rounding direction carried by a logarithmic quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Up,
    Down,
}

/// A log2 quantity bracketing the true value on the declared side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBound {
    pub log2: f64,
    pub rounding: Rounding,
}

impl LogBound {
    pub fn up(log2: f64) -> Self {
        LogBound {
            log2,
            rounding: Rounding::Up,
        }
    }

    pub fn down(log2: f64) -> Self {
        LogBound {
            log2,
            rounding: Rounding::Down,
        }
    }

    /// Log of a product: sum of same-direction bounds, nudged outward.
    pub fn plus(self, other: LogBound) -> LogBound {
        debug_assert_eq!(self.rounding, other.rounding);
        let sum = self.log2 + other.log2;
        LogBound {
            log2: match self.rounding {
                Rounding::Up => nudge_up(sum),
                Rounding::Down => nudge_down(sum),
            },
            rounding: self.rounding,
        }
    }

    /// Safe dominance test: an upper bound provably at or above a lower one.
    pub fn dominates(&self, lower: &LogBound) -> Result<bool> {
        if self.rounding != Rounding::Up {
            return Err(Error::RoundingMismatch { expected: "up" });
        }
        if lower.rounding != Rounding::Down {
            return Err(Error::RoundingMismatch { expected: "down" });
        }
        Ok(self.log2 >= lower.log2)
    }
}

const NUDGE_STEPS: u32 = 4;

pub(crate) fn nudge_up(x: f64) -> f64 {
    let mut y = x;
    for _ in 0..NUDGE_STEPS {
        y = y.next_up();
    }
    y
}

pub(crate) fn nudge_down(x: f64) -> f64 {
    let mut y = x;
    for _ in 0..NUDGE_STEPS {
        y = y.next_down();
    }
    y
}

/// Directed log2 of a positive big integer.
pub fn log2_biguint(x: &BigUint, rounding: Rounding) -> f64 {
    let bits = x.bits();
    assert!(bits > 0, "log2 of zero");
    if bits <= 53 {
        let v = u64::try_from(x).expect("fits") as f64;
        return match rounding {
            Rounding::Up => nudge_up(v.log2()),
            Rounding::Down => nudge_down(v.log2()),
        };
    }
    let shift = bits - 53;
    let top = u64::try_from(&(x >> shift)).expect("53 bits");
    match rounding {
        Rounding::Down => nudge_down((top as f64).log2() + shift as f64),
        Rounding::Up => nudge_up(((top + 1) as f64).log2() + shift as f64),
    }
}

/// log2 of a sum given per-term log2 values, rounded up.
fn log_sum_exp2_up(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|&t| (t - max).exp2()).sum();
    let mut v = max + sum.log2();
    for _ in 0..(terms.len() as u32 + NUDGE_STEPS) {
        v = v.next_up();
    }
    v
}

/// Ceiling with a safety margin: values within 1e-9 of an integer take the
/// next integer up, so an ambiguous cutoff always errs toward more terms.
pub(crate) fn safe_ceil(x: f64) -> u64 {
    assert!(x >= 0.0);
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest as u64 + 1
    } else {
        x.ceil() as u64
    }
}

/// The spectral parameters of `J(n, r)` used by every bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundParams {
    pub n: usize,
    pub r: usize,
    /// `C(n, r)`, the vertex count.
    pub vertex_count: u64,
    /// `r (n - r)`, the degree.
    pub degree: u64,
    /// `r`, the negated smallest eigenvalue.
    pub lambda: u64,
    /// Exact spectral ratio `lambda / (degree + lambda) = 1 / (n - r + 1)`.
    pub alpha_num: u64,
    pub alpha_den: u64,
    pub alpha: f64,
    /// `ln(degree + 1) / (degree + lambda)`.
    pub sigma: f64,
    /// `sigma + alpha / (r + 1)`.
    pub sigma_tilde: f64,
    /// `alpha * vertex_count`, the spectral stable-set size bound.
    pub hoffman: f64,
}

/// Computes the bound parameters for `1 <= r <= n/2`.
pub fn params(n: usize, r: usize) -> Result<BoundParams> {
    if n == 0 || n > crate::johnson::MAX_GROUND {
        return Err(Error::GroundSetSize {
            n,
            max: crate::johnson::MAX_GROUND,
        });
    }
    if r == 0 {
        return Err(Error::DegenerateRank { r, n });
    }
    if 2 * r > n {
        return Err(Error::DualizeFirst { n, r });
    }
    let vertex_count = binomial(n, r);
    let degree = (r * (n - r)) as u64;
    let lambda = r as u64;
    let alpha_den = (n - r + 1) as u64;
    let alpha = 1.0 / alpha_den as f64;
    let sigma = ((degree + 1) as f64).ln() / (degree + lambda) as f64;
    let sigma_tilde = sigma + alpha / (r + 1) as f64;
    Ok(BoundParams {
        n,
        r,
        vertex_count,
        degree,
        lambda,
        alpha_num: 1,
        alpha_den,
        alpha,
        sigma,
        sigma_tilde,
        hoffman: vertex_count as f64 / alpha_den as f64,
    })
}

/// How a sum of binomial coefficients was bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMethod {
    /// Exact big-integer summation, then a directed log.
    ExactSum,
    /// The closed form `(e m / k)^k`, evaluated in up-rounded log space.
    ClosedForm,
}

/// Largest term count for which binomial sums are evaluated exactly.
const EXACT_SUM_TERMS: u64 = 512;

/// Upper bound, rounded up, on `log2` of `sum_{s=0}^{cutoff} C(count, s)`.
fn binomial_sum_log_up(count: u128, cutoff: u64) -> (f64, SumMethod, Option<BigUint>) {
    if cutoff as u128 >= count {
        // Degenerate: the sum is at most 2^count.
        return (nudge_up(count as f64), SumMethod::ClosedForm, None);
    }
    if cutoff <= EXACT_SUM_TERMS {
        let sum = binomial_prefix_sum(count, cutoff);
        return (
            log2_biguint(&sum, Rounding::Up),
            SumMethod::ExactSum,
            Some(sum),
        );
    }
    // sum_{s<=k} C(m, s) <= (e m / k)^k for 1 <= k <= m.
    let log_term = nudge_up((std::f64::consts::E * count as f64 / cutoff as f64).log2());
    (
        nudge_up(cutoff as f64 * log_term),
        SumMethod::ClosedForm,
        None,
    )
}

/// Exact `sum_{s=0}^{cutoff} C(count, s)`.
fn binomial_prefix_sum(count: u128, cutoff: u64) -> BigUint {
    let mut term = BigUint::from(1u32);
    let mut sum = BigUint::from(1u32);
    for s in 0..cutoff {
        term = term * BigUint::from(count - s as u128) / BigUint::from(s as u128 + 1);
        sum += &term;
    }
    sum
}

/// Up-rounded `alpha * C(n, r)` for the exponential factor.
fn alpha_vertices_up(p: &BoundParams) -> f64 {
    nudge_up(p.vertex_count as f64 / p.alpha_den as f64)
}

/// The stable-set count bound for `J(n, r)`: the number of stable sets is at
/// most `sum_{s=0}^{ceil(sigma N)} C(N, s) * 2^(alpha N)`.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Bound {
    pub n: usize,
    pub r: usize,
    /// `ceil(sigma N)`, computed from an up-rounded product.
    pub cutoff: u64,
    pub method: SumMethod,
    pub log2: LogBound,
    /// The bound as an exact integer, when the sum was exact and `alpha N`
    /// is integral and small enough to materialize.
    #[serde(serialize_with = "serialize_big_opt")]
    pub exact: Option<BigUint>,
    pub tag: &'static str,
}

fn serialize_big_opt<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_some(&b.to_string()),
        None => s.serialize_none(),
    }
}

pub fn theorem1_log_bound(n: usize, r: usize) -> Result<Theorem1Bound> {
    let p = params(n, r)?;
    let sigma_vertices = nudge_up(nudge_up(p.sigma) * p.vertex_count as f64);
    let cutoff = safe_ceil(sigma_vertices).max(1);
    let (sum_log, method, sum_exact) = binomial_sum_log_up(p.vertex_count as u128, cutoff);
    let log2 = LogBound::up(sum_log).plus(LogBound::up(alpha_vertices_up(&p)));
    let exact = match (&sum_exact, p.vertex_count % p.alpha_den) {
        (Some(sum), 0) => {
            let shift = p.vertex_count / p.alpha_den;
            (shift <= 4096).then(|| sum.clone() << shift)
        }
        _ => None,
    };
    Ok(Theorem1Bound {
        n,
        r,
        cutoff,
        method,
        log2,
        exact,
        tag: "Thm1",
    })
}

/// Upper bound on the count of loop/coloop-free rank-`r` matroids: a stable
/// set choice times the number of flat-rank cover sets of size at most
/// `2 ceil(sigma_tilde N)` drawn from `2^n (n+1)` candidate pairs.
#[derive(Debug, Clone, Serialize)]
pub struct MnrBound {
    pub n: usize,
    pub r: usize,
    /// `2 ceil(sigma_tilde N)`, the cover-size allowance.
    pub cover_cutoff: u64,
    pub method: SumMethod,
    /// log2 of the cover-choice sum alone.
    pub log2_cover_choices: LogBound,
    /// `s_log + log2_cover_choices`: the bound on `log2 m'_{n,r}`.
    pub log2_total: LogBound,
    /// The weaker closed form `(e 2^n (n+1)^3 / (4 C(n,r)))^cutoff`.
    pub eq12_log2_cover_choices: LogBound,
    pub eq12_log2_total: LogBound,
    pub tag: &'static str,
    pub eq12_tag: &'static str,
}

pub fn mnr_log_upper(n: usize, r: usize, s_log: &LogBound) -> Result<MnrBound> {
    if s_log.rounding != Rounding::Up {
        return Err(Error::RoundingMismatch { expected: "up" });
    }
    let p = params(n, r)?;
    let sigma_tilde_vertices = nudge_up(nudge_up(p.sigma_tilde) * p.vertex_count as f64);
    let cover_cutoff = 2 * safe_ceil(sigma_tilde_vertices).max(1);
    let pair_space: u128 = (1u128 << n) * (n as u128 + 1);
    let (cover_log, method, _) = binomial_sum_log_up(pair_space, cover_cutoff);
    let log2_cover_choices = LogBound::up(cover_log);
    let log2_total = s_log.plus(log2_cover_choices);

    let numerator = std::f64::consts::E * (pair_space as f64) * ((n + 1) * (n + 1)) as f64;
    let eq12_base = nudge_up((numerator / (4.0 * p.vertex_count as f64)).log2());
    let eq12_log2_cover_choices = LogBound::up(nudge_up(cover_cutoff as f64 * eq12_base));
    let eq12_log2_total = s_log.plus(eq12_log2_cover_choices);

    Ok(MnrBound {
        n,
        r,
        cover_cutoff,
        method,
        log2_cover_choices,
        log2_total,
        eq12_log2_cover_choices,
        eq12_log2_total,
        tag: "Lemma-mnr",
        eq12_tag: "Eq12",
    })
}

/// One verified inequality instance.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityRow {
    pub tag: &'static str,
    pub n: usize,
    pub param: usize,
    pub lhs_log2: f64,
    pub rhs_log2: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalitySuite {
    pub n_max: usize,
    pub rows: Vec<InequalityRow>,
    pub violations: usize,
}

/// Verifies, at every admissible point up to `n_max`:
///
/// - the binomial prefix-sum bound `sum_{i<=k} C(n,i) <= (e n / k)^k`
///   (outward-rounded logs);
/// - the off-center binomial decay
///   `C(n, floor(n/2) - k) <= C(n, floor(n/2)) * 2^(-k^2/(ceil(n/2)+k))`
///   (exact big-integer powers);
/// - the stable-count lower bound `log2 i(J(n,r)) >= C(n,r)/n` wherever the
///   stable-set count is computable.
pub fn inequality_suite(n_max: usize, limits: &Limits) -> Result<InequalitySuite> {
    if n_max > 30 {
        return Err(Error::BudgetExceeded {
            what: "inequality suite n_max",
            value: n_max as u64,
            limit: 30,
        });
    }
    let mut rows = Vec::new();

    for n in 1..=n_max {
        for k in 1..=n {
            let lhs = binomial_prefix_sum(n as u128, k as u64);
            let lhs_log2 = log2_biguint(&lhs, Rounding::Up);
            let rhs_log2 = nudge_down(
                k as f64 * nudge_down((std::f64::consts::E * n as f64 / k as f64).log2()),
            );
            rows.push(InequalityRow {
                tag: "Eq7",
                n,
                param: k,
                lhs_log2,
                rhs_log2,
                holds: lhs_log2 <= rhs_log2,
            });
        }
    }

    for n in 2..=n_max {
        let mid = n / 2;
        for k in 0..mid {
            // Exact: C(n, mid-k)^(ceil(n/2)+k) * 2^(k^2) <= C(n, mid)^(ceil(n/2)+k).
            let exponent = (n.div_ceil(2) + k) as u32;
            let lhs_pow = BigUint::from(binomial(n, mid - k)).pow(exponent) << (k * k);
            let rhs_pow = BigUint::from(binomial(n, mid)).pow(exponent);
            let holds = lhs_pow <= rhs_pow;
            let lhs_log2 = (binomial(n, mid - k) as f64).log2();
            let rhs_log2 =
                (binomial(n, mid) as f64).log2() - (k * k) as f64 / (n.div_ceil(2) + k) as f64;
            rows.push(InequalityRow {
                tag: "Lemma4",
                n,
                param: k,
                lhs_log2,
                rhs_log2,
                holds,
            });
        }
    }

    for n in 2..=n_max.min(limits.stable_ground) {
        for r in 1..n {
            if binomial(n, r) > 64 {
                continue;
            }
            let count = crate::johnson::count_stable_sets(n, r, limits)?;
            let lhs_log2 = log2_biguint(&count, Rounding::Down);
            let rhs_log2 = nudge_up(binomial(n, r) as f64 / n as f64);
            rows.push(InequalityRow {
                tag: "Eq5",
                n,
                param: r,
                lhs_log2,
                rhs_log2,
                holds: lhs_log2 >= rhs_log2,
            });
        }
    }

    let violations = rows.iter().filter(|row| !row.holds).count();
    Ok(InequalitySuite {
        n_max,
        rows,
        violations,
    })
}

/// Upper bounds on `log2 m'_{n,r}` for every rank up to `n/2`, against the
/// lower bound `C(n, floor(n/2)) / n` on `log2` of the total count.
#[derive(Debug, Clone, Serialize)]
pub struct RankProfile {
    pub n: usize,
    /// Down-rounded `C(n, floor(n/2)) / n`.
    pub lower_log2_total: f64,
    pub rows: Vec<RankProfileRow>,
    pub tail_rows: Vec<TailRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankProfileRow {
    pub r: usize,
    pub theorem1_log2: f64,
    /// Upper bound on `log2 m'_{n,r}`.
    pub upper_log2: f64,
    pub method: SumMethod,
    /// Exact-ish `sigma_tilde * C(n,r)` for this rank.
    pub sigma_tilde_vertices: f64,
    /// `(11 ln n / n^2) * C(n, floor(n/2))`: the uniform allowance that the
    /// asymptotic argument assigns to `sigma_tilde * C(n,r)`.  Reported as an
    /// observation, not asserted.
    pub sigma_tilde_uniform_rhs: f64,
    pub within_uniform_allowance: bool,
    /// Whether `upper_log2` falls strictly below the total lower bound.
    pub below_total_lower: bool,
}

/// The per-`beta` tail mass bound: log2 of
/// `2^(-C(n,mid)/n) * sum_{r=1}^{floor(n/2 - beta sqrt(n))}
///  2^(alpha_r N_r) * (cover choices)^2`.
#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub beta: f64,
    pub max_rank: Option<usize>,
    pub tail_log2: Option<f64>,
}

pub fn rank_profile(n: usize, _limits: &Limits) -> Result<RankProfile> {
    if !(2..=40).contains(&n) {
        return Err(Error::BudgetExceeded {
            what: "rank profile ground set size",
            value: n as u64,
            limit: 40,
        });
    }
    let mid = n / 2;
    let lower_log2_total = nudge_down(binomial(n, mid) as f64 / n as f64);
    let uniform_rhs = 11.0 * (n as f64).ln() / (n * n) as f64 * binomial(n, mid) as f64;

    let mut rows = Vec::new();
    let mut per_rank_tail_log = Vec::new();
    for r in 1..=mid {
        let p = params(n, r)?;
        let t1 = theorem1_log_bound(n, r)?;
        let bound = mnr_log_upper(n, r, &t1.log2)?;
        let sigma_tilde_vertices = p.sigma_tilde * p.vertex_count as f64;
        rows.push(RankProfileRow {
            r,
            theorem1_log2: t1.log2.log2,
            upper_log2: bound.log2_total.log2,
            method: bound.method,
            sigma_tilde_vertices,
            sigma_tilde_uniform_rhs: uniform_rhs,
            within_uniform_allowance: sigma_tilde_vertices <= uniform_rhs,
            below_total_lower: bound.log2_total.log2 < lower_log2_total,
        });
        // Tail term: 2^(alpha N) times the squared cover-choice count.
        per_rank_tail_log.push(nudge_up(
            alpha_vertices_up(&p) + 2.0 * bound.log2_cover_choices.log2,
        ));
    }

    let mut tail_rows = Vec::new();
    for step in 1..=12 {
        let beta = step as f64 * 0.25;
        let cut = (n as f64 / 2.0 - beta * (n as f64).sqrt()).floor();
        if cut < 1.0 {
            tail_rows.push(TailRow {
                beta,
                max_rank: None,
                tail_log2: None,
            });
            continue;
        }
        let max_rank = (cut as usize).min(mid);
        let sum_log = log_sum_exp2_up(&per_rank_tail_log[..max_rank]);
        tail_rows.push(TailRow {
            beta,
            max_rank: Some(max_rank),
            tail_log2: Some(nudge_up(sum_log - lower_log2_total)),
        });
    }

    Ok(RankProfile {
        n,
        lower_log2_total,
        rows,
        tail_rows,
    })
}
