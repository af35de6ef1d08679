//! Closed-form behaviour of the amplified search.
//!
//! With `N` entries and `M_c` of them common, the loop rotates by the
//! angle `theta` fixed by `cos(theta) = 1 - M_c/N`. After `q` iterations
//! the probability of measuring a common entry is
//!
//! ```text
//! P_s(q) = (1 - cos(theta)) * (sin^2((q+1) theta) + sin^2(q theta)) / sin^2(theta)
//! ```
//!
//! and the schedule stops at `q_c = floor(pi / (2 theta))`, which is at
//! most `(pi / (2 sqrt 2)) * sqrt(N / M_c)`. One composed-oracle call
//! costs two invocations of each of the `kappa` black boxes, so a full
//! run costs `q_t = 2 kappa q_c <= kappa (pi / sqrt 2) sqrt(N / M_c)`
//! underlying queries.
//!
//! The amplitudes themselves collapse onto three classes (non-common with
//! the flag clear, common with the flag clear, common with the flag set)
//! whose values follow the recursion in [`amplitude_recursion`]; the
//! simulator must reproduce it elementwise.

use std::f64::consts::{PI, SQRT_2};

use crate::{Error, Result};

/// Iteration plan for one `(N, M_c)` pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationSchedule {
    num_entries: u64,
    common_count: u64,
    theta: f64,
    iterations: u64,
    predicted_success: f64,
}

impl IterationSchedule {
    /// Schedule for `common_count` common entries out of `num_entries`.
    pub fn new(num_entries: u64, common_count: u64) -> Result<Self> {
        let theta = rotation_angle(num_entries, common_count)?;
        let iterations = (PI / (2.0 * theta)).floor() as u64;
        let predicted_success = success_probability(num_entries, common_count, iterations)?;
        Ok(Self {
            num_entries,
            common_count,
            theta,
            iterations,
            predicted_success,
        })
    }

    pub fn num_entries(&self) -> u64 {
        self.num_entries
    }

    pub fn common_count(&self) -> u64 {
        self.common_count
    }

    /// The rotation angle per iteration, in `(0, pi/2]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `q_c`, the scheduled iteration count.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Success probability predicted at `q_c`.
    pub fn predicted_success(&self) -> f64 {
        self.predicted_success
    }

    /// Exact total black-box invocations a `kappa`-database run at this
    /// schedule performs.
    pub fn total_oracle_calls(&self, kappa: usize) -> u64 {
        total_oracle_calls(kappa, self.iterations)
    }

    /// Upper bound on total black-box invocations,
    /// `kappa * (pi / sqrt 2) * sqrt(N / M_c)`.
    pub fn oracle_call_bound(&self, kappa: usize) -> f64 {
        oracle_call_bound(kappa, self.num_entries, self.common_count)
    }
}

/// One step of the three-class amplitude recursion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticState {
    /// Iteration index `q >= 1`.
    pub iteration: u64,
    /// Amplitude of each non-common entry with the flag clear (`a_q`).
    pub non_solution: f64,
    /// Amplitude of each common entry with the flag clear (`b_q`).
    pub solution_unflagged: f64,
    /// Amplitude of each common entry with the flag set (`c_q`).
    pub solution_flagged: f64,
    /// Mean of the flag-clear subspace driving the inversion step.
    pub flag_zero_mean: f64,
}

impl AnalyticState {
    /// `(N - M_c) a^2 + M_c (b^2 + c^2)`; 1 within `1e-10` for every step.
    pub fn normalization(&self, num_entries: u64, common_count: u64) -> f64 {
        let non = (num_entries - common_count) as f64;
        non * self.non_solution * self.non_solution
            + common_count as f64
                * (self.solution_unflagged * self.solution_unflagged
                    + self.solution_flagged * self.solution_flagged)
    }

    /// Probability of measuring a common entry in this step's state,
    /// counting both flag values.
    pub fn success_probability(&self, common_count: u64) -> f64 {
        common_count as f64
            * (self.solution_unflagged * self.solution_unflagged
                + self.solution_flagged * self.solution_flagged)
    }
}

fn validate(num_entries: u64, common_count: u64) -> Result<()> {
    if !num_entries.is_power_of_two() {
        return Err(Error::Domain(format!(
            "entry count {num_entries} is not a power of two"
        )));
    }
    if common_count == 0 {
        return Err(Error::NoCommonEntries);
    }
    if common_count > num_entries {
        return Err(Error::Domain(format!(
            "common count {common_count} exceeds entry count {num_entries}"
        )));
    }
    Ok(())
}

/// `theta = arccos(1 - M_c/N)`.
pub fn rotation_angle(num_entries: u64, common_count: u64) -> Result<f64> {
    validate(num_entries, common_count)?;
    Ok((1.0 - common_count as f64 / num_entries as f64).acos())
}

/// Success probability after `iterations` loop passes.
pub fn success_probability(num_entries: u64, common_count: u64, iterations: u64) -> Result<f64> {
    let theta = rotation_angle(num_entries, common_count)?;
    let ratio = common_count as f64 / num_entries as f64; // 1 - cos(theta), exactly
    let sin_sq = theta.sin().powi(2);
    let q = iterations as f64;
    let p = ratio * (((q + 1.0) * theta).sin().powi(2) + (q * theta).sin().powi(2)) / sin_sq;
    debug_assert!(
        (-1e-12..=1.0 + 1e-12).contains(&p),
        "success probability {p} outside [0, 1] beyond rounding"
    );
    Ok(p.clamp(0.0, 1.0))
}

/// Evaluate the three-class recursion for `q = 1..=iterations`.
///
/// Seeded at `(a, b, c) = (1/sqrt N, 1/sqrt N, 0)`, the uniform start
/// with the flag clear, so step 1 reproduces the simulator's state after
/// one oracle-plus-diffusion pass, and each later step applies
///
/// ```text
/// mean = (1 - M_c/N) a + (M_c/N) c
/// a' = 2 mean - a,   b' = 2 mean - c,   c' = -b
/// ```
///
/// (the oracle swaps the two common classes before the inversion, which
/// is why `c` feeds the mean and `b` re-emerges negated).
pub fn amplitude_recursion(
    num_entries: u64,
    common_count: u64,
    iterations: u64,
) -> Result<Vec<AnalyticState>> {
    validate(num_entries, common_count)?;
    let ratio = common_count as f64 / num_entries as f64;
    let inv_sqrt_n = 1.0 / (num_entries as f64).sqrt();
    let (mut a, mut b, mut c) = (inv_sqrt_n, inv_sqrt_n, 0.0);
    let mut out = Vec::with_capacity(iterations as usize);
    for iteration in 1..=iterations {
        let mean = (1.0 - ratio) * a + ratio * c;
        let (next_a, next_b, next_c) = (2.0 * mean - a, 2.0 * mean - c, -b);
        a = next_a;
        b = next_b;
        c = next_c;
        out.push(AnalyticState {
            iteration,
            non_solution: a,
            solution_unflagged: b,
            solution_flagged: c,
            flag_zero_mean: mean,
        });
    }
    Ok(out)
}

/// Exact total black-box invocations over `iterations` composed-oracle
/// calls: each call runs every black box twice.
pub fn total_oracle_calls(kappa: usize, iterations: u64) -> u64 {
    2 * kappa as u64 * iterations
}

/// `kappa * (pi / sqrt 2) * sqrt(N / M_c)`, the query-cost bound a
/// scheduled run stays under.
pub fn oracle_call_bound(kappa: usize, num_entries: u64, common_count: u64) -> f64 {
    kappa as f64 * (PI / SQRT_2) * ((num_entries as f64) / (common_count as f64)).sqrt()
}
