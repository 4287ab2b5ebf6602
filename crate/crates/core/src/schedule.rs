//! Variance-preserving noise schedules.
//!
//! A schedule discretizes the signal/noise coefficients over integer
//! timesteps `tau in 0..=T` with `alpha(0) = 1`, `sigma(0) = 0`, `alpha`
//! strictly decreasing, `sigma` strictly increasing, and
//! `alpha^2 + sigma^2 = 1` everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Schedule family identifier, recorded in checkpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleKind {
    /// `alpha(tau) = cos(pi/2 * tau/T)`, `sigma(tau) = sin(pi/2 * tau/T)`.
    Cosine,
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScheduleKind::Cosine => write!(f, "cosine"),
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(ScheduleKind::Cosine),
            other => Err(Error::InvalidParameter(format!("unknown schedule kind {other:?}"))),
        }
    }
}

/// Discretized variance-preserving noise schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    kind: ScheduleKind,
    alpha: Vec<f64>,
    sigma: Vec<f64>,
}

impl NoiseSchedule {
    /// Number of timesteps `T`; valid `tau` are `0..=T`.
    pub fn t_max(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    /// Signal coefficient at `tau`.
    pub fn alpha(&self, tau: usize) -> f64 {
        self.alpha[tau]
    }

    /// Noise coefficient at `tau`.
    pub fn sigma(&self, tau: usize) -> f64 {
        self.sigma[tau]
    }
}

/// Build a variance-preserving schedule over `T >= 2` timesteps.
pub fn build_schedule(t_max: usize, kind: ScheduleKind) -> Result<NoiseSchedule> {
    if t_max < 2 {
        return Err(Error::InvalidParameter(format!("schedule needs T >= 2, got {t_max}")));
    }
    let (alpha, sigma): (Vec<f64>, Vec<f64>) = match kind {
        ScheduleKind::Cosine => (0..=t_max)
            .map(|tau| {
                let angle = std::f64::consts::FRAC_PI_2 * tau as f64 / t_max as f64;
                (angle.cos(), angle.sin())
            })
            .unzip(),
    };
    let schedule = NoiseSchedule { kind, alpha, sigma };
    // Invariants must hold for every constructed schedule.
    debug_assert_eq!(schedule.alpha(0), 1.0);
    debug_assert_eq!(schedule.sigma(0), 0.0);
    Ok(schedule)
}

/// Schedule-level surrogate for the error accumulated over a multi-step
/// denoising trajectory: the sum of `sqrt(tau_n)` over the strictly
/// decreasing timestep subsequence. Strictly increasing in the subsequence
/// length, mirroring how each extra step adds error.
pub fn schedule_error_surrogate(schedule: &NoiseSchedule, subsequence: &[usize]) -> Result<f64> {
    let t_max = schedule.t_max();
    for (i, &tau) in subsequence.iter().enumerate() {
        if tau > t_max {
            return Err(Error::InvalidInput(format!("timestep {tau} exceeds T = {t_max}")));
        }
        if i > 0 && subsequence[i - 1] <= tau {
            return Err(Error::InvalidInput(format!(
                "timestep subsequence must be strictly decreasing, got {} then {tau}",
                subsequence[i - 1]
            )));
        }
    }
    Ok(subsequence.iter().map(|&tau| (tau as f64).sqrt()).sum())
}

/// The strictly decreasing re-injection timesteps used by an `n`-step
/// extraction: `tau_k = floor(T * (n - k) / n)` for `k = 1..n-1`, i.e. the
/// uniform subdivision of the schedule index space.
pub fn uniform_timestep_subsequence(t_max: usize, n_steps: usize) -> Vec<usize> {
    (1..n_steps).map(|k| t_max * (n_steps - k) / n_steps).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_conditions() {
        for t in [2, 10, 1000] {
            let s = build_schedule(t, ScheduleKind::Cosine).unwrap();
            assert_eq!(s.alpha(0), 1.0);
            assert_eq!(s.sigma(0), 0.0);
            assert!(s.alpha(t).abs() < 1e-12);
            assert!((s.sigma(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_preserving_identity_all_tau() {
        let s = build_schedule(1000, ScheduleKind::Cosine).unwrap();
        for tau in 0..=1000 {
            let v = s.alpha(tau).powi(2) + s.sigma(tau).powi(2);
            assert!((v - 1.0).abs() <= 1e-12, "tau {tau}: {v}");
        }
    }

    #[test]
    fn strict_monotonicity_exhaustive() {
        let s = build_schedule(1000, ScheduleKind::Cosine).unwrap();
        for tau in 1..=1000 {
            assert!(s.alpha(tau) < s.alpha(tau - 1), "alpha not strictly decreasing at {tau}");
            assert!(s.sigma(tau) > s.sigma(tau - 1), "sigma not strictly increasing at {tau}");
        }
    }

    #[test]
    fn rejects_tiny_t() {
        assert!(matches!(build_schedule(1, ScheduleKind::Cosine), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn surrogate_examples() {
        let s = build_schedule(100, ScheduleKind::Cosine).unwrap();
        assert_eq!(schedule_error_surrogate(&s, &[]).unwrap(), 0.0);
        assert_eq!(schedule_error_surrogate(&s, &[100]).unwrap(), 10.0);
        assert!(schedule_error_surrogate(&s, &[50, 60]).is_err());
        assert!(schedule_error_surrogate(&s, &[101]).is_err());
    }

    #[test]
    fn surrogate_strictly_increasing_in_length() {
        let s = build_schedule(1000, ScheduleKind::Cosine).unwrap();
        let full: Vec<usize> = (1..=20).rev().map(|k| k * 50).collect();
        let mut prev = 0.0;
        for n in 1..=full.len() {
            let v = schedule_error_surrogate(&s, &full[..n]).unwrap();
            assert!(v > prev, "surrogate not strictly increasing at N = {n}");
            prev = v;
        }
    }

    #[test]
    fn uniform_subsequence_layout() {
        assert_eq!(uniform_timestep_subsequence(1000, 1), Vec::<usize>::new());
        assert_eq!(uniform_timestep_subsequence(1000, 2), vec![500]);
        assert_eq!(uniform_timestep_subsequence(1000, 4), vec![750, 500, 250]);
        let sub = uniform_timestep_subsequence(1000, 4);
        assert!(sub.windows(2).all(|w| w[0] > w[1]));
    }
}
