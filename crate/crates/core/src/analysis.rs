//! Error-rate formulas, the exact enumeration oracle over all 64 patterns,
//! Monte Carlo estimation, and the squeezing / rate parameter sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CoreError;
use crate::gaussian::db_to_r;
use crate::tec::{
    classify, corrected_variance, ActionKind, ClusterConfig, DecoderTable, StateSource,
};

fn check_probability(p: f64) -> Result<(), CoreError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::param("p", format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Error rate of the bare protected correlation: 1 - p^2 - (1-p)^2.
pub fn analytic_p1(p: f64) -> Result<f64, CoreError> {
    check_probability(p)?;
    Ok(1.0 - p * p - (1.0 - p) * (1.0 - p))
}

/// Error rate after sign-blind (qubit-style) correction.
pub fn analytic_p2(p: f64) -> Result<f64, CoreError> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(1.0
        - p.powi(6)
        - q.powi(6)
        - 6.0 * p.powi(5) * q
        - 6.0 * p * q.powi(5)
        - 9.0 * p.powi(4) * q.powi(2)
        - 9.0 * p.powi(2) * q.powi(4))
}

/// Error rate after sign-sensitive correction: p2 minus the recovered
/// three-error term 18 p^3 (1-p)^3.
pub fn analytic_p3(p: f64) -> Result<f64, CoreError> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(analytic_p2(p)? - 18.0 * p.powi(3) * q.powi(3))
}

// Per-pattern decode outcome shared by the oracle and the Monte Carlo
// estimator: returns true when the corrected protected mean is nonzero.
fn pattern_fails(table: &DecoderTable, cfg: &ClusterConfig, mask: u32) -> bool {
    let pairs = cfg.syndrome_pairs();
    let hit = |m: usize| (mask >> (m - 1)) & 1 == 1;
    let mut syndromes = [0i32; 4];
    for (k, (i, j)) in pairs.iter().enumerate() {
        syndromes[k] = hit(*i) as i32 - hit(*j) as i32;
    }
    let (pi, pj) = cfg.protected;
    let effect = hit(pi) as i32 - hit(pj) as i32;

    let raw = syndromes.map(|s| s as f64);
    let sig = classify(&raw, 1.0, 0.5).unwrap_or_else(|_| unreachable!());
    let corrected = match table.action(table.sign_mode.canonical(sig)).kind {
        ActionKind::AddSyndrome { index } => effect + syndromes[index - 1],
        ActionKind::SubtractSyndrome { index } => effect - syndromes[index - 1],
        _ => effect,
    };
    corrected != 0
}

fn table_config(table: &DecoderTable) -> Result<ClusterConfig, CoreError> {
    ClusterConfig::new(0.0, table.protected, StateSource::FromUnitary)
}

/// Exact logical error rate by enumerating all 64 identical-amplitude
/// patterns over modes 1..6, each weighted p^|S| (1-p)^(6-|S|).
pub fn brute_force_rate(table: &DecoderTable, p: f64) -> Result<f64, CoreError> {
    check_probability(p)?;
    let cfg = table_config(table)?;
    let mut total = 0.0;
    for mask in 0u32..64 {
        if pattern_fails(table, &cfg, mask) {
            let w = mask.count_ones() as i32;
            total += p.powi(w) * (1.0 - p).powi(6 - w);
        }
    }
    Ok(total)
}

/// Per-weight (correctable, failing) pattern counts from the enumeration.
pub fn weight_class_counts(table: &DecoderTable) -> Result<[(u32, u32); 7], CoreError> {
    let cfg = table_config(table)?;
    let mut counts = [(0u32, 0u32); 7];
    for mask in 0u32..64 {
        let w = mask.count_ones() as usize;
        if pattern_fails(table, &cfg, mask) {
            counts[w].1 += 1;
        } else {
            counts[w].0 += 1;
        }
    }
    Ok(counts)
}

/// A Monte Carlo error-rate estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Estimate the logical error rate by sampling error patterns: each of
/// modes 1..6 independently receives the shared displacement with
/// probability p. Deterministic for a fixed seed; single shard, so output
/// is machine independent.
pub fn monte_carlo_rate(
    table: &DecoderTable,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, CoreError> {
    check_probability(p)?;
    if trials == 0 {
        return Err(CoreError::param("trials", "need at least one trial"));
    }
    let cfg = table_config(table)?;

    // 64 possible patterns: precompute each outcome once
    let mut fails = [false; 64];
    for mask in 0u32..64 {
        fails[mask as usize] = pattern_fails(table, &cfg, mask);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = 0u64;
    for _ in 0..trials {
        let mut mask = 0u32;
        for m in 0..6 {
            if rng.gen::<f64>() < p {
                mask |= 1 << m;
            }
        }
        if fails[mask as usize] {
            errors += 1;
        }
    }
    let estimate = errors as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(MonteCarloEstimate {
        estimate,
        std_error,
        trials,
        seed,
    })
}

/// One squeezing-sweep grid point: the four variance curves.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub squeezing_db: f64,
    /// Shot-noise level of the protected pair (curve a).
    pub var_snl: f64,
    /// No error occurred (curve c).
    pub var_no_error: f64,
    /// Error present, no correction (curve b).
    pub var_uncorrected: f64,
    /// Error present, corrected (curve d).
    pub var_corrected: f64,
}

/// Sweep the initial squeezing with a mode-5 Gaussian-amplitude error of
/// the given variance. The corrected curve is computed from the prepared
/// covariance, not from the closed form it is checked against.
pub fn squeezing_sweep(db_grid: &[f64], error_variance: f64) -> Result<Vec<SweepPoint>, CoreError> {
    if error_variance <= 0.0 {
        return Err(CoreError::param("error_variance", "must be positive"));
    }
    let mut out = Vec::with_capacity(db_grid.len());
    for &db in db_grid {
        if db < 0.0 {
            return Err(CoreError::param("db", "squeezing in dB must be >= 0"));
        }
        let r = db_to_r(db);
        let cfg = ClusterConfig::standard(r)?;
        let var_no_error = (-2.0 * r).exp() / 2.0;
        out.push(SweepPoint {
            squeezing_db: db,
            var_snl: 0.5,
            var_no_error,
            var_uncorrected: var_no_error + error_variance,
            var_corrected: corrected_variance(&cfg, Some(5))?,
        });
    }
    Ok(out)
}

/// One rate-sweep grid point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateCurvePoint {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

/// Evaluate the three analytic rate curves on a probability grid.
pub fn rate_sweep(p_grid: &[f64]) -> Result<Vec<RateCurvePoint>, CoreError> {
    p_grid
        .iter()
        .map(|&p| {
            Ok(RateCurvePoint {
                p,
                p1: analytic_p1(p)?,
                p2: analytic_p2(p)?,
                p3: analytic_p3(p)?,
            })
        })
        .collect()
}

/// Uniform grid of `points` values from 0 to `max` inclusive.
pub fn uniform_grid(max: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![max];
    }
    (0..points)
        .map(|i| max * i as f64 / (points - 1) as f64)
        .collect()
}
