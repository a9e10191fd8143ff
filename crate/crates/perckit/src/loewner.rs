//! Chordal Loewner evolution driven by SLE(κ; ρ₁, ρ₃), with tracked
//! observables, hitting-probability estimators and martingale checks.
//!
//! The driving and force points follow
//!
//! ```text
//! du₂ = √κ dB + [ρ₁/(u₂−u₁) + ρ₃/(u₂−u₃)] dt,
//! duᵢ = 2 dt/(uᵢ−u₂),      dw = 2 dt/(w−u₂),
//! d log g'(w)  = −2 dt/(w−u₂)²   (real part accumulated),
//! d log g'(u₃) = −2 dt/(u₃−u₂)².
//! ```
//!
//! (ρ₁, ρ₃) = (2, −2) at κ = 6 is the conditioned process whose martingale
//! observable |g'(w)|^{5/48}·F₅ is checked here; ρ = 0 gives plain SLE(κ)
//! for the Cardy hitting check. The drift convention is fixed: the force
//! term is ρ/(u₂−u_force), nothing else.
//!
//! Time stepping is Euler–Maruyama with an adaptive cap
//! dt = min(dt_base, c·min gap²/κ) over the tracked points; a step that
//! would cross a singularity is rejected and retried with dt/2 (the
//! Gaussian increment is rescaled by √½, preserving its law).
//!
//! Every path draws from its own counter-based stream, so ensembles are
//! reproducible bit-for-bit at any thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::conformal::BoundaryConfig;
use crate::error::{domain, Result};
use crate::formulas::{
    cardy_crossing, five_point_f_with_bracket_exponent, three_point_c,
};
use crate::numerics::adaptive_simpson;
use crate::rng::CounterRng;

/// SDE parameters for SLE(κ; ρ₁, ρ₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdeParams {
    pub kappa: f64,
    /// Force-point weight at u₁.
    pub rho1: f64,
    /// Force-point weight at u₃.
    pub rho3: f64,
    /// Base time step.
    pub dt_base: f64,
    /// Adaptivity constant: dt ≤ dt_adapt_c · min gap² / κ.
    pub dt_adapt_c: f64,
    /// Proximity threshold for swallowing detection.
    pub swallow_eps: f64,
}

impl SdeParams {
    pub fn new(kappa: f64, rho1: f64, rho3: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return domain("kappa must be positive");
        }
        Ok(SdeParams {
            kappa,
            rho1,
            rho3,
            dt_base: 1e-4,
            dt_adapt_c: 0.1,
            swallow_eps: 1e-5,
        })
    }

    /// The conditioned process SLE(6; 2, −2).
    pub fn sle_6_2_m2() -> Self {
        SdeParams::new(6.0, 2.0, -2.0).expect("valid parameters")
    }

    /// Plain SLE(κ), no force points.
    pub fn plain(kappa: f64) -> Result<Self> {
        SdeParams::new(kappa, 0.0, 0.0)
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt_base = dt;
        self
    }

    pub fn with_swallow_eps(mut self, eps: f64) -> Self {
        self.swallow_eps = eps;
        self
    }
}

/// Evolving state of the Loewner flow and its tracked observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerState {
    pub t: f64,
    /// Driving value (image of the curve tip).
    pub u2: f64,
    /// Force-point images.
    pub u1: f64,
    pub u3: f64,
    /// Tracked bulk image, if any.
    pub w: Option<Complex64>,
    /// Accumulated log |g'(w)|.
    pub log_gw: f64,
    /// Accumulated log g'(u₃) (non-increasing).
    pub log_gu3: f64,
    pub u1_alive: bool,
    pub u3_alive: bool,
    pub w_alive: bool,
}

impl LoewnerState {
    pub fn from_config(cfg: &BoundaryConfig) -> Result<Self> {
        let u3 = cfg
            .u3
            .finite()
            .ok_or_else(|| crate::Error::Domain("Loewner evolution needs finite u3".into()))?;
        Ok(LoewnerState {
            t: 0.0,
            u2: cfg.u2,
            u1: cfg.u1,
            u3,
            w: Some(cfg.w),
            log_gw: 0.0,
            log_gu3: 0.0,
            u1_alive: true,
            u3_alive: true,
            w_alive: true,
        })
    }

    /// Boundary-only state (no bulk point tracked).
    pub fn boundary_only(u1: f64, u2: f64, u3: f64) -> Result<Self> {
        if !(u1 < u2 && u2 < u3) {
            return domain("marked points not ordered");
        }
        Ok(LoewnerState {
            t: 0.0,
            u2,
            u1,
            u3,
            w: None,
            log_gw: 0.0,
            log_gu3: 0.0,
            u1_alive: true,
            u3_alive: true,
            w_alive: false,
        })
    }

    fn min_gap_sq(&self) -> f64 {
        let mut g = f64::INFINITY;
        if self.u1_alive {
            g = g.min((self.u1 - self.u2).powi(2));
        }
        if self.u3_alive {
            g = g.min((self.u3 - self.u2).powi(2));
        }
        if self.w_alive {
            if let Some(w) = self.w {
                g = g.min((w - self.u2).norm_sqr());
            }
        }
        g
    }
}

/// Outcome of a single tentative Euler–Maruyama step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Advanced(LoewnerState),
    /// The update would move a tracked point across the driving value.
    RejectedCrossing,
}

/// Adaptive time step: dt = min(dt_base, c·min gap²/κ).
pub fn adaptive_dt(state: &LoewnerState, params: &SdeParams) -> f64 {
    params
        .dt_base
        .min(params.dt_adapt_c * state.min_gap_sq() / params.kappa)
}

/// One Euler–Maruyama step with Brownian increment `noise` (≈ N(0, dt)).
pub fn step(state: &LoewnerState, params: &SdeParams, dt: f64, noise: f64) -> StepOutcome {
    let mut drift = 0.0;
    if state.u1_alive && params.rho1 != 0.0 {
        drift += params.rho1 / (state.u2 - state.u1);
    }
    if state.u3_alive && params.rho3 != 0.0 {
        drift += params.rho3 / (state.u2 - state.u3);
    }
    let u2 = state.u2 + params.kappa.sqrt() * noise + drift * dt;
    let mut next = *state;
    next.t = state.t + dt;
    next.u2 = u2;
    if state.u1_alive {
        next.u1 = state.u1 + 2.0 * dt / (state.u1 - state.u2);
        if (next.u1 - u2).signum() != (state.u1 - state.u2).signum() {
            return StepOutcome::RejectedCrossing;
        }
    }
    if state.u3_alive {
        next.u3 = state.u3 + 2.0 * dt / (state.u3 - state.u2);
        next.log_gu3 += -2.0 * dt / (state.u3 - state.u2).powi(2);
        if (next.u3 - u2).signum() != (state.u3 - state.u2).signum() {
            return StepOutcome::RejectedCrossing;
        }
    }
    if state.w_alive {
        if let Some(w) = state.w {
            let denom = w - state.u2;
            next.w = Some(w + 2.0 * dt / denom);
            next.log_gw += (-2.0 * dt / (denom * denom)).re;
        }
    }
    StepOutcome::Advanced(next)
}

/// Why a path stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The bulk point was swallowed (Im w or |w−u₂| below threshold).
    SwallowedW,
    /// The u₃ force point was reached.
    HitU3,
    /// The u₁ force point came within the threshold (rare numerical event;
    /// almost surely absent in the continuum for ρ₁ = 2).
    SwallowedU1,
    /// Capacity horizon reached with everything still alive.
    Horizon,
}

/// Terminal record of one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalRecord {
    pub stop: StopReason,
    pub state: LoewnerState,
    pub rejected_steps: u32,
}

/// Advance until the next swallowing event or `t_stop`, whichever is first.
/// Returns the stop reason if a swallowing occurred.
fn advance_until(
    state: &mut LoewnerState,
    params: &SdeParams,
    rng: &mut CounterRng,
    t_stop: f64,
    rejected: &mut u32,
) -> Option<StopReason> {
    let eps = params.swallow_eps;
    while state.t < t_stop {
        let mut dt = adaptive_dt(state, params).min(t_stop - state.t);
        let mut noise = rng.standard_normal() * dt.sqrt();
        let mut advanced = None;
        for _ in 0..64 {
            match step(state, params, dt, noise) {
                StepOutcome::Advanced(next) => {
                    advanced = Some(next);
                    break;
                }
                StepOutcome::RejectedCrossing => {
                    dt *= 0.5;
                    noise *= std::f64::consts::FRAC_1_SQRT_2;
                    *rejected += 1;
                }
            }
        }
        let next = match advanced {
            Some(n) => n,
            // persistent rejection means a tracked point is pinned against
            // the singularity; classify by the nearest point
            None => {
                return Some(nearest_contact(state));
            }
        };
        *state = next;
        debug_assert!(
            !(state.u1_alive && state.u3_alive) || state.u1 < state.u3,
            "force-point ordering violated"
        );
        if state.u1_alive && (state.u1 - state.u2).abs() < eps {
            state.u1_alive = false;
            return Some(StopReason::SwallowedU1);
        }
        if state.u3_alive && (state.u3 - state.u2).abs() < eps {
            state.u3_alive = false;
            return Some(StopReason::HitU3);
        }
        if state.w_alive {
            if let Some(w) = state.w {
                if w.im < eps || (w - state.u2).norm() < eps {
                    state.w_alive = false;
                    return Some(StopReason::SwallowedW);
                }
            }
        }
    }
    None
}

fn nearest_contact(state: &LoewnerState) -> StopReason {
    let g1 = if state.u1_alive {
        (state.u1 - state.u2).abs()
    } else {
        f64::INFINITY
    };
    let g3 = if state.u3_alive {
        (state.u3 - state.u2).abs()
    } else {
        f64::INFINITY
    };
    let gw = match (state.w_alive, state.w) {
        (true, Some(w)) => (w - state.u2).norm().min(w.im),
        _ => f64::INFINITY,
    };
    if g3 <= g1 && g3 <= gw {
        StopReason::HitU3
    } else if gw <= g1 {
        StopReason::SwallowedW
    } else {
        StopReason::SwallowedU1
    }
}

/// Integrate one path from a five-point configuration until u₃ is hit, w
/// is swallowed, or the capacity horizon passes.
pub fn run_path(
    initial: &BoundaryConfig,
    params: &SdeParams,
    rng: &mut CounterRng,
    horizon: f64,
) -> Result<TerminalRecord> {
    let mut state = LoewnerState::from_config(initial)?;
    let mut rejected = 0;
    let stop = advance_until(&mut state, params, rng, horizon, &mut rejected)
        .unwrap_or(StopReason::Horizon);
    Ok(TerminalRecord {
        stop,
        state,
        rejected_steps: rejected,
    })
}

/// Seeded convenience wrapper: stream (master_seed, path_index).
pub fn run_path_seeded(
    initial: &BoundaryConfig,
    params: &SdeParams,
    master_seed: u64,
    path_index: u64,
    horizon: f64,
) -> Result<TerminalRecord> {
    let mut rng = CounterRng::stream(master_seed, path_index);
    run_path(initial, params, &mut rng, horizon)
}

/// A full ensemble of terminal records.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    pub n_paths: usize,
    pub seed: u64,
    pub records: Vec<TerminalRecord>,
}

pub fn run_ensemble(
    initial: &BoundaryConfig,
    params: &SdeParams,
    n_paths: usize,
    seed: u64,
    horizon: f64,
) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return domain("ensemble needs at least one path");
    }
    let records: Result<Vec<TerminalRecord>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| run_path_seeded(initial, params, seed, i, horizon))
        .collect();
    Ok(PathEnsemble {
        n_paths,
        seed,
        records: records?,
    })
}

/// Per-checkpoint statistics of a martingale observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointStat {
    pub t: f64,
    /// Paths still running at this checkpoint (stopped paths contribute
    /// their frozen value by optional stopping).
    pub n_alive: usize,
    pub mean: f64,
    pub stderr: f64,
    /// More than half of the paths stopped before this checkpoint.
    pub unreliable: bool,
}

fn summarize(values_by_checkpoint: &[Vec<f64>], alive: &[usize], times: &[f64]) -> Vec<CheckpointStat> {
    values_by_checkpoint
        .iter()
        .zip(alive)
        .zip(times)
        .map(|((vals, &n_alive), &t)| {
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            CheckpointStat {
                t,
                n_alive,
                mean,
                stderr: (var / n).sqrt(),
                unreliable: (n_alive as f64) < 0.5 * n,
            }
        })
        .collect()
}

/// Checkpointed mean of M_t = exp(exponent·log g'(u₃))·C(u₁(t),u₂(t),u₃(t))
/// under plain SLE(6) (optional stopping: stopped paths freeze M).
/// `exponent` is 1/3 for the true observable; other values serve as
/// negative controls.
#[allow(clippy::too_many_arguments)]
pub fn martingale_check_c(
    u1: f64,
    u2: f64,
    u3: f64,
    params: &SdeParams,
    n_paths: usize,
    seed: u64,
    checkpoints: &[f64],
    exponent: f64,
) -> Result<Vec<CheckpointStat>> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return domain("checkpoints must be strictly increasing and non-empty");
    }
    LoewnerState::boundary_only(u1, u2, u3)?;
    let eval = move |s: &LoewnerState| -> Result<f64> {
        Ok((exponent * s.log_gu3).exp() * three_point_c(s.u1, s.u2, s.u3)?)
    };
    let per_path: Result<Vec<(Vec<f64>, Vec<bool>)>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::stream(seed, i);
            let mut state = LoewnerState::boundary_only(u1, u2, u3)?;
            let mut rejected = 0;
            let mut vals = Vec::with_capacity(checkpoints.len());
            let mut live = Vec::with_capacity(checkpoints.len());
            let mut frozen: Option<f64> = None;
            for &tk in checkpoints {
                if frozen.is_none() {
                    if let Some(_reason) =
                        advance_until(&mut state, params, &mut rng, tk, &mut rejected)
                    {
                        frozen = Some(eval(&state)?);
                    }
                }
                match frozen {
                    Some(v) => {
                        vals.push(v);
                        live.push(false);
                    }
                    None => {
                        vals.push(eval(&state)?);
                        live.push(true);
                    }
                }
            }
            Ok((vals, live))
        })
        .collect();
    let per_path = per_path?;
    let k = checkpoints.len();
    let mut by_cp = vec![Vec::with_capacity(n_paths); k];
    let mut alive = vec![0usize; k];
    for (vals, live) in &per_path {
        for j in 0..k {
            by_cp[j].push(vals[j]);
            if live[j] {
                alive[j] += 1;
            }
        }
    }
    Ok(summarize(&by_cp, &alive, checkpoints))
}

/// Checkpointed mean of M_t = exp((5/48)·log|g'(w)|)·F₅(u(t), w(t)) under
/// SLE(6; 2, −2). `bracket_exponent` = 11/96 is the true observable.
pub fn martingale_check_h(
    initial: &BoundaryConfig,
    params: &SdeParams,
    n_paths: usize,
    seed: u64,
    checkpoints: &[f64],
    bracket_exponent: f64,
) -> Result<Vec<CheckpointStat>> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return domain("checkpoints must be strictly increasing and non-empty");
    }
    LoewnerState::from_config(initial)?;
    let eval = move |s: &LoewnerState| -> Result<f64> {
        let w = s.w.expect("bulk point tracked");
        let cfg = BoundaryConfig::new(s.u1, s.u2, s.u3, w)?;
        Ok((5.0 / 48.0 * s.log_gw).exp()
            * five_point_f_with_bracket_exponent(&cfg, bracket_exponent)?)
    };
    let per_path: Result<Vec<(Vec<f64>, Vec<bool>)>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::stream(seed, i);
            let mut state = LoewnerState::from_config(initial)?;
            let mut rejected = 0;
            let mut vals = Vec::with_capacity(checkpoints.len());
            let mut live = Vec::with_capacity(checkpoints.len());
            let mut frozen: Option<f64> = None;
            for &tk in checkpoints {
                if frozen.is_none() {
                    if let Some(_reason) =
                        advance_until(&mut state, params, &mut rng, tk, &mut rejected)
                    {
                        frozen = Some(eval(&state)?);
                    }
                }
                match frozen {
                    Some(v) => {
                        vals.push(v);
                        live.push(false);
                    }
                    None => {
                        vals.push(eval(&state)?);
                        live.push(true);
                    }
                }
            }
            Ok((vals, live))
        })
        .collect();
    let per_path = per_path?;
    let k = checkpoints.len();
    let mut by_cp = vec![Vec::with_capacity(n_paths); k];
    let mut alive = vec![0usize; k];
    for (vals, live) in &per_path {
        for j in 0..k {
            by_cp[j].push(vals[j]);
            if live[j] {
                alive[j] += 1;
            }
        }
    }
    Ok(summarize(&by_cp, &alive, checkpoints))
}

/// Result of the interval-hitting Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitEstimate {
    pub hits: u64,
    pub n: u64,
    pub p_hat: f64,
    pub stderr: f64,
    /// Cardy's crossing probability for the same interval.
    pub cardy: f64,
    /// Paths that reached the capacity horizon unresolved (counted as
    /// misses; kept as a diagnostic).
    pub n_horizon: u64,
    /// Total pocket restarts across the ensemble (diagnostic).
    pub n_restarts: u64,
}

/// One crossing race at driving level. Outcomes:
/// * the u₁ image collides first → 0 (miss);
/// * the a image collides with b still separated → 1 (the hull pinched at
///   a point of [a,b), i.e. the curve touched the interval);
/// * the a and b images collide together → the hull closed over the whole
///   interval from beyond b; the crossing is then decided by a fresh
///   percolation problem inside the pocket, whose four marked points have
///   the cross-ratio read off the collapsing images. By the domain Markov
///   property and conformal invariance the race restarts at that
///   cross-ratio.
///
/// Returns (hit, restarts, hit_horizon).
fn crossing_race(
    params: &SdeParams,
    rng: &mut CounterRng,
    mut u1: f64,
    mut u2: f64,
    mut a: f64,
    mut b: f64,
) -> (bool, u32, bool) {
    let eps = params.swallow_eps;
    let classify_gap = eps.sqrt();
    let mut restarts = 0u32;
    'race: loop {
        // Resolution times have a power-law tail in capacity time, but the
        // gap dynamics is scale-invariant: dt_base acts as a relative
        // fineness on the running capacity scale (scale² + t), so a huge
        // horizon costs only logarithmically many steps, while the gap²
        // rule still refines near collisions. The far interval endpoint can
        // be a proxy for infinity after a restart, so the scale is set by
        // the near endpoint.
        let scale = a - u1;
        let scale_sq = scale * scale;
        let horizon = 1e8 * scale_sq;
        let mut t = 0.0f64;
        loop {
            if t >= horizon {
                return (false, restarts, true);
            }
            let gap1 = (u2 - u1).abs();
            let gapa = (a - u2).abs();
            if gap1 < eps * scale {
                return (false, restarts, false);
            }
            if gapa < eps * scale {
                if (b - u2) > classify_gap * scale {
                    // the hull pinched at a point of [a, b): a genuine touch
                    return (true, restarts, false);
                }
                // pocket closed over the whole interval: restart at the
                // frozen cross-ratio of the four collapsing images
                let eta = ((u2 - u1) * (b - a)) / ((a - u1) * (b - u2));
                if !(eta > 0.0 && eta < 1.0) || restarts >= 64 {
                    // degenerate pinch resolution; call it by the nearer side
                    return (eta >= 1.0, restarts, false);
                }
                restarts += 1;
                u1 = 0.0;
                u2 = eta;
                a = 1.0;
                b = 1e6;
                continue 'race;
            }
            let min_gap_sq = gap1.min(gapa).powi(2);
            let mut dt = (params.dt_base * (scale_sq + t))
                .min(params.dt_adapt_c * min_gap_sq / params.kappa)
                .min(horizon - t);
            let mut noise = rng.standard_normal() * dt.sqrt();
            // reject steps which cross a tracked point
            for _ in 0..64 {
                let u2n = u2 + params.kappa.sqrt() * noise;
                let p1n = u1 + 2.0 * dt / (u1 - u2);
                let pan = a + 2.0 * dt / (a - u2);
                let pbn = b + 2.0 * dt / (b - u2);
                if (p1n - u2n).signum() == (u1 - u2).signum()
                    && (pan - u2n).signum() == (a - u2).signum()
                {
                    u1 = p1n;
                    u2 = u2n;
                    a = pan;
                    b = pbn;
                    t += dt;
                    break;
                }
                dt *= 0.5;
                noise *= std::f64::consts::FRAC_1_SQRT_2;
            }
        }
    }
}

/// Probability that the cluster grown from [u₁,u₂] crosses to
/// [u₃−half_width, u₃+half_width], estimated by plain SLE(6) interval
/// hitting with pocket restarts, against
/// cardy_crossing(u₁, u₂, u₃−hw, u₃+hw).
pub fn hit_cardy(
    u1: f64,
    u2: f64,
    u3: f64,
    half_width: f64,
    params: &SdeParams,
    n_paths: usize,
    seed: u64,
) -> Result<HitEstimate> {
    let (a, b) = (u3 - half_width, u3 + half_width);
    if !(u1 < u2 && u2 < a && half_width > 0.0) {
        return domain("hit_cardy: need u1 < u2 < u3 − half_width");
    }
    let target = cardy_crossing(u1, u2, a, b)?;
    let outcomes: Vec<(bool, u32, bool)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::stream(seed, i);
            crossing_race(params, &mut rng, u1, u2, a, b)
        })
        .collect();
    let hits = outcomes.iter().filter(|(hit, _, _)| *hit).count() as u64;
    let n_horizon = outcomes.iter().filter(|(_, _, h)| *h).count() as u64;
    let n_restarts = outcomes.iter().map(|(_, r, _)| *r as u64).sum();
    let n = n_paths as u64;
    let p_hat = hits as f64 / n as f64;
    Ok(HitEstimate {
        hits,
        n,
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        cardy: target,
        n_horizon,
        n_restarts,
    })
}

/// Drift of the general-κ conditioned process:
/// (κ−8)/(u₂−u₃) + κ G'(x)/((u₃−u₁) G(x)), x = (u₂−u₁)/(u₃−u₁), with
/// G(x) = ∫₀ˣ θ^{−4/κ}(1−θ)^{2(6−κ)/κ} dθ. The integral only converges
/// for κ > 4 (for κ ≤ 4 the conditioning degenerates), and κ must be
/// below 8.
pub fn general_kappa_drift(u1: f64, u2: f64, u3: f64, kappa: f64) -> Result<f64> {
    if !(u1 < u2 && u2 < u3) {
        return domain("general_kappa_drift: points not ordered");
    }
    if !(kappa > 4.0 && kappa < 8.0) {
        return domain(format!(
            "general_kappa_drift: kappa = {kappa} outside (4, 8); the conditioning \
             integral diverges for kappa <= 4"
        ));
    }
    let x = (u2 - u1) / (u3 - u1);
    // substitute θ = τ^p, p = κ/(κ−4): the integrand becomes
    // p (1−τ^p)^{2(6−κ)/κ}, smooth on [0, x^{1/p}]
    let p = kappa / (kappa - 4.0);
    let beta = 2.0 * (6.0 - kappa) / kappa;
    let g = adaptive_simpson(
        &|tau: f64| p * (1.0 - tau.powf(p)).powf(beta),
        0.0,
        x.powf(1.0 / p),
        1e-12,
    );
    let g_prime = x.powf(-4.0 / kappa) * (1.0 - x).powf(beta);
    Ok((kappa - 8.0) / (u2 - u3) + kappa * g_prime / ((u3 - u1) * g))
}

/// Drift of SLE(κ; κ−8 at u₃, κ−4 at u₁), the force-point process the
/// general-κ remark compares against.
pub fn force_point_drift(u1: f64, u2: f64, u3: f64, kappa: f64) -> f64 {
    (kappa - 8.0) / (u2 - u3) + (kappa - 4.0) / (u2 - u1)
}
