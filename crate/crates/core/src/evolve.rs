//! Time evolution of the coupled two-component system on a periodic lattice,
//! plus residual diagnostics for the continuity equation, the underlying
//! second-order wave equation and the space-time inversion symmetry.
//!
//! The lattice is periodic with period `count · step`. Fields that are meant
//! to be localized carry [`Support::Interior`], which rejects any state whose
//! density reaches the edges.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::packets::ComponentField;
use crate::quad::Grid1D;

/// Edge density allowed for interior-supported states, relative to the peak.
pub const BOUNDARY_LIMIT: f64 = 1e-8;
/// Smallest lattice accepted; the coarse Richardson stencil spans 9 nodes.
pub const MIN_NODES: usize = 9;
/// Nodes on each side inspected by the boundary check (stencil half-width).
const EDGE_NODES: usize = 2;
/// Safe fraction of the RK4 stability interval on the imaginary axis (2√2).
const RK4_IMAGINARY_REACH: f64 = 2.8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Symmetric lattice of `nodes` points whose periodic cell is `[-half_width, half_width)`.
pub fn periodic_lattice(half_width: f64, nodes: usize) -> Result<Grid1D> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::domain("half_width", half_width, "positive"));
    }
    let h = 2.0 * half_width / nodes as f64;
    Grid1D::new(-0.5 * (nodes as f64 - 1.0) * h, h, nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Localized fields; edge density must stay below [`BOUNDARY_LIMIT`].
    Interior,
    /// Fields that legitimately fill the periodic cell, e.g. plane waves.
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    zgrid: Grid1D,
    theta: Vec<Complex64>,
    chi: Vec<Complex64>,
    potential: Vec<f64>,
    time: f64,
    support: Support,
}

impl EvolutionState {
    pub fn new(
        zgrid: Grid1D,
        theta: Vec<Complex64>,
        chi: Vec<Complex64>,
        potential: Vec<f64>,
        time: f64,
        support: Support,
    ) -> Result<Self> {
        if zgrid.count() < MIN_NODES {
            return Err(Error::InvalidGrid("evolution needs at least 9 nodes"));
        }
        zgrid.check_len(theta.len())?;
        zgrid.check_len(chi.len())?;
        zgrid.check_len(potential.len())?;
        if !time.is_finite() {
            return Err(Error::domain("time", time, "finite"));
        }
        if let Some(&v) = potential.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("potential", v, "finite"));
        }
        if theta.iter().chain(&chi).any(|c| !c.is_finite()) {
            return Err(Error::domain("field", f64::NAN, "finite"));
        }
        let state = Self {
            zgrid,
            theta,
            chi,
            potential,
            time,
            support,
        };
        state.check_boundary()?;
        Ok(state)
    }

    /// Interior-supported state at t = 0 built from a synthesized packet.
    pub fn from_field(field: &ComponentField, potential: Vec<f64>) -> Result<Self> {
        Self::new(
            *field.zgrid(),
            field.theta().to_vec(),
            field.chi().to_vec(),
            potential,
            0.0,
            Support::Interior,
        )
    }

    pub fn zgrid(&self) -> &Grid1D {
        &self.zgrid
    }

    pub fn theta(&self) -> &[Complex64] {
        &self.theta
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn abs_theta_sq(&self) -> Vec<f64> {
        self.theta.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn abs_chi_sq(&self) -> Vec<f64> {
        self.chi.iter().map(|c| c.norm_sqr()).collect()
    }

    /// ρ = |θ|² − |χ|².
    pub fn rho(&self) -> Vec<f64> {
        self.theta
            .iter()
            .zip(&self.chi)
            .map(|(t, c)| t.norm_sqr() - c.norm_sqr())
            .collect()
    }

    /// Largest edge value of |θ|² + |χ|² relative to its peak (0 for empty fields).
    pub fn boundary_fraction(&self) -> f64 {
        let n = self.zgrid.count();
        let total: Vec<f64> = self
            .theta
            .iter()
            .zip(&self.chi)
            .map(|(t, c)| t.norm_sqr() + c.norm_sqr())
            .collect();
        let peak = total.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let edge = (0..EDGE_NODES)
            .chain(n - EDGE_NODES..n)
            .map(|i| total[i])
            .fold(0.0, f64::max);
        edge / peak
    }

    fn check_boundary(&self) -> Result<()> {
        if self.support == Support::Periodic {
            return Ok(());
        }
        let density = self.boundary_fraction();
        if density > BOUNDARY_LIMIT {
            return Err(Error::BoundaryLeakage {
                density,
                limit: BOUNDARY_LIMIT,
            });
        }
        Ok(())
    }

    fn with_fields(&self, theta: Vec<Complex64>, chi: Vec<Complex64>, time: f64) -> Self {
        Self {
            zgrid: self.zgrid,
            theta,
            chi,
            potential: self.potential.clone(),
            time,
            support: self.support,
        }
    }
}

/// Periodic fourth-order second difference with node spacing `stride · h`.
fn laplacian_strided<T>(f: &[T], h: f64, stride: usize) -> Vec<T>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = f.len();
    let hs = h * stride as f64;
    let c = 1.0 / (12.0 * hs * hs);
    (0..n)
        .map(|i| {
            let at = |d: isize| f[(i as isize + d * stride as isize).rem_euclid(n as isize) as usize];
            ((at(-1) + at(1)) * 16.0 - (at(-2) + at(2)) - at(0) * 30.0) * c
        })
        .collect()
}

pub fn laplacian<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    laplacian_strided(f, h, 1)
}

/// Periodic fourth-order central first difference.
pub fn derivative<T>(f: &[T], h: f64) -> Vec<T>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = f.len();
    let c = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            let at = |d: isize| f[(i as isize + d).rem_euclid(n as isize) as usize];
            ((at(1) - at(-1)) * 8.0 - (at(2) - at(-2))) * c
        })
        .collect()
}

/// Exact Laplacian of the trigonometric interpolant on the periodic cell.
fn spectral_laplacian(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut planner = FftPlanner::new();
    let mut buf = f.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * h);
    for (j, c) in buf.iter_mut().enumerate() {
        let m = if 2 * j < n { j as f64 } else { j as f64 - n as f64 };
        // The unpaired Nyquist mode of an even lattice has no sign; use its magnitude.
        let k = if 2 * j == n { 0.5 * n as f64 * dk } else { m * dk };
        *c *= -k * k / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

fn stage_derivatives(
    state: &EvolutionState,
    theta: &[Complex64],
    chi: &[Complex64],
    lap_sum: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut dtheta = Vec::with_capacity(theta.len());
    let mut dchi = Vec::with_capacity(chi.len());
    for i in 0..theta.len() {
        let v = state.potential[i];
        let half_lap = 0.5 * lap_sum[i];
        dtheta.push(-I * ((v + 1.0) * theta[i] - half_lap));
        dchi.push(-I * ((v - 1.0) * chi[i] + half_lap));
    }
    (dtheta, dchi)
}

/// Right-hand side of the coupled system, using the lattice Laplacian.
pub fn rhs(state: &EvolutionState) -> (Vec<Complex64>, Vec<Complex64>) {
    rhs_of(state, &state.theta, &state.chi)
}

fn rhs_of(state: &EvolutionState, theta: &[Complex64], chi: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let sum: Vec<Complex64> = theta.iter().zip(chi).map(|(t, c)| t + c).collect();
    let lap = laplacian(&sum, state.zgrid.step());
    stage_derivatives(state, theta, chi, &lap)
}

/// Largest admissible |dt|: the smaller of 0.5·h² and the RK4 limit set by the
/// fastest lattice mode, √(1 + 16/(3h²)) + max|V|.
pub fn stability_bound(zgrid: &Grid1D, potential: &[f64]) -> f64 {
    let h = zgrid.step();
    let vmax = potential.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let omega_max = (1.0 + 16.0 / (3.0 * h * h)).sqrt() + vmax;
    (0.5 * h * h).min(RK4_IMAGINARY_REACH / omega_max)
}

/// One classical RK4 step. Negative `dt` integrates backwards.
pub fn step(state: &EvolutionState, dt: f64) -> Result<EvolutionState> {
    let bound = stability_bound(&state.zgrid, &state.potential);
    if !dt.is_finite() || dt.abs() > bound * (1.0 + 1e-12) {
        return Err(Error::Stability { dt, bound });
    }
    state.check_boundary()?;

    let axpy = |u: &[Complex64], k: &[Complex64], a: f64| -> Vec<Complex64> {
        u.iter().zip(k).map(|(u, k)| u + a * k).collect()
    };
    let (t0, c0) = (&state.theta, &state.chi);
    let (k1t, k1c) = rhs_of(state, t0, c0);
    let (k2t, k2c) = rhs_of(state, &axpy(t0, &k1t, 0.5 * dt), &axpy(c0, &k1c, 0.5 * dt));
    let (k3t, k3c) = rhs_of(state, &axpy(t0, &k2t, 0.5 * dt), &axpy(c0, &k2c, 0.5 * dt));
    let (k4t, k4c) = rhs_of(state, &axpy(t0, &k3t, dt), &axpy(c0, &k3c, dt));

    let combine = |u: &[Complex64], k1: &[Complex64], k2: &[Complex64], k3: &[Complex64], k4: &[Complex64]| {
        (0..u.len())
            .map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]))
            .collect::<Vec<_>>()
    };
    let theta = combine(t0, &k1t, &k2t, &k3t, &k4t);
    let chi = combine(c0, &k1c, &k2c, &k3c, &k4c);
    Ok(state.with_fields(theta, chi, state.time + dt))
}

/// Advances `steps` times, recording the initial state and every `cadence`-th one.
pub fn trajectory(state: &EvolutionState, dt: f64, steps: usize, cadence: usize) -> Result<Vec<EvolutionState>> {
    if cadence == 0 {
        return Err(Error::domain("cadence", 0.0, "at least 1"));
    }
    let mut out = vec![state.clone()];
    let mut current = state.clone();
    for n in 1..=steps {
        current = step(&current, dt)?;
        if n % cadence == 0 {
            out.push(current.clone());
        }
    }
    Ok(out)
}

/// Q = ∫ρ dz with the periodic rectangle rule, the sum the lattice scheme conserves.
pub fn charge(state: &EvolutionState) -> f64 {
    state.rho().iter().sum::<f64>() * state.zgrid.step()
}

/// Current density summed term by term from the four bilinear pieces.
pub fn current_density(state: &EvolutionState) -> Vec<f64> {
    let h = state.zgrid.step();
    let (t, c) = (&state.theta, &state.chi);
    let dt = derivative(t, h);
    let dc = derivative(c, h);
    (0..t.len())
        .map(|i| {
            let (t, c, dt, dc) = (t[i], c[i], dt[i], dc[i]);
            let bracket = (t * dt.conj() - t.conj() * dt)
                + (c * dc.conj() - c.conj() * dc)
                + (t * dc.conj() - c.conj() * dt)
                + (c * dt.conj() - t.conj() * dc);
            let j = 0.5 * I * bracket;
            debug_assert!(j.im.abs() <= 1e-12 * (1.0 + j.re.abs()), "current has imaginary part {}", j.im);
            j.re
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub max: f64,
    pub l2: f64,
}

impl ResidualNorms {
    fn of(samples: &[Complex64], h: f64) -> Self {
        Self {
            max: samples.iter().map(|c| c.norm()).fold(0.0, f64::max),
            l2: (samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * h).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitResidual {
    pub theta: ResidualNorms,
    pub chi: ResidualNorms,
    /// Largest Richardson estimate of the Laplacian error in either equation.
    pub truncation_estimate: f64,
}

/// Pointwise truncation estimate of ½∇²(θ+χ): |L(2h) − L(h)| / 15, halved.
pub fn laplacian_truncation(state: &EvolutionState) -> Vec<f64> {
    let sum: Vec<Complex64> = state.theta.iter().zip(&state.chi).map(|(t, c)| t + c).collect();
    let h = state.zgrid.step();
    let fine = laplacian_strided(&sum, h, 1);
    let coarse = laplacian_strided(&sum, h, 2);
    fine.iter()
        .zip(&coarse)
        .map(|(f, c)| 0.5 * (c - f).norm() / 15.0)
        .collect()
}

/// Pointwise residuals of both equations with the lattice Laplacian.
///
/// Without supplied time derivatives they are taken from the right-hand side
/// evaluated with the exact (FFT) Laplacian, so the residual isolates the
/// spatial discretization error.
pub fn split_residual_samples(
    state: &EvolutionState,
    time_derivatives: Option<(&[Complex64], &[Complex64])>,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let sum: Vec<Complex64> = state.theta.iter().zip(&state.chi).map(|(t, c)| t + c).collect();
    let computed;
    let (dtheta, dchi) = match time_derivatives {
        Some((dt, dc)) => {
            state.zgrid.check_len(dt.len())?;
            state.zgrid.check_len(dc.len())?;
            (dt, dc)
        }
        None => {
            let lap = spectral_laplacian(&sum, state.zgrid.step());
            computed = stage_derivatives(state, &state.theta, &state.chi, &lap);
            (computed.0.as_slice(), computed.1.as_slice())
        }
    };
    let lap = laplacian(&sum, state.zgrid.step());
    let mut res_theta = Vec::with_capacity(sum.len());
    let mut res_chi = Vec::with_capacity(sum.len());
    for i in 0..sum.len() {
        let v = state.potential[i];
        let half_lap = 0.5 * lap[i];
        res_theta.push(I * dtheta[i] - v * state.theta[i] - state.theta[i] + half_lap);
        res_chi.push(I * dchi[i] - v * state.chi[i] + state.chi[i] - half_lap);
    }
    Ok((res_theta, res_chi))
}

/// Max and L2 norms of both equation residuals; fails with
/// [`Error::GridTooCoarse`] when the truncation estimate exceeds `tol`.
pub fn split_residual(
    state: &EvolutionState,
    time_derivatives: Option<(&[Complex64], &[Complex64])>,
    tol: f64,
) -> Result<SplitResidual> {
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "positive"));
    }
    let truncation_estimate = laplacian_truncation(state).into_iter().fold(0.0, f64::max);
    if truncation_estimate > tol {
        return Err(Error::GridTooCoarse {
            estimate: truncation_estimate,
            tol,
        });
    }
    let (rt, rc) = split_residual_samples(state, time_derivatives)?;
    let h = state.zgrid.step();
    Ok(SplitResidual {
        theta: ResidualNorms::of(&rt, h),
        chi: ResidualNorms::of(&rc, h),
        truncation_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub max_residual: f64,
    pub l2_residual: f64,
    /// max over the trajectory of |Q(t) − Q(0)| / |Q(0)|; absolute when Q(0) = 0.
    pub charge_drift: f64,
    pub max_time_term: f64,
    pub max_divergence_term: f64,
    pub sampling_interval: f64,
}

fn check_trajectory(trajectory: &[EvolutionState]) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(Error::TooFewStates(trajectory.len()));
    }
    let grid = trajectory[0].zgrid;
    if trajectory.iter().any(|s| s.zgrid != grid) {
        return Err(Error::IncompatibleTrajectory("states live on different grids"));
    }
    let interval = trajectory[1].time - trajectory[0].time;
    if interval == 0.0 {
        return Err(Error::IncompatibleTrajectory("states share a time"));
    }
    let uneven = trajectory
        .windows(2)
        .any(|w| ((w[1].time - w[0].time) - interval).abs() > 1e-9 * interval.abs().max(w[1].time.abs()));
    if uneven {
        return Err(Error::IncompatibleTrajectory("time spacing is not uniform"));
    }
    Ok(interval)
}

/// Residual of ∂ρ/∂t + ∂j/∂z = 0 at every interior snapshot, with a central
/// difference in time and a fourth-order divergence.
pub fn continuity_check(trajectory: &[EvolutionState]) -> Result<ContinuityReport> {
    let interval = check_trajectory(trajectory)?;
    let h = trajectory[0].zgrid.step();
    let rhos: Vec<Vec<f64>> = trajectory.iter().map(EvolutionState::rho).collect();

    let mut max_residual = 0.0_f64;
    let mut sum_sq = 0.0;
    let mut max_time_term = 0.0_f64;
    let mut max_divergence_term = 0.0_f64;
    for n in 1..trajectory.len() - 1 {
        let div = derivative(&current_density(&trajectory[n]), h);
        for i in 0..div.len() {
            let time_term = (rhos[n + 1][i] - rhos[n - 1][i]) / (2.0 * interval);
            let r = time_term + div[i];
            max_residual = max_residual.max(r.abs());
            max_time_term = max_time_term.max(time_term.abs());
            max_divergence_term = max_divergence_term.max(div[i].abs());
            sum_sq += r * r * h;
        }
    }
    let interior = (trajectory.len() - 2) as f64;

    let q0 = charge(&trajectory[0]);
    let scale = if q0 == 0.0 { 1.0 } else { q0.abs() };
    let charge_drift = trajectory
        .iter()
        .map(|s| (charge(s) - q0).abs() / scale)
        .fold(0.0, f64::max);

    Ok(ContinuityReport {
        max_residual,
        l2_residual: (sum_sq / interior).sqrt(),
        charge_drift,
        max_time_term,
        max_divergence_term,
        sampling_interval: interval,
    })
}

/// Largest residual of (i∂t − V)²Φ = (1 − ∇²)Φ for Φ = (θ + χ)/2 over the
/// interior snapshots, with central differences in time and the lattice Laplacian.
pub fn kg_consistency_residual(trajectory: &[EvolutionState]) -> Result<f64> {
    let interval = check_trajectory(trajectory)?;
    let h = trajectory[0].zgrid.step();
    let phis: Vec<Vec<Complex64>> = trajectory
        .iter()
        .map(|s| s.theta.iter().zip(&s.chi).map(|(t, c)| 0.5 * (t + c)).collect())
        .collect();
    let mut worst = 0.0_f64;
    for n in 1..trajectory.len() - 1 {
        let v = &trajectory[n].potential;
        let lap = laplacian(&phis[n], h);
        for i in 0..lap.len() {
            let (prev, here, next) = (phis[n - 1][i], phis[n][i], phis[n + 1][i]);
            let phi_tt = (next - 2.0 * here + prev) / (interval * interval);
            let phi_t = (next - prev) / (2.0 * interval);
            let r = -phi_tt - 2.0 * I * v[i] * phi_t + v[i] * v[i] * here - here + lap[i];
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// How the potential is carried through the inversion map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialRule {
    /// V'(z) = −V(−z), the rule under which the system is invariant.
    Negate,
    /// V'(z) = V(−z); used as a negative control.
    Keep,
}

/// θ'(z) = χ(−z), χ'(z) = θ(−z), V'(z) = −V(−z), t' = −t.
pub fn inversion_transform(state: &EvolutionState) -> Result<EvolutionState> {
    inversion_transform_with(state, PotentialRule::Negate)
}

pub fn inversion_transform_with(state: &EvolutionState, rule: PotentialRule) -> Result<EvolutionState> {
    if !state.zgrid.is_symmetric() {
        return Err(Error::AsymmetricGrid);
    }
    let reflect = |f: &[Complex64]| f.iter().rev().copied().collect::<Vec<_>>();
    let sign = match rule {
        PotentialRule::Negate => -1.0,
        PotentialRule::Keep => 1.0,
    };
    Ok(EvolutionState {
        zgrid: state.zgrid,
        theta: reflect(&state.chi),
        chi: reflect(&state.theta),
        potential: state.potential.iter().rev().map(|v| sign * v).collect(),
        time: -state.time,
        support: state.support,
    })
}

/// Max-norm mismatch between the transform of the evolved state and the
/// backward evolution of the transformed state, relative to the field peak.
pub fn inversion_residual(state: &EvolutionState, dt: f64) -> Result<f64> {
    inversion_residual_with(state, dt, PotentialRule::Negate)
}

pub fn inversion_residual_with(state: &EvolutionState, dt: f64, rule: PotentialRule) -> Result<f64> {
    let forward = inversion_transform_with(&step(state, dt)?, rule)?;
    let backward = step(&inversion_transform_with(state, rule)?, -dt)?;
    let peak = forward
        .theta
        .iter()
        .chain(&forward.chi)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let diff = forward
        .theta
        .iter()
        .zip(&backward.theta)
        .chain(forward.chi.iter().zip(&backward.chi))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(diff / peak)
}
