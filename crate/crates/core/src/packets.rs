//! Boosted Gaussian wave packets for both models.
//!
//! A rest-frame Gaussian spectrum `a(k)` is set into motion by boosting each
//! mass-shell mode `(k, ω) → (γ(k+βω), γ(ω+βk))` and carrying the amplitude
//! with the half-power Jacobian `(dk/dq)^(1/2)`, which keeps `∫|A|²dq` fixed.
//! The particle and antiparticle ingredients follow from per-mode
//! coefficients: `1 ± ω` for Klein-Gordon, upper/lower spinor amplitudes for
//! Dirac.
//!
//! The Klein-Gordon charge is `4∫ω|A|²dq`, so Klein-Gordon modes carry an extra
//! `(ω(k)/ω(q))^(1/2)`: the spectrum then transforms with the invariant measure
//! `dk/ω` and the charge is the same at every velocity. The Dirac norm
//! `∫|A|²dq` is preserved by the boost itself.
//!
//! Position profiles are sampled on the co-moving coordinate `ξ = z − βt`.
//! The spectrum is unit-normalised in `k` and synthesis carries a `1/√(2π)`
//! factor, so the rest-frame `Φ = (θ+χ)/2` has unit norm in `z`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::diracfree::dirac_plane_components;
use crate::error::{Error, Result};
use crate::kgfree::kg_plane_components;
use crate::quad::{integrate_grid, mass_shell, simpson_weights, synthesize, Grid1D, SpectralCoefficients};
use crate::units::{Beta, ModelKind};
use crate::RatioResult;

/// Upper bound on `√σ̃` (narrow-spectrum regime).
pub const MAX_SQRT_SIGMA: f64 = 0.1;
/// Momentum-space variance used for the figures.
pub const DEFAULT_SIGMA: f64 = 1e-4;
/// Velocities of the four figure panels.
pub const FIGURE_BETAS: [f64; 4] = [0.5, 0.9, 0.99, 0.99999];
/// Position nodes of a default profile grid.
pub const PROFILE_NODES: usize = 4097;
/// Boundary density allowed relative to the peak.
pub const BOUNDARY_DENSITY_LIMIT: f64 = 1e-10;
/// Spectral tail mass dropped by the wavenumber truncation.
pub const SPECTRAL_TAIL_MASS: f64 = 1e-12;

const MIN_SPECTRAL_NODES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketSpec {
    pub model: ModelKind,
    pub beta: Beta,
    pub sigma: f64,
    pub zgrid: Grid1D,
    pub t: f64,
}

impl PacketSpec {
    pub fn new(model: ModelKind, beta: Beta, sigma: f64, zgrid: Grid1D, t: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0 && sigma.sqrt() <= MAX_SQRT_SIGMA) {
            return Err(Error::domain("sigma", sigma, "(0, 0.01] (sqrt(sigma) <= 0.1)"));
        }
        if !t.is_finite() {
            return Err(Error::domain("t", t, "finite"));
        }
        Ok(Self {
            model,
            beta,
            sigma,
            zgrid,
            t,
        })
    }

    /// Grid on `|ξ| ≤ 5.5/(γ√σ̃)` with [`PROFILE_NODES`] nodes at `t = 0`; the
    /// contracted envelope has fallen below `e^(−30)` of its peak at the edges.
    pub fn with_default_grid(model: ModelKind, beta: Beta, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain("sigma", sigma, "(0, 0.01] (sqrt(sigma) <= 0.1)"));
        }
        let half_width = default_half_width(beta, sigma);
        Self::new(model, beta, sigma, Grid1D::symmetric(half_width, PROFILE_NODES)?, 0.0)
    }
}

pub fn default_half_width(beta: Beta, sigma: f64) -> f64 {
    5.5 / (beta.gamma() * sigma.sqrt())
}

/// Unit-norm rest-frame spectrum `(πσ̃)^(−1/4) e^(−k²/2σ̃)`.
pub fn rest_amplitude(sigma: f64) -> impl Fn(f64) -> f64 {
    let norm = (PI * sigma).powf(-0.25);
    move |k| norm * (-k * k / (2.0 * sigma)).exp()
}

/// Rest-frame half-width `K` beyond which the Gaussian carries less than
/// [`SPECTRAL_TAIL_MASS`], widened in steps of `√σ̃/4`.
pub fn spectral_half_width(sigma: f64) -> f64 {
    let mut m = 4.0;
    while erfc(m) >= SPECTRAL_TAIL_MASS {
        m += 0.25;
    }
    m * sigma.sqrt()
}

fn boost_wavenumber(k: f64, beta: Beta) -> f64 {
    beta.gamma() * (k + beta.value() * k.hypot(1.0))
}

fn rest_wavenumber(q: f64, beta: Beta) -> f64 {
    beta.gamma() * (q - beta.value() * q.hypot(1.0))
}

/// Wavenumber grid covering the boosted image of `[−K, K]`, fine enough that
/// the discrete synthesis has no aliased copies within twice the widest `ξ`.
pub fn boosted_kgrid(sigma: f64, beta: Beta, zgrid: &Grid1D) -> Result<Grid1D> {
    let half = spectral_half_width(sigma);
    let (lo, hi) = (boost_wavenumber(-half, beta), boost_wavenumber(half, beta));
    let reach = zgrid.start().abs().max(zgrid.end().abs());
    let dq_max = PI / (4.0 * reach);
    let mut count = (((hi - lo) / dq_max).ceil() as usize + 1).max(MIN_SPECTRAL_NODES);
    if count.is_multiple_of(2) {
        count += 1;
    }
    Grid1D::spanning(lo, hi, count)
}

/// Boosted spectrum `A(q) = a(k(q))·(ω(k)/ω(q))^(1/2)` with
/// `k(q) = γ(q − βω(q))`.
pub fn boost_amplitude<F>(rest_amplitude: F, beta: Beta, kgrid: Grid1D) -> Result<SpectralCoefficients>
where
    F: Fn(f64) -> f64,
{
    let values = kgrid
        .coords()
        .map(|q| {
            let k = rest_wavenumber(q, beta);
            let jacobian = k.hypot(1.0) / q.hypot(1.0);
            Complex64::from(rest_amplitude(k) * jacobian.sqrt())
        })
        .collect();
    SpectralCoefficients::new(kgrid, values)
}

/// Sampled `θ` and `χ` on a common grid. For Dirac each is the single nonzero
/// component of its two-spinor.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentField {
    zgrid: Grid1D,
    theta: Vec<Complex64>,
    chi: Vec<Complex64>,
    model: ModelKind,
}

impl ComponentField {
    pub fn new(zgrid: Grid1D, theta: Vec<Complex64>, chi: Vec<Complex64>, model: ModelKind) -> Result<Self> {
        zgrid.check_len(theta.len())?;
        zgrid.check_len(chi.len())?;
        let field = Self {
            zgrid,
            theta,
            chi,
            model,
        };
        let q = field.charge();
        if !(q > 0.0) {
            return Err(Error::domain("charge", q, "(0, inf)"));
        }
        Ok(field)
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

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn abs_theta_sq(&self) -> Vec<f64> {
        self.theta.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn abs_chi_sq(&self) -> Vec<f64> {
        self.chi.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `|θ|² − |χ|²` (KG) or `θ†θ + χ†χ` (Dirac).
    pub fn rho(&self) -> Vec<f64> {
        self.theta
            .iter()
            .zip(&self.chi)
            .map(|(t, c)| self.model.density(t.norm_sqr(), c.norm_sqr()))
            .collect()
    }

    /// `∫ρ dz`: the KG charge or the Dirac norm.
    pub fn charge(&self) -> f64 {
        integrate_grid(&self.rho(), &self.zgrid).expect("lengths checked at construction")
    }
}

/// Synthesises `θ` and `χ` for one boosted packet.
pub fn synthesize_packet(spec: &PacketSpec) -> Result<ComponentField> {
    let kgrid = boosted_kgrid(spec.sigma, spec.beta, &spec.zgrid)?;
    let spectrum = boost_amplitude(rest_amplitude(spec.sigma), spec.beta, kgrid)?;
    let unitary = 1.0 / (2.0 * PI).sqrt();
    let (plus, minus) = match spec.model {
        ModelKind::KleinGordon => {
            let measure = |q: f64| (rest_wavenumber(q, spec.beta).hypot(1.0) / q.hypot(1.0)).sqrt();
            (
                spectrum.scaled_by(|q| unitary * measure(q) * kg_plane_components(q).theta_amp),
                spectrum.scaled_by(|q| unitary * measure(q) * kg_plane_components(q).chi_amp),
            )
        }
        ModelKind::Dirac => (
            spectrum.scaled_by(|q| unitary * dirac_plane_components(q).upper_amp),
            spectrum.scaled_by(|q| unitary * dirac_plane_components(q).lower_amp),
        ),
    };
    let lab = Grid1D::new(
        spec.zgrid.start() + spec.beta.value() * spec.t,
        spec.zgrid.step(),
        spec.zgrid.count(),
    )?;
    let theta = synthesize(&plus, mass_shell, &lab, spec.t);
    let chi = synthesize(&minus, mass_shell, &lab, spec.t);

    let dens: Vec<f64> = theta.iter().zip(&chi).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect();
    let peak = dens.iter().copied().fold(0.0, f64::max);
    let edge = dens[0].max(dens[dens.len() - 1]);
    if edge > BOUNDARY_DENSITY_LIMIT * peak {
        return Err(Error::PacketClipped("boundary density above 1e-10 of peak"));
    }
    ComponentField::new(spec.zgrid, theta, chi, spec.model)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketReport {
    pub ratio: RatioResult,
    pub fwhm: f64,
    pub peak_rho: f64,
    pub charge: f64,
}

pub fn packet_report(field: &ComponentField) -> Result<PacketReport> {
    let grid = field.zgrid();
    let theta_sq = field.abs_theta_sq();
    let chi_sq = field.abs_chi_sq();
    let chi_int = integrate_grid(&chi_sq, grid)?;
    let theta_int = integrate_grid(&theta_sq, grid)?;
    let value = chi_int / theta_int;
    // trapezoid comparison as the error estimate
    let trap = |v: &[f64]| v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]);
    let coarse = trap(&chi_sq) / trap(&theta_sq);

    let rho = field.rho();
    let (fwhm, peak_rho) = fwhm(&rho, grid)?;
    Ok(PacketReport {
        ratio: RatioResult::quadrature(value, (value - coarse).abs()),
        fwhm,
        peak_rho,
        charge: integrate_grid(&rho, grid)?,
    })
}

/// Full width at half maximum by linear interpolation between bracketing nodes.
pub fn fwhm(profile: &[f64], grid: &Grid1D) -> Result<(f64, f64)> {
    grid.check_len(profile.len())?;
    let (peak_at, peak) = profile
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    if peak_at == 0 || peak_at == profile.len() - 1 || !(peak > 0.0) {
        return Err(Error::PacketClipped("peak is not interior to the grid"));
    }
    let half = 0.5 * peak;
    let crossing = |i: usize, j: usize| {
        let (a, b) = (profile[i], profile[j]);
        grid.coord(i) + (half - a) / (b - a) * (grid.coord(j) - grid.coord(i))
    };
    let left = (0..peak_at)
        .rev()
        .find(|&i| profile[i] < half)
        .map(|i| crossing(i, i + 1))
        .ok_or(Error::PacketClipped("profile does not fall to half maximum on the left"))?;
    let right = (peak_at + 1..profile.len())
        .find(|&i| profile[i] < half)
        .map(|i| crossing(i - 1, i))
        .ok_or(Error::PacketClipped("profile does not fall to half maximum on the right"))?;
    Ok((right - left, peak))
}

/// Dispersive nonrelativistic Gaussian
/// `(σ̃/π)^(1/4) (1+iσ̃t)^(−1/2) exp(−σ̃z²/(2(1+iσ̃t)) − it)`.
///
/// The spreading factor enters the exponent to the first power.
pub fn lowspeed_closed_form(sigma: f64, zgrid: &Grid1D, t: f64) -> Vec<Complex64> {
    let spread = Complex64::new(1.0, sigma * t);
    let prefactor = (sigma / PI).powf(0.25) / spread.sqrt();
    zgrid
        .coords()
        .map(|z| prefactor * (-sigma * z * z / (2.0 * spread) - Complex64::i() * t).exp())
        .collect()
}

/// `∫|A|² dq` of a spectrum, used to check the boost keeps the norm.
pub fn spectral_norm(coeffs: &SpectralCoefficients) -> f64 {
    let w = simpson_weights(coeffs.kgrid());
    coeffs.values().iter().zip(w).map(|(v, w)| v.norm_sqr() * w).sum()
}
