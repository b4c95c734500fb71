//! Hydrogenlike 1S states of a point nucleus for Klein-Gordon and Dirac
//! particles: energies, radial forms, and the hidden-antiparticle ratio.
//!
//! Radial normalisation constants are dropped throughout, since every ratio is
//! invariant under rescaling of the radial function.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::integrate_radial;
use crate::units::{ModelKind, Zeta};
use crate::RatioResult;

/// Lower edge of the coupling range accepted by the quadrature routes.
pub const QUADRATURE_ZETA_MIN: f64 = 1e-4;
/// Distance kept from the critical coupling by the quadrature routes.
pub const QUADRATURE_CRITICAL_MARGIN: f64 = 1e-6;
/// Half-width of the `Boundary` band around `R = 1`.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Nonrelativistic binding energy `ζ²/(2n²)` in units of `m₀c²`.
pub fn schroedinger_binding(coupling: f64, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", f64::from(n), "n >= 1"));
    }
    if !(coupling.is_finite() && coupling >= 0.0) {
        return Err(Error::domain("zeta", coupling, "[0, inf)"));
    }
    let n = f64::from(n);
    Ok(coupling * coupling / (2.0 * n * n))
}

fn kg_y(zeta: f64) -> f64 {
    ((0.5 - zeta) * (0.5 + zeta)).sqrt()
}

/// `E/m₀c² = √(1/2 + √(1/4 − ζ²))`, defined up to and including `ζ = 1/2`.
pub fn kg_1s_energy(zeta: Zeta) -> Result<f64> {
    let z = zeta.value();
    if z > 0.5 {
        return Err(Error::domain("zeta", z, "(0, 1/2] (Klein-Gordon critical point zeta = 1/2)"));
    }
    Ok((0.5 + kg_y(z)).sqrt())
}

/// Klein-Gordon 1S state: `φ(r) ∝ r^(y−1/2) e^(−λr)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kg1S {
    pub zeta: f64,
    pub y: f64,
    pub energy: f64,
    pub lprime: f64,
    pub lambda: f64,
}

impl Kg1S {
    /// Unnormalised radial function.
    pub fn radial(&self, r: f64) -> f64 {
        r.powf(self.lprime) * (-self.lambda * r).exp()
    }
}

fn check_kg_open(z: f64) -> Result<()> {
    if z < 0.5 {
        Ok(())
    } else {
        Err(Error::domain("zeta", z, "(0, 1/2) (Klein-Gordon critical point zeta = 1/2)"))
    }
}

fn check_dirac_open(z: f64) -> Result<()> {
    if z < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("zeta", z, "(0, 1) (Dirac critical point zeta = 1)"))
    }
}

fn check_quadrature_range(z: f64, critical: f64) -> Result<()> {
    if (QUADRATURE_ZETA_MIN..=critical - QUADRATURE_CRITICAL_MARGIN).contains(&z) {
        Ok(())
    } else {
        Err(Error::domain(
            "zeta",
            z,
            "[1e-4, critical - 1e-6] (quadrature range)",
        ))
    }
}

pub fn kg_1s_state(zeta: Zeta) -> Result<Kg1S> {
    let z = zeta.value();
    check_kg_open(z)?;
    let y = kg_y(z);
    let energy = (0.5 + y).sqrt();
    let lambda = z * energy / (y + 0.5);
    debug_assert!((lambda * lambda - (1.0 - energy * energy)).abs() < 1e-12);
    Ok(Kg1S {
        zeta: z,
        y,
        energy,
        lprime: y - 0.5,
        lambda,
    })
}

/// `R = 1 − 4[2 + (y+½)^(1/2) + (y+½)^(3/2)/(2y)]^(−1)`.
pub fn kg_1s_ratio_closed(zeta: Zeta) -> Result<RatioResult> {
    let z = zeta.value();
    check_kg_open(z)?;
    let y = kg_y(z);
    let s = y + 0.5;
    let u = s.sqrt();
    // 1 − 4/bracket = (1−u)²(3u+2) / (2y(2+u) + u³), with 1 − u = ζ²/(s(1+u))
    let gap = z * z / (s * (1.0 + u));
    Ok(RatioResult::closed_form(gap * gap * (3.0 * u + 2.0) / (2.0 * y * (2.0 + u) + u * u * u)))
}

/// `R = ∫|χ|² / ∫|θ|²` with `θ = (1+E+ζ/r)φ` and `χ = (1−E−ζ/r)φ`, both
/// radial integrals done numerically.
pub fn kg_1s_ratio_quadrature(state: &Kg1S, rel_tol: f64) -> Result<RatioResult> {
    kg_ratio_scaled(state, 1.0, rel_tol)
}

pub(crate) fn kg_ratio_scaled(state: &Kg1S, scale: f64, rel_tol: f64) -> Result<RatioResult> {
    check_quadrature_range(state.zeta, 0.5)?;
    let (e, z) = (state.energy, state.zeta);
    let floor = 2.0 * state.y - 1.0;
    // [1 ∓ (E + ζ/r)]² r² φ² written as (r(1 ∓ E) ∓ ζ)² φ², finite at tiny r
    let weight = |r: f64| (scale * state.radial(r)).powi(2);
    let chi_sq = |r: f64| {
        let b = r * (1.0 - e) - z;
        b * b * weight(r)
    };
    let theta_sq = |r: f64| {
        let b = r * (1.0 + e) + z;
        b * b * weight(r)
    };
    let num = integrate_radial(chi_sq, floor, state.lambda, rel_tol)?;
    let den = integrate_radial(theta_sq, floor, state.lambda, rel_tol)?;
    Ok(ratio_of(num.value, num.abs_error, den.value, den.abs_error))
}

fn ratio_of(num: f64, num_err: f64, den: f64, den_err: f64) -> RatioResult {
    let value = num / den;
    let rel = num_err / num.abs().max(f64::MIN_POSITIVE) + den_err / den.abs();
    RatioResult::quadrature(value, value.abs() * rel)
}

/// Dirac 1S state: `g(r) ∝ r^(γ−1) e^(−ζr)`, `f = −((1−γ)/ζ) g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dirac1S {
    pub zeta: f64,
    pub gamma_exp: f64,
    pub energy: f64,
    pub energy_sommerfeld: f64,
    pub lambda: f64,
}

pub fn dirac_1s_state(zeta: Zeta) -> Result<Dirac1S> {
    let z = zeta.value();
    check_dirac_open(z)?;
    let gamma_exp = ((1.0 - z) * (1.0 + z)).sqrt();
    Ok(Dirac1S {
        zeta: z,
        gamma_exp,
        energy: (1.0 + z * z / gamma_exp).powf(-0.5),
        energy_sommerfeld: gamma_exp,
        lambda: z,
    })
}

/// `(E, E_sommerfeld)` with `E = [1 + ζ²/√(1−ζ²)]^(−1/2)` and
/// `E_sommerfeld = √(1−ζ²)`.
pub fn dirac_1s_energy(zeta: Zeta) -> Result<(f64, f64)> {
    let s = dirac_1s_state(zeta)?;
    Ok((s.energy, s.energy_sommerfeld))
}

/// `R = (1−√(1−ζ²))/(1+√(1−ζ²))`.
pub fn dirac_1s_ratio_closed(zeta: Zeta) -> Result<RatioResult> {
    let z = zeta.value();
    check_dirac_open(z)?;
    let root = ((1.0 - z) * (1.0 + z)).sqrt();
    Ok(RatioResult::closed_form(z * z / ((1.0 + root) * (1.0 + root))))
}

/// `R = ∫f²r² / ∫g²r²` from the analytic 1S radial pair.
pub fn dirac_1s_ratio_quadrature(zeta: Zeta, rel_tol: f64) -> Result<RatioResult> {
    dirac_ratio_scaled(zeta, 1.0, rel_tol)
}

pub(crate) fn dirac_ratio_scaled(zeta: Zeta, scale: f64, rel_tol: f64) -> Result<RatioResult> {
    let z = zeta.value();
    check_quadrature_range(z, 1.0)?;
    let state = dirac_1s_state(zeta)?;
    let gam = state.gamma_exp;
    let g = |r: f64| scale * r.powf(gam - 1.0) * (-state.lambda * r).exp();
    let f = |r: f64| -((1.0 - gam) / z) * g(r);
    let floor = 2.0 * gam;
    let num = integrate_radial(|r| f(r).powi(2) * r * r, floor, state.lambda, rel_tol)?;
    let den = integrate_radial(|r| g(r).powi(2) * r * r, floor, state.lambda, rel_tol)?;
    Ok(ratio_of(num.value, num.abs_error, den.value, den.abs_error))
}

/// Order-parameter reading of a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Particle,
    Antiparticle,
    Boundary,
}

pub fn classify_state(r: &RatioResult) -> Result<StateClass> {
    let v = r.value;
    if !(v >= 0.0) {
        return Err(Error::domain("R", v, "[0, inf)"));
    }
    Ok(if v < 1.0 - CLASSIFY_TOL {
        StateClass::Particle
    } else if v > 1.0 + CLASSIFY_TOL {
        StateClass::Antiparticle
    } else {
        StateClass::Boundary
    })
}

/// One row of a coupling scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub zeta: f64,
    /// `Z/68.5` for Klein-Gordon, `Z/137` for Dirac, i.e. `ζ/ζ_critical`.
    pub axis: f64,
    pub energy: f64,
    /// Dirac only.
    pub energy_sommerfeld: Option<f64>,
    pub ratio: f64,
}

/// Distance from the ends of the unit axis at which scans start and stop.
pub const SCAN_EDGE: f64 = 1e-4;

/// Uniform scan of `ζ/ζ_critical` over `[1e−4, 1 − 1e−4]`.
pub fn bound_scan(model: ModelKind, samples: usize) -> Result<Vec<ScanRow>> {
    if samples < 2 {
        return Err(Error::domain("samples", samples as f64, "samples >= 2"));
    }
    let critical = model.critical_zeta();
    let span = 1.0 - 2.0 * SCAN_EDGE;
    let rows = (0..samples)
        .map(|i| {
            let axis = SCAN_EDGE + span * i as f64 / (samples - 1) as f64;
            let zeta = Zeta::new(axis * critical)?;
            Ok(match model {
                ModelKind::KleinGordon => ScanRow {
                    zeta: zeta.value(),
                    axis,
                    energy: kg_1s_energy(zeta)?,
                    energy_sommerfeld: None,
                    ratio: kg_1s_ratio_closed(zeta)?.value,
                },
                ModelKind::Dirac => {
                    let (energy, sommerfeld) = dirac_1s_energy(zeta)?;
                    ScanRow {
                        zeta: zeta.value(),
                        axis,
                        energy,
                        energy_sommerfeld: Some(sommerfeld),
                        ratio: dirac_1s_ratio_closed(zeta)?.value,
                    }
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for w in rows.windows(2) {
        assert!(w[1].energy < w[0].energy, "energy must fall along the scan");
        assert!(w[1].ratio > w[0].ratio, "ratio must rise along the scan");
    }
    Ok(rows)
}

/// The row at the critical coupling itself, where both models reach R = 1.
/// Klein-Gordon stops at `E = 1/√2`; both Dirac energies vanish.
pub fn critical_row(model: ModelKind) -> ScanRow {
    let critical = model.critical_zeta();
    match model {
        ModelKind::KleinGordon => ScanRow {
            zeta: critical,
            axis: 1.0,
            energy: std::f64::consts::FRAC_1_SQRT_2,
            energy_sommerfeld: None,
            ratio: 1.0,
        },
        ModelKind::Dirac => ScanRow {
            zeta: critical,
            axis: 1.0,
            energy: 0.0,
            energy_sommerfeld: Some(0.0),
            ratio: 1.0,
        },
    }
}
