//! Natural-unit conventions (`ħ = c = m₀ = 1`) and kinematic helpers.

use serde::Serialize;

use crate::error::{Error, Result};

/// Selects the density rule: difference `|θ|² − |χ|²` for Klein-Gordon,
/// sum `θ†θ + χ†χ` for Dirac.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    KleinGordon,
    Dirac,
}

impl ModelKind {
    /// Upper end of the 1S coupling domain: `ζ = 1/2` (KG) or `ζ = 1` (Dirac).
    pub fn critical_zeta(self) -> f64 {
        match self {
            ModelKind::KleinGordon => 0.5,
            ModelKind::Dirac => 1.0,
        }
    }

    pub fn density(self, abs_theta_sq: f64, abs_chi_sq: f64) -> f64 {
        match self {
            ModelKind::KleinGordon => abs_theta_sq - abs_chi_sq,
            ModelKind::Dirac => abs_theta_sq + abs_chi_sq,
        }
    }
}

/// Dimensionless velocity `v/c`, restricted to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Beta(f64);

impl Beta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..1.0).contains(&value) {
            Ok(Beta(value))
        } else {
            Err(Error::domain("beta", value, "[0, 1)"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn gamma(self) -> f64 {
        1.0 / (1.0 - self.0 * self.0).sqrt()
    }
}

/// Dimensionless Coulomb coupling `ζ = Zα`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Zeta(f64);

impl Zeta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Zeta(value))
        } else {
            Err(Error::domain("zeta", value, "(0, inf)"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fine-structure constant used to turn an integer nuclear charge into `ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FineStructure(f64);

impl FineStructure {
    pub const CODATA: f64 = 1.0 / 137.035999084;

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(FineStructure(alpha))
        } else {
            Err(Error::domain("alpha", alpha, "(0, 1)"))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

impl Default for FineStructure {
    fn default() -> Self {
        FineStructure(Self::CODATA)
    }
}

/// Lorentz factor `1/√(1−β²)`.
pub fn gamma_factor(beta: f64) -> Result<f64> {
    Beta::new(beta).map(Beta::gamma)
}

/// Inverse of [`gamma_factor`]: `√(1 − 1/γ²)`.
pub fn beta_from_gamma(gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 1.0) {
        return Err(Error::domain("gamma", gamma, "[1, inf)"));
    }
    Ok((1.0 - 1.0 / (gamma * gamma)).sqrt())
}

/// `ζ = Z·α` for a positive integer nuclear charge.
pub fn zeta_from_z(z: u32, alpha: FineStructure) -> Result<Zeta> {
    if z == 0 {
        return Err(Error::domain("Z", 0.0, "Z >= 1"));
    }
    Zeta::new(f64::from(z) * alpha.alpha())
}
