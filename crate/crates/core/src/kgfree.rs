//! Klein-Gordon plane waves split into particle (`θ`) and antiparticle (`χ`)
//! ingredients, and the closed-form free ratio.
//!
//! With `V = 0` and `Φ ∝ e^{i(kz − ωt)}`, `i∂tΦ = ωΦ`, so `θ = (1+ω)Φ` and
//! `χ = (1−ω)Φ`. The factor two of the rest frame (`θ = 2Φ`) is kept.

use crate::error::Result;
use crate::units::Beta;
use crate::RatioResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgPlaneComponents {
    pub theta_amp: f64,
    pub chi_amp: f64,
    pub omega: f64,
    pub k: f64,
}

pub fn kg_plane_components(k: f64) -> KgPlaneComponents {
    let omega = k.hypot(1.0);
    KgPlaneComponents {
        theta_amp: 1.0 + omega,
        chi_amp: 1.0 - omega,
        omega,
        k,
    }
}

/// `((γ−1)/(γ+1))²`, i.e. `[(1−√(1−β²))/(1+√(1−β²))]²`.
pub fn kg_free_ratio(beta: f64) -> Result<RatioResult> {
    let beta = Beta::new(beta)?;
    let root = (1.0 - beta.value() * beta.value()).sqrt();
    // 1 − √(1−β²) written without cancellation
    let r = beta.value() * beta.value() / ((1.0 + root) * (1.0 + root));
    Ok(RatioResult::closed_form(r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rest_mode_has_no_chi() {
        let c = kg_plane_components(0.0);
        assert_eq!((c.theta_amp, c.chi_amp, c.omega), (2.0, 0.0, 1.0));
    }

    #[test]
    fn boosted_mode() {
        let c = kg_plane_components(5.0 / 3.0 * 0.8);
        assert_relative_eq!(c.omega, 5.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.theta_amp, 8.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.chi_amp, -2.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn ultrarelativistic_limit() {
        let c = kg_plane_components(1e8);
        assert!((c.chi_amp.abs() / c.theta_amp - 1.0).abs() < 1e-7);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(kg_free_ratio(0.0).unwrap().value, 0.0);
        assert_relative_eq!(kg_free_ratio(0.8).unwrap().value, 0.0625, max_relative = 1e-14);
        // mpmath, 40 digits
        assert_relative_eq!(
            kg_free_ratio(0.99999).unwrap().value,
            0.982_270_433_161_188_1,
            max_relative = 1e-9
        );
        assert!(kg_free_ratio(1.0).is_err());
    }

    #[test]
    fn plane_wave_ratio_identity() {
        for beta in [0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999] {
            let b = Beta::new(beta).unwrap();
            let c = kg_plane_components(b.gamma() * beta);
            let plane = (c.chi_amp / c.theta_amp).powi(2);
            assert!((plane - kg_free_ratio(beta).unwrap().value).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn components_invariants(k in -1e3f64..1e3) {
            let c = kg_plane_components(k);
            prop_assert!(c.omega >= 1.0);
            prop_assert!(c.theta_amp >= 2.0 && c.chi_amp <= 0.0);
            prop_assert!(c.theta_amp.abs() > c.chi_amp.abs());
            prop_assert!((c.theta_amp + c.chi_amp - 2.0).abs() < 1e-12);
        }

        #[test]
        fn ratio_increasing(b in 0.0f64..0.99, d in 1e-4f64..0.009) {
            let lo = kg_free_ratio(b).unwrap().value;
            let hi = kg_free_ratio(b + d).unwrap().value;
            prop_assert!(hi > lo && hi < 1.0 && lo >= 0.0);
        }
    }
}
