//! Dirac plane-wave spinor split into upper (`θ`) and lower (`χ`) parts.
//!
//! Only the spin-up, `+z` momentum, positive-energy sector is modelled; for
//! motion along `z` each half reduces to a single nonzero component.

use crate::error::Result;
use crate::units::Beta;
use crate::RatioResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracPlaneComponents {
    pub upper_amp: f64,
    pub lower_amp: f64,
    pub omega: f64,
    pub k: f64,
}

/// Unit-normalised spinor amplitudes with `lower/upper = k/(ω+1)`.
pub fn dirac_plane_components(k: f64) -> DiracPlaneComponents {
    let omega = k.hypot(1.0);
    DiracPlaneComponents {
        upper_amp: ((omega + 1.0) / (2.0 * omega)).sqrt(),
        lower_amp: k / (2.0 * omega * (omega + 1.0)).sqrt(),
        omega,
        k,
    }
}

/// `(γ−1)/(γ+1) = (1−√(1−β²))/(1+√(1−β²))`.
pub fn dirac_free_ratio(beta: f64) -> Result<RatioResult> {
    let beta = Beta::new(beta)?;
    let root = (1.0 - beta.value() * beta.value()).sqrt();
    let b = beta.value();
    Ok(RatioResult::closed_form(b * b / ((1.0 + root) * (1.0 + root))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgfree::kg_free_ratio;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rest_spinor() {
        let c = dirac_plane_components(0.0);
        assert_eq!((c.upper_amp, c.lower_amp), (1.0, 0.0));
    }

    #[test]
    fn boosted_spinor_ratio() {
        let c = dirac_plane_components(0.8 * 5.0 / 3.0);
        assert_relative_eq!((c.lower_amp / c.upper_amp).powi(2), 0.25, max_relative = 1e-14);
    }

    #[test]
    fn normalization() {
        for k in [0.0, 1.0, 10.0] {
            let c = dirac_plane_components(k);
            assert_relative_eq!(c.upper_amp.powi(2) + c.lower_amp.powi(2), 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(dirac_free_ratio(0.0).unwrap().value, 0.0);
        assert_relative_eq!(dirac_free_ratio(0.8).unwrap().value, 0.25, max_relative = 1e-14);
        assert_relative_eq!(
            dirac_free_ratio(0.99999).unwrap().value,
            0.991_095_572_163_042_3,
            max_relative = 1e-10
        );
        assert!(dirac_free_ratio(1.0).is_err());
    }

    proptest! {
        #[test]
        fn kg_ratio_is_square_of_dirac(b in 0.0f64..0.999_99) {
            let d = dirac_free_ratio(b).unwrap().value;
            prop_assert!((kg_free_ratio(b).unwrap().value - d * d).abs() < 1e-12);
            prop_assert!(d < 1.0);
        }

        #[test]
        fn spinor_invariants(k in 0.0f64..1e3) {
            let c = dirac_plane_components(k);
            let ratio = (c.lower_amp / c.upper_amp).powi(2);
            prop_assert!((ratio - (c.omega - 1.0) / (c.omega + 1.0)).abs() < 1e-12);
            prop_assert!(c.upper_amp > c.lower_amp.abs());
            prop_assert!(c.upper_amp.powi(2) + c.lower_amp.powi(2) > 0.0);
        }
    }
}
