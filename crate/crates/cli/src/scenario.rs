//! Flat `key = value` scenario files for the `evolve` command.
//!
//! ```text
//! # free Klein-Gordon packet
//! beta = 0.5
//! sigma = 0.01
//! half_width = 64
//! nodes = 1024
//! potential = none
//! duration = 10
//! cadence = 256
//! tolerance = 1e-6
//! ```
//!
//! Unknown or repeated keys are errors. Only `duration` is required.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::error::CliError;

pub const KEYS: [&str; 12] = [
    "model",
    "beta",
    "sigma",
    "half_width",
    "nodes",
    "potential",
    "strength",
    "width",
    "duration",
    "dt",
    "cadence",
    "tolerance",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    None,
    /// `−strength / √(z² + width²)`.
    SoftenedCoulomb,
    /// `strength · exp(−z² / 2width²)`.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub model: String,
    pub beta: f64,
    pub sigma: f64,
    pub half_width: f64,
    pub nodes: usize,
    pub potential: PotentialKind,
    pub strength: f64,
    pub width: f64,
    pub duration: f64,
    /// Defaults to half the stability bound.
    pub dt: Option<f64>,
    /// Steps between snapshots; defaults to ten snapshot intervals.
    pub cadence: Option<usize>,
    pub tolerance: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            model: "kg".into(),
            beta: 0.5,
            sigma: 0.01,
            half_width: 64.0,
            nodes: 1024,
            potential: PotentialKind::None,
            strength: 0.0,
            width: 0.1,
            duration: f64::NAN,
            dt: None,
            cadence: None,
            tolerance: 1e-6,
        }
    }
}

fn bad(msg: String) -> CliError {
    CliError::Domain(format!("scenario: {msg}"))
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| bad(format!("cannot parse {key} = {raw:?}")))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", n + 1)))?;
            let (key, raw) = (key.trim(), raw.trim());
            if !KEYS.contains(&key) {
                return Err(bad(format!("line {}: unknown key {key:?}", n + 1)));
            }
            if entries.insert(key, raw).is_some() {
                return Err(bad(format!("line {}: repeated key {key:?}", n + 1)));
            }
        }

        let mut s = Scenario::default();
        for (key, raw) in entries {
            match key {
                "model" => s.model = raw.to_string(),
                "beta" => s.beta = value(key, raw)?,
                "sigma" => s.sigma = value(key, raw)?,
                "half_width" => s.half_width = value(key, raw)?,
                "nodes" => s.nodes = value(key, raw)?,
                "potential" => {
                    s.potential = match raw {
                        "none" => PotentialKind::None,
                        "softened_coulomb" => PotentialKind::SoftenedCoulomb,
                        "gaussian" => PotentialKind::Gaussian,
                        _ => return Err(bad(format!("unknown potential {raw:?}"))),
                    }
                }
                "strength" => s.strength = value(key, raw)?,
                "width" => s.width = value(key, raw)?,
                "duration" => s.duration = value(key, raw)?,
                "dt" => s.dt = Some(value(key, raw)?),
                "cadence" => s.cadence = Some(value(key, raw)?),
                "tolerance" => s.tolerance = value(key, raw)?,
                _ => unreachable!("key list checked above"),
            }
        }
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CliError> {
        match self.model.as_str() {
            "kg" => {}
            "dirac" => return Err(bad("time evolution is only available for model = kg".into())),
            other => return Err(bad(format!("unknown model {other:?}"))),
        }
        if self.duration.is_nan() {
            return Err(bad("duration is required".into()));
        }
        let positive = [
            ("duration", self.duration),
            ("half_width", self.half_width),
            ("width", self.width),
            ("tolerance", self.tolerance),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{key} = {v} must be positive")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(bad(format!("dt = {dt} must be positive")));
            }
        }
        if !self.strength.is_finite() {
            return Err(bad("strength must be finite".into()));
        }
        if self.cadence == Some(0) {
            return Err(bad("cadence must be at least 1".into()));
        }
        if self.nodes < antiratio::evolve::MIN_NODES || self.nodes > crate::figures::MAX_SAMPLES {
            return Err(bad(format!("nodes = {} is out of range", self.nodes)));
        }
        Ok(())
    }

    pub fn potential_at(&self, z: f64) -> f64 {
        match self.potential {
            PotentialKind::None => 0.0,
            PotentialKind::SoftenedCoulomb => -self.strength / z.hypot(self.width),
            PotentialKind::Gaussian => self.strength * (-0.5 * z * z / (self.width * self.width)).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let s = Scenario::parse(
            "# comment\nmodel = kg\nbeta=0.9\nsigma = 0.004 # inline\nhalf_width = 50\nnodes = 2048\n\
             potential = softened_coulomb\nstrength = 0.3\nwidth = 0.1\nduration = 2\ndt = 0.001\n\
             cadence = 100\ntolerance = 1e-7\n",
        )
        .unwrap();
        assert_eq!(s.beta, 0.9);
        assert_eq!(s.nodes, 2048);
        assert_eq!(s.potential, PotentialKind::SoftenedCoulomb);
        assert_eq!(s.dt, Some(0.001));
        assert_eq!(s.cadence, Some(100));
        assert!((s.potential_at(0.0) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn defaults_fill_missing_keys() {
        let s = Scenario::parse("duration = 10").unwrap();
        assert_eq!(s.nodes, 1024);
        assert_eq!(s.potential_at(3.0), 0.0);
        assert_eq!(s.dt, None);
    }

    #[test]
    fn rejects_unknown_repeated_and_malformed() {
        for text in [
            "duration = 1\ncolour = red",
            "duration = 1\nduration = 2",
            "duration",
            "duration = soon",
            "beta = 0.5",
            "duration = 1\nmodel = dirac",
            "duration = 1\npotential = wall",
            "duration = -1",
            "duration = 1\nnodes = 4",
            "duration = 1\ncadence = 0",
        ] {
            let err = Scenario::parse(text).unwrap_err();
            assert_eq!(err.code(), 2, "{text}");
        }
    }
}
