//! Data behind the four figures: boosted packet profiles at the four panel
//! speeds and the 1S energy/ratio scans.

use antiratio::coulomb::{bound_scan, critical_row, ScanRow};
use antiratio::packets::{
    default_half_width, synthesize_packet, ComponentField, PacketSpec, DEFAULT_SIGMA, FIGURE_BETAS,
    PROFILE_NODES,
};
use antiratio::quad::Grid1D;
use antiratio::{Beta, ModelKind};
use rayon::prelude::*;

use crate::args::FigureId;
use crate::error::CliError;
use crate::output::csv;

pub const DEFAULT_SCAN_SAMPLES: usize = 400;
pub const MAX_SAMPLES: usize = 1 << 20;
pub const PANEL_LABELS: [char; 4] = ['a', 'b', 'c', 'd'];
pub const PROFILE_HEADER: [&str; 4] = ["xi", "abs_theta_sq", "abs_chi_sq", "rho"];

pub fn check_samples(samples: usize, min: usize) -> Result<usize, CliError> {
    if samples < min || samples > MAX_SAMPLES {
        return Err(CliError::Domain(format!(
            "samples = {samples} is outside [{min}, {MAX_SAMPLES}]"
        )));
    }
    Ok(samples)
}

pub fn packet_spec(model: ModelKind, beta: f64, sigma: f64, nodes: usize) -> antiratio::Result<PacketSpec> {
    let beta = Beta::new(beta)?;
    let mut spec = PacketSpec::with_default_grid(model, beta, sigma)?;
    if nodes != PROFILE_NODES {
        spec.zgrid = Grid1D::symmetric(default_half_width(beta, sigma), nodes)?;
    }
    Ok(spec)
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub label: char,
    pub beta: f64,
    pub field: ComponentField,
}

impl Panel {
    pub fn file_name(&self, figure: &str) -> String {
        format!("{figure}_{}.csv", self.label)
    }
}

/// The four panels, synthesized in parallel and returned in panel order.
pub fn packet_panels(model: ModelKind, sigma: f64, nodes: usize) -> antiratio::Result<Vec<Panel>> {
    PANEL_LABELS
        .par_iter()
        .zip(FIGURE_BETAS.par_iter())
        .map(|(&label, &beta)| {
            let field = synthesize_packet(&packet_spec(model, beta, sigma, nodes)?)?;
            Ok(Panel { label, beta, field })
        })
        .collect()
}

pub fn profile_csv(field: &ComponentField) -> String {
    let theta = field.abs_theta_sq();
    let chi = field.abs_chi_sq();
    let rho = field.rho();
    csv(
        &PROFILE_HEADER,
        field
            .zgrid()
            .coords()
            .enumerate()
            .map(|(i, xi)| vec![xi, theta[i], chi[i], rho[i]]),
    )
}

pub fn scan_header(model: ModelKind) -> &'static [&'static str] {
    match model {
        ModelKind::KleinGordon => &["z_over_68p5", "energy_ratio", "R"],
        ModelKind::Dirac => &["z_over_137", "energy", "energy_sommerfeld", "R"],
    }
}

pub fn scan_csv(model: ModelKind, rows: &[ScanRow]) -> String {
    csv(
        scan_header(model),
        rows.iter().map(|r| match r.energy_sommerfeld {
            Some(s) => vec![r.axis, r.energy, s, r.ratio],
            None => vec![r.axis, r.energy, r.ratio],
        }),
    )
}

/// Scan over the open interval followed by the limiting row at the critical coupling.
pub fn figure_scan(model: ModelKind, samples: usize) -> antiratio::Result<Vec<ScanRow>> {
    let mut rows = bound_scan(model, samples)?;
    rows.push(critical_row(model));
    Ok(rows)
}

/// Resolved figure settings, echoed into the manifest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePlan {
    pub figure: FigureId,
    pub model: ModelKind,
    pub sigma: Option<f64>,
    pub samples: usize,
}

impl FigurePlan {
    pub fn new(figure: FigureId, sigma: Option<f64>, samples: Option<usize>) -> Result<Self, CliError> {
        let (model, packets) = match figure {
            FigureId::Fig1 => (ModelKind::KleinGordon, true),
            FigureId::Fig2 => (ModelKind::KleinGordon, false),
            FigureId::Fig3 => (ModelKind::Dirac, true),
            FigureId::Fig4 => (ModelKind::Dirac, false),
        };
        if packets {
            let samples = check_samples(samples.unwrap_or(PROFILE_NODES), 5)?;
            Ok(Self {
                figure,
                model,
                sigma: Some(sigma.unwrap_or(DEFAULT_SIGMA)),
                samples,
            })
        } else {
            if sigma.is_some() {
                return Err(CliError::Domain(format!("--sigma does not apply to {}", figure.name())));
            }
            let samples = check_samples(samples.unwrap_or(DEFAULT_SCAN_SAMPLES), 2)?;
            Ok(Self {
                figure,
                model,
                sigma: None,
                samples,
            })
        }
    }

    /// File names and contents, in output order.
    pub fn render(&self) -> antiratio::Result<Vec<(String, String)>> {
        let name = self.figure.name();
        match self.sigma {
            Some(sigma) => Ok(packet_panels(self.model, sigma, self.samples)?
                .iter()
                .map(|p| (p.file_name(name), profile_csv(&p.field)))
                .collect()),
            None => {
                let rows = figure_scan(self.model, self.samples)?;
                Ok(vec![(format!("{name}.csv"), scan_csv(self.model, &rows))])
            }
        }
    }

    pub fn parameters(&self) -> serde_json::Value {
        serde_json::json!({
            "figure": self.figure.name(),
            "model": match self.model { ModelKind::KleinGordon => "kg", ModelKind::Dirac => "dirac" },
            "sigma": self.sigma,
            "samples": self.samples,
            "betas": if self.sigma.is_some() { Some(FIGURE_BETAS) } else { None },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_columns_match_the_header() {
        let rows = bound_scan(ModelKind::Dirac, 5).unwrap();
        let text = scan_csv(ModelKind::Dirac, &rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("z_over_137,energy,energy_sommerfeld,R"));
        assert!(lines.all(|l| l.split(',').count() == 4));
    }

    #[test]
    fn panels_come_back_in_order() {
        let panels = packet_panels(ModelKind::KleinGordon, DEFAULT_SIGMA, 257).unwrap();
        let betas: Vec<f64> = panels.iter().map(|p| p.beta).collect();
        assert_eq!(betas, FIGURE_BETAS);
        assert_eq!(panels[2].file_name("fig1"), "fig1_c.csv");
    }

    #[test]
    fn plan_rejects_misplaced_overrides() {
        assert!(FigurePlan::new(FigureId::Fig2, Some(1e-4), None).is_err());
        assert!(FigurePlan::new(FigureId::Fig1, None, Some(1)).is_err());
        let plan = FigurePlan::new(FigureId::Fig3, None, None).unwrap();
        assert_eq!(plan.samples, PROFILE_NODES);
        assert_eq!(plan.sigma, Some(DEFAULT_SIGMA));
    }
}
