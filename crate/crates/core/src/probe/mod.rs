//! Floating-point cross-checks. Nothing here feeds back into exact verdicts.

mod dimension;
mod flow;
mod integral;

use std::io::Write;

use serde::Serialize;

pub use dimension::{dimension_probe, reach_cloud, ProbeCoordinates};
pub use flow::{integrate_controls, random_controls, FloatFrame, FloatPoly, Segment};
pub use integral::{classify, finiteness_from_volumes, integrate_inverse_nu};

use crate::brackets::Frame;
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat};
use crate::orders::{distinct_volumes, volume_families, VolumeForm};
use crate::verdict::Finiteness;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeConfig {
    pub rho: f64,
    /// Reachability scales, each at most `rho`.
    pub epsilons: Vec<f64>,
    pub samples: usize,
    /// Constant pieces per random control.
    pub pieces: usize,
    /// Gauss–Legendre nodes per panel.
    pub quad_order: usize,
    /// Relative tolerance of each adaptive one-dimensional quadrature.
    pub quad_tol: f64,
    /// Tube widths, strictly decreasing.
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub step: f64,
    /// Integrand evaluations allowed per tube width.
    pub eval_budget: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        let rho = 1.0;
        ProbeConfig {
            rho,
            epsilons: (0..5).map(|k| 0.32 / 2f64.powi(k)).collect(),
            samples: 10_000,
            pieces: 4,
            quad_order: 10,
            quad_tol: 1e-9,
            deltas: (0..7).map(|k| rho * 10f64.powf(-(1.0 + 0.5 * k as f64))).collect(),
            seed: 7,
            step: 0.01,
            eval_budget: 50_000_000,
        }
    }
}

impl ProbeConfig {
    /// Default tube widths rescaled to `rho`.
    pub fn with_rho(rho: f64) -> Self {
        let d = ProbeConfig::default();
        ProbeConfig {
            rho,
            epsilons: d.epsilons.iter().map(|e| e * rho).collect(),
            deltas: d.deltas.iter().map(|e| e * rho).collect(),
            ..d
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
            }
        };
        positive("rho", self.rho)?;
        positive("step", self.step)?;
        positive("quadrature tolerance", self.quad_tol)?;
        for &e in &self.epsilons {
            positive("epsilon", e)?;
        }
        for &d in &self.deltas {
            positive("delta", d)?;
        }
        if self.samples == 0 || self.pieces == 0 || self.quad_order == 0 || self.eval_budget == 0 {
            return Err(Error::InvalidInput(
                "samples, pieces, quadrature order and evaluation budget must be positive".into(),
            ));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInput("tube widths must be strictly decreasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Dimension,
    Finiteness,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "growth")]
pub enum Divergence {
    Bounded,
    LogGrowth,
    PowerGrowth { exponent: f64 },
}

impl Divergence {
    /// The exact verdict this behavior of the integral is consistent with.
    pub fn consistent_with(&self) -> Finiteness {
        match self {
            Divergence::Bounded => Finiteness::Finite,
            Divergence::LogGrowth | Divergence::PowerGrowth { .. } => Finiteness::Infinite,
        }
    }
}

impl std::fmt::Display for Divergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Divergence::Bounded => f.write_str("bounded"),
            Divergence::LogGrowth => f.write_str("log-growth"),
            Divergence::PowerGrowth { exponent } => write!(f, "power-growth (c = {exponent:.2})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitDiagnostics {
    /// `|I(δ_K) − I(δ_{K−1})| / |I(δ_K)|`.
    pub last_increment: f64,
    pub log_slope: f64,
    /// RMS residuals, relative to `max |I|`.
    pub log_residual: f64,
    pub power_exponent: f64,
    pub power_coefficient: f64,
    pub power_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    /// Dimension slope, or the power `c` of a power-growth integral.
    pub exponent: Option<f64>,
    pub stderr: Option<f64>,
    /// `ε_k` for dimension probes, `δ_k` for finiteness probes.
    pub scales: Vec<f64>,
    /// Weighted box volume `Π extent_j(ε)` or the integral `I(δ)`.
    pub values: Vec<f64>,
    pub weights: Vec<u32>,
    /// `extent_j(ε) / ε^{w_j}` per scale.
    pub box_constants: Vec<Vec<f64>>,
    pub excluded_axes: Vec<usize>,
    pub classification: Option<Divergence>,
    pub diagnostics: Option<FitDiagnostics>,
    pub samples: usize,
}

impl ProbeReport {
    /// What the probe measures, for reports.
    pub fn target(&self) -> &'static str {
        match self.kind {
            ProbeKind::Dimension => "scaling of the weighted extent of the reachable set",
            ProbeKind::Finiteness => "integral of 1/nu over the box minus tubes; not the measure itself",
        }
    }

    /// Writes `(scale, value)` rows as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header = match self.kind {
            ProbeKind::Dimension => ["epsilon", "volume"],
            ProbeKind::Finiteness => ["delta", "integral"],
        };
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(header).map_err(io)?;
        for (s, v) in self.scales.iter().zip(&self.values) {
            w.write_record([s.to_string(), v.to_string()]).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Which `ν_q` to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuSpec {
    pub q_ref: usize,
    pub bracket_len: usize,
    pub family_budget: usize,
}

/// Classifies `I(δ) = ∫ 1/ν_q` over the box around `pt` minus tubes around `{g = 0}`.
pub fn finiteness_probe(
    frame: &Frame,
    vol: &VolumeForm,
    cutout: &[Poly],
    pt: &[Rat],
    nu: NuSpec,
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    let families = volume_families(frame, vol, nu.q_ref, nu.bracket_len, nu.family_budget)?;
    let volumes = distinct_volumes(&families);
    if volumes.is_empty() {
        return Err(Error::AllFamiliesVanish { q_ref: nu.q_ref });
    }
    finiteness_from_volumes(&volumes, cutout, pt, config)
}

struct Fit {
    slope: f64,
    stderr: f64,
    rms_residual: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    let k = xs.len();
    if k < 3 || ys.len() != k {
        return Err(Error::DegenerateFit(format!("{k} points, at least 3 are needed")));
    }
    let kf = k as f64;
    let mx = xs.iter().sum::<f64>() / kf;
    let my = ys.iter().sum::<f64>() / kf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) || !sxx.is_finite() {
        return Err(Error::DegenerateFit("abscissae do not vary".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    Ok(Fit {
        slope,
        stderr: (ssr / (kf - 2.0) / sxx).sqrt(),
        rms_residual: (ssr / kf).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;
    use crate::testframes::{example2, example3, martinet};

    fn probe(frame: &Frame, cutout: &[usize], q_ref: usize, len: usize) -> ProbeReport {
        let n = frame.dim();
        let gs: Vec<Poly> = cutout.iter().map(|&j| Poly::var(j, n)).collect();
        let origin = vec![int(0); n];
        let nu = NuSpec { q_ref, bracket_len: len, family_budget: 200_000 };
        finiteness_probe(frame, &VolumeForm::canonical(n), &gs, &origin, nu, &ProbeConfig::default()).unwrap()
    }

    #[test]
    fn fixture_integrals_classify() {
        let m = probe(&martinet(), &[0], 4, 3);
        assert_eq!(m.classification, Some(Divergence::LogGrowth), "{m:?}");
        let e2 = probe(&example2(), &[0, 1], 5, 3);
        assert_eq!(e2.classification, Some(Divergence::Bounded), "{e2:?}");
        let e3 = probe(&example3(3), &[0], 7, 4);
        match e3.classification {
            Some(Divergence::PowerGrowth { exponent }) => assert!((exponent - 1.0).abs() < 0.3, "{e3:?}"),
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn martinet_integral_matches_log_oracle() {
        // ν = |x1| over [-1,1]³: I(δ) = 4 · 2 log(1/δ).
        let m = probe(&martinet(), &[0], 4, 3);
        for (v, d) in m.values.iter().zip(&m.scales) {
            assert!((v - 8.0 * (1.0 / d).ln()).abs() < 1e-5, "{v} at {d}");
        }
    }

    #[test]
    fn config_validation() {
        let bad = ProbeConfig { deltas: vec![0.1, 0.1, 0.01], ..ProbeConfig::default() };
        assert!(bad.validate().is_err());
        assert!(ProbeConfig { rho: 0.0, ..ProbeConfig::default() }.validate().is_err());
        assert!(ProbeConfig::default().validate().is_ok());
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let m = probe(&martinet(), &[0], 4, 3);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("delta,integral\n"));
        assert_eq!(s.lines().count(), 1 + m.scales.len());
    }
}
