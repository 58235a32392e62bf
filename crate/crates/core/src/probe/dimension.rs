//! Ball-volume scaling exponent from horizontal reachability.

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::flow::{integrate_controls, random_controls, FloatFrame, FloatPoly};
use super::{least_squares, ProbeConfig, ProbeKind, ProbeReport};
use crate::brackets::Frame;
use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::nilpotent::PrivilegedChart;

/// Coordinates in which the reachable set is measured.
#[derive(Clone, Copy, Debug)]
pub enum ProbeCoordinates<'a> {
    Chart(&'a PrivilegedChart),
    /// `y − p` with every weight 1; a calibration mode.
    Raw,
}

/// Axes whose extent at the largest scale is below this fraction of the largest extent are dropped.
const ZERO_EXTENT: f64 = 1e-9;

pub(crate) fn to_f64_point(pt: &[Rat]) -> Vec<f64> {
    pt.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Endpoints of `config.samples` random unit-speed controls of length `eps` from `pt`.
pub fn reach_cloud(frame: &Frame, pt: &[Rat], eps: f64, config: &ProbeConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    if !(0.0..=config.rho).contains(&eps) {
        return Err(Error::InvalidInput(format!("scale {eps} must lie in [0, rho = {}]", config.rho)));
    }
    let ff = FloatFrame::from_frame(frame);
    cloud(&ff, &to_f64_point(pt), eps, config)
}

fn cloud(ff: &FloatFrame, start: &[f64], eps: f64, config: &ProbeConfig) -> Result<Vec<Vec<f64>>> {
    if eps == 0.0 {
        return Ok(vec![start.to_vec()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.samples)
        .map(|_| {
            let segs = random_controls(&mut rng, ff.rank(), eps, config.pieces);
            integrate_controls(ff, start, &segs, config.step)
        })
        .collect()
}

/// Fits `log Π_j extent_j(ε)` against `log ε`; the slope estimates the local homogeneous dimension.
pub fn dimension_probe(
    frame: &Frame,
    pt: &[Rat],
    coords: ProbeCoordinates<'_>,
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    config.validate()?;
    let n = frame.dim();
    if config.epsilons.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} scales given, at least 3 are needed",
            config.epsilons.len()
        )));
    }
    if let Some(&e) = config.epsilons.iter().find(|&&e| e > config.rho) {
        return Err(Error::InvalidInput(format!("scale {e} exceeds rho = {}", config.rho)));
    }
    let (inverse, weights): (Option<Vec<FloatPoly>>, Vec<u32>) = match coords {
        ProbeCoordinates::Chart(c) => {
            if c.dim() != n || c.center.as_slice() != pt {
                return Err(Error::InvalidInput("chart is not centered at the probed point".into()));
            }
            (Some(c.inverse.iter().map(FloatPoly::from_poly).collect()), c.weights.clone())
        }
        ProbeCoordinates::Raw => (None, vec![1; n]),
    };
    let ff = FloatFrame::from_frame(frame);
    let start = to_f64_point(pt);
    let to_coords = |y: &[f64]| -> Vec<f64> {
        let u: Vec<f64> = y.iter().zip(&start).map(|(a, b)| a - b).collect();
        match &inverse {
            Some(inv) => inv.iter().map(|z| z.eval(&u)).collect(),
            None => u,
        }
    };

    let mut extents = Vec::with_capacity(config.epsilons.len());
    for &eps in &config.epsilons {
        let mut ext = vec![0.0f64; n];
        for y in cloud(&ff, &start, eps, config)? {
            for (e, z) in ext.iter_mut().zip(to_coords(&y)) {
                *e = e.max(z.abs());
            }
        }
        extents.push(ext);
    }

    let largest = config
        .epsilons
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let top = extents[largest].iter().cloned().fold(0.0, f64::max);
    let kept: Vec<usize> = (0..n).filter(|&j| extents[largest][j] > ZERO_EXTENT * top).collect();
    let excluded: Vec<usize> = (0..n).filter(|j| !kept.contains(j)).collect();
    if kept.is_empty() {
        return Err(Error::DegenerateFit("the reachable set has zero extent on every axis".into()));
    }

    let mut values = Vec::with_capacity(extents.len());
    for (ext, &eps) in extents.iter().zip(&config.epsilons) {
        let log_vol: f64 = kept.iter().map(|&j| ext[j].ln()).sum();
        if !log_vol.is_finite() {
            return Err(Error::DegenerateFit(format!("zero extent on a kept axis at scale {eps}")));
        }
        values.push(log_vol.exp());
    }
    let xs: Vec<f64> = config.epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let fit = least_squares(&xs, &ys)?;

    let box_constants = extents
        .iter()
        .zip(&config.epsilons)
        .map(|(ext, &eps)| ext.iter().zip(&weights).map(|(e, &w)| e / eps.powi(w as i32)).collect())
        .collect();

    Ok(ProbeReport {
        kind: ProbeKind::Dimension,
        exponent: Some(fit.slope),
        stderr: Some(fit.stderr),
        scales: config.epsilons.clone(),
        values,
        weights,
        box_constants,
        excluded_axes: excluded,
        classification: None,
        diagnostics: None,
        samples: config.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::VecField;
    use crate::flags::Structure;
    use crate::nilpotent::build_chart;
    use crate::probe::flow::Segment;
    use crate::testframes::{martinet, pt};

    fn cfg(samples: usize) -> ProbeConfig {
        ProbeConfig { samples, ..ProbeConfig::default() }
    }

    #[test]
    fn constant_controls_follow_closed_form_flows() {
        let ff = FloatFrame::from_frame(&martinet());
        let origin = [0.0; 3];
        for (u, want) in [([1.0, 0.0], [1.0, 0.0, 0.0]), ([0.0, 1.0], [0.0, 1.0, 0.0])] {
            let seg = Segment { duration: 1.0, control: u.to_vec() };
            let y = integrate_controls(&ff, &origin, &[seg], 0.01).unwrap();
            for (a, b) in y.iter().zip(want) {
                assert!((a - b).abs() < 1e-12, "{y:?}");
            }
        }
        // X2 from (1,0,0): x3 gains t/2.
        let seg = Segment { duration: 1.0, control: vec![0.0, 1.0] };
        let y = integrate_controls(&ff, &[1.0, 0.0, 0.0], &[seg], 0.01).unwrap();
        assert!((y[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_scale_is_the_point() {
        let c = reach_cloud(&martinet(), &pt(&[1, 0, 0]), 0.0, &cfg(50)).unwrap();
        assert_eq!(c, vec![vec![1.0, 0.0, 0.0]]);
    }

    #[test]
    fn endpoints_stay_in_the_euclidean_envelope() {
        // |X1|, |X2| ≤ sqrt(1 + 1/4) near the origin, so displacement ≤ 1.2 ε.
        let eps = 0.1;
        for y in reach_cloud(&martinet(), &pt(&[0, 0, 0]), eps, &cfg(200)).unwrap() {
            assert!(y.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1.2 * eps);
        }
    }

    #[test]
    fn raw_calibration_recovers_span_dimension() {
        let f = Frame::new(vec![VecField::coordinate(0, 3), VecField::coordinate(1, 3)]).unwrap();
        let r = dimension_probe(&f, &pt(&[0, 0, 0]), ProbeCoordinates::Raw, &cfg(500)).unwrap();
        assert_eq!(r.excluded_axes, vec![2]);
        assert!((r.exponent.unwrap() - 2.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn martinet_dimensions() {
        let mut s = Structure::new(&martinet(), 10);
        for (p, want) in [([1, 0, 0], 4.0), ([0, 0, 0], 5.0)] {
            let p = pt(&p);
            let chart = build_chart(&mut s, &p, None).unwrap();
            let r = dimension_probe(&martinet(), &p, ProbeCoordinates::Chart(&chart), &cfg(2000)).unwrap();
            assert!((r.exponent.unwrap() - want).abs() < 0.5, "{r:?}");
        }
    }

    #[test]
    fn box_constants_are_stable() {
        let mut s = Structure::new(&martinet(), 10);
        let p = pt(&[1, 0, 0]);
        let chart = build_chart(&mut s, &p, None).unwrap();
        let r = dimension_probe(&martinet(), &p, ProbeCoordinates::Chart(&chart), &cfg(2000)).unwrap();
        for j in 0..3 {
            let cs: Vec<f64> = r.box_constants.iter().map(|c| c[j]).collect();
            let (lo, hi) = cs.iter().fold((f64::MAX, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
            assert!(hi / lo < 2.0, "axis {j}: {cs:?}");
        }
    }

    #[test]
    fn degenerate_grid_is_rejected() {
        let c = ProbeConfig { epsilons: vec![0.1, 0.05], ..cfg(10) };
        assert!(matches!(
            dimension_probe(&martinet(), &pt(&[1, 0, 0]), ProbeCoordinates::Raw, &c),
            Err(Error::DegenerateFit(_))
        ));
    }
}
