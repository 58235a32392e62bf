//! Float-compiled frames and horizontal flows.

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::brackets::Frame;
use crate::error::{Error, Result};
use crate::exactalg::Poly;

/// A polynomial with `f64` coefficients and sparse exponent lists.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl FloatPoly {
    pub fn from_poly(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let coeff = c.to_f64().unwrap_or(f64::NAN);
                let exps = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as i32))
                    .collect();
                (coeff, exps)
            })
            .collect();
        FloatPoly { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| exps.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }

    pub fn uses_var(&self, axis: usize) -> bool {
        self.terms.iter().any(|(_, e)| e.iter().any(|&(i, _)| i == axis))
    }
}

#[derive(Clone, Debug)]
pub struct FloatFrame {
    fields: Vec<Vec<FloatPoly>>,
    dim: usize,
}

impl FloatFrame {
    pub fn from_frame(frame: &Frame) -> Self {
        let fields = frame
            .fields()
            .iter()
            .map(|f| f.comps().iter().map(FloatPoly::from_poly).collect())
            .collect();
        FloatFrame { fields, dim: frame.dim() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    /// `Σ u_i X_i(x)` written into `out`.
    fn velocity(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (field, &ui) in self.fields.iter().zip(u) {
            if ui == 0.0 {
                continue;
            }
            for (o, comp) in out.iter_mut().zip(field) {
                *o += ui * comp.eval(x);
            }
        }
    }
}

/// One constant-control segment: duration and control vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub control: Vec<f64>,
}

/// Endpoint of the piecewise-constant control from `start`, by RK4 with step at most `step`.
pub fn integrate_controls(frame: &FloatFrame, start: &[f64], segments: &[Segment], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("flow step must be positive, got {step}")));
    }
    let n = frame.dim();
    let mut x = start.to_vec();
    let mut k = vec![vec![0.0; n]; 4];
    let mut tmp = vec![0.0; n];
    for seg in segments {
        if seg.control.len() != frame.rank() {
            return Err(Error::InvalidInput(format!(
                "control has {} entries, frame has {} fields",
                seg.control.len(),
                frame.rank()
            )));
        }
        if seg.duration <= 0.0 {
            continue;
        }
        let steps = (seg.duration / step).ceil().max(1.0) as usize;
        let h = seg.duration / steps as f64;
        for _ in 0..steps {
            frame.velocity(&x, &seg.control, &mut k[0]);
            for (stage, scale) in [(1, 0.5), (2, 0.5), (3, 1.0)] {
                for j in 0..n {
                    tmp[j] = x[j] + scale * h * k[stage - 1][j];
                }
                let (_, rest) = k.split_at_mut(stage);
                frame.velocity(&tmp, &seg.control, &mut rest[0]);
            }
            for j in 0..n {
                x[j] += h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]);
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integrator(format!("flow blew up after {} steps of size {h}", steps)));
        }
    }
    Ok(x)
}

/// Random unit-speed control of total length `eps` with `pieces` constant pieces.
pub fn random_controls(rng: &mut ChaCha8Rng, m: usize, eps: f64, pieces: usize) -> Vec<Segment> {
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.insert(0, 0.0);
    cuts.push(1.0);
    cuts.windows(2)
        .map(|w| {
            let mut u: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                u.iter_mut().for_each(|v| *v /= norm);
            } else {
                u[0] = 1.0;
            }
            Segment { duration: (w[1] - w[0]) * eps, control: u }
        })
        .collect()
}
