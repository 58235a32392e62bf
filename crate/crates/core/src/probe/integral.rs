//! The tube-excised integral of `1/ν` and its growth classification.

use std::cell::{Cell, RefCell};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use super::dimension::to_f64_point;
use super::flow::FloatPoly;
use super::{least_squares, Divergence, FitDiagnostics, ProbeConfig, ProbeKind, ProbeReport};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat};

const MAX_DEPTH: u32 = 40;
const BOUNDED_TOL: f64 = 1e-3;

struct Quadrature {
    rule: GaussLegendre,
    tol: f64,
    budget: u64,
    evals: Cell<u64>,
    failure: RefCell<Option<Error>>,
}

impl Quadrature {
    fn failed(&self) -> bool {
        self.failure.borrow().is_some()
    }

    fn fail(&self, e: Error) {
        self.failure.borrow_mut().get_or_insert(e);
    }

    /// Bisects until two-panel and one-panel estimates agree to `floor`.
    fn adaptive(&self, a: f64, b: f64, f: &mut dyn FnMut(f64) -> f64, whole: f64, floor: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let l = self.rule.integrate(a, m, &mut *f);
        let r = self.rule.integrate(m, b, &mut *f);
        let sum = l + r;
        if self.failed() || depth == 0 || (sum - whole).abs() <= floor.max(self.tol * sum.abs()) {
            return sum;
        }
        self.adaptive(a, m, f, l, floor, depth - 1) + self.adaptive(m, b, f, r, floor, depth - 1)
    }

    /// Integral over `[a, b]` split at the interior `breaks`.
    fn integrate(&self, a: f64, b: f64, breaks: &[f64], f: &mut dyn FnMut(f64) -> f64) -> f64 {
        let mut pts: Vec<f64> = breaks.iter().cloned().filter(|&t| t > a && t < b).collect();
        pts.push(a);
        pts.push(b);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let wholes: Vec<f64> = pts.windows(2).map(|w| self.rule.integrate(w[0], w[1], &mut *f)).collect();
        let floor = self.tol * wholes.iter().map(|v| v.abs()).sum::<f64>();
        pts.windows(2)
            .zip(wholes)
            .map(|(w, whole)| self.adaptive(w[0], w[1], f, whole, floor, MAX_DEPTH))
            .sum()
    }
}

struct Integrand<'a> {
    nus: &'a [FloatPoly],
    cutout: &'a [FloatPoly],
    quad: &'a Quadrature,
    delta: f64,
}

impl Integrand<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let n = self.quad.evals.get() + 1;
        self.quad.evals.set(n);
        if n > self.quad.budget {
            self.quad.fail(Error::IntegrationBudget(format!(
                "more than {} integrand evaluations at one tube width",
                self.quad.budget
            )));
            return 0.0;
        }
        if self.cutout.iter().all(|g| g.eval(x).abs() < self.delta) {
            return 0.0;
        }
        let nu = self.nus.iter().map(|v| v.eval(x).abs()).fold(0.0, f64::max);
        if nu == 0.0 {
            self.quad.fail(Error::Integrator(format!("nu vanishes outside the tube at {x:?}")));
            return 0.0;
        }
        1.0 / nu
    }
}

fn nested(
    f: &Integrand<'_>,
    vars: &[usize],
    level: usize,
    x: &mut Vec<f64>,
    center: &[f64],
    rho: f64,
) -> f64 {
    let j = vars[level];
    let (c, d) = (center[j], f.delta);
    let breaks = [c - d, c, c + d];
    let mut g = |t: f64| {
        x[j] = t;
        if level + 1 == vars.len() {
            f.eval(x)
        } else {
            let mut inner = x.clone();
            nested(f, vars, level + 1, &mut inner, center, rho)
        }
    };
    f.quad.integrate(c - rho, c + rho, &breaks, &mut g)
}

/// `I(δ) = ∫ 1/ν` over the box `[p ± ρ]ⁿ` minus `{max_k |g_k| < δ}`, for each configured δ.
pub fn integrate_inverse_nu(volumes: &[Poly], cutout: &[Poly], pt: &[Rat], config: &ProbeConfig) -> Result<Vec<f64>> {
    config.validate()?;
    if volumes.is_empty() {
        return Err(Error::InvalidInput("no volume polynomials to integrate".into()));
    }
    if cutout.is_empty() {
        return Err(Error::InvalidInput("the singular set needs a cutout description".into()));
    }
    let n = pt.len();
    if let Some(p) = volumes.iter().chain(cutout).find(|p| p.nvars() != n || p.has_params()) {
        return Err(Error::InvalidInput(format!(
            "polynomial {} does not live on the {n}-dimensional ambient space",
            p.to_string_with(&Poly::default_names(p.nvars(), p.nparams()))
        )));
    }
    let nus: Vec<FloatPoly> = volumes.iter().map(FloatPoly::from_poly).collect();
    let gs: Vec<FloatPoly> = cutout.iter().map(FloatPoly::from_poly).collect();
    let vars: Vec<usize> = (0..n).filter(|&j| nus.iter().chain(&gs).any(|p| p.uses_var(j))).collect();
    let free = (n - vars.len()) as i32;
    let center = to_f64_point(pt);
    let rho = config.rho;

    let order = NonZeroUsize::new(config.quad_order)
        .ok_or_else(|| Error::InvalidInput("quadrature order must be positive".into()))?;
    let quad = Quadrature {
        rule: GaussLegendre::new(order),
        tol: config.quad_tol,
        budget: config.eval_budget,
        evals: Cell::new(0),
        failure: RefCell::new(None),
    };
    let mut out = Vec::with_capacity(config.deltas.len());
    for &delta in &config.deltas {
        quad.evals.set(0);
        let f = Integrand { nus: &nus, cutout: &gs, quad: &quad, delta };
        let value = if vars.is_empty() {
            f.eval(&center)
        } else {
            nested(&f, &vars, 0, &mut center.clone(), &center, rho)
        };
        if let Some(e) = quad.failure.borrow_mut().take() {
            return Err(e);
        }
        out.push(value * (2.0 * rho).powi(free));
    }
    Ok(out)
}

/// Power-law exponents tried by the `a + b δ^{−c}` model.
fn power_grid() -> impl Iterator<Item = f64> {
    (5..=80).map(|i| i as f64 * 0.05)
}

/// Bounded, logarithmic or power growth of `I(δ)` as `δ → 0`.
pub fn classify(deltas: &[f64], values: &[f64]) -> Result<(Divergence, FitDiagnostics)> {
    let k = values.len();
    if k < 3 || deltas.len() != k {
        return Err(Error::DegenerateFit(format!("{k} integral values, at least 3 are needed")));
    }
    let last = values[k - 1];
    let increment = (last - values[k - 2]).abs() / last.abs().max(f64::MIN_POSITIVE);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

    let logs: Vec<f64> = deltas.iter().map(|d| (1.0 / d).ln()).collect();
    let log_fit = least_squares(&logs, values)?;
    let log_residual = log_fit.rms_residual / scale;
    let (power_exponent, power_fit) = power_grid()
        .map(|c| {
            let xs: Vec<f64> = deltas.iter().map(|d| d.powf(-c)).collect();
            (c, least_squares(&xs, values))
        })
        .filter_map(|(c, r)| r.ok().map(|r| (c, r)))
        .min_by(|a, b| a.1.rms_residual.total_cmp(&b.1.rms_residual))
        .ok_or_else(|| Error::DegenerateFit("power model could not be fitted".into()))?;
    let power_residual = power_fit.rms_residual / scale;

    let diagnostics = FitDiagnostics {
        last_increment: increment,
        log_slope: log_fit.slope,
        log_residual,
        power_exponent,
        power_coefficient: power_fit.slope,
        power_residual,
    };
    let class = if increment < BOUNDED_TOL {
        Divergence::Bounded
    } else if log_residual <= power_residual {
        Divergence::LogGrowth
    } else {
        Divergence::PowerGrowth { exponent: power_exponent }
    };
    Ok((class, diagnostics))
}

/// Integrates and classifies; the report value series is `I(δ_k)`.
pub fn finiteness_from_volumes(
    volumes: &[Poly],
    cutout: &[Poly],
    pt: &[Rat],
    config: &ProbeConfig,
) -> Result<ProbeReport> {
    let values = integrate_inverse_nu(volumes, cutout, pt, config)?;
    let (class, diag) = classify(&config.deltas, &values)?;
    let exponent = match class {
        Divergence::PowerGrowth { exponent } => Some(exponent),
        Divergence::Bounded | Divergence::LogGrowth => None,
    };
    Ok(ProbeReport {
        kind: ProbeKind::Finiteness,
        exponent,
        stderr: None,
        scales: config.deltas.clone(),
        values,
        weights: Vec::new(),
        box_constants: Vec::new(),
        excluded_axes: Vec::new(),
        classification: Some(class),
        diagnostics: Some(diag),
        samples: 0,
    })
}
