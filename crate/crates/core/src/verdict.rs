//! Hausdorff dimension of small balls and the finiteness decision for
//! their Hausdorff volume at typical singular points.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::flags::{
    sample_grid, EquiregCheck, GenericGrowth, GrowthProfile, PointClass, RestrictedProfile, SingularSetSurrogate,
    Structure, DEFAULT_STEP_CAP,
};
use crate::orders::{sigma_bounds, Order, OrderCaps, OrderResult, VolumeForm, DEFAULT_FAMILY_BUDGET};
use crate::submanifold::SubmanifoldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Finiteness {
    Finite,
    Infinite,
    Inconclusive,
}

impl fmt::Display for Finiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Finiteness::Finite => "Finite",
            Finiteness::Infinite => "Infinite",
            Finiteness::Inconclusive => "Inconclusive",
        })
    }
}

/// The rule that decided a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    RegularPoint { q: usize },
    /// `Q_reg < Q_N`: the singular stratum carries the dimension.
    StratumDominates { q_reg: usize, q_n: usize },
    /// `0 ≤ Q_reg − Q_N < r_notN`; `σ` is shown against `Q(p) − Q_reg` when defined.
    DimensionGap { q_reg: usize, q_n: usize, r_not_n: usize, q_p: usize, sigma: Option<usize> },
    /// `σ` compared with `Q(p) − Q_N − r_notN`.
    Sigma { sigma: usize, bound: i64 },
    /// `σ₊ ≤ bound` gives finiteness, `σ₋ > bound` infiniteness.
    SigmaBounds { sigma_minus: Order, sigma_plus: Order, bound: i64 },
    /// Sampled check that singular points near `p` lie on `N` failed.
    SingularSetEscapes { witness: Vec<Rat> },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::RegularPoint { q } => write!(f, "regular point, Q = {q}"),
            Certificate::StratumDominates { q_reg, q_n } => {
                write!(f, "singular stratum dominates, Q_reg = {q_reg} < Q_N = {q_n}")
            }
            Certificate::DimensionGap { q_reg, q_n, r_not_n, q_p, sigma } => {
                write!(f, "dimension gap, 0 <= Q_reg - Q_N = {} < r_notN = {r_not_n}", q_reg - q_n)?;
                if let Some(s) = sigma {
                    let gap = q_p.saturating_sub(*q_reg);
                    let rel = if *s > gap { ">" } else { "<=" };
                    write!(f, "; sigma = {s} {rel} Q(p) - Q_reg = {gap}")?;
                }
                Ok(())
            }
            Certificate::Sigma { sigma, bound } => {
                let rel = if (*sigma as i64) <= *bound { "<=" } else { ">" };
                write!(f, "sigma criterion, {sigma} {rel} {bound}")
            }
            Certificate::SigmaBounds {
                sigma_minus,
                sigma_plus,
                bound,
            } => write!(
                f,
                "sigma bounds, sigma- = {sigma_minus}, sigma+ = {sigma_plus}, bound = {bound}"
            ),
            Certificate::SingularSetEscapes { witness } => {
                let parts: Vec<String> = witness.iter().map(crate::exactalg::rat::rat_to_string).collect();
                write!(f, "singular point off the stratum at ({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictInputs {
    pub q_reg: usize,
    pub q_p: usize,
    pub q_n: usize,
    pub r_not_n: usize,
    pub sigma_minus: Order,
    pub sigma_plus: Order,
    pub sigma: Option<usize>,
}

impl VerdictInputs {
    pub fn bound(&self) -> i64 {
        self.q_p as i64 - self.q_n as i64 - self.r_not_n as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub d_p: usize,
    pub finiteness: Finiteness,
    pub certificate: Certificate,
    /// Outcome of the rule based on `σ` alone, when it applies.
    pub sigma_rule: Option<Finiteness>,
    pub inputs: Option<VerdictInputs>,
    /// The order data behind `σ₊` was checked only at sample points.
    pub a2_sampled: bool,
}

impl Verdict {
    pub fn regular(q: usize) -> Self {
        Verdict {
            d_p: q,
            finiteness: Finiteness::Finite,
            certificate: Certificate::RegularPoint { q },
            sigma_rule: None,
            inputs: None,
            a2_sampled: false,
        }
    }

    /// `Finite`, `Infinite (sampled A2)` and so on.
    pub fn label(&self) -> String {
        if self.a2_sampled && self.finiteness != Finiteness::Inconclusive {
            format!("{} (sampled A2)", self.finiteness)
        } else {
            self.finiteness.to_string()
        }
    }
}

fn sigma_rule(inputs: &VerdictInputs) -> (Finiteness, Certificate) {
    let bound = inputs.bound();
    let above = |o: Order| match o {
        Order::Finite(s) => s as i64 > bound,
        Order::AboveCap(c) => c as i64 >= bound,
    };
    if let Some(s) = inputs.sigma {
        let fin = if s as i64 <= bound {
            Finiteness::Finite
        } else {
            Finiteness::Infinite
        };
        return (fin, Certificate::Sigma { sigma: s, bound });
    }
    let fin = match inputs.sigma_plus {
        Order::Finite(s) if s as i64 <= bound => Finiteness::Finite,
        _ if above(inputs.sigma_minus) => Finiteness::Infinite,
        _ => Finiteness::Inconclusive,
    };
    (
        fin,
        Certificate::SigmaBounds {
            sigma_minus: inputs.sigma_minus,
            sigma_plus: inputs.sigma_plus,
            bound,
        },
    )
}

/// Finiteness of `H^{D_p}(B(p, ρ))` at a singular point `p` satisfying the
/// containment assumption, from the exact invariants and the order data.
pub fn finiteness(q_reg: usize, q_p: usize, q_n: usize, r_not_n: usize, order: &OrderResult) -> Verdict {
    let inputs = VerdictInputs {
        q_reg,
        q_p,
        q_n,
        r_not_n,
        sigma_minus: order.sigma_minus,
        sigma_plus: order.sigma_plus,
        sigma: order.sigma,
    };
    decide(inputs, true)
}

pub fn decide(inputs: VerdictInputs, a2_sampled: bool) -> Verdict {
    let (q_reg, q_n, r_not_n) = (inputs.q_reg, inputs.q_n, inputs.r_not_n);
    if q_reg < q_n {
        return Verdict {
            d_p: q_n,
            finiteness: Finiteness::Finite,
            certificate: Certificate::StratumDominates { q_reg, q_n },
            sigma_rule: None,
            inputs: Some(inputs),
            a2_sampled: false,
        };
    }
    let (rule, cert) = sigma_rule(&inputs);
    let (finiteness, certificate) = if q_reg - q_n < r_not_n {
        let (q_p, sigma) = (inputs.q_p, inputs.sigma);
        (Finiteness::Infinite, Certificate::DimensionGap { q_reg, q_n, r_not_n, q_p, sigma })
    } else {
        (rule, cert)
    };
    Verdict {
        d_p: q_reg,
        a2_sampled: a2_sampled && !matches!(certificate, Certificate::DimensionGap { .. }),
        finiteness,
        certificate,
        sigma_rule: Some(rule),
        inputs: Some(inputs),
    }
}

/// Maximum of the per-stratum dimensions.
pub fn hausdorff_dimension(strata: &[(String, usize)]) -> Result<usize> {
    strata.iter().map(|(_, q)| *q).max().ok_or(Error::EmptyStrata)
}

/// The stratum `N` itself always has finite `H^{Q̄_N}` volume near `p`.
pub fn stratum_volume_finiteness(n_spec: &SubmanifoldSpec, check: &EquiregCheck, pt: &[Rat]) -> Result<Finiteness> {
    if !n_spec.contains(pt) {
        return Err(Error::PointNotOnSubmanifold(n_spec.name().to_string()));
    }
    if !check.holds() {
        let reason = check
            .witnesses
            .first()
            .map_or_else(|| "ranks differ from the generic ranks".to_string(), |w| w.reason.clone());
        return Err(Error::EquiregularityFailed {
            name: n_spec.name().to_string(),
            reason,
        });
    }
    Ok(Finiteness::Finite)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssessOptions {
    pub cap_step: usize,
    /// Defaults to `2·Q(p)`.
    pub cap_order: Option<usize>,
    /// Defaults to `r(p)`.
    pub bracket_len: Option<usize>,
    pub samples: usize,
    pub family_budget: usize,
}

impl Default for AssessOptions {
    fn default() -> Self {
        AssessOptions {
            cap_step: DEFAULT_STEP_CAP,
            cap_order: None,
            bracket_len: None,
            samples: 8,
            family_budget: DEFAULT_FAMILY_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumAssessment {
    pub name: String,
    pub params: Vec<Rat>,
    pub restricted: RestrictedProfile,
    pub equireg: EquiregCheck,
    pub singular_set: SingularSetSurrogate,
    pub stratum_finite: Finiteness,
    pub q_bar: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub growth: GrowthProfile,
    pub generic: GenericGrowth,
    pub class: PointClass,
    pub stratum: Option<StratumAssessment>,
    pub order: Option<OrderResult>,
    pub dim_h: usize,
    pub verdict: Verdict,
}

/// Sample parameters `t_p + s` for `s` on the grid of [`sample_grid`].
pub fn samples_around(t: &[Rat], count: usize) -> Vec<Vec<Rat>> {
    sample_grid(t.len(), count)
        .into_iter()
        .map(|s| s.iter().zip(t).map(|(a, b)| a + b).collect())
        .collect()
}

/// Dimension and finiteness at `pt`; a singular `pt` must lie on `n_spec`.
pub fn assess_point(
    structure: &mut Structure,
    vol: &VolumeForm,
    n_spec: Option<&SubmanifoldSpec>,
    pt: &[Rat],
    opts: &AssessOptions,
) -> Result<Assessment> {
    let growth = structure.growth(pt)?;
    let generic = structure.generic()?;
    let class = structure.classify(pt)?;
    if class == PointClass::Regular {
        return Ok(Assessment {
            dim_h: generic.q,
            verdict: Verdict::regular(growth.q),
            growth,
            generic,
            class,
            stratum: None,
            order: None,
        });
    }
    let n_spec = n_spec.ok_or_else(|| {
        Error::InvalidInput("a singular point needs a submanifold (stratum) containing it".into())
    })?;
    let params = n_spec
        .locate(pt)
        .ok_or_else(|| Error::PointNotOnSubmanifold(n_spec.name().to_string()))?;
    let samples = samples_around(&params, opts.samples);
    let equireg = structure.equireg_check(n_spec, &samples)?;
    let stratum_finite = stratum_volume_finiteness(n_spec, &equireg, pt)?;
    let restricted = structure.restricted(n_spec, &params)?;
    let singular_set = structure.singular_set_surrogate(n_spec, &samples)?;
    let q_bar = equireg.generic.q_n.max(restricted.q_n);
    let dim_h = hausdorff_dimension(&[("regular".to_string(), generic.q), (n_spec.name().to_string(), q_bar)])?;
    let caps = OrderCaps {
        order: opts.cap_order.unwrap_or(2 * growth.q),
        bracket_len: opts.bracket_len.unwrap_or(growth.step),
        family_budget: opts.family_budget,
    };
    let order = sigma_bounds(structure, vol, n_spec, generic.q, caps, &samples)?;
    let mut verdict = finiteness(generic.q, growth.q, restricted.q_n, restricted.r_not_n, &order);
    if let Some(w) = singular_set.singular_off_n.first() {
        verdict.finiteness = Finiteness::Inconclusive;
        verdict.certificate = Certificate::SingularSetEscapes { witness: w.clone() };
    }
    Ok(Assessment {
        growth,
        generic,
        class,
        stratum: Some(StratumAssessment {
            name: n_spec.name().to_string(),
            params,
            restricted,
            equireg,
            singular_set,
            stratum_finite,
            q_bar,
        }),
        order: Some(order),
        dim_h,
        verdict,
    })
}

/// Whether the certificate agrees with the stated finiteness.
pub fn is_consistent(v: &Verdict) -> bool {
    match (&v.certificate, v.finiteness) {
        (Certificate::RegularPoint { .. } | Certificate::StratumDominates { .. }, f) => f == Finiteness::Finite,
        (Certificate::DimensionGap { .. }, f) => f == Finiteness::Infinite && v.sigma_rule != Some(Finiteness::Finite),
        (Certificate::Sigma { sigma, bound }, f) => (f == Finiteness::Finite) == ((*sigma as i64) <= *bound),
        (Certificate::SigmaBounds { .. }, _) => true,
        (Certificate::SingularSetEscapes { .. }, f) => f == Finiteness::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::Frame;
    use crate::testframes::*;

    fn inputs(q_reg: usize, q_p: usize, q_n: usize, r: usize, lo: Order, hi: Order) -> VerdictInputs {
        let sigma = match (lo, hi) {
            (Order::Finite(a), Order::Finite(b)) if a == b => Some(a),
            _ => None,
        };
        VerdictInputs {
            q_reg,
            q_p,
            q_n,
            r_not_n: r,
            sigma_minus: lo,
            sigma_plus: hi,
            sigma,
        }
    }

    #[test]
    fn decision_table() {
        let s = Order::Finite;
        let v = decide(inputs(4, 5, 4, 1, s(1), s(1)), true);
        assert_eq!((v.d_p, v.finiteness), (4, Finiteness::Infinite));
        assert!(matches!(v.certificate, Certificate::DimensionGap { .. }));
        assert_eq!(v.sigma_rule, Some(Finiteness::Infinite));
        let v = decide(inputs(5, 6, 4, 1, s(1), s(1)), true);
        assert_eq!((v.d_p, v.finiteness), (5, Finiteness::Finite));
        assert_eq!(v.certificate.to_string(), "sigma criterion, 1 <= 1");
        let v = decide(inputs(7, 8, 7, 1, s(2), s(2)), true);
        assert_eq!(v.finiteness, Finiteness::Infinite);
        let v = decide(inputs(7, 8, 6, 1, s(2), s(2)), true);
        assert_eq!(v.finiteness, Finiteness::Infinite);
        assert_eq!(v.certificate.to_string(), "sigma criterion, 2 > 1");
        let v = decide(inputs(3, 6, 4, 1, s(5), s(5)), true);
        assert_eq!((v.d_p, v.finiteness), (4, Finiteness::Finite));
    }

    #[test]
    fn sigma_bounds_rule() {
        let s = Order::Finite;
        // bound = 8 - 6 - 1 = 1
        assert_eq!(decide(inputs(7, 8, 6, 1, s(0), s(1)), true).finiteness, Finiteness::Finite);
        assert_eq!(decide(inputs(7, 8, 6, 1, s(2), s(3)), true).finiteness, Finiteness::Infinite);
        assert_eq!(decide(inputs(7, 8, 6, 1, s(1), s(2)), true).finiteness, Finiteness::Inconclusive);
        assert_eq!(
            decide(inputs(7, 8, 6, 1, s(1), Order::AboveCap(4)), true).finiteness,
            Finiteness::Inconclusive
        );
    }

    #[test]
    fn monotonic_in_sigma_bounds() {
        let s = Order::Finite;
        for lo in 0..5 {
            for hi in lo..6 {
                let base = decide(inputs(7, 8, 6, 1, s(lo), s(hi)), true).finiteness;
                let raised = decide(inputs(7, 8, 6, 1, s(lo + 1), s(hi.max(lo + 1))), true).finiteness;
                assert!(!(base == Finiteness::Infinite && raised == Finiteness::Finite));
                if hi > lo {
                    let lowered = decide(inputs(7, 8, 6, 1, s(lo), s(hi - 1)), true).finiteness;
                    assert!(!(base == Finiteness::Finite && lowered == Finiteness::Infinite));
                }
            }
        }
    }

    #[test]
    fn strata_dimension() {
        assert_eq!(hausdorff_dimension(&[("a".into(), 4), ("N".into(), 4)]).unwrap(), 4);
        assert!(matches!(hausdorff_dimension(&[]), Err(Error::EmptyStrata)));
    }

    fn assess(frame: &Frame, zeroed: &[usize], p: &[i64]) -> Assessment {
        let n = frame.dim();
        let n_spec = SubmanifoldSpec::coordinate_subspace("N", n, zeroed).unwrap();
        let mut s = Structure::new(frame, 10);
        assess_point(&mut s, &VolumeForm::canonical(n), Some(&n_spec), &pt(p), &AssessOptions::default()).unwrap()
    }

    #[test]
    fn examples_end_to_end() {
        let a = assess(&martinet(), &[0], &[0, 0, 0]);
        assert_eq!((a.dim_h, a.verdict.d_p, a.verdict.finiteness), (4, 4, Finiteness::Infinite));
        let a = assess(&martinet(), &[0], &[1, 0, 0]);
        assert_eq!((a.verdict.d_p, a.verdict.finiteness), (4, Finiteness::Finite));
        let a = assess(&example2(), &[0, 1], &[0, 0, 0, 0]);
        assert_eq!((a.dim_h, a.verdict.d_p, a.verdict.finiteness), (5, 5, Finiteness::Finite));
        assert!(is_consistent(&a.verdict));
        for k in 3..=5 {
            let a = assess(&example3(k), &[0], &[0, 0, 0, 0, 0]);
            assert_eq!((a.dim_h, a.verdict.finiteness), (7, Finiteness::Infinite));
            assert_eq!(a.order.unwrap().sigma, Some(k as usize - 1));
            let a = assess(&example4(k), &[0, 1], &[0, 0, 0, 0, 0]);
            assert_eq!((a.dim_h, a.verdict.finiteness), (7, Finiteness::Infinite));
            assert!(matches!(a.verdict.certificate, Certificate::Sigma { .. }));
        }
    }

    #[test]
    fn stratum_finiteness_preconditions() {
        let f = martinet();
        let n_spec = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        let mut s = Structure::new(&f, 10);
        let c = s.equireg_check(&n_spec, &sample_grid(2, 4)).unwrap();
        assert_eq!(stratum_volume_finiteness(&n_spec, &c, &pt(&[0, 0, 0])).unwrap(), Finiteness::Finite);
        assert!(matches!(
            stratum_volume_finiteness(&n_spec, &c, &pt(&[1, 0, 0])),
            Err(Error::PointNotOnSubmanifold(_))
        ));
        let open = SubmanifoldSpec::whole_space(3);
        let c = s.equireg_check(&open, &[pt(&[1, 0, 0]), pt(&[2, 0, 1])]).unwrap();
        assert_eq!(stratum_volume_finiteness(&open, &c, &pt(&[1, 0, 0])).unwrap(), Finiteness::Finite);
    }
}
