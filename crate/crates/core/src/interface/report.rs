//! Run reports: one deterministic document per run, rendered as JSON or text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exactalg::rat::rat_to_string;
use crate::exactalg::Rat;
use crate::probe::ProbeReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Probe,
}

pub(crate) fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptionEcho {
    pub cap_step: usize,
    pub cap_order: Option<usize>,
    pub bracket_len: Option<usize>,
    pub samples: usize,
    pub family_budget: usize,
    pub trunc: Option<u32>,
    pub seed: u64,
    pub rho: f64,
    pub probe_samples: usize,
    pub submanifold: Option<String>,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldEcho {
    pub name: String,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifestEcho {
    pub dimension: usize,
    pub rank: usize,
    pub coordinates: Vec<String>,
    pub parameters: Vec<(String, i64)>,
    pub frame: Vec<FieldEcho>,
    pub volume_density: String,
    pub submanifolds: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSection {
    pub provenance: Provenance,
    pub dims: Vec<usize>,
    pub step: usize,
    pub q: usize,
    pub class: String,
    pub generic_dims: Vec<usize>,
    pub q_reg: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEcho {
    pub point: Vec<String>,
    pub dims: Vec<usize>,
    pub dims_n: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumSection {
    pub provenance: Provenance,
    pub name: String,
    pub dim: usize,
    /// Parameters of the point on the stratum, when a point is given.
    pub params: Option<Vec<String>>,
    pub dims_n: Option<Vec<usize>>,
    pub q_n: Option<usize>,
    pub r_not_n: Option<usize>,
    pub generic_dims: Vec<usize>,
    pub generic_dims_n: Vec<usize>,
    pub generic_q: usize,
    pub generic_q_n: usize,
    pub generic_r_not_n: usize,
    pub equiregular: bool,
    pub samples_checked: usize,
    pub witnesses: Vec<WitnessEcho>,
    pub singular_set_probes: usize,
    pub singular_off_stratum: Vec<Vec<String>>,
    pub stratum_volume: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderSection {
    pub provenance: Provenance,
    pub q_ref: usize,
    pub sigma_minus: String,
    pub sigma_plus: String,
    pub sigma: Option<usize>,
    pub samples_agree: bool,
    pub cap_order: usize,
    pub cap_bracket_len: usize,
    pub families: usize,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictSection {
    pub provenance: Provenance,
    pub d_p: usize,
    pub dim_h: usize,
    pub finiteness: String,
    pub certificate: String,
    pub sigma_rule: Option<String>,
    pub bound: Option<i64>,
    #[serde(skip)]
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptedEcho {
    pub field: String,
    pub weight: u32,
    pub tangential: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartSection {
    pub provenance: Provenance,
    pub kind: String,
    pub trunc: u32,
    pub weights: Vec<u32>,
    pub adapted: Vec<AdaptedEcho>,
    pub map: Vec<String>,
    pub coordinate_orders: Vec<String>,
    pub privileged: bool,
    pub nilpotent_fields: Vec<Vec<String>>,
    pub homogeneous: bool,
    pub brackets_vanish_above_step: bool,
    pub nilpotent_growth_at_origin: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSection {
    pub provenance: Provenance,
    pub target: &'static str,
    /// Exact value the probe is compared against.
    pub exact: String,
    pub agrees: bool,
    #[serde(flatten)]
    pub report: ProbeReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointReport {
    pub name: String,
    pub coordinates: Vec<String>,
    pub submanifold: Option<String>,
    pub growth: Option<GrowthSection>,
    pub stratum: Option<StratumSection>,
    pub order: Option<OrderSection>,
    pub chart: Option<ChartSection>,
    pub verdict: Option<VerdictSection>,
    pub probes: Vec<ProbeSection>,
}

impl PointReport {
    pub fn new(name: &str, coords: &[Rat], submanifold: Option<&str>) -> Self {
        PointReport {
            name: name.to_string(),
            coordinates: rats(coords),
            submanifold: submanifold.map(str::to_string),
            growth: None,
            stratum: None,
            order: None,
            chart: None,
            verdict: None,
            probes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub options: OptionEcho,
    pub manifest: ManifestEcho,
    pub points: Vec<PointReport>,
    pub strata: Vec<StratumSection>,
}

impl Report {
    /// Whether any verdict component is inconclusive.
    pub fn inconclusive(&self) -> bool {
        let stratum = |s: &StratumSection| s.stratum_volume.as_deref() == Some("Inconclusive");
        self.strata.iter().any(stratum)
            || self.points.iter().any(|p| {
                p.verdict.as_ref().is_some_and(|v| v.inconclusive) || p.stratum.as_ref().is_some_and(stratum)
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let m = &self.manifest;
        let _ = writeln!(s, "{} {} :: {}", self.tool.name, self.tool.version, self.command);
        let _ = writeln!(s, "space: n = {}, m = {}, coordinates ({})", m.dimension, m.rank, m.coordinates.join(", "));
        for (p, v) in &m.parameters {
            let _ = writeln!(s, "parameter {p} = {v}");
        }
        for st in &self.strata {
            stratum_text(&mut s, st, "");
        }
        for p in &self.points {
            let _ = write!(s, "\npoint {} = ({})", p.name, p.coordinates.join(", "));
            if let Some(n) = &p.submanifold {
                let _ = write!(s, " on {n}");
            }
            s.push('\n');
            if let Some(g) = &p.growth {
                let _ = writeln!(
                    s,
                    "  growth ({}) step {} Q = {} [{}]; generic ({}) Q_reg = {}",
                    join(&g.dims),
                    g.step,
                    g.q,
                    g.class,
                    join(&g.generic_dims),
                    g.q_reg
                );
            }
            if let Some(st) = &p.stratum {
                stratum_text(&mut s, st, "  ");
            }
            if let Some(o) = &p.order {
                let sigma = o.sigma.map_or("undefined".to_string(), |v| v.to_string());
                let _ = writeln!(
                    s,
                    "  orders q_ref = {}: sigma- = {}, sigma+ = {}, sigma = {} ({} families, witnesses {})",
                    o.q_ref,
                    o.sigma_minus,
                    o.sigma_plus,
                    sigma,
                    o.families,
                    o.witnesses.join(" ")
                );
            }
            if let Some(c) = &p.chart {
                let _ = writeln!(s, "  chart {} trunc {} weights ({})", c.kind, c.trunc, join(&c.weights));
                let adapted: Vec<String> = c.adapted.iter().map(|a| format!("{} [w = {}]", a.field, a.weight)).collect();
                let _ = writeln!(s, "    adapted {}", adapted.join(", "));
                for (j, z) in c.map.iter().enumerate() {
                    let _ = writeln!(s, "    u{} = {}", j + 1, z);
                }
                let _ = writeln!(
                    s,
                    "    privileged {}, coordinate orders ({})",
                    c.privileged,
                    c.coordinate_orders.join(", ")
                );
                for (i, f) in c.nilpotent_fields.iter().enumerate() {
                    let _ = writeln!(s, "    nilpotent X{} = ({})", i + 1, f.join(", "));
                }
                let _ = writeln!(
                    s,
                    "    homogeneous {}, brackets above step vanish {}, growth at 0 ({})",
                    c.homogeneous,
                    c.brackets_vanish_above_step,
                    join(&c.nilpotent_growth_at_origin)
                );
            }
            if let Some(v) = &p.verdict {
                let _ = writeln!(s, "  verdict D_p = {}, dim_H = {}: {} [{}]", v.d_p, v.dim_h, v.finiteness, v.certificate);
            }
            for pr in &p.probes {
                let r = &pr.report;
                let _ = write!(s, "  probe {:?}", r.kind);
                if let Some(e) = r.exponent {
                    let _ = write!(s, " exponent {e:.3}");
                }
                if let Some(e) = r.stderr {
                    let _ = write!(s, " ± {e:.3}");
                }
                if let Some(c) = &r.classification {
                    let _ = write!(s, " {c}");
                }
                let _ = writeln!(s, "; exact {}; agrees {}", pr.exact, pr.agrees);
            }
        }
        s
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn stratum_text(s: &mut String, st: &StratumSection, indent: &str) {
    let _ = write!(s, "{indent}stratum {} (dim {})", st.name, st.dim);
    if let (Some(d), Some(q), Some(r)) = (&st.dims_n, st.q_n, st.r_not_n) {
        let _ = write!(s, ": dims_N ({}) Q_N = {q} r_notN = {r}", join(d));
    }
    let _ = writeln!(
        s,
        "; generic dims_N ({}) Q_N = {}; equiregular {} on {} samples",
        join(&st.generic_dims_n),
        st.generic_q_n,
        st.equiregular,
        st.samples_checked
    );
    for w in &st.witnesses {
        let _ = writeln!(s, "{indent}  witness ({}): {}", w.point.join(", "), w.reason);
    }
    if !st.singular_off_stratum.is_empty() {
        let _ = writeln!(s, "{indent}  singular points off the stratum: {}", st.singular_off_stratum.len());
    }
    if let Some(v) = &st.stratum_volume {
        let _ = writeln!(s, "{indent}  stratum volume: {v}");
    }
}
