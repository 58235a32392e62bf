//! Command driver: turns a manifest and options into a report.

use std::fs::File;
use std::path::PathBuf;

use num_traits::Zero;

use super::manifest::Manifest;
use super::parse::{parse_rational, ParseContext};
use super::report::*;
use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::flags::{growth_vector, PointClass, Structure};
use crate::nilpotent::{build_chart, build_submanifold_chart, nilpotentize, ChartKind, PrivilegedChart};
use crate::orders::OrderResult;
use crate::probe::{dimension_probe, finiteness_probe, NuSpec, ProbeConfig, ProbeCoordinates};
use crate::submanifold::SubmanifoldSpec;
use crate::verdict::{assess_point, samples_around, stratum_volume_finiteness, AssessOptions, Assessment, Finiteness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Flags,
    Strata,
    Sigma,
    Nilpotent,
    Verdict,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Flags => "flags",
            Command::Strata => "strata",
            Command::Sigma => "sigma",
            Command::Nilpotent => "nilpotent",
            Command::Verdict => "verdict",
            Command::Probe => "probe",
        }
    }
}

/// Overrides on top of the manifest's `[options]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Point names or comma-separated coordinates; empty means every manifest point.
    pub points: Vec<String>,
    pub submanifold: Option<String>,
    pub cap_step: Option<usize>,
    pub cap_order: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub probe_samples: Option<usize>,
    pub rho: Option<f64>,
    /// Directory receiving `<point>-<probe>.csv` series.
    pub csv_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// 0 on success, 2 when some verdict is inconclusive.
    pub exit_code: i32,
}

struct Ctx<'a> {
    manifest: &'a Manifest,
    opts: OptionEcho,
    structure: Structure,
    assess: AssessOptions,
    csv_dir: Option<PathBuf>,
}

struct Target {
    name: String,
    coords: Vec<Rat>,
    stratum: Option<SubmanifoldSpec>,
}

fn echo(manifest: &Manifest, run: &RunOptions) -> OptionEcho {
    let o = &manifest.options;
    OptionEcho {
        cap_step: run.cap_step.unwrap_or(o.cap_step),
        cap_order: run.cap_order.or(o.cap_order),
        bracket_len: o.bracket_len,
        samples: run.samples.unwrap_or(o.samples),
        family_budget: o.family_budget,
        trunc: o.trunc,
        seed: run.seed.unwrap_or(o.seed),
        rho: run.rho.unwrap_or(o.rho),
        probe_samples: run.probe_samples.unwrap_or(o.probe_samples),
        submanifold: run.submanifold.clone(),
        points: run.points.clone(),
    }
}

fn manifest_echo(m: &Manifest) -> ManifestEcho {
    ManifestEcho {
        dimension: m.dimension,
        rank: m.rank(),
        coordinates: m.coordinates.clone(),
        parameters: m.parameters.clone(),
        frame: m
            .field_names
            .iter()
            .zip(m.frame.fields())
            .map(|(name, f)| FieldEcho { name: name.clone(), components: f.comps().iter().map(|c| m.show(c)).collect() })
            .collect(),
        volume_density: m.show(m.volume.density()),
        submanifolds: m.submanifolds.iter().map(|s| s.name().to_string()).collect(),
    }
}

impl Ctx<'_> {
    fn stratum_named(&self, name: &str) -> Result<SubmanifoldSpec> {
        self.manifest
            .submanifold(name)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("no submanifold named '{name}'")))
    }

    /// The `--submanifold` choice, the point's declared stratum, or the first stratum containing it.
    fn stratum_for(&self, declared: Option<&str>, coords: &[Rat]) -> Result<Option<SubmanifoldSpec>> {
        if let Some(s) = self.opts.submanifold.as_deref().or(declared) {
            let spec = self.stratum_named(s)?;
            if !spec.contains(coords) {
                return Err(Error::PointNotOnSubmanifold(s.to_string()));
            }
            return Ok(Some(spec));
        }
        Ok(self.manifest.submanifolds.iter().find(|s| s.contains(coords)).cloned())
    }

    fn targets(&self) -> Result<Vec<Target>> {
        let m = self.manifest;
        let mut out = Vec::new();
        if self.opts.points.is_empty() {
            for p in &m.points {
                out.push(Target {
                    name: p.name.clone(),
                    coords: p.coords.clone(),
                    stratum: self.stratum_for(p.submanifold.as_deref(), &p.coords)?,
                });
            }
        } else {
            for spec in &self.opts.points {
                if let Some(p) = m.point(spec) {
                    out.push(Target {
                        name: p.name.clone(),
                        coords: p.coords.clone(),
                        stratum: self.stratum_for(p.submanifold.as_deref(), &p.coords)?,
                    });
                    continue;
                }
                let ctx = m.parameters.iter().fold(ParseContext::default(), |c, (k, v)| c.with_param(k, Some(*v)));
                let coords: Vec<Rat> = spec
                    .split(',')
                    .map(|s| {
                        parse_rational(s.trim(), &ctx).map_err(|source| Error::Parse {
                            location: format!("--point {spec}"),
                            source,
                        })
                    })
                    .collect::<Result<_>>()?;
                if coords.len() != m.dimension {
                    return Err(Error::InvalidInput(format!(
                        "--point {spec}: {} coordinates for dimension {}",
                        coords.len(),
                        m.dimension
                    )));
                }
                out.push(Target { name: spec.clone(), stratum: self.stratum_for(None, &coords)?, coords });
            }
        }
        if out.is_empty() && self.opts.submanifold.is_none() {
            return Err(Error::InvalidInput("no points: declare [point.NAME] or pass --point".into()));
        }
        Ok(out)
    }

    fn growth_section(&mut self, coords: &[Rat]) -> Result<GrowthSection> {
        let g = self.structure.growth(coords)?;
        let generic = self.structure.generic()?;
        let class = self.structure.classify(coords)?;
        Ok(GrowthSection {
            provenance: Provenance::Exact,
            dims: g.dims,
            step: g.step,
            q: g.q,
            class: class_name(class).to_string(),
            generic_dims: generic.dims,
            q_reg: generic.q,
        })
    }

    fn stratum_section(&mut self, spec: &SubmanifoldSpec, at: Option<&[Rat]>) -> Result<StratumSection> {
        let params = match at {
            Some(p) => Some(spec.locate(p).ok_or_else(|| Error::PointNotOnSubmanifold(spec.name().to_string()))?),
            None => None,
        };
        let base = params.clone().unwrap_or_else(|| vec![Rat::zero(); spec.dim()]);
        let samples = samples_around(&base, self.assess.samples);
        let check = self.structure.equireg_check(spec, &samples)?;
        let surrogate = self.structure.singular_set_surrogate(spec, &samples)?;
        let restricted = match &params {
            Some(t) => Some(self.structure.restricted(spec, t)?),
            None => None,
        };
        let base_pt = spec.point_at(&base)?;
        let stratum_volume = if check.holds() {
            Some(stratum_volume_finiteness(spec, &check, &base_pt)?.to_string())
        } else {
            None
        };
        let g = &check.generic;
        Ok(StratumSection {
            provenance: Provenance::Exact,
            name: spec.name().to_string(),
            dim: spec.dim(),
            params: params.as_deref().map(rats),
            dims_n: restricted.as_ref().map(|r| r.dims_n.clone()),
            q_n: restricted.as_ref().map(|r| r.q_n),
            r_not_n: restricted.as_ref().map(|r| r.r_not_n),
            generic_dims: g.dims.clone(),
            generic_dims_n: g.dims_n.clone(),
            generic_q: g.q,
            generic_q_n: g.q_n,
            generic_r_not_n: g.r_not_n,
            equiregular: check.holds(),
            samples_checked: check.samples_checked,
            witnesses: check
                .witnesses
                .iter()
                .map(|w| WitnessEcho { point: rats(&w.point), dims: w.dims.clone(), dims_n: w.dims_n.clone(), reason: w.reason.clone() })
                .collect(),
            singular_set_probes: surrogate.probes,
            singular_off_stratum: surrogate.singular_off_n.iter().map(|p| rats(p)).collect(),
            stratum_volume,
        })
    }

    fn assess(&mut self, t: &Target) -> Result<Assessment> {
        assess_point(&mut self.structure, &self.manifest.volume, t.stratum.as_ref(), &t.coords, &self.assess)
    }

    fn chart(&mut self, t: &Target) -> Result<PrivilegedChart> {
        let trunc = self.manifest.options.trunc;
        match (&self.opts.submanifold, &t.stratum) {
            (Some(_), Some(spec)) => {
                let params = spec.locate(&t.coords).ok_or_else(|| Error::PointNotOnSubmanifold(spec.name().to_string()))?;
                build_submanifold_chart(&mut self.structure, spec, &params, trunc)
            }
            _ => build_chart(&mut self.structure, &t.coords, trunc),
        }
    }

    fn chart_section(&mut self, t: &Target) -> Result<ChartSection> {
        let chart = self.chart(t)?;
        let frame = self.manifest.frame.clone();
        let nil = nilpotentize(&frame, &chart)?;
        let orders = chart.coordinate_orders(&frame)?;
        let privileged = orders
            .iter()
            .zip(&chart.weights)
            .all(|(o, &w)| o.finite() == Some(w as usize));
        let nframe = nil.frame()?;
        let n = frame.dim();
        let origin = vec![Rat::zero(); n];
        let ngrowth = growth_vector(&nframe, &origin, self.opts.cap_step)?;
        let names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        Ok(ChartSection {
            provenance: Provenance::Exact,
            kind: match &chart.kind {
                ChartKind::Exponential => "exponential".to_string(),
                ChartKind::Submanifold { name, .. } => format!("adapted to {name}"),
            },
            trunc: chart.trunc,
            weights: chart.weights.clone(),
            adapted: chart
                .adapted
                .iter()
                .map(|a| AdaptedEcho { field: a.to_string(), weight: a.weight, tangential: a.tangential })
                .collect(),
            map: chart.map.iter().map(|z| z.to_string_with(&names)).collect(),
            coordinate_orders: orders.iter().map(|o| o.to_string()).collect(),
            privileged,
            nilpotent_fields: nil
                .fields
                .iter()
                .map(|f| f.comps().iter().map(|c| c.to_string_with(&names)).collect())
                .collect(),
            homogeneous: nil.is_homogeneous(),
            brackets_vanish_above_step: nil.brackets_vanish_at(chart.growth.step + 1)?,
            nilpotent_growth_at_origin: ngrowth.dims,
        })
    }

    fn probe_config(&self) -> ProbeConfig {
        ProbeConfig {
            samples: self.opts.probe_samples,
            seed: self.opts.seed,
            ..ProbeConfig::with_rho(self.opts.rho)
        }
    }

    fn probe_sections(&mut self, t: &Target, a: &Assessment) -> Result<Vec<ProbeSection>> {
        let cfg = self.probe_config();
        let frame = self.manifest.frame.clone();
        let chart = build_chart(&mut self.structure, &t.coords, self.manifest.options.trunc)?;
        let dim = dimension_probe(&frame, &t.coords, ProbeCoordinates::Chart(&chart), &cfg)?;
        let expected = a.growth.q as f64;
        let mut out = vec![ProbeSection {
            provenance: Provenance::Probe,
            target: dim.target(),
            exact: format!("Q(p) = {}", a.growth.q),
            agrees: dim.exponent.is_some_and(|e| (e - expected).abs() <= 0.5),
            report: dim,
        }];
        if let (PointClass::Singular, Some(spec)) = (a.class, &t.stratum) {
            let cutout = spec.cutout().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "the finiteness probe needs a coordinate cutout for {}; declare it with 'zero'",
                    spec.name()
                ))
            })?;
            let nu = NuSpec {
                q_ref: a.generic.q,
                bracket_len: self.assess.bracket_len.unwrap_or(a.growth.step),
                family_budget: self.assess.family_budget,
            };
            let fin = finiteness_probe(&frame, &self.manifest.volume, &cutout, &t.coords, nu, &cfg)?;
            let consistent = fin.classification.map(|c| c.consistent_with());
            out.push(ProbeSection {
                provenance: Provenance::Probe,
                target: fin.target(),
                exact: a.verdict.finiteness.to_string(),
                agrees: consistent == Some(a.verdict.finiteness),
                report: fin,
            });
        }
        if let Some(dir) = &self.csv_dir {
            for s in &out {
                let kind = match s.report.kind {
                    crate::probe::ProbeKind::Dimension => "dimension",
                    crate::probe::ProbeKind::Finiteness => "finiteness",
                };
                let file = File::create(dir.join(format!("{}-{kind}.csv", sanitize(&t.name))))?;
                s.report.write_csv(file)?;
            }
        }
        Ok(out)
    }
}

fn class_name(c: PointClass) -> &'static str {
    match c {
        PointClass::Regular => "regular",
        PointClass::Singular => "singular",
    }
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn order_section(o: &OrderResult) -> OrderSection {
    OrderSection {
        provenance: Provenance::Exact,
        q_ref: o.q_ref,
        sigma_minus: o.sigma_minus.to_string(),
        sigma_plus: o.sigma_plus.to_string(),
        sigma: o.sigma,
        samples_agree: o.samples_agree,
        cap_order: o.caps.order,
        cap_bracket_len: o.caps.bracket_len,
        families: o.families.len(),
        witnesses: o.witnesses.iter().map(|w| w.to_string()).collect(),
    }
}

fn verdict_section(a: &Assessment) -> VerdictSection {
    let v = &a.verdict;
    VerdictSection {
        provenance: Provenance::Exact,
        d_p: v.d_p,
        dim_h: a.dim_h,
        finiteness: v.label(),
        certificate: v.certificate.to_string(),
        sigma_rule: v.sigma_rule.map(|f| f.to_string()),
        bound: v.inputs.as_ref().map(|i| i.bound()),
        inconclusive: v.finiteness == Finiteness::Inconclusive,
    }
}

/// Executes `command`; errors map to exit code 1 in the CLI.
pub fn run(command: Command, manifest: &Manifest, options: &RunOptions) -> Result<Outcome> {
    let opts = echo(manifest, options);
    let assess = AssessOptions {
        cap_step: opts.cap_step,
        cap_order: opts.cap_order,
        bracket_len: opts.bracket_len,
        samples: opts.samples,
        family_budget: opts.family_budget,
    };
    if let Some(dir) = &options.csv_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut ctx = Ctx {
        manifest,
        structure: Structure::new(&manifest.frame, opts.cap_step),
        opts,
        assess,
        csv_dir: options.csv_dir.clone(),
    };
    let targets = ctx.targets()?;
    let mut points = Vec::new();
    let mut strata = Vec::new();

    if command == Command::Strata {
        let specs: Vec<SubmanifoldSpec> = match &ctx.opts.submanifold {
            Some(s) => vec![ctx.stratum_named(s)?],
            None => manifest.submanifolds.clone(),
        };
        if specs.is_empty() {
            return Err(Error::InvalidInput("no submanifolds: declare [submanifold.NAME]".into()));
        }
        for spec in &specs {
            strata.push(ctx.stratum_section(spec, None)?);
        }
    }

    for t in &targets {
        let mut pr = PointReport::new(&t.name, &t.coords, t.stratum.as_ref().map(|s| s.name()));
        match command {
            Command::Flags => pr.growth = Some(ctx.growth_section(&t.coords)?),
            Command::Strata => {
                pr.growth = Some(ctx.growth_section(&t.coords)?);
                if let Some(spec) = &t.stratum {
                    pr.stratum = Some(ctx.stratum_section(spec, Some(&t.coords))?);
                }
            }
            Command::Nilpotent => {
                pr.growth = Some(ctx.growth_section(&t.coords)?);
                pr.chart = Some(ctx.chart_section(t)?);
            }
            Command::Sigma | Command::Verdict | Command::Probe => {
                pr.growth = Some(ctx.growth_section(&t.coords)?);
                let a = ctx.assess(t)?;
                if let Some(spec) = &t.stratum {
                    if a.class == PointClass::Singular {
                        pr.stratum = Some(ctx.stratum_section(spec, Some(&t.coords))?);
                    }
                }
                pr.order = a.order.as_ref().map(order_section);
                if command != Command::Sigma {
                    pr.verdict = Some(verdict_section(&a));
                }
                if command == Command::Probe {
                    pr.probes = ctx.probe_sections(t, &a)?;
                }
            }
        }
        points.push(pr);
    }

    let report = Report {
        tool: ToolInfo::default(),
        command: command.name().to_string(),
        options: ctx.opts,
        manifest: manifest_echo(manifest),
        points,
        strata,
    };
    let exit_code = if report.inconclusive() { 2 } else { 0 };
    Ok(Outcome { report, exit_code })
}
