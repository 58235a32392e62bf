//! The problem manifest: a TOML document describing a frame and what to analyze.

use toml::{Table, Value};

use super::parse::{parse_poly, parse_rational, ParseContext};
use crate::brackets::{Frame, VecField};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat};
use crate::flags::DEFAULT_STEP_CAP;
use crate::orders::{VolumeForm, DEFAULT_FAMILY_BUDGET};
use crate::submanifold::SubmanifoldSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestOptions {
    pub cap_step: usize,
    pub cap_order: Option<usize>,
    pub bracket_len: Option<usize>,
    pub samples: usize,
    pub family_budget: usize,
    pub trunc: Option<u32>,
    pub seed: u64,
    pub rho: f64,
    pub probe_samples: usize,
}

impl Default for ManifestOptions {
    fn default() -> Self {
        ManifestOptions {
            cap_step: DEFAULT_STEP_CAP,
            cap_order: None,
            bracket_len: None,
            samples: 8,
            family_budget: DEFAULT_FAMILY_BUDGET,
            trunc: None,
            seed: 7,
            rho: 1.0,
            probe_samples: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPoint {
    pub name: String,
    pub coords: Vec<Rat>,
    /// Stratum the point is declared to lie on.
    pub submanifold: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub parameters: Vec<(String, i64)>,
    pub field_names: Vec<String>,
    /// Source text of each component, per field.
    pub field_sources: Vec<Vec<String>>,
    pub frame: Frame,
    pub density_source: String,
    pub volume: VolumeForm,
    pub submanifolds: Vec<SubmanifoldSpec>,
    pub points: Vec<NamedPoint>,
    pub options: ManifestOptions,
}

impl Manifest {
    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn submanifold(&self, name: &str) -> Option<&SubmanifoldSpec> {
        self.submanifolds.iter().find(|s| s.name() == name)
    }

    pub fn point(&self, name: &str) -> Option<&NamedPoint> {
        self.points.iter().find(|p| p.name == name)
    }

    /// Renders a polynomial in the manifest's coordinate names.
    pub fn show(&self, p: &Poly) -> String {
        p.to_string_with(&self.coordinates)
    }
}

fn manifest_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Manifest { location: location.into(), message: message.into() }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn check_keys(table: &Table, location: &str, allowed: &[&str]) -> Result<()> {
    match table.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(manifest_err(location, format!("unknown key '{k}'"))),
        None => Ok(()),
    }
}

fn table<'a>(v: &'a Value, location: &str) -> Result<&'a Table> {
    v.as_table().ok_or_else(|| manifest_err(location, "expected a table"))
}

fn array<'a>(v: &'a Value, location: &str) -> Result<&'a [Value]> {
    v.as_array().map(Vec::as_slice).ok_or_else(|| manifest_err(location, "expected an array"))
}

fn count(v: &Value, location: &str) -> Result<usize> {
    v.as_integer()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| manifest_err(location, "expected a nonnegative integer"))
}

/// Expression text from a string or an integer literal.
fn source(v: &Value, location: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Integer(i) => Ok(i.to_string()),
        _ => Err(manifest_err(location, "expected an expression string or integer")),
    }
}

fn names(v: &Value, location: &str) -> Result<Vec<String>> {
    array(v, location)?
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.as_str()
                .map(str::to_string)
                .ok_or_else(|| manifest_err(format!("{location}[{i}]"), "expected a name"))
        })
        .collect()
}

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn distinct(all: &[String], location: &str) -> Result<()> {
    for (i, a) in all.iter().enumerate() {
        if !valid_ident(a) {
            return Err(manifest_err(location, format!("'{a}' is not a valid name")));
        }
        if all[..i].contains(a) {
            return Err(manifest_err(location, format!("duplicate name '{a}'")));
        }
    }
    Ok(())
}

fn parse_at(text: &str, ctx: &ParseContext, location: String) -> Result<Poly> {
    parse_poly(text, ctx).map_err(|source| Error::Parse { location, source })
}

/// Parses and validates a manifest.
pub fn parse_manifest(text: &str) -> Result<Manifest> {
    parse_manifest_with(text, &[])
}

/// Like [`parse_manifest`], with parameter values overriding the manifest's.
pub fn parse_manifest_with(text: &str, overrides: &[(String, i64)]) -> Result<Manifest> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| {
        let location = e
            .span()
            .map(|s| {
                let (l, c) = line_col(text, s.start);
                format!("line {l}, column {c}")
            })
            .unwrap_or_else(|| "manifest".to_string());
        manifest_err(location, e.message().to_string())
    })?;
    check_keys(&doc, "manifest", &["space", "frame", "volume", "submanifold", "point", "options"])?;

    let space = table(doc.get("space").ok_or_else(|| manifest_err("manifest", "missing [space]"))?, "space")?;
    check_keys(space, "space", &["dimension", "coordinates", "parameters"])?;
    let n = count(space.get("dimension").ok_or_else(|| manifest_err("space", "missing dimension"))?, "space.dimension")?;
    if n == 0 {
        return Err(manifest_err("space.dimension", "dimension must be positive"));
    }
    let coordinates = match space.get("coordinates") {
        Some(v) => names(v, "space.coordinates")?,
        None => Poly::default_names(n, 0),
    };
    if coordinates.len() != n {
        return Err(manifest_err(
            "space.coordinates",
            format!("{} names for dimension {n}", coordinates.len()),
        ));
    }
    distinct(&coordinates, "space.coordinates")?;

    let mut declared: Vec<(String, Option<i64>)> = Vec::new();
    match space.get("parameters") {
        None => {}
        Some(Value::Array(list)) => {
            for (i, v) in list.iter().enumerate() {
                let name = v
                    .as_str()
                    .ok_or_else(|| manifest_err(format!("space.parameters[{i}]"), "expected a name"))?;
                declared.push((name.to_string(), None));
            }
        }
        Some(Value::Table(t)) => {
            for (name, v) in t {
                let value = v
                    .as_integer()
                    .ok_or_else(|| manifest_err(format!("space.parameters.{name}"), "expected an integer"))?;
                declared.push((name.clone(), Some(value)));
            }
        }
        Some(_) => return Err(manifest_err("space.parameters", "expected an array of names or a table")),
    }
    let pnames: Vec<String> = declared.iter().map(|(p, _)| p.clone()).collect();
    distinct(&pnames, "space.parameters")?;
    if let Some(p) = pnames.iter().find(|p| coordinates.contains(p)) {
        return Err(manifest_err("space.parameters", format!("parameter '{p}' shadows a coordinate")));
    }
    for (name, value) in overrides {
        let slot = declared
            .iter_mut()
            .find(|(p, _)| p == name)
            .ok_or_else(|| manifest_err("--param", format!("no parameter named '{name}'")))?;
        slot.1 = Some(*value);
    }
    let mut ctx = ParseContext::new(coordinates.clone());
    for (name, value) in &declared {
        ctx = ctx.with_param(name, *value);
    }

    let frame_t = table(doc.get("frame").ok_or_else(|| manifest_err("manifest", "missing [frame]"))?, "frame")?;
    let mut field_names = Vec::new();
    let mut field_sources = Vec::new();
    let mut fields = Vec::new();
    for (fname, v) in frame_t {
        let loc = format!("frame.{fname}");
        let comps = array(v, &loc)?;
        if comps.len() != n {
            return Err(manifest_err(&loc, format!("{} components for dimension {n}", comps.len())));
        }
        let srcs: Vec<String> = comps
            .iter()
            .enumerate()
            .map(|(j, c)| source(c, &format!("{loc}[{j}]")))
            .collect::<Result<_>>()?;
        let polys: Vec<Poly> = srcs
            .iter()
            .enumerate()
            .map(|(j, s)| parse_at(s, &ctx, format!("{loc}[{j}]")))
            .collect::<Result<_>>()?;
        field_names.push(fname.clone());
        field_sources.push(srcs);
        fields.push(VecField::new(polys)?);
    }
    if fields.is_empty() {
        return Err(manifest_err("frame", "frame has no fields"));
    }
    if fields.len() >= n {
        return Err(manifest_err("frame", "rank must be < dimension"));
    }
    let frame = Frame::new(fields).map_err(|e| manifest_err("frame", e.to_string()))?;

    let (density_source, volume) = match doc.get("volume") {
        None => ("1".to_string(), VolumeForm::canonical(n)),
        Some(v) => {
            let t = table(v, "volume")?;
            check_keys(t, "volume", &["density"])?;
            let src = match t.get("density") {
                Some(d) => source(d, "volume.density")?,
                None => "1".to_string(),
            };
            let density = parse_at(&src, &ctx, "volume.density".into())?;
            let vol = VolumeForm::new(density).map_err(|e| manifest_err("volume.density", e.to_string()))?;
            (src, vol)
        }
    };

    let mut submanifolds = Vec::new();
    if let Some(v) = doc.get("submanifold") {
        for (sname, sv) in table(v, "submanifold")? {
            let loc = format!("submanifold.{sname}");
            let t = table(sv, &loc)?;
            check_keys(t, &loc, &["zero", "params", "map"])?;
            let spec = match (t.get("zero"), t.get("params"), t.get("map")) {
                (Some(z), None, None) => {
                    let zeroed: Vec<usize> = names(z, &format!("{loc}.zero"))?
                        .iter()
                        .map(|c| {
                            coordinates
                                .iter()
                                .position(|x| x == c)
                                .ok_or_else(|| manifest_err(format!("{loc}.zero"), format!("unknown coordinate '{c}'")))
                        })
                        .collect::<Result<_>>()?;
                    SubmanifoldSpec::coordinate_subspace(sname, n, &zeroed)
                }
                (None, Some(p), Some(m)) => {
                    let params = names(p, &format!("{loc}.params"))?;
                    distinct(&params, &format!("{loc}.params"))?;
                    if let Some(x) = params.iter().find(|x| pnames.contains(x)) {
                        return Err(manifest_err(format!("{loc}.params"), format!("'{x}' is an integer parameter")));
                    }
                    let mut pctx = ParseContext::new(params);
                    for (name, value) in &declared {
                        pctx = pctx.with_param(name, *value);
                    }
                    let comps = array(m, &format!("{loc}.map"))?;
                    if comps.len() != n {
                        return Err(manifest_err(
                            format!("{loc}.map"),
                            format!("{} components for dimension {n}", comps.len()),
                        ));
                    }
                    let map: Vec<Poly> = comps
                        .iter()
                        .enumerate()
                        .map(|(j, c)| {
                            let l = format!("{loc}.map[{j}]");
                            parse_at(&source(c, &l)?, &pctx, l)
                        })
                        .collect::<Result<_>>()?;
                    SubmanifoldSpec::parametrized(sname, n, map)
                }
                _ => return Err(manifest_err(&loc, "give either 'zero' or both 'params' and 'map'")),
            }
            .map_err(|e| manifest_err(&loc, e.to_string()))?;
            if spec.dim() >= n {
                return Err(manifest_err(&loc, "a stratum must have positive codimension"));
            }
            submanifolds.push(spec);
        }
    }

    let mut points = Vec::new();
    if let Some(v) = doc.get("point") {
        for (pname, pv) in table(v, "point")? {
            let loc = format!("point.{pname}");
            let t = table(pv, &loc)?;
            check_keys(t, &loc, &["at", "submanifold"])?;
            let at = array(t.get("at").ok_or_else(|| manifest_err(&loc, "missing 'at'"))?, &format!("{loc}.at"))?;
            if at.len() != n {
                return Err(manifest_err(format!("{loc}.at"), format!("{} coordinates for dimension {n}", at.len())));
            }
            let coords: Vec<Rat> = at
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let l = format!("{loc}.at[{j}]");
                    parse_rational(&source(c, &l)?, &ctx).map_err(|source| Error::Parse { location: l, source })
                })
                .collect::<Result<_>>()?;
            let submanifold = match t.get("submanifold") {
                None => None,
                Some(s) => {
                    let s = s
                        .as_str()
                        .ok_or_else(|| manifest_err(format!("{loc}.submanifold"), "expected a name"))?;
                    let spec = submanifolds
                        .iter()
                        .find(|m| m.name() == s)
                        .ok_or_else(|| manifest_err(format!("{loc}.submanifold"), format!("no submanifold '{s}'")))?;
                    if !spec.contains(&coords) {
                        return Err(manifest_err(&loc, format!("point does not lie on {s}")));
                    }
                    Some(s.to_string())
                }
            };
            points.push(NamedPoint { name: pname.clone(), coords, submanifold });
        }
    }

    let mut options = ManifestOptions::default();
    if let Some(v) = doc.get("options") {
        let t = table(v, "options")?;
        for (key, val) in t {
            let loc = format!("options.{key}");
            match key.as_str() {
                "cap_step" => options.cap_step = count(val, &loc)?,
                "cap_order" => options.cap_order = Some(count(val, &loc)?),
                "bracket_len" => options.bracket_len = Some(count(val, &loc)?),
                "samples" => options.samples = count(val, &loc)?,
                "family_budget" => options.family_budget = count(val, &loc)?,
                "trunc" => {
                    options.trunc = Some(
                        u32::try_from(count(val, &loc)?).map_err(|_| manifest_err(&loc, "truncation too large"))?,
                    )
                }
                "seed" => options.seed = count(val, &loc)? as u64,
                "probe_samples" => options.probe_samples = count(val, &loc)?,
                "rho" => {
                    options.rho = val
                        .as_float()
                        .or_else(|| val.as_integer().map(|i| i as f64))
                        .filter(|r| *r > 0.0)
                        .ok_or_else(|| manifest_err(&loc, "expected a positive number"))?
                }
                _ => return Err(manifest_err("options", format!("unknown key '{key}'"))),
            }
        }
    }

    let parameters = declared
        .into_iter()
        .filter_map(|(p, v)| v.map(|v| (p, v)))
        .collect();
    Ok(Manifest {
        dimension: n,
        coordinates,
        parameters,
        field_names,
        field_sources,
        frame,
        density_source,
        volume,
        submanifolds,
        points,
        options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;
    use crate::testframes::{example3, martinet};

    pub const MARTINET: &str = r#"
[space]
dimension = 3

[frame]
X1 = ["1", "0", "0"]
X2 = ["0", "1", "x1^2/2"]

[submanifold.N]
zero = ["x1"]

[point.regular]
at = [1, 0, 0]

[point.origin]
at = [0, 0, 0]
submanifold = "N"
"#;

    const EXAMPLE3: &str = r#"
[space]
dimension = 5
parameters = ["k"]

[frame]
X1 = ["1", "0", "0", "0", "0"]
X2 = ["0", "1", "x1", "0", "x1^2"]
X3 = ["0", "0", "0", "1", "x1^k"]
"#;

    #[test]
    fn martinet_manifest() {
        let m = parse_manifest(MARTINET).unwrap();
        assert_eq!((m.dimension, m.rank()), (3, 2));
        assert_eq!(m.frame, martinet());
        assert_eq!(m.field_names, vec!["X1", "X2"]);
        assert_eq!(m.volume, VolumeForm::canonical(3));
        assert_eq!(m.points[0].coords, vec![int(1), int(0), int(0)]);
        assert_eq!(m.points[1].submanifold.as_deref(), Some("N"));
        assert_eq!(m.submanifold("N").unwrap().dim(), 2);
    }

    #[test]
    fn rank_must_be_below_dimension() {
        let text = "[space]\ndimension = 2\n[frame]\nX1 = [\"1\", \"0\"]\nX2 = [\"0\", \"1\"]\n";
        let e = parse_manifest(text).unwrap_err();
        assert!(e.to_string().contains("rank must be < dimension"), "{e}");
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let e = parse_manifest(EXAMPLE3).unwrap_err();
        assert!(e.to_string().contains("parameter k requires a value"), "{e}");
        assert!(e.to_string().starts_with("frame.X3[4]"), "{e}");
        let m = parse_manifest_with(EXAMPLE3, &[("k".into(), 4)]).unwrap();
        assert_eq!(m.frame, example3(4));
        assert_eq!(m.parameters, vec![("k".to_string(), 4)]);
    }

    #[test]
    fn structural_errors() {
        let dup = MARTINET.replace("[point.origin]", "[point.regular]");
        assert!(parse_manifest(&dup).unwrap_err().to_string().starts_with("line "));
        let off = MARTINET.replace("at = [0, 0, 0]", "at = [1, 0, 0]");
        assert!(parse_manifest(&off).unwrap_err().to_string().contains("does not lie on N"));
        let typo = MARTINET.replace("[point.regular]", "[option]\n[point.regular]");
        assert!(parse_manifest(&typo).is_err());
        let bad = MARTINET.replace("x1^2/2", "x1^2/");
        let e = parse_manifest(&bad).unwrap_err();
        assert!(matches!(&e, Error::Parse { location, .. } if location == "frame.X2[2]"), "{e}");
        let shadow = MARTINET.replace("dimension = 3", "dimension = 3\nparameters = { x1 = 2 }");
        assert!(parse_manifest(&shadow).is_err());
        assert!(parse_manifest("").is_err());
    }

    #[test]
    fn parametrized_submanifold() {
        let text = MARTINET.replace("zero = [\"x1\"]", "params = [\"s\", \"t\"]\nmap = [\"0\", \"s\", \"t\"]");
        let m = parse_manifest(&text).unwrap();
        let n = m.submanifold("N").unwrap();
        assert_eq!(n.dim(), 2);
        assert!(n.contains(&[int(0), int(3), int(1)]));
    }
}
