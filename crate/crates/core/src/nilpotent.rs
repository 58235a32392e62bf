//! Privileged coordinates from exponential maps of adapted fields, the
//! nilpotent approximation of the frame, and the induced form on `N`.

use std::fmt;

use num_traits::{One, Zero};

use crate::brackets::{bracket_of, BracketTower, Frame, MultiIndex, VecField};
use crate::error::{Error, Result};
use crate::exactalg::rat::rat_to_string;
use crate::exactalg::span::dense_key;
use crate::exactalg::{LinearSpan, Poly, Rat, RatMatrix};
use crate::flags::{GrowthProfile, Structure};
use crate::orders::{DerivativeTower, Order};
use crate::submanifold::SubmanifoldSpec;

/// A constant-coefficient combination `Σ c_I X_I` used as a chart field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedField {
    pub combo: Vec<(MultiIndex, Rat)>,
    pub field: VecField,
    pub weight: u32,
    pub tangential: bool,
}

impl AdaptedField {
    fn single(index: MultiIndex, field: VecField, tangential: bool) -> Self {
        AdaptedField {
            weight: index.len() as u32,
            combo: vec![(index, Rat::one())],
            field,
            tangential,
        }
    }
}

impl fmt::Display for AdaptedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .combo
            .iter()
            .map(|(i, c)| {
                if c.is_one() {
                    format!("X{i}")
                } else {
                    format!("{}*X{i}", rat_to_string(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartKind {
    /// `exp(Σ x_i Y_i)(p)`.
    Exponential,
    /// `exp(Σ_{i>b} x_i Y_i) ∘ exp(Σ_{i≤b} x_i Y_i)(p)` with `Y_1..Y_b`
    /// adapted to the flag restricted to `N`.
    Submanifold { name: String, params: Vec<Rat> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivilegedChart {
    pub center: Vec<Rat>,
    pub kind: ChartKind,
    pub adapted: Vec<AdaptedField>,
    pub weights: Vec<u32>,
    pub tangential_dim: usize,
    /// `Φ(x)` in coordinates `u = y − p`, exact through total degree `trunc`.
    pub map: Vec<Poly>,
    /// `Φ⁻¹(u)`, exact through total degree `trunc`.
    pub inverse: Vec<Poly>,
    pub trunc: u32,
    pub growth: GrowthProfile,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentFrame {
    pub fields: Vec<VecField>,
    pub weights: Vec<u32>,
    pub step: usize,
}

impl NilpotentFrame {
    pub fn frame(&self) -> Result<Frame> {
        Frame::new(self.fields.clone())
    }

    /// Every coefficient of `∂_j` has weighted degree `w_j − 1`.
    pub fn is_homogeneous(&self) -> bool {
        self.fields.iter().all(|f| {
            f.comps().iter().enumerate().all(|(j, c)| {
                c.terms()
                    .all(|(m, _)| crate::exactalg::poly::weighted_degree(m, &self.weights) + 1 == self.weights[j])
            })
        })
    }

    /// Whether all brackets of length `len` vanish identically.
    pub fn brackets_vanish_at(&self, len: usize) -> Result<bool> {
        let mut tower = BracketTower::new(&self.frame()?);
        Ok(tower.level(len).is_empty())
    }
}

/// `Σ_k Z^k(u_i)/k!` for `Z = Σ_j x_j Y_j(u)` in the ring with variables
/// `(x_1..x_n, u_1..u_n)`, truncated at total degree `trunc`.
fn lie_series(fields: &[(usize, &VecField)], n: usize, trunc: u32) -> Vec<Poly> {
    let nn = 2 * n;
    let z: Vec<Poly> = (0..n)
        .map(|l| {
            fields.iter().fold(Poly::zero(nn), |acc, (j, y)| {
                &acc + &(&Poly::var(*j, nn) * &y.comps()[l].embed(nn, n))
            })
        })
        .collect();
    let apply = |g: &Poly| -> Poly {
        let mut acc = Poly::zero(nn);
        for (l, zl) in z.iter().enumerate() {
            if zl.is_zero() {
                continue;
            }
            let d = g.partial(n + l);
            if !d.is_zero() {
                acc = &acc + &(zl * &d).truncate(trunc);
            }
        }
        acc
    };
    (0..n)
        .map(|i| {
            let mut term = Poly::var(n + i, nn);
            let mut sum = term.clone();
            let mut fact = Rat::one();
            for k in 1..=trunc {
                term = apply(&term);
                if term.is_zero() {
                    break;
                }
                fact *= Rat::from_integer(k.into());
                sum = &sum + &term.scale(&(Rat::one() / &fact));
            }
            sum
        })
        .collect()
}

fn at_u_zero(series: &[Poly], n: usize) -> Vec<Poly> {
    let images: Vec<Poly> = (0..2 * n)
        .map(|i| if i < n { Poly::var(i, n) } else { Poly::zero(n) })
        .collect();
    series.iter().map(|p| p.compose(&images)).collect()
}

fn exponential_map(adapted_u: &[VecField], split: Option<usize>, n: usize, trunc: u32) -> Vec<Poly> {
    match split {
        None => {
            let fields: Vec<(usize, &VecField)> = adapted_u.iter().enumerate().collect();
            at_u_zero(&lie_series(&fields, n, trunc), n)
        }
        Some(b) => {
            let inner: Vec<(usize, &VecField)> = adapted_u.iter().enumerate().take(b).collect();
            let outer: Vec<(usize, &VecField)> = adapted_u.iter().enumerate().skip(b).collect();
            let start = at_u_zero(&lie_series(&inner, n, trunc), n);
            let images: Vec<Poly> = (0..n).map(|i| Poly::var(i, n)).chain(start).collect();
            lie_series(&outer, n, trunc)
                .iter()
                .map(|p| p.compose_truncated(&images, trunc))
                .collect()
        }
    }
}

/// Solves `Φ(z) = u` by the iteration `z ← L⁻¹(u − H(z))`, `H = Φ − L`.
fn invert_series(map: &[Poly], n: usize, trunc: u32) -> Result<Vec<Poly>> {
    let mut lin = RatMatrix::zeros(n, n);
    for (i, p) in map.iter().enumerate() {
        for j in 0..n {
            let mut e = vec![0u32; n];
            e[j] = 1;
            let c = p
                .terms()
                .find(|(m, _)| m.exps() == e.as_slice())
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Rat::zero);
            lin.set(i, j, c);
        }
    }
    let inv = lin
        .inverse()
        .ok_or_else(|| Error::DependentAdaptedSet("adapted values at the center are dependent".into()))?;
    let higher: Vec<Poly> = map
        .iter()
        .map(|p| p.filter_weighted(&vec![1; n], |d| d >= 2))
        .collect();
    let apply_inv = |v: &[Poly]| -> Vec<Poly> {
        (0..n)
            .map(|i| {
                (0..n).fold(Poly::zero(n), |acc, j| &acc + &v[j].scale(inv.get(i, j)))
            })
            .collect()
    };
    let u: Vec<Poly> = (0..n).map(|i| Poly::var(i, n)).collect();
    let mut z = apply_inv(&u);
    for _ in 1..trunc {
        let h: Vec<Poly> = higher.iter().map(|p| p.compose_truncated(&z, trunc)).collect();
        let rhs: Vec<Poly> = u.iter().zip(&h).map(|(a, b)| a - b).collect();
        z = apply_inv(&rhs);
    }
    Ok(z)
}

impl PrivilegedChart {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `Φ⁻¹ ∘ Φ` minus the identity, through degree `trunc`; zero when consistent.
    pub fn inverse_defect(&self) -> Vec<Poly> {
        let n = self.dim();
        self.inverse
            .iter()
            .enumerate()
            .map(|(i, z)| &z.compose_truncated(&self.map, self.trunc) - &Poly::var(i, n))
            .collect()
    }

    /// Nonholonomic order at the center of each chart coordinate.
    pub fn coordinate_orders(&self, frame: &Frame) -> Result<Vec<Order>> {
        let shifted = frame.shifted(&self.center);
        let origin = vec![Rat::zero(); self.dim()];
        self.inverse
            .iter()
            .zip(&self.weights)
            .map(|(z, &w)| DerivativeTower::new(z, &shifted).order_at(&origin, w as usize + 1))
            .collect()
    }

    fn privilege_failure(&self, frame: &Frame) -> Result<Option<(usize, Order)>> {
        let orders = self.coordinate_orders(frame)?;
        Ok(orders
            .into_iter()
            .enumerate()
            .find(|(j, o)| *o != Order::Finite(self.weights[*j] as usize)))
    }
}

fn assemble(
    frame: &Frame,
    center: &[Rat],
    kind: ChartKind,
    adapted: Vec<AdaptedField>,
    tangential_dim: usize,
    growth: GrowthProfile,
    trunc: Option<u32>,
) -> Result<PrivilegedChart> {
    let n = frame.dim();
    let r = growth.step as u32;
    let trunc = trunc.unwrap_or(r + 2);
    if trunc < r {
        return Err(Error::InvalidInput(format!(
            "truncation order {trunc} is below the step {r}"
        )));
    }
    let weights: Vec<u32> = adapted.iter().map(|a| a.weight).collect();
    if weights.iter().map(|&w| w as usize).sum::<usize>() != growth.q {
        return Err(Error::DependentAdaptedSet(format!(
            "weights {weights:?} do not sum to Q = {}",
            growth.q
        )));
    }
    let adapted_u: Vec<VecField> = adapted.iter().map(|a| a.field.shifted(center)).collect();
    let split = match kind {
        ChartKind::Exponential => None,
        ChartKind::Submanifold { .. } => Some(tangential_dim),
    };
    let mut trunc = trunc;
    let mut raised = false;
    loop {
        let map = exponential_map(&adapted_u, split, n, trunc);
        let inverse = invert_series(&map, n, trunc)?;
        let chart = PrivilegedChart {
            center: center.to_vec(),
            kind: kind.clone(),
            adapted: adapted.clone(),
            weights: weights.clone(),
            tangential_dim,
            map,
            inverse,
            trunc,
            growth: growth.clone(),
        };
        match chart.privilege_failure(frame)? {
            None => return Ok(chart),
            Some(_) if !raised => {
                raised = true;
                trunc += r;
            }
            Some((j, found)) => {
                return Err(Error::TruncationInsufficient {
                    trunc,
                    coord: j + 1,
                    found: found.to_string(),
                    weight: weights[j],
                })
            }
        }
    }
}

/// Chart `exp(Σ x_i Y_i)(p)` built on the greedy adapted family at `pt`.
pub fn build_chart(structure: &mut Structure, pt: &[Rat], trunc: Option<u32>) -> Result<PrivilegedChart> {
    let growth = structure.growth(pt)?;
    let family = structure.adapted_family(pt)?;
    let frame = structure.frame().clone();
    let adapted = family
        .indices()
        .iter()
        .map(|i| Ok(AdaptedField::single(i.clone(), bracket_of(i, &frame)?, true)))
        .collect::<Result<Vec<_>>>()?;
    let n = frame.dim();
    assemble(&frame, pt, ChartKind::Exponential, adapted, n, growth, trunc)
}

/// Two-factor chart whose first `b` fields span `T_pN` layer by layer.
pub fn build_submanifold_chart(
    structure: &mut Structure,
    n_spec: &SubmanifoldSpec,
    params: &[Rat],
    trunc: Option<u32>,
) -> Result<PrivilegedChart> {
    let restricted = structure.restricted(n_spec, params)?;
    let growth = restricted.ambient.clone();
    let pt = growth.point.clone();
    let frame = structure.frame().clone();
    let n = frame.dim();
    let b = n_spec.dim();
    let jac = n_spec.jacobian_at(params)?;
    let mut tan_span = LinearSpan::new();
    let mut tangential: Vec<AdaptedField> = Vec::new();
    for layer in 1..=growth.step {
        let basis = structure.tower().up_to(layer);
        let values: Vec<Vec<Rat>> = basis.iter().map(|(_, f)| f.eval(&pt)).collect::<Result<_>>()?;
        let target = restricted.dims_n[layer - 1];
        for ((idx, f), v) in basis.iter().zip(&values) {
            if tan_span.dim() == target {
                break;
            }
            if jac.solve(v).is_some() && tan_span.insert(dense_key(v)) {
                let mut a = AdaptedField::single(idx.clone(), f.clone(), true);
                a.weight = layer as u32;
                tangential.push(a);
            }
        }
        if tan_span.dim() < target {
            let k = values.len();
            let mut cols = values.clone();
            cols.extend((0..b).map(|j| jac.column(j).iter().map(|c| -c).collect::<Vec<_>>()));
            for null in RatMatrix::from_columns(n, &cols).nullspace() {
                if tan_span.dim() == target {
                    break;
                }
                let coeffs = &null[..k];
                let v: Vec<Rat> = (0..n)
                    .map(|i| (0..k).fold(Rat::zero(), |acc, c| acc + &coeffs[c] * &values[c][i]))
                    .collect();
                if tan_span.insert(dense_key(&v)) {
                    let combo: Vec<(MultiIndex, Rat)> = coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(c, v)| (basis[c].0.clone(), v.clone()))
                        .collect();
                    let field = combo
                        .iter()
                        .fold(VecField::zero(n), |acc, (i, c)| {
                            let f = &basis.iter().find(|(j, _)| j == i).expect("in basis").1;
                            acc.add(&f.scale(c))
                        });
                    tangential.push(AdaptedField {
                        combo,
                        field,
                        weight: layer as u32,
                        tangential: true,
                    });
                }
            }
        }
        if tan_span.dim() != target {
            return Err(Error::DependentAdaptedSet(format!(
                "restricted layer {layer} has dimension {target} but only {} tangent fields were found",
                tan_span.dim()
            )));
        }
    }
    let mut span = LinearSpan::new();
    for a in &tangential {
        span.insert(dense_key(&a.field.eval(&pt)?));
    }
    let mut transversal = Vec::new();
    for layer in 1..=growth.step {
        for (idx, f) in structure.tower().level(layer).to_vec() {
            if span.dim() == n {
                break;
            }
            if span.insert(dense_key(&f.eval(&pt)?)) {
                transversal.push(AdaptedField::single(idx, f, false));
            }
        }
    }
    let mut adapted = tangential;
    adapted.extend(transversal);
    let kind = ChartKind::Submanifold {
        name: n_spec.name().to_string(),
        params: params.to_vec(),
    };
    assemble(&frame, &pt, kind, adapted, b, growth, trunc)
}

/// Weighted-degree `−1` part of the frame written in chart coordinates.
pub fn nilpotentize(frame: &Frame, chart: &PrivilegedChart) -> Result<NilpotentFrame> {
    let shifted = frame.shifted(&chart.center);
    let t = chart.trunc.saturating_sub(1);
    let w = &chart.weights;
    let mut fields = Vec::with_capacity(frame.rank());
    for (i, x) in shifted.fields().iter().enumerate() {
        let mut comps = Vec::with_capacity(frame.dim());
        for (j, z) in chart.inverse.iter().enumerate() {
            let g = x.apply(z).truncate(t).compose_truncated(&chart.map, t);
            if g.min_weighted_degree(w).is_some_and(|d| d + 1 < w[j]) {
                return Err(Error::NonHomogeneous {
                    field: i + 1,
                    component: j + 1,
                });
            }
            comps.push(g.filter_weighted(w, |d| d + 1 == w[j]));
        }
        fields.push(VecField::new(comps)?);
    }
    Ok(NilpotentFrame {
        fields,
        weights: w.clone(),
        step: chart.growth.step,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatForm {
    /// `ω_p(Y_1(p), …, Y_b(p))`.
    pub scalar: Rat,
    pub lengths: Vec<usize>,
    pub hat_fields: Vec<VecField>,
}

/// `ω_p(Y(p))` for `ω = density · dt_1 ∧ … ∧ dt_b` on `N`, and
/// `Ŷ_i = Σ_{|I| = ℓ(Y_i)} c_{iI} X̂_I` where `Y_i(p) = Σ c_{iI} X_I(p)`
/// over the adapted family at `p`.
pub fn hat_form(
    structure: &mut Structure,
    chart: &PrivilegedChart,
    hat: &NilpotentFrame,
    n_spec: &SubmanifoldSpec,
    density: &Poly,
    ys: &[VecField],
) -> Result<HatForm> {
    let pt = &chart.center;
    let n = pt.len();
    let b = n_spec.dim();
    if ys.len() != b {
        return Err(Error::DimensionMismatch(format!(
            "{} fields given for a {b}-dimensional submanifold",
            ys.len()
        )));
    }
    let params = n_spec
        .locate(pt)
        .ok_or_else(|| Error::PointNotOnSubmanifold(n_spec.name().to_string()))?;
    let jac = n_spec.jacobian_at(&params)?;
    let mut coords = Vec::with_capacity(b);
    for (i, y) in ys.iter().enumerate() {
        let v = y.eval(pt)?;
        let c = jac
            .solve(&v)
            .ok_or_else(|| Error::DependentAdaptedSet(format!("Y{} is not tangent to {}", i + 1, n_spec.name())))?;
        coords.push(c);
    }
    let cmat = RatMatrix::from_columns(b, &coords);
    let det = if b == 0 { Rat::one() } else { cmat.det() };
    if det.is_zero() {
        return Err(Error::DependentAdaptedSet("the given fields are dependent at the point".into()));
    }
    let scalar = density.eval(&params)? * det;
    let family = structure.adapted_family(pt)?;
    let frame = structure.frame().clone();
    let fam_cols: Vec<Vec<Rat>> = family
        .fields(&frame)?
        .iter()
        .map(|f| f.eval(pt))
        .collect::<Result<_>>()?;
    let basis = RatMatrix::from_columns(n, &fam_cols);
    let hat_frame = hat.frame()?;
    let mut lengths = Vec::with_capacity(b);
    let mut hat_fields = Vec::with_capacity(b);
    for y in ys {
        let c = basis
            .solve(&y.eval(pt)?)
            .ok_or_else(|| Error::DependentAdaptedSet("adapted family does not span".into()))?;
        let len = family
            .indices()
            .iter()
            .zip(&c)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i.len())
            .max()
            .unwrap_or(0);
        let mut acc = VecField::zero(n);
        for (idx, coef) in family.indices().iter().zip(&c) {
            if idx.len() == len && !coef.is_zero() {
                acc = acc.add(&bracket_of(idx, &hat_frame)?.scale(coef));
            }
        }
        lengths.push(len);
        hat_fields.push(acc);
    }
    Ok(HatForm {
        scalar,
        lengths,
        hat_fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};
    use crate::flags::growth_vector;
    use crate::testframes::*;

    fn chart_at(frame: &Frame, p: &[Rat]) -> PrivilegedChart {
        build_chart(&mut Structure::new(frame, 10), p, None).unwrap()
    }

    #[test]
    fn martinet_origin_chart() {
        let f = martinet();
        let c = chart_at(&f, &pt(&[0, 0, 0]));
        assert_eq!(c.weights, vec![1, 1, 3]);
        let x = |i| Poly::var(i, 3);
        let expect3 = &x(2) + &(&x(0).pow(2) * &x(1)).scale(&rat(1, 6));
        assert_eq!(c.map, vec![x(0), x(1), expect3]);
        assert!(c.inverse_defect().iter().all(Poly::is_zero));
        let hat = nilpotentize(&f, &c).unwrap();
        assert!(hat.is_homogeneous());
        let z1z2 = (&x(0) * &x(1)).scale(&rat(-1, 3));
        let z1sq = x(0).pow(2).scale(&rat(1, 3));
        assert_eq!(hat.fields[0].comps(), &[Poly::one(3), Poly::zero(3), z1z2]);
        assert_eq!(hat.fields[1].comps(), &[Poly::zero(3), Poly::one(3), z1sq]);
        let hf = hat.frame().unwrap();
        let b = bracket_of(&MultiIndex::new(vec![1, 1, 2]).unwrap(), &hf).unwrap();
        assert_eq!(b, VecField::coordinate(2, 3));
        assert!(hat.brackets_vanish_at(4).unwrap());
    }

    #[test]
    fn martinet_regular_chart() {
        let f = martinet();
        let c = chart_at(&f, &pt(&[1, 0, 0]));
        assert_eq!(c.weights, vec![1, 1, 2]);
        let x = |i| Poly::var(i, 3);
        let half = rat(1, 2);
        let phi3 = &(&(&(&x(2) + &x(1).scale(&half)) + &(&x(0) * &x(1)).scale(&half))
            + &(&x(0) * &x(2)).scale(&half))
            + &(&x(0).pow(2) * &x(1)).scale(&rat(1, 6));
        assert_eq!(c.map[2], phi3);
        let hat = nilpotentize(&f, &c).unwrap();
        assert_eq!(hat.fields[0].comps()[2], x(1).scale(&rat(-1, 2)));
        assert_eq!(hat.fields[1].comps()[2], x(0).scale(&half));
        assert!(hat.brackets_vanish_at(3).unwrap());
    }

    #[test]
    fn privilege_and_nilpotent_growth_on_fixtures() {
        let cases: Vec<(Frame, Vec<Vec<Rat>>)> = vec![
            (martinet(), vec![pt(&[0, 0, 0]), pt(&[1, 0, 0])]),
            (example2(), vec![pt(&[0, 0, 0, 0]), pt(&[1, 1, 0, 0])]),
            (example3(3), vec![pt(&[0, 0, 0, 0, 0]), pt(&[1, 0, 0, 0, 0])]),
            (example4(3), vec![pt(&[0, 0, 0, 0, 0]), pt(&[1, 1, 0, 0, 0])]),
        ];
        for (f, pts) in cases {
            for p in pts {
                let c = chart_at(&f, &p);
                let g = growth_vector(&f, &p, 10).unwrap();
                assert_eq!(c.weights.iter().sum::<u32>() as usize, g.q);
                let orders = c.coordinate_orders(&f).unwrap();
                let expect: Vec<Order> = c.weights.iter().map(|&w| Order::Finite(w as usize)).collect();
                assert_eq!(orders, expect);
                assert!(c.inverse_defect().iter().all(Poly::is_zero));
                let hat = nilpotentize(&f, &c).unwrap();
                assert!(hat.is_homogeneous());
                assert!(hat.brackets_vanish_at(g.step + 1).unwrap());
                let origin = vec![Rat::zero(); f.dim()];
                let gh = growth_vector(&hat.frame().unwrap(), &origin, 10).unwrap();
                assert_eq!(gh.dims, g.dims);
            }
        }
    }

    #[test]
    fn submanifold_chart_and_hat_form() {
        let f = martinet();
        let n_spec = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        let mut s = Structure::new(&f, 10);
        let c = build_submanifold_chart(&mut s, &n_spec, &pt(&[0, 0]), None).unwrap();
        let labels: Vec<String> = c.adapted.iter().map(|a| a.to_string()).collect();
        assert_eq!(labels, ["X(2)", "X(1,1,2)", "X(1)"]);
        assert_eq!(c.weights, vec![1, 3, 1]);
        let hat = nilpotentize(&f, &c).unwrap();
        assert!(hat.is_homogeneous());
        let ys: Vec<VecField> = c.adapted[..2].iter().map(|a| a.field.clone()).collect();
        let h = hat_form(&mut s, &c, &hat, &n_spec, &Poly::one(2), &ys).unwrap();
        assert_eq!(h.scalar, int(1));
        assert_eq!(h.lengths, vec![1, 3]);
        let dup = vec![ys[0].clone(), ys[0].clone()];
        assert!(matches!(
            hat_form(&mut s, &c, &hat, &n_spec, &Poly::one(2), &dup),
            Err(Error::DependentAdaptedSet(_))
        ));
    }

    #[test]
    fn hat_form_open_case_matches_family_volume() {
        let f = martinet();
        let p = vec![rat(1, 2), int(0), int(0)];
        let mut s = Structure::new(&f, 10);
        let c = build_chart(&mut s, &p, None).unwrap();
        let hat = nilpotentize(&f, &c).unwrap();
        let whole = SubmanifoldSpec::whole_space(3);
        let ys: Vec<VecField> = c.adapted.iter().map(|a| a.field.clone()).collect();
        let h = hat_form(&mut s, &c, &hat, &whole, &Poly::one(3), &ys).unwrap();
        assert_eq!(h.scalar, rat(1, 2));
        assert_eq!(h.hat_fields[..2], hat.fields[..]);
    }

    #[test]
    fn submanifold_charts_on_examples() {
        for (f, z) in [(example2(), vec![0, 1]), (example3(3), vec![0]), (example4(3), vec![0, 1])] {
            let n = f.dim();
            let n_spec = SubmanifoldSpec::coordinate_subspace("N", n, &z).unwrap();
            let mut s = Structure::new(&f, 10);
            let t = vec![Rat::zero(); n_spec.dim()];
            let c = build_submanifold_chart(&mut s, &n_spec, &t, None).unwrap();
            let r = s.restricted(&n_spec, &t).unwrap();
            let tan: u32 = c.weights[..n_spec.dim()].iter().sum();
            assert_eq!(tan as usize, r.q_n);
            let hat = nilpotentize(&f, &c).unwrap();
            assert!(hat.is_homogeneous());
            let origin = vec![Rat::zero(); n];
            assert_eq!(growth_vector(&hat.frame().unwrap(), &origin, 10).unwrap().dims, r.ambient.dims);
        }
    }
}
