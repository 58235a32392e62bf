//! Nonholonomic orders, volumes of bracket families, the exponents
//! `σ₋ ≤ σ₊` and the quantity `ν_q`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::brackets::{enumerate_brackets, BracketFamily, Frame, MultiIndex, VecField};
use crate::error::{Error, Result};
use crate::exactalg::rat::rat;
use crate::exactalg::{LinearSpan, Monomial, Poly, PolyMatrix, Rat, RatMatrix};
use crate::flags::Structure;
use crate::submanifold::SubmanifoldSpec;

pub const DEFAULT_FAMILY_BUDGET: usize = 200_000;

/// `ϖ = density · dx_1 ∧ … ∧ dx_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm {
    density: Poly,
}

impl VolumeForm {
    pub fn new(density: Poly) -> Result<Self> {
        if density.is_zero() {
            return Err(Error::InvalidInput("volume density is identically zero".into()));
        }
        if density.nparams() != 0 {
            return Err(Error::UninstantiatedParameter);
        }
        Ok(VolumeForm { density })
    }

    pub fn canonical(n: usize) -> Self {
        VolumeForm {
            density: Poly::one(n),
        }
    }

    pub fn density(&self) -> &Poly {
        &self.density
    }
}

/// A nonholonomic order, or the cap below which every derivative vanished.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(usize),
    AboveCap(usize),
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(j) => Some(j),
            Order::AboveCap(_) => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(j) => write!(f, "{j}"),
            Order::AboveCap(c) => write!(f, ">{c}"),
        }
    }
}

fn poly_key(p: &Poly) -> BTreeMap<Monomial, Rat> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Rational bases of `{X_w f : |w| = j}`, level by level.
#[derive(Clone, Debug)]
pub struct DerivativeTower<'a> {
    frame: &'a Frame,
    levels: Vec<Vec<Poly>>,
}

impl<'a> DerivativeTower<'a> {
    pub fn new(f: &Poly, frame: &'a Frame) -> Self {
        let levels = if f.is_zero() { vec![Vec::new()] } else { vec![vec![f.clone()]] };
        DerivativeTower { frame, levels }
    }

    pub fn level(&mut self, j: usize) -> &[Poly] {
        while self.levels.len() <= j {
            let prev = self.levels.last().expect("level zero exists");
            let mut span = LinearSpan::new();
            let mut next = Vec::new();
            for x in self.frame.fields() {
                for g in prev {
                    let d = x.apply(g);
                    if !d.is_zero() && span.insert(poly_key(&d)) {
                        next.push(d);
                    }
                }
            }
            self.levels.push(next);
        }
        &self.levels[j]
    }

    pub fn order_at(&mut self, pt: &[Rat], cap: usize) -> Result<Order> {
        for j in 0..=cap {
            for g in self.level(j) {
                if !g.eval(pt)?.is_zero() {
                    return Ok(Order::Finite(j));
                }
            }
        }
        Ok(Order::AboveCap(cap))
    }

    /// Smallest `j` with some level-`j` derivative not vanishing identically on `N`.
    pub fn order_along(&mut self, n_spec: &SubmanifoldSpec, cap: usize) -> Order {
        for j in 0..=cap {
            if self.level(j).iter().any(|g| !g.compose(n_spec.map()).is_zero()) {
                return Order::Finite(j);
            }
        }
        Order::AboveCap(cap)
    }
}

pub fn nonholonomic_order(f: &Poly, frame: &Frame, pt: &[Rat], cap: usize) -> Result<Order> {
    DerivativeTower::new(f, frame).order_at(pt, cap)
}

pub fn family_volume(family: &BracketFamily, frame: &Frame, vol: &VolumeForm) -> Result<Poly> {
    let fields = family.fields(frame)?;
    volume_of_fields(&fields, frame.dim(), vol)
}

fn volume_of_fields(fields: &[VecField], n: usize, vol: &VolumeForm) -> Result<Poly> {
    if fields.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "family has {} members in dimension {n}",
            fields.len()
        )));
    }
    let cols: Vec<Vec<Poly>> = fields.iter().map(|f| f.comps().to_vec()).collect();
    Ok(vol.density() * &PolyMatrix::from_columns(&cols).det()?)
}

/// Caps governing the order analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderCaps {
    pub order: usize,
    pub bracket_len: usize,
    pub family_budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOrder {
    pub family: BracketFamily,
    pub volume: Poly,
    pub generic_order: Order,
    pub sampled_orders: Vec<Order>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderResult {
    pub sigma_minus: Order,
    pub sigma_plus: Order,
    pub sigma: Option<usize>,
    pub q_ref: usize,
    /// Whether every family's order at every sample equals its generic order.
    pub samples_agree: bool,
    pub families: Vec<FamilyOrder>,
    pub witnesses: Vec<BracketFamily>,
    pub caps: OrderCaps,
    pub samples: Vec<Vec<Rat>>,
}

/// Rational points used to certify generic independence cheaply.
fn probe_point(n: usize, salt: usize) -> Vec<Rat> {
    const NUM: [i64; 8] = [3, -5, 7, 11, -13, 17, 19, -23];
    const DEN: [i64; 8] = [7, 11, 13, 5, 17, 3, 29, 31];
    (0..n)
        .map(|i| rat(NUM[(i + salt) % 8] + salt as i64, DEN[(i + 2 * salt) % 8]))
        .collect()
}

struct FamilySearch<'a, F> {
    lens: &'a [usize],
    n: usize,
    q_ref: usize,
    min_len: usize,
    max_len: usize,
    budget: usize,
    visited: usize,
    keep: F,
    out: Vec<Vec<usize>>,
}

impl<F: FnMut(&[usize]) -> bool> FamilySearch<'_, F> {
    fn run(&mut self, start: usize, sum: usize, stack: &mut Vec<usize>) -> Result<()> {
        if stack.len() == self.n {
            if sum == self.q_ref {
                self.out.push(stack.clone());
            }
            return Ok(());
        }
        let rem = self.n - stack.len() - 1;
        for i in start..self.lens.len() {
            let s = sum + self.lens[i];
            if s + rem * self.min_len > self.q_ref || s + rem * self.max_len < self.q_ref {
                continue;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::EnumerationOverflow { budget: self.budget });
            }
            stack.push(i);
            if (self.keep)(stack) {
                self.run(i + 1, s, stack)?;
            }
            stack.pop();
        }
        Ok(())
    }
}

/// `n`-subsets of `candidates` (in order) with total length `q_ref`,
/// skipping extensions of partial sets rejected by `keep`.
fn enumerate_families<F>(
    candidates: &[MultiIndex],
    n: usize,
    q_ref: usize,
    budget: usize,
    keep: F,
) -> Result<Vec<Vec<usize>>>
where
    F: FnMut(&[usize]) -> bool,
{
    let lens: Vec<usize> = candidates.iter().map(MultiIndex::len).collect();
    let mut search = FamilySearch {
        min_len: lens.iter().copied().min().unwrap_or(1),
        max_len: lens.iter().copied().max().unwrap_or(1),
        lens: &lens,
        n,
        q_ref,
        budget,
        visited: 0,
        keep,
        out: Vec::new(),
    };
    search.run(0, 0, &mut Vec::new())?;
    Ok(search.out)
}

/// Keeps partial families whose fields are independent over the function field.
struct GenericIndependence<'a> {
    fields: &'a [VecField],
    probes: Vec<Vec<Vec<Rat>>>,
}

impl<'a> GenericIndependence<'a> {
    fn new(fields: &'a [VecField], n: usize) -> Result<Self> {
        let probes = (0..2)
            .map(|s| {
                let p = probe_point(n, s);
                fields.iter().map(|f| f.eval(&p)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GenericIndependence { fields, probes })
    }

    fn check(&self, set: &[usize]) -> bool {
        let n = self.fields[0].dim();
        for values in &self.probes {
            let cols: Vec<Vec<Rat>> = set.iter().map(|&i| values[i].clone()).collect();
            if RatMatrix::from_columns(n, &cols).rank() == set.len() {
                return true;
            }
        }
        let cols: Vec<Vec<Poly>> = set.iter().map(|&i| self.fields[i].comps().to_vec()).collect();
        PolyMatrix::from_columns(&cols).generic_rank() == set.len()
    }
}

/// Exponents `σ₋ = min_F ord_N(F)` (generic order along `N`) and
/// `σ₊ = max_q min_F ord_q(F)` over the sample points `q`, where `F` runs
/// over families of total length `q_ref`. Families are drawn from the
/// rational bracket bases of each length: by multilinearity the volume of
/// any family is a rational combination of theirs, so both extrema agree
/// with the full enumeration.
pub fn sigma_bounds(
    structure: &mut Structure,
    vol: &VolumeForm,
    n_spec: &SubmanifoldSpec,
    q_ref: usize,
    caps: OrderCaps,
    samples: &[Vec<Rat>],
) -> Result<OrderResult> {
    let frame = structure.frame().clone();
    let n = frame.dim();
    if q_ref < n {
        return Err(Error::NoFamilies { q_ref, n });
    }
    let max_len = caps.bracket_len.min(q_ref + 1 - n).max(1);
    let basis = structure.tower().up_to(max_len);
    let candidates: Vec<MultiIndex> = basis.iter().map(|(i, _)| i.clone()).collect();
    let fields: Vec<VecField> = basis.into_iter().map(|(_, f)| f).collect();
    let indep = GenericIndependence::new(&fields, n)?;
    let sets = enumerate_families(&candidates, n, q_ref, caps.family_budget, |s| indep.check(s))?;
    if sets.is_empty() {
        return Err(Error::NoFamilies { q_ref, n });
    }
    let points: Vec<Vec<Rat>> = samples
        .iter()
        .map(|t| n_spec.point_at(t))
        .collect::<Result<_>>()?;
    let mut families = Vec::with_capacity(sets.len());
    for set in sets {
        let family = BracketFamily::new(set.iter().map(|&i| candidates[i].clone()).collect());
        let members: Vec<VecField> = set.iter().map(|&i| fields[i].clone()).collect();
        let volume = volume_of_fields(&members, n, vol)?;
        let mut tower = DerivativeTower::new(&volume, &frame);
        let generic_order = tower.order_along(n_spec, caps.order);
        let sampled_orders = points
            .iter()
            .map(|q| tower.order_at(q, caps.order))
            .collect::<Result<Vec<_>>>()?;
        families.push(FamilyOrder {
            family,
            volume,
            generic_order,
            sampled_orders,
        });
    }
    let sigma_minus = families
        .iter()
        .map(|f| f.generic_order)
        .min()
        .expect("nonempty");
    let sigma_plus = (0..points.len())
        .map(|k| {
            families
                .iter()
                .map(|f| f.sampled_orders[k])
                .min()
                .expect("nonempty")
        })
        .max()
        .unwrap_or(sigma_minus);
    let samples_agree = families
        .iter()
        .all(|f| f.sampled_orders.iter().all(|&o| o == f.generic_order));
    let sigma = match (sigma_minus, sigma_plus) {
        (Order::Finite(a), Order::Finite(b)) if a == b => Some(a),
        _ => None,
    };
    let witnesses = families
        .iter()
        .filter(|f| f.generic_order == sigma_minus)
        .map(|f| f.family.clone())
        .collect();
    Ok(OrderResult {
        sigma_minus,
        sigma_plus,
        sigma,
        q_ref,
        samples_agree,
        families,
        witnesses,
        caps,
        samples: samples.to_vec(),
    })
}

/// Every family of `n` distinct nonzero brackets with total length `q_ref`
/// whose volume is not identically zero, with that volume.
pub fn volume_families(
    frame: &Frame,
    vol: &VolumeForm,
    q_ref: usize,
    bracket_len: usize,
    budget: usize,
) -> Result<Vec<(BracketFamily, Poly)>> {
    let n = frame.dim();
    if q_ref < n {
        return Err(Error::NoFamilies { q_ref, n });
    }
    let max_len = bracket_len.min(q_ref + 1 - n).max(1);
    let entries: Vec<_> = enumerate_brackets(frame, max_len)
        .into_iter()
        .filter(|e| !e.is_zero)
        .collect();
    let candidates: Vec<MultiIndex> = entries.iter().map(|e| e.index.clone()).collect();
    let fields: Vec<VecField> = entries.into_iter().map(|e| e.field).collect();
    let indep = GenericIndependence::new(&fields, n)?;
    let sets = enumerate_families(&candidates, n, q_ref, budget, |s| indep.check(s))?;
    sets.into_iter()
        .map(|set| {
            let members: Vec<VecField> = set.iter().map(|&i| fields[i].clone()).collect();
            let family = BracketFamily::new(set.iter().map(|&i| candidates[i].clone()).collect());
            Ok((family, volume_of_fields(&members, n, vol)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuValue {
    pub value: Rat,
    pub argmax: Vec<BracketFamily>,
}

/// `ν_q = max_F |ϖ_q(X_{I_1}(q), …, X_{I_n}(q))|` over families of total length `q_ref`.
pub fn nu_at(
    frame: &Frame,
    vol: &VolumeForm,
    pt: &[Rat],
    q_ref: usize,
    bracket_len: usize,
    budget: usize,
) -> Result<NuValue> {
    nu_from_families(&volume_families(frame, vol, q_ref, bracket_len, budget)?, pt, q_ref)
}

pub fn nu_from_families(families: &[(BracketFamily, Poly)], pt: &[Rat], q_ref: usize) -> Result<NuValue> {
    let mut best = Rat::zero();
    let mut argmax = Vec::new();
    for (fam, v) in families {
        let a = v.eval(pt)?.abs();
        if a > best {
            best = a;
            argmax = vec![fam.clone()];
        } else if a == best && !a.is_zero() {
            argmax.push(fam.clone());
        }
    }
    if best.is_zero() {
        return Err(Error::AllFamiliesVanish { q_ref });
    }
    Ok(NuValue { value: best, argmax })
}

/// The family volumes with duplicates up to sign removed.
pub fn distinct_volumes(families: &[(BracketFamily, Poly)]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for (_, v) in families {
        let neg = -v;
        if !out.iter().any(|w| w == v || *w == neg) {
            out.push(v.clone());
        }
    }
    out
}
