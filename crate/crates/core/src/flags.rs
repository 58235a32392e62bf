//! Growth vectors, the weighted dimension `Q`, regular/singular points,
//! restricted flags on submanifolds and strong equiregularity.

use num_traits::Zero;

use crate::brackets::{BracketFamily, BracketTower, Frame, MultiIndex};
use crate::error::{Error, Result};
use crate::exactalg::span::dense_key;
use crate::exactalg::{LinearSpan, Poly, PolyMatrix, Rat};
use crate::submanifold::SubmanifoldSpec;

pub const DEFAULT_STEP_CAP: usize = 10;

/// `Σ i (n_i − n_{i−1})` with `n_0 = 0`.
pub fn weighted_sum(dims: &[usize]) -> usize {
    let mut prev = 0;
    let mut q = 0;
    for (i, &d) in dims.iter().enumerate() {
        q += (i + 1) * (d - prev);
        prev = d;
    }
    q
}

/// `Σ_{i=0}^{r−1} (n_r − n_i)` with `n_0 = 0`; equals [`weighted_sum`].
pub fn codim_sum(dims: &[usize]) -> usize {
    let Some(&top) = dims.last() else {
        return 0;
    };
    std::iter::once(0)
        .chain(dims[..dims.len() - 1].iter().copied())
        .map(|d| top - d)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub dims: Vec<usize>,
    pub step: usize,
    pub q: usize,
    pub point: Vec<Rat>,
}

/// Ranks over the function field, i.e. at generic points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericGrowth {
    pub dims: Vec<usize>,
    pub step: usize,
    pub q: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedProfile {
    pub dims_n: Vec<usize>,
    pub q_n: usize,
    pub r_not_n: usize,
    pub params: Vec<Rat>,
    pub ambient: GrowthProfile,
}

/// Ambient and restricted ranks of the bracket matrices composed with the
/// parametrization, over the function field of the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRestricted {
    pub dims: Vec<usize>,
    pub dims_n: Vec<usize>,
    pub q: usize,
    pub q_n: usize,
    pub r_not_n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub params: Vec<Rat>,
    pub point: Vec<Rat>,
    pub dims: Vec<usize>,
    pub dims_n: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquiregCheck {
    pub holds_on_samples: bool,
    pub matches_generic: bool,
    pub generic: GenericRestricted,
    pub samples_checked: usize,
    pub witnesses: Vec<Witness>,
}

impl EquiregCheck {
    /// Both sample constancy and agreement with the generic ranks.
    pub fn holds(&self) -> bool {
        self.holds_on_samples && self.matches_generic
    }
}

/// Sampled check that every singular point near `N` lies on `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularSetSurrogate {
    pub probes: usize,
    pub singular_off_n: Vec<Vec<Rat>>,
}

impl SingularSetSurrogate {
    pub fn holds(&self) -> bool {
        self.singular_off_n.is_empty()
    }
}

fn r_not_n(dims: &[usize], dims_n: &[usize]) -> usize {
    let mut out = 0;
    for i in 0..dims.len() {
        let (a0, b0) = if i == 0 { (0, 0) } else { (dims[i - 1], dims_n[i - 1]) };
        if dims[i] - a0 > dims_n[i] - b0 {
            out = i + 1;
        }
    }
    out
}

fn pad(dims: &[usize], len: usize) -> Vec<usize> {
    let mut v = dims.to_vec();
    let last = v.last().copied().unwrap_or(0);
    v.resize(len.max(v.len()), last);
    v
}

fn same_flag(a: &[usize], b: &[usize]) -> bool {
    let len = a.len().max(b.len());
    pad(a, len) == pad(b, len)
}

/// A frame together with its bracket tower and cached generic growth.
#[derive(Clone, Debug)]
pub struct Structure {
    tower: BracketTower,
    cap: usize,
    generic: Option<GenericGrowth>,
}

impl Structure {
    pub fn new(frame: &Frame, cap: usize) -> Self {
        Structure {
            tower: BracketTower::new(frame),
            cap: cap.max(1),
            generic: None,
        }
    }

    pub fn frame(&self) -> &Frame {
        self.tower.frame()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn tower(&mut self) -> &mut BracketTower {
        &mut self.tower
    }

    fn dim(&self) -> usize {
        self.tower.frame().dim()
    }

    fn check_point(&self, pt: &[Rat]) -> Result<()> {
        if pt.len() != self.dim() {
            return Err(Error::Arity {
                expected: self.dim(),
                got: pt.len(),
            });
        }
        Ok(())
    }

    pub fn growth(&mut self, pt: &[Rat]) -> Result<GrowthProfile> {
        self.check_point(pt)?;
        let n = self.dim();
        let mut span = LinearSpan::new();
        let mut dims = Vec::new();
        for len in 1..=self.cap {
            for (_, f) in self.tower.level(len) {
                if span.dim() == n {
                    break;
                }
                span.insert(dense_key(&f.eval(pt)?));
            }
            dims.push(span.dim());
            if span.dim() == n {
                let q = weighted_sum(&dims);
                return Ok(GrowthProfile {
                    step: dims.len(),
                    dims,
                    q,
                    point: pt.to_vec(),
                });
            }
        }
        Err(Error::NotBracketGeneratingWithinCap {
            cap: self.cap,
            reached: span.dim(),
            dim: n,
        })
    }

    pub fn generic(&mut self) -> Result<GenericGrowth> {
        if let Some(g) = &self.generic {
            return Ok(g.clone());
        }
        let n = self.dim();
        let mut dims = Vec::new();
        for len in 1..=self.cap {
            let cols: Vec<Vec<Poly>> = self
                .tower
                .up_to(len)
                .into_iter()
                .map(|(_, f)| f.comps().to_vec())
                .collect();
            let rank = PolyMatrix::from_columns(&cols).generic_rank();
            dims.push(rank);
            if rank == n {
                let g = GenericGrowth {
                    step: dims.len(),
                    q: weighted_sum(&dims),
                    dims,
                };
                self.generic = Some(g.clone());
                return Ok(g);
            }
        }
        Err(Error::NotBracketGeneratingWithinCap {
            cap: self.cap,
            reached: *dims.last().unwrap_or(&0),
            dim: n,
        })
    }

    pub fn classify(&mut self, pt: &[Rat]) -> Result<PointClass> {
        let g = self.growth(pt)?;
        let generic = self.generic()?;
        Ok(if same_flag(&g.dims, &generic.dims) {
            PointClass::Regular
        } else {
            PointClass::Singular
        })
    }

    /// Greedy choice in (length, lex) order of brackets independent at `pt`.
    pub fn adapted_family(&mut self, pt: &[Rat]) -> Result<BracketFamily> {
        let profile = self.growth(pt)?;
        let n = self.dim();
        let mut span = LinearSpan::new();
        let mut chosen: Vec<MultiIndex> = Vec::new();
        for len in 1..=profile.step {
            for (idx, f) in self.tower.level(len) {
                if span.dim() == n {
                    break;
                }
                if span.insert(dense_key(&f.eval(pt)?)) {
                    chosen.push(idx.clone());
                }
            }
        }
        Ok(BracketFamily::new(chosen))
    }

    pub fn restricted(&mut self, n_spec: &SubmanifoldSpec, params: &[Rat]) -> Result<RestrictedProfile> {
        if n_spec.ambient() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "submanifold {} lives in R^{}, frame in R^{}",
                n_spec.name(),
                n_spec.ambient(),
                self.dim()
            )));
        }
        if params.len() != n_spec.dim() {
            return Err(Error::Arity {
                expected: n_spec.dim(),
                got: params.len(),
            });
        }
        let q = n_spec.point_at(params)?;
        let jac = n_spec.jacobian_at(params)?;
        let b = n_spec.dim();
        let rank_b = jac.rank();
        if rank_b < b {
            return Err(Error::NotImmersion { rank: rank_b, dim: b });
        }
        let ambient = self.growth(&q)?;
        let mut joint = LinearSpan::new();
        for j in 0..b {
            joint.insert(dense_key(&jac.column(j)));
        }
        let mut dims_n = Vec::with_capacity(ambient.step);
        for len in 1..=ambient.step {
            for (_, f) in self.tower.level(len) {
                joint.insert(dense_key(&f.eval(&q)?));
            }
            dims_n.push(ambient.dims[len - 1] + b - joint.dim());
        }
        Ok(RestrictedProfile {
            q_n: weighted_sum(&dims_n),
            r_not_n: r_not_n(&ambient.dims, &dims_n),
            dims_n,
            params: params.to_vec(),
            ambient,
        })
    }

    pub fn generic_restricted(&mut self, n_spec: &SubmanifoldSpec) -> Result<GenericRestricted> {
        let n = self.dim();
        let b = n_spec.dim();
        let map = n_spec.map();
        let src: Vec<Vec<Poly>> = (0..b)
            .map(|j| (0..n).map(|i| n_spec.jacobian().get(i, j).clone()).collect())
            .collect();
        let mut cols: Vec<Vec<Poly>> = Vec::new();
        let mut dims = Vec::new();
        let mut dims_n = Vec::new();
        for len in 1..=self.cap {
            for (_, f) in self.tower.level(len) {
                cols.push(f.comps().iter().map(|c| c.compose(map)).collect());
            }
            let rank = generic_rank_cols(&cols, n, b);
            let mut with_b = cols.clone();
            with_b.extend(src.iter().cloned());
            let joint = generic_rank_cols(&with_b, n, b);
            dims.push(rank);
            dims_n.push(rank + b - joint);
            if rank == n {
                return Ok(GenericRestricted {
                    q: weighted_sum(&dims),
                    q_n: weighted_sum(&dims_n),
                    r_not_n: r_not_n(&dims, &dims_n),
                    dims,
                    dims_n,
                });
            }
        }
        Err(Error::NotBracketGeneratingWithinCap {
            cap: self.cap,
            reached: *dims.last().unwrap_or(&0),
            dim: n,
        })
    }

    pub fn equireg_check(&mut self, n_spec: &SubmanifoldSpec, samples: &[Vec<Rat>]) -> Result<EquiregCheck> {
        let generic = self.generic_restricted(n_spec)?;
        let mut witnesses = Vec::new();
        let mut first: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut holds_on_samples = true;
        let mut matches_generic = true;
        for t in samples {
            let point = n_spec.point_at(t).unwrap_or_default();
            let prof = match self.restricted(n_spec, t) {
                Ok(p) => p,
                Err(e) => {
                    holds_on_samples = false;
                    matches_generic = false;
                    witnesses.push(Witness {
                        params: t.clone(),
                        point,
                        dims: Vec::new(),
                        dims_n: Vec::new(),
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let dims = prof.ambient.dims.clone();
            let dims_n = prof.dims_n.clone();
            let mut reasons = Vec::new();
            match &first {
                None => first = Some((dims.clone(), dims_n.clone())),
                Some((d0, dn0)) => {
                    if !same_flag(d0, &dims) || !same_flag(dn0, &dims_n) {
                        holds_on_samples = false;
                        reasons.push(format!(
                            "flag {dims:?}/{dims_n:?} differs from first sample {d0:?}/{dn0:?}"
                        ));
                    }
                }
            }
            if !same_flag(&generic.dims, &dims) || !same_flag(&generic.dims_n, &dims_n) {
                matches_generic = false;
                reasons.push(format!(
                    "flag {dims:?}/{dims_n:?} differs from generic {:?}/{:?}",
                    generic.dims, generic.dims_n
                ));
            }
            if !reasons.is_empty() {
                witnesses.push(Witness {
                    params: t.clone(),
                    point,
                    dims,
                    dims_n,
                    reason: reasons.join("; "),
                });
            }
        }
        Ok(EquiregCheck {
            holds_on_samples,
            matches_generic,
            generic,
            samples_checked: samples.len(),
            witnesses,
        })
    }

    /// Classifies points displaced off `N` from each sample; any singular
    /// one is a counterexample to the singular set being contained in `N`.
    pub fn singular_set_surrogate(
        &mut self,
        n_spec: &SubmanifoldSpec,
        samples: &[Vec<Rat>],
    ) -> Result<SingularSetSurrogate> {
        let n = self.dim();
        let displacements = transversal_displacements(n_spec);
        let mut probes = 0;
        let mut singular_off_n = Vec::new();
        for t in samples {
            let base = n_spec.point_at(t)?;
            for d in &displacements {
                let q: Vec<Rat> = (0..n).map(|i| &base[i] + &d[i]).collect();
                if n_spec.contains(&q) {
                    continue;
                }
                probes += 1;
                if self.classify(&q)? == PointClass::Singular {
                    singular_off_n.push(q);
                }
            }
        }
        Ok(SingularSetSurrogate {
            probes,
            singular_off_n,
        })
    }
}

fn generic_rank_cols(cols: &[Vec<Poly>], n: usize, b: usize) -> usize {
    if cols.is_empty() {
        return 0;
    }
    if b == 0 {
        let vals: Vec<Vec<Rat>> = cols
            .iter()
            .map(|c| c.iter().map(|p| p.constant_value().unwrap_or_else(Rat::zero)).collect())
            .collect();
        return crate::exactalg::RatMatrix::from_columns(n, &vals).rank();
    }
    PolyMatrix::from_columns(cols).generic_rank()
}

/// Offsets that move a point of `N` off it: partial nonzero assignments of
/// the zeroed coordinates, or single-axis moves for a parametrization.
fn transversal_displacements(n_spec: &SubmanifoldSpec) -> Vec<Vec<Rat>> {
    use crate::exactalg::rat::rat;
    use crate::submanifold::SubmanifoldKind;
    let n = n_spec.ambient();
    let values = [rat(1, 2), rat(-1, 3)];
    let mut out = Vec::new();
    match n_spec.kind() {
        SubmanifoldKind::CoordinateSubspace { zeroed } => {
            let z = zeroed.len().min(6);
            for mask in 1u32..(1 << z) {
                for (vi, v) in values.iter().enumerate() {
                    let mut d = vec![Rat::zero(); n];
                    for (bit, &axis) in zeroed.iter().take(z).enumerate() {
                        if mask & (1 << bit) != 0 {
                            // alternate signs across axes for the second value
                            d[axis] = if vi == 1 && bit % 2 == 1 { -v.clone() } else { v.clone() };
                        }
                    }
                    out.push(d);
                }
            }
        }
        SubmanifoldKind::Parametrized => {
            for axis in 0..n {
                for v in &values {
                    let mut d = vec![Rat::zero(); n];
                    d[axis] = v.clone();
                    out.push(d);
                }
            }
        }
    }
    out
}

/// Radical inverse of `i` in base `p`, exactly.
fn radical_inverse(mut i: u64, p: u64) -> Rat {
    use crate::exactalg::rat::rat;
    let mut r = Rat::zero();
    let mut f = rat(1, p as i64);
    while i > 0 {
        r += &f * rat((i % p) as i64, 1);
        f /= rat(p as i64, 1);
        i /= p;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// The origin followed by Halton points mapped to `[−1,1]^b`.
pub fn sample_grid(b: usize, count: usize) -> Vec<Vec<Rat>> {
    use crate::exactalg::rat::int;
    let mut out = vec![vec![Rat::zero(); b]];
    let mut i = 1u64;
    while out.len() < count.max(1) {
        let p: Vec<Rat> = (0..b)
            .map(|j| int(2) * radical_inverse(i, PRIMES[j % PRIMES.len()]) - int(1))
            .collect();
        out.push(p);
        i += 1;
    }
    out
}

pub fn growth_vector(frame: &Frame, pt: &[Rat], cap: usize) -> Result<GrowthProfile> {
    Structure::new(frame, cap).growth(pt)
}

pub fn classify_point(frame: &Frame, pt: &[Rat]) -> Result<PointClass> {
    Structure::new(frame, DEFAULT_STEP_CAP).classify(pt)
}

pub fn restricted_profile(frame: &Frame, n_spec: &SubmanifoldSpec, params: &[Rat]) -> Result<RestrictedProfile> {
    Structure::new(frame, DEFAULT_STEP_CAP).restricted(n_spec, params)
}

pub fn strong_equireg_check(
    frame: &Frame,
    n_spec: &SubmanifoldSpec,
    samples: &[Vec<Rat>],
) -> Result<EquiregCheck> {
    Structure::new(frame, DEFAULT_STEP_CAP).equireg_check(n_spec, samples)
}

pub fn adapted_family(frame: &Frame, pt: &[Rat]) -> Result<BracketFamily> {
    Structure::new(frame, DEFAULT_STEP_CAP).adapted_family(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::VecField;
    use crate::exactalg::rat::{int, rat};
    use crate::exactalg::RatMatrix;
    use crate::testframes::*;

    fn names(f: &BracketFamily) -> Vec<String> {
        f.indices().iter().map(|i| i.to_string()).collect()
    }

    #[test]
    fn martinet_growth() {
        let f = martinet();
        let g = growth_vector(&f, &pt(&[1, 0, 0]), 10).unwrap();
        assert_eq!((g.dims.clone(), g.step, g.q), (vec![2, 3], 2, 4));
        let g0 = growth_vector(&f, &pt(&[0, 0, 0]), 10).unwrap();
        assert_eq!((g0.dims.clone(), g0.step, g0.q), (vec![2, 2, 3], 3, 5));
        assert!(matches!(
            growth_vector(&f, &pt(&[0, 0, 0]), 2),
            Err(Error::NotBracketGeneratingWithinCap { cap: 2, reached: 2, dim: 3 })
        ));
    }

    #[test]
    fn example3_origin_q() {
        let g = growth_vector(&example3(3), &pt(&[0, 0, 0, 0, 0]), 10).unwrap();
        assert_eq!(g.q, 8);
    }

    #[test]
    fn classification() {
        let f = martinet();
        assert_eq!(classify_point(&f, &pt(&[1, 0, 0])).unwrap(), PointClass::Regular);
        assert_eq!(classify_point(&f, &pt(&[0, 5, -2])).unwrap(), PointClass::Singular);
        let e2 = example2();
        assert_eq!(classify_point(&e2, &pt(&[0, 0, 1, 1])).unwrap(), PointClass::Singular);
        assert_eq!(classify_point(&e2, &pt(&[1, 0, 1, 1])).unwrap(), PointClass::Regular);
    }

    #[test]
    fn restricted_profiles_of_examples() {
        let n1 = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        let r = restricted_profile(&martinet(), &n1, &[int(3), rat(-1, 2)]).unwrap();
        assert_eq!((r.dims_n.clone(), r.q_n, r.r_not_n), (vec![1, 1, 2], 4, 1));
        let n2 = SubmanifoldSpec::coordinate_subspace("N", 4, &[0, 1]).unwrap();
        let r = restricted_profile(&example2(), &n2, &pt(&[0, 0])).unwrap();
        assert_eq!((r.ambient.q, r.q_n, r.r_not_n), (6, 4, 1));
        assert_eq!(r.dims_n, vec![1, 1, 2]);
        let n3 = SubmanifoldSpec::coordinate_subspace("N", 5, &[0]).unwrap();
        let r = restricted_profile(&example3(3), &n3, &pt(&[0, 0, 0, 0])).unwrap();
        assert_eq!((r.ambient.q, r.q_n, r.r_not_n), (8, 7, 1));
        assert_eq!(r.dims_n, vec![2, 3, 4]);
        let n4 = SubmanifoldSpec::coordinate_subspace("N", 5, &[0, 1]).unwrap();
        for k in 3..=5 {
            let r = restricted_profile(&example4(k), &n4, &pt(&[0, 0, 0])).unwrap();
            assert_eq!((r.ambient.q, r.q_n, r.r_not_n), (8, 6, 1));
            assert_eq!(r.dims_n, vec![1, 2, 3]);
        }
    }

    #[test]
    fn generic_values() {
        assert_eq!(Structure::new(&martinet(), 10).generic().unwrap().q, 4);
        assert_eq!(Structure::new(&example2(), 10).generic().unwrap().q, 5);
        assert_eq!(Structure::new(&example3(4), 10).generic().unwrap().q, 7);
        assert_eq!(Structure::new(&example4(5), 10).generic().unwrap().q, 7);
    }

    #[test]
    fn equiregularity() {
        let f = martinet();
        let n1 = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        let c = strong_equireg_check(&f, &n1, &sample_grid(2, 5)).unwrap();
        assert!(c.holds(), "{:?}", c.witnesses);
        assert_eq!(c.generic.dims, vec![2, 2, 3]);
        assert_eq!(c.generic.dims_n, vec![1, 1, 2]);

        let bad = SubmanifoldSpec::coordinate_subspace("P", 3, &[1]).unwrap();
        let c = strong_equireg_check(&f, &bad, &sample_grid(2, 5)).unwrap();
        assert!(!c.holds_on_samples);
        assert!(c.witnesses.iter().any(|w| w.dims.get(1) == Some(&3) || w.dims.get(1) == Some(&2)));

        let open = SubmanifoldSpec::whole_space(3);
        let c = strong_equireg_check(&f, &open, &[pt(&[1, 0, 0]), pt(&[2, 1, 1])]).unwrap();
        assert!(c.holds());
        assert_eq!(c.generic.dims_n, c.generic.dims);
    }

    #[test]
    fn adapted_families() {
        let f = martinet();
        let a = adapted_family(&f, &pt(&[1, 0, 0])).unwrap();
        assert_eq!(names(&a), ["(1)", "(2)", "(1,2)"]);
        assert_eq!(a.total_length(), 4);
        let a0 = adapted_family(&f, &pt(&[0, 0, 0])).unwrap();
        assert_eq!(names(&a0), ["(1)", "(2)", "(1,1,2)"]);
        assert_eq!(a0.total_length(), 5);
        let a2 = adapted_family(&example2(), &pt(&[1, 1, 0, 0])).unwrap();
        assert_eq!(names(&a2), ["(1)", "(2)", "(3)", "(1,2)"]);
    }

    #[test]
    fn singular_set_surrogate() {
        let n1 = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        let mut s = Structure::new(&martinet(), 10);
        let r = s.singular_set_surrogate(&n1, &sample_grid(2, 4)).unwrap();
        assert!(r.holds() && r.probes > 0);
        let wrong = SubmanifoldSpec::coordinate_subspace("P", 3, &[1]).unwrap();
        let r = s.singular_set_surrogate(&wrong, &sample_grid(2, 4)).unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn sample_grid_is_in_box() {
        let g = sample_grid(3, 9);
        assert_eq!(g.len(), 9);
        assert!(g[0].iter().all(Zero::is_zero));
        assert_eq!(g[1], vec![int(0), rat(-1, 3), rat(-3, 5)]);
        assert!(g.iter().flatten().all(|c| c >= &int(-1) && c <= &int(1)));
    }

    #[test]
    fn defq_matches_codim_form() {
        for dims in [vec![2, 3], vec![2, 2, 3], vec![3, 4, 5], vec![1, 1, 2], vec![3, 3, 4, 5]] {
            assert_eq!(weighted_sum(&dims), codim_sum(&dims));
        }
    }

    #[test]
    fn adapted_family_full_rank() {
        let f = example4(3);
        for p in [pt(&[0, 0, 0, 0, 0]), pt(&[1, 2, 0, 0, 0]), pt(&[0, 1, 3, 0, 0])] {
            let fam = adapted_family(&f, &p).unwrap();
            let g = growth_vector(&f, &p, 10).unwrap();
            assert_eq!(fam.total_length(), g.q);
            let cols: Vec<Vec<Rat>> = fam
                .fields(&f)
                .unwrap()
                .iter()
                .map(|v: &VecField| v.eval(&p).unwrap())
                .collect();
            assert_eq!(RatMatrix::from_columns(5, &cols).rank(), 5);
        }
    }
}
