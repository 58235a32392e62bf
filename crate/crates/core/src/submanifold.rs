//! Submanifolds given as coordinate subspaces or polynomial parametrizations.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, PolyMatrix, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubmanifoldKind {
    /// `{x_j = 0 : j in zeroed}` (0-based axes), parametrized by the
    /// remaining coordinates in increasing order.
    CoordinateSubspace { zeroed: Vec<usize> },
    /// `t -> φ(t)` with `b` parameters.
    Parametrized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmanifoldSpec {
    name: String,
    ambient: usize,
    dim: usize,
    kind: SubmanifoldKind,
    map: Vec<Poly>,
    jacobian: PolyMatrix,
}

impl SubmanifoldSpec {
    pub fn coordinate_subspace(name: &str, ambient: usize, zeroed: &[usize]) -> Result<Self> {
        let mut zeroed = zeroed.to_vec();
        zeroed.sort_unstable();
        zeroed.dedup();
        if zeroed.iter().any(|&z| z >= ambient) {
            return Err(Error::InvalidSubmanifold(format!(
                "{name}: zeroed coordinate out of range"
            )));
        }
        let free: Vec<usize> = (0..ambient).filter(|i| !zeroed.contains(i)).collect();
        let b = free.len();
        let mut map = vec![Poly::zero(b); ambient];
        for (k, &i) in free.iter().enumerate() {
            map[i] = Poly::var(k, b);
        }
        Self::build(name, ambient, SubmanifoldKind::CoordinateSubspace { zeroed }, map)
    }

    pub fn parametrized(name: &str, ambient: usize, map: Vec<Poly>) -> Result<Self> {
        if map.len() != ambient {
            return Err(Error::InvalidSubmanifold(format!(
                "{name}: parametrization has {} components, expected {ambient}",
                map.len()
            )));
        }
        Self::build(name, ambient, SubmanifoldKind::Parametrized, map)
    }

    /// The whole space with the identity parametrization.
    pub fn whole_space(ambient: usize) -> Self {
        Self::coordinate_subspace("M", ambient, &[]).expect("identity parametrization")
    }

    fn build(name: &str, ambient: usize, kind: SubmanifoldKind, map: Vec<Poly>) -> Result<Self> {
        let b = map.first().map_or(0, Poly::nvars);
        if map.iter().any(|p| p.nvars() != b || p.nparams() != 0) {
            return Err(Error::InvalidSubmanifold(format!(
                "{name}: parametrization components must share {b} parameters"
            )));
        }
        if b > ambient {
            return Err(Error::InvalidSubmanifold(format!(
                "{name}: more parameters than ambient dimension"
            )));
        }
        let columns: Vec<Vec<Poly>> = (0..b)
            .map(|k| map.iter().map(|p| p.partial(k)).collect())
            .collect();
        let jacobian = if b == 0 {
            PolyMatrix::from_rows(vec![Vec::new(); ambient])
        } else {
            PolyMatrix::from_columns(&columns)
        };
        if b > 0 && jacobian.generic_rank() != b {
            return Err(Error::InvalidSubmanifold(format!(
                "{name}: parametrization Jacobian does not have generic rank {b}"
            )));
        }
        Ok(SubmanifoldSpec {
            name: name.to_string(),
            ambient,
            dim: b,
            kind,
            map,
            jacobian,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SubmanifoldKind {
        &self.kind
    }

    pub fn map(&self) -> &[Poly] {
        &self.map
    }

    pub fn jacobian(&self) -> &PolyMatrix {
        &self.jacobian
    }

    pub fn point_at(&self, params: &[Rat]) -> Result<Vec<Rat>> {
        self.map.iter().map(|p| p.eval(params)).collect()
    }

    pub fn jacobian_at(&self, params: &[Rat]) -> Result<RatMatrix> {
        if self.dim == 0 {
            return Ok(RatMatrix::zeros(self.ambient, 0));
        }
        self.jacobian.eval(params)
    }

    /// Parameters of `pt` on this submanifold, if they can be found exactly.
    /// Works for coordinate subspaces and affine parametrizations.
    pub fn locate(&self, pt: &[Rat]) -> Option<Vec<Rat>> {
        if pt.len() != self.ambient {
            return None;
        }
        match &self.kind {
            SubmanifoldKind::CoordinateSubspace { zeroed } => {
                if zeroed.iter().any(|&z| !pt[z].is_zero()) {
                    return None;
                }
                Some(
                    (0..self.ambient)
                        .filter(|i| !zeroed.contains(i))
                        .map(|i| pt[i].clone())
                        .collect(),
                )
            }
            SubmanifoldKind::Parametrized => {
                if self.map.iter().any(|p| p.degree().unwrap_or(0) > 1) {
                    return None;
                }
                let origin = vec![Rat::zero(); self.dim];
                let base = self.point_at(&origin).ok()?;
                let rhs: Vec<Rat> = pt.iter().zip(&base).map(|(a, b)| a - b).collect();
                let t = self.jacobian_at(&origin).ok()?.solve(&rhs)?;
                (self.point_at(&t).ok()? == pt).then_some(t)
            }
        }
    }

    pub fn contains(&self, pt: &[Rat]) -> bool {
        self.locate(pt).is_some()
    }

    /// Polynomials whose common zero set is the submanifold, when known.
    pub fn cutout(&self) -> Option<Vec<Poly>> {
        match &self.kind {
            SubmanifoldKind::CoordinateSubspace { zeroed } => Some(
                zeroed
                    .iter()
                    .map(|&z| Poly::var(z, self.ambient))
                    .collect(),
            ),
            SubmanifoldKind::Parametrized => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;

    #[test]
    fn coordinate_subspace_locate() {
        let n = SubmanifoldSpec::coordinate_subspace("N", 3, &[0]).unwrap();
        assert_eq!(n.dim(), 2);
        assert_eq!(n.locate(&[int(0), int(5), int(-2)]), Some(vec![int(5), int(-2)]));
        assert!(!n.contains(&[int(1), int(0), int(0)]));
        assert_eq!(n.point_at(&[int(5), int(-2)]).unwrap(), vec![int(0), int(5), int(-2)]);
        assert_eq!(n.cutout().unwrap(), vec![Poly::var(0, 3)]);
    }

    #[test]
    fn affine_parametrization_locate() {
        // t -> (t, t, 1)
        let t = Poly::var(0, 1);
        let n = SubmanifoldSpec::parametrized("L", 3, vec![t.clone(), t, Poly::one(1)]).unwrap();
        assert_eq!(n.locate(&[int(2), int(2), int(1)]), Some(vec![int(2)]));
        assert!(n.locate(&[int(2), int(3), int(1)]).is_none());
    }

    #[test]
    fn rejects_degenerate_parametrization() {
        let t = Poly::var(0, 2);
        let err = SubmanifoldSpec::parametrized("bad", 3, vec![t.clone(), t.clone(), t]);
        assert!(err.is_err());
    }
}
