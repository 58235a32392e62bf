//! Polynomial vector fields, Lie brackets and iterated brackets `X_I`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{LinearSpan, Monomial, Poly, Rat};

/// A vector field on `R^n` given by `n` polynomial components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecField {
    comps: Vec<Poly>,
}

impl VecField {
    pub fn new(comps: Vec<Poly>) -> Result<Self> {
        let n = comps.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("vector field with no components".into()));
        }
        for (j, c) in comps.iter().enumerate() {
            if c.nvars() != n || c.nparams() != 0 {
                return Err(Error::DimensionMismatch(format!(
                    "component {} lives in a ring with {} variables and {} parameters, expected {} and 0",
                    j + 1,
                    c.nvars(),
                    c.nparams(),
                    n
                )));
            }
        }
        Ok(VecField { comps })
    }

    pub fn zero(n: usize) -> Self {
        VecField {
            comps: vec![Poly::zero(n); n],
        }
    }

    /// The coordinate field `∂_{axis+1}`.
    pub fn coordinate(axis: usize, n: usize) -> Self {
        let mut comps = vec![Poly::zero(n); n];
        comps[axis] = Poly::one(n);
        VecField { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, pt: &[Rat]) -> Result<Vec<Rat>> {
        self.comps.iter().map(|c| c.eval(pt)).collect()
    }

    pub fn eval_f64(&self, pt: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(pt)).collect()
    }

    /// Lie derivative `X f = Σ_j X^j ∂_j f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let n = self.dim();
        let mut acc = Poly::zero(n);
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(j);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> VecField {
        VecField {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &VecField) -> VecField {
        VecField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(Poly::degree).max()
    }

    /// Coefficient vector keyed by (component, monomial).
    pub fn coefficient_key(&self) -> BTreeMap<(usize, Monomial), Rat> {
        let mut out = BTreeMap::new();
        for (j, c) in self.comps.iter().enumerate() {
            for (m, v) in c.terms() {
                out.insert((j, m.clone()), v.clone());
            }
        }
        out
    }

    /// The same field written in coordinates `u = y - p`.
    pub fn shifted(&self, p: &[Rat]) -> VecField {
        let n = self.dim();
        let images: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(i, n) + &Poly::constant(p[i].clone(), n))
            .collect();
        VecField {
            comps: self.comps.iter().map(|c| c.compose(&images)).collect(),
        }
    }

    /// `[c1, c2, ...]` in manifest syntax.
    pub fn to_string_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string_with(names)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Display for VecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Poly::default_names(self.dim(), 0);
        f.write_str(&self.to_string_with(&names))
    }
}

/// `[X,Y]^j = Σ_i X^i ∂_i Y^j − Y^i ∂_i X^j`.
pub fn lie_bracket(x: &VecField, y: &VecField) -> Result<VecField> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "bracket of fields on R^{} and R^{}",
            x.dim(),
            y.dim()
        )));
    }
    let comps = x
        .comps
        .iter()
        .zip(&y.comps)
        .map(|(xj, yj)| &x.apply(yj) - &y.apply(xj))
        .collect();
    Ok(VecField { comps })
}

/// A multiindex `(i_1, ..., i_j)` with entries in `1..=m`, ordered by
/// length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("multiindex must be nonempty".into()));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                max: usize::MAX,
            });
        }
        Ok(MultiIndex(entries))
    }

    pub fn single(i: usize) -> Self {
        assert!(i >= 1);
        MultiIndex(vec![i])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(i, J)`.
    pub fn prepend(&self, i: usize) -> MultiIndex {
        let mut e = Vec::with_capacity(self.0.len() + 1);
        e.push(i);
        e.extend_from_slice(&self.0);
        MultiIndex(e)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `n` multiindices whose brackets are taken as columns, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketFamily {
    indices: Vec<MultiIndex>,
}

impl BracketFamily {
    pub fn new(indices: Vec<MultiIndex>) -> Self {
        BracketFamily { indices }
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.indices.iter().map(MultiIndex::len).sum()
    }

    pub fn fields(&self, frame: &Frame) -> Result<Vec<VecField>> {
        self.indices.iter().map(|i| bracket_of(i, frame)).collect()
    }
}

impl fmt::Display for BracketFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(MultiIndex::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An orthonormal frame `X_1..X_m` on `R^n`, `m < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    fields: Vec<VecField>,
    dim: usize,
}

impl Frame {
    pub fn new(fields: Vec<VecField>) -> Result<Self> {
        let Some(first) = fields.first() else {
            return Err(Error::InvalidFrame("frame has no fields".into()));
        };
        let dim = first.dim();
        if fields.iter().any(|f| f.dim() != dim) {
            return Err(Error::InvalidFrame("fields have different dimensions".into()));
        }
        if fields.len() >= dim {
            return Err(Error::InvalidFrame("rank must be < dimension".into()));
        }
        if let Some(i) = fields.iter().position(VecField::is_zero) {
            return Err(Error::InvalidFrame(format!("field X{} is identically zero", i + 1)));
        }
        Ok(Frame { fields, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[VecField] {
        &self.fields
    }

    /// `X_i` with `i` in `1..=m`.
    pub fn field(&self, i: usize) -> Result<&VecField> {
        if i == 0 || i > self.fields.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.fields.len(),
            });
        }
        Ok(&self.fields[i - 1])
    }

    /// The same frame written in coordinates `u = y - p`.
    pub fn shifted(&self, p: &[Rat]) -> Frame {
        Frame {
            fields: self.fields.iter().map(|f| f.shifted(p)).collect(),
            dim: self.dim,
        }
    }
}

/// Right-nested bracket `X_I = [X_{i1}, [X_{i2}, ..., X_{ij}]]`.
pub fn bracket_of(index: &MultiIndex, frame: &Frame) -> Result<VecField> {
    let entries = index.entries();
    let mut acc = frame.field(*entries.last().expect("nonempty"))?.clone();
    for &i in entries[..entries.len() - 1].iter().rev() {
        acc = lie_bracket(frame.field(i)?, &acc)?;
    }
    Ok(acc)
}

/// `X_{i1} X_{i2} ... X_{ij} f`, the rightmost derivation acting first.
pub fn lie_derivative_word(word: &[usize], f: &Poly, frame: &Frame) -> Result<Poly> {
    let mut acc = f.clone();
    for &i in word.iter().rev() {
        acc = frame.field(i)?.apply(&acc);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct BracketEntry {
    pub index: MultiIndex,
    pub field: VecField,
    pub is_zero: bool,
}

/// Every multiindex of length `<= max_len` with its bracket, ordered by
/// length then lexicographically. Zero brackets are kept and flagged.
pub fn enumerate_brackets(frame: &Frame, max_len: usize) -> Vec<BracketEntry> {
    let n = frame.dim();
    let mut out: Vec<BracketEntry> = Vec::new();
    let mut prev: Vec<(MultiIndex, VecField)> = frame
        .fields()
        .iter()
        .enumerate()
        .map(|(i, f)| (MultiIndex::single(i + 1), f.clone()))
        .collect();
    for len in 1..=max_len.max(1) {
        if len > 1 {
            let mut next = Vec::with_capacity(prev.len() * frame.rank());
            for (i, xi) in frame.fields().iter().enumerate() {
                for (idx, f) in &prev {
                    let field = if f.is_zero() {
                        VecField::zero(n)
                    } else {
                        lie_bracket(xi, f).expect("same dimension")
                    };
                    next.push((idx.prepend(i + 1), field));
                }
            }
            prev = next;
        }
        out.extend(prev.iter().map(|(index, field)| BracketEntry {
            index: index.clone(),
            is_zero: field.is_zero(),
            field: field.clone(),
        }));
    }
    out
}

/// Brackets grouped by length, keeping at each length only a greedy
/// (lexicographic) rational basis of the span of all brackets of that
/// length. Spans of pointwise values, and greedy pointwise selections in
/// (length, lex) order, coincide with those of the full enumeration.
#[derive(Clone, Debug)]
pub struct BracketTower {
    frame: Frame,
    levels: Vec<Vec<(MultiIndex, VecField)>>,
}

impl BracketTower {
    pub fn new(frame: &Frame) -> Self {
        let mut span = LinearSpan::new();
        let mut level = Vec::new();
        for (i, f) in frame.fields().iter().enumerate() {
            if span.insert(f.coefficient_key()) {
                level.push((MultiIndex::single(i + 1), f.clone()));
            }
        }
        BracketTower {
            frame: frame.clone(),
            levels: vec![level],
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn extend_to(&mut self, len: usize) {
        while self.levels.len() < len {
            let prev = self.levels.last().expect("level one exists");
            let mut span = LinearSpan::new();
            let mut level = Vec::new();
            for (i, xi) in self.frame.fields().iter().enumerate() {
                for (idx, f) in prev {
                    let b = lie_bracket(xi, f).expect("same dimension");
                    if b.is_zero() {
                        continue;
                    }
                    if span.insert(b.coefficient_key()) {
                        level.push((idx.prepend(i + 1), b));
                    }
                }
            }
            level.sort_by(|a, b| a.0.cmp(&b.0));
            self.levels.push(level);
        }
    }

    /// Basis brackets of exactly length `len` (1-based).
    pub fn level(&mut self, len: usize) -> &[(MultiIndex, VecField)] {
        self.extend_to(len);
        &self.levels[len - 1]
    }

    /// All basis brackets of length `<= len`, in (length, lex) order.
    pub fn up_to(&mut self, len: usize) -> Vec<(MultiIndex, VecField)> {
        self.extend_to(len);
        self.levels[..len].iter().flatten().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    pub(crate) fn martinet() -> Frame {
        let n = 3;
        let x1 = Poly::var(0, n);
        let one = Poly::one(n);
        let z = Poly::zero(n);
        Frame::new(vec![
            VecField::new(vec![one.clone(), z.clone(), z.clone()]).unwrap(),
            VecField::new(vec![z.clone(), one, x1.pow(2).scale(&rat(1, 2))]).unwrap(),
        ])
        .unwrap()
    }

    fn field(comps: Vec<Poly>) -> VecField {
        VecField::new(comps).unwrap()
    }

    #[test]
    fn martinet_brackets() {
        let f = martinet();
        let n = 3;
        let (x1, z, one) = (Poly::var(0, n), Poly::zero(n), Poly::one(n));
        let b12 = lie_bracket(f.field(1).unwrap(), f.field(2).unwrap()).unwrap();
        assert_eq!(b12, field(vec![z.clone(), z.clone(), x1.clone()]));
        assert!(lie_bracket(f.field(2).unwrap(), f.field(2).unwrap()).unwrap().is_zero());
        let i112 = MultiIndex::new(vec![1, 1, 2]).unwrap();
        assert_eq!(bracket_of(&i112, &f).unwrap(), field(vec![z.clone(), z.clone(), one]));
        assert_eq!(
            bracket_of(&MultiIndex::single(1), &f).unwrap(),
            f.field(1).unwrap().clone()
        );
        assert_eq!(bracket_of(&MultiIndex::new(vec![1, 2]).unwrap(), &f).unwrap(), b12);
        assert!(matches!(
            bracket_of(&MultiIndex::new(vec![3]).unwrap(), &f),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn lie_derivative_examples() {
        let f = martinet();
        let x1 = Poly::var(0, 3);
        assert_eq!(lie_derivative_word(&[1], &x1, &f).unwrap(), Poly::one(3));
        assert_eq!(lie_derivative_word(&[], &x1, &f).unwrap(), x1);
        assert!(lie_derivative_word(&[2], &x1, &f).unwrap().is_zero());
        // X1 X1 (x1^2) = 2
        let sq = x1.pow(2);
        assert_eq!(lie_derivative_word(&[1, 1], &sq, &f).unwrap(), Poly::constant(int(2), 3));
    }

    #[test]
    fn enumeration_martinet_len_two() {
        let f = martinet();
        let e = enumerate_brackets(&f, 2);
        let names: Vec<String> = e.iter().map(|b| b.index.to_string()).collect();
        assert_eq!(names, ["(1)", "(2)", "(1,1)", "(1,2)", "(2,1)", "(2,2)"]);
        let flags: Vec<bool> = e.iter().map(|b| b.is_zero).collect();
        assert_eq!(flags, [false, false, true, false, false, true]);
        let x1 = Poly::var(0, 3);
        assert_eq!(e[3].field.comps()[2], x1);
        assert_eq!(e[4].field.comps()[2], -&x1);
        assert_eq!(enumerate_brackets(&f, 1).len(), 2);
    }

    #[test]
    fn frame_validation() {
        let n = 2;
        let one = Poly::one(n);
        let z = Poly::zero(n);
        let err = Frame::new(vec![
            field(vec![one.clone(), z.clone()]),
            field(vec![z.clone(), one.clone()]),
        ])
        .unwrap_err();
        assert!(err.to_string().contains("rank must be < dimension"));
        let n3 = 3;
        let zero_field = VecField::zero(n3);
        assert!(Frame::new(vec![zero_field]).is_err());
    }

    #[test]
    fn tower_drops_dependent_brackets() {
        let mut t = BracketTower::new(&martinet());
        let l2: Vec<String> = t.level(2).iter().map(|(i, _)| i.to_string()).collect();
        assert_eq!(l2, ["(1,2)"]);
        let l3: Vec<String> = t.level(3).iter().map(|(i, _)| i.to_string()).collect();
        assert_eq!(l3, ["(1,1,2)"]);
    }
}
