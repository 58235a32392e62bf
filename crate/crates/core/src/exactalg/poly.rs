//! Sparse multivariate polynomials with rational coefficients.
//!
//! A polynomial lives in a ring with `nvars` coordinates followed by
//! `nparams` symbolic parameter slots. Terms are kept in a `BTreeMap`
//! ordered by graded lexicographic order, so equal polynomials have equal
//! term maps and iteration order is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_to_string, to_f64, Rat};
use crate::error::{Error, Result};

/// Exponent vector, compared in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    nparams: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self::zero_in(nvars, 0)
    }

    pub fn zero_in(nvars: usize, nparams: usize) -> Self {
        Poly {
            nvars,
            nparams,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat, nvars: usize) -> Self {
        Self::constant_in(c, nvars, 0)
    }

    pub fn constant_in(c: Rat, nvars: usize, nparams: usize) -> Self {
        let mut p = Self::zero_in(nvars, nparams);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars + nparams), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Rat::one(), nvars)
    }

    /// The coordinate function `x_{axis+1}`.
    pub fn var(axis: usize, nvars: usize) -> Self {
        assert!(axis < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(Monomial(e), Rat::one(), nvars, 0)
    }

    /// The parameter slot `slot` in a ring with `nvars` coordinates.
    pub fn param(slot: usize, nvars: usize, nparams: usize) -> Self {
        assert!(slot < nparams, "parameter index out of range");
        let mut e = vec![0; nvars + nparams];
        e[nvars + slot] = 1;
        Self::monomial(Monomial(e), Rat::one(), nvars, nparams)
    }

    pub fn monomial(m: Monomial, c: Rat, nvars: usize, nparams: usize) -> Self {
        assert_eq!(m.0.len(), nvars + nparams, "exponent vector length");
        let mut p = Self::zero_in(nvars, nparams);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, nparams: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Self::zero_in(nvars, nparams);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars + nparams, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    fn arity(&self) -> usize {
        self.nvars + self.nparams
    }

    pub fn same_ring(&self, other: &Poly) -> bool {
        self.nvars == other.nvars && self.nparams == other.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True if some term depends on coordinate `axis`.
    pub fn uses_var(&self, axis: usize) -> bool {
        self.terms.keys().any(|m| m.0[axis] > 0)
    }

    pub fn has_params(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.0[self.nvars..].iter().any(|&e| e > 0))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Self::zero_in(self.nvars, self.nparams);
        }
        Poly {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::constant_in(Rat::one(), self.nvars, self.nparams);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to coordinate `axis`.
    pub fn partial(&self, axis: usize) -> Poly {
        assert!(axis < self.nvars, "partial: axis out of range");
        let mut out = Self::zero_in(self.nvars, self.nparams);
        for (m, c) in &self.terms {
            let e = m.0[axis];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[axis] -= 1;
            out.terms.insert(Monomial(d), c * Rat::from_integer(e.into()));
        }
        out
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: len,
            });
        }
        if self.has_params() {
            return Err(Error::UninstantiatedParameter);
        }
        Ok(())
    }

    /// Exact value at `pt`; all parameter slots must be absent.
    pub fn eval(&self, pt: &[Rat]) -> Result<Rat> {
        self.check_point(pt.len())?;
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in pt.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation. Parameter slots are ignored; callers are
    /// expected to pass instantiated polynomials.
    pub fn eval_f64(&self, pt: &[f64]) -> f64 {
        debug_assert_eq!(pt.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = to_f64(c);
                for (x, &e) in pt.iter().zip(&m.0) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes integer or rational values for the parameter slots.
    pub fn instantiate(&self, values: &[Rat]) -> Result<Poly> {
        if values.len() != self.nparams {
            return Err(Error::Arity {
                expected: self.nparams,
                got: values.len(),
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(&m.0[self.nvars..]) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            out.add_term(Monomial(m.0[..self.nvars].to_vec()), t);
        }
        Ok(out)
    }

    /// Composition `self(images[0], ..., images[n-1])`. The result lives in
    /// the ring of the images.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "compose: one image per variable");
        assert_eq!(self.nparams, 0, "compose: instantiate parameters first");
        let (nv, np) = match images.first() {
            Some(p) => (p.nvars, p.nparams),
            None => (0, 0),
        };
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::constant_in(Rat::one(), nv, np), p.clone()])
            .collect();
        let mut out = Poly::zero_in(nv, np);
        for (m, c) in &self.terms {
            let mut t = Poly::constant_in(c.clone(), nv, np);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            out = &out + &t;
        }
        out
    }

    /// Like [`Poly::compose`] but drops every intermediate term of total
    /// degree above `max_deg`. Valid when each image has no constant term.
    pub fn compose_truncated(&self, images: &[Poly], max_deg: u32) -> Poly {
        assert_eq!(images.len(), self.nvars, "compose: one image per variable");
        let (nv, np) = match images.first() {
            Some(p) => (p.nvars, p.nparams),
            None => (0, 0),
        };
        let mut out = Poly::zero_in(nv, np);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::constant_in(Rat::one(), nv, np), p.truncate(max_deg)])
            .collect();
        for (m, c) in &self.terms {
            if m.degree() > max_deg {
                continue;
            }
            let mut t = Poly::constant_in(c.clone(), nv, np);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = (&powers[i][powers[i].len() - 1] * &powers[i][1]).truncate(max_deg);
                    powers[i].push(next);
                }
                t = (&t * &powers[i][e]).truncate(max_deg);
            }
            out = &out + &t;
        }
        out
    }

    /// Drops all terms of total degree greater than `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms whose weighted degree (coordinate `i` has weight
    /// `weights[i]`) satisfies `keep`.
    pub fn filter_weighted<F: Fn(u32) -> bool>(&self, weights: &[u32], keep: F) -> Poly {
        Poly {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(weighted_degree(m, weights)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest weighted degree among the terms.
    pub fn min_weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| weighted_degree(m, weights)).min()
    }

    /// Re-embeds into a ring with `nvars` coordinates, sending coordinate
    /// `i` to coordinate `i + offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        assert_eq!(self.nparams, 0, "embed: instantiate parameters first");
        assert!(offset + self.nvars <= nvars, "embed: target ring too small");
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(self.same_ring(d), "div_exact: ring mismatch");
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quo = Poly::zero_in(self.nvars, self.nparams);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            let t = Poly::monomial(qm, qc, self.nvars, self.nparams);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Renders with the given names (coordinates first, then parameters).
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert!(names.len() >= self.arity(), "not enough variable names");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_string(m, names);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&rat_to_string(&mag)),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&rat_to_string(&mag));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    /// Default names `x1..xn` then `p1..pk`.
    pub fn default_names(nvars: usize, nparams: usize) -> Vec<String> {
        (1..=nvars)
            .map(|i| format!("x{i}"))
            .chain((1..=nparams).map(|i| format!("p{i}")))
            .collect()
    }
}

pub fn weighted_degree(m: &Monomial, weights: &[u32]) -> u32 {
    m.0.iter().zip(weights).map(|(e, w)| e * w).sum()
}

fn monomial_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Poly::default_names(self.nvars, self.nparams);
        f.write_str(&self.to_string_with(&names))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs), "add: ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs), "sub: ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs), "mul: ring mismatch");
        let mut out = Poly::zero_in(self.nvars, self.nparams);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn x(i: usize, n: usize) -> Poly {
        Poly::var(i, n)
    }

    #[test]
    fn eval_examples() {
        let p = x(0, 3);
        assert_eq!(p.eval(&[int(0), int(0), int(0)]).unwrap(), int(0));
        let half_sq = x(0, 3).pow(2).scale(&rat(1, 2));
        assert_eq!(half_sq.eval(&[int(1), int(0), int(0)]).unwrap(), rat(1, 2));
        // x1^3 + x2^3 at (1,1,0,0,0)
        let f = &x(0, 5).pow(3) + &x(1, 5).pow(3);
        let pt: Vec<Rat> = [1, 1, 0, 0, 0].iter().map(|&v| int(v)).collect();
        assert_eq!(f.eval(&pt).unwrap(), int(2));
    }

    #[test]
    fn eval_errors() {
        let p = x(0, 3);
        assert!(matches!(p.eval(&[int(1)]), Err(Error::Arity { .. })));
        let q = Poly::param(0, 2, 1);
        assert!(matches!(
            q.eval(&[int(1), int(1)]),
            Err(Error::UninstantiatedParameter)
        ));
        let inst = q.instantiate(&[int(3)]).unwrap();
        assert_eq!(inst.eval(&[int(1), int(1)]).unwrap(), int(3));
    }

    #[test]
    fn partial_examples() {
        let half_sq = x(0, 3).pow(2).scale(&rat(1, 2));
        assert_eq!(half_sq.partial(0), x(0, 3));
        assert!(half_sq.partial(2).is_zero());
        let q = x(0, 3).pow(4);
        assert_eq!(q.partial(0), x(0, 3).pow(3).scale(&int(4)));
    }

    #[test]
    fn exact_division() {
        let a = &x(0, 2) + &x(1, 2);
        let b = &x(0, 2) - &x(1, 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(x(0, 2).div_exact(&x(1, 2)).is_none());
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x(0, 2) + &x(1, 2).pow(2)) + &Poly::one(2);
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exps(), &[0, 2]);
        assert_eq!(p.to_string(), "x2^2 + x1 + 1");
    }

    #[test]
    fn display_coefficients() {
        let p = &x(0, 3).pow(2).scale(&rat(1, 2)) - &x(2, 3).scale(&int(3));
        assert_eq!(p.to_string(), "1/2*x1^2 - 3*x3");
        assert_eq!((-&x(1, 3)).to_string(), "-x2");
        assert_eq!(Poly::zero(3).to_string(), "0");
    }

    #[test]
    fn compose_and_truncate() {
        // (x1 + x2)^2 with x1 -> t, x2 -> t^2 in one variable
        let p = (&x(0, 2) + &x(1, 2)).pow(2);
        let t = x(0, 1);
        let c = p.compose(&[t.clone(), t.pow(2)]);
        assert_eq!(c, &(&t.pow(2) + &t.pow(3).scale(&int(2))) + &t.pow(4));
        let ct = p.compose_truncated(&[t.clone(), t.pow(2)], 3);
        assert_eq!(ct, &t.pow(2) + &t.pow(3).scale(&int(2)));
    }
}
