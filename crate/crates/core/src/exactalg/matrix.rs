//! Dense matrices over the rationals and over polynomials.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = Rat::one() / self.get(r, c).clone();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Some `x` with `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let f = m.get(i, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    /// Row-major construction; every entry must share one ring.
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            entries.extend(row);
        }
        Self::check_ring(&entries);
        PolyMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_columns(columns: &[Vec<Poly>]) -> Self {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in columns {
                assert_eq!(col.len(), r, "ragged matrix");
                entries.push(col[i].clone());
            }
        }
        Self::check_ring(&entries);
        PolyMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    fn check_ring(entries: &[Poly]) {
        if let Some(first) = entries.first() {
            assert!(
                entries.iter().all(|p| p.same_ring(first)),
                "matrix entries must share a variable context"
            );
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn eval(&self, pt: &[Rat]) -> Result<RatMatrix> {
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).eval(pt)?);
            }
        }
        Ok(m)
    }

    pub fn rank_at(&self, pt: &[Rat]) -> Result<usize> {
        Ok(self.eval(pt)?.rank())
    }

    fn ring(&self) -> Option<(usize, usize)> {
        self.entries.first().map(|p| (p.nvars(), p.nparams()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let Some((nv, np)) = self.ring() else {
            return Ok(Poly::constant(Rat::one(), 0));
        };
        let n = self.rows;
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = Poly::constant_in(Rat::one(), nv, np);
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        negate = !negate;
                    }
                    None => return Ok(Poly::zero_in(nv, np)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly");
                }
                a[i][k] = Poly::zero_in(nv, np);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Rank over the field of rational functions in the entries' variables.
    ///
    /// A full-rank evaluation at a fixed rational point settles the question
    /// immediately (rank can only drop under specialization); otherwise the
    /// rank is computed by fraction-free elimination with the first nonzero
    /// pivot in (row, col) order.
    pub fn generic_rank(&self) -> usize {
        let Some((nv, np)) = self.ring() else {
            return 0;
        };
        let full = self.rows.min(self.cols);
        if full == 0 {
            return 0;
        }
        for probe in probe_points(nv + np).iter().take(2) {
            let m = self.map(|p| {
                if np == 0 {
                    p.clone()
                } else {
                    p.instantiate(&probe[nv..]).expect("arity")
                }
            });
            if let Ok(ev) = m.eval(&probe[..nv]) {
                if ev.rank() == full {
                    return full;
                }
            }
        }
        self.bareiss_rank()
    }

    fn bareiss_rank(&self) -> usize {
        let Some((nv, np)) = self.ring() else {
            return 0;
        };
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<Poly>> = (0..rows)
            .map(|i| (0..cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = Poly::constant_in(Rat::one(), nv, np);
        let mut colperm: Vec<usize> = (0..cols).collect();
        let mut rank = 0;
        for k in 0..rows.min(cols) {
            // first nonzero entry in the trailing block, row-major
            let pivot = (k..rows).find_map(|i| {
                (k..cols)
                    .find(|&j| !a[i][colperm[j]].is_zero())
                    .map(|j| (i, j))
            });
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(k, pi);
            colperm.swap(k, pj);
            let ck = colperm[k];
            for i in k + 1..rows {
                for jj in k + 1..cols {
                    let j = colperm[jj];
                    let num = &(&a[k][ck] * &a[i][j]) - &(&a[i][ck] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly");
                }
                a[i][ck] = Poly::zero_in(nv, np);
            }
            prev = a[k][ck].clone();
            rank += 1;
        }
        rank
    }
}

/// Deterministic rational probe points used as a fast path for generic rank.
fn probe_points(len: usize) -> Vec<Vec<Rat>> {
    const PRIMES: [i64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    (0..2)
        .map(|s| {
            (0..len)
                .map(|i| {
                    let p = PRIMES[(i + 5 * s) % PRIMES.len()];
                    let q = PRIMES[(3 * i + 7 + s) % PRIMES.len()];
                    Rat::new(((2 * p + 7 * i as i64 + 1) * (1 + s as i64)).into(), q.into())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn x(i: usize) -> Poly {
        Poly::var(i, 3)
    }

    fn c(v: i64) -> Poly {
        Poly::constant(int(v), 3)
    }

    fn martinet_columns() -> PolyMatrix {
        let half_sq = x(0).pow(2).scale(&rat(1, 2));
        PolyMatrix::from_columns(&[
            vec![c(1), c(0), c(0)],
            vec![c(0), c(1), half_sq],
            vec![c(0), c(0), x(0)],
        ])
    }

    #[test]
    fn det_identity_and_martinet() {
        let id = PolyMatrix::from_rows(vec![
            vec![c(1), c(0), c(0)],
            vec![c(0), c(1), c(0)],
            vec![c(0), c(0), c(1)],
        ]);
        assert_eq!(id.det().unwrap(), c(1));
        assert_eq!(martinet_columns().det().unwrap(), x(0));
    }

    #[test]
    fn det_example_two() {
        let n = 4;
        let v = |i| Poly::var(i, n);
        let k = |a: i64| Poly::constant(int(a), n);
        let m = PolyMatrix::from_columns(&[
            vec![k(1), k(0), k(0), k(0)],
            vec![k(0), k(1), k(0), v(0).pow(2).scale(&rat(1, 2))],
            vec![k(0), k(0), k(1), v(1).pow(2).scale(&rat(1, 2))],
            vec![k(0), k(0), k(0), v(0)],
        ]);
        assert_eq!(m.det().unwrap(), v(0));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = PolyMatrix::from_rows(vec![vec![c(1), c(2)]]);
        assert!(matches!(m.det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rank_at_examples() {
        let zero = PolyMatrix::from_rows(vec![vec![c(0), c(0)], vec![c(0), c(0)]]);
        assert_eq!(zero.rank_at(&[int(0), int(0), int(0)]).unwrap(), 0);
        let m = martinet_columns();
        assert_eq!(m.rank_at(&[int(0), int(0), int(0)]).unwrap(), 2);
        assert_eq!(m.rank_at(&[int(1), int(0), int(0)]).unwrap(), 3);
        assert!(matches!(m.rank_at(&[int(1)]), Err(Error::Arity { .. })));
    }

    #[test]
    fn generic_rank_examples() {
        assert_eq!(PolyMatrix::from_rows(vec![vec![x(0)]]).generic_rank(), 1);
        assert_eq!(martinet_columns().generic_rank(), 3);
        let prop = PolyMatrix::from_columns(&[
            vec![x(0), x(1), c(1)],
            vec![&x(0) * &x(2), &x(1) * &x(2), x(2)],
        ]);
        assert_eq!(prop.generic_rank(), 1);
        assert_eq!(prop.bareiss_rank(), 1);
        assert_eq!(martinet_columns().bareiss_rank(), 3);
    }

    #[test]
    fn rat_solve_and_nullspace() {
        let a = RatMatrix::from_columns(2, &[vec![int(1), int(0)], vec![int(1), int(1)]]);
        let x = a.solve(&[int(3), int(2)]).unwrap();
        assert_eq!(x, vec![int(1), int(2)]);
        let b = RatMatrix::from_columns(2, &[vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert!(b.solve(&[int(1), int(0)]).is_none());
        let ns = b.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(b.mul_vec(&ns[0]), vec![int(0), int(0)]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul_vec(&[int(3), int(2)]), vec![int(1), int(2)]);
        assert_eq!(a.det(), int(1));
    }
}
