//! Dense linear algebra over `Q(ζ_{2d})`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclofield::CycNum;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<CycNum>,
}

impl Matrix {
    pub fn zeros(d: u32, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, e: vec![CycNum::zero(d); rows * cols] }
    }

    pub fn identity(d: u32, n: usize) -> Matrix {
        let mut m = Self::zeros(d, n, n);
        for i in 0..n {
            m.e[i * n + i] = CycNum::one(d);
        }
        m
    }

    pub fn from_rows(d: u32, rows: Vec<Vec<CycNum>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(d, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, x) in row.into_iter().enumerate() {
                m.e[i * c + j] = x;
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.e[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let d = self.e.first().or(o.e.first()).map_or(1, |x| x.d());
        let mut out = Matrix::zeros(d, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        row_reduce(self.clone()).1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<CycNum>> {
        let d = self.e.first().map_or(1, |x| x.d());
        let (r, pivots) = row_reduce(self.clone());
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![CycNum::zero(d); self.cols];
            v[free] = CycNum::one(d);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[CycNum]) -> Option<Vec<CycNum>> {
        assert_eq!(b.len(), self.rows);
        let d = self.e.first().or(b.first()).map_or(1, |x| x.d());
        let mut aug = Matrix::zeros(d, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = row_reduce(aug);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![CycNum::zero(d); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Reduced row echelon form and pivot columns.
pub fn row_reduce(mut m: Matrix) -> (Matrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        // prefer rational pivots: their inverses are cheap
        let mut pick = None;
        for i in row..m.rows {
            let v = m.get(i, col);
            if !v.is_zero() {
                if v.as_rational().is_some() {
                    pick = Some(i);
                    break;
                }
                if pick.is_none() {
                    pick = Some(i);
                }
            }
        }
        let Some(p) = pick else { continue };
        if p != row {
            for j in 0..m.cols {
                m.e.swap(p * m.cols + j, row * m.cols + j);
            }
        }
        let inv = m.get(row, col).inv().expect("nonzero pivot");
        for j in col..m.cols {
            let v = m.get(row, j) * &inv;
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let f = m.get(i, col).clone();
            if f.is_zero() {
                continue;
            }
            for j in col..m.cols {
                let r = m.get(row, j);
                if r.is_zero() {
                    continue;
                }
                let v = m.get(i, j) - &(&f * r);
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Sparse linear system `A u = b` assembled row by row and reduced
/// incrementally to echelon form.
pub struct SparseSystem {
    d: u32,
    pub n_unknowns: usize,
    /// pivot column -> (row with leading entry 1 at the pivot, rhs)
    pivots: BTreeMap<usize, (BTreeMap<usize, CycNum>, CycNum)>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(d: u32, n_unknowns: usize) -> SparseSystem {
        SparseSystem { d, n_unknowns, pivots: BTreeMap::new(), inconsistent: false }
    }

    pub fn push(&mut self, row: Vec<(usize, CycNum)>, rhs: CycNum) {
        let mut r: BTreeMap<usize, CycNum> = BTreeMap::new();
        for (j, v) in row {
            assert!(j < self.n_unknowns);
            let e = r.entry(j).or_insert_with(|| CycNum::zero(self.d));
            *e += &v;
        }
        r.retain(|_, v| !v.is_zero());
        let mut rhs = rhs;
        let mut from = 0;
        loop {
            let next = r.range(from..).map(|(k, _)| *k).find(|k| self.pivots.contains_key(k));
            let Some(c) = next else { break };
            let f = r.remove(&c).unwrap();
            let (prow, prhs) = &self.pivots[&c];
            for (j, v) in prow {
                if *j == c {
                    continue;
                }
                let e = r.entry(*j).or_insert_with(|| CycNum::zero(self.d));
                *e -= &(&f * v);
                if e.is_zero() {
                    r.remove(j);
                }
            }
            rhs -= &(&f * prhs);
            from = c + 1;
        }
        let Some((&c, lead)) = r.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lead.inv().expect("nonzero pivot");
        for v in r.values_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;
        self.pivots.insert(c, (r, rhs));
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    fn back_substitute(&self, mut x: Vec<CycNum>, with_rhs: bool) -> Vec<CycNum> {
        for (c, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = if with_rhs { rhs.clone() } else { CycNum::zero(self.d) };
            for (j, a) in row {
                if j != c && !x[*j].is_zero() {
                    v -= &(a * &x[*j]);
                }
            }
            x[*c] = v;
        }
        x
    }

    /// Some solution, with every free unknown set to zero.
    pub fn solve(&self) -> Option<Vec<CycNum>> {
        if self.inconsistent {
            return None;
        }
        Some(self.back_substitute(vec![CycNum::zero(self.d); self.n_unknowns], true))
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<CycNum>> {
        let mut out = Vec::new();
        for free in 0..self.n_unknowns {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut x = vec![CycNum::zero(self.d); self.n_unknowns];
            x[free] = CycNum::one(self.d);
            out.push(self.back_substitute(x, false));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let d = 5;
        let n = |k| CycNum::from_int(d, k);
        let e = CycNum::eta_power(d, 1);
        let m = Matrix::from_rows(d, vec![vec![n(1), e.clone()], vec![e.clone(), &e * &e]]);
        assert_eq!(m.rank(), 1);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!((&v[0] + &(&e * &v[1])).is_zero());
        let x = m.solve(&[n(1), e.clone()]).unwrap();
        assert_eq!(&x[0] + &(&e * &x[1]), n(1));
        assert!(m.solve(&[n(1), n(1)]).is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        let d = 3;
        let n = |k| CycNum::from_int(d, k);
        let e = CycNum::eta_power(d, 1);
        let rows = vec![
            vec![(0, n(1)), (2, e.clone())],
            vec![(1, n(2)), (2, n(1))],
            vec![(0, n(2)), (1, n(2)), (2, &(&e + &e) + &n(1))],
        ];
        let mut sys = SparseSystem::new(d, 3);
        for (r, b) in rows.iter().zip([n(1), n(0), n(2)]) {
            sys.push(r.clone(), b);
        }
        assert_eq!(sys.rank(), 2);
        let x = sys.solve().unwrap();
        for (r, b) in rows.iter().zip([n(1), n(0), n(2)]) {
            let mut acc = n(0);
            for (j, v) in r {
                acc += &(v * &x[*j]);
            }
            assert_eq!(acc, b);
        }
        let k = sys.nullspace();
        assert_eq!(k.len(), 1);
        sys.push(vec![(0, n(1)), (2, e.clone())], n(5));
        assert!(sys.solve().is_none());
    }
}
