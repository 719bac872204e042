//! Matrix bi-factorisations of `W = x^d - y^d`, their tensor products,
//! morphisms, unit isomorphisms, duals and twists.
//!
//! Conventions. An object has external variables `x` (left) and `y` (right)
//! and internal variables `s1, s2, …`. In `M ⊗ N` the right variable of `M`
//! and the left variable of `N` become one internal variable; internal
//! variables are numbered by the position of the tensor boundary they come
//! from, so both bracketings of a triple product use the same names.
//!
//! Block conventions for `M ⊗ N`:
//! `(M⊗N)_0 = M0⊗N0 ⊕ M1⊗N1`, `(M⊗N)_1 = M1⊗N0 ⊕ M0⊗N1`, and
//! `(1 ⊗ d_N)(m ⊗ n) = (-1)^{|m|} m ⊗ d_N(n)`.

mod duality;
mod linop;
mod morphism;
mod twist;

pub use duality::*;
pub use linop::LinOp;
pub use morphism::*;
pub use twist::*;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclofield::{CycError, CycNum, Root};
use crate::polyring::{perm_product, MPoly, PolyError, Var, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MfError {
    #[error("objects are defined over different roots of unity")]
    ModulusMismatch,
    #[error("variable conventions of the operands do not match: {0}")]
    VariableMismatch(String),
    #[error("not a matrix factorisation: {0}")]
    NotAFactorisation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("exact division failed")]
    NotDivisible,
    #[error("closed-form component is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("operation needs at most {limit} internal variables, found {found}")]
    TooManyInternalVariables { found: usize, limit: usize },
    #[error("operation requires a rank-one factorisation")]
    NotRankOne,
    #[error("quotient homology is infinite dimensional")]
    InfiniteHomology,
    #[error("grading violated: {0}")]
    Grading(String),
    #[error(transparent)]
    Field(#[from] CycError),
}

impl From<PolyError> for MfError {
    fn from(_: PolyError) -> Self {
        MfError::NotDivisible
    }
}

pub const MAX_INTERNAL: usize = NVARS - 2;

/// Matrix with polynomial entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMat {
    pub rows: usize,
    pub cols: usize,
    e: Vec<MPoly>,
}

impl PolyMat {
    pub fn zeros(d: u32, rows: usize, cols: usize) -> PolyMat {
        PolyMat { rows, cols, e: vec![MPoly::zero(d); rows * cols] }
    }

    pub fn identity(d: u32, n: usize) -> PolyMat {
        let mut m = Self::zeros(d, n, n);
        for i in 0..n {
            m.set(i, i, MPoly::one(d));
        }
        m
    }

    pub fn scalar(p: MPoly) -> PolyMat {
        PolyMat { rows: 1, cols: 1, e: vec![p] }
    }

    pub fn from_rows(d: u32, rows: Vec<Vec<MPoly>>) -> PolyMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(d, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn d(&self) -> u32 {
        self.e.first().map_or(1, |p| p.d())
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MPoly) {
        self.e[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &MPoly> {
        self.e.iter()
    }

    pub fn mul(&self, o: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let d = self.d().max(o.d());
        let mut out = PolyMat::zeros(d, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = MPoly::zero(d);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, o: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> PolyMat {
        PolyMat { rows: self.rows, cols: self.cols, e: self.e.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&MPoly) -> Result<MPoly, MfError>) -> Result<PolyMat, MfError> {
        let e = self.e.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMat { rows: self.rows, cols: self.cols, e })
    }

    pub fn scale(&self, c: &CycNum) -> PolyMat {
        self.map(|p| p.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|p| p.is_zero())
    }

    pub fn rename(&self, map: &[(Var, Var)]) -> PolyMat {
        self.map(|p| p.rename(map))
    }

    pub fn substitute(&self, map: &[(Var, MPoly)]) -> PolyMat {
        self.map(|p| p.substitute(map))
    }

    /// `A ⊗ 1_n` with row/column index `(i, k) ↦ i·n + k`.
    pub fn kron_left(&self, n: usize) -> PolyMat {
        let d = self.d();
        let mut out = PolyMat::zeros(d, self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..n {
                    out.set(i * n + k, j * n + k, self.get(i, j).clone());
                }
            }
        }
        out
    }

    /// `1_m ⊗ B`.
    pub fn kron_right(&self, m: usize) -> PolyMat {
        let d = self.d();
        let mut out = PolyMat::zeros(d, self.rows * m, self.cols * m);
        for k in 0..m {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out.set(k * self.rows + i, k * self.cols + j, self.get(i, j).clone());
                }
            }
        }
        out
    }

    /// 2×2 block matrix.
    pub fn blocks(a: &PolyMat, b: &PolyMat, c: &PolyMat, dd: &PolyMat) -> PolyMat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, dd.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, dd.cols);
        let d = a.d().max(b.d()).max(c.d()).max(dd.d());
        let mut out = PolyMat::zeros(d, a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (dd, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.e.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?}; ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Position of a basis vector inside an iterated tensor product: the
/// `Z/2`-degree and index of the generator contributed by each leaf.
pub type BasisLabel = Vec<(u8, u16)>;

/// A matrix bi-factorisation `(M0, M1, d0: M0 → M1, d1: M1 → M0)` of
/// `x^d - y^d` over the polynomial ring in the external and internal
/// variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixBifact {
    root: Root,
    n_int: usize,
    /// `rank1 × rank0`.
    pub d0: PolyMat,
    /// `rank0 × rank1`.
    pub d1: PolyMat,
    labels: [Vec<BasisLabel>; 2],
}

impl fmt::Debug for MatrixBifact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixBifact(d={}, ranks=({}, {}), internal={})\n d0 = {:?} d1 = {:?}",
            self.root.d(), self.rank0(), self.rank1(), self.n_int, self.d0, self.d1)
    }
}

impl MatrixBifact {
    /// Builds an object from its differentials; shapes are checked, the
    /// factorisation identity is not (see [`verify_factorisation`]).
    pub fn new(root: Root, n_int: usize, d0: PolyMat, d1: PolyMat) -> Result<MatrixBifact, MfError> {
        if d0.rows != d1.cols || d0.cols != d1.rows {
            return Err(MfError::ShapeMismatch(alloc::format!(
                "d0 is {}x{}, d1 is {}x{}",
                d0.rows, d0.cols, d1.rows, d1.cols
            )));
        }
        if n_int > MAX_INTERNAL {
            return Err(MfError::TooManyInternalVariables { found: n_int, limit: MAX_INTERNAL });
        }
        let labels = [
            (0..d0.cols).map(|i| vec![(0u8, i as u16)]).collect(),
            (0..d1.cols).map(|i| vec![(1u8, i as u16)]).collect(),
        ];
        Ok(MatrixBifact { root, n_int, d0, d1, labels })
    }

    pub fn root(&self) -> Root {
        self.root
    }

    pub fn d(&self) -> u32 {
        self.root.d()
    }

    pub fn left_var(&self) -> Var {
        Var::X
    }

    pub fn right_var(&self) -> Var {
        Var::Y
    }

    pub fn n_internal(&self) -> usize {
        self.n_int
    }

    pub fn int_vars(&self) -> Vec<Var> {
        (0..self.n_int).map(Var::internal).collect()
    }

    pub fn rank0(&self) -> usize {
        self.d0.cols
    }

    pub fn rank1(&self) -> usize {
        self.d1.cols
    }

    pub fn rank(&self, i: usize) -> usize {
        if i % 2 == 0 {
            self.rank0()
        } else {
            self.rank1()
        }
    }

    /// Differential leaving component `i`.
    pub fn diff(&self, i: usize) -> &PolyMat {
        if i % 2 == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }

    pub fn labels(&self, i: usize) -> &[BasisLabel] {
        &self.labels[i % 2]
    }

    pub fn n_leaves(&self) -> usize {
        self.labels[0].first().or(self.labels[1].first()).map_or(1, |l| l.len())
    }

    pub fn potential(&self) -> MPoly {
        potential(&self.root)
    }

    /// True when the object is contractible by inspection: a unit entry in
    /// a rank-one differential.
    pub fn is_trivially_zero(&self) -> bool {
        self.rank0() == 1
            && self.rank1() == 1
            && (self.d0.get(0, 0).as_constant().is_some_and(|c| !c.is_zero())
                || self.d1.get(0, 0).as_constant().is_some_and(|c| !c.is_zero()))
    }

    pub(crate) fn with_labels(mut self, labels: [Vec<BasisLabel>; 2]) -> MatrixBifact {
        assert_eq!(labels[0].len(), self.rank0());
        assert_eq!(labels[1].len(), self.rank1());
        self.labels = labels;
        self
    }

    pub(crate) fn with_d(&self, d0: PolyMat, d1: PolyMat) -> MatrixBifact {
        MatrixBifact { root: self.root, n_int: self.n_int, d0, d1, labels: self.labels.clone() }
    }
}

/// `x^d - y^d`.
pub fn potential(root: &Root) -> MPoly {
    let d = root.d();
    &MPoly::x(d).pow(d) - &MPoly::y(d).pow(d)
}

/// Checks `d0·d1 = W·1` and `d1·d0 = W·1`.
pub fn verify_factorisation(m: &MatrixBifact) -> Result<(), MfError> {
    let d = m.d();
    let w = m.potential();
    let a = m.d1.mul(&m.d0);
    let b = m.d0.mul(&m.d1);
    let wa = PolyMat::identity(d, m.rank0()).map(|p| p * &w);
    let wb = PolyMat::identity(d, m.rank1()).map(|p| p * &w);
    if a != wa {
        return Err(MfError::NotAFactorisation("d1·d0 differs from W on M0".into()));
    }
    if b != wb {
        return Err(MfError::NotAFactorisation("d0·d1 differs from W on M1".into()));
    }
    Ok(())
}

/// Normalises a subset of `Z/d` to sorted distinct residues.
pub fn normalise_set(d: u32, s: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = s.iter().map(|j| j.rem_euclid(d as i64)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The permutation-type factorisation `P_S` with
/// `d1 = Π_{j∈S}(x - η^j y)` and `d0 = Π_{j∉S}(x - η^j y)`.
pub fn perm_mf(root: &Root, s: &[i64]) -> MatrixBifact {
    let d = root.d();
    let s = normalise_set(d, s);
    let comp: Vec<i64> = (0..d as i64).filter(|j| !s.contains(j)).collect();
    let d1 = perm_product(root, &s, Var::X, Var::Y);
    let d0 = perm_product(root, &comp, Var::X, Var::Y);
    MatrixBifact::new(*root, 0, PolyMat::scalar(d0), PolyMat::scalar(d1)).expect("rank one shapes")
}

/// Consecutive label `{a, a+1, …, a+λ}`.
pub fn consecutive(a: i64, lambda: u32) -> Vec<i64> {
    (0..=lambda as i64).map(|k| a + k).collect()
}

/// `P_{a:λ}`.
pub fn perm_consecutive(root: &Root, a: i64, lambda: u32) -> MatrixBifact {
    perm_mf(root, &consecutive(a, lambda))
}

/// The tensor unit `I = P_{{0}}`.
pub fn unit_mf(root: &Root) -> MatrixBifact {
    perm_mf(root, &[0])
}

/// The object `T = P_{(d-1)/2 : 1}`.
pub fn t_object(root: &Root) -> MatrixBifact {
    let h = (root.d() as i64 - 1) / 2;
    perm_consecutive(root, h, 1)
}

pub(crate) fn check_same_root(a: &MatrixBifact, b: &MatrixBifact) -> Result<(), MfError> {
    if a.root != b.root {
        Err(MfError::ModulusMismatch)
    } else {
        Ok(())
    }
}

/// Variable renamings that place `M` and `N` inside `M ⊗ N`.
pub(crate) fn tensor_renamings(m_int: usize, n_int: usize) -> (Vec<(Var, Var)>, Vec<(Var, Var)>) {
    let mid = Var::internal(m_int);
    let left = vec![(Var::Y, mid)];
    let mut right = vec![(Var::X, mid)];
    for k in 0..n_int {
        right.push((Var::internal(k), Var::internal(m_int + 1 + k)));
    }
    (left, right)
}

/// `M ⊗ N`: the right variable of `M` and the left variable of `N` become
/// a fresh internal variable.
pub fn tensor_mf(m: &MatrixBifact, n: &MatrixBifact) -> Result<MatrixBifact, MfError> {
    check_same_root(m, n)?;
    let n_int = m.n_int + n.n_int + 1;
    if n_int > MAX_INTERNAL {
        return Err(MfError::TooManyInternalVariables { found: n_int, limit: MAX_INTERNAL });
    }
    let (lr, rr) = tensor_renamings(m.n_int, n.n_int);
    let md0 = m.d0.rename(&lr);
    let md1 = m.d1.rename(&lr);
    let nd0 = n.d0.rename(&rr);
    let nd1 = n.d1.rename(&rr);
    let (m0, m1, n0, n1) = (m.rank0(), m.rank1(), n.rank0(), n.rank1());
    let sign = if m.root.koszul_fault() { 1 } else { -1 };
    let neg = |p: &PolyMat| p.map(|q| q.scale(&CycNum::from_int(q.d(), sign)));
    // d1: (M1⊗N0 ⊕ M0⊗N1) → (M0⊗N0 ⊕ M1⊗N1)
    let d1 = PolyMat::blocks(&md1.kron_left(n0), &nd1.kron_right(m0), &neg(&nd0.kron_right(m1)), &md0.kron_left(n1));
    // d0: (M0⊗N0 ⊕ M1⊗N1) → (M1⊗N0 ⊕ M0⊗N1)
    let d0 = PolyMat::blocks(&md0.kron_left(n0), &neg(&nd1.kron_right(m1)), &nd0.kron_right(m0), &md1.kron_left(n1));
    let cat = |a: &BasisLabel, b: &BasisLabel| {
        let mut v = a.clone();
        v.extend_from_slice(b);
        v
    };
    let prod = |ma: &[BasisLabel], nb: &[BasisLabel]| {
        let mut out = Vec::new();
        for a in ma {
            for b in nb {
                out.push(cat(a, b));
            }
        }
        out
    };
    let mut l0 = prod(&m.labels[0], &n.labels[0]);
    l0.extend(prod(&m.labels[1], &n.labels[1]));
    let mut l1 = prod(&m.labels[1], &n.labels[0]);
    l1.extend(prod(&m.labels[0], &n.labels[1]));
    Ok(MatrixBifact::new(m.root, n_int, d0, d1)?.with_labels([l0, l1]))
}

/// Direct sum of objects over the same variables.
pub fn direct_sum(objs: &[&MatrixBifact]) -> Result<MatrixBifact, MfError> {
    let first = objs.first().ok_or_else(|| MfError::ShapeMismatch("empty direct sum".into()))?;
    let d = first.d();
    let n_int = first.n_int;
    for o in objs {
        check_same_root(first, o)?;
        if o.n_int != n_int {
            return Err(MfError::VariableMismatch("summands have different internal variables".into()));
        }
    }
    let r0: usize = objs.iter().map(|o| o.rank0()).sum();
    let r1: usize = objs.iter().map(|o| o.rank1()).sum();
    let mut d0 = PolyMat::zeros(d, r1, r0);
    let mut d1 = PolyMat::zeros(d, r0, r1);
    let (mut o0, mut o1) = (0, 0);
    let mut labels: [Vec<BasisLabel>; 2] = [Vec::new(), Vec::new()];
    for (k, o) in objs.iter().enumerate() {
        for i in 0..o.rank1() {
            for j in 0..o.rank0() {
                d0.set(o1 + i, o0 + j, o.d0.get(i, j).clone());
                d1.set(o0 + j, o1 + i, o.d1.get(j, i).clone());
            }
        }
        for c in 0..2 {
            for l in &o.labels[c] {
                let mut l = l.clone();
                l.insert(0, (2, k as u16));
                labels[c].push(l);
            }
        }
        o0 += o.rank0();
        o1 += o.rank1();
    }
    Ok(MatrixBifact::new(first.root, n_int, d0, d1)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_objects_factorise() {
        for d in [3u32, 5, 7] {
            let rt = Root::standard(d).unwrap();
            for s in [vec![0], vec![1, 2], vec![0, 2], vec![]] {
                verify_factorisation(&perm_mf(&rt, &s)).unwrap();
            }
        }
    }

    #[test]
    fn unit_differential() {
        let rt = Root::standard(3).unwrap();
        let i = unit_mf(&rt);
        assert_eq!(i.d1.get(0, 0), &(&MPoly::x(3) - &MPoly::y(3)));
        assert_eq!(i.d0.get(0, 0).len(), 3);
    }

    #[test]
    fn tensor_products_factorise() {
        let rt = Root::standard(5).unwrap();
        let t = t_object(&rt);
        let p = perm_consecutive(&rt, 1, 2);
        let tp = tensor_mf(&t, &p).unwrap();
        verify_factorisation(&tp).unwrap();
        assert_eq!((tp.rank0(), tp.rank1(), tp.n_internal()), (2, 2, 1));
        let ttt = tensor_mf(&tp, &t).unwrap();
        verify_factorisation(&ttt).unwrap();
        assert_eq!((ttt.rank0(), ttt.n_internal()), (4, 2));
    }

    #[test]
    fn injected_sign_fault_breaks_tensor() {
        let rt = Root::standard(3).unwrap().with_koszul_fault();
        let t = t_object(&rt);
        assert!(verify_factorisation(&tensor_mf(&t, &t).unwrap()).is_err());
    }
}
