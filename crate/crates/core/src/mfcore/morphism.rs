use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{direct_sum, tensor_mf, LinOp, MatrixBifact, MfError, PolyMat};
use crate::cyclofield::CycNum;
use crate::polyring::{MPoly, Mono, Var};

/// Matrix of operators; entry `(i, j)` maps the `j`-th source coordinate
/// into the `i`-th target coordinate.
#[derive(Clone, Debug)]
pub struct OpMat {
    pub rows: usize,
    pub cols: usize,
    e: Vec<LinOp>,
}

impl OpMat {
    pub fn zeros(rows: usize, cols: usize) -> OpMat {
        OpMat { rows, cols, e: vec![LinOp::zero(); rows * cols] }
    }

    pub fn identity(d: u32, n: usize) -> OpMat {
        Self::diagonal(n, LinOp::identity(d))
    }

    pub fn diagonal(n: usize, op: LinOp) -> OpMat {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, op.clone());
        }
        m
    }

    pub fn from_polymat(p: &PolyMat) -> OpMat {
        let mut m = Self::zeros(p.rows, p.cols);
        for i in 0..p.rows {
            for j in 0..p.cols {
                m.set(i, j, LinOp::mul(p.get(i, j).clone()));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &LinOp {
        &self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: LinOp) {
        self.e[i * self.cols + j] = op;
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &OpMat) -> OpMat {
        assert_eq!(self.cols, other.rows, "operator matrix shapes");
        let mut out = OpMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LinOp::zero();
                for k in 0..self.cols {
                    acc = acc.plus(&self.get(i, k).after(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn plus(&self, other: &OpMat) -> OpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        OpMat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&other.e).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn scaled(&self, c: &CycNum) -> OpMat {
        OpMat { rows: self.rows, cols: self.cols, e: self.e.iter().map(|a| a.scaled(c)).collect() }
    }

    /// Conjugates every entry: `post ∘ op ∘ pre`.
    pub fn conjugated(&self, pre: &LinOp, post: &LinOp) -> OpMat {
        OpMat { rows: self.rows, cols: self.cols, e: self.e.iter().map(|a| post.after(&a.after(pre))).collect() }
    }

    pub fn apply(&self, v: &[MPoly]) -> Result<Vec<MPoly>, MfError> {
        assert_eq!(v.len(), self.cols);
        let d = v.first().map_or(1, |p| p.d());
        let mut out = vec![MPoly::zero(d); self.rows];
        for j in 0..self.cols {
            if v[j].is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let op = self.get(i, j);
                if !op.is_zero() {
                    *o = &*o + &op.apply(&v[j])?;
                }
            }
        }
        Ok(out)
    }

    /// Polynomial matrix of images of the standard basis vectors.
    pub fn materialize(&self, d: u32) -> Result<PolyMat, MfError> {
        let mut m = PolyMat::zeros(d, self.rows, self.cols);
        let one = MPoly::one(d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let op = self.get(i, j);
                if !op.is_zero() {
                    m.set(i, j, op.apply(&one)?);
                }
            }
        }
        Ok(m)
    }
}

/// A `Z/2`-homogeneous map of factorisations; `comps[i]` sends `src_i` to
/// `tgt_{i+degree}`.
#[derive(Clone, Debug)]
pub struct MFMorphism {
    pub src: Arc<MatrixBifact>,
    pub tgt: Arc<MatrixBifact>,
    pub degree: usize,
    pub comps: [OpMat; 2],
}

fn same(a: &Arc<MatrixBifact>, b: &Arc<MatrixBifact>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// All monomials in `vars` of total degree at most `bound`.
pub fn monomials_up_to(vars: &[Var], bound: u32) -> Vec<Mono> {
    let mut out = vec![Mono::ONE];
    for v in vars {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=bound.saturating_sub(m.degree()) {
                next.push(m.mul(Mono::var(*v, e)));
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Default internal-degree bound for operator identities: all operator
/// primitives are periodic in internal degree with period `d` from degree 1
/// on, so two periods plus slack suffice.
pub fn default_test_degree(d: u32) -> u32 {
    2 * d + 2
}

impl MFMorphism {
    pub fn new(
        src: Arc<MatrixBifact>,
        tgt: Arc<MatrixBifact>,
        degree: usize,
        c0: OpMat,
        c1: OpMat,
    ) -> Result<MFMorphism, MfError> {
        if src.root() != tgt.root() {
            return Err(MfError::ModulusMismatch);
        }
        let degree = degree % 2;
        for (i, c) in [&c0, &c1].into_iter().enumerate() {
            if c.cols != src.rank(i) || c.rows != tgt.rank(i + degree) {
                return Err(MfError::ShapeMismatch(alloc::format!(
                    "component {i} is {}x{}, expected {}x{}",
                    c.rows,
                    c.cols,
                    tgt.rank(i + degree),
                    src.rank(i)
                )));
            }
        }
        Ok(MFMorphism { src, tgt, degree, comps: [c0, c1] })
    }

    pub fn from_polys(
        src: Arc<MatrixBifact>,
        tgt: Arc<MatrixBifact>,
        degree: usize,
        p0: &PolyMat,
        p1: &PolyMat,
    ) -> Result<MFMorphism, MfError> {
        Self::new(src, tgt, degree, OpMat::from_polymat(p0), OpMat::from_polymat(p1))
    }

    pub fn identity(m: Arc<MatrixBifact>) -> MFMorphism {
        let d = m.d();
        let c0 = OpMat::identity(d, m.rank0());
        let c1 = OpMat::identity(d, m.rank1());
        MFMorphism { src: m.clone(), tgt: m, degree: 0, comps: [c0, c1] }
    }

    pub fn zero(src: Arc<MatrixBifact>, tgt: Arc<MatrixBifact>, degree: usize) -> MFMorphism {
        let degree = degree % 2;
        let c0 = OpMat::zeros(tgt.rank(degree), src.rank0());
        let c1 = OpMat::zeros(tgt.rank(1 + degree), src.rank1());
        MFMorphism { src, tgt, degree, comps: [c0, c1] }
    }

    /// The odd endomorphism `(d0, d1)` of `m`.
    pub fn differential(m: Arc<MatrixBifact>) -> MFMorphism {
        let c0 = OpMat::from_polymat(&m.d0);
        let c1 = OpMat::from_polymat(&m.d1);
        MFMorphism { src: m.clone(), tgt: m, degree: 1, comps: [c0, c1] }
    }

    pub fn d(&self) -> u32 {
        self.src.d()
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &MFMorphism) -> Result<MFMorphism, MfError> {
        if !same(&g.tgt, &self.src) {
            return Err(MfError::ShapeMismatch("composition: target and source differ".into()));
        }
        let c = |i: usize| self.comps[(i + g.degree) % 2].after(&g.comps[i]);
        Ok(MFMorphism { src: g.src.clone(), tgt: self.tgt.clone(), degree: (self.degree + g.degree) % 2, comps: [c(0), c(1)] })
    }

    fn check_parallel(&self, g: &MFMorphism) -> Result<(), MfError> {
        if !same(&self.src, &g.src) || !same(&self.tgt, &g.tgt) || self.degree != g.degree {
            return Err(MfError::ShapeMismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, g: &MFMorphism) -> Result<MFMorphism, MfError> {
        self.check_parallel(g)?;
        let c = |i: usize| self.comps[i].plus(&g.comps[i]);
        Ok(MFMorphism { src: self.src.clone(), tgt: self.tgt.clone(), degree: self.degree, comps: [c(0), c(1)] })
    }

    pub fn scaled(&self, s: &CycNum) -> MFMorphism {
        let c = |i: usize| self.comps[i].scaled(s);
        MFMorphism { src: self.src.clone(), tgt: self.tgt.clone(), degree: self.degree, comps: [c(0), c(1)] }
    }

    pub fn sub(&self, g: &MFMorphism) -> Result<MFMorphism, MfError> {
        self.add(&g.scaled(&-CycNum::one(self.d())))
    }

    /// The morphism-complex differential `d_tgt ∘ f - (-1)^{|f|} f ∘ d_src`.
    pub fn boundary(&self) -> Result<MFMorphism, MfError> {
        let dt = MFMorphism::differential(self.tgt.clone());
        let ds = MFMorphism::differential(self.src.clone());
        let a = dt.compose(self)?;
        let b = self.compose(&ds)?;
        let sign = if self.degree == 0 { -1 } else { 1 };
        a.add(&b.scaled(&CycNum::from_int(self.d(), sign)))
    }

    /// Test vectors: basis vectors times internal monomials up to `bound`.
    fn vanishes(&self, bound: u32) -> Result<bool, MfError> {
        let d = self.d();
        let monos = monomials_up_to(&self.src.int_vars(), bound);
        for i in 0..2 {
            let r = self.src.rank(i);
            for j in 0..r {
                for m in &monos {
                    let mut v = vec![MPoly::zero(d); r];
                    v[j] = MPoly::term(CycNum::one(d), *m);
                    if self.comps[i].apply(&v)?.iter().any(|p| !p.is_zero()) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Whether this morphism is zero. Exact when the source has no internal
    /// variables; otherwise checked on internal monomials up to `bound`.
    pub fn is_zero(&self, bound: u32) -> Result<bool, MfError> {
        self.vanishes(bound)
    }

    pub fn is_cycle(&self, bound: u32) -> Result<bool, MfError> {
        self.boundary()?.vanishes(bound)
    }

    pub fn equals(&self, g: &MFMorphism, bound: u32) -> Result<bool, MfError> {
        self.sub(g)?.vanishes(bound)
    }

    /// Polynomial matrices of both components; needs a source without
    /// internal variables.
    pub fn as_polys(&self) -> Result<[PolyMat; 2], MfError> {
        if self.src.n_internal() != 0 {
            return Err(MfError::TooManyInternalVariables { found: self.src.n_internal(), limit: 0 });
        }
        Ok([self.comps[0].materialize(self.d())?, self.comps[1].materialize(self.d())?])
    }

    /// Replaces operator entries by the polynomials they multiply by.
    pub fn materialized(&self) -> Result<MFMorphism, MfError> {
        let [p0, p1] = self.as_polys()?;
        MFMorphism::from_polys(self.src.clone(), self.tgt.clone(), self.degree, &p0, &p1)
    }

    pub fn apply(&self, i: usize, v: &[MPoly]) -> Result<Vec<MPoly>, MfError> {
        self.comps[i % 2].apply(v)
    }

    /// Same morphism viewed between equal copies of its objects.
    pub fn retarget(&self, src: Arc<MatrixBifact>, tgt: Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
        if !same(&src, &self.src) || !same(&tgt, &self.tgt) {
            return Err(MfError::ShapeMismatch("retarget to different objects".into()));
        }
        Ok(MFMorphism { src, tgt, degree: self.degree, comps: self.comps.clone() })
    }
}

fn block_offset(k: usize, i: usize, m: &MatrixBifact, n: &MatrixBifact) -> usize {
    // (M⊗N)_0 = M0N0 ⊕ M1N1, (M⊗N)_1 = M1N0 ⊕ M0N1
    let first = if k == 0 { 0 } else { 1 };
    if i == first {
        0
    } else {
        m.rank(first) * n.rank0()
    }
}

/// `f ⊗ g` with `(f ⊗ g)(m ⊗ n) = (-1)^{|g||m|} f(m) ⊗ g(n)`.
pub fn tensor_morphisms(f: &MFMorphism, g: &MFMorphism) -> Result<MFMorphism, MfError> {
    let src = Arc::new(tensor_mf(&f.src, &g.src)?);
    let tgt = Arc::new(tensor_mf(&f.tgt, &g.tgt)?);
    tensor_morphisms_into(f, g, src, tgt)
}

pub(crate) fn tensor_morphisms_into(
    f: &MFMorphism,
    g: &MFMorphism,
    src: Arc<MatrixBifact>,
    tgt: Arc<MatrixBifact>,
) -> Result<MFMorphism, MfError> {
    let d = f.d();
    let (m, n, mt, nt) = (&f.src, &g.src, &f.tgt, &g.tgt);
    let deg = (f.degree + g.degree) % 2;
    let mut comps = [OpMat::zeros(tgt.rank(deg), src.rank0()), OpMat::zeros(tgt.rank(1 + deg), src.rank1())];
    for (k, comp) in comps.iter_mut().enumerate() {
        for i in 0..2 {
            let j = (k + i) % 2;
            let (it, jt) = ((i + f.degree) % 2, (j + g.degree) % 2);
            let kt = (it + jt) % 2;
            let so = block_offset(k, i, m, n);
            let to = block_offset(kt, it, mt, nt);
            let sign = if g.degree * i % 2 == 1 { -1 } else { 1 };
            let sgn = CycNum::from_int(d, sign);
            let fc = &f.comps[i];
            let gc = &g.comps[j];
            for a in 0..m.rank(i) {
                for b in 0..n.rank(j) {
                    for at in 0..mt.rank(it) {
                        let fop = fc.get(at, a);
                        if fop.is_zero() {
                            continue;
                        }
                        for bt in 0..nt.rank(jt) {
                            let gop = gc.get(bt, b);
                            if gop.is_zero() {
                                continue;
                            }
                            let op = LinOp::tensor(fop, gop, m.n_internal(), mt.n_internal(), nt.n_internal());
                            comp.set(to + at * nt.rank(jt) + bt, so + a * n.rank(j) + b, op.scaled(&sgn));
                        }
                    }
                }
            }
        }
    }
    MFMorphism::new(src, tgt, deg, comps[0].clone(), comps[1].clone())
}

/// `(f_1, …, f_k): X_1 ⊕ … ⊕ X_k → Y`.
pub fn hstack(fs: &[&MFMorphism]) -> Result<MFMorphism, MfError> {
    let first = fs.first().ok_or_else(|| MfError::ShapeMismatch("empty family".into()))?;
    let srcs: Vec<&MatrixBifact> = fs.iter().map(|f| &*f.src).collect();
    let src = Arc::new(direct_sum(&srcs)?);
    let tgt = first.tgt.clone();
    let deg = first.degree;
    let mut comps = [OpMat::zeros(tgt.rank(deg), src.rank0()), OpMat::zeros(tgt.rank(1 + deg), src.rank1())];
    for (k, comp) in comps.iter_mut().enumerate() {
        let mut off = 0;
        for f in fs {
            if !same(&f.tgt, &tgt) || f.degree != deg {
                return Err(MfError::ShapeMismatch("hstack: targets differ".into()));
            }
            for r in 0..comp.rows {
                for c in 0..f.src.rank(k) {
                    comp.set(r, off + c, f.comps[k].get(r, c).clone());
                }
            }
            off += f.src.rank(k);
        }
    }
    MFMorphism::new(src, tgt, deg, comps[0].clone(), comps[1].clone())
}

/// The identity on underlying modules between two bracketings of the same
/// iterated tensor product, matched through basis labels.
pub fn reassociate(src: Arc<MatrixBifact>, tgt: Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
    let d = src.d();
    if src.n_internal() != tgt.n_internal() {
        return Err(MfError::VariableMismatch("different internal variables".into()));
    }
    let mut comps = Vec::new();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for k in 0..2 {
        if src.rank(k) != tgt.rank(k) {
            return Err(MfError::ShapeMismatch("bracketings have different ranks".into()));
        }
        let mut m = OpMat::zeros(tgt.rank(k), src.rank(k));
        let mut perm = vec![0; src.rank(k)];
        for (j, l) in src.labels(k).iter().enumerate() {
            let i = tgt
                .labels(k)
                .iter()
                .position(|t| t == l)
                .ok_or_else(|| MfError::ShapeMismatch(String::from("basis labels differ")))?;
            m.set(i, j, LinOp::identity(d));
            perm[j] = i;
        }
        comps.push(m);
        perms.push(perm);
    }
    // the permutation must intertwine the differentials exactly
    for k in 0..2 {
        let (ds, dt) = (src.diff(k), tgt.diff(k));
        for r in 0..ds.rows {
            for c in 0..ds.cols {
                if ds.get(r, c) != dt.get(perms[(k + 1) % 2][r], perms[k][c]) {
                    return Err(MfError::NotACycle("bracketings have different differentials".into()));
                }
            }
        }
    }
    let c1 = comps.pop().unwrap();
    let c0 = comps.pop().unwrap();
    MFMorphism::new(src, tgt, 0, c0, c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofield::Root;
    use crate::mfcore::{perm_consecutive, t_object, unit_mf};

    #[test]
    fn identity_is_a_cycle_and_d_squares_to_w() {
        let rt = Root::standard(5).unwrap();
        let t = Arc::new(tensor_mf(&t_object(&rt), &perm_consecutive(&rt, 0, 2)).unwrap());
        assert!(MFMorphism::identity(t.clone()).is_cycle(4).unwrap());
        let dm = MFMorphism::differential(t.clone());
        let w = MFMorphism::identity(t.clone());
        let w = MFMorphism::new(
            t.clone(),
            t.clone(),
            0,
            w.comps[0].after(&OpMat::diagonal(t.rank0(), LinOp::mul(t.potential()))),
            w.comps[1].after(&OpMat::diagonal(t.rank1(), LinOp::mul(t.potential()))),
        )
        .unwrap();
        assert!(dm.compose(&dm).unwrap().equals(&w, 4).unwrap());
    }

    #[test]
    fn associator_is_a_cycle() {
        let rt = Root::standard(3).unwrap();
        let t = t_object(&rt);
        let i = unit_mf(&rt);
        let left = Arc::new(tensor_mf(&tensor_mf(&t, &i).unwrap(), &t).unwrap());
        let right = Arc::new(tensor_mf(&t, &tensor_mf(&i, &t).unwrap()).unwrap());
        let a = reassociate(left, right).unwrap();
        assert!(a.is_cycle(3).unwrap());
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let rt = Root::standard(3).unwrap();
        let t = Arc::new(t_object(&rt));
        let p = Arc::new(perm_consecutive(&rt, 0, 0));
        let f = tensor_morphisms(&MFMorphism::identity(t.clone()), &MFMorphism::identity(p.clone())).unwrap();
        let id = MFMorphism::identity(f.src.clone());
        assert!(f.equals(&id, 6).unwrap());
    }
}
