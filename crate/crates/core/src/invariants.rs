//! Homology modulo the external variables, induced maps, and homotopy search.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclofield::{CycNum, Rational};
use crate::linalg::{Matrix, SparseSystem};
use crate::mfcore::{monomials_up_to, MFMorphism, MatrixBifact, MfError, PolyMat};
use crate::polyring::{MPoly, Mono, Var};

/// Univariate polynomial, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    d: u32,
    c: Vec<CycNum>,
}

impl UPoly {
    pub fn zero(d: u32) -> UPoly {
        UPoly { d, c: Vec::new() }
    }

    pub fn constant(c: CycNum) -> UPoly {
        Self::from_coeffs(c.d(), vec![c])
    }

    pub fn monomial(c: CycNum, k: usize) -> UPoly {
        let d = c.d();
        let mut v = vec![CycNum::zero(d); k];
        v.push(c);
        Self::from_coeffs(d, v)
    }

    pub fn from_coeffs(d: u32, mut c: Vec<CycNum>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { d, c }
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> CycNum {
        self.c.get(k).cloned().unwrap_or_else(|| CycNum::zero(self.d))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&CycNum> {
        self.c.last()
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(self.d, (0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(self.d, (0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.d);
        }
        let mut v = vec![CycNum::zero(self.d); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(self.d, v)
    }

    pub fn scale(&self, s: &CycNum) -> UPoly {
        Self::from_coeffs(self.d, self.c.iter().map(|a| a * s).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, g: &UPoly) -> (UPoly, UPoly) {
        let gd = g.degree().expect("division by zero polynomial");
        let inv = g.lead().unwrap().inv().expect("nonzero");
        let mut r = self.c.clone();
        let mut q = vec![CycNum::zero(self.d); self.c.len().saturating_sub(gd)];
        while r.len() > gd {
            let k = r.len() - 1 - gd;
            let f = &r[r.len() - 1] * &inv;
            if !f.is_zero() {
                for (j, b) in g.c.iter().enumerate() {
                    r[k + j] -= &(&f * b);
                }
                q[k] = f;
            }
            r.pop();
        }
        (Self::from_coeffs(self.d, q), Self::from_coeffs(self.d, r))
    }

    /// Reads a polynomial in at most the single variable `v`.
    pub fn from_mpoly(p: &MPoly, v: Var) -> Result<UPoly, MfError> {
        let mut c = Vec::new();
        for (m, a) in p.terms() {
            let e = m.exp(v) as usize;
            if m.degree() as usize != e {
                return Err(MfError::NotPolynomial(format!("{p} is not univariate in {}", v.name())));
            }
            if c.len() <= e {
                c.resize(e + 1, CycNum::zero(p.d()));
            }
            c[e] = a.clone();
        }
        Ok(Self::from_coeffs(p.d(), c))
    }

    pub fn to_mpoly(&self, v: Var) -> MPoly {
        let mut p = MPoly::zero(self.d);
        for (k, a) in self.c.iter().enumerate() {
            p.add_term(Mono::var(v, k as u32), a);
        }
        p
    }
}

pub type UMat = Vec<Vec<UPoly>>;

/// `S · A · T = diag`, with `S⁻¹` kept alongside.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: UMat,
    pub s_inv: UMat,
    pub t: UMat,
    /// Monic invariant factors, each dividing the next; zero entries last.
    pub diag: Vec<UPoly>,
}

fn umat_identity(d: u32, n: usize) -> UMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { UPoly::constant(CycNum::one(d)) } else { UPoly::zero(d) }).collect())
        .collect()
}

pub fn umat_mul(a: &UMat, b: &UMat, d: u32) -> UMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = UPoly::zero(d);
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&x.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Smith normal form over `K[t]`.
pub fn smith_normal_form(a: &UMat, d: u32, cols: usize) -> Smith {
    let m = a.len();
    let n = cols;
    let mut a = a.clone();
    let mut s = umat_identity(d, m);
    let mut s_inv = umat_identity(d, m);
    let mut t = umat_identity(d, n);
    // row_i -= q row_k
    let row_sub = |a: &mut UMat, s: &mut UMat, s_inv: &mut UMat, i: usize, k: usize, q: &UPoly| {
        for j in 0..a[0].len() {
            let v = a[i][j].sub(&q.mul(&a[k][j]));
            a[i][j] = v;
        }
        for j in 0..s[0].len() {
            let v = s[i][j].sub(&q.mul(&s[k][j]));
            s[i][j] = v;
        }
        for r in s_inv.iter_mut() {
            let v = r[k].add(&q.mul(&r[i]));
            r[k] = v;
        }
    };
    let col_sub = |a: &mut UMat, t: &mut UMat, j: usize, k: usize, q: &UPoly| {
        for r in a.iter_mut() {
            let v = r[j].sub(&q.mul(&r[k]));
            r[j] = v;
        }
        for r in t.iter_mut() {
            let v = r[j].sub(&q.mul(&r[k]));
            r[j] = v;
        }
    };
    let row_swap = |a: &mut UMat, s: &mut UMat, s_inv: &mut UMat, i: usize, k: usize| {
        a.swap(i, k);
        s.swap(i, k);
        for r in s_inv.iter_mut() {
            r.swap(i, k);
        }
    };
    let col_swap = |a: &mut UMat, t: &mut UMat, j: usize, k: usize| {
        for r in a.iter_mut() {
            r.swap(j, k);
        }
        for r in t.iter_mut() {
            r.swap(j, k);
        }
    };
    let mut diag = Vec::new();
    for k in 0..m.min(n) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if let Some(dg) = a[i][j].degree() {
                    if best.is_none_or(|b| dg < b.2) {
                        best = Some((i, j, dg));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        row_swap(&mut a, &mut s, &mut s_inv, k, bi);
        col_swap(&mut a, &mut t, k, bj);
        loop {
            let mut clean = true;
            for i in k + 1..m {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divrem(&a[k][k]);
                row_sub(&mut a, &mut s, &mut s_inv, i, k, &q);
                if !r.is_zero() {
                    row_swap(&mut a, &mut s, &mut s_inv, i, k);
                    clean = false;
                }
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divrem(&a[k][k]);
                col_sub(&mut a, &mut t, j, k, &q);
                if !r.is_zero() {
                    col_swap(&mut a, &mut t, j, k);
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the rest of the block
                let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !a[i][j].divrem(&a[k][k]).1.is_zero()));
                if let Some(i) = bad {
                    let minus_one = UPoly::constant(CycNum::from_int(d, -1));
                    row_sub(&mut a, &mut s, &mut s_inv, k, i, &minus_one);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        let inv = a[k][k].lead().unwrap().inv().expect("nonzero");
        let c = UPoly::constant(inv.clone());
        for j in 0..n {
            a[k][j] = a[k][j].mul(&c);
        }
        for j in 0..m {
            s[k][j] = s[k][j].mul(&c);
        }
        let back = UPoly::constant(inv.inv().expect("nonzero"));
        for r in s_inv.iter_mut() {
            r[k] = r[k].mul(&back);
        }
        diag.push(a[k][k].clone());
    }
    while diag.len() < m.min(n) {
        diag.push(UPoly::zero(d));
    }
    Smith { s, s_inv, t, diag }
}

#[derive(Clone, Debug)]
enum Coords {
    /// Columns: a basis of the image followed by the representatives.
    Field { basis: Matrix, n_image: usize },
    /// `S` from the Smith form of the incoming differential, and the
    /// non-unit invariant factors with their row positions.
    Poly { s: UMat, factors: Vec<(usize, UPoly)> },
}

/// Homology of `M / (x, y) M` in both degrees.
#[derive(Clone, Debug)]
pub struct HomologyData {
    d: u32,
    internal: Option<Var>,
    pub dims: [usize; 2],
    /// Cycle representatives of a basis, as vectors over the ring of `M`.
    pub reps: [Vec<Vec<MPoly>>; 2],
    coords: [Coords; 2],
}

fn reduce_ext(p: &MPoly) -> MPoly {
    let d = p.d();
    p.substitute(&[(Var::X, MPoly::zero(d)), (Var::Y, MPoly::zero(d))])
}

fn to_constants(v: &[MPoly]) -> Result<Vec<CycNum>, MfError> {
    v.iter()
        .map(|p| {
            let p = reduce_ext(p);
            p.as_constant().ok_or_else(|| MfError::NotPolynomial(format!("{p} survives reduction")))
        })
        .collect()
}

impl HomologyData {
    pub fn dim_h0(&self) -> usize {
        self.dims[0]
    }

    pub fn dim_h1(&self) -> usize {
        self.dims[1]
    }

    /// Coordinates of the class of a cycle in degree `i`.
    pub fn coordinates(&self, i: usize, v: &[MPoly]) -> Result<Vec<CycNum>, MfError> {
        match &self.coords[i] {
            Coords::Field { basis, n_image } => {
                let c = to_constants(v)?;
                let sol = basis.solve(&c).ok_or_else(|| MfError::NotACycle("vector outside the cycle space".into()))?;
                Ok(sol[*n_image..].to_vec())
            }
            Coords::Poly { s, factors } => {
                let var = self.internal.unwrap();
                let u: Vec<UPoly> = v.iter().map(|p| UPoly::from_mpoly(&reduce_ext(p), var)).collect::<Result<_, _>>()?;
                let col: UMat = u.into_iter().map(|p| vec![p]).collect();
                let sv = umat_mul(s, &col, self.d);
                let mut out = Vec::new();
                for (k, f) in factors {
                    let r = sv[*k][0].divrem(f).1;
                    for j in 0..f.degree().unwrap() {
                        out.push(r.coeff(j));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn reduced_matrix(p: &PolyMat) -> Result<Matrix, MfError> {
    let d = p.d();
    let rows = (0..p.rows).map(|i| to_constants(&(0..p.cols).map(|j| p.get(i, j).clone()).collect::<Vec<_>>())).collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(d, 0, p.cols));
    }
    Ok(Matrix::from_rows(d, rows))
}

fn reduced_umat(p: &PolyMat, v: Var) -> Result<UMat, MfError> {
    (0..p.rows).map(|i| (0..p.cols).map(|j| UPoly::from_mpoly(&reduce_ext(p.get(i, j)), v)).collect()).collect()
}

fn column_basis(m: &Matrix) -> Vec<Vec<CycNum>> {
    let (_, pivots) = crate::linalg::row_reduce(m.clone());
    pivots.iter().map(|&c| (0..m.rows).map(|i| m.get(i, c).clone()).collect()).collect()
}

fn field_homology(d: u32, rank: usize, incoming: &Matrix, outgoing: &Matrix) -> (Vec<Vec<MPoly>>, Coords) {
    let image = if incoming.cols == 0 { Vec::new() } else { column_basis(incoming) };
    let kernel = if outgoing.rows == 0 { identity_columns(d, rank) } else { outgoing.nullspace() };
    let mut cols = image.clone();
    let mut reps = Vec::new();
    for v in kernel {
        let mut trial = cols.clone();
        trial.push(v.clone());
        if cols_matrix(d, rank, &trial).rank() == trial.len() {
            cols = trial;
            reps.push(v);
        }
    }
    let basis = cols_matrix(d, rank, &cols);
    let reps = reps.into_iter().map(|v| v.into_iter().map(MPoly::constant).collect()).collect();
    (reps, Coords::Field { basis, n_image: image.len() })
}

fn identity_columns(d: u32, n: usize) -> Vec<Vec<CycNum>> {
    let id = Matrix::identity(d, n);
    (0..n).map(|j| (0..n).map(|i| id.get(i, j).clone()).collect()).collect()
}

fn cols_matrix(d: u32, rows: usize, cols: &[Vec<CycNum>]) -> Matrix {
    let mut m = Matrix::zeros(d, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m
}

fn rank_over_fractions(s: &Smith) -> usize {
    s.diag.iter().filter(|p| !p.is_zero()).count()
}

fn poly_homology(d: u32, v: Var, rank: usize, incoming: &UMat, in_cols: usize, outgoing: &UMat, out_cols: usize) -> Result<(Vec<Vec<MPoly>>, Coords), MfError> {
    let si = smith_normal_form(incoming, d, in_cols);
    let so = smith_normal_form(outgoing, d, out_cols);
    if rank_over_fractions(&si) + rank_over_fractions(&so) != rank {
        return Err(MfError::InfiniteHomology);
    }
    let mut reps = Vec::new();
    let mut factors = Vec::new();
    for (k, f) in si.diag.iter().enumerate() {
        let Some(deg) = f.degree() else { continue };
        if deg == 0 {
            continue;
        }
        for j in 0..deg {
            // S⁻¹ (t^j e_k)
            let rep: Vec<MPoly> = (0..rank).map(|i| si.s_inv[i][k].mul(&UPoly::monomial(CycNum::one(d), j)).to_mpoly(v)).collect();
            reps.push(rep);
        }
        factors.push((k, f.clone()));
    }
    Ok((reps, Coords::Poly { s: si.s, factors }))
}

/// Homology of the differential on `M / (x, y) M`.
pub fn quotient_homology(m: &MatrixBifact) -> Result<HomologyData, MfError> {
    let d = m.d();
    let (r0, r1) = (m.rank0(), m.rank1());
    match m.n_internal() {
        0 => {
            let d0 = reduced_matrix(&m.d0)?;
            let d1 = reduced_matrix(&m.d1)?;
            let (reps0, c0) = field_homology(d, r0, &d1, &d0);
            let (reps1, c1) = field_homology(d, r1, &d0, &d1);
            Ok(HomologyData { d, internal: None, dims: [reps0.len(), reps1.len()], reps: [reps0, reps1], coords: [c0, c1] })
        }
        1 => {
            let v = Var::internal(0);
            let d0 = reduced_umat(&m.d0, v)?;
            let d1 = reduced_umat(&m.d1, v)?;
            let (reps0, c0) = poly_homology(d, v, r0, &d1, r1, &d0, r0)?;
            let (reps1, c1) = poly_homology(d, v, r1, &d0, r0, &d1, r1)?;
            Ok(HomologyData { d, internal: Some(v), dims: [reps0.len(), reps1.len()], reps: [reps0, reps1], coords: [c0, c1] })
        }
        n => Err(MfError::TooManyInternalVariables { found: n, limit: 1 }),
    }
}

/// Matrices of `H(f)` in degrees 0 and 1, against precomputed homology.
pub fn induced_h_with(f: &MFMorphism, hs: &HomologyData, ht: &HomologyData) -> Result<[Matrix; 2], MfError> {
    let d = f.d();
    let mut out = [Matrix::zeros(d, 0, 0), Matrix::zeros(d, 0, 0)];
    for i in 0..2 {
        let j = (i + f.degree) % 2;
        let mut m = Matrix::zeros(d, ht.dims[j], hs.dims[i]);
        for (c, rep) in hs.reps[i].iter().enumerate() {
            let img = f.apply(i, rep)?;
            let coords = ht.coordinates(j, &img)?;
            for (r, x) in coords.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        out[i] = m;
    }
    Ok(out)
}

pub fn induced_h(f: &MFMorphism) -> Result<[Matrix; 2], MfError> {
    induced_h_with(f, &quotient_homology(&f.src)?, &quotient_homology(&f.tgt)?)
}

/// Whether `f` is an isomorphism in the homotopy category, detected on
/// homology.
pub fn is_homotopy_iso(f: &MFMorphism) -> Result<bool, MfError> {
    if f.degree != 0 {
        return Ok(false);
    }
    let [h0, h1] = induced_h(f)?;
    Ok(h0.is_invertible() && h1.is_invertible())
}

/// Degree constraint on the entries of an unknown morphism.
#[derive(Clone, Debug)]
pub enum DegreeBound {
    /// All monomials up to this polynomial degree.
    Upto(u32),
    /// Entries of the given ℂ-degree, with `x`, `y` and internal variables
    /// of charge `2/d` and these basis charges.
    Charges { src: [Vec<Rational>; 2], tgt: [Vec<Rational>; 2] },
}

/// Unknowns `(component, row, col, monomial)` of a morphism of parity `p`.
struct Layout {
    unknowns: Vec<(usize, usize, usize, Mono)>,
}

fn forced_degree(d: u32, cdeg: &Rational, cs: &Rational, ct: &Rational) -> Option<u32> {
    let k = (cdeg + cs - ct) * Rational::from_integer(d.into()) / Rational::from_integer(2.into());
    if !k.is_integer() || k.is_negative() {
        return None;
    }
    k.to_integer().to_u32()
}

fn layout(src: &MatrixBifact, tgt: &MatrixBifact, parity: usize, bound: &DegreeBound, cdeg: &Rational) -> Layout {
    let d = src.d();
    let mut vars = vec![Var::X, Var::Y];
    vars.extend(tgt.int_vars());
    let mut unknowns = Vec::new();
    let mut cache: BTreeMap<u32, Vec<Mono>> = BTreeMap::new();
    let mut homogeneous = |k: u32| -> Vec<Mono> {
        cache.entry(k).or_insert_with(|| monomials_up_to(&vars, k).into_iter().filter(|m| m.degree() == k).collect()).clone()
    };
    for i in 0..2 {
        let j = (i + parity) % 2;
        for r in 0..tgt.rank(j) {
            for c in 0..src.rank(i) {
                match bound {
                    DegreeBound::Upto(b) => {
                        for k in 0..=*b {
                            for m in homogeneous(k) {
                                unknowns.push((i, r, c, m));
                            }
                        }
                    }
                    DegreeBound::Charges { src: cs, tgt: ct } => {
                        if let Some(k) = forced_degree(d, cdeg, &cs[i][c], &ct[j][r]) {
                            for m in homogeneous(k) {
                                unknowns.push((i, r, c, m));
                            }
                        }
                    }
                }
            }
        }
    }
    Layout { unknowns }
}

type EqKey = (usize, usize, usize, Mono);

/// `δφ = d φ - (-1)^p φ d` for `φ` a single monomial entry, accumulated
/// into `out` with weight `w`.
fn delta_of_unknown(
    src: &MatrixBifact,
    tgt: &MatrixBifact,
    parity: usize,
    u: &(usize, usize, usize, Mono),
    w: &CycNum,
    mut emit: impl FnMut(EqKey, CycNum),
) {
    let (i, r, c, m) = *u;
    let j = (i + parity) % 2;
    let dt = tgt.diff(j);
    for r2 in 0..dt.rows {
        for (mm, a) in dt.get(r2, r).terms() {
            emit((i, r2, c, mm.mul(m)), a * w);
        }
    }
    // φ_i ∘ d^src_{i-1} sits in the component of source degree i-1
    let i0 = (i + 1) % 2;
    let ds = src.diff(i0);
    let sign = if parity == 0 { CycNum::from_int(src.d(), -1) } else { CycNum::one(src.d()) };
    let sw = &sign * w;
    for c2 in 0..ds.cols {
        for (mm, a) in ds.get(c, c2).terms() {
            emit((i0, r, c2, mm.mul(m)), a * &sw);
        }
    }
}

fn require_no_internal(m: &MatrixBifact) -> Result<(), MfError> {
    if m.n_internal() != 0 {
        return Err(MfError::TooManyInternalVariables { found: m.n_internal(), limit: 0 });
    }
    Ok(())
}

fn morphism_from_solution(src: &MatrixBifact, tgt: &MatrixBifact, parity: usize, lay: &Layout, x: &[CycNum]) -> [PolyMat; 2] {
    let d = src.d();
    let mut comps = [PolyMat::zeros(d, tgt.rank(parity), src.rank0()), PolyMat::zeros(d, tgt.rank(1 - parity), src.rank1())];
    for (k, (i, r, c, m)) in lay.unknowns.iter().enumerate() {
        if x[k].is_zero() {
            continue;
        }
        let mut p = comps[*i].get(*r, *c).clone();
        p.add_term(*m, &x[k]);
        comps[*i].set(*r, *c, p);
    }
    comps
}

/// Default polynomial degree bound for an ungraded homotopy search.
pub fn default_homotopy_bound(f: &MFMorphism, g: &MFMorphism) -> Result<u32, MfError> {
    let mut top = 0;
    for h in [f, g] {
        for p in h.as_polys()? {
            top = top.max(p.max_degree());
        }
    }
    for m in [&f.src, &f.tgt] {
        top = top.max(m.d0.max_degree()).max(m.d1.max_degree());
    }
    Ok(top + f.d())
}

/// An odd `h` with `f - g = d h + h d`, or `None` if none exists within the
/// bound. The source must have no internal variables.
pub fn homotopy_solve(f: &MFMorphism, g: &MFMorphism, bound: &DegreeBound) -> Result<Option<MFMorphism>, MfError> {
    let (src, tgt) = (&f.src, &f.tgt);
    require_no_internal(src)?;
    if f.degree != 0 || g.degree != 0 || *g.src != **src || *g.tgt != **tgt {
        return Err(MfError::ShapeMismatch("homotopy between incompatible morphisms".into()));
    }
    let d = f.d();
    let diff = f.sub(g)?;
    let [e0, e1] = diff.as_polys()?;
    let lay = layout(src, tgt, 1, bound, &Rational::from_integer((-1).into()));
    let mut eqs: BTreeMap<EqKey, Vec<(usize, CycNum)>> = BTreeMap::new();
    let one = CycNum::one(d);
    for (k, u) in lay.unknowns.iter().enumerate() {
        delta_of_unknown(src, tgt, 1, u, &one, |key, v| eqs.entry(key).or_default().push((k, v)));
    }
    let mut rhs: BTreeMap<EqKey, CycNum> = BTreeMap::new();
    for (i, e) in [e0, e1].iter().enumerate() {
        for r in 0..e.rows {
            for c in 0..e.cols {
                for (m, a) in e.get(r, c).terms() {
                    rhs.insert((i, r, c, *m), a.clone());
                }
            }
        }
    }
    let mut sys = SparseSystem::new(d, lay.unknowns.len());
    for (key, row) in &eqs {
        let b = rhs.remove(key).unwrap_or_else(|| CycNum::zero(d));
        sys.push(row.clone(), b);
    }
    if rhs.values().any(|b| !b.is_zero()) {
        return Ok(None);
    }
    let Some(x) = sys.solve() else { return Ok(None) };
    let [h0, h1] = morphism_from_solution(src, tgt, 1, &lay, &x);
    let h = MFMorphism::from_polys(src.clone(), tgt.clone(), 1, &h0, &h1)?;
    // the solution is checked independently of the linear system
    if !h.boundary()?.sub(&diff)?.is_zero(0)? {
        return Err(MfError::NotACycle("homotopy solution does not verify".into()));
    }
    Ok(Some(h))
}

/// Basis of the space of even cycles `src → tgt` of ℂ-degree 0, together
/// with the dimension of that space modulo boundaries of ℂ-degree -1.
pub fn graded_cycle_space(
    src: &alloc::sync::Arc<MatrixBifact>,
    tgt: &alloc::sync::Arc<MatrixBifact>,
    src_charges: &[Vec<Rational>; 2],
    tgt_charges: &[Vec<Rational>; 2],
) -> Result<(Vec<MFMorphism>, usize), MfError> {
    require_no_internal(src)?;
    let d = src.d();
    let bound = DegreeBound::Charges { src: src_charges.clone(), tgt: tgt_charges.clone() };
    let lay = layout(src, tgt, 0, &bound, &Rational::zero());
    let one = CycNum::one(d);
    let mut eqs: BTreeMap<EqKey, Vec<(usize, CycNum)>> = BTreeMap::new();
    for (k, u) in lay.unknowns.iter().enumerate() {
        delta_of_unknown(src, tgt, 0, u, &one, |key, v| eqs.entry(key).or_default().push((k, v)));
    }
    let mut sys = SparseSystem::new(d, lay.unknowns.len());
    for row in eqs.into_values() {
        sys.push(row, CycNum::zero(d));
    }
    let mut cycles = Vec::new();
    for x in sys.nullspace() {
        let [c0, c1] = morphism_from_solution(src, tgt, 0, &lay, &x);
        cycles.push(MFMorphism::from_polys(src.clone(), tgt.clone(), 0, &c0, &c1)?);
    }
    // boundaries of odd maps of ℂ-degree -1, written in the even layout
    let index: BTreeMap<(usize, usize, usize, Mono), usize> = lay.unknowns.iter().enumerate().map(|(k, u)| (*u, k)).collect();
    let hl = layout(src, tgt, 1, &bound, &Rational::from_integer((-1).into()));
    let mut bsys = SparseSystem::new(d, lay.unknowns.len());
    for u in &hl.unknowns {
        let mut row = Vec::new();
        let mut stray = false;
        delta_of_unknown(src, tgt, 1, u, &one, |key, v| match index.get(&key) {
            Some(k) => row.push((*k, v)),
            None => stray = true,
        });
        if stray {
            return Err(MfError::Grading("boundary leaves the degree-0 layout".into()));
        }
        bsys.push(row, CycNum::zero(d));
    }
    let dim = cycles.len() - bsys.rank();
    Ok((cycles, dim))
}

/// A rational that is a non-negative integer, as a count.
pub fn as_count(r: &Rational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_usize()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofield::Root;
    use crate::mfcore::{direct_sum, perm_consecutive, perm_mf, t_object, tensor_mf};
    use alloc::sync::Arc;

    fn up(d: u32, c: &[i64]) -> UPoly {
        UPoly::from_coeffs(d, c.iter().map(|&k| CycNum::from_int(d, k)).collect())
    }

    #[test]
    fn division_with_remainder() {
        let a = up(3, &[1, 0, 0, 1]);
        let b = up(3, &[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, up(3, &[1, -1, 1]));
        assert!(r.is_zero());
        let (q, r) = up(3, &[2, 0, 1]).divrem(&up(3, &[0, 1]));
        assert_eq!(q, up(3, &[0, 1]));
        assert_eq!(r, up(3, &[2]));
    }

    #[test]
    fn smith_form_is_a_factorisation() {
        let d = 3;
        let a: UMat = vec![vec![up(d, &[0, 0, 1]), up(d, &[0, 1])], vec![up(d, &[1, 1]), up(d, &[0, 0, 0, 1])]];
        let s = smith_normal_form(&a, d, 2);
        let sat = umat_mul(&umat_mul(&s.s, &a, d), &s.t, d);
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(sat[i][j], s.diag[i]);
                } else {
                    assert!(sat[i][j].is_zero());
                }
            }
        }
        let id = umat_mul(&s.s, &s.s_inv, d);
        assert_eq!(id, umat_identity(d, 2));
        assert!(s.diag[1].divrem(&s.diag[0]).1.is_zero());
        let diag: UMat = vec![vec![up(d, &[0, 0, 1]), UPoly::zero(d)], vec![UPoly::zero(d), up(d, &[0, 0, 0, 1])]];
        assert_eq!(smith_normal_form(&diag, d, 2).diag, vec![up(d, &[0, 0, 1]), up(d, &[0, 0, 0, 1])]);
    }

    #[test]
    fn homology_of_permutation_objects() {
        let rt = Root::standard(5).unwrap();
        for s in [vec![0], vec![1, 2], vec![0, 1, 2, 3]] {
            let h = quotient_homology(&perm_mf(&rt, &s)).unwrap();
            assert_eq!(h.dims, [1, 1]);
        }
        assert_eq!(quotient_homology(&perm_mf(&rt, &[])).unwrap().dims, [0, 0]);
        assert_eq!(quotient_homology(&perm_mf(&rt, &[0, 1, 2, 3, 4])).unwrap().dims, [0, 0]);
        let a = perm_consecutive(&rt, 0, 1);
        let b = perm_consecutive(&rt, 2, 2);
        assert_eq!(quotient_homology(&direct_sum(&[&a, &b]).unwrap()).unwrap().dims, [2, 2]);
    }

    #[test]
    fn homology_of_tensor_products() {
        let rt = Root::standard(5).unwrap();
        let p = perm_consecutive(&rt, 0, 1);
        assert_eq!(quotient_homology(&tensor_mf(&p, &p).unwrap()).unwrap().dims, [2, 2]);
        let rt = Root::standard(3).unwrap();
        let p = perm_consecutive(&rt, 1, 1);
        assert_eq!(quotient_homology(&tensor_mf(&p, &p).unwrap()).unwrap().dims, [1, 1]);
        let t = t_object(&rt);
        let tt = tensor_mf(&t, &t).unwrap();
        assert!(matches!(quotient_homology(&tensor_mf(&tt, &t).unwrap()), Err(MfError::TooManyInternalVariables { .. })));
    }

    #[test]
    fn identity_and_zero_on_homology() {
        let rt = Root::standard(5).unwrap();
        let p = Arc::new(perm_mf(&rt, &[0]));
        assert!(is_homotopy_iso(&MFMorphism::identity(p.clone())).unwrap());
        assert!(!is_homotopy_iso(&MFMorphism::zero(p.clone(), p, 0)).unwrap());
        let t = t_object(&rt);
        let tt = Arc::new(tensor_mf(&t, &t).unwrap());
        assert!(is_homotopy_iso(&MFMorphism::identity(tt)).unwrap());
    }

    #[test]
    fn homotopies_are_found_and_verified() {
        let rt = Root::standard(3).unwrap();
        let p = Arc::new(perm_mf(&rt, &[0, 1]));
        let id = MFMorphism::identity(p.clone());
        let h = homotopy_solve(&id, &id, &DegreeBound::Upto(2)).unwrap().unwrap();
        assert!(h.is_zero(0).unwrap());
        // a boundary is null-homotopic
        let z = MFMorphism::zero(p.clone(), p.clone(), 0);
        let k = MFMorphism::from_polys(p.clone(), p.clone(), 1, &PolyMat::scalar(MPoly::x(3)), &PolyMat::scalar(MPoly::y(3))).unwrap();
        let b = k.boundary().unwrap();
        assert!(homotopy_solve(&b, &z, &DegreeBound::Upto(1)).unwrap().is_some());
        // the identity is not
        assert!(homotopy_solve(&id, &z, &DegreeBound::Upto(4)).unwrap().is_none());
    }

    #[test]
    fn graded_cycles_of_the_unit() {
        let rt = Root::standard(3).unwrap();
        let i = Arc::new(perm_mf(&rt, &[0]));
        let zero = Rational::zero();
        let ch = [vec![zero.clone()], vec![zero]];
        let (cycles, dim) = graded_cycle_space(&i, &i, &ch, &ch).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(dim, 1);
    }
}
