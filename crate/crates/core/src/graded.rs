//! ℂ-graded permutation factorisations, the embeddings of summands of
//! `P̂_{a:1} ⊗ P̂_{b:μ}`, and the graded fusion ring.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::cyclofield::{quantum_int, CycNum, Rational, Root};
use crate::invariants::{graded_cycle_space, is_homotopy_iso, quotient_homology, HomologyData};
use crate::mfcore::{
    direct_sum, dual_rank1, hstack, normalise_set, perm_dual_iso, perm_mf, tensor_mf, MFMorphism, MatrixBifact, MfError,
    PolyMat,
};
use crate::polyring::{perm_product, MPoly, Var};

fn rat(n: i64, m: i64) -> Rational {
    Rational::new(n.into(), m.into())
}

/// A factorisation with rational charges on the generators of each
/// component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMF {
    pub mf: Arc<MatrixBifact>,
    pub charges: [Vec<Rational>; 2],
}

/// `P_S{α}` with `charge0 = α` and `charge1 = α + 2|S|/d - 1`.
pub fn shifted_perm(root: &Root, set: &[i64], alpha: Rational) -> GradedMF {
    let d = root.d() as i64;
    let set = normalise_set(root.d(), set);
    let c1 = &alpha + rat(2 * set.len() as i64, d) - Rational::one();
    GradedMF { mf: Arc::new(perm_mf(root, &set)), charges: [vec![alpha], vec![c1]] }
}

/// `P̂_S = P_S{(1 - |S|)/d}`.
pub fn hat_p(root: &Root, set: &[i64]) -> GradedMF {
    let n = normalise_set(root.d(), set).len() as i64;
    shifted_perm(root, set, rat(1 - n, root.d() as i64))
}

/// Consecutive label `a:λ`, the set `{a, …, a+λ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedLabel {
    pub a: u32,
    pub lambda: u32,
}

impl GradedLabel {
    pub fn new(d: u32, a: i64, lambda: u32) -> Result<GradedLabel, MfError> {
        if lambda + 2 > d {
            return Err(MfError::Grading(format!("label {a}:{lambda} out of range for d = {d}")));
        }
        Ok(GradedLabel { a: a.rem_euclid(d as i64) as u32, lambda })
    }

    pub fn set(&self) -> Vec<i64> {
        (0..=self.lambda as i64).map(|k| self.a as i64 + k).collect()
    }

    pub fn unit() -> GradedLabel {
        GradedLabel { a: 0, lambda: 0 }
    }

    /// Label of the dual object, `-S`.
    pub fn dual(&self, d: u32) -> GradedLabel {
        let a = (-(self.a as i64) - self.lambda as i64).rem_euclid(d as i64) as u32;
        GradedLabel { a, lambda: self.lambda }
    }
}

impl fmt::Display for GradedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.a, self.lambda)
    }
}

pub fn hat_label(root: &Root, l: GradedLabel) -> GradedMF {
    hat_p(root, &l.set())
}

/// All labels `a:λ` with `a ∈ Z_d` and `0 ≤ λ ≤ d-2`.
pub fn all_labels(d: u32) -> Vec<GradedLabel> {
    let mut v = Vec::new();
    for lambda in 0..=d - 2 {
        for a in 0..d {
            v.push(GradedLabel { a, lambda });
        }
    }
    v
}

fn two_over_d(d: u32) -> Rational {
    rat(2, d as i64)
}

/// ℂ-degree of the entries of `p` read from `src_charge` to `tgt_charge`;
/// `None` if the entry is not homogeneous.
fn entry_degree(p: &MPoly, src_charge: &Rational, tgt_charge: &Rational, d: u32) -> Option<Option<Rational>> {
    if p.is_zero() {
        return Some(None);
    }
    if !p.is_homogeneous() {
        return None;
    }
    let k = Rational::from_integer(p.degree().unwrap().into());
    Some(Some(tgt_charge + two_over_d(d) * k - src_charge))
}

/// True iff every nonzero differential entry has ℂ-degree 1.
pub fn graded_check(m: &GradedMF) -> bool {
    let d = m.mf.d();
    let one = Rational::one();
    for i in 0..2 {
        let diff = m.mf.diff(i);
        for r in 0..diff.rows {
            for c in 0..diff.cols {
                match entry_degree(diff.get(r, c), &m.charges[i][c], &m.charges[1 - i][r], d) {
                    None => return false,
                    Some(Some(q)) if q != one => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Tensor product with charges added along each block.
pub fn graded_tensor(m: &GradedMF, n: &GradedMF) -> Result<GradedMF, MfError> {
    let mf = Arc::new(tensor_mf(&m.mf, &n.mf)?);
    let prod = |a: &[Rational], b: &[Rational]| -> Vec<Rational> { a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect() };
    let mut c0 = prod(&m.charges[0], &n.charges[0]);
    c0.extend(prod(&m.charges[1], &n.charges[1]));
    let mut c1 = prod(&m.charges[1], &n.charges[0]);
    c1.extend(prod(&m.charges[0], &n.charges[1]));
    Ok(GradedMF { mf, charges: [c0, c1] })
}

pub fn graded_direct_sum(objs: &[&GradedMF]) -> Result<GradedMF, MfError> {
    let mfs: Vec<&MatrixBifact> = objs.iter().map(|o| &*o.mf).collect();
    let mf = Arc::new(direct_sum(&mfs)?);
    let mut charges = [Vec::new(), Vec::new()];
    for o in objs {
        for (i, c) in charges.iter_mut().enumerate() {
            c.extend(o.charges[i].iter().cloned());
        }
    }
    Ok(GradedMF { mf, charges })
}

/// Dual of a rank-one graded object; the charges are fixed by asking the
/// evaluation map to have ℂ-degree 0.
pub fn graded_dual_rank1(m: &GradedMF) -> Result<GradedMF, MfError> {
    let d = m.mf.d();
    let mf = Arc::new(dual_rank1(&m.mf)?);
    let deg1 = m.mf.d1.get(0, 0).degree().unwrap_or(0) as i64;
    let c0 = -&m.charges[0][0] + two_over_d(d) * Rational::from_integer((1 - deg1).into());
    let c1 = &c0 + two_over_d(d) * Rational::from_integer(deg1.into()) - Rational::one();
    Ok(GradedMF { mf, charges: [vec![c0], vec![c1]] })
}

/// ℂ-degree of a morphism out of an object without internal variables;
/// `None` if some entry is inhomogeneous or entries disagree.
pub fn morphism_cdegree(f: &MFMorphism, src: &GradedMF, tgt: &GradedMF) -> Result<Option<Rational>, MfError> {
    let d = f.d();
    let polys = f.as_polys()?;
    let mut found: Option<Rational> = None;
    for (i, p) in polys.iter().enumerate() {
        let j = (i + f.degree) % 2;
        for r in 0..p.rows {
            for c in 0..p.cols {
                match entry_degree(p.get(r, c), &src.charges[i][c], &tgt.charges[j][r], d) {
                    None => return Ok(None),
                    Some(None) => {}
                    Some(Some(q)) => match &found {
                        None => found = Some(q),
                        Some(prev) if *prev != q => return Ok(None),
                        _ => {}
                    },
                }
            }
        }
    }
    Ok(Some(found.unwrap_or_else(Rational::zero)))
}

/// Dimension of graded degree-0 morphisms `P̂_R → P̂_S` in the homotopy
/// category.
pub fn graded_hom_dim(root: &Root, r: &[i64], s: &[i64]) -> Result<usize, MfError> {
    let src = hat_p(root, r);
    let tgt = hat_p(root, s);
    Ok(graded_cycle_space(&src.mf, &tgt.mf, &src.charges, &tgt.charges)?.1)
}

/// The embeddings `g⁻ : P̂_{a+b+1:μ-1} → P̂_{a:1} ⊗ P̂_{b:μ}` and
/// `g⁺ : P̂_{a+b:μ+1} → P̂_{a:1} ⊗ P̂_{b:μ}`, together with the graded objects.
#[derive(Clone, Debug)]
pub struct GPair {
    pub minus: MFMorphism,
    pub plus: MFMorphism,
    pub q_minus: GradedMF,
    pub q_plus: GradedMF,
    pub product: GradedMF,
}

fn geometric(root: &Root, step: i64, n: i64) -> CycNum {
    // Σ_{k<n} η^{step·k}
    let mut acc = root.int(0);
    for k in 0..n {
        acc += &root.eta(step * k);
    }
    acc
}

pub fn g_pair(root: &Root, a: i64, b: i64, mu: u32) -> Result<GPair, MfError> {
    let d = root.d();
    if mu == 0 || mu + 2 > d {
        return Err(MfError::Grading(format!("μ = {mu} out of range")));
    }
    let m = mu as i64;
    let x = Var::X;
    let y = Var::internal(0);
    let z = Var::Y;
    let (xp, yp, zp) = (MPoly::var(d, x), MPoly::var(d, y), MPoly::var(d, z));
    let range = |lo: i64, hi: i64| -> Vec<i64> { (lo..=hi).collect() };
    let p1 = perm_product(root, &range(a, a + 1), x, y);
    let pmu = perm_product(root, &range(b, b + m), y, z);
    let pmu_co = perm_product(root, &(0..d as i64).filter(|j| !normalise_set(d, &range(b, b + m)).contains(j)).collect::<Vec<_>>(), y, z);
    let xd_zd = &xp.pow(d) - &zp.pow(d);
    let q_minus = perm_product(root, &range(a + b + 1, a + b + m), x, z);
    let q_plus = perm_product(root, &range(a + b, a + b + m + 1), x, z);
    let div = |p: &MPoly, q: &MPoly, what: &str| -> Result<MPoly, MfError> {
        p.exact_div(q).map_err(|_| MfError::NotPolynomial(format!("{what} for a = {a}, b = {b}, μ = {mu}")))
    };

    let g00m = {
        let cx = -(&root.eta(-a - 1) * &geometric(root, -1, m));
        let cy = geometric(root, -1, m + 1);
        let cz = -root.eta(b);
        (&(&xp.scale(&cx) + &yp.scale(&cy)) + &zp.scale(&cz)).scale(&root.eta(-a * m))
    };
    let g01m = MPoly::one(d);
    let g10m = div(&(&(&q_minus * &g00m) - &pmu), &p1, "g⁻₁₀")?;
    let g11m = div(&(&div(&xd_zd, &q_minus, "x^d - z^d over q₋")? - &(&pmu_co * &g00m)), &p1, "g⁻₁₁")?;

    let g00p = MPoly::one(d);
    let g01p = {
        let cx = geometric(root, 1, m + 2);
        let cy = -(&root.eta(a + 1) * &geometric(root, 1, m + 1));
        let cz = -root.eta(a + b + m + 1);
        (&(&xp.scale(&cx) + &yp.scale(&cy)) + &zp.scale(&cz)).scale(&root.eta(a * (m + 1)))
    };
    let g10p = div(&(&q_plus - &(&pmu * &g01p)), &p1, "g⁺₁₀")?;
    let g11p = div(&(&(&div(&xd_zd, &q_plus, "x^d - z^d over q₊")? * &g01p) - &pmu_co), &p1, "g⁺₁₁")?;

    let la = GradedLabel::new(d, a, 1)?;
    let lb = GradedLabel::new(d, b, mu)?;
    let product = graded_tensor(&hat_label(root, la), &hat_label(root, lb))?;
    let qm = hat_p(root, &range(a + b + 1, a + b + m));
    let qp = hat_p(root, &range(a + b, a + b + m + 1));
    let build = |q: &GradedMF, g00: MPoly, g11: MPoly, g10: MPoly, g01: MPoly| {
        let c0 = PolyMat::from_rows(d, vec![vec![g00], vec![g11]]);
        let c1 = PolyMat::from_rows(d, vec![vec![g10], vec![g01]]);
        MFMorphism::from_polys(q.mf.clone(), product.mf.clone(), 0, &c0, &c1)
    };
    let minus = build(&qm, g00m, g11m, g10m, g01m)?;
    let plus = build(&qp, g00p, g11p, g10p, g01p)?;
    Ok(GPair { minus, plus, q_minus: qm, q_plus: qp, product })
}

/// Result of certifying `(g⁻, g⁺)` for one triple.
#[derive(Clone, Debug)]
pub struct GPairReport {
    pub cycles: bool,
    pub degree_zero: bool,
    pub graded_objects: bool,
    pub homology_dims: [usize; 2],
    pub iso: bool,
}

impl GPairReport {
    pub fn passed(&self, d: u32, mu: u32) -> bool {
        let expect = if mu + 2 < d { [2, 2] } else { [1, 1] };
        self.cycles && self.degree_zero && self.graded_objects && self.iso && self.homology_dims == expect
    }
}

pub fn certify_g_pair(root: &Root, a: i64, b: i64, mu: u32) -> Result<GPairReport, MfError> {
    let g = g_pair(root, a, b, mu)?;
    let cycles = g.minus.is_cycle(0)? && g.plus.is_cycle(0)?;
    let zero = Some(Rational::zero());
    let degree_zero = morphism_cdegree(&g.minus, &g.q_minus, &g.product)? == zero && morphism_cdegree(&g.plus, &g.q_plus, &g.product)? == zero;
    let graded_objects = graded_check(&g.q_minus) && graded_check(&g.q_plus) && graded_check(&g.product);
    let h: HomologyData = quotient_homology(&g.product.mf)?;
    let iso = is_homotopy_iso(&hstack(&[&g.minus, &g.plus])?)?;
    Ok(GPairReport { cycles, degree_zero, graded_objects, homology_dims: h.dims, iso })
}

/// Summands of `a:1 ⊗ b:μ` from the embeddings `g^±`.
fn rule_one(d: u32, a: u32, b: u32, mu: u32) -> Vec<GradedLabel> {
    let mut v = Vec::new();
    if mu >= 1 {
        v.push(GradedLabel { a: (a + b + 1) % d, lambda: mu - 1 });
    }
    if mu + 1 <= d - 2 {
        v.push(GradedLabel { a: (a + b) % d, lambda: mu + 1 });
    }
    v
}

type Multiset = BTreeMap<GradedLabel, i64>;

/// Grothendieck-level decomposition of `x ⊗ y`, by induction on the first
/// label: `a:λ = 0:1 ⊗ a:λ-1 - a+1:λ-2`.
pub struct Decomposer {
    d: u32,
    memo: BTreeMap<(GradedLabel, GradedLabel), Multiset>,
}

impl Decomposer {
    pub fn new(d: u32) -> Decomposer {
        Decomposer { d, memo: BTreeMap::new() }
    }

    fn add(into: &mut Multiset, from: &Multiset, sign: i64) {
        for (k, v) in from {
            *into.entry(*k).or_insert(0) += sign * v;
        }
        into.retain(|_, v| *v != 0);
    }

    pub fn product(&mut self, x: GradedLabel, y: GradedLabel) -> Multiset {
        if let Some(m) = self.memo.get(&(x, y)) {
            return m.clone();
        }
        let d = self.d;
        let out: Multiset = match x.lambda {
            0 => [(GradedLabel { a: (x.a + y.a) % d, lambda: y.lambda }, 1)].into_iter().collect(),
            1 => rule_one(d, x.a, y.a, y.lambda).into_iter().map(|l| (l, 1)).collect(),
            lam => {
                let prev = GradedLabel { a: x.a, lambda: lam - 1 };
                let lower = GradedLabel { a: (x.a + 1) % d, lambda: lam - 2 };
                let mut acc = Multiset::new();
                for (z, n) in self.product(prev, y) {
                    let gen = self.product(GradedLabel { a: 0, lambda: 1 }, z);
                    Self::add(&mut acc, &gen, n);
                }
                let sub = self.product(lower, y);
                Self::add(&mut acc, &sub, -1);
                acc
            }
        };
        self.memo.insert((x, y), out.clone());
        out
    }
}

/// Summands of `P̂_x ⊗ P̂_y` with multiplicity.
pub fn decompose_product(d: u32, x: GradedLabel, y: GradedLabel) -> Result<Vec<(GradedLabel, u32)>, MfError> {
    let m = Decomposer::new(d).product(x, y);
    m.into_iter()
        .map(|(l, n)| u32::try_from(n).map(|n| (l, n)).map_err(|_| MfError::Grading(format!("negative multiplicity for {l}"))))
        .collect()
}

/// Which closed form to use for the summand index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexConvention {
    /// `m + n + (λ + μ - ν)/2`
    Plus,
    /// `m + n - (λ + μ - ν)/2`
    Minus,
}

/// Closed-form truncated Clebsch–Gordan rule for `m:λ ⊗ n:μ`.
pub fn fusion_by_formula(d: u32, x: GradedLabel, y: GradedLabel, conv: IndexConvention) -> Vec<GradedLabel> {
    let (l, m) = (x.lambda as i64, y.lambda as i64);
    let top = (l + m).min(2 * d as i64 - 4 - l - m);
    let mut out = Vec::new();
    let mut nu = (l - m).abs();
    while nu <= top {
        let shift = (l + m - nu) / 2;
        let base = x.a as i64 + y.a as i64;
        let a = match conv {
            IndexConvention::Plus => base + shift,
            IndexConvention::Minus => base - shift,
        };
        out.push(GradedLabel { a: a.rem_euclid(d as i64) as u32, lambda: nu as u32 });
        nu += 2;
    }
    out
}

/// Certified isomorphism `Q → P̂_x ⊗ P̂_y` for `x.λ ≤ 1`, where `Q` is the
/// direct sum of the predicted summands.
#[derive(Clone, Debug)]
pub struct Witness {
    pub summands: Vec<GradedLabel>,
    pub map: MFMorphism,
    pub iso: bool,
}

/// Searches the graded degree-0 cycles `P̂_S → target` for one that is an
/// isomorphism on homology.
fn find_iso_into(root: &Root, s: GradedLabel, target: &GradedMF) -> Result<Option<MFMorphism>, MfError> {
    let src = hat_label(root, s);
    let (cycles, _) = graded_cycle_space(&src.mf, &target.mf, &src.charges, &target.charges)?;
    for f in &cycles {
        if is_homotopy_iso(f)? {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}

pub fn certify_product(root: &Root, x: GradedLabel, y: GradedLabel) -> Result<Witness, MfError> {
    let d = root.d();
    let target = graded_tensor(&hat_label(root, x), &hat_label(root, y))?;
    let summands: Vec<GradedLabel> = decompose_product(d, x, y)?.into_iter().flat_map(|(l, n)| core::iter::repeat_n(l, n as usize)).collect();
    match x.lambda {
        1 if y.lambda >= 1 => {
            let g = g_pair(root, x.a as i64, y.a as i64, y.lambda)?;
            let map = if y.lambda + 2 == d { g.minus.clone() } else { hstack(&[&g.minus, &g.plus])? };
            let iso = is_homotopy_iso(&map)?;
            Ok(Witness { summands, map, iso })
        }
        0 | 1 => {
            let [s] = summands[..] else {
                return Err(MfError::Grading(format!("expected a single summand in {x} ⊗ {y}")));
            };
            match find_iso_into(root, s, &target)? {
                Some(map) => Ok(Witness { summands, map, iso: true }),
                None => {
                    let src = hat_label(root, s);
                    Ok(Witness { summands, map: MFMorphism::zero(src.mf, target.mf, 0), iso: false })
                }
            }
        }
        _ => Err(MfError::Grading("witnesses are built for λ ≤ 1 only".into())),
    }
}

/// Graded iso `P̂_{-S} → (P̂_S)⁺`; returns its ℂ-degree.
pub fn dual_iso_degree(root: &Root, set: &[i64]) -> Result<Option<Rational>, MfError> {
    let neg: Vec<i64> = set.iter().map(|j| -j).collect();
    let src = hat_p(root, &neg);
    let tgt = graded_dual_rank1(&hat_p(root, set))?;
    let f = perm_dual_iso(root, set)?;
    morphism_cdegree(&f, &src, &tgt)
}

/// Fusion ring with sparse structure constants.
#[derive(Clone, Debug)]
pub struct FusionRing<L> {
    pub labels: Vec<L>,
    pub unit: usize,
    index: BTreeMap<L, usize>,
    products: Vec<Vec<Vec<(usize, u32)>>>,
}

impl<L: Ord + Clone + fmt::Display> FusionRing<L> {
    /// Builds the ring from a product rule.
    pub fn new(labels: Vec<L>, unit: L, mut rule: impl FnMut(&L, &L) -> Vec<(L, u32)>) -> Result<FusionRing<L>, MfError> {
        let index: BTreeMap<L, usize> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let unit = *index.get(&unit).ok_or_else(|| MfError::Grading("unit not among labels".into()))?;
        let n = labels.len();
        let mut products = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut v = Vec::new();
                for (l, m) in rule(&labels[i], &labels[j]) {
                    let k = *index.get(&l).ok_or_else(|| MfError::Grading(format!("unknown label {l}")))?;
                    v.push((k, m));
                }
                v.sort_unstable();
                products[i][j] = v;
            }
        }
        Ok(FusionRing { labels, unit, index, products })
    }

    pub fn from_table(labels: Vec<L>, unit: usize, products: Vec<Vec<Vec<(usize, u32)>>>) -> FusionRing<L> {
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        FusionRing { labels, unit, index, products }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, l: &L) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.products[i][j]
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.products[i][j].iter().find(|(l, _)| *l == k).map_or(0, |(_, m)| *m)
    }

    pub fn check_unit(&self) -> bool {
        (0..self.len()).all(|i| self.products[self.unit][i] == [(i, 1)] && self.products[i][self.unit] == [(i, 1)])
    }

    pub fn check_commutative(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.products[i][j] == self.products[j][i]))
    }

    fn triple(&self, i: usize, j: usize, k: usize) -> (BTreeMap<usize, u64>, BTreeMap<usize, u64>) {
        let mut left = BTreeMap::new();
        for &(m, a) in &self.products[i][j] {
            for &(l, b) in &self.products[m][k] {
                *left.entry(l).or_insert(0) += a as u64 * b as u64;
            }
        }
        let mut right = BTreeMap::new();
        for &(m, a) in &self.products[j][k] {
            for &(l, b) in &self.products[i][m] {
                *right.entry(l).or_insert(0) += a as u64 * b as u64;
            }
        }
        (left, right)
    }

    pub fn check_associative(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| {
            let (l, r) = self.triple(i, j, k);
            l == r
        })))
    }

    /// The unique `j` with `N(i, j, unit) = 1`, if it exists.
    pub fn dual(&self, i: usize) -> Option<usize> {
        let c: Vec<usize> = (0..self.len()).filter(|&j| self.n(i, j, self.unit) == 1).collect();
        match c[..] {
            [j] if (0..self.len()).all(|k| k == j || self.n(i, k, self.unit) == 0) => Some(j),
            _ => None,
        }
    }

    pub fn check_rigid(&self) -> bool {
        (0..self.len()).all(|i| self.dual(i).is_some_and(|j| self.dual(j) == Some(i)))
    }

    /// Whether `map` is a ring isomorphism onto `other`; returns the first
    /// mismatch otherwise.
    pub fn compare_under<M: Ord + Clone + fmt::Display>(
        &self,
        other: &FusionRing<M>,
        map: impl Fn(&L) -> Option<M>,
    ) -> Result<usize, alloc::string::String> {
        if self.len() != other.len() {
            return Err(format!("rank {} vs {}", self.len(), other.len()));
        }
        let mut image = Vec::with_capacity(self.len());
        for l in &self.labels {
            let m = map(l).ok_or_else(|| format!("{l} has no image"))?;
            image.push(other.index_of(&m).ok_or_else(|| format!("image of {l} is not a label"))?);
        }
        let mut seen = image.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != image.len() {
            return Err("label map is not injective".into());
        }
        if image[self.unit] != other.unit {
            return Err("unit not preserved".into());
        }
        let mut checked = 0;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let mut mine: Vec<(usize, u32)> = self.products[i][j].iter().map(|&(k, m)| (image[k], m)).collect();
                mine.sort_unstable();
                if mine != other.products[image[i]][image[j]] {
                    return Err(format!("{} ⊗ {} differs", self.labels[i], self.labels[j]));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    /// Checks that `v` is a character: `v_i v_j = Σ_k N_ij^k v_k`.
    pub fn is_character(&self, v: &[CycNum]) -> bool {
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| {
                let mut rhs = CycNum::zero(v[0].d());
                for &(k, m) in &self.products[i][j] {
                    rhs += &v[k].scale_int(m as i64);
                }
                &v[i] * &v[j] == rhs
            })
        })
    }
}

/// The Grothendieck ring of graded permutation factorisations.
pub fn mf_fusion_ring(d: u32) -> Result<FusionRing<GradedLabel>, MfError> {
    let mut dec = Decomposer::new(d);
    let mut err = None;
    let ring = FusionRing::new(all_labels(d), GradedLabel::unit(), |x, y| {
        dec.product(*x, *y)
            .into_iter()
            .filter_map(|(l, n)| match u32::try_from(n) {
                Ok(n) => Some((l, n)),
                Err(_) => {
                    err = Some(MfError::Grading(format!("negative multiplicity in {x} ⊗ {y}")));
                    None
                }
            })
            .collect()
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(ring),
    }
}

/// Quantum dimensions `[λ+1]_q` of the labels.
pub fn quantum_dimensions(root: &Root, labels: &[GradedLabel]) -> Result<Vec<CycNum>, MfError> {
    let q = root.q();
    labels.iter().map(|l| Ok(quantum_int(l.lambda as i64 + 1, &q)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfcore::unit_mf;

    #[test]
    fn hats_are_graded() {
        let rt = Root::standard(5).unwrap();
        let i = hat_p(&rt, &[0]);
        assert_eq!(*i.mf, unit_mf(&rt));
        assert_eq!(i.charges, [vec![Rational::zero()], vec![rat(2, 5) - Rational::one()]]);
        for l in all_labels(5) {
            assert!(graded_check(&hat_label(&rt, l)));
        }
        let w = GradedMF { charges: [vec![Rational::zero()], vec![Rational::one()]], ..hat_p(&rt, &[1, 2]) };
        assert!(!graded_check(&w));
        let t = graded_tensor(&hat_label(&rt, GradedLabel { a: 2, lambda: 1 }), &hat_label(&rt, GradedLabel { a: 1, lambda: 2 })).unwrap();
        assert!(graded_check(&t));
    }

    #[test]
    fn duals_have_hat_charges() {
        let rt = Root::standard(5).unwrap();
        for set in [vec![0], vec![1, 2], vec![3, 4, 0]] {
            let neg: Vec<i64> = set.iter().map(|j| -j).collect();
            assert_eq!(graded_dual_rank1(&hat_p(&rt, &set)).unwrap().charges, hat_p(&rt, &neg).charges);
            assert_eq!(dual_iso_degree(&rt, &set).unwrap(), Some(Rational::zero()));
        }
    }

    #[test]
    fn g_pairs_for_small_d() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            for a in 0..d as i64 {
                for b in 0..d as i64 {
                    for mu in 1..=d - 2 {
                        let r = certify_g_pair(&rt, a, b, mu).unwrap();
                        assert!(r.passed(d, mu), "d={d} a={a} b={b} μ={mu}: {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        for d in [3u32, 5, 7] {
            for x in all_labels(d) {
                for y in all_labels(d) {
                    let mut got: Vec<GradedLabel> = decompose_product(d, x, y).unwrap().into_iter().map(|(l, n)| {
                        assert_eq!(n, 1);
                        l
                    }).collect();
                    let mut want = fusion_by_formula(d, x, y, IndexConvention::Plus);
                    got.sort();
                    want.sort();
                    assert_eq!(got, want, "{x} ⊗ {y}");
                }
            }
        }
    }

    #[test]
    fn fusion_ring_axioms() {
        let r = mf_fusion_ring(3).unwrap();
        assert_eq!(r.len(), 6);
        assert!(r.check_unit() && r.check_commutative() && r.check_associative() && r.check_rigid());
        let r = mf_fusion_ring(5).unwrap();
        assert_eq!(r.len(), 20);
        assert!(r.check_unit() && r.check_commutative() && r.check_rigid());
        for i in 0..r.len() {
            let l = r.labels[i];
            assert_eq!(r.dual(i), r.index_of(&l.dual(5)));
        }
        let rt = Root::standard(5).unwrap();
        assert!(r.is_character(&quantum_dimensions(&rt, &r.labels).unwrap()));
    }

    #[test]
    fn minus_convention_breaks_rigidity() {
        for d in [3u32, 5, 7] {
            let h = (d - 1) / 2;
            let t = GradedLabel { a: h, lambda: 1 };
            assert!(fusion_by_formula(d, t, t, IndexConvention::Plus).contains(&GradedLabel::unit()));
            assert!(!fusion_by_formula(d, t, t, IndexConvention::Minus).contains(&GradedLabel::unit()));
        }
    }

    #[test]
    fn graded_hom_rigidity_d5() {
        let rt = Root::standard(5).unwrap();
        let labels = all_labels(5);
        for r in &labels {
            for s in &labels {
                let n = graded_hom_dim(&rt, &r.set(), &s.set()).unwrap();
                assert_eq!(n, usize::from(r == s), "{r} {s}");
            }
        }
    }

    #[test]
    fn witnesses_for_small_labels() {
        let rt = Root::standard(5).unwrap();
        let t = GradedLabel { a: 2, lambda: 1 };
        assert!(certify_product(&rt, t, t).unwrap().iso);
        assert!(certify_product(&rt, GradedLabel { a: 3, lambda: 0 }, GradedLabel { a: 1, lambda: 2 }).unwrap().iso);
        assert!(certify_product(&rt, GradedLabel { a: 1, lambda: 1 }, GradedLabel { a: 4, lambda: 0 }).unwrap().iso);
    }
}
