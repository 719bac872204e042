//! ℤ_d-equivariant structures, the label dictionary between NS labels and
//! graded permutation factorisations, and the fusion-ring comparison.

pub mod suites;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cftside::{cft_fusion_ring, quantum_dim, CftError, NSLabel};
use crate::cyclofield::{CycNum, Root};
use crate::graded::{
    certify_g_pair, fusion_by_formula, mf_fusion_ring, quantum_dimensions, FusionRing, GradedLabel, IndexConvention,
};
use crate::invariants::{default_homotopy_bound, homotopy_solve, is_homotopy_iso, DegreeBound};
use crate::mfcore::{
    chi, default_test_degree, mu, n_map, reassociate, s_iso, t_object, tau, tensor_morphisms, twist_morphism,
    twist_tensor_iso, u_map, MFMorphism, MatrixBifact, MfError,
};

/// How strongly two parallel morphisms agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Strict,
    Homotopic,
    Differ,
}

impl Agreement {
    pub fn holds(self) -> bool {
        self != Agreement::Differ
    }
}

/// Compares on the nose first, then up to homotopy.
pub fn agreement(f: &MFMorphism, g: &MFMorphism, bound: u32) -> Result<Agreement, MfError> {
    if f.equals(g, bound)? {
        return Ok(Agreement::Strict);
    }
    let b = default_homotopy_bound(f, g)?;
    Ok(if homotopy_solve(f, g, &DegreeBound::Upto(b))?.is_some() { Agreement::Homotopic } else { Agreement::Differ })
}

/// A family `σ_a : M → _a M_{-a}`, `a ∈ ℤ_d`.
#[derive(Clone, Debug)]
pub struct EquivStructure {
    pub object: Arc<MatrixBifact>,
    pub maps: Vec<MFMorphism>,
}

impl EquivStructure {
    /// The structure `τ_{S;a}` on `P_S`.
    pub fn perm(root: &Root, set: &[i64]) -> Result<EquivStructure, MfError> {
        let maps: Vec<MFMorphism> = (0..root.d() as i64).map(|a| tau(root, set, a)).collect::<Result<_, _>>()?;
        Ok(EquivStructure { object: maps[0].src.clone(), maps })
    }

    /// The induced structure on `M ⊗ N`.
    pub fn tensor(&self, other: &EquivStructure) -> Result<EquivStructure, MfError> {
        let mut maps = Vec::new();
        for (a, (s, t)) in self.maps.iter().zip(&other.maps).enumerate() {
            let both = tensor_morphisms(s, t)?;
            let iso = twist_tensor_iso(&self.object, &other.object, a as i64)?;
            maps.push(iso.compose(&both)?);
        }
        Ok(EquivStructure { object: maps[0].src.clone(), maps })
    }

    /// `_a(σ_b) ∘ σ_a = σ_{a+b}` for every `a, b`.
    pub fn check_cocycle(&self, bound: u32) -> Result<bool, MfError> {
        let d = self.maps.len();
        for a in 0..d {
            for b in 0..d {
                let lhs = twist_morphism(&self.maps[b], a as i64, -(a as i64))?.compose(&self.maps[a])?;
                let rhs = &self.maps[(a + b) % d];
                let rhs = rhs.retarget(lhs.src.clone(), lhs.tgt.clone())?;
                if !lhs.equals(&rhs, bound)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether `σ'_a ∘ f` and `_a f_{-a} ∘ σ_a` agree for every `a`; returns
/// the weakest agreement level met.
pub fn check_equivariant(f: &MFMorphism, src: &EquivStructure, tgt: &EquivStructure, bound: u32) -> Result<Agreement, MfError> {
    let mut worst = Agreement::Strict;
    for (a, (s, t)) in src.maps.iter().zip(&tgt.maps).enumerate() {
        let lhs = t.compose(f)?;
        let rhs = twist_morphism(f, a as i64, -(a as i64))?.compose(s)?;
        let rhs = rhs.retarget(lhs.src.clone(), lhs.tgt.clone())?;
        match agreement(&lhs, &rhs, bound)? {
            Agreement::Differ => return Ok(Agreement::Differ),
            Agreement::Homotopic => worst = Agreement::Homotopic,
            Agreement::Strict => {}
        }
    }
    Ok(worst)
}

/// Equivariance levels of `u` and `n` for the structure `τ` on `T`.
pub fn duality_maps_equivariant(root: &Root, bound: u32) -> Result<(Agreement, Agreement), MfError> {
    let h = (root.d() as i64 - 1) / 2;
    let t = EquivStructure::perm(root, &[h, h + 1])?;
    debug_assert_eq!(*t.object, t_object(root));
    let tt = t.tensor(&t)?;
    let unit = EquivStructure::perm(root, &[0])?;
    let u = u_map(root)?;
    let u = u.retarget(tt.object.clone(), unit.object.clone())?;
    let n = n_map(root)?;
    let n = n.retarget(unit.object.clone(), tt.object.clone())?;
    Ok((check_equivariant(&u, &tt, &unit, bound)?, check_equivariant(&n, &unit, &tt, bound)?))
}

/// `μ_{a,b+c} ∘ (1 ⊗ μ_{b,c}) ∘ α` against `μ_{a+b,c} ∘ (μ_{a,b} ⊗ 1)`.
pub fn mu_associativity(root: &Root, a: i64, b: i64, c: i64, bound: u32) -> Result<Agreement, MfError> {
    let ca = Arc::new(chi(root, a));
    let cc = Arc::new(chi(root, c));
    let left = tensor_morphisms(&mu(root, a, b)?, &MFMorphism::identity(cc))?;
    let left = mu(root, a + b, c)?.compose(&left)?;
    let right = tensor_morphisms(&MFMorphism::identity(ca), &mu(root, b, c)?)?;
    let right = mu(root, a, b + c)?.compose(&right)?;
    let alpha = reassociate(left.src.clone(), right.src.clone())?;
    let right = right.compose(&alpha)?;
    agreement(&left, &right, bound)
}

/// `s_{a,0} : P_{{-a}} → χ(a)` is an isomorphism on homology.
pub fn chi_is_perm(root: &Root, a: i64) -> Result<bool, MfError> {
    let s = s_iso(root, &[0], a, 0)?;
    Ok(s.is_cycle(0)? && *s.tgt == chi(root, a) && is_homotopy_iso(&s)?)
}

/// `[l, r] ↦ (m, λ) = ((r - l)/2 mod d, l)`.
pub fn label_map(d: u32, l: u32, r: i64) -> Result<GradedLabel, CftError> {
    let x = NSLabel::new(d, l, r)?;
    let m = (x.r as i64 - x.l as i64) / 2;
    Ok(GradedLabel::new(d, m, x.l)?)
}

pub fn map_label(d: u32, x: &NSLabel) -> Option<GradedLabel> {
    label_map(d, x.l, x.r as i64).ok()
}

/// NS dual: `[l, -r]`.
pub fn ns_dual(d: u32, x: &NSLabel) -> NSLabel {
    NSLabel { l: x.l, r: (2 * d - x.r) % (2 * d) }
}

/// Outcome of the fusion-ring comparison.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub d: u32,
    pub bijection: bool,
    pub products: Result<usize, String>,
    pub unit: bool,
    pub duality: bool,
    pub dimensions: bool,
    pub dimension_detail: String,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.bijection && self.products.is_ok() && self.unit && self.duality && self.dimensions
    }
}

/// Largest real eigenvalue of a non-negative matrix by power iteration.
pub fn perron_frobenius(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut v = alloc::vec![1.0; n];
    let mut lam = 0.0;
    for _ in 0..2000 {
        // shift by the identity so periodic matrices still converge
        let w: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|j| m[i][j] * v[j]).sum::<f64>()).collect();
        let norm = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if norm == 0.0 {
            return 0.0;
        }
        lam = norm;
        v = w.iter().map(|x| x / norm).collect();
    }
    lam - 1.0
}

fn fusion_matrix(ring: &FusionRing<GradedLabel>, i: usize) -> Vec<Vec<f64>> {
    let n = ring.len();
    let mut m = alloc::vec![alloc::vec![0.0; n]; n];
    for (j, row) in m.iter_mut().enumerate() {
        for &(k, c) in ring.product(i, j) {
            row[k] += c as f64;
        }
    }
    m
}

/// Compares the two quantum-dimension vectors: exactly as a character of
/// the MF ring, and, for the standard root, numerically against the
/// Perron–Frobenius eigenvalues of the fusion matrices.
fn dimension_check(root: &Root, cft: &FusionRing<NSLabel>, mf: &FusionRing<GradedLabel>) -> Result<(bool, String), CftError> {
    let d = root.d();
    let mf_dims = quantum_dimensions(root, &mf.labels)?;
    let mut ok = mf.is_character(&mf_dims);
    for x in &cft.labels {
        let Some(y) = map_label(d, x) else { return Ok((false, format!("{x} has no image"))) };
        let i = mf.index_of(&y).unwrap_or(usize::MAX);
        ok &= i < mf.len() && quantum_dim(root, x.l)? == mf_dims[i];
    }
    if !ok {
        return Ok((false, "quantum dimensions do not form a common character".into()));
    }
    if root.exponent() != 1 {
        let base = Root::standard(d)?;
        let e = root.galois_exponent();
        for (x, dim) in mf.labels.iter().zip(&mf_dims) {
            if quantum_dim(&base, x.lambda)?.galois_twist(e)? != *dim {
                return Ok((false, format!("dim {x} is not the Galois conjugate")));
            }
        }
        return Ok((true, format!("character under root exponent {}; Galois conjugate of the standard dimensions", root.exponent())));
    }
    let mut worst = 0.0f64;
    for (i, dim) in mf_dims.iter().enumerate() {
        let (re, im) = dim.to_float();
        let pf = perron_frobenius(&fusion_matrix(mf, i));
        worst = worst.max((re - pf).abs()).max(im.abs());
    }
    Ok((worst < 1e-8, format!("exact character; max deviation from Perron–Frobenius {worst:.1e}")))
}

pub fn verify_equivalence(root: &Root) -> Result<EquivalenceReport, CftError> {
    let d = root.d();
    let cft = cft_fusion_ring(d)?;
    let mf = mf_fusion_ring(d)?;
    let images: Vec<Option<GradedLabel>> = cft.labels.iter().map(|x| map_label(d, x)).collect();
    let mut sorted: Vec<GradedLabel> = images.iter().flatten().copied().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let bijection = sorted.len() == cft.len() && sorted == {
        let mut all = mf.labels.clone();
        all.sort_unstable();
        all
    };
    let products = cft.compare_under(&mf, |x| map_label(d, x));
    let unit = map_label(d, &NSLabel::unit()) == Some(GradedLabel::unit());
    let duality = cft.labels.iter().all(|x| map_label(d, &ns_dual(d, x)) == map_label(d, x).map(|y| y.dual(d)));
    let (dimensions, dimension_detail) = dimension_check(root, &cft, &mf)?;
    Ok(EquivalenceReport { d, bijection, products, unit, duality, dimensions, dimension_detail })
}

/// Status of the two candidate index conventions for the fusion rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionRecord {
    /// Every `a:1 ⊗ b:μ` decomposition predicted by the "+" rule is
    /// certified by homology.
    pub plus_certified: bool,
    /// The "+" ring is rigid.
    pub plus_rigid: bool,
    /// `T` is its own dual in the "+" ring, as `u` and `n` require.
    pub plus_t_self_dual: bool,
    /// `T` is its own dual in the "-" ring.
    pub minus_t_self_dual: bool,
    /// The unit occurs in `T ⊗ T` under the "-" rule.
    pub minus_unit_in_tt: bool,
}

pub fn index_conventions(root: &Root) -> Result<ConventionRecord, MfError> {
    let d = root.d();
    let labels = crate::graded::all_labels(d);
    let ring = |conv| {
        FusionRing::new(labels.clone(), GradedLabel::unit(), |x, y| {
            let mut out: Vec<(GradedLabel, u32)> = Vec::new();
            for l in fusion_by_formula(d, *x, *y, conv) {
                match out.iter_mut().find(|(m, _)| *m == l) {
                    Some((_, n)) => *n += 1,
                    None => out.push((l, 1)),
                }
            }
            out
        })
    };
    let plus = ring(IndexConvention::Plus)?;
    let minus = ring(IndexConvention::Minus)?;
    let h = (d as i64 - 1) / 2;
    let t = GradedLabel::new(d, h, 1)?;
    let minus_unit_in_tt = fusion_by_formula(d, t, t, IndexConvention::Minus).contains(&GradedLabel::unit());
    let mut plus_certified = true;
    for a in 0..d as i64 {
        for b in 0..d as i64 {
            for m in 1..=d - 2 {
                let rep = certify_g_pair(root, a, b, m)?;
                let x = GradedLabel::new(d, a, 1)?;
                let y = GradedLabel::new(d, b, m)?;
                let mut want = fusion_by_formula(d, x, y, IndexConvention::Plus);
                want.sort_unstable();
                let mut got = alloc::vec![GradedLabel::new(d, a + b + 1, m - 1)?];
                if m + 2 < d {
                    got.push(GradedLabel::new(d, a + b, m + 1)?);
                }
                got.sort_unstable();
                plus_certified &= rep.passed(d, m) && want == got;
            }
        }
    }
    let self_dual = |r: &FusionRing<GradedLabel>| r.index_of(&t).is_some_and(|i| r.dual(i) == Some(i));
    Ok(ConventionRecord {
        plus_certified,
        plus_rigid: plus.check_rigid(),
        plus_t_self_dual: self_dual(&plus),
        minus_t_self_dual: self_dual(&minus),
        minus_unit_in_tt,
    })
}

/// `κ` under a non-standard root against the Galois conjugate of the
/// standard `κ`.
pub fn galois_kappa(root: &Root) -> Result<(CycNum, CycNum), CftError> {
    let base = Root::standard(root.d())?;
    Ok((root.kappa(), base.kappa().galois_twist(root.galois_exponent())?))
}

pub fn test_bound(root: &Root) -> u32 {
    default_test_degree(root.d())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cftside::ns_simples;

    #[test]
    fn labels() {
        let g = label_map(5, 1, 5).unwrap();
        assert_eq!((g.a, g.lambda), (2, 1));
        for a in 0..7 {
            let g = label_map(7, 0, 2 * a).unwrap();
            assert_eq!((g.a as i64, g.lambda), (a, 0));
        }
        assert!(matches!(label_map(5, 1, 2), Err(CftError::ParityViolation(1, 2))));
        let mut all: Vec<_> = ns_simples(5).unwrap().iter().map(|x| map_label(5, x).unwrap()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 20);
    }

    #[test]
    fn tau_cocycle() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            for set in [alloc::vec![0], alloc::vec![2, 3], alloc::vec![0, 1, 2], alloc::vec![1, 4]] {
                let s = EquivStructure::perm(&rt, &set).unwrap();
                assert!(s.maps[0].equals(&MFMorphism::identity(s.object.clone()), 0).unwrap());
                assert!(s.check_cocycle(0).unwrap(), "d={d} S={set:?}");
            }
        }
    }

    #[test]
    fn u_and_n_equivariant() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            let (u, n) = duality_maps_equivariant(&rt, test_bound(&rt)).unwrap();
            assert!(u.holds() && n.holds(), "d={d}: {u:?} {n:?}");
        }
    }

    #[test]
    fn mu_is_associative_on_the_nose() {
        let rt = Root::standard(3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(mu_associativity(&rt, a, b, c, test_bound(&rt)).unwrap(), Agreement::Strict);
                }
            }
        }
        for a in 0..5 {
            assert!(chi_is_perm(&Root::standard(5).unwrap(), a).unwrap());
        }
    }

    #[test]
    fn rings_agree() {
        for (d, count) in [(3u32, 36usize), (5, 400)] {
            let r = verify_equivalence(&Root::standard(d).unwrap()).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.products, Ok(count));
        }
        let r = verify_equivalence(&Root::new(5, 2).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn conventions() {
        let rec = index_conventions(&Root::standard(5).unwrap()).unwrap();
        assert!(rec.plus_certified && rec.plus_rigid && rec.plus_t_self_dual);
        assert!(!rec.minus_t_self_dual && !rec.minus_unit_in_tt);
    }

    #[test]
    fn galois_kappa_matches() {
        let (k, g) = galois_kappa(&Root::new(5, 2).unwrap()).unwrap();
        assert_eq!(k, g);
        assert_eq!(k, Root::standard(5).unwrap().kappa().galois_twist(3).unwrap());
    }

    #[test]
    fn power_iteration() {
        let m = alloc::vec![alloc::vec![0.0, 1.0], alloc::vec![1.0, 1.0]];
        assert!((perron_frobenius(&m) - 1.618_033_988_749_895).abs() < 1e-9);
    }
}
