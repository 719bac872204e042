//! Unit isomorphisms, rank-one duals, evaluation and coevaluation.

use alloc::sync::Arc;
use alloc::vec;

use super::{perm_mf, t_object, tensor_morphisms, unit_mf, LinOp, MFMorphism, MatrixBifact, MfError, OpMat, PolyMat};
use crate::cyclofield::{CycNum, Root};
use crate::mfcore::normalise_set;
use crate::polyring::{MPoly, Var};

fn s(k: usize) -> Var {
    Var::internal(k)
}

/// `λ_M : I ⊗ M → M`, substituting the left variable for the new internal one.
pub fn lambda(m: &Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
    let d = m.d();
    let src = Arc::new(super::tensor_mf(&unit_mf(&m.root()), m)?);
    let mut map = vec![(s(0), MPoly::x(d))];
    for k in 0..m.n_internal() {
        map.push((s(k + 1), MPoly::var(d, s(k))));
    }
    let l = LinOp::subst(map);
    let (r0, r1) = (m.rank0(), m.rank1());
    // (I0⊗M0 ⊕ I1⊗M1) → M0 and (I1⊗M0 ⊕ I0⊗M1) → M1
    let mut c0 = OpMat::zeros(r0, r0 + r1);
    for a in 0..r0 {
        c0.set(a, a, l.clone());
    }
    let mut c1 = OpMat::zeros(r1, r0 + r1);
    for b in 0..r1 {
        c1.set(b, r0 + b, l.clone());
    }
    MFMorphism::new(src, m.clone(), 0, c0, c1)
}

/// `ρ_M : M ⊗ I → M`, substituting the right variable for the new internal one.
pub fn rho(m: &Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
    let d = m.d();
    let src = Arc::new(super::tensor_mf(m, &unit_mf(&m.root()))?);
    let r = LinOp::subst(vec![(s(m.n_internal()), MPoly::y(d))]);
    let (r0, r1) = (m.rank0(), m.rank1());
    // (M0⊗I0 ⊕ M1⊗I1) → M0 and (M1⊗I0 ⊕ M0⊗I1) → M1
    let mut c0 = OpMat::zeros(r0, r0 + r1);
    for a in 0..r0 {
        c0.set(a, a, r.clone());
    }
    let mut c1 = OpMat::zeros(r1, r0 + r1);
    for b in 0..r1 {
        c1.set(b, b, r.clone());
    }
    MFMorphism::new(src, m.clone(), 0, c0, c1)
}

fn div_entries(m: &PolyMat, by: &MPoly) -> Result<PolyMat, MfError> {
    m.try_map(|p| Ok(p.exact_div(by)?))
}

/// Right inverse of `λ_M` built from difference quotients; `λ_M` composed
/// with it is the identity on the nose.
pub fn lambda_inv(m: &Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
    let d = m.d();
    let tgt = Arc::new(super::tensor_mf(&unit_mf(&m.root()), m)?);
    let n = m.n_internal();
    let shift_map: alloc::vec::Vec<(Var, Var)> = (0..n).rev().map(|k| (s(k), s(k + 1))).collect();
    let shift = LinOp::rename(d, &shift_map);
    let mut at_t = shift_map.clone();
    at_t.push((Var::X, s(0)));
    let x_minus_t = MPoly::linear(Var::X, &CycNum::one(d), s(0));
    let alpha = div_entries(&m.d0.rename(&shift_map).sub(&m.d0.rename(&at_t)), &x_minus_t)?;
    let beta = div_entries(&m.d1.rename(&shift_map).sub(&m.d1.rename(&at_t)), &x_minus_t)?;
    let (r0, r1) = (m.rank0(), m.rank1());
    // M0 → I0⊗M0 ⊕ I1⊗M1
    let mut c0 = OpMat::zeros(r0 + r1, r0);
    for a in 0..r0 {
        c0.set(a, a, shift.clone());
        for b in 0..r1 {
            c0.set(r0 + b, a, LinOp::mul(alpha.get(b, a).clone()).after(&shift));
        }
    }
    // M1 → I1⊗M0 ⊕ I0⊗M1
    let mut c1 = OpMat::zeros(r0 + r1, r1);
    for b in 0..r1 {
        c1.set(r0 + b, b, shift.clone());
        for a in 0..r0 {
            c1.set(a, b, LinOp::mul(beta.get(a, b).clone()).after(&shift));
        }
    }
    MFMorphism::new(m.clone(), tgt, 0, c0, c1)
}

/// Right inverse of `ρ_M` built from difference quotients.
pub fn rho_inv(m: &Arc<MatrixBifact>) -> Result<MFMorphism, MfError> {
    let d = m.d();
    let tgt = Arc::new(super::tensor_mf(m, &unit_mf(&m.root()))?);
    let sv = s(m.n_internal());
    let at_s = [(Var::Y, sv)];
    let s_minus_y = MPoly::linear(sv, &CycNum::one(d), Var::Y);
    let alpha = div_entries(&m.d0.rename(&at_s).sub(&m.d0), &s_minus_y)?;
    let beta = div_entries(&m.d1.sub(&m.d1.rename(&at_s)), &s_minus_y)?;
    let (r0, r1) = (m.rank0(), m.rank1());
    let one = LinOp::identity(d);
    // M0 → M0⊗I0 ⊕ M1⊗I1
    let mut c0 = OpMat::zeros(r0 + r1, r0);
    for a in 0..r0 {
        c0.set(a, a, one.clone());
        for b in 0..r1 {
            c0.set(r0 + b, a, LinOp::mul(alpha.get(b, a).clone()));
        }
    }
    // M1 → M1⊗I0 ⊕ M0⊗I1
    let mut c1 = OpMat::zeros(r0 + r1, r1);
    for b in 0..r1 {
        c1.set(b, b, one.clone());
        for a in 0..r0 {
            c1.set(r1 + a, b, LinOp::mul(beta.get(a, b).clone()));
        }
    }
    MFMorphism::new(m.clone(), tgt, 0, c0, c1)
}

fn require_rank_one(m: &MatrixBifact) -> Result<(), MfError> {
    if m.rank0() != 1 || m.rank1() != 1 || m.n_internal() != 0 {
        return Err(MfError::NotRankOne);
    }
    Ok(())
}

const SWAP: [(Var, Var); 2] = [(Var::X, Var::Y), (Var::Y, Var::X)];

/// Dual of a rank-one object: `d1⁺ = -d1(y, x)`, `d0⁺ = d0(y, x)`.
pub fn dual_rank1(m: &MatrixBifact) -> Result<MatrixBifact, MfError> {
    require_rank_one(m)?;
    let d1 = m.d1.rename(&SWAP).map(|p| -p);
    let d0 = m.d0.rename(&SWAP);
    Ok(m.with_d(d0, d1))
}

/// The isomorphism `P_{-S} → (P_S)⁺`.
pub fn perm_dual_iso(root: &Root, set: &[i64]) -> Result<MFMorphism, MfError> {
    let d = root.d();
    let set = normalise_set(d, set);
    let neg: alloc::vec::Vec<i64> = set.iter().map(|j| -j).collect();
    let src = Arc::new(perm_mf(root, &neg));
    let tgt = Arc::new(dual_rank1(&perm_mf(root, &set))?);
    let mut c1 = CycNum::from_int(d, if set.len() % 2 == 1 { 1 } else { -1 });
    for j in &set {
        c1 = &c1 * &root.eta(-j);
    }
    MFMorphism::new(src, tgt, 0, OpMat::diagonal(1, LinOp::identity(d)), OpMat::diagonal(1, LinOp::scalar(c1)))
}

/// Residue map `G_M(f)`: the coefficient of `s^{-1}` in
/// `(x - y - s) d0(s, y) f / (s (s^d - y^d))`, expanded at `s = ∞`, where `s`
/// is the internal variable of `M⁺ ⊗ M`.
pub fn residue_op(m: &MatrixBifact) -> Result<LinOp, MfError> {
    require_rank_one(m)?;
    let d = m.d();
    let x = MPoly::x(d);
    let y = MPoly::y(d);
    let sv = MPoly::var(d, s(0));
    let d0_sy = m.d0.get(0, 0).rename(&[(Var::X, s(0))]);
    let kernel = &(&(&x - &y) - &sv) * &d0_sy;
    Ok(LinOp::residue(s(0), Var::Y, kernel, d))
}

/// Evaluates `G_M` on a polynomial in `x`, `s1` and `y`.
pub fn g_residue(m: &MatrixBifact, f: &MPoly) -> Result<MPoly, MfError> {
    residue_op(m)?.apply(f)
}

/// `ev_M : M⁺ ⊗ M → I`.
pub fn ev_rank1(m: &MatrixBifact) -> Result<MFMorphism, MfError> {
    require_rank_one(m)?;
    let d = m.d();
    let root = m.root();
    let mp = dual_rank1(m)?;
    let src = Arc::new(super::tensor_mf(&mp, m)?);
    let tgt = Arc::new(unit_mf(&root));
    let g = residue_op(m)?;
    let minus = CycNum::from_int(d, -1);
    let a = g.scaled(&minus);
    let d1_sx = m.d1.get(0, 0).rename(&[(Var::X, s(0)), (Var::Y, Var::X)]);
    let x_minus_y = MPoly::linear(Var::X, &CycNum::one(d), Var::Y);
    let b = LinOp::div_by(x_minus_y).after(&g).after(&LinOp::mul(d1_sx));
    let c = LinOp::subst(vec![(s(0), MPoly::zero(d))]).scaled(&minus);
    let mut c0 = OpMat::zeros(1, 2);
    c0.set(0, 0, a);
    let mut c1 = OpMat::zeros(1, 2);
    c1.set(0, 0, b);
    c1.set(0, 1, c);
    MFMorphism::new(src, tgt, 0, c0, c1)
}

/// `coev_M : I → M ⊗ M⁺`.
pub fn coev_rank1(m: &MatrixBifact) -> Result<MFMorphism, MfError> {
    require_rank_one(m)?;
    let d = m.d();
    let root = m.root();
    let mp = dual_rank1(m)?;
    let src = Arc::new(unit_mf(&root));
    let tgt = Arc::new(super::tensor_mf(m, &mp)?);
    let x_minus_y = MPoly::linear(Var::X, &CycNum::one(d), Var::Y);
    let at_xs = [(Var::Y, s(0))];
    let at_ys = [(Var::X, Var::Y), (Var::Y, s(0))];
    let dq = |p: &MPoly| -> Result<MPoly, MfError> { Ok((&p.rename(&at_xs) - &p.rename(&at_ys)).exact_div(&x_minus_y)?) };
    let e1 = dq(m.d1.get(0, 0))?;
    let e0 = dq(m.d0.get(0, 0))?;
    let c0 = OpMat::from_polymat(&PolyMat::from_rows(d, vec![vec![e1], vec![e0]]));
    let c1 = OpMat::from_polymat(&PolyMat::from_rows(d, vec![vec![MPoly::one(d)], vec![MPoly::one(d)]]));
    MFMorphism::new(src, tgt, 0, c0, c1)
}

/// Inverse of a morphism between rank-one objects with invertible constant
/// components.
pub fn invert_constant(f: &MFMorphism) -> Result<MFMorphism, MfError> {
    let [p0, p1] = f.as_polys()?;
    let mut inv = [OpMat::zeros(1, 1), OpMat::zeros(1, 1)];
    for (k, p) in [p0, p1].iter().enumerate() {
        if p.rows != 1 || p.cols != 1 || f.degree != 0 {
            return Err(MfError::NotRankOne);
        }
        let c = p.get(0, 0).as_constant().ok_or(MfError::NotDivisible)?;
        inv[k] = OpMat::diagonal(1, LinOp::scalar(c.inv()?));
    }
    let [c0, c1] = inv;
    MFMorphism::new(f.tgt.clone(), f.src.clone(), 0, c0, c1)
}

/// The isomorphism `t : T → T⁺`.
pub fn t_iso(root: &Root) -> Result<MFMorphism, MfError> {
    let h = (root.d() as i64 - 1) / 2;
    perm_dual_iso(root, &[h, h + 1])
}

/// `u = ev_T ∘ (t ⊗ 1) : T ⊗ T → I`.
pub fn u_map(root: &Root) -> Result<MFMorphism, MfError> {
    let t = Arc::new(t_object(root));
    let ti = t_iso(root)?;
    let step = tensor_morphisms(&ti, &MFMorphism::identity(t.clone()))?;
    ev_rank1(&t)?.compose(&step)
}

/// `n = (1 ⊗ t⁻¹) ∘ coev_T : I → T ⊗ T`.
pub fn n_map(root: &Root) -> Result<MFMorphism, MfError> {
    let t = Arc::new(t_object(root));
    let tinv = invert_constant(&t_iso(root)?)?;
    let step = tensor_morphisms(&MFMorphism::identity(t.clone()), &tinv)?;
    step.compose(&coev_rank1(&t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfcore::{perm_consecutive, tensor_mf, verify_factorisation};
    use crate::polyring::Mono;

    #[test]
    fn units_and_inverses() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            let bound = 2 * d;
            for m in [t_object(&rt), perm_consecutive(&rt, 1, 2)] {
                let m = Arc::new(m);
                let l = lambda(&m).unwrap();
                let r = rho(&m).unwrap();
                assert!(l.is_cycle(bound).unwrap());
                assert!(r.is_cycle(bound).unwrap());
                let li = lambda_inv(&m).unwrap();
                let ri = rho_inv(&m).unwrap();
                assert!(li.is_cycle(0).unwrap());
                assert!(ri.is_cycle(0).unwrap());
                let id = MFMorphism::identity(m.clone());
                assert!(l.compose(&li).unwrap().equals(&id, 0).unwrap());
                assert!(r.compose(&ri).unwrap().equals(&id, 0).unwrap());
            }
        }
    }

    #[test]
    fn units_of_tensor_products() {
        let rt = Root::standard(3).unwrap();
        let t = t_object(&rt);
        let tt = Arc::new(tensor_mf(&t, &t).unwrap());
        assert!(lambda(&tt).unwrap().is_cycle(4).unwrap());
        assert!(rho(&tt).unwrap().is_cycle(4).unwrap());
        assert!(lambda_inv(&tt).unwrap().is_cycle(4).unwrap());
        assert!(rho_inv(&tt).unwrap().is_cycle(4).unwrap());
    }

    #[test]
    fn duals_factorise_and_dual_iso_is_a_cycle() {
        let rt = Root::standard(5).unwrap();
        for set in [vec![0], vec![1, 2], vec![0, 1, 3]] {
            verify_factorisation(&dual_rank1(&perm_mf(&rt, &set)).unwrap()).unwrap();
            assert!(perm_dual_iso(&rt, &set).unwrap().is_cycle(0).unwrap());
        }
        let i = unit_mf(&rt);
        assert_eq!(dual_rank1(&i).unwrap(), i);
    }

    #[test]
    fn residue_values() {
        let rt = Root::standard(3).unwrap();
        let i = unit_mf(&rt);
        assert_eq!(g_residue(&i, &MPoly::one(3)).unwrap(), MPoly::int(3, -1));
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            let t = t_object(&rt);
            let d1_sy = t.d1.get(0, 0).rename(&[(Var::X, s(0))]);
            let x_minus_y = MPoly::linear(Var::X, &CycNum::one(d), Var::Y);
            for m in 0..=2 * d {
                let f = d1_sy.mul_mono(Mono::var(s(0), m));
                let g = g_residue(&t, &f).unwrap();
                let expect = if m == 0 { x_minus_y.clone() } else { MPoly::zero(d) };
                assert_eq!(g, expect, "m = {m}");
            }
        }
    }

    #[test]
    fn evaluation_and_coevaluation_are_cycles() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            for m in [t_object(&rt), unit_mf(&rt), perm_consecutive(&rt, 0, 2)] {
                assert!(coev_rank1(&m).unwrap().is_cycle(0).unwrap());
                assert!(ev_rank1(&m).unwrap().is_cycle(2 * d + 2).unwrap());
            }
        }
    }

    #[test]
    fn u_after_n_is_kappa() {
        for d in [3u32, 5, 7] {
            let rt = Root::standard(d).unwrap();
            let un = u_map(&rt).unwrap().compose(&n_map(&rt).unwrap()).unwrap();
            let [p0, p1] = un.as_polys().unwrap();
            assert_eq!(p0.get(0, 0), &MPoly::constant(rt.kappa()));
            assert_eq!(p1.get(0, 0), &MPoly::constant(rt.kappa()));
        }
    }
}
