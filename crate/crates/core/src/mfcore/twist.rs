//! Twisting by roots of unity on the external variables.

use alloc::sync::Arc;
use alloc::vec;

use super::{lambda, normalise_set, perm_mf, tensor_mf, unit_mf, LinOp, MFMorphism, MatrixBifact, MfError, OpMat};
use crate::cyclofield::{CycNum, Root};
use crate::polyring::{MPoly, Mono, Var};

fn scale_ext(root: &Root, a: i64, b: i64) -> LinOp {
    let d = root.d();
    let mut map = vec![];
    if a.rem_euclid(d as i64) != 0 {
        map.push((Var::X, MPoly::term(root.eta(a), Mono::var(Var::X, 1))));
    }
    if b.rem_euclid(d as i64) != 0 {
        map.push((Var::Y, MPoly::term(root.eta(-b), Mono::var(Var::Y, 1))));
    }
    if map.is_empty() {
        LinOp::identity(d)
    } else {
        LinOp::subst(map)
    }
}

/// `_a M _b`: the differential with `x ↦ η^a x` and `y ↦ η^{-b} y`.
pub fn twist_mf(m: &MatrixBifact, a: i64, b: i64) -> MatrixBifact {
    let root = m.root();
    let map = [
        (Var::X, MPoly::term(root.eta(a), Mono::var(Var::X, 1))),
        (Var::Y, MPoly::term(root.eta(-b), Mono::var(Var::Y, 1))),
    ];
    m.with_d(m.d0.substitute(&map), m.d1.substitute(&map))
}

/// `_a f _b`, the same morphism read between twisted objects.
pub fn twist_morphism(f: &MFMorphism, a: i64, b: i64) -> Result<MFMorphism, MfError> {
    let root = f.src.root();
    let post = scale_ext(&root, a, b);
    let pre = scale_ext(&root, -a, -b);
    let conj = |m: &OpMat| m.conjugated(&pre, &post);
    MFMorphism::new(
        Arc::new(twist_mf(&f.src, a, b)),
        Arc::new(twist_mf(&f.tgt, a, b)),
        f.degree,
        conj(&f.comps[0]),
        conj(&f.comps[1]),
    )
}

/// `s_{a,b} : P_{S-a-b} → _a(P_S)_b`.
pub fn s_iso(root: &Root, set: &[i64], a: i64, b: i64) -> Result<MFMorphism, MfError> {
    let d = root.d();
    let set = normalise_set(d, set);
    let shifted: alloc::vec::Vec<i64> = set.iter().map(|j| j - a - b).collect();
    let src = Arc::new(perm_mf(root, &shifted));
    let tgt = Arc::new(twist_mf(&perm_mf(root, &set), a, b));
    let c1 = root.eta(-(set.len() as i64) * a);
    MFMorphism::new(src, tgt, 0, OpMat::diagonal(1, LinOp::identity(d)), OpMat::diagonal(1, LinOp::scalar(c1)))
}

/// `τ_{S;a} : P_S → _a(P_S)_{-a}`.
pub fn tau(root: &Root, set: &[i64], a: i64) -> Result<MFMorphism, MfError> {
    let d = root.d() as i64;
    let set = normalise_set(root.d(), set);
    let k = (d + 1) / 2 * a * (set.len() as i64 - 1);
    Ok(s_iso(root, &set, a, -a)?.scaled(&root.eta(k)))
}

/// The invertible object `χ(a) = _a I`.
pub fn chi(root: &Root, a: i64) -> MatrixBifact {
    twist_mf(&unit_mf(root), a, 0)
}

/// `μ_{a,b} : χ(a) ⊗ χ(b) → χ(a + b)`.
pub fn mu(root: &Root, a: i64, b: i64) -> Result<MFMorphism, MfError> {
    let l = lambda(&Arc::new(chi(root, b)))?;
    twist_morphism(&l, a, 0)
}

/// `_a M_{-a} ⊗ _a N_{-a} → _a(M ⊗ N)_{-a}`, rescaling the shared variable.
pub fn twist_tensor_iso(m: &MatrixBifact, n: &MatrixBifact, a: i64) -> Result<MFMorphism, MfError> {
    let root = m.root();
    let src = Arc::new(tensor_mf(&twist_mf(m, a, -a), &twist_mf(n, a, -a))?);
    let tgt = Arc::new(twist_mf(&tensor_mf(m, n)?, a, -a));
    let mid = Var::internal(m.n_internal());
    let op = LinOp::subst(vec![(mid, MPoly::term(root.eta(-a), Mono::var(mid, 1)))]);
    let r0 = src.rank0();
    let r1 = src.rank1();
    MFMorphism::new(src, tgt, 0, OpMat::diagonal(r0, op.clone()), OpMat::diagonal(r1, op))
}

/// `η^k` as a scalar morphism on `M`.
pub fn scalar_morphism(m: &Arc<MatrixBifact>, c: &CycNum) -> MFMorphism {
    MFMorphism::identity(m.clone()).scaled(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfcore::{perm_consecutive, t_object, tensor_morphisms};

    #[test]
    fn twisted_objects_factorise() {
        let rt = Root::standard(5).unwrap();
        let p = perm_consecutive(&rt, 1, 2);
        for (a, b) in [(1, 0), (2, 3), (-1, 4)] {
            crate::mfcore::verify_factorisation(&twist_mf(&p, a, b)).unwrap();
        }
        assert_eq!(twist_mf(&twist_mf(&p, 1, 2), 3, 1), twist_mf(&p, 4, 3));
        assert_eq!(twist_mf(&chi(&rt, 2), 3, 0), chi(&rt, 5));
    }

    #[test]
    fn shift_and_tau_are_cycles() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            for set in [vec![0], vec![1, 2], vec![0, 2, 3]] {
                for (a, b) in [(1, 0), (2, 1), (0, 3)] {
                    assert!(s_iso(&rt, &set, a, b).unwrap().is_cycle(0).unwrap());
                }
                assert!(tau(&rt, &set, 2).unwrap().is_cycle(0).unwrap());
            }
        }
    }

    #[test]
    fn mu_and_tensor_iso_are_cycles() {
        let rt = Root::standard(5).unwrap();
        for (a, b) in [(1, 2), (3, 4)] {
            let m = mu(&rt, a, b).unwrap();
            assert_eq!(*m.src, tensor_mf(&chi(&rt, a), &chi(&rt, b)).unwrap());
            assert_eq!(*m.tgt, chi(&rt, a + b));
            assert!(m.is_cycle(12).unwrap());
        }
        let t = t_object(&rt);
        for a in 1..5 {
            let f = twist_tensor_iso(&t, &t, a).unwrap();
            assert!(f.is_cycle(12).unwrap());
        }
    }

    #[test]
    fn twisting_commutes_with_composition() {
        let rt = Root::standard(5).unwrap();
        let t = Arc::new(t_object(&rt));
        let f = tau(&rt, &[2, 3], 1).unwrap();
        let g = tensor_morphisms(&MFMorphism::identity(t.clone()), &MFMorphism::identity(t)).unwrap();
        let tg = twist_morphism(&g, 2, -2).unwrap();
        assert!(tg.is_cycle(12).unwrap());
        let tf = twist_morphism(&f, 1, 1).unwrap();
        assert!(tf.is_cycle(0).unwrap());
    }
}
