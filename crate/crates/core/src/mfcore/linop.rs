//! Linear operators between polynomial modules.
//!
//! A morphism between objects with internal variables is linear over the
//! external variables only, so its matrix entries are operators rather than
//! polynomials: multiplication, substitution, residues and their sums,
//! composites and tensor products.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{tensor_renamings, MfError};
use crate::cyclofield::CycNum;
use crate::polyring::{MPoly, Mono, Var};

#[derive(Clone)]
pub struct LinOp(Arc<Kind>);

#[derive(Clone)]
enum Kind {
    Zero,
    Mul(MPoly),
    Subst(Vec<(Var, MPoly)>),
    /// `f ↦ Σ_{m≥0} right^{dm} · [var^{d(m+1)}](kernel · f)`
    Residue { var: Var, right: Var, kernel: MPoly, period: u32 },
    DivBy(MPoly),
    /// Applied first to last.
    Chain(Vec<LinOp>),
    Sum(Vec<LinOp>),
    Tensor(TensorOp),
}

#[derive(Clone)]
struct TensorOp {
    f: LinOp,
    g: LinOp,
    m_src: usize,
    m_tgt: usize,
    n_tgt: usize,
}

impl fmt::Debug for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Zero => write!(f, "0"),
            Kind::Mul(p) => write!(f, "mul[{p:?}]"),
            Kind::Subst(m) => {
                write!(f, "subst[")?;
                for (v, p) in m {
                    write!(f, "{}->{:?}; ", v.name(), p)?;
                }
                write!(f, "]")
            }
            Kind::Residue { var, .. } => write!(f, "residue[{}]", var.name()),
            Kind::DivBy(p) => write!(f, "div[{p:?}]"),
            Kind::Chain(v) => write!(f, "chain{v:?}"),
            Kind::Sum(v) => write!(f, "sum{v:?}"),
            Kind::Tensor(t) => write!(f, "({:?} ⊗ {:?})", t.f, t.g),
        }
    }
}

impl LinOp {
    fn new(k: Kind) -> LinOp {
        LinOp(Arc::new(k))
    }

    pub fn zero() -> LinOp {
        Self::new(Kind::Zero)
    }

    pub fn identity(d: u32) -> LinOp {
        Self::mul(MPoly::one(d))
    }

    pub fn mul(p: MPoly) -> LinOp {
        if p.is_zero() {
            Self::zero()
        } else {
            Self::new(Kind::Mul(p))
        }
    }

    pub fn scalar(c: CycNum) -> LinOp {
        Self::mul(MPoly::constant(c))
    }

    pub fn subst(map: Vec<(Var, MPoly)>) -> LinOp {
        if map.is_empty() {
            return Self::new(Kind::Chain(Vec::new()));
        }
        Self::new(Kind::Subst(map))
    }

    pub fn rename(d: u32, map: &[(Var, Var)]) -> LinOp {
        let m: Vec<(Var, MPoly)> = map.iter().filter(|(a, b)| a != b).map(|(a, b)| (*a, MPoly::var(d, *b))).collect();
        if m.is_empty() {
            Self::identity(d)
        } else {
            Self::subst(m)
        }
    }

    pub fn residue(var: Var, right: Var, kernel: MPoly, period: u32) -> LinOp {
        Self::new(Kind::Residue { var, right, kernel, period })
    }

    pub fn div_by(p: MPoly) -> LinOp {
        Self::new(Kind::DivBy(p))
    }

    pub fn is_zero(&self) -> bool {
        matches!(&*self.0, Kind::Zero)
    }

    pub fn as_mul(&self) -> Option<&MPoly> {
        match &*self.0 {
            Kind::Mul(p) => Some(p),
            _ => None,
        }
    }

    fn is_identity(&self) -> bool {
        match &*self.0 {
            Kind::Mul(p) => p.as_constant().is_some_and(|c| c.is_one()),
            Kind::Chain(v) => v.is_empty(),
            _ => false,
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &LinOp) -> LinOp {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_mul(), other.as_mul()) {
            return Self::mul(a * b);
        }
        let mut v = Vec::new();
        for op in [other, self] {
            match &*op.0 {
                Kind::Chain(inner) => v.extend(inner.iter().cloned()),
                _ => v.push(op.clone()),
            }
        }
        Self::new(Kind::Chain(v))
    }

    pub fn plus(&self, other: &LinOp) -> LinOp {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_mul(), other.as_mul()) {
            return Self::mul(a + b);
        }
        let mut v = Vec::new();
        for op in [self, other] {
            match &*op.0 {
                Kind::Sum(inner) => v.extend(inner.iter().cloned()),
                _ => v.push(op.clone()),
            }
        }
        Self::new(Kind::Sum(v))
    }

    pub fn scaled(&self, c: &CycNum) -> LinOp {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Self::scalar(c.clone()).after(self)
    }

    /// `f ⊗ g` acting on the block `M_i ⊗ N_j`, where `f` acts on `M` and `g`
    /// on `N` in their own variable names. The counts are the internal
    /// variables of the source `M` and of the targets `M'`, `N'`.
    pub fn tensor(f: &LinOp, g: &LinOp, m_src: usize, m_tgt: usize, n_tgt: usize) -> LinOp {
        if f.is_zero() || g.is_zero() {
            return Self::zero();
        }
        Self::new(Kind::Tensor(TensorOp { f: f.clone(), g: g.clone(), m_src, m_tgt, n_tgt }))
    }

    pub fn apply(&self, p: &MPoly) -> Result<MPoly, MfError> {
        if p.is_zero() {
            return Ok(p.clone());
        }
        match &*self.0 {
            Kind::Zero => Ok(MPoly::zero(p.d())),
            Kind::Mul(q) => Ok(q * p),
            Kind::Subst(m) => Ok(p.substitute(m)),
            Kind::Residue { var, right, kernel, period } => {
                let g = kernel * p;
                let d = p.d();
                let mut out = MPoly::zero(d);
                let top = g.degree_in(*var).unwrap_or(0);
                let mut m = 0u32;
                while period * (m + 1) <= top {
                    let c = g.coeff_of(*var, period * (m + 1));
                    if !c.is_zero() {
                        out = &out + &(&c * &MPoly::var(d, *right).pow(period * m));
                    }
                    m += 1;
                }
                Ok(out)
            }
            Kind::DivBy(q) => Ok(p.exact_div(q)?),
            Kind::Chain(v) => {
                let mut cur = p.clone();
                for op in v {
                    cur = op.apply(&cur)?;
                }
                Ok(cur)
            }
            Kind::Sum(v) => {
                let mut acc = MPoly::zero(p.d());
                for op in v {
                    acc = &acc + &op.apply(p)?;
                }
                Ok(acc)
            }
            Kind::Tensor(t) => t.apply(p),
        }
    }
}

impl TensorOp {
    fn apply(&self, p: &MPoly) -> Result<MPoly, MfError> {
        let d = p.d();
        let mid = Var::internal(self.m_src);
        // split each monomial into the part living on M (with the shared
        // variable renamed to M's right variable) and the part living on N
        let mut groups: BTreeMap<Mono, MPoly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut left = Mono::ONE;
            let mut right = Mono::ONE;
            for (v, e) in m.vars() {
                if v == Var::X {
                    left = left.mul(Mono::var(Var::X, e));
                } else if v == Var::Y {
                    right = right.mul(Mono::var(Var::Y, e));
                } else {
                    let k = v.internal_index().unwrap();
                    if k < self.m_src {
                        left = left.mul(Mono::var(v, e));
                    } else if v == mid {
                        left = left.mul(Mono::var(Var::Y, e));
                    } else {
                        right = right.mul(Mono::var(Var::internal(k - self.m_src - 1), e));
                    }
                }
            }
            groups.entry(left).or_insert_with(|| MPoly::zero(d)).add_term(right, c);
        }
        let (lr, rr) = tensor_renamings(self.m_tgt, self.n_tgt);
        let mut out = MPoly::zero(d);
        for (lm, rp) in groups {
            let fl = self.f.apply(&MPoly::term(CycNum::one(d), lm))?;
            if fl.is_zero() {
                continue;
            }
            let gr = self.g.apply(&rp)?;
            if gr.is_zero() {
                continue;
            }
            out = &out + &(&fl.rename(&lr) * &gr.rename(&rr));
        }
        Ok(out)
    }
}
