//! Temperley–Lieb diagrams, Jones–Wenzl projectors, and the functor into
//! graded matrix factorisations sending one strand to `T̂`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclofield::{quantum_int, CycError, CycNum, Root};
use crate::graded::{certify_product, g_pair, graded_tensor, hat_label, hat_p, GradedLabel, GradedMF};
use crate::invariants::{homotopy_solve, DegreeBound};
use crate::linalg::SparseSystem;
use crate::mfcore::{
    lambda, lambda_inv, n_map, reassociate, rho, rho_inv, tensor_morphisms, u_map, unit_mf, MFMorphism, MatrixBifact,
    MfError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TlError {
    #[error("strand counts do not match: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("Jones–Wenzl projector p_{0} needs a vanishing quantum integer")]
    UndefinedProjector(usize),
    #[error("not a planar pairing")]
    NotPlanar,
    #[error(transparent)]
    Field(#[from] CycError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

/// A planar pairing of `n_bottom + n_top` boundary points. Bottom points
/// are `0..n_bottom`, top points `n_bottom..n_bottom + n_top`, both read
/// left to right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    pub n_bottom: usize,
    pub n_top: usize,
    partner: Vec<usize>,
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} ", self.n_bottom, self.n_top)?;
        // nested parentheses along the boundary circle
        for p in self.circle_order() {
            let q = self.partner[p];
            let (pp, qq) = (self.circle_pos(p), self.circle_pos(q));
            write!(f, "{}", if pp < qq { '(' } else { ')' })?;
        }
        Ok(())
    }
}

impl Diagram {
    pub fn new(n_bottom: usize, n_top: usize, partner: Vec<usize>) -> Result<Diagram, TlError> {
        let n = n_bottom + n_top;
        if partner.len() != n || (0..n).any(|p| partner[p] >= n || partner[p] == p || partner[partner[p]] != p) {
            return Err(TlError::NotPlanar);
        }
        let d = Diagram { n_bottom, n_top, partner };
        if !d.is_planar() {
            return Err(TlError::NotPlanar);
        }
        Ok(d)
    }

    fn circle_pos(&self, p: usize) -> usize {
        if p < self.n_bottom {
            p
        } else {
            self.n_bottom + (self.n_bottom + self.n_top - 1 - p)
        }
    }

    fn circle_order(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n_bottom + self.n_top).collect();
        v.sort_by_key(|&p| self.circle_pos(p));
        v
    }

    fn is_planar(&self) -> bool {
        let n = self.n_bottom + self.n_top;
        let arcs: Vec<(usize, usize)> = (0..n)
            .filter(|&p| p < self.partner[p])
            .map(|p| {
                let (a, b) = (self.circle_pos(p), self.circle_pos(self.partner[p]));
                (a.min(b), a.max(b))
            })
            .collect();
        arcs.iter().all(|&(a, b)| arcs.iter().all(|&(c, e)| !(a < c && c < b && b < e)))
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    pub fn identity(n: usize) -> Diagram {
        Diagram { n_bottom: n, n_top: n, partner: (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect() }
    }

    /// `e_i` on `n` strands, `1 ≤ i < n`.
    pub fn e(n: usize, i: usize) -> Diagram {
        assert!(1 <= i && i < n);
        let mut d = Self::identity(n);
        let (l, r) = (i - 1, i);
        d.partner[l] = r;
        d.partner[r] = l;
        d.partner[n + l] = n + r;
        d.partner[n + r] = n + l;
        d
    }

    pub fn cap() -> Diagram {
        Diagram { n_bottom: 2, n_top: 0, partner: vec![1, 0] }
    }

    pub fn cup() -> Diagram {
        Diagram { n_bottom: 0, n_top: 2, partner: vec![1, 0] }
    }

    /// Number of strands joining bottom to top.
    pub fn through_strands(&self) -> usize {
        (0..self.n_bottom).filter(|&p| self.partner[p] >= self.n_bottom).count()
    }

    /// `self ∘ g` and the number of closed loops formed.
    pub fn compose(&self, g: &Diagram) -> Result<(Diagram, usize), TlError> {
        let f = self;
        if g.n_top != f.n_bottom {
            return Err(TlError::StrandMismatch(g.n_top, f.n_bottom));
        }
        let (a, b, c) = (g.n_bottom, g.n_top, f.n_top);
        let mut seen = vec![false; b];
        let walk = |mut m: usize, mut into_f: bool, seen: &mut Vec<bool>| -> usize {
            loop {
                seen[m] = true;
                if into_f {
                    let r = f.partner[m];
                    if r >= b {
                        return a + r - b;
                    }
                    m = r;
                } else {
                    let r = g.partner[a + m];
                    if r < a {
                        return r;
                    }
                    m = r - a;
                }
                seen[m] = true;
                into_f = !into_f;
            }
        };
        let mut partner = vec![usize::MAX; a + c];
        for i in 0..a {
            let q = g.partner[i];
            partner[i] = if q < a { q } else { walk(q - a, true, &mut seen) };
        }
        for j in 0..c {
            let r = f.partner[b + j];
            partner[a + j] = if r >= b { a + r - b } else { walk(r, false, &mut seen) };
        }
        let mut loops = 0;
        for m in 0..b {
            if seen[m] {
                continue;
            }
            loops += 1;
            let mut cur = m;
            loop {
                seen[cur] = true;
                let r = f.partner[cur];
                seen[r] = true;
                let nxt = g.partner[a + r] - a;
                if nxt == m {
                    break;
                }
                cur = nxt;
            }
        }
        Ok((Diagram { n_bottom: a, n_top: c, partner }, loops))
    }

    /// Side-by-side juxtaposition.
    pub fn tensor(&self, g: &Diagram) -> Diagram {
        let nb = self.n_bottom + g.n_bottom;
        let nt = self.n_top + g.n_top;
        let map_f = |p: usize| if p < self.n_bottom { p } else { nb + p - self.n_bottom };
        let map_g = |p: usize| if p < g.n_bottom { self.n_bottom + p } else { nb + self.n_top + p - g.n_bottom };
        let mut partner = vec![0; nb + nt];
        for p in 0..self.partner.len() {
            partner[map_f(p)] = map_f(self.partner[p]);
        }
        for p in 0..g.partner.len() {
            partner[map_g(p)] = map_g(g.partner[p]);
        }
        Diagram { n_bottom: nb, n_top: nt, partner }
    }

    /// Number of loops in the Markov closure.
    pub fn closure_loops(&self) -> Result<usize, TlError> {
        let n = self.n_bottom;
        if n != self.n_top {
            return Err(TlError::StrandMismatch(n, self.n_top));
        }
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            loop {
                seen[p] = true;
                let q = self.partner[p];
                seen[q] = true;
                p = if q < n { q + n } else { q - n };
                if p == start {
                    break;
                }
            }
        }
        Ok(loops)
    }
}

fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in (1..points.len()).step_by(2) {
        for inner in matchings(&points[1..j]) {
            for outer in matchings(&points[j + 1..]) {
                let mut m = vec![(points[0], points[j])];
                m.extend(inner.iter().copied());
                m.extend(outer.iter().copied());
                out.push(m);
            }
        }
    }
    out
}

/// All planar diagrams `n_bottom → n_top`.
pub fn basis(n_bottom: usize, n_top: usize) -> Vec<Diagram> {
    let n = n_bottom + n_top;
    if n % 2 == 1 {
        return Vec::new();
    }
    // circle order: bottom left to right, then top right to left
    let circle: Vec<usize> = (0..n_bottom).chain((n_bottom..n).rev()).collect();
    let mut out: Vec<Diagram> = matchings(&circle)
        .into_iter()
        .map(|m| {
            let mut partner = vec![0; n];
            for (p, q) in m {
                partner[p] = q;
                partner[q] = p;
            }
            Diagram { n_bottom, n_top, partner }
        })
        .collect();
    out.sort();
    out
}

/// Dimension of `End(n)`: the Catalan number `C_n`.
pub fn tl_dim(n: usize) -> usize {
    basis(n, n).len()
}

/// A linear combination of diagrams with the same boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLMorphism {
    pub src: usize,
    pub tgt: usize,
    d: u32,
    terms: BTreeMap<Diagram, CycNum>,
}

impl TLMorphism {
    pub fn zero(d: u32, src: usize, tgt: usize) -> TLMorphism {
        TLMorphism { src, tgt, d, terms: BTreeMap::new() }
    }

    pub fn diagram(d: u32, g: Diagram) -> TLMorphism {
        let mut m = Self::zero(d, g.n_bottom, g.n_top);
        m.terms.insert(g, CycNum::one(d));
        m
    }

    pub fn identity(d: u32, n: usize) -> TLMorphism {
        Self::diagram(d, Diagram::identity(n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &CycNum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, g: Diagram, c: &CycNum) {
        let e = self.terms.entry(g).or_insert_with(|| CycNum::zero(self.d));
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &TLMorphism) -> Result<TLMorphism, TlError> {
        if (self.src, self.tgt) != (o.src, o.tgt) {
            return Err(TlError::StrandMismatch(self.src, o.src));
        }
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(g.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &CycNum) -> TLMorphism {
        let mut out = Self::zero(self.d, self.src, self.tgt);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), &(c * s));
        }
        out
    }

    pub fn sub(&self, o: &TLMorphism) -> Result<TLMorphism, TlError> {
        self.add(&o.scale(&CycNum::from_int(self.d, -1)))
    }

    pub fn tensor(&self, o: &TLMorphism) -> TLMorphism {
        let mut out = Self::zero(self.d, self.src + o.src, self.tgt + o.tgt);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.tensor(b), &(x * y));
            }
        }
        out
    }
}

/// The diagram category at the loop value `κ` of a root.
#[derive(Clone, Debug)]
pub struct TL {
    root: Root,
    kappa: CycNum,
}

impl TL {
    pub fn new(root: Root) -> TL {
        TL { kappa: root.kappa(), root }
    }

    pub fn root(&self) -> Root {
        self.root
    }

    pub fn kappa(&self) -> &CycNum {
        &self.kappa
    }

    fn d(&self) -> u32 {
        self.root.d()
    }

    pub fn identity(&self, n: usize) -> TLMorphism {
        TLMorphism::identity(self.d(), n)
    }

    pub fn e(&self, n: usize, i: usize) -> TLMorphism {
        TLMorphism::diagram(self.d(), Diagram::e(n, i))
    }

    /// `f ∘ g`, each closed loop contributing `κ`.
    pub fn compose(&self, f: &TLMorphism, g: &TLMorphism) -> Result<TLMorphism, TlError> {
        if g.tgt != f.src {
            return Err(TlError::StrandMismatch(g.tgt, f.src));
        }
        let mut out = TLMorphism::zero(self.d(), g.src, f.tgt);
        let mut powers = vec![CycNum::one(self.d())];
        for (a, x) in &f.terms {
            for (b, y) in &g.terms {
                let (c, loops) = a.compose(b)?;
                while powers.len() <= loops {
                    let next = powers.last().unwrap() * &self.kappa;
                    powers.push(next);
                }
                out.add_term(c, &(&(x * y) * &powers[loops]));
            }
        }
        Ok(out)
    }

    /// Markov trace.
    pub fn trace(&self, f: &TLMorphism) -> Result<CycNum, TlError> {
        if f.src != f.tgt {
            return Err(TlError::StrandMismatch(f.src, f.tgt));
        }
        let mut acc = CycNum::zero(self.d());
        for (g, c) in &f.terms {
            acc += &(c * &self.kappa.pow(g.closure_loops()? as i64)?);
        }
        Ok(acc)
    }

    /// Jones–Wenzl projector `p_n`:
    /// `p_{k+1} = p_k ⊗ 1 - ([k]/[k+1]) (p_k ⊗ 1) e_k (p_k ⊗ 1)`.
    pub fn jw(&self, n: usize) -> Result<TLMorphism, TlError> {
        let q = self.root.q();
        let mut p = self.identity(n.min(1));
        for k in 1..n {
            let qk1 = quantum_int(k as i64 + 1, &q)?;
            if qk1.is_zero() {
                return Err(TlError::UndefinedProjector(n));
            }
            let c = &quantum_int(k as i64, &q)? * &qk1.inv()?;
            let pk = p.tensor(&self.identity(1));
            let mid = self.compose(&self.compose(&pk, &self.e(k + 1, k))?, &pk)?;
            p = pk.sub(&mid.scale(&c))?;
        }
        Ok(p)
    }

    /// Dimension of the span of `{a ∘ D ∘ a : D ∈ basis(n, n)}`, the
    /// endomorphism algebra of the image of an idempotent `a`.
    pub fn corner_dim(&self, a: &TLMorphism) -> Result<usize, TlError> {
        let n = a.src;
        let index: BTreeMap<Diagram, usize> = basis(n, n).into_iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut sys = SparseSystem::new(self.d(), index.len());
        for g in index.keys() {
            let x = self.compose(&self.compose(a, &TLMorphism::diagram(self.d(), g.clone()))?, a)?;
            sys.push(x.terms.iter().map(|(h, c)| (index[h], c.clone())).collect(), CycNum::zero(self.d()));
        }
        Ok(sys.rank())
    }
}

/// `T̂^{⊗k}`, bracketed from the left; `T̂^{⊗0} = I`.
pub fn t_power(root: &Root, k: usize) -> Result<GradedMF, MfError> {
    let h = (root.d() as i64 - 1) / 2;
    let t = hat_p(root, &[h, h + 1]);
    if k == 0 {
        return Ok(hat_p(root, &[0]));
    }
    let mut acc = t.clone();
    for _ in 1..k {
        acc = graded_tensor(&acc, &t)?;
    }
    Ok(acc)
}

/// Builds the functor on diagrams, caching the objects `T̂^{⊗k}`.
pub struct FunctorF {
    root: Root,
    powers: Vec<GradedMF>,
}

impl FunctorF {
    pub fn new(root: Root) -> Result<FunctorF, TlError> {
        if root.d() % 2 == 0 {
            return Err(CycError::EvenModulus(root.d()).into());
        }
        Ok(FunctorF { root, powers: Vec::new() })
    }

    pub fn object(&mut self, k: usize) -> Result<GradedMF, MfError> {
        while self.powers.len() <= k {
            let next = t_power(&self.root, self.powers.len())?;
            self.powers.push(next);
        }
        Ok(self.powers[k].clone())
    }

    fn obj(&mut self, k: usize) -> Result<Arc<MatrixBifact>, MfError> {
        Ok(self.object(k)?.mf)
    }

    fn id(&mut self, k: usize) -> Result<MFMorphism, MfError> {
        Ok(MFMorphism::identity(self.obj(k)?))
    }

    /// `1_{i} ⊗ u ⊗ 1_{k-i-2} : T^{⊗k} → T^{⊗(k-2)}`.
    pub fn cap_layer(&mut self, k: usize, i: usize) -> Result<MFMorphism, MfError> {
        let rest = k - i - 2;
        let u = u_map(&self.root)?;
        let core = if i == 0 { u } else {
            let x = self.id(i)?;
            let f = tensor_morphisms(&x, &u)?;
            rho(&self.obj(i)?)?.compose(&f)?
        };
        // core: X ⊗ (T⊗T) → X   (or T⊗T → I)
        let full = if rest == 0 {
            core
        } else {
            let r = self.id(rest)?;
            let f = tensor_morphisms(&core, &r)?;
            if i == 0 {
                lambda(&self.obj(rest)?)?.compose(&f)?
            } else {
                f
            }
        };
        let src = self.obj(k)?;
        let tgt = self.obj(k - 2)?;
        let into = reassociate(src, full.src.clone())?;
        let out = reassociate(full.tgt.clone(), tgt)?;
        out.compose(&full)?.compose(&into)
    }

    /// `1_{i} ⊗ n ⊗ 1_{k-i} : T^{⊗k} → T^{⊗(k+2)}`.
    pub fn cup_layer(&mut self, k: usize, i: usize) -> Result<MFMorphism, MfError> {
        let rest = k - i;
        let n = n_map(&self.root)?;
        let core = if i == 0 { n } else {
            let x = self.id(i)?;
            tensor_morphisms(&x, &n)?.compose(&rho_inv(&self.obj(i)?)?)?
        };
        // core: X → X ⊗ (T⊗T)   (or I → T⊗T)
        let full = if rest == 0 {
            core
        } else {
            let r = self.id(rest)?;
            let f = tensor_morphisms(&core, &r)?;
            if i == 0 {
                f.compose(&lambda_inv(&self.obj(rest)?)?)?
            } else {
                f
            }
        };
        let src = self.obj(k)?;
        let tgt = self.obj(k + 2)?;
        let into = reassociate(src, full.src.clone())?;
        let out = reassociate(full.tgt.clone(), tgt)?;
        out.compose(&full)?.compose(&into)
    }

    /// Image of a single diagram: caps first, then cups.
    pub fn diagram(&mut self, g: &Diagram) -> Result<MFMorphism, MfError> {
        let nb = g.n_bottom;
        let mut f = self.id(nb)?;
        // peel caps among the bottom points, innermost first
        let mut live: Vec<usize> = (0..nb).collect();
        loop {
            let pos = (0..live.len().saturating_sub(1)).find(|&j| g.partner(live[j]) == live[j + 1]);
            let Some(j) = pos else { break };
            let layer = self.cap_layer(live.len(), j)?;
            f = layer.compose(&f)?;
            live.drain(j..j + 2);
        }
        // the cups, recorded from the outside in and applied in reverse
        let mut top: Vec<usize> = (nb..nb + g.n_top).collect();
        let mut cups = Vec::new();
        loop {
            let pos = (0..top.len().saturating_sub(1)).find(|&j| g.partner(top[j]) == top[j + 1]);
            let Some(j) = pos else { break };
            cups.push((top.len() - 2, j));
            top.drain(j..j + 2);
        }
        for (k, j) in cups.into_iter().rev() {
            let layer = self.cup_layer(k, j)?;
            f = layer.compose(&f)?;
        }
        Ok(f)
    }

    pub fn morphism(&mut self, f: &TLMorphism) -> Result<MFMorphism, MfError> {
        let mut acc = MFMorphism::zero(self.obj(f.src)?, self.obj(f.tgt)?, 0);
        for (g, c) in f.terms() {
            acc = acc.add(&self.diagram(g)?.scaled(c))?;
        }
        Ok(acc)
    }
}

/// `F(f)` for a linear combination of diagrams.
pub fn evaluate_f(root: &Root, f: &TLMorphism) -> Result<MFMorphism, TlError> {
    Ok(FunctorF::new(*root)?.morphism(f)?)
}

/// Degree-0 embeddings of `P̂`'s whose sum is isomorphic to `T̂^{⊗k}`,
/// `k ≤ 3`, each certified on homology.
pub fn power_embeddings(root: &Root, k: usize) -> Result<Vec<(GradedMF, MFMorphism)>, MfError> {
    let d = root.d();
    let h = (d as i64 - 1) / 2;
    let mut fun = FunctorF::new(*root).map_err(|e| match e {
        TlError::Mf(m) => m,
        _ => MfError::Grading("even modulus".into()),
    })?;
    match k {
        0 | 1 => {
            let o = fun.object(k)?;
            Ok(vec![(o.clone(), MFMorphism::identity(o.mf))])
        }
        2 => {
            let g = g_pair(root, h, h, 1)?;
            let mut v = vec![(g.q_minus.clone(), g.minus.clone())];
            if d > 3 {
                v.push((g.q_plus.clone(), g.plus.clone()));
            }
            Ok(v)
        }
        3 => {
            let g = g_pair(root, h, h, 1)?;
            let mut parts = vec![(GradedLabel::new(d, 2 * h + 1, 0)?, g.minus.clone())];
            if d > 3 {
                parts.push((GradedLabel::new(d, 2 * h, 2)?, g.plus.clone()));
            }
            let t = fun.obj(1)?;
            let ttt = fun.obj(3)?;
            let tl = GradedLabel::new(d, h, 1)?;
            let mut out = Vec::new();
            for (q, emb) in parts {
                // T ⊗ Q → T ⊗ (T ⊗ T) → (T ⊗ T) ⊗ T
                let lift = tensor_morphisms(&MFMorphism::identity(t.clone()), &emb)?;
                let lift = reassociate(lift.tgt.clone(), ttt.clone())?.compose(&lift)?;
                if q.lambda == 0 {
                    let w = certify_product(root, tl, q)?;
                    let w_map = w.map.retarget(w.map.src.clone(), lift.src.clone())?;
                    let s = hat_label(root, w.summands[0]);
                    out.push((s, lift.compose(&w_map)?));
                } else {
                    let gq = g_pair(root, h, q.a as i64, q.lambda)?;
                    let m = gq.minus.retarget(gq.minus.src.clone(), lift.src.clone())?;
                    out.push((gq.q_minus.clone(), lift.compose(&m)?));
                    if q.lambda + 2 < d {
                        let p = gq.plus.retarget(gq.plus.src.clone(), lift.src.clone())?;
                        out.push((gq.q_plus.clone(), lift.compose(&p)?));
                    }
                }
            }
            Ok(out)
        }
        _ => Err(MfError::TooManyInternalVariables { found: k - 1, limit: 2 }),
    }
}

/// Decides `φ ≃ ψ : T̂^{⊗k} → target` for `k ≤ 3` by graded homotopy
/// search on each summand embedding; the graded bound is exhaustive.
pub fn homotopic_on_power(root: &Root, k: usize, phi: &MFMorphism, psi: &MFMorphism, target: &GradedMF) -> Result<bool, MfError> {
    for (src, e) in power_embeddings(root, k)? {
        let a = phi.compose(&e)?;
        let b = psi.compose(&e)?;
        let bound = DegreeBound::Charges { src: src.charges.clone(), tgt: target.charges.clone() };
        if homotopy_solve(&a, &b, &bound)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `λ ∘ (u ⊗ 1) ∘ α ∘ (1 ⊗ n) ∘ ρ⁻¹ : T → T`.
pub fn zigzag_left(root: &Root) -> Result<MFMorphism, MfError> {
    let t = Arc::new(crate::mfcore::t_object(root));
    let id = MFMorphism::identity(t.clone());
    let one_n = tensor_morphisms(&id, &n_map(root)?)?;
    let u_one = tensor_morphisms(&u_map(root)?, &id)?;
    let assoc = reassociate(one_n.tgt.clone(), u_one.src.clone())?;
    lambda(&t)?.compose(&u_one)?.compose(&assoc)?.compose(&one_n)?.compose(&rho_inv(&t)?)
}

/// `ρ ∘ (1 ⊗ u) ∘ α ∘ (n ⊗ 1) ∘ λ⁻¹ : T → T`.
pub fn zigzag_right(root: &Root) -> Result<MFMorphism, MfError> {
    let t = Arc::new(crate::mfcore::t_object(root));
    let id = MFMorphism::identity(t.clone());
    let n_one = tensor_morphisms(&n_map(root)?, &id)?;
    let one_u = tensor_morphisms(&id, &u_map(root)?)?;
    let assoc = reassociate(n_one.tgt.clone(), one_u.src.clone())?;
    rho(&t)?.compose(&one_u)?.compose(&assoc)?.compose(&n_one)?.compose(&lambda_inv(&t)?)
}

/// Outcome of a zig-zag check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagResult {
    /// The composite equals the identity on the nose.
    pub strict: bool,
    /// A graded homotopy to the identity exists.
    pub homotopic: bool,
}

pub fn check_zigzag(root: &Root, z: &MFMorphism) -> Result<ZigzagResult, MfError> {
    let id = MFMorphism::identity(z.src.clone());
    let z = z.materialized()?;
    let strict = z.equals(&id, 0)?;
    let t = t_power(root, 1)?;
    let bound = DegreeBound::Charges { src: t.charges.clone(), tgt: t.charges.clone() };
    let homotopic = homotopy_solve(&z, &id, &bound)?.is_some();
    Ok(ZigzagResult { strict, homotopic })
}

/// `dim End_TL(T_1 ⊗ T_{d-2})` from the corner `(1 ⊗ p_{d-2}) TL_{d-1} (1 ⊗ p_{d-2})`.
pub fn tl_end_dim_t_times_top(tl: &TL) -> Result<usize, TlError> {
    let d = tl.root().d() as usize;
    let a = tl.identity(1).tensor(&tl.jw(d - 2)?);
    tl.corner_dim(&a)
}

/// `dim End(T̂ ⊗ P̂_{a:d-2})` on the graded side, via the decomposition
/// `T̂ ⊗ P̂_{a:d-2} ≅ P̂_{a+h+1:d-3}` certified on homology.
pub fn mf_end_dim_t_times_top(root: &Root, a: i64) -> Result<(usize, bool), MfError> {
    let d = root.d();
    let h = (d as i64 - 1) / 2;
    let t = GradedLabel::new(d, h, 1)?;
    let top = GradedLabel::new(d, a, d - 2)?;
    let w = certify_product(root, t, top)?;
    let mut dim = 0;
    for x in &w.summands {
        for y in &w.summands {
            dim += crate::graded::graded_hom_dim(root, &x.set(), &y.set())?;
        }
    }
    Ok((dim, w.iso))
}

/// `unit_mf` as a graded object.
pub fn graded_unit(root: &Root) -> GradedMF {
    let g = hat_p(root, &[0]);
    debug_assert_eq!(*g.mf, unit_mf(root));
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tl(d: u32) -> TL {
        TL::new(Root::standard(d).unwrap())
    }

    #[test]
    fn catalan_counts() {
        let c: Vec<usize> = (0..6).map(tl_dim).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(basis(3, 1).len(), 2);
        assert!(basis(2, 1).is_empty());
        for g in basis(3, 3) {
            assert!(g.is_planar());
        }
    }

    #[test]
    fn crossing_rejected() {
        assert!(matches!(Diagram::new(2, 2, vec![3, 2, 1, 0]), Err(TlError::NotPlanar)));
        assert!(Diagram::new(2, 2, vec![2, 3, 0, 1]).is_ok());
    }

    #[test]
    fn relations() {
        let t = tl(5);
        let k = t.kappa().clone();
        for n in 2..=5 {
            for i in 1..n {
                let e = t.e(n, i);
                assert_eq!(t.compose(&e, &e).unwrap(), e.scale(&k));
                if i + 1 < n {
                    let f = t.e(n, i + 1);
                    assert_eq!(t.compose(&t.compose(&e, &f).unwrap(), &e).unwrap(), e);
                    assert_eq!(t.compose(&t.compose(&f, &e).unwrap(), &f).unwrap(), f);
                }
                for j in i + 2..n {
                    let f = t.e(n, j);
                    assert_eq!(t.compose(&e, &f).unwrap(), t.compose(&f, &e).unwrap());
                }
            }
        }
        let id = t.identity(3);
        assert_eq!(t.compose(&id, &t.e(3, 1)).unwrap(), t.e(3, 1));
        assert_eq!(t.e(2, 1).tensor(&t.identity(1)), t.e(3, 1));
        assert_eq!(t.identity(2).tensor(&t.identity(3)), t.identity(5));
    }

    #[test]
    fn zigzag_in_diagrams() {
        let t = tl(3);
        let cup = TLMorphism::diagram(3, Diagram::cup());
        let cap = TLMorphism::diagram(3, Diagram::cap());
        let one = t.identity(1);
        let z = t.compose(&cap.tensor(&one), &one.tensor(&cup)).unwrap();
        assert_eq!(z, one);
        let loop_ = t.compose(&cap, &cup).unwrap();
        assert_eq!(loop_.terms().next().unwrap().1, t.kappa());
    }

    #[test]
    fn jones_wenzl() {
        for d in [3u32, 5] {
            let t = tl(d);
            let q = t.root().q();
            assert_eq!(t.jw(1).unwrap(), t.identity(1));
            let p2 = t.identity(2).sub(&t.e(2, 1).scale(&t.kappa().inv().unwrap())).unwrap();
            assert_eq!(t.jw(2).unwrap(), p2);
            for n in 1..d as usize {
                let p = t.jw(n).unwrap();
                assert_eq!(t.compose(&p, &p).unwrap(), p, "d={d} n={n}");
                for i in 1..n {
                    assert!(t.compose(&t.e(n, i), &p).unwrap().is_zero());
                }
                assert_eq!(t.trace(&p).unwrap(), quantum_int(n as i64 + 1, &q).unwrap());
            }
            assert_eq!(t.trace(&t.identity(3)).unwrap(), t.kappa().pow(3).unwrap());
            assert!(matches!(t.jw(d as usize + 1), Err(TlError::UndefinedProjector(_))));
        }
    }

    #[test]
    fn functor_on_generators() {
        let rt = Root::standard(3).unwrap();
        let mut f = FunctorF::new(rt).unwrap();
        let cap = f.diagram(&Diagram::cap()).unwrap();
        let u = u_map(&rt).unwrap();
        assert!(cap.equals(&u, 8).unwrap());
        let cup = f.diagram(&Diagram::cup()).unwrap();
        assert!(cup.equals(&n_map(&rt).unwrap(), 0).unwrap());
        for g in basis(3, 1).iter().chain(basis(1, 3).iter()).chain(basis(2, 2).iter()) {
            assert!(f.diagram(g).unwrap().is_cycle(4).unwrap(), "{g:?}");
        }
    }

    #[test]
    fn zigzags_hold() {
        for d in [3u32, 5] {
            let rt = Root::standard(d).unwrap();
            for z in [zigzag_left(&rt).unwrap(), zigzag_right(&rt).unwrap()] {
                let r = check_zigzag(&rt, &z).unwrap();
                assert!(r.homotopic, "d={d}");
            }
        }
    }

    #[test]
    fn e1_squares_to_kappa_e1_under_f() {
        let rt = Root::standard(3).unwrap();
        let t = TL::new(rt);
        let mut f = FunctorF::new(rt).unwrap();
        let fe = f.morphism(&t.e(2, 1)).unwrap();
        let sq = fe.compose(&fe).unwrap();
        let target = f.object(2).unwrap();
        assert!(homotopic_on_power(&rt, 2, &sq, &fe.scaled(t.kappa()), &target).unwrap());
        let zero = MFMorphism::zero(fe.src.clone(), fe.tgt.clone(), 0);
        assert!(!homotopic_on_power(&rt, 2, &fe, &zero, &target).unwrap());
        let p2 = f.morphism(&t.jw(2).unwrap()).unwrap();
        let zero = MFMorphism::zero(p2.src.clone(), p2.tgt.clone(), 0);
        assert!(homotopic_on_power(&rt, 2, &p2, &zero, &target).unwrap());
    }

    #[test]
    fn e1_relations_under_f_d5() {
        let rt = Root::standard(5).unwrap();
        let t = TL::new(rt);
        let mut f = FunctorF::new(rt).unwrap();
        let fe = f.morphism(&t.e(2, 1)).unwrap();
        let sq = fe.compose(&fe).unwrap();
        let target = f.object(2).unwrap();
        assert!(homotopic_on_power(&rt, 2, &sq, &fe.scaled(t.kappa()), &target).unwrap());
        assert!(!homotopic_on_power(&rt, 2, &sq, &fe, &target).unwrap());
        // e1 e2 e1 = e1 on three strands
        let e1 = f.morphism(&t.e(3, 1)).unwrap();
        let e2 = f.morphism(&t.e(3, 2)).unwrap();
        let w = e1.compose(&e2).unwrap().compose(&e1).unwrap();
        let target3 = f.object(3).unwrap();
        assert!(homotopic_on_power(&rt, 3, &w, &e1, &target3).unwrap());
    }

    #[test]
    fn end_dimension_certificate_d5() {
        let rt = Root::standard(5).unwrap();
        assert_eq!(tl_end_dim_t_times_top(&TL::new(rt)).unwrap(), 2);
        let (dim, iso) = mf_end_dim_t_times_top(&rt, 0).unwrap();
        assert!(iso);
        assert_eq!(dim, 1);
    }
}
