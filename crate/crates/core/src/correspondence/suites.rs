//! Named verification cases grouped into suites.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{
    chi_is_perm, duality_maps_equivariant, galois_kappa, index_conventions, mu_associativity, test_bound,
    verify_equivalence, Agreement, EquivStructure,
};
use crate::cftside::{
    cft_fusion_ring, check_factorisation, h_weight, induce_twist_agrees, is_local, quantum_dim, quantum_dims_multiplicative,
    twist_additive, SimpleE,
};
use crate::cyclofield::{quantum_int, Root};
use crate::graded::{
    all_labels, certify_g_pair, certify_product, fusion_by_formula, graded_hom_dim, mf_fusion_ring,
    IndexConvention,
};
use crate::invariants::is_homotopy_iso;
use crate::mfcore::{
    coev_rank1, ev_rank1, lambda, n_map, perm_consecutive, perm_dual_iso, rho, t_object, tensor_mf, twist_mf, u_map,
    unit_mf, verify_factorisation, MFMorphism,
};
use crate::temperleylieb::{
    check_zigzag, homotopic_on_power, mf_end_dim_t_times_top, tl_dim, tl_end_dim_t_times_top, zigzag_left, zigzag_right,
    FunctorF, TL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Core,
    Graded,
    Tl,
    Cft,
    Equivariance,
    Equivalence,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Core, Suite::Graded, Suite::Tl, Suite::Cft, Suite::Equivariance, Suite::Equivalence];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Graded => "graded",
            Suite::Tl => "tl",
            Suite::Cft => "cft",
            Suite::Equivariance => "equivariance",
            Suite::Equivalence => "equivalence",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub reference: String,
    pub status: Status,
    pub detail: String,
}

/// Parameters shared by all cases.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub root: Root,
    /// Overrides the internal-degree bound for equality tests.
    pub degree_bound: Option<u32>,
}

impl Ctx {
    pub fn new(root: Root) -> Ctx {
        Ctx { root, degree_bound: None }
    }

    pub fn bound(&self) -> u32 {
        self.degree_bound.unwrap_or_else(|| test_bound(&self.root))
    }

    fn d(&self) -> u32 {
        self.root.d()
    }
}

type Outcome = Result<(Status, String), String>;

pub struct Case {
    pub suite: Suite,
    pub name: &'static str,
    pub reference: &'static str,
    run: fn(&Ctx) -> Outcome,
}

impl Case {
    pub fn execute(&self, ctx: &Ctx) -> CheckResult {
        let (status, detail) = match (self.run)(ctx) {
            Ok(x) => x,
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        CheckResult { name: self.name.to_string(), reference: self.reference.to_string(), status, detail }
    }
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    Ok((if ok { Status::Pass } else { Status::Fail }, detail.into()))
}

fn skip(detail: impl Into<String>) -> Outcome {
    Ok((Status::Skipped, detail.into()))
}

fn e<E: fmt::Display>(x: E) -> String {
    x.to_string()
}

macro_rules! case {
    ($suite:ident, $name:literal, $reference:literal, $f:ident) => {
        Case { suite: Suite::$suite, name: $name, reference: $reference, run: $f }
    };
}

/// Every case of the selected suites, in a fixed order.
pub fn cases(suites: &[Suite]) -> Vec<Case> {
    let all = vec![
        case!(Core, "core.factorisation", "factorisation condition", core_factorisation),
        case!(Core, "core.unit_counit", "u∘n = κ", core_unit_counit),
        case!(Core, "core.cycles", "structure maps are cycles", core_cycles),
        case!(Core, "core.dual_iso", "P_{-S} ≅ (P_S)⁺", core_dual_iso),
        case!(Core, "core.zigzag", "zig-zag identities", core_zigzag),
        case!(Graded, "graded.embeddings", "summand embeddings g±", graded_embeddings),
        case!(Graded, "graded.hom_rigidity", "graded Hom between simples", graded_hom_rigidity),
        case!(Graded, "graded.fusion_ring", "fusion rule of graded permutation factorisations", graded_fusion_ring),
        case!(Graded, "graded.witnesses", "decomposition witnesses for λ ≤ 1", graded_witnesses),
        case!(Tl, "tl.relations", "Temperley–Lieb relations", tl_relations),
        case!(Tl, "tl.jones_wenzl", "Jones–Wenzl projectors", tl_jones_wenzl),
        case!(Tl, "tl.functor_relations", "relations under F", tl_functor_relations),
        case!(Tl, "tl.jw_vanishing", "F(p_{d-1}) ≃ 0", tl_jw_vanishing),
        case!(Tl, "tl.end_certificate", "End(T ⊗ P_{a:d-2})", tl_end_certificate),
        case!(Cft, "cft.weights", "conformal weights", cft_weights),
        case!(Cft, "cft.locality", "locality criterion", cft_locality),
        case!(Cft, "cft.twist_additive", "Müger centraliser", cft_twist_additive),
        case!(Cft, "cft.quantum_dims", "quantum dimensions", cft_quantum_dims),
        case!(Cft, "cft.fusion_ring", "NS fusion ring factorisation", cft_fusion),
        case!(Equivariance, "equivariance.tau_cocycle", "τ cocycle", eq_tau_cocycle),
        case!(Equivariance, "equivariance.duality_maps", "u and n equivariant", eq_duality_maps),
        case!(Equivariance, "equivariance.mu_associativity", "μ associativity", eq_mu),
        case!(Equivariance, "equivariance.chi", "χ(a) ≅ P_{-a}", eq_chi),
        case!(Equivalence, "equivalence.labels", "label dictionary", eqv_labels),
        case!(Equivalence, "equivalence.products", "fusion ring isomorphism", eqv_products),
        case!(Equivalence, "equivalence.dimensions", "quantum dimension compatibility", eqv_dimensions),
        case!(Equivalence, "equivalence.index_convention", "fusion index convention", eqv_index_convention),
        case!(Equivalence, "equivalence.galois", "other primitive roots", eqv_galois),
    ];
    all.into_iter().filter(|c| suites.contains(&c.suite)).collect()
}

/// Runs the selected suites sequentially.
pub fn run(ctx: &Ctx, suites: &[Suite]) -> Vec<CheckResult> {
    cases(suites).iter().map(|c| c.execute(ctx)).collect()
}

fn core_factorisation(ctx: &Ctx) -> Outcome {
    let rt = &ctx.root;
    let mut n = 0;
    for l in all_labels(ctx.d()) {
        let p = perm_consecutive(rt, l.a as i64, l.lambda);
        verify_factorisation(&p).map_err(e)?;
        verify_factorisation(&twist_mf(&p, 1, 2)).map_err(e)?;
        n += 2;
    }
    let t = t_object(rt);
    let tt = tensor_mf(&t, &t).map_err(e)?;
    verify_factorisation(&tt).map_err(e)?;
    verify_factorisation(&tensor_mf(&tt, &t).map_err(e)?).map_err(e)?;
    verify_factorisation(&tensor_mf(&t, &perm_consecutive(rt, 0, ctx.d() - 2)).map_err(e)?).map_err(e)?;
    verify_factorisation(&unit_mf(rt)).map_err(e)?;
    verdict(true, format!("{} objects factorise x^d - y^d", n + 4))
}

fn core_unit_counit(ctx: &Ctx) -> Outcome {
    let rt = &ctx.root;
    let un = u_map(rt).map_err(e)?.compose(&n_map(rt).map_err(e)?).map_err(e)?;
    let kappa = rt.kappa();
    let want = MFMorphism::identity(un.src.clone()).scaled(&kappa);
    let exact = un.equals(&want, 0).map_err(e)?;
    let k3 = ctx.d() != 3 || kappa.is_one();
    verdict(exact && k3, format!("u∘n = κ·1_I with κ = {kappa}"))
}

fn core_cycles(ctx: &Ctx) -> Outcome {
    let rt = &ctx.root;
    let b = ctx.bound();
    let t = Arc::new(t_object(rt));
    let maps = [
        ("u", u_map(rt).map_err(e)?),
        ("n", n_map(rt).map_err(e)?),
        ("λ_T", lambda(&t).map_err(e)?),
        ("ρ_T", rho(&t).map_err(e)?),
        ("ev_T", ev_rank1(&t).map_err(e)?),
        ("coev_T", coev_rank1(&t).map_err(e)?),
    ];
    for (name, f) in &maps {
        if !f.is_cycle(b).map_err(e)? {
            return verdict(false, format!("{name} is not a cycle"));
        }
    }
    verdict(true, "u, n, λ, ρ, ev, coev are cycles")
}

fn core_dual_iso(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for l in all_labels(ctx.d()) {
        let f = perm_dual_iso(&ctx.root, &l.set()).map_err(e)?;
        if !(f.is_cycle(0).map_err(e)? && is_homotopy_iso(&f).map_err(e)?) {
            return verdict(false, format!("P_{{-S}} → (P_S)⁺ fails for {l}"));
        }
        n += 1;
    }
    verdict(true, format!("{n} duality isomorphisms certified on homology"))
}

fn core_zigzag(ctx: &Ctx) -> Outcome {
    let rt = &ctx.root;
    let l = check_zigzag(rt, &zigzag_left(rt).map_err(e)?).map_err(e)?;
    let r = check_zigzag(rt, &zigzag_right(rt).map_err(e)?).map_err(e)?;
    let level = |z: &crate::temperleylieb::ZigzagResult| if z.strict { "strict" } else if z.homotopic { "homotopy" } else { "fails" };
    verdict(l.homotopic && r.homotopic, format!("left: {}, right: {}", level(&l), level(&r)))
}

fn graded_embeddings(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let mut n = 0;
    for a in 0..d as i64 {
        for b in 0..d as i64 {
            for mu in 1..=d - 2 {
                let r = certify_g_pair(&ctx.root, a, b, mu).map_err(e)?;
                if !r.passed(d, mu) {
                    return verdict(false, format!("a={a} b={b} μ={mu}: {r:?}"));
                }
                n += 1;
            }
        }
    }
    verdict(true, format!("{n} triples (a, b, μ): cycles of degree 0, homology (2,2) or (1,1), iso on homology"))
}

fn graded_hom_rigidity(ctx: &Ctx) -> Outcome {
    let labels = all_labels(ctx.d());
    let mut n = 0;
    for x in &labels {
        for y in &labels {
            let dim = graded_hom_dim(&ctx.root, &x.set(), &y.set()).map_err(e)?;
            if dim != usize::from(x == y) {
                return verdict(false, format!("dim Hom({x}, {y}) = {dim}"));
            }
            n += 1;
        }
    }
    verdict(true, format!("{n} pairs: dim Hom = δ"))
}

fn graded_fusion_ring(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let ring = mf_fusion_ring(d).map_err(e)?;
    let axioms = ring.check_unit() && ring.check_commutative() && ring.check_rigid();
    let assoc = d > 7 || ring.check_associative();
    let mut formula = true;
    for (i, x) in ring.labels.iter().enumerate() {
        for (j, y) in ring.labels.iter().enumerate() {
            let mut want: Vec<usize> = fusion_by_formula(d, *x, *y, IndexConvention::Plus)
                .iter()
                .filter_map(|l| ring.index_of(l))
                .collect();
            want.sort_unstable();
            let got: Vec<usize> = ring.product(i, j).iter().flat_map(|&(k, m)| core::iter::repeat_n(k, m as usize)).collect();
            formula &= want == got;
        }
    }
    verdict(axioms && assoc && formula, format!("rank {}; unit, commutative, rigid, associative; recursion matches closed form: {formula}", ring.len()))
}

fn graded_witnesses(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let labels = all_labels(d);
    let mut n = 0;
    for x in labels.iter().filter(|x| x.lambda == 1 || (x.lambda == 0 && x.a <= 1)) {
        for y in &labels {
            let w = certify_product(&ctx.root, *x, *y).map_err(e)?;
            if !w.iso {
                return verdict(false, format!("{x} ⊗ {y}: no iso from {:?}", w.summands));
            }
            n += 1;
        }
    }
    verdict(true, format!("{n} products certified on homology"))
}

fn tl_relations(ctx: &Ctx) -> Outcome {
    let tl = TL::new(ctx.root);
    let k = tl.kappa().clone();
    for n in 2..=5 {
        for i in 1..n {
            let ei = tl.e(n, i);
            if tl.compose(&ei, &ei).map_err(e)? != ei.scale(&k) {
                return verdict(false, format!("e_{i}² ≠ κe_{i} on {n} strands"));
            }
            if i + 1 < n {
                let ej = tl.e(n, i + 1);
                let a = tl.compose(&tl.compose(&ei, &ej).map_err(e)?, &ei).map_err(e)?;
                let b = tl.compose(&tl.compose(&ej, &ei).map_err(e)?, &ej).map_err(e)?;
                if a != ei || b != ej {
                    return verdict(false, format!("e_i e_{{i±1}} e_i ≠ e_i at i={i}, n={n}"));
                }
            }
            for j in i + 2..n {
                let ej = tl.e(n, j);
                if tl.compose(&ei, &ej).map_err(e)? != tl.compose(&ej, &ei).map_err(e)? {
                    return verdict(false, format!("e_{i} e_{j} ≠ e_{j} e_{i}"));
                }
            }
        }
    }
    let dims = [tl_dim(1), tl_dim(3), tl_dim(4)];
    verdict(dims == [1, 5, 14], format!("relations on ≤ 5 strands; dim End(1), End(3), End(4) = {dims:?}"))
}

fn tl_jones_wenzl(ctx: &Ctx) -> Outcome {
    let tl = TL::new(ctx.root);
    let q = ctx.root.q();
    let d = ctx.d() as usize;
    for n in 1..d {
        let p = tl.jw(n).map_err(e)?;
        if tl.compose(&p, &p).map_err(e)? != p {
            return verdict(false, format!("p_{n} not idempotent"));
        }
        if (1..n).any(|i| !tl.compose(&tl.e(n, i), &p).is_ok_and(|x| x.is_zero())) {
            return verdict(false, format!("p_{n} not killed by e_i"));
        }
        if tl.trace(&p).map_err(e)? != quantum_int(n as i64 + 1, &q).map_err(e)? {
            return verdict(false, format!("tr p_{n} ≠ [{}]", n + 1));
        }
    }
    let undefined = tl.jw(d).is_err();
    verdict(undefined, format!("p_1..p_{} idempotent, trace [n+1]_q; p_{d} undefined: {undefined}", d - 1))
}

fn tl_functor_relations(ctx: &Ctx) -> Outcome {
    let rt = ctx.root;
    let tl = TL::new(rt);
    let mut f = FunctorF::new(rt).map_err(e)?;
    let fe = f.morphism(&tl.e(2, 1)).map_err(e)?;
    let t2 = f.object(2).map_err(e)?;
    let sq = fe.compose(&fe).map_err(e)?;
    let r1 = homotopic_on_power(&rt, 2, &sq, &fe.scaled(tl.kappa()), &t2).map_err(e)?;
    let e1 = f.morphism(&tl.e(3, 1)).map_err(e)?;
    let e2 = f.morphism(&tl.e(3, 2)).map_err(e)?;
    let t3 = f.object(3).map_err(e)?;
    let w1 = e1.compose(&e2).map_err(e)?.compose(&e1).map_err(e)?;
    let w2 = e2.compose(&e1).map_err(e)?.compose(&e2).map_err(e)?;
    let r2 = homotopic_on_power(&rt, 3, &w1, &e1, &t3).map_err(e)?;
    let r3 = homotopic_on_power(&rt, 3, &w2, &e2, &t3).map_err(e)?;
    verdict(r1 && r2 && r3, format!("F(e1)² ≃ κF(e1): {r1}; F(e1e2e1) ≃ F(e1): {r2}; F(e2e1e2) ≃ F(e2): {r3}"))
}

fn tl_jw_vanishing(ctx: &Ctx) -> Outcome {
    let rt = ctx.root;
    if ctx.d() != 3 {
        return skip("T^{⊗(d-1)} embeddings are built for d = 3 only");
    }
    let tl = TL::new(rt);
    let mut f = FunctorF::new(rt).map_err(e)?;
    let p2 = f.morphism(&tl.jw(2).map_err(e)?).map_err(e)?;
    let zero = MFMorphism::zero(p2.src.clone(), p2.tgt.clone(), 0);
    let t2 = f.object(2).map_err(e)?;
    let ok = homotopic_on_power(&rt, 2, &p2, &zero, &t2).map_err(e)?;
    verdict(ok, "F(p_2) ≃ 0, checked on the certified summand embedding")
}

fn tl_end_certificate(ctx: &Ctx) -> Outcome {
    if ctx.d() < 5 {
        return skip("needs d ≥ 5");
    }
    let tl_dim = tl_end_dim_t_times_top(&TL::new(ctx.root)).map_err(e)?;
    let mut dims = Vec::new();
    for a in 0..ctx.d() as i64 {
        let (dim, iso) = mf_end_dim_t_times_top(&ctx.root, a).map_err(e)?;
        if !iso {
            return verdict(false, format!("T ⊗ P_{{{a}:d-2}} decomposition not certified"));
        }
        dims.push(dim);
    }
    let ok = tl_dim == 2 && dims.iter().all(|&x| x == 1);
    verdict(ok, format!("dim End(T ⊗ P_{{a:d-2}}) = {dims:?}; TL side dim = {tl_dim}"))
}

fn cft_weights(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let top = h_weight(d, d - 2, d as i64, 2);
    let unit = h_weight(d, 0, 0, 0);
    verdict(top == num_traits::Zero::zero() && unit == num_traits::Zero::zero(), format!("h(d-2, d, 2) = {top}"))
}

fn cft_locality(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let mut n = 0;
    for l in 0..=d - 2 {
        for r in 0..2 * d as i64 {
            for s in 0..4 {
                let x = SimpleE::new(d, l, r, s).map_err(e)?;
                if is_local(d, l, r, s) != induce_twist_agrees(d, &x) {
                    return verdict(false, format!("{x}: parity and twist disagree"));
                }
                n += 1;
            }
        }
    }
    verdict(true, format!("{n} labels: local iff l + r + s even"))
}

fn cft_twist_additive(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let a = SimpleE::new(d, 0, 2, 0).map_err(e)?;
    let b = SimpleE::new(d, 1, d as i64, 0).map_err(e)?;
    let c = SimpleE::new(d, 0, 1, 0).map_err(e)?;
    let yes = twist_additive(d, &a, &b);
    let no = !twist_additive(d, &c, &b);
    verdict(yes && no, format!("([0,2,0], [1,d,0]) additive: {yes}; ([0,1,0], [1,d,0]) not additive: {no}"))
}

fn cft_quantum_dims(ctx: &Ctx) -> Outcome {
    let k = quantum_dim(&ctx.root, 1).map_err(e)?;
    let one = quantum_dim(&ctx.root, 0).map_err(e)?.is_one();
    let mult = quantum_dims_multiplicative(&ctx.root).map_err(e)?;
    verdict(k == ctx.root.kappa() && one && mult, format!("dim[1] = {k}; multiplicative on su(2) fusion: {mult}"))
}

fn cft_fusion(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let ring = cft_fusion_ring(d).map_err(e)?;
    let axioms = ring.check_unit() && ring.check_commutative() && ring.check_rigid() && (d > 7 || ring.check_associative());
    let f = check_factorisation(d).map_err(e)?;
    verdict(axioms && f.passed() && ring.len() as u32 == d * (d - 1), format!("rank {}; {f:?}", ring.len()))
}

fn eq_tau_cocycle(ctx: &Ctx) -> Outcome {
    let d = ctx.d();
    let mut n = 0;
    for mask in 1u32..(1 << d) - 1 {
        let set: Vec<i64> = (0..d as i64).filter(|j| mask & (1 << j) != 0).collect();
        let s = EquivStructure::perm(&ctx.root, &set).map_err(e)?;
        if !s.check_cocycle(0).map_err(e)? {
            return verdict(false, format!("cocycle fails for S = {set:?}"));
        }
        n += 1;
    }
    verdict(true, format!("{n} subsets, all a, b ∈ ℤ_{d}"))
}

fn eq_duality_maps(ctx: &Ctx) -> Outcome {
    let (u, n) = duality_maps_equivariant(&ctx.root, ctx.bound()).map_err(e)?;
    verdict(u.holds() && n.holds(), format!("u: {u:?}, n: {n:?}"))
}

fn eq_mu(ctx: &Ctx) -> Outcome {
    let d = ctx.d() as i64;
    let mut worst = Agreement::Strict;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                match mu_associativity(&ctx.root, a, b, c, ctx.bound()).map_err(e)? {
                    Agreement::Differ => return verdict(false, format!("fails at ({a}, {b}, {c})")),
                    Agreement::Homotopic => worst = Agreement::Homotopic,
                    Agreement::Strict => {}
                }
            }
        }
    }
    let level = if worst == Agreement::Strict { "strict" } else { "homotopy" };
    verdict(true, format!("{} triples; level: {level}", d * d * d))
}

fn eq_chi(ctx: &Ctx) -> Outcome {
    for a in 0..ctx.d() as i64 {
        if !chi_is_perm(&ctx.root, a).map_err(e)? {
            return verdict(false, format!("χ({a}) ≇ P_{{-{a}}}"));
        }
    }
    verdict(true, "s_{a,0}: P_{-a} → χ(a) is an isomorphism on homology for all a")
}

fn eqv_labels(ctx: &Ctx) -> Outcome {
    let r = verify_equivalence(&ctx.root).map_err(e)?;
    verdict(r.bijection && r.unit && r.duality, format!("bijection: {}, unit: {}, duality: {}", r.bijection, r.unit, r.duality))
}

fn eqv_products(ctx: &Ctx) -> Outcome {
    match verify_equivalence(&ctx.root).map_err(e)?.products {
        Ok(n) => verdict(true, format!("{n} products agree")),
        Err(m) => verdict(false, m),
    }
}

fn eqv_dimensions(ctx: &Ctx) -> Outcome {
    let r = verify_equivalence(&ctx.root).map_err(e)?;
    verdict(r.dimensions, r.dimension_detail)
}

fn eqv_index_convention(ctx: &Ctx) -> Outcome {
    let c = index_conventions(&ctx.root).map_err(e)?;
    let ok = c.plus_certified && c.plus_rigid && c.plus_t_self_dual && !c.minus_t_self_dual && !c.minus_unit_in_tt;
    let minus = if c.minus_unit_in_tt { "I ∈ T⊗T" } else { "fails rigidity of T (I ∉ T⊗T)" };
    verdict(
        ok,
        format!(
            "\"+\" index: certified by homology {}, T self-dual {}; \"−\" index: {minus}, T self-dual {}",
            c.plus_certified, c.plus_t_self_dual, c.minus_t_self_dual
        ),
    )
}

fn eqv_galois(ctx: &Ctx) -> Outcome {
    if ctx.root.exponent() == 1 {
        return skip("standard root");
    }
    let (k, g) = galois_kappa(&ctx.root).map_err(e)?;
    let std = mf_fusion_ring(ctx.d()).map_err(e)?;
    let products = verify_equivalence(&ctx.root).map_err(e)?.products;
    let same = products.is_ok() && std.check_rigid();
    verdict(
        k == g && same,
        format!("κ = {k}, Galois conjugate (exponent {}) = {g}; fusion multiplicities unchanged: {same}", ctx.root.galois_exponent()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_parse() {
        let all = cases(&Suite::ALL);
        let mut names: Vec<_> = all.iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
            assert!(all.iter().any(|c| c.suite == s));
        }
    }

    #[test]
    fn d3_all_pass() {
        let ctx = Ctx::new(Root::standard(3).unwrap());
        for r in run(&ctx, &Suite::ALL) {
            assert_ne!(r.status, Status::Fail, "{r:?}");
        }
    }

    #[test]
    fn fault_is_detected() {
        let ctx = Ctx::new(Root::standard(3).unwrap().with_koszul_fault());
        let res = run(&ctx, &[Suite::Core]);
        assert!(res.iter().any(|r| r.status == Status::Fail));
    }
}
