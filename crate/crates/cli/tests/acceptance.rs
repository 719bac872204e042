//! End-to-end acceptance run. Each criterion prints one pass/fail line; the
//! test fails if any criterion does.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use assert_cmd::Command;
use mfcft_core::cftside::{
    cft_fusion_ring, h_weight, induce_twist_agrees, is_local, quantum_dim, twist_additive, SimpleE,
};
use mfcft_core::correspondence::suites::{run, Ctx, Status, Suite};
use mfcft_core::correspondence::{
    chi_is_perm, duality_maps_equivariant, galois_kappa, index_conventions, label_map, mu_associativity, test_bound,
    verify_equivalence, Agreement, EquivStructure,
};
use mfcft_core::cyclofield::{CycNum, Root};
use mfcft_core::graded::{all_labels, certify_g_pair, graded_hom_dim, mf_fusion_ring, GradedLabel};
use mfcft_core::mfcore::{n_map, u_map, MFMorphism, MfError};
use mfcft_core::temperleylieb::{
    check_zigzag, homotopic_on_power, mf_end_dim_t_times_top, tl_end_dim_t_times_top, zigzag_left, zigzag_right,
    FunctorF, TL,
};
use serde_json::Value;

type Verdict = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn root(d: u32) -> Root {
    Root::standard(d).unwrap()
}

fn real(x: &CycNum) -> f64 {
    let (re, im) = x.to_float();
    assert!(im.abs() < 1e-9);
    re
}

/// `sin(nπ/d) / sin(π/d)`, the value of `[n]_q` at `q = e^{iπ/d}`.
fn qint_float(n: usize, d: u32) -> f64 {
    (n as f64 * PI / d as f64).sin() / (PI / d as f64).sin()
}

fn criterion_1() -> Verdict {
    for d in [3, 5, 7] {
        let rt = root(d);
        let un = u_map(&rt).and_then(|u| u.compose(&n_map(&rt)?)).map_err(err)?;
        let kappa = rt.kappa();
        ensure((real(&kappa) - 2.0 * (PI / d as f64).cos()).abs() < 1e-12, || format!("κ({d}) is not 2cos(π/{d})"))?;
        let want = MFMorphism::identity(un.src.clone()).scaled(&kappa);
        ensure(un.equals(&want, 0).map_err(err)?, || format!("u∘n ≠ κ·1 at d = {d}"))?;
    }
    ensure(root(3).kappa().is_one(), || "κ(3) ≠ 1".into())
}

fn criterion_2() -> Verdict {
    for d in [3, 5] {
        let rt = root(d);
        for (side, z) in [("left", zigzag_left(&rt)), ("right", zigzag_right(&rt))] {
            let r = check_zigzag(&rt, &z.map_err(err)?).map_err(err)?;
            ensure(r.homotopic, || format!("{side} zig-zag fails at d = {d}"))?;
        }
    }
    Ok(())
}

fn criterion_3() -> Verdict {
    for d in [3u32, 5, 7] {
        let rt = root(d);
        for a in 0..d as i64 {
            for b in 0..d as i64 {
                for mu in 1..=d - 2 {
                    let r = certify_g_pair(&rt, a, b, mu).map_err(err)?;
                    let expect = if mu < d - 2 { [2, 2] } else { [1, 1] };
                    ensure(r.cycles && r.degree_zero && r.iso && r.homology_dims == expect, || {
                        format!("(a, b, μ) = ({a}, {b}, {mu}) at d = {d}: {r:?}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Verdict {
    for (d, count) in [(3u32, 36usize), (5, 400), (7, 1764)] {
        ensure(count == ((d * (d - 1)) as usize).pow(2), || "count oracle".into())?;
        let cft = cft_fusion_ring(d).map_err(err)?;
        let mf = mf_fusion_ring(d).map_err(err)?;
        let map = |i: usize| -> Result<GradedLabel, String> {
            let x = cft.labels[i];
            label_map(d, x.l, x.r as i64).map_err(err)
        };
        let mut checked = 0;
        for i in 0..cft.len() {
            for j in 0..cft.len() {
                let mut lhs = BTreeMap::new();
                for &(k, m) in cft.product(i, j) {
                    *lhs.entry(map(k)?).or_insert(0) += m;
                }
                let (mi, mj) = (mf.index_of(&map(i)?).unwrap(), mf.index_of(&map(j)?).unwrap());
                let mut rhs = BTreeMap::new();
                for &(k, m) in mf.product(mi, mj) {
                    *rhs.entry(mf.labels[k]).or_insert(0) += m;
                }
                ensure(lhs == rhs, || format!("{} ⊗ {} at d = {d}", cft.labels[i], cft.labels[j]))?;
                checked += 1;
            }
        }
        ensure(checked == count, || format!("{checked} products at d = {d}"))?;
        let report = verify_equivalence(&root(d)).map_err(err)?;
        ensure(report.products == Ok(count), || format!("{:?}", report.products))?;
    }
    Ok(())
}

fn criterion_5() -> Verdict {
    for d in [3, 5, 7] {
        let rt = root(d);
        let labels = all_labels(d);
        for x in &labels {
            for y in &labels {
                let dim = graded_hom_dim(&rt, &x.set(), &y.set()).map_err(err)?;
                ensure(dim == usize::from(x == y), || format!("dim Hom({x}, {y}) = {dim} at d = {d}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Verdict {
    for d in [3u32, 5, 7] {
        let tl = TL::new(root(d));
        let k = tl.kappa().clone();
        for n in 2..=5 {
            for i in 1..n {
                let ei = tl.e(n, i);
                ensure(tl.compose(&ei, &ei).map_err(err)? == ei.scale(&k), || format!("e_{i}² on {n} strands"))?;
                if i + 1 < n {
                    let ej = tl.e(n, i + 1);
                    let w = tl.compose(&tl.compose(&ei, &ej).map_err(err)?, &ei).map_err(err)?;
                    ensure(w == ei, || format!("e_{i} e_{} e_{i} on {n} strands", i + 1))?;
                }
                for j in i + 2..n {
                    let ej = tl.e(n, j);
                    ensure(tl.compose(&ei, &ej).map_err(err)? == tl.compose(&ej, &ei).map_err(err)?, || {
                        format!("e_{i}, e_{j} do not commute")
                    })?;
                }
            }
        }
        for n in 1..d as usize {
            let p = tl.jw(n).map_err(err)?;
            ensure(tl.compose(&p, &p).map_err(err)? == p, || format!("p_{n} not idempotent at d = {d}"))?;
            let tr = real(&tl.trace(&p).map_err(err)?);
            ensure((tr - qint_float(n + 1, d)).abs() < 1e-9, || format!("tr p_{n} = {tr} at d = {d}"))?;
        }
    }

    let rt = root(3);
    let tl = TL::new(rt);
    let mut f = FunctorF::new(rt).map_err(err)?;
    let p2 = f.morphism(&tl.jw(2).map_err(err)?).map_err(err)?;
    let zero = MFMorphism::zero(p2.src.clone(), p2.tgt.clone(), 0);
    let t2 = f.object(2).map_err(err)?;
    ensure(homotopic_on_power(&rt, 2, &p2, &zero, &t2).map_err(err)?, || "F(p_2) ≄ 0 at d = 3".into())?;
    let fe = f.morphism(&tl.e(2, 1)).map_err(err)?;
    ensure(!homotopic_on_power(&rt, 2, &fe, &zero, &t2).map_err(err)?, || "F(e_1) ≃ 0: the vanishing test is vacuous".into())?;

    for d in [5u32, 7] {
        let rt = root(d);
        let tl_dim = tl_end_dim_t_times_top(&TL::new(rt)).map_err(err)?;
        ensure(tl_dim == 2, || format!("TL side dim {tl_dim} at d = {d}"))?;
        for a in 0..d as i64 {
            let (dim, iso) = mf_end_dim_t_times_top(&rt, a).map_err(err)?;
            ensure(iso && dim == 1, || format!("MF side dim {dim} (certified {iso}) at d = {d}, a = {a}"))?;
        }
    }
    Ok(())
}

fn criterion_7() -> Verdict {
    for d in [3u32, 5, 7] {
        ensure(h_weight(d, d - 2, d as i64, 2).is_integer(), || format!("h(d-2, d, 2) ≠ 0 at d = {d}"))?;
        for l in 0..=d - 2 {
            for r in 0..2 * d as i64 {
                for s in 0..4 {
                    let x = SimpleE::new(d, l, r, s).map_err(err)?;
                    let parity = (l as i64 + r + s) % 2 == 0;
                    ensure(is_local(d, l, r, s) == parity && induce_twist_agrees(d, &x) == parity, || {
                        format!("{x} at d = {d}")
                    })?;
                }
            }
        }
        let a = SimpleE::new(d, 0, 2, 0).map_err(err)?;
        let b = SimpleE::new(d, 1, d as i64, 0).map_err(err)?;
        ensure(twist_additive(d, &a, &b), || format!("[0,2,0], [1,{d},0] not additive"))?;
        let rt = root(d);
        let dim1 = quantum_dim(&rt, 1).map_err(err)?;
        ensure(dim1 == rt.kappa(), || format!("dim[1] = {dim1} ≠ κ at d = {d}"))?;
    }
    Ok(())
}

fn criterion_8() -> Verdict {
    for d in [3u32, 5] {
        let rt = root(d);
        let bound = test_bound(&rt);
        for mask in 1u32..(1 << d) - 1 {
            let set: Vec<i64> = (0..d as i64).filter(|j| mask & (1 << j) != 0).collect();
            let s = EquivStructure::perm(&rt, &set).map_err(err)?;
            ensure(s.check_cocycle(0).map_err(err)?, || format!("τ cocycle fails for S = {set:?}, d = {d}"))?;
        }
        let (u, n) = duality_maps_equivariant(&rt, bound).map_err(err)?;
        ensure(u.holds() && n.holds(), || format!("u: {u:?}, n: {n:?} at d = {d}"))?;
        for a in 0..d as i64 {
            for b in 0..d as i64 {
                for c in 0..d as i64 {
                    let r = mu_associativity(&rt, a, b, c, bound).map_err(err)?;
                    ensure(r == Agreement::Strict, || format!("μ at ({a}, {b}, {c}), d = {d}: {r:?}"))?;
                }
            }
            ensure(chi_is_perm(&rt, a).map_err(err)?, || format!("χ({a}) ≇ P_{{-{a}}} at d = {d}"))?;
        }
    }
    Ok(())
}

fn criterion_9() -> Verdict {
    let rt = Root::new(5, 2).map_err(err)?;
    let failed: Vec<String> = run(&Ctx::new(rt), &Suite::ALL)
        .into_iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| format!("{}: {}", r.name, r.detail))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    let (k, g) = galois_kappa(&rt).map_err(err)?;
    ensure(k == g && k == rt.kappa(), || format!("κ₂ = {k}, twist = {g}"))?;
    // q = ζ^7 for η' = η²: κ₂ = 2cos(7π/5)
    ensure((real(&k) - 2.0 * (7.0 * PI / 5.0).cos()).abs() < 1e-12, || format!("κ₂ = {}", real(&k)))?;
    let std = verify_equivalence(&root(5)).map_err(err)?;
    let twisted = verify_equivalence(&rt).map_err(err)?;
    ensure(twisted.passed() && std.products == twisted.products, || format!("{twisted:?}"))?;
    let ring = mf_fusion_ring(5).map_err(err)?;
    ensure(ring.check_rigid() && ring.len() == 20, || "fusion ring changed".into())
}

fn criterion_10() -> Verdict {
    for d in [3, 5, 7] {
        let c = index_conventions(&root(d)).map_err(|e: MfError| e.to_string())?;
        ensure(c.plus_certified && c.plus_rigid && c.plus_t_self_dual, || format!("\"+\" at d = {d}: {c:?}"))?;
        ensure(!c.minus_unit_in_tt && !c.minus_t_self_dual, || format!("\"−\" at d = {d}: {c:?}"))?;
    }
    let out = Command::cargo_bin("mfcft")
        .unwrap()
        .args(["verify", "--d", "5", "--suites", "equivalence"])
        .output()
        .map_err(err)?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let report: Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let check = report["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["name"] == "equivalence.index_convention"))
        .ok_or("no index_convention entry in the report")?;
    let detail = check["detail"].as_str().unwrap_or_default();
    ensure(
        check["status"] == "pass"
            && detail.contains("\"+\" index: certified by homology true")
            && detail.contains("\"−\" index: fails rigidity of T (I ∉ T⊗T)"),
        || detail.to_string(),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Verdict); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failures = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(()) => println!("criterion {n}: pass"),
            Err(why) => {
                println!("criterion {n}: fail ({why})");
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
