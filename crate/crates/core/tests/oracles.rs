//! Closed-form and floating-point cross-checks against the exact code paths.

use std::f64::consts::PI;

use mfcft_core::cftside::{cft_fusion_ring, h_weight, ns_simples, quantum_dim};
use mfcft_core::cyclofield::{kappa, quantum_int, Rational, Root};
use mfcft_core::graded::{all_labels, graded_hom_dim, mf_fusion_ring};
use mfcft_core::temperleylieb::{basis, tl_dim, TL};
use num_traits::ToPrimitive;

const DS: [u32; 4] = [3, 5, 7, 9];

fn re(x: (f64, f64)) -> f64 {
    assert!(x.1.abs() < 1e-9, "expected a real number, got {x:?}");
    x.0
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

#[test]
fn loop_value() {
    for d in DS {
        let k = kappa(d).unwrap();
        assert!((re(k.to_float()) - 2.0 * (PI / d as f64).cos()).abs() < 1e-12, "d = {d}");
    }
    assert!(kappa(3).unwrap().is_one());
}

#[test]
fn loop_value_at_other_roots() {
    for (d, l) in [(5u32, 2u32), (5, 3), (7, 2), (7, 3), (9, 2)] {
        let root = Root::new(d, l).unwrap();
        let k = root.galois_exponent();
        assert!(k % 2 != 0 && (k - l as i64).rem_euclid(d as i64) == 0);
        let want = 2.0 * (k as f64 * PI / d as f64).cos();
        assert!((re(root.kappa().to_float()) - want).abs() < 1e-12, "d = {d}, l = {l}");
    }
}

#[test]
fn quantum_integers() {
    for d in DS {
        let root = Root::standard(d).unwrap();
        let s = |n: i64| (n as f64 * PI / d as f64).sin();
        for n in -3..2 * d as i64 {
            let got = re(quantum_int(n, &root.q()).unwrap().to_float());
            assert!((got - s(n) / s(1)).abs() < 1e-9, "[{n}] at d = {d}");
        }
        assert!(quantum_int(d as i64, &root.q()).unwrap().is_zero());
        for l in 0..=d - 2 {
            let dim = re(quantum_dim(&root, l).unwrap().to_float());
            assert!(dim > 0.0);
        }
    }
}

#[test]
fn catalan_numbers() {
    let mut c = 1u64;
    for n in 0..8usize {
        assert_eq!(tl_dim(n) as u64, c, "n = {n}");
        assert_eq!(basis(n, n).len() as u64, c);
        c = c * 2 * (2 * n as u64 + 1) / (n as u64 + 2);
    }
    // Hom(0, 2k) has the same count as End(k)
    assert_eq!(basis(0, 6).len(), tl_dim(3));
}

#[test]
fn conformal_weights_in_floats() {
    for d in DS {
        let df = d as f64;
        for l in 0..=d - 2 {
            for r in -(2 * d as i64)..(2 * d as i64) {
                for s in -2..=2 {
                    let lf = l as f64;
                    let raw = lf * (lf + 2.0) / (4.0 * df) + (s * s) as f64 / 8.0 - (r * r) as f64 / (4.0 * df);
                    let want = raw - raw.floor();
                    let got = to_f64(&h_weight(d, l, r, s));
                    let diff = (got - want).abs();
                    assert!(diff < 1e-9 || (1.0 - diff) < 1e-9, "h({l},{r},{s}) at d = {d}");
                }
            }
        }
        // the top label with s = 2 carries an integer weight
        assert_eq!(h_weight(d, d - 2, d as i64, 2), Rational::from_integer(0.into()));
    }
}

#[test]
fn label_and_product_counts() {
    for d in [3u32, 5, 7] {
        let n = (d * (d - 1)) as usize;
        assert_eq!(all_labels(d).len(), n);
        assert_eq!(ns_simples(d).unwrap().len(), n);
        let mf = mf_fusion_ring(d).unwrap();
        let cft = cft_fusion_ring(d).unwrap();
        assert_eq!(mf.len() * mf.len(), n * n);
        assert_eq!(cft.len(), n);
    }
}

#[test]
fn jones_wenzl_traces() {
    for d in [3u32, 5, 7] {
        let root = Root::standard(d).unwrap();
        let tl = TL::new(root);
        let s = |n: usize| (n as f64 * PI / d as f64).sin();
        for n in 0..d as usize {
            let p = tl.jw(n).unwrap();
            let tr = re(tl.trace(&p).unwrap().to_float());
            assert!((tr - s(n + 1) / s(1)).abs() < 1e-9, "tr p_{n} at d = {d}");
        }
    }
}

#[test]
fn hom_spaces_are_diagonal_d3() {
    let root = Root::standard(3).unwrap();
    let labels = all_labels(3);
    for x in &labels {
        for y in &labels {
            let dim = graded_hom_dim(&root, &x.set(), &y.set()).unwrap();
            assert_eq!(dim, usize::from(x == y), "{x} → {y}");
        }
    }
}
