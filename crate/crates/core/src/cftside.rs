//! Combinatorial data of the N=2 minimal model at level `d - 2`: conformal
//! weights, locality, NS-sector labels and their fusion.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::cyclofield::{quantum_int, CycError, CycNum, Rational, Root};
use crate::graded::FusionRing;
use crate::mfcore::MfError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CftError {
    #[error("label [{0}, {1}] has odd l + r")]
    ParityViolation(u32, i64),
    #[error("l = {l} out of range 0..={max}")]
    OutOfRange { l: u32, max: u32 },
    #[error("quadratic form needs an even modulus, got {0}")]
    OddModulus(u32),
    #[error("d must be odd and at least 3, got {0}")]
    EvenModulus(u32),
    #[error(transparent)]
    Field(#[from] CycError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

fn check_d(d: u32) -> Result<(), CftError> {
    if d < 3 || d % 2 == 0 {
        Err(CftError::EvenModulus(d))
    } else {
        Ok(())
    }
}

/// Reduces a rational to `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

fn rat(n: i64, m: i64) -> Rational {
    Rational::new(n.into(), m.into())
}

/// Simple object `[l, r, s]`, `r` mod `2d`, `s` mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleE {
    pub l: u32,
    pub r: u32,
    pub s: u32,
}

impl SimpleE {
    pub fn new(d: u32, l: u32, r: i64, s: i64) -> Result<SimpleE, CftError> {
        if l + 2 > d {
            return Err(CftError::OutOfRange { l, max: d - 2 });
        }
        Ok(SimpleE { l, r: r.rem_euclid(2 * d as i64) as u32, s: s.rem_euclid(4) as u32 })
    }
}

impl fmt::Display for SimpleE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.l, self.r, self.s)
    }
}

/// NS-sector label `[l, r] = A ⊗ [l, r, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NSLabel {
    pub l: u32,
    pub r: u32,
}

impl NSLabel {
    pub fn new(d: u32, l: u32, r: i64) -> Result<NSLabel, CftError> {
        if l + 2 > d {
            return Err(CftError::OutOfRange { l, max: d - 2 });
        }
        if (l as i64 + r).is_odd() {
            return Err(CftError::ParityViolation(l, r));
        }
        Ok(NSLabel { l, r: r.rem_euclid(2 * d as i64) as u32 })
    }

    pub fn unit() -> NSLabel {
        NSLabel { l: 0, r: 0 }
    }
}

impl fmt::Display for NSLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.l, self.r)
    }
}

/// `h_{l,r,s} = l(l+2)/4d + s²/8 - r²/4d` mod 1.
pub fn h_weight(d: u32, l: u32, r: i64, s: i64) -> Rational {
    let d = d as i64;
    let l = l as i64;
    frac(&(rat(l * (l + 2), 4 * d) + rat(s * s, 8) - rat(r * r, 4 * d)))
}

pub fn h_of(d: u32, x: &SimpleE) -> Rational {
    h_weight(d, x.l, x.r as i64, x.s as i64)
}

/// Truncated su(2) fusion at level `d - 2`.
pub fn su2_fuse(d: u32, l: u32, lp: u32) -> Vec<u32> {
    let lo = l.abs_diff(lp);
    let hi = (l + lp).min((2 * d - 4).saturating_sub(l + lp));
    (lo..=hi).step_by(2).collect()
}

pub fn is_local(_d: u32, l: u32, r: i64, s: i64) -> bool {
    (l as i64 + r + s).is_even()
}

/// The two components of the free module `A ⊗ [l, r, s]`.
pub fn induce(d: u32, x: &SimpleE) -> [SimpleE; 2] {
    let dd = d as i64;
    let partner = SimpleE {
        l: d - 2 - x.l,
        r: (x.r as i64 + dd).rem_euclid(2 * dd) as u32,
        s: (x.s + 2) % 4,
    };
    [*x, partner]
}

/// All NS labels, ordered by `l` then `r`.
pub fn ns_simples(d: u32) -> Result<Vec<NSLabel>, CftError> {
    check_d(d)?;
    let mut out = Vec::new();
    for l in 0..=d - 2 {
        for r in 0..2 * d {
            if (l + r) % 2 == 0 {
                out.push(NSLabel { l, r });
            }
        }
    }
    Ok(out)
}

pub fn ns_fuse(d: u32, x: &NSLabel, y: &NSLabel) -> Vec<NSLabel> {
    let r = (x.r + y.r) % (2 * d);
    su2_fuse(d, x.l, y.l).into_iter().map(|m| NSLabel { l: m, r }).collect()
}

/// `dim[l] = [l + 1]_q` at the root's `q`.
pub fn quantum_dim(root: &Root, l: u32) -> Result<CycNum, CftError> {
    Ok(quantum_int(l as i64 + 1, &root.q())?)
}

/// Whether `h_C - h_A - h_B ∈ ℤ` for every summand `C` of `A ⊗ B`.
pub fn twist_additive(d: u32, a: &SimpleE, b: &SimpleE) -> bool {
    let ha = h_of(d, a);
    let hb = h_of(d, b);
    let r = a.r as i64 + b.r as i64;
    let s = a.s as i64 + b.s as i64;
    su2_fuse(d, a.l, b.l).into_iter().all(|m| {
        let c = h_weight(d, m, r, s);
        (c - &ha - &hb).is_integer()
    })
}

/// Exponent of `q_m(r) = e^{πi r²/m}`, i.e. `r²/2m` mod 1.
pub fn qform(m: u32, r: i64) -> Result<Rational, CftError> {
    if m == 0 || m % 2 == 1 {
        return Err(CftError::OddModulus(m));
    }
    Ok(frac(&rat(r * r, 2 * m as i64)))
}

/// The NS fusion ring.
pub fn cft_fusion_ring(d: u32) -> Result<FusionRing<NSLabel>, CftError> {
    let labels = ns_simples(d)?;
    Ok(FusionRing::new(labels, NSLabel::unit(), |x, y| ns_fuse(d, x, y).into_iter().map(|l| (l, 1)).collect())?)
}

/// Labels reached from the unit by repeated fusion with `gens`.
pub fn generated_by(ring: &FusionRing<NSLabel>, gens: &[NSLabel]) -> BTreeSet<NSLabel> {
    let gi: Vec<usize> = gens.iter().filter_map(|g| ring.index_of(g)).collect();
    let mut seen = BTreeSet::from([ring.unit]);
    let mut frontier = alloc::vec![ring.unit];
    while let Some(i) = frontier.pop() {
        for &g in &gi {
            for &(k, _) in ring.product(i, g) {
                if seen.insert(k) {
                    frontier.push(k);
                }
            }
        }
    }
    seen.into_iter().map(|i| ring.labels[i]).collect()
}

/// Outcome of the factorisation `NS ≅ T ⊠ V(ℤ_d)` on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorisation {
    /// `[1,d]` and `[0,2]` generate every label.
    pub generated: bool,
    /// The span of `{[l, dl]}` is a subring of rank `d - 1`.
    pub t_part_closed: bool,
    /// `[0,2]` is invertible of order `d`.
    pub invertible_order: bool,
    /// `(l, k) ↦ [l, dl] ⊗ [0, 2k]` is a bijection onto the labels and
    /// intertwines the products.
    pub product_decomposition: bool,
}

impl Factorisation {
    pub fn passed(&self) -> bool {
        self.generated && self.t_part_closed && self.invertible_order && self.product_decomposition
    }
}

pub fn check_factorisation(d: u32) -> Result<Factorisation, CftError> {
    let ring = cft_fusion_ring(d)?;
    let dd = d as i64;
    let gen_t = NSLabel::new(d, 1, dd)?;
    let gen_z = NSLabel::new(d, 0, 2)?;
    let generated = generated_by(&ring, &[gen_t, gen_z]).len() == ring.len();

    let t_labels: Vec<NSLabel> = (0..=d - 2).map(|l| NSLabel::new(d, l, dd * l as i64)).collect::<Result<_, _>>()?;
    let t_set: BTreeSet<NSLabel> = t_labels.iter().copied().collect();
    let t_part_closed = t_labels
        .iter()
        .all(|x| t_labels.iter().all(|y| ns_fuse(d, x, y).iter().all(|z| t_set.contains(z))))
        && generated_by(&ring, &[gen_t]) == t_set;

    let mut z = NSLabel::unit();
    let mut order = 0;
    loop {
        let next = ns_fuse(d, &z, &gen_z);
        let [n] = next[..] else { break };
        z = n;
        order += 1;
        if z == NSLabel::unit() || order > d {
            break;
        }
    }
    let invertible_order = z == NSLabel::unit() && order == d;

    let pair = |l: u32, k: u32| -> Vec<NSLabel> { ns_fuse(d, &t_labels[l as usize], &NSLabel { l: 0, r: (2 * k) % (2 * d) }) };
    let mut images = BTreeSet::new();
    let mut ok = true;
    for l in 0..=d - 2 {
        for k in 0..d {
            match pair(l, k)[..] {
                [x] => ok &= images.insert(x),
                _ => ok = false,
            }
        }
    }
    ok &= images.len() == ring.len();
    if ok {
        'outer: for (l, k) in (0..=d - 2).flat_map(|l| (0..d).map(move |k| (l, k))) {
            for (lp, kp) in (0..=d - 2).flat_map(|l| (0..d).map(move |k| (l, k))) {
                let x = pair(l, k)[0];
                let y = pair(lp, kp)[0];
                let mut lhs = ns_fuse(d, &x, &y);
                let mut rhs: Vec<NSLabel> = ns_fuse(d, &t_labels[l as usize], &t_labels[lp as usize])
                    .iter()
                    .flat_map(|t| ns_fuse(d, t, &NSLabel { l: 0, r: (2 * (k + kp)) % (2 * d) }))
                    .collect();
                lhs.sort_unstable();
                rhs.sort_unstable();
                if lhs != rhs {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(Factorisation { generated, t_part_closed, invertible_order, product_decomposition: ok })
}

/// Whether `h` of the two components of `A ⊗ [l, r, s]` differ by an integer.
pub fn induce_twist_agrees(d: u32, x: &SimpleE) -> bool {
    let [a, b] = induce(d, x);
    (h_of(d, &a) - h_of(d, &b)).is_integer()
}

/// Quantum dimension check `dim[l]·dim[l'] = Σ dim[m]` over `su2_fuse`.
pub fn quantum_dims_multiplicative(root: &Root) -> Result<bool, CftError> {
    let d = root.d();
    let dims: Vec<CycNum> = (0..=d - 2).map(|l| quantum_dim(root, l)).collect::<Result<_, _>>()?;
    for l in 0..=d - 2 {
        for lp in 0..=d - 2 {
            let mut rhs = CycNum::zero(d);
            for m in su2_fuse(d, l, lp) {
                rhs += &dims[m as usize];
            }
            if &dims[l as usize] * &dims[lp as usize] != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Render `x` as `p/q`.
pub fn show_rational(x: &Rational) -> alloc::string::String {
    if x.denom().is_zero() || x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(h_weight(5, 0, 0, 0), rat(0, 1));
        assert_eq!(h_weight(5, 1, 5, 0), rat(9, 10));
        for d in [3u32, 5, 7, 9] {
            assert_eq!(h_weight(d, d - 2, d as i64, 2), rat(0, 1));
            // periodicity in r and s
            assert_eq!(h_weight(d, 1, 3, 1), h_weight(d, 1, 3 + 2 * d as i64, 5));
        }
    }

    #[test]
    fn su2() {
        assert_eq!(su2_fuse(5, 1, 2), [1, 3]);
        assert_eq!(su2_fuse(3, 1, 1), [0]);
        assert_eq!(su2_fuse(7, 0, 4), [4]);
        assert_eq!(su2_fuse(5, 3, 3), [0]);
    }

    #[test]
    fn locality_and_induction() {
        assert!(is_local(5, 0, 0, 0));
        assert!(is_local(5, 1, 1, 0));
        assert!(!is_local(5, 1, 0, 0));
        let a = SimpleE::new(5, 0, 0, 0).unwrap();
        assert_eq!(induce(5, &a)[1], SimpleE::new(5, 3, 5, 2).unwrap());
        let f = SimpleE::new(5, 0, 0, 2).unwrap();
        assert_eq!(induce(5, &f)[1], SimpleE::new(5, 3, 5, 0).unwrap());
        for d in [3u32, 5, 7] {
            for l in 0..=d - 2 {
                for r in 0..2 * d as i64 {
                    for s in 0..4 {
                        let x = SimpleE::new(d, l, r, s).unwrap();
                        let [p, q] = induce(d, &x);
                        assert_eq!(induce(d, &q), [q, p]);
                        assert_eq!(is_local(d, l, r, s), induce_twist_agrees(d, &x));
                    }
                }
            }
        }
    }

    #[test]
    fn ns_labels_and_fusion() {
        assert_eq!(ns_simples(3).unwrap().len(), 6);
        assert_eq!(ns_simples(5).unwrap().len(), 20);
        assert!(ns_simples(4).is_err());
        assert!(matches!(NSLabel::new(5, 1, 2), Err(CftError::ParityViolation(1, 2))));
        let t5 = NSLabel::new(5, 1, 5).unwrap();
        assert_eq!(ns_fuse(5, &t5, &t5), [NSLabel::new(5, 0, 0).unwrap(), NSLabel::new(5, 2, 0).unwrap()]);
        let t3 = NSLabel::new(3, 1, 3).unwrap();
        assert_eq!(ns_fuse(3, &t3, &t3), [NSLabel::unit()]);
        let z = NSLabel::new(7, 0, 2).unwrap();
        let x = NSLabel::new(7, 3, 5).unwrap();
        assert_eq!(ns_fuse(7, &z, &x), [NSLabel::new(7, 3, 7).unwrap()]);
    }

    #[test]
    fn tensoring_with_t_on_the_diagonal() {
        // [1,d] ⊗ [l,dl] = [l-1, d(l+1)] ⊕ [l+1, d(l+1)], truncated at l = d-2
        for d in [3u32, 5, 7] {
            let dd = d as i64;
            let t = NSLabel::new(d, 1, dd).unwrap();
            for l in 0..=d - 2 {
                let x = NSLabel::new(d, l, dd * l as i64).unwrap();
                let mut want = Vec::new();
                if l >= 1 {
                    want.push(NSLabel::new(d, l - 1, dd * (l as i64 + 1)).unwrap());
                }
                if l + 1 <= d - 2 {
                    want.push(NSLabel::new(d, l + 1, dd * (l as i64 + 1)).unwrap());
                }
                assert_eq!(ns_fuse(d, &t, &x), want);
            }
        }
    }

    #[test]
    fn dims_and_forms() {
        for d in [3u32, 5, 7] {
            let rt = Root::standard(d).unwrap();
            assert!(quantum_dim(&rt, 0).unwrap().is_one());
            assert_eq!(quantum_dim(&rt, 1).unwrap(), rt.kappa());
            assert!(quantum_dims_multiplicative(&rt).unwrap());
        }
        assert_eq!(qform(4, 1).unwrap(), rat(1, 8));
        assert_eq!(qform(10, 0).unwrap(), rat(0, 1));
        assert_eq!(qform(10, 3).unwrap(), qform(10, 13).unwrap());
        assert!(matches!(qform(5, 1), Err(CftError::OddModulus(5))));
    }

    #[test]
    fn twist_additivity() {
        for d in [3u32, 5, 7] {
            let z = SimpleE::new(d, 0, 2, 0).unwrap();
            let t = SimpleE::new(d, 1, d as i64, 0).unwrap();
            assert!(twist_additive(d, &z, &t));
            assert!(twist_additive(d, &SimpleE::new(d, 0, 0, 0).unwrap(), &t));
        }
        let a = SimpleE::new(5, 0, 1, 0).unwrap();
        let b = SimpleE::new(5, 1, 5, 0).unwrap();
        assert!(!twist_additive(5, &a, &b));
    }

    #[test]
    fn ring_factorises() {
        for d in [3u32, 5, 7] {
            let ring = cft_fusion_ring(d).unwrap();
            assert_eq!(ring.len() as u32, d * (d - 1));
            assert!(ring.check_unit() && ring.check_commutative() && ring.check_rigid());
            if d <= 5 {
                assert!(ring.check_associative());
            }
            let f = check_factorisation(d).unwrap();
            assert!(f.passed(), "{f:?}");
        }
    }
}
