//! Sparse multivariate polynomials over `Q(ζ_{2d})`.
//!
//! The variable universe is fixed: `x` (left), `y` (right) and up to six
//! internal variables `s1, s2, …` introduced by tensor products.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::cyclofield::{CycNum, Root};

pub const NVARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u8);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);

    /// The `k`-th internal variable (zero based).
    pub fn internal(k: usize) -> Var {
        assert!(k + 2 < NVARS, "too many internal variables");
        Var(k as u8 + 2)
    }

    pub fn internal_index(self) -> Option<usize> {
        (self.0 >= 2).then(|| self.0 as usize - 2)
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "x".into(),
            1 => "y".into(),
            k => alloc::format!("s{}", k - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Exponent vector packed one byte per variable, `x` in the top byte.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(v: Var) -> u32 {
        8 * (NVARS as u32 - 1 - v.0 as u32)
    }

    pub fn var(v: Var, e: u32) -> Mono {
        assert!(e < 256, "exponent overflow");
        Mono((e as u64) << Self::shift(v))
    }

    pub fn exp(self, v: Var) -> u32 {
        ((self.0 >> Self::shift(v)) & 0xff) as u32
    }

    pub fn degree(self) -> u32 {
        (0..NVARS as u8).map(|i| self.exp(Var(i))).sum()
    }

    pub fn mul(self, o: Mono) -> Mono {
        for i in 0..NVARS as u8 {
            assert!(self.exp(Var(i)) + o.exp(Var(i)) < 256, "exponent overflow");
        }
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..NVARS as u8).all(|i| self.exp(Var(i)) <= o.exp(Var(i)))
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(self, o: Mono) -> Mono {
        Mono(o.0 - self.0)
    }

    pub fn without(self, v: Var) -> Mono {
        Mono(self.0 & !(0xffu64 << Self::shift(v)))
    }

    pub fn vars(self) -> impl Iterator<Item = (Var, u32)> {
        (0..NVARS as u8).map(Var).map(move |v| (v, self.exp(v))).filter(|(_, e)| *e > 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.0.cmp(&other.0))
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Polynomial in the fixed variable universe with coefficients in `Q(ζ_{2d})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    d: u32,
    terms: BTreeMap<Mono, CycNum>,
}

impl MPoly {
    pub fn zero(d: u32) -> MPoly {
        MPoly { d, terms: BTreeMap::new() }
    }

    pub fn one(d: u32) -> MPoly {
        Self::constant(CycNum::one(d))
    }

    pub fn constant(c: CycNum) -> MPoly {
        Self::term(c, Mono::ONE)
    }

    pub fn int(d: u32, n: i64) -> MPoly {
        Self::constant(CycNum::from_int(d, n))
    }

    pub fn term(c: CycNum, m: Mono) -> MPoly {
        let d = c.d();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { d, terms }
    }

    pub fn var(d: u32, v: Var) -> MPoly {
        Self::term(CycNum::one(d), Mono::var(v, 1))
    }

    pub fn x(d: u32) -> MPoly {
        Self::var(d, Var::X)
    }

    pub fn y(d: u32) -> MPoly {
        Self::var(d, Var::Y)
    }

    /// `u - c·v`.
    pub fn linear(u: Var, c: &CycNum, v: Var) -> MPoly {
        let d = c.d();
        let mut p = Self::var(d, u);
        p.add_term(Mono::var(v, 1), &-c);
        p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CycNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Mono) -> CycNum {
        self.terms.get(&m).cloned().unwrap_or_else(|| CycNum::zero(self.d))
    }

    pub fn constant_term(&self) -> CycNum {
        self.coeff(Mono::ONE)
    }

    pub fn as_constant(&self) -> Option<CycNum> {
        match self.terms.len() {
            0 => Some(CycNum::zero(self.d)),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(Mono, &CycNum)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(k) => it.all(|j| j == k),
        }
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn add_term(&mut self, m: Mono, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &CycNum) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.d);
        }
        MPoly { d: self.d, terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_mono(&self, m: Mono) -> MPoly {
        MPoly { d: self.d, terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.d);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / g`.
    pub fn exact_div(&self, g: &MPoly) -> Result<MPoly, PolyError> {
        let (lm, lc) = g.leading().ok_or(PolyError::DivisionByZero)?;
        let lci = lc.inv().map_err(|_| PolyError::DivisionByZero)?;
        let mut r = self.clone();
        let mut q = MPoly::zero(self.d);
        while let Some((m, c)) = r.leading() {
            if !lm.divides(m) {
                return Err(PolyError::NotDivisible);
            }
            let qm = lm.quotient_of(m);
            let qc = c * &lci;
            for (gm, gc) in g.terms.iter() {
                r.add_term(gm.mul(qm), &-(gc * &qc));
            }
            q.add_term(qm, &qc);
        }
        Ok(q)
    }

    /// Simultaneous substitution `v ↦ p_v`.
    pub fn substitute(&self, map: &[(Var, MPoly)]) -> MPoly {
        if map.is_empty() {
            return self.clone();
        }
        let monomial_images: Option<Vec<(Var, Mono, CycNum)>> = map
            .iter()
            .map(|(v, p)| {
                if p.terms.len() == 1 {
                    let (m, c) = p.terms.iter().next().unwrap();
                    Some((*v, *m, c.clone()))
                } else {
                    None
                }
            })
            .collect();
        if let Some(imgs) = monomial_images {
            if map.iter().all(|(_, p)| !p.is_zero()) {
                return self.substitute_monomial(&imgs);
            }
        }
        let mut cache: BTreeMap<(Var, u32), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero(self.d);
        for (m, c) in self.terms.iter() {
            let mut rest = *m;
            let mut acc = MPoly::constant(c.clone());
            for (v, p) in map {
                let e = m.exp(*v);
                rest = rest.without(*v);
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((*v, e)).or_insert_with(|| p.pow(e)).clone();
                acc = &acc * &pw;
                if acc.is_zero() {
                    break;
                }
            }
            for (k, a) in acc.terms.iter() {
                out.add_term(k.mul(rest), a);
            }
        }
        out
    }

    fn substitute_monomial(&self, imgs: &[(Var, Mono, CycNum)]) -> MPoly {
        let mut out = MPoly::zero(self.d);
        let mut pow_cache: BTreeMap<(Var, u32), CycNum> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut rest = *m;
            let mut coef = c.clone();
            let mut mono = Mono::ONE;
            for (v, im, ic) in imgs {
                let e = m.exp(*v);
                rest = rest.without(*v);
                if e == 0 {
                    continue;
                }
                let pw = pow_cache.entry((*v, e)).or_insert_with(|| ic.pow(e as i64).unwrap());
                coef = &coef * pw;
                for _ in 0..e {
                    mono = mono.mul(*im);
                }
            }
            out.add_term(mono.mul(rest), &coef);
        }
        out
    }

    /// Renames variables, `v ↦ w` simultaneously.
    pub fn rename(&self, map: &[(Var, Var)]) -> MPoly {
        let d = self.d;
        let m: Vec<(Var, MPoly)> = map.iter().map(|(a, b)| (*a, MPoly::var(d, *b))).collect();
        self.substitute(&m)
    }

    /// `v ↦ c·v`.
    pub fn scale_var(&self, v: Var, c: &CycNum) -> MPoly {
        let mut out = MPoly::zero(self.d);
        let mut cache: BTreeMap<u32, CycNum> = BTreeMap::new();
        for (m, a) in self.terms.iter() {
            let e = m.exp(v);
            let f = cache.entry(e).or_insert_with(|| c.pow(e as i64).unwrap());
            out.add_term(*m, &(a * &*f));
        }
        out
    }

    /// Coefficient of `v^k`, a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.d);
        for (m, a) in self.terms.iter() {
            if m.exp(v) == k {
                out.terms.insert(m.without(v), a.clone());
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&CycNum) -> CycNum) -> MPoly {
        let mut out = MPoly::zero(self.d);
        for (m, a) in self.terms.iter() {
            out.add_term(*m, &f(a));
        }
        out
    }
}

/// `Π_{j∈S} (u - η^j v)`.
pub fn perm_product(root: &Root, s: &[i64], u: Var, v: Var) -> MPoly {
    let d = root.d();
    let mut acc = MPoly::one(d);
    for j in s {
        acc = &acc * &MPoly::linear(u, &root.eta(*j), v);
    }
    acc
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        let mut acc: BTreeMap<Mono, CycNum> = BTreeMap::new();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in rhs.terms.iter() {
                let m = ma.mul(*mb);
                let p = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { d: self.d, terms: acc }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { d: self.d, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &'a MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == Mono::ONE {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let d = 3;
        let x = MPoly::x(d);
        let y = MPoly::y(d);
        let p = &(&x - &y) * &(&x + &y);
        assert_eq!(p, &x.pow(2) - &y.pow(2));
    }

    #[test]
    fn exact_division() {
        let d = 5;
        let x = MPoly::x(d);
        let y = MPoly::y(d);
        let w = &x.pow(5) - &y.pow(5);
        let q = w.exact_div(&(&x - &y)).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(w.exact_div(&(&x + &y)), Err(PolyError::NotDivisible));
    }

    #[test]
    fn perm_product_factors_w() {
        let rt = Root::standard(5).unwrap();
        let all: Vec<i64> = (0..5).collect();
        let p = perm_product(&rt, &all, Var::X, Var::Y);
        assert_eq!(p, &MPoly::x(5).pow(5) - &MPoly::y(5).pow(5));
    }

    #[test]
    fn substitution_and_coeffs() {
        let d = 3;
        let s = Var::internal(0);
        let p = &MPoly::x(d) * &MPoly::var(d, s).pow(2);
        let q = p.substitute(&[(s, &MPoly::x(d) + &MPoly::y(d))]);
        assert_eq!(q.coeff_of(Var::Y, 2), MPoly::x(d));
        let r = p.scale_var(Var::X, &CycNum::from_int(d, 3));
        assert_eq!(r.coeff_of(s, 2), MPoly::int(d, 3) * MPoly::x(d));
    }
}
