//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ = e^{iπ/d}`.
//!
//! Elements are stored as a common denominator over an integer vector in the
//! power basis `1, ζ, …, ζ^{φ(2d)-1}`. Small values stay in machine words and
//! spill into big integers only when an operation overflows.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use once_cell::race::OnceBox;
use smallvec::SmallVec;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Largest half-order `d` for which field tables are cached.
pub const MAX_D: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different cyclotomic fields")]
    ModulusMismatch,
    #[error("d = {0} must be odd")]
    EvenModulus(u32),
    #[error("quantum integers are undefined at q = ±1")]
    DegenerateRoot,
    #[error("exponent {0} is not coprime to {1}")]
    NotCoprime(i64, u32),
    #[error("d = {0} is outside the supported range 1..={MAX_D}")]
    UnsupportedModulus(u32),
}

type Coeffs = SmallVec<[i64; 12]>;

struct Field {
    d: u32,
    deg: usize,
    /// Monic `Φ_{2d}`, lowest coefficient first.
    phi: Vec<i64>,
    /// `ζ^j` reduced, for `0 <= j < 2d`.
    powers: Vec<Coeffs>,
}

static FIELDS: [OnceBox<Field>; MAX_D as usize] = [const { OnceBox::new() }; MAX_D as usize];

fn field(d: u32) -> &'static Field {
    assert!(d >= 1 && d <= MAX_D, "cyclotomic half-order {d} out of range");
    FIELDS[(d - 1) as usize].get_or_init(|| Box::new(Field::build(d)))
}

fn mobius(mut n: u64) -> i32 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

fn int_poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial.
fn int_poly_div_monic(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

/// Coefficients of the cyclotomic polynomial `Φ_n`, lowest first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for k in 1..=n {
        if n % k != 0 {
            continue;
        }
        let mut f = vec![0i128; k as usize + 1];
        f[0] = -1;
        f[k as usize] = 1;
        match mobius((n / k) as u64) {
            1 => num = int_poly_mul(&num, &f),
            -1 => den = int_poly_mul(&den, &f),
            _ => {}
        }
    }
    int_poly_div_monic(&num, &den).into_iter().map(|c| c as i64).collect()
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

impl Field {
    fn build(d: u32) -> Field {
        let phi = cyclotomic_poly(2 * d);
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(2 * d as usize);
        let mut cur: Coeffs = SmallVec::from_elem(0, deg);
        cur[0] = 1;
        for _ in 0..2 * d {
            powers.push(cur.clone());
            // multiply by ζ
            let top = cur[deg - 1];
            for k in (1..deg).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for k in 0..deg {
                    cur[k] -= top * phi[k];
                }
            }
        }
        Field { d, deg, phi, powers }
    }

    fn zeta(&self, k: i64) -> &Coeffs {
        let n = 2 * self.d as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { den: i64, num: Coeffs },
    Big { den: BigInt, num: Vec<BigInt> },
}

/// An element of `Q(ζ_{2d})`.
#[derive(Clone)]
pub struct CycNum {
    field: &'static Field,
    repr: Repr,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.d == other.field.d && self.repr == other.repr
    }
}
impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.d.hash(state);
        self.repr.hash(state);
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn reduce_i128(f: &Field, r: &mut Vec<i128>) -> Option<()> {
    let deg = f.deg;
    for k in (deg..r.len()).rev() {
        let c = r[k];
        if c != 0 {
            for j in 0..deg {
                let t = c.checked_mul(f.phi[j] as i128)?;
                r[k - deg + j] = r[k - deg + j].checked_sub(t)?;
            }
            r[k] = 0;
        }
    }
    r.truncate(deg);
    r.resize(deg, 0);
    Some(())
}

fn reduce_big(f: &Field, r: &mut Vec<BigInt>) {
    let deg = f.deg;
    for k in (deg..r.len()).rev() {
        if !r[k].is_zero() {
            let c = core::mem::take(&mut r[k]);
            for j in 0..deg {
                if f.phi[j] != 0 {
                    let t = &c * f.phi[j];
                    r[k - deg + j] -= t;
                }
            }
        }
    }
    r.truncate(deg);
    r.resize(deg, BigInt::zero());
}

fn small_from_i128(den: i128, mut num: Vec<i128>) -> Option<Repr> {
    let mut den = den;
    if den < 0 {
        den = -den;
        for x in num.iter_mut() {
            *x = -*x;
        }
    }
    if den != 1 {
        let mut g = den;
        for x in &num {
            if g == 1 {
                break;
            }
            g = gcd_i128(g, *x);
        }
        if g > 1 {
            den /= g;
            for x in num.iter_mut() {
                *x /= g;
            }
        }
    }
    let den = i64::try_from(den).ok()?;
    let mut out: Coeffs = SmallVec::with_capacity(num.len());
    for x in num {
        out.push(i64::try_from(x).ok()?);
    }
    Some(Repr::Small { den, num: out })
}

fn normalise_big(mut den: BigInt, mut num: Vec<BigInt>) -> Repr {
    if den.is_negative() {
        den = -den;
        for x in num.iter_mut() {
            *x = -core::mem::take(x);
        }
    }
    if !den.is_one() {
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            den /= &g;
            for x in num.iter_mut() {
                *x /= &g;
            }
        }
    }
    let fits = den.to_i64().is_some() && num.iter().all(|x| x.to_i64().is_some());
    if fits {
        Repr::Small {
            den: den.to_i64().unwrap(),
            num: num.iter().map(|x| x.to_i64().unwrap()).collect(),
        }
    } else {
        Repr::Big { den, num }
    }
}

impl Repr {
    fn big_parts(&self) -> (BigInt, Vec<BigInt>) {
        match self {
            Repr::Small { den, num } => (BigInt::from(*den), num.iter().map(|x| BigInt::from(*x)).collect()),
            Repr::Big { den, num } => (den.clone(), num.clone()),
        }
    }
}

impl CycNum {
    fn from_repr(d: u32, repr: Repr) -> CycNum {
        CycNum { field: field(d), repr }
    }

    /// Half-order `d` of the ambient field `Q(ζ_{2d})`.
    pub fn d(&self) -> u32 {
        self.field.d
    }

    /// Dimension `φ(2d)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.field.deg
    }

    pub fn zero(d: u32) -> CycNum {
        let f = field(d);
        CycNum { field: f, repr: Repr::Small { den: 1, num: SmallVec::from_elem(0, f.deg) } }
    }

    pub fn one(d: u32) -> CycNum {
        Self::from_int(d, 1)
    }

    pub fn from_int(d: u32, n: i64) -> CycNum {
        let mut z = Self::zero(d);
        if let Repr::Small { num, .. } = &mut z.repr {
            num[0] = n;
        }
        z
    }

    pub fn from_rational(d: u32, r: &Rational) -> CycNum {
        let f = field(d);
        let mut num = vec![BigInt::zero(); f.deg];
        num[0] = r.numer().clone();
        Self::from_repr(d, normalise_big(r.denom().clone(), num))
    }

    /// Builds `Σ c_k ζ^k`, reducing modulo `Φ_{2d}`; any length is accepted.
    pub fn from_coeffs(d: u32, coeffs: &[Rational]) -> CycNum {
        let f = field(d);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        if num.len() < f.deg {
            num.resize(f.deg, BigInt::zero());
        }
        reduce_big(f, &mut num);
        Self::from_repr(d, normalise_big(den, num))
    }

    /// `ζ^k` with `ζ = e^{iπ/d}`.
    pub fn zeta_power(d: u32, k: i64) -> CycNum {
        let f = field(d);
        CycNum { field: f, repr: Repr::Small { den: 1, num: f.zeta(k).clone() } }
    }

    /// `η^k` with `η = ζ² = e^{2πi/d}`.
    pub fn eta_power(d: u32, k: i64) -> CycNum {
        Self::zeta_power(d, 2 * k)
    }

    /// Power-basis coordinates, lowest power first.
    pub fn coeffs(&self) -> Vec<Rational> {
        let (den, num) = self.repr.big_parts();
        num.into_iter().map(|n| Rational::new(n, den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|x| *x == 0),
            Repr::Big { num, .. } => num.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { den, num } => *den == 1 && num[0] == 1 && num[1..].iter().all(|x| *x == 0),
            Repr::Big { .. } => false,
        }
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        let c = self.coeffs();
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &CycNum) -> Result<(), CycError> {
        if self.field.d == other.field.d {
            Ok(())
        } else {
            Err(CycError::ModulusMismatch)
        }
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check(other)?;
        Ok(self.add_same(other, false))
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check(other)?;
        Ok(self.add_same(other, true))
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.check(other)?;
        Ok(self.mul_same(&other.inv()?))
    }

    fn add_same(&self, other: &CycNum, negate: bool) -> CycNum {
        let d = self.field.d;
        if let (Repr::Small { den: da, num: na }, Repr::Small { den: db, num: nb }) = (&self.repr, &other.repr) {
            if let Some(r) = small_add(*da, na, *db, nb, negate) {
                return CycNum { field: self.field, repr: r };
            }
        }
        let (da, na) = self.repr.big_parts();
        let (db, nb) = other.repr.big_parts();
        let den = &da * &db;
        let num = na
            .iter()
            .zip(nb.iter())
            .map(|(a, b)| if negate { a * &db - b * &da } else { a * &db + b * &da })
            .collect();
        Self::from_repr(d, normalise_big(den, num))
    }

    fn mul_same(&self, other: &CycNum) -> CycNum {
        let f = self.field;
        if let (Repr::Small { den: da, num: na }, Repr::Small { den: db, num: nb }) = (&self.repr, &other.repr) {
            if let Some(r) = small_mul(f, *da, na, *db, nb) {
                return CycNum { field: f, repr: r };
            }
        }
        let (da, na) = self.repr.big_parts();
        let (db, nb) = other.repr.big_parts();
        let mut prod = vec![BigInt::zero(); 2 * f.deg - 1];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        reduce_big(f, &mut prod);
        CycNum { field: f, repr: normalise_big(da * db, prod) }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo `Φ_{2d}`.
    pub fn inv(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let f = self.field;
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(f.d, &(Rational::one() / r)));
        }
        let phi: Vec<Rational> = f.phi.iter().map(|c| Rational::from_integer(BigInt::from(*c))).collect();
        let a = trim(self.coeffs());
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = rpoly_divmod(&r0, &r1);
            let s2 = rpoly_sub(&s0, &rpoly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Φ_{2d} is irreducible
        let c = r0[0].clone();
        let coeffs: Vec<Rational> = s0.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_coeffs(f.d, &coeffs))
    }

    pub fn pow(&self, k: i64) -> Result<CycNum, CycError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CycNum::one(self.field.d);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Applies the automorphism `ζ ↦ ζ^l`; requires `gcd(l, 2d) = 1`.
    pub fn galois_twist(&self, l: i64) -> Result<CycNum, CycError> {
        let f = self.field;
        let n = 2 * f.d as i64;
        if l.rem_euclid(n).gcd(&n) != 1 {
            return Err(CycError::NotCoprime(l, 2 * f.d));
        }
        let (den, num) = self.repr.big_parts();
        let mut out = vec![BigInt::zero(); f.deg];
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, p) in f.zeta(k as i64 * l).iter().enumerate() {
                if *p != 0 {
                    out[j] += c * *p;
                }
            }
        }
        Ok(CycNum { field: f, repr: normalise_big(den, out) })
    }

    /// Complex value at `ζ = e^{iπ/d}` as `(re, im)`.
    pub fn to_float(&self) -> (f64, f64) {
        let d = self.field.d as f64;
        let (den, num) = self.repr.big_parts();
        let den = den.to_f64().unwrap_or(f64::INFINITY);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(0.0) / den;
            let th = core::f64::consts::PI * k as f64 / d;
            re += c * Float::cos(th);
            im += c * Float::sin(th);
        }
        (re, im)
    }

    pub fn scale_int(&self, n: i64) -> CycNum {
        self * &CycNum::from_int(self.field.d, n)
    }
}

fn small_add(da: i64, na: &Coeffs, db: i64, nb: &Coeffs, negate: bool) -> Option<Repr> {
    if da == 1 && db == 1 {
        let mut out: Coeffs = SmallVec::with_capacity(na.len());
        for (a, b) in na.iter().zip(nb.iter()) {
            out.push(if negate { a.checked_sub(*b)? } else { a.checked_add(*b)? });
        }
        return Some(Repr::Small { den: 1, num: out });
    }
    let (da, db) = (da as i128, db as i128);
    let g = gcd_i128(da, db);
    let (ma, mb) = (db / g, da / g);
    let den = da.checked_mul(ma)?;
    let mut num = Vec::with_capacity(na.len());
    for (a, b) in na.iter().zip(nb.iter()) {
        let x = (*a as i128).checked_mul(ma)?;
        let y = (*b as i128).checked_mul(mb)?;
        num.push(if negate { x.checked_sub(y)? } else { x.checked_add(y)? });
    }
    small_from_i128(den, num)
}

fn small_mul(f: &Field, da: i64, na: &Coeffs, db: i64, nb: &Coeffs) -> Option<Repr> {
    let deg = f.deg;
    let mut prod = vec![0i128; 2 * deg - 1];
    for (i, a) in na.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in nb.iter().enumerate() {
            if *b != 0 {
                prod[i + j] = prod[i + j].checked_add((*a as i128) * (*b as i128))?;
            }
        }
    }
    reduce_i128(f, &mut prod)?;
    let den = (da as i128) * (db as i128);
    if den == 1 {
        let mut out: Coeffs = SmallVec::with_capacity(deg);
        for x in prod {
            out.push(i64::try_from(x).ok()?);
        }
        return Some(Repr::Small { den: 1, num: out });
    }
    small_from_i128(den, prod)
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn rpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn rpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn rpoly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                assert_eq!(self.field.d, rhs.field.d, "cyclotomic modulus mismatch");
                $inner(self, rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_same(b, false));
forward_binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_same(b, true));
forward_binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_same(b));

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        let repr = match &self.repr {
            Repr::Small { den, num } if num.iter().all(|x| *x != i64::MIN) => {
                Repr::Small { den: *den, num: num.iter().map(|x| -x).collect() }
            }
            r => {
                let (den, num) = r.big_parts();
                normalise_big(den, num.into_iter().map(|x| -x).collect())
            }
        };
        CycNum { field: self.field, repr }
    }
}
impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "ζ")?,
                (1, false) => write!(f, "{a}ζ")?,
                (_, true) => write!(f, "ζ^{k}")?,
                (_, false) => write!(f, "{a}ζ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Quantum integer `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn quantum_int(n: i64, q: &CycNum) -> Result<CycNum, CycError> {
    let d = q.d();
    let one = CycNum::one(d);
    if *q == one || *q == -&one {
        return Err(CycError::DegenerateRoot);
    }
    let qi = q.inv()?;
    let m = n.unsigned_abs();
    // [m] = q^{m-1} + q^{m-3} + … + q^{-(m-1)}
    let mut term = if m == 0 { CycNum::zero(d) } else { q.pow(m as i64 - 1)? };
    let step = &qi * &qi;
    let mut acc = CycNum::zero(d);
    for _ in 0..m {
        acc += &term;
        term = &term * &step;
    }
    Ok(if n < 0 { -acc } else { acc })
}

/// Loop value `κ = -(η^{(d-1)/2} + η^{(d+1)/2}) = 2cos(π/d)`.
pub fn kappa(d: u32) -> Result<CycNum, CycError> {
    Ok(Root::new(d, 1)?.kappa())
}

/// A choice of primitive `d`-th root `η' = η^l` together with the matching
/// square root `q' = ζ^k`, `k` odd and `k ≡ l (mod d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    d: u32,
    l: u32,
    fault: bool,
}

impl Root {
    pub fn new(d: u32, l: u32) -> Result<Root, CycError> {
        if d == 0 || d > MAX_D {
            return Err(CycError::UnsupportedModulus(d));
        }
        if d % 2 == 0 {
            return Err(CycError::EvenModulus(d));
        }
        let l = l % d;
        if d > 1 && l.gcd(&d) != 1 {
            return Err(CycError::NotCoprime(l as i64, d));
        }
        Ok(Root { d, l, fault: false })
    }

    pub fn standard(d: u32) -> Result<Root, CycError> {
        Root::new(d, 1)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Copy of this root whose tensor products use the wrong Koszul sign.
    /// Only meant for checking that verification detects the defect.
    #[doc(hidden)]
    pub fn with_koszul_fault(mut self) -> Root {
        self.fault = true;
        self
    }

    #[doc(hidden)]
    pub fn koszul_fault(&self) -> bool {
        self.fault
    }

    pub fn exponent(&self) -> u32 {
        self.l
    }

    /// Exponent `k` of the automorphism `ζ ↦ ζ^k` sending `η` to `η^l`.
    pub fn galois_exponent(&self) -> i64 {
        let l = self.l as i64;
        if l % 2 == 1 {
            l
        } else {
            l + self.d as i64
        }
    }

    /// `η'^k`.
    pub fn eta(&self, k: i64) -> CycNum {
        CycNum::zeta_power(self.d, 2 * self.l as i64 * k)
    }

    /// The quantum parameter `q'` with `q'^2 = η'`.
    pub fn q(&self) -> CycNum {
        CycNum::zeta_power(self.d, self.galois_exponent())
    }

    pub fn kappa(&self) -> CycNum {
        let h = (self.d as i64 - 1) / 2;
        -(self.eta(h) + self.eta(h + 1))
    }

    pub fn int(&self, n: i64) -> CycNum {
        CycNum::from_int(self.d, n)
    }

    pub fn zero(&self) -> CycNum {
        CycNum::zero(self.d)
    }

    pub fn one(&self) -> CycNum {
        CycNum::one(self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, m: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(m))
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(10), vec![1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_poly(14), vec![1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_poly(18), vec![1, 0, 0, -1, 0, 0, 1]);
        assert_eq!(totient(30), 8);
        assert_eq!(cyclotomic_poly(30).len(), 9);
    }

    #[test]
    fn zeta_has_order_2d() {
        for d in [1u32, 3, 5, 7, 9, 15] {
            let z = CycNum::zeta_power(d, 1);
            assert_eq!(z.pow(2 * d as i64).unwrap(), CycNum::one(d));
            assert_eq!(z.pow(d as i64).unwrap(), -CycNum::one(d));
        }
    }

    #[test]
    fn eta_power_is_cyclic() {
        let a = CycNum::eta_power(3, 1);
        assert_eq!(a.pow(3).unwrap(), CycNum::one(3));
        assert_eq!(CycNum::eta_power(5, 7), CycNum::eta_power(5, 2));
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(3).unwrap(), CycNum::one(3));
        let k5 = kappa(5).unwrap();
        assert_eq!(&k5 * &k5 - &k5, CycNum::one(5));
        assert!((k5.to_float().0 - 1.618_033_988_75).abs() < 1e-10);
        assert!(matches!(kappa(4), Err(CycError::EvenModulus(4))));
    }

    #[test]
    fn quantum_ints() {
        let q = CycNum::zeta_power(5, 1);
        assert_eq!(quantum_int(2, &q).unwrap(), kappa(5).unwrap());
        assert!(quantum_int(5, &q).unwrap().is_zero());
        assert_eq!(quantum_int(-2, &q).unwrap(), -kappa(5).unwrap());
        assert!(matches!(quantum_int(2, &CycNum::one(5)), Err(CycError::DegenerateRoot)));
    }

    #[test]
    fn galois_twists() {
        let k = kappa(5).unwrap();
        let k3 = k.galois_twist(3).unwrap();
        assert!((k3.to_float().0 + 0.618_033_988_75).abs() < 1e-10);
        assert_eq!(k3, k.galois_twist(7).unwrap());
        assert!(matches!(k.galois_twist(5), Err(CycError::NotCoprime(5, 10))));
    }

    #[test]
    fn root_variants() {
        let rt = Root::new(5, 2).unwrap();
        assert_eq!(rt.galois_exponent(), 7);
        let q = rt.q();
        assert_eq!(&q * &q, rt.eta(1));
        assert_eq!(rt.kappa(), &q + &q.inv().unwrap());
        assert_eq!(rt.kappa(), kappa(5).unwrap().galois_twist(7).unwrap());
        assert!(Root::new(9, 3).is_err());
    }

    #[test]
    fn rational_coefficients() {
        let a = CycNum::from_coeffs(5, &[r(1, 2), r(-3, 4)]);
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, CycNum::one(5));
        assert_eq!(a.coeffs()[1], r(-3, 4));
    }

    #[test]
    fn overflow_spills_to_big() {
        let big = CycNum::from_int(7, i64::MAX / 3);
        let sq = &big * &big;
        let back = sq.try_div(&big).unwrap();
        assert_eq!(back, big);
        let s = &sq - &sq;
        assert!(s.is_zero());
        assert_eq!(s, CycNum::zero(7));
    }

    #[test]
    fn modulus_mismatch() {
        let a = CycNum::one(3);
        let b = CycNum::one(5);
        assert_eq!(a.try_add(&b), Err(CycError::ModulusMismatch));
    }
}
