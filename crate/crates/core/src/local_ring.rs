//! Arithmetic in the ring of integers of a ramified quadratic extension
//! F = Q_p(π), π² = π₀ = u₀·p, truncated at a finite π₀-adic precision.
//!
//! Elements of 𝒪_F/π₀^M are stored as a + b·π with a, b residues mod p^M.
//! Precision is tracked conservatively: every result carries the smallest
//! precision of its inputs, and division by π costs one π₀-digit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest modulus we allow; products are formed in u128.
const MODULUS_CAP: u64 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

#[inline]
fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

fn inv_mod(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(reduce(t0, m))
}

/// p-adic valuation of a residue mod p^M; `None` for zero.
fn vp(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Legendre symbol of `u` modulo the odd prime `p`.
pub fn chi_bar(u: i64, p: u64) -> i8 {
    let r = reduce(u as i128, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// χ̄(−1) for a residue field of size q (odd): +1 iff q ≡ 1 mod 4.
pub fn chi_bar_minus_one(q: u64) -> i8 {
    if q % 4 == 1 {
        1
    } else {
        -1
    }
}

/// χ on units of Z_p: unit norms from a ramified extension are exactly the unit squares.
pub fn chi_unit(u: i64, p: u64) -> Result<i8> {
    match chi_bar(u, p) {
        0 => Err(Error::NotUnit(format!("{u} is divisible by {p}"))),
        s => Ok(s),
    }
}

/// χ(x) for x = u·π^val ∈ F₀ with u a unit of Z_p. Uses χ(−π₀) = +1.
pub fn chi_general(u: i64, val: i32, p: u64) -> Result<i8> {
    if val.rem_euclid(2) != 0 {
        return Err(Error::NotInBaseField(format!("π-valuation {val} is odd")));
    }
    // u·π₀^k = u·(−1)^k·ϖ₀^k
    let k = val / 2;
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    chi_unit(sign * u, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub p: u64,
    pub q: u64,
    /// u₀ with π₀ = u₀·p.
    pub pi0_unit: i64,
}

impl FieldParams {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_pi0_unit(p, 1)
    }

    pub fn with_pi0_unit(p: u64, pi0_unit: i64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not an odd prime")));
        }
        if chi_bar(pi0_unit, p) == 0 {
            return Err(Error::InvalidParams(format!("u0 = {pi0_unit} is not a unit mod {p}")));
        }
        Ok(FieldParams { p, q: p, pi0_unit })
    }

    /// Largest π₀-adic precision whose modulus fits the arithmetic.
    pub fn max_precision(&self) -> u32 {
        let mut m = 0;
        let mut acc = 1u64;
        while acc <= MODULUS_CAP / self.p {
            acc *= self.p;
            m += 1;
        }
        m
    }

    pub fn modulus(&self, prec: u32) -> Result<u64> {
        if prec == 0 {
            return Err(Error::Precision("precision 0".into()));
        }
        if prec > self.max_precision() {
            return Err(Error::Precision(format!(
                "precision {prec} exceeds the maximum {} for p = {}",
                self.max_precision(),
                self.p
            )));
        }
        Ok(self.p.pow(prec))
    }

    pub fn nonresidue(&self) -> i64 {
        (2..self.p as i64).find(|&u| chi_bar(u, self.p) == -1).unwrap()
    }

    pub fn chi_minus_one(&self) -> i8 {
        chi_bar(-1, self.p)
    }

    fn u0_inv(&self) -> u64 {
        inv_mod(reduce(self.pi0_unit as i128, self.p), self.p).unwrap()
    }
}

/// a + b·π in 𝒪_F/π₀^M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RamifiedElement {
    a: u64,
    b: u64,
    prec: u32,
    modulus: u64,
    params: FieldParams,
}

impl RamifiedElement {
    pub fn new(params: FieldParams, a: i128, b: i128, prec: u32) -> Result<Self> {
        let modulus = params.modulus(prec)?;
        Ok(RamifiedElement { a: reduce(a, modulus), b: reduce(b, modulus), prec, modulus, params })
    }

    pub fn from_int(params: FieldParams, n: i128, prec: u32) -> Result<Self> {
        Self::new(params, n, 0, prec)
    }

    pub fn zero(params: FieldParams, prec: u32) -> Result<Self> {
        Self::new(params, 0, 0, prec)
    }

    pub fn one(params: FieldParams, prec: u32) -> Result<Self> {
        Self::new(params, 1, 0, prec)
    }

    pub fn pi(params: FieldParams, prec: u32) -> Result<Self> {
        Self::new(params, 0, 1, prec)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    /// The same element known only to precision `prec` (≤ current).
    pub fn with_prec(&self, prec: u32) -> Result<Self> {
        if prec > self.prec {
            return Err(Error::Precision(format!(
                "cannot raise precision from {} to {prec}",
                self.prec
            )));
        }
        Self::new(self.params, self.a as i128, self.b as i128, prec)
    }

    fn pair(&self, other: &Self) -> (Self, Self) {
        debug_assert_eq!(self.params, other.params, "operands from different fields");
        if self.prec == other.prec {
            (*self, *other)
        } else {
            let m = self.prec.min(other.prec);
            (self.with_prec(m).unwrap(), other.with_prec(m).unwrap())
        }
    }

    fn pi0_mod(&self) -> u64 {
        reduce(self.params.pi0_unit as i128 * self.params.p as i128, self.modulus)
    }

    pub fn conj(&self) -> Self {
        RamifiedElement { b: (self.modulus - self.b) % self.modulus, ..*self }
    }

    pub fn norm(&self) -> Self {
        *self * self.conj()
    }

    pub fn mul_pi(&self) -> Self {
        let a = mul_mod(self.pi0_mod(), self.b, self.modulus);
        RamifiedElement { a, b: self.a, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.a.is_multiple_of(self.params.p)
    }

    /// π-adic valuation; an error if the element is zero at working precision.
    pub fn val_pi(&self) -> Result<u32> {
        let p = self.params.p;
        match (vp(self.a, p), vp(self.b, p)) {
            (None, None) => Err(Error::Precision(format!(
                "valuation of an element indistinguishable from 0 (≥ {})",
                2 * self.prec
            ))),
            (Some(va), None) => Ok(2 * va),
            (None, Some(vb)) => Ok(2 * vb + 1),
            (Some(va), Some(vb)) => Ok((2 * va).min(2 * vb + 1)),
        }
    }

    /// Divide by π₀^j; costs j digits of precision.
    pub fn div_pi0_pow(&self, j: u32) -> Result<Self> {
        if j == 0 {
            return Ok(*self);
        }
        let pj = self.params.p.pow(j);
        if !self.a.is_multiple_of(pj) || !self.b.is_multiple_of(pj) {
            return Err(Error::Precision(format!("element not divisible by π₀^{j}")));
        }
        if j >= self.prec {
            return Err(Error::Precision("division consumed all precision".into()));
        }
        let prec = self.prec - j;
        let m = self.params.modulus(prec)?;
        let uinv = pow_mod(inv_mod(reduce(self.params.pi0_unit as i128, m), m).unwrap(), j as u64, m);
        Self::new(
            self.params,
            mul_mod((self.a / pj) % m, uinv, m) as i128,
            mul_mod((self.b / pj) % m, uinv, m) as i128,
            prec,
        )
    }

    /// Divide by π; costs one π₀-digit of precision.
    pub fn div_pi(&self) -> Result<Self> {
        let p = self.params.p;
        if !self.a.is_multiple_of(p) {
            return Err(Error::Precision("element not divisible by π".into()));
        }
        if self.prec <= 1 {
            return Err(Error::Precision("division consumed all precision".into()));
        }
        let prec = self.prec - 1;
        let m = self.params.modulus(prec)?;
        let uinv = inv_mod(reduce(self.params.pi0_unit as i128, m), m).unwrap();
        // (a + bπ)/π = b + (a/π₀)·π
        Self::new(self.params, (self.b % m) as i128, mul_mod((self.a / p) % m, uinv, m) as i128, prec)
    }

    pub fn div_pi_pow(&self, k: u32) -> Result<Self> {
        let x = self.div_pi0_pow(k / 2)?;
        if k % 2 == 1 {
            x.div_pi()
        } else {
            Ok(x)
        }
    }

    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit(format!("{self} is not a unit")));
        }
        let n = self.norm().a;
        let ninv = inv_mod(n, self.modulus).unwrap();
        Ok(RamifiedElement {
            a: mul_mod(self.a, ninv, self.modulus),
            b: mul_mod((self.modulus - self.b) % self.modulus, ninv, self.modulus),
            ..*self
        })
    }

    /// Residue mod p of x/π^{val(x)}.
    pub fn leading_residue(&self) -> Result<u64> {
        let w = self.val_pi()?;
        let p = self.params.p;
        let j = w / 2;
        let digit = if w % 2 == 0 { self.a } else { self.b } / p.pow(j) % p;
        Ok(mul_mod(digit, pow_mod(self.params.u0_inv(), j as u64, p), p))
    }
}

impl Add for RamifiedElement {
    type Output = RamifiedElement;
    fn add(self, rhs: Self) -> Self {
        let (x, y) = self.pair(&rhs);
        let m = x.modulus;
        RamifiedElement { a: (x.a + y.a) % m, b: (x.b + y.b) % m, ..x }
    }
}

impl Neg for RamifiedElement {
    type Output = RamifiedElement;
    fn neg(self) -> Self {
        let m = self.modulus;
        RamifiedElement { a: (m - self.a) % m, b: (m - self.b) % m, ..self }
    }
}

impl Sub for RamifiedElement {
    type Output = RamifiedElement;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RamifiedElement {
    type Output = RamifiedElement;
    fn mul(self, rhs: Self) -> Self {
        let (x, y) = self.pair(&rhs);
        let m = x.modulus;
        let pi0 = x.pi0_mod();
        let a = (mul_mod(x.a, y.a, m) + mul_mod(pi0, mul_mod(x.b, y.b, m), m)) % m;
        let b = (mul_mod(x.a, y.b, m) + mul_mod(x.b, y.a, m)) % m;
        RamifiedElement { a, b, ..x }
    }
}

impl fmt::Display for RamifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}π (mod π₀^{})", self.a, self.b, self.prec)
    }
}

/// An element num·π^shift of F, with num ∈ 𝒪_F/π₀^M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: RamifiedElement,
    shift: i32,
}

impl FieldElement {
    pub fn new(num: RamifiedElement, shift: i32) -> Self {
        FieldElement { num, shift }
    }

    pub fn from_int(params: FieldParams, n: i128, prec: u32) -> Result<Self> {
        Ok(Self::new(RamifiedElement::from_int(params, n, prec)?, 0))
    }

    /// u·π^k for an integer u.
    pub fn monomial(params: FieldParams, u: i128, k: i32, prec: u32) -> Result<Self> {
        Ok(Self::new(RamifiedElement::from_int(params, u, prec)?, k))
    }

    pub fn zero(params: FieldParams, prec: u32) -> Result<Self> {
        Self::from_int(params, 0, prec)
    }

    pub fn num(&self) -> RamifiedElement {
        self.num
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn params(&self) -> FieldParams {
        self.num.params
    }

    /// The value is known modulo π^{abs_precision}.
    pub fn abs_precision(&self) -> i64 {
        2 * self.num.prec as i64 + self.shift as i64
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn val(&self) -> Result<i32> {
        Ok(self.num.val_pi()? as i32 + self.shift)
    }

    /// Valuation if determined, otherwise `None` (the value is then ≥ abs_precision).
    pub fn val_opt(&self) -> Option<i32> {
        self.val().ok()
    }

    /// The numerator for the given shift ≤ current shift, at π₀-precision `prec`.
    /// Requires 2·prec + shift ≤ abs_precision so the lifted digits are never read.
    fn rebase(&self, shift: i32, prec: u32) -> RamifiedElement {
        debug_assert!(shift <= self.shift);
        let mut n = RamifiedElement::new(self.num.params, self.num.a as i128, self.num.b as i128, prec)
            .expect("precision within the modulus cap");
        for _ in 0..(self.shift - shift) {
            n = n.mul_pi();
        }
        n
    }

    pub fn conj(&self) -> Self {
        let c = self.num.conj();
        let num = if self.shift.rem_euclid(2) == 0 { c } else { -c };
        FieldElement { num, shift: self.shift }
    }

    /// The same value with a unit numerator (zero stays as is).
    pub fn reduced(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(*self);
        }
        let w = self.num.val_pi()?;
        Ok(FieldElement { num: self.num.div_pi_pow(w)?, shift: self.shift + w as i32 })
    }

    /// Unit numerator, or for a zero the coarsest numerator at the highest known
    /// shift, so products keep abs precision min(abs_x + val_y, abs_y + val_x).
    fn for_product(self) -> Self {
        match self.reduced() {
            Ok(r) if !r.is_zero() => r,
            _ => FieldElement {
                num: RamifiedElement::zero(self.params(), 1).expect("precision 1 is always valid"),
                shift: (self.abs_precision() - 2) as i32,
            },
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let r = self.reduced()?;
        if r.is_zero() {
            return Err(Error::Precision("inverse of an element indistinguishable from 0".into()));
        }
        Ok(FieldElement { num: r.num.unit_inverse()?, shift: -r.shift })
    }

    /// Residue mod p of x/π^{val(x)}.
    pub fn leading_residue(&self) -> Result<u64> {
        self.num.leading_residue()
    }

    /// Whether the value lies in F₀ (is fixed by conjugation) at working precision.
    pub fn is_in_base_field(&self) -> bool {
        if self.shift.rem_euclid(2) == 0 {
            self.num.b == 0
        } else {
            self.num.a == 0
        }
    }

    /// χ of a nonzero element of F₀.
    pub fn chi(&self) -> Result<i8> {
        let v = self.val()?;
        let r = self.leading_residue()?;
        chi_general(r as i64, v, self.num.params.p)
    }

    /// The element is zero to at least π-adic order `k`.
    pub fn divisible_by_pi_pow(&self, k: i64) -> Result<bool> {
        match self.val_opt() {
            Some(v) => Ok(v as i64 >= k),
            None if self.abs_precision() >= k => Ok(true),
            None => Err(Error::Precision(format!(
                "cannot decide divisibility by π^{k} at absolute precision {}",
                self.abs_precision()
            ))),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        let s = self.shift.min(rhs.shift);
        let abs = self.abs_precision().min(rhs.abs_precision());
        let prec = ((abs - s as i64) / 2).clamp(1, self.params().max_precision() as i64) as u32;
        FieldElement { num: self.rebase(s, prec) + rhs.rebase(s, prec), shift: s }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        FieldElement { num: -self.num, shift: self.shift }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        let (x, y) = (self.for_product(), rhs.for_product());
        FieldElement { num: x.num * y.num, shift: x.shift + y.shift }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·π^{}", self.num, self.shift)
    }
}

/// r + s·g where g is a formal Gauss sum with g² = q·χ̄(−1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussNumber {
    pub r: BigRational,
    pub s: BigRational,
    q: u64,
}

impl GaussNumber {
    pub fn new(q: u64, r: BigRational, s: BigRational) -> Self {
        GaussNumber { r, s, q }
    }

    pub fn rational(q: u64, r: BigRational) -> Self {
        Self::new(q, r, BigRational::zero())
    }

    pub fn zero(q: u64) -> Self {
        Self::rational(q, BigRational::zero())
    }

    pub fn one(q: u64) -> Self {
        Self::rational(q, BigRational::one())
    }

    pub fn g(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::one())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The rational value of g².
    pub fn g_squared(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q as i64 * chi_bar_minus_one(self.q) as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        GaussNumber { r: &self.r * c, s: &self.s * c, q: self.q }
    }
}

impl Add for &GaussNumber {
    type Output = GaussNumber;
    fn add(self, rhs: Self) -> GaussNumber {
        assert_eq!(self.q, rhs.q);
        GaussNumber { r: &self.r + &rhs.r, s: &self.s + &rhs.s, q: self.q }
    }
}

impl Sub for &GaussNumber {
    type Output = GaussNumber;
    fn sub(self, rhs: Self) -> GaussNumber {
        assert_eq!(self.q, rhs.q);
        GaussNumber { r: &self.r - &rhs.r, s: &self.s - &rhs.s, q: self.q }
    }
}

impl Mul for &GaussNumber {
    type Output = GaussNumber;
    fn mul(self, rhs: Self) -> GaussNumber {
        assert_eq!(self.q, rhs.q);
        let g2 = self.g_squared();
        GaussNumber {
            r: &self.r * &rhs.r + &self.s * &rhs.s * g2,
            s: &self.r * &rhs.s + &self.s * &rhs.r,
            q: self.q,
        }
    }
}

impl fmt::Display for GaussNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})·g", self.r, self.s)
    }
}
