//! Univariate polynomials in X with exact rational coefficients, tagged with q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// q^e as an exact rational; e may be negative.
pub fn qpow(q: u64, e: i64) -> BigRational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// Render an exact rational as "n" or "n/d".
pub fn rat_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPolynomial {
    q: u64,
    coeffs: Vec<BigRational>,
}

impl DensityPolynomial {
    pub fn new(q: u64, coeffs: Vec<BigRational>) -> Self {
        let mut p = DensityPolynomial { q, coeffs };
        p.trim();
        p
    }

    pub fn zero(q: u64) -> Self {
        Self::new(q, Vec::new())
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, vec![BigRational::one()])
    }

    /// c·X^k
    pub fn monomial(q: u64, c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(q, coeffs)
    }

    /// Σ c_k X^k over the given (k, c_k) pairs.
    pub fn from_terms<I: IntoIterator<Item = (usize, BigRational)>>(q: u64, terms: I) -> Self {
        let mut p = Self::zero(q);
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn add_term(&mut self, k: usize, c: &BigRational) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, BigRational::zero());
        }
        self.coeffs[k] += c;
        self.trim();
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.q, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.q, coeffs)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.q,
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rat(k as i64)).collect(),
        )
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_string).collect()
    }

    /// Exact division by a polynomial; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &DensityPolynomial) -> Option<Self> {
        let dd = d.degree()?;
        let lead = d.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Some(Self::zero(self.q)) } else { None };
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(self.q, quot))
        } else {
            None
        }
    }
}

impl Add for &DensityPolynomial {
    type Output = DensityPolynomial;
    fn add(self, rhs: Self) -> DensityPolynomial {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensityPolynomial::new(self.q, (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &DensityPolynomial {
    type Output = DensityPolynomial;
    fn sub(self, rhs: Self) -> DensityPolynomial {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensityPolynomial::new(self.q, (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &DensityPolynomial {
    type Output = DensityPolynomial;
    fn neg(self) -> DensityPolynomial {
        self.scale(&rat(-1))
    }
}

impl Mul for &DensityPolynomial {
    type Output = DensityPolynomial;
    fn mul(self, rhs: Self) -> DensityPolynomial {
        debug_assert_eq!(self.q, rhs.q);
        if self.is_zero() || rhs.is_zero() {
            return DensityPolynomial::zero(self.q);
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        DensityPolynomial::new(self.q, coeffs)
    }
}

impl fmt::Display for DensityPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{}", rat_string(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", rat_string(&a))?;
                    }
                    if k == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
