//! Closed-form local-density polynomials α(S,T,X), their derivative at X = 1,
//! primitive densities, and the fundamental-invariant recursion.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{coset_reps, normalize, transform, CanonicalForm, CosetLabel};
use crate::local_ring::FieldParams;
use crate::poly::{qpow, rat, DensityPolynomial};

pub use crate::poly::DensityPolynomial as Polynomial;

/// The rank-2 lattice S that T is represented by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SType {
    /// Diag{v,1} with χ(−v) = +1.
    Split,
    /// Diag{v′,1} with χ(−v′) = −1.
    NonSplit,
    /// [[0, π^{-1}], [−π^{-1}, 0]]
    Hyperbolic,
}

impl SType {
    /// ε₂ = χ(−v) for the unimodular diagonal types.
    pub fn eps2(&self) -> Option<i8> {
        match self {
            SType::Split => Some(1),
            SType::NonSplit => Some(-1),
            SType::Hyperbolic => None,
        }
    }

    pub fn from_eps2(eps2: i8) -> Result<Self> {
        match eps2 {
            1 => Ok(SType::Split),
            -1 => Ok(SType::NonSplit),
            e => Err(Error::InvalidInvariants(format!("eps2 = {e}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SType::Split => "split",
            SType::NonSplit => "nonsplit",
            SType::Hyperbolic => "hyperbolic",
        }
    }
}

fn x_pow(q: u64, c: BigRational, k: usize) -> DensityPolynomial {
    DensityPolynomial::monomial(q, c, k)
}

/// Σ_{e=lo}^{hi} q^{f(e)} X^e
fn geometric<F: Fn(i64) -> i64>(q: u64, lo: i64, hi: i64, f: F) -> DensityPolynomial {
    DensityPolynomial::from_terms(q, (lo..=hi).map(|e| (e as usize, qpow(q, f(e)))))
}

fn one_minus(q: u64, c: BigRational) -> DensityPolynomial {
    &DensityPolynomial::one(q) - &x_pow(q, c, 1)
}

fn check_sign(name: &str, e: i8) -> Result<i64> {
    match e {
        1 | -1 => Ok(e as i64),
        _ => Err(Error::InvalidInvariants(format!("{name} = {e}"))),
    }
}

fn check_diag(a: i64, b: i64) -> Result<()> {
    if b < 0 || a < b {
        return Err(Error::InvalidInvariants(format!("need a ≥ b ≥ 0, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// α(S,T,X) for S = Diag{v,1}, T = Diag{u₁ϖ₀^a, u₂ϖ₀^b}, ε₁ = χ(−u₁u₂), ε₂ = χ(−v).
pub fn formula_diag_unimodular(q: u64, a: i64, b: i64, eps1: i8, eps2: i8) -> Result<DensityPolynomial> {
    check_diag(a, b)?;
    let e1 = check_sign("eps1", eps1)?;
    let e2 = check_sign("eps2", eps2)?;
    let qq = rat(q as i64);
    let one_x = one_minus(q, BigRational::one());
    let t1 = (&one_x * &geometric(q, 0, b, |e| e)).scale(&(rat(1 + e2) + &qq * rat(e2)));
    let t2 = (&one_x * &geometric(q, 0, b, |e| -e)).shift((a + 1) as usize).scale(&(rat(-e1) * qpow(q, b + 1)));
    let t3 = (&x_pow(q, BigRational::one(), (a + b + 2) as usize) + &DensityPolynomial::one(q).scale(&rat(e1 * e2)))
        .scale(&(rat(-e1) * (rat(1) + &qq)));
    let t4 = (&DensityPolynomial::one(q) + &x_pow(q, rat(e1), (a - b) as usize))
        .shift((b + 1) as usize)
        .scale(&(rat(1 + e2) * qpow(q, b + 1)));
    Ok(&(&(&t1 + &t2) + &t3) + &t4)
}

/// α(𝓗,T,X) for T = Diag{u₁ϖ₀^a, u₂ϖ₀^b}.
pub fn formula_diag_hyperbolic(q: u64, a: i64, b: i64, eps1: i8) -> Result<DensityPolynomial> {
    check_diag(a, b)?;
    let e1 = check_sign("eps1", eps1)?;
    let inner = &geometric(q, 0, b, |e| e) + &geometric(q, a + 1, a + b + 1, |e| a + b + 1 - e).scale(&rat(e1));
    Ok(&one_minus(q, qpow(q, -2)) * &inner)
}

/// α(S,T,X) for S = Diag{v,1} and T = [[0, (−π)^{2a−1}], [π^{2a−1}, 0]].
pub fn formula_anti_unimodular(q: u64, a: i64, eps2: i8) -> Result<DensityPolynomial> {
    if a < 0 {
        return Err(Error::InvalidInvariants(format!("a = {a} < 0")));
    }
    let e2 = check_sign("eps2", eps2)?;
    let qq = rat(q as i64);
    let one_x = one_minus(q, BigRational::one());
    let t1 = (&one_x * &geometric(q, 0, a, |e| e)).scale(&(rat(1 + e2) + &qq * rat(e2)));
    let t2 = (&one_x * &geometric(q, a + 1, 2 * a, |e| -e)).scale(&(-qpow(q, 2 * a + 1)));
    let t3 = (&x_pow(q, BigRational::one(), (2 * a + 1) as usize) + &DensityPolynomial::one(q).scale(&rat(e2)))
        .scale(&-(rat(1) + &qq));
    let t4 = x_pow(q, (rat(1) + &qq) * rat(1 + e2) * qpow(q, a), (a + 1) as usize);
    Ok(&(&(&t1 + &t2) + &t3) + &t4)
}

/// α(𝓗,T,X) for T = [[0, (−π)^{2a−1}], [π^{2a−1}, 0]].
pub fn formula_anti_hyperbolic(q: u64, a: i64) -> Result<DensityPolynomial> {
    if a < 0 {
        return Err(Error::InvalidInvariants(format!("a = {a} < 0")));
    }
    let inner = &geometric(q, 0, a, |e| e) + &geometric(q, a + 1, 2 * a, |e| 2 * a - e);
    Ok(&one_minus(q, qpow(q, -2)) * &inner)
}

/// The local-density polynomial α(S,T,X) with X = q^{−2r} standing for S ⊕ 𝓗^r.
pub fn alpha_poly(q: u64, t: &CanonicalForm, s: SType) -> Result<DensityPolynomial> {
    match (*t, s.eps2()) {
        (CanonicalForm::Diagonal { a, b, eps1 }, Some(e2)) => formula_diag_unimodular(q, a as i64, b as i64, eps1, e2),
        (CanonicalForm::Diagonal { a, b, eps1 }, None) => formula_diag_hyperbolic(q, a as i64, b as i64, eps1),
        (CanonicalForm::AntiDiagonal { a }, Some(e2)) => formula_anti_unimodular(q, a as i64, e2),
        (CanonicalForm::AntiDiagonal { a }, None) => formula_anti_hyperbolic(q, a as i64),
    }
}

/// α(S,T) = α(S,T,1).
pub fn alpha_value_at_one(q: u64, t: &CanonicalForm, s: SType) -> Result<BigRational> {
    Ok(alpha_poly(q, t, s)?.eval(&BigRational::one()))
}

/// −d/dX α(S,T,X) at X = 1, with S split.
pub fn alpha_prime(q: u64, t: &CanonicalForm) -> Result<BigRational> {
    Ok(-alpha_poly(q, t, SType::Split)?.derivative().eval(&BigRational::one()))
}

/// The closed expression 2q^{b+1}(a−b+1) + 4Σ_{s=1}^{b} q^s − 2q − (q+1)(a+b)
/// for α′ in the anisotropic diagonal case, kept as an independent cross-check.
///
/// A second display of the same quantity in the literature carries q^{a+1} in
/// place of q^{b+1}; the two agree only when a = b, and the polynomial
/// derivative sides with q^{b+1}.
pub fn alpha_prime_closed_form(q: u64, a: i64, b: i64) -> BigRational {
    let qq = rat(q as i64);
    let sum: BigRational = (1..=b).map(|s| qpow(q, s)).fold(BigRational::zero(), |x, y| x + y);
    rat(2) * qpow(q, b + 1) * rat(a - b + 1) + rat(4) * sum - rat(2) * &qq - (&qq + rat(1)) * rat(a + b)
}

/// The primitive density β(𝓗,T,X).
pub fn beta_poly_h(q: u64, t: &CanonicalForm) -> Result<DensityPolynomial> {
    let h = one_minus(q, qpow(q, -2));
    match *t {
        CanonicalForm::AntiDiagonal { a: 0 } => Ok(h),
        t if t.is_integral() => Ok(&one_minus(q, BigRational::one()) * &h),
        t => Err(Error::InvalidInvariants(format!("{t} is neither integral nor hyperbolic"))),
    }
}

/// μ(a,b,X) = Σ_{e=0}^{b} q^eX^e − Σ_{e=a+1}^{a+b+1} q^{a+b+1−e}X^e, zero for b < 0.
pub fn mu_helper(q: u64, a: i64, b: i64) -> DensityPolynomial {
    if b < 0 {
        return DensityPolynomial::zero(q);
    }
    &geometric(q, 0, b, |e| e) - &geometric(q, a + 1, a + b + 1, |e| a + b + 1 - e)
}

/// ν(s,t,X) for (s,t) = (2a+1,2b+1) or (2a,2a); zero for t < 0.
pub fn nu_helper(q: u64, s: i64, t: i64) -> Result<DensityPolynomial> {
    if t < 0 {
        return Ok(DensityPolynomial::zero(q));
    }
    if s.rem_euclid(2) == 1 && t.rem_euclid(2) == 1 {
        let (a, b) = ((s - 1) / 2, (t - 1) / 2);
        Ok(&geometric(q, 0, b, |e| e) + &geometric(q, a + 1, a + b + 1, |e| a + b + 1 - e))
    } else if s == t {
        let a = s / 2;
        Ok(&geometric(q, 0, a, |e| e) + &geometric(q, a + 1, 2 * a, |e| 2 * a - e))
    } else {
        Err(Error::InvalidInvariants(format!("ν is not defined at ({s},{t})")))
    }
}

/// α(𝓗,T,X), with the convention that it vanishes once the second fundamental invariant is negative.
pub fn alpha_h_or_zero(q: u64, t: &CanonicalForm) -> Result<DensityPolynomial> {
    if t.fundamental_invariant().1 < 0 {
        Ok(DensityPolynomial::zero(q))
    } else {
        alpha_poly(q, t, SType::Hyperbolic)
    }
}

/// Images T[g^{-1}] of T over the q+1 index-1 cosets (γ_∞, γ_0, …, γ_{q−1}) and
/// the index-2 coset, read off from the invariant tables.
///
/// For the isotropic class Diagonal{a,a,+1} the table refers to the
/// representative [[0, π^{2a}], [π^{2a}, 0]].
pub fn tabulated_children(q: u64, t: &CanonicalForm) -> (Vec<CanonicalForm>, CanonicalForm) {
    let n = q as usize;
    match *t {
        CanonicalForm::Diagonal { a, b, eps1 } if a > b => {
            let mut v = vec![CanonicalForm::Diagonal { a: a - 1, b, eps1 }];
            v.extend(std::iter::repeat_n(CanonicalForm::Diagonal { a, b: b - 1, eps1 }, n));
            (v, CanonicalForm::Diagonal { a: a - 1, b: b - 1, eps1 })
        }
        CanonicalForm::Diagonal { a, b, eps1: -1 } => {
            let v = vec![CanonicalForm::Diagonal { a, b: b - 1, eps1: -1 }; n + 1];
            (v, CanonicalForm::Diagonal { a: a - 1, b: b - 1, eps1: -1 })
        }
        CanonicalForm::Diagonal { a, b, eps1 } => {
            let anti = CanonicalForm::AntiDiagonal { a };
            let mut v = vec![anti, anti];
            v.extend(std::iter::repeat_n(CanonicalForm::Diagonal { a, b: a - 1, eps1 }, n - 1));
            (v, CanonicalForm::Diagonal { a: a - 1, b: b - 1, eps1 })
        }
        CanonicalForm::AntiDiagonal { a } => (
            vec![CanonicalForm::Diagonal { a: a - 1, b: a - 1, eps1: 1 }; n + 1],
            CanonicalForm::AntiDiagonal { a: a - 1 },
        ),
    }
}

/// Images T[g^{-1}] computed by explicit matrix transformation and reduction.
pub fn explicit_children(params: FieldParams, t: &CanonicalForm) -> Result<(Vec<CanonicalForm>, CanonicalForm)> {
    let prec = (2 * t.max_pi0_valuation().max(0) as u32 + 8).min(params.max_precision());
    let rep = t.representative(params, prec)?;
    let mut ones = Vec::new();
    let mut two = None;
    for g in coset_reps(params, prec)? {
        let cf = normalize(&transform(&rep, &g)?)?;
        match g.label {
            CosetLabel::PiPi => two = Some(cf),
            _ => ones.push(cf),
        }
    }
    Ok((ones, two.expect("Diag{π,π} is always present")))
}

/// α(𝓗,T) − X·Σ_{i=1} α(𝓗,T[g^{-1}]) + qX²·α(𝓗,T[Diag{π,π}^{-1}]).
pub fn recursion_lhs(q: u64, t: &CanonicalForm, ones: &[CanonicalForm], two: &CanonicalForm) -> Result<DensityPolynomial> {
    let mut sum = DensityPolynomial::zero(q);
    for c in ones {
        sum = &sum + &alpha_h_or_zero(q, c)?;
    }
    let lhs = &alpha_poly(q, t, SType::Hyperbolic)? - &sum.shift(1);
    Ok(&lhs + &alpha_h_or_zero(q, two)?.shift(2).scale(&rat(q as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionReport {
    pub form: CanonicalForm,
    pub lhs_tabulated: DensityPolynomial,
    pub lhs_explicit: DensityPolynomial,
    pub rhs: DensityPolynomial,
    /// lhs/(1 − q^{−2}X) when the division is exact.
    pub residual: Option<DensityPolynomial>,
    pub pass: bool,
}

/// Check the recursion for α(𝓗,·) at T through the tables and through explicit
/// transformation of a representative.
pub fn verify_recursion(params: FieldParams, t: &CanonicalForm) -> Result<RecursionReport> {
    let q = params.q;
    let (i0, _) = t.fundamental_invariant();
    if i0 < 0 || !(t.is_integral() || *t == CanonicalForm::AntiDiagonal { a: 0 }) {
        return Err(Error::InvalidInvariants(format!("{t} is below the range of the recursion")));
    }
    let (ones, two) = tabulated_children(q, t);
    let lhs_tabulated = recursion_lhs(q, t, &ones, &two)?;
    let (ones, two) = explicit_children(params, t)?;
    let lhs_explicit = recursion_lhs(q, t, &ones, &two)?;
    let rhs = beta_poly_h(q, t)?;
    let residual = lhs_tabulated.div_exact(&one_minus(q, qpow(q, -2)));
    let pass = lhs_tabulated == rhs && lhs_explicit == rhs;
    Ok(RecursionReport { form: *t, lhs_tabulated, lhs_explicit, rhs, residual, pass })
}

/// Every canonical form with fundamental invariant componentwise ≤ (m, m).
pub fn forms_up_to(inv_max: i32) -> Vec<CanonicalForm> {
    let mut out = Vec::new();
    for a in 0.. {
        if 2 * a > inv_max {
            break;
        }
        out.push(CanonicalForm::AntiDiagonal { a });
        if 2 * a < inv_max {
            for b in 0..=a {
                for eps1 in [1, -1] {
                    out.push(CanonicalForm::Diagonal { a, b, eps1 });
                }
            }
        }
    }
    out
}
