//! Intersection numbers of special cycles on the Krämer model: μ_q(T), the
//! decomposition of Z^Kra(x), the pairwise intersection table and its
//! I + II + III assembly, and lengths of lifts between quasi-canonical lifts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{qpow, rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ComponentKind {
    #[serde(rename = "Z0_kappa")]
    Z0Kappa,
    #[serde(rename = "Zs_plus")]
    ZsPlus,
    #[serde(rename = "Zs_minus")]
    ZsMinus,
    #[serde(rename = "Z0_kappabar")]
    Z0KappaBar,
    #[serde(rename = "Zs_plus_bar")]
    ZsPlusBar,
    #[serde(rename = "Zs_minus_bar")]
    ZsMinusBar,
    Exc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Kappa,
    KappaBar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl ComponentKind {
    pub fn side(&self) -> Option<Side> {
        use ComponentKind::*;
        match self {
            Z0Kappa | ZsPlus | ZsMinus => Some(Side::Kappa),
            Z0KappaBar | ZsPlusBar | ZsMinusBar => Some(Side::KappaBar),
            Exc => None,
        }
    }

    pub fn sign(&self) -> Option<Sign> {
        use ComponentKind::*;
        match self {
            ZsPlus | ZsPlusBar => Some(Sign::Plus),
            ZsMinus | ZsMinusBar => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycleComponent {
    pub kind: ComponentKind,
    pub s: u32,
    pub multiplicity: u32,
}

impl CycleComponent {
    fn new(kind: ComponentKind, s: u32, multiplicity: u32) -> Self {
        CycleComponent { kind, s, multiplicity }
    }
}

fn check_nonneg(name: &str, v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::InvalidParams(format!("{name} = {v} must be a nonnegative integer")))
}

fn check_q(q: u64) -> Result<i128> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("q = {q} must be at least 2")));
    }
    Ok(q as i128)
}

/// μ_q(T) = 2 Σ_{s=0}^{min(a,b)} q^s (a+b+1−2s) − a − b − 2.
pub fn mu_q(q: u64, a: i64, b: i64) -> Result<i128> {
    let qi = check_q(q)?;
    let (a, b) = (check_nonneg("a", a)? as i128, check_nonneg("b", b)? as i128);
    let mut sum = 0i128;
    let mut qs = 1i128;
    for s in 0..=a.min(b) {
        sum += qs * (a + b + 1 - 2 * s);
        qs *= qi;
    }
    Ok(2 * sum - a - b - 2)
}

/// Z^Kra(x) = Z₀ + Σ_{s=1}^a (Z_{s,+} + Z_{s,−}) + (a+1)·Exc on the given side.
pub fn decompose_on(side: Side, a: i64) -> Result<Vec<CycleComponent>> {
    let a = check_nonneg("a", a)?;
    let (z0, plus, minus) = match side {
        Side::Kappa => (ComponentKind::Z0Kappa, ComponentKind::ZsPlus, ComponentKind::ZsMinus),
        Side::KappaBar => (ComponentKind::Z0KappaBar, ComponentKind::ZsPlusBar, ComponentKind::ZsMinusBar),
    };
    let mut out = vec![CycleComponent::new(z0, 0, 1)];
    out.extend((1..=a).map(|s| CycleComponent::new(plus, s, 1)));
    out.extend((1..=a).map(|s| CycleComponent::new(minus, s, 1)));
    out.push(CycleComponent::new(ComponentKind::Exc, 0, a + 1));
    Ok(out)
}

/// Decomposition of Z^Kra(x) on the κ side.
pub fn decompose_special_cycle(a: i64) -> Result<Vec<CycleComponent>> {
    decompose_on(Side::Kappa, a)
}

/// Intersection number of a component of Z^Kra(x) with one of Z^Kra(y).
pub fn pair_intersection(c1: &CycleComponent, c2: &CycleComponent, q: u64) -> Result<i128> {
    let qi = check_q(q)?;
    match (c1.kind.side(), c2.kind.side()) {
        (None, None) => Ok(-2),
        (Some(_), None) | (None, Some(_)) => Ok(1),
        (Some(x), Some(y)) if x == y => Err(Error::Unsupported(format!(
            "no intersection number for two horizontal components on the same side ({:?}, {:?})",
            c1.kind, c2.kind
        ))),
        (Some(_), Some(_)) => match (c1.kind.sign(), c2.kind.sign()) {
            (Some(s1), Some(s2)) if s1 == s2 => Ok(qi.pow(c1.s.min(c2.s)) - 1),
            _ => Ok(0),
        },
    }
}

/// Z_{s,±}^κ · Z^Kra(y) for y of valuation b.
pub fn z_dot_special(q: u64, s: i64, _sign: Sign, b: i64) -> Result<i128> {
    let qi = check_q(q)?;
    let (s, b) = (check_nonneg("s", s)?, check_nonneg("b", b)?);
    let geom = |k: u32| (qi.pow(k) - 1) / (qi - 1);
    Ok(if b <= s {
        geom(b + 1)
    } else {
        geom(s) + (b as i128 + 1 - s as i128) * qi.pow(s)
    })
}

/// The same quantity summed over the pair table against the decomposition of Z^Kra(y).
pub fn z_dot_special_from_table(q: u64, s: i64, sign: Sign, b: i64) -> Result<i128> {
    let s = check_nonneg("s", s)?;
    let kind = match sign {
        Sign::Plus => ComponentKind::ZsPlus,
        Sign::Minus => ComponentKind::ZsMinus,
    };
    let z = CycleComponent::new(kind, s, 1);
    let mut total = 0;
    for c in decompose_on(Side::KappaBar, b)? {
        total += c.multiplicity as i128 * pair_intersection(&z, &c, q)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub x: CycleComponent,
    pub y: CycleComponent,
    #[serde(serialize_with = "crate::ser::display")]
    pub value: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub q: u64,
    pub a: u32,
    pub b: u32,
    pub components_x: Vec<CycleComponent>,
    pub components_y: Vec<CycleComponent>,
    pub pair_table: Vec<PairEntry>,
    #[serde(rename = "I", serialize_with = "crate::ser::display")]
    pub i: i128,
    #[serde(rename = "II", serialize_with = "crate::ser::display")]
    pub ii: i128,
    #[serde(rename = "III", serialize_with = "crate::ser::display")]
    pub iii: i128,
    #[serde(serialize_with = "crate::ser::display")]
    pub total: i128,
    #[serde(serialize_with = "crate::ser::display")]
    pub mu: i128,
}

impl IntersectionReport {
    /// I, II and III in their closed forms.
    pub fn closed_terms(q: u64, a: i64, b: i64) -> Result<(i128, i128, i128)> {
        let qi = check_q(q)?;
        let (a, b) = (check_nonneg("a", a)? as i128, check_nonneg("b", b)? as i128);
        let i = -2 * (a + 1) * (b + 1);
        let ii = (2 * a + 1) * (b + 1) + (2 * b + 1) * (a + 1);
        let mut sum = 0;
        for s in 1..=b {
            for t in 1..=a {
                sum += qi.pow(s.min(t) as u32);
            }
        }
        Ok((i, ii, 2 * (sum - a * b)))
    }
}

/// Z^Kra(x)·Z^Kra(y) for x = i₁∘π^a and y = i₂∘π^b, summed over the pair table.
pub fn assemble_intersection(q: u64, a: i64, b: i64) -> Result<IntersectionReport> {
    let xs = decompose_on(Side::Kappa, a)?;
    let ys = decompose_on(Side::KappaBar, b)?;
    let (mut i, mut ii, mut iii) = (0i128, 0i128, 0i128);
    let mut table = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            let value = pair_intersection(x, y, q)?;
            let w = (x.multiplicity * y.multiplicity) as i128 * value;
            match (x.kind == ComponentKind::Exc, y.kind == ComponentKind::Exc) {
                (true, true) => i += w,
                (false, false) => iii += w,
                _ => ii += w,
            }
            table.push(PairEntry { x: *x, y: *y, value });
        }
    }
    let mu = mu_q(q, a, b)?;
    let closed = IntersectionReport::closed_terms(q, a, b)?;
    let total = i + ii + iii;
    if total != mu || closed != (i, ii, iii) {
        return Err(Error::Mismatch(format!(
            "assembly at (q, a, b) = ({q}, {a}, {b}): I + II + III = {i} + {ii} + {iii} = {total}, \
             closed terms {closed:?}, mu = {mu}"
        )));
    }
    Ok(IntersectionReport {
        q,
        a: a as u32,
        b: b as u32,
        components_x: xs,
        components_y: ys,
        pair_table: table,
        i,
        ii,
        iii,
        total,
        mu,
    })
}

/// e_s = 2q^s.
pub fn ramification_index(q: u64, s: u32) -> BigRational {
    qpow(q, s as i64) * rat(2)
}

fn geometric(q: u64, k: i64) -> BigRational {
    // (q^k − 1)/(q − 1), valid for negative k too.
    (qpow(q, k) - BigRational::one()) / rat(q as i64 - 1)
}

/// n_{0,s}(ψ)·e_s/e for l = l_{0,s}(ψ).
pub fn lifting_length(q: u64, s: i64, l: i64) -> Result<BigRational> {
    check_q(q)?;
    let (s, l) = (check_nonneg("s", s)? as i64, check_nonneg("l", l)? as i64);
    Ok(if l < s {
        geometric(q, l + 1)
    } else {
        geometric(q, s) + qpow(q, s) * rat(l + 1 - s)
    })
}

/// n_{r,r}(ψ)·e_r/e for l = l_{r,r}(ψ).
pub fn lifting_length_diagonal(q: u64, r: i64, l: i64) -> Result<BigRational> {
    check_q(q)?;
    let (r, l) = (check_nonneg("r", r)? as i64, check_nonneg("l", l)? as i64);
    let qq = rat(q as i64);
    let one = BigRational::one();
    Ok(if l <= 2 * r && l % 2 == 0 {
        (qpow(q, l / 2) - &one) * (&qq + &one) / (&qq - &one) + one
    } else if l <= 2 * r {
        let k = (l - 1) / 2;
        (qpow(q, k) - &one) * (&qq + &one) / (&qq - &one) + qpow(q, k) + one
    } else {
        let e_r = ramification_index(q, r as u32);
        (qpow(q, r - 1) - &one) * (&qq + &one) / (&qq - &one)
            + qpow(q, r - 1)
            + BigRational::new(BigInt::from(l + 1 - 2 * r), BigInt::from(2)) * e_r
            + one
    })
}

/// n_{r,s}(ψ)·e_s/e computed by descending n_{r,s}(πψ) = n_{r,s−1}(ψ) + e/e_s to
/// either s = r or l = 0 with s ≥ 2r.
pub fn lifting_length_inductive(q: u64, r: i64, s: i64, l: i64) -> Result<BigRational> {
    check_q(q)?;
    let (r, mut s, mut l) = (check_nonneg("r", r)?, check_nonneg("s", s)?, check_nonneg("l", l)?);
    if r > s {
        return Err(Error::InvalidParams(format!("need r ≤ s, got r = {r}, s = {s}")));
    }
    // Each step multiplies the normalized value below by e_s/e_{s−1} = q and adds 1.
    let mut steps = 0u32;
    while s > r && l > 0 {
        s -= 1;
        l -= 1;
        steps += 1;
    }
    let base = if s == r {
        lifting_length_diagonal(q, r as i64, l as i64)?
    } else if s >= 2 * r {
        // l = 0: ½·e_r after normalization.
        ramification_index(q, r) / rat(2)
    } else {
        return Err(Error::Unsupported(format!(
            "l = 0 at r < s < 2r (r = {r}, s = {s}) is outside the inductive scheme"
        )));
    };
    let qq = rat(q as i64);
    let mut value = base;
    for _ in 0..steps {
        value = value * &qq + BigRational::one();
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_examples() {
        assert_eq!(mu_q(3, 0, 0), Ok(0));
        assert_eq!(mu_q(3, 1, 0), Ok(1));
        assert_eq!(mu_q(5, 1, 1), Ok(12));
        // All three terms s = 0, 1, 2: 2·(5 + 9 + 9) − 6.
        assert_eq!(mu_q(3, 2, 2), Ok(40));
        assert!(mu_q(3, -1, 0).is_err());
    }

    #[test]
    fn decomposition_shapes() {
        let d = decompose_special_cycle(2).unwrap();
        assert_eq!(d.len(), 6);
        assert_eq!(d.last().unwrap().multiplicity, 3);
        assert_eq!(decompose_special_cycle(0).unwrap().len(), 2);
        let total: u32 = decompose_special_cycle(5).unwrap().iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 2 * 5 + 1 + 6);
    }

    #[test]
    fn pair_table_examples() {
        use ComponentKind::*;
        let c = CycleComponent::new;
        assert_eq!(pair_intersection(&c(ZsPlus, 2, 1), &c(ZsPlusBar, 3, 1), 5), Ok(24));
        assert_eq!(pair_intersection(&c(ZsMinus, 1, 1), &c(ZsPlusBar, 4, 1), 5), Ok(0));
        assert_eq!(pair_intersection(&c(Exc, 0, 1), &c(Exc, 0, 1), 5), Ok(-2));
        assert_eq!(pair_intersection(&c(Z0Kappa, 0, 1), &c(Z0KappaBar, 0, 1), 5), Ok(0));
        assert!(pair_intersection(&c(ZsPlus, 1, 1), &c(ZsMinus, 1, 1), 5).is_err());
    }

    #[test]
    fn assembly_examples() {
        let r = assemble_intersection(3, 1, 1).unwrap();
        assert_eq!((r.i, r.ii, r.iii, r.total), (-8, 12, 4, 8));
        let r = assemble_intersection(7, 1, 0).unwrap();
        assert_eq!((r.i, r.ii, r.iii, r.total), (-4, 5, 0, 1));
    }

    #[test]
    fn z_dot_examples() {
        assert_eq!(z_dot_special(3, 1, Sign::Plus, 0), Ok(1));
        assert_eq!(z_dot_special(3, 0, Sign::Minus, 2), Ok(3));
        assert_eq!(z_dot_special(5, 2, Sign::Plus, 2), Ok(31));
        for s in 0..6 {
            for b in 0..6 {
                assert_eq!(z_dot_special(3, s, Sign::Plus, b), z_dot_special_from_table(3, s, Sign::Plus, b));
            }
        }
    }

    #[test]
    fn lifting_examples() {
        assert_eq!(lifting_length(3, 2, 1), Ok(rat(4)));
        assert_eq!(lifting_length(3, 1, 3), Ok(rat(10)));
        assert_eq!(lifting_length(5, 0, 4), Ok(rat(5)));
        assert_eq!(lifting_length_inductive(3, 1, 1, 0), Ok(rat(1)));
        assert_eq!(lifting_length_inductive(3, 1, 2, 0), Ok(rat(3)));
        assert!(lifting_length_inductive(3, 2, 3, 0).is_err());
        for q in [3, 5] {
            for s in 0..=6 {
                for l in 0..=6 {
                    assert_eq!(lifting_length_inductive(q, 0, s, l), lifting_length(q, s, l));
                }
            }
        }
    }
}
