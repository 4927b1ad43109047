//! Hermitian Gram matrices, reduction to canonical form, and the coset
//! representatives used by the density recursion.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::local_ring::{chi_bar, FieldElement, FieldParams, RamifiedElement};

/// Classification of a rank-2 hermitian lattice.
///
/// `Diagonal{a, b, eps1}` stands for Diag{u₁ϖ₀^a, u₂ϖ₀^b} with ϖ₀ = −π₀ and
/// eps1 = χ(−u₁u₂); `AntiDiagonal{a}` for the plane with off-diagonal entries
/// ±π^{2a−1}. Integral forms have b ≥ 0 (resp. a ≥ 1); `normalize` may also
/// return forms outside that range when its input is not integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CanonicalForm {
    Diagonal { a: i32, b: i32, eps1: i8 },
    AntiDiagonal { a: i32 },
}

impl CanonicalForm {
    pub fn diagonal(a: i32, b: i32, eps1: i8) -> Result<Self> {
        if a < b || eps1.abs() != 1 {
            return Err(Error::InvalidInvariants(format!("Diagonal{{a={a}, b={b}, eps1={eps1}}}")));
        }
        Ok(CanonicalForm::Diagonal { a, b, eps1 })
    }

    pub fn fundamental_invariant(&self) -> (i32, i32) {
        match *self {
            CanonicalForm::Diagonal { a, b, .. } => (2 * a + 1, 2 * b + 1),
            CanonicalForm::AntiDiagonal { a } => (2 * a, 2 * a),
        }
    }

    pub fn chi(&self) -> i8 {
        match *self {
            CanonicalForm::Diagonal { eps1, .. } => eps1,
            CanonicalForm::AntiDiagonal { .. } => 1,
        }
    }

    /// Whether the form lies in Herm₂(𝒪_{F₀}) with integral off-diagonal entries.
    pub fn is_integral(&self) -> bool {
        match *self {
            CanonicalForm::Diagonal { b, .. } => b >= 0,
            CanonicalForm::AntiDiagonal { a } => a >= 1,
        }
    }

    /// Largest π₀-adic valuation among the entries of the standard representative.
    pub fn max_pi0_valuation(&self) -> i32 {
        match *self {
            CanonicalForm::Diagonal { a, .. } => a,
            CanonicalForm::AntiDiagonal { a } => a,
        }
    }

    /// A Gram matrix in the class. For the isotropic diagonal class with a = b
    /// this is the antidiagonal matrix with entries π^{2a}, matching the
    /// representative used in the recursion tables.
    pub fn representative(&self, params: FieldParams, prec: u32) -> Result<GramMatrix> {
        match *self {
            CanonicalForm::Diagonal { a, b, eps1 } if a == b && eps1 == 1 => {
                let z = FieldElement::zero(params, prec)?;
                let x = FieldElement::monomial(params, 1, 2 * a, prec)?;
                GramMatrix::new(params, 2, vec![z, x, x, z])
            }
            CanonicalForm::Diagonal { .. } => self.diagonal_representative(params, prec),
            CanonicalForm::AntiDiagonal { a } => {
                let z = FieldElement::zero(params, prec)?;
                let x = FieldElement::monomial(params, 1, 2 * a - 1, prec)?;
                GramMatrix::new(params, 2, vec![z, -x, x, z])
            }
        }
    }

    /// Diag{u₁ϖ₀^a, ϖ₀^b} with χ(−u₁) = eps1; errors for antidiagonal forms.
    pub fn diagonal_representative(&self, params: FieldParams, prec: u32) -> Result<GramMatrix> {
        match *self {
            CanonicalForm::Diagonal { a, b, eps1 } => {
                let u1: i128 = if eps1 == 1 { -1 } else { -(params.nonresidue() as i128) };
                let sa: i128 = if a.rem_euclid(2) == 0 { 1 } else { -1 };
                let sb: i128 = if b.rem_euclid(2) == 0 { 1 } else { -1 };
                let d1 = FieldElement::monomial(params, u1 * sa, 2 * a, prec)?;
                let d2 = FieldElement::monomial(params, sb, 2 * b, prec)?;
                GramMatrix::diagonal(params, &[d1, d2])
            }
            CanonicalForm::AntiDiagonal { .. } => {
                Err(Error::InvalidInvariants("antidiagonal forms have no diagonal representative".into()))
            }
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CanonicalForm::Diagonal { a, b, eps1 } => write!(f, "Diagonal{{{a},{b},{eps1:+}}}"),
            CanonicalForm::AntiDiagonal { a } => write!(f, "AntiDiagonal{{{a}}}"),
        }
    }
}

pub fn fundamental_invariant(cf: &CanonicalForm) -> (i32, i32) {
    cf.fundamental_invariant()
}

/// An n×n hermitian matrix over F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<FieldElement>,
    params: FieldParams,
}

impl GramMatrix {
    /// Row-major entries; checks hermitian symmetry at working precision.
    pub fn new(params: FieldParams, n: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::NotHermitian(format!("{} entries for rank {n}", entries.len())));
        }
        let m = GramMatrix { n, entries, params };
        for i in 0..n {
            if !m.entry(i, i).is_in_base_field() {
                return Err(Error::NotHermitian(format!("diagonal entry {i} is not in F0")));
            }
            for j in i + 1..n {
                if !(m.entry(j, i) - m.entry(i, j).conj()).is_zero() {
                    return Err(Error::NotHermitian(format!("entries ({i},{j}) and ({j},{i})")));
                }
            }
        }
        Ok(m)
    }

    pub fn diagonal(params: FieldParams, d: &[FieldElement]) -> Result<Self> {
        let n = d.len();
        let prec = d.iter().map(|x| x.num().prec()).min().unwrap_or(1);
        let zero = FieldElement::zero(params, prec)?;
        let mut entries = vec![zero; n * n];
        for (i, x) in d.iter().enumerate() {
            entries[i * n + i] = *x;
        }
        Self::new(params, n, entries)
    }

    /// Diagonal matrix with integer entries.
    pub fn diagonal_ints(params: FieldParams, d: &[i128], prec: u32) -> Result<Self> {
        let d: Vec<_> = d.iter().map(|&x| FieldElement::from_int(params, x, prec)).collect::<Result<_>>()?;
        Self::diagonal(params, &d)
    }

    /// The hyperbolic plane [[0, π^{-1}], [−π^{-1}, 0]].
    pub fn hyperbolic(params: FieldParams, prec: u32) -> Result<Self> {
        let z = FieldElement::zero(params, prec)?;
        let x = FieldElement::monomial(params, 1, -1, prec)?;
        Self::new(params, 2, vec![z, x, -x, z])
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> Result<Self> {
        let n = self.n + other.n;
        let prec = self.prec().min(other.prec());
        let zero = FieldElement::zero(self.params, prec)?;
        let mut entries = vec![zero; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[i * n + j] = self.entry(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                entries[(i + self.n) * n + j + self.n] = other.entry(i, j);
            }
        }
        Self::new(self.params, n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    /// Smallest numerator precision among the entries.
    pub fn prec(&self) -> u32 {
        self.entries.iter().map(|x| x.num().prec()).min().unwrap()
    }

    pub fn det(&self) -> Result<FieldElement> {
        match self.n {
            1 => Ok(self.entry(0, 0)),
            2 => Ok(self.entry(0, 0) * self.entry(1, 1) - self.entry(0, 1) * self.entry(1, 0)),
            n => Err(Error::Unsupported(format!("determinant of rank {n}"))),
        }
    }

    /// χ((−1)^{n(n−1)/2} det T) from the raw determinant.
    pub fn chi(&self) -> Result<i8> {
        let d = self.det()?;
        if d.val_opt().is_none() {
            return Err(Error::Degenerate("determinant is zero at working precision".into()));
        }
        let d = if (self.n * (self.n - 1) / 2) % 2 == 1 { -d } else { d };
        d.chi()
    }

    /// Smallest determined π-valuation among the nonzero entries.
    pub fn min_valuation(&self) -> Option<i32> {
        self.entries.iter().filter_map(|x| x.val_opt()).min()
    }

    /// Largest determined π-valuation among the nonzero entries.
    pub fn max_valuation(&self) -> Option<i32> {
        self.entries.iter().filter_map(|x| x.val_opt()).max()
    }

    /// g* T g for a square matrix g given row-major.
    pub fn congruence(&self, g: &[FieldElement]) -> Result<GramMatrix> {
        let n = self.n;
        if g.len() != n * n {
            return Err(Error::Unsupported("congruence by a non-square matrix".into()));
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::zero(self.params, self.prec())?;
                for k in 0..n {
                    for l in 0..n {
                        acc = acc + g[k * n + i].conj() * self.entry(k, l) * g[l * n + j];
                    }
                }
                out.push(acc);
            }
        }
        GramMatrix::new(self.params, n, out)
    }
}

fn unit_class_of_diagonal(d: &FieldElement) -> Result<(i32, i8)> {
    let v = d.val()?;
    if v.rem_euclid(2) != 0 {
        return Err(Error::NotHermitian(format!("diagonal pivot has odd valuation {v}")));
    }
    let k = v / 2;
    let res = d.leading_residue()? as i64;
    // d = res·π₀^k·(…) = res·(−1)^k·ϖ₀^k·(…)
    let u = if k.rem_euclid(2) == 0 { res } else { -res };
    Ok((k, chi_bar(u, d.params().p)))
}

fn split_pivot(d1: FieldElement, x: FieldElement, t22: FieldElement) -> Result<CanonicalForm> {
    let d2 = t22 - x.conj() * x * d1.inv()?;
    if d2.val_opt().is_none() {
        return Err(Error::Degenerate("complement of the pivot is zero at working precision".into()));
    }
    let (k1, c1) = unit_class_of_diagonal(&d1)?;
    let (k2, c2) = unit_class_of_diagonal(&d2)?;
    let eps1 = d1.params().chi_minus_one() * c1 * c2;
    Ok(CanonicalForm::Diagonal { a: k1.max(k2), b: k1.min(k2), eps1 })
}

/// Reduce a rank-2 hermitian matrix to its canonical form by Jordan splitting.
pub fn normalize(t: &GramMatrix) -> Result<CanonicalForm> {
    if t.n() != 2 {
        return Err(Error::Unsupported(format!("normalize of rank {}", t.n())));
    }
    let (t11, t12, t22) = (t.entry(0, 0), t.entry(0, 1), t.entry(1, 1));
    let vals = [t11.val_opt(), t22.val_opt(), t12.val_opt()];
    let vmin = vals
        .iter()
        .flatten()
        .copied()
        .min()
        .ok_or_else(|| Error::Degenerate("all entries are zero at working precision".into()))?;
    for (v, x) in vals.iter().zip([t11, t22, t12]) {
        if v.is_none() && x.abs_precision() <= vmin as i64 {
            return Err(Error::Precision(format!(
                "an entry known only modulo π^{} cannot be compared with valuation {vmin}",
                x.abs_precision()
            )));
        }
    }
    if vals[0] == Some(vmin) {
        split_pivot(t11, t12, t22)
    } else if vals[1] == Some(vmin) {
        split_pivot(t22, t12.conj(), t11)
    } else if vmin.rem_euclid(2) == 1 {
        let det = t.det()?;
        match det.val_opt() {
            Some(v) if v == 2 * vmin => Ok(CanonicalForm::AntiDiagonal { a: (vmin + 1) / 2 }),
            Some(v) => Err(Error::NotHermitian(format!("determinant valuation {v} for an odd-scale plane"))),
            None => Err(Error::Degenerate("determinant is zero at working precision".into())),
        }
    } else {
        // Off-diagonal entry of even valuation: the vector e₁+e₂ has norm of that valuation.
        let s11 = t11 + t22 + t12 + t12.conj();
        let s12 = t12 + t22;
        split_pivot(s11, s12, t22)
    }
}

/// χ of the class, computed from its invariants.
pub fn chi_of(cf: &CanonicalForm) -> i8 {
    cf.chi()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CosetLabel {
    GammaInf,
    GammaX(u64),
    PiPi,
}

/// A representative of U₂\π_{2,i}: γ_∞, γ_x (i = 1) or Diag{π,π} (i = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub label: CosetLabel,
    pub matrix: [[RamifiedElement; 2]; 2],
}

impl CosetRep {
    /// The index i with det g of π-valuation i.
    pub fn index(&self) -> u32 {
        match self.label {
            CosetLabel::PiPi => 2,
            _ => 1,
        }
    }
}

/// γ_∞, γ_0, …, γ_{p−1}, then Diag{π,π}.
pub fn coset_reps(params: FieldParams, prec: u32) -> Result<Vec<CosetRep>> {
    let zero = RamifiedElement::zero(params, prec)?;
    let one = RamifiedElement::one(params, prec)?;
    let pi = RamifiedElement::pi(params, prec)?;
    let mut reps = vec![CosetRep { label: CosetLabel::GammaInf, matrix: [[pi, zero], [zero, one]] }];
    for x in 0..params.p {
        let xe = RamifiedElement::from_int(params, x as i128, prec)?;
        reps.push(CosetRep { label: CosetLabel::GammaX(x), matrix: [[one, xe], [zero, pi]] });
    }
    reps.push(CosetRep { label: CosetLabel::PiPi, matrix: [[pi, zero], [zero, pi]] });
    Ok(reps)
}

/// T[g^{-1}] = (g^{-1})* T g^{-1}.
pub fn transform(t: &GramMatrix, g: &CosetRep) -> Result<GramMatrix> {
    if t.n() != 2 {
        return Err(Error::Unsupported("transform of rank other than 2".into()));
    }
    let m = g.matrix;
    let e = |x: RamifiedElement| FieldElement::new(x, 0);
    let det = e(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    let dinv = det.inv()?;
    let ginv = [e(m[1][1]) * dinv, -e(m[0][1]) * dinv, -e(m[1][0]) * dinv, e(m[0][0]) * dinv];
    t.congruence(&ginv)
}

fn parse_int(s: &str) -> Result<i128> {
    s.parse::<i128>().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// (numerator, k) for RAT = numerator / p^k.
fn parse_rat(s: &str, p: u64) -> Result<(i128, u32)> {
    match s.split_once('/') {
        None => Ok((parse_int(s)?, 0)),
        Some((n, d)) => {
            let mut d = parse_int(d)?;
            if d <= 0 {
                return Err(Error::Parse(format!("denominator '{d}' must be a positive power of p")));
            }
            let mut k = 0;
            while d % p as i128 == 0 {
                d /= p as i128;
                k += 1;
            }
            if d != 1 {
                return Err(Error::Parse(format!("denominator in '{s}' is not a power of {p}")));
            }
            Ok((parse_int(n)?, k))
        }
    }
}

/// a/p^ka + (c/p^kc)·π
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ExactEntry {
    a: (i128, u32),
    c: (i128, u32),
}

fn parse_entry(s: &str, p: u64) -> Result<ExactEntry> {
    let zero = (0i128, 0u32);
    let pi_part = |t: &str| -> Result<(i128, u32)> {
        let r = t.strip_suffix("*pi").or_else(|| t.strip_suffix("pi")).unwrap();
        match r {
            "" | "+" => Ok((1, 0)),
            "-" => Ok((-1, 0)),
            r => parse_rat(r, p),
        }
    };
    if s.ends_with("pi") {
        if let Some(i) = s[1..].find('+').map(|i| i + 1) {
            let a = parse_rat(&s[..i], p)?;
            Ok(ExactEntry { a, c: pi_part(&s[i + 1..])? })
        } else {
            Ok(ExactEntry { a: zero, c: pi_part(s)? })
        }
    } else {
        Ok(ExactEntry { a: parse_rat(s, p)?, c: zero })
    }
}

fn vp_i128(x: i128, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x;
    let mut v = 0;
    while x % p as i128 == 0 {
        x /= p as i128;
        v += 1;
    }
    Some(v)
}

impl ExactEntry {
    /// (A, C, K) with value (A + C·π)/p^K.
    fn common(&self, p: u64) -> Result<(i128, i128, u32)> {
        let k = self.a.1.max(self.c.1);
        let scale = |(n, kk): (i128, u32)| -> Result<i128> {
            (p as i128)
                .checked_pow(k - kk)
                .and_then(|f| n.checked_mul(f))
                .ok_or_else(|| Error::Parse("entry too large".into()))
        };
        Ok((scale(self.a)?, scale(self.c)?, k))
    }

    fn numerator_valuation(&self, p: u64) -> Result<Option<u32>> {
        let (a, c, _) = self.common(p)?;
        Ok(match (vp_i128(a, p), vp_i128(c, p)) {
            (None, None) => None,
            (Some(x), None) => Some(2 * x),
            (None, Some(y)) => Some(2 * y + 1),
            (Some(x), Some(y)) => Some((2 * x).min(2 * y + 1)),
        })
    }

    fn to_field(self, params: FieldParams, prec: u32) -> Result<FieldElement> {
        let (a, c, k) = self.common(params.p)?;
        let mut num = RamifiedElement::new(params, a, c, prec)?;
        // 1/p = u₀/π₀
        let u0 = RamifiedElement::from_int(params, params.pi0_unit as i128, prec)?;
        for _ in 0..k {
            num = num * u0;
        }
        Ok(FieldElement::new(num, -2 * k as i32))
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse("unbalanced brackets".into()));
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced brackets".into()));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn strip_brackets(s: &str) -> Result<&str> {
    s.strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got '{s}'")))
}

/// Parse a row-major Gram matrix such as `[[1,0],[0,3]]` or `[[0,1/3*pi],[-1/3*pi,0]]`.
///
/// Entries follow `RAT | RAT*pi | RAT+RAT*pi` with `RAT` an integer or an
/// integer over a power of p. Without an explicit precision the numerators are
/// carried to six π₀-digits beyond their largest valuation.
pub fn parse_gram(text: &str, params: FieldParams, prec: Option<u32>) -> Result<GramMatrix> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rows = split_top_level(strip_brackets(&s)?)?;
    let n = rows.len();
    let mut exact = Vec::with_capacity(n * n);
    for row in rows {
        let cells = split_top_level(strip_brackets(row)?)?;
        if cells.len() != n {
            return Err(Error::Parse(format!("row '{row}' has {} entries, expected {n}", cells.len())));
        }
        for c in cells {
            if c.is_empty() {
                return Err(Error::Parse("empty entry".into()));
            }
            exact.push(parse_entry(c, params.p)?);
        }
    }
    let prec = match prec {
        Some(m) => m,
        None => {
            let mut top = 0;
            for e in &exact {
                if let Some(v) = e.numerator_valuation(params.p)? {
                    top = top.max(v);
                }
            }
            (top / 2 + 6).min(params.max_precision())
        }
    };
    let entries = exact.into_iter().map(|e| e.to_field(params, prec)).collect::<Result<Vec<_>>>()?;
    GramMatrix::new(params, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FieldParams {
        FieldParams::new(3).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = p3();
        let t = GramMatrix::diagonal_ints(p, &[1, 3], 6).unwrap();
        assert_eq!(normalize(&t), Ok(CanonicalForm::Diagonal { a: 1, b: 0, eps1: 1 }));
        assert_eq!(t.chi(), Ok(1));
        let t = GramMatrix::diagonal_ints(p, &[1, 1], 6).unwrap();
        assert_eq!(normalize(&t), Ok(CanonicalForm::Diagonal { a: 0, b: 0, eps1: -1 }));
        let t = parse_gram("[[0,pi],[-pi,0]]", p, None).unwrap();
        let cf = normalize(&t).unwrap();
        assert_eq!(cf, CanonicalForm::AntiDiagonal { a: 1 });
        assert_eq!(cf.fundamental_invariant(), (2, 2));
    }

    #[test]
    fn fundamental_invariants() {
        assert_eq!(CanonicalForm::Diagonal { a: 1, b: 0, eps1: -1 }.fundamental_invariant(), (3, 1));
        assert_eq!(CanonicalForm::AntiDiagonal { a: 1 }.fundamental_invariant(), (2, 2));
        assert_eq!(CanonicalForm::Diagonal { a: 0, b: 0, eps1: 1 }.fundamental_invariant(), (1, 1));
    }

    #[test]
    fn chi_examples() {
        let p = p3();
        assert_eq!(GramMatrix::diagonal_ints(p, &[1, -1], 4).unwrap().chi(), Ok(1));
        for a in 0..4 {
            let t = CanonicalForm::AntiDiagonal { a }.representative(p, 8).unwrap();
            assert_eq!(t.chi(), Ok(1));
            let t = CanonicalForm::Diagonal { a, b: 0, eps1: -1 }.representative(p, 8).unwrap();
            assert_eq!(t.chi(), Ok(-1));
        }
    }

    #[test]
    fn representatives_normalize_back() {
        for p in [3u64, 5, 7] {
            let params = FieldParams::new(p).unwrap();
            for a in 0..5 {
                for b in 0..=a {
                    for eps1 in [1i8, -1] {
                        let cf = CanonicalForm::Diagonal { a, b, eps1 };
                        assert_eq!(normalize(&cf.representative(params, 12).unwrap()), Ok(cf));
                        assert_eq!(normalize(&cf.diagonal_representative(params, 12).unwrap()), Ok(cf));
                    }
                }
                let cf = CanonicalForm::AntiDiagonal { a };
                assert_eq!(normalize(&cf.representative(params, 12).unwrap()), Ok(cf));
            }
        }
    }

    #[test]
    fn coset_rep_count() {
        let reps = coset_reps(p3(), 4).unwrap();
        assert_eq!(reps.iter().filter(|r| r.index() == 1).count(), 4);
        assert_eq!(reps.iter().filter(|r| r.index() == 2).count(), 1);
    }

    #[test]
    fn transform_examples() {
        let p = p3();
        let reps = coset_reps(p, 8).unwrap();
        let g_inf = &reps[0];
        let t = CanonicalForm::Diagonal { a: 1, b: 0, eps1: 1 }.diagonal_representative(p, 8).unwrap();
        let cf = normalize(&transform(&t, g_inf).unwrap()).unwrap();
        assert!(matches!(cf, CanonicalForm::Diagonal { a: 0, b: 0, .. }));
        let t = CanonicalForm::AntiDiagonal { a: 1 }.representative(p, 8).unwrap();
        let cf = normalize(&transform(&t, g_inf).unwrap()).unwrap();
        assert_eq!(cf.fundamental_invariant(), (1, 1));
        let cf = normalize(&transform(&t, &reps[1]).unwrap()).unwrap();
        assert_eq!(cf, CanonicalForm::Diagonal { a: 0, b: 0, eps1: 1 });
        // γ₀ on the isotropic (2a+1,2a+1) class lands on (2a,2a)
        let t = CanonicalForm::Diagonal { a: 1, b: 1, eps1: 1 }.representative(p, 8).unwrap();
        let cf = normalize(&transform(&t, &reps[1]).unwrap()).unwrap();
        assert_eq!(cf.fundamental_invariant(), (2, 2));
        // Diag{π,π} sends I₂ to ϖ₀^{-1}·I₂ = −π₀^{-1}·I₂
        let id = GramMatrix::diagonal_ints(p, &[1, 1], 8).unwrap();
        let s = transform(&id, reps.last().unwrap()).unwrap();
        let expect = FieldElement::monomial(p, -1, -2, 8).unwrap();
        assert!((s.entry(0, 0) - expect).is_zero());
        assert!((s.entry(1, 1) - expect).is_zero());
        assert!(s.entry(0, 1).is_zero());
    }

    #[test]
    fn grammar() {
        let p = p3();
        let h = parse_gram("[[0, 1/3*pi], [-1/3*pi, 0]]", p, None).unwrap();
        let std_h = GramMatrix::hyperbolic(p, h.prec()).unwrap();
        for (x, y) in h.entries().iter().zip(std_h.entries()) {
            assert!((*x - *y).is_zero());
        }
        let t = parse_gram("[[2,1+1*pi],[1-1*pi,5]]", p, None);
        assert!(t.is_err(), "'-' is not part of the grammar");
        let t = parse_gram("[[2,1+1*pi],[1+-1*pi,5]]", p, None).unwrap();
        assert_eq!(t.n(), 2);
        assert!(parse_gram("[[1,0],[0,3/2]]", p, None).is_err());
        assert!(parse_gram("[[1,pi],[pi,1]]", p, None).is_err());
        let one = parse_gram("[[1]]", p, None).unwrap();
        assert_eq!(one.n(), 1);
    }
}
