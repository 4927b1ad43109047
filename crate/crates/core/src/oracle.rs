//! Brute-force local densities: count X ∈ M_{m,n}(𝒪_F/π₀^ℓ) with
//! S[X] − T ∈ π₀^ℓ·Herm^∨ (or π₀^ℓ·Herm) and normalize.
//!
//! Entries are handled after clearing one π from S and T, so that S' = πS and
//! T' = πT are integral and all arithmetic happens in (ℤ/p^{ℓ+1})[π].

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::SType;
use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::local_ring::{FieldElement, FieldParams, RamifiedElement};
use crate::poly::qpow;

/// Default cap on candidate evaluations (vectors plus column pairs).
pub const DEFAULT_BUDGET: u128 = 1 << 36;

const MAX_M: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    /// S[X] − T ∈ π₀^ℓ·Herm^∨: off-diagonal entries in π₀^ℓπ^{−1}𝒪_F.
    HermDual,
    /// S[X] − T ∈ π₀^ℓ·Herm: off-diagonal entries in π₀^ℓ𝒪_F.
    Herm,
}

#[derive(Clone, Debug)]
pub struct CountJob {
    pub s: GramMatrix,
    pub t: GramMatrix,
    pub ell: u32,
    pub convention: Convention,
    pub budget: u128,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
}

impl CountJob {
    pub fn new(s: GramMatrix, t: GramMatrix, ell: u32) -> Self {
        CountJob { s, t, ell, convention: Convention::HermDual, budget: DEFAULT_BUDGET, threads: 0 }
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        self.convention = c;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

/// (ℤ/N)[π] with π² = π₀, N = p^{ℓ+1}.
#[derive(Clone, Copy, Debug)]
struct Ring {
    n: u64,
    pi0: u64,
}

impl Ring {
    #[inline]
    fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let a = (x.0 * y.0 + (x.1 * y.1) % self.n * self.pi0) % self.n;
        let b = (x.0 * y.1 + x.1 * y.0) % self.n;
        (a, b)
    }

    #[inline]
    fn conj(&self, x: (u64, u64)) -> (u64, u64) {
        (x.0, (self.n - x.1) % self.n)
    }
}

/// x·π^k as residues mod p^prec; `None` if x·π^k is not integral.
fn residues(x: &FieldElement, k: i32, prec: u32) -> Result<Option<(u64, u64)>> {
    let need = 2 * prec as i64 - k as i64;
    if x.abs_precision() < need {
        return Err(Error::Precision(format!(
            "entry known modulo π^{}, counting needs π^{need}",
            x.abs_precision()
        )));
    }
    if x.is_zero() {
        return Ok(Some((0, 0)));
    }
    let r = x.reduced()?;
    let e = r.shift() + k;
    if e < 0 {
        return Ok(None);
    }
    let num = r.num();
    let mut y = RamifiedElement::new(x.params(), num.a() as i128, num.b() as i128, prec)?;
    for _ in 0..e {
        y = y.mul_pi();
    }
    Ok(Some((y.a(), y.b())))
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

struct Prepared {
    ring: Ring,
    m: usize,
    n: usize,
    /// p^ℓ: coordinate residues and the diagonal modulus.
    side: u64,
    s: Vec<(u64, u64)>,
    /// π-coefficient of πt_ii modulo p^ℓ.
    diag: Vec<u64>,
    /// πt₁₂ modulo p^{ℓ+1}.
    off: (u64, u64),
}

enum Setup {
    Ready(Prepared),
    Empty,
}

fn prepare(job: &CountJob) -> Result<Setup> {
    let (m, n) = (job.s.n(), job.t.n());
    if m == 0 || m > MAX_M || n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("counting needs m ≤ {MAX_M} and n ≤ 2, got m = {m}, n = {n}")));
    }
    if job.ell == 0 {
        return Err(Error::InvalidParams("ℓ must be at least 1".into()));
    }
    let params = job.s.params();
    if params != job.t.params() {
        return Err(Error::InvalidParams("S and T over different fields".into()));
    }
    let p = params.p;
    let prec = job.ell + 1;
    let ring = Ring { n: params.modulus(prec)?, pi0: (params.pi0_unit.rem_euclid(p as i64) as u64 * p) % params.modulus(prec)? };
    let side = pow_u64(p, job.ell);

    let mut s = Vec::with_capacity(m * m);
    let mut integral = true;
    for i in 0..m {
        for j in 0..m {
            let e = job.s.entry(i, j);
            integral &= e.is_zero() || e.val_opt().is_some_and(|v| v >= 0);
            match residues(&e, 1, prec)? {
                Some(r) => s.push(r),
                None => return Err(Error::Unsupported("S must lie in Herm^∨ (entries of π-valuation ≥ −1)".into())),
            }
        }
    }
    if job.convention == Convention::Herm && !integral {
        return Err(Error::Unsupported(
            "the Herm convention is not well defined modulo π₀^ℓ for non-integral S".into(),
        ));
    }
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        match residues(&job.t.entry(i, i), 1, prec)? {
            Some((_, b)) => diag.push(b % side),
            None => return Ok(Setup::Empty),
        }
    }
    let off = if n == 2 {
        match residues(&job.t.entry(0, 1), 1, prec)? {
            Some(r) => r,
            None => return Ok(Setup::Empty),
        }
    } else {
        (0, 0)
    };
    Ok(Setup::Ready(Prepared { ring, m, n, side, s, diag, off }))
}

impl Prepared {
    fn vector_count(&self) -> u128 {
        (self.side as u128).pow(2 * self.m as u32)
    }

    fn decode(&self, mut idx: u64, out: &mut [(u64, u64)]) {
        for c in out.iter_mut().take(self.m) {
            let a = idx % self.side;
            idx /= self.side;
            let b = idx % self.side;
            idx /= self.side;
            *c = (a, b);
        }
    }

    fn apply_s(&self, y: &[(u64, u64)], w: &mut [(u64, u64)]) {
        let r = self.ring;
        for (row, wi) in self.s.chunks(self.m).zip(w.iter_mut()) {
            let mut acc = (0, 0);
            for (&sij, &yj) in row.iter().zip(y) {
                let t = r.mul(sij, yj);
                acc = ((acc.0 + t.0) % r.n, (acc.1 + t.1) % r.n);
            }
            *wi = acc;
        }
    }

    /// Σ conj(x_i)·w_i without the final reduction split into (A, B).
    #[inline]
    fn pairing(&self, cx: &[(u64, u64)], w: &[(u64, u64)]) -> (u64, u64) {
        let r = self.ring;
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..self.m {
            let (x, y) = (cx[i], w[i]);
            a += x.0 * y.0 + (x.1 * y.1) % r.n * r.pi0;
            b += x.0 * y.1 + x.1 * y.0;
        }
        (a % r.n, b % r.n)
    }
}

fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Vectors y with the π-coefficient of y*S'y ≡ target (mod p^ℓ), stored as
/// conj(y) (`conj = true`) or as S'y.
fn bucket(prep: &Prepared, target: u64, conj: bool) -> Vec<(u64, u64)> {
    let total = prep.vector_count() as u64;
    let chunks = 256u64.min(total).max(1);
    let step = total.div_ceil(chunks);
    let parts: Vec<Vec<(u64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::new();
            let mut y = [(0u64, 0u64); MAX_M];
            let mut w = [(0u64, 0u64); MAX_M];
            let mut cy = [(0u64, 0u64); MAX_M];
            for idx in (c * step)..((c + 1) * step).min(total) {
                prep.decode(idx, &mut y);
                prep.apply_s(&y[..prep.m], &mut w);
                for i in 0..prep.m {
                    cy[i] = prep.ring.conj(y[i]);
                }
                let (_, b) = prep.pairing(&cy[..prep.m], &w[..prep.m]);
                if b % prep.side == target {
                    out.extend_from_slice(if conj { &cy[..prep.m] } else { &w[..prep.m] });
                }
            }
            out
        })
        .collect();
    parts.concat()
}

/// Number of X ∈ M_{m,n}(𝒪_F/π₀^ℓ) with S[X] ≡ T modulo π₀^ℓ·Herm^∨ (or Herm).
pub fn count_representations(job: &CountJob) -> Result<u128> {
    let prep = match prepare(job)? {
        Setup::Ready(p) => p,
        Setup::Empty => return Ok(0),
    };
    let vectors = prep.vector_count() * prep.n as u128;
    if vectors > job.budget {
        return Err(Error::Budget { needed: vectors, budget: job.budget });
    }
    run_in_pool(job.threads, || count_prepared(&prep, job))?
}

fn count_prepared(prep: &Prepared, job: &CountJob) -> Result<u128> {
    let m = prep.m;
    let first = bucket(prep, prep.diag[0], true);
    if prep.n == 1 {
        return Ok((first.len() / m) as u128);
    }
    let second = bucket(prep, prep.diag[1], false);
    let (n1, n2) = ((first.len() / m) as u128, (second.len() / m) as u128);
    let needed = prep.vector_count() * 2 + n1 * n2;
    if needed > job.budget {
        return Err(Error::Budget { needed, budget: job.budget });
    }
    let r = prep.ring;
    // (w_a, w_b, w_b·π₀) so the pair loop needs no reduction per coordinate.
    let second: Vec<[u64; 3]> = second.iter().map(|&(a, b)| [a, b, b * r.pi0 % r.n]).collect();
    let side = prep.side;
    let amod = if job.convention == Convention::Herm { r.n } else { side };
    let (ta, tb) = (prep.off.0 % amod, prep.off.1 % side);
    let count = first
        .par_chunks(m * 64)
        .map(|block| {
            let mut c = 0u128;
            for cx in block.chunks_exact(m) {
                let mut local = 0u64;
                for w in second.chunks_exact(m) {
                    let (mut a, mut b) = (0u64, 0u64);
                    for (x, y) in cx.iter().zip(w) {
                        a += x.0 * y[0] + x.1 * y[2];
                        b += x.0 * y[1] + x.1 * y[0];
                    }
                    local += (a % amod == ta && b % side == tb) as u64;
                }
                c += local as u128;
            }
            c
        })
        .sum();
    Ok(count)
}

/// q^{ℓn(n−2m)}·count, times q^{n(n−1)/2} under the Herm convention.
pub fn normalize_count(q: u64, ell: u32, m: usize, n: usize, conv: Convention, count: u128) -> BigRational {
    let (l, m, n) = (ell as i64, m as i64, n as i64);
    let mut e = l * n * (n - 2 * m);
    if conv == Convention::Herm {
        e += n * (n - 1) / 2;
    }
    BigRational::from_integer(BigInt::from(count)) * qpow(q, e)
}

/// The normalized density from a single count.
pub fn alpha_bruteforce(job: &CountJob) -> Result<BigRational> {
    let c = count_representations(job)?;
    Ok(normalize_count(job.s.params().q, job.ell, job.s.n(), job.t.n(), job.convention, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilized {
    #[serde(serialize_with = "crate::ser::rational")]
    pub value: BigRational,
    pub ell_used: u32,
    pub stable: bool,
    #[serde(serialize_with = "crate::ser::rational_pairs")]
    pub history: Vec<(u32, BigRational)>,
}

/// Largest π₀-adic valuation among the entries of T, rounding odd π-valuations up.
pub fn max_pi0_valuation(t: &GramMatrix) -> Option<i32> {
    t.entries().iter().filter_map(|e| e.val_opt()).map(|v| (v + 1).div_euclid(2)).max()
}

/// First congruence level tried by `stabilized_alpha`.
pub fn starting_level(t: &GramMatrix) -> u32 {
    max_pi0_valuation(t).map_or(1, |v| (v + 1).max(1) as u32)
}

/// Raise ℓ from max(1, maxval(T) + 1) until two consecutive normalized counts agree.
pub fn stabilized_alpha(
    s: &GramMatrix,
    t: &GramMatrix,
    convention: Convention,
    max_ell: u32,
    budget: u128,
    threads: usize,
) -> Result<Stabilized> {
    let q = s.params().q;
    if (0..t.n()).any(|i| t.entry(i, i).val_opt().is_some_and(|v| v < 0)) {
        let zero = BigRational::from_integer(BigInt::from(0));
        return Ok(Stabilized { value: zero, ell_used: 0, stable: true, history: Vec::new() });
    }
    let mut history: Vec<(u32, BigRational)> = Vec::new();
    let mut ell = starting_level(t);
    while ell <= max_ell {
        let job = CountJob { s: s.clone(), t: t.clone(), ell, convention, budget, threads };
        let job = CountJob { s: lift(&job.s, ell)?, t: lift(&job.t, ell)?, ..job };
        match count_representations(&job) {
            Ok(c) => history.push((ell, normalize_count(q, ell, s.n(), t.n(), convention, c))),
            Err(Error::Budget { .. }) if !history.is_empty() => break,
            Err(e) => return Err(e),
        }
        if let [.., (_, x), (l, y)] = history.as_slice() {
            if x == y {
                return Ok(Stabilized { value: y.clone(), ell_used: *l, stable: true, history });
            }
        }
        ell += 1;
    }
    let (ell_used, value) = history
        .last()
        .cloned()
        .ok_or_else(|| Error::InvalidParams(format!("no level ≤ {max_ell} to try")))?;
    Ok(Stabilized { value, ell_used, stable: false, history })
}

/// Precision a Gram matrix needs for counting at level ℓ.
pub fn counting_precision(params: FieldParams, ell: u32) -> u32 {
    (ell + 3).min(params.max_precision())
}

fn lift(g: &GramMatrix, ell: u32) -> Result<GramMatrix> {
    let need = 2 * (ell as i64 + 1) - 1;
    if g.entries().iter().all(|e| e.abs_precision() >= need) {
        Ok(g.clone())
    } else {
        Err(Error::Precision(format!("Gram matrix precision too low for ℓ = {ell}")))
    }
}

/// S_r = S ⊕ 𝓗^r with S = Diag{v,1}: v = −1 (split), v = −σ (nonsplit), or S = 𝓗.
pub fn build_s_r(params: FieldParams, s: SType, r: u32, prec: u32) -> Result<GramMatrix> {
    let mut out = match s {
        SType::Split => GramMatrix::diagonal_ints(params, &[-1, 1], prec)?,
        SType::NonSplit => GramMatrix::diagonal_ints(params, &[-(params.nonresidue() as i128), 1], prec)?,
        SType::Hyperbolic => GramMatrix::hyperbolic(params, prec)?,
    };
    for _ in 0..r {
        out = out.direct_sum(&GramMatrix::hyperbolic(params, prec)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationEntry {
    pub s: SType,
    pub ell: u32,
    pub convention: Convention,
    #[serde(serialize_with = "crate::ser::rational")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub target: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub convention: Convention,
    /// Factor applied to q^{ℓn(n−2m)}·count under the chosen convention.
    pub factor: u64,
    pub entries: Vec<CalibrationEntry>,
}

/// Run α(S,S) and α(S′,S′) at ℓ = 1, 2 under both conventions and pick the
/// one reproducing 2q−2 and 2(q+1); HermDual wins ties.
pub fn calibrate_convention(params: FieldParams, budget: u128, threads: usize) -> Result<Calibration> {
    let q = params.q as i64;
    let targets = [(SType::Split, 2 * q - 2), (SType::NonSplit, 2 * q + 2)];
    let prec = counting_precision(params, 2);
    let mut entries = Vec::new();
    for conv in [Convention::HermDual, Convention::Herm] {
        for (s, target) in targets {
            let sm = build_s_r(params, s, 0, prec)?;
            for ell in [1, 2] {
                let job = CountJob { s: sm.clone(), t: sm.clone(), ell, convention: conv, budget, threads };
                entries.push(CalibrationEntry {
                    s,
                    ell,
                    convention: conv,
                    value: alpha_bruteforce(&job)?,
                    target: BigRational::from_integer(BigInt::from(target)),
                });
            }
        }
    }
    for conv in [Convention::HermDual, Convention::Herm] {
        if entries.iter().filter(|e| e.convention == conv).all(|e| e.value == e.target) {
            let factor = if conv == Convention::Herm { params.q } else { 1 };
            return Ok(Calibration { convention: conv, factor, entries });
        }
    }
    Err(Error::Calibration(format!("no counting convention reproduces 2q−2 and 2(q+1) at p = {}", params.p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CanonicalForm;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_one_count() {
        let p = FieldParams::new(3).unwrap();
        let one = GramMatrix::diagonal_ints(p, &[1], 4).unwrap();
        let job = CountJob::new(one.clone(), one, 1).with_convention(Convention::Herm);
        // a² ≡ 1 mod 3 gives a ∈ {1, 2}; b is free.
        assert_eq!(count_representations(&job), Ok(6));
    }

    #[test]
    fn unimodular_self_densities() {
        let p = FieldParams::new(3).unwrap();
        for (s, target) in [(SType::Split, 4), (SType::NonSplit, 8)] {
            let sm = build_s_r(p, s, 0, 6).unwrap();
            for ell in [1, 2] {
                assert_eq!(alpha_bruteforce(&CountJob::new(sm.clone(), sm.clone(), ell)), Ok(rat(target)));
            }
        }
    }

    #[test]
    fn anisotropic_target_is_not_represented_by_split_plane() {
        let p = FieldParams::new(3).unwrap();
        let s = build_s_r(p, SType::Split, 0, 6).unwrap();
        let t = GramMatrix::diagonal_ints(p, &[1, 1], 6).unwrap();
        for ell in [1, 2] {
            assert_eq!(count_representations(&CountJob::new(s.clone(), t.clone(), ell)), Ok(0));
        }
    }

    #[test]
    fn herm_convention_rejects_hyperbolic_s() {
        let p = FieldParams::new(3).unwrap();
        let h = build_s_r(p, SType::Hyperbolic, 0, 6).unwrap();
        let job = CountJob::new(h.clone(), h, 1).with_convention(Convention::Herm);
        assert!(matches!(count_representations(&job), Err(Error::Unsupported(_))));
    }

    #[test]
    fn non_integral_diagonal_gives_zero() {
        let p = FieldParams::new(3).unwrap();
        let s = build_s_r(p, SType::Split, 0, 6).unwrap();
        let t = CanonicalForm::Diagonal { a: 0, b: -1, eps1: 1 }.diagonal_representative(p, 6).unwrap();
        let st = stabilized_alpha(&s, &t, Convention::HermDual, 3, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(st.value, rat(0));
        assert!(st.stable);
    }

    #[test]
    fn budget_is_enforced_up_front() {
        let p = FieldParams::new(3).unwrap();
        let s = build_s_r(p, SType::Split, 1, 6).unwrap();
        let t = build_s_r(p, SType::Split, 0, 6).unwrap();
        let job = CountJob::new(s, t, 2).with_budget(1000);
        assert!(matches!(count_representations(&job), Err(Error::Budget { .. })));
    }

    #[test]
    fn s_r_shapes() {
        let p = FieldParams::new(3).unwrap();
        assert_eq!(build_s_r(p, SType::Split, 0, 4).unwrap().n(), 2);
        assert_eq!(build_s_r(p, SType::Split, 1, 4).unwrap().n(), 4);
        assert_eq!(build_s_r(p, SType::Hyperbolic, 0, 4).unwrap().n(), 2);
    }
}
