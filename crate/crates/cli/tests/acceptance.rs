use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hermdens::cycles::{lifting_length, z_dot_special, Sign};
use hermdens::verify::all_pass;
use hermdens::density::{alpha_poly, alpha_value_at_one, forms_up_to};
use hermdens::oracle::{
    alpha_bruteforce, build_s_r, count_representations, counting_precision, normalize_count, DEFAULT_BUDGET,
};
use hermdens::poly::rat;
use hermdens::{
    lifting_length_inductive, normalize, verify_assembly, verify_hironaka, verify_interpolation, verify_kr,
    verify_recursion_suite, verify_value_at_one, CanonicalForm, Convention, CountJob, FieldElement, FieldParams,
    RamifiedElement, SType, VerificationOutcome,
};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

const LIMIT_UNIMODULAR: Duration = Duration::from_secs(60);
const LIMIT_VALUE_AT_ONE: Duration = Duration::from_secs(15 * 60);
const LIMIT_INTERPOLATION: Duration = Duration::from_secs(30 * 60);
const LIMIT_KR: Duration = Duration::from_secs(5);
const LIMIT_HIRONAKA: Duration = Duration::from_secs(5);
const LIMIT_RECURSION: Duration = Duration::from_secs(60);
const LIMIT_ASSEMBLY: Duration = Duration::from_secs(5);

fn failures(outcomes: &[VerificationOutcome]) -> Check {
    if all_pass(outcomes) {
        return Ok(());
    }
    let bad: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .take(5)
        .map(|o| format!("{} {:?}: {} != {}", o.name, o.parameters, o.lhs, o.rhs))
        .collect();
    Err(format!("{} of {} failed; {}", outcomes.iter().filter(|o| !o.pass).count(), outcomes.len(), bad.join("; ")))
}

fn expect_eq(what: String, lhs: BigRational, rhs: BigRational) -> Check {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs} != {rhs}"))
    }
}

fn unimodular_self_density() -> Check {
    let runs: [(u64, &[u32]); 2] = [(3, &[1, 2]), (5, &[1])];
    for (p, levels) in runs {
        let params = FieldParams::new(p).map_err(|e| e.to_string())?;
        let q = p as i64;
        for (s, expected) in [(SType::Split, 2 * q - 2), (SType::NonSplit, 2 * (q + 1))] {
            for &ell in levels {
                let sm = build_s_r(params, s, 0, counting_precision(params, ell)).map_err(|e| e.to_string())?;
                let job = CountJob::new(sm.clone(), sm, ell);
                let got = alpha_bruteforce(&job).map_err(|e| e.to_string())?;
                expect_eq(format!("p = {p}, {s:?}, ℓ = {ell}"), got, rat(expected))?;
            }
        }
    }
    Ok(())
}

fn low_valuation_forms() -> Vec<CanonicalForm> {
    let mut v = Vec::new();
    for (a, b) in [(0, 0), (1, 0), (1, 1)] {
        for eps1 in [1, -1] {
            v.push(CanonicalForm::Diagonal { a, b, eps1 });
        }
    }
    v.extend([CanonicalForm::AntiDiagonal { a: 0 }, CanonicalForm::AntiDiagonal { a: 1 }]);
    v
}

fn value_at_one() -> Check {
    let cases: Vec<_> = low_valuation_forms()
        .into_iter()
        .flat_map(|t| [(t, SType::Split), (t, SType::NonSplit)])
        .collect();
    // ℓ = 2 is the reported level; ℓ = 3 confirms it has stabilized.
    let outcomes = verify_value_at_one(3, &cases, 3, DEFAULT_BUDGET, 0).map_err(|e| e.to_string())?;
    failures(&outcomes)
}

fn interpolation() -> Check {
    let forms = [
        CanonicalForm::Diagonal { a: 0, b: 0, eps1: 1 },
        CanonicalForm::Diagonal { a: 0, b: 0, eps1: -1 },
        CanonicalForm::AntiDiagonal { a: 0 },
    ];
    let cases: Vec<_> = forms
        .into_iter()
        .flat_map(|t| [(t, SType::Split), (t, SType::NonSplit), (t, SType::Hyperbolic)])
        .collect();
    let outcomes = verify_interpolation(3, 1, 1, &cases, DEFAULT_BUDGET, 0).map_err(|e| e.to_string())?;
    failures(&outcomes)
}

fn kr() -> Check {
    failures(&verify_kr(&[3, 4, 5, 7, 9, 11, 13], 10).map_err(|e| e.to_string())?)
}

fn hironaka() -> Check {
    failures(&verify_hironaka(&[3, 5, 7], 6, false).map_err(|e| e.to_string())?)
}

fn recursion() -> Check {
    failures(&verify_recursion_suite(&[3, 5, 7], 13).map_err(|e| e.to_string())?)
}

fn assembly() -> Check {
    failures(&verify_assembly(&[3, 4, 5, 7, 9], 12).map_err(|e| e.to_string())?)
}

fn lifting() -> Check {
    for q in [3u64, 5] {
        for s in 0..=6 {
            for l in 0..=6 {
                let inductive = lifting_length_inductive(q, 0, s, l).map_err(|e| e.to_string())?;
                let closed = lifting_length(q, s, l).map_err(|e| e.to_string())?;
                expect_eq(format!("q = {q}, s = {s}, l = {l}"), inductive, closed)?;
            }
        }
    }
    for q in [3u64, 4, 5, 7, 9] {
        let qi = q as i128;
        for s in 0..=10i64 {
            let below = (qi.pow(s as u32 + 1) - 1) / (qi - 1);
            let above = (qi.pow(s as u32) - 1) / (qi - 1) + qi.pow(s as u32);
            let at = z_dot_special(q, s, Sign::Plus, s).map_err(|e| e.to_string())?;
            if below != above || at != below {
                return Err(format!("z_dot branches at q = {q}, b = s = {s}: {below}, {above}, {at}"));
            }
        }
    }
    Ok(())
}

fn random_unimodular(rng: &mut StdRng, params: FieldParams, prec: u32) -> Vec<FieldElement> {
    let m = params.modulus(prec.min(6)).unwrap() as i128;
    loop {
        let g: Vec<FieldElement> = (0..4)
            .map(|_| {
                let e = RamifiedElement::new(params, rng.gen_range(0..m), rng.gen_range(0..m), prec).unwrap();
                FieldElement::new(e, 0)
            })
            .collect();
        if (g[0] * g[3] - g[1] * g[2]).val_opt() == Some(0) {
            return g;
        }
    }
}

fn properties() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for p in [3u64, 5] {
        let params = FieldParams::new(p).map_err(|e| e.to_string())?;
        for t in forms_up_to(7) {
            let prec = (2 * t.max_pi0_valuation().max(0) as u32 + 8).min(params.max_precision());
            let rep = t.representative(params, prec).map_err(|e| e.to_string())?;
            for _ in 0..200 {
                let g = random_unimodular(&mut rng, params, prec);
                let moved = rep.congruence(&g).map_err(|e| e.to_string())?;
                let got = normalize(&moved).map_err(|e| e.to_string())?;
                if got != t {
                    return Err(format!("normalize at p = {p}: {t} became {got}"));
                }
            }
        }
    }

    for q in [3u64, 5, 7] {
        for t in forms_up_to(17).into_iter().filter(|t| t.is_integral()) {
            for s in [SType::Split, SType::NonSplit] {
                let zero = alpha_value_at_one(q, &t, s).map_err(|e| e.to_string())? == rat(0);
                if zero != (t.chi() != s.eps2().unwrap()) {
                    return Err(format!("vanishing law at q = {q}, T = {t}, {s:?}"));
                }
            }
        }
        for a in 0..8 {
            for b in 0..=a {
                for eps1 in [1i8, -1] {
                    let t = CanonicalForm::Diagonal { a, b, eps1 };
                    for s in [SType::Split, SType::NonSplit] {
                        let poly = alpha_poly(q, &t, s).map_err(|e| e.to_string())?;
                        if poly.degree() != Some((a + b + 2) as usize) || poly.leading_coeff() != rat(-eps1 as i64) {
                            return Err(format!("degree law at q = {q}, T = {t}, {s:?}"));
                        }
                    }
                }
            }
        }
    }

    let params = FieldParams::new(3).map_err(|e| e.to_string())?;
    for s in [SType::Split, SType::NonSplit] {
        let sm = build_s_r(params, s, 0, 6).map_err(|e| e.to_string())?;
        for t in low_valuation_forms() {
            let tm = t.representative(params, 6).map_err(|e| e.to_string())?;
            let ell = (t.max_pi0_valuation() + 1).max(1) as u32;
            let job = CountJob::new(sm.clone(), tm, ell);
            let dual = count_representations(&job).map_err(|e| e.to_string())?;
            let herm = count_representations(&job.clone().with_convention(Convention::Herm)).map_err(|e| e.to_string())?;
            if dual != 3 * herm
                || normalize_count(3, ell, 2, 2, Convention::HermDual, dual)
                    != normalize_count(3, ell, 2, 2, Convention::Herm, herm)
            {
                return Err(format!("convention factor at {s:?}, T = {t}: {dual} vs {herm}"));
            }
            for threads in [1, 2, 4] {
                let again = count_representations(&job.clone().with_threads(threads)).map_err(|e| e.to_string())?;
                if again != dual {
                    return Err(format!("thread count {threads} changed the count at {s:?}, T = {t}"));
                }
            }
        }
    }
    Ok(())
}

fn cli_golden() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let runs: [(&[&str], &str); 3] = [
        (&["mu", "--q", "3", "--a", "1", "--b", "1"], "mu_q3_a1_b1.json"),
        (
            &["density", "--q", "3", "--form", "diag", "--a", "0", "--b", "0", "--eps1", "1", "--s", "split"],
            "density_q3_diag00_split.json",
        ),
        (&["normalize", "--p", "3", "--gram", "[[1,0],[0,3]]"], "normalize_p3_diag_1_3.json"),
    ];
    for (args, file) in runs {
        let out = Command::new(env!("CARGO_BIN_EXE_hermdens")).args(args).output().map_err(|e| e.to_string())?;
        let want = std::fs::read(dir.join(file)).map_err(|e| e.to_string())?;
        if !out.status.success() || out.stdout != want {
            return Err(format!("{file}: got {}", String::from_utf8_lossy(&out.stdout).trim_end()));
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("unimodular self-densities at p = 3, 5", unimodular_self_density, Some(LIMIT_UNIMODULAR)),
        ("oracle agrees with α(S,T,1) at p = 3", value_at_one, Some(LIMIT_VALUE_AT_ONE)),
        ("oracle agrees with α(S,T,1/9) at r = 1", interpolation, Some(LIMIT_INTERPOLATION)),
        ("intersection number equals 2α′/α(S,S)", kr, Some(LIMIT_KR)),
        ("orbit expansion equals closed formulas", hironaka, Some(LIMIT_HIRONAKA)),
        ("hyperbolic recursion up to (13,13)", recursion, Some(LIMIT_RECURSION)),
        ("assembly I + II + III = μ_q", assembly, Some(LIMIT_ASSEMBLY)),
        ("lifting lengths and z_dot continuity", lifting, None),
        ("property suites", properties, None),
        ("CLI golden output", cli_golden, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&result, limit) {
            if elapsed > limit {
                result = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
