//! Acceptance run: one PASS/FAIL line per criterion on stderr, non-zero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsequiv::atlas::{
    a_first, a_generic, a_zero, build_family_superpotential, classify_pair, classify_presentation, poly_superpotential,
    strip_timing, Catalog, ClassifyConfig, PairResult,
};
use qsequiv::field::{rat, Rationals};
use qsequiv::ncgb::{complete, truncated_hilbert, verify_complete_basis, GbConfig, MonomialOrder};
use qsequiv::presentation::{build_algebra, build_quantum_group, build_sl2_reduced, preferred_order, Variant};
use qsequiv::superpotential::{
    pivotal_matrix, qdim_subspace, quantum_hilbert_series, AlgebraData, TwistedSuperpotential,
};
use qsequiv::tensor::{Matrix, Subspace};
use qsequiv::Field;

use common::Q;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rationals> {
    loop {
        let v: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
        let m = common::matrix(n, &v);
        if m.invert().is_ok() {
            return m;
        }
    }
}

/// `tr(E^{-1} E^T)`.
fn bilinear_trace(e: &Matrix<Rationals>) -> BigRational {
    e.invert().unwrap().mul(&e.transpose()).unwrap().trace()
}

fn plane(q: &BigRational) -> Matrix<Rationals> {
    Matrix::from_rows(&Q, vec![vec![Q.zero(), Q.one()], vec![q.clone(), Q.zero()]]).unwrap()
}

/// Draws `(E, F)` of the given sizes with equal traces.
fn equal_trace_pair(rng: &mut ChaCha8Rng, p: usize, q: usize) -> (Matrix<Rationals>, Matrix<Rationals>) {
    loop {
        let e = random_invertible(rng, p);
        let f = random_invertible(rng, q);
        if bilinear_trace(&e) == bilinear_trace(&f) {
            return (e, f);
        }
    }
}

fn m2_pairs() -> Vec<(Matrix<Rationals>, Matrix<Rationals>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(common::SEED);
    let mut pairs = Vec::new();
    while pairs.len() < 150 {
        let (p, q) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let e = random_invertible(&mut rng, p);
        let f = random_invertible(&mut rng, q);
        if p == 3 && q == 3 && bilinear_trace(&e) == bilinear_trace(&f) {
            continue;
        }
        pairs.push((e, f));
    }
    for _ in 0..20 {
        let e = random_invertible(&mut rng, 2);
        let m = random_invertible(&mut rng, 2);
        let f = m.mul(&e).unwrap().mul(&m.transpose()).unwrap();
        pairs.push((e, f));
    }
    for (n, d) in [
        (2, 1),
        (3, 1),
        (5, 1),
        (-2, 1),
        (-3, 1),
        (7, 1),
        (1, 3),
        (2, 3),
        (-3, 2),
        (4, 5),
        (-1, 1),
        (1, 1),
        (5, 2),
        (-7, 3),
    ] {
        let q = rat(n, d);
        pairs.push((plane(&q), plane(&(BigRational::from_integer(1.into()) / q))));
    }
    for _ in 0..10 {
        pairs.push(equal_trace_pair(&mut rng, 2, 3));
    }
    for _ in 0..5 {
        pairs.push(equal_trace_pair(&mut rng, 3, 2));
    }
    let e = random_invertible(&mut rng, 3);
    let m = random_invertible(&mut rng, 3);
    pairs.push((e.clone(), m.mul(&e).unwrap().mul(&m.transpose()).unwrap()));
    pairs
}

fn run_m2(pairs: &[(Matrix<Rationals>, Matrix<Rationals>)]) -> Vec<PairResult> {
    let cfg = ClassifyConfig { variant: Variant::Sl, bound: 6, ..ClassifyConfig::default() };
    pairs
        .iter()
        .enumerate()
        .map(|(k, (e, f))| {
            let pres = build_sl2_reduced(e, f).unwrap();
            classify_presentation(&format!("E{k}"), &format!("F{k}"), &pres, &cfg).unwrap()
        })
        .collect()
}

fn report_json(results: &[PairResult]) -> String {
    let mut v = serde_json::to_value(results).unwrap();
    strip_timing(&mut v);
    serde_json::to_string(&v).unwrap()
}

fn criterion_1(store: &mut Vec<String>) -> Outcome {
    let pairs = m2_pairs();
    let start = Instant::now();
    let results = run_m2(&pairs);
    let elapsed = start.elapsed();
    let (mut zero, mut equal) = (0, 0);
    for ((e, f), r) in pairs.iter().zip(&results) {
        let same = bilinear_trace(e) == bilinear_trace(f);
        equal += same as usize;
        zero += r.is_zero() as usize;
        ensure(r.is_zero() != same, || {
            format!("E={e:?} F={f:?}: traces {} and {}, verdict {}", bilinear_trace(e), bilinear_trace(f), r.status())
        })?;
    }
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:.1?}"))?;
    store.push(report_json(&results));
    Ok(format!("{} pairs ({equal} equal-trace), {zero} zero certificates, agreement exact, {elapsed:.1?}", pairs.len()))
}

fn criterion_2() -> Outcome {
    for q in [2, 3, 5] {
        let e = plane(&rat(q, 1));
        let sp = TwistedSuperpotential::new(common::quantum_plane(q, 1).tensor().clone()).unwrap();
        let expect = rat(q * q + 1, q);
        let by_trace = pivotal_matrix(sp.twist()).unwrap().trace();
        let by_subspace = qdim_subspace(&Subspace::full(&Q, 2), sp.twist()).unwrap();
        let by_bilinear = bilinear_trace(&e);
        ensure(by_trace == expect && by_subspace == expect && by_bilinear == expect, || {
            format!("q={q}: trace {by_trace}, subspace {by_subspace}, tr(E^-1 E^T) {by_bilinear}, expected {expect}")
        })?;
    }
    Ok("q + 1/q at q = 2, 3, 5".into())
}

fn family(name: &str, a: &[BigRational; 4]) -> TwistedSuperpotential<Rationals> {
    let cat = Catalog::builtin();
    let fam = cat.family(name).unwrap();
    build_family_superpotential(fam, &Q, &cat.default_params().unwrap(), a, &Q.one())
        .unwrap()
        .superpotential()
        .unwrap_or_else(|| panic!("{name} is degenerate"))
        .clone()
}

fn against_poly(name: &str, a: &[BigRational; 4]) -> PairResult {
    let poly = poly_superpotential(&Q).unwrap();
    classify_pair(name, &family(name, a), "f_poly", &poly, &ClassifyConfig::default()).unwrap()
}

const ZERO_ROWS: [&str; 5] = ["3A2", "D4(1)", "D4(2)", "D5", "E6"];

fn zero_rows() -> Result<(Vec<PairResult>, String), String> {
    let mut results = Vec::new();
    let mut detail = Vec::new();
    for name in ZERO_ROWS {
        let start = Instant::now();
        let r = against_poly(name, &a_zero(&Q));
        let elapsed = start.elapsed();
        let screened = r.screening.as_ref().map(|s| (s.field.as_str(), s.status.as_str()));
        let certified = r.certification.as_ref().map(|s| (s.field.as_str(), s.status.as_str()));
        ensure(screened == Some(("Fp:32003", "zero")) && certified == Some(("Q", "zero")), || {
            format!("{name}: screening {screened:?}, certification {certified:?}")
        })?;
        ensure(r.verdict.bound <= 8 && elapsed < Duration::from_secs(600), || {
            format!("{name}: bound {} in {elapsed:.1?}", r.verdict.bound)
        })?;
        detail.push(format!("{name} (degree {}, {elapsed:.1?})", r.verdict.witness_degree.unwrap_or(0)));
        results.push(r);
    }
    Ok((results, detail.join(", ")))
}

fn criterion_3(store: &mut Vec<String>) -> Outcome {
    let (results, detail) = zero_rows()?;
    store.push(report_json(&results));
    Ok(format!("zero over F_32003 and Q: {detail}"))
}

/// Recomputes the basis over Q and checks it with the diamond lemma.
fn verified_nonzero(e: &TwistedSuperpotential<Rationals>) -> bool {
    let poly = poly_superpotential(&Q).unwrap();
    let pres = build_quantum_group(e, &poly, Variant::Gl).unwrap();
    let state = complete(&pres, &GbConfig::with_bound(8), &preferred_order(&pres)).unwrap();
    state.queue_empty && state.witness_degree.is_none() && verify_complete_basis(&pres, &state)
}

fn criterion_4() -> Outcome {
    let cat = Catalog::builtin();
    let rows: Vec<&str> =
        cat.families.iter().filter(|f| f.in_table && f.expected == "ASreg3").map(|f| f.name.as_str()).collect();
    let (mut inconclusive, mut nonzero) = (Vec::new(), Vec::new());
    for name in &rows {
        let r = against_poly(name, &a_zero(&Q));
        match r.status() {
            "inconclusive" => inconclusive.push(*name),
            "nonzero" => {
                ensure(verified_nonzero(&family(name, &a_zero(&Q))), || format!("{name}: basis fails verification"))?;
                nonzero.push(*name);
            }
            other => return Err(format!("{name}: {other}")),
        }
    }
    ensure(inconclusive.len() >= 5, || format!("only {} inconclusive rows: {inconclusive:?}", inconclusive.len()))?;
    Ok(format!(
        "{} rows, none zero; inconclusive at bound 8: {}; complete verified basis without constants: {}",
        rows.len(),
        inconclusive.join(" "),
        nonzero.join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let special = against_poly("D5", &a_first(&Q));
    ensure(special.is_zero(), || format!("D5 a=(1,0,0,0): {}", special.status()))?;
    let generic = against_poly("D5", &a_generic(&Q));
    let status = generic.status().to_string();
    match status.as_str() {
        "inconclusive" => {}
        "nonzero" => {
            ensure(verified_nonzero(&family("D5", &a_generic(&Q))), || "generic D5: basis fails verification".into())?
        }
        other => return Err(format!("generic D5: {other}")),
    }
    Ok(format!(
        "D5 a=(1,0,0,0) zero at degree {}; D5 a=(1,2,3,5) {status} at bound {}",
        special.verdict.witness_degree.unwrap_or(0),
        generic.verdict.bound
    ))
}

fn criterion_6() -> Outcome {
    let cat = Catalog::builtin();
    let params = cat.default_params().unwrap();
    let e6t = build_family_superpotential(cat.family("E6~").unwrap(), &Q, &params, &a_zero(&Q), &Q.one()).unwrap();
    ensure(e6t.is_degenerate(), || "E6~ with a = 0 is nondegenerate".into())?;
    let mut checked = 0;
    for fam in &cat.families {
        for a in [a_zero(&Q), a_generic(&Q), a_first(&Q)] {
            let out = build_family_superpotential(fam, &Q, &params, &a, &Q.zero()).unwrap();
            ensure(out.is_degenerate(), || format!("{} with lambda = 0 is nondegenerate", fam.name))?;
            checked += 1;
        }
    }
    Ok(format!("E6~ degenerate; {checked} lambda = 0 instances degenerate"))
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for (name, res) in common::structural_suites(64, 10) {
        match res {
            Ok(n) => lines.push(format!("{name} ({n})")),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(lines.join(", "))
}

fn criterion_8() -> Outcome {
    let alg = AlgebraData::new(poly_superpotential(&Q).unwrap(), 2).unwrap();
    let pres = build_algebra(&alg).unwrap();
    let state = complete(&pres, &GbConfig::with_bound(6), &MonomialOrder::identity(pres.gens().len())).unwrap();
    let hilbert = truncated_hilbert(&state, 6).unwrap();
    let quantum = quantum_hilbert_series(&alg, 3, 6, 1 << 20).unwrap();
    let expect: Vec<u128> = vec![1, 3, 6, 10, 15, 21, 28];
    let quantum_ints: Vec<BigRational> = quantum.coeffs.clone();
    let expect_q: Vec<BigRational> = expect.iter().map(|&n| rat(n as i64, 1)).collect();
    ensure(hilbert == expect, || format!("normal words {hilbert:?}"))?;
    ensure(quantum_ints == expect_q, || format!("quantum series {quantum_ints:?}"))?;
    Ok("1, 3, 6, 10, 15, 21, 28 from normal words and from the quantum series".into())
}

fn criterion_9(first: &[String]) -> Outcome {
    ensure(first.len() == 2, || "criteria 1 and 3 did not both produce reports".into())?;
    let again_1 = report_json(&run_m2(&m2_pairs()));
    let (rows, _) = zero_rows()?;
    let again_3 = report_json(&rows);
    ensure(again_1 == first[0], || "criterion 1 reports differ".into())?;
    ensure(again_3 == first[1], || "criterion 3 reports differ".into())?;
    Ok(format!("byte-identical ({} + {} bytes)", again_1.len(), again_3.len()))
}

fn main() {
    let mut reports = Vec::new();
    let mut failures = 0;
    let mut run = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(msg) => format!("criterion {n}: PASS [{secs:.1}s] {msg}"),
            Err(msg) => format!("criterion {n}: FAIL [{secs:.1}s] {msg}"),
        };
        failures += outcome.is_err() as usize;
        eprintln!("{line}");
    };
    run(1, &mut || criterion_1(&mut reports));
    run(2, &mut criterion_2);
    run(3, &mut || criterion_3(&mut reports));
    run(4, &mut criterion_4);
    run(5, &mut criterion_5);
    run(6, &mut criterion_6);
    run(7, &mut criterion_7);
    run(8, &mut criterion_8);
    run(9, &mut || criterion_9(&reports));
    if failures > 0 {
        eprintln!("{failures} criteria failed");
        std::process::exit(1);
    }
}
