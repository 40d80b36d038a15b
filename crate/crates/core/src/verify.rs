//! Cross-checks between the exact oracles, the path model, the estimators
//! and the circuit compiler. Each check is parameterized by size so the same
//! code backs a quick self-test and the full acceptance run.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{approx_jones, exact_reference, EstimatorConfig, Mode, PathSampler};
use crate::braid::{BraidWord, ClosureKind};
use crate::bracket::{jones_exact, jones_value};
use crate::circuit::{
    circuit_to_matrix, counter_returns_to_one, hadamard_expectation, synthesize_braid, synthesize_hadamard_test,
    TestPart,
};
use crate::error::Result;
use crate::laurent::{unit_a, LaurentPoly};
use crate::path_model::{
    apply_crossing, diagonal_amplitude, path_counts, phi_braid, phi_e, phi_sigma, BlockOperator, CMatrix,
    CoefficientTable, PathBasis,
};
use crate::tl::{jones_via_trace, Tangle};

pub const TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::new(name, residual <= tol, format!("max residual {residual:.3e} (tolerance {tol:.0e})"))
    }

    fn from_result(name: &str, r: Result<Self>) -> Self {
        r.unwrap_or_else(|e| Self::new(name, false, format!("error: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Self::Quick),
            "full" => Ok(Self::Full),
            other => Err(crate::error::Error::Config(format!("unknown verify level {other:?}"))),
        }
    }
}

/// A braid on `n` strands with a uniformly random length in `0..=max_len`
/// and uniformly random signed letters.
pub fn random_braid<R: Rng + ?Sized>(rng: &mut R, n: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    random_braid_of_len(rng, n, len)
}

pub fn random_braid_of_len<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> BraidWord {
    let word = if n < 2 {
        Vec::new()
    } else {
        (0..len)
            .map(|_| {
                let g = rng.gen_range(1..n as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect()
    };
    BraidWord::new(n, word).expect("letters in range")
}

fn braid(text: &str) -> BraidWord {
    BraidWord::parse(text).expect("fixed braid parses")
}

pub const TRIANGLE_KS: [u32; 5] = [3, 4, 5, 7, 10];

/// State sum, TL trace and path-model trace agree: exact polynomial equality
/// between the first two, `1e-9` numerically with the third.
pub fn oracle_triangle(cases: usize, seed: u64) -> CheckReport {
    let name = "oracle triangle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<(BraidWord, ClosureKind, u32)> = (0..cases)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let b = random_braid(&mut rng, n, 8);
            let closure = if n % 2 == 0 && rng.gen_bool(0.5) { ClosureKind::Plat } else { ClosureKind::Trace };
            (b, closure, TRIANGLE_KS[rng.gen_range(0..TRIANGLE_KS.len())])
        })
        .collect();
    let outcome: Result<Vec<Option<String>>> = inputs
        .par_iter()
        .map(|(b, closure, k)| {
            let diagram = b.close(*closure)?;
            let state_sum = jones_exact(&diagram)?;
            let (_, w) = diagram.orient_and_writhe();
            let tangle = match closure {
                ClosureKind::Trace => Tangle::from_braid(b),
                ClosureKind::Plat => Tangle::capcups_then(b)?,
            };
            let tl = jones_via_trace(&tangle, w)?;
            if state_sum != tl {
                return Ok(Some(format!("{b} ({closure}): state sum {state_sum} vs TL {tl}")));
            }
            let value = state_sum.eval(unit_a(*k)?)?;
            let path = exact_reference(b, *k, *closure)?;
            if (value - path).norm() > 1e-9 {
                return Ok(Some(format!("{b} ({closure}, k={k}): {value} vs path model {path}")));
            }
            Ok(None)
        })
        .collect();
    match outcome {
        Ok(failures) => {
            let bad: Vec<String> = failures.into_iter().flatten().collect();
            let detail = match bad.first() {
                None => format!("{cases} random braids agree"),
                Some(first) => format!("{} of {cases} disagree; first: {first}", bad.len()),
            };
            CheckReport::new(name, bad.is_empty(), detail)
        }
        Err(e) => CheckReport::new(name, false, format!("error: {e}")),
    }
}

pub fn trace_sampling_braids() -> Vec<BraidWord> {
    [
        "2: 1 1 1",
        "2: 1 -1 1 1",
        "3: 1 -2 1 -2",
        "3: 1 2 1 2",
        "3: -1 -1 2 2 -1",
        "4: 1 2 3",
        "4: 1 -2 3 -2 1",
        "4: 3 3 -1 2 2 -3",
        "3: 2 2 2 -1 -1 -1",
        "4: 1 1 2 -3 -2 1",
    ]
    .into_iter()
    .map(braid)
    .collect()
}

pub fn plat_sampling_braids() -> Vec<BraidWord> {
    [
        "2:",
        "2: 1",
        "2: 1 1 1",
        "2: -1 -1",
        "4: 2",
        "4: 2 2 2",
        "4: 1 -2 3",
        "4: 2 1 -3 2",
        "4: -2 -2 1 3 -2",
        "4: 2 3 1 -2 2 -3",
    ]
    .into_iter()
    .map(braid)
    .collect()
}

/// Sampled-mode estimates against the exact value: the fraction of
/// `(braid, seed)` runs inside the estimator's stated error bound must reach
/// `min_rate`.
pub fn sampling_accuracy(
    name: &str,
    braids: &[BraidWord],
    closure: ClosureKind,
    k: u32,
    seeds: u64,
    min_rate: f64,
) -> CheckReport {
    let run = || -> Result<CheckReport> {
        let jobs: Vec<(usize, u64)> = (0..braids.len()).flat_map(|b| (0..seeds).map(move |s| (b, s))).collect();
        let exact: Vec<Complex64> = braids.iter().map(|b| jones_value(b, closure, k)).collect::<Result<_>>()?;
        let hits: Vec<bool> = jobs
            .par_iter()
            .map(|&(b, seed)| {
                let cfg = EstimatorConfig::new(0.1, 0.01, seed, Mode::Sampled)?;
                let r = approx_jones(&braids[b], k, closure, &cfg)?;
                Ok((r.estimate - exact[b]).norm() <= r.error_bound)
            })
            .collect::<Result<_>>()?;
        let good = hits.iter().filter(|&&h| h).count();
        let rate = good as f64 / hits.len() as f64;
        Ok(CheckReport::new(
            name,
            rate >= min_rate,
            format!("{good}/{} runs within bound ({:.1}%, need {:.0}%)", hits.len(), 100.0 * rate, 100.0 * min_rate),
        ))
    };
    CheckReport::from_result(name, run())
}

fn op_residual(x: &BlockOperator, y: &BlockOperator) -> f64 {
    x.sub(y).map_or(f64::INFINITY, |d| d.operator_norm())
}

fn entry_residual(x: &BlockOperator, y: &BlockOperator) -> f64 {
    x.sub(y).map_or(f64::INFINITY, |d| d.max_abs_entry())
}

/// Dense matrix of one crossing built column by column with the statevector
/// kernel, independent of the block assembly.
fn crossing_by_columns(i: usize, sign: i8, basis: &PathBasis, table: &CoefficientTable) -> Result<CMatrix> {
    let len = basis.len();
    let mut m = CMatrix::zeros(len, len);
    for c in 0..len {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[c] = Complex64::new(1.0, 0.0);
        apply_crossing(i, sign, basis, table, &mut v)?;
        m.set_column(c, &nalgebra::DVector::from_vec(v));
    }
    Ok(m)
}

/// Residuals of the matrix-algebra identities for all `2 <= n <= max_n`,
/// `3 <= k <= max_k`.
pub fn algebra_invariants(max_n: usize, max_k: u32, seed: u64) -> Vec<CheckReport> {
    let grid: Vec<(usize, u32)> = (2..=max_n).flat_map(|n| (3..=max_k).map(move |k| (n, k))).collect();
    let per_instance: Result<Vec<[f64; 9]>> = grid
        .par_iter()
        .map(|&(n, k)| instance_residuals(n, k, seed))
        .collect();
    let names = [
        "TL relation: Phi_i^2 = d Phi_i",
        "TL relation: Phi_i Phi_{i+-1} Phi_i = Phi_i",
        "TL relation: far commutation",
        "Phi Hermitian",
        "phi unitary",
        "block preservation",
        "Markov: Tr_n(1) = 1 and cyclicity",
        "Markov: Tr_n(W Phi_{n-1}) = Tr_n(W) / d",
        "capcup projector",
    ];
    let mut reports = match per_instance {
        Ok(rows) => names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let worst = rows.iter().map(|r| r[j]).fold(0.0, f64::max);
                CheckReport::residual(*name, worst, TOLERANCE)
            })
            .collect(),
        Err(e) => vec![CheckReport::new("algebra invariants", false, format!("error: {e}"))],
    };
    reports.push(coefficient_identities(max_k.max(64)));
    reports
}

fn instance_residuals(n: usize, k: u32, seed: u64) -> Result<[f64; 9]> {
    let basis = Arc::new(PathBasis::enumerate(n, k)?);
    let table = CoefficientTable::new(k)?;
    let d = table.d();
    let id = BlockOperator::identity(basis.clone());
    let phis: Vec<BlockOperator> = (1..n).map(|i| phi_e(i, &basis, &table)).collect::<Result<_>>()?;
    let mut r = [0.0f64; 9];

    for (a, pa) in phis.iter().enumerate() {
        r[0] = r[0].max(op_residual(&pa.mul(pa)?, &pa.scale(d.into())));
        if let Some(pb) = phis.get(a + 1) {
            r[1] = r[1].max(op_residual(&pa.mul(pb)?.mul(pa)?, pa));
            r[1] = r[1].max(op_residual(&pb.mul(pa)?.mul(pb)?, pb));
        }
        for pb in phis.iter().skip(a + 2) {
            r[2] = r[2].max(op_residual(&pa.mul(pb)?, &pb.mul(pa)?));
        }
        r[3] = r[3].max(entry_residual(pa, &pa.adjoint()));
        for sign in [1i8, -1] {
            let s = phi_sigma(a + 1, sign, &basis, &table)?;
            r[4] = r[4].max(op_residual(&s.mul(&s.adjoint())?, &id));
            let dense = crossing_by_columns(a + 1, sign, &basis, &table)?;
            r[5] = r[5].max(match BlockOperator::from_dense(basis.clone(), &dense) {
                Some(op) => entry_residual(&op, &s),
                None => f64::INFINITY,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32 ^ k as u64);
    let x = phi_braid(&random_braid(&mut rng, n, 6), &basis, &table)?;
    let y = phi_braid(&random_braid(&mut rng, n, 6), &basis, &table)?;
    r[6] = (id.weighted_trace(&table) - 1.0).norm();
    r[6] = r[6].max((x.mul(&y)?.weighted_trace(&table) - y.mul(&x)?.weighted_trace(&table)).norm());

    if n >= 2 {
        // W from the first n-1 strands only: a braid and a product of Phi's
        let mut ws = vec![id.clone()];
        if n >= 3 {
            ws.push(phi_braid(&random_braid_of_len(&mut rng, n - 1, 5).with_strands(n)?, &basis, &table)?);
            let mut prod = id.clone();
            for _ in 0..4 {
                prod = prod.mul(&phis[rng.gen_range(0..n - 2)])?;
            }
            ws.push(prod);
        }
        let last = &phis[n - 2];
        for w in &ws {
            let lhs = w.mul(last)?.weighted_trace(&table);
            r[7] = r[7].max((lhs - w.weighted_trace(&table) / d).norm());
        }
    }

    if n % 2 == 0 {
        let mut p = id.clone();
        for i in (1..n).step_by(2) {
            p = p.mul(&phis[i - 1])?;
        }
        let p = p.scale(Complex64::new(d.powi(-(n as i32 / 2)), 0.0));
        let alpha = basis.alternating_index()?;
        let mut dense = CMatrix::zeros(basis.len(), basis.len());
        dense[(alpha, alpha)] = Complex64::new(1.0, 0.0);
        let proj = BlockOperator::from_dense(basis.clone(), &dense).expect("diagonal is block diagonal");
        r[8] = entry_residual(&p, &proj);
    }
    Ok(r)
}

/// Local coefficient equations and the eigenvector identity for `3 <= k <= max_k`.
pub fn coefficient_identities(max_k: u32) -> CheckReport {
    let mut worst = 0.0f64;
    for k in 3..=max_k {
        let t = match CoefficientTable::new(k) {
            Ok(t) => t,
            Err(e) => return CheckReport::new("coefficient identities", false, format!("error: {e}")),
        };
        let d = t.d();
        for l in 0..=k as i64 + 1 {
            if (1..k as i64).contains(&l) {
                worst = worst.max((t.lambda(l - 1) + t.lambda(l + 1) - d * t.lambda(l)).abs());
            }
            if let (Some(b), Some(c)) = (t.b(l + 1), t.c(l)) {
                if t.lambda(l) != 0.0 {
                    worst = worst.max((b * c - 1.0).abs());
                }
            }
            if let (Some(a), Some(dd)) = (t.a(l - 1), t.d_coeff(l)) {
                if t.lambda(l - 2) != 0.0 {
                    worst = worst.max((a * dd - 1.0).abs());
                }
            }
            if let (Some(a), Some(b), Some(c), Some(dd)) = (t.a(l), t.b(l), t.c(l), t.d_coeff(l)) {
                worst = worst.max((b * dd + a * c - d).abs());
                // real coefficients: conjugation conditions reduce to equality
                worst = worst.max((a - c).abs()).max((b - dd).abs());
            }
        }
    }
    CheckReport::residual("coefficient and eigenvector identities", worst, 1e-12)
}

/// Conjugation and stabilization leave the exact Jones polynomial unchanged.
pub fn markov_moves(cases: usize, seed: u64) -> CheckReport {
    let name = "Markov moves";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<(BraidWord, i32, i32)> = (0..cases)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let b = random_braid(&mut rng, n, 7);
            let g = rng.gen_range(1..n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let s = if rng.gen_bool(0.5) { n as i32 } else { -(n as i32) };
            (b, g, s)
        })
        .collect();
    let run = || -> Result<Vec<String>> {
        let bad: Vec<Option<String>> = inputs
            .par_iter()
            .map(|(b, g, s)| {
                let base = jones_exact(&b.close(ClosureKind::Trace)?)?;
                let n = b.strands();
                let mut conj = vec![*g];
                conj.extend_from_slice(b.word());
                conj.push(-g);
                let conj = jones_exact(&BraidWord::new(n, conj)?.close(ClosureKind::Trace)?)?;
                let mut stab = b.word().to_vec();
                stab.push(*s);
                let stab = jones_exact(&BraidWord::new(n + 1, stab)?.close(ClosureKind::Trace)?)?;
                Ok(if conj != base {
                    Some(format!("conjugating {b} by {g}"))
                } else if stab != base {
                    Some(format!("stabilizing {b} with {s}"))
                } else {
                    None
                })
            })
            .collect::<Result<_>>()?;
        Ok(bad.into_iter().flatten().collect())
    };
    match run() {
        Ok(bad) if bad.is_empty() => CheckReport::new(name, true, format!("{cases} cases, conjugation and stabilization")),
        Ok(bad) => CheckReport::new(name, false, format!("{} failures; first: {}", bad.len(), bad[0])),
        Err(e) => CheckReport::new(name, false, format!("error: {e}")),
    }
}

/// Exact check: along every path, the product of branch probabilities
/// times the block probability is `lambda_l / N`. In integers: the product
/// of chosen branch weights equals the product of totals divided by
/// `S[n][l]`.
pub fn sampler_branch_exactness(n: usize, k: u32) -> CheckReport {
    let name = format!("sampler branch ratios (n={n}, k={k})");
    let run = || -> Result<CheckReport> {
        let sampler = PathSampler::new(n, k)?;
        let counts = path_counts(n, k)?;
        let basis = PathBasis::enumerate(n, k)?;
        let mut bad = 0usize;
        for idx in 0..basis.len() {
            let p = basis.path(idx);
            let l = basis.endpoint(idx);
            let (mut num, mut den) = (1u128, 1u128);
            let mut pos = l;
            for j in (1..=n).rev() {
                let (left, right) = sampler.branch_weights(j, pos);
                if left != counts[j - 1][pos - 1] || right != counts[j - 1].get(pos + 1).copied().unwrap_or(0) {
                    bad += 1;
                }
                den *= left + right;
                if basis.step(p, j) {
                    num *= left;
                    pos -= 1;
                } else {
                    num *= right;
                    pos += 1;
                }
            }
            if num * counts[n][l] != den {
                bad += 1;
            }
            let block = sampler.block_probability(l) / counts[n][l] as f64;
            if (block - sampler.path_probability(l)).abs() > 1e-15 {
                bad += 1;
            }
        }
        Ok(CheckReport::new(name.clone(), bad == 0, format!("{} paths, {bad} mismatches", basis.len())))
    };
    CheckReport::from_result(&name, run())
}

/// Endpoint frequencies over `draws` samples within `sigmas` binomial
/// standard deviations of `lambda_l S[n][l] / N`.
pub fn sampler_frequencies(n: usize, k: u32, draws: u64, sigmas: f64, seed: u64) -> CheckReport {
    let name = format!("sampler endpoint frequencies (n={n}, k={k})");
    let run = || -> Result<CheckReport> {
        let sampler = PathSampler::new(n, k)?;
        let basis = PathBasis::enumerate(n, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = std::collections::BTreeMap::<usize, u64>::new();
        for _ in 0..draws {
            let bits = sampler.sample(&mut rng);
            let idx = basis.index_of(bits).ok_or_else(|| crate::error::Error::NotAPath(format!("{bits:b}")))?;
            *hist.entry(basis.endpoint(idx)).or_default() += 1;
        }
        let mut worst = 0.0f64;
        for &l in basis.blocks().keys() {
            let p = sampler.block_probability(l);
            let expected = p * draws as f64;
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            let got = hist.get(&l).copied().unwrap_or(0) as f64;
            worst = worst.max((got - expected).abs() / sd);
        }
        Ok(CheckReport::new(
            name.clone(),
            worst <= sigmas,
            format!("{draws} draws, worst deviation {worst:.2} sd (limit {sigmas})"),
        ))
    };
    CheckReport::from_result(&name, run())
}

/// Every single-generator braid for `n <= max_n`, plus `random_cases` random
/// braids (`m <= 4`), compiled and compared with `phi(B)`; and Hadamard-test
/// circuits against the analytic amplitude.
pub fn circuit_equivalence(max_n: usize, random_cases: usize, hadamard_cases: usize, seed: u64) -> CheckReport {
    let name = "circuit equivalence";
    let ks = [3u32, 4, 5];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases: Vec<(BraidWord, u32)> = Vec::new();
    for n in 2..=max_n {
        for g in 1..n as i32 {
            for s in [g, -g] {
                for &k in &ks {
                    cases.push((BraidWord::new(n, vec![s]).expect("in range"), k));
                }
            }
        }
    }
    for _ in 0..random_cases {
        let n = rng.gen_range(2..=max_n);
        cases.push((random_braid(&mut rng, n, 4), ks[rng.gen_range(0..3)]));
    }
    let hadamard: Vec<(BraidWord, u32, TestPart, u64)> = (0..hadamard_cases)
        .map(|_| {
            let n = rng.gen_range(2..=max_n.min(3));
            let b = random_braid(&mut rng, n, 4);
            let part = if rng.gen_bool(0.5) { TestPart::Re } else { TestPart::Im };
            (b, ks[rng.gen_range(0..3)], part, rng.gen())
        })
        .collect();

    let run = || -> Result<(f64, f64, bool)> {
        let matrix_worst = cases
            .par_iter()
            .map(|(b, k)| -> Result<(f64, bool)> {
                let basis = Arc::new(PathBasis::enumerate(b.strands(), *k)?);
                let table = CoefficientTable::new(*k)?;
                let circuit = synthesize_braid(b, *k)?;
                let got = circuit_to_matrix(&circuit, &basis)?;
                let want = phi_braid(b, &basis, &table)?;
                Ok((entry_residual(&got, &want), counter_returns_to_one(&circuit, &basis)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let hadamard_worst = hadamard
            .par_iter()
            .map(|(b, k, part, pick)| -> Result<f64> {
                let basis = PathBasis::enumerate(b.strands(), *k)?;
                let table = CoefficientTable::new(*k)?;
                let p = (*pick % basis.len() as u64) as usize;
                let amp = diagonal_amplitude(b, &basis, &table, p)?;
                let want = if *part == TestPart::Re { amp.re } else { amp.im };
                let got = hadamard_expectation(&synthesize_hadamard_test(b, *k, *part)?, &basis, p)?;
                Ok((got - want).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((
            matrix_worst.iter().map(|x| x.0).fold(0.0, f64::max),
            hadamard_worst.into_iter().fold(0.0, f64::max),
            matrix_worst.iter().all(|x| x.1),
        ))
    };
    match run() {
        Ok((m, h, clean)) => CheckReport::new(
            name,
            m <= TOLERANCE && h <= TOLERANCE && clean,
            format!(
                "{} braids: max entry residual {m:.3e}; {} hadamard tests: max residual {h:.3e}; counter clean: {clean}",
                cases.len(),
                hadamard.len()
            ),
        ),
        Err(e) => CheckReport::new(name, false, format!("error: {e}")),
    }
}

/// Pinned values of small closures.
pub fn known_values() -> CheckReport {
    let name = "known values";
    let run = || -> Result<Vec<String>> {
        let jones = |text: &str| jones_exact(&braid(text).close(ClosureKind::Trace)?);
        let mut bad = Vec::new();
        let poly = |t: &[(i64, i64)]| LaurentPoly::from_terms(t.iter().copied());
        let checks = [
            ("unknot", jones("1:")?, LaurentPoly::one()),
            ("trace closure of [1] in B_2", jones("2: 1")?, LaurentPoly::one()),
            // -t^-4 + t^-3 + t^-1 with t = A^-4
            ("trace closure of [1,1,1] in B_2", jones("2: 1 1 1")?, poly(&[(16, -1), (12, 1), (4, 1)])),
            ("trace closure of [1,1] in B_2", jones("2: 1 1")?, poly(&[(10, -1), (2, -1)])),
        ];
        for (what, got, want) in checks {
            if got != want {
                bad.push(format!("{what}: got {got}, expected {want}"));
            }
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) if bad.is_empty() => CheckReport::new(name, true, "4 pinned polynomials match"),
        Ok(bad) => CheckReport::new(name, false, bad.join("; ")),
        Err(e) => CheckReport::new(name, false, format!("error: {e}")),
    }
}

/// Every check, sized by `level`.
pub fn run(level: Level) -> Vec<CheckReport> {
    let seed = 0x5eed;
    let full = level == Level::Full;
    let mut reports = vec![known_values(), oracle_triangle(if full { 200 } else { 30 }, seed)];
    reports.extend(algebra_invariants(if full { 6 } else { 4 }, 8, seed));
    reports.push(markov_moves(if full { 100 } else { 20 }, seed));
    reports.push(sampler_branch_exactness(6, 5));
    reports.push(sampler_frequencies(6, 5, if full { 100_000 } else { 10_000 }, 4.0, seed));
    reports.push(circuit_equivalence(4, if full { 20 } else { 5 }, if full { 10 } else { 4 }, seed));
    let (trace, plat) = (trace_sampling_braids(), plat_sampling_braids());
    let (nb, seeds) = if full { (10, 100) } else { (3, 5) };
    reports.push(sampling_accuracy("trace-closure sampling accuracy", &trace[..nb], ClosureKind::Trace, 5, seeds, 0.97));
    reports.push(sampling_accuracy("plat-closure sampling accuracy", &plat[..nb], ClosureKind::Plat, 5, seeds, 0.97));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_braids_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let b = random_braid(&mut rng, 3, 5);
            assert!(b.len() <= 5);
            assert!(b.word().iter().all(|&g| g != 0 && g.abs() < 3));
        }
    }

    #[test]
    fn small_checks_pass() {
        assert!(known_values().passed);
        assert!(oracle_triangle(5, 3).passed);
        assert!(markov_moves(5, 3).passed);
        assert!(sampler_branch_exactness(5, 4).passed);
        for r in algebra_invariants(3, 5, 3) {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn level_parses() {
        assert_eq!("quick".parse::<Level>().unwrap(), Level::Quick);
        assert!("slow".parse::<Level>().is_err());
    }
}
