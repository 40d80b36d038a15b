//! Classical simulation of the two randomized Jones estimators: weighted path
//! sampling, Hadamard-test sampling and the final rescaling.
//!
//! Randomness: every repetition `j` and part (Re = 0, Im = 1) gets its own
//! ChaCha8 stream `2j + part` under the configured seed, so a run is
//! reproducible and independent of how repetitions are scheduled.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, ClosureKind};
use crate::error::{Error, Result};
use crate::laurent::{unit_a, LaurentPoly};
use crate::path_model::{diagonal_amplitude, path_counts, phi_braid, CoefficientTable, PathBasis};

/// Name of the generator behind every sampled run.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), stream = 2*repetition + part";

/// Reference values via `Tr_n` are only attached when `|P_{n,k}|` is at
/// most this large.
pub const REFERENCE_MAX_BASIS: usize = 4096;

/// Slack allowed on a Hadamard-test probability before it is treated as a
/// unitarity failure.
const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Replace every random step by its expectation.
    Exact,
    /// Sample paths and +/-1 Hadamard-test outcomes.
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "sampled" => Ok(Self::Sampled),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub mode: Mode,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64, mode: Mode) -> Result<Self> {
        let cfg = Self { epsilon, delta, seed, mode };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { epsilon: 0.1, delta: 0.01, seed: 0, mode: Mode::Sampled }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxResult {
    pub closure: ClosureKind,
    pub mode: Mode,
    #[serde(serialize_with = "crate::complex_serde::serialize")]
    pub estimate: Complex64,
    /// Samples drawn for each of the Re and Im parts (0 in exact mode).
    pub samples_per_part: usize,
    pub mean_re: f64,
    pub mean_im: f64,
    /// Constant multiplying `mean_re + i mean_im`.
    #[serde(serialize_with = "crate::complex_serde::serialize")]
    pub rescaling: Complex64,
    /// `epsilon` times the absolute rescaling factor.
    pub error_bound: f64,
    #[serde(serialize_with = "crate::complex_serde::option::serialize")]
    pub exact_reference: Option<Complex64>,
}

/// `ceil((2 / eps^2) ln(4 / delta))` samples per part: Hoeffding for each of
/// Re and Im at confidence `delta / 2`.
pub fn plan_samples(cfg: &EstimatorConfig) -> Result<usize> {
    cfg.validate()?;
    Ok((2.0 / (cfg.epsilon * cfg.epsilon) * (4.0 / cfg.delta).ln()).ceil() as usize)
}

pub fn stream_rng(seed: u64, repetition: u64, part: Part) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * repetition + part as u64);
    rng
}

/// Draws paths with `Pr(p) = lambda_{l(p)} / N`: an endpoint block with weight
/// `lambda_l |P_{n,k,l}|`, then a uniform path in the block by walking the
/// count table backwards.
#[derive(Clone, Debug)]
pub struct PathSampler {
    n: usize,
    counts: Vec<Vec<u128>>,
    /// (endpoint, cumulative weight)
    cumulative: Vec<(usize, f64)>,
    table: CoefficientTable,
}

impl PathSampler {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        let counts = path_counts(n, k)?;
        let table = CoefficientTable::new(k)?;
        let mut acc = 0.0;
        let mut cumulative = Vec::new();
        for l in 1..k as usize {
            if counts[n][l] > 0 {
                acc += table.lambda(l as i64) * counts[n][l] as f64;
                cumulative.push((l, acc));
            }
        }
        Ok(Self { n, counts, cumulative, table })
    }

    pub fn counts(&self) -> &[Vec<u128>] {
        &self.counts
    }

    /// `N`.
    pub fn normalization(&self) -> f64 {
        self.cumulative.last().map_or(0.0, |c| c.1)
    }

    /// Probability of drawing a path in block `l`.
    pub fn block_probability(&self, l: usize) -> f64 {
        self.table.lambda(l as i64) * self.counts[self.n][l] as f64 / self.normalization()
    }

    /// `Pr(p) = lambda_{l(p)} / N`.
    pub fn path_probability(&self, endpoint: usize) -> f64 {
        self.table.lambda(endpoint as i64) / self.normalization()
    }

    /// Exact odds for the step-`j` site given site `j` is at `l`:
    /// `(S[j-1][l-1], S[j-1][l+1])`, the weights of coming from the left
    /// (a right step, bit 1) and from the right (bit 0).
    pub fn branch_weights(&self, j: usize, l: usize) -> (u128, u128) {
        let prev = &self.counts[j - 1];
        let left = prev[l - 1];
        let right = prev.get(l + 1).copied().unwrap_or(0);
        (left, right)
    }

    pub fn sample_endpoint<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>() * self.normalization();
        self.cumulative
            .iter()
            .find(|(_, c)| u < *c)
            .unwrap_or_else(|| self.cumulative.last().expect("nonempty path space"))
            .0
    }

    /// Uniform path in `P_{n,k,l}`, returned as bits (step 1 most significant).
    pub fn sample_in_block<R: Rng + ?Sized>(&self, l: usize, rng: &mut R) -> u64 {
        let mut bits = 0u64;
        let mut pos = l;
        for j in (1..=self.n).rev() {
            let (left, right) = self.branch_weights(j, pos);
            let step_right = rng.gen_range(0..left + right) < left;
            if step_right {
                bits |= 1 << (self.n - j);
                pos -= 1;
            } else {
                pos += 1;
            }
        }
        debug_assert_eq!(pos, 1);
        bits
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let l = self.sample_endpoint(rng);
        self.sample_in_block(l, rng)
    }
}

/// One Hadamard-test outcome (sampled) or its expectation (exact) for the
/// given amplitude `<p|Q|p>`.
pub fn hadamard_sample<R: Rng + ?Sized>(amplitude: Complex64, part: Part, mode: Mode, rng: &mut R) -> Result<f64> {
    let value = match part {
        Part::Re => amplitude.re,
        Part::Im => amplitude.im,
    };
    let p_plus = (1.0 + value) / 2.0;
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p_plus) {
        return Err(Error::Probability(p_plus));
    }
    Ok(match mode {
        Mode::Exact => value,
        Mode::Sampled => {
            if rng.gen::<f64>() < p_plus.clamp(0.0, 1.0) {
                1.0
            } else {
                -1.0
            }
        }
    })
}

/// Hadamard test on `phi(B)` with input path `p` (basis index).
pub fn hadamard_test<R: Rng + ?Sized>(
    braid: &BraidWord,
    basis: &PathBasis,
    table: &CoefficientTable,
    path: usize,
    part: Part,
    mode: Mode,
    rng: &mut R,
) -> Result<f64> {
    let amplitude = diagonal_amplitude(braid, basis, table, path)?;
    hadamard_sample(amplitude, part, mode, rng)
}

struct Instance {
    basis: Arc<PathBasis>,
    table: CoefficientTable,
    a: Complex64,
}

impl Instance {
    fn new(n: usize, k: u32) -> Result<Self> {
        Ok(Self {
            basis: Arc::new(PathBasis::enumerate(n, k)?),
            table: CoefficientTable::new(k)?,
            a: unit_a(k)?,
        })
    }

    fn writhe_factor(&self, w: i64) -> Result<Complex64> {
        LaurentPoly::neg_a_pow(3 * w).eval(self.a)
    }

    /// `Tr_n(phi(B))` from block matrices.
    fn weighted_trace(&self, braid: &BraidWord) -> Result<Complex64> {
        Ok(phi_braid(braid, &self.basis, &self.table)?.weighted_trace(&self.table))
    }
}

/// Trace-closure estimator: output `(-A)^{3w} d^{n-1} r`.
pub fn approx_jones_trace(braid: &BraidWord, k: u32, cfg: &EstimatorConfig) -> Result<ApproxResult> {
    cfg.validate()?;
    let n = braid.strands();
    let inst = Instance::new(n, k)?;
    let rescaling = inst.writhe_factor(braid.exponent_sum())? * inst.table.d().powi(n as i32 - 1);
    let small = inst.basis.len() <= REFERENCE_MAX_BASIS;

    let (mean, samples) = match cfg.mode {
        Mode::Exact => (inst.weighted_trace(braid)?, 0),
        Mode::Sampled => {
            let reps = plan_samples(cfg)?;
            let sampler = PathSampler::new(n, k)?;
            let re = sampled_trace_part(braid, &inst, &sampler, cfg.seed, reps, Part::Re)?;
            let im = sampled_trace_part(braid, &inst, &sampler, cfg.seed, reps, Part::Im)?;
            (Complex64::new(re, im), reps)
        }
    };
    let exact_reference = match cfg.mode {
        Mode::Exact => Some(rescaling * mean),
        Mode::Sampled if small => Some(rescaling * inst.weighted_trace(braid)?),
        Mode::Sampled => None,
    };
    Ok(ApproxResult {
        closure: ClosureKind::Trace,
        mode: cfg.mode,
        estimate: rescaling * mean,
        samples_per_part: samples,
        mean_re: mean.re,
        mean_im: mean.im,
        rescaling,
        error_bound: cfg.epsilon * rescaling.norm(),
        exact_reference,
    })
}

fn sampled_trace_part(
    braid: &BraidWord,
    inst: &Instance,
    sampler: &PathSampler,
    seed: u64,
    reps: usize,
    part: Part,
) -> Result<f64> {
    // draw every path first, then simulate each distinct path once
    let mut draws: Vec<(usize, ChaCha8Rng)> = (0..reps as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j, part);
            let bits = sampler.sample(&mut rng);
            let idx = inst.basis.index_of(bits).expect("sampler only returns admissible paths");
            (idx, rng)
        })
        .collect();

    let mut distinct: Vec<usize> = draws.iter().map(|d| d.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let amplitudes: Vec<(usize, Complex64)> = distinct
        .par_iter()
        .map(|&idx| diagonal_amplitude(braid, &inst.basis, &inst.table, idx).map(|a| (idx, a)))
        .collect::<Result<_>>()?;

    let mut total = 0i64;
    for (idx, rng) in draws.iter_mut() {
        let pos = amplitudes.binary_search_by_key(idx, |a| a.0).expect("amplitude computed");
        total += hadamard_sample(amplitudes[pos].1, part, Mode::Sampled, rng)? as i64;
    }
    Ok(total as f64 / reps as f64)
}

/// Plat-closure estimator: output `(-A)^{3w} d^{3n/2-1} lambda_1 r / N` with
/// `r ~ <alpha|phi(B)|alpha>`, `alpha = |1010...10>`.
pub fn approx_jones_plat(braid: &BraidWord, k: u32, cfg: &EstimatorConfig) -> Result<ApproxResult> {
    cfg.validate()?;
    let n = braid.strands();
    if n % 2 != 0 {
        return Err(Error::OddPlat(n));
    }
    let inst = Instance::new(n, k)?;
    let rescaling = plat_rescaling(braid, &inst)?;
    let alpha = inst.basis.alternating_index()?;
    let amplitude = diagonal_amplitude(braid, &inst.basis, &inst.table, alpha)?;

    let (mean, samples) = match cfg.mode {
        Mode::Exact => (amplitude, 0),
        Mode::Sampled => {
            let reps = plan_samples(cfg)?;
            let part_mean = |part: Part| -> Result<f64> {
                let mut total = 0i64;
                for j in 0..reps as u64 {
                    let mut rng = stream_rng(cfg.seed, j, part);
                    total += hadamard_sample(amplitude, part, Mode::Sampled, &mut rng)? as i64;
                }
                Ok(total as f64 / reps as f64)
            };
            (Complex64::new(part_mean(Part::Re)?, part_mean(Part::Im)?), reps)
        }
    };
    Ok(ApproxResult {
        closure: ClosureKind::Plat,
        mode: cfg.mode,
        estimate: rescaling * mean,
        samples_per_part: samples,
        mean_re: mean.re,
        mean_im: mean.im,
        rescaling,
        error_bound: cfg.epsilon * rescaling.norm(),
        exact_reference: Some(rescaling * amplitude),
    })
}

fn plat_rescaling(braid: &BraidWord, inst: &Instance) -> Result<Complex64> {
    let n = braid.strands();
    let (_, w) = braid.close(ClosureKind::Plat)?.orient_and_writhe();
    let norm = inst.table.normalization(&inst.basis);
    Ok(inst.writhe_factor(w)? * inst.table.d().powi(3 * n as i32 / 2 - 1) * inst.table.lambda(1) / norm)
}

pub fn approx_jones(braid: &BraidWord, k: u32, closure: ClosureKind, cfg: &EstimatorConfig) -> Result<ApproxResult> {
    match closure {
        ClosureKind::Trace => approx_jones_trace(braid, k, cfg),
        ClosureKind::Plat => approx_jones_plat(braid, k, cfg),
    }
}

/// Deterministic path-model value of the Jones polynomial at
/// `t = exp(2 pi i / k)`: `(-A)^{3w} d^{n-1} Tr_n(phi(B))` for trace
/// closures, the rescaled `<alpha|phi(B)|alpha>` for plat closures.
pub fn exact_reference(braid: &BraidWord, k: u32, closure: ClosureKind) -> Result<Complex64> {
    let n = braid.strands();
    let inst = Instance::new(n, k)?;
    match closure {
        ClosureKind::Trace => {
            let factor = inst.writhe_factor(braid.exponent_sum())? * inst.table.d().powi(n as i32 - 1);
            Ok(factor * inst.weighted_trace(braid)?)
        }
        ClosureKind::Plat => {
            if n % 2 != 0 {
                return Err(Error::OddPlat(n));
            }
            let alpha = inst.basis.alternating_index()?;
            Ok(plat_rescaling(braid, &inst)? * diagonal_amplitude(braid, &inst.basis, &inst.table, alpha)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::jones_value;

    fn b(s: &str) -> BraidWord {
        BraidWord::parse(s).unwrap()
    }

    #[test]
    fn sample_plan() {
        let plan = |e, d| plan_samples(&EstimatorConfig::new(e, d, 0, Mode::Sampled).unwrap()).unwrap();
        assert_eq!(plan(1.0, 0.5), 5);
        assert_eq!(plan(0.1, 0.01), 1199);
        let (a, b) = (plan(0.2, 0.05), plan(0.1, 0.05));
        assert!(b >= 4 * a - 4 && b <= 4 * a);
        assert!(EstimatorConfig::new(0.0, 0.1, 0, Mode::Exact).is_err());
        assert!(EstimatorConfig::new(1.5, 0.1, 0, Mode::Exact).is_err());
        assert!(EstimatorConfig::new(0.1, 1.0, 0, Mode::Exact).is_err());
    }

    #[test]
    fn sampler_probabilities_n2_k5() {
        let s = PathSampler::new(2, 5).unwrap();
        let t = CoefficientTable::new(5).unwrap();
        let norm = t.lambda(1) + t.lambda(3);
        assert!((s.block_probability(1) - t.lambda(1) / norm).abs() < 1e-15);
        assert!((s.block_probability(1) - 0.381_966).abs() < 1e-6);
        assert!((s.block_probability(3) - 0.618_034).abs() < 1e-6);
    }

    #[test]
    fn forced_path() {
        let s = PathSampler::new(4, 3).unwrap();
        let mut rng = stream_rng(7, 0, Part::Re);
        for _ in 0..20 {
            assert_eq!(s.sample(&mut rng), 0b1010);
        }
    }

    #[test]
    fn hadamard_examples() {
        let basis = PathBasis::enumerate(2, 5).unwrap();
        let table = CoefficientTable::new(5).unwrap();
        let mut rng = stream_rng(1, 0, Part::Re);
        let empty = b("2:");
        for idx in 0..basis.len() {
            assert_eq!(hadamard_test(&empty, &basis, &table, idx, Part::Re, Mode::Exact, &mut rng).unwrap(), 1.0);
            assert_eq!(hadamard_test(&empty, &basis, &table, idx, Part::Im, Mode::Exact, &mut rng).unwrap(), 0.0);
            for _ in 0..10 {
                assert_eq!(hadamard_test(&empty, &basis, &table, idx, Part::Re, Mode::Sampled, &mut rng).unwrap(), 1.0);
            }
        }
        let p11 = basis.parse_path("11").unwrap();
        let amp = diagonal_amplitude(&b("2: 1"), &basis, &table, p11).unwrap();
        assert!((amp - unit_a(5).unwrap().inv()).norm() < 1e-12);

        let w = b("2: 1 1 -1 1");
        for idx in 0..basis.len() {
            let x = diagonal_amplitude(&w, &basis, &table, idx).unwrap();
            let y = diagonal_amplitude(&w.inverse(), &basis, &table, idx).unwrap();
            assert!((x - y.conj()).norm() < 1e-12);
        }
        assert!(matches!(
            hadamard_sample(Complex64::new(1.5, 0.0), Part::Re, Mode::Sampled, &mut rng),
            Err(Error::Probability(_))
        ));
    }

    #[test]
    fn trace_estimator_examples() {
        let cfg = EstimatorConfig { mode: Mode::Sampled, ..Default::default() };
        let r = approx_jones_trace(&b("1:"), 5, &EstimatorConfig { mode: Mode::Exact, ..cfg }).unwrap();
        assert_eq!(r.estimate, Complex64::new(1.0, 0.0));
        // Im outcomes of a Hadamard test on the identity are fair coin flips
        let r = approx_jones_trace(&b("1:"), 5, &cfg).unwrap();
        assert_eq!(r.mean_re, 1.0);
        assert!(r.mean_im.abs() < 0.1);

        let trefoil = b("2: 1 1 1");
        let oracle = jones_value(&trefoil, ClosureKind::Trace, 5).unwrap();
        let exact = approx_jones_trace(&trefoil, 5, &EstimatorConfig { mode: Mode::Exact, ..cfg }).unwrap();
        assert!((exact.estimate - oracle).norm() < 1e-9);

        let sampled = approx_jones_trace(&trefoil, 5, &EstimatorConfig { seed: 42, ..cfg }).unwrap();
        let d = CoefficientTable::new(5).unwrap().d();
        assert!((sampled.estimate - oracle).norm() <= 0.1 * d);
        assert_eq!(sampled.samples_per_part, 1199);
        assert!((sampled.estimate - sampled.rescaling * Complex64::new(sampled.mean_re, sampled.mean_im)).norm() < 1e-15);
        let again = approx_jones_trace(&trefoil, 5, &EstimatorConfig { seed: 42, ..cfg }).unwrap();
        assert_eq!(sampled, again);
    }

    #[test]
    fn plat_estimator_examples() {
        let cfg = EstimatorConfig { mode: Mode::Exact, ..Default::default() };
        let unknot = approx_jones_plat(&b("2:"), 5, &cfg).unwrap();
        assert!((unknot.estimate - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let sampled = approx_jones_plat(&b("2:"), 5, &EstimatorConfig { mode: Mode::Sampled, ..cfg }).unwrap();
        assert_eq!(sampled.mean_re, 1.0);

        let w = b("4: 2");
        let oracle = jones_value(&w, ClosureKind::Plat, 5).unwrap();
        assert!((approx_jones_plat(&w, 5, &cfg).unwrap().estimate - oracle).norm() < 1e-9);
        assert_eq!(approx_jones_plat(&b("3: 1"), 5, &cfg), Err(Error::OddPlat(3)));
    }

    #[test]
    fn reference_examples() {
        for n in 1..5 {
            let d = CoefficientTable::new(7).unwrap().d();
            let v = exact_reference(&BraidWord::identity(n).unwrap(), 7, ClosureKind::Trace).unwrap();
            assert!((v - Complex64::new(d.powi(n as i32 - 1), 0.0)).norm() < 1e-12);
        }
        let w = b("3: 1 -2 1 1");
        let conj = b("3: 2 1 -2 1 1 -2");
        let x = exact_reference(&w, 5, ClosureKind::Trace).unwrap();
        let y = exact_reference(&conj, 5, ClosureKind::Trace).unwrap();
        assert!((x - y).norm() < 1e-12);
    }
}
