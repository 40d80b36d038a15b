mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jones_core::algorithms::{approx_jones, EstimatorConfig, Mode, PathSampler, RNG_ALGORITHM};
use jones_core::braid::{BraidWord, ClosureKind};
use jones_core::bracket::{bracket_with_cap, jones_exact_with_cap, DEFAULT_MAX_CROSSINGS};
use jones_core::circuit::{emit_text, synthesize_braid, synthesize_hadamard_test, TestPart};
use jones_core::error::Error;
use jones_core::laurent::{unit_a, LaurentPoly};
use jones_core::path_model::{bits_to_string, PathBasis};
use jones_core::tl::{jones_via_trace_with_cap, Tangle, DEFAULT_MAX_STRANDS};
use jones_core::verify::{self, Level};
use output::{complex, document, render, Format};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "jones", version, about = "Exact and path-model evaluation of Jones polynomials of braid closures")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BraidInput {
    /// Braid as "n: g1 g2 ..." (e.g. "3: 1 -2 1") or JSON {"strands": n, "word": [...]}.
    #[arg(required_unless_present = "braid_file", conflicts_with = "braid_file")]
    braid: Option<String>,

    /// Read the braid from a file instead.
    #[arg(long)]
    braid_file: Option<PathBuf>,
}

impl BraidInput {
    fn load(&self) -> Result<BraidWord, Failure> {
        let text = match (&self.braid, &self.braid_file) {
            (Some(t), _) => t.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
            (None, None) => return Err(Failure::Usage("no braid given".into())),
        };
        Ok(BraidWord::parse(text.trim())?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kauffman bracket by state sum.
    Bracket {
        #[command(flatten)]
        input: BraidInput,
        #[arg(long, default_value = "trace")]
        closure: ClosureKind,
        /// Refuse diagrams with more crossings than this.
        #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
        max_crossings: usize,
    },
    /// Jones polynomial by state sum, optionally evaluated at t = exp(2 pi i / k).
    JonesExact {
        #[command(flatten)]
        input: BraidInput,
        #[arg(long, default_value = "trace")]
        closure: ClosureKind,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
        max_crossings: usize,
    },
    /// Jones polynomial through the Temperley-Lieb Markov trace.
    JonesTl {
        #[command(flatten)]
        input: BraidInput,
        #[arg(long, default_value = "trace")]
        closure: ClosureKind,
        #[arg(long)]
        k: Option<u32>,
        /// Refuse braids on more strands than this.
        #[arg(long, default_value_t = DEFAULT_MAX_STRANDS)]
        max_strands: usize,
    },
    /// Randomized estimate of the Jones value at t = exp(2 pi i / k).
    JonesApprox {
        #[command(flatten)]
        input: BraidInput,
        #[arg(long, default_value = "trace")]
        closure: ClosureKind,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Seed for all randomness; drawn from the OS and reported if absent.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "sampled")]
        mode: Mode,
    },
    /// Draw paths with probability lambda_l / N.
    SamplePath {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compile a braid to the circuit IR.
    EmitCircuit {
        #[command(flatten)]
        input: BraidInput,
        #[arg(long)]
        k: u32,
        /// Emit the Hadamard-test circuit for this part instead.
        #[arg(long, value_enum)]
        hadamard: Option<PartArg>,
        /// Also write the IR to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in invariant suite.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum PartArg {
    Re,
    Im,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Braid(_)
            | Error::GeneratorOutOfRange { .. }
            | Error::OddPlat(_)
            | Error::InvalidK(_)
            | Error::Config(_)
            | Error::NotAPath(_)
            | Error::CircuitParse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Computation(e.to_string()),
        }
    }
}

/// What a command produced: a document, plus raw text that replaces it in
/// text format.
struct Outcome {
    doc: Value,
    raw_text: Option<String>,
    success: bool,
}

impl Outcome {
    fn doc(m: Map<String, Value>) -> Self {
        Self { doc: Value::Object(m), raw_text: None, success: true }
    }
}

fn braid_json(b: &BraidWord, closure: Option<ClosureKind>) -> Value {
    let mut m = Map::new();
    m.insert("text".into(), b.to_string().into());
    m.insert("strands".into(), b.strands().into());
    m.insert("word".into(), b.word().into());
    if let Some(c) = closure {
        m.insert("closure".into(), c.to_string().into());
    }
    Value::Object(m)
}

fn t_form(p: &LaurentPoly) -> Value {
    match p.to_t_terms() {
        None => Value::Null,
        Some(terms) => {
            let text = terms
                .iter()
                .enumerate()
                .map(|(i, (e, c))| {
                    let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
                    let mag = c.magnitude();
                    match (i, sign) {
                        (0, "-") => format!("-{mag}*t^{e}"),
                        (0, _) => format!("{mag}*t^{e}"),
                        _ => format!(" {sign} {mag}*t^{e}"),
                    }
                })
                .collect::<String>();
            if text.is_empty() {
                "0".into()
            } else {
                text.into()
            }
        }
    }
}

fn poly_json(p: &LaurentPoly) -> Value {
    json!({
        "text": p.to_string(),
        "terms": p,
        "in_t": t_form(p),
    })
}

fn evaluate(p: &LaurentPoly, k: Option<u32>) -> Result<Value, Failure> {
    Ok(match k {
        None => Value::Null,
        Some(k) => json!({ "k": k, "value": complex(p.eval(unit_a(k)?)?) }),
    })
}

fn seed_or_entropy(seed: Option<u64>) -> (u64, bool) {
    match seed {
        Some(s) => (s, false),
        None => {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            (s, true)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Bracket { input, closure, max_crossings } => {
            let b = input.load()?;
            let diagram = b.close(*closure)?;
            let br = bracket_with_cap(&diagram, *max_crossings)?;
            let mut m = document("bracket");
            m.insert("braid".into(), braid_json(&b, Some(*closure)));
            m.insert("crossings".into(), diagram.crossing_count().into());
            m.insert("components".into(), diagram.component_count().into());
            m.insert("bracket".into(), poly_json(&br));
            Ok(Outcome::doc(m))
        }
        Command::JonesExact { input, closure, k, max_crossings } => {
            let b = input.load()?;
            let diagram = b.close(*closure)?;
            let (_, w) = diagram.orient_and_writhe();
            let v = jones_exact_with_cap(&diagram, *max_crossings)?;
            let mut m = document("jones-exact");
            m.insert("braid".into(), braid_json(&b, Some(*closure)));
            m.insert("writhe".into(), w.into());
            m.insert("components".into(), diagram.component_count().into());
            m.insert("jones".into(), poly_json(&v));
            m.insert("evaluation".into(), evaluate(&v, *k)?);
            Ok(Outcome::doc(m))
        }
        Command::JonesTl { input, closure, k, max_strands } => {
            let b = input.load()?;
            let (_, w) = b.close(*closure)?.orient_and_writhe();
            let tangle = match closure {
                ClosureKind::Trace => Tangle::from_braid(&b),
                ClosureKind::Plat => Tangle::capcups_then(&b)?,
            };
            let v = jones_via_trace_with_cap(&tangle, w, *max_strands)?;
            let mut m = document("jones-tl");
            m.insert("braid".into(), braid_json(&b, Some(*closure)));
            m.insert("writhe".into(), w.into());
            m.insert("jones".into(), poly_json(&v));
            m.insert("evaluation".into(), evaluate(&v, *k)?);
            Ok(Outcome::doc(m))
        }
        Command::JonesApprox { input, closure, k, epsilon, delta, seed, mode } => {
            let b = input.load()?;
            let (seed, drawn) = seed_or_entropy(*seed);
            let cfg = EstimatorConfig::new(*epsilon, *delta, seed, *mode)?;
            let r = approx_jones(&b, *k, *closure, &cfg)?;
            let mut m = document("jones-approx");
            m.insert("braid".into(), braid_json(&b, Some(*closure)));
            m.insert(
                "config".into(),
                json!({
                    "k": k,
                    "epsilon": epsilon,
                    "delta": delta,
                    "seed": seed,
                    "seed_from_entropy": drawn,
                    "mode": mode_name(*mode),
                    "rng": RNG_ALGORITHM,
                }),
            );
            m.insert("estimate".into(), complex(r.estimate));
            m.insert("error_bound".into(), r.error_bound.into());
            m.insert("samples_per_part".into(), r.samples_per_part.into());
            m.insert("mean".into(), json!({ "re": r.mean_re, "im": r.mean_im }));
            m.insert("rescaling".into(), complex(r.rescaling));
            m.insert("exact_reference".into(), r.exact_reference.map_or(Value::Null, complex));
            Ok(Outcome::doc(m))
        }
        Command::SamplePath { n, k, count, seed } => {
            let (seed, drawn) = seed_or_entropy(*seed);
            let sampler = PathSampler::new(*n, *k)?;
            let basis = PathBasis::enumerate(*n, *k)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Value> = (0..*count)
                .map(|_| {
                    let bits = sampler.sample(&mut rng);
                    let idx = basis.index_of(bits).expect("sampler returns admissible paths");
                    let l = basis.endpoint(idx);
                    json!({
                        "path": bits_to_string(bits, *n),
                        "endpoint": l,
                        "probability": sampler.path_probability(l),
                    })
                })
                .collect();
            let mut m = document("sample-path");
            m.insert("n".into(), (*n).into());
            m.insert("k".into(), (*k).into());
            m.insert("seed".into(), seed.into());
            m.insert("seed_from_entropy".into(), drawn.into());
            m.insert("paths_in_space".into(), basis.len().into());
            m.insert("normalization".into(), sampler.normalization().into());
            m.insert("rows".into(), rows.into());
            Ok(Outcome::doc(m))
        }
        Command::EmitCircuit { input, k, hadamard, output } => {
            let b = input.load()?;
            let circuit = match hadamard {
                None => synthesize_braid(&b, *k)?,
                Some(PartArg::Re) => synthesize_hadamard_test(&b, *k, TestPart::Re)?,
                Some(PartArg::Im) => synthesize_hadamard_test(&b, *k, TestPart::Im)?,
            };
            let ir = emit_text(&circuit);
            if let Some(path) = output {
                std::fs::write(path, &ir)
                    .map_err(|e| Failure::Computation(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut m = document("emit-circuit");
            m.insert("braid".into(), braid_json(&b, None));
            m.insert("k".into(), (*k).into());
            m.insert(
                "registers".into(),
                json!({
                    "path": circuit.path_qubits,
                    "counter": circuit.counter_qubits,
                    "ancilla": circuit.ancilla,
                    "counter_modulus": circuit.modulus(),
                }),
            );
            m.insert("gates".into(), circuit.gates.len().into());
            m.insert("local_crossings".into(), circuit.local_crossing_count().into());
            m.insert("counter_updates".into(), circuit.counter_update_count().into());
            m.insert("ir".into(), ir.clone().into());
            Ok(Outcome { doc: Value::Object(m), raw_text: Some(ir), success: true })
        }
        Command::Verify { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let reports = verify::run(level);
            let passed = reports.iter().all(|r| r.passed);
            let mut m = document("verify");
            m.insert("passed".into(), passed.into());
            m.insert(
                "rows".into(),
                reports
                    .iter()
                    .map(|r| json!({ "property": r.name, "passed": r.passed, "detail": r.detail }))
                    .collect::<Vec<_>>()
                    .into(),
            );
            let text: String = reports
                .iter()
                .map(|r| format!("{} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail))
                .collect();
            Ok(Outcome { doc: Value::Object(m), raw_text: Some(text), success: passed })
        }
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Sampled => "sampled",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = match (&outcome.raw_text, cli.format) {
                (Some(raw), Format::Text) => raw.clone(),
                _ => render(&outcome.doc, cli.format),
            };
            print!("{text}");
            ExitCode::from(if outcome.success { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
