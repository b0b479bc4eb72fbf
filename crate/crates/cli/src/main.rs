//! `csent`: generate instances and compute their entanglement entropy.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 mathematical
//! disagreement, 4 resource cap exceeded.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csent_core::format::{
    inflated_to_json, instance_to_json, load_instance, spectrum_to_csv, spectrum_to_json,
    SpectrumReport,
};
use csent_core::glueing::{common_value, proportionality};
use csent_core::{
    build_state, canonical_case, contract_unramified, entropy_formula, entropy_rank,
    entropy_rank_of_state, generate_random, inflate, schmidt_spectrum, von_neumann_above, Caps,
    ContractionWeights, Error, Instance, Prime, RandomSpec, SchmidtSpectrum,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use report::{GlueSummary, RunReport, SpectrumSummary};

const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "csent", version, about = "Entanglement entropy of arithmetic Chern-Simons states over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random validated instance.
    Gen(GenArgs),
    /// Write one of the five canonical single-factor instances.
    Canonical(CanonicalArgs),
    /// Compute the entropy by one or all routes.
    Entropy(EntropyArgs),
    /// Inflate, contract back and compare with the base state.
    Glue(GlueArgs),
    /// Print the Schmidt spectrum.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    p: u32,
    /// Half-dimensions of the side-1 factors, comma separated.
    #[arg(long = "half-dims-1", value_delimiter = ',', required = true)]
    half_dims_1: Vec<usize>,
    /// Half-dimensions of the side-2 factors, comma separated.
    #[arg(long = "half-dims-2", value_delimiter = ',', required = true)]
    half_dims_2: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    nu: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct CanonicalArgs {
    /// Case number 1..5: (s1, t2) = (0,2), (1,2), (2,2), (0,1), (1,1).
    #[arg(long)]
    case: usize,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Rank,
    Spectral,
    All,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct GlueArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of auxiliary places, at least nu.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the inflated instance here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Apply seeded random local phases on both sides before diagonalizing.
    #[arg(long = "phase-seed")]
    phase_seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SpectrumFormat::Csv)]
    format: SpectrumFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct TolArgs {
    /// Cross-route agreement tolerance (nats) and flatness tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Eigenvalues at or below this count as zero.
    #[arg(long, default_value_t = csent_core::EIGENVALUE_THRESHOLD)]
    threshold: f64,
}

#[derive(Args)]
struct CapArgs {
    /// Largest p^d enumerated when building a state.
    #[arg(long, default_value_t = Caps::default().global_states)]
    max_global_states: u64,
    /// Largest p^(side dim) on the dense spectral path.
    #[arg(long, default_value_t = Caps::default().dense_side)]
    max_dense_side: u64,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            global_states: self.max_global_states,
            dense_side: self.max_dense_side,
            ..Caps::default()
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => EXIT_CAP,
        Error::Numeric(_) | Error::InvariantViolation(_) => EXIT_DISAGREE,
        _ => EXIT_INPUT,
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &RunReport, json: bool, path: Option<&Path>) -> Result<(), Error> {
    if json {
        println!("{}", report.to_json());
    } else {
        report.print_human();
    }
    if let Some(path) = path {
        fs::write(path, report.to_json() + "\n")?;
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<u8, Error> {
    let spec = RandomSpec {
        p: Prime::new(a.p)?,
        side1_halfdims: a.half_dims_1,
        side2_halfdims: a.half_dims_2,
        nu: a.nu,
        seed: a.seed,
    };
    let inst = generate_random(&spec, &a.caps.caps())?;
    write_output(a.out.as_deref(), &instance_to_json(&inst))?;
    Ok(0)
}

fn cmd_canonical(a: CanonicalArgs) -> Result<u8, Error> {
    let inst = canonical_case(a.case, Prime::new(a.p)?)?;
    if let Err(e) = inst.validate() {
        eprintln!("warning: {e}");
    }
    write_output(a.out.as_deref(), &instance_to_json(&inst))?;
    Ok(0)
}

/// Records whether the instance validates; non-Lagrangian data is still
/// accepted by the entropy routes.
fn note_validation(inst: &Instance, report: &mut RunReport) -> Result<(), Error> {
    match inst.validate() {
        Ok(_) => report.lagrangian = true,
        Err(Error::Validation(msg)) => {
            report.notes.push(format!("not a Lagrangian datum: {msg}"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn summarize(sp: &SchmidtSpectrum, threshold: f64, tol: f64, zero_phase: bool) -> SpectrumSummary {
    let nz = sp.nonzero_above(threshold);
    let (max, min) = (nz.first().copied().unwrap_or(0.0), nz.last().copied().unwrap_or(0.0));
    SpectrumSummary {
        rank: nz.len(),
        min_nonzero: min,
        max,
        flat: zero_phase.then_some(!nz.is_empty() && max - min <= tol * max),
    }
}

fn cmd_entropy(a: EntropyArgs) -> Result<u8, Error> {
    let inst = load_instance(&a.input)?;
    let caps = a.caps.caps();
    let mut report = RunReport::new("entropy", inst.label(), inst.stats());
    note_validation(&inst, &mut report)?;
    let want = |m: MethodArg| a.method == m || a.method == MethodArg::All;
    let zero_phase = inst.is_zero_phase();

    let mut formula = None;
    let mut rank = None;
    let mut spectral = None;
    if want(MethodArg::Formula) {
        if zero_phase || a.method == MethodArg::Formula {
            formula = Some(report.timed("formula", || entropy_formula(&inst))?);
        } else {
            report.notes.push("formula route skipped: nonzero phase".into());
        }
    }
    if want(MethodArg::Rank) {
        if zero_phase || a.method == MethodArg::Rank {
            rank = Some(report.timed("rank", || entropy_rank(&inst, &caps))?.0);
        } else {
            report.notes.push("rank route skipped: nonzero phase".into());
        }
    }
    if want(MethodArg::Spectral) {
        let state = report.timed("build_state", || build_state(&inst, &caps))?;
        let sp = report.timed("spectral", || schmidt_spectrum(&state, &caps))?;
        spectral = Some(von_neumann_above(&sp, a.tol.threshold));
        report.spectrum = Some(summarize(&sp, a.tol.threshold, a.tol.tol, zero_phase));
    }

    if let (Some(f), Some(r)) = (formula, rank) {
        report.agreement.insert("formula_rank".into(), f.exact_k == r.exact_k);
    }
    if let (Some(f), Some(s)) = (formula, spectral) {
        report.agreement.insert("formula_spectral".into(), (f.nats - s.nats).abs() <= a.tol.tol);
    }
    if let (Some(r), Some(s)) = (rank, spectral) {
        report.agreement.insert("rank_spectral".into(), (r.nats - s.nats).abs() <= a.tol.tol);
    }
    report.entropies.extend([formula, rank, spectral].into_iter().flatten());
    emit_report(&report, a.json, a.report.as_deref())?;
    Ok(if report.all_agree() { 0 } else { EXIT_DISAGREE })
}

fn cmd_glue(a: GlueArgs) -> Result<u8, Error> {
    let inst = load_instance(&a.input)?;
    let caps = a.caps.caps();
    let mut report = RunReport::new("glue", inst.label(), inst.stats());
    let stats = inst.validate()?;
    report.lagrangian = true;
    let inf = report.timed("inflate", || inflate(&inst, a.k, a.seed))?;
    if let Some(out) = &a.out {
        fs::write(out, inflated_to_json(&inf))?;
    }
    let base = report.timed("build_state", || build_state(&inst, &caps))?;
    let contracted = report.timed("contract", || {
        contract_unramified(&inf, &ContractionWeights::Ones, &caps)
    })?;

    let mut summary = GlueSummary {
        k: a.k,
        nu: stats.nu,
        enlarged_d: inf.enlarged().d(),
        ratio: None,
        uniform_value: None,
        base_k: None,
        contracted_k: None,
        exact: false,
    };
    match proportionality(&contracted, &base) {
        Ok(r) => summary.ratio = Some(r.to_string()),
        Err(e) => report.notes.push(e.to_string()),
    }
    let mut exact = summary.ratio.is_some();
    if inst.is_zero_phase() {
        match common_value(&contracted) {
            Ok(v) => summary.uniform_value = Some(v.to_string()),
            Err(e) => {
                report.notes.push(e.to_string());
                exact = false;
            }
        }
        summary.base_k = entropy_formula(&inst)?.exact_k;
        summary.contracted_k = entropy_rank_of_state(&contracted)?.0.exact_k;
        report.agreement.insert("entropy_k".into(), summary.base_k == summary.contracted_k);
    }
    report.agreement.insert("round_trip".into(), exact);
    summary.exact = exact;
    report.glue = Some(summary);
    emit_report(&report, a.json, a.report.as_deref())?;
    Ok(if report.all_agree() { 0 } else { EXIT_DISAGREE })
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<u8, Error> {
    let inst = load_instance(&a.input)?;
    let caps = a.caps.caps();
    let mut state = build_state(&inst, &caps)?;
    if let Some(seed) = a.phase_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2) = state.random_local_phases(&mut rng);
        state = state.apply_local_phases(&f1, &f2)?;
    }
    let sp = schmidt_spectrum(&state, &caps)?;
    let summary = summarize(&sp, a.tol.threshold, a.tol.tol, inst.is_zero_phase());
    let eigenvalues = sp.nonzero_above(a.tol.threshold).to_vec();
    let text = match a.format {
        SpectrumFormat::Csv => {
            if let Some(flat) = summary.flat {
                eprintln!("flat spectrum: {flat}");
            }
            spectrum_to_csv(&eigenvalues)
        }
        SpectrumFormat::Json => spectrum_to_json(&SpectrumReport {
            p: inst.p().get(),
            rank: summary.rank,
            flat: summary.flat,
            entropy: von_neumann_above(&sp, a.tol.threshold),
            eigenvalues,
        }),
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Canonical(a) => cmd_canonical(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Glue(a) => cmd_glue(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
