//! Command line front end: argument definitions and the subcommand runners.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 verification
//! failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wavegate_core::linalg::c;
use wavegate_core::observables::default_observables;
use wavegate_core::run::{run_density, run_wdyn, simulate, verify_with};
use wavegate_core::{
    compile_circuit, parse_circuit, serialize_circuit, Circuit, ComplexState, CorrelationGate, PhaseEnsembleSpec,
    PhaseMode, SpinObservable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

/// Largest entrywise deviation `verify` accepts.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "wavegate",
    version,
    about = "Simulate and compile qubit circuits as waveguide correlation gates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseModeArg {
    Uniform,
    Fixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the circuit on a state vector.
    Simulate {
        file: PathBuf,
        /// Input channel (1-based) or a file of amplitudes, one `re [im]` per line.
        #[arg(long, default_value = "1")]
        input: String,
        /// Comma-separated spin products such as `s1,s2,s1s2s3`.
        /// Defaults to every single spin and every pair.
        #[arg(long)]
        observables: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the lowered correlation-gate circuit.
    Compile {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the compiled circuit with the tensor-product matrices.
    Verify { file: PathBuf },
    /// Average over input phases and report the density matrix.
    Density {
        file: PathBuf,
        /// Input intensities: a file or an inline list such as `0.5,0.5`.
        #[arg(long)]
        pbar: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PhaseModeArg::Uniform)]
        mode: PhaseModeArg,
        /// Phases for `--mode fixed`, one per channel.
        #[arg(long)]
        phases: Option<String>,
        #[arg(long)]
        observables: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the circuit in the real representation with random gate phases.
    Wdyn {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "1")]
        input: String,
        #[arg(long)]
        json: bool,
    },
}

/// Lowering used by `verify`; swappable so a broken compiler can be tested.
pub type Compiler = fn(&Circuit) -> wavegate_core::Result<Vec<CorrelationGate>>;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    run_with_compiler(cli, compile_circuit, out, err)
}

pub fn run_with_compiler(cli: &Cli, compiler: Compiler, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match &cli.command {
        Command::Simulate {
            file,
            input,
            observables,
            json,
        } => cmd_simulate(file, input, observables.as_deref(), *json, out),
        Command::Compile { file, json } => cmd_compile(file, *json, out),
        Command::Verify { file } => cmd_verify(file, compiler, out),
        Command::Density {
            file,
            pbar,
            samples,
            seed,
            mode,
            phases,
            observables,
            json,
        } => {
            let options = DensityOptions {
                pbar,
                samples: *samples,
                seed: *seed,
                mode: *mode,
                phases: phases.as_deref(),
                observables: observables.as_deref(),
            };
            cmd_density(file, &options, *json, out)
        }
        Command::Wdyn {
            file,
            seed,
            input,
            json,
        } => cmd_wdyn(file, *seed, input, *json, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_circuit(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn numbers(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| wavegate_core::angle::parse_angle(t).ok_or_else(|| Failure::from(format!("invalid number `{t}`"))))
        .collect()
}

/// Reads `arg` as a file if one exists at that path, else as inline text.
fn file_or_inline(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?)
    } else {
        Ok(arg.to_string())
    }
}

fn load_input(arg: &str, mq: usize) -> Result<ComplexState, Failure> {
    if arg.bytes().all(|b| b.is_ascii_digit()) && !arg.is_empty() {
        let channel: usize = arg.parse().map_err(|_| format!("invalid channel `{arg}`"))?;
        return Ok(ComplexState::basis(mq, channel)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?;
    let mut amplitudes = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let values = numbers(body).map_err(|f| format!("{arg}, line {}: {}", n + 1, f.message))?;
        match values.as_slice() {
            [] => continue,
            [re] => amplitudes.push(c(*re, 0.0)),
            [re, im] => amplitudes.push(c(*re, *im)),
            _ => return Err(format!("{arg}, line {}: expected `re [im]`", n + 1).into()),
        }
    }
    if amplitudes.len() != 1 << mq {
        return Err(format!(
            "{arg}: expected {} amplitudes, found {}",
            1usize << mq,
            amplitudes.len()
        )
        .into());
    }
    Ok(ComplexState::normalized(amplitudes)?)
}

fn parse_observables(arg: Option<&str>, mq: usize) -> Result<Vec<SpinObservable>, Failure> {
    match arg {
        None => Ok(default_observables(mq)),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<SpinObservable>().map_err(Failure::from))
            .collect(),
    }
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> CliResult {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn write_expectations(text: &mut String, expectations: &BTreeMap<String, f64>, order: &[SpinObservable]) {
    if order.is_empty() {
        return;
    }
    let _ = writeln!(text, "\n{:<12} {:>12}", "observable", "value");
    for o in order {
        let name = o.to_string();
        let _ = writeln!(text, "{:<12} {:>12.6}", format!("<{name}>"), expectations[&name]);
    }
}

fn cmd_simulate(file: &Path, input: &str, observables: Option<&str>, json: bool, out: &mut dyn Write) -> CliResult {
    let circuit = load_circuit(file)?;
    let psi = load_input(input, circuit.mq())?;
    let obs = parse_observables(observables, circuit.mq())?;
    let result = simulate(&circuit, &psi, &obs)?;
    if json {
        return emit_json(out, &result);
    }
    let mut text = format!("qubits {}, {} compiled gates\n\n", circuit.mq(), result.gate_count);
    let _ = writeln!(text, "{:>8} {:>12} {:>12} {:>12}", "channel", "re", "im", "p");
    for (i, ([re, im], p)) in result.amplitudes.iter().zip(&result.probabilities).enumerate() {
        let _ = writeln!(text, "{:>8} {re:>12.6} {im:>12.6} {p:>12.6}", i + 1);
    }
    write_expectations(&mut text, &result.expectations, &obs);
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_compile(file: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let circuit = load_circuit(file)?;
    let gates = compile_circuit(&circuit)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for g in &gates {
        *counts.entry(g.kind()).or_default() += 1;
    }
    if json {
        let listed: Vec<_> = gates
            .iter()
            .map(|g| json!({ "kind": g.kind(), "channels": g.channels(), "text": g.to_string() }))
            .collect();
        return emit_json(
            out,
            &json!({ "qubits": circuit.mq(), "gate_count": gates.len(), "counts": counts, "gates": listed }),
        );
    }
    let summary: Vec<String> = counts.iter().map(|(k, n)| format!("{n} {k}")).collect();
    writeln!(out, "# {} gates: {}", gates.len(), summary.join(", "))?;
    write!(out, "{}", serialize_circuit(&Circuit::from_gates(circuit.mq(), gates)?))?;
    Ok(())
}

fn cmd_verify(file: &Path, compiler: Compiler, out: &mut dyn Write) -> CliResult {
    let circuit = load_circuit(file)?;
    let deviation = verify_with(&circuit, compiler)?;
    writeln!(out, "max deviation: {deviation:e}")?;
    if deviation > VERIFY_TOLERANCE {
        writeln!(out, "FAILED (tolerance {VERIFY_TOLERANCE:e})")?;
        return Err(Failure {
            code: EXIT_MISMATCH,
            message: format!("compiled circuit deviates from the tensor-product matrix by {deviation:e}"),
        });
    }
    writeln!(out, "ok")?;
    Ok(())
}

struct DensityOptions<'a> {
    pbar: &'a str,
    samples: usize,
    seed: u64,
    mode: PhaseModeArg,
    phases: Option<&'a str>,
    observables: Option<&'a str>,
}

fn cmd_density(file: &Path, o: &DensityOptions<'_>, json: bool, out: &mut dyn Write) -> CliResult {
    let circuit = load_circuit(file)?;
    let pbar = numbers(&file_or_inline(o.pbar)?)?;
    let mode = match (o.mode, o.phases) {
        (PhaseModeArg::Uniform, None) => PhaseMode::Uniform,
        (PhaseModeArg::Uniform, Some(_)) => return Err("--phases requires --mode fixed".into()),
        (PhaseModeArg::Fixed, Some(p)) => PhaseMode::Fixed(numbers(&file_or_inline(p)?)?),
        (PhaseModeArg::Fixed, None) => PhaseMode::Fixed(vec![0.0; pbar.len()]),
    };
    let spec = PhaseEnsembleSpec {
        pbar,
        mode,
        samples: o.samples,
        seed: o.seed,
    };
    let obs = parse_observables(o.observables, circuit.mq())?;
    let report = run_density(&circuit, &spec, &obs)?;
    if json {
        return emit_json(out, &report);
    }
    let mut text = format!(
        "{} samples, seed {} ({}), {} compiled gates\n\n",
        report.samples, report.seed, report.rng, report.gate_count
    );
    let _ = writeln!(text, "{:>8} {:>12}", "channel", "rho_aa");
    for (i, d) in report.diagonal.iter().enumerate() {
        let _ = writeln!(text, "{:>8} {d:>12.6}", i + 1);
    }
    let _ = writeln!(text, "\nmax |off-diagonal|: {:.3e}", report.max_off_diagonal);
    let _ = writeln!(text, "purity tr(rho^2):   {:.6}", report.purity);
    write_expectations(&mut text, &report.expectations, &obs);
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_wdyn(file: &Path, seed: u64, input: &str, json: bool, out: &mut dyn Write) -> CliResult {
    let circuit = load_circuit(file)?;
    let q = load_input(input, circuit.mq())?.to_real();
    let report = run_wdyn(&circuit, &q, seed)?;
    if json {
        return emit_json(out, &report);
    }
    let mut text = format!(
        "seed {} ({}), {} steps\n\n",
        report.seed,
        report.rng,
        report.steps.len()
    );
    let _ = writeln!(
        text,
        "{:>5} {:<11} {:<14} {:<11} {:>12}",
        "step", "gate", "channels", "compatible", "norm drift"
    );
    for s in &report.steps {
        let channels: Vec<String> = s.channels.iter().map(usize::to_string).collect();
        let verdict = if s.compatible { "yes" } else { "no" };
        let _ = writeln!(
            text,
            "{:>5} {:<11} {:<14} {verdict:<11} {:>12.3e}",
            s.index,
            s.kind,
            channels.join(","),
            s.norm_drift
        );
    }
    let _ = writeln!(text, "\nmax norm drift: {:.3e}", report.max_norm_drift);
    out.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_lists() {
        assert_eq!(numbers("0.5, 0.25 0.25").unwrap(), vec![0.5, 0.25, 0.25]);
        assert_eq!(numbers("pi/2,0").unwrap(), vec![std::f64::consts::FRAC_PI_2, 0.0]);
        assert!(numbers("0.5,x").is_err());
        assert!(numbers("").unwrap().is_empty());
    }

    #[test]
    fn observable_lists() {
        let names: Vec<String> = parse_observables(None, 2)
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(names, ["s1", "s2", "s1s2"]);
        assert_eq!(parse_observables(Some("s1s2s3, s2"), 3).unwrap().len(), 2);
        assert!(parse_observables(Some("s1,t2"), 3).is_err());
    }

    #[test]
    fn channel_inputs() {
        assert_eq!(load_input("4", 2).unwrap(), ComplexState::basis(2, 4).unwrap());
        assert!(load_input("0", 2).is_err());
        assert!(load_input("no/such/file", 2).is_err());
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["wavegate", "density", "c.circ", "--pbar", "1,0", "--seed", "3"]).unwrap();
        match cli.command {
            Command::Density { samples, mode, .. } => {
                assert_eq!(samples, 10_000);
                assert_eq!(mode, PhaseModeArg::Uniform);
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["wavegate", "wdyn", "c.circ"]).is_err());
    }
}
