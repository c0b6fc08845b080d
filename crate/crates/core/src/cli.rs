//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 input or validation error.

use crate::certify::{verify, verify_ba, Certificate, Claim, VerificationReport};
use crate::certify::{dimension_report, CertifyError};
use crate::fractal::run_audit;
use crate::numerics;
use crate::spec_doc::{construct, play, read_file, write_file, GameSpec, RunReport, SpecError};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "schmidt", version, about = "Schmidt games on fractals with exactly verified certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a game and verify the certificates it emits.
    Play {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long = "max-q")]
        max_q: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit and gate on the constants the avoidance distances support.
        #[arg(long)]
        sound: bool,
    },
    /// Audit the measure constants of a spec on its grid; writes CSV.
    Audit {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-verify stored certificates.
    Certify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long = "max-q")]
        max_q: Option<u64>,
    },
    /// Play long enough to pin digits of the outcome and print them.
    Construct {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 20)]
        digits: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sound: bool,
    },
}

fn fail_code(e: &SpecError) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_FAILED
    }
}

fn load(spec: &Path, seed: Option<u64>, max_q: Option<u64>) -> Result<GameSpec, SpecError> {
    let mut s = GameSpec::load(spec)?;
    if let Some(seed) = seed {
        s = s.with_seed(seed);
    }
    if let Some(q) = max_q {
        s.max_q = Some(BigInt::from(q));
    }
    Ok(s)
}

fn write_report(w: &mut dyn Write, reports: &[VerificationReport]) -> bool {
    let mut ok = true;
    for r in reports {
        let status = if r.verdict.passed() { "PASS" } else { "FAIL" };
        ok &= r.verdict.passed();
        let _ = writeln!(w, "{status} {} [{}] c = {} over {}", r.label, r.kind, numerics::format_rational(&r.c), r.horizon);
        if !r.verdict.passed() {
            let _ = writeln!(w, "  {}", serde_json::to_string(&r.verdict).unwrap_or_default());
        }
    }
    ok
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn cmd_play(spec: &GameSpec, out: &Path, rounds: Option<usize>, sound: bool, w: &mut dyn Write) -> Result<i32, SpecError> {
    let run = play(spec, rounds, None)?;
    let certs = if sound { &run.sound_certificates } else { &run.certificates };
    let reports = certs.iter().map(verify).collect::<Result<Vec<_>, _>>()?;
    write_file(&out.join(&spec.output.transcript), &run.transcript.to_jsonl())?;
    write_file(&out.join(&spec.output.certificates), &json(certs))?;
    let report = RunReport {
        name: &spec.name,
        rounds: run.transcript.rounds(),
        outcome: &run.outcome,
        summary: &run.summary,
        verification: &reports,
        sound_verification: &[],
    };
    write_file(&out.join(&spec.output.report), &json(&report))?;
    let _ = writeln!(w, "{}: {} rounds, outcome width {:.3e}", spec.name, report.rounds, numerics::to_f64(&run.outcome.width()));
    Ok(if write_report(w, &reports) { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_audit(spec: &GameSpec, out: &Path, w: &mut dyn Write) -> Result<i32, SpecError> {
    let plan = spec
        .audit
        .as_ref()
        .ok_or_else(|| SpecError::Invalid("spec has no audit section".into()))?;
    let report = run_audit(&spec.support, plan)?;
    let mut csv = Vec::new();
    report
        .write_csv(&mut csv)
        .map_err(|e| SpecError::Invalid(format!("CSV: {e}")))?;
    write_file(&out.join(&spec.output.audit), &String::from_utf8_lossy(&csv))?;
    let radii = &plan.grid.radii;
    let dims = dimension_report(
        &spec.support,
        Some(&spec.decay),
        Some(&report),
        spec.support.canonical_point(),
        radii,
        plan.grid.depth,
    );
    let _ = writeln!(w, "{}", json(&dims));
    for (name, wit) in &report.witnesses {
        let _ = writeln!(w, "FAIL {name}: {}", serde_json::to_string(wit).unwrap_or_default());
    }
    for (name, wit) in &report.inconclusive {
        let _ = writeln!(w, "INCONCLUSIVE {name}: {}", serde_json::to_string(wit).unwrap_or_default());
    }
    let passed = report.all_passed();
    let _ = writeln!(w, "{} audit of {} ({} rows)", if passed { "PASS" } else { "FAIL" }, spec.name, report.rows.len());
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// Reads one certificate or a JSON array of them.
pub fn read_certificates(path: &Path) -> Result<Vec<Certificate>, SpecError> {
    let text = read_file(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(match value {
        serde_json::Value::Array(_) => serde_json::from_value(value)?,
        _ => vec![serde_json::from_value(value)?],
    })
}

fn cmd_certify(path: &Path, max_q: Option<u64>, w: &mut dyn Write) -> Result<i32, SpecError> {
    let certs = read_certificates(path)?;
    let cap = max_q.map(BigInt::from);
    let mut reports = Vec::new();
    for c in &certs {
        let mut r = verify(c)?;
        if let (Claim::BadApprox { q_max }, Some(cap)) = (&c.claim, &cap) {
            let q = q_max.min(cap);
            r.verdict = verify_ba(c, Some(q))?;
            r.horizon = format!("q <= {q}");
        }
        reports.push(r);
    }
    let ok = write_report(w, &reports);
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_construct(spec: &GameSpec, digits: usize, out: &Path, sound: bool, w: &mut dyn Write) -> Result<i32, SpecError> {
    let built = construct(spec, digits)?;
    let certs = if sound { &built.play.sound_certificates } else { &built.play.certificates };
    let reports = certs.iter().map(verify).collect::<Result<Vec<_>, CertifyError>>()?;
    write_file(&out.join(&spec.output.transcript), &built.play.transcript.to_jsonl())?;
    write_file(&out.join(&spec.output.certificates), &json(certs))?;
    let text: String = built.digits.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(w, "digits: 0.{text}… ({} rounds)", built.play.transcript.rounds());
    Ok(if write_report(w, &reports) { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` and runs the command, writing human-readable output to `w`.
pub fn run<I, T>(args: I, w: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(w, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Play { spec, out, rounds, max_q, seed, sound } => {
            load(spec, *seed, *max_q).and_then(|s| cmd_play(&s, out, *rounds, *sound, w))
        }
        Command::Audit { spec, out } => load(spec, None, None).and_then(|s| cmd_audit(&s, out, w)),
        Command::Certify { cert, max_q } => cmd_certify(cert, *max_q, w),
        Command::Construct { spec, digits, out, seed, sound } => {
            load(spec, *seed, None).and_then(|s| cmd_construct(&s, *digits, out, *sound, w))
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(w, "error: {e}");
            fail_code(&e)
        }
    }
}
