mod selfcheck;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use invpit::algebra::scalar::bit_length;
use invpit::branching::{abp_to_trace_power, trace_power_to_abp};
use invpit::diagonal::{blackbox_zero_test_diagonal, hitting_set_diagonal, support_budget};
use invpit::invariants::{
    diff_roabp, orbit_closure_blackbox, orbit_closure_intersects, orbit_member, ClosureOptions,
    OrbitWitness,
};
use invpit::io::{
    circuit_json, hitting_set_json, orbit_verdict_json, parse_circuit, parse_diagonal,
    parse_hitting_set, parse_tuple, pit_verdict_json, point_json, poly_json, scalar_json, Circuit,
};
use invpit::pit::{
    default_sample_range, find_nonzero_point, grid_hitting_set, random_hitting_set,
    whitebox_with_stats, WhiteboxStats,
};
use invpit::{Error, HittingSet, MatrixTuple};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "invpit",
    version,
    about = "Identity testing and orbit-closure decisions over the rationals"
)]
struct Cli {
    /// Add bit-length and operation-count reports to the output.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the orbit closures of two matrix tuples intersect.
    OrbitClosure {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Compare a separating family built from `grid`, `random:<seed>:<count>` or `file:<path>`.
        #[arg(long)]
        hitting_set: Option<HittingSpec>,
        /// Test word lengths up to this value instead of n².
        #[arg(long)]
        max_ell: Option<usize>,
    },
    /// Decide whether B = P A P⁻¹ for some invertible P.
    OrbitMember {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u32,
    },
    /// White-box zero test of a read-once oblivious ABP.
    PitRoabp {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Black-box zero test of a diagonal depth-3 circuit.
    PitDiagonal {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Emit the small-support hitting set for diagonal circuits.
    HitgenDiagonal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
    },
    /// Convert an ABP to a trace of a matrix power, or back.
    Convert {
        #[arg(long)]
        circuit: PathBuf,
        /// Exponent of the trace power (at least the ABP depth).
        #[arg(long)]
        d_prime: Option<usize>,
    },
    /// Expand a circuit into a sparse polynomial.
    Expand {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Run randomized cross-checks against independent oracles.
    Selfcheck {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone)]
enum HittingSpec {
    Grid,
    Random { seed: u64, count: usize },
    File(PathBuf),
}

impl FromStr for HittingSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "grid" {
            return Ok(HittingSpec::Grid);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(HittingSpec::File(PathBuf::from(path)));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (seed, count) = rest
                .split_once(':')
                .ok_or_else(|| "expected random:<seed>:<count>".to_string())?;
            return Ok(HittingSpec::Random {
                seed: seed.parse().map_err(|e| format!("bad seed: {e}"))?,
                count: count.parse().map_err(|e| format!("bad count: {e}"))?,
            });
        }
        Err("expected grid, random:<seed>:<count> or file:<path>".into())
    }
}

/// Exit status plus a message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Size { .. } | Error::Interpolation(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))
}

fn read_tuple(path: &Path) -> Result<MatrixTuple, Failure> {
    parse_tuple(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_circuit(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn stats_json(s: &WhiteboxStats) -> Value {
    json!({
        "elimination_steps": s.elimination_steps,
        "candidates": s.candidates,
        "max_survivors": s.max_survivors,
        "max_bits": s.max_bits,
    })
}

fn hitting_set_for(spec: &HittingSpec, a: &MatrixTuple) -> Result<HittingSet, Failure> {
    let n2 = a.n() * a.n();
    let degree = (n2 * (a.r() - 1)) as u64;
    Ok(match spec {
        HittingSpec::Grid => grid_hitting_set(n2, (a.r() - 1) as u32)?,
        HittingSpec::Random { seed, count } => random_hitting_set(
            n2,
            *count,
            *seed,
            default_sample_range(degree.max(1), (*count).max(1) as u32),
        )?,
        HittingSpec::File(path) => parse_hitting_set(&read(path)?, &path.display().to_string())
            .map_err(|e| malformed(format!("{}: {e}", path.display())))?,
    })
}

fn orbit_closure(
    a: &Path,
    b: &Path,
    spec: Option<&HittingSpec>,
    max_ell: Option<usize>,
    verbose: bool,
) -> Result<Value, Failure> {
    let (a, b) = (read_tuple(a)?, read_tuple(b)?);
    a.check_compatible(&b)?;
    let mut out = match spec {
        Some(spec) => {
            let h = hitting_set_for(spec, &a)?;
            let mut v = orbit_verdict_json(&orbit_closure_blackbox(&a, &b, &h)?);
            v["family_size"] = json!(a.n() * a.n() * h.len());
            v
        }
        None => orbit_verdict_json(&orbit_closure_intersects(
            &a,
            &b,
            ClosureOptions { max_ell },
        )?),
    };
    if verbose && spec.is_none() {
        let max_ell = max_ell.unwrap_or(a.n() * a.n());
        let mut per_ell = Vec::new();
        for ell in 1..=max_ell {
            let diff = diff_roabp(&a, &b, ell)?;
            let (_, stats) = whitebox_with_stats(&diff);
            per_ell.push(json!({
                "ell": ell,
                "input_bits": diff.max_coefficient_bits(),
                "width": diff.width(),
                "stats": stats_json(&stats),
            }));
        }
        out["bit_lengths"] = Value::Array(per_ell);
    }
    Ok(out)
}

fn orbit_membership(
    a: &Path,
    b: &Path,
    seed: u64,
    trials: u32,
    verbose: bool,
) -> Result<Value, Failure> {
    let (a, b) = (read_tuple(a)?, read_tuple(b)?);
    let verdict = orbit_member(&a, &b, seed, trials)?;
    let mut out = orbit_verdict_json(&verdict);
    if verbose {
        if let Some(OrbitWitness::Conjugator { p }) = &verdict.witness {
            let bits = p.entries().iter().map(bit_length).max().unwrap_or(0);
            out["bit_lengths"] = json!({ "witness_max_bits": bits });
        }
    }
    Ok(out)
}

fn pit_roabp(path: &Path, verbose: bool) -> Result<Value, Failure> {
    let Circuit::Roabp(p) = read_circuit(path)? else {
        return Err(malformed(format!(
            "{}: expected a circuit of kind roabp",
            path.display()
        )));
    };
    let (verdict, stats) = whitebox_with_stats(&p);
    let mut out = pit_verdict_json(&verdict, p.nvars());
    if !verdict.is_zero {
        if let Some((point, value)) = find_nonzero_point(&p)? {
            out["point"] = json!({ "point": point_json(&point), "value": scalar_json(&value) });
        }
    }
    if verbose {
        out["bit_lengths"] = json!({
            "input_bits": p.max_coefficient_bits(),
            "stats": stats_json(&stats),
        });
    }
    Ok(out)
}

fn pit_diagonal(path: &Path, verbose: bool) -> Result<Value, Failure> {
    let c =
        parse_diagonal(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let verdict = blackbox_zero_test_diagonal(&c)?;
    let mut out = pit_verdict_json(&verdict, c.nvars());
    let m = support_budget(c.derivative_dim_bound());
    let d = c.max_term_degree().max(1);
    out["parameters"] = json!({
        "n": c.nvars(),
        "d": d,
        "m": m,
        "derivative_bound": c.derivative_dim_bound().to_string(),
    });
    if verbose {
        let h = hitting_set_diagonal(c.nvars(), d, m)?;
        out["hitting_set_size"] = json!(h.len());
    }
    Ok(out)
}

fn convert(path: &Path, d_prime: Option<usize>) -> Result<Value, Failure> {
    Ok(match read_circuit(path)? {
        Circuit::Abp(p) => circuit_json(&Circuit::TracePower(abp_to_trace_power(&p, d_prime)?)),
        Circuit::TracePower(t) => {
            if d_prime.is_some() {
                return Err(malformed("--d-prime applies only to abp input"));
            }
            circuit_json(&Circuit::Abp(trace_power_to_abp(&t)?))
        }
        Circuit::Roabp(_) => {
            return Err(malformed("convert expects an abp or trace_power circuit"))
        }
    })
}

fn expand(path: &Path) -> Result<Value, Failure> {
    let text = read(path)?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let f = if doc.get("kind").is_some() {
        parse_circuit(&text)
            .map_err(|e| malformed(format!("{}: {e}", path.display())))?
            .expand()
    } else {
        parse_diagonal(&text)
            .map_err(|e| malformed(format!("{}: {e}", path.display())))?
            .expand()
    };
    Ok(poly_json(&f))
}

fn run(cli: Cli) -> Result<(Value, bool), Failure> {
    let v = cli.verbose;
    let out = match &cli.command {
        Command::OrbitClosure {
            a,
            b,
            hitting_set,
            max_ell,
        } => orbit_closure(a, b, hitting_set.as_ref(), *max_ell, v)?,
        Command::OrbitMember { a, b, seed, trials } => orbit_membership(a, b, *seed, *trials, v)?,
        Command::PitRoabp { circuit } => pit_roabp(circuit, v)?,
        Command::PitDiagonal { circuit } => pit_diagonal(circuit, v)?,
        Command::HitgenDiagonal { n, d, m } => hitting_set_json(&hitting_set_diagonal(*n, *d, *m)?),
        Command::Convert { circuit, d_prime } => convert(circuit, *d_prime)?,
        Command::Expand { circuit } => expand(circuit)?,
        Command::Selfcheck { seed } => {
            let report = selfcheck::run(*seed);
            let passed = report["passed"].as_bool().unwrap_or(false);
            return Ok((report, passed));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            println!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": f.message }));
            ExitCode::from(f.code)
        }
    }
}
