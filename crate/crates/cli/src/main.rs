//! `frobdist`: batch driver for Frobenius-number experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 capacity or budget exhausted,
//! 3 verification failure.

mod manifest;
mod output;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobdist::analytic::{main_term, psi3_table, psi3_tail};
use frobdist::coprime::{fsineq_rhs, schur_bound};
use frobdist::frobenius::Engine;
use frobdist::lattice::{check_aliev_henk, kernel_lattice, ratio_statistics, sample_mu2_indexed, successive_minima};
use frobdist::simplex::covering_radius_2d;
use frobdist::statistics::{empirical_psi, histogram, run_sweep, with_workers, Domain, RunOptions};
use frobdist::{CoprimeVector, EmpiricalDistribution, Error, ExperimentConfig, FrobeniusSolver, LatticeBasis, NormalizationKind};
use serde_json::json;

use manifest::{manifest_path, sweep_config_for, CoverConfig, ManifestConfig, RunManifest};
use output::{csv, real, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "frobdist", version, about = "Frobenius numbers of random coprime vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    RoundRobin,
    Dijkstra,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    ProdPower,
    SOfA,
}

impl From<NormArg> for NormalizationKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::ProdPower => NormalizationKind::ProdPower,
            NormArg::SOfA => NormalizationKind::SOfA,
        }
    }
}

#[derive(Debug, Args)]
struct Workers {
    /// Worker threads; never changes results.
    #[arg(long, env = "FROBDIST_WORKERS")]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frobenius number of one coefficient vector, as JSON.
    Frob {
        /// Comma-separated coefficients.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, value_enum, default_value = "round-robin")]
        engine: EngineArg,
        /// Largest smallest-coefficient the residue table may use.
        #[arg(long, default_value_t = frobdist::coprime::DEFAULT_MAGNITUDE_CAP)]
        max_modulus: u64,
    },
    /// Sample coprime vectors in T·D and write one CSV row per sample.
    Sweep {
        #[arg(long)]
        d: usize,
        #[arg(long = "T")]
        t: u64,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sub-box lo:hi applied to every axis, as a fraction of T.
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, value_enum, default_value = "prod-power")]
        normalization: NormArg,
        #[arg(long, default_value_t = frobdist::coprime::DEFAULT_MAGNITUDE_CAP)]
        max_modulus: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        workers: Workers,
    },
    /// Histogram of a sweep's normalized values.
    Density {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        bin_width: f64,
        #[arg(long, value_enum, default_value = "prod-power")]
        normalization: NormArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical tail against the main term d/(2ζ(d-1))·R^{-(d-1)}.
    Tail {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long, value_enum, default_value = "prod-power")]
        normalization: NormArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact ψ₃ and Ψ₃ at one radius or on a grid.
    Psi3 {
        #[arg(long = "R", conflicts_with_all = ["from", "to", "table"])]
        r: Option<f64>,
        /// Grid as lo:hi:step.
        #[arg(long, conflicts_with_all = ["from", "to"])]
        table: Option<String>,
        #[arg(long, requires = "to")]
        from: Option<f64>,
        #[arg(long, requires = "from")]
        to: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel lattice of one vector, or minima-ratio statistics.
    Lattice {
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["d", "t", "count"])]
        a: Option<Vec<u64>>,
        #[arg(long, requires_all = ["t", "count"])]
        d: Option<usize>,
        #[arg(long = "T")]
        t: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        workers: Workers,
    },
    /// Covering radii of random unimodular planar lattices.
    Cover {
        /// One basis "x1,y1;x2,y2" instead of random lattices.
        #[arg(long, conflicts_with = "out")]
        basis: Option<String>,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long = "R", value_delimiter = ',', default_value = "1.8,2.0,2.5")]
        r: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        workers: Workers,
    },
    /// Run a named invariant suite; exit 3 if any check fails.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        suite: String,
        #[command(flatten)]
        workers: Workers,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::Usage(msg.into()))
}

/// Prints to standard output, ignoring a closed pipe.
fn say(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &serde_json::Value) {
    say(&format!("{}\n", serde_json::to_string_pretty(v).expect("json")));
}

/// Writes to `out` if given, else to standard output.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            write_atomic(p, text.as_bytes())?;
        }
        None => say(text),
    }
    Ok(())
}

fn parse_domain(d: usize, arg: &str) -> Result<Domain, Failure> {
    let (lo, hi) = arg.split_once(':').ok_or_else(|| usage(format!("domain '{arg}' is not lo:hi")))?;
    let lo: f64 = lo.trim().parse().map_err(|_| usage(format!("bad domain bound '{lo}'")))?;
    let hi: f64 = hi.trim().parse().map_err(|_| usage(format!("bad domain bound '{hi}'")))?;
    Ok(Domain::uniform(d, lo, hi))
}

fn options(workers: &Workers, max_modulus: u64) -> RunOptions {
    RunOptions {
        workers: workers.workers,
        solver: FrobeniusSolver {
            max_modulus,
            engine: Engine::RoundRobin,
        },
    }
}

fn cmd_frob(a: Vec<u64>, engine: EngineArg, max_modulus: u64) -> Result<(), Failure> {
    let v = CoprimeVector::new(a)?;
    let engine = match engine {
        EngineArg::RoundRobin => Engine::RoundRobin,
        EngineArg::Dijkstra => Engine::Dijkstra,
    };
    let r = FrobeniusSolver { max_modulus, engine }.solve(&v)?;
    print_json(&json!({
        "a": v.coeffs(),
        "g": r.g,
        "f": r.f,
        "norm_prod": r.norm_prod,
        "norm_s": r.norm_s,
        "schur_bound": schur_bound(&v),
        "fsineq_rhs": fsineq_rhs(&v),
    }));
    Ok(())
}

fn sweep_csv(sweep: &frobdist::statistics::Sweep) -> String {
    let d = sweep.config.d;
    let mut header: Vec<String> = vec!["index".into()];
    header.extend((1..=d).map(|i| format!("a_{i}")));
    header.extend(["g", "f", "norm_prod", "norm_s"].map(String::from));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv(
        &header,
        sweep.records.iter().map(|r| {
            let mut row = vec![r.index.to_string()];
            row.extend(r.a.iter().map(u64::to_string));
            row.extend([
                r.result.g.to_string(),
                r.result.f.to_string(),
                real(r.result.norm_prod),
                real(r.result.norm_s),
            ]);
            row
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    d: usize,
    t: u64,
    count: u64,
    seed: u64,
    domain: Option<String>,
    normalization: NormArg,
    max_modulus: u64,
    out: PathBuf,
    workers: Workers,
) -> Result<(), Failure> {
    let started = Instant::now();
    let mut config = ExperimentConfig::new(d, t, count, seed);
    config.normalization = normalization.into();
    if let Some(arg) = domain {
        config.domain = parse_domain(d, &arg)?;
    }
    let sweep = run_sweep(&config, options(&workers, max_modulus))?;
    let digest = write_atomic(&out, sweep_csv(&sweep).as_bytes())?;
    let mut m = RunManifest::new(ManifestConfig::Sweep(config));
    m.redraws = sweep.redraws;
    m.outputs.insert(file_name(&out), digest);
    m.wall_time_secs = started.elapsed().as_secs_f64();
    if let Err(e) = write_atomic(&manifest_path(&out), m.to_json().as_bytes()) {
        let _ = fs::remove_file(&out);
        return Err(e.into());
    }
    eprintln!(
        "wrote {} samples to {} ({} redraws)",
        sweep.records.len(),
        out.display(),
        sweep.redraws
    );
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Reads the normalized column of a sweep CSV. The configuration comes from
/// the manifest next to the file when there is one.
fn read_sweep(path: &Path, normalization: NormalizationKind) -> Result<EmpiricalDistribution, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| usage("empty sample file"))?.split(',').collect();
    let column = match normalization {
        NormalizationKind::ProdPower => "norm_prod",
        NormalizationKind::SOfA => "norm_s",
    };
    let idx = header
        .iter()
        .position(|h| *h == column)
        .ok_or_else(|| usage(format!("no {column} column")))?;
    let d = header.iter().filter(|h| h.starts_with("a_")).count();
    let values = lines
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .nth(idx)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| usage(format!("bad row {}", i + 2)))
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    let mut config = sweep_config_for(path).unwrap_or_else(|| ExperimentConfig::new(d, 2, 1, 0));
    if config.d != d {
        return Err(usage(format!("manifest says d = {}, file has {d} coefficients", config.d)));
    }
    config.normalization = normalization;
    Ok(EmpiricalDistribution::from_values(values, config))
}

fn cmd_density(input: PathBuf, bin_width: f64, normalization: NormArg, out: Option<PathBuf>) -> Result<(), Failure> {
    let dist = read_sweep(&input, normalization.into())?;
    let h = histogram(&dist, bin_width)?;
    let text = csv(
        &["bin_lo", "count", "density"],
        h.rows().into_iter().map(|(lo, c, dens)| vec![real(lo), c.to_string(), real(dens)]),
    );
    emit(out.as_deref(), &text)
}

fn cmd_tail(input: PathBuf, radii: Vec<f64>, normalization: NormArg, out: Option<PathBuf>) -> Result<(), Failure> {
    let dist = read_sweep(&input, normalization.into())?;
    let d = dist.config().d;
    let rows = radii
        .iter()
        .map(|&r| {
            let hat = empirical_psi(&dist, r);
            let main = main_term(d, r)?;
            Ok(vec![real(r), real(hat), real(main), real(hat / main)])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    emit(out.as_deref(), &csv(&["R", "psi_hat", "main_term", "ratio"], rows))
}

fn cmd_psi3(
    r: Option<f64>,
    table: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    step: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let (from, to, step) = match table {
        Some(arg) => {
            let parts = arg
                .split(':')
                .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad table bound '{x}'"))))
                .collect::<Result<Vec<f64>, Failure>>()?;
            let [lo, hi, step] = parts[..] else {
                return Err(usage(format!("table '{arg}' is not lo:hi:step")));
            };
            (Some(lo), Some(hi), step)
        }
        None => (from, to, step),
    };
    let rows = match (r, from, to) {
        (Some(r), None, None) => psi3_table(r, r, 1.0)?,
        (None, Some(lo), Some(hi)) => psi3_table(lo, hi, step)?,
        _ => return Err(usage("give --R, --table, or both --from and --to")),
    };
    let text = csv(
        &["R", "psi3", "Psi3"],
        rows.into_iter().map(|(r, p, t)| vec![real(r), real(p), real(t)]),
    );
    emit(out.as_deref(), &text)
}

fn cmd_lattice(
    a: Option<Vec<u64>>,
    d: Option<usize>,
    t: Option<u64>,
    count: Option<usize>,
    seed: u64,
    workers: Workers,
) -> Result<(), Failure> {
    if let Some(a) = a {
        let v = CoprimeVector::new(a)?;
        let basis = kernel_lattice(&v)?;
        let minima = successive_minima(&basis)?;
        let (lo, mid, hi) = minima.minkowski_sandwich(basis.det());
        let mut report = json!({
            "a": v.coeffs(),
            "basis": basis.rows(),
            "det": basis.det(),
            "norm_a": v.norm(),
            "minima": minima.lambdas,
            "ratios": minima.ratios,
            "witnesses": minima.witnesses,
            "minkowski": { "lower": lo, "middle": mid, "upper": hi, "holds": minima.satisfies_sandwich(basis.det()) },
        });
        if v.dim() >= 3 {
            let ah = check_aliev_henk(&v)?;
            report["kernel_bound"] = json!({ "lhs": ah.lhs, "rhs": ah.rhs, "holds": ah.holds });
        }
        print_json(&report);
        return Ok(());
    }
    let (Some(d), Some(t), Some(count)) = (d, t, count) else {
        return Err(usage("give --a, or --d with --T and --count"));
    };
    let rows = with_workers(workers.workers, || ratio_statistics(d, t, count, seed))??;
    let text = csv(
        &["j", "r", "fraction"],
        rows.into_iter().map(|row| vec![row.j.to_string(), real(row.r), real(row.fraction)]),
    );
    say(&text);
    Ok(())
}

fn parse_basis(arg: &str) -> Result<LatticeBasis, Failure> {
    let rows = arg
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad basis entry '{x}'"))))
                .collect::<Result<Vec<f64>, Failure>>()
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(LatticeBasis::from_real_rows(rows)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_cover(
    basis: Option<String>,
    count: u64,
    seed: u64,
    tol: f64,
    radii: Vec<f64>,
    out: Option<PathBuf>,
    workers: Workers,
) -> Result<(), Failure> {
    if let Some(arg) = basis {
        let c = covering_radius_2d(&parse_basis(&arg)?, tol)?;
        print_json(&json!({ "lo": c.lo, "hi": c.hi }));
        return Ok(());
    }
    if count == 0 {
        return Err(usage("count must be at least 1"));
    }
    let started = Instant::now();
    let brackets = with_workers(workers.workers, || {
        (0..count)
            .map(|i| covering_radius_2d(&sample_mu2_indexed(seed, i), tol))
            .collect::<frobdist::Result<Vec<_>>>()
    })??;
    let estimates: Vec<_> = radii
        .iter()
        .map(|&r| {
            let hat = brackets.iter().filter(|c| c.midpoint() > r).count() as f64 / count as f64;
            json!({ "R": r, "psi_hat": hat, "Psi3": psi3_tail(r) })
        })
        .collect();
    if let Some(out) = out {
        let text = csv(
            &["index", "lo", "hi"],
            brackets
                .iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), real(c.lo), real(c.hi)]),
        );
        let digest = write_atomic(&out, text.as_bytes())?;
        let mut m = RunManifest::new(ManifestConfig::Cover(CoverConfig { count, seed, tol, radii }));
        m.outputs.insert(file_name(&out), digest);
        m.wall_time_secs = started.elapsed().as_secs_f64();
        if let Err(e) = write_atomic(&manifest_path(&out), m.to_json().as_bytes()) {
            let _ = fs::remove_file(&out);
            return Err(e.into());
        }
    }
    print_json(&json!({ "count": count, "estimates": estimates }));
    Ok(())
}

fn cmd_verify(suite: String, workers: Workers) -> Result<(), Failure> {
    let opts = RunOptions {
        workers: workers.workers,
        ..Default::default()
    };
    let report = suites::run(&suite, opts)?.ok_or_else(|| usage(format!("unknown suite '{suite}'")))?;
    say(&format!("{}\n", serde_json::to_string_pretty(&report).expect("json")));
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Frob { a, engine, max_modulus } => cmd_frob(a, engine, max_modulus),
        Command::Sweep {
            d,
            t,
            count,
            seed,
            domain,
            normalization,
            max_modulus,
            out,
            workers,
        } => cmd_sweep(d, t, count, seed, domain, normalization, max_modulus, out, workers),
        Command::Density {
            input,
            bin_width,
            normalization,
            out,
        } => cmd_density(input, bin_width, normalization, out),
        Command::Tail {
            input,
            r,
            normalization,
            out,
        } => cmd_tail(input, r, normalization, out),
        Command::Psi3 {
            r,
            table,
            from,
            to,
            step,
            out,
        } => cmd_psi3(r, table, from, to, step, out),
        Command::Lattice {
            a,
            d,
            t,
            count,
            seed,
            workers,
        } => cmd_lattice(a, d, t, count, seed, workers),
        Command::Cover {
            basis,
            count,
            seed,
            tol,
            r,
            out,
            workers,
        } => cmd_cover(basis, count, seed, tol, r, out, workers),
        Command::Verify { suite, workers } => cmd_verify(suite, workers),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 2 } else { 1 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}
