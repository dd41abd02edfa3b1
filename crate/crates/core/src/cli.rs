//! Command-line driver. Every command prints one JSON envelope on stdout (or a
//! text table for `scan --format table`) and maps library errors onto exit
//! codes: 2 invalid input, 3 budget exhausted, 4 inconclusive, 1 failed
//! verification.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hypersid::common::{
    check_noncommon, classify_even_subgraphs, common_deficit, levi_transfer,
};
use hypersid::density::{t_density, t_levi, Strategy};
use hypersid::hypergraph::{
    grid, half_octahedron, loose_cycle, loose_triangle, tight_cycle, tight_cycle_minus_window,
    Hypergraph,
};
use hypersid::kappa::{
    as_tight_cycle_subgraph, best_negative_point, kappa_closed_c2r, kappa_closed_c3k,
    kappa_closed_c3k_minus_e, kappa_poly_bruteforce, kappa_tight_cycle_dp, probe_catalogue,
    KappaPolynomial,
};
use hypersid::kernel::{BipartiteKernel, SymmetricKernel};
use hypersid::rational::{format_rational, parse_rational, Rational};
use hypersid::sampling::{estimate_density_with, sample_hypergraph, DensityKind};
use hypersid::search::{levi_negativity_search, search_negative_sum, SearchOptions};
use hypersid::witness::{
    auto_witness_tight_cycle, certify_with, choose_negative_point, deletion_bound, g_kernel,
    h_kernel, linear_girth_kernel, s_parity_kernel, scan_tight_cycles, AutoWitness,
    KernelDescriptor, ScanRow, SidorenkoCertificate, SidorenkoVerdict, NEGATIVITY_GRID,
};
use hypersid::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hypersid", version, about = "Exact Sidorenko and commonness certificates for uniform hypergraphs")]
#[command(args_override_self = true)]
struct Cli {
    /// JSON object whose keys mirror the flags of the chosen command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Record the wall-clock time in the envelope (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(flatten)]
    budgets: Budgets,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Budgets {
    /// Largest edge count for which edge subsets are enumerated.
    #[arg(long, global = true, env = "HYPERSID_ENUM_BUDGET", default_value_t = hypersid::kappa::ENUMERATION_EDGE_BUDGET)]
    enum_budget: usize,
    /// Largest atom count accepted for a kernel.
    #[arg(long, global = true, env = "HYPERSID_ATOM_BUDGET", default_value_t = hypersid::kernel::TENSOR_ATOM_BUDGET)]
    atom_budget: usize,
    /// Largest number of search sweeps.
    #[arg(long, global = true, env = "HYPERSID_ITERATION_BUDGET", default_value_t = 10_000)]
    iteration_budget: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in hypergraph families and their parameters.
    Catalog,
    /// Census polynomial coefficients kappa_1..kappa_e.
    Kappa {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = KappaMethod::Auto)]
        method: KappaMethod,
    },
    /// Evaluate the census polynomial at rational points.
    PolyEval {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated kappa_1..kappa_e instead of a family.
        #[arg(long)]
        coefficients: Option<String>,
        #[arg(long = "x", required = true, allow_hyphen_values = true)]
        x: Vec<String>,
    },
    /// A point of [-1, 0] where the census polynomial is negative.
    Negativity {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = NEGATIVITY_GRID)]
        grid: usize,
    },
    /// Exact comparison of t_H(W) with t_{K_r}(W)^e(H).
    Certify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    /// Negative point plus epsilon-halving search for a tight-cycle subgraph.
    AutoWitness {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Census negativity (and optionally certificates) for C_{kr}^(r), kr <= N.
    Scan {
        #[arg(long, default_value_t = 30)]
        max_vertices: usize,
        #[arg(long)]
        certify: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Deletion-method exponent from a Sidorenko witness.
    Deletion {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Even-subgraph classification, deficit or non-commonness check.
    Common {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        /// Search for a zero-averaging kernel that is negative on the
        /// smallest even candidates.
        #[arg(long)]
        search: bool,
        #[command(flatten)]
        search_args: SearchArgs,
    },
    /// Levi graph, transfer of a two-variable kernel, or a Levi-route search.
    Levi {
        #[command(flatten)]
        family: FamilyArgs,
        /// Two-variable kernel to transfer.
        #[arg(long)]
        bipartite_file: Option<PathBuf>,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 2)]
        left_atoms: usize,
        #[arg(long, default_value_t = 2)]
        right_atoms: usize,
        #[command(flatten)]
        search_args: SearchArgs,
    },
    /// Sample a W-random hypergraph, or estimate t_H(G_n) over many samples.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Average injective instead of homomorphism densities.
        #[arg(long)]
        injective: bool,
    },
    /// Recompute a stored certificate from its hypergraph and kernel.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KappaMethod {
    Auto,
    Bruteforce,
    Dp,
    Closed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone, Default)]
struct FamilyArgs {
    #[arg(long)]
    family: Option<String>,
    /// Hypergraph JSON file instead of a family.
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Number of edges of a loose cycle.
    #[arg(long)]
    g: Option<usize>,
    /// Starting vertex of the window removed from a tight cycle.
    #[arg(long)]
    index: Option<usize>,
    /// Family wrapped by levi-of and disjoint-union.
    #[arg(long)]
    inner: Option<String>,
    #[arg(long)]
    copies: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct KernelArgs {
    /// linear-girth, s-parity, h, g, constant (value --c) or file.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    kernel_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 30)]
    iterations: usize,
    #[arg(long, default_value_t = hypersid::search::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 3)]
    atoms: usize,
}

/// What every command prints.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CertificateEnvelope {
    pub tool_version: String,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    pub payload: Value,
    /// True when no floating-point number decides the reported verdict.
    pub exact: bool,
}

struct Outcome {
    payload: Value,
    exact: bool,
    /// Exit code to use after printing, for verdicts that are not errors.
    code: i32,
    table: Option<String>,
}

impl Outcome {
    fn exact(payload: Value) -> Self {
        Outcome {
            payload,
            exact: true,
            code: EXIT_OK,
            table: None,
        }
    }
}

pub fn main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    run(&argv)
}

/// Runs the tool on a full argument vector (program name first) and returns
/// the exit code.
pub fn run(argv: &[String]) -> i32 {
    let merged = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => return report_error(&e),
    };
    let cli = match Cli::try_parse_from(&merged) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => return report_error(&e),
    };
    let envelope = CertificateEnvelope {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: argv.iter().skip(1).cloned().collect(),
        timestamp: cli.timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
        payload: outcome.payload,
        exact: outcome.exact,
    };
    let text = match &outcome.table {
        Some(t) => t.clone(),
        None => serde_json::to_string_pretty(&envelope).expect("envelope serializes") + "\n",
    };
    print!("{text}");
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    outcome.code
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
        Error::Verification(_) => EXIT_VERIFY,
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

/// Splices the flags of a `--config` file in right after the subcommand, so
/// anything given on the command line overrides them.
fn merge_config(argv: &[String]) -> Result<Vec<String>> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv.to_vec());
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv
            .get(pos + 1)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("--config needs a path".into()))?,
    };
    let text = read_file(Path::new(&path))?;
    let config: serde_json::Map<String, Value> = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("config {path}: {e}")))?;
    let mut flags = Vec::new();
    let mut command = None;
    for (key, value) in &config {
        if key == "command" {
            command = value.as_str().map(str::to_string);
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                for item in items {
                    flags.push(flag.clone());
                    flags.push(scalar_text(item)?);
                }
            }
            other => {
                flags.push(flag);
                flags.push(scalar_text(other)?);
            }
        }
    }
    let mut out: Vec<String> = argv.to_vec();
    let sub = subcommand_position(argv);
    match (sub, command) {
        (Some(i), _) => {
            out.splice(i + 1..i + 1, flags);
        }
        (None, Some(c)) => {
            out.push(c);
            out.extend(flags);
        }
        (None, None) => return Err(Error::InvalidInput("no command given".into())),
    }
    Ok(out)
}

const GLOBAL_VALUE_FLAGS: [&str; 5] = [
    "--config",
    "--output",
    "--enum-budget",
    "--atom-budget",
    "--iteration-budget",
];

fn subcommand_position(argv: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if GLOBAL_VALUE_FLAGS.contains(&a.as_str()) {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::InvalidInput(format!("unsupported config value {v}"))),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn rational_arg(name: &str, s: &Option<String>) -> Result<Rational> {
    let s = s
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))?;
    parse_rational(s)
}

fn require<T: Copy>(name: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{name} is required for this family")))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let budgets = &cli.budgets;
    match &cli.command {
        Command::Catalog => Ok(Outcome::exact(catalog())),
        Command::Kappa { family, method } => {
            let (name, params, h) = build_family(family)?;
            let (p, used) = kappa_for(&h, family, *method, budgets)?;
            Ok(Outcome::exact(json!({
                "family": name,
                "params": params,
                "kappa": p.decimal_strings(),
                "coefficients": p.decimal_strings().join(","),
                "method": used,
            })))
        }
        Command::PolyEval {
            family,
            coefficients,
            x,
        } => {
            let p = match coefficients {
                Some(list) => parse_coefficients(list)?,
                None => {
                    let (_, _, h) = build_family(family)?;
                    kappa_for(&h, family, KappaMethod::Auto, budgets)?.0
                }
            };
            let points: Vec<Value> = x
                .iter()
                .map(|s| {
                    let x = parse_rational(s)?;
                    Ok(json!({
                        "x": format_rational(&x),
                        "value": format_rational(&p.eval(&x)),
                    }))
                })
                .collect::<Result<_>>()?;
            Ok(Outcome::exact(json!({
                "kappa": p.decimal_strings(),
                "points": points,
            })))
        }
        Command::Negativity { family, grid } => {
            let (name, params, h) = build_family(family)?;
            let (p, _) = kappa_for(&h, family, KappaMethod::Auto, budgets)?;
            let found = match as_tight_cycle_subgraph(&h) {
                Some((ell, r, skip)) => choose_negative_point(&p, ell, r, skip.len()),
                None => best_negative_point(&p, &probe_catalogue(0, h.uniformity()), *grid),
            };
            let found = found.ok_or_else(|| {
                Error::Inconclusive(
                    "no probe or grid point makes the census polynomial negative".into(),
                )
            })?;
            Ok(Outcome::exact(json!({
                "family": name,
                "params": params,
                "negative_point": to_value(&found),
            })))
        }
        Command::Certify {
            family,
            kernel,
            strategy,
        } => {
            let (_, _, h) = build_family(family)?;
            let (w, descriptor) = build_kernel(kernel, h.uniformity(), budgets)?;
            let strategy: Strategy = strategy.parse()?;
            let cert = certify_with(&h, &w, descriptor, strategy)?;
            let code = match cert.verdict {
                SidorenkoVerdict::NotSidorenko => EXIT_OK,
                SidorenkoVerdict::InconclusiveWitness => EXIT_INCONCLUSIVE,
            };
            Ok(Outcome {
                code,
                ..Outcome::exact(to_value(&cert))
            })
        }
        Command::AutoWitness { family } => {
            let (_, _, h) = build_family(family)?;
            let w: AutoWitness = auto_witness_tight_cycle(&h)?;
            Ok(Outcome::exact(to_value(&w)))
        }
        Command::Scan {
            max_vertices,
            certify,
            format,
        } => {
            let rows = scan_tight_cycles(*max_vertices, *certify)?;
            let table = (*format == Format::Table).then(|| scan_table(&rows));
            Ok(Outcome {
                table,
                ..Outcome::exact(json!({ "max_vertices": max_vertices, "rows": to_value(&rows) }))
            })
        }
        Command::Deletion { family, kernel } => {
            let (_, _, h) = build_family(family)?;
            let (w, _) = build_kernel(kernel, h.uniformity(), budgets)?;
            let report = deletion_bound(&h, &w)?;
            Ok(Outcome {
                exact: false,
                ..Outcome::exact(to_value(&report))
            })
        }
        Command::Common {
            family,
            kernel,
            search,
            search_args,
        } => common(family, kernel, *search, search_args, budgets),
        Command::Levi {
            family,
            bipartite_file,
            search,
            left_atoms,
            right_atoms,
            search_args,
        } => {
            let (_, _, h) = build_family(family)?;
            let levi = h.levi_graph();
            let mut payload = json!({
                "levi_graph": to_value(&levi),
                "vertices": levi.vertex_count(),
                "edges": levi.edge_count(),
                "two_connected": levi.is_two_connected(),
            });
            if let Some(path) = bipartite_file {
                let f: BipartiteKernel = serde_json::from_str(&read_file(path)?)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                let transferred = levi_transfer(&f, h.uniformity())?;
                check_atoms(&transferred, budgets)?;
                let t_h = t_density(&h, &transferred, Strategy::Auto)?;
                let t_l = t_levi(&h, &f)?;
                if t_h != t_l {
                    return Err(Error::Verification(format!(
                        "t_H of the transfer is {} but t_L(H)(f) is {}",
                        format_rational(&t_h),
                        format_rational(&t_l)
                    )));
                }
                payload["transfer"] = json!({
                    "kernel": to_value(&transferred.to_file()),
                    "zero_averaging": transferred.is_zero_averaging(),
                    "t_H": format_rational(&t_h),
                    "t_levi": format_rational(&t_l),
                });
            }
            if *search {
                let seed = require("seed", search_args.seed)?;
                check_iterations(search_args.iterations, budgets)?;
                let found = levi_negativity_search(
                    std::slice::from_ref(&h),
                    *left_atoms,
                    *right_atoms,
                    search_args.iterations,
                    seed,
                    search_args.restarts,
                )?;
                let Some(w) = found else {
                    return Err(Error::Inconclusive(
                        "levi search found no negative kernel; this does not prove positivity"
                            .into(),
                    ));
                };
                payload["search"] = json!({
                    "f": to_value(&w.f),
                    "t_levi": format_rational(&w.value),
                    "restart": w.restart,
                    "seed": seed,
                });
            }
            Ok(Outcome::exact(payload))
        }
        Command::Sample {
            family,
            kernel,
            n,
            trials,
            seed,
            injective,
        } => {
            let seed = require("seed", *seed)?;
            match trials {
                None => {
                    let r = family.r.unwrap_or(3);
                    let (w, _) = build_kernel(kernel, r, budgets)?;
                    let g = sample_hypergraph(&w, *n, seed)?;
                    Ok(Outcome::exact(json!({ "seed": seed, "hypergraph": to_value(&g) })))
                }
                Some(trials) => {
                    let (_, _, h) = build_family(family)?;
                    let (w, _) = build_kernel(kernel, h.uniformity(), budgets)?;
                    let kind = if *injective {
                        DensityKind::Injective
                    } else {
                        DensityKind::Homomorphism
                    };
                    let est = estimate_density_with(&h, &w, *n, *trials, seed, kind)?;
                    let exact = t_density(&h, &w, Strategy::Auto)?;
                    Ok(Outcome {
                        exact: false,
                        ..Outcome::exact(json!({
                            "estimate": to_value(&est),
                            "density": to_value(&kind),
                            "t_H_W": format_rational(&exact),
                        }))
                    })
                }
            }
        }
        Command::Verify { certificate } => verify(certificate),
    }
}

fn common(
    family: &FamilyArgs,
    kernel: &KernelArgs,
    search: bool,
    search_args: &SearchArgs,
    budgets: &Budgets,
) -> Result<Outcome> {
    let (_, _, h) = build_family(family)?;
    check_enum(&h, budgets)?;
    let classification = classify_even_subgraphs(&h)?;
    let mut payload = json!({ "classification": to_value(&classification) });
    if kernel.kernel.is_some() || kernel.kernel_file.is_some() {
        let (f, _) = build_kernel(kernel, h.uniformity(), budgets)?;
        let report = if f.is_zero_averaging() && classification.two_m.is_some() {
            check_noncommon(&h, &f, &classification)?
        } else {
            common_deficit(&h, &f)?
        };
        payload["report"] = to_value(&report);
        return Ok(Outcome::exact(payload));
    }
    if search {
        let seed = require("seed", search_args.seed)?;
        check_iterations(search_args.iterations, budgets)?;
        let candidates = classification.candidate_graphs(&h);
        if candidates.is_empty() {
            return Err(Error::Inconclusive(
                "no even subgraph without degree-one vertices".into(),
            ));
        }
        let opts = SearchOptions {
            restarts: search_args.restarts,
            zero_averaging: true,
            ..SearchOptions::new(search_args.atoms, search_args.iterations, seed)
        };
        let Some(w) = search_negative_sum(&candidates, &opts)? else {
            return Err(Error::Inconclusive(
                "search found no zero-averaging kernel that is negative on the candidates".into(),
            ));
        };
        let report = check_noncommon(&h, &w.kernel, &classification)?;
        payload["search"] = json!({
            "kernel": to_value(&w.kernel.to_file()),
            "candidate_sum": format_rational(&w.value),
            "restart": w.restart,
            "seed": seed,
        });
        payload["report"] = to_value(&report);
    }
    Ok(Outcome::exact(payload))
}

fn verify(path: &Path) -> Result<Outcome> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let body = match value.get("payload") {
        Some(p) => p.clone(),
        None => value,
    };
    // auto-witness payloads wrap the certificate
    let cert_value = body.get("certificate").cloned().unwrap_or(body);
    let cert: SidorenkoCertificate = serde_json::from_value(cert_value)
        .map_err(|e| Error::InvalidInput(format!("not a certificate: {e}")))?;
    cert.verify()?;
    Ok(Outcome::exact(json!({
        "verified": true,
        "verdict": to_value(&cert.verdict),
        "margin": format_rational(&cert.margin),
    })))
}

fn check_enum(h: &Hypergraph, budgets: &Budgets) -> Result<()> {
    if h.edge_count() > budgets.enum_budget {
        return Err(Error::Resource(format!(
            "{} edges exceed the enumeration budget of {}",
            h.edge_count(),
            budgets.enum_budget
        )));
    }
    Ok(())
}

fn check_atoms(w: &SymmetricKernel, budgets: &Budgets) -> Result<()> {
    if w.atom_count() > budgets.atom_budget {
        return Err(Error::Resource(format!(
            "{} atoms exceed the atom budget of {}",
            w.atom_count(),
            budgets.atom_budget
        )));
    }
    Ok(())
}

fn check_iterations(iterations: usize, budgets: &Budgets) -> Result<()> {
    if iterations > budgets.iteration_budget {
        return Err(Error::Resource(format!(
            "{iterations} iterations exceed the iteration budget of {}",
            budgets.iteration_budget
        )));
    }
    Ok(())
}

fn parse_coefficients(list: &str) -> Result<KappaPolynomial> {
    let coefficients = list
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("not a nonnegative integer: {t:?}")))
        })
        .collect::<Result<_>>()?;
    Ok(KappaPolynomial::new(coefficients))
}

fn kappa_for(
    h: &Hypergraph,
    family: &FamilyArgs,
    method: KappaMethod,
    budgets: &Budgets,
) -> Result<(KappaPolynomial, &'static str)> {
    let dp = || -> Result<KappaPolynomial> {
        let (ell, r, skip) = as_tight_cycle_subgraph(h).ok_or_else(|| {
            Error::InvalidInput("the transfer matrix needs a tight-cycle subgraph".into())
        })?;
        kappa_tight_cycle_dp(ell, r, &skip)
    };
    let brute = || -> Result<KappaPolynomial> {
        check_enum(h, budgets)?;
        kappa_poly_bruteforce(h)
    };
    match method {
        KappaMethod::Bruteforce => Ok((brute()?, "bruteforce")),
        KappaMethod::Dp => Ok((dp()?, "transfer_matrix")),
        KappaMethod::Closed => Ok((closed_form(family)?, "closed_form")),
        KappaMethod::Auto => match as_tight_cycle_subgraph(h) {
            Some(_) => Ok((dp()?, "transfer_matrix")),
            None => Ok((brute()?, "bruteforce")),
        },
    }
}

fn closed_form(family: &FamilyArgs) -> Result<KappaPolynomial> {
    let name = family.family.as_deref().unwrap_or_default();
    let ell = require("ell", family.ell)?;
    let r = require("r", family.r)?;
    match (name, r) {
        ("tight-cycle", 3) if ell % 3 == 0 => kappa_closed_c3k(ell / 3),
        ("tight-cycle-minus-edge", 3) if ell % 3 == 0 => kappa_closed_c3k_minus_e(ell / 3),
        ("tight-cycle", _) if ell == 2 * r => kappa_closed_c2r(r),
        _ => Err(Error::InvalidInput(
            "closed forms exist for C_{3k}^(3), C_{3k}^(3) - e and C_{2r}^(r)".into(),
        )),
    }
}

fn build_kernel(
    args: &KernelArgs,
    r: usize,
    budgets: &Budgets,
) -> Result<(SymmetricKernel, KernelDescriptor)> {
    let kind = match (&args.kernel, &args.kernel_file) {
        (Some(k), _) => k.as_str(),
        (None, Some(_)) => "file",
        (None, None) => return Err(Error::InvalidInput("--kernel is required".into())),
    };
    let w = match kind {
        "linear-girth" => linear_girth_kernel(r, &rational_arg("c", &args.c)?)?,
        "s-parity" => s_parity_kernel(r, require("s", args.s)?, &rational_arg("c", &args.c)?)?,
        "g" => g_kernel(r, &rational_arg("eps", &args.eps)?)?,
        "constant" => SymmetricKernel::constant(r, rational_arg("c", &args.c)?)?,
        "h" => {
            let eps = rational_arg("eps", &args.eps)?;
            let c = rational_arg("c", &args.c)?;
            let w = h_kernel(r, &eps, &c)?;
            check_atoms(&w, budgets)?;
            return Ok((w, KernelDescriptor::h(r, eps, c)));
        }
        "file" => {
            let path = args
                .kernel_file
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("--kernel-file is required".into()))?;
            SymmetricKernel::from_json(&read_file(path)?)?
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown kernel {other:?}; expected linear-girth, s-parity, h, g, constant or file"
            )))
        }
    };
    if w.arity() != r {
        return Err(Error::InvalidInput(format!(
            "kernel arity {} does not match uniformity {r}",
            w.arity()
        )));
    }
    check_atoms(&w, budgets)?;
    let descriptor = KernelDescriptor::Explicit(w.to_file());
    Ok((w, descriptor))
}

fn build_family(args: &FamilyArgs) -> Result<(String, Value, Hypergraph)> {
    if let Some(path) = &args.hypergraph {
        let h = Hypergraph::from_json(&read_file(path)?)?;
        return Ok(("file".into(), json!({ "path": path.display().to_string() }), h));
    }
    let name = args
        .family
        .clone()
        .ok_or_else(|| Error::InvalidInput("--family or --hypergraph is required".into()))?;
    let (params, h) = named_family(&name, args)?;
    Ok((name, params, h))
}

fn named_family(name: &str, a: &FamilyArgs) -> Result<(Value, Hypergraph)> {
    Ok(match name {
        "tight-cycle" => {
            let (ell, r) = (require("ell", a.ell)?, require("r", a.r)?);
            (json!({ "ell": ell, "r": r }), tight_cycle(ell, r)?)
        }
        "tight-cycle-minus-edge" => {
            let (ell, r) = (require("ell", a.ell)?, require("r", a.r)?);
            let index = a.index.unwrap_or(0);
            (
                json!({ "ell": ell, "r": r, "index": index }),
                tight_cycle_minus_window(ell, r, index)?,
            )
        }
        "loose-cycle" => {
            let (g, r) = (require("g", a.g)?, require("r", a.r)?);
            (json!({ "g": g, "r": r }), loose_cycle(g, r)?)
        }
        "loose-triangle" => {
            let r = a.r.unwrap_or(3);
            (json!({ "r": r }), loose_triangle(r)?)
        }
        "grid" => {
            let r = require("r", a.r)?;
            (json!({ "r": r }), grid(r)?)
        }
        "half-octahedron" => (json!({}), half_octahedron()),
        "single-edge" => {
            let r = require("r", a.r)?;
            (json!({ "r": r }), Hypergraph::single_edge(r)?)
        }
        "levi-of" | "disjoint-union" => {
            let inner = a
                .inner
                .clone()
                .ok_or_else(|| Error::InvalidInput(format!("{name} needs --inner")))?;
            if inner == "levi-of" || inner == "disjoint-union" {
                return Err(Error::InvalidInput(format!("{name} cannot wrap {inner}")));
            }
            let (inner_params, g) = named_family(&inner, a)?;
            if name == "levi-of" {
                (
                    json!({ "inner": inner, "inner_params": inner_params }),
                    g.levi_graph(),
                )
            } else {
                let copies = require("copies", a.copies)?;
                if copies == 0 {
                    return Err(Error::InvalidInput("copies must be positive".into()));
                }
                (
                    json!({ "inner": inner, "inner_params": inner_params, "copies": copies }),
                    Hypergraph::disjoint_union(&vec![g; copies])?,
                )
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown family {other:?}; run `catalog` for the list"
            )))
        }
    })
}

fn catalog() -> Value {
    let param = |name: &str, constraint: &str| json!({ "name": name, "constraint": constraint });
    json!({ "families": [
        {
            "name": "tight-cycle",
            "params": [param("r", "r >= 2"), param("ell", "ell >= r + 1")],
            "minimal": { "r": 2, "ell": 3 },
        },
        {
            "name": "tight-cycle-minus-edge",
            "params": [
                param("r", "r >= 2"),
                param("ell", "ell >= r + 1"),
                param("index", "0 <= index < ell, default 0"),
            ],
            "minimal": { "r": 2, "ell": 3, "index": 0 },
        },
        {
            "name": "loose-cycle",
            "params": [param("r", "r >= 2"), param("g", "g >= 3")],
            "minimal": { "r": 2, "g": 3 },
        },
        {
            "name": "loose-triangle",
            "params": [param("r", "r >= 2, default 3")],
            "minimal": { "r": 2 },
        },
        {
            "name": "grid",
            "params": [param("r", "r >= 2")],
            "minimal": { "r": 2 },
        },
        {
            "name": "half-octahedron",
            "params": [],
            "minimal": {},
        },
        {
            "name": "single-edge",
            "params": [param("r", "r >= 2")],
            "minimal": { "r": 2 },
        },
        {
            "name": "levi-of",
            "params": [param("inner", "any family other than levi-of and disjoint-union"), param("...", "parameters of the inner family")],
            "minimal": { "inner": "half-octahedron" },
        },
        {
            "name": "disjoint-union",
            "params": [param("inner", "any family other than levi-of and disjoint-union"), param("copies", "copies >= 1"), param("...", "parameters of the inner family")],
            "minimal": { "inner": "half-octahedron", "copies": 1 },
        },
    ]})
}

fn scan_table(rows: &[ScanRow]) -> String {
    let mut out = format!(
        "{:>3} {:>3} {:>5}  {:<16} {:<28} {:<28} {}\n",
        "k", "r", "kr", "x*", "P(x*)", "provenance", "certificate"
    );
    for row in rows {
        let show = |x: &Option<Rational>| x.as_ref().map(format_rational).unwrap_or("-".into());
        let sign = match &row.p_at_x_star {
            Some(v) if v.is_negative() => "",
            _ => " (none)",
        };
        let cert = match &row.certificate {
            hypersid::witness::CertificateStatus::NotRequested => "-".to_string(),
            hypersid::witness::CertificateStatus::Certified { eps, margin } => format!(
                "eps={} margin={}",
                format_rational(eps),
                format_rational(margin)
            ),
            hypersid::witness::CertificateStatus::SkippedBudget => "skipped_budget".to_string(),
            hypersid::witness::CertificateStatus::Failed { reason } => format!("failed: {reason}"),
        };
        let p = show(&row.p_at_x_star);
        let p = if p.len() > 28 { format!("{}...", &p[..25]) } else { p };
        out.push_str(&format!(
            "{:>3} {:>3} {:>5}  {:<16} {:<28} {:<28} {}{}\n",
            row.k,
            row.r,
            row.k * row.r,
            show(&row.x_star),
            p,
            row.provenance.clone().unwrap_or("-".into()),
            cert,
            sign
        ));
    }
    out
}
