//! `modhn`: Harder-Narasimhan filtrations and property checks from the
//! command line.
//!
//! Exit codes: 0 pass, 1 property violation, 2 input error, 3 precision
//! exhausted.

mod checks;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use modhn::algebra::laurent::DEFAULT_PRECISION;
use modhn::algebra::rational::{format_rational, sqrt_decimal};
use modhn::filtration::{dist2, norm2, pairing};
use modhn::hn::{certify, convex_project, hn_greedy, hn_oracle_report, objective, HnCertificate, DEFAULT_SAMPLES};
use modhn::instances::bun::bun_tensor;
use modhn::instances::compat::{CompatParams, InstanceKind};
use modhn::instances::fil::{fil_tensor, space_from_filtration};
use modhn::instances::phi::phi_tensor;
use modhn::instances::{check_dim, check_q, InstanceHn, MAX_HN_DIM};
use modhn::io::{self, InstanceObject, LatticeData};
use modhn::lattice::height_function;
use modhn::rng::DEFAULT_SEED;
use modhn::{Error, Filtration, FiniteLattice, Rational};

use checks::CheckOutcome;

#[derive(Parser)]
#[command(name = "modhn", version, about = "Harder-Narasimhan filtrations on finite modular lattices")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random filtrations per certificate or property check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Random instances per comparison check.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Working precision (t-adic digits) for Laurent series, at least 16.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(16..))]
    precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HnKind {
    Auto,
    Lattice,
    Fil,
    Bun,
    Phi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Axioms,
    Cat0,
    Concavity,
    Oracle,
    Tensor,
    Busemann,
}

#[derive(Subcommand)]
enum Command {
    /// HN filtration of a lattice with degree, or of an instance object.
    Hn {
        file: String,
        #[arg(long, value_enum, default_value_t = HnKind::Auto)]
        kind: HnKind,
    },
    /// Randomized property checks.
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        /// Lattice spec (boolean:K, chain:R, subspace:Q:N) or lattice file.
        #[arg(long)]
        lattice: Option<String>,
        /// Instance file whose degree function `check axioms` should test.
        #[arg(long)]
        instance: Option<String>,
        /// Instance kind for `check tensor` (all kinds when omitted).
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        n1: usize,
        #[arg(long, default_value_t = 2)]
        n2: usize,
    },
    /// Exact squared distance and its decimal square root.
    Dist {
        #[arg(long)]
        lattice: String,
        f: String,
        g: String,
    },
    /// Exact pairing ⟨f, g⟩.
    Pair {
        #[arg(long)]
        lattice: String,
        f: String,
        g: String,
    },
    /// Convex projection of f onto the sublattice generated by `--sub`.
    Project {
        #[arg(long)]
        lattice: String,
        /// Comma-separated element labels generating the sublattice.
        #[arg(long)]
        sub: String,
        f: String,
    },
    /// Tensor product of two instance objects, printed as JSON.
    Tensor { a: String, b: String },
    /// Chamber-by-chamber HN computation, compared with the greedy one.
    Oracle { file: String },
}

/// Outcome of a command: rendered output and whether it passed.
struct Report {
    out: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.out);
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::PrecisionExhausted(_)) => 3,
        Some(
            Error::RankAxiomViolation(_)
            | Error::DegreeAxiomViolation { .. }
            | Error::NotModular { .. }
            | Error::InconsistentMinima(_),
        ) => 1,
        _ => 2,
    }
}

/// File contents, or the argument itself when it is inline JSON.
fn read_input(arg: &str) -> anyhow::Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))
}

fn load_lattice(arg: &str) -> anyhow::Result<LatticeData> {
    if Path::new(arg).exists() || arg.trim_start().starts_with('{') {
        let text = read_input(arg)?;
        return io::parse_lattice(&text).with_context(|| format!("in {arg}"));
    }
    let lattice = io::lattice_from_spec(arg)?;
    let rank = height_function(&lattice)?;
    Ok(LatticeData { lattice, rank, deg: None })
}

fn load_filtration(l: &FiniteLattice, arg: &str) -> anyhow::Result<Filtration> {
    io::parse_filtration(l, &read_input(arg)?).with_context(|| format!("in filtration {arg}"))
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Hn { file, kind } => cmd_hn(cli, file, *kind),
        Command::Check { what, lattice, instance, kind, q, m, n1, n2 } => {
            let params = CompatParams { q: *q, m: *m, n1: *n1, n2: *n2, precision: cli.precision };
            cmd_check(cli, *what, lattice.as_deref(), instance.as_deref(), kind.as_deref(), &params)
        }
        Command::Dist { lattice, f, g } => {
            let d = load_lattice(lattice)?;
            let (f, g) = (load_filtration(&d.lattice, f)?, load_filtration(&d.lattice, g)?);
            let d2 = dist2(&d.lattice, &d.rank, &f, &g);
            let rows = [("d2", format_rational(&d2)), ("d", sqrt_decimal(&d2, 12))];
            Ok(Report { out: key_values(cli.format, &rows), pass: true })
        }
        Command::Pair { lattice, f, g } => {
            let d = load_lattice(lattice)?;
            let (f, g) = (load_filtration(&d.lattice, f)?, load_filtration(&d.lattice, g)?);
            let p = pairing(&d.lattice, &d.rank, &f, &g);
            Ok(Report { out: key_values(cli.format, &[("pair", format_rational(&p))]), pass: true })
        }
        Command::Project { lattice, sub, f } => {
            let d = load_lattice(lattice)?;
            let l = &d.lattice;
            let f = load_filtration(l, f)?;
            let gens = sub
                .split(',')
                .map(|s| l.find(s.trim()).ok_or_else(|| anyhow!("unknown element {s:?}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let y = l.generated_sublattice(&gens);
            let p = convex_project(l, &d.rank, &f, &y)?;
            let out = match cli.format {
                Format::Json => json_line(&json!({
                    "projection": io::filtration_to_json(l, &p),
                    "sublattice": y.iter().map(|&x| l.label(x)).collect::<Vec<_>>(),
                })),
                _ => key_values(cli.format, &[("projection", p.describe(l))]),
            };
            Ok(Report { out, pass: true })
        }
        Command::Tensor { a, b } => {
            let x = io::parse_instance(&read_input(a)?, cli.precision).with_context(|| format!("in {a}"))?;
            let y = io::parse_instance(&read_input(b)?, cli.precision).with_context(|| format!("in {b}"))?;
            let t = match (&x, &y) {
                (InstanceObject::Fil(x), InstanceObject::Fil(y)) => InstanceObject::Fil(fil_tensor(x, y)?),
                (InstanceObject::Bun(x), InstanceObject::Bun(y)) => InstanceObject::Bun(bun_tensor(x, y)?),
                (InstanceObject::Phi(x), InstanceObject::Phi(y)) => InstanceObject::Phi(phi_tensor(x, y)?),
                _ => return Err(Error::DimensionMismatch("tensor of objects of different kinds".into()).into()),
            };
            Ok(Report { out: json_line(&io::instance_to_json(&t)), pass: true })
        }
        Command::Oracle { file } => cmd_oracle(cli, file),
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn key_values(format: Format, rows: &[(&str, String)]) -> String {
    match format {
        Format::Text => rows.iter().map(|(k, v)| format!("{k} = {v}\n")).collect(),
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in rows {
                let _ = writeln!(s, "{k},{v}");
            }
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                rows.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            json_line(&Value::Object(map))
        }
    }
}

fn detect_kind(text: &str) -> anyhow::Result<HnKind> {
    let v: Value = modhn::io::parse_json(text)?;
    Ok(if v.get("flag").is_some() {
        HnKind::Fil
    } else if v.get("phi").is_some() {
        HnKind::Phi
    } else if v.get("basis").is_some() {
        HnKind::Bun
    } else {
        HnKind::Lattice
    })
}

fn cmd_hn(cli: &Cli, file: &str, kind: HnKind) -> anyhow::Result<Report> {
    let text = read_input(file)?;
    let kind = if kind == HnKind::Auto { detect_kind(&text)? } else { kind };
    let (lattice, rank, deg, hn, extra) = match kind {
        HnKind::Lattice => {
            let d = io::parse_lattice(&text).with_context(|| format!("in {file}"))?;
            let deg = d.deg.ok_or_else(|| Error::Parse(format!("{file}: lattice file has no \"deg\"")))?;
            let hn = hn_greedy(&d.lattice, &d.rank, &deg)?;
            (d.lattice, d.rank, deg, hn, None)
        }
        _ => {
            let x = io::parse_instance(&text, cli.precision).with_context(|| format!("in {file}"))?;
            let (q, n) = match &x {
                InstanceObject::Fil(s) => (s.q(), s.n()),
                InstanceObject::Bun(l) => (l.q(), l.n()),
                InstanceObject::Phi(l) => (l.q(), l.n()),
            };
            check_q(q)?;
            check_dim("dimension", n, MAX_HN_DIM)?;
            let lat = FiniteLattice::subspace(q, n)?;
            let deg = checks::instance_degrees(&x, &lat)?;
            let InstanceHn { rank, deg, hn } = InstanceHn::solve(&lat, deg)?;
            let extra = match &x {
                InstanceObject::Fil(s) => Some(io::filtered_space_to_json(&space_from_filtration(&lat, &hn, s.m())?)),
                _ => None,
            };
            (lat, rank, deg, hn, extra)
        }
    };
    let samples = cli.samples.unwrap_or(DEFAULT_SAMPLES);
    let cert = certify(&lattice, &rank, &deg, &hn, samples, cli.seed);
    let obj = objective(&rank, &deg, &hn);
    let out = match cli.format {
        Format::Csv => io::slope_polygon_csv(&rank, &deg, &hn),
        Format::Json => {
            let mut v = json!({
                "lattice": io::kind_name(&lattice),
                "elements": lattice.len(),
                "hn": io::filtration_to_json(&lattice, &hn),
                "describe": hn.describe(&lattice),
                "objective": format_rational(&obj),
                "norm2": format_rational(&norm2(&rank, &hn)),
                "certificate": io::certificate_to_json(&lattice, &cert),
                "slope_polygon": modhn::hn::slope_profile(&rank, &deg, &hn)
                    .iter()
                    .map(|(r, d)| vec![format_rational(r), format_rational(d)])
                    .collect::<Vec<_>>(),
            });
            if let Some(e) = extra {
                v["flag"] = e;
            }
            json_line(&v)
        }
        Format::Text => hn_text(&lattice, &rank, &deg, &hn, &obj, &cert),
    };
    Ok(Report { out, pass: cert.valid() })
}

fn hn_text(
    l: &FiniteLattice,
    rank: &[Rational],
    deg: &[Rational],
    hn: &Filtration,
    obj: &Rational,
    cert: &HnCertificate,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lattice: {} ({} elements)", io::kind_name(l), l.len());
    let _ = writeln!(s, "hn: {}", hn.describe(l));
    let chain: Vec<&str> = hn.chain().iter().map(|&x| l.label(x)).collect();
    let _ = writeln!(s, "chain: {}", chain.join(", "));
    let jumps: Vec<String> = hn.jumps().iter().map(format_rational).collect();
    let _ = writeln!(s, "jumps: {}", jumps.join(","));
    let _ = writeln!(s, "objective: {}", format_rational(obj));
    let _ = writeln!(
        s,
        "certificate: {} (optimum identity {}, graded pieces {}, {} samples {})",
        if cert.valid() { "valid" } else { "INVALID" },
        ok(cert.optimum_identity()),
        ok(cert.gr_ok()),
        cert.samples.len(),
        ok(cert.dominance_ok()),
    );
    if let Some(e) = &cert.exact_variant {
        let _ = writeln!(s, "exact variant: {}", ok(e.ok()));
    }
    let _ = writeln!(s, "slope polygon:");
    s.push_str(&io::slope_polygon_csv(rank, deg, hn));
    s
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn cmd_oracle(cli: &Cli, file: &str) -> anyhow::Result<Report> {
    let d = io::parse_lattice(&read_input(file)?).with_context(|| format!("in {file}"))?;
    let deg = d.deg.ok_or_else(|| Error::Parse(format!("{file}: lattice file has no \"deg\"")))?;
    let l = &d.lattice;
    let report = hn_oracle_report(l, &d.rank, &deg)?;
    let greedy = hn_greedy(l, &d.rank, &deg)?;
    let agree = greedy == report.filtration;
    let out = match cli.format {
        Format::Json => json_line(&json!({
            "oracle": io::filtration_to_json(l, &report.filtration),
            "greedy": io::filtration_to_json(l, &greedy),
            "objective": format_rational(&report.objective),
            "chambers": report.chambers,
            "evaluated": report.evaluated,
            "minimizers": report.minimizers,
            "agree": agree,
        })),
        _ => key_values(
            cli.format,
            &[
                ("oracle", report.filtration.describe(l)),
                ("greedy", greedy.describe(l)),
                ("objective", format_rational(&report.objective)),
                ("chambers", report.chambers.to_string()),
                ("evaluated", report.evaluated.to_string()),
                ("minimizers", report.minimizers.to_string()),
                ("agree", agree.to_string()),
            ],
        ),
    };
    Ok(Report { out, pass: agree })
}

fn cmd_check(
    cli: &Cli,
    what: CheckKind,
    lattice: Option<&str>,
    instance: Option<&str>,
    kind: Option<&str>,
    params: &CompatParams,
) -> anyhow::Result<Report> {
    let load = |default: &str| load_lattice(lattice.unwrap_or(default));
    let outcome: CheckOutcome = match what {
        CheckKind::Axioms => {
            let d = load("boolean:3")?;
            let inst = instance
                .map(|f| -> anyhow::Result<_> {
                    let x = io::parse_instance(&read_input(f)?, cli.precision).with_context(|| format!("in {f}"))?;
                    let (q, n) = match &x {
                        InstanceObject::Fil(s) => (s.q(), s.n()),
                        InstanceObject::Bun(l) => (l.q(), l.n()),
                        InstanceObject::Phi(l) => (l.q(), l.n()),
                    };
                    check_q(q)?;
                    check_dim("dimension", n, MAX_HN_DIM)?;
                    Ok((x, FiniteLattice::subspace(q, n)?))
                })
                .transpose()?;
            checks::axioms(&d.lattice, &d.rank, d.deg.as_deref(), inst.as_ref().map(|(x, l)| (x, l)))?
        }
        CheckKind::Cat0 => {
            let d = load("boolean:3")?;
            checks::cat0(&d.lattice, &d.rank, cli.samples.unwrap_or(1000), cli.seed)?
        }
        CheckKind::Concavity => {
            let d = load("boolean:3")?;
            checks::concavity(&d.lattice, &d.rank, cli.samples.unwrap_or(1000), cli.seed)?
        }
        CheckKind::Oracle => {
            let lattices = match lattice {
                Some(_) => vec![load("")?.lattice],
                None => checks::oracle_lattices()?,
            };
            checks::oracle(&lattices, cli.trials.unwrap_or(200), cli.seed)?
        }
        CheckKind::Tensor => {
            let kinds = match kind {
                Some(k) => vec![k.parse::<InstanceKind>()?],
                None => vec![InstanceKind::Fil, InstanceKind::Bun, InstanceKind::Phi],
            };
            checks::tensor(&kinds, params, cli.trials.unwrap_or(50), cli.seed)?
        }
        CheckKind::Busemann => {
            checks::busemann_check(params.q, params.n1, cli.precision, cli.trials.unwrap_or(100), cli.seed)?
        }
    };
    let pass = outcome.pass();
    let out = match cli.format {
        Format::Json => json_line(&json!({
            "check": outcome.name,
            "pass": pass,
            "cases": outcome.cases,
            "seed": cli.seed,
            "failures": outcome.failures,
        })),
        Format::Csv => format!(
            "check,cases,failures,pass\n{},{},{},{}\n",
            outcome.name,
            outcome.cases,
            outcome.failures.len(),
            pass
        ),
        Format::Text => {
            let mut s = format!(
                "check {}: {} ({} cases, seed {})\n",
                outcome.name,
                if pass { "PASS" } else { "FAIL" },
                outcome.cases,
                cli.seed
            );
            for f in &outcome.failures {
                let _ = writeln!(s, "  {f}");
            }
            s
        }
    };
    Ok(Report { out, pass })
}
