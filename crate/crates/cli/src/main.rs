use std::fmt::Write as _;
use std::fs;
use std::io::{ErrorKind, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nested_core::address::{format_digits, parse_digits};
use nested_core::dsl::{format_document, parse_document, Severity};
use nested_core::export::{to_csv, to_dot, to_graphml, to_json};
use nested_core::{
    build_graph, builtin, classify_part, impose, Address, Approx, Cell, ChartPair, Equivalence,
    EquivalenceClass, GraphMode, RuleEngine, SpaceSpec, Tail, BUILTIN_NAMES,
};

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).expect("writing to a string")
    };
}

/// Scale exponents and chart indices beyond this are rejected up front.
const MAX_SHIFT: i64 = 100_000;

#[derive(Parser)]
#[command(
    name = "nested",
    version,
    about = "Addresses, rules and graphs of nested fractal spaces"
)]
struct Cli {
    /// Builtin space, e.g. real_line(10), gasket, cantor
    #[arg(long, global = true, value_name = "NAME")]
    builtin: Option<String>,

    /// Space declaration file (.nsp)
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,

    /// Space to use when the file declares several
    #[arg(long, global = true, value_name = "NAME")]
    space: Option<String>,

    /// Rewrite depth budget for equivalence search
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,

    /// Maximum equivalence class size
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(1..))]
    class_cap: u32,

    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two addresses are equivalent
    Eq { a: String, b: String },
    /// List the equivalence class of an address
    Class { a: String },
    /// Impose one address on another, class by class
    Impose { a: String, b: String },
    /// Multiply by N^k (put negative k after `--`)
    Scale {
        a: String,
        #[arg(allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-MAX_SHIFT..=MAX_SHIFT))]
        k: i64,
    },
    /// Real value of an address, exact and approximate
    Eval { a: String },
    /// Convert an address to its chart pair, or back with --from
    Pair {
        a: Option<String>,
        #[arg(long, num_args = 2, value_names = ["N", "OMEGA"], conflicts_with = "a")]
        from: Option<Vec<String>>,
    },
    /// Build the level-M graph under a root cell
    Graph {
        /// Root cell word
        #[arg(long, default_value = "0")]
        root: String,
        /// Position of the root word's last digit
        #[arg(long, default_value_t = 0, allow_negative_numbers = true,
              value_parser = clap::value_parser!(i64).range(-MAX_SHIFT..=MAX_SHIFT))]
        scale: i64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        #[arg(long, default_value = "vertex", value_parser = parse_mode)]
        mode: GraphMode,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Write the graph here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify every part as edge, middling or isolated
    Classify,
    /// Validate a space declaration file
    Parse { file: PathBuf },
    /// Print a space declaration file in canonical form
    Fmt {
        file: PathBuf,
        /// Exit with status 1 if the file is not canonical
        #[arg(long, conflicts_with = "write")]
        check: bool,
        /// Rewrite the file in place
        #[arg(long)]
        write: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
    Graphml,
    Csv,
}

fn parse_mode(s: &str) -> Result<GraphMode, String> {
    s.parse()
        .map_err(|_| format!("expected vertex or cell, got {s:?}"))
}

struct Paint(bool);

impl Paint {
    fn detect() -> Paint {
        let disabled = std::env::var("NESTED_COLOR").is_ok_and(|v| v == "0");
        Paint(!disabled && std::io::stdout().is_terminal())
    }

    fn color(&self, text: &str, code: &str) -> String {
        if self.0 {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn verdict(&self, r: Equivalence) -> String {
        let code = match r {
            Equivalence::Equal | Equivalence::Equivalent => "32",
            Equivalence::NotFoundUpToDepth => "31",
        };
        self.color(&r.to_string(), code)
    }
}

fn print_json(out: &mut String, value: &Value) {
    say!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json value serializes")
    );
}

fn load_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses a declaration file, echoing warnings, failing on the first error.
fn load_specs(path: &Path) -> Result<Vec<SpaceSpec>> {
    let text = load_file(path)?;
    let doc = parse_document(&text);
    for w in doc.warnings() {
        eprintln!("{}:{w}", path.display());
    }
    match doc.first_error() {
        Some(e) => Err(anyhow!("{}:{e}", path.display())),
        None => Ok(doc.specs),
    }
}

fn load_space(cli: &Cli) -> Result<SpaceSpec> {
    match (&cli.builtin, &cli.spec) {
        (Some(_), Some(_)) => bail!("give either --builtin or --spec, not both"),
        (None, None) => bail!(
            "no space given; use --builtin NAME or --spec PATH (builtins: {})",
            BUILTIN_NAMES.join(", ")
        ),
        (Some(name), None) => {
            if cli.space.is_some() {
                bail!("--space only applies to --spec files");
            }
            Ok(builtin(name)?)
        }
        (None, Some(path)) => {
            let specs = load_specs(path)?;
            match &cli.space {
                Some(name) => specs
                    .into_iter()
                    .find(|s| s.name() == name)
                    .ok_or_else(|| anyhow!("{} declares no space named {name}", path.display())),
                None if specs.len() == 1 => Ok(specs.into_iter().next().expect("one space")),
                None => {
                    let names: Vec<_> = specs.iter().map(|s| s.name().to_string()).collect();
                    bail!(
                        "{} declares several spaces ({}); pick one with --space",
                        path.display(),
                        names.join(", ")
                    )
                }
            }
        }
    }
}

fn address(spec: &SpaceSpec, text: &str) -> Result<Address> {
    let a = spec.parse_address(text)?;
    spec.check_address(&a)?;
    Ok(a)
}

fn class_json(class: &EquivalenceClass, n: u32) -> Value {
    json!({
        "representative": class.representative().format(n),
        "members": class.members().iter().map(|m| m.format(n)).collect::<Vec<_>>(),
        "saturated": class.is_saturated(),
    })
}

fn run(cli: Cli, out: &mut String) -> Result<ExitCode> {
    let paint = Paint::detect();
    match &cli.command {
        Command::Parse { file } => return cmd_parse(file, cli.json, out),
        Command::Fmt { file, check, write } => return cmd_fmt(file, *check, *write, out),
        _ => {}
    }

    let spec = load_space(&cli)?;
    let n = spec.n_parts();
    let engine = RuleEngine::new(&spec)
        .with_depth(cli.depth as usize)
        .with_class_cap(cli.class_cap as usize);

    match &cli.command {
        Command::Eq { a, b } => {
            let (a, b) = (address(&spec, a)?, address(&spec, b)?);
            let result = engine.equivalent(&a, &b)?;
            let witness = match result {
                Equivalence::Equivalent => engine.witness(&a, &b)?,
                _ => None,
            };
            let chain: Option<Vec<String>> =
                witness.map(|w| w.iter().map(|x| x.format(n)).collect());
            if cli.json {
                print_json(
                    out,
                    &json!({ "result": result.to_string(), "witness": chain }),
                );
            } else {
                say!(out, "{}", paint.verdict(result));
                if let Some(chain) = chain {
                    say!(out, "witness: {}", chain.join(" -> "));
                }
            }
            Ok(if result.holds() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Class { a } => {
            let class = engine.class_members(&address(&spec, a)?)?;
            if cli.json {
                print_json(out, &class_json(&class, n));
            } else {
                for m in class.members() {
                    say!(out, "{}", m.format(n));
                }
                if !class.is_saturated() {
                    eprintln!("warning: depth budget reached before the class closed");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Impose { a, b } => {
            let set = impose(&address(&spec, a)?, &address(&spec, b)?, &engine)?;
            if cli.json {
                print_json(
                    out,
                    &json!({
                        "raw": set.raw.iter().map(|x| x.format(n)).collect::<Vec<_>>(),
                        "classes": set.classes.iter().map(|c| class_json(c, n)).collect::<Vec<_>>(),
                    }),
                );
            } else {
                for c in &set.classes {
                    let members: Vec<_> = c.members().iter().map(|m| m.format(n)).collect();
                    say!(out, "{}", members.join(" ~ "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scale { a, k } => {
            let scaled = address(&spec, a)?.scale(*k).format(n);
            if cli.json {
                print_json(out, &json!({ "address": scaled }));
            } else {
                say!(out, "{scaled}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { a } => {
            let a = address(&spec, a)?;
            let exact = a.eval_exact(n);
            let approx: Approx = a.eval(n);
            if cli.json {
                print_json(
                    out,
                    &json!({ "exact": exact.to_string(), "approx": approx }),
                );
            } else {
                say!(out, "exact: {exact}");
                say!(out, "approx: {approx}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pair { a, from } => {
            match (a, from) {
                (Some(a), None) => {
                    let pair = address(&spec, a)?.to_pair();
                    if cli.json {
                        print_json(out, &json!({ "n": pair.n, "omega": pair.omega.format(n) }));
                    } else {
                        say!(out, "{}", pair.format(n));
                    }
                }
                (None, Some(args)) => {
                    let index: u64 = args[0].parse().with_context(|| {
                        format!("chart index {:?} is not a natural number", args[0])
                    })?;
                    if index > MAX_SHIFT as u64 {
                        bail!("chart index {index} exceeds {MAX_SHIFT}");
                    }
                    let omega = Tail::parse(&args[1], n)?;
                    let a = Address::from_pair(&ChartPair::new(index, omega));
                    if cli.json {
                        print_json(out, &json!({ "address": a.format(n) }));
                    } else {
                        say!(out, "{}", a.format(n));
                    }
                }
                _ => bail!("give an address, or --from N OMEGA"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph {
            root,
            scale,
            level,
            mode,
            format,
            output,
        } => {
            let word = parse_digits(root, n)?;
            let root = Cell::new(word, *scale)?;
            let g = build_graph(&engine, &root, *level, *mode)?;
            let text = match format {
                Format::Dot => to_dot(&g),
                Format::Json => to_json(&g),
                Format::Graphml => to_graphml(&g),
                Format::Csv => to_csv(&g),
            };
            let components = g.component_count();
            let summary = if cli.json {
                serde_json::to_string_pretty(&json!({
                    "root": format!("{}@{}", format_digits(root.word(), n), root.scale()),
                    "level": level,
                    "nodes": g.nodes.len(),
                    "edges": g.edges.len(),
                    "components": components,
                }))?
            } else {
                format!(
                    "nodes {}, edges {}, components {components}",
                    g.nodes.len(),
                    g.edges.len()
                )
            };
            match output {
                Some(path) => {
                    fs::write(path, text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    say!(out, "{summary}");
                }
                None => {
                    out.push_str(&text);
                    eprintln!("{summary}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify => {
            let mut parts = Vec::new();
            for i in 0..n {
                parts.push((i, classify_part(i, &engine)?));
            }
            if cli.json {
                let list: Vec<_> = parts
                    .iter()
                    .map(|(i, c)| json!({ "part": i, "class": c.to_string() }))
                    .collect();
                print_json(out, &json!({ "space": spec.name(), "parts": list }));
            } else {
                for (i, c) in parts {
                    say!(out, "{i} {}", paint.color(&c.to_string(), "36"));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Parse { .. } | Command::Fmt { .. } => unreachable!("handled above"),
    }
}

fn cmd_parse(path: &Path, as_json: bool, out: &mut String) -> Result<ExitCode> {
    let text = load_file(path)?;
    let doc = parse_document(&text);
    let failed = doc.first_error().is_some();
    if as_json {
        let spaces: Vec<_> = doc
            .specs
            .iter()
            .map(|s| {
                json!({
                    "name": s.name(),
                    "parts": s.n_parts(),
                    "rules": s.rule_count(),
                    "corners": s.corners().count(),
                    "left_limit": s.left_limit(),
                    "right_limit": s.right_limit(),
                })
            })
            .collect();
        let diagnostics: Vec<_> = doc
            .diagnostics
            .iter()
            .map(|d| {
                json!({
                    "severity": match d.severity { Severity::Error => "error", Severity::Warning => "warning" },
                    "kind": format!("{:?}", d.kind),
                    "line": d.line,
                    "column": d.column,
                    "start": d.span.start,
                    "end": d.span.end,
                    "message": d.message,
                })
            })
            .collect();
        print_json(
            out,
            &json!({ "valid": !failed, "spaces": spaces, "diagnostics": diagnostics }),
        );
    } else {
        for d in &doc.diagnostics {
            eprintln!("{}:{d}", path.display());
        }
        if !failed {
            for s in &doc.specs {
                say!(
                    out,
                    "space {}: {} parts, {} rules, {} corners",
                    s.name(),
                    s.n_parts(),
                    s.rule_count(),
                    s.corners().count()
                );
            }
        }
    }
    Ok(if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_fmt(path: &Path, check: bool, write: bool, out: &mut String) -> Result<ExitCode> {
    let original = load_file(path)?;
    let formatted = format_document(&load_specs(path)?);
    if check {
        if formatted == original {
            return Ok(ExitCode::SUCCESS);
        }
        eprintln!("{} is not canonically formatted", path.display());
        return Ok(ExitCode::from(1));
    }
    if write {
        fs::write(path, &formatted).with_context(|| format!("cannot write {}", path.display()))?;
    } else {
        out.push_str(&formatted);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    };
    // a reader that hung up early is not an error
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
    {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        _ => code,
    }
}
