//! Command-line front end: fan inspection, relations, the admissibility
//! criterion, bundle construction, smoothness checks, the regression report
//! and the built-in catalog.
//!
//! Exit codes: 0 when the command succeeds and its check passes, 1 when a
//! check fails, 2 on unreadable or malformed input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use toric_whb::bundle::{projectivize, BundleFile};
use toric_whb::catalog::{construction, BundleId, Variety, BUNDLE_NAMES, VARIETY_NAMES};
use toric_whb::cox::{
    decide_smooth_monomial_partials, is_homogeneous, is_wild_fiberwise, singular_point_search_threads,
    verify_vanishing_witness, CoxForm, SmoothnessOutcome, WildnessVerdict, DEFAULT_POINT_BUDGET,
};
use toric_whb::primitive::{primitive_relations, relation_records, RelationRecord};
use toric_whb::reproduce::{reproduce, Section};
use toric_whb::whb::{classify_fano, is_prime, primes_up_to, verdict_for_relations, FanoCase, DEFAULT_P_MAX};
use toric_whb::{BundleSpec, DivisorClass, Error, Fan, TorusDivisor, TotalSpaceFan};

type CliResult<T> = Result<T, CliError>;

/// Anything that ends the run with exit code 2.
#[derive(Debug)]
struct CliError(String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError(msg.into()))
}

#[derive(Parser)]
#[command(name = "toric-whb", version, about = "Toric fans, primitive relations and wild hypersurface bundles")]
struct Cli {
    /// Worker threads for finite-field searches. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan file and print its basic invariants.
    FanInfo {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the primitive relations with degrees and extremality.
    Relations {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the splitting-type criterion; succeeds iff some prime is admissible.
    WhbCheck {
        path: PathBuf,
        /// Check a single prime instead of all primes up to --pmax.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_P_MAX)]
        pmax: u64,
        #[arg(long)]
        json: bool,
    },
    /// Build the fan of P(O + O(E_1) + ... + O(E_r)) over a base fan.
    BundleBuild {
        /// Base fan file.
        base: PathBuf,
        /// Each summand is an inline JSON array such as [1,0,0] or a divisor file.
        #[arg(required = true)]
        summands: Vec<String>,
        /// Where to write the total-space fan; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a bundle file usable by smooth-check.
        #[arg(long)]
        bundle_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Homogeneity, wildness and smoothness of a hypersurface in Cox coordinates.
    SmoothCheck {
        /// A bundle file (wildness is checked too) or a plain fan file.
        geometry: PathBuf,
        /// Equation file (JSON or text) or the equation text itself.
        equation: String,
        /// Characteristic for text equations.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Field order for the finite-field search; defaults to the characteristic.
        #[arg(long)]
        q: Option<u64>,
        /// Maximal number of points per chart in the finite-field search.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        q_budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in regression checks and print a pass/fail table.
    Reproduce {
        #[arg(long, value_parser = parse_section)]
        section: Option<Section>,
        #[arg(long)]
        json: bool,
    },
    /// Named fans, bundles and equations.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List {
        #[arg(long)]
        json: bool,
    },
    Get {
        name: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long, value_enum, default_value_t = Part::Fan)]
        part: Part,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    /// The fan (the total space for bundles).
    Fan,
    /// The bundle file (bundles only).
    Bundle,
    /// The equation file (bundles only).
    Equation,
    /// The expected primitive relations, one per line.
    Relations,
}

fn parse_section(s: &str) -> Result<Section, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What every command produces: an echo of the invocation, the structured
/// result, a human-readable rendering and the overall verdict.
#[derive(Serialize)]
struct Report {
    command: String,
    result: Value,
    passed: bool,
    #[serde(skip)]
    text: String,
}

impl Report {
    fn print(&self, as_json: bool) -> CliResult<()> {
        if as_json {
            let out = serde_json::to_string_pretty(self).map_err(|e| CliError(e.to_string()))?;
            stdout(&format!("{out}\n"))
        } else {
            stdout(&self.text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(cli, echo) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, echo: String) -> CliResult<bool> {
    let threads = cli.threads.max(1);
    let (report, as_json) = match cli.command {
        Command::FanInfo { path, json } => (fan_info(&path, echo)?, json),
        Command::Relations { path, json } => (relations(&path, echo)?, json),
        Command::WhbCheck { path, p, pmax, json } => (whb_check(&path, p, pmax, echo)?, json),
        Command::BundleBuild { base, summands, output, bundle_out, json } => {
            (bundle_build(&base, &summands, output.as_deref(), bundle_out.as_deref(), json, echo)?, json)
        }
        Command::SmoothCheck { geometry, equation, p, q, q_budget, json } => {
            (smooth_check(&geometry, &equation, p, q, q_budget, threads, echo)?, json)
        }
        Command::Reproduce { section, json } => {
            let r = reproduce(section)?;
            let report = Report {
                command: echo,
                result: to_value(&r)?,
                passed: r.passed(),
                text: r.table(),
            };
            (report, json)
        }
        Command::Catalog { action: CatalogCommand::List { json } } => (catalog_list(echo)?, json),
        Command::Catalog { action: CatalogCommand::Get { name, d, a, b, alpha, part, output } } => {
            catalog_get(&name, d, a, b, alpha, part, output.as_deref())?;
            return Ok(true);
        }
    };
    report.print(as_json)?;
    Ok(report.passed)
}

fn to_value<T: Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| CliError(e.to_string()))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) -> CliResult<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError(e.to_string())),
        _ => Ok(()),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, format!("{contents}\n")).map_err(|e| CliError(format!("{}: {e}", p.display()))),
        None => stdout(&format!("{contents}\n")),
    }
}

fn load_fan(path: &Path) -> CliResult<Fan> {
    Fan::from_json(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

/// A validated fan; an invalid one is reported as a failed check.
fn load_valid_fan(path: &Path, echo: &str) -> CliResult<Result<Fan, Report>> {
    let fan = load_fan(path)?;
    let v = fan.validate();
    if v.passed() {
        return Ok(Ok(fan));
    }
    Ok(Err(Report {
        command: echo.to_string(),
        result: json!({ "valid": false, "validation": to_value(&v)? }),
        passed: false,
        text: format!("invalid fan: {}\n", v.summary()),
    }))
}

fn show_class(c: &DivisorClass) -> String {
    let parts: Vec<String> = c.coords.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn fan_info(path: &Path, echo: String) -> CliResult<Report> {
    let fan = load_fan(path)?;
    let v = fan.validate();
    let rho = fan.num_rays().saturating_sub(fan.dim());
    let text = format!(
        "{}, d={}, ρ={rho}\nrays: {}\nmaximal cones: {}\n",
        v.summary(),
        fan.dim(),
        fan.num_rays(),
        fan.max_cones().len()
    );
    Ok(Report {
        command: echo,
        result: json!({
            "dim": fan.dim(),
            "picard_number": rho,
            "num_rays": fan.num_rays(),
            "num_max_cones": fan.max_cones().len(),
            "valid": v.passed(),
            "validation": to_value(&v)?,
        }),
        passed: v.passed(),
        text,
    })
}

#[derive(Serialize)]
struct RelationLine {
    relation: String,
    #[serde(flatten)]
    record: RelationRecord,
}

fn relations(path: &Path, echo: String) -> CliResult<Report> {
    let fan = match load_valid_fan(path, &echo)? {
        Ok(f) => f,
        Err(report) => return Ok(report),
    };
    let rels = primitive_relations(&fan)?;
    let records = relation_records(&rels)?;
    let fano = rels.iter().all(|r| r.degree > 0.into());
    let mut text = String::new();
    let width = rels.iter().map(|r| r.to_string().len()).max().unwrap_or(0);
    let mut lines = Vec::new();
    for (r, rec) in rels.iter().zip(records) {
        let mut flags = String::new();
        if r.extremal {
            flags.push_str("  extremal");
        }
        if rec.degree <= 0 {
            flags.push_str("  non-positive degree");
        }
        let _ = writeln!(text, "{:<width$}  degree {}{flags}", r.to_string(), rec.degree);
        lines.push(RelationLine { relation: r.to_string(), record: rec });
    }
    let _ = writeln!(text, "{} relations, Fano: {}", lines.len(), if fano { "yes" } else { "no" });
    Ok(Report {
        command: echo,
        result: json!({ "relations": to_value(&lines)?, "fano": fano }),
        passed: true,
        text,
    })
}

fn whb_check(path: &Path, p: Option<u64>, pmax: u64, echo: String) -> CliResult<Report> {
    let fan = match load_valid_fan(path, &echo)? {
        Ok(f) => f,
        Err(report) => return Ok(report),
    };
    let primes = match p {
        Some(p) if !is_prime(p) => return fail(format!("{p} is not prime")),
        Some(p) => vec![p],
        None => primes_up_to(pmax),
    };
    let rels = primitive_relations(&fan)?;
    let verdicts: Vec<_> = primes.iter().map(|&p| verdict_for_relations(&rels, fan.dim(), p)).collect();
    let admissible: Vec<u64> = verdicts.iter().filter(|v| v.admissible).map(|v| v.prime).collect();
    let mut text = String::new();
    for v in &verdicts {
        let failing: Vec<String> = rels
            .iter()
            .zip(&v.relations)
            .filter(|(_, rv)| rv.extremal && !rv.passes())
            .map(|(r, _)| r.to_string())
            .collect();
        if v.admissible {
            let _ = writeln!(text, "p={}: admissible", v.prime);
        } else {
            let _ = writeln!(text, "p={}: not admissible, failing {}", v.prime, failing.join(", "));
        }
    }
    let shown: Vec<String> = admissible.iter().map(u64::to_string).collect();
    let _ = writeln!(text, "admissible primes: {{{}}}", shown.join(","));
    let fano = rels.iter().all(|r| r.degree > 0.into());
    let classification = if fano {
        let c = classify_fano(&fan, pmax.max(p.unwrap_or(0)))?;
        let _ = writeln!(text, "Fano case: {}", describe_case(&c.case));
        Some(c)
    } else {
        let _ = writeln!(text, "not Fano");
        None
    };
    Ok(Report {
        command: echo,
        result: json!({
            "verdicts": to_value(&verdicts)?,
            "admissible_primes": admissible,
            "fano_classification": to_value(&classification)?,
        }),
        passed: !admissible.is_empty(),
        text,
    })
}

fn describe_case(case: &FanoCase) -> String {
    match case {
        FanoCase::ProjectiveSpace => "projective space".into(),
        FanoCase::ProductOfLines => "product of projective lines".into(),
        FanoCase::OddTwistBundle { a } => format!("P(O + O({})) over projective space", 2 * a - 1),
        FanoCase::SmallContractions => "extremal contractions are P^1-bundles or small".into(),
        FanoCase::Inadmissible { reason } => format!("inadmissible ({reason})"),
        FanoCase::Unclassified { reason } => format!("unclassified ({reason})"),
    }
}

fn parse_summand(arg: &str) -> CliResult<TorusDivisor> {
    if arg.trim_start().starts_with('[') {
        return TorusDivisor::from_json(arg).map_err(|e| CliError(format!("summand {arg}: {e}")));
    }
    let path = Path::new(arg);
    TorusDivisor::from_json(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn bundle_build(
    base: &Path,
    summands: &[String],
    output: Option<&Path>,
    bundle_out: Option<&Path>,
    as_json: bool,
    echo: String,
) -> CliResult<Report> {
    let base_fan = load_fan(base)?;
    let summands = summands.iter().map(|s| parse_summand(s)).collect::<CliResult<Vec<_>>>()?;
    let spec = BundleSpec::new(base_fan, summands)?;
    let t = projectivize(&spec)?;
    let v = t.fan.validate();
    let fan_json = t.fan.to_json()?;
    if let Some(path) = bundle_out {
        let file = spec.to_file()?;
        write_out(Some(path), &serde_json::to_string_pretty(&file).map_err(|e| CliError(e.to_string()))?)?;
    }
    let names: Vec<String> = (0..t.fan.num_rays()).map(|i| t.ray_name(i)).collect();
    let mut map = String::new();
    for (i, name) in names.iter().enumerate() {
        let coords: Vec<String> = t.fan.ray(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(map, "{i:>3}  {name:<5}  ({})", coords.join(","));
    }
    let summary = format!(
        "total space: {}, d={}, {} rays, {} maximal cones\n",
        v.summary(),
        t.fan.dim(),
        t.fan.num_rays(),
        t.fan.max_cones().len()
    );
    // Without -o the fan itself goes to stdout, so the map goes to stderr.
    let text = match output {
        Some(path) => {
            write_out(Some(path), &fan_json)?;
            format!("{summary}{map}wrote {}\n", path.display())
        }
        None if !as_json => {
            eprint!("{summary}{map}");
            format!("{fan_json}\n")
        }
        None => String::new(),
    };
    let fan_value: Value = serde_json::from_str(&fan_json).map_err(|e| CliError(e.to_string()))?;
    Ok(Report {
        command: echo,
        result: json!({ "valid": v.passed(), "ray_names": names, "fan": fan_value }),
        passed: v.passed(),
        text,
    })
}

/// A bundle file yields the total space with its ray naming; anything else
/// is read as a plain fan.
fn load_geometry(path: &Path) -> CliResult<(Fan, Option<TotalSpaceFan>)> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    if value.get("summands").is_some() {
        let file: BundleFile =
            serde_json::from_value(value).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let spec = file.resolve(path.parent())?;
        let t = projectivize(&spec)?;
        return Ok((t.fan.clone(), Some(t)));
    }
    Ok((Fan::from_json(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?, None))
}

fn load_equation(arg: &str, fan: &Fan, bundle: Option<&TotalSpaceFan>, p: u64) -> CliResult<CoxForm> {
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    if text.trim_start().starts_with('{') {
        return Ok(CoxForm::from_json(&text, fan.num_rays())?);
    }
    let form = match bundle {
        Some(t) => CoxForm::parse_on_bundle(t, text.trim(), p)?,
        None => CoxForm::parse_on_fan(fan, text.trim(), p)?,
    };
    Ok(form)
}

fn smooth_check(
    geometry: &Path,
    equation: &str,
    p: u64,
    q: Option<u64>,
    budget: u128,
    threads: usize,
    echo: String,
) -> CliResult<Report> {
    let (fan, bundle) = load_geometry(geometry)?;
    let v = fan.validate();
    if !v.passed() {
        return Ok(Report {
            command: echo,
            result: json!({ "valid": false, "validation": to_value(&v)? }),
            passed: false,
            text: format!("invalid fan: {}\n", v.summary()),
        });
    }
    let form = load_equation(equation, &fan, bundle.as_ref(), p)?;
    if form.is_zero() {
        return fail("the equation is zero");
    }
    let name = |v: usize| match &bundle {
        Some(t) => t.variable_name(v),
        None => format!("X{}", v + 1),
    };
    let mut text = format!("equation: {} over F_{}\n", form.display_with(name), form.char());

    let Some(class) = is_homogeneous(&fan, &form)? else {
        text.push_str("homogeneous: no\n");
        return Ok(Report {
            command: echo,
            result: json!({ "homogeneous": false }),
            passed: false,
            text,
        });
    };
    let _ = writeln!(text, "homogeneous: yes, class {}", show_class(&class));

    let wild = match &bundle {
        Some(t) => {
            let w = is_wild_fiberwise(t, &form, form.char())?;
            let line = match &w {
                WildnessVerdict::Wild => "wild: yes".to_string(),
                WildnessVerdict::NotWild { reason } => format!("wild: no ({reason})"),
                WildnessVerdict::Undecided { reason } => format!("wild: undecided ({reason})"),
            };
            let _ = writeln!(text, "{line}");
            Some(w)
        }
        None => None,
    };

    let verdict = decide_smooth_monomial_partials(&fan, &form)?;
    match &verdict.outcome {
        SmoothnessOutcome::Smooth => text.push_str("smooth: yes (combinatorial)\n"),
        SmoothnessOutcome::Singular { witness } => {
            let z: Vec<String> = witness.vanishing_set.iter().map(|&v| name(v)).collect();
            let ok = verify_vanishing_witness(&fan, &form, witness);
            let _ = writeln!(
                text,
                "smooth: no (combinatorial), singular where {{{}}} vanish, witness {}",
                z.join(","),
                if ok { "verified" } else { "NOT verified" }
            );
        }
        SmoothnessOutcome::Undecided { reason } => {
            let _ = writeln!(text, "smooth: undecided by the combinatorial test ({reason})");
        }
    }

    // Finite-field cross-check whenever the combinatorial answer is not "smooth".
    let mut search = Value::Null;
    let mut found_point = false;
    if !verdict.is_smooth() {
        let q = q.unwrap_or(form.char());
        match singular_point_search_threads(&fan, &form, q, budget, threads) {
            Ok(Some(point)) => {
                found_point = true;
                let values: Vec<String> = point.values.iter().map(u16::to_string).collect();
                let _ = writeln!(
                    text,
                    "F_{q} search: singular point on chart {} at ({})",
                    point.chart,
                    values.join(",")
                );
                search = json!({ "q": q, "point": to_value(&point)? });
            }
            Ok(None) => {
                let _ = writeln!(text, "F_{q} search: no singular point");
                search = json!({ "q": q, "point": null });
            }
            Err(Error::Budget { needed, budget }) => {
                let _ = writeln!(text, "F_{q} search: skipped, {needed} points per chart exceeds budget {budget}");
                search = json!({ "q": q, "skipped": format!("needs {needed} points per chart, budget {budget}") });
            }
            Err(e) => return Err(e.into()),
        }
    }

    let smooth = verdict.is_smooth();
    let status = if smooth {
        "smooth"
    } else if verdict.is_singular() || found_point {
        "singular"
    } else {
        "undecided"
    };
    let passed = smooth && wild.as_ref().is_none_or(WildnessVerdict::is_wild);
    let _ = writeln!(text, "result: {status}{}", if passed { "" } else { ", check failed" });
    Ok(Report {
        command: echo,
        result: json!({
            "homogeneous": true,
            "class": show_class(&class),
            "wildness": to_value(&wild)?,
            "smoothness": to_value(&verdict)?,
            "field_search": search,
            "status": status,
        }),
        passed,
        text,
    })
}

fn catalog_list(echo: String) -> CliResult<Report> {
    let mut text = String::from("fans:\n");
    for (name, about) in VARIETY_NAMES {
        let _ = writeln!(text, "  {name:<18} {about}");
    }
    text.push_str("bundles:\n");
    for (name, about) in BUNDLE_NAMES {
        let _ = writeln!(text, "  {name:<18} {about}");
    }
    let entries = |list: &[(&str, &str)]| -> Vec<Value> {
        list.iter().map(|(n, a)| json!({ "name": n, "parameters": a })).collect()
    };
    Ok(Report {
        command: echo,
        result: json!({ "fans": entries(VARIETY_NAMES), "bundles": entries(BUNDLE_NAMES) }),
        passed: true,
        text,
    })
}

fn catalog_get(
    name: &str,
    d: Option<usize>,
    a: Option<u64>,
    b: Option<u64>,
    alpha: Option<u64>,
    part: Part,
    output: Option<&Path>,
) -> CliResult<()> {
    let json_err = |e: serde_json::Error| CliError(e.to_string());
    if VARIETY_NAMES.iter().any(|(n, _)| *n == name) {
        let variety = Variety::from_name(name, d, a, b, alpha)?;
        let contents = match part {
            Part::Fan => variety.fan()?.to_json()?,
            Part::Relations => variety.printed_relations().join("\n"),
            Part::Bundle | Part::Equation => return fail(format!("{name} is a fan, not a bundle")),
        };
        return write_out(output, &contents);
    }
    if BUNDLE_NAMES.iter().any(|(n, _)| *n == name) {
        let bundle = construction(BundleId::from_name(name, d, a, b)?)?;
        let t = bundle.total_space()?;
        let contents = match part {
            Part::Fan => t.fan.to_json()?,
            Part::Bundle => serde_json::to_string_pretty(&bundle.spec.to_file()?).map_err(json_err)?,
            Part::Equation => CoxForm::parse_on_bundle(&t, &bundle.equation, bundle.p)?.to_json()?,
            Part::Relations => bundle.printed_relations.join("\n"),
        };
        return write_out(output, &contents);
    }
    fail(format!("unknown catalog entry {name:?}; see `catalog list`"))
}
