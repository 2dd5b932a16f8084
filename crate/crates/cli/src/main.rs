//! `bsato`: exact b-function computations from the command line.
//!
//! Polynomials are read from `-f`, `--file`, or stdin in the explicit-`*`
//! grammar (`x^3 + 2*x*y^7`). Every rational in the output is exact; with
//! `--json` the result is a single object with fields `input`, `vars`,
//! `kind`, `roots`, `dims`, `milnor`, `diagnostics` (plus command-specific
//! extras such as `generators` or `samples`).

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bsato_core::{
    ann_fs_under, certify_root_under, cohomology_solution_space, find_entry,
    global_bfunction_under, global_reduced_bfunction_under, load_catalog,
    local_bfunction_swh_under, local_bfunction_via_support_under, milnor_number, parse_poly,
    parse_rat, poincare_polynomial, verify_entry, wh_bfunction_roots, BaseOrder, Block, Error,
    MonomialOrderSpec, MultiPoly, Rat, Result, RootList, SampleStatus, UniPoly, VarSet,
    VerifySettings, WeightSystem, WeylRing,
};
use bsato_core::{GroebnerConfig, SampleResult};
use num_traits::ToPrimitive;

#[derive(Parser)]
#[command(
    name = "bsato",
    version,
    about = "Exact Bernstein-Sato (b-function) computations for isolated hypersurface singularities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PolyInput {
    /// Comma-separated variable names, e.g. x,y,z
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    /// Polynomial text
    #[arg(short = 'f', long = "poly", value_name = "POLY")]
    poly: Option<String>,
    /// Read the polynomial from a file (stdin if neither -f nor --file)
    #[arg(long, conflicts_with = "poly", value_name = "PATH")]
    file: Option<PathBuf>,
    /// Emit one JSON object instead of text
    #[arg(long)]
    json: bool,
    /// Block order, e.g. "dt > d:deglex > x:deglex:z,y,x > s"
    #[arg(long, value_name = "SPEC")]
    order: Option<String>,
}

#[derive(Args)]
struct WeightInput {
    /// Weighted degree d of the initial part
    #[arg(long, value_name = "D")]
    wdeg: u64,
    /// Comma-separated weights w1,...,wn
    #[arg(long, value_delimiter = ',', required = true, value_name = "W")]
    weights: Vec<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a generating set of Ann(f^s), the annihilator of f^s in D[s]
    Ann(PolyInput),
    /// Roots of the global b-function, with multiplicity
    Global(PolyInput),
    /// Roots of the reduced global b-function b(s)/(s+1)
    GlobalReduced(PolyInput),
    /// Roots of the local b-function at the origin (support-test path)
    Local {
        #[command(flatten)]
        input: PolyInput,
        /// Degree cap for local-cohomology solves
        #[arg(long, default_value_t = 64)]
        degree_cap: u32,
    },
    /// Local b-function of a semi-weighted homogeneous polynomial, with
    /// solution-space dimensions
    LocalSwh {
        #[command(flatten)]
        input: PolyInput,
        #[command(flatten)]
        weights: WeightInput,
        /// Shift depth for candidate roots
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 64)]
        degree_cap: u32,
    },
    /// Basis of the solution space attached to one candidate root
    Cohom {
        #[command(flatten)]
        input: PolyInput,
        /// Candidate root, e.g. -4/3
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value_t = 64)]
        degree_cap: u32,
    },
    /// Milnor number at the origin
    Milnor {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 64)]
        degree_cap: u32,
    },
    /// Poincare polynomial of a weight system and the derived root set
    Poincare {
        #[command(flatten)]
        weights: WeightInput,
        #[arg(long)]
        json: bool,
    },
    /// Recompute a catalog entry's tables at its stored sample points
    Verify {
        /// Entry name, e.g. E18, or "all"
        #[arg(long, value_name = "NAME")]
        entry: String,
        /// Restrict to one stratum index
        #[arg(long, value_name = "I")]
        stratum: Option<usize>,
        /// Worker threads across sample points
        #[arg(long, default_value_t = 1, value_name = "N")]
        jobs: usize,
        /// Wall-clock budget in seconds for each entry
        #[arg(long, value_name = "SECS")]
        budget: Option<u64>,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 64)]
        degree_cap: u32,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> std::process::ExitCode {
    // die quietly when a downstream pipe closes early (e.g. `bsato ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_poly(input: &PolyInput) -> Result<(String, VarSet, MultiPoly)> {
    let text = if let Some(p) = &input.poly {
        p.clone()
    } else if let Some(path) = &input.file {
        std::fs::read_to_string(path).map_err(|e| {
            Error::precondition(format!("cannot read {}: {e}", path.display()))
        })?
    } else {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::precondition(format!("cannot read stdin: {e}")))?;
        buf
    };
    let text = text.trim().to_string();
    let vars = VarSet::new(input.vars.iter().map(String::as_str));
    let f = parse_poly(&text, &vars)?;
    Ok((text, vars, f))
}

/// Block-order spec: blocks separated by `>`, highest first. Each block is
/// `group[:base[:priority]]` with group one of dt, d, x, s; base one of
/// lex, deglex, degrevlex (default deglex); priority a comma list of
/// variable names (`x` group) or d-names like dx (`d` group).
fn parse_order_spec(text: &str, ring: &WeylRing) -> Result<MonomialOrderSpec> {
    let bad = |msg: String| Error::precondition(format!("--order: {msg}"));
    let n = ring.nvars();
    let mut blocks = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for chunk in text.split('>') {
        let mut parts = chunk.trim().splitn(3, ':').map(str::trim);
        let group = parts.next().unwrap_or("");
        let base = match parts.next() {
            None | Some("") => BaseOrder::DegLex,
            Some("lex") => BaseOrder::Lex,
            Some("deglex") => BaseOrder::DegLex,
            Some("degrevlex") => BaseOrder::DegRevLex,
            Some(other) => return Err(bad(format!("unknown base order '{other}'"))),
        };
        let priority = parts.next();
        if seen.contains(&group) {
            return Err(bad(format!("group '{group}' listed twice")));
        }
        let slots: Vec<usize> = match group {
            "dt" => vec![ring.t_slot()],
            "s" => vec![ring.s_slot()],
            "x" => match priority {
                None => (0..n).map(|i| ring.x_slot(i)).collect(),
                Some(list) => resolve_names(list, ring, false)?,
            },
            "d" => match priority {
                None => (0..n).map(|i| ring.d_slot(i)).collect(),
                Some(list) => resolve_names(list, ring, true)?,
            },
            other => return Err(bad(format!("unknown group '{other}'"))),
        };
        if priority.is_some() && (group == "dt" || group == "s") {
            return Err(bad(format!("group '{group}' takes no priority list")));
        }
        seen.push(match group {
            "dt" => "dt",
            "s" => "s",
            "x" => "x",
            _ => "d",
        });
        blocks.push(Block { vars: slots, base });
    }
    for required in ["dt", "d", "x", "s"] {
        if !seen.contains(&required) {
            return Err(bad(format!("group '{required}' missing")));
        }
    }
    MonomialOrderSpec::new(ring.width(), blocks)
}

fn resolve_names(list: &str, ring: &WeylRing, d_group: bool) -> Result<Vec<usize>> {
    let mut slots = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let base_name = if d_group {
            name.strip_prefix('d').ok_or_else(|| {
                Error::precondition(format!("--order: '{name}' is not a d-variable"))
            })?
        } else {
            name
        };
        let i = ring.xvars().index_of(base_name).ok_or_else(|| {
            Error::precondition(format!("--order: unknown variable '{name}'"))
        })?;
        slots.push(if d_group { ring.d_slot(i) } else { ring.x_slot(i) });
    }
    Ok(slots)
}

fn order_for(input: &PolyInput, ring: &WeylRing) -> Result<MonomialOrderSpec> {
    match &input.order {
        Some(spec) => parse_order_spec(spec, ring),
        None => Ok(ring.bf_order()),
    }
}

fn rat_json(r: &Rat) -> Result<Value> {
    let num = r.numer().to_i64().ok_or_else(|| {
        Error::inconsistency(format!("rational {r} does not fit in 64 bits"))
    })?;
    let den = r.denom().to_i64().ok_or_else(|| {
        Error::inconsistency(format!("rational {r} does not fit in 64 bits"))
    })?;
    Ok(json!({ "num": num, "den": den }))
}

fn roots_json(roots: &RootList) -> Result<Value> {
    Ok(Value::Array(
        roots.iter().map(rat_json).collect::<Result<Vec<_>>>()?,
    ))
}

fn dims_json(dims: &BTreeMap<Rat, usize>) -> Result<Value> {
    let mut out = Vec::new();
    for (r, d) in dims {
        let mut obj = rat_json(r)?;
        obj.as_object_mut()
            .unwrap()
            .insert("dim".into(), json!(d));
        out.push(obj);
    }
    Ok(Value::Array(out))
}

/// The seven schema fields every JSON output carries.
fn base_json(input: &str, vars: &[String], kind: &str) -> Value {
    json!({
        "input": input,
        "vars": vars,
        "kind": kind,
        "roots": Value::Null,
        "dims": Value::Null,
        "milnor": Value::Null,
        "diagnostics": Vec::<String>::new(),
    })
}

fn fmt_rat_list(roots: &RootList) -> String {
    roots.to_string()
}

fn unipoly_in(p: &UniPoly, var: &str) -> String {
    p.to_string().replace('s', var)
}

fn emit(json_mode: bool, obj: Value, text: impl FnOnce()) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        text();
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Ann(input) => {
            let (text, vars, f) = read_poly(&input)?;
            let ring = WeylRing::new(&vars)?;
            let cfg = GroebnerConfig::default();
            let gens = match &input.order {
                // default path: reduced basis under the dt-elimination order,
                // restricted to the D[s] generators
                None => bsato_core::ann_fs(&ring, &f, &cfg)?,
                Some(spec) => {
                    let ord = parse_order_spec(spec, &ring)?;
                    ann_fs_under(&ring, &f, &ord, &cfg)?.generators
                }
            };
            let strings: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            let mut obj = base_json(&text, vars.names(), "ann");
            obj["generators"] = json!(strings);
            emit(input.json, obj, || {
                for s in &strings {
                    println!("{s}");
                }
            });
            Ok(0)
        }
        Cmd::Global(input) => {
            let (text, vars, f) = read_poly(&input)?;
            let ring = WeylRing::new(&vars)?;
            let ord = order_for(&input, &ring)?;
            let roots = global_bfunction_under(&f, &ord, &GroebnerConfig::default())?;
            let mut obj = base_json(&text, vars.names(), "global");
            obj["roots"] = roots_json(&roots)?;
            emit(input.json, obj, || println!("roots: {}", fmt_rat_list(&roots)));
            Ok(0)
        }
        Cmd::GlobalReduced(input) => {
            let (text, vars, f) = read_poly(&input)?;
            let ring = WeylRing::new(&vars)?;
            let ord = order_for(&input, &ring)?;
            let roots = global_reduced_bfunction_under(&f, &ord, &GroebnerConfig::default())?;
            let mut obj = base_json(&text, vars.names(), "global-reduced");
            obj["roots"] = roots_json(&roots)?;
            emit(input.json, obj, || println!("roots: {}", fmt_rat_list(&roots)));
            Ok(0)
        }
        Cmd::Local { input, degree_cap } => {
            let (text, vars, f) = read_poly(&input)?;
            let ring = WeylRing::new(&vars)?;
            let ord = order_for(&input, &ring)?;
            let roots = local_bfunction_via_support_under(
                &f,
                &ord,
                &GroebnerConfig::default(),
                degree_cap,
            )?;
            let mut obj = base_json(&text, vars.names(), "local");
            obj["roots"] = roots_json(&roots)?;
            emit(input.json, obj, || println!("roots: {}", fmt_rat_list(&roots)));
            Ok(0)
        }
        Cmd::LocalSwh {
            input,
            weights,
            kmax,
            degree_cap,
        } => {
            let (text, vars, f) = read_poly(&input)?;
            let ws = WeightSystem::new(weights.wdeg, weights.weights)?;
            let ring = WeylRing::new(&vars)?;
            let ord = order_for(&input, &ring)?;
            let result = local_bfunction_swh_under(
                &f,
                &ws,
                kmax,
                &ord,
                &GroebnerConfig::default(),
                degree_cap,
            )?;
            let mut obj = base_json(&text, vars.names(), "local-swh");
            obj["roots"] = roots_json(&result.roots)?;
            obj["dims"] = dims_json(&result.dims)?;
            obj["milnor"] = json!(result.milnor);
            emit(input.json, obj, || {
                println!("roots: {}", fmt_rat_list(&result.roots));
                let dims: Vec<String> = result
                    .dims
                    .iter()
                    .map(|(r, d)| format!("{} -> {}", bsato_core::fmt_rat(r), d))
                    .collect();
                println!("dims: {}", dims.join(", "));
                println!("milnor: {}", result.milnor);
            });
            Ok(0)
        }
        Cmd::Cohom {
            input,
            gamma,
            degree_cap,
        } => {
            let (text, vars, f) = read_poly(&input)?;
            let gamma: Rat = parse_rat(&gamma)?;
            let ring = WeylRing::new(&vars)?;
            let ord = order_for(&input, &ring)?;
            let cfg = GroebnerConfig::default();
            let ann = bsato_core::ann_fs(&ring, &f, &cfg)?;
            let cert = certify_root_under(&ann, &f, &gamma, &ord, &cfg)?;
            let mut diagnostics = Vec::new();
            let mut dims = BTreeMap::new();
            let classes: Vec<String>;
            if !cert.is_factor {
                diagnostics
                    .push("gamma is not a root of the global b-function".to_string());
                classes = Vec::new();
                dims.insert(gamma.clone(), 0);
            } else if !cert.origin_in_support {
                diagnostics.push(
                    "origin lies outside the support; the root is not local".to_string(),
                );
                classes = Vec::new();
                dims.insert(gamma.clone(), 0);
            } else {
                let basis = cohomology_solution_space(&f, &gamma, &cert, degree_cap)?;
                dims.insert(gamma.clone(), basis.dim());
                classes = basis.classes.iter().map(|c| c.to_string()).collect();
            }
            let mut obj = base_json(&text, vars.names(), "cohom");
            obj["dims"] = dims_json(&dims)?;
            obj["classes"] = json!(classes);
            obj["diagnostics"] = json!(diagnostics);
            emit(input.json, obj, || {
                for d in &diagnostics {
                    println!("note: {d}");
                }
                println!("gamma: {}", bsato_core::fmt_rat(&gamma));
                println!("dim: {}", dims.values().next().copied().unwrap_or(0));
                for c in &classes {
                    println!("{c}");
                }
            });
            Ok(0)
        }
        Cmd::Milnor { input, degree_cap } => {
            let (text, vars, f) = read_poly(&input)?;
            let mu = milnor_number(&f, degree_cap)?;
            let mut obj = base_json(&text, vars.names(), "milnor");
            obj["milnor"] = json!(mu);
            emit(input.json, obj, || println!("milnor: {mu}"));
            Ok(0)
        }
        Cmd::Poincare { weights, json } => {
            let ws = WeightSystem::new(weights.wdeg, weights.weights)?;
            let p = poincare_polynomial(&ws)?;
            let mu = p.eval(&bsato_core::rat_int(1));
            let roots = wh_bfunction_roots(&ws)?;
            let input_text = format!(
                "({}; {})",
                ws.d,
                ws.w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            );
            let mut obj = base_json(&input_text, &[], "poincare");
            obj["roots"] = roots_json(&roots.distinct())?;
            obj["milnor"] = json!(mu.to_integer().to_i64());
            obj["diagnostics"] = json!([format!("P(t) = {}", unipoly_in(&p, "t"))]);
            emit(json, obj, || {
                println!("P(t) = {}", unipoly_in(&p, "t"));
                println!("P(1) = {}", bsato_core::fmt_rat(&mu));
                println!("roots: {}", fmt_rat_list(&roots.distinct()));
            });
            Ok(0)
        }
        Cmd::Verify {
            entry,
            stratum,
            jobs,
            budget,
            kmax,
            degree_cap,
            json,
        } => {
            let catalog = load_catalog()?;
            let targets: Vec<&bsato_core::CatalogEntry> = if entry.eq_ignore_ascii_case("all") {
                catalog.iter().collect()
            } else {
                let known = || {
                    catalog
                        .iter()
                        .map(|e| e.name.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                vec![find_entry(&catalog, &entry).ok_or_else(|| {
                    Error::precondition(format!(
                        "unknown entry '{entry}'; catalog has: {}",
                        known()
                    ))
                })?]
            };
            let settings = VerifySettings {
                kmax,
                degree_cap,
                budget: budget.map(Duration::from_secs),
                jobs,
                stratum,
            };
            let mut worst = 0u8;
            let mut reports = Vec::new();
            for target in targets {
                let report = verify_entry(target, &settings)?;
                worst = worst.max(report_exit_code(&report));
                reports.push(report);
            }
            if json {
                let objs: Vec<Value> = reports
                    .iter()
                    .map(report_json)
                    .collect::<Result<Vec<_>>>()?;
                let out = if objs.len() == 1 {
                    objs.into_iter().next().unwrap()
                } else {
                    Value::Array(objs)
                };
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                for report in &reports {
                    print!("{report}");
                    println!(
                        "{}: {}",
                        report.entry,
                        if report.passed() { "PASS" } else { "FAIL" }
                    );
                }
            }
            Ok(worst)
        }
    }
}

/// Exit policy for verification: mismatches trump resource failures, which
/// trump success.
fn report_exit_code(report: &bsato_core::VerificationReport) -> u8 {
    let mut code = 0u8;
    if !report.wh_row_matches {
        return 5;
    }
    for s in &report.samples {
        match &s.status {
            SampleStatus::Pass { .. } => {}
            SampleStatus::Failed { error } if error.contains("resource cap") => {
                code = code.max(4)
            }
            _ => return 5,
        }
    }
    code
}

fn sample_json(s: &SampleResult) -> Result<Value> {
    let point = Value::Array(s.point.iter().map(rat_json).collect::<Result<Vec<_>>>()?);
    let (status, detail, roots) = match &s.status {
        SampleStatus::Pass { roots, .. } => ("pass", String::new(), Some(roots)),
        SampleStatus::RootsDiffer { computed, expected } => (
            "roots-differ",
            format!("computed {computed}, expected {expected}"),
            Some(computed),
        ),
        SampleStatus::DimsDiffer { detail } => ("dims-differ", detail.clone(), None),
        SampleStatus::MilnorDiffers { computed, expected } => (
            "milnor-differs",
            format!("computed {computed}, expected {expected}"),
            None,
        ),
        SampleStatus::Failed { error } => ("failed", error.clone(), None),
    };
    Ok(json!({
        "stratum": s.stratum,
        "label": s.label,
        "point": point,
        "status": status,
        "detail": detail,
        "roots": match roots {
            Some(r) => roots_json(r)?,
            None => Value::Null,
        },
        "seconds": s.elapsed.as_secs_f64(),
    }))
}

fn report_json(report: &bsato_core::VerificationReport) -> Result<Value> {
    let samples = report
        .samples
        .iter()
        .map(sample_json)
        .collect::<Result<Vec<_>>>()?;
    let mut obj = base_json(&report.entry, &[], "verify");
    obj["diagnostics"] = json!([format!(
        "wh-row arithmetic: {}",
        if report.wh_row_matches { "ok" } else { "FAIL" }
    )]);
    obj["samples"] = Value::Array(samples);
    obj["passed"] = json!(report.passed());
    Ok(obj)
}
