//! Built-in catalog of two-parameter deformation families and the
//! verification harness that recomputes their local b-functions.
//!
//! Each entry stores a polynomial template over the singularity variables
//! plus parameters `u1, u2`, a weight system for the initial part, and the
//! expected root set per parameter stratum. Roots live in the data file as
//! positive numerators over the weighted degree `d` (entry `n` means the
//! root `-n/d`). The harness specializes the template at the stored sample
//! points, runs the full local pipeline, and compares against the tables.

use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bfunction::{local_bfunction_swh, poincare_polynomial, wh_bfunction_roots};
use crate::cohomology::milnor_number;
use crate::error::{Error, Result};
use crate::groebner::GroebnerConfig;
use crate::parse::parse_poly;
use crate::poly::{MultiPoly, VarSet};
use crate::rational::{fmt_rat, parse_rat, rat, rat_int, Rat};
use crate::unipoly::RootList;
use crate::weights::{classify_swh, WeightSystem};

const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

/// One parameter stratum of a family: the locus where `vanishing` is zero
/// and `excluded` (plus the entry-level constraint) is not.
#[derive(Debug, Clone)]
pub struct StratumSpec {
    pub label: String,
    /// Polynomials in the parameters that vanish on the stratum.
    pub vanishing: Vec<MultiPoly>,
    /// Polynomials in the parameters that must not vanish.
    pub excluded: Vec<MultiPoly>,
    /// Root numerators present on this stratum beyond the shared `bst` set.
    pub extras: Vec<i64>,
    /// Solution-space dimensions pinned by the tables, as (root, dim).
    pub expected_dims: Vec<(Rat, usize)>,
    /// Rational sample points, each of length `params.len()`.
    pub samples: Vec<Vec<Rat>>,
    /// Marks the stratum whose root set equals that of the initial part f0.
    pub is_f0: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    /// Singularity variables.
    pub vars: VarSet,
    /// Deformation parameters, appended after `vars` in the template.
    pub params: Vec<String>,
    /// Template over `vars` then `params`.
    pub template: MultiPoly,
    pub weights: WeightSystem,
    /// Modality constraint that must be nonzero on every stratum.
    pub constraint: Option<MultiPoly>,
    /// Root numerators common to all strata.
    pub bst: Vec<i64>,
    pub strata: Vec<StratumSpec>,
    /// Data-quality note carried alongside the entry, if any.
    pub flag: Option<String>,
    /// Milnor number, which the subscript in the name also records.
    pub mu: usize,
}

impl CatalogEntry {
    /// Expected local root set on `stratum`: `bst` plus its extras, as
    /// negative rationals over the weighted degree.
    pub fn expected_roots(&self, stratum: &StratumSpec) -> RootList {
        let d = self.weights.d as i64;
        let mut roots: Vec<Rat> = self.bst.iter().map(|&n| rat(-n, d)).collect();
        roots.extend(stratum.extras.iter().map(|&n| rat(-n, d)));
        RootList::new(roots)
    }

    /// Substitutes `point` for the parameters, leaving a polynomial in the
    /// singularity variables only.
    pub fn specialize(&self, point: &[Rat]) -> Result<MultiPoly> {
        if point.len() != self.params.len() {
            return Err(Error::precondition(format!(
                "{}: sample point has {} coordinates, family has {} parameters",
                self.name,
                point.len(),
                self.params.len()
            )));
        }
        Ok(self.template.specialize_last(point))
    }

    /// Whether `point` lies on `stratum`: every `vanishing` polynomial is
    /// zero there, every `excluded` one and the constraint nonzero.
    pub fn stratum_member(&self, stratum: &StratumSpec, point: &[Rat]) -> Result<bool> {
        if point.len() != self.params.len() {
            return Err(Error::precondition(format!(
                "{}: point has {} coordinates, expected {}",
                self.name,
                point.len(),
                self.params.len()
            )));
        }
        for p in &stratum.vanishing {
            if !p.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        for p in &stratum.excluded {
            if p.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        if let Some(c) = &self.constraint {
            if c.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The unique stratum marked `f0`.
    pub fn f0_stratum(&self) -> &StratumSpec {
        self.strata
            .iter()
            .find(|s| s.is_f0)
            .expect("validated entry has an f0 stratum")
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos: line,
        msg: format!("catalog line {}: {}", line, msg.into()),
    }
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_numerators(text: &str, line: usize) -> Result<Vec<i64>> {
    split_list(text)
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| parse_err(line, format!("bad integer '{s}'")))
        })
        .collect()
}

fn parse_samples(text: &str, line: usize) -> Result<Vec<Vec<Rat>>> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| parse_err(line, format!("sample '{part}' is not parenthesized")))?;
        let coords = inner
            .split(',')
            .map(|c| parse_rat(c.trim()))
            .collect::<Result<Vec<Rat>>>()?;
        out.push(coords);
    }
    Ok(out)
}

fn parse_dims(text: &str, line: usize, d: i64) -> Result<Vec<(Rat, usize)>> {
    let mut out = Vec::new();
    for part in split_list(text) {
        let (num, dim) = part
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("dims item '{part}' is not num:dim")))?;
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad numerator '{num}'")))?;
        let k: usize = dim
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad dimension '{dim}'")))?;
        out.push((rat(-n, d), k));
    }
    Ok(out)
}

struct PendingEntry {
    name: String,
    line: usize,
    vars: Option<Vec<String>>,
    params: Option<Vec<String>>,
    template: Option<(String, usize)>,
    weights: Option<(u64, Vec<u64>)>,
    constraint: Option<(String, usize)>,
    bst: Option<Vec<i64>>,
    flag: Option<String>,
    strata: Vec<(String, usize)>,
}

fn finish_entry(p: PendingEntry) -> Result<CatalogEntry> {
    let vars_names = p
        .vars
        .ok_or_else(|| parse_err(p.line, format!("{}: missing vars", p.name)))?;
    let params = p
        .params
        .ok_or_else(|| parse_err(p.line, format!("{}: missing params", p.name)))?;
    let (d, w) = p
        .weights
        .ok_or_else(|| parse_err(p.line, format!("{}: missing weights", p.name)))?;
    let (tmpl_text, tmpl_line) = p
        .template
        .ok_or_else(|| parse_err(p.line, format!("{}: missing template", p.name)))?;
    let bst = p
        .bst
        .ok_or_else(|| parse_err(p.line, format!("{}: missing bst", p.name)))?;

    let vars = VarSet::new(vars_names.iter().map(String::as_str));
    let full = vars.extend(params.iter().map(String::as_str));
    let param_vars = VarSet::new(params.iter().map(String::as_str));

    let template =
        parse_poly(&tmpl_text, &full).map_err(|e| parse_err(tmpl_line, e.to_string()))?;
    let weights = WeightSystem::new(d, w)?;
    let constraint = match p.constraint {
        Some((text, line)) => Some(
            parse_poly(&text, &param_vars).map_err(|e| parse_err(line, e.to_string()))?,
        ),
        None => None,
    };

    let mut strata = Vec::new();
    for (text, line) in p.strata {
        strata.push(parse_stratum(&text, line, &param_vars, d as i64)?);
    }

    let digits: String = p.name.chars().filter(|c| c.is_ascii_digit()).collect();
    let mu: usize = digits
        .parse()
        .map_err(|_| parse_err(p.line, format!("{}: name carries no Milnor number", p.name)))?;

    Ok(CatalogEntry {
        name: p.name,
        vars,
        params,
        template,
        weights,
        constraint,
        bst,
        strata,
        flag: p.flag,
        mu,
    })
}

fn parse_stratum(
    text: &str,
    line: usize,
    param_vars: &VarSet,
    d: i64,
) -> Result<StratumSpec> {
    let mut fields = text.split('|').map(str::trim);
    let label = fields
        .next()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| parse_err(line, "stratum needs a label"))?
        .to_string();
    let mut spec = StratumSpec {
        label,
        vanishing: Vec::new(),
        excluded: Vec::new(),
        extras: Vec::new(),
        expected_dims: Vec::new(),
        samples: Vec::new(),
        is_f0: false,
    };
    for field in fields {
        if field == "f0" {
            spec.is_f0 = true;
            continue;
        }
        let (key, rest) = field
            .split_once(' ')
            .ok_or_else(|| parse_err(line, format!("stratum field '{field}' has no value")))?;
        match key {
            "vanishing" => {
                for s in split_list(rest) {
                    spec.vanishing.push(
                        parse_poly(&s, param_vars).map_err(|e| parse_err(line, e.to_string()))?,
                    );
                }
            }
            "excluded" => {
                for s in split_list(rest) {
                    spec.excluded.push(
                        parse_poly(&s, param_vars).map_err(|e| parse_err(line, e.to_string()))?,
                    );
                }
            }
            "extras" => spec.extras = parse_numerators(rest, line)?,
            "dims" => spec.expected_dims = parse_dims(rest, line, d)?,
            "samples" => spec.samples = parse_samples(rest, line)?,
            other => return Err(parse_err(line, format!("unknown stratum field '{other}'"))),
        }
    }
    if spec.samples.is_empty() {
        return Err(parse_err(line, "stratum has no sample points"));
    }
    Ok(spec)
}

/// Parses the embedded catalog and validates every entry.
pub fn load_catalog() -> Result<Vec<CatalogEntry>> {
    let mut entries = Vec::new();
    let mut pending: Option<PendingEntry> = None;

    for (i, raw) in CATALOG_TEXT.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = match line.split_once(' ') {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        if key == "entry" {
            if pending.is_some() {
                return Err(parse_err(lineno, "entry opened before previous end"));
            }
            if rest.is_empty() {
                return Err(parse_err(lineno, "entry needs a name"));
            }
            pending = Some(PendingEntry {
                name: rest.to_string(),
                line: lineno,
                vars: None,
                params: None,
                template: None,
                weights: None,
                constraint: None,
                bst: None,
                flag: None,
                strata: Vec::new(),
            });
            continue;
        }
        let Some(p) = pending.as_mut() else {
            return Err(parse_err(lineno, format!("'{key}' outside an entry")));
        };
        match key {
            "end" => {
                let done = pending.take().unwrap();
                entries.push(finish_entry(done)?);
            }
            "vars" => p.vars = Some(split_list(rest)),
            "params" => p.params = Some(split_list(rest)),
            "template" => p.template = Some((rest.to_string(), lineno)),
            "weights" => {
                let (dtext, wtext) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, "weights need 'd : w1, w2, ...'"))?;
                let d: u64 = dtext
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad weighted degree"))?;
                let w = parse_numerators(wtext, lineno)?
                    .into_iter()
                    .map(|x| x as u64)
                    .collect();
                p.weights = Some((d, w));
            }
            "constraint" => p.constraint = Some((rest.to_string(), lineno)),
            "bst" => p.bst = Some(parse_numerators(rest, lineno)?),
            "flag" => p.flag = Some(rest.to_string()),
            "stratum" => p.strata.push((rest.to_string(), lineno)),
            other => return Err(parse_err(lineno, format!("unknown key '{other}'"))),
        }
    }
    if let Some(p) = pending {
        return Err(parse_err(p.line, format!("{}: entry never closed", p.name)));
    }
    for e in &entries {
        validate_entry(e)?;
    }
    Ok(entries)
}

/// Structural checks that run at load time; anything failing here is a
/// defect in the data file, not in the inputs.
fn validate_entry(e: &CatalogEntry) -> Result<()> {
    let fail = |msg: String| Error::inconsistency(format!("catalog entry {}: {msg}", e.name));

    if e.vars.len() != e.weights.nvars() {
        return Err(fail("variable/weight count mismatch".into()));
    }
    let p1 = poincare_polynomial(&e.weights)?.eval(&rat_int(1));
    if p1 != rat_int(e.mu as i64) {
        return Err(fail(format!(
            "weight type gives mu = {}, name says {}",
            fmt_rat(&p1),
            e.mu
        )));
    }
    let f0_rows = e.strata.iter().filter(|s| s.is_f0).count();
    if f0_rows != 1 {
        return Err(fail(format!("{f0_rows} strata marked f0, expected exactly 1")));
    }
    let wh = wh_bfunction_roots(&e.weights)?.distinct();
    if wh != e.expected_roots(e.f0_stratum()) {
        return Err(fail("f0 stratum roots differ from weighted-homogeneous set".into()));
    }
    let n = e.vars.len() as i64;
    for s in &e.strata {
        let roots = e.expected_roots(s);
        if roots.distinct() != roots {
            return Err(fail(format!("stratum {}: duplicate roots", s.label)));
        }
        for r in roots.iter() {
            if *r >= rat_int(0) || *r <= rat_int(-n) {
                return Err(fail(format!(
                    "stratum {}: root {} outside (-{n}, 0)",
                    s.label,
                    fmt_rat(r)
                )));
            }
        }
        for (r, dim) in &s.expected_dims {
            if !roots.contains(r) {
                return Err(fail(format!(
                    "stratum {}: dim noted at {} which is not a root",
                    s.label,
                    fmt_rat(r)
                )));
            }
            if *dim == 0 {
                return Err(fail(format!("stratum {}: zero dim noted", s.label)));
            }
        }
        for pt in &s.samples {
            if !e.stratum_member(s, pt)? {
                return Err(fail(format!(
                    "stratum {}: sample ({}) is not a member",
                    s.label,
                    fmt_point(pt)
                )));
            }
            let f = e.specialize(pt)?;
            let split = classify_swh(&f, &e.weights)?;
            if !split.ok {
                return Err(fail(format!(
                    "sample ({}) does not specialize to the stored type",
                    fmt_point(pt)
                )));
            }
        }
    }
    Ok(())
}

pub fn find_entry<'a>(catalog: &'a [CatalogEntry], name: &str) -> Option<&'a CatalogEntry> {
    catalog.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

fn fmt_point(pt: &[Rat]) -> String {
    pt.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
}

/// Knobs for a verification run.
#[derive(Debug, Clone)]
pub struct VerifySettings {
    /// Shift depth when enumerating candidate roots.
    pub kmax: u32,
    /// Degree cap for the cohomology solves.
    pub degree_cap: u32,
    /// Wall-clock budget for the whole entry; individual samples that run
    /// past it surface as recorded failures, not a panic.
    pub budget: Option<Duration>,
    /// Worker threads across sample points.
    pub jobs: usize,
    /// Restrict to one stratum index.
    pub stratum: Option<usize>,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            kmax: 2,
            degree_cap: 64,
            budget: None,
            jobs: 1,
            stratum: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SampleStatus {
    Pass {
        roots: RootList,
        dims: BTreeMap<Rat, usize>,
    },
    RootsDiffer {
        computed: RootList,
        expected: RootList,
    },
    DimsDiffer {
        detail: String,
    },
    MilnorDiffers {
        computed: usize,
        expected: usize,
    },
    Failed {
        error: String,
    },
}

impl SampleStatus {
    pub fn passed(&self) -> bool {
        matches!(self, SampleStatus::Pass { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SampleResult {
    pub stratum: usize,
    pub label: String,
    pub point: Vec<Rat>,
    pub status: SampleStatus,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub entry: String,
    /// Whether the f0 stratum's stored roots match the root set computed
    /// from the weight system alone.
    pub wh_row_matches: bool,
    pub samples: Vec<SampleResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.wh_row_matches && self.samples.iter().all(|s| s.status.passed())
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} wh-row arithmetic: {}",
            self.entry,
            if self.wh_row_matches { "ok" } else { "FAIL" }
        )?;
        for s in &self.samples {
            write!(
                f,
                "{} stratum {} {} at ({}): ",
                self.entry,
                s.stratum,
                s.label,
                fmt_point(&s.point)
            )?;
            match &s.status {
                SampleStatus::Pass { roots, dims } => {
                    let total: usize = dims.values().sum();
                    writeln!(
                        f,
                        "pass, {} roots, sum of dims {} ({:.1}s)",
                        roots.len(),
                        total,
                        s.elapsed.as_secs_f64()
                    )?;
                }
                SampleStatus::RootsDiffer { computed, expected } => {
                    writeln!(f, "FAIL roots differ")?;
                    writeln!(f, "    computed {computed}")?;
                    writeln!(f, "    expected {expected}")?;
                }
                SampleStatus::DimsDiffer { detail } => {
                    writeln!(f, "FAIL dims differ: {detail}")?;
                }
                SampleStatus::MilnorDiffers { computed, expected } => {
                    writeln!(f, "FAIL milnor {computed} != {expected}")?;
                }
                SampleStatus::Failed { error } => {
                    writeln!(f, "FAIL {error}")?;
                }
            }
        }
        Ok(())
    }
}

fn check_sample(
    entry: &CatalogEntry,
    stratum_idx: usize,
    point: &[Rat],
    settings: &VerifySettings,
    deadline: Option<Instant>,
) -> SampleStatus {
    let stratum = &entry.strata[stratum_idx];
    let run = || -> Result<SampleStatus> {
        let f = entry.specialize(point)?;
        let mu = milnor_number(&f, settings.degree_cap)?;
        if mu != entry.mu {
            return Ok(SampleStatus::MilnorDiffers {
                computed: mu,
                expected: entry.mu,
            });
        }
        let cfg = GroebnerConfig {
            deadline,
            ..GroebnerConfig::default()
        };
        let result =
            local_bfunction_swh(&f, &entry.weights, settings.kmax, &cfg, settings.degree_cap)?;
        let expected = entry.expected_roots(stratum);
        if result.roots != expected {
            return Ok(SampleStatus::RootsDiffer {
                computed: result.roots,
                expected,
            });
        }
        for (root, dim) in &stratum.expected_dims {
            let got = result.dims.get(root).copied().unwrap_or(0);
            if got != *dim {
                return Ok(SampleStatus::DimsDiffer {
                    detail: format!("at {}: computed {}, table says {}", fmt_rat(root), got, dim),
                });
            }
        }
        Ok(SampleStatus::Pass {
            roots: result.roots,
            dims: result.dims,
        })
    };
    match run() {
        Ok(status) => status,
        Err(e) => SampleStatus::Failed {
            error: e.to_string(),
        },
    }
}

/// Recomputes the entry's tables at its sample points.
///
/// Per-sample failures (including resource-cap hits under `budget`) are
/// recorded in the report; only malformed settings error out.
pub fn verify_entry(entry: &CatalogEntry, settings: &VerifySettings) -> Result<VerificationReport> {
    if let Some(idx) = settings.stratum {
        if idx >= entry.strata.len() {
            return Err(Error::precondition(format!(
                "{} has {} strata, index {} is out of range",
                entry.name,
                entry.strata.len(),
                idx
            )));
        }
    }
    let wh_row_matches =
        wh_bfunction_roots(&entry.weights)?.distinct() == entry.expected_roots(entry.f0_stratum());

    let mut tasks: Vec<(usize, usize)> = Vec::new();
    for (si, stratum) in entry.strata.iter().enumerate() {
        if settings.stratum.is_some_and(|only| only != si) {
            continue;
        }
        for pi in 0..stratum.samples.len() {
            tasks.push((si, pi));
        }
    }
    let deadline = settings.budget.map(|b| Instant::now() + b);

    let results: Mutex<Vec<(usize, SampleResult)>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let workers = settings.jobs.max(1).min(tasks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::SeqCst);
                if t >= tasks.len() {
                    break;
                }
                let (si, pi) = tasks[t];
                let point = &entry.strata[si].samples[pi];
                let started = Instant::now();
                let status = check_sample(entry, si, point, settings, deadline);
                let sample = SampleResult {
                    stratum: si,
                    label: entry.strata[si].label.clone(),
                    point: point.clone(),
                    status,
                    elapsed: started.elapsed(),
                };
                results.lock().unwrap().push((t, sample));
            });
        }
    });
    let mut collected = results.into_inner().unwrap();
    collected.sort_by_key(|(t, _)| *t);

    Ok(VerificationReport {
        entry: entry.name.clone(),
        wh_row_matches,
        samples: collected.into_iter().map(|(_, s)| s).collect(),
    })
}
