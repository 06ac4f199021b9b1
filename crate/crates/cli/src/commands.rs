use crate::error::CliError;
use crate::{Command, EngineArgs, InputArgs, LimitArgs, PhiArgs, PhiChoice};
use polytriv::impossibility::WitnessSource;
use polytriv::symmetric::atlas;
use polytriv::triviality::Limits;
use polytriv::{
    check_impossibility_unanimity, check_trivial_for_n, decide_trivial, enumerate_polymorphisms, find_violation, io,
    reduction_report, EngineOptions, PhiFamily, PolymorphismTuple, Predicate, TrivialityReport, WeightSet,
};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Affirmative = 0,
    NegativeWithWitness = 1,
}

pub struct Report {
    pub status: Status,
    pub text: String,
}

fn status(affirmative: bool) -> Status {
    if affirmative {
        Status::Affirmative
    } else {
        Status::NegativeWithWitness
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn parse_symmetric(spec: &str) -> Result<WeightSet, CliError> {
    let usage = || CliError::Usage(format!("--symmetric expects M:W1,W2,..., got {spec:?}"));
    let (m, weights) = spec.split_once(':').ok_or_else(usage)?;
    let m: usize = m.trim().parse().map_err(|_| usage())?;
    let weights = weights
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| w.parse::<usize>().map_err(|_| usage()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightSet::new(m, weights)?)
}

fn load_predicate(input: &InputArgs) -> Result<Predicate, CliError> {
    match (&input.predicate, &input.symmetric) {
        (Some(path), None) => Ok(io::parse_predicate(&read(path)?)?),
        (None, Some(spec)) => Ok(parse_symmetric(spec)?.to_predicate()),
        _ => Err(CliError::Usage("give exactly one of --predicate and --symmetric".into())),
    }
}

fn load_phi(args: &PhiArgs, predicate: &Predicate) -> Result<PhiFamily, CliError> {
    let sig = predicate.signature();
    let binary_only = |name: &str| {
        if sig.is_binary() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--phi {name} needs a binary signature")))
        }
    };
    if args.phi_file.is_some() && args.phi != PhiChoice::Custom {
        return Err(CliError::Usage("--phi-file needs --phi custom".into()));
    }
    Ok(match args.phi {
        PhiChoice::Id => PhiFamily::identity(sig),
        PhiChoice::Neg => {
            binary_only("neg")?;
            PhiFamily::negations(sig.len())
        }
        PhiChoice::IdnegUniform => {
            binary_only("idneg-uniform")?;
            PhiFamily::identity_or_negation(sig.len())
        }
        PhiChoice::ConstIdNeg => {
            binary_only("const-id-neg")?;
            PhiFamily::constants_identity_negation(sig.len())
        }
        PhiChoice::AllPerm => PhiFamily::all_permutations(sig)?,
        PhiChoice::Custom => {
            let path = args.phi_file.as_ref().ok_or_else(|| CliError::Usage("--phi custom needs --phi-file".into()))?;
            io::parse_phi(sig, &read(path)?)?
        }
    })
}

fn engine(args: &EngineArgs) -> EngineOptions {
    EngineOptions { budget: args.budget, workers: args.workers as usize }
}

fn limits(args: &LimitArgs) -> Limits {
    let mut limits = Limits { tight_exponent: args.tight_exponent, ..Limits::default() };
    if let Some(k) = args.latin_k_max {
        limits.latin_k_max = k;
    }
    if let Some(b) = args.and_or_max_binary {
        limits.and_or_max_binary = b;
    }
    if let Some(cap) = args.witness_arity_cap {
        limits.witness_arity_cap = cap;
    }
    limits
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

pub fn run(command: Command, json: bool) -> Result<Report, CliError> {
    match command {
        Command::Check { input, tuple } => {
            let p = load_predicate(&input)?;
            let fs = io::parse_tuple(&read(&tuple)?)?;
            cmd_check(&p, &fs, json)
        }
        Command::Enumerate { input, engine: e, arity } => {
            let p = load_predicate(&input)?;
            cmd_enumerate(&p, arity, &engine(&e), json)
        }
        Command::Trivial { input, phi, engine: e, arity } => {
            let p = load_predicate(&input)?;
            let phi = load_phi(&phi, &p)?;
            cmd_trivial(&p, &phi, arity, &engine(&e), json)
        }
        Command::Reduce { input, phi, engine: e, limits: l } => {
            let p = load_predicate(&input)?;
            let phi = load_phi(&phi, &p)?;
            cmd_reduce(&p, &phi, &engine(&e), &limits(&l), json)
        }
        Command::Atlas { m_max, engine: e } => cmd_atlas(m_max, &engine(&e), json),
        Command::Impossibility { input, engine: e, limits: l, arity } => {
            let p = load_predicate(&input)?;
            cmd_impossibility(&p, arity, &engine(&e), &limits(&l), json)
        }
    }
}

fn cmd_check(p: &Predicate, fs: &PolymorphismTuple, json: bool) -> Result<Report, CliError> {
    let violation = find_violation(p, fs)?;
    let image = violation.as_ref().map(|matrix| fs.apply(matrix)).transpose()?;
    let text = if json {
        to_json(&json!({
            "command": "check",
            "polymorphism": violation.is_none(),
            "violation": violation.as_ref().map(|v| json!({"columns": v.columns, "image": image})),
        }))
    } else {
        match (&violation, &image) {
            (Some(matrix), Some(image)) => {
                let mut out = format!("not a polymorphism: {fs}\nviolating columns (each in P):\n");
                for c in &matrix.columns {
                    writeln!(out, "  {c:?}").unwrap();
                }
                writeln!(out, "image {image:?} is not in P").unwrap();
                out
            }
            _ => format!("polymorphism: {fs}\n"),
        }
    };
    Ok(Report { status: status(violation.is_none()), text })
}

fn cmd_enumerate(p: &Predicate, arity: usize, options: &EngineOptions, json: bool) -> Result<Report, CliError> {
    let all = enumerate_polymorphisms(p, arity, options)?;
    let text = if json {
        io::tuples_to_jsonl(&all)
    } else {
        let mut out = format!("{} polymorphisms of arity {arity}\n", all.len());
        for fs in &all {
            writeln!(out, "{fs}").unwrap();
        }
        out
    };
    Ok(Report { status: Status::Affirmative, text })
}

fn render_triviality(out: &mut String, phi: &PhiFamily, report: &TrivialityReport) {
    let c = &report.census;
    writeln!(
        out,
        "{} with respect to Φ={} at arity {}",
        if report.trivial { "trivial" } else { "not trivial" },
        phi.name(),
        report.checked_arity
    )
    .unwrap();
    writeln!(
        out,
        "polymorphisms: {} (dictatorial only {}, certificate only {}, both {}, neither {})",
        report.polymorphism_count, c.dictatorial_only, c.certificate_only, c.both, c.neither
    )
    .unwrap();
    for w in &report.witnesses {
        writeln!(out, "witness: {}", w.polymorphism).unwrap();
    }
}

fn cmd_trivial(
    p: &Predicate,
    phi: &PhiFamily,
    arity: Option<usize>,
    options: &EngineOptions,
    json: bool,
) -> Result<Report, CliError> {
    let report = match arity {
        Some(n) => check_trivial_for_n(p, phi, n, options)?,
        None => decide_trivial(p, phi, options)?,
    };
    let text = if json {
        to_json(&json!({"command": "trivial", "phi": phi.name(), "report": report}))
    } else {
        let mut out = String::new();
        render_triviality(&mut out, phi, &report);
        out
    };
    Ok(Report { status: status(report.trivial), text })
}

fn cmd_reduce(
    p: &Predicate,
    phi: &PhiFamily,
    options: &EngineOptions,
    limits: &Limits,
    json: bool,
) -> Result<Report, CliError> {
    let report = reduction_report(p, phi, options, limits)?;
    let exceptional = report.cases.as_ref().is_some_and(|c| c.any());
    let affirmative = report.trivial_at_1 && !exceptional;
    let text = if json {
        to_json(&json!({"command": "reduce", "phi": phi.name(), "report": report}))
    } else {
        let mut out = String::new();
        render_triviality(&mut out, phi, &report.arity_one);
        if let Some(w) = &report.furthermore_witness {
            let shape = serde_json::to_value(w.shape).unwrap();
            writeln!(
                out,
                "binary witness of shape {}: {} [{}]",
                shape.as_str().unwrap_or_default(),
                w.polymorphism,
                w.verdict.kind()
            )
            .unwrap();
        }
        if let Some(cases) = &report.cases {
            if !cases.any() {
                writeln!(out, "no exceptional case: arity-1 triviality carries over to arity 2").unwrap();
            }
            for c in &cases.closed_under_setting {
                writeln!(out, "case: closed under setting coordinate {} to {}", c.coordinate, c.value).unwrap();
            }
            if let Some(fs) = &cases.and_or {
                writeln!(out, "case: AND/OR polymorphism {fs}").unwrap();
            }
            if let Some(fs) = &cases.latin_square {
                writeln!(out, "case: Latin-square polymorphism conforming to Φ {fs}").unwrap();
            }
        }
        out
    };
    Ok(Report { status: status(affirmative), text })
}

fn cmd_atlas(m_max: usize, options: &EngineOptions, json: bool) -> Result<Report, CliError> {
    let rows = atlas(m_max, options)?;
    let agree = rows.iter().all(|r| r.oracle_agreement);
    let text = if json {
        rows.iter().map(|r| serde_json::to_string(r).expect("rows serialize") + "\n").collect()
    } else {
        let mut out = format!(
            "{:>2} {:>6}  {:<16} {:>4} {:>4} {:>5}  {:<18} {:<6} families\n",
            "m", "mask", "W", "neg", "id", "item", "counts n=0,1,2", "oracle"
        );
        for r in &rows {
            let weights: Vec<String> = r.weights.iter().map(usize::to_string).collect();
            let families: Vec<String> = r.families.iter().map(ToString::to_string).collect();
            let counts: Vec<String> = r.counts.iter().map(usize::to_string).collect();
            writeln!(
                out,
                "{:>2} {:>#6x}  {:<16} {:>4} {:>4} {:>5}  {:<18} {:<6} {}",
                r.m,
                r.mask,
                format!("{{{}}}", weights.join(",")),
                yes_no(r.phi_neg_trivial),
                yes_no(r.phi_id_trivial),
                r.item.number(),
                counts.join(","),
                if r.oracle_agreement { "ok" } else { "FAIL" },
                families.join(" ")
            )
            .unwrap();
        }
        writeln!(out, "{} rows, oracle {}", rows.len(), if agree { "agrees" } else { "DISAGREES" }).unwrap();
        out
    };
    Ok(Report { status: status(agree), text })
}

/// Tables past arity 4 are too long to read; they are left to `--json`.
fn brief(fs: &PolymorphismTuple) -> String {
    if fs.arity() <= 4 {
        fs.to_string()
    } else {
        format!("{} tables of arity {} (see --json)", fs.len(), fs.arity())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_impossibility(
    p: &Predicate,
    arity: usize,
    options: &EngineOptions,
    limits: &Limits,
    json: bool,
) -> Result<Report, CliError> {
    let verdict = check_impossibility_unanimity(p, arity, options, limits)?;
    let text = if json {
        to_json(&json!({"command": "impossibility", "report": verdict}))
    } else {
        let mut out = format!(
            "{}an impossibility domain with respect to unanimity\n",
            if verdict.is_impossibility_domain { "" } else { "not " }
        );
        writeln!(
            out,
            "unanimous polymorphisms at arity {}: {} ({})",
            verdict.searched_arity,
            verdict.unanimous_count,
            if verdict.impossible_at_searched_arity { "all common projections" } else { "some non-projection" }
        )
        .unwrap();
        if let Some(w) = &verdict.witness {
            let source = match &w.source {
                WitnessSource::Enumeration { arity } => format!("found by enumeration at arity {arity}"),
                WitnessSource::ClosedUnderSetting { coordinate, value } => {
                    format!("built from closure under setting coordinate {coordinate} to {value}")
                }
                WitnessSource::AndOr => "AND/OR polymorphism".to_string(),
                WitnessSource::LatinSquareIteration { base, exponent } => {
                    format!("{exponent}-fold iterate of the Latin-square polymorphism {base}")
                }
            };
            writeln!(out, "witness ({source}, arity {}): {}", w.polymorphism.arity(), brief(&w.polymorphism)).unwrap();
        }
        out
    };
    Ok(Report { status: status(verdict.is_impossibility_domain), text })
}
