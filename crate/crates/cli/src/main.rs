mod input;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koszulkit::completion::{
    classical_completion_tower, classically_complete, complete_module, derived_complete_check, derived_completion,
    idempotent_lift, DerivedVerdict, Separatedness,
};
use koszulkit::complexes::{homology, FreeComplex};
use koszulkit::criteria::{
    counterexample_gallery, descend, gallery, hom_set_comparison, koszul_complete_check, HomComparison, Verdict,
};
use koszulkit::koszul_tower::{koszul, stage_report, KoszulTower};
use koszulkit::rings::{Elem, Mat, ModuleInvariant, RingDescriptor};
use koszulkit::selftest;
use koszulkit::Error;
use serde_json::{json, Value};

use input::Usage;

#[derive(Parser)]
#[command(name = "koszulkit", version, about = "Koszul towers, adic completion and completeness checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Truncation precision N.
    #[arg(long, env = "KOSZULKIT_PRECISION", default_value_t = 8, global = true)]
    precision: u32,
    /// The prime behind `p` in element text and named rings.
    #[arg(long, default_value_t = 5, global = true)]
    p: u64,
    /// Seed for randomized runs.
    #[arg(long, default_value_t = selftest::DEFAULT_SEED, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RingIdeal {
    /// Z, Q, Z/12, F5, Z_(5), exa-no, or a JSON descriptor.
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Comma-separated generators of I.
    #[arg(long, default_value = "p")]
    s: String,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a complex given as JSON.
    Homology {
        #[arg(long)]
        complex: String,
    },
    /// The Koszul complex of a sequence and its homology.
    Koszul(RingIdeal),
    /// Stages of the Koszul tower with their homology.
    Tower {
        #[command(flatten)]
        at: RingIdeal,
        /// Number of stages.
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Classical completion M/I^n M of a module.
    CompleteModule {
        #[command(flatten)]
        at: RingIdeal,
        #[arg(long, default_value = "R")]
        module: String,
    },
    /// Derived completion of a complex (the unit by default).
    DerivedCompletion {
        #[command(flatten)]
        at: RingIdeal,
        #[arg(long)]
        complex: Option<String>,
    },
    /// Derived completeness of a module along one element.
    DerivedComplete {
        #[command(flatten)]
        at: RingIdeal,
        #[arg(long, default_value = "R")]
        module: String,
    },
    /// Whether the intersection of I^n M vanishes.
    Separated {
        #[command(flatten)]
        at: RingIdeal,
        #[arg(long, default_value = "R")]
        module: String,
    },
    /// Koszul-completeness of a sequence.
    CheckKoszulComplete(RingIdeal),
    /// Lifts an idempotent matrix over R/I to R/I^N.
    LiftIdempotent {
        #[command(flatten)]
        at: RingIdeal,
        /// Square matrix as JSON rows, entries read in R/I.
        #[arg(long)]
        matrix: String,
    },
    /// Hom groups over R against the completion (Koszul objects by default).
    CompareHom {
        #[command(flatten)]
        at: RingIdeal,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Iterated amplitude descent over Z/p^e.
    Descend {
        #[arg(long)]
        complex: String,
        #[arg(long, default_value = "p")]
        s: String,
    },
    /// Worked examples with their expected verdicts.
    Gallery {
        /// One preset; all of them when omitted.
        #[arg(long)]
        name: Option<String>,
    },
    /// Runs every acceptance criterion.
    Selftest {
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

/// Exit status classes: 0 positive, 1 mathematical negative, 3 undecided.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    Negative,
    Undecided,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Undecided => 3,
        }
    }
}

struct Report {
    status: Status,
    json: Value,
    text: String,
}

enum Failure {
    Usage(Usage),
    Library(Error),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<Report, Failure>;

fn homology_json(h: &BTreeMap<i64, ModuleInvariant>) -> Value {
    Value::Object(h.iter().map(|(i, m)| (i.to_string(), m.to_json())).collect())
}

fn homology_table(h: &BTreeMap<i64, ModuleInvariant>) -> String {
    let mut out = String::from("degree  homology\n");
    for (i, m) in h.iter().rev() {
        out.push_str(&format!("{i:>6}  {m}\n"));
    }
    out
}

fn ring_ideal(at: &RingIdeal, p: u64) -> Result<koszulkit::rings::IdealSpec, Usage> {
    let ring = input::ring(&at.ring, p)?;
    input::ideal(&ring, &at.s, p)
}

fn check_precision(n: u32) -> Result<(), Usage> {
    if n == 0 {
        return Err(Usage::new("--precision", "precision must be at least 1"));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    check_precision(c.precision)?;
    let n = c.precision;
    match &cli.command {
        Command::Homology { complex } => {
            let t = input::complex("--complex", complex)?;
            let h = homology(&t)?;
            Ok(Report {
                status: Status::Ok,
                json: json!({"ring": t.ring().to_json(), "homology": homology_json(&h)}),
                text: format!("homology over {}\n{}", t.ring(), homology_table(&h)),
            })
        }
        Command::Koszul(at) => {
            let ideal = ring_ideal(at, c.p)?;
            let k = koszul(&ideal)?;
            let h = homology(&k)?;
            Ok(Report {
                status: Status::Ok,
                json: json!({"complex": k.to_json(), "homology": homology_json(&h)}),
                text: format!("Kos({}) over {}\n{}", at.s, ideal.ring, homology_table(&h)),
            })
        }
        Command::Tower { at, n: stages } => {
            let ideal = ring_ideal(at, c.p)?;
            if *stages == 0 {
                return Err(Usage::new("--n", "need at least one stage").into());
            }
            let tower = KoszulTower::new(ideal);
            let reports = (1..=*stages).map(|k| stage_report(&tower, k)).collect::<koszulkit::Result<Vec<_>>>()?;
            let mut text = String::new();
            for k in 1..=*stages {
                let stage = tower.stage(k)?;
                let ranks: Vec<String> = stage.ranks().iter().map(|(i, r)| format!("{i}:{r}")).collect();
                let square = reports[k as usize - 1]["pq_square"].as_str().unwrap_or("").to_string();
                text.push_str(&format!("stage {k}: ranks {}, square {square}\n", ranks.join(" ")));
                for (i, m) in homology(&stage)? {
                    text.push_str(&format!("  H_{i} = {m}\n"));
                }
            }
            Ok(Report { status: Status::Ok, json: json!({"stages": reports}), text })
        }
        Command::CompleteModule { at, module } => {
            let ideal = ring_ideal(at, c.p)?;
            let m = input::module(&ideal.ring, module, c.p)?;
            let completion = complete_module(&m, &ideal, n)?;
            let classical = classically_complete(&m, &ideal, n)?;
            let stages: Vec<Value> = completion.stages.iter().map(ModuleInvariant::to_json).collect();
            let mut text = format!("{m} at ({}):\n", at.s);
            for (k, s) in completion.stages.iter().enumerate() {
                text.push_str(&format!("  M/I^{} M = {s}\n", k + 1));
            }
            let label = match classical {
                Some(true) => "classically complete",
                Some(false) => "not classically complete",
                None => "classical completeness undecided",
            };
            text.push_str(label);
            text.push('\n');
            Ok(Report {
                status: match classical {
                    Some(true) => Status::Ok,
                    Some(false) => Status::Negative,
                    None => Status::Undecided,
                },
                json: json!({
                    "module": m.to_string(),
                    "stages": stages,
                    "stabilized_at": completion.stabilized_at,
                    "classically_complete": classical,
                }),
                text,
            })
        }
        Command::DerivedCompletion { at, complex } => {
            let ideal = ring_ideal(at, c.p)?;
            let t = match complex {
                Some(path) => input::complex("--complex", path)?,
                None => FreeComplex::unit(&ideal.ring),
            };
            let report = derived_completion(&t, &ideal, n)?;
            let mut text = format!("derived completion at ({}) to precision {n}\n", at.s);
            let json = report.to_json();
            for (i, d) in report.degrees.iter() {
                let holim = d.holim.as_ref().map_or("undetermined".to_string(), ToString::to_string);
                text.push_str(&format!("  H_{i}: {holim}\n"));
            }
            let status = if report.determined() { Status::Ok } else { Status::Undecided };
            Ok(Report { status, json, text })
        }
        Command::DerivedComplete { at, module } => {
            let ring = input::ring(&at.ring, c.p)?;
            let m = input::module(&ring, module, c.p)?;
            let s = input::element("--s", &ring, &at.s, c.p)?;
            let v = derived_complete_check(&m, &s, n);
            let status = match v {
                DerivedVerdict::Complete { .. } => Status::Ok,
                DerivedVerdict::NotComplete(_) => Status::Negative,
                DerivedVerdict::Inconclusive(_) => Status::Undecided,
            };
            let json = v.to_json();
            let text = format!("{m} along {s}: {}\n{}", v.label(), detail_lines(&json, &["verdict"]));
            Ok(Report { status, json, text })
        }
        Command::Separated { at, module } => {
            let ideal = ring_ideal(at, c.p)?;
            let m = input::module(&ideal.ring, module, c.p)?;
            let v = koszulkit::completion::separatedness_check(&m, &ideal, n)?;
            let status = match v {
                Separatedness::SeparatedAtN(_) => Status::Ok,
                Separatedness::NotSeparated { .. } => Status::Negative,
                Separatedness::Inconclusive(_) => Status::Undecided,
            };
            let json = v.to_json();
            let text = format!("{m} at ({}): {}\n{}", at.s, v.label(), detail_lines(&json, &["verdict"]));
            Ok(Report { status, json, text })
        }
        Command::CheckKoszulComplete(at) => {
            let ideal = ring_ideal(at, c.p)?;
            let v = koszul_complete_check(&ideal, n)?;
            let status = match v.verdict {
                Verdict::Complete => Status::Ok,
                Verdict::NotComplete => Status::Negative,
                Verdict::Inconclusive => Status::Undecided,
            };
            let mut text = format!("Kos({}) over {} at precision {n}: {}\n", at.s, ideal.ring, v.verdict);
            for (i, d) in &v.per_degree {
                text.push_str(&format!("  H_{i}: {} vs {}\n", d.lhs, d.rhs));
            }
            if let Some(w) = &v.witness {
                text.push_str(&format!("witness in degree {}: {} vs {}\n", w.degree, w.lhs, w.rhs));
            }
            Ok(Report { status, json: v.to_json(), text })
        }
        Command::LiftIdempotent { at, matrix } => {
            let ideal = ring_ideal(at, c.p)?;
            let tower = classical_completion_tower(&ideal, n)?;
            let base = tower.stage(1).clone();
            let e = input::matrix("--matrix", &base, &input::json_arg("--matrix", matrix)?, None, c.p)?;
            match idempotent_lift(&e, &tower, n) {
                Ok(lift) => {
                    let stages: Vec<Value> =
                        lift.stages.iter().map(|(r, f)| json!({"ring": r.to_json(), "matrix": render(r, f)})).collect();
                    let mut text = String::new();
                    for (r, f) in &lift.stages {
                        text.push_str(&format!("{r}: {}\n", Value::from(render(r, f))));
                    }
                    Ok(Report { status: Status::Ok, json: json!({"stages": stages}), text })
                }
                Err(err @ Error::NotIdempotent(_)) => Ok(Report {
                    status: Status::Negative,
                    json: json!({"error": err.to_string()}),
                    text: format!("{err}\n"),
                }),
                Err(err) => Err(err.into()),
            }
        }
        Command::CompareHom { at, a, b } => {
            let ideal = ring_ideal(at, c.p)?;
            let k = || koszul(&ideal);
            let a = match a {
                Some(t) => input::complex("--a", t)?,
                None => k()?,
            };
            let b = match b {
                Some(t) => input::complex("--b", t)?,
                None => k()?,
            };
            let v = hom_set_comparison(&a, &b, &ideal, n)?;
            let status = match v {
                HomComparison::Isomorphic { .. } => Status::Ok,
                HomComparison::Differs { .. } => Status::Negative,
                HomComparison::Inconclusive(_) => Status::Undecided,
            };
            let text = match &v {
                HomComparison::Isomorphic { hom, graded, precision, .. } => {
                    format!("isomorphic at precision {precision}\nHom(a, b) = {hom}\n{}", homology_table(graded))
                }
                HomComparison::Differs { lhs, rhs, precision } => format!(
                    "differs at precision {precision}\nover R:\n{}over the completion:\n{}",
                    homology_table(lhs),
                    homology_table(rhs)
                ),
                HomComparison::Inconclusive(reason) => format!("inconclusive: {reason}\n"),
            };
            Ok(Report { status, json: v.to_json(), text })
        }
        Command::Descend { complex, s } => {
            let d = input::complex("--complex", complex)?;
            let ideal = input::ideal(d.ring(), s, c.p)?;
            let steps = descend(&d, &ideal)?;
            let mut text = format!("{} step(s)\n", steps.len());
            for (k, step) in steps.iter().enumerate() {
                text.push_str(&format!(
                    "  step {}: P of rank {} in degree {}, amplitude {} -> {}\n",
                    k + 1,
                    step.projective_rank,
                    step.degree,
                    shown_amplitude(step.amplitude_before),
                    shown_amplitude(step.amplitude_after)
                ));
            }
            let json = json!({"steps": steps.iter().map(|s| s.to_json()).collect::<Vec<_>>()});
            Ok(Report { status: Status::Ok, json, text })
        }
        Command::Gallery { name } => {
            let p = u32::try_from(c.p).map_err(|_| Usage::new("--p", "prime too large"))?;
            let entries = match name {
                Some(name) => vec![gallery(name, p, n).map_err(|e| Usage::new("--name", e.to_string()))?],
                None => counterexample_gallery(p, n)?,
            };
            let mut text = String::new();
            for e in &entries {
                let mark = if e.pass() { "PASS" } else { "FAIL" };
                text.push_str(&format!("[{mark}] {}: expected {}, observed {}\n", e.name, e.expected, e.observed));
            }
            let status = if entries.iter().all(|e| e.pass()) { Status::Ok } else { Status::Negative };
            let json = json!({"gallery": entries.iter().map(|e| e.to_json()).collect::<Vec<_>>()});
            Ok(Report { status, json, text })
        }
        Command::Selftest { criterion } => {
            let results = match criterion {
                Some(id) => vec![selftest::run_criterion(*id, c.seed)
                    .ok_or_else(|| Usage::new("--criterion", format!("no criterion {id} (1..=11)")))?],
                None => selftest::run_all(c.seed),
            };
            let text: String = results.iter().map(|r| format!("{}\n", r.line())).collect();
            let status = if results.iter().all(|r| r.pass) { Status::Ok } else { Status::Negative };
            let json = json!({
                "seed": c.seed,
                "criteria": results
                    .iter()
                    .map(|r| json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail}))
                    .collect::<Vec<_>>(),
            });
            Ok(Report { status, json, text })
        }
    }
}

/// `key: value` lines for the fields of a report, nested objects flattened one level.
fn detail_lines(v: &Value, skip: &[&str]) -> String {
    let shown = |x: &Value| match x {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> =
                items.iter().map(|i| i.as_str().map_or_else(|| i.to_string(), String::from)).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    };
    let mut out = String::new();
    let Some(obj) = v.as_object() else {
        return out;
    };
    for (k, x) in obj.iter().filter(|(k, _)| !skip.contains(&k.as_str())) {
        match x.as_object() {
            Some(inner) => {
                out.push_str(&format!("  {k}:\n"));
                for (ik, ix) in inner {
                    out.push_str(&format!("    {ik}: {}\n", shown(ix)));
                }
            }
            None => out.push_str(&format!("  {k}: {}\n", shown(x))),
        }
    }
    out
}

fn shown_amplitude(a: Option<i64>) -> String {
    a.map_or("none (acyclic mod I)".to_string(), |a| a.to_string())
}

fn render(ring: &RingDescriptor, m: &Mat<Elem>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|row| row.iter().map(|x| x.render(ring)).collect()).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.common.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable")),
                Format::Text => report.text,
            };
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(report.status.code())
        }
        Err(Failure::Usage(u)) => {
            eprintln!("error: {}: {}", u.flag, u.message);
            ExitCode::from(2)
        }
        Err(Failure::Library(Error::Inconclusive(reason))) => {
            eprintln!("inconclusive: {reason}");
            ExitCode::from(Status::Undecided.code())
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
