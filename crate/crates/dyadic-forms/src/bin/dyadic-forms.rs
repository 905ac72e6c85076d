//! Command-line front end: parse fields, elements, and lattices; run the
//! library operations; emit human-readable or JSON output.
//!
//! Exit codes: 0 on success, 1 on parse errors (syntax of arguments, elements,
//! or lattice files), 2 on domain errors (invalid BONG, unsupported field,
//! out-of-range parameters).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dyadic_forms::blattice::{lattice_from_json, validate_good_bong, Bong, BongError};
use dyadic_forms::ext::Ext;
use dyadic_forms::localfield::{parse_elem, shared_field, Field};
use dyadic_forms::represent::represents;
use dyadic_forms::universal::{
    classify, consistency_sweep, j_conditions, minimality_witness, testset,
    universal_via_testset, UniversalError, UniversalVerdict,
};

#[derive(Parser)]
#[command(
    name = "dyadic-forms",
    about = "Representation and n-universality of classic integral quadratic lattices \
             over dyadic local fields (degree <= 2 over Q2), via good BONGs",
    version
)]
struct Cli {
    /// Emit JSON instead of human-readable text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// A lattice given inline (`--field` + `--bong`) or as a JSON file (`--file`).
#[derive(Args)]
struct LatticeArgs {
    /// Field name: q2, q2(sqrt(5)), q2(sqrt(2)), q2(sqrt(3)), q2(sqrt(-1))
    #[arg(long)]
    field: Option<String>,
    /// Comma-separated BONG entries, e.g. "1,1,2+sqrt(2)"
    #[arg(long)]
    bong: Option<String>,
    /// JSON lattice file: {"field": ..., "bong": [...]} or {"field": ..., "blocks": [...]}
    #[arg(long)]
    file: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field's invariants: e, q, uniformizer, rho, Delta, units
    FieldInfo {
        #[arg(long)]
        field: String,
    },
    /// Quadratic defect order d(x)
    Defect {
        #[arg(long)]
        field: String,
        /// Element expression, e.g. "5", "1+4*sqrt(2)", "3/7"
        elem: String,
    },
    /// Hilbert symbol (a, b)
    Hilbert {
        #[arg(long)]
        field: String,
        a: String,
        b: String,
    },
    /// The sharp companion a# with (a, a#) = -1
    Sharp {
        #[arg(long)]
        field: String,
        a: String,
    },
    /// Check the good-BONG conditions on a lattice
    BongValidate {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// R_i, alpha_i, scale, integrality, and space invariants of a lattice
    Invariants {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Does lattice M represent lattice N?
    Represents {
        /// Field name (for inline --m/--n entries)
        #[arg(long)]
        field: Option<String>,
        /// BONG entries of the representing lattice M
        #[arg(long)]
        m: Option<String>,
        /// BONG entries of the represented lattice N
        #[arg(long)]
        n: Option<String>,
        /// JSON lattice file for M
        #[arg(long)]
        file_m: Option<String>,
        /// JSON lattice file for N
        #[arg(long)]
        file_n: Option<String>,
    },
    /// Decide n-universality of a classic integral lattice
    Classify {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Rank of the lattices to be represented
        #[arg(long)]
        n: usize,
        /// Decision route: clause | j | testset
        #[arg(long, default_value = "clause")]
        route: String,
    },
    /// The minimal testing set for n-universality
    Testset {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        /// List every member with its BONG
        #[arg(long)]
        list: bool,
    },
    /// Minimality witnesses: one lattice per test-set member that misses
    /// exactly that member
    Minimality {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        /// Restrict to a single member label, e.g. "C3^E(3,0)"
        #[arg(long)]
        target: Option<String>,
    },
    /// Random consistency sweep across the three universality routes
    Sweep {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<dyadic_forms::localfield::ParseError> for CliError {
    fn from(e: dyadic_forms::localfield::ParseError) -> CliError {
        CliError::Parse(e.to_string())
    }
}

impl From<BongError> for CliError {
    fn from(e: BongError) -> CliError {
        match e {
            BongError::Literal(m) => CliError::Parse(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<UniversalError> for CliError {
    fn from(e: UniversalError) -> CliError {
        match e {
            UniversalError::Bong(b) => b.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn field_of(name: &str) -> Result<&'static Field, CliError> {
    // An unrecognized or unsupported field is a domain error, not a syntax
    // error.
    shared_field(name).map_err(|e| CliError::Domain(e.to_string()))
}

fn elem_of(f: &Field, s: &str) -> Result<dyadic_forms::localfield::Elem, CliError> {
    Ok(parse_elem(f, s)?)
}

fn inline_bong(f: &'static Field, csv: &str) -> Result<Bong, CliError> {
    let mut entries = Vec::new();
    for part in csv.split(',') {
        entries.push(elem_of(f, part.trim())?);
    }
    Ok(validate_good_bong(f, &entries)?)
}

fn load_lattice(args: &LatticeArgs) -> Result<Bong, CliError> {
    match (&args.file, &args.field, &args.bong) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
            Ok(lattice_from_json(&text)?)
        }
        (None, Some(field), Some(bong)) => inline_bong(field_of(field)?, bong),
        _ => Err(CliError::Parse(
            "give either --file, or both --field and --bong".to_string(),
        )),
    }
}

fn ext_str(x: Ext) -> String {
    x.to_string()
}

fn verdict_output(v: &UniversalVerdict, json: bool) -> String {
    if json {
        serde_json::to_string_pretty(&json!({
            "universal": v.verdict,
            "route": v.route,
            "failing_clause": v.failing_clause,
        }))
        .unwrap()
    } else {
        let mut s = format!("universal: {}\nroute: {}", v.verdict, v.route);
        if let Some(c) = &v.failing_clause {
            let _ = write!(s, "\nfailing: {c}");
        }
        s
    }
}

fn invariants_json(b: &Bong) -> serde_json::Value {
    let sp = b.space();
    json!({
        "field": b.field.name,
        "bong": b.entries.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "rank": b.rank(),
        "r": (1..=b.rank()).map(|i| b.r(i)).collect::<Vec<_>>(),
        "alpha": (1..b.rank()).map(|i| ext_str(b.alpha(i))).collect::<Vec<_>>(),
        "scale_ord": ext_str(b.scale_ord()),
        "integral": b.is_integral(),
        "classic": b.is_classic(),
        "space": {
            "dim": sp.dim,
            "disc": dyadic_forms::qspace::disc_rep(b.field, sp.disc).to_string(),
            "hasse": sp.hasse,
        },
    })
}

fn invariants_text(b: &Bong) -> String {
    let sp = b.space();
    let mut s = String::new();
    let _ = writeln!(s, "field: {}", b.field.name);
    let _ = writeln!(s, "bong: {b}");
    let _ = writeln!(
        s,
        "R: ({})",
        (1..=b.rank()).map(|i| b.r(i).to_string()).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(
        s,
        "alpha: ({})",
        (1..b.rank()).map(|i| ext_str(b.alpha(i))).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(s, "scale ord: {}", ext_str(b.scale_ord()));
    let _ = writeln!(s, "integral: {}  classic: {}", b.is_integral(), b.is_classic());
    let _ = write!(
        s,
        "space: dim {}, disc {}, hasse {}",
        sp.dim,
        dyadic_forms::qspace::disc_rep(b.field, sp.disc),
        sp.hasse
    );
    s
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::FieldInfo { field } => {
            let f = field_of(field)?;
            let units: Vec<String> = f.units.iter().map(|u| u.to_string()).collect();
            let u1: Vec<String> = f.u1.iter().map(|&i| f.units[i].to_string()).collect();
            let classes: Vec<String> =
                f.square_classes().iter().map(|c| c.to_string()).collect();
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "name": f.name,
                    "e": f.e,
                    "q": f.q,
                    "pi": f.pi.to_string(),
                    "rho": f.rho.to_string(),
                    "delta": f.delta.to_string(),
                    "units": units,
                    "u1": u1,
                    "square_classes": classes,
                }))
                .unwrap())
            } else {
                Ok(format!(
                    "field: {}\ne: {}\nq: {}\npi: {}\nrho: {}\nDelta: {}\n\
                     unit square-class reps: {}\nU1 (defect-1 units): {}\nsquare classes: {}",
                    f.name,
                    f.e,
                    f.q,
                    f.pi,
                    f.rho,
                    f.delta,
                    units.join(", "),
                    u1.join(", "),
                    classes.join(", ")
                ))
            }
        }
        Command::Defect { field, elem } => {
            let f = field_of(field)?;
            let x = elem_of(f, elem)?;
            let d = f.quadratic_defect(&x);
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "elem": x.to_string(),
                    "defect": ext_str(d),
                }))
                .unwrap())
            } else {
                Ok(format!("d({x}) = {}", ext_str(d)))
            }
        }
        Command::Hilbert { field, a, b } => {
            let f = field_of(field)?;
            let xa = elem_of(f, a)?;
            let xb = elem_of(f, b)?;
            if xa.is_zero() || xb.is_zero() {
                return Err(CliError::Domain("Hilbert symbol needs nonzero arguments".into()));
            }
            let h = f.hilbert(&xa, &xb);
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "a": xa.to_string(), "b": xb.to_string(), "hilbert": h,
                }))
                .unwrap())
            } else {
                Ok(format!("({xa}, {xb}) = {h}"))
            }
        }
        Command::Sharp { field, a } => {
            let f = field_of(field)?;
            let xa = elem_of(f, a)?;
            let s = f.sharp(&xa).map_err(|e| CliError::Domain(e.to_string()))?;
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "a": xa.to_string(), "sharp": s.to_string(),
                }))
                .unwrap())
            } else {
                Ok(format!("{xa}# = {s}"))
            }
        }
        Command::BongValidate { lattice } => {
            let b = load_lattice(lattice)?;
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "valid": true,
                    "bong": b.entries.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "integral": b.is_integral(),
                    "classic": b.is_classic(),
                }))
                .unwrap())
            } else {
                Ok(format!(
                    "valid: true\nbong: {b}\nintegral: {}\nclassic: {}",
                    b.is_integral(),
                    b.is_classic()
                ))
            }
        }
        Command::Invariants { lattice } => {
            let b = load_lattice(lattice)?;
            if json {
                Ok(serde_json::to_string_pretty(&invariants_json(&b)).unwrap())
            } else {
                Ok(invariants_text(&b))
            }
        }
        Command::Represents { field, m, n, file_m, file_n } => {
            let load = |inline: &Option<String>, file: &Option<String>| -> Result<Bong, CliError> {
                load_lattice(&LatticeArgs {
                    field: field.clone().filter(|_| inline.is_some()),
                    bong: inline.clone(),
                    file: file.clone(),
                })
            };
            let bm = load(m, file_m)?;
            let bn = load(n, file_n)?;
            let rep =
                represents(&bm, &bn).map_err(|e| CliError::Domain(e.to_string()))?;
            if json {
                let conds = |v: &Vec<(usize, bool)>| {
                    v.iter().map(|(i, ok)| json!({"i": i, "ok": ok})).collect::<Vec<_>>()
                };
                Ok(serde_json::to_string_pretty(&json!({
                    "m": bm.to_string(),
                    "n": bn.to_string(),
                    "represents": rep.verdict,
                    "space_ok": rep.space_ok,
                    "b1": conds(&rep.b1),
                    "b2": conds(&rep.b2),
                    "b3": conds(&rep.b3),
                    "b4": conds(&rep.b4),
                    "first_failure": rep.first_failure,
                }))
                .unwrap())
            } else {
                let mut s = format!("{bm} represents {bn}: {}", rep.verdict);
                if let Some(ff) = &rep.first_failure {
                    let _ = write!(s, "\nfirst failure: {ff}");
                }
                Ok(s)
            }
        }
        Command::Classify { lattice, n, route } => {
            let b = load_lattice(lattice)?;
            let v = match route.as_str() {
                "clause" => classify(&b, *n)?,
                "j" => j_conditions(&b, *n)?,
                "testset" => universal_via_testset(&b, *n)?,
                other => {
                    return Err(CliError::Parse(format!(
                        "unknown route '{other}' (expected clause | j | testset)"
                    )))
                }
            };
            Ok(verdict_output(&v, json))
        }
        Command::Testset { field, n, list } => {
            let f = field_of(field)?;
            let ts = testset(f, *n)?;
            if json {
                let members: Vec<serde_json::Value> = ts
                    .members
                    .iter()
                    .map(|m| {
                        json!({
                            "label": m.label,
                            "bong": m.lattice.entries.iter().map(|a| a.to_string())
                                     .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&json!({
                    "field": f.name,
                    "n": n,
                    "count": ts.members.len(),
                    "count_formula": ts.enumerated_count_formula,
                    "closed_form": ts.closed_form,
                    "closed_form_note": ts.closed_form_note,
                    "members": if *list { Some(members) } else { None },
                }))
                .unwrap())
            } else {
                let mut s = format!(
                    "field: {}\nn: {}\nmembers (enumerated): {}\nclosed form: {}",
                    f.name,
                    n,
                    ts.members.len(),
                    ts.closed_form
                );
                if let Some(note) = ts.closed_form_note {
                    let _ = write!(s, "\nnote: {note}");
                }
                if *list {
                    for m in &ts.members {
                        let _ = write!(s, "\n{}: {}", m.label, m.lattice);
                    }
                }
                Ok(s)
            }
        }
        Command::Minimality { field, n, target } => {
            let f = field_of(field)?;
            let ts = testset(f, *n)?;
            let selected: Vec<_> = match target {
                Some(label) => {
                    let found: Vec<_> =
                        ts.members.iter().filter(|m| &m.label == label).collect();
                    if found.is_empty() {
                        return Err(CliError::Domain(format!(
                            "no test-set member labeled '{label}'"
                        )));
                    }
                    found
                }
                None => ts.members.iter().collect(),
            };
            let mut rows = Vec::new();
            for member in selected {
                let w = minimality_witness(f, *n, &member.kind)?;
                let mut verified = true;
                for other in &ts.members {
                    let rep = represents(&w, &other.lattice)
                        .map_err(|e| CliError::Domain(e.to_string()))?
                        .verdict;
                    let expected = other.label != member.label;
                    if rep != expected {
                        verified = false;
                    }
                }
                rows.push((member.label.clone(), w.to_string(), verified));
            }
            let all_ok = rows.iter().all(|r| r.2);
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "field": f.name,
                    "n": n,
                    "verified": all_ok,
                    "witnesses": rows.iter().map(|(label, w, ok)| json!({
                        "target": label, "witness": w, "verified": ok,
                    })).collect::<Vec<_>>(),
                }))
                .unwrap())
            } else {
                let mut s = String::new();
                for (label, w, ok) in &rows {
                    let _ = writeln!(s, "{label}: witness {w} — {}", if *ok { "ok" } else { "FAILED" });
                }
                let _ = write!(s, "all verified: {all_ok}");
                Ok(s)
            }
        }
        Command::Sweep { field, n, samples, seed } => {
            let f = field_of(field)?;
            let report = consistency_sweep(f, *n, *samples, *seed)?;
            if json {
                Ok(serde_json::to_string_pretty(&json!({
                    "field": report.field_name,
                    "n": report.n,
                    "samples": report.samples,
                    "universal_count": report.universal_count,
                    "disagreements": report.disagreements.iter().map(|d| json!({
                        "lattice": d.lattice.to_string(),
                        "classify": d.classify.verdict,
                        "j_conditions": d.j_conditions.verdict,
                        "via_testset": d.via_testset.verdict,
                    })).collect::<Vec<_>>(),
                }))
                .unwrap())
            } else {
                let mut s = format!(
                    "field: {}\nn: {}\nsamples: {}\nuniversal: {}\ndisagreements: {}",
                    report.field_name,
                    report.n,
                    report.samples,
                    report.universal_count,
                    report.disagreements.len()
                );
                for d in &report.disagreements {
                    let _ = write!(
                        s,
                        "\n  {}: clause={} j={} testset={}",
                        d.lattice,
                        d.classify.verdict,
                        d.j_conditions.verdict,
                        d.via_testset.verdict
                    );
                }
                Ok(s)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            // Tolerate a closed pipe (e.g. `| head`).
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
