//! `assoclab` command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use assoclab::freealg::{Letter, NCSeries};
use assoclab::numeric::{Evaluator, Precision, Verdict};
use assoclab::relations::{
    duality_relations, extract_relations, known_values, reduce, relations_to_json, shuffle_relations,
    zeta_shuffle_relations, Relation,
};
use assoclab::symring::{Composition, Generator};
use assoclab::{phi_delta, phi_mzv, selftest};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Parser)]
#[command(name = "assoclab", version, about = "Drinfeld associator expansions and MZV / delta-value relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the associator series truncated at the given order.
    Expand {
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Relations from comparing the two series, optionally with auxiliary sets.
    Relations {
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[command(flatten)]
        aux: AuxArgs,
        /// Print the reduced new relations modulo the auxiliary set.
        #[arg(long)]
        reduce: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Certify every relation numerically; exit code 1 if any fails.
    Verify {
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, default_value_t = 40)]
        digits: u32,
        #[command(flatten)]
        aux: AuxArgs,
        /// Write the per-relation report as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate one constant.
    Eval {
        #[arg(long, conflicts_with_all = ["delta", "log2"])]
        zeta: Option<String>,
        #[arg(long, conflicts_with = "log2")]
        delta: Option<String>,
        #[arg(long)]
        log2: bool,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Mzv,
    Delta,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AuxArgs {
    /// Comma-separated auxiliary sets: shuffle, zeta-shuffle, duality, known, all, none.
    #[arg(long, default_value = "none")]
    aux: String,
}

struct UsageError(String);

fn max_order() -> Result<usize, UsageError> {
    match std::env::var("ASSOCLAB_MAX_ORDER") {
        Ok(v) => v
            .parse()
            .map_err(|_| UsageError(format!("ASSOCLAB_MAX_ORDER is not a number: {}", v))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn check_order(order: usize) -> Result<(), UsageError> {
    let cap = max_order()?;
    if order > cap {
        return Err(UsageError(format!(
            "order {} exceeds the cap {} (set ASSOCLAB_MAX_ORDER to raise it)",
            order, cap
        )));
    }
    Ok(())
}

fn precision(digits: u32) -> Result<Precision, UsageError> {
    Precision::digits(digits).map_err(|e| UsageError(e.to_string()))
}

fn aux_set(spec: &str, max_weight: u32) -> Result<Vec<Relation>, UsageError> {
    let mut names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.contains(&"all") {
        names = vec!["shuffle", "zeta-shuffle", "duality", "known"];
    }
    let mut out = Vec::new();
    for name in names {
        match name {
            "none" => {}
            "shuffle" => out.extend(shuffle_relations(max_weight)),
            "zeta-shuffle" => out.extend(zeta_shuffle_relations(max_weight)),
            "duality" => out.extend(duality_relations(max_weight)),
            "known" => out.extend(known_values().into_iter().filter(|r| r.weight <= max_weight)),
            other => return Err(UsageError(format!("unknown aux set: {}", other))),
        }
    }
    Ok(out)
}

fn word_latex(w: &assoclab::Word) -> String {
    let letters = w.letters();
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        out.push(if letters[i] == Letter::A { 'A' } else { 'B' });
        if j - i > 1 {
            out.push_str(&format!("^{{{}}}", j - i));
        }
        i = j;
    }
    out
}

fn series_latex(s: &NCSeries) -> String {
    let mut lines = Vec::new();
    for (w, c) in s.terms() {
        let coeff = if c.len() == 1 { c.latex() } else { format!("\\left({}\\right)", c.latex()) };
        if w.degree() == 0 {
            lines.push(coeff);
        } else {
            lines.push(format!("{}\\,{}", coeff, word_latex(w)));
        }
    }
    if lines.is_empty() {
        lines.push("0".into());
    }
    format!("\\begin{{align*}}\n&{}\n\\end{{align*}}\n", lines.join("\\\\\n&+"))
}

fn relations_latex(rels: &[Relation]) -> String {
    let mut out = String::from("\\begin{alignat}{2}\n");
    for (i, r) in rels.iter().enumerate() {
        let end = if i + 1 == rels.len() { "." } else { ",\\\\" };
        out.push_str(&format!("{}&=0\\quad&&{}\n", r.expr.latex(), end));
    }
    out.push_str("\\end{alignat}\n");
    out
}

fn relations_text(rels: &[Relation]) -> String {
    rels.iter()
        .map(|r| format!("{}    [{}]\n", r, r.provenance))
        .collect()
}

fn emit(out: &OutputArgs, body: String) -> Result<(), String> {
    match &out.output {
        Some(path) => fs::write(path, body).map_err(|e| format!("{}: {}", path.display(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| e.to_string())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn comparison(order: usize) -> Result<Vec<Relation>, Failure> {
    extract_relations(&phi_mzv(order), &phi_delta(order)).map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand { order, side, out } => {
            check_order(order)?;
            let series: Vec<(&str, NCSeries)> = match side {
                Side::Mzv => vec![("mzv", phi_mzv(order))],
                Side::Delta => vec![("delta", phi_delta(order))],
                Side::Both => vec![("mzv", phi_mzv(order)), ("delta", phi_delta(order))],
            };
            let body = match out.format {
                Format::Json if series.len() == 1 => pretty(&series[0].1.to_json()),
                Format::Json => pretty(&json!({
                    "mzv": series[0].1.to_json(),
                    "delta": series[1].1.to_json(),
                })),
                Format::Latex => series.iter().map(|(_, s)| series_latex(s)).collect(),
                Format::Text if series.len() == 1 => format!("{}\n", series[0].1),
                Format::Text => series.iter().map(|(n, s)| format!("{}: {}\n", n, s)).collect(),
            };
            emit(&out, body).map_err(Failure::Runtime)
        }
        Command::Relations { order, aux, reduce: do_reduce, out } => {
            check_order(order)?;
            let aux_rels = aux_set(&aux.aux, order as u32)?;
            let rels = comparison(order)?;
            let rels = if do_reduce {
                reduce(&rels, &aux_rels)
            } else {
                rels.into_iter().chain(aux_rels).collect()
            };
            let body = match out.format {
                Format::Json => pretty(&relations_to_json(&rels)),
                Format::Latex => relations_latex(&rels),
                Format::Text => relations_text(&rels),
            };
            emit(&out, body).map_err(Failure::Runtime)
        }
        Command::Verify {
            order,
            digits,
            aux,
            report,
            out,
        } => {
            check_order(order)?;
            let prec = precision(digits)?;
            let aux_rels = aux_set(&aux.aux, order as u32)?;
            let mut rels = Vec::new();
            for n in 2..=order {
                rels.extend(comparison(n)?);
            }
            rels.extend(aux_rels);
            let ev = Evaluator::new(prec);
            let mut entries = Vec::new();
            let mut text = String::new();
            let mut failed = 0;
            for r in &rels {
                let (res, verdict) = ev.verify_relation(r);
                if verdict == Verdict::Fail {
                    failed += 1;
                }
                let residual = res.to_sci_string(6);
                text.push_str(&format!("{} {}  residual {}  [{}]\n", verdict, r, residual, r.provenance));
                entries.push(json!({
                    "provenance": r.provenance.to_json(),
                    "latex": r.latex(),
                    "residual": residual,
                    "verdict": verdict.to_string(),
                }));
            }
            let doc = json!({"order": order, "digits": digits, "relations": entries});
            if let Some(path) = report {
                fs::write(&path, pretty(&doc)).map_err(|e| Failure::Runtime(format!("{}: {}", path.display(), e)))?;
            }
            text.push_str(&format!("{} of {} relations pass\n", rels.len() - failed, rels.len()));
            let body = match out.format {
                Format::Json => pretty(&doc),
                Format::Latex => relations_latex(&rels),
                Format::Text => text,
            };
            emit(&out, body).map_err(Failure::Runtime)?;
            if failed > 0 {
                return Err(Failure::Verification);
            }
            Ok(())
        }
        Command::Eval {
            zeta,
            delta,
            log2,
            digits,
        } => {
            let ev = Evaluator::new(precision(digits)?);
            let parse = |s: &str| s.parse::<Composition>().map_err(|e| UsageError(e.to_string()));
            let value = match (zeta, delta, log2) {
                (Some(z), _, _) => ev
                    .eval_zeta(&parse(&z)?)
                    .map_err(|e| Failure::Usage(e.to_string()))?,
                (_, Some(d), _) => ev.eval_delta(&parse(&d)?),
                (_, _, true) => ev.eval_generator(&Generator::Log2),
                _ => return Err(Failure::Usage("give one of --zeta, --delta, --log2".into())),
            };
            println!("{}", value);
            Ok(())
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            for c in &checks {
                println!("{}", c);
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}
