//! Batch classifier for left-invariant Einstein, nilsoliton, and solsoliton
//! metrics on nilpotent and solvable Lie groups, driven by JSON
//! structure-constant files.
//!
//! Exit codes: 0 yes/ok, 1 invalid input, 2 no, 3 inconclusive, 64 usage.

mod format;

use anyhow::Result;
use bracketflow::bracket::basis_vec;
use bracketflow::decide::{
    self, admits_flat, admits_negative_einstein, admits_solsoliton, combine_both,
    combine_einstein, einstein_sign, is_einstein_nilradical, Answer, Question, Verdict,
};
use bracketflow::derivations::pre_einstein;
use bracketflow::flow::{flow, FloatBracket, FlowParams};
use bracketflow::qmat::Subspace;
use bracketflow::rational::format_rational;
use bracketflow::BracketTensor;
use clap::{Parser, Subcommand};
use format::{
    answer_str, ingest, question_str, rational_matrix, write_atomic, AlgebraFile, FlowSummaryJson,
    ReportFile, VerdictJson, MOMENT_RICCI_KAPPA, SCHEMA_VERSION,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_NO: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "bracketflow",
    about = "Decide Einstein / nilsoliton / solsoliton existence from rational structure constants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity and print the classification flags.
    Validate { file: PathBuf },
    /// Solve the pre-Einstein trace equation and print φ exactly.
    PreEinstein { file: PathBuf },
    /// Decide whether a nilpotent algebra carries a nilsoliton metric.
    Nilsoliton { file: PathBuf },
    /// Decide flat and negative Einstein existence for a solvable algebra.
    Einstein { file: PathBuf },
    /// Decide solsoliton existence for a solvable algebra.
    Solsoliton { file: PathBuf },
    /// Integrate the bracket flow and export the trajectory.
    Flow {
        file: PathBuf,
        /// Critical-residual tolerance for convergence.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Flow time budget.
        #[arg(long, default_value_t = 1e6)]
        max_time: f64,
        /// Write the trajectory as CSV (columns t,F,residual,derdim).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run everything applicable and emit a JSON report.
    Report {
        file: PathBuf,
        /// Write the report JSON here (defaults to stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with successful exit
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::from(EXIT_OK);
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn load_validated(path: &PathBuf) -> Result<Option<(BracketTensor, AlgebraFile)>> {
    let (tensor, file) = ingest(path)?;
    let violations = tensor.validate_jacobi();
    if !violations.is_empty() {
        eprintln!("Jacobi identity fails at triples (1-based):");
        for (i, j, k) in violations {
            eprintln!("  ({}, {}, {})", i + 1, j + 1, k + 1);
        }
        return Ok(None);
    }
    let validated = tensor.validated().expect("just checked");
    Ok(Some((validated, file)))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let Some((tensor, meta)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            let class = tensor.classify();
            if let Some(name) = &meta.name {
                println!("name: {name}");
            }
            println!("dim: {}", tensor.dim());
            println!("jacobi: ok");
            println!("nilpotent: {}", class.nilpotent);
            println!("completely_solvable: {}", class.completely_solvable);
            println!("solvable: {}", class.solvable);
            println!("unimodular: {}", class.unimodular);
            if let Some(s) = class.nilpotency_steps {
                println!("nilpotency_steps: {s}");
            }
            if let Some(s) = class.solvability_steps {
                println!("solvability_steps: {s}");
            }
            Ok(EXIT_OK)
        }
        Command::PreEinstein { file } => {
            let Some((tensor, _)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            let sol = pre_einstein(&tensor)?;
            println!("phi:");
            for row in rational_matrix(&sol.phi) {
                println!("  [{}]", row.join(", "));
            }
            println!("semisimple: {}", sol.semisimple);
            match &sol.eigenvalues {
                Some(eigs) => {
                    let s: Vec<String> = eigs
                        .iter()
                        .map(|(v, m)| format!("{} (x{m})", format_rational(v)))
                        .collect();
                    println!("eigenvalues: {}", s.join(", "));
                }
                None => println!("eigenvalues: not rational"),
            }
            if let Some(p) = sol.all_positive {
                println!("all_positive: {p}");
            }
            Ok(EXIT_OK)
        }
        Command::Nilsoliton { file } => {
            let Some((tensor, _)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            if !tensor.classify().nilpotent {
                eprintln!("input is not nilpotent");
                return Ok(EXIT_INVALID);
            }
            let v = is_einstein_nilradical(&tensor)?;
            print_verdict(&v);
            Ok(exit_for(v.answer))
        }
        Command::Einstein { file } => {
            let Some((tensor, _)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            if !tensor.classify().solvable {
                eprintln!("input is not solvable");
                return Ok(EXIT_INVALID);
            }
            let flat = admits_flat(&tensor)?;
            let neg = admits_negative_einstein(&tensor)?;
            println!("flat: {}", answer_str(flat.answer));
            println!("negative_einstein: {}", answer_str(neg.answer));
            print_verdict(&flat);
            print_verdict(&neg);
            let combined = match (flat.answer, neg.answer) {
                (Answer::Yes, _) | (_, Answer::Yes) => Answer::Yes,
                (Answer::Inconclusive, _) | (_, Answer::Inconclusive) => Answer::Inconclusive,
                _ => Answer::No,
            };
            Ok(exit_for(combined))
        }
        Command::Solsoliton { file } => {
            let Some((tensor, _)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            if !tensor.classify().solvable {
                eprintln!("input is not solvable");
                return Ok(EXIT_INVALID);
            }
            let rep = admits_solsoliton(&tensor)?;
            println!("nonflat_solsoliton: {}", answer_str(rep.nonflat.answer));
            println!("flat: {}", answer_str(rep.flat.answer));
            print_verdict(&rep.nonflat);
            Ok(exit_for(rep.answer()))
        }
        Command::Flow { file, tol, max_time, csv } => {
            let Some((tensor, _)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            if tensor.is_zero() {
                eprintln!("the moment map is undefined at the zero bracket; nothing to flow");
                return Ok(EXIT_INVALID);
            }
            let params = FlowParams { tol, max_time, ..Default::default() };
            let traj = flow(&FloatBracket::from_rational(&tensor), params);
            println!("converged: {}", traj.converged);
            println!("steps: {}", traj.steps);
            println!("time: {:.6}", traj.elapsed_time);
            println!("final_F: {:.12}", traj.final_f);
            println!("final_residual: {:.3e}", traj.final_residual);
            if let Some(path) = csv {
                let mut out = String::from("t,F,residual,derdim\n");
                for s in &traj.samples {
                    out.push_str(&format!("{},{},{},{}\n", s.t, s.f, s.residual, s.derdim));
                }
                write_atomic(&path, &out)?;
                println!("csv: {}", path.display());
            }
            Ok(EXIT_OK)
        }
        Command::Report { file, json } => {
            let start = Instant::now();
            let Some((tensor, meta)) = load_validated(&file)? else {
                return Ok(EXIT_INVALID);
            };
            let class = tensor.classify();
            let mut verdicts: Vec<VerdictJson> = Vec::new();
            let mut worst = Answer::Yes;
            let mut push = |v: &Verdict, worst: &mut Answer| {
                *worst = combine_exit(*worst, v.answer);
                verdicts.push(VerdictJson::from(v));
            };
            if class.nilpotent {
                let v = is_einstein_nilradical(&tensor)?;
                push(&v, &mut worst);
            }
            if class.solvable {
                let f = admits_flat(&tensor)?;
                let n = admits_negative_einstein(&tensor)?;
                let s = admits_solsoliton(&tensor)?;
                push(&f, &mut worst);
                push(&n, &mut worst);
                push(&s.nonflat, &mut worst);
            }
            // Optional candidate splitting: verify and reduce.
            let mut notes = Vec::new();
            if let Some((a_idx, b_idx)) = &meta.splitting {
                let n = tensor.dim();
                let p = Subspace::from_spanning(
                    n,
                    a_idx.iter().map(|&i| basis_vec(n, i - 1)).collect(),
                );
                let q = Subspace::from_spanning(
                    n,
                    b_idx.iter().map(|&i| basis_vec(n, i - 1)).collect(),
                );
                match decide::reduce_direct_sum(&tensor, &p, &q) {
                    Ok(red) => {
                        let la = summand_answers(&red.left)?;
                        let rb = summand_answers(&red.right)?;
                        notes.push(format!(
                            "splitting verified; nonflat solsoliton combination: {}; einstein combination: {}",
                            answer_str(combine_both(la.0, rb.0)),
                            answer_str(combine_einstein(la.1, rb.1)),
                        ));
                    }
                    Err(e) => notes.push(format!("splitting rejected: {e}")),
                }
            }
            let flow_summary: Option<FlowSummaryJson> = verdicts
                .iter()
                .filter_map(|v| v.numeric_evidence.clone())
                .next();
            let report = ReportFile {
                schema_version: SCHEMA_VERSION,
                name: meta.name.clone(),
                input: AlgebraFile::from_tensor(&tensor, meta.name.clone()),
                classification: (&class).into(),
                moment_ricci_kappa: MOMENT_RICCI_KAPPA.to_string(),
                verdicts,
                flow: flow_summary,
                timing_ms: start.elapsed().as_millis(),
            };
            let mut value = serde_json::to_value(&report)?;
            if !notes.is_empty() {
                value["notes"] = serde_json::json!(notes);
            }
            let text = serde_json::to_string_pretty(&value)?;
            match json {
                Some(path) => {
                    write_atomic(&path, &text)?;
                    println!("report: {}", path.display());
                }
                None => println!("{text}"),
            }
            Ok(exit_for(worst))
        }
    }
}

/// Answers for a direct summand: (nonflat solsoliton, Einstein sign).
fn summand_answers(
    t: &BracketTensor,
) -> Result<(Answer, Option<decide::EinsteinSign>)> {
    let class = t.classify();
    if class.nilpotent {
        let v = is_einstein_nilradical(t)?;
        let flat = admits_flat(t)?;
        let neg = admits_negative_einstein(t)?;
        return Ok((v.answer, einstein_sign(&flat, &neg)));
    }
    let s = admits_solsoliton(t)?;
    let flat = admits_flat(t)?;
    let neg = admits_negative_einstein(t)?;
    Ok((s.nonflat.answer, einstein_sign(&flat, &neg)))
}

fn print_verdict(v: &Verdict) {
    println!(
        "{}: {} ({})",
        question_str(v.question),
        answer_str(v.answer),
        match v.certainty {
            decide::Certainty::Exact => "exact",
            decide::Certainty::Numeric => "numeric",
        }
    );
    if let Some(step) = &v.failed_step {
        println!("  failed_step: {step}");
    }
    if let Some(cert) = &v.witnesses.soliton {
        println!("  c: {}", format_rational(&cert.c));
        println!("  D:");
        for row in rational_matrix(&cert.d) {
            println!("    [{}]", row.join(", "));
        }
    }
    if let Some(phi) = &v.witnesses.phi {
        println!("  phi:");
        for row in rational_matrix(phi) {
            println!("    [{}]", row.join(", "));
        }
    }
    if let Some((c, r)) = v.witnesses.soliton_f64 {
        println!("  numeric certificate: c = {c:.9}, residual = {r:.3e}");
    }
    if let Some(ev) = &v.numeric_evidence {
        println!(
            "  flow: converged={} steps={} F={:.9} residual={:.3e} derdim {}→{}",
            ev.converged, ev.steps, ev.final_f, ev.final_residual, ev.der_dim_start, ev.der_dim_limit
        );
    }
    for n in &v.notes {
        println!("  note: {n}");
    }
}

fn exit_for(a: Answer) -> u8 {
    match a {
        Answer::Yes => EXIT_OK,
        Answer::No => EXIT_NO,
        Answer::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn combine_exit(worst: Answer, next: Answer) -> Answer {
    // report exit: inconclusive dominates, then no, then yes
    match (worst, next) {
        (Answer::Inconclusive, _) | (_, Answer::Inconclusive) => Answer::Inconclusive,
        (Answer::No, _) | (_, Answer::No) => Answer::No,
        _ => Answer::Yes,
    }
}
