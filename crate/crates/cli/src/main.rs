mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use mldlab_core::{
    build_family, certify, closed_form_mld, cyclic_quotient_mld, hypersurface_quotient_mld, nu_bounds,
    sequence_form_mld, verify_mld_identity, BigInt, CertifyOptions, FamilyCertificate, FamilyMember,
    QuotientSingularity, ScanOptions, WeightedPolynomial, DEFAULT_BUDGET,
};
use serde_json::json;

use report::{mld_table, render, tex_rational, tex_row, witness_text, Format, ReportDocument, Table, Timing};

/// Weights of members past this index run to hundreds of thousands of digits.
const MAX_N: usize = 20;
/// Weight lists longer than this many characters are summarized in tables.
const WEIGHT_TEXT_LIMIT: usize = 80;

#[derive(Parser, Debug)]
#[command(name = "mldlab", version, about = "Exact mld and α-invariant checks for weighted hypersurfaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads for group scans.
    #[arg(long, global = true, env = "MLDLAB_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..=1024))]
    workers: u32,
    /// Largest enumeration carried out in full.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Scan every group element at the non-quasismooth point.
    #[arg(long, global = true)]
    brute_force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the data of the family member X_n.
    Family { n: usize },
    /// Run every check on X_n; exit code 1 if one fails.
    Verify { n: usize },
    /// Run an mld engine on user data.
    Mld {
        #[command(subcommand)]
        kind: MldCommand,
    },
    /// One row per family member.
    Table {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MldCommand {
    /// Cyclic quotient singularity 1/r(w_1, ..., w_s).
    Quotient {
        r: BigInt,
        #[arg(required = true, allow_negative_numbers = true)]
        weights: Vec<BigInt>,
    },
    /// Hypersurface {f = 0}/μ_r from a chart file.
    Hypersurface {
        #[arg(long)]
        chart: PathBuf,
        #[arg(long)]
        group: BigInt,
        /// Comma-separated group weights; defaults to the chart's weight line.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        weights: Option<Vec<BigInt>>,
    },
}

struct Outcome {
    doc: ReportDocument,
    table: Table,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let format = cli.format;
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match render(&outcome.doc, &outcome.table, format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn scan_options(workers: usize) -> ScanOptions {
    let mut opts = ScanOptions::with_workers(workers);
    opts.progress = Some(Arc::new(|done, total| {
        eprintln!("progress: {done}/{total} candidates");
    }));
    opts
}

fn member(n: usize) -> Result<FamilyMember> {
    if n > MAX_N {
        bail!("n = {n} is too large; members up to n = {MAX_N} are supported");
    }
    Ok(build_family(n)?)
}

fn run(cli: Cli) -> Result<Outcome> {
    let workers = cli.workers as usize;
    let mut timing = Timing::new(workers);
    let certify_options =
        CertifyOptions { brute_force: cli.brute_force, budget: cli.budget, scan: scan_options(workers) };
    match cli.command {
        Command::Family { n } => {
            let f = timing.measure("build", || member(n))?;
            let alpha = timing.measure("alpha", || nu_bounds(&f));
            let mld = closed_form_mld(&f);
            let table = Table {
                header: vec![
                    "n",
                    "parity",
                    "weights",
                    "d",
                    "b",
                    "c",
                    "mld",
                    "mld_sequence_form",
                    "alpha_lower",
                    "alpha_upper",
                ],
                rows: vec![vec![
                    n.to_string(),
                    format!("{:?}", f.parity).to_lowercase(),
                    join(&f.a),
                    f.d.to_string(),
                    f.b.to_string(),
                    f.c.to_string(),
                    mld.to_string(),
                    sequence_form_mld(&f).to_string(),
                    alpha.lower.to_string(),
                    alpha.upper.to_string(),
                ]],
                tex: vec![tex_summary_row(&f, &mld, &alpha.lower, &alpha.upper)],
            };
            let results = json!({
                "member": f,
                "closed_form_mld": mld,
                "sequence_form_mld": sequence_form_mld(&f),
                "mld_identity_ok": verify_mld_identity(&f),
                "alpha": alpha,
            });
            Ok(Outcome { doc: document("family", json!({ "n": n }), results, timing), table, passed: true })
        }
        Command::Verify { n } => {
            let f = timing.measure("build", || member(n))?;
            if cli.brute_force && f.a_last() > &BigInt::from(cli.budget) {
                eprintln!("note: a_(n+1) = {} exceeds the budget {}; full scan skipped", f.a_last(), cli.budget);
            }
            let cert = timing.measure("certify", || certify(f, &certify_options))?;
            let passed = cert.all_passed();
            let table = Table {
                header: vec![
                    "n",
                    "passed",
                    "closed_form_mld",
                    "brute_force_mld",
                    "witness",
                    "other_points_ok",
                    "tangent_cone_klt_ok",
                    "alpha_lower",
                    "alpha_upper",
                ],
                rows: vec![verify_row(&cert)],
                tex: vec![tex_summary_row(&cert.member, &cert.closed_form_mld, &cert.alpha.lower, &cert.alpha.upper)],
            };
            let inputs = json!({ "n": n, "brute_force": cli.brute_force, "budget": cli.budget });
            Ok(Outcome { doc: document("verify", inputs, serde_json::to_value(&cert)?, timing), table, passed })
        }
        Command::Mld { kind: MldCommand::Quotient { r, weights } } => {
            let inputs = json!({ "r": r.to_string(), "weights": strings(&weights) });
            let q = QuotientSingularity::new(r, weights)?;
            let result = timing.measure("scan", || cyclic_quotient_mld(&q, &certify_options.scan))?;
            let table = mld_table(&result);
            Ok(Outcome {
                doc: document("mld quotient", inputs, serde_json::to_value(&result)?, timing),
                table,
                passed: true,
            })
        }
        Command::Mld { kind: MldCommand::Hypersurface { chart, group, weights } } => {
            let text = std::fs::read_to_string(&chart).with_context(|| format!("reading {}", chart.display()))?;
            let poly =
                WeightedPolynomial::parse_chart(&text).with_context(|| format!("parsing {}", chart.display()))?;
            let weights = weights.unwrap_or_else(|| poly.weights().as_slice().to_vec());
            let inputs = json!({
                "chart": poly.to_string(),
                "group": group.to_string(),
                "weights": strings(&weights),
            });
            let result =
                timing.measure("scan", || hypersurface_quotient_mld(&poly, &group, &weights, &certify_options.scan))?;
            let table = mld_table(&result);
            Ok(Outcome {
                doc: document("mld hypersurface", inputs, serde_json::to_value(&result)?, timing),
                table,
                passed: true,
            })
        }
        Command::Table { from, to } => {
            if from < 2 || from > to {
                bail!("expected 2 <= from <= to, got from = {from}, to = {to}");
            }
            let mut rows = Vec::new();
            let mut csv_rows = Vec::new();
            let mut tex = Vec::new();
            let mut passed = true;
            for n in from..=to {
                let f = member(n)?;
                let cert = timing.measure(&format!("n={n}"), || certify(f, &certify_options))?;
                let ok = cert.all_passed();
                passed &= ok;
                let weights = elided_weights(&cert.member.a);
                rows.push(json!({
                    "n": n,
                    "weights": weights,
                    "d": cert.member.d.to_string(),
                    "mld": cert.closed_form_mld,
                    "mld_sequence_form": cert.sequence_form_mld,
                    "alpha_lower": cert.alpha.lower,
                    "alpha_upper": cert.alpha.upper,
                    "certified": ok,
                }));
                csv_rows.push(vec![
                    n.to_string(),
                    weights,
                    cert.member.d.to_string(),
                    cert.closed_form_mld.to_string(),
                    cert.sequence_form_mld.to_string(),
                    cert.alpha.lower.to_string(),
                    cert.alpha.upper.to_string(),
                    ok.to_string(),
                ]);
                tex.push(tex_summary_row(&cert.member, &cert.closed_form_mld, &cert.alpha.lower, &cert.alpha.upper));
            }
            let table = Table {
                header: vec![
                    "n",
                    "weights",
                    "d",
                    "mld",
                    "mld_sequence_form",
                    "alpha_lower",
                    "alpha_upper",
                    "certified",
                ],
                rows: csv_rows,
                tex,
            };
            let inputs = json!({ "from": from, "to": to, "brute_force": cli.brute_force, "budget": cli.budget });
            Ok(Outcome { doc: document("table", inputs, json!({ "rows": rows }), timing), table, passed })
        }
    }
}

fn document(command: &str, inputs: serde_json::Value, results: serde_json::Value, timing: Timing) -> ReportDocument {
    ReportDocument { schema_version: report::SCHEMA_VERSION, command: command.to_string(), inputs, results, timing }
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn join(v: &[BigInt]) -> String {
    strings(v).join(", ")
}

fn elided_weights(a: &[BigInt]) -> String {
    let full = join(a);
    if full.len() <= WEIGHT_TEXT_LIMIT {
        return full;
    }
    let digits = a.iter().map(|x| x.to_string().len()).max().unwrap_or(0);
    format!("{} weights, up to {digits} digits", a.len())
}

fn verify_row(cert: &FamilyCertificate) -> Vec<String> {
    let scan = cert.nonquasismooth.full_scan.as_ref();
    vec![
        cert.member.n.to_string(),
        cert.all_passed().to_string(),
        cert.closed_form_mld.to_string(),
        scan.map(|r| r.value.to_string()).unwrap_or_default(),
        scan.map(|r| witness_text(r.witness.as_ref())).unwrap_or_default(),
        cert.other_points.passed.to_string(),
        cert.tangent_cone_klt_ok.to_string(),
        cert.alpha.lower.to_string(),
        cert.alpha.upper.to_string(),
    ]
}

fn tex_summary_row(
    f: &FamilyMember,
    mld: &mldlab_core::Rational,
    lower: &mldlab_core::Rational,
    upper: &mldlab_core::Rational,
) -> String {
    tex_row(&[
        f.n.to_string(),
        f.d.to_string(),
        format!("${}$", tex_rational(mld)),
        format!("${}$", tex_rational(lower)),
        format!("${}$", tex_rational(upper)),
    ])
}
