use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use srgsub::catalog::{catalog, CoefficientTables};
use srgsub::census::{census, pentagon_profile, CensusOptions, Method, DEFAULT_BUDGET, LONG_BUDGET};
use srgsub::expr::Family;
use srgsub::formulas::{all_symbols, FormulaBook};
use srgsub::identities::{check_all, EquationTable};
use srgsub::instances::{bvls243, load_host, order_from_valency, rook9};
use srgsub::verify::{emit_report, verify, ReportFormat, VerifyOptions};
use srgsub::{graph6, Error, Result};

#[derive(Parser)]
#[command(
    name = "srgsub",
    version,
    about = "Subgraph censuses and count identities for srg(n,k,1,2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Instance {
    Rook9,
    Bvls243,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusMethod {
    Brute,
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family member in graph6 format.
    MakeGraph {
        instance: Instance,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the isomorphism classes of one order.
    Catalog {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        feasible_only: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate every closed form at valency k.
    Formulas {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n3: Option<BigInt>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Check every counting relation symbolically.
    Identities {
        /// Specialise residuals to this valency.
        #[arg(long)]
        params: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Count induced subgraphs of one order.
    Census {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "fast")]
        method: CensusMethod,
        /// Raise the brute-force budget.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Histogram of induced pentagons through each induced path on three vertices.
    Pentagons {
        file: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Verify a host graph end to end (exit 0: pass, 2: discrepancies, 1: error).
    Verify {
        file: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        long: bool,
        #[arg(long, value_enum, default_value = "fast")]
        method: CensusMethod,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Regenerate the persisted coefficient tables.
    Tables {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn host_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(ser)?;
    for r in rows {
        w.write_record(r).map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn method(m: CensusMethod) -> Method {
    match m {
        CensusMethod::Brute => Method::Brute,
        CensusMethod::Fast => Method::EsuCompletion,
    }
}

fn budget(long: bool) -> u128 {
    if long {
        LONG_BUDGET
    } else {
        DEFAULT_BUDGET
    }
}

#[derive(Serialize)]
struct FormulaOut {
    symbol: String,
    a: String,
    b: String,
    value: Option<String>,
}

fn run(cli: Cli) -> Result<(String, ExitCode)> {
    let ok = ExitCode::SUCCESS;
    match cli.command {
        Command::MakeGraph { instance, out } => {
            let g = match instance {
                Instance::Rook9 => rook9(),
                Instance::Bvls243 => bvls243()?,
            };
            write_file(&out, &(graph6::write(&g) + "\n"))?;
            Ok((String::new(), ok))
        }
        Command::Catalog {
            order,
            feasible_only,
            format,
        } => {
            let cat = catalog(order)?;
            let classes: Vec<_> = cat.classes().iter().filter(|c| c.feasible || !feasible_only).collect();
            let text = match format {
                Format::Json => json(&classes)?,
                Format::Csv => csv_table(
                    &["index", "code", "edges", "connected", "feasible"],
                    &classes
                        .iter()
                        .map(|c| {
                            vec![
                                c.index.to_string(),
                                c.code.to_string(),
                                c.edges.to_string(),
                                c.connected.to_string(),
                                c.feasible.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            Ok((text, ok))
        }
        Command::Formulas { k, n3, format } => {
            let n = BigInt::from(order_from_valency(k)?);
            let k = BigInt::from(k);
            let book = FormulaBook::builtin();
            let mut rows = Vec::new();
            for s in all_symbols() {
                let c = book.affine(s, &n, &k)?;
                let value = match (&n3, s.family) {
                    (Some(x), _) => Some(c.at(x).to_string()),
                    (None, Family::N) => None,
                    (None, _) => Some(c.a.to_string()),
                };
                rows.push(FormulaOut {
                    symbol: s.to_string(),
                    a: c.a.to_string(),
                    b: c.b.to_string(),
                    value,
                });
            }
            if let Some(x) = &n3 {
                // reports negative or fractional counts without aborting
                if let Err(e) = book.evaluate(&n, &k)?.instantiate(x) {
                    eprintln!("warning: {e}");
                }
            }
            let text = match format {
                Format::Json => json(&rows)?,
                Format::Csv => csv_table(
                    &["index", "a", "b", "value"],
                    &rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.symbol.clone(),
                                r.a.clone(),
                                r.b.clone(),
                                r.value.clone().unwrap_or_default(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            Ok((text, ok))
        }
        Command::Identities { params, format } => {
            if let Some(k) = params {
                order_from_valency(k)?;
            }
            let k = params.map(BigInt::from);
            let report = check_all(EquationTable::builtin(), FormulaBook::builtin(), k.as_ref())?;
            let text = match format {
                Format::Json => json(&report)?,
                Format::Csv => csv_table(
                    &["name", "group", "status", "printed_residual", "repaired_residual"],
                    &report
                        .checks
                        .iter()
                        .map(|c| {
                            vec![
                                c.name.clone(),
                                serde_json::to_value(c.group)
                                    .map(|v| v.as_str().unwrap_or_default().to_string())
                                    .unwrap_or_default(),
                                serde_json::to_value(c.status)
                                    .map(|v| v.as_str().unwrap_or_default().to_string())
                                    .unwrap_or_default(),
                                c.printed.residual.clone(),
                                c.repaired.as_ref().map(|r| r.residual.clone()).unwrap_or_default(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            Ok((text, ok))
        }
        Command::Census {
            file,
            order,
            method: m,
            long,
            threads,
            format,
        } => {
            let g = load_host(&file)?;
            let opts = CensusOptions {
                threads,
                budget: budget(long),
            };
            let result = census(&g, &host_name(&file), order, method(m), opts)?;
            let text = match format {
                Format::Json => json(&result)?,
                Format::Csv => {
                    let cat = catalog(order)?;
                    csv_table(
                        &["index", "code", "edges", "connected", "feasible", "count"],
                        &cat.classes()
                            .iter()
                            .map(|c| {
                                vec![
                                    c.index.to_string(),
                                    c.code.to_string(),
                                    c.edges.to_string(),
                                    c.connected.to_string(),
                                    c.feasible.to_string(),
                                    result.counts[c.index].to_string(),
                                ]
                            })
                            .collect::<Vec<_>>(),
                    )?
                }
            };
            Ok((text, ok))
        }
        Command::Pentagons { file, threads } => {
            let g = load_host(&file)?;
            Ok((json(&pentagon_profile(&g, threads)?)?, ok))
        }
        Command::Verify {
            file,
            threads,
            long,
            method: m,
            out,
            format,
        } => {
            let g = load_host(&file)?;
            let opts = VerifyOptions {
                census: CensusOptions {
                    threads,
                    budget: budget(long),
                },
                method: method(m),
            };
            let report = verify(&g, &host_name(&file), opts)?;
            let format = match format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
            };
            emit_report(&report, &out, format)?;
            let mut summary = format!(
                "{}: n3 = {}, {} discrepancies\n",
                report.host,
                report.measured_n3,
                report.discrepancies.len()
            );
            for d in &report.discrepancies {
                summary.push_str(&format!("  {d}\n"));
            }
            let code = if report.passed { ok } else { ExitCode::from(2) };
            Ok((summary, code))
        }
        Command::Tables { out_dir } => {
            let t = CoefficientTables::compute()?;
            std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
            write_file(&out_dir.join("split.csv"), &t.split_csv())?;
            write_file(&out_dir.join("overlap.csv"), &t.overlap_csv())?;
            Ok((String::new(), ok))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
