mod commands;
mod records;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::{CliError, CliResult};
use records::Row;

/// Decide solvability of x² − Dy² = n by symbol criteria, checked against a Pell oracle.
#[derive(Debug, Parser)]
#[command(name = "pellcrit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide x² − Dy² = n with the most specific criterion and cross-check the oracle.
    Decide {
        #[arg(value_name = "D")]
        d: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Which of x² − pqy² = −1, p, q is solvable.
    ClassifyPq { p: u64, q: u64 },
    /// Which of x² − 2py² = −1, 2, −2 is solvable.
    #[command(name = "classify-2p")]
    Classify2p { p: u64 },
    /// Criteria against the oracle over a whole range, one record per instance.
    Scan {
        #[arg(long, value_enum)]
        family: ScanFamily,
        #[arg(long, value_name = "M")]
        max: u64,
        #[arg(long, value_name = "J")]
        jobs: Option<usize>,
    },
    /// Θ-character values for D = 2d against their closed forms.
    VerifyLemmas {
        #[arg(long, value_enum)]
        family: CharacterFamily,
        #[arg(long, value_name = "M")]
        max: u64,
        #[arg(long, value_name = "J")]
        jobs: Option<usize>,
    },
    /// Write a classification table to a file.
    Table {
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "2p")]
        family: TableFamily,
        #[arg(long, value_name = "M", default_value_t = 200)]
        max: u64,
        #[arg(long, value_name = "J")]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScanFamily {
    Pq,
    #[value(name = "2p")]
    TwoP,
    #[value(name = "221")]
    D221,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CharacterFamily {
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFamily {
    Pq,
    #[value(name = "2p")]
    TwoP,
    #[value(name = "221")]
    D221,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Serialized records plus the instances where criteria and oracle disagree.
struct Output {
    json: Vec<String>,
    rows: Vec<Row>,
    mismatches: Vec<String>,
}

impl Output {
    fn new() -> Self {
        Output {
            json: Vec::new(),
            rows: Vec::new(),
            mismatches: Vec::new(),
        }
    }

    fn push<T: Serialize>(&mut self, record: &T, row: Row) {
        let line = serde_json::to_string(record).expect("records serialize");
        if !row.agree {
            self.mismatches.push(line.clone());
        }
        self.json.push(line);
        self.rows.push(row);
    }
}

fn collect(family: TableFamily, max: u64, jobs: Option<usize>) -> CliResult<Output> {
    let config = commands::oracle_config()?;
    let mut out = Output::new();
    match family {
        TableFamily::Pq => {
            let recs = commands::run_all(commands::pq_pairs(max), jobs, |(p, q)| commands::classify_pq(p, q, &config))?;
            for r in &recs {
                out.push(r, Row::from_classification("pq", r));
            }
        }
        TableFamily::TwoP => {
            let recs = commands::run_all(commands::odd_primes(max), jobs, |p| commands::classify_2p(p, &config))?;
            for r in &recs {
                out.push(r, Row::from_classification("2p", r));
            }
        }
        TableFamily::D221 => {
            let m = i64::try_from(max).map_err(|_| CliError::Usage(format!("--max {max} is too large")))?;
            let ns: Vec<i64> = (-m..=m).filter(|&n| n != 0).collect();
            let recs = commands::run_all(ns, jobs, |n| commands::decide_221(n, &config))?;
            for r in &recs {
                out.push(r, Row::from_query("221", r));
            }
        }
        TableFamily::TwoD => {
            let recs = commands::run_all(commands::two_d_values(max), jobs, commands::check_characters)?;
            for r in &recs {
                out.push(r, Row::from_characters(r));
            }
        }
    }
    Ok(out)
}

fn emit_lines(lines: &[String]) -> io::Result<()> {
    let mut stdout = BufWriter::new(io::stdout().lock());
    for l in lines {
        writeln!(stdout, "{l}")?;
    }
    stdout.flush()
}

fn finish(out: &Output) -> CliResult<()> {
    match out.mismatches.first() {
        None => Ok(()),
        Some(first) => Err(CliError::Inconsistent(format!(
            "{} record(s) where criteria and oracle disagree, first: {first}",
            out.mismatches.len()
        ))),
    }
}

fn write_table(out: &Output, format: Format, path: &PathBuf) -> io::Result<()> {
    let file = File::create(path)?;
    match format {
        Format::Json => {
            let mut w = BufWriter::new(file);
            for l in &out.json {
                writeln!(w, "{l}")?;
            }
            w.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(file);
            for r in &out.rows {
                w.serialize(r)?;
            }
            w.flush()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let io_err = |e: io::Error| CliError::Usage(e.to_string());
    match cli.command {
        Command::Decide { d, n } => {
            let r = commands::decide(d, n, &commands::oracle_config()?)?;
            let mut out = Output::new();
            out.push(&r, Row::from_query("decide", &r));
            emit_lines(&out.json).map_err(io_err)?;
            finish(&out)
        }
        Command::ClassifyPq { p, q } => {
            let r = commands::classify_pq(p, q, &commands::oracle_config()?)?;
            let mut out = Output::new();
            out.push(&r, Row::from_classification("pq", &r));
            emit_lines(&out.json).map_err(io_err)?;
            finish(&out)
        }
        Command::Classify2p { p } => {
            let r = commands::classify_2p(p, &commands::oracle_config()?)?;
            let mut out = Output::new();
            out.push(&r, Row::from_classification("2p", &r));
            emit_lines(&out.json).map_err(io_err)?;
            finish(&out)
        }
        Command::Scan { family, max, jobs } => {
            let family = match family {
                ScanFamily::Pq => TableFamily::Pq,
                ScanFamily::TwoP => TableFamily::TwoP,
                ScanFamily::D221 => TableFamily::D221,
            };
            let out = collect(family, max, jobs)?;
            emit_lines(&out.json).map_err(io_err)?;
            finish(&out)
        }
        Command::VerifyLemmas { family: CharacterFamily::TwoD, max, jobs } => {
            let out = collect(TableFamily::TwoD, max, jobs)?;
            emit_lines(&out.json).map_err(io_err)?;
            finish(&out)
        }
        Command::Table {
            format,
            out: path,
            family,
            max,
            jobs,
        } => {
            let out = collect(family, max, jobs)?;
            write_table(&out, format, &path).map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))?;
            finish(&out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pellcrit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
