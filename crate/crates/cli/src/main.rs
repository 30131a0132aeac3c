use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wzcert::fact1::{Mode, SignChoice};
use wzcert::holonomic::{
    gauge_twist, guess_with_schedule, halve_variable, operator_equal_up_to_scalar, reembed, symmetric_square, unroll,
    Recurrence, RecurrenceJson,
};
use wzcert::pipeline::{self, rec2_at, rec2_window_failures, select_columns, unroll_matches, Config};
use wzcert::squares::{extract_table, gauged_columns};
use wzcert::tables::{expand_b, kernel_series, CoeffTable, Exponent, TableJson};
use wzcert::wz::{find_certificate, rec2_from_certificate, verify_certificate_with, Ansatz, Certificate, CertificateJson};
use wzcert::{Error, Poly, Rational, Vars};

const LOG_ENV: &str = "WZCERT_LOG";

#[derive(Parser)]
#[command(name = "wzcert", version, about = "Exact certificates for the Q^(-1/2) coefficient tables")]
struct Cli {
    /// Largest n of the coefficient tables.
    #[arg(long, global = true, default_value_t = 12)]
    nmax: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Standard,
    Printed,
    K0,
}

#[derive(Clone, Copy, ValueEnum)]
enum Column {
    /// Monic square-root factor in `x` with `x² = c`.
    Ell,
    /// Scalar gauge.
    Tau,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficient table of Q^(-1) or Q^(-1/2).
    Expand {
        #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
        exponent: String,
    },
    /// Series check of the Loewner-chain identity.
    Fact1 {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "total")]
        mode: String,
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        sign: String,
    },
    /// Solve for a telescoping certificate.
    FindCert {
        #[arg(long, value_enum, default_value_t = Shape::Standard)]
        ansatz: Shape,
        /// Substitute this k before solving.
        #[arg(long)]
        k: Option<i64>,
    },
    /// Check a certificate exactly and at random points.
    VerifyCert {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Derive the order-3 recurrence and check it against the table.
    Rec2Check {
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Certificate used at k = 0.
        #[arg(long)]
        cert_k0: Option<PathBuf>,
    },
    /// Square certificates for every table entry.
    ExtractSquares {
        /// Table file (JSON or CSV); expanded when absent.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Guess a recurrence for the square-root columns.
    Guess {
        #[arg(long, value_enum, default_value_t = Column::Ell)]
        column: Column,
        /// Columns to fit; more than one gives a recurrence in k.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Data range; windows beyond --nmax are held out.
        #[arg(long, default_value_t = 20)]
        through: usize,
    },
    /// Symmetric square of an order-2 recurrence.
    Symsquare {
        rec: PathBuf,
        /// Order-1 gauge recurrence to twist by.
        #[arg(long)]
        gauge: Option<PathBuf>,
        /// Rewrite in c = x².
        #[arg(long)]
        halve: bool,
        /// Recurrence to compare with up to a scalar; exit code 1 if different.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Forward-generate values from a recurrence.
    Unroll {
        rec: PathBuf,
        /// Initial values separated by ';'.
        #[arg(long)]
        initials: String,
        #[arg(long, default_value_t = 0)]
        n0: i64,
        #[arg(long)]
        n_end: i64,
        /// Parameter values such as k=2.
        #[arg(long = "param", value_delimiter = ',')]
        params: Vec<String>,
        /// Variables of the values.
        #[arg(long, value_delimiter = ',', default_value = "c")]
        vars: Vec<String>,
    },
    /// Run the whole chain and write a report.
    ProveFact2 {
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        cert_k0: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5")]
        uniform_ks: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        guess_nmax: usize,
        #[arg(long, default_value_t = 10)]
        grid: i64,
        #[arg(long, default_value_t = 8)]
        fact1_order: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Error::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn emit(out: &Option<PathBuf>, name: &str, text: &str) -> wzcert::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> wzcert::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn load_cert(path: &Path) -> wzcert::Result<Certificate> {
    let j: CertificateJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    Certificate::from_json(&j)
}

fn load_rec(path: &Path) -> wzcert::Result<Recurrence> {
    let j: RecurrenceJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    Recurrence::from_json(&j)
}

fn load_table(path: &Path) -> wzcert::Result<CoeffTable> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        CoeffTable::from_json(&serde_json::from_str::<TableJson>(&text)?)
    } else {
        CoeffTable::from_csv(text.as_bytes())
    }
}

fn table_text(t: &CoeffTable, format: Format) -> wzcert::Result<String> {
    match format {
        Format::Json => json(&t.to_json()),
        Format::Csv => {
            let mut buf = Vec::new();
            t.to_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
    }
}

fn certs_or_solve(cert: &Option<PathBuf>, cert_k0: &Option<PathBuf>) -> wzcert::Result<(Certificate, Certificate)> {
    let u = match cert {
        Some(p) => load_cert(p)?,
        None => find_certificate(&Ansatz::standard(), None)?,
    };
    let z = match cert_k0 {
        Some(p) => load_cert(p)?,
        None => find_certificate(&Ansatz::k0(), Some(0))?,
    };
    Ok((u, z))
}

fn ok_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: &Cli) -> wzcert::Result<ExitCode> {
    let out = &cli.out;
    match &cli.cmd {
        Cmd::Expand { exponent } => {
            let e = Exponent::parse(exponent).map_err(|_| Error::Usage(format!("exponent must be -1 or -1/2, got `{exponent}`")))?;
            let t = CoeffTable::from_series(e, &kernel_series(e, cli.nmax));
            let name = match (e, cli.format) {
                (Exponent::MinusHalf, Format::Json) => "table_B.json",
                (Exponent::MinusHalf, Format::Csv) => "table_B.csv",
                (Exponent::MinusOne, Format::Json) => "table_A.json",
                (Exponent::MinusOne, Format::Csv) => "table_A.csv",
            };
            emit(out, name, &table_text(&t, cli.format)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fact1 { order, mode, sign } => {
            let mode: Mode = mode.parse()?;
            let sign: SignChoice = sign.parse()?;
            let r = pipeline::run_fact1(*order, mode, sign)?;
            emit(out, "fact1.json", &json(&r.to_json())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FindCert { ansatz, k } => {
            let a = match ansatz {
                Shape::Standard => Ansatz::standard(),
                Shape::Printed => Ansatz::printed(),
                Shape::K0 => Ansatz::k0(),
            };
            let cert = find_certificate(&a, *k)?;
            emit(out, "cert.json", &json(&cert.to_json())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyCert { file, points } => {
            let cert = load_cert(file)?;
            let v = verify_certificate_with(&cert, cli.seed, *points);
            emit(out, "verification.json", &json(&v)?)?;
            Ok(ok_code(v.ok()))
        }
        Cmd::Rec2Check { cert, cert_k0 } => {
            let (u, z) = certs_or_solve(cert, cert_k0)?;
            let ru = rec2_from_certificate(&u)?;
            let rz = rec2_from_certificate(&z)?;
            let b = expand_b(cli.nmax);
            let (checked, bad) = rec2_window_failures(&ru, &b, cli.nmax)?;
            let mut unroll_bad = Vec::new();
            for k in 0..(cli.nmax + 1).saturating_sub(ru.order()) {
                if !unroll_matches(&rec2_at(&ru, Some(&rz), k)?, &b, k)? {
                    unroll_bad.push(k);
                }
            }
            let k0_agrees = operator_equal_up_to_scalar(&rz, &ru.specialize("k", &wzcert::poly::int(0))?);
            let summary = serde_json::json!({
                "recurrence": ru.to_json(),
                "windows_checked": checked,
                "windows_failed": bad,
                "unroll_failed_columns": unroll_bad,
                "k0_certificate_agrees": k0_agrees,
            });
            emit(out, "rec2.json", &json(&summary)?)?;
            Ok(ok_code(bad.is_empty() && unroll_bad.is_empty() && k0_agrees))
        }
        Cmd::ExtractSquares { table } => {
            let b = match table {
                Some(p) => load_table(p)?,
                None => expand_b(cli.nmax),
            };
            if b.exponent != Exponent::MinusHalf {
                return Err(Error::Usage("square certificates are extracted from the -1/2 table".into()));
            }
            let sq = extract_table(&b)?;
            let body = serde_json::json!({ "patterns": sq.patterns, "certificates": sq.to_json() });
            emit(out, "squares.json", &json(&body)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Guess { column, ks, order, through } => {
            let b = expand_b((*through).max(cli.nmax));
            let cols = gauged_columns(&extract_table(&b)?, ks)?;
            let (table, train) = match column {
                Column::Ell => (select_columns(&cols.ell, ks)?, Some(cli.nmax as i64)),
                Column::Tau => (select_columns(&cols.tau, ks)?, None),
            };
            let g = guess_with_schedule(&table, *order, train)?;
            log::info!(
                "{} training windows, {} held out, degrees {:?}",
                g.training_windows,
                g.held_out_windows,
                g.degrees
            );
            emit(out, "recurrence.json", &json(&g.recurrence.to_json())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Symsquare { rec, gauge, halve, compare } => {
            let r = load_rec(rec)?;
            let mut s = symmetric_square(&r)?;
            if *halve {
                s = halve_variable(&s, "x", "c")?;
            }
            if let Some(g) = gauge {
                let g = reembed(&load_rec(g)?, s.vars())?;
                s = gauge_twist(&s, &g)?;
            }
            emit(out, "symsquare.json", &json(&s.to_json())?)?;
            match compare {
                Some(p) => {
                    let other = load_rec(p)?;
                    let other = match (other.vars().index("k"), s.vars().index("k")) {
                        (Some(_), None) => return Err(Error::Usage("comparison recurrence depends on k; specialize it first".into())),
                        _ => other,
                    };
                    let same = operator_equal_up_to_scalar(&s, &other);
                    eprintln!("equal up to scalar: {same}");
                    Ok(ok_code(same))
                }
                None => Ok(ExitCode::SUCCESS),
            }
        }
        Cmd::Unroll { rec, initials, n0, n_end, params, vars } => {
            let r = load_rec(rec)?;
            let vv = Vars::new(vars.clone());
            let init = initials
                .split(';')
                .map(|s| Poly::parse(s.trim(), &vv))
                .collect::<wzcert::Result<Vec<_>>>()?;
            let mut pv: Vec<(String, Rational)> = Vec::new();
            for p in params {
                let (name, value) = p
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("parameter `{p}` must look like name=value")))?;
                pv.push((name.trim().to_string(), wzcert::poly::parse_rational(value.trim())?));
            }
            let pr: Vec<(&str, Rational)> = pv.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
            let vals = unroll(&r, &init, *n0, *n_end, &pr)?;
            let text = match cli.format {
                Format::Json => json(
                    &vals
                        .iter()
                        .enumerate()
                        .map(|(i, v)| serde_json::json!({ "n": *n0 + i as i64, "value": v.to_string() }))
                        .collect::<Vec<_>>(),
                )?,
                Format::Csv => {
                    let mut s = String::from("n,value\n");
                    for (i, v) in vals.iter().enumerate() {
                        s += &format!("{},{}\n", *n0 + i as i64, v);
                    }
                    s
                }
            };
            let name = if cli.format == Format::Csv { "unrolled.csv" } else { "unrolled.json" };
            emit(out, name, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ProveFact2 { cert, cert_k0, ks, uniform_ks, guess_nmax, grid, fact1_order } => {
            let config = Config {
                n_max: cli.nmax,
                guess_n_max: *guess_nmax,
                ks: ks.clone(),
                uniform_ks: uniform_ks.clone(),
                grid_m: *grid,
                seed: cli.seed,
                fact1_order: *fact1_order,
                certificate: cert.as_deref().map(load_cert).transpose()?,
                certificate_k0: cert_k0.as_deref().map(load_cert).transpose()?,
                out_dir: out.clone(),
            };
            let (report, art) = pipeline::run_prove_fact2(&config);
            match out {
                Some(dir) => pipeline::write_outputs(dir, &report, &art)?,
                None => io::stdout().write_all(report.to_json_string()?.as_bytes())?,
            }
            for s in report.failed_steps() {
                eprintln!("step {} failed: {}", s.name, s.detail);
            }
            Ok(ok_code(report.success()))
        }
    }
}
