mod report;
mod sets;

use std::env;
use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use cartesian_codes::code_core::GeneratorMatrix;
use cartesian_codes::oracle::{verify_with_matrix, EnumerationMode};
use cartesian_codes::{
    build_generator_matrix, degenerate_torus_for_degrees, normalize_spec, verify_params,
    CartesianSpec, CodeParams, DegenerateTorusSpec, Field, FieldElement, OracleBudget,
    OracleOptions, TorusSearch, DEFAULT_MAX_FIELD,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use report::{
    to_json, ConstructReport, ParamsReport, SubgroupReport, TableReport, TableRow, VerifyReport,
};
use sets::SetExpr;

const MAX_FIELD_VAR: &str = "CARTESIAN_MAX_FIELD";

/// Affine cartesian evaluation codes: parameters, matrices and checks.
#[derive(Parser)]
#[command(name = "cartesian", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Length, dimension and minimum distance of one code.
    Params(ParamsArgs),
    /// Parameters for d = 1..dmax.
    Table(TableArgs),
    /// Generator matrix and its monomial legend.
    Matrix(MatrixArgs),
    /// Compare the formulas with exhaustive search.
    Verify(VerifyArgs),
    /// Degenerate torus with prescribed subgroup orders.
    Construct(ConstructArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Field order, a prime power.
    #[arg(long)]
    q: u64,
    /// Extension degree of F_q over its prime field, or `auto`.
    #[arg(long, default_value = "auto")]
    ext: String,
    /// Comma-separated sets: full, units, subgroup:k or {c1,c2,...};
    /// `item×k` or `item*k` repeats an item.
    #[arg(long)]
    sets: String,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    d: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Md,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, requires = "sets", conflicts_with = "torus")]
    q: Option<u64>,
    #[arg(long, default_value = "auto")]
    ext: String,
    #[arg(long, requires = "q")]
    sets: Option<String>,
    /// Subgroup orders of a degenerate torus, instead of --q/--sets.
    #[arg(long, value_delimiter = ',', required_unless_present = "q")]
    torus: Option<Vec<u64>>,
    #[arg(long, requires = "torus")]
    allow_prime_powers: bool,
    /// Largest degree; defaults to the regularity.
    #[arg(long)]
    dmax: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    d: u64,
    /// Output file; the legend goes to `<out>.monomials`. Without it the
    /// matrix is printed.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("degree").required(true).args(["d", "dall"])))]
struct VerifyArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    d: Option<u64>,
    /// Every d from 1 to the regularity.
    #[arg(long)]
    dall: bool,
    #[arg(long)]
    max_words: Option<u64>,
    #[arg(long)]
    max_points: Option<u64>,
    /// Re-encode every message instead of stepping incrementally.
    #[arg(long)]
    naive: bool,
    /// Stop the distance scan once a word of the predicted weight appears.
    #[arg(long)]
    confirm_only: bool,
    /// Record elapsed time per check (makes output vary between runs).
    #[arg(long)]
    timing: bool,
    /// Verify a generator matrix with a dependent row.
    #[arg(long, hide = true)]
    corrupt_fixture: bool,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u64>,
    /// Accept the smallest prime power rather than the smallest prime.
    #[arg(long)]
    allow_prime_powers: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Failed,
}

impl CliError {
    fn usage(e: impl ToString) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn max_field() -> Result<u64, CliError> {
    match env::var(MAX_FIELD_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&cap| cap >= 2)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{MAX_FIELD_VAR} must be an integer >= 2, got {v:?}"
                ))
            }),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_MAX_FIELD),
        Err(e) => Err(CliError::Usage(format!("{MAX_FIELD_VAR}: {e}"))),
    }
}

fn build_field(q: u64, ext: &str) -> Result<Arc<Field>, CliError> {
    let field = Field::with_order(q, max_field()?).map_err(CliError::usage)?;
    if ext != "auto" {
        let e: u32 = ext.parse().map_err(|_| {
            CliError::Usage(format!(
                "--ext must be `auto` or a positive integer, got {ext:?}"
            ))
        })?;
        if e != field.degree() {
            return Err(CliError::Usage(format!(
                "q = {q} is {}^{}, not an extension of degree {e}",
                field.characteristic(),
                field.degree()
            )));
        }
    }
    Ok(Arc::new(field))
}

fn build_spec(q: u64, ext: &str, sets: &str, d: u64) -> Result<CartesianSpec, CliError> {
    let field = build_field(q, ext)?;
    let sets = SetExpr::parse_list(sets)
        .map_err(CliError::Usage)?
        .iter()
        .map(|s| s.resolve(&field))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Usage)?;
    normalize_spec(field, sets, d).map_err(CliError::usage)
}

fn build_torus(degrees: &[u64], allow_prime_powers: bool) -> Result<DegenerateTorusSpec, CliError> {
    let search = TorusSearch {
        allow_prime_powers,
        max_field: max_field()?,
    };
    degenerate_torus_for_degrees(degrees, &search).map_err(CliError::usage)
}

fn codes(xs: &[FieldElement]) -> Vec<u32> {
    xs.iter().map(|x| x.code()).collect()
}

fn params(args: &ParamsArgs) -> Result<String, CliError> {
    let g = &args.grid;
    let spec = build_spec(g.q, &g.ext, &g.sets, args.d)?;
    let report = ParamsReport::new(
        spec.field().order(),
        spec.grid().cards(),
        args.d,
        &spec.params(),
    );
    Ok(to_json(&report))
}

fn table(args: &TableArgs) -> Result<String, CliError> {
    let (q, cards, v) = match (&args.torus, args.q, &args.sets) {
        (Some(degrees), _, _) => {
            let torus = build_torus(degrees, args.allow_prime_powers)?;
            let spec = torus.code(0).map_err(CliError::usage)?;
            (
                torus.field().order(),
                spec.cards(),
                Some(torus.v().to_vec()),
            )
        }
        (None, Some(q), Some(sets)) => {
            let spec = build_spec(q, &args.ext, sets, 0)?;
            (spec.field().order(), spec.cards(), None)
        }
        _ => {
            return Err(CliError::usage(
                "either --torus or both --q and --sets are required",
            ))
        }
    };
    let dmax = args.dmax.unwrap_or_else(|| cards.regularity().max(1));
    if dmax == 0 {
        return Err(CliError::usage("--dmax must be at least 1"));
    }
    let rows = (1..=dmax)
        .map(|d| TableRow::new(d, &CodeParams::compute(&cards, d)))
        .collect();
    let report = TableReport {
        q,
        cards: cards.as_slice().to_vec(),
        v,
        rows,
    };
    Ok(match args.format {
        TableFormat::Csv => report.to_csv(),
        TableFormat::Json => to_json(&report),
        TableFormat::Md => report.to_markdown(),
    })
}

fn matrix(args: &MatrixArgs) -> Result<String, CliError> {
    let g = &args.grid;
    let spec = build_spec(g.q, &g.ext, &g.sets, args.d)?;
    let m = build_generator_matrix(&spec);
    let Some(path) = &args.out else {
        return Ok(m.to_matrix_text());
    };
    let legend = format!("{path}.monomials");
    fs::write(path, m.to_matrix_text()).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    fs::write(&legend, m.to_legend_text())
        .map_err(|e| CliError::Usage(format!("{legend}: {e}")))?;
    eprintln!("wrote {} x {} matrix to {path}", m.nrows(), m.ncols());
    Ok(String::new())
}

/// Replaces the last row by a copy of the first (or zeros, for a single
/// row), so the rank check must fail.
fn corrupt(m: &GeneratorMatrix) -> GeneratorMatrix {
    let mut rows = m.rows().to_vec();
    let last = rows.len() - 1;
    rows[last] = if last > 0 {
        rows[0].clone()
    } else {
        vec![FieldElement::ZERO; m.ncols()]
    };
    GeneratorMatrix::from_parts(m.field().clone(), m.monomials().to_vec(), rows)
        .expect("shape is unchanged")
}

fn verify(args: &VerifyArgs) -> Result<String, CliError> {
    let g = &args.grid;
    let spec = build_spec(g.q, &g.ext, &g.sets, 0)?;
    let defaults = OracleBudget::default();
    let budget = OracleBudget {
        max_words: args.max_words.unwrap_or(defaults.max_words),
        max_points: args.max_points.unwrap_or(defaults.max_points),
        ..defaults
    };
    let options = OracleOptions {
        mode: if args.naive {
            EnumerationMode::Naive
        } else {
            EnumerationMode::Incremental
        },
        confirm_target: args.confirm_only.then_some(0),
        chunks: None,
        timing: args.timing,
    };
    let degrees: Vec<u64> = match args.d {
        Some(d) => vec![d],
        None => (1..=spec.cards().regularity().max(1)).collect(),
    };
    let reports: Vec<_> = degrees
        .into_iter()
        .map(|d| {
            let s = spec.with_degree(d);
            if args.corrupt_fixture {
                verify_with_matrix(&s, &corrupt(&build_generator_matrix(&s)), &budget, &options)
            } else {
                verify_params(&s, &budget, &options)
            }
        })
        .collect();
    let passed = reports.iter().all(|r| r.passed());
    let fully_verified = reports.iter().all(|r| r.fully_verified());
    let text = to_json(&VerifyReport {
        passed,
        fully_verified,
        reports,
    });
    if passed {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Failed)
    }
}

fn construct(args: &ConstructArgs) -> Result<String, CliError> {
    let torus = build_torus(&args.degrees, args.allow_prime_powers)?;
    let field = torus.field();
    let cards = torus.cards();
    let subgroups = torus
        .grid()
        .sets()
        .iter()
        .zip(torus.degrees())
        .map(|(set, &order)| {
            let g = field.subgroup_of_order(order).map_err(CliError::usage)?;
            Ok(SubgroupReport {
                order,
                generator: g.generator().code(),
                elements: codes(set),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let regularity = cards.regularity();
    let report = ConstructReport {
        q: field.order(),
        p: field.characteristic(),
        e: field.degree(),
        degrees: torus.degrees().to_vec(),
        v: torus.v().to_vec(),
        subgroups,
        regularity,
        table: (1..=regularity)
            .map(|d| TableRow::new(d, &torus.params(d)))
            .collect(),
    };
    Ok(to_json(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Params(a) => params(a),
        Command::Table(a) => table(a),
        Command::Matrix(a) => matrix(a),
        Command::Verify(a) => verify(a),
        Command::Construct(a) => construct(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed) => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
