//! Command-line surface: argument definitions, command execution and the
//! JSON/CSV output document.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, ToPrimitive};
use serde_json::{Map, Number, Value};

use crate::checks;
use crate::graphs::{graph_counts, GraphError};
use crate::moments::{mean_displacement, moment_report, second_factorial_moment, MomentError};
use crate::parking::{confined_count, confined_poly_with, displacement_poly_with, ParkingError, ParkingTable};
use crate::polyalg::{format_decimal, format_rational, Integer, Rational};
use crate::simulate::{self, exhaustive_distribution_limited, monte_carlo, SimError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default largest `n` for `parking`.
pub const PARKING_CAP: usize = 100;
/// Default largest `n` for `dist`.
pub const DIST_CAP: usize = 40;
/// Default largest vertex count for `graphs`.
pub const GRAPHS_CAP: usize = 30;

#[derive(Debug, Parser)]
#[command(
    name = "linprobe",
    version,
    about = "Exact displacement distributions and moments for linear probing"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Render rationals as decimals with this many digits instead of p/q
    #[arg(long, value_name = "K", global = true)]
    pub decimal: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of the parking polynomial F_n(x)
    Parking {
        n: usize,
        /// Override the size cap on n
        #[arg(long, default_value_t = PARKING_CAP)]
        max: usize,
    },
    /// Distribution of total displacement for n items in m cells
    Dist {
        m: usize,
        n: usize,
        /// Only hash sequences that leave cell 0 empty
        #[arg(long)]
        confined: bool,
        /// Override the size cap on n
        #[arg(long, default_value_t = DIST_CAP)]
        max: usize,
    },
    /// Exact moments of total displacement
    Moments { m: usize, n: usize },
    /// Connected labelled graphs on a vertex count, by edges
    Graphs {
        vertices: usize,
        /// Override the size cap on the vertex count
        #[arg(long, default_value_t = GRAPHS_CAP)]
        max: usize,
    },
    /// Run linear probing: seeded Monte Carlo or full enumeration
    Simulate {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Enumerate all m^n hash sequences instead of sampling
        #[arg(long)]
        exhaustive: bool,
        /// Override the m^n cap for --exhaustive
        #[arg(long, default_value_t = simulate::EXHAUSTIVE_LIMIT)]
        max: u64,
    },
    /// Run every cross-route identity check
    Selfcheck,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<ParkingError> for CliError {
    fn from(err: ParkingError) -> Self {
        match err {
            ParkingError::TableTooSmall { .. } => CliError::Usage(err.to_string()),
            ParkingError::Inconsistent(_) => CliError::Internal(err.to_string()),
        }
    }
}

impl From<MomentError> for CliError {
    fn from(err: MomentError) -> Self {
        match err {
            MomentError::InvalidInstance { .. } | MomentError::OrderUnavailable(_) => CliError::Usage(err.to_string()),
            MomentError::Parking(inner) => inner.into(),
            _ => CliError::Internal(err.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(err: GraphError) -> Self {
        match err {
            GraphError::IdentityFailed { .. } => CliError::Internal(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        match err {
            SimError::SymmetryViolation { .. } => CliError::Internal(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

/// A cell of the output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(Integer),
    Ratio(Rational),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v.into())
    }
}

impl From<Integer> for Cell {
    fn from(v: Integer) -> Self {
        Cell::Int(v)
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Ratio(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Result of one command: metadata, a summary map and a table.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDocument {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, Cell)>,
    pub summary: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// How rationals are rendered.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rendering {
    pub decimal: Option<usize>,
}

impl Rendering {
    fn json(&self, cell: &Cell) -> Value {
        match cell {
            // integers stay exact JSON numbers of any size
            Cell::Int(v) => Value::Number(v.to_string().parse::<Number>().expect("integer literal")),
            Cell::Ratio(q) => Value::String(self.ratio(q)),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Missing => Value::Null,
        }
    }

    fn ratio(&self, q: &Rational) -> String {
        match self.decimal {
            Some(digits) => format_decimal(q, digits),
            None => format_rational(q),
        }
    }

    fn csv(&self, cell: &Cell) -> String {
        match cell {
            Cell::Int(v) => v.to_string(),
            Cell::Ratio(q) => self.ratio(q),
            Cell::Text(s) => csv_escape(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl OutputDocument {
    pub fn to_json_value(&self, rendering: Rendering) -> Value {
        let pairs = |items: &[(&'static str, Cell)]| -> Value {
            Value::Object(
                items
                    .iter()
                    .map(|(k, v)| (k.to_string(), rendering.json(v)))
                    .collect::<Map<_, _>>(),
            )
        };
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), rendering.json(v)))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.into()));
        doc.insert("version".into(), Value::String(VERSION.into()));
        doc.insert("parameters".into(), pairs(&self.parameters));
        doc.insert("summary".into(), pairs(&self.summary));
        doc.insert(
            "columns".into(),
            Value::Array(self.columns.iter().map(|c| Value::String(c.to_string())).collect()),
        );
        doc.insert("rows".into(), Value::Array(rows));
        Value::Object(doc)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self, rendering: Rendering) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json_value(rendering)).expect("serializable");
        out.push('\n');
        out
    }

    /// Metadata as `# key: value` comment lines, then a header and the rows.
    pub fn to_csv(&self, rendering: Rendering) -> String {
        let mut out = String::new();
        writeln!(out, "# command: {}", self.command).unwrap();
        writeln!(out, "# version: {VERSION}").unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "# parameter {k}: {}", rendering.csv(v)).unwrap();
        }
        for (k, v) in &self.summary {
            writeln!(out, "# summary {k}: {}", rendering.csv(v)).unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| rendering.csv(c)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn render(&self, format: Format, rendering: Rendering) -> String {
        match format {
            Format::Json => self.to_json(rendering),
            Format::Csv => self.to_csv(rendering),
        }
    }
}

fn coefficient_rows(coeffs: &[Integer]) -> Vec<Vec<Cell>> {
    coeffs
        .iter()
        .enumerate()
        .map(|(d, c)| vec![d.into(), c.clone().into()])
        .collect()
}

fn check_cap(what: &str, value: usize, cap: usize) -> Result<(), CliError> {
    if value > cap {
        return Err(CliError::Usage(format!(
            "{what} = {value} exceeds the cap of {cap}; raise it with --max"
        )));
    }
    Ok(())
}

/// Runs one command. On `selfcheck` failures the document is still produced
/// and the error carries it.
/// A failed command, with the partial document when there is one.
pub type Failure = Box<(CliError, Option<OutputDocument>)>;

pub fn execute(command: &Command) -> Result<OutputDocument, Failure> {
    let plain = |e: CliError| Box::new((e, None));
    match *command {
        Command::Parking { n, max } => {
            check_cap("n", n, max).map_err(plain)?;
            let mut table = ParkingTable::new();
            let poly = table.get(n).clone();
            Ok(OutputDocument {
                command: "parking",
                parameters: vec![("n", n.into())],
                summary: vec![
                    ("degree", poly.degree().unwrap_or(0).into()),
                    ("total", poly.eval(&Integer::one()).into()),
                ],
                columns: vec!["d", "count"],
                rows: coefficient_rows(poly.coeffs()),
            })
        }
        Command::Dist { m, n, confined, max } => {
            check_cap("n", n, max).map_err(plain)?;
            let mut table = ParkingTable::new();
            let (poly, normalization) = if confined {
                let f = confined_poly_with(&mut table, m, n).map_err(|e| plain(e.into()))?;
                (f.poly, confined_count(m, n))
            } else {
                let d = displacement_poly_with(&mut table, m, n).map_err(|e| plain(e.into()))?;
                (d.poly, d.normalization)
            };
            let mean = Rational::new(poly.binomial_moment(1), normalization.clone());
            Ok(OutputDocument {
                command: "dist",
                parameters: vec![("m", m.into()), ("n", n.into()), ("confined", confined.into())],
                summary: vec![("normalization", normalization.into()), ("mean_d", mean.into())],
                columns: vec!["d", "count"],
                rows: coefficient_rows(poly.coeffs()),
            })
        }
        Command::Moments { m, n } => {
            let report = moment_report(m, n).map_err(|e| plain(e.into()))?;
            let rows = report
                .fields()
                .into_iter()
                .map(|(name, value)| vec![name.into(), value.cloned().map_or(Cell::Missing, Cell::Ratio)])
                .collect();
            Ok(OutputDocument {
                command: "moments",
                parameters: vec![("m", m.into()), ("n", n.into())],
                summary: Vec::new(),
                columns: vec!["quantity", "value"],
                rows,
            })
        }
        Command::Graphs { vertices, max } => {
            check_cap("vertices", vertices, max).map_err(plain)?;
            let counts = graph_counts(vertices).map_err(|e| plain(e.into()))?;
            Ok(OutputDocument {
                command: "graphs",
                parameters: vec![("vertices", vertices.into())],
                summary: vec![("total", counts.total_for(vertices).into())],
                columns: vec!["edges", "count"],
                rows: counts
                    .rows_for(vertices)
                    .into_iter()
                    .map(|(e, c)| vec![e.into(), c.into()])
                    .collect(),
            })
        }
        Command::Simulate {
            m,
            n,
            trials,
            seed,
            exhaustive,
            max,
        } => simulate_document(m, n, trials, seed, exhaustive, max).map_err(plain),
        Command::Selfcheck => {
            let outcomes = checks::run_all();
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            let doc = OutputDocument {
                command: "selfcheck",
                parameters: Vec::new(),
                summary: vec![("checks", outcomes.len().into()), ("failed", failed.into())],
                columns: vec!["check", "status", "detail"],
                rows: outcomes
                    .iter()
                    .map(|o| {
                        vec![
                            o.name.into(),
                            if o.passed() { "pass" } else { "fail" }.into(),
                            o.failure.as_deref().map_or(Cell::Missing, Cell::from),
                        ]
                    })
                    .collect(),
            };
            if failed > 0 {
                Err(Box::new((
                    CliError::Internal(format!("{failed} check(s) failed")),
                    Some(doc),
                )))
            } else {
                Ok(doc)
            }
        }
    }
}

fn simulate_document(
    m: usize,
    n: usize,
    trials: u64,
    seed: u64,
    exhaustive: bool,
    max: u64,
) -> Result<OutputDocument, CliError> {
    let exact_mean = mean_displacement(m, n)?;
    let second = second_factorial_moment(m, n)?;
    let variance = Rational::from_integer(2.into()) * second + &exact_mean - &exact_mean * &exact_mean;
    let dist = if exhaustive {
        exhaustive_distribution_limited(m, n, false, max)?
    } else {
        monte_carlo(m, n, trials, seed)?
    };
    let sample_mean = dist.mean();
    let trials_q = Rational::from_integer(dist.trials.into());
    let deviation = &sample_mean - &exact_mean;
    // |mean - exact| <= 4 sigma  <=>  deviation^2 <= 16 variance / trials
    let within = &deviation * &deviation <= Rational::from_integer(16.into()) * &variance / &trials_q;
    let sigma = (&variance / &trials_q).to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(OutputDocument {
        command: "simulate",
        parameters: vec![
            ("m", m.into()),
            ("n", n.into()),
            ("trials", if exhaustive { Cell::Missing } else { trials.into() }),
            ("seed", if exhaustive { Cell::Missing } else { seed.into() }),
            ("exhaustive", exhaustive.into()),
        ],
        summary: vec![
            ("trials", dist.trials.into()),
            ("sample_mean", sample_mean.into()),
            ("exact_mean", exact_mean.into()),
            ("exact_variance", variance.into()),
            ("sigma_of_mean", Cell::Text(format!("{sigma:.6e}"))),
            ("within_4_sigma", within.into()),
        ],
        columns: vec!["d", "count"],
        rows: dist.histogram.iter().map(|(&d, &c)| vec![d.into(), c.into()]).collect(),
    })
}

/// Parses `args`, runs the command and returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let text = err.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    let rendering = Rendering { decimal: cli.decimal };
    match execute(&cli.command) {
        Ok(doc) => (0, doc.render(cli.format, rendering), String::new()),
        Err(failure) => {
            let (err, doc) = *failure;
            (
                err.exit_code(),
                doc.map(|d| d.render(cli.format, rendering)).unwrap_or_default(),
                format!("error: {err}\n"),
            )
        }
    }
}
