//! `dimerstat`: exact local statistics of random domino and lozenge tilings.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimerstat::coupling::{coupling_numeric_many, plane_coupling};
use dimerstat::cylinder::{
    correlation, plane_probability, region_probability, torus_probability, Method, ProbabilityResult,
};
use dimerstat::event::CylinderEvent;
use dimerstat::exact::SymbolicValue;
use dimerstat::geometry::{Model, RegionGraph};
use dimerstat::height::height_variance;
use dimerstat::io::{event_from_json, parse_geometry, Geometry, GeometrySpec};
use dimerstat::kasteleyn::{count_region, count_torus, entropy_limit, entropy_per_site};
use dimerstat::oracle::{self, DEFAULT_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

const SCHEMA: &str = "dimerstat/1";

#[derive(Parser)]
#[command(
    name = "dimerstat",
    version,
    about = "Exact local statistics of random domino and lozenge tilings"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Absolute tolerance for numeric evaluation.
    #[arg(long, default_value_t = 1e-10, value_parser = positive, global = true)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count perfect matchings of a region or torus.
    Count(Target),
    /// Per-site entropy of square tori against the large-torus value.
    Entropy {
        #[arg(long, default_value = "lozenge")]
        model: Model,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16])]
        sizes: Vec<i64>,
    },
    /// Coupling values over a square window of displacements.
    Couple {
        #[arg(long)]
        model: Model,
        #[arg(long, default_value_t = 5)]
        window: i64,
        /// Also evaluate each value by quadrature.
        #[arg(long)]
        quadrature: bool,
    },
    /// Probability of a cylinder event.
    Prob {
        /// Event JSON, optionally carrying a torus or face list.
        #[arg(long)]
        edges: PathBuf,
        /// Check the answer against exhaustive enumeration.
        #[arg(long)]
        verify_oracle: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Joint versus product probability for translates of an event.
    Correlate {
        #[arg(long)]
        edges: PathBuf,
        /// Second event; defaults to the first.
        #[arg(long)]
        other: Option<PathBuf>,
        /// Translation step, repeated `steps` times.
        #[arg(long, num_args = 2, value_names = ["DX", "DY"], allow_negative_numbers = true)]
        step: Vec<i64>,
        #[arg(long, default_value_t = 10)]
        steps: i64,
    },
    /// Height-change variance along a column of faces.
    Variance {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, conflicts_with = "n")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
        #[arg(long, default_value_t = 1)]
        by: u64,
        /// Include the exact value of each column.
        #[arg(long)]
        exact: bool,
    },
    /// Enumerate matchings and compare with the determinant formulas.
    Oracle {
        #[command(flatten)]
        target: Target,
        /// Event JSON to compare probabilities for.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long, default_value = "lozenge")]
    model: Model,
    #[arg(long, num_args = 2, value_names = ["M", "N"], conflicts_with = "geometry")]
    torus: Option<Vec<i64>>,
    /// Geometry file, JSON or text.
    #[arg(long)]
    geometry: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("{s} is not a positive number")),
    }
}

enum Failure {
    Usage(String),
    Compute(dimerstat::Error),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Compute(_) => "computation",
            Failure::Mismatch(_) => "oracle-mismatch",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) => f.write_str(m),
            Failure::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<dimerstat::Error> for Failure {
    fn from(e: dimerstat::Error) -> Self {
        Failure::Compute(e)
    }
}

/// A table of results plus free-form notes.
struct Report {
    command: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
    notes: Vec<String>,
    /// Set when an oracle comparison disagreed; the report is still printed.
    mismatch: Option<String>,
}

impl Report {
    fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
            mismatch: None,
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .map(|c| c.to_string())
                            .zip(r.iter().cloned())
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "schema": SCHEMA,
                    "command": self.command,
                    "rows": rows,
                    "notes": self.notes,
                });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(cell))?;
                }
                w.flush()
            }
            Format::Human => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| {
                        cells
                            .iter()
                            .map(|r| r[j].chars().count())
                            .chain([self.columns[j].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: Vec<&str>| {
                    let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                    parts.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.columns.clone()))?;
                for r in &cells {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
                for n in &self.notes {
                    writeln!(out, "note: {n}")?;
                }
                Ok(())
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

fn big(z: &BigInt) -> Value {
    Value::String(z.to_string())
}

fn exact(v: &SymbolicValue) -> Value {
    Value::String(v.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn target_spec(t: &Target) -> Result<GeometrySpec, Failure> {
    match (&t.torus, &t.geometry) {
        (Some(mn), None) => Ok(GeometrySpec {
            model: t.model,
            geometry: Geometry::Torus { m: mn[0], n: mn[1] },
        }),
        (None, Some(p)) => Ok(parse_geometry(&read(p)?)?),
        _ => Err(Failure::Usage("give --torus M N or --geometry FILE".into())),
    }
}

fn finite_graph(spec: &GeometrySpec) -> Result<RegionGraph, Failure> {
    spec.build()?
        .ok_or_else(|| Failure::Usage("the plane has no finite matching count".into()))
}

fn count(t: &Target) -> Result<Report, Failure> {
    let spec = target_spec(t)?;
    let mut r = Report::new("count", &["model", "geometry", "count", "method"]);
    let (desc, n, method) = match spec.geometry {
        Geometry::Torus { m, n } => {
            let c = count_torus(spec.model, m, n)?;
            let method = match c.method {
                dimerstat::kasteleyn::CountMethod::FourDeterminants => "four-determinants",
                dimerstat::kasteleyn::CountMethod::Oracle => "oracle",
            };
            if let Some(d) = &c.dets {
                r.notes
                    .push(format!("det B1..B4 = {}, {}, {}, {}", d[0], d[1], d[2], d[3]));
            }
            (format!("torus {m}x{n}"), c.count, method)
        }
        Geometry::Region { ref faces } => {
            let g = finite_graph(&spec)?;
            (
                format!("region of {} faces", faces.len()),
                count_region(&g)?,
                "determinant",
            )
        }
        Geometry::Plane => return Err(Failure::Usage("the plane has no finite matching count".into())),
    };
    r.push(vec![json!(spec.model.to_string()), json!(desc), big(&n), json!(method)]);
    Ok(r)
}

fn entropy(model: Model, sizes: &[i64]) -> Result<Report, Failure> {
    let limit = entropy_limit(model, 400);
    let mut r = Report::new("entropy", &["model", "size", "entropy_per_site", "limit", "gap"]);
    for &s in sizes {
        let h = entropy_per_site(model, s, s)?;
        r.push(vec![
            json!(model.to_string()),
            json!(s),
            num(h),
            num(limit),
            num(h - limit),
        ]);
    }
    Ok(r)
}

fn couple(model: Model, window: i64, quadrature: bool, tol: f64) -> Result<Report, Failure> {
    if window < 0 {
        return Err(Failure::Usage("window must be nonnegative".into()));
    }
    let pts: Vec<(i64, i64)> = (-window..=window)
        .flat_map(|x| (-window..=window).map(move |y| (x, y)))
        .collect();
    let mut cols = vec!["x", "y", "exact", "re", "im"];
    let quad = if quadrature {
        cols.extend(["quad_re", "quad_im"]);
        Some(coupling_numeric_many(model, &pts, tol.max(1e-12))?.0)
    } else {
        None
    };
    let mut r = Report::new("couple", &cols);
    for (i, &(x, y)) in pts.iter().enumerate() {
        let v = plane_coupling(model, x, y);
        let z = v.eval(tol);
        let mut row = vec![json!(x), json!(y), exact(&v), num(z.re), num(z.im)];
        if let Some(q) = &quad {
            row.extend([num(q[i].re), num(q[i].im)]);
        }
        r.push(row);
    }
    Ok(r)
}

fn method_tag(p: &ProbabilityResult) -> &'static str {
    match p.method {
        Method::PlaneCoupling => "plane-coupling",
        Method::RegionCofactor => "region-cofactor",
        Method::TorusWeighted => "torus-weighted",
        Method::Oracle => "oracle",
    }
}

fn event_probability(spec: &GeometrySpec, event: &CylinderEvent) -> Result<ProbabilityResult, Failure> {
    Ok(match &spec.geometry {
        Geometry::Plane => plane_probability(event)?,
        Geometry::Torus { m, n } => torus_probability(spec.model, *m, *n, event)?,
        Geometry::Region { .. } => region_probability(&finite_graph(spec)?, event)?,
    })
}

fn prob(path: &Path, verify: bool, cap: usize) -> Result<Report, Failure> {
    let e = event_from_json(&read(path)?)?;
    let p = event_probability(&e.geometry, &e.event)?;
    let mut cols = vec!["model", "edges", "exact", "numeric", "method"];
    if verify {
        cols.extend(["oracle", "verdict"]);
    }
    let mut r = Report::new("prob", &cols);
    r.notes = p.notes.clone();
    let mut row = vec![
        json!(e.event.model().to_string()),
        json!(e.event.len()),
        p.exact.as_ref().map_or(Value::Null, exact),
        num(p.numeric),
        json!(method_tag(&p)),
    ];
    if verify {
        if e.geometry.geometry == Geometry::Plane {
            return Err(Failure::Usage("--verify-oracle needs a torus or region".into()));
        }
        let q = oracle::oracle_probability_capped(&finite_graph(&e.geometry)?, &e.event, cap)?;
        let ok = p.as_rational().as_ref() == Some(&q);
        row.extend([json!(q.to_string()), json!(if ok { "match" } else { "mismatch" })]);
        if !ok {
            r.mismatch = Some(format!("formula {} vs oracle {q}", row[2]));
        }
    }
    r.push(row);
    Ok(r)
}

fn correlate(edges: &Path, other: Option<&Path>, step: &[i64], steps: i64, tol: f64) -> Result<Report, Failure> {
    let e1 = event_from_json(&read(edges)?)?;
    let e2 = match other {
        Some(p) => event_from_json(&read(p)?)?,
        None => e1.clone(),
    };
    for e in [&e1, &e2] {
        if e.geometry.geometry != Geometry::Plane {
            return Err(Failure::Usage(
                "correlations are computed in the plane; drop the torus or faces".into(),
            ));
        }
    }
    let (dx, dy) = match step {
        [dx, dy] => (*dx, *dy),
        _ => return Err(Failure::Usage("give --step DX DY".into())),
    };
    let mut r = Report::new(
        "correlate",
        &[
            "k",
            "dx",
            "dy",
            "distance",
            "joint",
            "product",
            "difference",
            "difference_numeric",
        ],
    );
    for k in 1..=steps {
        let v = (k * dx, k * dy);
        let c = correlation(&e1.event, &e2.event, v)?;
        r.push(vec![
            json!(k),
            json!(v.0),
            json!(v.1),
            num(c.distance),
            exact(&c.joint),
            exact(&c.product),
            exact(&c.difference),
            num(c.difference.eval_re(tol)),
        ]);
    }
    Ok(r)
}

fn variance(ns: Vec<u64>, with_exact: bool, tol: f64) -> Result<Report, Failure> {
    let mut cols = vec!["n", "var_r", "var_h", "expected_cycles", "log_reference"];
    if with_exact {
        cols.extend(["var_r_exact", "var_h_exact", "expected_cycles_exact"]);
    }
    let mut r = Report::new("variance", &cols);
    for n in ns {
        let v = height_variance(n)?;
        let cyc = v.expected_cycles();
        let mut row = vec![
            json!(n),
            num(v.variance_r.eval_re(tol)),
            num(v.variance_h.eval_re(tol)),
            num(cyc.eval_re(tol)),
            num(v.log_reference()),
        ];
        if with_exact {
            row.extend([exact(&v.variance_r), exact(&v.variance_h), exact(&cyc)]);
        }
        r.push(row);
    }
    Ok(r)
}

fn oracle_mode(t: &Target, edges: Option<&Path>, cap: usize) -> Result<Report, Failure> {
    let spec = target_spec(t)?;
    let g = finite_graph(&spec)?;
    let set = oracle::enumerate_matchings_capped(&g, cap)?;
    let mut r = Report::new("oracle", &["quantity", "oracle", "formula", "verdict"]);
    let formula = match spec.geometry {
        Geometry::Torus { m, n } => count_torus(spec.model, m, n)?.count,
        _ => count_region(&g)?,
    };
    let enumerated = BigInt::from(set.len());
    let mut bad = Vec::new();
    let verdict = |ok: bool| json!(if ok { "match" } else { "mismatch" });
    if enumerated != formula {
        bad.push("count".to_string());
    }
    r.push(vec![
        json!("count"),
        big(&enumerated),
        big(&formula),
        verdict(enumerated == formula),
    ]);
    if let Some(p) = edges {
        let e = event_from_json(&read(p)?)?;
        if e.event.model() != spec.model {
            return Err(Failure::Usage("event and geometry use different models".into()));
        }
        let ids = e.event.edge_ids(&g)?;
        let q = num_rational_of(set.count_containing(&ids), set.len())?;
        let f = event_probability(&spec, &e.event)?;
        let ok = f.as_rational().as_ref() == Some(&q);
        if !ok {
            bad.push("probability".to_string());
        }
        r.notes = f.notes.clone();
        r.push(vec![
            json!("probability"),
            json!(q.to_string()),
            f.exact.as_ref().map_or(Value::Null, exact),
            verdict(ok),
        ]);
    }
    if !bad.is_empty() {
        r.mismatch = Some(format!("oracle disagrees on {}", bad.join(", ")));
    }
    Ok(r)
}

fn num_rational_of(k: usize, total: usize) -> Result<BigRational, Failure> {
    if total == 0 {
        return Err(dimerstat::Error::NoMatchings.into());
    }
    Ok(BigRational::new(k.into(), total.into()))
}

fn variance_range(n: Option<u64>, from: Option<u64>, to: Option<u64>, by: u64) -> Result<Vec<u64>, Failure> {
    match (n, from) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(a)) => {
            let b = to.unwrap_or(a);
            if by == 0 || b < a {
                return Err(Failure::Usage("need --from ≤ --to and --by ≥ 1".into()));
            }
            Ok((a..=b).step_by(by as usize).collect())
        }
        _ => Err(Failure::Usage("give --n N or --from A [--to B]".into())),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Count(t) => count(t),
        Command::Entropy { model, sizes } => entropy(*model, sizes),
        Command::Couple {
            model,
            window,
            quadrature,
        } => couple(*model, *window, *quadrature, cli.tol),
        Command::Prob {
            edges,
            verify_oracle,
            cap,
        } => prob(edges, *verify_oracle, *cap),
        Command::Correlate {
            edges,
            other,
            step,
            steps,
        } => correlate(edges, other.as_deref(), step, *steps, cli.tol),
        Command::Variance { n, from, to, by, exact } => variance(variance_range(*n, *from, *to, *by)?, *exact, cli.tol),
        Command::Oracle { target, edges, cap } => oracle_mode(target, edges.as_deref(), *cap),
    }
}

fn fail(f: &Failure) -> ExitCode {
    let record = json!({"schema": SCHEMA, "error": f.kind(), "message": f.to_string()});
    eprintln!("{record}");
    ExitCode::from(f.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.to_string().trim_end().to_string())),
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(f) => return fail(&f),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = report.write(cli.format, &mut out) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            return fail(&Failure::Usage(format!("cannot write output: {e}")));
        }
    }
    match &report.mismatch {
        Some(m) => fail(&Failure::Mismatch(m.clone())),
        None => ExitCode::SUCCESS,
    }
}
