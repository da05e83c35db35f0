//! The `tricover` command line: argument handling, dispatch and output.
//!
//! Exit codes: 0 success or `Match`, 1 verification mismatch, 2 traces not
//! consistent, 3 invalid mathematical input, 4 usage, I/O or format error.

mod cache;
pub mod encode;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tricover_core::construct::{construct_from_classes, enumerate_triples, Case};
use tricover_core::ecurve::waterhouse_clauses;
use tricover_core::ff::prime_power;
use tricover_core::legendre::Tower;
use tricover_core::zeta::{default_k, expected_count};
use tricover_core::{make_field, Error, Field, Genus3Cover, Mode, Verdict};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_NOT_CONSISTENT: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "tricover", version, about = "Genus-3 covers with prescribed elliptic factors over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for counting and search.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for the per-q curve class cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the admissible Frobenius traces with the clauses they satisfy.
    Admissible {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Emit every Legendre-consistent trace triple with one witness each.
    EnumerateTriples {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build the certificate and cover for a trace triple.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        traces: TraceArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Count points on a cover and compare with its claimed zeta function.
    Verify {
        /// A file written by `construct`; otherwise the cover is built from --q and the traces.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        traces: TraceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Characteristic polynomial, L-polynomial and expected counts for k <= 6.
    Zeta {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        traces: TraceArgs,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long, conflicts_with_all = ["p", "r"])]
    q: Option<u64>,
    #[arg(long, requires = "r")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    r: Option<u32>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t3: Option<i64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Allow repeated traces and any residue of q + 1 + t mod 4.
    #[arg(long)]
    relaxed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Weak,
    Strong,
    Auto,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Weak => Mode::Weak,
            ModeArg::Strong => Mode::Strong,
            ModeArg::Auto => Mode::Auto,
        }
    }

    fn cases(self) -> Vec<Case> {
        match self {
            ModeArg::Weak => vec![Case::Weak],
            ModeArg::Strong => vec![Case::Strong],
            ModeArg::Auto => vec![Case::Strong, Case::Weak],
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_IO,
            Failure::Core(Error::NotConsistent { .. }) => EXIT_NOT_CONSISTENT,
            Failure::Core(_) => EXIT_MATH,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage: {m}"),
            Failure::Io(m) => format!("error: {m}"),
            Failure::Core(Error::Precondition(m)) if m.contains("not distinct") => {
                format!("error: {m} (pass --relaxed to allow repeated traces)")
            }
            Failure::Core(e) => format!("error: {e}"),
        }
    }
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

impl FieldArgs {
    fn field(&self) -> Result<Field, Failure> {
        let (p, r) = match (self.q, self.p, self.r) {
            (Some(q), _, _) => prime_power(q)
                .filter(|&(p, _)| p % 2 == 1)
                .ok_or(Error::Precondition(format!("q = {q} is not a power of an odd prime")))?,
            (None, Some(p), Some(r)) => (p, r),
            _ => return Err(Failure::Usage("give --q or both --p and --r".into())),
        };
        if !(1..=2).contains(&r) {
            return Err(Error::Precondition(format!("extension degree r = {r} outside 1..=2")).into());
        }
        Ok(make_field(p, r as usize)?)
    }
}

impl TraceArgs {
    fn get(&self) -> Result<[i64; 3], Failure> {
        match (self.t1, self.t2, self.t3) {
            (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
            _ => Err(Failure::Usage("--t1, --t2 and --t3 are all required".into())),
        }
    }
}

/// The rendered result and its exit code.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses `args` (program name first), runs the command and writes its
/// output to `out` (or `--out`) and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Usage(format!("--jobs {n}: {e}"))),
        },
        None => dispatch(&cli),
    };
    let written = result.and_then(|o| {
        match &cli.out {
            Some(path) => write_atomic(path, o.text.as_bytes())?,
            None => out.write_all(o.text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?,
        }
        Ok(o.code)
    });
    match written {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let cache_dir = cli.cache_dir.as_deref();
    match &cli.command {
        Command::Admissible { field } => admissible(&field.field()?, cli.format),
        Command::EnumerateTriples { field, search } => triples(&field.field()?, search, cli.format, cache_dir),
        Command::Construct { field, traces, search } => {
            if cli.format == Format::Tsv {
                return Err(Failure::Usage("construct writes JSON only".into()));
            }
            let k = field.field()?;
            let t = traces.get()?;
            let (tower, c) = build(&k, t, search, cache_dir)?;
            Ok(Output::ok(pretty(&encode::construction(&tower, t, &c))))
        }
        Command::Verify { input, field, traces, search, max_k } => {
            let (cover, t) = match input {
                Some(path) => read_cover(path)?,
                None => {
                    let k = field.field()?;
                    let (_, c) = build(&k, traces.get()?, search, cache_dir)?;
                    (c.cover, c.claimed.traces)
                }
            };
            let k = max_k.unwrap_or_else(|| default_k(cover.q()));
            let (report, verdict) = encode::verify_report(&cover, t, k)?;
            let code = if verdict == Verdict::Match { 0 } else { EXIT_MISMATCH };
            let text = match cli.format {
                Format::Json => pretty(&report),
                Format::Tsv => counts_tsv(&report),
            };
            Ok(Output { text, code })
        }
        Command::Zeta { field, traces } => zeta(&field.field()?, traces.get()?, cli.format),
    }
}

fn admissible(k: &Field, format: Format) -> Result<Output, Failure> {
    let q = k.order();
    let bound = (1..).find(|&b: &i64| b * b > 4 * q as i64).unwrap() - 1;
    let rows: Vec<(i64, Vec<&str>)> = (-bound..=bound)
        .map(|t| (t, waterhouse_clauses(q, t).into_iter().map(|c| c.label()).collect::<Vec<_>>()))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    Ok(Output::ok(match format {
        Format::Json => pretty(&json!({
            "schema": encode::SCHEMA,
            "kind": "admissible",
            "q": encode::int(q),
            "traces": rows.iter().map(|(t, c)| json!({ "t": encode::int(t), "clauses": c })).collect::<Vec<_>>(),
        })),
        Format::Tsv => {
            let mut s = String::from("q\tt\tclauses\n");
            for (t, c) in &rows {
                s += &format!("{q}\t{t}\t{}\n", c.join(","));
            }
            s
        }
    }))
}

fn triples(k: &Field, search: &SearchArgs, format: Format, cache_dir: Option<&Path>) -> Result<Output, Failure> {
    let q = k.order();
    let classes = cache::classes(k, cache_dir)?;
    let tower = Tower::new(k)?;
    let mut s = match format {
        Format::Json => String::new(),
        Format::Tsv => String::from("q\tt1\tt2\tt3\tmode\tl1\tl2\tl3\n"),
    };
    for case in search.mode.cases() {
        for (t, w) in enumerate_triples(&classes, q, case, search.relaxed)? {
            match format {
                Format::Json => {
                    let line = json!({
                        "schema": encode::SCHEMA,
                        "q": encode::int(q),
                        "traces": encode::ints(&t),
                        "relaxed": search.relaxed,
                        "witness": encode::witness(&tower, &w),
                    });
                    s += &serde_json::to_string(&line).expect("serializable");
                    s.push('\n');
                }
                Format::Tsv => {
                    let l = w.lambdas.map(|l| encode::tower_cell(&tower, &l));
                    s += &format!("{q}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", t[0], t[1], t[2], case.name(), l[0], l[1], l[2]);
                }
            }
        }
    }
    Ok(Output::ok(s))
}

fn build(
    k: &Field,
    t: [i64; 3],
    search: &SearchArgs,
    cache_dir: Option<&Path>,
) -> Result<(Tower, tricover_core::Construction), Failure> {
    let classes = cache::classes(k, cache_dir)?;
    let c = construct_from_classes(&classes, k.order(), t, search.mode.mode(), search.relaxed)?;
    Ok((Tower::new(k)?, c))
}

fn read_cover(path: &Path) -> Result<(Genus3Cover, [i64; 3]), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let bad = |m: String| Failure::Io(format!("{}: {m}", path.display()));
    let input: encode::VerifyInput = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if input.schema != encode::SCHEMA {
        return Err(bad(format!("unsupported schema {}", input.schema)));
    }
    let q: u64 = input.q.parse().map_err(|_| bad(format!("bad q {:?}", input.q)))?;
    let (p, r) = prime_power(q).ok_or_else(|| bad(format!("q = {q} is not a prime power")))?;
    let k = make_field(p, r as usize)?;
    let mut traces = [0i64; 3];
    for (slot, s) in traces.iter_mut().zip(&input.claimed.traces) {
        *slot = s.parse().map_err(|_| bad(format!("bad trace {s:?}")))?;
    }
    let [f1, f2, f3]: [Vec<Vec<u64>>; 3] =
        input.cover.f.try_into().map_err(|_| bad("cover needs exactly three polynomials".into()))?;
    let polys = [f1, f2, f3]
        .iter()
        .map(|f| encode::decode_poly(&k, f).map_err(bad))
        .collect::<Result<Vec<_>, _>>()?;
    let polys: [_; 3] = polys.try_into().expect("three");
    Ok((Genus3Cover::new(k, polys)?, traces))
}

fn counts_tsv(report: &Value) -> String {
    let mut s = String::from("k\tcount\texpected\n");
    let col = |key: &str| report[key].as_array().cloned().unwrap_or_default();
    for (i, (n, e)) in col("counts").iter().zip(col("expected")).enumerate() {
        s += &format!("{}\t{}\t{}\n", i + 1, n.as_str().unwrap_or(""), e.as_str().unwrap_or(""));
    }
    s
}

fn zeta(k: &Field, t: [i64; 3], format: Format) -> Result<Output, Failure> {
    let q = k.order();
    // Same admissibility checks as construction, without the distinctness rule.
    tricover_core::construct::check_traces(q, t, Mode::Auto, true)?;
    let counts: Vec<_> = (1..=6).map(|i| expected_count(q, t, i)).collect();
    Ok(Output::ok(match format {
        Format::Json => pretty(&encode::expected_table(q, t, &counts)),
        Format::Tsv => {
            let mut s = String::from("k\texpected\n");
            for (i, n) in counts.iter().enumerate() {
                s += &format!("{}\t{n}\n", i + 1);
            }
            s
        }
    }))
}
