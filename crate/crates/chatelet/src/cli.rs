use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use chatelet_core::chatelet::{
    block_sublattice_quotients, build_pic_x, build_pic_y, obstruction_exponent, pic_x_cohomology, replay_pic_x,
    BlockStructure,
};
use chatelet_core::decider::{decide_with, Config, Problem};
use chatelet_core::delpezzo::{
    conic_partner, descent_exhaust, descent_greedy_trace, enumerate_conic_classes, fiber_infeasible,
};
use chatelet_core::lattice::{fixed_sublattice, DEFAULT_GROUP_CAP};
use chatelet_core::surface::SurfaceModel;
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::input::{parse_poly, parse_rational, read_certificates, read_problem, InputError};
use crate::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chatelet", version, about = "Rationality of z^2 = a y^2 + P(x) over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide rationality and print the verdict report.
    Decide(DecideArgs),
    /// Cohomology of Pic(X) for a block structure.
    Cohomology(CohomologyArgs),
    /// Intersection data of the resolved surface.
    Surface(SurfaceArgs),
    /// Conic classes on blown-up planes, or the fiber-class search.
    Delpezzo(DelpezzoArgs),
    /// Exhaust the descent on m.
    Descent(DescentArgs),
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "json_in")]
    a: Option<String>,
    /// Coefficients, lowest degree first, e.g. "1,0,-2/3".
    #[arg(long, allow_hyphen_values = true, required_unless_present = "json_in")]
    poly: Option<String>,
    /// Certificate JSON file.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Problem JSON file.
    #[arg(long, conflicts_with_all = ["a", "poly"])]
    json_in: Option<PathBuf>,
    /// Largest degree handed to the Kronecker search.
    #[arg(long)]
    kronecker_bound: Option<usize>,
    #[arg(long)]
    norm_bound: Option<u64>,
    #[arg(long)]
    group_cap: Option<usize>,
}

#[derive(Debug, Args)]
struct CohomologyArgs {
    /// Block degrees, e.g. "2,2".
    #[arg(long)]
    blocks: String,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long)]
    r: usize,
    /// Report Pic(Y) instead of Pic(X).
    #[arg(long)]
    pic_y: bool,
    /// Block degrees for the Pic(Y) group; one block of degree r by default.
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["points", "fiber_r"])))]
struct DelpezzoArgs {
    /// 5 or 7.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    fiber_r: Option<usize>,
    #[arg(long, default_value_t = 6)]
    m_max: i64,
    #[arg(long, default_value_t = 40)]
    nu_bound: i64,
    #[arg(long, default_value_t = 12)]
    len_max: usize,
}

#[derive(Debug, Args)]
struct DescentArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    m0: i64,
    #[arg(long, default_value_t = 1000)]
    depth_cap: usize,
    /// Include one branch step by step.
    #[arg(long)]
    trace: bool,
}

enum Failure {
    Usage(String),
    Input(String),
    Resource(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Core(c) => c.into(),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<chatelet_core::Error> for Failure {
    fn from(e: chatelet_core::Error) -> Self {
        use chatelet_core::Error as E;
        match e {
            E::FactorizationBoundExceeded { .. }
            | E::GroupOrderCapExceeded { .. }
            | E::DepthCapExceeded { .. }
            | E::QuadraticSplitUndecided { .. } => Failure::Resource(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn blocks(spec: &str) -> Result<BlockStructure, Failure> {
    let degrees = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Input(format!("cannot parse block list {spec:?}")))?;
    Ok(BlockStructure::new(degrees)?)
}

fn decide_cmd(args: DecideArgs) -> Result<Value, Failure> {
    let mut problem = match &args.json_in {
        Some(path) => read_problem(path)?,
        None => {
            let a = parse_rational(args.a.as_deref().unwrap_or_default())?;
            let p = parse_poly(args.poly.as_deref().unwrap_or_default())?;
            Problem::new(a, p)?
        }
    };
    if let Some(path) = &args.cert {
        problem.certificates = read_certificates(path)?;
    }
    let mut config = Config::default();
    if let Some(d) = args.kronecker_bound {
        config.kronecker.max_degree = d;
    }
    if let Some(b) = args.norm_bound {
        config.norm_bound = b;
    }
    if let Some(c) = args.group_cap {
        config.group_cap = c;
    }
    Ok(json::verdict_report(&decide_with(&problem, &config)?))
}

fn cohomology_cmd(args: CohomologyArgs) -> Result<Value, Failure> {
    let b = blocks(&args.blocks)?;
    let odd = b.r() % 2 == 1;
    let model = build_pic_x(&b, args.group_cap)?;
    let coh = pic_x_cohomology(&model, args.group_cap)?;
    let pic_y = if !odd && b.r() >= 4 {
        let y = build_pic_y(&b, args.group_cap)?;
        json!({ "rank": y.lattice.rank(), "fixed_rank": fixed_sublattice(&y.lattice).len() })
    } else {
        Value::Null
    };
    Ok(json!({
        "blocks": b.block_degrees(),
        "r": b.r(),
        "r_prime": b.r_prime(),
        "model_group_order": b.model_group_order(),
        "j": obstruction_exponent(&b, odd)?,
        "pic_x_rank": model.lattice.rank(),
        "cohomology": json::cohomology(&coh),
        "quotients": json::quotients(&block_sublattice_quotients(&b)?),
        "pic_y": pic_y,
    }))
}

fn surface_json(s: &SurfaceModel) -> Value {
    json!({
        "rank": s.rank(),
        "canonical_square": json::integer(&s.canonical_square()),
        "labels": s.labels(),
        "gram": json::matrix(s.gram()),
        "canonical": json::vector(&s.canonical().coords),
        "curves": s.curves().iter().map(|(id, c)| json!({ "id": id, "class": json::vector(&c.coords) })).collect::<Vec<_>>(),
    })
}

fn surface_cmd(args: SurfaceArgs) -> Result<Value, Failure> {
    if args.r == 0 {
        return Err(Failure::Input("r must be positive".into()));
    }
    if !args.pic_y {
        return Ok(surface_json(&replay_pic_x(args.r)));
    }
    let b = match &args.blocks {
        Some(s) => blocks(s)?,
        None => BlockStructure::new(vec![args.r])?,
    };
    if b.r() != args.r {
        return Err(Failure::Input(format!("blocks sum to {}, not r = {}", b.r(), args.r)));
    }
    let y = build_pic_y(&b, args.group_cap)?;
    let gram = y.gram.clone().expect("Pic(Y) carries its intersection form");
    let canonical = y.canonical.clone().expect("Pic(Y) carries its canonical class");
    let model = SurfaceModel::from_parts(
        y.basis_labels.clone(),
        gram,
        chatelet_core::surface::DivisorClass::new(canonical),
    )?;
    let mut out = surface_json(&model);
    out["fixed_rank"] = json!(fixed_sublattice(&y.lattice).len());
    Ok(out)
}

fn delpezzo_cmd(args: DelpezzoArgs) -> Result<Value, Failure> {
    if let Some(r) = args.fiber_r {
        let s = fiber_infeasible(r, args.m_max, (-args.nu_bound, args.nu_bound), args.len_max);
        return Ok(json::fiber_search(&s));
    }
    let n = args.points.expect("clap enforces one mode");
    let classes = enumerate_conic_classes(n)?;
    let mut entries = Vec::with_capacity(classes.len());
    for c in &classes {
        let p = conic_partner(c, n)?;
        let mut v = json::conic_class(c);
        v["partner"] = json!(p.to_string());
        entries.push(v);
    }
    Ok(json!({ "points": n, "count": classes.len(), "classes": entries }))
}

fn descent_cmd(args: DescentArgs) -> Result<Value, Failure> {
    let s = descent_exhaust(args.r, args.m0, args.depth_cap)?;
    let mut out = json::descent_summary(&s);
    if args.trace {
        out["trace"] = json!(descent_greedy_trace(args.r, args.m0)?);
    }
    Ok(out)
}

/// Runs the command line `argv` (including the program name), writing one JSON document to
/// `out`, and returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            return fail(out, Failure::Usage(e.to_string()));
        }
    };
    let result = match cli.command {
        Command::Decide(a) => decide_cmd(a),
        Command::Cohomology(a) => cohomology_cmd(a),
        Command::Surface(a) => surface_cmd(a),
        Command::Delpezzo(a) => delpezzo_cmd(a),
        Command::Descent(a) => descent_cmd(a),
    };
    match result {
        Ok(v) => {
            let _ = out.write_all(json::render(&v).as_bytes());
            EXIT_OK
        }
        Err(f) => fail(out, f),
    }
}

fn fail(out: &mut dyn Write, f: Failure) -> i32 {
    let (kind, message, code) = match f {
        Failure::Usage(m) => ("usage", m, EXIT_INPUT),
        Failure::Input(m) => ("input", m, EXIT_INPUT),
        Failure::Resource(m) => ("resource", m, EXIT_RESOURCE),
    };
    let _ = out.write_all(json::render(&json::error(kind, message.trim_end())).as_bytes());
    code
}
