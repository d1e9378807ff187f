mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use affscat::almost_positive::{ap_c, check_compat_axioms, clusters, Compatibility};
use affscat::cartan::{CartanType, ExchangeMatrix, RootSystem};
use affscat::error::Error;
use affscat::mutation::fans_compare;
use affscat::rational::{fmt_q, primitive_int, to_i64};
use affscat::scattering::{build_dcscat, build_easy_scat, check_consistency, rank2_complete, AffineInstance};
use affscat::series::f_inf_series;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "affscat", about = "Exact affine cluster scattering diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the Cartan type of the exchange matrix.
    Classify(Opts),
    /// Build the diagram from sortable elements and from almost-positive roots, and compare.
    Walls(Opts),
    /// Check that every small loop around a codimension-two joint is trivial.
    Consistency(Opts),
    /// Complete the two initial walls of a rank-two matrix; `--k` is the degree in the limiting
    /// wall's variable.
    Rank2(Opts),
    /// Enumerate clusters and the compatibility table.
    Clusters(Opts),
    /// Compare the scattering fan with the cluster fan, exactly and by sign probes.
    Compare(Opts),
    /// Draw the diagram as SVG.
    Svg(Opts),
}

#[derive(Args)]
struct Opts {
    /// JSON file `{"n": .., "b": [[..]]}`.
    #[arg(long)]
    input: PathBuf,
    /// Root-height cap.
    #[arg(long = "H", default_value_t = 5)]
    h: i64,
    /// Series truncation degree.
    #[arg(long, default_value_t = 5)]
    k: i64,
    /// Maximum mutation-word length for sign probes.
    #[arg(long = "L", default_value_t = 6)]
    l: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Compute(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Cartan(_) | Error::NotAffine | Error::NotAcyclic | Error::UnsupportedRank(_) => {
                Failure::Input(e.to_string())
            }
            e => Failure::Compute(e),
        }
    }
}

/// Command output plus whether its verifications passed.
struct Outcome {
    body: String,
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Self {
        Outcome { body: serde_json::to_string_pretty(&v).unwrap() + "\n", ok }
    }
}

fn load(opts: &Opts) -> Result<ExchangeMatrix, Failure> {
    if opts.h < 1 || opts.k < 1 || opts.l < 1 || opts.samples < 1 {
        return Err(Failure::Input("H, k, L and samples must be positive".into()));
    }
    let text = std::fs::read_to_string(&opts.input)
        .map_err(|e| Failure::Input(format!("{}: {e}", opts.input.display())))?;
    ExchangeMatrix::from_json(&text).map_err(Failure::Input)
}

fn instance(b: &ExchangeMatrix) -> Result<AffineInstance, Failure> {
    Ok(AffineInstance::new(b)?)
}

/// Integers as JSON numbers, anything else as a `"p/q"` string.
fn number(x: &affscat::rational::Q) -> Value {
    to_i64(x).map(Value::from).unwrap_or_else(|| Value::from(fmt_q(x)))
}

fn classify(b: &ExchangeMatrix) -> Result<Outcome, Failure> {
    let rs = RootSystem::from_exchange(b).map_err(|e| Failure::Input(e.to_string()))?;
    let v = match rs.classify() {
        CartanType::Affine(info) => json!({"type": "affine", "label": info.label, "is_A2k2": info.is_a2k2}),
        CartanType::Finite => json!({"type": "finite"}),
        CartanType::Indefinite => json!({"type": "indefinite"}),
    };
    Ok(Outcome::json(v, true))
}

fn rank2(b: &ExchangeMatrix, k: i64) -> Result<Outcome, Failure> {
    if b.n != 2 {
        return Err(Error::UnsupportedRank(b.n).into());
    }
    let rs = RootSystem::from_exchange(b).map_err(|e| Failure::Input(e.to_string()))?;
    let CartanType::Affine(info) = rs.classify() else {
        let d = rank2_complete(b, k)?;
        return Ok(Outcome::json(json!({"y_degree": k, "walls": d.walls}), true));
    };
    let y_degree = k * affscat::cartan::height(&info.delta);
    let d = rank2_complete(b, y_degree)?;
    let delta = primitive_int(&info.delta);
    let expected = f_inf_series(&delta, info.is_a2k2, k as usize);
    let got = d.walls.iter().find(|w| w.normal == delta).map(|w| w.f.truncate(k as usize));
    let ok = got.as_ref() == Some(&expected);
    let series = |s: Option<&affscat::series::TruncatedSeries>| -> Value {
        s.map(|s| Value::from(s.coeffs.iter().map(number).collect::<Vec<_>>())).unwrap_or(Value::Null)
    };
    Ok(Outcome::json(
        json!({
            "k": k,
            "y_degree": y_degree,
            "limiting_normal": delta,
            "limiting_series": series(got.as_ref()),
            "expected": series(Some(&expected)),
            "matches": ok,
            "walls": d.walls,
        }),
        ok,
    ))
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    let opts = match command {
        Command::Classify(o)
        | Command::Walls(o)
        | Command::Consistency(o)
        | Command::Rank2(o)
        | Command::Clusters(o)
        | Command::Compare(o)
        | Command::Svg(o) => o,
    };
    let b = load(opts)?;
    let (h, k) = (opts.h, opts.k);
    match command {
        Command::Classify(_) => classify(&b),
        Command::Rank2(_) => rank2(&b, k),
        Command::Walls(_) => {
            let inst = instance(&b)?;
            let d = build_dcscat(&inst, h, k)?;
            let e = build_easy_scat(&inst, h, k)?;
            let equal = d.same_walls(&e);
            Ok(Outcome::json(json!({"equal": equal, "dcscat": d, "easy": e}), equal))
        }
        Command::Consistency(_) => {
            let inst = instance(&b)?;
            let d = build_dcscat(&inst, h, k)?;
            let r = check_consistency(&inst.rs, &d, k)?;
            let ok = r.passed();
            Ok(Outcome::json(json!({"passed": ok, "report": r}), ok))
        }
        Command::Clusters(_) => {
            let inst = instance(&b)?;
            let cm = Compatibility::new(&inst.rs, &inst.c, &inst.ts, h);
            let roots: Vec<_> = ap_c(&inst.rs, &inst.ts, h).into_iter().map(|a| a.root).collect();
            let table = cm.table(&roots)?;
            let violations = check_compat_axioms(&cm, &roots)?;
            let cl = clusters(&cm, h)?;
            let ok = violations.is_empty();
            Ok(Outcome::json(
                json!({"roots": roots, "compatibility": table, "clusters": cl, "axiom_violations": violations}),
                ok,
            ))
        }
        Command::Compare(_) => {
            let inst = instance(&b)?;
            let r = fans_compare(&inst, h, k, opts.l, opts.samples, opts.seed)?;
            let ok = r.passed();
            Ok(Outcome::json(json!({"passed": ok, "report": r}), ok))
        }
        Command::Svg(_) => {
            let inst = instance(&b)?;
            let d = build_dcscat(&inst, h, k)?;
            let plane = match b.n {
                2 => svg::Plane::Rank2,
                3 => svg::Plane::Slice(svg::slice_functional(&inst.rs.weight_to_dual(&inst.ts.vectors.x_c))),
                n => return Err(Error::UnsupportedRank(n).into()),
            };
            Ok(Outcome { body: svg::render_slice(&d, &plane)?, ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Classify(o)
        | Command::Walls(o)
        | Command::Consistency(o)
        | Command::Rank2(o)
        | Command::Clusters(o)
        | Command::Compare(o)
        | Command::Svg(o) => o.out.clone(),
    };
    let result = run(&cli.command).and_then(|outcome| {
        match &out {
            Some(path) => std::fs::write(path, &outcome.body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
            None => print!("{}", outcome.body),
        }
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (kind, message, code) = match f {
                Failure::Input(m) => ("invalid_input", m, 2),
                Failure::Compute(e) => ("computation", e.to_string(), 1),
                Failure::Io(m) => ("io", m, 1),
            };
            eprintln!("{}", json!({"error": kind, "message": message}));
            ExitCode::from(code)
        }
    }
}
