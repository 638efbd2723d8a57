use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use roughsig::arens_eells::{ae_norm, candidate_times, Molecule};
use roughsig::grouplike::{geng_primal_test, grouplike_roundtrip, lie_membership, weakly_grouplike_test};
use roughsig::rough_path::{
    chen_check, default_triples, lyons_lift, signature_pl, ExactSignature, MultiplicativeFunctional,
    PiecewiseLinearPath, PureArea,
};
use roughsig::uat::ExperimentConfig;
use roughsig::{Error, GroupElement, TruncatedTensor};

#[derive(Parser)]
#[command(name = "roughsig", version, about = "Signatures, Lyons lifts and signature regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Chen,
    Grouplike,
    Lie,
    Shuffle,
}

#[derive(Subcommand)]
enum Command {
    /// Signature of a piecewise linear path over [s,t] as tensor JSON.
    Sign {
        /// CSV with header t,x1,...,xd.
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Start time (default 0).
        #[arg(long)]
        s: Option<f64>,
        /// End time (default: last sample).
        #[arg(long)]
        t: Option<f64>,
    },
    /// Residuals of Chen's relation or of group-likeness, as JSON.
    Check {
        /// Path CSV or tensor JSON.
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Check,
        /// Truncation level used when the input is a path.
        #[arg(long, default_value_t = 3)]
        level: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Tolerance for the Lie residual of the logarithm.
        #[arg(long, default_value_t = 1e-8)]
        lie_tol: f64,
    },
    /// Convergence trace of a Lyons lift as CSV.
    Lift {
        /// Path CSV, or JSON functional spec {"kind":"pure_area","dim":..,"area":[..],"T":..}.
        input: PathBuf,
        /// Target truncation level.
        #[arg(long, default_value_t = 3)]
        level: usize,
        /// Level of the input functional when it is a path.
        #[arg(long, default_value_t = 2)]
        from: usize,
        /// Dyadic mesh depths; repeat or comma-separate.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8, 10])]
        depth: Vec<usize>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// Allowed error of the deepest mesh against the exact value, when known.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Signature regression sweep; report CSV on stdout.
    Uat {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the family seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Writes the functional fitted at the last level as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arens–Eells norm of a molecule with its certificate, as JSON.
    Ae {
        /// JSON array [{"t":..,"v":[..]}, ..].
        molecule: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Dyadic depth of the extra candidate times.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Horizon of the candidate grid (default: largest support time).
        #[arg(long)]
        horizon: Option<f64>,
        /// Allowed gap between the upper and lower bounds.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Error(String),
    Tolerance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn load_path(path: &Path) -> Result<PiecewiseLinearPath, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    PiecewiseLinearPath::from_csv(file).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn print_json(value: &impl serde::Serialize) -> CmdResult {
    let text = serde_json::to_string(value).map_err(|e| Failure::Error(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn within(ok: bool) -> CmdResult {
    if ok {
        Ok(())
    } else {
        Err(Failure::Tolerance)
    }
}

fn cmd_sign(path: &Path, level: usize, s: Option<f64>, t: Option<f64>) -> CmdResult {
    let p = load_path(path)?;
    let sig = signature_pl(&p, level, s.unwrap_or(0.0), t.unwrap_or(p.horizon()))?;
    print_json(&sig)
}

fn load_element(input: &Path, level: usize) -> Result<GroupElement, Failure> {
    if is_csv(input) {
        let p = load_path(input)?;
        Ok(signature_pl(&p, level, 0.0, p.horizon())?)
    } else {
        serde_json::from_str(&read(input)?).map_err(|e| Failure::Error(format!("{}: {e}", input.display())))
    }
}

fn cmd_check(input: &Path, which: Check, level: usize, tol: f64, lie_tol: f64) -> CmdResult {
    match which {
        Check::Chen => {
            if !is_csv(input) {
                return Err(Failure::Error("chen check needs a path CSV".into()));
            }
            let x = ExactSignature::new(Arc::new(load_path(input)?), level);
            let triples = default_triples(&x, 8);
            let residual = chen_check(&x, &triples)?;
            print_json(&json!({ "check": "chen", "triples": triples.len(), "residual": residual, "tol": tol }))?;
            within(residual <= tol)
        }
        Check::Shuffle => {
            let x = load_element(input, level)?;
            let residual = weakly_grouplike_test(&x);
            print_json(&json!({ "check": "shuffle", "residual": residual, "tol": tol }))?;
            within(residual <= tol)
        }
        Check::Grouplike => {
            let x = load_element(input, level)?;
            let weakly = weakly_grouplike_test(&x);
            let primal = geng_primal_test(&x);
            let lie = grouplike_roundtrip(&x);
            print_json(&json!({
                "check": "grouplike",
                "weakly_grouplike": weakly,
                "primal": primal,
                "lie_of_log": lie,
                "tol": tol,
                "lie_tol": lie_tol,
            }))?;
            within(weakly <= tol && primal <= tol && lie <= lie_tol)
        }
        Check::Lie => {
            let x: TruncatedTensor = if is_csv(input) {
                load_element(input, level)?.log()
            } else {
                serde_json::from_str(&read(input)?).map_err(|e| Failure::Error(format!("{}: {e}", input.display())))?
            };
            let residuals = lie_membership(&x);
            let worst = residuals.iter().copied().fold(0.0, f64::max);
            print_json(&json!({ "check": "lie", "per_level": residuals, "residual": worst, "tol": lie_tol }))?;
            within(worst <= lie_tol)
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FunctionalSpec {
    PureArea {
        dim: usize,
        area: Vec<f64>,
        #[serde(rename = "T")]
        horizon: f64,
    },
}

fn cmd_lift(
    input: &Path,
    level: usize,
    from: usize,
    depths: &[usize],
    s: Option<f64>,
    t: Option<f64>,
    tol: f64,
) -> CmdResult {
    let (base, exact): (Arc<dyn MultiplicativeFunctional>, Option<Box<dyn Fn(f64, f64) -> Result<GroupElement, Error>>>) =
        if is_csv(input) {
            let p = Arc::new(load_path(input)?);
            let q = p.clone();
            (
                Arc::new(ExactSignature::new(p, from)),
                Some(Box::new(move |s, t| signature_pl(&q, level, s, t))),
            )
        } else {
            let spec: FunctionalSpec =
                serde_json::from_str(&read(input)?).map_err(|e| Failure::Error(format!("{}: {e}", input.display())))?;
            match spec {
                FunctionalSpec::PureArea { dim, area, horizon } => {
                    let a = PureArea::new(dim, area, horizon)?;
                    // products of exp(δA) telescope: the lift is exp((t-s)A)
                    let exact_area = a.clone();
                    (
                        Arc::new(a),
                        Some(Box::new(move |s, t| {
                            let g = exact_area.eval(s, t)?;
                            let log = g.log().pad_to_depth(level)?;
                            log.exp()
                        })),
                    )
                }
            }
        };
    let (s, t) = (s.unwrap_or(0.0), t.unwrap_or(base.horizon()));
    let lift = lyons_lift(base, level, depths)?;
    let trace = lift.trace(s, t)?;
    let reference = exact.map(|f| f(s, t)).transpose()?;
    println!("depth,max_coefficient_change,error_vs_exact");
    let mut last_error = None;
    for ((depth, value), inc) in trace.depths.iter().zip(&trace.values).zip(&trace.increments) {
        let err = reference.as_ref().map(|r| value.max_abs_diff(r)).transpose()?;
        last_error = err;
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        println!("{depth},{},{}", fmt(*inc), fmt(err));
    }
    within(last_error.is_none_or(|e| e <= tol))
}

fn cmd_uat(config: &Path, seed: Option<u64>, out: Option<&Path>) -> CmdResult {
    let mut cfg = ExperimentConfig::from_toml(&read(config)?)?;
    if let Some(seed) = seed {
        cfg.family.seed = seed;
    }
    let report = cfg.run()?;
    print!("{}", report.to_csv());
    eprintln!(
        "train {} test {} rejected {} max member norm {:.6} bound {:?}",
        report.n_train, report.n_test, report.rejected, report.max_member_norm, report.bound
    );
    if let Some(out) = out {
        let l = report.functionals.last().expect("at least one level");
        let text = serde_json::to_string_pretty(l).map_err(|e| Failure::Error(e.to_string()))?;
        fs::write(out, text + "\n").map_err(|e| Failure::Error(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn cmd_ae(molecule: &Path, alpha: f64, depth: usize, horizon: Option<f64>, tol: f64) -> CmdResult {
    let m: Molecule =
        serde_json::from_str(&read(molecule)?).map_err(|e| Failure::Error(format!("{}: {e}", molecule.display())))?;
    let horizon = horizon.unwrap_or_else(|| m.support().last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE));
    let candidates = candidate_times(&m, horizon, depth);
    let r = ae_norm(&m, alpha, &candidates)?;
    print_json(&json!({
        "alpha": alpha,
        "upper": r.upper,
        "lower": r.lower,
        "gap": r.upper - r.lower,
        "certificate": r.certificate,
        "witness": r.witness,
    }))?;
    within(r.upper - r.lower <= tol)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sign { path, level, s, t } => cmd_sign(path, *level, *s, *t),
        Command::Check {
            input,
            which,
            level,
            tol,
            lie_tol,
        } => cmd_check(input, *which, *level, *tol, *lie_tol),
        Command::Lift {
            input,
            level,
            from,
            depth,
            s,
            t,
            tol,
        } => cmd_lift(input, *level, *from, depth, *s, *t, *tol),
        Command::Uat { config, seed, out } => cmd_uat(config, *seed, out.as_deref()),
        Command::Ae {
            molecule,
            alpha,
            depth,
            horizon,
            tol,
        } => cmd_ae(molecule, *alpha, *depth, *horizon, *tol),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance) => {
            eprintln!("residual above tolerance");
            ExitCode::from(1)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
