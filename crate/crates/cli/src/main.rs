mod config;
mod reference;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chenciner::classify::{classify_alpha_point, diagram_raster, Window};
use chenciner::simulate::{iterate_orbit, verify_portrait, ProbePlan, ReportStatus, Thresholds};
use chenciner::transform::{lowest_terms, DEFAULT_INVERSION_ORDER};
use chenciner::{Series, System, Tol, Transform};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "chenciner",
    version,
    about = "Degenerate Chenciner bifurcation analysis"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Zero band for beta1, beta2, L0 and multipliers.
    #[arg(long, global = true)]
    sign_tol: Option<f64>,
    /// Zero band for the discriminant; defaults to the sign band.
    #[arg(long, global = true)]
    delta_tol: Option<f64>,
    /// Truncation order of the input series.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=8))]
    order: Option<u32>,
    /// Inversion order of the parameter change.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=8))]
    k: Option<u32>,
    /// Directory for written artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Restrict output to one format.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Rotation angle, overriding the configuration.
    #[arg(long, global = true)]
    theta0: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the standing assumptions and print the linear coefficients.
    Validate,
    /// Print the parameter change, its inverse and the hat functions.
    Transform,
    /// Classify one parameter point.
    Classify {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        alpha: Pair,
    },
    /// Rasterise the bifurcation diagram in the mu plane.
    Diagram {
        /// `mu1_min,mu1_max,mu2_min,mu2_max`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<Window>,
        /// `nx,ny` grid nodes.
        #[arg(long, value_parser = parse_resolution, default_value = "201,201")]
        resolution: (usize, usize),
    },
    /// Iterate one orbit.
    Simulate {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        alpha: Pair,
        /// `rho` or `rho,phi`.
        #[arg(long, value_parser = parse_start)]
        start: Pair,
        #[arg(long)]
        steps: Option<usize>,
        /// Run all steps instead of stopping on a monotonicity certificate.
        #[arg(long)]
        no_certify: bool,
    },
    /// Check the predicted phase portrait against iterated orbits.
    Verify {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        alpha: Pair,
        #[arg(long)]
        steps: Option<usize>,
        /// Extra starting radii.
        #[arg(long, value_delimiter = ',')]
        probe: Vec<f64>,
    },
    /// Run the built-in reference system through every stage and compare
    /// with the reference values.
    ReproducePaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy)]
struct Pair(f64, f64);

fn floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<Pair, String> {
    let v = floats(s, 2)?;
    Ok(Pair(v[0], v[1]))
}

fn parse_start(s: &str) -> Result<Pair, String> {
    let v = if s.contains(',') {
        floats(s, 2)?
    } else {
        vec![floats(s, 1)?[0], 0.0]
    };
    if v[0] <= 0.0 {
        return Err("starting radius must be positive".into());
    }
    Ok(Pair(v[0], v[1]))
}

fn parse_window(s: &str) -> Result<Window, String> {
    let v = floats(s, 4)?;
    if !(v[0] < v[1] && v[2] < v[3]) {
        return Err("window bounds must be increasing".into());
    }
    Ok(Window {
        mu1: (v[0], v[1]),
        mu2: (v[2], v[3]),
    })
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [nx, ny] if nx > 0 && ny > 0 => Ok((nx, ny)),
        _ => Err("expected nx,ny with both positive".into()),
    }
}

/// Why a run stopped, and the exit status it maps to.
#[derive(Debug)]
enum Failure {
    Io(String),
    Config(String),
    Genericity(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Genericity(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

impl From<chenciner::Error> for Failure {
    fn from(e: chenciner::Error) -> Self {
        match e.condition() {
            Some(c) => Failure::Genericity(format!("genericity failure: {c} does not hold")),
            None => Failure::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Run<T = ()> = Result<T, Failure>;

struct Context {
    global: Global,
    cfg: RunConfig,
}

impl Context {
    fn new(global: Global) -> Run<Self> {
        let cfg = match &global.config {
            Some(p) => RunConfig::load(p).map_err(Failure::Config)?,
            None => RunConfig::default(),
        };
        Ok(Self { global, cfg })
    }

    fn system(&self) -> Run<System> {
        self.cfg
            .system(self.global.order, self.global.theta0)
            .map_err(Failure::Config)
    }

    /// The system and its parameter change, after checking every standing
    /// assumption the degenerate analysis needs.
    fn analysis(&self) -> Run<(System, Transform)> {
        let sys = self.system()?;
        if let Some(c) = sys.validate().first_failure() {
            return Err(Failure::Genericity(format!(
                "genericity failure: {c} does not hold"
            )));
        }
        let t = Transform::new(&sys, self.k())?;
        Ok((sys, t))
    }

    fn k(&self) -> u32 {
        self.global
            .k
            .or(self.cfg.transform.k)
            .unwrap_or(DEFAULT_INVERSION_ORDER)
    }

    fn tol(&self) -> Run<Tol> {
        let sign = self
            .global
            .sign_tol
            .or(self.cfg.classify.sign_tol)
            .unwrap_or(1e-9);
        let delta = self
            .global
            .delta_tol
            .or(self.cfg.classify.delta_tol)
            .unwrap_or(sign);
        for (name, v) in [("sign_tol", sign), ("delta_tol", delta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Failure::Config(format!(
                    "classify.{name}: must be a nonnegative number, got {v}"
                )));
            }
        }
        Ok(Tol::uniform(sign).with_delta(delta))
    }

    fn thresholds(&self, steps: Option<usize>) -> Run<Thresholds<f64>> {
        let s = &self.cfg.simulate;
        let d = Thresholds::<f64>::default();
        let th = Thresholds {
            origin: s.origin.unwrap_or(d.origin),
            escape: s.escape.unwrap_or(d.escape),
            window: s.window.unwrap_or(d.window),
            circle_range: s.circle_range.unwrap_or(d.circle_range),
            circle_match: s.circle_match.unwrap_or(d.circle_match),
            n_max: steps.or(s.steps).unwrap_or(d.n_max),
            certify: s.certify.unwrap_or(d.certify),
            tol: self.tol()?,
        };
        if !(th.origin > 0.0 && th.escape > th.origin) {
            return Err(Failure::Config("simulate: need 0 < origin < escape".into()));
        }
        if th.window < 2 || th.n_max == 0 {
            return Err(Failure::Config(
                "simulate: need window >= 2 and steps >= 1".into(),
            ));
        }
        Ok(th)
    }

    fn plan(&self, extra: &[f64]) -> ProbePlan<f64> {
        let s = &self.cfg.simulate;
        let mut plan = ProbePlan::with_extra(&[s.probes.as_slice(), extra].concat());
        plan.bracket = s.bracket.unwrap_or(true);
        plan.phi1 = s.phi1.unwrap_or(0.0);
        plan
    }

    fn out_dir(&self) -> PathBuf {
        self.global
            .out
            .clone()
            .or_else(|| self.cfg.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Formats to write out of those a command can produce.
    fn formats(&self, available: &[Format]) -> Run<Vec<Format>> {
        if let Some(f) = self.global.format {
            return if available.contains(&f) {
                Ok(vec![f])
            } else {
                Err(Failure::Config(format!(
                    "--format {f:?} is not produced by this command"
                )))
            };
        }
        match &self.cfg.output.formats {
            Some(list) => Ok(available
                .iter()
                .copied()
                .filter(|f| list.contains(f))
                .collect()),
            None => Ok(available.to_vec()),
        }
    }

    fn json_stdout(&self) -> bool {
        self.global.format == Some(Format::Json)
    }
}

/// Six significant digits.
fn g6(x: f64) -> String {
    format!("{x:.5e}")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Run<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialise");
    s.push('\n');
    s
}

fn validate(ctx: &Context) -> Run {
    let sys = ctx.system()?;
    let report = sys.validate();
    let failure = report.first_failure();
    let m2 = match failure {
        None => Transform::new(&sys, ctx.k())?
            .m2()
            .ok()
            .map(|m| m.to_string()),
        Some(_) => None,
    };
    if ctx.json_stdout() {
        print!("{}", to_json(&json!({ "report": report, "m2": m2 })));
    } else {
        let yes = |b: bool| if b { "holds" } else { "FAILS" };
        let c = &report.constants;
        let rows = [
            (
                "beta1(0) = beta2(0) = 0".to_string(),
                report.beta1_vanishes && report.beta2_vanishes,
            ),
            (format!("L0 = {}", c.l0), report.l0_nonzero),
            (
                format!("(dc1) c1*d2 - c2*d1 = {}", report.degeneracy_det),
                report.degenerate,
            ),
            (
                format!("(newt) c1*l2 - c2*l1 = {}", report.regularity_det),
                report.new_regular,
            ),
        ];
        for (label, ok) in rows {
            println!("{label:<32} {}", yes(ok));
        }
        println!(
            "c1 = {}  c2 = {}  d1 = {}  d2 = {}  l1 = {}  l2 = {}",
            c.c1, c.c2, c.d1, c.d2, c.l1, c.l2
        );
        if let Some(m2) = &m2 {
            println!("m2 = {m2}");
        }
    }
    if let Some(c) = failure {
        return Err(Failure::Genericity(format!(
            "genericity failure: {c} does not hold"
        )));
    }
    if m2.is_none() {
        return Err(chenciner::Error::Genericity(chenciner::Condition::M2Nonzero).into());
    }
    if let Some(dir) = &ctx.global.out {
        write_file(
            dir,
            "validate.json",
            &to_json(&json!({ "report": report, "m2": m2 })),
        )?;
    }
    Ok(())
}

fn transform(ctx: &Context) -> Run {
    let (sys, t) = ctx.analysis()?;
    let mu = ["mu1", "mu2"];
    let hat_l2 = lowest_terms(&t.hat.l2, 2);
    let hat_b2 = lowest_terms(&t.hat.beta2, 2);
    let hat_b1 = lowest_terms(&t.hat.beta1, 4);
    let diagram = t.diagram().ok();
    let entries = |s: &Series| s.entries();
    let doc = json!({
        "order": sys.order(),
        "k": t.k,
        "forward": { "mu1": entries(&t.forward.0), "mu2": entries(&t.forward.1) },
        "inverse": { "alpha1": entries(&t.inverse.0), "alpha2": entries(&t.inverse.1) },
        "jacobian_det0": t.jacobian_det0.to_string(),
        "hat": {
            "l2": entries(&t.hat.l2),
            "beta2": entries(&t.hat.beta2),
            "beta1": entries(&t.hat.beta1),
            "lowest_terms": {
                "l2": hat_l2.display_with(mu).to_string(),
                "beta2": hat_b2.display_with(mu).to_string(),
                "beta1": hat_b1.display_with(mu).to_string(),
            },
        },
        "constants": t.constants,
        "diagram": diagram,
        "round_trip_exact": t.round_trip_exact(),
    });
    if ctx.json_stdout() {
        print!("{}", to_json(&doc));
    } else {
        println!("forward (order {})", sys.order());
        println!("  mu1 = {}", t.forward.0);
        println!("  mu2 = {}", t.forward.1);
        println!("inverse (k = {})", t.k);
        println!("  alpha1 = {}", t.inverse.0.display_with(mu));
        println!("  alpha2 = {}", t.inverse.1.display_with(mu));
        println!("  det A0 = {}", t.jacobian_det0);
        println!("  round trip exact: {}", t.round_trip_exact());
        println!("hat functions, lowest terms");
        println!("  L2^    = {}", hat_l2.display_with(mu));
        println!("  beta2^ = {}", hat_b2.display_with(mu));
        println!("  beta1^ = {}", hat_b1.display_with(mu));
        let c = &t.constants;
        let opt = |v: &Option<chenciner::Rational>| {
            v.as_ref()
                .map_or("undefined".to_string(), |v| v.to_string())
        };
        println!(
            "L0 = {}  c1 = {}  c2 = {}  d1 = {}  d2 = {}  l1 = {}  l2 = {}  m2 = {}  k1 = {}",
            c.l0,
            c.c1,
            c.c2,
            c.d1,
            c.d2,
            c.l1,
            c.l2,
            opt(&c.m2),
            opt(&c.k1)
        );
        match diagram {
            Some(d) => println!("diagram {} (sign c1*d1 {})", d.diagram, d.c1d1),
            None => println!("diagram undefined"),
        }
    }
    if let Some(dir) = &ctx.global.out {
        write_file(dir, "transform.json", &to_json(&doc))?;
    }
    Ok(())
}

fn classify(ctx: &Context, alpha: Pair) -> Run {
    let (sys, t) = ctx.analysis()?;
    let c = classify_alpha_point(&sys, &t, (alpha.0, alpha.1), &ctx.tol()?)?;
    if ctx.json_stdout() {
        print!("{}", to_json(&c));
    } else {
        println!("mu=({:.4e}, {:.4e}) region={}", c.mu.0, c.mu.1, c.label);
        let p = c.label.pattern;
        println!(
            "signs L0={} Delta={} beta1={} beta2={}",
            p.l0, p.delta, p.beta1, p.beta2
        );
        if !c.routes_agree() {
            println!("note: hat series at mu gives region {}", c.hat_label);
        }
    }
    if let Some(dir) = &ctx.global.out {
        write_file(dir, "classify.json", &to_json(&c))?;
    }
    Ok(())
}

fn diagram(ctx: &Context, window: Option<Window>, resolution: (usize, usize)) -> Run {
    let (_, t) = ctx.analysis()?;
    let formats = ctx.formats(&[Format::Csv, Format::Json, Format::Svg])?;
    let raster = diagram_raster(&t, window.unwrap_or_default(), resolution, &ctx.tol()?, 401)?;
    let dir = ctx.out_dir();
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Csv => {
                let mut grid = String::from("mu1,mu2,region\n");
                for c in &raster.cells {
                    let region = c.label.number().map_or(String::new(), |n| n.to_string());
                    let _ = writeln!(grid, "{},{},{region}", g6(c.mu1), g6(c.mu2));
                }
                written.push(write_file(&dir, "diagram.csv", &grid)?);
                let mut curves = String::from("curve,mu2,mu1\n");
                for (name, pts) in [("B1", &raster.curves.b1), ("B2", &raster.curves.b2)] {
                    for (mu2, mu1) in pts {
                        let _ = writeln!(curves, "{name},{},{}", g6(*mu2), g6(*mu1));
                    }
                }
                written.push(write_file(&dir, "curves.csv", &curves)?);
            }
            Format::Json => written.push(write_file(&dir, "diagram.json", &to_json(&raster))?),
            Format::Svg => written.push(write_file(&dir, "diagram.svg", &svg::diagram(&raster))?),
        }
    }
    let regions: Vec<String> = raster.regions().iter().map(u8::to_string).collect();
    println!(
        "diagram {} regions {} m2 = {} k1 = {}",
        raster.diagram.diagram,
        regions.join(" "),
        g6(raster.curves.m2),
        g6(raster.curves.k1)
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn simulate(
    ctx: &Context,
    alpha: Pair,
    start: Pair,
    steps: Option<usize>,
    no_certify: bool,
) -> Run {
    let sys = ctx.system()?;
    let mut th = ctx.thresholds(steps)?;
    th.certify &= !no_certify;
    let formats = ctx.formats(&[Format::Csv, Format::Json, Format::Svg])?;
    let orbit = iterate_orbit(&sys, (alpha.0, alpha.1), (start.0, start.1), &th);
    let radii = sys
        .invariant_circles((alpha.0, alpha.1), &th.tol)
        .map(|c| c.radii())
        .unwrap_or_default();
    let dir = ctx.out_dir();
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Csv => {
                let mut s = String::from("n,rho,phi,x,y\n");
                for p in &orbit.points {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        p.n,
                        g6(p.rho),
                        g6(p.phi),
                        g6(p.x),
                        g6(p.y)
                    );
                }
                written.push(write_file(&dir, "orbit.csv", &s)?);
            }
            Format::Json => written.push(write_file(&dir, "orbit.json", &to_json(&orbit))?),
            Format::Svg => {
                written.push(write_file(&dir, "orbit.svg", &svg::orbit(&orbit, &radii))?)
            }
        }
    }
    println!(
        "outcome={} rule={:?} steps={} final_rho={}",
        orbit.outcome,
        orbit.rule,
        orbit.n_steps,
        g6(orbit.final_rho())
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn verify(ctx: &Context, alpha: Pair, steps: Option<usize>, probe: &[f64]) -> Run {
    let (sys, t) = ctx.analysis()?;
    let th = ctx.thresholds(steps)?;
    let formats = ctx.formats(&[Format::Csv, Format::Json])?;
    let report = verify_portrait(&sys, &t, (alpha.0, alpha.1), &ctx.plan(probe), &th)?;
    let dir = ctx.out_dir();
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Csv => {
                let mut s =
                    String::from("start,expected,observed,rule,n_steps,final_rho,verdict\n");
                for p in &report.probes {
                    let _ = writeln!(
                        s,
                        "{},{},{},{:?},{},{},{:?}",
                        g6(p.start),
                        p.expected,
                        p.observed,
                        p.rule,
                        p.n_steps,
                        g6(p.final_rho),
                        p.verdict
                    );
                }
                written.push(write_file(&dir, "verify.csv", &s)?);
            }
            Format::Json => written.push(write_file(&dir, "verify.json", &to_json(&report))?),
            Format::Svg => unreachable!(),
        }
    }
    println!(
        "mu=({:.4e}, {:.4e}) region={} circles={} structure={}",
        report.mu.0,
        report.mu.1,
        report.label,
        report.census.len(),
        if report.structure_ok {
            "ok"
        } else {
            "MISMATCH"
        }
    );
    for p in &report.probes {
        println!(
            "  rho1={} expected {} observed {} after {} steps: {:?}",
            g6(p.start),
            p.expected,
            p.observed,
            p.n_steps,
            p.verdict
        );
    }
    println!("status {:?}", report.status);
    for p in written {
        println!("wrote {}", p.display());
    }
    match report.status {
        ReportStatus::Fail => Err(Failure::Mismatch("portrait verification failed".into())),
        ReportStatus::Inconclusive => {
            eprintln!("warning: most probes stayed undecided; raise --steps");
            Ok(())
        }
        ReportStatus::Pass => Ok(()),
    }
}

fn run(cli: Cli) -> Run {
    let ctx = Context::new(cli.global)?;
    match cli.command {
        Command::Validate => validate(&ctx),
        Command::Transform => transform(&ctx),
        Command::Classify { alpha } => classify(&ctx, alpha),
        Command::Diagram { window, resolution } => diagram(&ctx, window, resolution),
        Command::Simulate {
            alpha,
            start,
            steps,
            no_certify,
        } => simulate(&ctx, alpha, start, steps, no_certify),
        Command::Verify {
            alpha,
            steps,
            probe,
        } => verify(&ctx, alpha, steps, &probe),
        Command::ReproducePaper => reference::reproduce(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Io(m)
            | Failure::Config(m)
            | Failure::Genericity(m)
            | Failure::Mismatch(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
