mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::Config;
use exobessel::format::num_digits;
use exobessel::grid::{parse_range, GridFunction, Interp, TimeGrid};
use exobessel::kernels::{self, KernelEval, Setting};
use exobessel::norms::{lorentz_p1_norm, lp_norm, weak_lp_quasinorm_with, Flavor, Norm, Tail};
use exobessel::operators::hardy::{hardy, HardyKind};
use exobessel::operators::local::{local_g, local_hilbert, local_maximal, n_operator, nlog_operator, t_psi, PsiParams};
use exobessel::operators::semigroup::{g_function, heat_apply, heat_maximal, poisson_apply, poisson_maximal};
use exobessel::operators::singular::{frac_integral_apply, riesz_apply};
use exobessel::sharpness::{region_csv, scan_region, Aux, TheoremId};
use exobessel::special_fn::{bessel_i, regime_switch, Order, Regime};
use exobessel::verify::{run_suite, Suite};
use exobessel::{Error, Result};
use rayon::prelude::*;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Classical and exotic Bessel operators: kernels, operators, weighted norms and boundedness regions.
///
/// Thread count for parallel work follows RAYON_NUM_THREADS.
#[derive(Parser, Debug)]
#[command(name = "exobessel", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Flat key = value config file; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    t_min: Option<f64>,
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Number of time-grid points for suprema.
    #[arg(long, global = true)]
    t_count: Option<usize>,
    /// Polish maximisers with a golden-section search.
    #[arg(long, global = true)]
    refine: bool,
    /// Lambda levels for weak quasinorms of linear inputs.
    #[arg(long, global = true)]
    lambda_grid: Option<usize>,
    /// Significant digits in numeric output.
    #[arg(long, global = true)]
    precision: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modified Bessel function I_mu(w).
    Bessel {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long)]
        w: f64,
        /// Print e^{-w} I_mu(w) instead.
        #[arg(long)]
        scaled: bool,
    },
    /// A single kernel value; diagnostics go to stderr.
    Kernel {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Apply an operator to a sampled function; writes `x,result`.
    Op(OpArgs),
    /// Weighted norm of a sampled function.
    Norm {
        /// Exponent, or `inf`.
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value = "strong")]
        flavor: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "linear")]
        interp: String,
    },
    /// Tabulate a boundedness region as `p,delta,strong,weak,rwt`.
    Region {
        #[arg(long)]
        theorem: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        nu: f64,
        /// `start:stop:step`
        #[arg(long)]
        p: String,
        /// `start:stop:step`
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Target exponent for potential operators (`inf` allowed).
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "verbatim")]
enum Family {
    HeatCls,
    HeatExo,
    PoissonExo,
    RieszCls,
    RieszExo,
    CompPotentialCls,
    PotentialCls,
    PotentialExo,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum OpName {
    Heat,
    HeatMax,
    Poisson,
    PoissonMax,
    G,
    Riesz,
    RieszAdj,
    Fracint,
    Hardy0,
    Hardyinf,
    Hardy0log,
    Hardyinflog,
    LocalMax,
    LocalHilbert,
    LocalG,
    N,
    Nlog,
    Tpsi,
}

#[derive(Args, Debug)]
struct OpArgs {
    #[arg(long, value_enum)]
    name: OpName,
    #[arg(long, default_value = "exo")]
    setting: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    nu: f64,
    /// Time for `heat` and `poisson`.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Window factor for Hardy, local Hilbert and T_psi operators.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Ratio bound for the local maximal function.
    #[arg(long, default_value_t = 4.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 0.0625)]
    c: f64,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "constant")]
    interp: String,
    /// `start:stop:step` or `log:a:b:n`.
    #[arg(long)]
    xgrid: String,
    #[arg(long, default_value = "-")]
    out: String,
}

/// Failures surfaced to the exit-code contract.
enum Failure {
    Lib(Error),
    Io(String),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(n)) => {
            eprintln!("verification: {n} check(s) failed");
            ExitCode::from(3)
        }
    }
}

fn load_config(g: &Global) -> std::result::Result<Config, Failure> {
    let mut cfg = match &g.config {
        Some(path) => Config::parse_str(&std::fs::read_to_string(path)?)?,
        None => Config::default(),
    };
    let q = &mut cfg.quadrature;
    q.abs_tol = g.abs_tol.unwrap_or(q.abs_tol);
    q.rel_tol = g.rel_tol.unwrap_or(q.rel_tol);
    q.max_subdivisions = g.max_subdivisions.unwrap_or(q.max_subdivisions);
    let t = &mut cfg.time_grid;
    t.t_min = g.t_min.unwrap_or(t.t_min);
    t.t_max = g.t_max.unwrap_or(t.t_max);
    t.count = g.t_count.unwrap_or(t.count);
    t.refine |= g.refine;
    cfg.lambda_grid_size = g.lambda_grid.unwrap_or(cfg.lambda_grid_size);
    cfg.output_precision = g.precision.unwrap_or(cfg.output_precision);
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: &str, text: &str) -> std::result::Result<(), Failure> {
    if out == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())?;
    } else {
        std::fs::write(out, text)?;
    }
    Ok(())
}

fn read_input(path: &Path, interp: &str) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    GridFunction::from_csv(&text, interp.parse::<Interp>()?)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::domain(format!("--{flag} is required here")))
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let cfg = load_config(&cli.global)?;
    let fmt = |x: f64| num_digits(x, cfg.output_precision);
    match cli.command {
        Command::Bessel { mu, w, scaled } => {
            let e = bessel_i(Order::new(mu)?, w)?;
            let value = if scaled { fmt(e.scaled_value) } else { e.value.map_or("inf".into(), fmt) };
            if e.degraded {
                eprintln!("warning: expansion did not reach full accuracy");
            }
            println!("{value} {}", e.regime.as_str());
        }
        Command::Kernel { family, nu, t, sigma, x, y } => match kernel(family, nu, t, sigma, x, y, &cfg) {
            Ok((v, diag)) => {
                println!("{}", fmt(v));
                eprintln!("{diag}");
            }
            Err(Error::Divergent(msg)) => {
                println!("divergent");
                eprintln!("{msg}");
            }
            Err(e) => return Err(e.into()),
        },
        Command::Op(args) => emit(&args.out.clone(), &op(args, &cfg, &fmt)?)?,
        Command::Norm { p, delta, flavor, input, interp } => {
            let p: f64 = p.parse().map_err(|_| Error::Parse(format!("bad exponent '{p}'")))?;
            let f = read_input(&input, &interp)?;
            let n: Norm = match flavor.parse::<Flavor>()? {
                Flavor::Strong => lp_norm(&f, p, delta)?,
                Flavor::Weak => weak_lp_quasinorm_with(&f, p, delta, cfg.lambda_grid_size)?,
                Flavor::LorentzP1 => lorentz_p1_norm(&f, p, delta)?,
            };
            match n.tail {
                Tail::Divergent => println!("divergent"),
                _ => println!("{}", fmt(n.value)),
            }
            eprintln!("tail={}", tail_name(n.tail));
        }
        Command::Region { theorem, nu, p, delta, xi, sigma, q, out } => {
            let id: TheoremId = theorem.parse()?;
            let aux = Aux { xi, sigma, q };
            let cells = scan_region(id, nu, &parse_range(&p)?, &parse_range(&delta)?, &aux)?;
            emit(&out, &region_csv(&cells))?;
        }
        Command::Verify { suite, out } => {
            let suite: Suite = suite.parse()?;
            let checks = run_suite(suite)?;
            let json = serde_json::to_string_pretty(&checks).map_err(|e| Failure::Io(e.to_string()))?;
            emit(&out, &(json + "\n"))?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(Failure::Verification(failed));
            }
        }
    }
    Ok(())
}

fn tail_name(t: Tail) -> &'static str {
    match t {
        Tail::Closed => "closed",
        Tail::Convergent => "convergent",
        Tail::Divergent => "divergent",
        Tail::Inconclusive => "inconclusive",
    }
}

fn quad_diag(k: KernelEval) -> (f64, String) {
    let d = k.diagnostics;
    (
        k.value,
        format!(
            "route={} subdivisions={} evaluations={} error={:e}",
            d.route.as_str(),
            d.subdivisions,
            d.evaluations,
            d.error_estimate
        ),
    )
}

fn kernel(
    family: Family,
    nu: f64,
    t: Option<f64>,
    sigma: Option<f64>,
    x: f64,
    y: f64,
    cfg: &Config,
) -> Result<(f64, String)> {
    let q = &cfg.quadrature;
    let heat = |setting: Setting| -> Result<(f64, String)> {
        let t = need(t, "t")?;
        let v = kernels::heat_kernel(setting, nu, t, x, y)?;
        let regime = if x * y / (2.0 * t) < regime_switch(setting.heat_order(nu)) { Regime::Series } else { Regime::Asymptotic };
        Ok((v, format!("route=closed-form subdivisions=0 regime={}", regime.as_str())))
    };
    match family {
        Family::HeatCls => heat(Setting::Classical),
        Family::HeatExo => heat(Setting::Exotic),
        Family::PoissonExo => Ok(quad_diag(kernels::poisson_exotic(nu, need(t, "t")?, x, y, q)?)),
        Family::RieszCls => Ok(quad_diag(kernels::riesz_kernel(Setting::Classical, nu, x, y, q)?)),
        Family::RieszExo => Ok(quad_diag(kernels::riesz_kernel(Setting::Exotic, nu, x, y, q)?)),
        Family::CompPotentialCls => Ok(quad_diag(kernels::comp_potential(nu, x, y, q)?)),
        Family::PotentialCls => {
            Ok(quad_diag(kernels::potential_kernel(Setting::Classical, nu, need(sigma, "sigma")?, x, y, q)?))
        }
        Family::PotentialExo => {
            Ok(quad_diag(kernels::potential_kernel(Setting::Exotic, nu, need(sigma, "sigma")?, x, y, q)?))
        }
    }
}

fn op(a: OpArgs, cfg: &Config, fmt: &(dyn Fn(f64) -> String + Sync)) -> Result<String> {
    let f = read_input(&a.input, &a.interp)?;
    let xs = parse_range(&a.xgrid)?;
    let setting: Setting = a.setting.parse()?;
    let q = &cfg.quadrature;
    let tg: &TimeGrid = &cfg.time_grid;
    // Validate operator-specific flags once, before the parallel sweep.
    let t = match a.name {
        OpName::Heat | OpName::Poisson => need(a.t, "t")?,
        _ => 0.0,
    };
    let sigma = if a.name == OpName::Fracint { need(a.sigma, "sigma")? } else { 0.0 };
    let xi = match a.name {
        OpName::Hardy0 | OpName::Hardyinf | OpName::Tpsi => need(a.xi, "xi")?,
        _ => 0.0,
    };
    let eval = |x: f64| -> Result<f64> {
        match a.name {
            OpName::Heat => heat_apply(setting, a.nu, t, &f, x, q),
            OpName::HeatMax => heat_maximal(setting, a.nu, &f, x, tg, q).map(|s| s.value),
            OpName::Poisson => poisson_apply(setting, a.nu, t, &f, x, q),
            OpName::PoissonMax => poisson_maximal(setting, a.nu, &f, x, tg, q).map(|s| s.value),
            OpName::G => g_function(setting, a.nu, &f, x, tg, q),
            OpName::Riesz => riesz_apply(setting, a.nu, &f, x, false, q),
            OpName::RieszAdj => riesz_apply(setting, a.nu, &f, x, true, q),
            OpName::Fracint => frac_integral_apply(setting, a.nu, sigma, &f, x, q),
            OpName::Hardy0 => hardy(HardyKind::Zero, xi, a.b, &f, x),
            OpName::Hardyinf => hardy(HardyKind::Infinity, xi, a.b, &f, x),
            OpName::Hardy0log => hardy(HardyKind::ZeroLog, 1.0, a.b, &f, x),
            OpName::Hardyinflog => hardy(HardyKind::InfinityLog, -1.0, a.b, &f, x),
            OpName::LocalMax => local_maximal(a.k, &f, x, 40),
            OpName::LocalHilbert => local_hilbert(a.nu, &f, x, a.b, q).map(|p| p.value),
            OpName::LocalG => local_g(a.nu, &f, x, tg, q),
            OpName::N => n_operator(&f, x),
            OpName::Nlog => nlog_operator(&f, x),
            OpName::Tpsi => t_psi(xi, PsiParams { eps: a.eps, c: a.c }, a.b, &f, x, tg, q).map(|s| s.value),
        }
    };
    let rows: Vec<String> = xs
        .par_iter()
        .map(|&x| match eval(x) {
            Ok(v) => Ok(format!("{},{}\n", fmt(x), fmt(v))),
            Err(Error::Divergent(_)) => Ok(format!("{},divergent\n", fmt(x))),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(std::iter::once("x,result\n".to_string()).chain(rows).collect())
}
