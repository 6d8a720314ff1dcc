use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use toricstab::catalog;
use toricstab::json::{
    parse, to_string, DelzantReportJson, EnergyJson, FutakiJson, PlJson, PolytopeJson, PotentialJson,
    StabilityReportJson, TestConfigJson, Q,
};
use toricstab::kahler::{ray_energy, scalar_samples, EnergyContext, GridSpec, SymplecticPotential};
use toricstab::plconvex::PlFunction;
use toricstab::polytope::{DelzantPolytope, DEFAULT_MESH_CAP};
use toricstab::rational::format_rational;
use toricstab::stability;
use toricstab::verify::{run_suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "toricstab", version, about = "Exact toric K-stability data and symplectic-potential numerics")]
struct Cli {
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "TORICSTAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Delzant report with exact measures.
    Check { polytope: String },
    /// Futaki vector and affine destabilizer.
    Futaki { polytope: String },
    /// The Donaldson functional L(f).
    Lf { polytope: String, function: String },
    /// The J-norm of a convex PL function.
    Jnorm { polytope: String, function: String },
    /// The stability ratio L(f) / J(f).
    Ratio { polytope: String, function: String },
    /// Stability thresholds on nested subdivisions.
    Delta {
        polytope: String,
        #[arg(long, default_value_t = 2)]
        max_depth: u32,
        /// Largest number of mesh points per subdivision.
        #[arg(long, default_value_t = DEFAULT_MESH_CAP)]
        cap: usize,
    },
    /// Big polytope of the test configuration of f.
    Testconfig { polytope: String, function: String },
    /// E and M energies of a symplectic potential.
    Energy {
        polytope: String,
        /// A potential JSON file, or `guillemin`.
        #[arg(long, default_value = "guillemin")]
        potential: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Scalar curvature on an interior grid, as CSV.
    Scal {
        polytope: String,
        #[arg(long, default_value = "guillemin")]
        potential: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// K-energy along the ray u + t·f̃, as CSV.
    Ray {
        polytope: String,
        function: String,
        /// Comma-separated ray parameters.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,4")]
        t: Vec<f64>,
        #[arg(long, default_value = "guillemin")]
        potential: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// List built-in polytopes or emit one as JSON.
    Catalog {
        #[arg(long)]
        emit: Option<String>,
    },
    /// Run the invariant suite; exits 0 iff every check passes.
    Verify {
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct GridArgs {
    /// Minimum distance to the boundary for curvature samples.
    #[arg(long)]
    margin: Option<f64>,
    /// Spacing of the curvature sample grid.
    #[arg(long)]
    spacing: Option<f64>,
    /// Refinement levels of the graded quadrature.
    #[arg(long)]
    grade: Option<u32>,
    /// Gauss–Legendre order per quadrature interval.
    #[arg(long)]
    order: Option<usize>,
    /// Finite-difference step relative to the boundary distance.
    #[arg(long)]
    fd_step: Option<f64>,
}

impl GridArgs {
    fn spec(&self, dim: usize) -> GridSpec {
        let d = GridSpec::for_dim(dim);
        GridSpec {
            margin: self.margin.unwrap_or(d.margin),
            spacing: self.spacing.unwrap_or(d.spacing),
            grade: self.grade.unwrap_or(d.grade),
            order: self.order.unwrap_or(d.order),
            fd_step: self.fd_step.unwrap_or(d.fd_step),
        }
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

/// Catalog names take precedence over files unless the argument starts with `./` or `/`.
fn load_polytope(arg: &str) -> Result<DelzantPolytope> {
    let forced_file = arg.starts_with("./") || arg.starts_with('/');
    if !forced_file {
        if let Some(entry) = catalog::lookup(arg)? {
            return Ok(entry.polytope);
        }
    }
    Ok(parse::<PolytopeJson>(&read(arg)?)?.to_polytope()?)
}

fn load_function(arg: &str) -> Result<PlFunction> {
    Ok(parse::<PlJson>(&read(arg)?)?.to_pl()?)
}

fn load_potential(p: &DelzantPolytope, arg: &str) -> Result<SymplecticPotential> {
    if arg == "guillemin" && !Path::new(arg).exists() {
        return Ok(SymplecticPotential::guillemin(p));
    }
    let u = parse::<PotentialJson>(&read(arg)?)?.to_potential()?;
    if u.polytope() != p {
        bail!(toricstab::Error::InvalidInput("the potential is defined on a different polytope".into()));
    }
    Ok(u)
}

fn rational_json(q: &toricstab::rational::Rational) -> String {
    serde_json::to_string(&format_rational(q)).expect("strings serialise")
}

/// Output text and whether the command succeeded.
fn run(command: Command) -> Result<(String, bool)> {
    let text = match command {
        Command::Check { polytope } => {
            let p = load_polytope(&polytope)?;
            to_string(&DelzantReportJson::new(&p, &p.check_delzant()))
        }
        Command::Futaki { polytope } => {
            let p = load_polytope(&polytope)?;
            to_string(&FutakiJson::new(&p, &stability::futaki_character(&p)))
        }
        Command::Lf { polytope, function } => {
            let p = load_polytope(&polytope)?;
            rational_json(&stability::donaldson_l(&p, &load_function(&function)?)?)
        }
        Command::Jnorm { polytope, function } => {
            let p = load_polytope(&polytope)?;
            rational_json(&stability::j_norm(&p, &load_function(&function)?)?)
        }
        Command::Ratio { polytope, function } => {
            let p = load_polytope(&polytope)?;
            rational_json(&stability::stability_ratio(&p, &load_function(&function)?)?)
        }
        Command::Delta { polytope, max_depth, cap } => {
            let p = load_polytope(&polytope)?;
            to_string(&StabilityReportJson::new(&stability::delta_scan(&p, max_depth, cap)?))
        }
        Command::Testconfig { polytope, function } => {
            let p = load_polytope(&polytope)?;
            to_string(&TestConfigJson::new(&stability::build_test_config(&p, &load_function(&function)?)?))
        }
        Command::Energy { polytope, potential, grid } => {
            let p = load_polytope(&polytope)?;
            let u = load_potential(&p, &potential)?;
            let ctx = EnergyContext::new(&p, &grid.spec(p.dim()))?;
            to_string(&EnergyJson::from(&ctx.energy_m(&u)?))
        }
        Command::Scal { polytope, potential, grid } => {
            let p = load_polytope(&polytope)?;
            let u = load_potential(&p, &potential)?;
            let (samples, s) = scalar_samples(&u, &grid.spec(p.dim()))?;
            let mut out = String::new();
            let header: Vec<String> = (1..=p.dim()).map(|i| format!("x{i}")).collect();
            out.push_str(&format!("{},S\n", header.join(",")));
            for (x, v) in samples {
                let xs: Vec<String> = x.iter().map(|c| format!("{c}")).collect();
                out.push_str(&format!("{},{v:.12}\n", xs.join(",")));
            }
            out.push_str(&format!(
                "# count={} min={:.12} max={:.12} mean={:.12} mean_scalar={:.12}",
                s.count, s.min, s.max, s.mean, s.mean_scalar
            ));
            out
        }
        Command::Ray { polytope, function, t, potential, grid } => {
            let p = load_polytope(&polytope)?;
            let u = load_potential(&p, &potential)?;
            let f = load_function(&function)?;
            let ctx = EnergyContext::new(&p, &grid.spec(p.dim()))?;
            let r = ray_energy(&ctx, &u, &f, &t)?;
            let mut out = String::from("t,M\n");
            for (t, m) in &r.rows {
                out.push_str(&format!("{t},{m:.15}\n"));
            }
            out.push_str(&format!(
                "# slope={:.12} L(f)={} expected_slope={:.12}",
                r.slope,
                format_rational(&r.l_f),
                r.expected_slope
            ));
            out
        }
        Command::Catalog { emit } => match emit {
            Some(name) => {
                let entry = catalog::lookup(&name)?
                    .ok_or_else(|| toricstab::Error::InvalidInput(format!("unknown catalog entry {name:?}")))?;
                to_string(&PolytopeJson::from_polytope(&entry.polytope))
            }
            None => {
                let list: Vec<_> = catalog::entries()
                    .into_iter()
                    .map(|e| {
                        let fut = stability::futaki_character(&e.polytope);
                        json!({
                            "name": e.name,
                            "dim": e.polytope.dim(),
                            "valid": e.valid,
                            "futaki_zero": fut.zero,
                            "volume": Q(e.polytope.volume().clone()),
                            "notes": e.notes,
                        })
                    })
                    .collect();
                serde_json::to_string_pretty(&list)?
            }
        },
        Command::Verify { fast, seed } => {
            let outcomes = run_suite(SuiteConfig { seed, fast });
            let ok = outcomes.iter().all(|o| o.passed);
            let lines: Vec<String> = outcomes
                .iter()
                .map(|o| {
                    format!(
                        "{} {:<18} {:>7.2}s  {}",
                        if o.passed { "PASS" } else { "FAIL" },
                        o.name,
                        o.seconds,
                        o.detail
                    )
                })
                .collect();
            return Ok((lines.join("\n"), ok));
        }
    };
    Ok((text, true))
}

fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {path}")),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn error_json(e: &anyhow::Error) -> String {
    let code = if let Some(err) = e.downcast_ref::<toricstab::Error>() {
        err.code()
    } else if e.downcast_ref::<std::io::Error>().is_some() || e.chain().any(|c| c.is::<std::io::Error>()) {
        "IoError"
    } else {
        "Error"
    };
    let message = e.chain().map(ToString::to_string).collect::<Vec<_>>().join(": ");
    serde_json::to_string(&json!({"error": {"code": code, "message": message}})).expect("JSON")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", error_json(&anyhow!(e)));
            return ExitCode::from(2);
        }
    }
    let result = run(cli.command).and_then(|(text, ok)| emit(cli.out.as_deref(), &text).map(|_| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            println!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
