use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use vcat_core::checks::{run_all, CheckResult};
use vcat_core::complex::{build_complex_with, verify_euler_with, BuildOptions, VerifyOptions, DEFAULT_BUDGET};
use vcat_core::gendet::{parse_matrix, verify_matrix};
use vcat_core::zndiag::{chain_map_between, induced_cohomology_map_between, parse_morphism, CohomologyBasis};
use vcat_core::{parse_diagram, torus_two_n, ColorVector, GF2Matrix, HomologyReport, LinkDiagram};

#[derive(Parser)]
#[command(name = "vcat", version, about = "Cochain complexes whose Euler characteristics are generalized Vandermonde determinants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Cap on the total number of basis elements of a built complex.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// The closure of the 2-braid with n crossings.
    Torus {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        colors: Colors,
    },
    /// A diagram read from a JSON file.
    Diagram {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        colors: Colors,
    },
    /// The unit/counit complex of a positive integer matrix.
    Matrix {
        #[arg(long)]
        file: PathBuf,
        /// Only dimensions and Euler characteristic.
        #[arg(long)]
        skip_homology: bool,
    },
    /// Chain map and cohomology map of an arc-and-dot morphism.
    Zmap {
        /// Morphism JSON file.
        #[arg(long)]
        file: PathBuf,
        /// Diagram JSON file; defaults to the 2-braid closure with n crossings.
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Run the built-in property checks.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Colors {
    /// Comma-separated color vector.
    #[arg(long)]
    x: ColorVector,
    /// Only dimensions and Euler characteristic.
    #[arg(long)]
    skip_homology: bool,
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct ZmapReport {
    source: Vec<usize>,
    target: Vec<usize>,
    arcs: Vec<[usize; 2]>,
    dots: Vec<usize>,
    chain_map_commutes: bool,
    source_cochain_dims: Vec<usize>,
    target_cochain_dims: Vec<usize>,
    source_homology_dims: Vec<usize>,
    target_homology_dims: Vec<usize>,
    /// Matrices of the induced maps, one row per target class.
    induced: Vec<Vec<Vec<u8>>>,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct CheckReport {
    seed: u64,
    checks: Vec<CheckResult>,
    all_passed: bool,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn verify_options(cli: &Cli, skip_homology: bool) -> VerifyOptions {
    VerifyOptions {
        build: BuildOptions {
            budget: cli.budget,
            ..Default::default()
        },
        skip_homology,
    }
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn print_homology(r: &HomologyReport) {
    if let Some(x) = &r.x {
        println!("x                      {}", fmt_list(x));
    }
    if let Some(s) = &r.s {
        println!("s                      {}", fmt_list(s));
    }
    println!("cochain dims           {}", fmt_list(&r.cochain_dims));
    match &r.homology_dims {
        Some(h) => println!("homology dims          {}", fmt_list(h)),
        None => println!("homology dims          (skipped)"),
    }
    println!("euler characteristic   {}", r.euler_characteristic);
    if let Some(h) = r.homology_euler_characteristic {
        println!("homology euler char.   {h}");
    }
    match r.determinant {
        Some(d) => println!("determinant            {d}"),
        None => println!("determinant            (out of range)"),
    }
    println!("agree                  {}", r.agree.unwrap_or(false));
    println!("elapsed                {} ms", r.elapsed_ms);
}

fn emit<T: Serialize>(json: bool, out: &Output<T>, table: impl FnOnce()) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(out)?);
    } else {
        table();
    }
    Ok(())
}

fn homology_command(cli: &Cli, name: &'static str, input: Option<String>, report: HomologyReport) -> anyhow::Result<ExitCode> {
    let ok = report.agree == Some(true);
    let out = Output {
        command: name,
        input,
        body: report,
    };
    emit(cli.json, &out, || print_homology(&out.body))?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn check_len(d: &LinkDiagram, x: &ColorVector) -> anyhow::Result<()> {
    if d.num_crossings() != x.len() {
        bail!(
            "color vector {x} has {} entries but the diagram has {} crossings",
            x.len(),
            d.num_crossings()
        );
    }
    Ok(())
}

fn matrix_rows(m: &GF2Matrix) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|r| m.row(r).to_bits()).collect()
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Torus { n, colors } => {
            let d = torus_two_n(*n)?;
            check_len(&d, &colors.x)?;
            let r = verify_euler_with(&d, &colors.x, &verify_options(cli, colors.skip_homology))?;
            homology_command(cli, "torus", None, r)
        }
        Command::Diagram { file, colors } => {
            let d = parse_diagram(&read(file)?)?;
            check_len(&d, &colors.x)?;
            let r = verify_euler_with(&d, &colors.x, &verify_options(cli, colors.skip_homology))?;
            homology_command(cli, "diagram", Some(file.display().to_string()), r)
        }
        Command::Matrix { file, skip_homology } => {
            let m = parse_matrix(&read(file)?)?;
            let r = verify_matrix(&m, &verify_options(cli, *skip_homology))?;
            homology_command(cli, "matrix", Some(file.display().to_string()), r)
        }
        Command::Zmap { file, diagram } => {
            let start = Instant::now();
            let m = parse_morphism(&read(file)?)?;
            let d = match diagram {
                Some(p) => parse_diagram(&read(p)?)?,
                None => torus_two_n(m.source().len())?,
            };
            check_len(&d, m.source())?;
            let opts = BuildOptions {
                budget: cli.budget,
                ..Default::default()
            };
            let cx = build_complex_with(&d, m.source(), &opts)?;
            let cy = build_complex_with(&d, m.target(), &opts)?;
            let f = chain_map_between(cx.layout(), cy.layout(), &m)?;
            let commutes = f.check_commutes(&cx, &cy).is_ok();
            let (hx, hy) = (CohomologyBasis::new(&cx)?, CohomologyBasis::new(&cy)?);
            let induced = if commutes {
                induced_cohomology_map_between(&hx, &cy, &hy, &f)?
                    .levels
                    .iter()
                    .map(matrix_rows)
                    .collect()
            } else {
                Vec::new()
            };
            let out = Output {
                command: "zmap",
                input: Some(file.display().to_string()),
                body: ZmapReport {
                    source: m.source().as_slice().to_vec(),
                    target: m.target().as_slice().to_vec(),
                    arcs: m.arcs().iter().map(|&(i, j)| [i, j]).collect(),
                    dots: m.dots().to_vec(),
                    chain_map_commutes: commutes,
                    source_cochain_dims: cx.level_dims().to_vec(),
                    target_cochain_dims: cy.level_dims().to_vec(),
                    source_homology_dims: hx.dims(),
                    target_homology_dims: hy.dims(),
                    induced,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                },
            };
            emit(cli.json, &out, || {
                let b = &out.body;
                println!("source                 {}", fmt_list(&b.source));
                println!("target                 {}", fmt_list(&b.target));
                println!("chain map commutes     {}", b.chain_map_commutes);
                println!("source homology dims   {}", fmt_list(&b.source_homology_dims));
                println!("target homology dims   {}", fmt_list(&b.target_homology_dims));
                for (k, h) in b.induced.iter().enumerate() {
                    let rows: Vec<String> = h.iter().map(|r| r.iter().map(u8::to_string).collect()).collect();
                    println!("H^{k}                    {}", fmt_list(&rows));
                }
            })?;
            Ok(if commutes { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Check { seed } => {
            let checks = run_all(*seed);
            let all_passed = checks.iter().all(|c| c.passed);
            let out = Output {
                command: "check",
                input: None,
                body: CheckReport {
                    seed: *seed,
                    checks,
                    all_passed,
                },
            };
            emit(cli.json, &out, || {
                for c in &out.body.checks {
                    println!("{} {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            })?;
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
