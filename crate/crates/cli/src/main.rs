//! `qsym`: build, verify and certify representations of quantum automorphism
//! game algebras.
//!
//! JSON artifacts go to `--out` or stdout; human-readable reports go to stderr
//! and use 1-based indices. Exit codes: 0 pass, 1 verification failure,
//! 2 I/O or parse error, 3 out-of-scope input.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qsym_core::correlation::{check_cptp, check_perfect, check_qns, compute_gamma};
use qsym_core::graph::{DecompositionTree, Graph};
use qsym_core::hadamard::{latin_square_biunitary, paper_instance, random_phased_fourier};
use qsym_core::linalg::{random_unitary, ComplexMatrix, Tolerance, ONE};
use qsym_core::nonlocal::certify_nonlocal;
use qsym_core::representation::{
    build_diagonal, build_free_group_rep, build_k1k2, build_k2_onedim, build_k3_matrix_units,
    build_mercedes_p3, verify_representation, OneDimKind, Representation,
};
use qsym_core::{Error, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BANNER: &str = "(paper indexing: vertices and indices below are 1-based)";

#[derive(Parser)]
#[command(name = "qsym", version, about = "Quantum automorphism game toolkit")]
struct Cli {
    /// Equality tolerance for residuals.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,
    /// Tolerance for negative Choi eigenvalues.
    #[arg(long = "eps-psd", global = true, default_value_t = 1e-8)]
    eps_psd: f64,
    /// Seed for randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit only nonzero correlation coordinates.
    #[arg(long = "nonzero-only", global = true)]
    nonzero_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regular decomposition of a graph by iterated degree refinement.
    Decompose { graph: PathBuf },
    /// Build a representation.
    Build {
        #[command(subcommand)]
        construction: Construction,
    },
    /// Check a representation against the game relations of a graph pair.
    Verify {
        representation: PathBuf,
        /// Input graph; defaults to the one stored in the representation.
        graph: Option<PathBuf>,
        /// Output graph; defaults to the input graph.
        graph2: Option<PathBuf>,
    },
    /// Correlation tensor of a representation with channel checks.
    Correlation { representation: PathBuf },
    /// Nonlocal-symmetry certificate for a graph on at least 3 vertices.
    Certify { graph: PathBuf },
}

#[derive(Subcommand)]
enum Construction {
    /// Matrix units on K3.
    K3MatrixUnits,
    /// Two-dimensional representation on the 3-vertex path.
    MercedesP3,
    /// Two-dimensional representation on K1 + K2.
    K1k2,
    /// One-dimensional representation of the K2 algebra.
    K2Onedim {
        /// Unit-modulus parameter as `re` or `re,im`.
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Block-diagonal representation on any graph.
    Diagonal {
        #[arg(long)]
        graph: PathBuf,
        /// Dimension of the random unitaries drawn with `--seed`.
        #[arg(long = "random-unitaries")]
        random_unitaries: usize,
    },
    /// Free-group representation on K_n; defaults to diag(1,-1) and the flip on K3.
    FreeGroup {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Draw the n-1 unitaries at random with this dimension.
        #[arg(long = "random-unitaries")]
        random_unitaries: Option<usize>,
    },
    /// Flat-unitary construction; the fixed K3 instance unless `--n` is given.
    HadamardLatin {
        /// Use four random phased Fourier matrices of this size.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Diagonal,
    Antidiagonal,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're' or 're,im', got '{s}'")),
    }
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Fail,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::TooSmall { .. } => 3,
        // a representation that fails verification cannot feed the correlation
        Error::PreconditionFailed(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> qsym_core::Result<Status> {
    let tol = Tolerance::new(cli.eps, cli.eps_psd)?;
    match &cli.command {
        Command::Decompose { graph } => {
            let g = input::read_graph(graph)?;
            let tree = g.regular_decomposition();
            eprintln!("{BANNER}");
            eprint!("{}", render_tree(&tree, 0));
            let sizes: Vec<usize> = tree.leaves().iter().map(|l| l.vertices.len()).collect();
            eprintln!("block sizes: {sizes:?}");
            emit(cli, &serde_json::to_value(&tree)?)?;
            Ok(Status::Pass)
        }
        Command::Build { construction } => {
            let rep = build(construction, cli, &tol)?;
            let report = verify_representation(&rep, &tol)?;
            eprintln!("{BANNER}");
            eprint!("{}", report.render());
            emit(cli, &serde_json::to_value(&rep)?)?;
            Ok(status(report.passed()))
        }
        Command::Verify { representation, graph, graph2 } => {
            let rep = input::read_representation(representation)?;
            let rep = match graph {
                Some(path) => {
                    let g1 = input::read_graph(path)?;
                    let g2 = match graph2 {
                        Some(p) => input::read_graph(p)?,
                        None => g1.clone(),
                    };
                    rep.with_graphs(g1, g2)?
                }
                None => rep,
            };
            let report = verify_representation(&rep, &tol)?;
            eprintln!("{BANNER}");
            eprint!("{}", report.render());
            emit(cli, &serde_json::to_value(&report)?)?;
            Ok(status(report.passed()))
        }
        Command::Correlation { representation } => {
            let rep = input::read_representation(representation)?;
            let gamma = compute_gamma(&rep, &tol)?;
            let reports: [Report; 3] = [
                check_cptp(&gamma, &tol)?,
                check_qns(&gamma, &tol)?,
                check_perfect(&gamma, &rep.g1, &rep.g2, &tol)?,
            ];
            eprintln!("{BANNER}");
            for r in &reports {
                eprint!("{}", r.render());
            }
            emit(cli, &gamma.to_json(cli.nonzero_only, 0.0))?;
            Ok(status(reports.iter().all(Report::passed)))
        }
        Command::Certify { graph } => {
            let g = input::read_graph(graph)?;
            let cert = certify_nonlocal(&g, &tol)?;
            eprint!("{}", cert.render());
            emit(cli, &cert.to_json())?;
            Ok(status(cert.passed()))
        }
    }
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn build(construction: &Construction, cli: &Cli, tol: &Tolerance) -> qsym_core::Result<Representation> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match construction {
        Construction::K3MatrixUnits => Ok(build_k3_matrix_units()),
        Construction::MercedesP3 => Ok(build_mercedes_p3()),
        Construction::K1k2 => Ok(build_k1k2()),
        Construction::K2Onedim { z, kind } => {
            let kind = match kind {
                Kind::Diagonal => OneDimKind::Diagonal,
                Kind::Antidiagonal => OneDimKind::Antidiagonal,
            };
            build_k2_onedim(*z, kind, tol)
        }
        Construction::Diagonal { graph, random_unitaries } => {
            let g = input::read_graph(graph)?;
            if *random_unitaries == 0 {
                return Err(Error::DimensionMismatch("unitaries need dimension at least 1".into()));
            }
            let v: Vec<ComplexMatrix> =
                (0..g.vertex_count()).map(|_| random_unitary(&mut rng, *random_unitaries)).collect();
            let mut rep = build_diagonal(&g, &v, tol)?;
            rep.label = format!("diagonal, random unitaries d = {random_unitaries}, seed {}", cli.seed);
            Ok(rep)
        }
        Construction::FreeGroup { n, random_unitaries } => {
            if *n < 2 {
                return Err(Error::DimensionMismatch("the free-group construction needs n >= 2".into()));
            }
            let w: Vec<ComplexMatrix> = match random_unitaries {
                Some(d) => (0..n - 1).map(|_| random_unitary(&mut rng, *d)).collect(),
                None if *n == 3 => vec![
                    ComplexMatrix::diag(&[ONE, -ONE]),
                    ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
                ],
                None => {
                    return Err(Error::DimensionMismatch(
                        "default generators exist only for n = 3; pass --random-unitaries".into(),
                    ))
                }
            };
            build_free_group_rep(*n, &w, tol)
        }
        Construction::HadamardLatin { n } => {
            let (u, label) = match n {
                None => (paper_instance().0, "flat-unitary K3".to_string()),
                Some(n) => {
                    let f: Vec<_> = (0..4).map(|_| random_phased_fourier(&mut rng, *n)).collect();
                    let u = latin_square_biunitary(&f[0], &f[1], &f[2], &f[3])?;
                    (u, format!("flat-unitary K{n}, seed {}", cli.seed))
                }
            };
            let g = Graph::complete(u.n());
            Representation::new(g.clone(), g, u, label)
        }
    }
}

fn render_tree(node: &DecompositionTree, depth: usize) -> String {
    let indent = "  ".repeat(depth);
    let vertices: Vec<usize> = node.vertices.iter().map(|v| v + 1).collect();
    let class = node.class_degree.map_or(String::from("root"), |k| format!("degree {k} in parent"));
    let shape = match node.regular_degree {
        Some(k) => format!("leaf, {k}-regular, n = {}", vertices.len()),
        None => "irregular, refined".to_string(),
    };
    let mut out = format!("{indent}{vertices:?} ({class}; {shape})\n");
    for child in &node.children {
        out += &render_tree(child, depth + 1);
    }
    out
}

fn emit(cli: &Cli, value: &serde_json::Value) -> qsym_core::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
