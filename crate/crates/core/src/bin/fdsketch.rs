use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fdsketch::datagen::{GenSpec, Generator};
use fdsketch::harness::{
    measure_accuracy, median_records, parse_grid, read_matrix, run_bench, write_matrix,
    write_records, GramAccumulator, MatrixFormat, RowReader, RowWriter,
};
use fdsketch::Method;

#[derive(Parser)]
#[command(
    name = "fdsketch",
    version,
    about = "Streaming matrix sketching and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic matrix A = S D U + N / zeta.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        zeta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; `.csv` writes CSV, anything else the binary format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Stream a matrix through a sketcher and write the ell x m sketch.
    Sketch {
        /// One of fd, fd-fast, naive, brute, sample, hash, project.
        #[arg(long)]
        method: Method,
        #[arg(long)]
        ell: usize,
        /// Fast-mode parameter for fd-fast.
        #[arg(long, default_value_t = 1.0 / 3.0)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print ||AᵀA - BᵀB|| for a matrix and a sketch of it.
    Accuracy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sketch: PathBuf,
    },
    /// Run an experiment grid and write per-run and median results.
    Bench {
        /// key = value config file.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Median-aggregated results; defaults to `<out stem>.median.csv`.
        #[arg(long)]
        median_out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            n,
            m,
            d,
            zeta,
            seed,
            out,
        } => gen(
            GenSpec {
                n,
                m,
                d,
                zeta,
                seed,
            },
            &out,
        ),
        Command::Sketch {
            method,
            ell,
            c,
            seed,
            input,
            out,
        } => sketch(method, ell, c, seed, &input, &out),
        Command::Accuracy { input, sketch } => accuracy(&input, &sketch),
        Command::Bench {
            grid,
            out,
            median_out,
        } => bench(&grid, &out, median_out),
    }
}

fn gen(spec: GenSpec, out: &Path) -> Result<()> {
    let generator = Generator::new(spec)?;
    let mut writer = RowWriter::create(out, MatrixFormat::from_path(out), spec.n as u64, spec.m)
        .with_context(|| format!("creating {}", out.display()))?;
    for row in generator.rows() {
        writer.write_row(&row)?;
    }
    writer.finish()?;
    Ok(())
}

fn sketch(method: Method, ell: usize, c: f64, seed: u64, input: &Path, out: &Path) -> Result<()> {
    let reader = RowReader::open(input).with_context(|| format!("opening {}", input.display()))?;
    let mut sketcher = method.build(ell, reader.cols(), c, seed)?;
    let mut rows = 0u64;
    for row in reader {
        sketcher
            .append(&row?)
            .with_context(|| format!("row {rows}"))?;
        rows += 1;
    }
    let b = sketcher.finalize()?;
    write_matrix(out, &b, MatrixFormat::from_path(out))?;
    eprintln!(
        "{method}: sketched {rows} rows into {}x{}",
        b.rows(),
        b.cols()
    );
    Ok(())
}

fn accuracy(input: &Path, sketch: &Path) -> Result<()> {
    let reader = RowReader::open(input).with_context(|| format!("opening {}", input.display()))?;
    let mut acc = GramAccumulator::new(reader.cols());
    for row in reader {
        acc.push(&row?)?;
    }
    let frob_sq = acc.frob_sq();
    let a_gram = acc.finish();
    let b = read_matrix(sketch).with_context(|| format!("reading {}", sketch.display()))?;
    if b.cols() != a_gram.cols() {
        bail!(
            "sketch has {} columns, matrix has {}",
            b.cols(),
            a_gram.cols()
        );
    }
    let err = measure_accuracy(&a_gram, &b)?;
    println!("{err:e}");
    eprintln!(
        "||A||_F^2 = {frob_sq:e}, relative = {:e}, ell = {}",
        err / frob_sq.max(f64::MIN_POSITIVE),
        b.rows()
    );
    Ok(())
}

fn bench(grid_path: &Path, out: &Path, median_out: Option<PathBuf>) -> Result<()> {
    let text = std::fs::read_to_string(grid_path)
        .with_context(|| format!("reading {}", grid_path.display()))?;
    let grid = parse_grid(&text)?;
    let outcome = run_bench(&grid);
    for f in &outcome.failures {
        eprintln!(
            "cell d={} zeta={} rep={} ell={:?} method={:?}: {}",
            f.d, f.zeta, f.repetition, f.ell, f.method, f.error
        );
    }
    write_records(out, &outcome.records)?;
    let median_path = median_out.unwrap_or_else(|| out.with_extension("median.csv"));
    write_records(
        &median_path,
        &median_records(&outcome.records, grid.base_seed),
    )?;
    eprintln!(
        "{} records, {} failures -> {} and {}",
        outcome.records.len(),
        outcome.failures.len(),
        out.display(),
        median_path.display()
    );
    Ok(())
}
