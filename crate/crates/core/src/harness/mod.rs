//! Benchmark harness: matrix files, accuracy measurement and the experiment grid.

mod accuracy;
mod bench;
mod config;
mod io;

pub use accuracy::{measure_accuracy, FdBound, GramAccumulator, ACCURACY_MAX_ITER, ACCURACY_TOL};
pub use bench::{
    median_records, run_bench, write_records, BenchGrid, BenchOutcome, BenchRecord, CellFailure,
    MatrixSummary,
};
pub use config::parse_grid;
pub use io::{
    read_matrix, write_matrix, MatrixFormat, RowReader, RowWriter, FORMAT_VERSION, MAGIC,
};
