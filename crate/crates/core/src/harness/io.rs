//! Matrix files.
//!
//! Binary layout, all little-endian: the magic bytes `FDMX`, a `u32` version
//! (1), `n: u64`, `m: u64`, then `n * m` IEEE-754 binary64 values in row-major
//! order. The CSV layout is one matrix row per line, comma separated, no
//! header. Readers sniff the magic, so either format can be passed anywhere a
//! matrix is read. Rows are streamed; nothing larger than one row is buffered.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const MAGIC: &[u8; 4] = b"FDMX";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Binary,
    Csv,
}

impl MatrixFormat {
    /// `.csv` (any case) selects CSV, everything else binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFormat::Csv,
            _ => MatrixFormat::Binary,
        }
    }
}

enum Source<R: Read> {
    Binary {
        reader: BufReader<R>,
        remaining: u64,
    },
    Csv {
        records: csv::StringRecordsIntoIter<BufReader<R>>,
        first: Option<Vec<f64>>,
        line: u64,
    },
}

/// Streaming row reader over either matrix format.
pub struct RowReader<R: Read = File> {
    source: Source<R>,
    cols: usize,
    rows_hint: Option<u64>,
}

impl RowReader<File> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(File::open(path)?)
    }
}

impl<R: Read> RowReader<R> {
    pub fn new(inner: R) -> Result<Self> {
        let mut reader = BufReader::new(inner);
        let head = reader.fill_buf()?;
        if head.is_empty() {
            return Err(Error::Format("empty matrix file".into()));
        }
        if head.len() >= MAGIC.len() && &head[..MAGIC.len()] == MAGIC {
            let mut header = [0u8; HEADER_LEN];
            reader
                .read_exact(&mut header)
                .map_err(|_| Error::Format("truncated binary header".into()))?;
            let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
            if version != FORMAT_VERSION {
                return Err(Error::Format(format!(
                    "unsupported format version {version}"
                )));
            }
            let n = u64::from_le_bytes(header[8..16].try_into().unwrap());
            let m = u64::from_le_bytes(header[16..24].try_into().unwrap());
            if m == 0 {
                return Err(Error::Format("binary matrix with zero columns".into()));
            }
            let cols =
                usize::try_from(m).map_err(|_| Error::Format("column count overflow".into()))?;
            return Ok(Self {
                source: Source::Binary {
                    reader,
                    remaining: n,
                },
                cols,
                rows_hint: Some(n),
            });
        }

        let mut records = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader)
            .into_records();
        let first = match records.next() {
            Some(rec) => parse_record(&rec?, 1)?,
            None => return Err(Error::Format("empty matrix file".into())),
        };
        if first.is_empty() {
            return Err(Error::Format("CSV row with no values".into()));
        }
        Ok(Self {
            cols: first.len(),
            source: Source::Csv {
                records,
                first: Some(first),
                line: 1,
            },
            rows_hint: None,
        })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row count from the binary header; `None` for CSV.
    pub fn rows_hint(&self) -> Option<u64> {
        self.rows_hint
    }

    fn next_row(&mut self) -> Option<Result<Vec<f64>>> {
        let cols = self.cols;
        match &mut self.source {
            Source::Binary { reader, remaining } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let mut bytes = vec![0u8; cols * 8];
                if reader.read_exact(&mut bytes).is_err() {
                    *remaining = 0;
                    return Some(Err(Error::Format("binary matrix data truncated".into())));
                }
                let row: Vec<f64> = bytes
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect();
                Some(check_finite(row))
            }
            Source::Csv {
                records,
                first,
                line,
            } => {
                if let Some(row) = first.take() {
                    return Some(Ok(row));
                }
                let rec = records.next()?;
                *line += 1;
                let row = rec
                    .map_err(Error::from)
                    .and_then(|r| parse_record(&r, *line));
                Some(row.and_then(|row| {
                    if row.len() == cols {
                        Ok(row)
                    } else {
                        Err(Error::DimensionMismatch {
                            expected: cols,
                            actual: row.len(),
                        })
                    }
                }))
            }
        }
    }
}

impl<R: Read> Iterator for RowReader<R> {
    type Item = Result<Vec<f64>>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_row()
    }
}

fn parse_record(rec: &csv::StringRecord, line: u64) -> Result<Vec<f64>> {
    let row = rec
        .iter()
        .map(|field| {
            field
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("line {line}: cannot parse '{field}'")))
        })
        .collect::<Result<Vec<f64>>>()?;
    check_finite(row)
}

fn check_finite(row: Vec<f64>) -> Result<Vec<f64>> {
    match row.iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::NonFinite(pos)),
        None => Ok(row),
    }
}

enum Sink<W: Write> {
    Binary(BufWriter<W>),
    Csv(Box<csv::Writer<W>>),
}

/// Streaming writer; the binary header needs the row count up front.
pub struct RowWriter<W: Write = File> {
    sink: Sink<W>,
    rows: u64,
    cols: usize,
    written: u64,
}

impl RowWriter<File> {
    pub fn create(
        path: impl AsRef<Path>,
        format: MatrixFormat,
        rows: u64,
        cols: usize,
    ) -> Result<Self> {
        Self::new(File::create(path)?, format, rows, cols)
    }
}

impl<W: Write> RowWriter<W> {
    pub fn new(inner: W, format: MatrixFormat, rows: u64, cols: usize) -> Result<Self> {
        let sink = match format {
            MatrixFormat::Binary => {
                let mut w = BufWriter::new(inner);
                w.write_all(MAGIC)?;
                w.write_all(&FORMAT_VERSION.to_le_bytes())?;
                w.write_all(&rows.to_le_bytes())?;
                w.write_all(&(cols as u64).to_le_bytes())?;
                Sink::Binary(w)
            }
            MatrixFormat::Csv => Sink::Csv(Box::new(
                csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(inner),
            )),
        };
        Ok(Self {
            sink,
            rows,
            cols,
            written: 0,
        })
    }

    pub fn write_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        if self.written == self.rows {
            return Err(Error::Format(format!(
                "more than the declared {} rows",
                self.rows
            )));
        }
        match &mut self.sink {
            Sink::Binary(w) => {
                for v in row {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            // Debug formatting is the shortest string that parses back to the same bits
            Sink::Csv(w) => w.write_record(row.iter().map(|v| format!("{v:?}")))?,
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        if self.written != self.rows {
            return Err(Error::Format(format!(
                "declared {} rows but wrote {}",
                self.rows, self.written
            )));
        }
        match self.sink {
            Sink::Binary(mut w) => w.flush()?,
            Sink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

pub fn write_matrix(path: impl AsRef<Path>, a: &Matrix, format: MatrixFormat) -> Result<()> {
    let mut w = RowWriter::create(path, format, a.rows() as u64, a.cols())?;
    for row in a.iter_rows() {
        w.write_row(row)?;
    }
    w.finish()
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let reader = RowReader::open(path)?;
    let cols = reader.cols();
    let mut data = Vec::new();
    let mut rows = 0;
    for row in reader {
        data.extend(row?);
        rows += 1;
    }
    Matrix::from_vec(rows, cols, data)
}
