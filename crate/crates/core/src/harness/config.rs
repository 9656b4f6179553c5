//! Flat `key = value` grid configuration.
//!
//! ```text
//! # desk-scale run
//! n = 2000
//! m = 200
//! ell = 10, 20, 30
//! d = 5, 10
//! zeta = 1, 10
//! methods = fd-fast, hash, project
//! repetitions = 3
//! seed = 1
//! c = 0.3333333333333333
//! parallel = false
//! ```
//!
//! Keys not given keep their [`BenchGrid::desk`] value. `#` starts a comment.

use std::str::FromStr;

use super::bench::BenchGrid;
use crate::error::{Error, Result};

pub fn parse_grid(text: &str) -> Result<BenchGrid> {
    let mut grid = BenchGrid::desk();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Config(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => grid.n = scalar(value).map_err(err)?,
            "m" => grid.m = scalar(value).map_err(err)?,
            "ell" | "ells" => grid.ells = list(value).map_err(err)?,
            "d" | "ds" => grid.ds = list(value).map_err(err)?,
            "zeta" | "zetas" => grid.zetas = list(value).map_err(err)?,
            "methods" | "method" => {
                grid.methods = list(value).map_err(err)?;
            }
            "repetitions" | "reps" => grid.repetitions = scalar(value).map_err(err)?,
            "seed" | "base_seed" => grid.base_seed = scalar(value).map_err(err)?,
            "c" => grid.c = scalar(value).map_err(err)?,
            "parallel" => grid.parallel = scalar(value).map_err(err)?,
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    Ok(grid)
}

fn scalar<T: FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse '{value}'"))
}

fn list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(scalar)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::Method;

    #[test]
    fn parses_all_keys() {
        let text = "
            # comment
            n = 100
            m = 20   # trailing comment
            ell = 4, 8,12
            d = 2
            zeta = 1, 2.5
            methods = fd, fd-fast, brute
            repetitions = 5
            seed = 42
            c = 0.5
            parallel = true
        ";
        let g = parse_grid(text).unwrap();
        assert_eq!((g.n, g.m), (100, 20));
        assert_eq!(g.ells, vec![4, 8, 12]);
        assert_eq!(g.ds, vec![2]);
        assert_eq!(g.zetas, vec![1.0, 2.5]);
        assert_eq!(
            g.methods,
            vec![Method::Fd, Method::FdFast, Method::BruteForce]
        );
        assert_eq!(g.repetitions, 5);
        assert_eq!(g.base_seed, 42);
        assert_eq!(g.c, 0.5);
        assert!(g.parallel);
    }

    #[test]
    fn empty_text_is_desk_grid() {
        assert_eq!(parse_grid("").unwrap(), BenchGrid::desk());
    }

    #[test]
    fn errors() {
        assert!(parse_grid("n 100").is_err());
        assert!(parse_grid("bogus = 1").is_err());
        assert!(parse_grid("ell = 1, x").is_err());
        assert!(parse_grid("methods = fd, nope").is_err());
        // an empty method list is legal and yields an empty run
        assert!(parse_grid("methods =").unwrap().methods.is_empty());
    }
}
