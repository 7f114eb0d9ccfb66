//! Exact rank and nullspace of integer matrices.
//!
//! Two independent routes are provided: fraction-free elimination over the
//! integers ([`rank_exact`], [`nullspace_basis`]) and rank modulo three random
//! 62-bit primes ([`rank_modular`]), which falls back to the exact route when
//! the primes disagree.

mod exact;
mod modular;

use std::fmt;
use std::io::{self, BufRead, Write};
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use exact::{nullspace_basis, rank_exact};
pub use modular::{
    draw_primes, is_prime_u64, rank_mod_prime, rank_modular, rank_modular_with_primes, PRIME_RANGE,
};

/// A rectangular integer matrix.
///
/// Entries are kept per row as sorted `(column, value)` pairs with no explicit
/// zeros; [`IntMatrix::get`] gives the dense view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::from(1)));
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .cloned()
                    .map(Into::into)
                    .enumerate()
                    .filter(|(_, x): &(usize, BigInt)| !x.is_zero())
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols);
        let row = &self.data[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(pos) => row[pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Sparse view of row `r`: sorted `(column, nonzero value)` pairs.
    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        assert!(r < self.rows && c < self.cols);
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(pos) if value.is_zero() => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = value,
            Err(_) if value.is_zero() => {}
            Err(pos) => row.insert(pos, (c, value)),
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: &BigInt) {
        if value.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur + value);
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.cols];
                for (c, x) in &self.data[r] {
                    row[*c] = x.clone();
                }
                row
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(mut self, other: IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        self.rows += other.rows;
        self.data.extend(other.data);
        self
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> IntMatrix {
        assert_eq!(perm.len(), self.rows);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: perm.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    /// Column `perm[j]` of the result is column `j` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> IntMatrix {
        assert_eq!(perm.len(), self.cols);
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| {
                    let mut r: Vec<(usize, BigInt)> =
                        row.iter().map(|(c, x)| (perm[*c], x.clone())).collect();
                    r.sort_by_key(|(c, _)| *c);
                    r
                })
                .collect(),
        }
    }

    /// Right-multiplies by `rhs` (`cols × k`, dense rows).
    pub fn matmul_dense(&self, rhs: &[Vec<BigInt>]) -> IntMatrix {
        assert_eq!(rhs.len(), self.cols);
        let k = rhs.first().map_or(0, Vec::len);
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = vec![BigInt::zero(); k];
                for (c, x) in row {
                    for (j, y) in rhs[*c].iter().enumerate() {
                        if !y.is_zero() {
                            acc[j] += x * y;
                        }
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: k,
            data,
        }
    }

    /// `M v` for a rational vector `v`.
    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter().fold(BigRational::zero(), |acc, (c, x)| {
                    acc + BigRational::from_integer(x.clone()) * &v[*c]
                })
            })
            .collect()
    }

    /// Portable text form: a `rows cols` header line, then one line of
    /// space-separated integers per row.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let mut line = String::new();
            let mut next = self.data[r].iter().peekable();
            for c in 0..self.cols {
                if c > 0 {
                    line.push(' ');
                }
                match next.peek() {
                    Some((j, x)) if *j == c => {
                        line.push_str(&x.to_string());
                        next.next();
                    }
                    _ => line.push('0'),
                }
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> io::Result<IntMatrix> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))??;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<io::Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(bad("header must be `rows cols`"));
        };
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines.next().ok_or_else(|| bad("missing row"))??;
            let vals: Vec<BigInt> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad entry")))
                .collect::<io::Result<_>>()?;
            if vals.len() != cols {
                return Err(bad("row length does not match header"));
            }
            m.data[i] = vals
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect();
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Exact,
    Modular,
}

impl fmt::Display for RankMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankMethod::Exact => "exact",
            RankMethod::Modular => "modular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    /// Primes tried by the modular route, empty for exact.
    pub primes_used: Vec<u64>,
    pub elapsed: Duration,
}

/// How to compute a rank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankStrategy {
    Exact,
    Modular,
    /// Modular for rank-only queries.
    #[default]
    Auto,
}

impl std::str::FromStr for RankStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(RankStrategy::Exact),
            "modular" => Ok(RankStrategy::Modular),
            "auto" => Ok(RankStrategy::Auto),
            other => Err(format!("unknown rank strategy `{other}`")),
        }
    }
}

pub fn rank(m: &IntMatrix, strategy: RankStrategy) -> RankResult {
    match strategy {
        RankStrategy::Exact => rank_exact(m),
        RankStrategy::Modular | RankStrategy::Auto => rank_modular(m),
    }
}
