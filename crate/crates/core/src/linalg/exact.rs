use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, RankMethod, RankResult};

type SparseRow = Vec<(usize, BigInt)>;

/// `a·r − b·p`, merging two sorted sparse rows.
fn combine(a: &BigInt, r: &[(usize, BigInt)], b: &BigInt, p: &[(usize, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(r.len().max(p.len()));
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ord = match (r.get(i), p.get(j)) {
            (Some((ci, _)), Some((cj, _))) => ci.cmp(cj),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        let (col, val) = match ord {
            Ordering::Less => {
                i += 1;
                (r[i - 1].0, a * &r[i - 1].1)
            }
            Ordering::Greater => {
                j += 1;
                (p[j - 1].0, -(b * &p[j - 1].1))
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                (r[i - 1].0, a * &r[i - 1].1 - b * &p[j - 1].1)
            }
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

/// Divides out the content and makes the leading entry positive.
fn make_primitive(row: &mut SparseRow) {
    let Some((_, lead)) = row.first() else {
        return;
    };
    let negative = lead.is_negative();
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if negative {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Row echelon form by fraction-free elimination.
///
/// Rows are inserted one at a time and reduced against the pivot rows found
/// so far. When an incoming row and the current pivot share a leading column,
/// the one with the smaller leading magnitude becomes the pivot. Every row is
/// kept primitive, which bounds coefficient growth.
///
/// Returns the pivot rows indexed by their leading column.
fn echelon(m: &IntMatrix) -> Vec<Option<SparseRow>> {
    let mut pivots: Vec<Option<SparseRow>> = vec![None; m.cols()];
    for r in 0..m.rows() {
        let mut row: SparseRow = m.row(r).to_vec();
        make_primitive(&mut row);
        while let Some((lead_col, _)) = row.first() {
            let lead_col = *lead_col;
            let Some(pivot) = pivots[lead_col].as_mut() else {
                pivots[lead_col] = Some(row);
                break;
            };
            if row[0].1.magnitude() < pivot[0].1.magnitude() {
                std::mem::swap(&mut row, pivot);
            }
            let g = pivot[0].1.gcd(&row[0].1);
            let a = &pivot[0].1 / &g;
            let b = &row[0].1 / &g;
            row = combine(&a, &row, &b, pivot);
            make_primitive(&mut row);
        }
    }
    pivots
}

/// Rank over the rationals, computed exactly.
pub fn rank_exact(m: &IntMatrix) -> RankResult {
    let start = Instant::now();
    let rank = echelon(m).iter().filter(|p| p.is_some()).count();
    RankResult {
        rank,
        method: RankMethod::Exact,
        primes_used: Vec::new(),
        elapsed: start.elapsed(),
    }
}

/// A basis of `{v : M v = 0}` over the rationals, one vector per non-pivot
/// column (that column set to 1, the other free columns to 0).
pub fn nullspace_basis(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    let pivots = echelon(m);
    let free: Vec<usize> = (0..m.cols()).filter(|&c| pivots[c].is_none()).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); m.cols()];
            x[f] = BigRational::one();
            for j in (0..m.cols()).rev() {
                let Some(p) = &pivots[j] else { continue };
                let tail = p[1..].iter().fold(BigRational::zero(), |acc, (k, v)| {
                    if x[*k].is_zero() {
                        acc
                    } else {
                        acc + BigRational::from_integer(v.clone()) * &x[*k]
                    }
                });
                x[j] = -tail / BigRational::from_integer(p[0].1.clone());
            }
            x
        })
        .collect()
}
