//! Exact linear algebra over the rationals and lattice indices.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rat, Result};

/// Determinant by Gaussian elimination over the rationals.
pub(crate) fn det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det = det * &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = &a[r][c] / &pivot;
            for k in c..n {
                let delta = &factor * &a[c][k];
                a[r][k] = &a[r][k] - &delta;
            }
        }
    }
    det
}

/// Inverse of a square matrix, or `None` when singular.
pub(crate) fn inverse(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let pivot = a[c][c].clone();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] / &pivot;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let factor = a[r][c].clone();
            for k in 0..2 * n {
                let delta = &factor * &a[c][k];
                a[r][k] = &a[r][k] - &delta;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `x * A` for a row vector `x`.
pub(crate) fn row_times(x: &[Rat], a: &[Vec<Rat>]) -> Vec<Rat> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|k| x.iter().zip(a).map(|(xi, row)| xi * &row[k]).sum())
        .collect()
}

fn common_denominator(vectors: &[Vec<Rat>]) -> BigInt {
    vectors
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

fn scaled(vectors: &[Vec<Rat>], by: &BigInt) -> Vec<Vec<BigInt>> {
    vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|r| r.numer() * (by / r.denom()))
                .collect()
        })
        .collect()
}

/// Row-style Hermite reduction of integer rows spanning a full-rank lattice
/// in `Z^n`. Returns `n` basis rows in upper-triangular form.
fn hermite_basis(mut rows: Vec<Vec<BigInt>>, n: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut pivot_row = 0;
    for c in 0..n {
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][c].is_zero())
                .collect();
            let Some(&best) = nonzero.iter().min_by_key(|&&r| rows[r][c].abs()) else {
                return Err(Error::UnsupportedShape("lattice generators are not full rank".into()));
            };
            if nonzero.len() == 1 {
                rows.swap(best, pivot_row);
                break;
            }
            let pivot = rows[best].clone();
            for &r in &nonzero {
                if r == best {
                    continue;
                }
                let q = rows[r][c].div_floor(&pivot[c]);
                for k in 0..n {
                    rows[r][k] -= &q * &pivot[k];
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(n);
    Ok(rows)
}

fn int_det(rows: &[Vec<BigInt>]) -> BigInt {
    let as_rat: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    det(&as_rat).numer().clone()
}

/// Index of the sublattice spanned by `generators` inside the lattice spanned
/// by `lattice_gens`, both given as rational vectors of length `n`:
/// `|det(generators)| / covolume(lattice)`.
pub fn sublattice_index(generators: &[Vec<Rat>], lattice_gens: &[Vec<Rat>]) -> Result<BigInt> {
    let n = generators.len();
    let mut all = generators.to_vec();
    all.extend_from_slice(lattice_gens);
    let scale = common_denominator(&all);
    let basis = hermite_basis(scaled(lattice_gens, &scale), n)?;
    let covolume = int_det(&basis).abs();
    let gens_det = int_det(&scaled(generators, &scale)).abs();
    if gens_det.is_zero() {
        return Err(Error::UnsupportedShape("generators are linearly dependent".into()));
    }
    let (q, r) = gens_det.div_rem(&covolume);
    if !r.is_zero() {
        return Err(Error::Consistency(format!(
            "generators do not lie in the lattice (det {gens_det}, covolume {covolume})"
        )));
    }
    Ok(q)
}
