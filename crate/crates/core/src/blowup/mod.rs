//! The weighted blow-up as toric data.

mod chart;
mod lattice;
mod pushforward;

use serde::Serialize;

pub use chart::{chart, strict_transform_in_chart, valuation_ord_e, Chart, ChartPolynomial, StrictTransform};
pub use lattice::sublattice_index;
pub use pushforward::{
    exceptional_info, pushforward_decomposition, pushforward_monomial_check, ExceptionalInfo,
    PushforwardCheck, PushforwardDecomposition, PushforwardLevel,
};

use lattice::{det, inverse, row_times};
use crate::{Error, Rat, Result, WeightSystem};

/// Star subdivision of the positive orthant at `e = sigma / m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub n: usize,
    pub m: u64,
    /// `e_1, ..., e_n` followed by `e`.
    pub rays: Vec<Vec<Rat>>,
    /// Cone `i` lists ray indices; it omits `e_{i+1}` and ends with `e`.
    pub cones: Vec<Vec<usize>>,
}

pub fn build_fan(w: &WeightSystem) -> Fan {
    let n = w.n();
    let mut rays: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| Rat::from(u32::from(i == j))).collect())
        .collect();
    rays.push(w.sigma().iter().map(|&a| Rat::ratio(a, w.m())).collect());
    let cones = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).chain([n]).collect())
        .collect();
    Fan {
        n,
        m: w.m(),
        rays,
        cones,
    }
}

impl Fan {
    pub fn e(&self) -> &[Rat] {
        &self.rays[self.n]
    }

    fn cone_matrix(&self, i: usize) -> Vec<Vec<Rat>> {
        self.cones[i].iter().map(|&r| self.rays[r].clone()).collect()
    }

    /// Generators of `N = Z^n + Z e`.
    pub fn lattice_generators(&self) -> Vec<Vec<Rat>> {
        self.rays.clone()
    }

    fn well_formed(&self) -> bool {
        self.n > 0
            && self.rays.len() == self.n + 1
            && self.rays.iter().all(|r| r.len() == self.n)
            && self.cones.len() == self.n
            && self
                .cones
                .iter()
                .all(|c| c.len() == self.n && c.iter().all(|&r| r <= self.n))
    }
}

/// Sample points for [`fan_is_subdivision`]: the grid `{0,..,3}^n` minus the
/// origin, `e`, and `e + e_j` for each `j`.
pub fn subdivision_samples(fan: &Fan) -> Vec<Vec<Rat>> {
    let n = fan.n;
    let mut out = Vec::new();
    let mut p = vec![0u32; n];
    loop {
        let mut k = 0;
        while k < n && p[k] == 3 {
            p[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        p[k] += 1;
        out.push(p.iter().map(|&x| Rat::from(x)).collect());
    }
    if fan.rays.len() > n {
        let e = fan.rays[n].clone();
        for j in 0..n {
            let mut q = e.clone();
            q[j] = &q[j] + &Rat::one();
            out.push(q);
        }
        out.push(e);
    }
    out
}

/// Checks full-dimensionality, covering and disjoint interiors on the
/// deterministic sample of [`subdivision_samples`].
pub fn fan_is_subdivision(fan: &Fan) -> bool {
    if !fan.well_formed() {
        return false;
    }
    let mut inverses = Vec::with_capacity(fan.n);
    for i in 0..fan.n {
        let a = fan.cone_matrix(i);
        if det(&a).is_zero() {
            return false;
        }
        inverses.push(inverse(&a).expect("nonzero determinant"));
    }
    // every cone generator must itself lie in the orthant
    if fan
        .cones
        .iter()
        .flatten()
        .any(|&r| fan.rays[r].iter().any(Rat::is_negative))
    {
        return false;
    }
    for p in subdivision_samples(fan) {
        let mut containing = 0;
        let mut interior = 0;
        for inv in &inverses {
            let coords = row_times(&p, inv);
            if coords.iter().all(|c| !c.is_negative()) {
                containing += 1;
                if coords.iter().all(Rat::is_positive) {
                    interior += 1;
                }
            }
        }
        if containing == 0 || interior > 1 {
            return false;
        }
    }
    true
}

/// Index of the cone `C_i` (1-based) in the lattice `N`.
pub fn cone_index(fan: &Fan, i: usize) -> Result<u64> {
    use num_traits::ToPrimitive;
    if i == 0 || i > fan.n {
        return Err(Error::IndexOutOfRange { index: i, n: fan.n });
    }
    let idx = sublattice_index(&fan.cone_matrix(i - 1), &fan.lattice_generators())?;
    idx.to_u64()
        .ok_or_else(|| Error::Overflow(format!("cone index {idx}")))
}
