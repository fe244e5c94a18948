use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

/// Weight bookkeeping for lifting `Z_r(a, -a, 1)` acting on the invariants
/// `(x, y, z) = (u^{rm}, v^{rm}, u v)` of `Z_{rm}(1, -1)` to a group of order
/// `r^2 m` acting on `(u, v)` with weights `(a, rm - a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionLiftReport {
    pub r: u64,
    pub m: u64,
    pub a: i64,
    /// `r^2 m`
    pub lifted_order: u64,
    /// `(a, rm - a) mod r^2 m`
    pub lifted_weights: [u64; 2],
    /// Weights the lifted action induces on `(x, y, z)`.
    pub induced_weights: [u64; 3],
    /// `rm * (a, -a, 1) mod r^2 m`, the action of `Z_r(a,-a,1)` through `eps^{rm}`.
    pub expected_weights: [u64; 3],
    pub weights_match: bool,
    /// `x`, `y`, `z` are invariant under `Z_{rm}(1, -1)`.
    pub invariants_ok: bool,
    /// Class of `xy + z^{rm}` under the induced weights, if it is semi-invariant.
    pub relation_class: Option<u64>,
    /// Whether `(a, rm - a)` acts faithfully, i.e. `gcd(a, rm) = 1`.
    pub faithful: bool,
    pub holds: bool,
}

pub fn action_lift_check(r: u64, m: u64, a: i64) -> Result<ActionLiftReport> {
    if r == 0 || m == 0 {
        return Err(Error::InvalidInstance("r and m must be positive".into()));
    }
    if (a.unsigned_abs()).gcd(&r) != 1 {
        return Err(Error::InvalidInstance(format!("gcd({a}, {r}) != 1")));
    }
    let rm = r as i128 * m as i128;
    let order = r as i128 * rm;
    let md = |v: i128| v.rem_euclid(order) as u64;

    let lifted = [a as i128, rm - a as i128];
    let monomials: [[i128; 2]; 3] = [[rm, 0], [0, rm], [1, 1]];
    let induced = monomials.map(|s| md(s[0] * lifted[0] + s[1] * lifted[1]));
    let expected = [md(rm * a as i128), md(-rm * a as i128), md(rm)];

    let invariants_ok = monomials.iter().all(|s| (s[0] - s[1]).rem_euclid(rm) == 0);

    let xy = (induced[0] as i128 + induced[1] as i128).rem_euclid(order);
    let zpow = (rm * induced[2] as i128).rem_euclid(order);
    let relation_class = (xy == zpow).then_some(xy as u64);

    let weights_match = induced == expected;
    Ok(ActionLiftReport {
        r,
        m,
        a,
        lifted_order: order as u64,
        lifted_weights: [md(lifted[0]), md(lifted[1])],
        induced_weights: induced,
        expected_weights: expected,
        weights_match,
        invariants_ok,
        relation_class,
        faithful: (a.unsigned_abs() as u128).gcd(&(rm as u128)) == 1,
        holds: weights_match && invariants_ok && relation_class.is_some(),
    })
}
