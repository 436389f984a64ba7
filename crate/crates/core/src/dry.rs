//! DRY membership on the base.
//!
//! A class `c = phi sigma + omega` of rank `N` is DRY iff for some `b > 0`
//! the shift `phi - N (1/2 + b) c1` is ample and
//! `omega / N > omega0(b) = R + (c1^2 / 4)(b + q / b)`.
//!
//! The feasible `b` form the open interval `(0, b_max)` with `b_max` read off
//! the Mori generators by ray shooting. Because `b_max^2 <= q`, `omega0` is
//! strictly decreasing there, so DRY is equivalent to the strict inequality
//! `omega > N omega0(b_max)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{BaseSurface, DivClass};
use crate::rational::{q, qi, serde_opt_q, serde_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateClass {
    #[serde(with = "crate::picard::serde_integral")]
    pub phi: DivClass,
    pub omega: i64,
    #[serde(rename = "N")]
    pub rank: u32,
}

impl CandidateClass {
    pub fn new(phi: DivClass, omega: i64, rank: u32) -> Self {
        CandidateClass { phi, omega, rank }
    }

    pub fn validate(&self, base: &BaseSurface) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::OutOfRange("rank N must be at least 1".into()));
        }
        if self.phi.rank() != base.picard_rank() {
            return Err(Error::DimensionMismatch { expected: base.picard_rank(), found: self.phi.rank() });
        }
        if !self.phi.is_integral() {
            return Err(Error::NonIntegral(format!("phi = {}", self.phi)));
        }
        Ok(())
    }
}

/// Every quantity entering the DRY decision for one candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DryEvaluation {
    #[serde(rename = "R", with = "serde_q")]
    pub r_value: Q,
    #[serde(rename = "q", with = "serde_q")]
    pub q_value: Q,
    /// Ray-shooting minimum; positive exactly when the shift is ample.
    #[serde(with = "serde_q")]
    pub b_max: Q,
    #[serde(with = "serde_opt_q")]
    pub omega0_at_bmax: Option<Q>,
    #[serde(with = "serde_opt_q")]
    pub threshold: Option<Q>,
    pub phi_shift_ample: bool,
}

/// `phi - (N/2) c1`.
pub fn phi_shift(phi: &DivClass, rank: u32, base: &BaseSurface) -> DivClass {
    phi - &(base.c1() * q(rank as i128, 2))
}

pub fn r_value(phi: &DivClass, rank: u32, base: &BaseSurface) -> Q {
    let n = rank as i128;
    base.dot(phi, base.c1()) / qi(2 * n) + base.c1_squared() / qi(6) + q(1, 2)
}

pub fn q_value(phi: &DivClass, rank: u32, base: &BaseSurface) -> Q {
    let s = phi_shift(phi, rank, base);
    let n = qi(rank as i128);
    base.dot(&s, &s) / (n * n * base.c1_squared())
}

/// `min_C (S.C) / (N c1.C)` without the ampleness gate.
fn ray_min(phi: &DivClass, rank: u32, base: &BaseSurface) -> Q {
    let s = phi_shift(phi, rank, base);
    let (_, den) = s.numerators();
    // c1.C > 0 on every generator, so fractions compare by cross products
    let (sn, cn) = base
        .mori_numerators(&s)
        .zip(base.mori_numerators(base.c1()))
        .reduce(|best, cur| if cur.0 * best.1 < best.0 * cur.1 { cur } else { best })
        .expect("every base has Mori generators");
    Q::new(sn, den * rank as i128 * cn)
}

/// Supremum of the feasible `b`.
pub fn b_max(phi: &DivClass, rank: u32, base: &BaseSurface) -> Result<Q> {
    let b = ray_min(phi, rank, base);
    if b.is_positive() {
        Ok(b)
    } else {
        Err(Error::NotDryFeasible)
    }
}

pub fn omega0(phi: &DivClass, rank: u32, base: &BaseSurface, b: Q) -> Result<Q> {
    if !b.is_positive() {
        return Err(Error::NonPositiveB(b.to_string()));
    }
    let qv = q_value(phi, rank, base);
    Ok(r_value(phi, rank, base) + base.c1_squared() / qi(4) * (b + qv / b))
}

/// `N omega0(b_max)`; the candidate is DRY iff `omega` exceeds it strictly.
pub fn dry_threshold(phi: &DivClass, rank: u32, base: &BaseSurface) -> Result<Q> {
    let b = b_max(phi, rank, base)?;
    Ok(qi(rank as i128) * omega0(phi, rank, base, b)?)
}

pub fn evaluate(c: &CandidateClass, base: &BaseSurface) -> DryEvaluation {
    let b = ray_min(&c.phi, c.rank, base);
    let ample = b.is_positive();
    let omega0_at_bmax = ample.then(|| omega0(&c.phi, c.rank, base, b).expect("b > 0"));
    DryEvaluation {
        r_value: r_value(&c.phi, c.rank, base),
        q_value: q_value(&c.phi, c.rank, base),
        b_max: b,
        threshold: omega0_at_bmax.map(|w| w * qi(c.rank as i128)),
        omega0_at_bmax,
        phi_shift_ample: ample,
    }
}

/// DRY decision with the full evaluation, emitted in both outcomes.
pub fn is_dry(c: &CandidateClass, base: &BaseSurface) -> (bool, DryEvaluation) {
    let ev = evaluate(c, base);
    let dry = match ev.threshold {
        Some(t) => qi(c.omega as i128) > t,
        None => false,
    };
    (dry, ev)
}

/// The necessary bound `omega / N - R > (c1^2 / 2) sqrt(q)`, i.e.
/// `omega / N - R > sqrt(c1^2 (phi - N/2 c1)^2) / (2N)`, compared through
/// squares.
pub fn corollary_lower_bound_holds(c: &CandidateClass, base: &BaseSurface) -> Result<bool> {
    b_max(&c.phi, c.rank, base)?;
    let n = qi(c.rank as i128);
    let lhs = qi(c.omega as i128) / n - r_value(&c.phi, c.rank, base);
    if !lhs.is_positive() {
        return Ok(false);
    }
    let s = phi_shift(&c.phi, c.rank, base);
    let radicand = base.c1_squared() * base.dot(&s, &s) / (qi(4) * n * n);
    debug_assert!(!radicand.is_negative());
    Ok(radicand.is_zero() || lhs * lhs > radicand)
}
