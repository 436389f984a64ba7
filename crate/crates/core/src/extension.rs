//! Conditions and Chern bookkeeping for the extension bundle
//!
//! ```text
//! 0 -> pi*E (x) O(-nD) -> V -> W (x) O(rD) -> 0      (standard twist)
//! 0 -> pi*E (x) O(-D)  -> V -> W (x) O(D)  -> 0      (balanced twist, n = r)
//! ```
//!
//! with `D = pi* alpha`, `E` stable of rank `r` on the base with
//! `c1(E) = 0`, and `W` a rank-`n` spectral cover bundle.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{parity_admissible, BaseSurface, DivClass};
use crate::rational::{as_integer, q, qi, Q};
use crate::spectral::{c2_w, cubic_coeff, SpectralData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    Standard,
    Balanced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionConfig {
    pub n: u32,
    pub r: u32,
    pub two_lambda: i64,
    pub alpha: DivClass,
    pub twist: Twist,
}

impl ExtensionConfig {
    /// Total rank `m = n + r`.
    pub fn m(&self) -> u32 {
        self.n + self.r
    }

    pub fn lambda(&self) -> Q {
        q(self.two_lambda as i128, 2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.r == 0 {
            return Err(Error::InvalidConfig("ranks n and r must be positive".into()));
        }
        match self.twist {
            Twist::Standard if self.r < self.n => {
                return Err(Error::InvalidConfig(format!("standard twist needs r >= n, got n = {}, r = {}", self.n, self.r)));
            }
            Twist::Balanced if self.r != self.n => {
                return Err(Error::InvalidConfig(format!("balanced twist needs r = n, got n = {}, r = {}", self.n, self.r)));
            }
            _ => {}
        }
        if self.alpha.is_zero() {
            return Err(Error::InvalidConfig("alpha must be nonzero".into()));
        }
        Ok(())
    }

    pub fn spectral(&self, eta: DivClass) -> SpectralData {
        SpectralData::new(self.n, eta, self.two_lambda)
    }

    /// Coefficient of `alpha^2` subtracted in the fiber part of `c2(V)`.
    fn alpha_square_coeff(&self) -> Q {
        match self.twist {
            Twist::Standard => {
                let (n, r) = (self.n as i128, self.r as i128);
                q(r * n * (r + n), 2)
            }
            Twist::Balanced => qi(1),
        }
    }
}

/// Data of the polarization `H = eps H0 + pi* H_B` with `H0 = x sigma + pi* rho`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationData {
    #[serde(rename = "H_B")]
    pub h_b: DivClass,
    pub x: i64,
    pub rho: DivClass,
    pub h: DivClass,
    pub t: i64,
}

/// Relative twist between the two pieces of the extension.
pub fn twist_gap(cfg: &ExtensionConfig) -> i64 {
    match cfg.twist {
        Twist::Standard => cfg.m() as i64,
        Twist::Balanced => 2,
    }
}

fn check_parity(cfg: &ExtensionConfig, eta: &DivClass, base: &BaseSurface) -> Result<()> {
    if parity_admissible(base, cfg.n, eta, cfg.two_lambda) {
        Ok(())
    } else {
        Err(Error::InadmissibleParity)
    }
}

/// `(lambda eta - tau alpha).(eta - n c1)`.
fn nonsplit_form(cfg: &ExtensionConfig, eta: &DivClass, base: &BaseSurface) -> Q {
    let tau = twist_gap(cfg) as i128;
    let left = &(eta * cfg.lambda()) - &(&cfg.alpha * tau);
    let right = eta - &(base.c1() * (cfg.n as i128));
    base.dot(&left, &right)
}

/// Euler characteristic `I_X = r (-lambda eta + tau alpha).(eta - n c1)`.
pub fn index_ix(cfg: &ExtensionConfig, eta: &DivClass, base: &BaseSurface) -> Result<Q> {
    check_parity(cfg, eta, base)?;
    Ok(-qi(cfg.r as i128) * nonsplit_form(cfg, eta, base))
}

/// A nonsplit extension exists when `(lambda eta - tau alpha).(eta - n c1) > 0`.
pub fn nonsplit_ok(cfg: &ExtensionConfig, eta: &DivClass, base: &BaseSurface) -> Result<bool> {
    check_parity(cfg, eta, base)?;
    Ok(nonsplit_form(cfg, eta, base).is_positive())
}

pub fn check_polarization(p: &PolarizationData, alpha: &DivClass, base: &BaseSurface) -> bool {
    let rank = base.picard_rank();
    if [&p.h_b, &p.rho, alpha].iter().any(|d| d.rank() != rank) {
        return false;
    }
    let c1 = base.c1();
    p.x > 0
        && base.is_ample(&(&p.rho - &(c1 * (p.x as i128))))
        && base.dot(&(&(&p.rho * 2) - &(c1 * (p.x as i128))), alpha).is_positive()
        && base.dot(alpha, &p.h_b).is_zero()
        && base.is_ample(&p.h_b)
}

/// Smallest positive integer `T` with `start + T dir` ample, given
/// `dir` ample. Solved per Mori generator.
fn min_ample_multiple(start: &DivClass, dir: &DivClass, base: &BaseSurface) -> i64 {
    let (_, ds) = start.numerators();
    let (_, dd) = dir.numerators();
    let t = base
        .mori_numerators(start)
        .zip(base.mori_numerators(dir))
        .map(|(s, d)| Integer::div_floor(&(-s * dd), &(ds * d)) + 1)
        .max()
        .unwrap_or(1);
    t.max(1) as i64
}

/// Deterministic polarization: `h = -alpha + T H_B` with `T` minimal,
/// then `t` minimal with `t h - c1` ample, `x = 2`, `rho = t h + c1`.
pub fn build_polarization(alpha: &DivClass, h_b: &DivClass, base: &BaseSurface) -> Result<PolarizationData> {
    let rank = base.picard_rank();
    for d in [alpha, h_b] {
        if d.rank() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: d.rank() });
        }
    }
    if alpha.is_zero() {
        return Err(Error::Polarization("alpha is zero".into()));
    }
    let a2 = base.dot(alpha, alpha);
    if !a2.is_negative() {
        return Err(Error::Polarization(format!("alpha^2 = {a2} is not negative")));
    }
    if !base.dot(alpha, h_b).is_zero() {
        return Err(Error::Polarization("alpha . H_B != 0".into()));
    }
    if !base.is_ample(h_b) {
        return Err(Error::Polarization("H_B is not ample".into()));
    }
    let big_t = min_ample_multiple(&-alpha, h_b, base);
    let h = &-alpha + &(h_b * (big_t as i128));
    // t h - c1 ample  <=>  h - c1/t ample; scan from the per-generator bound
    let (_, dh) = h.numerators();
    let t = base
        .mori_numerators(&h)
        .zip(base.mori_numerators(base.c1()))
        .map(|(hc, cc)| Integer::div_floor(&(cc * dh), &hc) + 1)
        .max()
        .unwrap_or(1)
        .max(1) as i64;
    let rho = &(&h * (t as i128)) + base.c1();
    let p = PolarizationData { h_b: h_b.clone(), x: 2, rho, h, t };
    debug_assert!(check_polarization(&p, alpha, base));
    Ok(p)
}

/// `c2(E)` needed for the fiber part of `c2(V)` to equal `omega`.
pub fn required_c2e(cfg: &ExtensionConfig, s: &SpectralData, omega: i64, base: &BaseSurface) -> Result<Q> {
    let (_, w_fiber) = c2_w_for(cfg, s, base)?;
    let a2 = base.dot(&cfg.alpha, &cfg.alpha);
    Ok(qi(omega as i128) - w_fiber + cfg.alpha_square_coeff() * a2)
}

/// `c2(V) = eta sigma + fiber`; returns `(eta, fiber)`.
pub fn c2_v(cfg: &ExtensionConfig, s: &SpectralData, c2e: i64, base: &BaseSurface) -> Result<(DivClass, Q)> {
    let (eta, w_fiber) = c2_w_for(cfg, s, base)?;
    let a2 = base.dot(&cfg.alpha, &cfg.alpha);
    Ok((eta, w_fiber + qi(c2e as i128) - cfg.alpha_square_coeff() * a2))
}

fn c2_w_for(cfg: &ExtensionConfig, s: &SpectralData, base: &BaseSurface) -> Result<(DivClass, Q)> {
    if s.n != cfg.n || s.two_lambda != cfg.two_lambda {
        return Err(Error::InvalidConfig("spectral data and config disagree on (n, 2 lambda)".into()));
    }
    c2_w(s, base)
}

/// Smallest realizable fiber coefficient: `c2(E) = r + 2` with the
/// eta-dependent term of `c2(W)` switched off by `lambda = +-1/2`.
pub fn omega_min(cfg: &ExtensionConfig, base: &BaseSurface) -> Result<i64> {
    if cfg.two_lambda.abs() != 1 {
        return Err(Error::LambdaNotHalf(cfg.two_lambda));
    }
    let a2 = base.dot(&cfg.alpha, &cfg.alpha);
    let v = -cubic_coeff(cfg.n) * base.c1_squared() + qi(cfg.r as i128 + 2) - cfg.alpha_square_coeff() * a2;
    as_integer(&v).map(|x| x as i64).ok_or_else(|| Error::NonIntegral(format!("omega_min = {v}")))
}
