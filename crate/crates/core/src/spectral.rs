//! Numerical data of rank-n spectral cover bundles `W` with `c1(W) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{parity_admissible, BaseSurface, DivClass};
use crate::rational::{q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralData {
    pub n: u32,
    pub eta: DivClass,
    /// `2 lambda`, so the line class twist stays integral.
    pub two_lambda: i64,
}

impl SpectralData {
    pub fn new(n: u32, eta: DivClass, two_lambda: i64) -> Self {
        SpectralData { n, eta, two_lambda }
    }

    pub fn lambda(&self) -> Q {
        q(self.two_lambda as i128, 2)
    }
}

/// Coefficients of `c1(L) = a sigma + b eta + c c1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClassCoeffs {
    pub sigma: Q,
    pub eta: Q,
    pub c1: Q,
    pub is_integral: bool,
}

pub fn line_class_coeffs(s: &SpectralData, base: &BaseSurface) -> LineClassCoeffs {
    let n = qi(s.n as i128);
    let lambda = s.lambda();
    let half = q(1, 2);
    let sigma = n * (half + lambda);
    let eta = half - lambda;
    let c1 = half + n * lambda;
    let base_part = &(&s.eta * eta) + &(base.c1() * c1);
    let is_integral = sigma.is_integer() && base_part.is_integral();
    LineClassCoeffs { sigma, eta, c1, is_integral }
}

/// How base-point freeness of `|eta|` was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BpfCertificate {
    /// Toric base: nef is equivalent to base-point free.
    ToricNef,
    /// `eta = K + A` with `A` nef, `A^2 >= 5` and `A.C >= 2` on every
    /// Mori generator.
    Reider,
    NotNef,
    /// Nef, but no certificate applies.
    Uncertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Invalid,
    UnverifiedBpf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralCheck {
    pub bpf: BpfCertificate,
    pub eta_minus_nc1_effective: bool,
    pub parity: bool,
    pub verdict: Validity,
}

impl SpectralCheck {
    pub fn is_valid(&self) -> bool {
        self.verdict == Validity::Valid
    }
}

pub fn bpf_certificate(eta: &DivClass, base: &BaseSurface) -> BpfCertificate {
    if !base.is_nef(eta) {
        return BpfCertificate::NotNef;
    }
    if base.is_toric() {
        return BpfCertificate::ToricNef;
    }
    let a = eta + base.c1();
    let reider = base.is_nef(&a)
        && base.dot(&a, &a) >= qi(5)
        && base.mori_numerators(&a).all(|x| x >= 2 * a.numerators().1);
    if reider {
        BpfCertificate::Reider
    } else {
        BpfCertificate::Uncertified
    }
}

/// Sufficient conditions for `|n sigma + eta|` to hold an irreducible
/// spectral surface, plus integrality of the line class.
pub fn spectral_valid(s: &SpectralData, base: &BaseSurface) -> SpectralCheck {
    let parity = parity_admissible(base, s.n, &s.eta, s.two_lambda);
    let shifted = &s.eta - &(base.c1() * (s.n as i128));
    let effective = base.is_effective(&shifted);
    let bpf = bpf_certificate(&s.eta, base);
    let verdict = match bpf {
        BpfCertificate::NotNef => Validity::Invalid,
        _ if !(parity && effective) => Validity::Invalid,
        BpfCertificate::Uncertified => Validity::UnverifiedBpf,
        BpfCertificate::ToricNef | BpfCertificate::Reider => Validity::Valid,
    };
    SpectralCheck { bpf, eta_minus_nc1_effective: effective, parity, verdict }
}

/// `(n^3 - n) / 24`.
pub(crate) fn cubic_coeff(n: u32) -> Q {
    let n = n as i128;
    q(n * n * n - n, 24)
}

/// `c2(W) = eta sigma + fiber`; returns `(eta, fiber)`.
pub fn c2_w(s: &SpectralData, base: &BaseSurface) -> Result<(DivClass, Q)> {
    if !parity_admissible(base, s.n, &s.eta, s.two_lambda) {
        return Err(Error::InadmissibleParity);
    }
    let lambda = s.lambda();
    let n = qi(s.n as i128);
    let shifted = &s.eta - &(base.c1() * (s.n as i128));
    let fiber = -cubic_coeff(s.n) * base.c1_squared()
        + (lambda * lambda - q(1, 4)) * n / qi(2) * base.dot(&s.eta, &shifted);
    Ok((s.eta.clone(), fiber))
}
