//! Realization of DRY classes as `c2(V)` of stable extension bundles.
//!
//! `realize` walks a fixed preference list of configurations, sets
//! `eta := phi`, picks `alpha` and `H_B` by the sign and orthogonality
//! rules below and accepts the first configuration whose conditions all
//! hold. `verify_witness` re-derives every check from the certificate
//! alone.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::dry::{is_dry, CandidateClass, DryEvaluation};
use crate::error::{Error, Result};
use crate::extension::{
    build_polarization, c2_v, check_polarization, index_ix, nonsplit_ok, required_c2e, ExtensionConfig,
    PolarizationData, Twist,
};
use crate::picard::{parity_admissible, BaseSurface, DivClass, SurfaceKind};
use crate::rational::{as_integer, serde_q, Q};
use crate::spectral::{spectral_valid, BpfCertificate, Validity};

/// A configuration before `alpha` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigTemplate {
    pub n: u32,
    pub r: u32,
    pub two_lambda: i64,
    pub twist: Twist,
}

impl ConfigTemplate {
    pub fn standard(n: u32, r: u32) -> Self {
        ConfigTemplate { n, r, two_lambda: 1, twist: Twist::Standard }
    }

    pub fn balanced(n: u32) -> Self {
        ConfigTemplate { n, r: n, two_lambda: 1, twist: Twist::Balanced }
    }

    pub fn with_alpha(&self, alpha: DivClass) -> ExtensionConfig {
        ExtensionConfig { n: self.n, r: self.r, two_lambda: self.two_lambda, alpha, twist: self.twist }
    }
}

impl fmt::Display for ConfigTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tw = match self.twist {
            Twist::Standard => "standard",
            Twist::Balanced => "balanced",
        };
        write!(f, "{tw}({},{})", self.n, self.r)
    }
}

fn is_listed(base: &BaseSurface) -> bool {
    !matches!(base.kind(), SurfaceKind::P2 | SurfaceKind::DelPezzo(0))
}

/// Preference-ordered configurations for rank `N` on `B`; empty when the
/// construction does not apply.
pub fn case_table(rank: u32, base: &BaseSurface) -> Vec<ConfigTemplate> {
    if rank < 4 || !is_listed(base) {
        return Vec::new();
    }
    let on_f0 = base.kind() == SurfaceKind::Hirzebruch(0);
    let mut out = Vec::new();
    if rank % 2 == 0 {
        let n = rank / 2;
        if (n % 2 == 1 && rank >= 6) || (n % 2 == 0 && on_f0) {
            out.push(ConfigTemplate::balanced(n));
        }
    }
    if rank >= 6 {
        out.push(ConfigTemplate::standard(3, rank - 3));
    } else if on_f0 {
        out.push(ConfigTemplate::standard(2, rank - 2));
    }
    out
}

/// `alpha` before the sign rule.
pub fn base_alpha(base: &BaseSurface, twist: Twist) -> Result<DivClass> {
    match base.kind() {
        SurfaceKind::Hirzebruch(_) => Ok(DivClass::from_ints([-1, 1])),
        SurfaceKind::DelPezzo(k) if k >= 1 => {
            let k = k as usize;
            let coeffs: Vec<i128> = match twist {
                Twist::Standard => (0..=k).map(|i| if i == 0 { k as i128 } else { -3 }).collect(),
                Twist::Balanced => (0..=k).map(|i| match i {
                    0 => 1,
                    1 => -3,
                    _ => 0,
                })
                .collect(),
            };
            Ok(DivClass::from_ints(coeffs))
        }
        _ => Err(Error::UnsupportedBase(base.to_string())),
    }
}

/// `alpha` with sign chosen so that `alpha.(eta - n c1) <= 0`, keeping `+`
/// on ties.
pub fn select_alpha(base: &BaseSurface, eta: &DivClass, template: &ConfigTemplate) -> Result<DivClass> {
    let alpha = base_alpha(base, template.twist)?;
    let shifted = eta - &(base.c1() * (template.n as i128));
    if base.intersect(&alpha, &shifted)?.is_positive() {
        Ok(-alpha)
    } else {
        Ok(alpha)
    }
}

pub fn select_hb(base: &BaseSurface) -> Result<DivClass> {
    match base.kind() {
        SurfaceKind::Hirzebruch(g) => Ok(DivClass::from_ints([1, g as i128 + 1])),
        SurfaceKind::DelPezzo(k) if k >= 1 => Ok(base.c1().clone()),
        _ => Err(Error::UnsupportedBase(base.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub parity: bool,
    pub spectral_valid: bool,
    pub bpf: BpfCertificate,
    pub eta_minus_nc1_effective: bool,
    pub alpha_nonzero: bool,
    pub orthogonality: bool,
    pub polarization: bool,
    pub nonsplit: bool,
    #[serde(rename = "index_IX", with = "serde_q")]
    pub index_ix: Q,
    pub artamkin: bool,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.parity
            && self.spectral_valid
            && self.eta_minus_nc1_effective
            && self.alpha_nonzero
            && self.orthogonality
            && self.polarization
            && self.nonsplit
            && self.artamkin
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernPair {
    pub sigma_part: DivClass,
    pub fiber_part: i64,
}

/// Complete certificate that a class is `c2(V)` of a stable bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub eta: DivClass,
    #[serde(rename = "cfg")]
    pub config: ExtensionConfig,
    #[serde(rename = "c2E")]
    pub c2e: i64,
    pub polarization: PolarizationData,
    pub dry_report: DryEvaluation,
    pub condition_report: ConditionReport,
    #[serde(rename = "recomputed_c2V")]
    pub recomputed_c2v: ChernPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Parity,
    SpectralInvalid,
    BpfUnverified,
    Nonsplit,
    Polarization,
    C2eNonintegral,
    Artamkin,
}

impl FailureReason {
    pub fn code(&self) -> &'static str {
        match self {
            FailureReason::Parity => "parity",
            FailureReason::SpectralInvalid => "spectral_invalid",
            FailureReason::BpfUnverified => "bpf_unverified",
            FailureReason::Nonsplit => "nonsplit",
            FailureReason::Polarization => "polarization",
            FailureReason::C2eNonintegral => "c2e_nonintegral",
            FailureReason::Artamkin => "artamkin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFailure {
    pub config: ConfigTemplate,
    pub alpha: DivClass,
    pub reasons: Vec<FailureReason>,
}

impl ConfigFailure {
    /// Reason codes prefixed by the configuration, e.g. `balanced(3,3):artamkin`.
    pub fn codes(&self) -> impl Iterator<Item = String> + '_ {
        self.reasons.iter().map(move |r| format!("{}:{}", self.config, r.code()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Realized { witness: Box<Witness> },
    NotDry { evaluation: DryEvaluation },
    ExceptionCandidate { evaluation: DryEvaluation, failures: Vec<ConfigFailure> },
    Unsupported { reason: String },
}

impl Verdict {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Realized { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn is_exception(&self) -> bool {
        matches!(self, Verdict::ExceptionCandidate { .. })
    }
}

pub fn realize(c: &CandidateClass, base: &BaseSurface) -> Verdict {
    realize_with(c, base, &case_table(c.rank, base))
}

/// `realize` over an explicit configuration list.
pub fn realize_with(c: &CandidateClass, base: &BaseSurface, templates: &[ConfigTemplate]) -> Verdict {
    if let Err(e) = c.validate(base) {
        return Verdict::Unsupported { reason: e.to_string() };
    }
    let (dry, evaluation) = is_dry(c, base);
    if !dry {
        return Verdict::NotDry { evaluation };
    }
    if templates.is_empty() {
        let reason = Error::Unsupported { rank: c.rank, base: base.to_string() }.to_string();
        return Verdict::Unsupported { reason };
    }
    let mut failures = Vec::new();
    for t in templates {
        match attempt(c, base, t, &evaluation) {
            Ok(w) => return Verdict::Realized { witness: Box::new(w) },
            Err(f) => failures.push(f),
        }
    }
    Verdict::ExceptionCandidate { evaluation, failures }
}

fn attempt(
    c: &CandidateClass,
    base: &BaseSurface,
    t: &ConfigTemplate,
    evaluation: &DryEvaluation,
) -> std::result::Result<Witness, ConfigFailure> {
    let eta = c.phi.clone();
    let alpha = match select_alpha(base, &eta, t) {
        Ok(a) => a,
        Err(_) => {
            let alpha = base.zero();
            return Err(ConfigFailure { config: *t, alpha, reasons: vec![FailureReason::Polarization] });
        }
    };
    let cfg = t.with_alpha(alpha.clone());
    let mut reasons = Vec::new();

    let parity = parity_admissible(base, cfg.n, &eta, cfg.two_lambda);
    if !parity {
        reasons.push(FailureReason::Parity);
    }
    let s = cfg.spectral(eta.clone());
    let spectral = spectral_valid(&s, base);
    match spectral.verdict {
        Validity::Valid => {}
        Validity::UnverifiedBpf => reasons.push(FailureReason::BpfUnverified),
        Validity::Invalid => {
            if spectral.bpf == BpfCertificate::NotNef || !spectral.eta_minus_nc1_effective {
                reasons.push(FailureReason::SpectralInvalid);
            }
        }
    }
    let polarization = cached_polarization(&alpha, base);
    if polarization.is_err() {
        reasons.push(FailureReason::Polarization);
    }
    let nonsplit = parity && nonsplit_ok(&cfg, &eta, base).unwrap_or(false);
    if parity && !nonsplit {
        reasons.push(FailureReason::Nonsplit);
    }
    let mut c2e = None;
    if parity {
        let need = required_c2e(&cfg, &s, c.omega, base).expect("parity checked");
        match as_integer(&need) {
            None => reasons.push(FailureReason::C2eNonintegral),
            Some(v) if v < cfg.r as i128 + 2 => reasons.push(FailureReason::Artamkin),
            Some(v) => c2e = Some(v as i64),
        }
    }
    if !reasons.is_empty() {
        return Err(ConfigFailure { config: *t, alpha, reasons });
    }

    let c2e = c2e.expect("all checks passed");
    let polarization = polarization.expect("all checks passed");
    let (sigma_part, fiber) = c2_v(&cfg, &s, c2e, base).expect("parity checked");
    let fiber_part = as_integer(&fiber).expect("fiber part of c2(V) is integral") as i64;
    let condition_report = ConditionReport {
        parity,
        spectral_valid: spectral.is_valid(),
        bpf: spectral.bpf,
        eta_minus_nc1_effective: spectral.eta_minus_nc1_effective,
        alpha_nonzero: !alpha.is_zero(),
        orthogonality: base.dot(&alpha, &polarization.h_b) == Q::from_integer(0),
        polarization: check_polarization(&polarization, &alpha, base),
        nonsplit,
        index_ix: index_ix(&cfg, &eta, base).expect("parity checked"),
        artamkin: true,
    };
    Ok(Witness {
        eta,
        config: cfg,
        c2e,
        polarization,
        dry_report: evaluation.clone(),
        condition_report,
        recomputed_c2v: ChernPair { sigma_part, fiber_part },
    })
}

thread_local! {
    static POLARIZATIONS: RefCell<HashMap<(SurfaceKind, DivClass), Result<PolarizationData>>> =
        RefCell::new(HashMap::new());
}

/// The polarization depends only on `(B, alpha)`; sweeps hit the same few
/// pairs millions of times.
fn cached_polarization(alpha: &DivClass, base: &BaseSurface) -> Result<PolarizationData> {
    let key = (base.kind(), alpha.clone());
    if let Some(hit) = POLARIZATIONS.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let fresh = select_hb(base).and_then(|h_b| build_polarization(alpha, &h_b, base));
    POLARIZATIONS.with(|m| m.borrow_mut().insert(key, fresh.clone()));
    fresh
}

/// Outcome of re-auditing a witness, one entry per check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub checks: Vec<(&'static str, bool)>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Recompute every condition from the certificate data alone.
pub fn audit_witness(w: &Witness, c: &CandidateClass, base: &BaseSurface) -> Audit {
    let mut checks = Vec::new();
    let shape_ok = c.validate(base).is_ok()
        && [&w.eta, &w.config.alpha, &w.polarization.h_b, &w.polarization.rho]
            .iter()
            .all(|d| d.rank() == base.picard_rank());
    checks.push(("shapes", shape_ok));
    if !shape_ok {
        return Audit { checks };
    }
    let cfg = &w.config;
    checks.push(("eta_is_phi", w.eta == c.phi));
    checks.push(("config", cfg.validate().is_ok()));
    checks.push(("rank", cfg.m() == c.rank));
    checks.push(("alpha_nonzero", !cfg.alpha.is_zero()));

    let parity = parity_admissible(base, cfg.n, &w.eta, cfg.two_lambda);
    checks.push(("parity", parity));
    let s = cfg.spectral(w.eta.clone());
    checks.push(("spectral_valid", spectral_valid(&s, base).is_valid()));
    checks.push(("orthogonality", base.dot(&cfg.alpha, &w.polarization.h_b) == Q::from_integer(0)));
    checks.push(("polarization", check_polarization(&w.polarization, &cfg.alpha, base)));
    checks.push(("nonsplit", parity && nonsplit_ok(cfg, &w.eta, base).unwrap_or(false)));
    checks.push(("artamkin", w.c2e >= cfg.r as i64 + 2));

    let c2v_ok = parity
        && match c2_v(cfg, &s, w.c2e, base) {
            Ok((sigma, fiber)) => sigma == c.phi && fiber == Q::from_integer(c.omega as i128),
            Err(_) => false,
        };
    checks.push(("c2V", c2v_ok));
    let recorded = w.recomputed_c2v.sigma_part == c.phi && w.recomputed_c2v.fiber_part == c.omega;
    checks.push(("recorded_c2V", recorded));
    Audit { checks }
}

pub fn verify_witness(w: &Witness, c: &CandidateClass, base: &BaseSurface) -> bool {
    audit_witness(w, c, base).passed()
}
