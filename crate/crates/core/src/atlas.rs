//! Census of DRY classes the extension construction leaves unrealized.
//!
//! Every configuration fails only through the Artamkin bound
//! `c2(E) >= r + 2` once `phi - (N/2) c1` is ample, and that bound holds
//! exactly when `omega >= omega_min`. Since the DRY threshold is at least
//! `N R`, an exception needs `N R < min omega_min`, which caps `phi.c1`.
//! The sweep visits every `phi` with an ample shift below that cap and
//! scans the integer `omega` strictly between the threshold and
//! `min omega_min`.
//!
//! On `dP_k` with `k >= 2` the sweep runs over orbits of the permutation
//! group of the exceptional curves: all quantities involved are invariant,
//! so one representative per orbit decides whether the orbit contributes.

use std::collections::BTreeSet;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dry::{dry_threshold, CandidateClass};
use crate::error::{Error, Result};
use crate::extension::omega_min;
use crate::picard::{neg_one_curves, BaseSurface, DivClass, SurfaceKind};
use crate::rational::{floor, q, qi, Q};
use crate::witness::{base_alpha, case_table, realize_with, ConfigTemplate, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    #[serde(with = "crate::picard::serde_integral")]
    pub phi: DivClass,
    pub omegas: Vec<i64>,
    /// Union of the failure codes over `omegas`.
    pub failing_configs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub base: BaseSurface,
    #[serde(rename = "N")]
    pub rank: u32,
    pub phi_bound: i64,
    pub entries: Vec<CensusEntry>,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format `{s}` (expected json or csv)"))),
        }
    }
}

fn min_omega_min(base: &BaseSurface, templates: &[ConfigTemplate]) -> Result<i64> {
    let mut best: Option<i64> = None;
    for t in templates {
        let w = omega_min(&t.with_alpha(base_alpha(base, t.twist)?), base)?;
        best = Some(best.map_or(w, |b| b.min(w)));
    }
    best.ok_or_else(|| Error::Unsupported { rank: 0, base: base.to_string() })
}

fn bound_from(rank: u32, base: &BaseSurface, wmin: i64) -> i64 {
    let m = qi(rank as i128);
    let offset = m / qi(6) * base.c1_squared() + m / qi(2);
    floor(&(qi(2) * (qi(wmin as i128) - offset))).max(0) as i64
}

/// Cap `P` on `phi.c1` for the exception sweep.
pub fn sweep_bound(rank: u32, base: &BaseSurface) -> Result<i64> {
    let templates = case_table(rank, base);
    if templates.is_empty() {
        return Err(Error::Unsupported { rank, base: base.to_string() });
    }
    Ok(bound_from(rank, base, min_omega_min(base, &templates)?))
}

/// Solve `A x = b` over `Q` for square invertible `A`.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != qi(0)).expect("invertible system");
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && a[r][col] != qi(0) {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
                let v = b[col];
                b[r] -= f * v;
            }
        }
    }
    (0..n).map(|i| b[i] / a[i][i]).collect()
}

/// Region points on bases whose Mori cone is simplicial, in pairing
/// coordinates `y_j = phi.C_j`.
fn simplicial_region(rank: u32, base: &BaseSurface, bound: i64) -> Vec<DivClass> {
    let gens = base.mori_generators();
    let rho = base.picard_rank();
    assert_eq!(gens.len(), rho);
    let half_n = q(rank as i128, 2);
    let lower: Vec<i128> = base.mori_pairings(base.c1()).iter().map(|c| floor(&(half_n * c)) + 1).collect();
    // c1 = sum w_j C_j, so phi.c1 = sum w_j y_j
    let cols: Vec<Vec<Q>> = (0..rho).map(|i| gens.iter().map(|g| g.coeff(i)).collect()).collect();
    let w = solve(cols, base.c1().coeffs());
    assert!(w.iter().all(|x| x.is_positive()), "c1 must lie in the interior of the Mori cone");
    // rows of the pairing matrix: y = P phi
    let pairing: Vec<Vec<Q>> = (0..rho)
        .map(|j| base.mori_pairings(&DivClass::basis(rho, j)))
        .collect::<Vec<_>>();
    let pt: Vec<Vec<Q>> = (0..rho).map(|j| (0..rho).map(|i| pairing[i][j]).collect()).collect();

    let mut out = Vec::new();
    let mut y = vec![0i128; rho];
    fn rec(
        j: usize,
        used: Q,
        y: &mut Vec<i128>,
        lower: &[i128],
        w: &[Q],
        bound: Q,
        pt: &[Vec<Q>],
        out: &mut Vec<DivClass>,
    ) {
        if j == y.len() {
            let phi = solve(pt.to_vec(), y.iter().map(|v| qi(*v)).collect());
            let phi = DivClass::from_rationals(&phi);
            if phi.is_integral() {
                out.push(phi);
            }
            return;
        }
        let rest: Q = (j + 1..y.len()).map(|i| w[i] * qi(lower[i])).sum();
        let mut v = lower[j];
        while used + w[j] * qi(v) + rest <= bound {
            y[j] = v;
            rec(j + 1, used + w[j] * qi(v), y, lower, w, bound, pt, out);
            v += 1;
        }
    }
    rec(0, qi(0), &mut y, &lower, &w, qi(bound as i128), &pt, &mut out);
    out
}

/// Sorted `(c_l; c_1 >= c_2 >= ...)` for every (-1)-curve `c_l l - sum c_i E_i`
/// with all `c_i >= 0`.
fn sorted_curve_shapes(k: u8) -> Vec<(i128, Vec<i128>)> {
    let mut shapes = BTreeSet::new();
    for c in neg_one_curves(k).expect("k <= 8") {
        let xs = c.integer_coeffs().expect("integral");
        let mut es: Vec<i128> = xs[1..].iter().map(|b| -b).collect();
        if es.iter().any(|e| *e < 0) {
            continue;
        }
        es.sort_unstable_by(|a, b| b.cmp(a));
        shapes.insert((xs[0], es));
    }
    shapes.into_iter().collect()
}

/// Orbit representatives `a l - sum e_i E_i` with `e_1 >= ... >= e_k`.
fn del_pezzo_orbits(rank: u32, k: u8, bound: i64) -> Vec<Vec<i128>> {
    let n = rank as i128;
    let kk = k as usize;
    let shapes = sorted_curve_shapes(k);
    let mu = shapes.iter().map(|(a, _)| *a).max().unwrap_or(1).max(1);
    let c1sq = 9 - k as i128;
    // S.c1 = phi.c1 - (N/2) c1^2 and S.l <= mu S.c1
    let sc1_max = qi(bound as i128) - q(n * c1sq, 2);
    if !sc1_max.is_positive() {
        return Vec::new();
    }
    let a_min = floor(&q(3 * n, 2)) + 1;
    let a_max = floor(&(q(3 * n, 2) + qi(mu) * sc1_max));
    let e_min = n.div_euclid(2) + 1;
    let m2_min = 2 * e_min - n;

    struct Ctx<'a> {
        n: i128,
        kk: usize,
        bound: i128,
        e_min: i128,
        m2_min: i128,
        shapes: &'a [(i128, Vec<i128>)],
    }

    fn prune_ok(ctx: &Ctx, a2: i128, m2: &[i128]) -> bool {
        ctx.shapes.iter().all(|(ca, cs)| {
            let fixed: i128 = cs.iter().zip(m2).map(|(c, m)| c * m).sum();
            let rest: i128 = cs[m2.len()..].iter().sum::<i128>() * ctx.m2_min;
            ca * a2 - fixed - rest > 0
        })
    }

    fn rec(ctx: &Ctx, a: i128, es: &mut Vec<i128>, m2: &mut Vec<i128>, sum: i128, out: &mut Vec<Vec<i128>>) {
        let i = es.len();
        let a2 = 2 * a - 3 * ctx.n;
        if i == ctx.kk {
            if 3 * a - sum <= ctx.bound {
                let mut v = vec![a];
                v.extend(es.iter().map(|e| -e));
                out.push(v);
            }
            return;
        }
        let cap = if i == 0 { i128::MAX } else { es[i - 1] };
        let need = 3 * a - ctx.bound;
        let slots = (ctx.kk - i) as i128;
        let mut e = ctx.e_min;
        while e <= cap {
            m2.push(2 * e - ctx.n);
            if !prune_ok(ctx, a2, m2) {
                m2.pop();
                break;
            }
            if sum + e * slots >= need {
                es.push(e);
                rec(ctx, a, es, m2, sum + e, out);
                es.pop();
            }
            m2.pop();
            e += 1;
        }
    }

    let ctx = Ctx { n, kk, bound: bound as i128, e_min, m2_min, shapes: &shapes };
    let mut out = Vec::new();
    for a in a_min..=a_max {
        // every component at its minimum must already respect the curves
        if !prune_ok(&ctx, 2 * a - 3 * n, &[]) {
            continue;
        }
        rec(&ctx, a, &mut Vec::with_capacity(kk), &mut Vec::with_capacity(kk), 0, &mut out);
    }
    out
}

/// Distinct permutations of the exceptional coefficients, sorted.
fn expand_orbit(rep: &[i128]) -> Vec<DivClass> {
    let mut tail: Vec<i128> = rep[1..].to_vec();
    tail.sort_unstable();
    let mut out = Vec::new();
    loop {
        let mut v = vec![rep[0]];
        v.extend_from_slice(&tail);
        out.push(DivClass::from_ints(v));
        if !next_permutation(&mut tail) {
            break;
        }
    }
    out
}

fn next_permutation(xs: &mut [i128]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

fn lex_key(d: &DivClass) -> Vec<i128> {
    d.integer_coeffs().expect("integral").to_vec()
}

/// Orbit representatives (singletons on simplicial bases) together with a
/// flag telling whether the orbit must be expanded.
fn region_orbits(rank: u32, base: &BaseSurface, bound: i64) -> Vec<(DivClass, bool)> {
    match base.kind() {
        SurfaceKind::DelPezzo(k) if k >= 2 => del_pezzo_orbits(rank, k, bound)
            .into_iter()
            .map(|v| (DivClass::from_ints(v), true))
            .collect(),
        _ => simplicial_region(rank, base, bound).into_iter().map(|d| (d, false)).collect(),
    }
}

/// Every integral `phi` with `phi - (N/2) c1` ample and `phi.c1 <= bound`,
/// sorted lexicographically.
pub fn enumerate_phis(rank: u32, base: &BaseSurface, bound: i64) -> Vec<DivClass> {
    let mut out: Vec<DivClass> = region_orbits(rank, base, bound)
        .into_iter()
        .flat_map(|(d, expand)| if expand { expand_orbit(lex_key(&d).as_slice()) } else { vec![d] })
        .collect();
    out.sort_by_key(lex_key);
    out
}

pub fn exception_census(rank: u32, base: &BaseSurface) -> Result<CensusReport> {
    census_with(rank, base, &case_table(rank, base), None)
}

/// Census over an explicit configuration list; `bound_override` replaces the
/// derived cap, and the report is marked incomplete when it is smaller.
pub fn census_with(
    rank: u32,
    base: &BaseSurface,
    templates: &[ConfigTemplate],
    bound_override: Option<i64>,
) -> Result<CensusReport> {
    if templates.is_empty() {
        return Err(Error::Unsupported { rank, base: base.to_string() });
    }
    let wmin = min_omega_min(base, templates)?;
    let derived = bound_from(rank, base, wmin);
    let phi_bound = bound_override.unwrap_or(derived);
    let orbits = region_orbits(rank, base, phi_bound);

    let mut entries: Vec<CensusEntry> = orbits
        .par_iter()
        .flat_map_iter(|(rep, expand)| {
            let thr = dry_threshold(rep, rank, base).expect("region shifts are ample");
            let lo = floor(&thr) as i64 + 1;
            let phis = if lo < wmin {
                if *expand {
                    expand_orbit(lex_key(rep).as_slice())
                } else {
                    vec![rep.clone()]
                }
            } else {
                Vec::new()
            };
            phis.into_iter().filter_map(move |phi| scan(rank, base, templates, phi, lo, wmin))
        })
        .collect();
    entries.sort_by_key(|e| lex_key(&e.phi));
    Ok(CensusReport { base: base.clone(), rank, phi_bound, entries, complete: phi_bound >= derived })
}

fn scan(
    rank: u32,
    base: &BaseSurface,
    templates: &[ConfigTemplate],
    phi: DivClass,
    lo: i64,
    hi: i64,
) -> Option<CensusEntry> {
    let mut omegas = Vec::new();
    let mut codes = BTreeSet::new();
    for omega in lo..hi {
        let c = CandidateClass::new(phi.clone(), omega, rank);
        if let Verdict::ExceptionCandidate { failures, .. } = realize_with(&c, base, templates) {
            omegas.push(omega);
            codes.extend(failures.iter().flat_map(|f| f.codes()));
        }
    }
    (!omegas.is_empty()).then(|| CensusEntry { phi, omegas, failing_configs: codes.into_iter().collect() })
}

pub fn emit(report: &CensusReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("census serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["base", "N", "phi", "omega", "failing_configs"]).expect("in-memory write");
            let base = report.base.to_string();
            let rank = report.rank.to_string();
            for e in &report.entries {
                let phi = lex_key(&e.phi).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
                let fails = e.failing_configs.join("|");
                for omega in &e.omegas {
                    w.write_record([base.as_str(), rank.as_str(), &phi, &omega.to_string(), &fails])
                        .expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

pub fn parse_json(s: &str) -> Result<CensusReport> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
