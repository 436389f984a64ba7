//! Picard lattices of the supported base surfaces.
//!
//! Bases: `P2`, Hirzebruch `F_g` (g = 0, 1) and del Pezzo `dP_k`
//! (k = 0..8). Coordinates:
//!
//! * `F_g`: `(C0, F)` with `C0^2 = -g`, `C0.F = 1`, `F^2 = 0`.
//! * `dP_k` and `P2`: `(l, E_1, .., E_k)` with `l^2 = 1`, `E_i.E_j = -delta_ij`.
//!
//! Cones are handled through their Mori generators. Every Mori cone here is
//! rational polyhedral and full dimensional, so ampleness is strict
//! positivity on the generators and nefness is non-negativity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::cone_contains;
use crate::error::{Error, Result};
use crate::rational::{Q, qi};

/// A divisor class with rational coefficients in the standard basis.
///
/// Stored as integer numerators over one positive common denominator, kept
/// in lowest terms, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivClass {
    num: Vec<i128>,
    den: i128,
}

impl DivClass {
    pub fn from_ints<I>(coeffs: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<i128>,
    {
        DivClass { num: coeffs.into_iter().map(Into::into).collect(), den: 1 }
    }

    pub fn from_rationals(coeffs: &[Q]) -> Self {
        let den = coeffs.iter().fold(1i128, |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (den / c.denom())).collect();
        Self::normalized(num, den)
    }

    pub fn zero(rank: usize) -> Self {
        DivClass { num: vec![0; rank], den: 1 }
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut d = Self::zero(rank);
        d.num[i] = 1;
        d
    }

    fn normalized(mut num: Vec<i128>, mut den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|x| *x = -*x);
        }
        let g = num.iter().fold(den, |acc, x| acc.gcd(x));
        if g > 1 {
            num.iter_mut().for_each(|x| *x /= g);
            den /= g;
        }
        DivClass { num, den }
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn coeff(&self, i: usize) -> Q {
        Q::new(self.num[i], self.den)
    }

    pub fn coeffs(&self) -> Vec<Q> {
        (0..self.rank()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn integer_coeffs(&self) -> Option<&[i128]> {
        self.is_integral().then_some(self.num.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| *x == 0)
    }

    /// Numerators over the common denominator returned alongside.
    pub fn numerators(&self) -> (&[i128], i128) {
        (&self.num, self.den)
    }

    /// Componentwise congruence mod 2 between integral classes.
    pub fn congruent_mod2(&self, other: &DivClass) -> bool {
        self.is_integral()
            && other.is_integral()
            && self.num.iter().zip(&other.num).all(|(a, b)| (a - b).rem_euclid(2) == 0)
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && self.num.iter().all(|a| a.rem_euclid(2) == 0)
    }

    fn check_rank(&self, other: &DivClass) {
        assert_eq!(self.rank(), other.rank(), "divisor classes of different rank");
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.rank() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.coeff(i))?;
        }
        write!(f, ")")
    }
}

impl Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        self.check_rank(rhs);
        let den = self.den.lcm(&rhs.den);
        let (a, b) = (den / self.den, den / rhs.den);
        DivClass::normalized(self.num.iter().zip(&rhs.num).map(|(x, y)| x * a + y * b).collect(), den)
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        self + &(-rhs)
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass { num: self.num.iter().map(|x| -x).collect(), den: self.den }
    }
}

impl Mul<Q> for &DivClass {
    type Output = DivClass;
    fn mul(self, s: Q) -> DivClass {
        DivClass::normalized(self.num.iter().map(|x| x * s.numer()).collect(), self.den * s.denom())
    }
}

impl Mul<i128> for &DivClass {
    type Output = DivClass;
    fn mul(self, s: i128) -> DivClass {
        self * qi(s)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<DivClass> for DivClass {
            type Output = DivClass;
            fn $m(self, rhs: DivClass) -> DivClass {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&DivClass> for DivClass {
            type Output = DivClass;
            fn $m(self, rhs: &DivClass) -> DivClass {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);

impl Neg for DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        -&self
    }
}

impl Serialize for DivClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rank()).map(|i| self.coeff(i).to_string()))
    }
}

impl<'de> Deserialize<'de> for DivClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<crate::rational::serde_q::Raw>::deserialize(d)?;
        let coeffs = raw
            .into_iter()
            .map(|r| r.into_q())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(DivClass::from_rationals(&coeffs))
    }
}

/// Serde adapter for classes that are integral by contract, written as
/// plain JSON integers.
pub mod serde_integral {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::DivClass;

    pub fn serialize<S: Serializer>(d: &DivClass, s: S) -> Result<S::Ok, S::Error> {
        match d.integer_coeffs() {
            Some(c) => s.collect_seq(c.iter().map(|x| *x as i64)),
            None => Err(serde::ser::Error::custom("class is not integral")),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DivClass, D::Error> {
        let c = Vec::<i64>::deserialize(d)?;
        Ok(DivClass::from_ints(c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    P2,
    Hirzebruch(u8),
    DelPezzo(u8),
}

/// A base surface with its intersection form and cone data.
#[derive(Clone, Debug)]
pub struct BaseSurface {
    kind: SurfaceKind,
    gram: Vec<Vec<i128>>,
    c1: DivClass,
    mori: Vec<DivClass>,
    /// `gram * C` for each Mori generator, so `D.C` is one dot product.
    mori_duals: Vec<Vec<i128>>,
}

impl PartialEq for BaseSurface {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for BaseSurface {}

impl BaseSurface {
    pub fn p2() -> Self {
        Self::build(SurfaceKind::P2, vec![vec![1]], DivClass::from_ints([3]), vec![DivClass::from_ints([1])])
    }

    pub fn hirzebruch(g: u8) -> Result<Self> {
        if g > 1 {
            return Err(Error::OutOfRange(format!("F_{g}: only g = 0, 1 have ample anticanonical class")));
        }
        let gi = g as i128;
        Ok(Self::build(
            SurfaceKind::Hirzebruch(g),
            vec![vec![-gi, 1], vec![1, 0]],
            DivClass::from_ints([2, gi + 2]),
            vec![DivClass::from_ints([1, 0]), DivClass::from_ints([0, 1])],
        ))
    }

    pub fn del_pezzo(k: u8) -> Result<Self> {
        if k > 8 {
            return Err(Error::OutOfRange(format!("dP_{k}: k must be in 0..=8")));
        }
        let rank = k as usize + 1;
        let gram = (0..rank)
            .map(|i| (0..rank).map(|j| if i != j { 0 } else if i == 0 { 1 } else { -1 }).collect())
            .collect();
        let c1 = DivClass::from_ints((0..rank).map(|i| if i == 0 { 3 } else { -1 }));
        let mori = match k {
            0 => vec![DivClass::from_ints([1])],
            1 => vec![DivClass::from_ints([0, 1]), DivClass::from_ints([1, -1])],
            _ => neg_one_curves(k)?,
        };
        Ok(Self::build(SurfaceKind::DelPezzo(k), gram, c1, mori))
    }

    fn build(kind: SurfaceKind, gram: Vec<Vec<i128>>, c1: DivClass, mori: Vec<DivClass>) -> Self {
        let mori_duals = mori
            .iter()
            .map(|c| {
                let (num, _) = c.numerators();
                gram.iter().map(|row| row.iter().zip(num).map(|(g, x)| g * x).sum()).collect()
            })
            .collect();
        BaseSurface { kind, gram, c1, mori, mori_duals }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn picard_rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i128>] {
        &self.gram
    }

    /// Anticanonical class `c1(B)`.
    pub fn c1(&self) -> &DivClass {
        &self.c1
    }

    pub fn c1_squared(&self) -> Q {
        self.dot(&self.c1, &self.c1)
    }

    pub fn mori_generators(&self) -> &[DivClass] {
        &self.mori
    }

    /// Generators of the effective cone; on a surface these coincide with
    /// the Mori generators.
    pub fn effective_generators(&self) -> &[DivClass] {
        &self.mori
    }

    /// `true` for the toric members of the family (`P2`, `F_g`, `dP_k` with
    /// k <= 3), where nef line bundles are base-point free.
    pub fn is_toric(&self) -> bool {
        match self.kind {
            SurfaceKind::P2 | SurfaceKind::Hirzebruch(_) => true,
            SurfaceKind::DelPezzo(k) => k <= 3,
        }
    }

    pub fn zero(&self) -> DivClass {
        DivClass::zero(self.picard_rank())
    }

    fn check(&self, d: &DivClass) -> Result<()> {
        if d.rank() != self.picard_rank() {
            return Err(Error::DimensionMismatch { expected: self.picard_rank(), found: d.rank() });
        }
        Ok(())
    }

    /// Intersection number `D1 . D2`.
    pub fn intersect(&self, d1: &DivClass, d2: &DivClass) -> Result<Q> {
        self.check(d1)?;
        self.check(d2)?;
        Ok(self.dot(d1, d2))
    }

    /// Intersection number for classes already known to have the right rank.
    pub(crate) fn dot(&self, d1: &DivClass, d2: &DivClass) -> Q {
        let (a, da) = d1.numerators();
        let (b, db) = d2.numerators();
        let mut s: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let rb: i128 = row.iter().zip(b).map(|(g, y)| g * y).sum();
            s += a[i] * rb;
        }
        Q::new(s, da * db)
    }

    /// Numerators of `D.C` over the Mori generators, all sharing the
    /// positive denominator of `D`.
    pub(crate) fn mori_numerators<'a>(&'a self, d: &'a DivClass) -> impl Iterator<Item = i128> + 'a {
        let (x, _) = d.numerators();
        self.mori_duals.iter().map(move |w| w.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// `D.C` for every Mori generator `C`, in generator order.
    pub fn mori_pairings(&self, d: &DivClass) -> Vec<Q> {
        let (_, den) = d.numerators();
        self.mori_numerators(d).map(|n| Q::new(n, den)).collect()
    }

    pub fn is_ample(&self, d: &DivClass) -> bool {
        d.rank() == self.picard_rank() && self.mori_numerators(d).all(|n| n > 0)
    }

    pub fn is_nef(&self, d: &DivClass) -> bool {
        d.rank() == self.picard_rank() && self.mori_numerators(d).all(|n| n >= 0)
    }

    /// Effective-cone membership. Nef classes are effective on these
    /// surfaces; everything else goes through exact cone membership.
    pub fn is_effective(&self, d: &DivClass) -> bool {
        if d.rank() != self.picard_rank() {
            return false;
        }
        d.is_zero() || self.is_nef(d) || self.in_effective_cone(d)
    }

    /// Cone membership over `effective_generators` only, by exact LP.
    pub fn in_effective_cone(&self, d: &DivClass) -> bool {
        let gens: Vec<Vec<Q>> = self.mori.iter().map(DivClass::coeffs).collect();
        cone_contains(&gens, &d.coeffs())
    }

    /// Inertia `(positive, negative, zero)` of the intersection form.
    pub fn signature(&self) -> (usize, usize, usize) {
        let m = self.gram.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        inertia(m)
    }

    /// Structural checks: hyperbolic signature and `c1` positive on every
    /// Mori generator.
    pub fn validate(&self) -> Result<()> {
        let rho = self.picard_rank();
        if self.signature() != (1, rho - 1, 0) {
            return Err(Error::OutOfRange(format!("{self}: intersection form is not hyperbolic")));
        }
        if !self.is_ample(&self.c1) {
            return Err(Error::OutOfRange(format!("{self}: anticanonical class is not ample")));
        }
        Ok(())
    }
}

impl fmt::Display for BaseSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::P2 => write!(f, "P2"),
            SurfaceKind::Hirzebruch(g) => write!(f, "F{g}"),
            SurfaceKind::DelPezzo(k) => write!(f, "dP{k}"),
        }
    }
}

impl FromStr for BaseSurface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownBase(s.to_string());
        if s == "P2" {
            return Ok(Self::p2());
        }
        if let Some(g) = s.strip_prefix('F') {
            let g: u8 = g.parse().map_err(|_| unknown())?;
            return Self::hirzebruch(g).map_err(|_| unknown());
        }
        if let Some(k) = s.strip_prefix("dP") {
            let k: u8 = k.parse().map_err(|_| unknown())?;
            return Self::del_pezzo(k).map_err(|_| unknown());
        }
        Err(unknown())
    }
}

impl Serialize for BaseSurface {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BaseSurface {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Symmetric congruence diagonalisation over the rationals.
fn inertia(mut m: Vec<Vec<Q>>) -> (usize, usize, usize) {
    let n = m.len();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if m[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[i][i].is_zero()) {
                m.swap(k, i);
                for row in m.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // diagonal entries vanish, so adding e_j to e_k makes
                // m[k][k] = 2 m[k][j] != 0
                for c in 0..n {
                    let v = m[j][c];
                    m[k][c] += v;
                }
                for row in m.iter_mut() {
                    let v = row[j];
                    row[k] += v;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let p = m[k][k];
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / p;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = m[k][c];
                m[i][c] -= f * v;
            }
        }
        for i in k + 1..n {
            m[k][i] = Q::zero();
            m[i][k] = Q::zero();
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

/// All integral classes `D = a l + sum b_i E_i` on `dP_k` with `D^2 = -1`
/// and `D.c1 = 1`, by exhaustive search.
///
/// Cauchy-Schwarz on `sum b_i = 1 - 3a`, `sum b_i^2 = a^2 + 1` gives
/// `(3a - 1)^2 <= k (a^2 + 1)`, so `-1 <= a <= 7` for `k <= 8`, and each
/// `|b_i| <= sqrt(a^2 + 1)`. Output is sorted by coefficient vector.
pub fn neg_one_curves(k: u8) -> Result<Vec<DivClass>> {
    if k > 8 {
        return Err(Error::OutOfRange(format!("dP_{k}: k must be in 0..=8")));
    }
    let k = k as usize;
    let mut out = Vec::new();
    let mut b = vec![0i128; k];
    for a in -1i128..=7 {
        let sq = a * a + 1;
        let sum = 1 - 3 * a;
        search_b(&mut b, 0, sq, sum, a, &mut out);
    }
    out.sort_by(|x: &DivClass, y: &DivClass| x.num.cmp(&y.num));
    Ok(out)
}

fn search_b(b: &mut [i128], i: usize, sq_left: i128, sum_left: i128, a: i128, out: &mut Vec<DivClass>) {
    let k = b.len();
    if i == k {
        if sq_left == 0 && sum_left == 0 {
            out.push(DivClass::from_ints(std::iter::once(a).chain(b.iter().copied())));
        }
        return;
    }
    let rest = (k - i) as i128;
    // remaining coordinates must reach sum_left with squares sq_left
    if sum_left * sum_left > rest * sq_left {
        return;
    }
    let mut bound = 0;
    while (bound + 1) * (bound + 1) <= sq_left {
        bound += 1;
    }
    for v in -bound..=bound {
        b[i] = v;
        search_b(b, i + 1, sq_left - v * v, sum_left - v, a, out);
    }
    b[i] = 0;
}

/// Integrality of `c1(L)` for spectral data `(n, eta, lambda = two_lambda / 2)`.
pub fn parity_admissible(base: &BaseSurface, n: u32, eta: &DivClass, two_lambda: i64) -> bool {
    if !eta.is_integral() || eta.rank() != base.picard_rank() || n == 0 {
        return false;
    }
    let lambda_half_integral = two_lambda.rem_euclid(2) == 1;
    if n % 2 == 1 {
        lambda_half_integral
    } else if lambda_half_integral {
        base.c1().is_even()
    } else {
        eta.congruent_mod2(base.c1())
    }
}
