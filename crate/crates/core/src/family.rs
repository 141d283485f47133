//! The family `X_n` of non-quasismooth Fano hypersurfaces built from
//! Sylvester's sequence, and the exact checks of their invariants.
//!
//! For `s = s_n` the weights are
//!
//! | | even `n` | odd `n` |
//! |---|---|---|
//! | `a_n` | `(s² + s − 4)/4` | `(s² + 3s − 6)/4` |
//! | `a_{n+1}` | `((s−1)a_n − s − 1)/2` | `((s−3)a_n − s − 1)/4` |
//! | `b` | `(s² − s − 4)/2` | `(s² − s − 2)/4` |
//! | `c` | `(s + 3)/2` | `(s + 5)/2` |
//!
//! with `r = a_n + a_{n+1} − 1`, `d = r(s − 1)` and `a_i = d/s_i` for `i < n`.
//! The equation is `x_0² + x_1³ + ⋯ + x_{n−1}^{s_{n−1}} + x_n^b x_{n+1}`
//! plus `x_1⋯x_{n−1} x_n x_{n+1}^c` (even) or `x_1⋯x_{n−1} x_n² x_{n+1}^c` (odd).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::{exact_div, sylvester, Rational};
use crate::mld::{cyclic_quotient_mld, HypersurfaceEngine, MldError, MldResult, QuotientSingularity, ScanOptions};
use crate::serde_dec;
use crate::wps::{
    affine_chart, homogeneous_degree, is_well_formed, quasismooth_coordinate_report, CoordinateStatus, Monomial,
    WeightVector, WeightedPolynomial, WpsError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("the family starts at dimension 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("internal consistency: {quantity} is not an exact quotient")]
    InexactDivision { quantity: &'static str },
    #[error("a_(n+1) = {order} exceeds the brute-force budget {budget}")]
    BudgetExceeded { order: BigInt, budget: u64 },
    #[error(transparent)]
    Polynomial(#[from] WpsError),
    #[error(transparent)]
    Mld(#[from] MldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// All derived data of `X_n ⊂ P(a_0, …, a_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub n: usize,
    pub parity: Parity,
    #[serde(serialize_with = "serde_dec::int")]
    pub s_n: BigInt,
    #[serde(rename = "weights", serialize_with = "serde_dec::ints")]
    pub a: Vec<BigInt>,
    #[serde(serialize_with = "serde_dec::int")]
    pub d: BigInt,
    #[serde(serialize_with = "serde_dec::int")]
    pub b: BigInt,
    #[serde(serialize_with = "serde_dec::int")]
    pub c: BigInt,
    #[serde(serialize_with = "serde_dec::int")]
    pub r: BigInt,
    #[serde(serialize_with = "serde_dec::display")]
    pub equation: WeightedPolynomial,
}

fn divide(numer: &BigInt, denom: i64, quantity: &'static str) -> Result<BigInt, FamilyError> {
    exact_div(numer, &BigInt::from(denom)).ok_or(FamilyError::InexactDivision { quantity })
}

/// Builds `X_n`; every division in the defining formulas must be exact.
pub fn build_family(n: usize) -> Result<FamilyMember, FamilyError> {
    if n < 2 {
        return Err(FamilyError::DimensionTooSmall(n));
    }
    let s = sylvester(n);
    let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    let (a_n, a_last, b, c) = match parity {
        Parity::Even => {
            let a_n = divide(&(&s * &s + &s - 4), 4, "a_n")?;
            let a_last = divide(&((&s - 1) * &a_n - &s - 1), 2, "a_(n+1)")?;
            let b = divide(&(&s * &s - &s - 4), 2, "b")?;
            let c = divide(&(&s + 3), 2, "c")?;
            (a_n, a_last, b, c)
        }
        Parity::Odd => {
            let a_n = divide(&(&s * &s + 3 * &s - 6), 4, "a_n")?;
            let a_last = divide(&((&s - 3) * &a_n - &s - 1), 4, "a_(n+1)")?;
            let b = divide(&(&s * &s - &s - 2), 4, "b")?;
            let c = divide(&(&s + 5), 2, "c")?;
            (a_n, a_last, b, c)
        }
    };
    let r = &a_n + &a_last - 1;
    let d = &r * (&s - 1);
    let mut a = Vec::with_capacity(n + 2);
    for i in 0..n {
        a.push(exact_div(&d, &sylvester(i)).ok_or(FamilyError::InexactDivision { quantity: "a_i = d/s_i" })?);
    }
    a.push(a_n);
    a.push(a_last);
    let equation = family_equation(n, parity, &a, &b, &c)?;
    Ok(FamilyMember { n, parity, s_n: s, a, d, b, c, r, equation })
}

fn family_equation(
    n: usize,
    parity: Parity,
    a: &[BigInt],
    b: &BigInt,
    c: &BigInt,
) -> Result<WeightedPolynomial, FamilyError> {
    let nv = n + 2;
    let mut monomials = Vec::with_capacity(n + 2);
    for i in 0..n {
        let mut e = vec![BigInt::zero(); nv];
        e[i] = sylvester(i);
        monomials.push(Monomial::new(e));
    }
    let mut e = vec![BigInt::zero(); nv];
    e[n] = b.clone();
    e[n + 1] = BigInt::one();
    monomials.push(Monomial::new(e));
    let mut e = vec![BigInt::zero(); nv];
    for x in e.iter_mut().take(n).skip(1) {
        *x = BigInt::one();
    }
    e[n] = BigInt::from(match parity {
        Parity::Even => 1,
        Parity::Odd => 2,
    });
    e[n + 1] = c.clone();
    monomials.push(Monomial::new(e));
    Ok(WeightedPolynomial::new(WeightVector::new(a.to_vec())?, monomials, None)?)
}

impl FamilyMember {
    pub fn a_n(&self) -> &BigInt {
        &self.a[self.n]
    }

    /// `a_{n+1}`, the order of the group at the non-quasismooth point.
    pub fn a_last(&self) -> &BigInt {
        &self.a[self.n + 1]
    }

    /// The chart `x_{n+1} = 1` around the non-quasismooth point.
    pub fn chart(&self) -> Result<WeightedPolynomial, FamilyError> {
        Ok(affine_chart(&self.equation, self.n + 1)?)
    }

    /// The `μ_{a_{n+1}}` quotient engine on [`FamilyMember::chart`].
    pub fn engine(&self) -> Result<HypersurfaceEngine, FamilyError> {
        Ok(HypersurfaceEngine::new(self.chart()?, self.a_last().clone(), self.a[..=self.n].to_vec())?)
    }

    /// The group index where the mld is attained.
    pub fn j0(&self) -> BigInt {
        match self.parity {
            Parity::Even => (&self.s_n - 1) / 2,
            Parity::Odd => (&self.s_n - 3) / 4,
        }
    }
}

/// Outcome of a batch of exact identity checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Verification {
    fn from_checks(checks: Vec<(bool, String)>) -> Self {
        let failures: Vec<String> = checks.into_iter().filter(|(ok, _)| !ok).map(|(_, msg)| msg).collect();
        Verification { passed: failures.is_empty(), failures }
    }
}

/// Weight sum, homogeneity, and the two degree identities behind the last
/// two monomials.
pub fn verify_degree_identities(f: &FamilyMember) -> Verification {
    let n = f.n;
    let a = &f.a;
    let sum: BigInt = a.iter().sum();
    let homogeneous = WeightVector::new(a.clone())
        .ok()
        .and_then(|w| WeightedPolynomial::new(w, f.equation.monomials().to_vec(), None).ok())
        .and_then(|p| homogeneous_degree(&p));
    let tail: BigInt = match f.parity {
        Parity::Even => a[1..=n].iter().sum(),
        Parity::Odd => a[1..n].iter().sum::<BigInt>() + 2 * &a[n],
    };
    Verification::from_checks(vec![
        (sum == &f.d + 1, format!("sum of weights {sum} != d + 1 = {}", &f.d + 1)),
        (homogeneous.as_ref() == Some(&f.d), format!("equation is not homogeneous of degree d = {}", f.d)),
        (&f.d - &a[n + 1] == &f.b * &a[n], "d - a_(n+1) != b a_n".to_string()),
        (&f.d - &tail == &f.c * &a[n + 1], "d - (last monomial without x_(n+1)) != c a_(n+1)".to_string()),
    ])
}

/// Coprimality of `a_{n+1}` and `a_n` with the other weights, well-formedness
/// and oddness of `a_n`, `a_{n+1}`.
pub fn verify_gcd_lemma(f: &FamilyMember) -> Verification {
    let n = f.n;
    let mut checks = Vec::new();
    for i in 0..=n {
        checks.push((f.a[i].gcd(f.a_last()).is_one(), format!("gcd(a_{i}, a_(n+1)) != 1")));
    }
    for i in 0..n {
        checks.push((f.a[i].gcd(f.a_n()).is_one(), format!("gcd(a_{i}, a_n) != 1")));
    }
    let well_formed = WeightVector::new(f.a.clone()).map(|w| is_well_formed(&w)).unwrap_or(false);
    checks.push((well_formed, "weights are not well-formed".to_string()));
    checks.push((f.a_n().is_odd(), "a_n is even".to_string()));
    checks.push((f.a_last().is_odd(), "a_(n+1) is even".to_string()));
    Verification::from_checks(checks)
}

/// The only suspect coordinate point is the one of `x_{n+1}`.
pub fn verify_quasismooth_pattern(f: &FamilyMember) -> bool {
    let report = quasismooth_coordinate_report(&f.equation);
    report.iter().enumerate().all(|(i, s)| (i == f.n + 1) == (*s == CoordinateStatus::Suspect))
}

/// `(s_n − 1)/(2 a_{n+1})` for even `n`, `(s_n − 3)/(4 a_{n+1})` for odd `n`.
pub fn closed_form_mld(f: &FamilyMember) -> Rational {
    match f.parity {
        Parity::Even => Rational::new(&f.s_n - 1, 2 * f.a_last()),
        Parity::Odd => Rational::new(&f.s_n - 3, 4 * f.a_last()),
    }
}

/// The same value written in `s_n` alone: `4(s−1)/(s³ − 9s)` or
/// `4(s−3)/(s³ − 19s + 14)`.
pub fn sequence_form_mld(f: &FamilyMember) -> Rational {
    let s = &f.s_n;
    let cube = s * s * s;
    match f.parity {
        Parity::Even => Rational::new(4 * (s - 1), cube - 9 * s),
        Parity::Odd => Rational::new(4 * (s - 3), cube - 19 * s + 14),
    }
}

pub fn verify_mld_identity(f: &FamilyMember) -> bool {
    closed_form_mld(f) == sequence_form_mld(f)
}

/// `|mld · s_n²/4 − 1| ≤ 3/s_n`.
pub fn verify_asymptotic_bound(f: &FamilyMember) -> bool {
    let s = Rational::from_integer(f.s_n.clone());
    let scaled = closed_form_mld(f) * &s * &s / Rational::from(4);
    (scaled - Rational::one()).abs() <= Rational::from(3) / s
}

/// The mld at the non-quasismooth point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonQuasismoothReport {
    #[serde(serialize_with = "serde_dec::int")]
    pub j0: BigInt,
    /// `β_{j0}(x_0⋯x_n) − β_{j0}(f)`.
    pub witness_value: Rational,
    pub witness_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_scan: Option<MldResult>,
    /// Scan value equals the closed form and its witness is `j0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_scan_ok: Option<bool>,
}

impl NonQuasismoothReport {
    pub fn passed(&self) -> bool {
        self.witness_ok && self.full_scan_ok.unwrap_or(true)
    }
}

/// Evaluates the chart at `β_{j0}`; with a budget, also scans every
/// `1 ≤ j < a_{n+1}`.
pub fn mld_nonquasismooth(
    f: &FamilyMember,
    budget: Option<u64>,
    options: &ScanOptions,
) -> Result<NonQuasismoothReport, FamilyError> {
    let engine = f.engine()?;
    let expected = closed_form_mld(f);
    let j0 = f.j0();
    let witness_value = engine.value(&engine.beta(&j0));
    let witness_ok = witness_value == expected;
    let (full_scan, full_scan_ok) = match budget {
        None => (None, None),
        Some(budget) => {
            if f.a_last().to_u64().is_none_or(|r| r > budget) {
                return Err(FamilyError::BudgetExceeded { order: f.a_last().clone(), budget });
            }
            let result = engine.scan(options)?;
            let ok = result.value.finite() == Some(&expected) && result.witness_index() == Some(&j0);
            (Some(result), Some(ok))
        }
    };
    Ok(NonQuasismoothReport { j0, witness_value, witness_ok, full_scan, full_scan_ok })
}

/// A one-dimensional toric stratum `{x_{i1}, x_{i2} ≠ 0}` with `i1 < i2 < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumDatum {
    pub pair: (usize, usize),
    /// `gcd(a_{i1}, a_{i2})`.
    #[serde(serialize_with = "serde_dec::int")]
    pub g: BigInt,
    /// `g / r` when `r | g`.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_int")]
    pub m: Option<BigInt>,
}

fn opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

pub fn strata(f: &FamilyMember) -> Vec<StratumDatum> {
    let mut out = Vec::new();
    for i1 in 0..f.n {
        for i2 in (i1 + 1)..f.n {
            let g = f.a[i1].gcd(&f.a[i2]);
            let m = exact_div(&g, &f.r);
            out.push(StratumDatum { pair: (i1, i2), g, m });
        }
    }
    out
}

/// How a check over a range of group indices was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// Every index was visited.
    Enumeration,
    /// Coprimality makes every term at least `1/a_n`.
    Coprimality,
    /// The criterion is linear on each of its two pieces; only the left
    /// endpoints were evaluated.
    PiecewiseEndpoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinatePointCheck {
    pub method: CheckMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mld: Option<MldResult>,
    /// `n / a_n`.
    pub bound: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumCheck {
    pub datum: StratumDatum,
    /// The criterion is checked for `1 ≤ j < j_limit = ⌈2g/a_n⌉`.
    #[serde(serialize_with = "serde_dec::int")]
    pub j_limit: BigInt,
    pub method: CheckMethod,
    /// `g = m r` with `m | s_n − 1` and `m ≤ (s_n − 1)/6`.
    pub shape_ok: bool,
    pub criterion_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OtherPointsReport {
    pub coordinate_point: CoordinatePointCheck,
    pub strata: Vec<StratumCheck>,
    /// `2/a_n`.
    pub lower_bound: Rational,
    /// `2/a_n` exceeds the mld at the non-quasismooth point.
    pub comparison_ok: bool,
    pub passed: bool,
}

/// `j a_n mod g > j`, i.e. `{j a_n / g} > j / g`, at one index.
fn stratum_criterion_at(j: &BigInt, a_n: &BigInt, g: &BigInt) -> bool {
    (j * a_n).mod_floor(g) > *j
}

fn check_stratum(f: &FamilyMember, datum: StratumDatum, budget: u64) -> StratumCheck {
    let a_n = f.a_n();
    let g = &datum.g;
    let j_limit = Integer::div_ceil(&(2 * g), a_n);
    let s1: BigInt = &f.s_n - 1;
    let shape_ok = match &datum.m {
        Some(m) => m.is_positive() && s1.is_multiple_of(m) && 6 * m <= s1,
        None => false,
    };
    let count: BigInt = &j_limit - 1;
    let enumerate = count.to_u64().is_some_and(|c| c <= budget);
    let (method, criterion_ok) = match (enumerate, g.to_u64(), a_n.to_u64()) {
        (true, Some(g64), Some(an64)) => {
            let limit = j_limit.to_u64().expect("bounded by budget");
            let ok = (1..limit).all(|j| ((j as u128 * an64 as u128) % g64 as u128) > j as u128);
            (CheckMethod::Enumeration, ok)
        }
        _ => {
            // j a_n < 2g on the whole range, so {j a_n/g} − j/g is
            // (j(a_n − 1) − k g)/g with k ∈ {0, 1}; increasing in j on each
            // piece, so its left endpoints j = 1 and j = ⌈g/a_n⌉ decide.
            let mut endpoints = vec![BigInt::one()];
            let jump = Integer::div_ceil(g, a_n);
            if jump < j_limit {
                endpoints.push(jump);
            }
            let ok = a_n > &BigInt::one()
                && endpoints.iter().filter(|j| **j < j_limit).all(|j| stratum_criterion_at(j, a_n, g));
            (CheckMethod::PiecewiseEndpoints, ok)
        }
    };
    StratumCheck { datum, j_limit, method, shape_ok, criterion_ok }
}

/// Lower bound `mld(X ∖ x) ≥ 2/a_n` away from the non-quasismooth point.
///
/// Ranges of at most `budget` indices are enumerated; larger ones use the
/// coprimality and piecewise-linear shortcuts recorded in [`CheckMethod`].
pub fn verify_other_points(
    f: &FamilyMember,
    budget: u64,
    options: &ScanOptions,
) -> Result<OtherPointsReport, FamilyError> {
    let n = f.n;
    let a_n = f.a_n();
    let bound = Rational::new(n as i64, a_n.clone());
    let coordinate_point = if a_n.to_u64().is_some_and(|x| x <= budget) {
        let q = QuotientSingularity::new(a_n.clone(), f.a[..n].to_vec())?;
        let mld = cyclic_quotient_mld(&q, options)?;
        let ok = mld.value.finite().is_some_and(|v| *v >= bound);
        CoordinatePointCheck { method: CheckMethod::Enumeration, mld: Some(mld), bound, ok }
    } else {
        let ok = f.a[..n].iter().all(|x| x.gcd(a_n).is_one());
        CoordinatePointCheck { method: CheckMethod::Coprimality, mld: None, bound, ok }
    };
    let strata: Vec<StratumCheck> =
        strata(f).into_iter().filter(|s| s.g > BigInt::one()).map(|s| check_stratum(f, s, budget)).collect();
    let lower_bound = Rational::new(2, a_n.clone());
    let comparison_ok = lower_bound > closed_form_mld(f);
    let passed = coordinate_point.ok && comparison_ok && strata.iter().all(|s| s.shape_ok && s.criterion_ok);
    Ok(OtherPointsReport { coordinate_point, strata, lower_bound, comparison_ok, passed })
}
