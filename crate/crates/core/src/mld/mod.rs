//! Minimal log discrepancies of cyclic quotient singularities and of
//! Newton non-degenerate hypersurface quotients.
//!
//! Both engines reduce to a finite candidate set. For `1/r(b_1, …, b_s)` the
//! candidates are the group elements `j = 1, …, r-1` with value
//! `Σ_i {j b_i / r}`, capped at 1. For a hypersurface chart `f` in
//! `A^{n+1}/μ_r` acting with weights `a_i`, the candidates are the basis
//! vectors `e_i` and the points `β_j = ({j a_0/r}, …, {j a_n/r})`, each
//! valued at `β(x_0⋯x_n) − β(f)`.

mod scan;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use scan::{ProgressFn, ScanOptions};

use crate::exact::{gcd_all, Rational};
use crate::serde_dec;
use crate::wps::WeightedPolynomial;
use scan::Kernel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MldError {
    #[error("group order must be positive, got {0}")]
    NonPositiveOrder(BigInt),
    #[error("1/{order}(…) is not well-formed: gcd of the order and all weights except b_{index} is {gcd}")]
    NotWellFormed { order: BigInt, index: usize, gcd: BigInt },
    #[error("variable x{0} divides every monomial of the chart")]
    VariableDividesAll(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("group order {0} is too large to enumerate")]
    OrderTooLarge(BigInt),
}

/// `1/r(b_1, …, b_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientSingularity {
    #[serde(serialize_with = "serde_dec::int")]
    order: BigInt,
    #[serde(serialize_with = "serde_dec::ints")]
    weights: Vec<BigInt>,
}

impl QuotientSingularity {
    /// Rejects data that is not well-formed, i.e. where some
    /// `gcd(r, b_1, …, b̂_i, …, b_s)` exceeds 1.
    pub fn new(order: BigInt, weights: Vec<BigInt>) -> Result<Self, MldError> {
        if !order.is_positive() {
            return Err(MldError::NonPositiveOrder(order));
        }
        for index in 0..weights.len() {
            let g = gcd_all(
                std::iter::once(&order).chain(weights.iter().enumerate().filter(|(k, _)| *k != index).map(|(_, b)| b)),
            );
            if !g.is_one() {
                return Err(MldError::NotWellFormed { order, index, gcd: g });
            }
        }
        if weights.is_empty() && !order.is_one() {
            return Err(MldError::NotWellFormed { order: order.clone(), index: 0, gcd: order });
        }
        Ok(QuotientSingularity { order, weights })
    }

    pub fn from_u64s(order: u64, weights: &[u64]) -> Result<Self, MldError> {
        Self::new(BigInt::from(order), weights.iter().map(|&b| BigInt::from(b)).collect())
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }
}

/// Where a lattice point came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// The standard basis vector `e_i`.
    Basis(usize),
    /// The group element `j`, i.e. the point `β_j`.
    Group(#[serde(serialize_with = "serde_dec::int")] BigInt),
}

/// A point `β` of the lattice `N`, with coordinates in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePoint {
    pub coordinates: Vec<Rational>,
    pub source: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MldValue {
    Finite(Rational),
    NegativeInfinity,
}

impl MldValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MldValue::Finite(q) => Some(q),
            MldValue::NegativeInfinity => None,
        }
    }
}

impl std::fmt::Display for MldValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MldValue::Finite(q) => write!(f, "{q}"),
            MldValue::NegativeInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for MldValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Singularity class implied by the mld. Terminal and canonical are not
/// distinguished from klt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Klt,
    LcNotKlt,
    NotLc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MldResult {
    pub value: MldValue,
    /// Absent when a quotient singularity's mld is the cap 1.
    pub witness: Option<Witness>,
    pub classification: Classification,
    /// The non-degeneracy of the chart is assumed, never checked.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub assumes_non_degenerate: bool,
}

impl MldResult {
    fn finite(value: Rational, witness: Option<Witness>, assumes_non_degenerate: bool) -> Self {
        let classification = if value.is_positive() {
            Classification::Klt
        } else if value.is_zero() {
            Classification::LcNotKlt
        } else {
            Classification::NotLc
        };
        let value = if value.is_negative() { MldValue::NegativeInfinity } else { MldValue::Finite(value) };
        MldResult { value, witness, classification, assumes_non_degenerate }
    }

    fn not_lc(witness: Witness, assumes_non_degenerate: bool) -> Self {
        MldResult {
            value: MldValue::NegativeInfinity,
            witness: Some(witness),
            classification: Classification::NotLc,
            assumes_non_degenerate,
        }
    }

    pub fn witness_index(&self) -> Option<&BigInt> {
        match &self.witness {
            Some(Witness::Group(j)) => Some(j),
            _ => None,
        }
    }
}

fn order_fits(order: &BigInt) -> Result<(), MldError> {
    if crate::exact::to_u64(order).is_none() {
        return Err(MldError::OrderTooLarge(order.clone()));
    }
    Ok(())
}

/// `min(1, min_{1≤j<r} Σ_i {j b_i / r})`, smallest `j` on ties.
pub fn cyclic_quotient_mld(q: &QuotientSingularity, options: &ScanOptions) -> Result<MldResult, MldError> {
    order_fits(&q.order)?;
    let kernel = Kernel::new(&q.order, &q.weights, &[]);
    let outcome = kernel.scan(options);
    let best = outcome.minimum.map(|(numer, j)| (Rational::new(numer, q.order.clone()), j)).filter(|(v, _)| *v < 1);
    Ok(match best {
        Some((v, j)) => MldResult::finite(v, Some(Witness::Group(BigInt::from(j))), false),
        None => MldResult::finite(Rational::one(), None, false),
    })
}

/// `β(x_0⋯x_n) − β(f)` with `β(f) = min_m Σ_i β^i m_i`.
pub fn lattice_value(beta: &LatticePoint, chart: &WeightedPolynomial) -> Result<Rational, MldError> {
    let n = chart.num_vars();
    if beta.coordinates.len() != n {
        return Err(MldError::DimensionMismatch { expected: n, found: beta.coordinates.len() });
    }
    let total: Rational = beta.coordinates.iter().sum();
    let min = chart
        .monomials()
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .zip(&beta.coordinates)
                .filter(|(e, _)| !e.is_zero())
                .map(|(e, b)| b * &Rational::from_integer(e.clone()))
                .sum::<Rational>()
        })
        .min()
        .expect("polynomials have at least one monomial");
    Ok(total - min)
}

/// A chart `f ⊂ A^{n+1}` with a `μ_r` action of weights `a_0, …, a_n`.
#[derive(Debug, Clone)]
pub struct HypersurfaceEngine {
    chart: WeightedPolynomial,
    order: BigInt,
    weights: Vec<BigInt>,
}

impl HypersurfaceEngine {
    pub fn new(chart: WeightedPolynomial, order: BigInt, weights: Vec<BigInt>) -> Result<Self, MldError> {
        if !order.is_positive() {
            return Err(MldError::NonPositiveOrder(order));
        }
        if weights.len() != chart.num_vars() {
            return Err(MldError::DimensionMismatch { expected: chart.num_vars(), found: weights.len() });
        }
        if let Some(i) = chart.common_variable() {
            return Err(MldError::VariableDividesAll(i));
        }
        Ok(HypersurfaceEngine { chart, order, weights })
    }

    pub fn chart(&self) -> &WeightedPolynomial {
        &self.chart
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    /// `β_j = ({j a_0 / r}, …, {j a_n / r})`.
    pub fn beta(&self, j: &BigInt) -> LatticePoint {
        let coordinates =
            self.weights.iter().map(|a| Rational::new((j * a).mod_floor(&self.order), self.order.clone())).collect();
        LatticePoint { coordinates, source: Witness::Group(j.clone()) }
    }

    pub fn basis(&self, i: usize) -> LatticePoint {
        let coordinates =
            (0..self.weights.len()).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect();
        LatticePoint { coordinates, source: Witness::Basis(i) }
    }

    pub fn value(&self, point: &LatticePoint) -> Rational {
        lattice_value(point, &self.chart).expect("engine points match the chart dimension")
    }

    /// Value at `β_j` through the integer kernel; equal to `value(&beta(j))`.
    pub fn value_at(&self, j: &BigInt) -> Rational {
        let kernel = self.kernel();
        Rational::new(kernel.numerator_at(j), self.order.clone())
    }

    /// Whether the full scan runs on machine words.
    pub fn uses_word_path(&self) -> bool {
        self.kernel().uses_word_path()
    }

    fn kernel(&self) -> Kernel {
        let monomials: Vec<Vec<BigInt>> = self.chart.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        Kernel::new(&self.order, &self.weights, &monomials)
    }

    /// Minimizes over `{e_0, …, e_n} ∪ {β_j : 1 ≤ j < r}`.
    ///
    /// Ties go to the smallest `j`; a basis vector wins only when strictly
    /// smaller than every `β_j`. Any negative candidate means not lc.
    pub fn scan(&self, options: &ScanOptions) -> Result<MldResult, MldError> {
        order_fits(&self.order)?;
        let mut basis_best: Option<(Rational, usize)> = None;
        for i in 0..self.weights.len() {
            let v = self.value(&self.basis(i));
            if v.is_negative() {
                return Ok(MldResult::not_lc(Witness::Basis(i), true));
            }
            if basis_best.as_ref().is_none_or(|(b, _)| v < *b) {
                basis_best = Some((v, i));
            }
        }
        let outcome = self.kernel().scan(options);
        if let Some((_, j)) = outcome.first_negative {
            return Ok(MldResult::not_lc(Witness::Group(BigInt::from(j)), true));
        }
        let group_best = outcome.minimum.map(|(numer, j)| (Rational::new(numer, self.order.clone()), j));
        let (value, witness) = match (group_best, basis_best) {
            (Some((gv, j)), Some((bv, i))) => {
                if bv < gv {
                    (bv, Witness::Basis(i))
                } else {
                    (gv, Witness::Group(BigInt::from(j)))
                }
            }
            (Some((gv, j)), None) => (gv, Witness::Group(BigInt::from(j))),
            (None, Some((bv, i))) => (bv, Witness::Basis(i)),
            (None, None) => unreachable!("charts have at least one variable"),
        };
        Ok(MldResult::finite(value, Some(witness), true))
    }
}

/// Builds a [`HypersurfaceEngine`] and scans it.
pub fn hypersurface_quotient_mld(
    chart: &WeightedPolynomial,
    order: &BigInt,
    weights: &[BigInt],
    options: &ScanOptions,
) -> Result<MldResult, MldError> {
    HypersurfaceEngine::new(chart.clone(), order.clone(), weights.to_vec())?.scan(options)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::wps::{Monomial, WeightVector};
    use proptest::prelude::*;

    fn poly(weights: &[u64], monomials: &[&[u64]]) -> WeightedPolynomial {
        WeightedPolynomial::new(
            WeightVector::from_u64s(weights).unwrap(),
            monomials.iter().map(|m| Monomial::from_u64s(m)).collect(),
            None,
        )
        .unwrap()
    }

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Walks the cyclic subgroup of `(R/Z)^s` generated by `b/r` as a set of
    /// points of the unit cube, never indexing by `j`.
    fn unit_cube_oracle(r: u64, b: &[u64]) -> Rational {
        let generator: Vec<Rational> = b.iter().map(|&x| Rational::new(x as i64, r as i64).frac()).collect();
        let origin = vec![Rational::zero(); b.len()];
        let mut seen: HashSet<Vec<Rational>> = HashSet::new();
        let mut p = generator.clone();
        while p != origin && seen.insert(p.clone()) {
            p = p.iter().zip(&generator).map(|(x, g)| (x + g).frac()).collect();
        }
        seen.iter().map(|pt| pt.iter().sum::<Rational>()).fold(Rational::one(), Rational::min)
    }

    #[test]
    fn quotient_examples() {
        let opts = ScanOptions::default();
        let r = cyclic_quotient_mld(&QuotientSingularity::from_u64s(13, &[141, 94]).unwrap(), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(q(5, 13)));
        assert_eq!(r.witness, Some(Witness::Group(BigInt::from(5))));
        assert_eq!(r.classification, Classification::Klt);
        let same = cyclic_quotient_mld(&QuotientSingularity::from_u64s(13, &[11, 3]).unwrap(), &opts).unwrap();
        assert_eq!(same, r);

        let smooth = cyclic_quotient_mld(&QuotientSingularity::from_u64s(1, &[]).unwrap(), &opts).unwrap();
        assert_eq!(smooth.value, MldValue::Finite(Rational::one()));
        assert_eq!(smooth.witness, None);

        let r = cyclic_quotient_mld(&QuotientSingularity::from_u64s(5, &[1, 2]).unwrap(), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(q(3, 5)));
        assert_eq!(r.witness, Some(Witness::Group(BigInt::one())));

        // 1/2(1,1): j = 1 gives exactly 1, which is the cap
        let r = cyclic_quotient_mld(&QuotientSingularity::from_u64s(2, &[1, 1]).unwrap(), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(Rational::one()));
        assert_eq!(r.witness, None);
    }

    #[test]
    fn quotient_rejects_ill_formed() {
        let err = QuotientSingularity::from_u64s(4, &[2, 2]).unwrap_err();
        assert!(matches!(err, MldError::NotWellFormed { index: 0, .. }));
        assert!(QuotientSingularity::from_u64s(0, &[1]).is_err());
        assert!(QuotientSingularity::from_u64s(3, &[]).is_err());
    }

    #[test]
    fn hypersurface_examples() {
        let opts = ScanOptions::default();
        let chart = poly(&[141, 94, 13], &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 19], &[0, 1, 1]]);
        let r = hypersurface_quotient_mld(&chart, &BigInt::from(35), &ints(&[141, 94, 13]), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(q(3, 35)));
        assert_eq!(r.witness, Some(Witness::Group(BigInt::from(3))));

        let chart = poly(
            &[113631, 75754, 32466, 493],
            &[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 7, 0], &[0, 0, 0, 451], &[0, 1, 1, 2]],
        );
        let r =
            hypersurface_quotient_mld(&chart, &BigInt::from(4919), &ints(&[113631, 75754, 32466, 493]), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(q(10, 4919)));
        assert_eq!(r.witness, Some(Witness::Group(BigInt::from(10))));

        let odp = poly(&[1, 1, 1], &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let r = hypersurface_quotient_mld(&odp, &BigInt::one(), &ints(&[1, 1, 1]), &opts).unwrap();
        assert_eq!(r.value, MldValue::Finite(Rational::one()));
        assert_eq!(r.witness, Some(Witness::Basis(0)));
    }

    /// Minimum of the valuation difference over every integral point of a
    /// small box, excluding the origin.
    fn small_box_oracle(chart: &WeightedPolynomial, side: u64) -> Rational {
        let n = chart.num_vars();
        let mut best: Option<Rational> = None;
        let mut idx = vec![0u64; n];
        loop {
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] <= side {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            let point = LatticePoint {
                coordinates: idx.iter().map(|&x| Rational::from(x as i64)).collect(),
                source: Witness::Basis(0),
            };
            let v = lattice_value(&point, chart).unwrap();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        best.unwrap()
    }

    #[test]
    fn odp_matches_box_oracle() {
        let odp = poly(&[1, 1, 1], &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        assert_eq!(small_box_oracle(&odp, 2), Rational::one());
        let ones = LatticePoint { coordinates: vec![Rational::one(); 3], source: Witness::Basis(0) };
        assert_eq!(lattice_value(&ones, &odp).unwrap(), Rational::one());
    }

    #[test]
    fn lattice_values() {
        let chart = poly(&[141, 94, 13], &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 19], &[0, 1, 1]]);
        let engine = HypersurfaceEngine::new(chart.clone(), BigInt::from(35), ints(&[141, 94, 13])).unwrap();
        let b3 = engine.beta(&BigInt::from(3));
        assert_eq!(b3.coordinates, vec![q(3, 35), q(2, 35), q(4, 35)]);
        assert_eq!(engine.value(&b3), q(3, 35));
        assert_eq!(engine.value(&engine.basis(0)), Rational::one());
        for j in 1..35 {
            let j = BigInt::from(j);
            assert_eq!(engine.value_at(&j), engine.value(&engine.beta(&j)));
        }
        let short = LatticePoint { coordinates: vec![Rational::one()], source: Witness::Basis(0) };
        assert!(matches!(lattice_value(&short, &chart), Err(MldError::DimensionMismatch { .. })));
    }

    #[test]
    fn engine_preconditions() {
        let chart = poly(&[1, 1, 1], &[&[1, 1, 0], &[1, 0, 1]]);
        let err = HypersurfaceEngine::new(chart, BigInt::one(), ints(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, MldError::VariableDividesAll(0));
        let chart = poly(&[1, 1], &[&[2, 0], &[0, 2]]);
        assert!(HypersurfaceEngine::new(chart, BigInt::one(), ints(&[1])).is_err());
    }

    #[test]
    fn log_canonical_classes() {
        let opts = ScanOptions::default();
        // x0^3 + x1^3 + x2^3: the cone over an elliptic curve, lc but not klt
        let cone = poly(&[1, 1, 1], &[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        let mut engine = HypersurfaceEngine::new(cone, BigInt::from(3), ints(&[1, 1, 1])).unwrap();
        let r = engine.scan(&opts).unwrap();
        assert_eq!(r.classification, Classification::LcNotKlt);
        assert_eq!(r.value, MldValue::Finite(Rational::zero()));
        assert_eq!(r.witness, Some(Witness::Group(BigInt::one())));

        // x0^4 + x1^4 + x2^4 with β_1 = (1/4, 1/4, 1/4): 3/4 - 1 < 0
        engine = HypersurfaceEngine::new(
            poly(&[1, 1, 1], &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]),
            BigInt::from(4),
            ints(&[1, 1, 1]),
        )
        .unwrap();
        let r = engine.scan(&ScanOptions::with_workers(3)).unwrap();
        assert_eq!(r.classification, Classification::NotLc);
        assert_eq!(r.value, MldValue::NegativeInfinity);
        assert_eq!(r.witness, Some(Witness::Group(BigInt::one())));
    }

    fn arb_quotient() -> impl Strategy<Value = (u64, Vec<u64>)> {
        (2u64..=500, prop::collection::vec(0u64..1000, 1..=4))
            .prop_filter_map("well-formed", |(r, b)| QuotientSingularity::from_u64s(r, &b).ok().map(|_| (r, b)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn quotient_matches_unit_cube_oracle((r, b) in arb_quotient()) {
            let qs = QuotientSingularity::from_u64s(r, &b).unwrap();
            let got = cyclic_quotient_mld(&qs, &ScanOptions::default()).unwrap();
            prop_assert_eq!(got.value.finite().cloned(), Some(unit_cube_oracle(r, &b)));
            prop_assert!(got.value.finite().unwrap().is_positive());
            prop_assert!(*got.value.finite().unwrap() <= 1);
        }

        #[test]
        fn workers_do_not_change_results((r, b) in arb_quotient(), workers in 2usize..6) {
            let qs = QuotientSingularity::from_u64s(r, &b).unwrap();
            prop_assert_eq!(
                cyclic_quotient_mld(&qs, &ScanOptions::default()).unwrap(),
                cyclic_quotient_mld(&qs, &ScanOptions::with_workers(workers)).unwrap()
            );
        }
    }
}
