//! Weighted projective spaces and weighted-homogeneous polynomials.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact::{gcd_all, Rational};
use crate::lp::{self, LpOutcome};
use crate::serde_dec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WpsError {
    #[error("weight {index} is {value}; weights must be positive")]
    NonPositiveWeight { index: usize, value: BigInt },
    #[error("monomial {index} has {found} exponents, expected {expected}")]
    LengthMismatch { index: usize, expected: usize, found: usize },
    #[error("monomial {index} has a negative exponent")]
    NegativeExponent { index: usize },
    #[error("duplicate monomial {0}")]
    DuplicateMonomial(String),
    #[error("a polynomial needs at least one monomial")]
    NoMonomials,
    #[error("a polynomial needs at least one variable")]
    NoVariables,
    #[error("coefficient list has {found} entries for {expected} monomials")]
    CoefficientCount { expected: usize, found: usize },
    #[error("coefficient of monomial {0} is zero")]
    ZeroCoefficient(usize),
    #[error("variable index {index} out of range for {count} variables")]
    VariableOutOfRange { index: usize, count: usize },
    #[error("chart line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Weights `(c_0, …, c_n)` of a weighted projective space; all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WeightVector(#[serde(serialize_with = "serde_dec::ints")] Vec<BigInt>);

impl WeightVector {
    pub fn new(weights: Vec<BigInt>) -> Result<Self, WpsError> {
        if let Some((index, value)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(WpsError::NonPositiveWeight { index, value: value.clone() });
        }
        Ok(WeightVector(weights))
    }

    pub fn from_u64s(weights: &[u64]) -> Result<Self, WpsError> {
        Self::new(weights.iter().map(|&w| BigInt::from(w)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn without(&self, index: usize) -> WeightVector {
        let mut w = self.0.clone();
        w.remove(index);
        WeightVector(w)
    }
}

/// Exponent vector of a monomial `x^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Monomial(#[serde(serialize_with = "serde_dec::ints")] Vec<BigInt>);

impl Monomial {
    /// Panics on a negative exponent; use [`Monomial::try_new`] for untrusted input.
    pub fn new(exponents: Vec<BigInt>) -> Self {
        Self::try_new(exponents).expect("negative exponent")
    }

    pub fn try_new(exponents: Vec<BigInt>) -> Result<Self, WpsError> {
        if exponents.iter().any(|e| e.is_negative()) {
            return Err(WpsError::NegativeExponent { index: 0 });
        }
        Ok(Monomial(exponents))
    }

    pub fn from_u64s(exponents: &[u64]) -> Self {
        Monomial(exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn without(&self, index: usize) -> Monomial {
        let mut e = self.0.clone();
        e.remove(index);
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, e) in self.0.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if wrote {
                f.write_str("*")?;
            }
            if e.is_one() {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial given by its monomial support, optional coefficients and
/// the weights of its ambient space.
///
/// Coefficients are carried for bookkeeping only. Every combinatorial
/// operation treats the coefficients as general and nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedPolynomial {
    weights: WeightVector,
    monomials: Vec<Monomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<Rational>>,
}

impl WeightedPolynomial {
    pub fn new(
        weights: WeightVector,
        monomials: Vec<Monomial>,
        coefficients: Option<Vec<Rational>>,
    ) -> Result<Self, WpsError> {
        if weights.is_empty() {
            return Err(WpsError::NoVariables);
        }
        if monomials.is_empty() {
            return Err(WpsError::NoMonomials);
        }
        let mut seen = HashSet::new();
        for (index, m) in monomials.iter().enumerate() {
            if m.len() != weights.len() {
                return Err(WpsError::LengthMismatch { index, expected: weights.len(), found: m.len() });
            }
            if m.0.iter().any(|e| e.is_negative()) {
                return Err(WpsError::NegativeExponent { index });
            }
            if !seen.insert(m) {
                return Err(WpsError::DuplicateMonomial(m.to_string()));
            }
        }
        if let Some(c) = &coefficients {
            if c.len() != monomials.len() {
                return Err(WpsError::CoefficientCount { expected: monomials.len(), found: c.len() });
            }
            if let Some(i) = c.iter().position(Rational::is_zero) {
                return Err(WpsError::ZeroCoefficient(i));
            }
        }
        Ok(WeightedPolynomial { weights, monomials, coefficients })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn coefficients(&self) -> Option<&[Rational]> {
        self.coefficients.as_deref()
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    /// Index of a variable that divides every monomial, if any.
    pub fn common_variable(&self) -> Option<usize> {
        (0..self.num_vars()).find(|&i| self.monomials.iter().all(|m| !m.0[i].is_zero()))
    }

    /// Parses the line-oriented chart format.
    ///
    /// ```text
    /// # X_282 in the chart x3 = 1
    /// 141 94 13
    /// 2 0 0
    /// 0 3 0
    /// 0 0 19
    /// 0 1 1   5/2
    /// ```
    ///
    /// The first non-comment line lists the weights. Each later line is one
    /// exponent vector, optionally followed by a coefficient (`p` or `p/q`).
    /// Tokens may be separated by whitespace or commas; `#` starts a comment.
    pub fn parse_chart(text: &str) -> Result<Self, WpsError> {
        let mut weights: Option<WeightVector> = None;
        let mut monomials = Vec::new();
        let mut coefficients: Vec<Option<Rational>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> =
                content.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
            if tokens.is_empty() {
                continue;
            }
            let int = |t: &str| {
                t.parse::<BigInt>().map_err(|_| WpsError::Parse { line, message: format!("`{t}` is not an integer") })
            };
            match &weights {
                None => {
                    let w = tokens.iter().map(|t| int(t)).collect::<Result<Vec<_>, _>>()?;
                    weights = Some(WeightVector::new(w).map_err(|e| WpsError::Parse { line, message: e.to_string() })?);
                }
                Some(w) => {
                    let n = w.len();
                    if tokens.len() != n && tokens.len() != n + 1 {
                        return Err(WpsError::Parse {
                            line,
                            message: format!(
                                "expected {n} exponents and an optional coefficient, found {} tokens",
                                tokens.len()
                            ),
                        });
                    }
                    let exps = tokens[..n].iter().map(|t| int(t)).collect::<Result<Vec<_>, _>>()?;
                    let m = Monomial::try_new(exps)
                        .map_err(|_| WpsError::Parse { line, message: "negative exponent".into() })?;
                    let coef = match tokens.get(n) {
                        Some(t) => {
                            Some(t.parse::<Rational>().map_err(|e| WpsError::Parse { line, message: e.to_string() })?)
                        }
                        None => None,
                    };
                    monomials.push(m);
                    coefficients.push(coef);
                }
            }
        }
        let weights = weights.ok_or(WpsError::Parse { line: 0, message: "missing weight line".into() })?;
        let coefficients = if coefficients.iter().all(Option::is_none) {
            None
        } else {
            Some(coefficients.into_iter().map(|c| c.unwrap_or_else(Rational::one)).collect())
        };
        WeightedPolynomial::new(weights, monomials, coefficients)
    }

    /// Renders the chart format accepted by [`WeightedPolynomial::parse_chart`].
    pub fn to_chart_text(&self) -> String {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = join(self.weights.as_slice());
        out.push('\n');
        for (k, m) in self.monomials.iter().enumerate() {
            out.push_str(&join(&m.0));
            if let Some(c) = &self.coefficients {
                out.push(' ');
                out.push_str(&c[k].to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.monomials.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match &self.coefficients {
                Some(c) if c[k] != 1 => write!(f, "({})*{m}", c[k])?,
                _ => write!(f, "{m}")?,
            }
        }
        Ok(())
    }
}

/// True iff every leave-one-out gcd of the weights is 1.
pub fn is_well_formed(w: &WeightVector) -> bool {
    let weights = w.as_slice();
    (0..weights.len())
        .all(|skip| gcd_all(weights.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v)).is_one())
}

/// `Σ w_i m_i`.
pub fn weighted_degree(m: &Monomial, w: &WeightVector) -> Result<BigInt, WpsError> {
    if m.len() != w.len() {
        return Err(WpsError::LengthMismatch { index: 0, expected: w.len(), found: m.len() });
    }
    Ok(m.0.iter().zip(w.as_slice()).map(|(e, c)| e * c).sum())
}

/// The common weighted degree of all monomials, if there is one.
pub fn homogeneous_degree(p: &WeightedPolynomial) -> Option<BigInt> {
    let mut degrees =
        p.monomials.iter().map(|m| weighted_degree(m, &p.weights).expect("lengths checked at construction"));
    let first = degrees.next()?;
    degrees.all(|d| d == first).then_some(first)
}

/// Sets `x_index = 1`: drops that coordinate from every exponent vector and
/// from the weights. Monomials that collide keep their first copy.
pub fn affine_chart(p: &WeightedPolynomial, index: usize) -> Result<WeightedPolynomial, WpsError> {
    let count = p.num_vars();
    if index >= count {
        return Err(WpsError::VariableOutOfRange { index, count });
    }
    if count == 1 {
        return Err(WpsError::NoVariables);
    }
    let mut seen = HashSet::new();
    let mut monomials = Vec::new();
    let mut coefficients = p.coefficients.as_ref().map(|_| Vec::new());
    for (k, m) in p.monomials.iter().enumerate() {
        let reduced = m.without(index);
        if seen.insert(reduced.clone()) {
            monomials.push(reduced);
            if let (Some(out), Some(src)) = (coefficients.as_mut(), p.coefficients.as_ref()) {
                out.push(src[k].clone());
            }
        }
    }
    WeightedPolynomial::new(p.weights.without(index), monomials, coefficients)
}

/// Witness that `(1, …, 1)` sits `slack` deep inside the Newton polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonSlackCertificate {
    /// Largest `δ` such that some convex combination of exponent vectors has
    /// every coordinate `≤ 1 - δ`.
    pub slack: Rational,
    /// `(monomial index, λ)` pairs with `λ > 0`, summing to 1.
    pub combination: Vec<(usize, Rational)>,
    /// `Σ λ_k m_k`.
    pub point: Vec<Rational>,
}

impl NewtonSlackCertificate {
    pub fn is_interior(&self) -> bool {
        self.slack.is_positive()
    }

    /// Re-derives the point from the combination and checks every invariant.
    pub fn verify(&self, p: &WeightedPolynomial) -> bool {
        let total: Rational = self.combination.iter().map(|(_, l)| l).sum();
        if total != 1 || self.combination.iter().any(|(_, l)| l.is_negative()) {
            return false;
        }
        let Ok(point) = evaluate_combination(p, &self.combination) else {
            return false;
        };
        let bound = Rational::one() - &self.slack;
        point == self.point && point.iter().all(|c| *c <= bound)
    }
}

/// `Σ λ_k m_k` for the given `(monomial index, λ)` pairs.
pub fn evaluate_combination(
    p: &WeightedPolynomial,
    combination: &[(usize, Rational)],
) -> Result<Vec<Rational>, WpsError> {
    let mut point = vec![Rational::zero(); p.num_vars()];
    for (k, lambda) in combination {
        let m = p.monomials.get(*k).ok_or(WpsError::VariableOutOfRange { index: *k, count: p.monomials.len() })?;
        for (c, e) in point.iter_mut().zip(&m.0) {
            if !e.is_zero() {
                *c = &*c + &(lambda * &Rational::from_integer(e.clone()));
            }
        }
    }
    Ok(point)
}

/// Maximum depth of `(1, …, 1)` inside the Newton polyhedron, by exact LP.
///
/// Solves `min t` subject to `Σ λ_k m_k ≤ t·𝟙`, `Σ λ_k = 1`, `λ ≥ 0`; the
/// slack is `1 - t`. The point is interior iff the slack is positive.
pub fn newton_interior_slack(p: &WeightedPolynomial) -> NewtonSlackCertificate {
    let k = p.monomials.len();
    let nv = p.num_vars();
    // Columns: λ_0..λ_{k-1}, t, s_0..s_{nv-1}.
    let ncols = k + 1 + nv;
    let mut a = Vec::with_capacity(nv + 1);
    for i in 0..nv {
        let mut row = vec![Rational::zero(); ncols];
        for (col, m) in p.monomials.iter().enumerate() {
            row[col] = Rational::from_integer(m.0[i].clone());
        }
        row[k] = Rational::from(-1);
        row[k + 1 + i] = Rational::one();
        a.push(row);
    }
    let mut simplex_row = vec![Rational::zero(); ncols];
    for v in simplex_row.iter_mut().take(k) {
        *v = Rational::one();
    }
    a.push(simplex_row);
    let mut b = vec![Rational::zero(); nv];
    b.push(Rational::one());
    let mut cost = vec![Rational::zero(); ncols];
    cost[k] = Rational::one();

    let LpOutcome::Optimal { x, value } = lp::minimize(&cost, &a, &b) else {
        // t is bounded below by a coordinate of a convex combination of
        // non-negative vectors, and λ = e_0 is always feasible.
        unreachable!("Newton slack LP is always feasible and bounded");
    };
    let combination: Vec<(usize, Rational)> =
        x[..k].iter().enumerate().filter(|(_, l)| !l.is_zero()).map(|(i, l)| (i, l.clone())).collect();
    let point = evaluate_combination(p, &combination).expect("indices come from the LP");
    NewtonSlackCertificate { slack: Rational::one() - value, combination, point }
}

/// Status of a coordinate point `P_i` with respect to a general member of
/// the linear system spanned by the monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoordinateStatus {
    /// Some monomial is a pure power of `x_i`.
    NotOnX { monomial: usize },
    /// Some monomial is `x_i^k · x_j`, so `∂f/∂x_j` is nonzero at `P_i`.
    Quasismooth { monomial: usize, partner: usize },
    /// Neither criterion applies.
    Suspect,
}

/// Classifies every coordinate point. Only coordinate points are examined.
pub fn quasismooth_coordinate_report(p: &WeightedPolynomial) -> Vec<CoordinateStatus> {
    (0..p.num_vars())
        .map(|i| {
            let pure = p
                .monomials
                .iter()
                .position(|m| !m.0[i].is_zero() && m.0.iter().enumerate().all(|(j, e)| j == i || e.is_zero()));
            if let Some(monomial) = pure {
                return CoordinateStatus::NotOnX { monomial };
            }
            for (monomial, m) in p.monomials.iter().enumerate() {
                let others: Vec<usize> = (0..m.len()).filter(|&j| j != i && !m.0[j].is_zero()).collect();
                if let [partner] = others[..] {
                    if m.0[partner].is_one() {
                        return CoordinateStatus::Quasismooth { monomial, partner };
                    }
                }
            }
            CoordinateStatus::Suspect
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(weights: &[u64], monomials: &[&[u64]]) -> WeightedPolynomial {
        WeightedPolynomial::new(
            WeightVector::from_u64s(weights).unwrap(),
            monomials.iter().map(|m| Monomial::from_u64s(m)).collect(),
            None,
        )
        .unwrap()
    }

    fn x282() -> WeightedPolynomial {
        poly(&[141, 94, 13, 35], &[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 19, 1], &[0, 1, 1, 5]])
    }

    fn x227262() -> WeightedPolynomial {
        poly(
            &[113631, 75754, 32466, 493, 4919],
            &[&[2, 0, 0, 0, 0], &[0, 3, 0, 0, 0], &[0, 0, 7, 0, 0], &[0, 0, 0, 451, 1], &[0, 1, 1, 2, 24]],
        )
    }

    #[test]
    fn well_formedness() {
        assert!(is_well_formed(&WeightVector::from_u64s(&[141, 94, 13, 35]).unwrap()));
        // dropping the 1 leaves gcd(2, 2) = 2
        assert!(!is_well_formed(&WeightVector::from_u64s(&[2, 2, 1]).unwrap()));
        assert!(is_well_formed(&WeightVector::from_u64s(&[2, 3, 5]).unwrap()));
        assert!(!is_well_formed(&WeightVector::from_u64s(&[2, 4, 6]).unwrap()));
        assert!(WeightVector::from_u64s(&[1, 0]).is_err());
    }

    #[test]
    fn degrees() {
        let w = WeightVector::from_u64s(&[141, 94, 13, 35]).unwrap();
        assert_eq!(weighted_degree(&Monomial::from_u64s(&[0, 0, 19, 1]), &w).unwrap(), BigInt::from(282));
        assert_eq!(weighted_degree(&Monomial::from_u64s(&[0, 1, 1, 5]), &w).unwrap(), BigInt::from(282));
        assert_eq!(weighted_degree(&Monomial::from_u64s(&[0, 0, 0, 0]), &w).unwrap(), BigInt::zero());
        assert!(weighted_degree(&Monomial::from_u64s(&[1, 1]), &w).is_err());

        assert_eq!(homogeneous_degree(&x282()), Some(BigInt::from(282)));
        assert_eq!(homogeneous_degree(&x227262()), Some(BigInt::from(227262)));
        assert_eq!(homogeneous_degree(&poly(&[1, 1], &[&[2, 0], &[0, 3]])), None);
    }

    #[test]
    fn charts() {
        let c = affine_chart(&x282(), 3).unwrap();
        assert_eq!(c, poly(&[141, 94, 13], &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 19], &[0, 1, 1]]));
        let c = affine_chart(&x227262(), 4).unwrap();
        let expect = poly(
            &[113631, 75754, 32466, 493],
            &[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 7, 0], &[0, 0, 0, 451], &[0, 1, 1, 2]],
        );
        assert_eq!(c, expect);
        let c = affine_chart(&poly(&[1, 1], &[&[1, 1]]), 1).unwrap();
        assert_eq!(c, poly(&[1], &[&[1]]));
        // x0*x1 and x0 collide on x1 = 1
        let c = affine_chart(&poly(&[1, 1], &[&[1, 1], &[1, 0]]), 1).unwrap();
        assert_eq!(c.monomials().len(), 1);
        assert!(affine_chart(&x282(), 4).is_err());
    }

    #[test]
    fn rejects_malformed_polynomials() {
        let w = WeightVector::from_u64s(&[1, 1]).unwrap();
        assert_eq!(WeightedPolynomial::new(w.clone(), vec![], None), Err(WpsError::NoMonomials));
        let dup = vec![Monomial::from_u64s(&[1, 0]), Monomial::from_u64s(&[1, 0])];
        assert!(matches!(WeightedPolynomial::new(w.clone(), dup, None), Err(WpsError::DuplicateMonomial(_))));
        let short = vec![Monomial::from_u64s(&[1])];
        assert!(matches!(WeightedPolynomial::new(w.clone(), short, None), Err(WpsError::LengthMismatch { .. })));
        let zero = Some(vec![Rational::zero()]);
        assert!(matches!(
            WeightedPolynomial::new(w, vec![Monomial::from_u64s(&[1, 0])], zero),
            Err(WpsError::ZeroCoefficient(0))
        ));
    }

    #[test]
    fn slack_examples() {
        let even_cone = poly(&[3, 2, 4], &[&[2, 0, 0], &[0, 3, 0], &[0, 1, 1]]);
        let cert = newton_interior_slack(&even_cone);
        assert!(cert.slack >= Rational::new(1, 12));
        assert_eq!(cert.slack, Rational::new(1, 3));
        assert!(cert.verify(&even_cone));
        let handmade = [(0, Rational::new(5, 12)), (1, Rational::new(1, 6)), (2, Rational::new(5, 12))];
        assert_eq!(
            evaluate_combination(&even_cone, &handmade).unwrap(),
            vec![Rational::new(5, 6), Rational::new(11, 12), Rational::new(5, 12)]
        );

        let odd_cone = poly(&[3, 2, 4], &[&[2, 0, 0], &[0, 3, 0], &[0, 1, 2]]);
        let cert = newton_interior_slack(&odd_cone);
        assert!(cert.is_interior());
        assert!(cert.verify(&odd_cone));
        assert_eq!(
            evaluate_combination(&odd_cone, &handmade).unwrap(),
            vec![Rational::new(5, 6), Rational::new(11, 12), Rational::new(5, 6)]
        );

        let ray = poly(&[1], &[&[2]]);
        let cert = newton_interior_slack(&ray);
        assert_eq!(cert.slack, Rational::from(-1));
        assert!(!cert.is_interior());
    }

    #[test]
    fn coordinate_reports() {
        use CoordinateStatus::*;
        let r = quasismooth_coordinate_report(&x282());
        assert!(matches!(r[0], NotOnX { .. }));
        assert!(matches!(r[1], NotOnX { .. }));
        assert_eq!(r[2], Quasismooth { monomial: 2, partner: 3 });
        assert_eq!(r[3], Suspect);

        let r = quasismooth_coordinate_report(&x227262());
        assert!(r[..3].iter().all(|s| matches!(s, NotOnX { .. })));
        assert_eq!(r[3], Quasismooth { monomial: 3, partner: 4 });
        assert_eq!(r[4], Suspect);

        let r = quasismooth_coordinate_report(&poly(&[1, 1], &[&[2, 0], &[0, 2]]));
        assert_eq!(r, vec![NotOnX { monomial: 0 }, NotOnX { monomial: 1 }]);
    }

    #[test]
    fn chart_text_round_trip() {
        let text = "# chart\n141, 94, 13\n2 0 0\n0 3 0 -2/3\n0 0 19  # pure power\n\n0 1 1\n";
        let p = WeightedPolynomial::parse_chart(text).unwrap();
        assert_eq!(p.monomials().len(), 4);
        let coefs = p.coefficients().unwrap();
        assert_eq!(coefs[1], Rational::new(-2, 3));
        assert_eq!(coefs[0], Rational::one());
        assert_eq!(WeightedPolynomial::parse_chart(&p.to_chart_text()).unwrap(), p);

        let big = "1 1\n123456789012345678901234567890 0\n0 1\n";
        let p = WeightedPolynomial::parse_chart(big).unwrap();
        assert_eq!(p.monomials()[0].exponents()[0].to_string(), "123456789012345678901234567890");

        assert!(matches!(WeightedPolynomial::parse_chart("1 1\n1 2 3 4\n"), Err(WpsError::Parse { line: 2, .. })));
        assert!(WeightedPolynomial::parse_chart("# nothing\n").is_err());
        assert!(WeightedPolynomial::parse_chart("1 x\n").is_err());
    }

    fn permute(p: &WeightedPolynomial, perm: &[usize]) -> WeightedPolynomial {
        // new variable k is old variable perm[k]
        let w = perm.iter().map(|&i| p.weights().as_slice()[i].clone()).collect();
        let ms = p
            .monomials()
            .iter()
            .map(|m| Monomial::new(perm.iter().map(|&i| m.exponents()[i].clone()).collect()))
            .collect();
        WeightedPolynomial::new(WeightVector::new(w).unwrap(), ms, None).unwrap()
    }

    fn arb_poly() -> impl Strategy<Value = (WeightedPolynomial, Vec<usize>)> {
        (1usize..=4).prop_flat_map(|nv| {
            (
                prop::collection::vec(1u64..12, nv),
                prop::collection::hash_set(prop::collection::vec(0u64..4, nv), 1..5),
                Just((0..nv).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(|(w, ms, perm)| {
                    let ms: Vec<Monomial> = ms.iter().map(|m| Monomial::from_u64s(m)).collect();
                    (WeightedPolynomial::new(WeightVector::from_u64s(&w).unwrap(), ms, None).unwrap(), perm)
                })
        })
    }

    /// Solves a square system by Gauss-Jordan elimination; `None` if singular.
    #[allow(clippy::needless_range_loop)]
    fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = rhs.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            rhs.swap(col, piv);
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[col][col];
                    for c in col..n {
                        let delta = &f * &m[col][c];
                        m[r][c] = &m[r][c] - &delta;
                    }
                    let delta = &f * &rhs[col];
                    rhs[r] = &rhs[r] - &delta;
                }
            }
        }
        Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
    }

    /// Independent route: enumerate every basic solution of
    /// `min t, Σλ m ≤ t𝟙, Σλ = 1, λ ≥ 0` and keep the best feasible one.
    fn slack_by_vertex_enumeration(p: &WeightedPolynomial) -> Rational {
        let k = p.monomials().len();
        let nv = p.num_vars();
        let dim = k + 1;
        // Inequalities as rows `g·(λ, t) ≤ 0`.
        let mut ineqs: Vec<Vec<Rational>> = Vec::new();
        for j in 0..k {
            let mut g = vec![Rational::zero(); dim];
            g[j] = Rational::from(-1);
            ineqs.push(g);
        }
        for i in 0..nv {
            let mut g: Vec<Rational> =
                p.monomials().iter().map(|m| Rational::from_integer(m.exponents()[i].clone())).collect();
            g.push(Rational::from(-1));
            ineqs.push(g);
        }
        let mut eq = vec![Rational::one(); k];
        eq.push(Rational::zero());
        let mut best: Option<Rational> = None;
        let total = ineqs.len();
        for mask in 0u32..(1 << total) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut rows = vec![eq.clone()];
            let mut rhs = vec![Rational::one()];
            for (idx, g) in ineqs.iter().enumerate() {
                if mask & (1 << idx) != 0 {
                    rows.push(g.clone());
                    rhs.push(Rational::zero());
                }
            }
            let Some(sol) = solve_square(rows, rhs) else { continue };
            let feasible = ineqs.iter().all(|g| {
                let v: Rational = g.iter().zip(&sol).map(|(a, b)| a * b).sum();
                !v.is_positive()
            });
            if feasible {
                let t = sol[k].clone();
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        Rational::one() - best.expect("λ = e_0 is always a vertex candidate")
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn simplex_matches_vertex_enumeration((p, _) in arb_poly()) {
            prop_assert_eq!(newton_interior_slack(&p).slack, slack_by_vertex_enumeration(&p));
        }

        #[test]
        fn permutation_equivariance((p, perm) in arb_poly()) {
            let q = permute(&p, &perm);
            prop_assert_eq!(is_well_formed(p.weights()), is_well_formed(q.weights()));
            prop_assert_eq!(homogeneous_degree(&p), homogeneous_degree(&q));
            prop_assert_eq!(newton_interior_slack(&p).slack, newton_interior_slack(&q).slack);
            let rp = quasismooth_coordinate_report(&p);
            let rq = quasismooth_coordinate_report(&q);
            for (k, &old) in perm.iter().enumerate() {
                prop_assert_eq!(
                    std::mem::discriminant(&rq[k]),
                    std::mem::discriminant(&rp[old])
                );
            }
        }

        #[test]
        fn slack_is_monotone_and_certified((p, _) in arb_poly(), extra in prop::collection::vec(0u64..4, 4)) {
            let cert = newton_interior_slack(&p);
            prop_assert!(cert.verify(&p));
            let nv = p.num_vars();
            let m = Monomial::from_u64s(&extra[..nv]);
            if !p.monomials().contains(&m) {
                let mut ms = p.monomials().to_vec();
                ms.push(m);
                let bigger = WeightedPolynomial::new(p.weights().clone(), ms, None).unwrap();
                let cert2 = newton_interior_slack(&bigger);
                prop_assert!(cert2.verify(&bigger));
                prop_assert!(cert2.slack >= cert.slack);
            }
        }
    }
}
