//! Lower and upper bounds for the α-invariant of the family members.
//!
//! The lower bound is the smallest of four thresholds `ν`; each one is a
//! closed form in `s_n`, the weights and the tangent-cone weights `b_i`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::exact::{exact_div, sylvester, sylvester_prefix_sum, Rational};
use crate::family::{FamilyMember, Parity};
use crate::serde_dec;
use crate::wps::{
    newton_interior_slack, weighted_degree, Monomial, NewtonSlackCertificate, WeightVector, WeightedPolynomial,
};

/// The weighted tangent cone of the chart `x_{n+1} = 1` at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentConeData {
    /// `b_i = (s_n − 1)/s_i` for `i < n`, `b_n = (s_n + 1)/2` or `(s_n + 1)/4`.
    #[serde(serialize_with = "serde_dec::ints")]
    pub b_weights: Vec<BigInt>,
    #[serde(serialize_with = "serde_dec::display")]
    pub cone_equation: WeightedPolynomial,
    #[serde(serialize_with = "serde_dec::int")]
    pub cone_degree: BigInt,
}

/// Builds the tangent cone.
///
/// # Panics
///
/// If a surviving monomial is not of degree `s_n − 1`, or `x_n^b` is not of
/// strictly larger degree. Either means the family data is inconsistent.
pub fn tangent_cone(f: &FamilyMember) -> TangentConeData {
    let n = f.n;
    let s1: BigInt = &f.s_n - 1;
    let mut b_weights: Vec<BigInt> =
        (0..n).map(|i| exact_div(&s1, &sylvester(i)).expect("s_i divides s_n - 1")).collect();
    let top = match f.parity {
        Parity::Even => 2,
        Parity::Odd => 4,
    };
    b_weights.push(exact_div(&(&f.s_n + 1), &BigInt::from(top)).expect("b_n is an integer"));
    let weights = WeightVector::new(b_weights.clone()).expect("b-weights are positive");

    let chart = f.chart().expect("family chart");
    let mut kept = Vec::new();
    for m in chart.monomials() {
        let deg = weighted_degree(m, &weights).expect("chart has n + 1 variables");
        if is_pure_power_of(m, n) {
            assert!(deg > s1, "x_n^b must lie above the cone degree");
            continue;
        }
        assert_eq!(deg, s1, "cone monomial {m} has degree {deg}");
        kept.push(m.clone());
    }
    let cone_equation = WeightedPolynomial::new(weights, kept, None).expect("cone equation");
    TangentConeData { b_weights, cone_equation, cone_degree: s1 }
}

fn is_pure_power_of(m: &Monomial, index: usize) -> bool {
    m.exponents().iter().enumerate().all(|(i, e)| (i == index) != e.is_zero())
}

/// The interior-point certificate for the tangent cone.
pub fn tangent_cone_certificate(f: &FamilyMember) -> NewtonSlackCertificate {
    newton_interior_slack(&tangent_cone(f).cone_equation)
}

pub fn tangent_cone_klt(f: &FamilyMember) -> bool {
    tangent_cone_certificate(f).is_interior()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaBounds {
    /// Multiplicity bound on `X`: `a_n a_{n+1}/d`.
    pub nu_smooth: Rational,
    /// Degree of `K + νD^c` on the cone is non-positive.
    pub nu_l: Rational,
    /// Multiplicity bound on the cone.
    pub nu_mult: Rational,
    /// Bound at the vertex of the cone chart `x_n = 1`.
    pub nu_point: Rational,
    pub lower: Rational,
    /// `lct` of the hyperplane section `x_{n+1} = 0`: `(s_n − 2)a_{n+1}/(s_n − 1)`.
    pub upper: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn q(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

pub fn nu_bounds(f: &FamilyMember) -> AlphaBounds {
    let n = f.n;
    let s = q(&f.s_n);
    let one = Rational::one();
    let a_n = q(f.a_n());
    let a_last = q(f.a_last());
    let d = q(&f.d);
    let b: Vec<Rational> = tangent_cone(f).b_weights.iter().map(q).collect();

    let nu_smooth = &a_n * &a_last / &d;
    let nu_l = match f.parity {
        Parity::Even => (&s - &one) * &a_n / (&b[n] * &Rational::from(2)),
        Parity::Odd => (&s - &Rational::from(3)) * &a_n / (&b[n] * &Rational::from(4)),
    };
    let nu_mult =
        if n == 3 { &b[n - 1] * &a_n / (&s - &one) } else { &(&b[n - 2] * &b[n - 1]) * &a_n / (&b[n] * &(&s - &one)) };
    let nu_point = if n == 2 {
        Rational::from(2) * &a_n / (&s + &one)
    } else {
        let prev = q(&sylvester(n - 1));
        let k = n as i64;
        let factor = match f.parity {
            Parity::Even => 4,
            Parity::Odd => 8,
        };
        let numer = Rational::from(factor) * &a_n * (&s - &one).pow(k - 2);
        let denom = prev.pow(k - 2) * (&prev + &one).pow(2) * (&prev - &one).pow(k - 4) * (&s + &one);
        numer / denom
    };
    let lower = nu_smooth.clone().min(nu_l.clone()).min(nu_mult.clone()).min(nu_point.clone());
    let upper = (&s - &Rational::from(2)) * &a_last / (&s - &one);
    let note = (n == 2).then(|| "generic upper bound; a curve section gives the sharper bound 39/4".to_string());
    AlphaBounds { nu_smooth, nu_l, nu_mult, nu_point, lower, upper, note }
}

/// `lower = ν_smooth`, `1 < lower ≤ upper`, and the tangent cone is klt.
pub fn verify_exceptional(f: &FamilyMember) -> bool {
    let bounds = nu_bounds(f);
    bounds.lower == bounds.nu_smooth && bounds.lower > 1 && bounds.lower <= bounds.upper && tangent_cone_klt(f)
}

/// `min(1/s_0 + ⋯ + 1/s_{n−1}, 1)`, the lct of the Fermat singularity.
///
/// # Panics
///
/// If it disagrees with `(s_n − 2)/(s_n − 1)`.
pub fn fermat_lct(f: &FamilyMember) -> Rational {
    let lct = sylvester_prefix_sum(f.n - 1).min(Rational::one());
    let expected = Rational::new(&f.s_n - 2, &f.s_n - 1);
    assert_eq!(lct, expected, "Fermat lct disagrees with the Sylvester identity");
    lct
}
