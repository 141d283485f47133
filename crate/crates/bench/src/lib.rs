//! Shared fixtures for the benchmarks.

use mldlab_core::{build_family, HypersurfaceEngine, QuotientSingularity, WeightedPolynomial};

/// The quotient engine at the non-quasismooth point of `X_n`.
pub fn family_engine(n: usize) -> HypersurfaceEngine {
    build_family(n).and_then(|f| f.engine()).expect("family member")
}

/// The coordinate-point quotient `1/a_n(a_0, …, a_{n-1})` of `X_n`.
pub fn coordinate_quotient(n: usize) -> QuotientSingularity {
    let f = build_family(n).expect("family member");
    QuotientSingularity::new(f.a_n().clone(), f.a[..n].to_vec()).expect("well-formed")
}

pub fn tangent_cone(n: usize) -> WeightedPolynomial {
    mldlab_core::tangent_cone(&build_family(n).expect("family member")).cone_equation
}
