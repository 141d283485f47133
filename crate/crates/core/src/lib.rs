//! Exact computation of minimal log discrepancies for cyclic quotient
//! singularities and Newton non-degenerate hypersurface quotients, together
//! with a family of exceptional Fano hypersurfaces built from Sylvester's
//! sequence and the checks that certify their invariants.

pub mod alpha;
pub mod certificate;
pub mod exact;
pub mod family;
pub mod lp;
pub mod mld;
pub mod wps;

mod serde_dec;

pub use alpha::{
    fermat_lct, nu_bounds, tangent_cone, tangent_cone_klt, verify_exceptional, AlphaBounds, TangentConeData,
};
pub use certificate::{certify, CertifyOptions, FamilyCertificate, DEFAULT_BUDGET};
pub use exact::{frac, sylvester, sylvester_prefix_sum, Rational};
pub use family::{
    build_family, closed_form_mld, mld_nonquasismooth, sequence_form_mld, verify_asymptotic_bound,
    verify_degree_identities, verify_gcd_lemma, verify_mld_identity, verify_other_points, verify_quasismooth_pattern,
    FamilyError, FamilyMember, NonQuasismoothReport, OtherPointsReport, Parity, Verification,
};
pub use mld::{
    cyclic_quotient_mld, hypersurface_quotient_mld, lattice_value, Classification, HypersurfaceEngine, LatticePoint,
    MldError, MldResult, MldValue, QuotientSingularity, ScanOptions, Witness,
};
pub use num_bigint::BigInt;
pub use wps::{
    affine_chart, homogeneous_degree, is_well_formed, newton_interior_slack, quasismooth_coordinate_report,
    weighted_degree, CoordinateStatus, Monomial, NewtonSlackCertificate, WeightVector, WeightedPolynomial, WpsError,
};
