//! One record aggregating every check on a family member.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::alpha::{fermat_lct, nu_bounds, tangent_cone_klt, AlphaBounds};
use crate::exact::Rational;
use crate::family::{
    closed_form_mld, mld_nonquasismooth, sequence_form_mld, verify_asymptotic_bound, verify_degree_identities,
    verify_gcd_lemma, verify_mld_identity, verify_other_points, verify_quasismooth_pattern, FamilyError, FamilyMember,
    NonQuasismoothReport, OtherPointsReport, Verification,
};
use crate::mld::ScanOptions;

/// Full scans and enumerations above this many candidates are skipped.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone)]
pub struct CertifyOptions {
    /// Scan every group element at the non-quasismooth point when
    /// `a_{n+1} ≤ budget`.
    pub brute_force: bool,
    pub budget: u64,
    pub scan: ScanOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { brute_force: false, budget: DEFAULT_BUDGET, scan: ScanOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCertificate {
    pub member: FamilyMember,
    pub degree: Verification,
    pub gcd: Verification,
    pub quasismooth_pattern_ok: bool,
    pub closed_form_mld: Rational,
    pub sequence_form_mld: Rational,
    pub mld_identity_ok: bool,
    pub asymptotic_ok: bool,
    pub nonquasismooth: NonQuasismoothReport,
    pub other_points: OtherPointsReport,
    pub tangent_cone_klt_ok: bool,
    pub fermat_lct: Rational,
    pub alpha: AlphaBounds,
    pub exceptional_ok: bool,
    /// The mld computation at the non-quasismooth point assumes the chart is
    /// Newton non-degenerate.
    pub assumes_non_degenerate: bool,
}

impl FamilyCertificate {
    pub fn all_passed(&self) -> bool {
        self.degree.passed
            && self.gcd.passed
            && self.quasismooth_pattern_ok
            && self.mld_identity_ok
            && self.asymptotic_ok
            && self.nonquasismooth.passed()
            && self.other_points.passed
            && self.tangent_cone_klt_ok
            && self.exceptional_ok
    }
}

pub fn certify(member: FamilyMember, options: &CertifyOptions) -> Result<FamilyCertificate, FamilyError> {
    let fits = member.a_last().to_u64().is_some_and(|r| r <= options.budget);
    let budget = (options.brute_force && fits).then_some(options.budget);
    let nonquasismooth = mld_nonquasismooth(&member, budget, &options.scan)?;
    let other_points = verify_other_points(&member, options.budget, &options.scan)?;
    let alpha = nu_bounds(&member);
    let tangent_cone_klt_ok = tangent_cone_klt(&member);
    let exceptional_ok =
        alpha.lower == alpha.nu_smooth && alpha.lower > 1 && alpha.lower <= alpha.upper && tangent_cone_klt_ok;
    Ok(FamilyCertificate {
        degree: verify_degree_identities(&member),
        gcd: verify_gcd_lemma(&member),
        quasismooth_pattern_ok: verify_quasismooth_pattern(&member),
        closed_form_mld: closed_form_mld(&member),
        sequence_form_mld: sequence_form_mld(&member),
        mld_identity_ok: verify_mld_identity(&member),
        asymptotic_ok: verify_asymptotic_bound(&member),
        nonquasismooth,
        other_points,
        tangent_cone_klt_ok,
        fermat_lct: fermat_lct(&member),
        alpha,
        exceptional_ok,
        assumes_non_degenerate: true,
        member,
    })
}
