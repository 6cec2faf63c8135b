//! Positivstellensatz refutations `1 + [x]* S [x] = Σ f_ℓ h_ℓ + Σ h_ℓ* g_ℓ`
//! with `S ⪰ 0`, searched by SDP and certified in exact arithmetic.
//!
//! The left and right ideal terms are not SDP variables. The columns
//! `w·h_ℓ` and `h_ℓ*·w` (degree ≤ 2k) are put in exact echelon form; the
//! identity then holds iff the Gram polynomial `1 + Σ S_uv u*v` reduces to
//! zero modulo that span, one linear equation per non-pivot word.

mod build;
mod certificate;
mod io;

pub use build::{build_refutation_sdp, build_refutation_sdp_with, nc_monomial_basis, MonomialBasis, PsatzLimits, SDPProblem};
pub use certificate::{
    certificate_from_gram, certificate_from_rational, cstar_refute, cstar_refute_with, refute_at_degree, extract_certificate, verify_certificate, KAttempt,
    RefutationCertificate, RefuteOptions, RefuteOutcome, SLACK_THRESHOLD,
};
pub use io::{read_certificate, write_certificate};
