//! Projective spans of faces, parasitic intersections and their
//! saturation, the properness check, the blow-up schedule, and the exact
//! obstruction to gluing affine spaces along a sheared curve.

mod ledger;
mod nolimit;
mod parasites;
mod subspace;

pub use ledger::{blowup_plan, BlowUpLedger, BlowUpStage, SeparationCertificate};
pub use nolimit::{no_limit_control, no_limit_witness, IdentityFamily, NoLimitReport};
pub use parasites::{
    is_simple_face, parasitic_intersections, saturate, span_assignment, strict_faithfulness, verify_proper,
    FaithfulnessReport, ParasiticRecord, ProperReport, ProperViolation, SpanAssignment,
};
pub use subspace::ProjectiveSubspace;
