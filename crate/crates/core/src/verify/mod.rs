//! Verification suites. Every suite returns a [`VerificationReport`]; an
//! identity that does not hold is reported with witnesses, never raised as an
//! error.

mod identities;
mod matrix;
mod qlie;
mod report;

pub use identities::{
    check_component_identities, check_component_identities_with, check_cybe_suite, check_cybe_suite_with,
    check_functional, check_quadratic_ybe_components, check_quadratic_ybe_components_with,
    component_identities, quadratic_identities, Identity, Kind, MatrixOps, Word, CYBE, CYBE_BETA_C,
    CYBE_C2, CYBE_RHO, QUADRATIC, QUADRATIC_BETA2_C, QUADRATIC_BETA_C2, QUADRATIC_C3, QUADRATIC_RHO,
};
pub use matrix::{check_braid, check_cg_family, check_cybe, check_ybe_r, hecke_residual};
pub use qlie::check_qlie_axioms;
pub use report::{ItemSummary, VerificationReport, Witness, WITNESS_CAP};

use crate::cg::extended_rhat;
use crate::error::Result;
use crate::laurent::{op_rhat_with_sign, Slots, SpaceConfig};
use crate::scalar::Specialization;
use crate::tensor::Operator;

/// Matrix of the functional R̂ restricted to V⊗V compared with the closed-form
/// extended matrix. `c_sign = -1` flips the C term of the functional side.
pub fn check_cross_construction(n: usize, spec: &Specialization, c_sign: i64) -> Result<VerificationReport> {
    let cfg = SpaceConfig::new(n)?;
    let mut b = report::ReportBuilder::new("cross-check", n, spec);
    let functional = Operator::from_functional(cfg, 2, |f| op_rhat_with_sign(f, Slots::XY, c_sign))?
        .specialize(spec)?;
    let closed = extended_rhat(n)?.specialize(spec)?;
    let name = "functional Rhat = extended Rhat";
    let diffs = functional.diff_entries(&closed)?;
    b.item(
        name,
        (closed.size() * closed.size()) as u64,
        diffs.iter().map(|d| report::discrepancy_witness(name, d)).collect(),
    );
    Ok(b.finish())
}
