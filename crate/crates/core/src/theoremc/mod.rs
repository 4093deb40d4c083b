//! Codimension-one foliations of `P^3` tangent to a linear vector field:
//! normal forms, invariant-form linear systems, coefficient deduction and
//! the end-to-end splitting verdict.

pub mod graph;
pub mod jordan;
pub mod kernel;
pub mod pipeline;

use thiserror::Error;

use crate::division::DivisionError;
use crate::extcalc::CalcError;
use crate::geometry::GeometryError;
use crate::groebner::IdealError;
use crate::poly::PolyError;

pub use graph::{
    case_v_lie_closed_form, coeff_basis, deduce_zeros, pure_power_chain, mixed_x3_chain, ChainEdge, CoeffBasisElement,
    DeductionGraph, MIXED_X3_GATED_EDGE,
};
pub use jordan::{case_field, classify, jordan_matches, jordan_type, CaseTag, JordanCase, JordanMatch};
pub use kernel::{
    case_v_family, case_v_witness, case_vi_family, check_multiplicity, check_multiplicity_report,
    combined_constraint, integrability_report, kernel_system, local_division_check, nilpotent_local_division_check, twelve_coefficients,
    IntegrabilityReport, KernelSystem, LocalDivisionCheck, MultiplicityReport,
};
pub use pipeline::{reproduce, theorem_c_pipeline, Branch, Check, PipelineReport, ReproduceReport, SplitCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremCError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("classification failure: {0}")]
    Classification(String),
    #[error("the field must be linear and homogeneous on 4 variables")]
    NotLinear,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("the field is not tangent to the form")]
    NotTangent,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}
