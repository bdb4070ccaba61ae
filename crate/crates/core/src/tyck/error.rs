use thiserror::Error;

use crate::cofib::Conj;
use crate::surface::pretty;
use crate::syntax::{Name, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type mismatch: expected {}, found {}", pretty(.expected), pretty(.found))]
    TypeMismatch { expected: Term, found: Term },
    #[error("expected {expected}, found a term of type {}", pretty(.found))]
    ExpectedFormer { expected: &'static str, found: Term },
    #[error("{} is not a type", pretty(.0))]
    NotAType(Term),
    #[error("ill-formed cofibration: {0}")]
    IllFormedCofibration(String),
    #[error("cofibration mismatch: expected {expected}, found {found}")]
    CofibrationMismatch { expected: String, found: String },
    #[error("faces {i} and {j} disagree under {witness}")]
    FaceDisagreement { i: usize, j: usize, witness: Conj },
    #[error("the line {} does not freeze on {cofib}", pretty(.line))]
    FreezeViolation { line: Term, cofib: String },
    #[error("the floor does not agree with the walls at 0 under {witness}")]
    FloorWallDisagreement { witness: Conj },
    #[error("boundary mismatch under {witness}: {} is not {}", pretty(.found), pretty(.expected))]
    BoundaryMismatch { witness: Conj, expected: Term, found: Term },
    #[error("unbound variable {0}")]
    UnboundVariable(Name),
    #[error("Kan operation on the non-fibrant type {}", pretty(.0))]
    NotFibrant(Term),
    #[error("coercion along an extension type with {0} binders is not supported")]
    ExtCoeDimension(usize),
    #[error("cannot infer the type of {}", pretty(.0))]
    CannotInfer(Term),
}

impl TypeError {
    /// Stable short code used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            TypeError::TypeMismatch { .. } | TypeError::ExpectedFormer { .. } => "E-TYPE-MISMATCH",
            TypeError::NotAType(_) => "E-NOT-A-TYPE",
            TypeError::IllFormedCofibration(_) => "E-COFIB",
            TypeError::CofibrationMismatch { .. } => "E-COFIB-MISMATCH",
            TypeError::FaceDisagreement { .. } => "E-FACE-DISAGREE",
            TypeError::FreezeViolation { .. } => "E-FREEZE",
            TypeError::FloorWallDisagreement { .. } => "E-FLOOR-WALL",
            TypeError::BoundaryMismatch { .. } => "E-BOUNDARY",
            TypeError::UnboundVariable(_) => "E-UNBOUND",
            TypeError::NotFibrant(_) => "E-NOT-FIBRANT",
            TypeError::ExtCoeDimension(_) => "E-EXT-COE-DIM",
            TypeError::CannotInfer(_) => "E-CANNOT-INFER",
        }
    }

    /// The face on which a disagreement was found, if any.
    pub fn witness(&self) -> Option<&Conj> {
        match self {
            TypeError::FaceDisagreement { witness, .. }
            | TypeError::FloorWallDisagreement { witness }
            | TypeError::BoundaryMismatch { witness, .. } => Some(witness),
            _ => None,
        }
    }
}
