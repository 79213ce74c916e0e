pub mod binary;
pub mod curves;
pub mod error;
pub mod factory;
pub mod form;
pub mod interval;
pub mod linalg;
pub mod points;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod spans;
pub mod suite;
pub mod verifier;

pub use binary::{complex_rank, real_rank, BinaryDecomposition, BinaryForm, Minimality};
pub use curves::{
    find_rich_conics, find_rich_lines, split_on_curve, Conic, CurveKind, CurveSpec, Line,
};
pub use error::{Error, Result};
pub use factory::{generate, CaseLabel, Instance};
pub use form::{combine, conjugate_form, power_of_linear, HomogeneousForm, LinearForm, Monomial};
pub use linalg::ExactMatrix;
pub use points::{conjugation_orbit, PointSet, ProjectivePoint};
pub use scalar::{FieldTag, Scalar};
pub use spans::{
    h1_ideal, lemma_c2_check, membership, unique_intersection_point, veronese_eval_matrix, Field,
    Intersection, LemmaC2, SpanReport, VeroneseSpace,
};
pub use verifier::{classify, classify_with, CaseReport, Overall, Thresholds};
