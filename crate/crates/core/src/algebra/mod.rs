//! Exact arithmetic: fields, polynomials, factorization and linear algebra.

pub mod factor;
pub mod field;
pub mod integer;
pub mod matrix;
pub mod parse;
pub mod poly;

pub use factor::{poly_factorize, roots, squarefree_decomposition, Factorization};
pub use field::{field_ops, Field, FieldDescriptor, FieldElement, FieldOp, FieldOpResult};
pub use integer::{integer_kernel, smith_normal_form, IntegerMatrix, SmithForm};
pub use matrix::{matrix_rank_kernel, FieldMatrix, RankKernel, Rref};
pub use parse::{parse_element, parse_field, parse_poly};
pub use poly::UniPoly;
