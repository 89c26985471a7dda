//! Polynomial arithmetic over prime fields: forms, matrices of forms, dense
//! linear algebra and F_2 vectors.

pub mod f2;
pub mod field;
pub mod form;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod univariate;

pub use f2::F2Vector;
pub use field::PrimeField;
pub use form::Poly;
pub use linalg::DenseMatrix;
pub use matrix::MatrixOfForms;
pub use monomial::Monomial;
