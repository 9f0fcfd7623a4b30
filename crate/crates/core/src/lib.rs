//! Monomial ideals, their liftings to configurations of linear varieties,
//! and exact verification of the lifted resolutions.

pub mod algebra;
pub mod error;
pub mod export;
pub mod field;
pub mod geometry;
pub mod groebner;
pub mod ideal;
pub mod lifting;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod osequence;
pub mod poly;
pub mod report;
pub mod taylor;

pub use error::{Error, Result};
pub use field::{Field, FieldMode, Fp, Gf32003, Rational};
pub use ideal::MonomialIdeal;
pub use monomial::{Monomial, OrderKind, Ring, TermOrder};
