//! Exact positivity-of-coefficients certificates for real forms on the
//! positive orthant.

pub mod error;
pub mod form;
pub mod handelman;
pub mod lp;
pub mod newton;
pub mod parse;
pub mod positivity;
pub mod serde_util;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
pub use form::{Form, MultiIndex, PowerTable, Rational};
pub use newton::{NewtonDiagram, RelativeFace};
pub use parse::parse;
