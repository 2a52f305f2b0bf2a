pub mod error;
pub mod padic;
pub mod reps;
pub mod newton;
pub mod series;
pub mod uea;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use padic::{PadicScalar, Rational, Valuation};
pub use series::{Backend, TruncatedSeries};
