pub mod criterion;
pub mod descent;
pub mod error;
pub mod field;
pub mod frey;
pub mod ideal;
pub mod numeric;
pub mod sunit;

pub use error::{Error, Result};
pub use field::{build_field, Field, FieldElement, FieldExt};
