//! Exact arithmetic, valuations, quadratic defects, square classes, and
//! Hilbert symbols in a dyadic local field of degree ≤ 2 over ℚ₂.

mod elem;

pub use elem::{Elem, FieldCore, FieldKind};

mod field;

pub use field::{residues, residue_key, Field, FieldError};

mod parse;

pub use parse::{parse_elem, parse_field, ParseError};

/// Resolve a field name (`q2`, `q2(sqrt(d))`) to the process-wide shared
/// instance, fallibly.
pub fn shared_field(name: &str) -> Result<&'static Field, ParseError> {
    let kind = parse::field_kind_of_name(name)?;
    Ok(Field::cached(kind))
}
