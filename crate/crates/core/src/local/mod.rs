//! Characters of `Q_p^x` and of its quadratic extensions, `p` odd.

pub mod character;
pub mod field;
pub mod units;

pub use character::{
    char_product_conductor_bound, norm_compose, norm_compose_at, parse_character, quadratic_character, LocalCharacter,
    LocalCharacterRecord, NormCertificate, ProductBound,
};
pub use field::{Elem, FieldKind, LocalFieldDesc, LocalRing};
pub use units::{unit_quotient, UnitQuotient};
