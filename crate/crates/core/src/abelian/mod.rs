//! Finite abelian groups and their Q/Z-valued characters.

pub mod character;
pub mod group;
pub mod snf;

pub use character::{all_characters, GroupCharacter};
pub use group::{group_from_multiplication, FiniteAbelianGroup, Presentation};
pub use snf::{smith_normal_form, SmithForm};
