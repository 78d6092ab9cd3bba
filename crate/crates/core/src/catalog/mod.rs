//! Named generator systems, derived fields, correspondence maps and checks.

pub mod systems;
pub mod fields;
pub mod maps;
pub mod modes;
pub mod checks;
