//! Code construction: vector families, weak codes and routing.

pub mod family;
pub mod routing;
pub mod weak;

pub use family::{build_vector_family, choose_field, family_violation, verify_family_properties, FamilyViolation, VectorFamily};
pub use routing::{assemble, complete_code, extend_to_omega, route_sum};
pub use weak::{class_family_index, weak_code_on_pi, weak_code_on_super_region};
