//! Certificates: a JSON record of a construction together with every
//! equation that establishes it, and a verifier that re-checks them using
//! permutation arithmetic alone.

mod build;
mod expr;
mod model;
mod templates;
mod verify;

pub use build::{
    amalgam_certificate, commuting_certificate, equivariant_certificate, extension_certificate, hall_certificate,
    power_certificate, root_certificate, Inputs,
};
pub use expr::{parse_expr, Expr};
pub use model::{Binding, Certificate, Family, GroupData, Kind, MapData, Payload, PermData, FORMAT_VERSION};
pub use templates::expected;
pub use verify::{verify, verify_certificate, FamilyOutcome, VerifyReport};
