//! Explicit charts for the bundle constructions over Kähler–Einstein bases.

pub mod anticanonical;
pub mod explicit;
pub mod fefferman;
pub mod kahler;
pub mod rescale;

pub use anticanonical::{
    anticanonical_structure, flat_gauge_structure, gauge_shifted_structure, perturbed_structure, AnticanonicalChart, SubmersionResiduals,
};
pub use kahler::{kahler_from_potential, make_kahler_einstein, sphere_times_flat, KahlerEinsteinChart, KahlerKind};
pub use fefferman::{fefferman_metric, FeffermanChart};
pub use rescale::{einstein_rescale, RescaledChart};
pub use explicit::{explicit_einstein_metric, ExplicitEinsteinMetric};
