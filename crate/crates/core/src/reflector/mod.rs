//! Continuous reflector surfaces reconstructed from a discrete pair, the
//! ray-tracing map, the potential `V` and the symmetries of the system.

mod sampling;
mod surface;
mod symmetry;
mod trace;

pub use sampling::{export_sampling, GridSpec, HeightField};
pub use surface::{eval_first, eval_second, potential_v, ReflectorSurface, Side};
pub use symmetry::apply_scaling_symmetry;
pub use trace::{
    argmax_set, inverse_ray_trace, preimages, ray_trace, ray_trace_source, target_index, RayTraceResult,
};

/// Default front offset `d` used in reports and mesh metadata (so the
/// absolute optical path length is `beta + d = 2 beta`).
pub fn default_front_offset(beta: f64) -> f64 {
    beta
}
