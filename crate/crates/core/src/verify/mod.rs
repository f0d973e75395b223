//! Independent checks of a solved design.

mod certificate;
mod monge_ampere;
mod opl;
mod pushforward;
mod random;
mod reflection;
mod report;

pub use certificate::{certify_optimality, Certificate};
pub use monge_ampere::{check_monge_ampere, interior_nodes, monge_ampere_levels, node_residuals, stencil_step, MongeAmpereLevel};
pub use opl::{check_opl, check_opl_absolute};
pub use pushforward::{check_pushforward, Bins, PushforwardCheck};
pub use random::{random_admissible_pair, random_feasible_plan};
pub use reflection::{check_reflection_law, ReflectionCheck};
pub use report::{
    energy_balance_rel_error, verify_designs, PassFlags, RandomPlanStats, ReportMetadata, Thresholds,
    VerificationReport, VerifyOptions, REPORT_FORMAT_VERSION,
};
