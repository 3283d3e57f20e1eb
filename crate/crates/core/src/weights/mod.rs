mod angle;
mod checks;
mod counted;
mod forms;
mod gauss;
mod mc;
mod preimage;
mod series;
mod table;
mod wheel;

pub use angle::{angle, angle_fast, angle_gradient, hyperbolic_angle_geometric, level_curve, AngleMapKind, Point};
pub use counted::{
    automorphism_edge_maps, default_regular_value, distinct_labellings, weight_counted, weight_semicircle,
    CountedWeight, LabellingCount,
};
pub use forms::{point_values, OneForm};
pub use mc::{weight_mc, McEstimate};
pub use gauss::{determinant, gauss_jacobian, gauss_map, Configuration, Gauge};
pub use preimage::{find_preimages, Preimage, SolverParams};
pub use wheel::{
    wheel_folded_count, wheel_relation_check, wheel_weight, wheel_weight_hat, WheelCount, WheelFormResult, WheelReport,
};
pub use series::{ln_z, z_series, z_vector, zz_check, ZzReport};
pub use table::{WeightEntry, WeightKind, WeightTable, WeightValue};
pub use checks::{multiplicativity_check, MultiplicativityCheck, ProductWeight};
