//! Quantizers whose distortion measure carries a per-point height parameter.
//!
//! Each reproduction point `p_n` comes with a height `h_n > 0` and charges a
//! sample `w` the cost `beta * (|p_n - w|^2 + h_n^2)^gamma / h_n`, the expected
//! transmit power from a ground terminal at `w` to a UAV hovering at
//! `(p_n, h_n)`. The crate builds the resulting Möbius partitions, evaluates
//! and differentiates the average distortion, solves the one-dimensional
//! problem in closed form and runs Lloyd-style optimizers in the plane.

pub mod density;
pub mod error;
pub mod lloyd;
pub mod mobius;
pub mod model;
pub mod numerics;
pub mod oned;
pub mod quadrature;

pub use density::{clustered_mixture_components, density_eval, DensityKind, DensityModel, MixtureComponent};
pub use error::{Error, Result};
pub use lloyd::{
    grid_distortion, lloyd_best_of, lloyd_restarts, lloyd_run, lloyd_run_on_grid, random_baseline, random_deployment, random_start,
    restart_start, sweep, BestOf, LloydConfig, LloydReport, LloydVariant, RandomBaseline, Reseed, SweepRow, SWEEP_CSV_HEADER,
    Termination,
};
pub use mobius::{
    cells_1d, classify, dominance_region, grid_partition, parameter_ratio, Classifier, DominanceRegion,
    GridPartition, Partition1D, SampleGrid,
};
pub use model::{
    channel_to_distortion_params, distortion, weights_from_height, ChannelModel, DistortionParams,
    GroundPoint, Quantizer, TargetRegion,
};
pub use oned::{max_elevation_cosine, n_level_optimum, one_level_optimum, OneDimOptimum};
pub use quadrature::{average_distortion, cell_moments, gradient, CellMoments, DistortionReport, Gradient};
