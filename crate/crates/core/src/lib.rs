//! Linear systems of hypersurfaces with assigned multiple base points: their
//! linear base locus, linear expected dimension, strict-transform cohomology,
//! and a finite-field rank oracle for the actual dimension.

pub mod baselocus;
pub mod cohomology;
pub mod dimensions;
pub mod error;
pub mod froberg;
pub mod oracle;
pub mod picard;
pub mod system;

pub use baselocus::{
    enumerate_base_cycles, k_value, reduce_cones, split_hyperplanes, BaseCycle, BaseLocusReport,
    ConeReduction, HyperplaneSplit,
};
pub use cohomology::{
    cohomology_table, cones_h0, cones_h1, cycle_contributions, h1_speciality, strict_transform,
    CohomologyTable, StrictTransform,
};
pub use dimensions::{
    chandler_decomposition, classify, linear_expected_dimension, linear_virtual_dimension,
    n3_condition, virtual_dimension, Classification, ContainmentPolicy, DimensionReport,
    N3Condition,
};
pub use error::{Error, Result};
pub use froberg::{froberg_prediction, truncated_series, TruncatedSeries};
pub use oracle::{
    apolarity_dimension, cycle_multiplicity_probe, interpolation_dimension, OracleConfig,
    OracleResult,
};
pub use picard::{
    cremona_reduce, effectivity, is_cremona_reduced, weyl_base_locus, weyl_orbit, CremonaReduction,
    Effectivity, PicardClass,
};
pub use system::{binomial, canonicalize, LinearSystem, MultiIndex};
