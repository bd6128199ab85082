//! Recovery guarantees: coherence and its tail bounds, Toeplitz structure of the
//! Gram matrices, characteristic-function grid conditions, isotropy, and the
//! closed-form measurement bounds.

mod bessel;
mod bounds;
mod charfn;
mod coherence;
mod empirical;
mod report;

pub use bessel::bessel_k1;
pub use bounds::{
    coherence_tail_bound, nonuniform_measurement_bound, uniform_measurement_bounds, ArrayCase, Constants,
    NonUniformBound, UniformBounds, CONSTANTS,
};
pub use charfn::{char_fn_discrete_uniform, char_fn_uniform, char_fn_uniform_width};
pub use coherence::{
    check_grid_conditions, coherence, mutual_coherence, toeplitz_deviation, ConditionMode, GramSummary,
    GridConditionReport,
};
pub use empirical::{
    coherence_tail_monte_carlo, empirical_gram, EmpiricalGram, TailEstimate, TailMonteCarlo, TailSetup,
};
pub use report::{guarantee_report, GuaranteeReport, ReportRequest};
