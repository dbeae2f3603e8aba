//! Configuration schemes for linear RISs: random binary phase, continuous
//! phase compensation, and joint area/phase beam reshaping.

mod compensation;
mod random;
mod reshape;

pub use compensation::{
    anomalous_pairs, compensated_rcs, compensated_steering, grating_lobes, phase_compensation, PhaseCompensation,
};
pub use random::{
    monte_carlo_power, random_phase_draw, random_phase_expected_power, random_phase_expected_power_multi,
    random_phase_expected_rcs, random_phase_miso_expected_power, trial_rng, MonteCarloEstimate, RandomPhaseLaw,
};
pub use reshape::{beam_reshape, ConditioningReport, ReshapeOptions, ReshapeSolution, SolverChoice, SolverPath};
