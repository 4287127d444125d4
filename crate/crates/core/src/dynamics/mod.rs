//! Orbits, empirical height expansion coefficients, and canonical heights.

mod automorphism;
mod mu;
mod orbit;

pub use automorphism::{
    backward_mu_sequence, canonical_height, ell_relations_hold, kawaguchi_experiment,
    kawaguchi_slack, kawaguchi_sweep, relative_change, AffineAutomorphism, CanonicalHeight, Direction, KawaguchiStats,
    DEFAULT_CANONICAL_KMAX, DEFAULT_CANONICAL_TOL,
};
pub use mu::{
    estimate_mu, fit_lower_envelope, sample_ratios, ExclusionSet, MuConfig, MuEstimate,
    RatioSample, Sampler, TierStats, DEFAULT_SAMPLES_PER_TIER, DEFAULT_TIERS,
};
pub use orbit::{forward_orbit, OrbitRecord, OrbitStep, Termination, DEFAULT_MAX_BITS};
