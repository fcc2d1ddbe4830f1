//! Verifiers for the inequalities around the informational mean, seeded
//! instance generators, and randomized campaigns that aggregate margins into
//! a [`VerificationReport`].

pub mod cases;
pub mod generate;
pub mod report;
pub mod verify;

pub use cases::{AmhmCase, Envelope, HyperconvexInstance, OrderedPair, SumInformationCase};
pub use generate::{
    generate_instance, generate_instance_on, AlphaSampling, GeneratorConfig, Instance, InstanceKind,
};
pub use report::{
    instance_margins, run_campaign, CampaignConfig, CaseRecord, Suite, VerificationReport,
};
pub use verify::{
    canonical_envelope, verify_amhm_general, verify_gaussian_sum_closed_form,
    verify_hyperconvexity, verify_inverse_monotonicity, verify_matrix_bounds, verify_scalar_bounds,
    verify_sum_information, Margin,
};
