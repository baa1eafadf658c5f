//! Achievable-region membership, the binary example's closed forms and optimizer,
//! and the curve data derived from them.

mod curves;
mod example;
mod theorem;

pub use curves::{fig3_csv, fig4_csv, figure3_curve, figure3_row, figure4_curve, figure4_row, grid, Fig3Row, Fig4Row};
pub use example::{
    example_chain_matrices, example_closed_forms, example_design, example_design_joint, example_joint_optimize,
    example_separate_design, example_separate_region, threshold_po, ExampleClosedForms, ExampleParams, JointOptimum,
    SeparateRegion,
};
pub use theorem::{
    separate_terms, theorem1_member, theorem2_member, theorem2_min_randomness, ConstraintCheck, MembershipReport,
    RateTuple, Relation, SeparateTerms, STRICT_MARGIN,
};
