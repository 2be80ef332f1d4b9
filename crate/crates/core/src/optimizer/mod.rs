//! Offline refinement of pulse sets: a time-integrated cost evaluated by
//! re-simulation, an analysis chain of tomography and synthesis, and a
//! genetic search seeded with its candidates.

mod cost;
mod genome;
mod learning;

pub use crate::groups::{enumerate_candidate_groups, GroupSkeleton};
pub use cost::{evaluate_cost, measure_generator, CostEvaluation, CostFunction, CostSample, CostSettings};
pub use genome::{factor_local, Genome};
pub use learning::{
    analysis_chain, learning_loop, write_records_csv, AnalysisPass, GenerationRecord, LearningLoopConfig,
    LearningOutcome,
};
