//! The oracle, the reduction steps and the pipeline that strings them together.

mod config;
mod oracle;
mod pipeline;
pub mod star;

pub use config::{Caps, PipelineConfig};
pub use oracle::{solve_oracle, Instance, OracleAnswer, Sentence};
pub use pipeline::{
    disjoint_subwalls, find_area, find_vertex, pipeline_sentence, reduce_instance, solve_pipeline, AreaOutcome,
    PipelineFailure, PipelineRun, StepOutcome, TraceStep,
};
