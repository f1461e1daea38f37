//! End-to-end constructions: reductions to the cross-polytope, annealing
//! searches and connections between two complexes, all as replayable reports.

mod anneal;
mod balanced;
mod connect;
pub mod random;
mod report;

pub use anneal::{bistellar_reduce, heuristic_reduce, AnnealConfig, Objective};
pub use balanced::reduce_balanced_2sphere;
pub use connect::{colored_connect, connect_balanced};
pub use report::{Move, Outcome, ReductionReport, ReportStats, StepCertificate};
