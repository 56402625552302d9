//! The constructive desingularization: parameter choice, Jacobian systems, the two
//! smooth stages, the lifted point and certificate verification.

mod certificate;
mod omega;
mod pair;
mod problem;
mod stage;
mod system;
mod verify;

pub use certificate::{desingularize, Containment, DesingCertificate, Proof, SmoothWitness, StageRecord, StepLog};
pub use omega::{lift_stage, StageLift};
pub use pair::{absorb_parameters, choose_regular_pair, prepare_free_conormal, Absorption, Branch, ParameterPair};
pub use stage::{build_stage, center_images, StageData, StageSpec, TLayout};
pub use problem::{NeronConfig, Problem, DEFAULT_COMBO_BUDGET, DEFAULT_T_MAX};
pub use system::{find_jacobian_system, find_jacobian_system_with, m_primary_gate, JacobianSystem, MinorTerm};
pub use verify::{verify_certificate, CheckResult, VerifyReport};
