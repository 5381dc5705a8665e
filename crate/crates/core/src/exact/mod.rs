//! Exact (non-sampled) evaluation: best response, exploitability, vanilla
//! counterfactual regret minimization, and the Kuhn convergence metrics.

mod best_response;
mod cfr;
mod metrics;

pub use best_response::{best_response, exploitability, BestResponseResult};
pub use cfr::{cfr_iteration, immediate_regrets, CfrRun, CfrState};
pub use metrics::{dominated_error, kuhn_squared_error};
