//! Unoriented genus and crosscap number of prime alternating knots and links,
//! computed from Gauss codes by rewriting Gauss-state codes.
//!
//! ```
//! use crosscap_core::{compute_invariants, GaussCode};
//!
//! let trefoil: GaussCode = "[[1,2,3,1,2,3]]".parse().unwrap();
//! let r = compute_invariants(&trefoil).unwrap();
//! assert_eq!((r.unoriented_genus, r.crosscap), (1, 1));
//! assert_eq!(r.witness.to_string(), "[(1,2),(1,3),(3,2)]");
//! ```

pub mod census;
pub mod codec;
pub mod engine;
pub mod invariants;
pub mod oracle;
pub mod smoothing;

pub use codec::{
    canonical_relabel, dt_to_gauss, parse_gauss, serialize_gauss, CodecError, CrossingLabel,
    DtCode, GaussCode,
};
pub use engine::{
    minimal_genus_states, optimal_state, BranchResult, EngineConfig, EngineError, StateCode,
};
pub use invariants::{compute_invariants, InvariantError, InvariantReport, StateGraph};
pub use oracle::{
    brute_force_invariants, brute_force_max_circles, OracleConfig, OracleError,
    SmoothingAssignment, SmoothingChoice,
};
pub use smoothing::{Circle, GaussStateCode, MgonFinding, SmoothingError};
