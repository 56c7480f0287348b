//! Decides whether the simply connected Lie group of a nilpotent or solvable
//! Lie algebra, given by rational structure constants, admits a left-invariant
//! Einstein, nilsoliton, or solsoliton metric, and recovers the metric
//! numerically when it does.
//!
//! The crate is split along the two arithmetic regimes involved:
//!
//! * exact rational linear algebra ([`qmat`], [`qpoly`], [`algebra`]) backing
//!   the accept/reject gates of the decision procedures,
//! * floating point tensors and the moment-map gradient flow on the unit
//!   sphere of the bracket variety ([`flow`]).
//!
//! On top of those sit the Lie-theoretic layers: structure-constant tensors
//! and their classification ([`bracket`]), derivation algebras and the
//! pre-Einstein solver ([`derivations`]), curvature and soliton certificates
//! ([`curvature`]), and the composed decision procedures ([`decide`]).

pub mod algebra;
pub mod bracket;
pub mod corpus;
pub mod curvature;
pub mod decide;
pub mod derivations;
pub mod flow;
pub mod lp;
pub mod qmat;
pub mod qpoly;
pub mod rational;

pub use bracket::{AlgebraClass, BracketTensor};
pub use decide::{Answer, Verdict};
pub use qmat::{QMat, Subspace};
pub use rational::Q;
