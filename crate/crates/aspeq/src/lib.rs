//! Equivalence verification for mini-gringo answer set programs.
//!
//! Two programs are considered interchangeable relative to a user guide —
//! a declaration of placeholders, input predicates, output predicates, and
//! assumptions about the admissible inputs — when they produce the same
//! output atoms on every admissible input. This crate decides or assists
//! that question along two independent routes:
//!
//! * a verification condition built from program completion, with private
//!   predicates eliminated by renaming, discharged through an external
//!   automated theorem prover (TPTP/TFF output, SZS result parsing);
//! * a desk-scale oracle that grounds both programs, enumerates stable
//!   models, and searches bounded input spaces for counterexamples.

pub mod analysis;
pub mod completion;
pub mod guide;
pub mod interpretation;
pub mod oracle;
pub mod parse;
pub mod prover;
pub mod reduction;
pub mod report;
pub mod simplify;
pub mod syntax;
