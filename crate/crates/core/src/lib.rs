//! Simulation of the Prime state `|P_n⟩`: number-theoretic counting, exact
//! statevector tools, Grover search with a reversible Miller–Rabin oracle and
//! quantum counting of π(2ⁿ).

pub mod cli;
pub mod error;
pub mod grover;
pub mod mr_oracle;
pub mod ntheory;
pub mod prime_state;
pub mod qcount;
pub mod qstate;

pub use error::{Error, Result};
