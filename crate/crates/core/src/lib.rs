//! Exact construction of the Cremmer-Gervais quantum Lie algebra data and
//! verification of the identities it satisfies.
//!
//! * [`scalar`]: the coefficient ring ℚ[β, C, p, p⁻¹].
//! * [`laurent`]: the truncated function spaces and the functional operators
//!   ρ, 𝔰, r and R̂.
//! * [`tensor`]: sparse operators on V⊗V and V⊗V⊗V.
//! * [`cg`]: closed-form braid matrices and structure constants.
//! * [`verify`]: braid, Yang-Baxter and quantum Lie algebra checks.
//! * [`rtt`]: RTT relations in the free algebra and their comparison with the
//!   bicovariant calculus relations.

pub mod cg;
pub mod cli;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod rtt;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Scalar, Specialization};
pub use tensor::{Operator, Pair};
