//! Polyqubit encodings for trapped-ion processors.
//!
//! A polyqubit stores `p` qubits in the `2^p` internal levels of one atom. This
//! crate builds the operator algebra of such an encoding, synthesizes
//! intra-atomic gates from two-level rotations, integrates the inter-atomic
//! XX (Mølmer–Sørensen) and ZZ (light-shift) gate Hamiltonians with a
//! truncated phonon bus, and runs the fidelity sweeps that quantify how well
//! spectator qubits are protected.
//!
//! Conventions used everywhere: ħ = 1, dense complex storage, and the first
//! qubit label of an encoding owns the most significant binary digit of the
//! atomic level index.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod intragates;
pub mod linop;
pub mod polyenc;
pub mod tolerances;

pub use error::{Error, Result};
pub use linop::{OperatorMatrix, PartialTrace, StateVector, C64};
pub use polyenc::{PauliAxis, PolyEncoding, QubitLabel};
