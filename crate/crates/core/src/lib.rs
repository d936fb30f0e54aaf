//! Invariants of three-qubit pure states under local unitary and local
//! invertible (SLOCC) operations.
//!
//! The crate computes concurrences, the threetangle, local tangles and the
//! Kempe invariant `I5`; reduces states to the Acín canonical form; builds
//! one-parameter families of canonical states that share every tangle but
//! differ in `I5`; and runs the random experiments (scatter ensembles,
//! monotonicity fuzzing, diagonal SLOCC orbits) used to probe `I5`.
//!
//! ```
//! use kempe::{preset_state, tangle_vector, Preset};
//!
//! let ghz = preset_state(Preset::Ghz).unwrap();
//! let t = tangle_vector(&ghz);
//! assert!((t.tau3 - 1.0).abs() < 1e-12);
//! assert!((t.i5 - 0.25).abs() < 1e-12);
//! ```
//!
//! Qubits are numbered 1, 2, 3 and basis index `b = 4 q1 + 2 q2 + q3`, so
//! qubit 1 is the most significant bit.

pub mod acin;
pub mod conformance;
pub mod error;
pub mod family;
pub mod invariants;
pub mod io;
pub mod random;
pub mod sampling;
pub mod slocc;
pub mod state;

pub use acin::{from_acin, to_acin, AcinParams, AcinReduction};
pub use error::{Error, Result};
pub use family::{params_at, scan, validity_interval, FamilyTable, TangleTarget, ValidityInterval};
pub use invariants::{
    concurrence, concurrence_of_assistance, grassl, kempe_i5, local_tangle, tangle_vector, three_tangle,
    GrasslValue, TangleVector,
};
pub use sampling::{min_curve_state, sample_scatter, Ensemble, ScatterRow};
pub use slocc::{
    apply_slocc, classify, diagonal_s_of_t, monotonicity_trial, random_two_kraus_channel, Branch, KrausChannel,
    SloccClass, SloccLabel,
};
pub use state::{preset_state, DensityMatrix, LocalOp, Preset, PureState3};
