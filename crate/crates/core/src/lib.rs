//! Concatenated fermion-to-qubit stabilizer codes.
//!
//! Layers, bottom up:
//! - [`gf2`], [`pauli`], [`majorana`]: bit-vector algebra.
//! - [`lattice`]: square/cubic geometry with qubits on edges.
//! - [`fqmap`]: the small-distance fermion-to-qubit map.
//! - [`color`]: triangular fermionic color-code blocks.
//! - [`assembler`]: block layout, padding and the full concatenated code.
//! - [`verifier`]: invariant checks, distance bounds, sector operators.
//! - [`decoder`]: two-stage decoder and Monte Carlo harness.

pub mod assembler;
pub mod color;
pub mod decoder;
pub mod error;
pub mod fqmap;
pub mod gf2;
pub mod lattice;
pub mod majorana;
pub mod pauli;
pub mod verifier;

pub use assembler::{assemble, BlockId, CodeBundle, ConcatenatedCode, LayoutSpec};
pub use color::ColorCodeBlock;
pub use error::{FqError, Result};
pub use gf2::{BinaryMatrix, Bits, RowReducer};
pub use lattice::{Axis, Boundary, Edge, Lattice, Vertex};
pub use majorana::{Flavor, MajoranaMonomial};
pub use pauli::{min_weight_in_coset, Pauli, PauliOperator, SearchBudget, Syndrome};
