//! Regularity and counting machinery for d-dimensional matrices over finite
//! alphabets.
//!
//! * [`tensor`]: dense tensors, combinatorial boxes, exact weights and densities.
//! * [`regularity`]: ε-regularity checks with verified witnesses, witness splits
//!   and the line-density property of regular 2D matrices.
//! * [`partition`]: block partitions with ordinary/exceptional classes and the
//!   energy functions driving the decomposition.
//! * [`szemeredi`]: the energy-increment regularity decomposition.
//! * [`counting`]: structured and unstructured occurrence counting and the
//!   counting-lemma lower bounds.
//! * [`patterns`]: ε-regular pattern certification, random and Hadamard
//!   generators, and the construction whose blocks are regular but which
//!   avoids a fixed 2×2×2 target.
//!
//! All densities, energies and bounds are exact rationals.

pub mod counting;
pub mod error;
pub mod partition;
pub mod patterns;
pub mod rational;
pub mod regularity;
pub mod szemeredi;
pub mod tensor;

pub use error::{Error, Result};
pub use rational::{Delta, Epsilon, Rational};
pub use regularity::{check_regularity, CheckConfig, CheckMode, RegularityCertificate, Verdict};
pub use tensor::{Alphabet, BlockRef, Density, Tensor};
