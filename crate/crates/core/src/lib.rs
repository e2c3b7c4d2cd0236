//! Homomorphic hashing for sparse coefficient extraction.
//!
//! The crate builds arithmetic circuits over large algebras (integer
//! polynomials, the group algebra of `Z_2^n`, the union-product algebra of a
//! power set) and extracts single coefficients of their outputs after pushing
//! the circuit through a ring homomorphism into a much smaller algebra.
//! Running times scale with the support of the extracted object rather than
//! with the ambient dimension.
//!
//! Problem front-ends:
//!
//! * [`subset_sum`]: counting modulo random primes, an adaptive Las Vegas
//!   decision procedure, and a derandomized majority-vote counter.
//! * [`z2_hash`]: Walsh-Hadamard machinery, Linear Sat and Set Partition.
//! * [`union_hash`], [`cnf_projections`], [`set_cover`]: Möbius inversion on
//!   set families, the Solomon algebra, and iterative compression.
//!
//! Every fast path has a brute-force counterpart in [`oracles`].

pub mod bench;
pub mod budget;
pub mod circuits;
pub mod cnf_projections;
mod error;
pub mod family;
pub mod formats;
pub mod numtheory;
pub mod oracles;
pub mod poset_moebius;
pub mod rng;
pub mod set_cover;
pub mod subset_sum;
pub mod union_hash;
pub mod z2_hash;

pub use error::{Error, Result};
