//! Exact machinery for the maximal-determinant problem over roots of unity.
//!
//! A square matrix whose entries are ℓ-th roots of unity has `|det M| ≤ n^(n/2)`
//! (Hadamard), with equality exactly for the Butson-type matrices `M M* = nI`.
//! Away from the orders where such matrices exist, the interesting questions are
//! what the true maximum is, which algebraic constructions attain it, and how to
//! *prove* a given matrix maximal. This crate provides the pieces needed to ask
//! and answer those questions exactly, with no floating point on any decision
//! path:
//!
//! * [`cyclo`] — arithmetic in the rings `Z[ω]` and `Z[i]` (entries, inner
//!   products and determinants for ℓ ∈ {2, 3, 4, 6} live in these), minimum
//!   modulus of `n`-term root sums, and norm feasibility of integers.
//! * [`matrix`] — exponent matrices, Gram matrices, exact fraction-free
//!   determinants, and the Butson / weighing / Barba verifiers.
//! * [`ffield`] — small finite fields `GF(p^k)` with cyclotomic classes,
//!   cyclotomic numbers and Gaussian periods; the data behind the Paley-type
//!   constructions and their closed-form determinants.
//! * [`bounds`] — Hadamard and Barba-type upper bounds, plus the
//!   Moyssiadis–Kounias column-extension bound used to prune searches.
//! * [`construct`] — Fourier, tensor, Bush-type, bordered and Paley
//!   constructions, a catalogue of known record matrices, and the morphisms
//!   between fourth-root and real matrices.
//! * [`equiv`] — monomial/permutation equivalence: balancing, colored-graph
//!   encodings and canonical certificates.
//! * [`search`] — the level-by-level Gram-matrix search that certifies a
//!   determinant value maximal at a given order (or refutes a bound), together
//!   with arithmetic non-existence tests.
//! * [`records`] — the table of best known determinants over third and fourth
//!   roots, with provenance flags.
//!
//! The companion `maxdet` binary exposes the same operations as subcommands;
//! see the repository README for the file formats and JSON schemas.

pub mod bounds;
pub mod construct;
pub mod cyclo;
pub mod equiv;
pub mod ffield;
pub mod hiprec;
pub mod matrix;
pub mod records;
pub mod search;

mod error;

pub use error::{Error, Result};
