//! Exact rational toolkit for A∞- and C∞-algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`]: sparse exact linear algebra over ℚ.
//! * [`graded`]: graded bases, vectors, maps and Koszul signs.
//! * [`barcoalg`]: the tensor coalgebra on a desuspended basis, shuffles,
//!   coderivation and coalgebra-map extension.
//! * [`ainf`]: A∞/C∞ structures and morphisms, checked on the bar construction.
//! * [`transfer`]: homotopy transfer from finite (c)dg algebras to homology.
//! * [`hoch`]: Hochschild and Harrison cochains, braces, perturbation and
//!   degeneracy obstructions.
//! * [`invariants`]: loop-space cohomology, homotopy ranks, formality,
//!   realization of homomorphisms and the S²∨S²∨S⁵ classification.
//! * [`cli`]: JSON file formats and the command implementations behind the
//!   `cinf` binary.
//!
//! Sign convention: every operation is stored in the ordinary algebra
//! convention, and evaluated on the bar construction through
//! [`graded::bar_sign`]. Validity of structures, morphisms and compositions is
//! defined by the bar construction (square-zero coderivation, chain coalgebra
//! map), so all signs come from [`graded::koszul_sign`].

pub mod ainf;
pub mod barcoalg;
pub mod cli;
pub mod exactlin;
pub mod graded;
pub mod hoch;
pub mod invariants;
pub mod transfer;

pub use exactlin::Scalar;
