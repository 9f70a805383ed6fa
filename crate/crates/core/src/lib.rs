//! Combinatorial models of moduli spaces of Riemann surfaces with boundary.
//!
//! The crate enumerates the non-degenerate cells of the parallel slit domain
//! complex for a given genus, number of boundary curves and number of
//! punctures, assembles the relative cochain complex and computes its
//! cohomology exactly.  By Poincaré–Lefschetz duality this is the homology of
//! the moduli space, shifted by the top dimension `3h`.
//!
//! The main entry points are:
//!
//! * [`perm`] — permutations of tableaux and the deletion maps,
//! * [`complex`] — cells, faces and the enumeration of non-degenerate cells,
//! * [`algebra`] — sparse integer elimination, Smith normal form, ranks mod p,
//! * [`homology`] — the cochain complex and homology tables,
//! * [`classes`] — cochains, class orders and the stacking product.

pub mod algebra;
pub mod classes;
pub mod complex;
pub mod error;
pub mod homology;
pub mod perm;

pub use algebra::{Coefficients, Order, SmithForm, SparseIntMatrix};
pub use classes::{ClassCoordinates, Cochain};
pub use complex::{Cell, CellSet, ModuliIndex};
pub use error::{Error, Result};
pub use homology::{homology_from_cells, ColumnReport, GradedMatrixComplex, HomologyGroup, HomologyTable};
pub use perm::{Symbol, Tableau, TableauPermutation};
