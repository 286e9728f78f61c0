//! Quadratic residues and their distribution: congruence solvers, Legendre and
//! Jacobi symbols, residue-class descriptions of the primes for which a given
//! integer is a residue, densities of residue patterns, class numbers, character
//! sums, residue patterns along arithmetic progressions, central-limit
//! experiments for short character sums and a square-root identification
//! protocol. Every closed form is paired with a brute-force check.

pub mod analytic;
pub mod arith;
pub mod density;
pub mod error;
pub mod forms;
pub mod progressions;
pub mod randomness;
pub mod reciprocity;
pub mod roots;
pub mod symbols;
pub mod weil;
pub mod zkp;

pub use analytic::{LValue, RealPrimitiveCharacter};
pub use arith::{Congruence, Factorization, SquarefreeSplit};
pub use density::{Density, GF2Matrix, ScanMode};
pub use error::{Error, Result};
pub use forms::{ClassNumber, PellSolution, QForm};
pub use progressions::{APFamilySpec, APParameters, PrimeClass, QuotientDiagram, StandardTuple};
pub use reciprocity::{ClassSplit, ResidueClassSet};
pub use symbols::{JacobiTrace, ResidueTable};
pub use weil::{MonicPoly, WeilPoly};
pub use zkp::{PublicKey, ZkpKeys, ZkpSession};
