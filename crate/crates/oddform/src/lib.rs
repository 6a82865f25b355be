//! Exact computational models of odd form algebras over finite rings:
//! base rings and involutive algebras, quadratic modules and their unitary
//! groups, hyperbolic families with transvections and dilations, Steinberg
//! presentations, homotopes and localizations, and the stability/Gauss
//! decomposition algorithms, everything checkable exhaustively or by
//! seeded sampling at desk scale.

pub mod algebra;
pub mod error;
pub mod checks;
pub mod morph;
pub mod nilmod;
pub mod ofa;
pub mod quadmod;
pub mod report;
pub mod ring;

pub use algebra::{Algebra, Elem};
pub use error::{Error, Result};
pub use nilmod::NilModule2;
pub use quadmod::{FamilyKind, NamedFamily, QuadraticModule};
pub use report::{Report, Violation};
pub use ring::{CommRing, MultSubset};
