//! Subgroups of GL₂(ℤ/Nℤ), genera of the modular curves they define, and
//! degrees of points on those curves coming from Galois images.

pub mod catalog;
pub mod coset;
pub mod error;
pub mod geometry;
pub mod points;
pub mod subgroup;
pub mod zmod;

pub use catalog::{CatalogEntry, ScreenReport, ScreenRow, Table1Row, Table2Row};
pub use coset::CosetTable;
pub use error::{Error, Result};
pub use geometry::{CosetSpace, CurveData};
pub use points::{FiberDegrees, GaloisImageContext, LevelReduction, PointDegreeReport, Verdict};
pub use subgroup::{SubgroupKind, SubgroupSpec};
pub use zmod::{Mat2, UnitSubgroup};
