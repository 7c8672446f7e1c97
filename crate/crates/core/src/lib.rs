//! Exact toric combinatorics for wild hypersurface bundles.
//!
//! The crate works with smooth complete fans given by integer ray generators
//! and maximal cones, and provides:
//!
//! - [`lattice`]: integer/rational linear algebra (Smith normal form,
//!   integer solving, cone coordinates, extremal-ray tests),
//! - [`fan`]: validation, face queries, walls,
//! - [`primitive`]: primitive collections and relations, Mori-cone
//!   extremality, Fano test, normal-bundle splitting types,
//! - [`divisor`]: class group, linear equivalence, intersection numbers,
//! - [`bundle`]: fans of projectivized split bundles,
//! - [`whb`]: the splitting-type divisibility criterion for wild
//!   hypersurface bundles and the Fano classification dispatch,
//! - [`cox`]: Cox-coordinate forms over prime fields, smoothness and
//!   fiberwise p-th power checks,
//! - [`catalog`]: named fans, bundles and equations,
//! - [`reproduce`]: the aggregate regression report used by the CLI.

pub mod bundle;
pub mod catalog;
pub mod cox;
pub mod divisor;
pub mod fan;
pub mod lattice;
pub mod primitive;
pub mod reproduce;
pub mod whb;

mod error;

pub use bundle::{BundleSpec, TotalSpaceFan};
pub use divisor::{ClassGroup, DivisorClass, TorusDivisor};
pub use error::{Error, Result};
pub use fan::{Fan, ValidationReport, Wall};
pub use primitive::{CurveClass, PrimitiveCollection, PrimitiveRelation};
