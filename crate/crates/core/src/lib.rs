//! Exact-arithmetic computational topology of finite group actions:
//! groupoids and their loop spaces, transgression of group-cohomology
//! twists, inner local systems, delocalized twisted cohomology, and a
//! twisted periodicity complex. Everything is integer/rational — no
//! floating point anywhere.

pub mod catalog;
pub mod coc;
pub mod deloc;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod gpd;
pub mod grpcohom;
pub mod linalg;
pub mod loops;
pub mod qmodz;
pub mod schema;
pub mod selftest;
pub mod simp;
pub mod zcomplex;

pub use error::{Error, Result};
pub use gpd::{FiniteGroup, FiniteGroupoid, GroupoidMap, NatIso};
pub use qmodz::QmodZ;
