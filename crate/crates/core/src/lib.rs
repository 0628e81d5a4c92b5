//! Metropolis-optimized triangular meshes over polygonal domains and a
//! linear-triangle finite element solver for the 2D Poisson equation.

pub mod error;
pub mod geometry;
pub mod mesh;

pub use error::{Error, Result};
pub use geometry::{AreaCoords, Point2, TriangleGeom};
pub use mesh::{Mesh, MeshQuality, NodeKind};
pub mod delaunay;
pub mod fem;
pub mod metropolis;
pub mod pipeline;
pub mod problems;
