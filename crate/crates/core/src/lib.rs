//! Enumeration and classification of edge-to-edge gluings of unit squares
//! that fold into convex polyhedra.
//!
//! The pipeline has three stages:
//!
//! 1. [`enumerate`] lists every gluing of `n` squares that is a topological
//!    sphere with no vertex angle above 2π.
//! 2. [`geodesic`] computes exact squared geodesic distances between the cone
//!    points of each gluing with a window-propagation shortest-path engine.
//! 3. [`classify`] normalizes the distance matrices up to scale and
//!    permutation and groups gluings into isomorphism classes.
//!
//! [`octagon`] covers doubly covered polygons glued from squares, which are
//! all octagons cut from lattice rectangles.

pub mod canonical;
pub mod classify;
pub mod dsu;
pub mod enumerate;
pub mod geodesic;
pub mod lattice;
pub mod net;
pub mod octagon;
pub mod oracle;
pub mod pipeline;
pub mod rational;
pub mod surface;
pub mod trace;

pub use canonical::{canonical_code, canonical_form, CanonicalCode};
pub use classify::{canonicalize, classify, isomorphic, CanonicalMatrix, GluingClass};
pub use enumerate::{enumerate_gluings, split_task, EnumerationTask};
pub use geodesic::{distance_matrix, shortest_distances, DistanceMatrix, GeodesicTrace};
pub use octagon::{count_dc_octagons, enumerate_dc_octagons, lower_bound_family, octagon_to_gluing, OctagonParams};
pub use surface::{cone_points, validate, vertex_classes, Gluing, Side, SurfaceCheck, VertexClass};
