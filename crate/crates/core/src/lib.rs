//! Textile codes: cyclic words describing link diagrams on the torus.
//!
//! Parsing and canonical forms live in [`code`], the turn-left face tracing
//! in [`realize`], exhaustive generation in [`enumerate`] and the
//! polynomial invariant in [`zenkina`] over the ring in [`ring`].

pub mod catalog;
pub mod code;
pub mod enumerate;
pub mod graph;
pub mod realize;
pub mod ring;
pub mod rotation;
pub mod tables;
pub mod zenkina;

pub use catalog::{catalog_from_file, catalog_to_file, CatalogEntry, CatalogError};
pub use code::{parse_code, serialize_code, CodeError, HomologyClass, KnotSymbol, Sign, Symbol, TextileCode, Word};
pub use enumerate::{
    abstract_count, count_realizable, enumerate_abstract, has_local_knot, has_r1_pattern, has_r2_pattern,
    reduce_catalog, EnumSpec, Stage,
};
pub use graph::{build_graph, extend, ExtendedCode, OrientedEdge, TextileGraph, Vertex};
pub use realize::{is_realizable, next_edge, trace_cycles, CycleReport};
pub use ring::{equals_mod_units, equals_mod_units_localized, parse_poly, render_poly, Poly, Unit};
pub use rotation::faces_via_rotation_system;
pub use zenkina::{invariants_distinct, zenkina_matrix, zenkina_polynomial};
