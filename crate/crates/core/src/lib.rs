//! Besicovitch sets in the affine plane over a finite field.
//!
//! A configuration picks one line per direction (the q finite slopes plus
//! the vertical direction). This crate counts the resulting union exactly,
//! checks the multiplicity structure of its points, searches every
//! configuration for the smallest possible union, and computes the moments
//! of the size of a uniformly random configuration.

pub mod besicovitch;
pub mod cli;
pub mod geom;
pub mod gf;
pub mod report;
pub mod search;
pub mod stats;

pub use besicovitch::{
    b0_config, conditional_check, incidence_report, multiplicity_map, normalize,
    triple_point_exceptions, ConditionalCheck, IncidenceReport, LineConfig, MultiplicityGrid,
};
pub use geom::{Line, Point, Slope};
pub use gf::{Felt, FieldTable};
