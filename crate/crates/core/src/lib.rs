//! Feature clocks: explain a 2D embedding in terms of the high-dimensional
//! features it was computed from.
//!
//! A clock is a set of arrows, one per feature, anchored somewhere in the
//! embedding. An arrow points where its feature increases and its length is
//! the feature's largest linear contribution over all projection directions.
//!
//! * [`clockcore`] builds global and local clocks.
//! * [`intergroup`] builds clocks along the edges between neighboring groups.
//! * [`pipeline`] runs a whole command and returns the SVG and JSON report.
//!
//! ```
//! use feature_clock::datasets::iris;
//! use feature_clock::ingest::{validate_config, RawOptions};
//! use feature_clock::pipeline::run_global;
//!
//! let config = validate_config(&RawOptions::default()).unwrap();
//! let out = run_global(&iris(), &config).unwrap();
//! assert_eq!(out.report.clocks[0].arrows.len(), 4);
//! ```

pub mod cli;
pub mod clockcore;
pub mod datasets;
pub mod error;
pub mod grouping;
pub mod ingest;
pub mod intergroup;
pub mod numstats;
pub mod pipeline;
pub mod render;
pub mod report;

pub use error::{Error, Result};
