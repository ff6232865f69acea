pub mod error;
pub mod ground;
pub mod module;
pub mod ring;
pub mod fixtures;
pub mod resolution;
pub mod homology;
pub mod picard;
pub mod document;
pub mod report;
pub mod cli;
