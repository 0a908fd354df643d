//! Deployment-timeline projection for autonomous-vehicle categories.
//!
//! A timeline combines the years until on-vehicle compute meets the
//! (heuristically reduced) planning demand with the years of growth testing
//! and zero-failure QA needed to demonstrate a target failure rate, then
//! appends production and regulatory lead time.

pub mod cli;
pub mod complexity;
pub mod error;
pub mod reliability;
pub mod report;
pub mod scenario;
pub mod sensitivity;
pub mod timeline;

pub use error::{Error, Result};
