pub mod analytics;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluate;
pub mod features;
pub mod models;
pub mod plot;
pub mod preprocess;
pub mod rng;

pub use error::{Error, Result};
