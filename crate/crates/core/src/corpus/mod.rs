//! Tweets, disasters, dataset loading, and partitioning.

mod csv_io;
mod registry;
mod split;
pub mod synthetic;
mod types;

pub use csv_io::{
    infer_need, load_dataset, load_from_reader, parse_flexible_timestamp, write_canonical, write_canonical_file,
    AdapterColumns, LoadReport, CANONICAL_HEADER, TIMESTAMP_FORMAT,
};
pub use registry::{Registry, GROUP_HURRICANES, GROUP_TYPES};
pub use split::{
    split_indices, split_train_test, split_train_test_stratified, stratified_kfold, stratified_kfold_labels,
    stratified_split_indices, FoldAssignment, SplitIndices, DEFAULT_TRAIN_FRACTION,
};
pub use types::{Dataset, DisasterSpec, DisasterType, Label, NeedCategory, Phase, Tweet};
