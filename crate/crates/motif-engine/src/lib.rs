//! Exact temporal-motif analysis over undirected dynamic graphs: pattern
//! definitions, a fixed nine-shape catalog, matching (classify / detect /
//! enumerate / count / first occurrence), minimal construction, and
//! whole-catalog queries.

pub mod catalog;
pub mod construct;
pub mod matcher;
pub mod multi;
pub mod oracle;
pub mod pattern;

pub use catalog::{names as catalog_names, pattern as catalog_pattern, shape, MotifShape, CATALOG};
pub use construct::construct_completion;
pub use matcher::{
    classify_exact, count_instances, detect, enumerate_instances, first_occurrence, MotifInstance,
};
pub use multi::{multi_count, multi_detect, multi_first_occurrence};
pub use pattern::{MotifDef, MotifPattern, PatternError};
