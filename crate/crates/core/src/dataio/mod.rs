//! Rating ingestion: dataset parsers, the sparse rating matrix and
//! seeded train/test splitting.

mod matrix;
mod parse;
mod split;

pub use matrix::{build_matrix, RatingMatrix, RatingScale};
pub use parse::{parse_csv, parse_movielens, ColumnMap, ErrorPolicy, Parsed, RatingRecord};
pub use split::{split, SplitPair};
