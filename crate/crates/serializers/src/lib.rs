//! CSV datasets and update streams.

mod dataset;
mod error;
mod streams;
mod table;

pub use dataset::{load_dataset, write_dataset, CsvVariant, Manifest, Table, DYNAMIC_DIR, ROOT_DIR, STATIC_DIR};
pub use error::SerializeError;
pub use streams::{read_streams, write_streams, StreamProperties, Streams};
