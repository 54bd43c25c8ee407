pub mod coupling;
pub mod cylinder;
pub mod error;
pub mod event;
pub mod exact;
pub mod geometry;
pub mod height;
pub mod io;
pub mod kasteleyn;
pub mod oracle;

pub use error::{Error, Result};
