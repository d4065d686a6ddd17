pub mod approximation;
pub mod correspondence;
pub mod error;
pub mod generate;
pub mod gluing;
pub mod io;
pub mod isometry;
pub mod precompact;
pub mod space;
pub mod traveltime;

pub use error::{Error, Result};
