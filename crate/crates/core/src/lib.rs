pub mod api;
pub mod bounds;
pub mod config;
pub mod eigen;
pub mod error;
pub mod generate;
pub mod io;
pub mod norms;
pub mod rng;
pub mod solve;
pub mod spositivity;
pub mod tcp;
pub mod tensor;
pub mod vector;

pub use error::{Error, Result};
pub use tensor::{IndexSet, Tensor};
pub use vector::NormP;
