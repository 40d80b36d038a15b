pub mod algorithms;
pub mod braid;
pub mod bracket;
pub mod circuit;
mod complex_serde;
mod dsu;
pub mod error;
pub mod laurent;
pub mod path_model;
pub mod tl;
pub mod verify;
