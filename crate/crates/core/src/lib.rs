pub mod error;
pub mod frames;
pub mod cli;
pub mod complexifier;
pub mod cst;
pub mod group;
pub mod linalg;
pub mod measure;
pub mod quadrature;
