pub mod bounds;
pub mod cli;
pub mod curve;
pub mod error;
pub mod field;
pub mod linalg;
pub mod mu;
pub mod oracle;
pub mod rho;
