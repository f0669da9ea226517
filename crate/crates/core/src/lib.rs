pub mod deatten;
pub mod error;
pub mod green;
pub mod harness;
pub mod imaging;
pub mod medium;
pub mod quadrature;
pub mod spectral;
