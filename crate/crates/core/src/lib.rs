pub mod combinatorics;
pub mod frames;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod polarization;
pub mod retrieval;
pub mod spectral;
pub mod vandermonde;

#[cfg(test)]
mod test_oracles;
