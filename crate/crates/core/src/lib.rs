pub mod bernstein;
pub mod cli;
pub mod operators;
pub mod ratmat;
pub mod subspace;
pub mod symmetric;
