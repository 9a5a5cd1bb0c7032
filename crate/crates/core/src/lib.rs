//! Directed flag complexes and path complexes of digraphs: regular path
//! homology, one-step homotopy systems on digraph maps, the chain homotopies
//! they induce, and persistent homology of shortest-path filtrations.

pub mod chains;
pub mod cli;
pub mod complexes;
pub mod digraph;
pub mod experiments;
pub mod field;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod persistence;
pub mod rational;
