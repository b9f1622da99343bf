//! Dirichlet fundamental domains (filled in with the domain layer).
