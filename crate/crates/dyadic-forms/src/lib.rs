//! Representation and n-universality of classic integral quadratic lattices
//! over dyadic local fields of degree ≤ 2 over ℚ₂, decided through good BONGs
//! (Bases of Norm Generators), Beli's representation conditions, the
//! classification theorems, and minimal test sets.

pub mod blattice;
pub mod ext;
pub mod localfield;
pub mod qspace;
pub mod represent;
pub mod universal;
