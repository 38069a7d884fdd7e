//! Hopf algebras of Frobenius kernels, their comodules, and rational
//! representations of `GL_n`.

pub mod comodule;
pub mod finite;
pub mod group_poly;
pub mod maps;
pub mod rational;

pub use comodule::Comodule;
pub use finite::{
    make_ga_kernel, make_gl_kernel, make_kernel, verify_hopf_axioms, AxiomReport, Family, FiniteHopf, HopfKind,
};
pub use group_poly::GroupPoly;
pub use maps::{exp_alpha_map, kernel_tower_map, quotient_group, HopfMap, Quotient};
pub use rational::RationalRep;
