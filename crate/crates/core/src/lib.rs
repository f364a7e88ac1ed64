//! Desk-scale workbench for intuitionistic first-order logic with wide
//! conjunctions and disjunctions: a sequent-calculus proof checker, a Kripke
//! forcing evaluator, a finite distributive-lattice engine with prime-filter
//! constructions and duality, and a coherent-fragment engine producing term
//! and Kripke countermodels.

pub mod calculus;
pub mod kripke;
pub mod lattice;
pub mod props;
pub mod resource;
pub mod saturate;
pub mod syntax;
