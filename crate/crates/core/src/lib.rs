//! Twisted Alexander invariants of finitely presented groups over cyclotomic fields.

pub mod alexander;
pub mod coeff;
pub mod curve;
pub mod expr;
pub mod freegroup;
pub mod input;
pub mod laurent;
pub mod presentation;
pub mod repn;
