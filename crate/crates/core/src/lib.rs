//! Desk-scale computation of Riemann zeta zeros and the pair-correlation
//! statistics built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod engine;
pub mod paircorr;
pub mod quadrature;
pub mod reduce;
pub mod store;
pub mod zeta;
