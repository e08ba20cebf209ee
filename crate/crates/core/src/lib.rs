//! Learning dynamics, smoothness certificates and equilibrium tools for finite games.
//!
//! Games are multilinear: each player's utility is linear in its own mixed strategy.
//! The [`games::Game`] trait exposes the operator `F(x) = (u_1(x_{-1}), …, u_n(x_{-n}))`,
//! which everything else consumes.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bayesian;
pub mod dynamics;
pub mod equilibria;
pub mod games;
pub mod geometry;
pub mod harness;
pub mod lp;
pub mod metrics;
pub mod oracle;
pub mod smoothness;
