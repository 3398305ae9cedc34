//! Command line calculator for multiple zeta values, alternating Euler sums
//! and hyperlogarithms: the expression grammar, reduction-table cache, and
//! the subcommand implementations over `periodlab-core`.

pub mod cache;
pub mod commands;
pub mod engine;
pub mod expr;
pub mod output;
pub mod selftest;
