//! Exact tools for Cohn's autocorrelation problem over finite fields.
//!
//! A function `f: F_q → μ_m ∪ {0}` with `f(0) = 0`, `f(1) = 1` is *Cohn* when
//! `Σ_x f(x)·conj(f(x+h)) = -1` for every `h ≠ 0`. Nontrivial multiplicative
//! characters are Cohn; over prime fields with root-of-unity values the
//! converse holds. This crate searches for Cohn functions exhaustively, traces
//! the argument for the converse on each solution with exact cyclotomic
//! arithmetic, checks the characteristic-`p` reduction, and builds the
//! linear-automorphism counterexamples over `F_{p^k}`, `k > 1`.

#![allow(clippy::manual_is_multiple_of)]

pub mod characters;
pub mod cli;
pub mod counterexample;
pub mod cyclotomic;
pub mod finite_field;
pub mod proofcheck;
pub mod reduction;
pub mod search;
