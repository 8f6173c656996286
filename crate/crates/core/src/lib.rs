//! Untwisted Dijkgraaf-Witten counts of closed braids over finite groups,
//! and a checker for their mod-p congruence between a periodic link and
//! its quotient.
//!
//! The pipeline: [`group::FiniteGroup`] supplies the target, a
//! [`braid::BraidWord`] is closed up by [`holonomy::ClosedBraid`], whose
//! fixed points under the Artin action are the representations. [`dw`]
//! tabulates them by meridian and longitude class and [`congruence`] compares
//! the tables of `β^{p^k}` and `β`. [`field`] holds the finite-field trace
//! check used as a linear-algebra sanity test.

pub mod braid;
pub mod cli;
pub mod congruence;
pub mod dw;
pub mod field;
pub mod group;
pub mod holonomy;
