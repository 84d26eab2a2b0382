//! Classical and quantum semi-Markov dynamics for two-state systems.
//!
//! The crate builds the one-point dynamics generated by a semi-Markov jump
//! process with a bistochastic jump matrix, together with its quantum
//! counterpart obtained by distributing a bistochastic CPT map in time
//! according to the same waiting-time law. On top of that it provides
//! divisibility tests (stochastic intermediate propagators, positive and
//! completely positive intermediate maps) and two non-Markovianity measures:
//! the trace-distance based one and the divisibility based one.
//!
//! Layout:
//!
//! - [`numerics`]: quadrature, root bracketing, rational Laplace inversion,
//!   small Hermitian eigensolvers and an adaptive Runge-Kutta stepper.
//! - [`renewal`]: waiting-time families and the scalar functions derived from
//!   them (survival, hazard, parity, time-local rates, jump counts).
//! - [`classical`]: propagators, stochasticity, trajectories, Kolmogorov distance.
//! - [`montecarlo`]: trajectory sampling and empirical Markov tests.
//! - [`quantum`]: qubit maps, transfer and Choi matrices, evolution, trace distance.
//! - [`measures`]: growth regions, both measures and the divisibility class.
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental functions
//! go through `libm`, so results are bit-identical across platforms.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classical;
mod error;
pub(crate) mod math;
pub mod measures;
pub mod montecarlo;
pub mod numerics;
pub mod quantum;
pub mod renewal;

pub use error::{Error, Result};
