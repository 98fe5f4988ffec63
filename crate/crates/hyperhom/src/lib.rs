//! Simulation of hyper-entangled two-photon states (polarization ⊗ momentum)
//! and their multimode Hong-Ou-Mandel interferometry.
//!
//! The simulator tracks a pair of photons as a superposition of
//! creation-operator pairs over eight labeled input modes (path × arm ×
//! polarization) and eight output modes behind a 50/50 beamsplitter. Each
//! photon carries an accumulated optical delay; Gaussian temporal wavepacket
//! overlaps decide how well amplitudes interfere. On top of the state algebra
//! sit declarative optical elements (waveplates, phase shifters, delays,
//! blockers, the beamsplitter), source constructors for the Bell and
//! hyper-entangled states, coincidence detection, and a scan engine that
//! reproduces dip/peak curves, phase fringes, and the bosonic–fermionic
//! transition of the four-term hyper-entangled state.
//!
//! Entry points:
//! - [`fock`] — mode labels, [`fock::TwoPhotonState`], inner products;
//! - [`elements`] — optical-element transformations;
//! - [`source`] — state constructors and source parameters;
//! - [`detection`] — coincidence probabilities and curve statistics;
//! - [`experiments`] — scans, falsification checks, and the brute-force
//!   oracle used to cross-check the fast projection path;
//! - [`config`] / [`run`] — the declarative experiment config and the CLI
//!   runner behind the `hyperhom` binary.
//!
//! The `book/` directory of the repository holds a narrative guide; its code
//! snippets are compiled as doc-tests (see the bottom of this file).

pub mod config;
pub mod detection;
pub mod elements;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod oracle;
pub mod run;
pub mod source;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s. Converts the interferometer path
/// displacement Δx into a photon delay Δτ = Δx / c.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Amplitudes below this magnitude are dropped when terms are merged.
pub const AMPLITUDE_EPS: f64 = 1e-14;

// Each book chapter is attached to a hidden module so that `cargo test`
// compiles and runs the chapter's code blocks.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/elements.md")]
    mod elements {}
    #[doc = include_str!("../../../book/src/interference.md")]
    mod interference {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
