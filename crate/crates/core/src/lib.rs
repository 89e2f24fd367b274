//! Simulation and verification of heralded linear-optical gates on
//! polarized photonic modes.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: occupation-number bases and state vectors per photon-number sector.
//! * [`unitary`]: mode unitaries of rotators, (polarizing) beamsplitters and
//!   phase shifters, and circuit composition.
//! * [`evolution`]: the permanent-based lift of a mode unitary to Fock space.
//! * [`herald`]: detector post-selection.
//! * [`nls`]: the two-rotator non-linear sign gate, in closed form and by
//!   simulation.
//! * [`search`]: numerical rediscovery of its optimal angles.
//!
//! ```
//! use linopt::nls::{optimal_params, simulate_nls};
//!
//! let opt = optimal_params();
//! let report = simulate_nls(opt.params()).unwrap();
//! assert!(report.residual < 1e-24);
//! assert!((report.success_probability - (3.0 - 2f64.sqrt()) / 7.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod evolution;
pub mod fock;
pub mod herald;
pub mod nls;
pub mod search;
pub mod unitary;

pub use error::{Error, Result};
pub use num_complex::Complex64;

// The guide's code blocks compile and run as doc-tests, one module per chapter.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fock-basis.md")]
    pub mod fock_basis {}
    #[doc = include_str!("../../../book/src/mode-unitaries.md")]
    pub mod mode_unitaries {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    pub mod evolution {}
    #[doc = include_str!("../../../book/src/heralding.md")]
    pub mod heralding {}
    #[doc = include_str!("../../../book/src/nls-gate.md")]
    pub mod nls_gate {}
    #[doc = include_str!("../../../book/src/search.md")]
    pub mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
