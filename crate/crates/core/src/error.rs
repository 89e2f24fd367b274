use thiserror::Error;

use crate::fock::PolarizedMode;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a Fock basis needs at least one mode")]
    NoModes,
    #[error("{photons} photons exceeds the photon cap of {cap}")]
    PhotonCapExceeded { photons: usize, cap: usize },
    #[error(
        "basis of {modes} modes with {photons} photons has {size} states, above the cap of {cap}"
    )]
    BasisTooLarge {
        modes: usize,
        photons: usize,
        size: u128,
        cap: usize,
    },
    #[error("occupation vector has {found} modes, expected {expected}")]
    ModeCountMismatch { expected: usize, found: usize },
    #[error("occupation {0:?} is not in the basis")]
    NotInBasis(Vec<u32>),
    #[error("states live in different bases ({left_modes} modes/{left_photons} photons vs {right_modes} modes/{right_photons} photons)")]
    BasisMismatch {
        left_modes: usize,
        left_photons: usize,
        right_modes: usize,
        right_photons: usize,
    },
    #[error("amplitude vector has length {found}, basis has {expected} states")]
    AmplitudeLength { expected: usize, found: usize },
    #[error("logical amplitudes are not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("target and ancilla must be distinct modes, both are {0}")]
    ModeCollision(PolarizedMode),
    #[error("port {port} is out of range for a circuit with {ports} ports")]
    PortOutOfRange { port: usize, ports: usize },
    #[error("mode {mode} is out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("a two-port element needs distinct ports, got {0} twice")]
    PortCollision(usize),
    #[error("transmittance {0} is outside [0, 1]")]
    Transmittance(f64),
    #[error("non-finite parameter {0}")]
    NonFinite(f64),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("permanent of a {size}x{size} matrix exceeds the cap of {cap}")]
    PermanentTooLarge { size: usize, cap: usize },
    #[error("unitary acts on {unitary} modes but the state has {state}")]
    DimensionMismatch { unitary: usize, state: usize },
    #[error("photon-number sectors differ: {input} in, {output} out")]
    SectorMismatch { input: usize, output: usize },
    #[error("herald pattern covers {pattern} modes but the state has {state}")]
    PatternSize { pattern: usize, state: usize },
    #[error("herald pattern measures every mode, nothing is left to keep")]
    NoKeptModes,
    #[error("search range [{min}, {max}] is empty")]
    EmptyRange { min: f64, max: f64 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
