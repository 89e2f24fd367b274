//! Mode transformations of the optical elements and their composition.
//!
//! A [`ModeUnitary`] `U` acts on creation operators column-wise:
//! `a_j† -> sum_i U[i][j] a_i†`. Column `j` is therefore where a single
//! photon entering mode `j` ends up.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{Polarization, PolarizedMode};

/// Entrywise tolerance for `U†U = I`.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    entries: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    /// Wraps a square matrix without checking unitarity.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// `self` followed by `next`, i.e. the matrix product `next * self`.
    pub fn then(&self, next: &ModeUnitary) -> Result<ModeUnitary> {
        if self.dim() != next.dim() {
            return Err(Error::DimensionMismatch {
                unitary: next.dim(),
                state: self.dim(),
            });
        }
        Ok(ModeUnitary {
            entries: &next.entries * &self.entries,
        })
    }

    pub fn adjoint(&self) -> ModeUnitary {
        ModeUnitary {
            entries: self.entries.adjoint(),
        }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((gram[(i, j)] - expect).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARITY_TOLERANCE
    }

    /// Largest entrywise distance between two unitaries of equal size.
    pub fn max_deviation(&self, other: &ModeUnitary) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn set_block(&mut self, a: usize, b: usize, block: [[f64; 2]; 2]) {
        self.entries[(a, a)] = block[0][0].into();
        self.entries[(a, b)] = block[0][1].into();
        self.entries[(b, a)] = block[1][0].into();
        self.entries[(b, b)] = block[1][1].into();
    }
}

fn check_port(port: usize, dim: usize) -> Result<()> {
    if port * 2 + 1 >= dim {
        return Err(Error::PortOutOfRange {
            port,
            ports: dim / 2,
        });
    }
    Ok(())
}

fn check_pair(port_a: usize, port_b: usize, dim: usize) -> Result<()> {
    check_port(port_a, dim)?;
    check_port(port_b, dim)?;
    if port_a == port_b {
        return Err(Error::PortCollision(port_a));
    }
    Ok(())
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(x))
    }
}

/// Polarization rotator on `port`:
/// `a_H† -> cos x a_H† + sin x a_V†`, `a_V† -> -sin x a_H† + cos x a_V†`.
pub fn rotator_unitary(x: f64, port: usize, dim: usize) -> Result<ModeUnitary> {
    check_port(port, dim)?;
    check_finite(x)?;
    let (s, c) = x.sin_cos();
    let mut u = ModeUnitary::identity(dim);
    let h = PolarizedMode::h(port).index();
    let v = PolarizedMode::v(port).index();
    u.set_block(h, v, [[c, -s], [s, c]]);
    Ok(u)
}

/// Polarizing beamsplitter between two ports: H is transmitted and stays
/// on its port, V is reflected into the other port. After the element,
/// `port_a` carries `a_H` and `b_V`, `port_b` carries `b_H` and `a_V`.
/// All routing amplitudes are `+1`.
pub fn pbs_unitary(port_a: usize, port_b: usize, dim: usize) -> Result<ModeUnitary> {
    check_pair(port_a, port_b, dim)?;
    let mut u = ModeUnitary::identity(dim);
    let av = PolarizedMode::v(port_a).index();
    let bv = PolarizedMode::v(port_b).index();
    u.set_block(av, bv, [[0.0, 1.0], [1.0, 0.0]]);
    Ok(u)
}

/// Polarization-independent beamsplitter of transmittance `t`. For each
/// polarization the `(port_a, port_b)` block is
/// `[[√t, -√(1-t)], [√(1-t), √t]]`.
pub fn beamsplitter_unitary(
    port_a: usize,
    port_b: usize,
    t: f64,
    dim: usize,
) -> Result<ModeUnitary> {
    check_pair(port_a, port_b, dim)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Transmittance(t));
    }
    let tt = t.sqrt();
    let r = (1.0 - t).sqrt();
    let mut u = ModeUnitary::identity(dim);
    for pol in [Polarization::H, Polarization::V] {
        let a = PolarizedMode::new(port_a, pol).index();
        let b = PolarizedMode::new(port_b, pol).index();
        u.set_block(a, b, [[tt, -r], [r, tt]]);
    }
    Ok(u)
}

/// Balanced beamsplitter; shorthand for `beamsplitter_unitary(.., 0.5, ..)`
/// with the exact `1/√2` entries.
pub fn balanced_beamsplitter(port_a: usize, port_b: usize, dim: usize) -> Result<ModeUnitary> {
    let mut u = beamsplitter_unitary(port_a, port_b, 0.5, dim)?;
    for pol in [Polarization::H, Polarization::V] {
        let a = PolarizedMode::new(port_a, pol).index();
        let b = PolarizedMode::new(port_b, pol).index();
        u.set_block(
            a,
            b,
            [
                [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
                [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            ],
        );
    }
    Ok(u)
}

/// Phase `e^{i phi}` on a single mode.
pub fn phase_shift_unitary(mode: PolarizedMode, phi: f64, dim: usize) -> Result<ModeUnitary> {
    check_port(mode.port, dim)?;
    check_finite(phi)?;
    let mut u = ModeUnitary::identity(dim);
    let m = mode.index();
    u.entries[(m, m)] = Complex64::from_polar(1.0, phi);
    Ok(u)
}

/// An optical element bound to ports of a circuit. Angles are radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircuitElement {
    Rotator {
        port: usize,
        angle: f64,
    },
    PolarizingBeamsplitter {
        port_a: usize,
        port_b: usize,
    },
    Beamsplitter {
        port_a: usize,
        port_b: usize,
        transmittance: f64,
    },
    PhaseShift {
        mode: PolarizedMode,
        phase: f64,
    },
}

impl CircuitElement {
    pub fn unitary(&self, dim: usize) -> Result<ModeUnitary> {
        match *self {
            CircuitElement::Rotator { port, angle } => rotator_unitary(angle, port, dim),
            CircuitElement::PolarizingBeamsplitter { port_a, port_b } => {
                pbs_unitary(port_a, port_b, dim)
            }
            CircuitElement::Beamsplitter {
                port_a,
                port_b,
                transmittance,
            } => beamsplitter_unitary(port_a, port_b, transmittance, dim),
            CircuitElement::PhaseShift { mode, phase } => phase_shift_unitary(mode, phase, dim),
        }
    }
}

/// Ordered list of elements on `num_ports` spatial ports; the first element
/// acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub num_ports: usize,
    pub elements: Vec<CircuitElement>,
}

impl Circuit {
    pub fn new(num_ports: usize) -> Self {
        Self {
            num_ports,
            elements: Vec::new(),
        }
    }

    pub fn with(mut self, element: CircuitElement) -> Self {
        self.elements.push(element);
        self
    }

    pub fn push(&mut self, element: CircuitElement) {
        self.elements.push(element);
    }

    pub fn num_modes(&self) -> usize {
        self.num_ports * 2
    }
}

/// Product of the element unitaries in application order.
pub fn compose(circuit: &Circuit) -> Result<ModeUnitary> {
    let dim = circuit.num_modes();
    circuit
        .elements
        .iter()
        .try_fold(ModeUnitary::identity(dim), |acc, el| {
            acc.then(&el.unitary(dim)?)
        })
}
