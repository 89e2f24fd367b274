//! The heralded non-linear sign gate built from two polarization rotators
//! and one polarizing beamsplitter.
//!
//! Layout on two spatial ports:
//!
//! ```text
//! port 0 (input, H) --[rot sigma]--+                +--[rot theta]-- port 0: keep H, detect exactly 1 V
//!                                  |      PBS       |
//! port 1 (ancilla 1 V) ------------+                +--------------- port 1: detect 0 H, 0 V  (D1)
//! ```
//!
//! The PBS transmits H and reflects V, so after it port 0 carries the input
//! H light plus the ancilla photon and port 1 carries whatever V light the
//! first rotator produced. Conditioning on an empty port 1 and a single V
//! photon on port 0 leaves the logical state on `(0, H)` as
//!
//! ```text
//! c0 = cos θ,   c1 = cos σ cos 2θ,   c2 = cos² σ cos θ (1 − 3 sin² θ)
//! ```
//!
//! which [`closed_form_coefficients`] evaluates directly and [`simulate_nls`]
//! recovers by full Fock-space evolution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::apply;
use crate::fock::{embed_logical, LogicalAmplitudes, OccupationVector, PolarizedMode};
use crate::herald::{condition, DetectorConstraint, HeraldPattern};
use crate::unitary::{compose, Circuit, CircuitElement, ModeUnitary};

pub const INPUT_PORT: usize = 0;
pub const ANCILLA_PORT: usize = 1;
pub const TARGET_MODE: PolarizedMode = PolarizedMode::h(INPUT_PORT);
pub const ANCILLA_MODE: PolarizedMode = PolarizedMode::v(ANCILLA_PORT);

/// Success probability of the original variable-reflectivity construction,
/// kept for comparison.
pub const KLM_SUCCESS: f64 = 0.25;
/// Rounded success probability quoted for this gate.
pub const QUOTED_SUCCESS: f64 = 0.227;

/// Conditional amplitudes on `|0>, |1>, |2>` of the kept mode.
pub type Coefficients = [Complex64; 3];

/// Rotator angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlsParams {
    pub sigma: f64,
    pub theta: f64,
}

impl NlsParams {
    pub fn new(sigma: f64, theta: f64) -> Result<Self> {
        for x in [sigma, theta] {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        Ok(Self { sigma, theta })
    }

    pub fn from_degrees(sigma: f64, theta: f64) -> Result<Self> {
        Self::new(sigma.to_radians(), theta.to_radians())
    }

    pub fn sigma_degrees(&self) -> f64 {
        self.sigma.to_degrees()
    }

    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }
}

/// Closed-form conditional amplitudes.
pub fn closed_form_coefficients(p: NlsParams) -> [f64; 3] {
    let (st, ct) = p.theta.sin_cos();
    let cs = p.sigma.cos();
    [
        ct,
        cs * (2.0 * p.theta).cos(),
        cs * cs * ct * (1.0 - 3.0 * st * st),
    ]
}

/// Distance from an exact sign flip on `|2>`, up to overall scale:
/// `|c1 - c0|² + |c2 + c0|²`.
pub fn nls_residual(c: &Coefficients) -> f64 {
    (c[1] - c[0]).norm_sqr() + (c[2] + c[0]).norm_sqr()
}

/// The closed-form optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPoint {
    /// `√(21 − 7√2) / 7`
    pub a: f64,
    pub theta_star: f64,
    pub sigma_star: f64,
    /// `A²`
    pub success: f64,
}

impl OptimalPoint {
    pub fn params(&self) -> NlsParams {
        NlsParams {
            sigma: self.sigma_star,
            theta: self.theta_star,
        }
    }
}

pub fn optimal_params() -> OptimalPoint {
    let sqrt2 = std::f64::consts::SQRT_2;
    let a = (21.0 - 7.0 * sqrt2).sqrt() / 7.0;
    OptimalPoint {
        a,
        theta_star: a.acos(),
        sigma_star: ((1.0 - 2.0 * sqrt2) * a).acos(),
        success: a * a,
    }
}

/// The gate circuit for the given angles on two ports.
pub fn nls_circuit(p: NlsParams) -> Circuit {
    Circuit::new(2)
        .with(CircuitElement::Rotator {
            port: INPUT_PORT,
            angle: p.sigma,
        })
        .with(CircuitElement::PolarizingBeamsplitter {
            port_a: INPUT_PORT,
            port_b: ANCILLA_PORT,
        })
        .with(CircuitElement::Rotator {
            port: INPUT_PORT,
            angle: p.theta,
        })
}

/// Empty D1 port and a single V photon on the through port; `(0, H)` kept.
pub fn nls_herald() -> HeraldPattern {
    HeraldPattern::new(
        4,
        [
            (PolarizedMode::v(INPUT_PORT), DetectorConstraint::Exactly(1)),
            (
                PolarizedMode::h(ANCILLA_PORT),
                DetectorConstraint::Exactly(0),
            ),
            (
                PolarizedMode::v(ANCILLA_PORT),
                DetectorConstraint::Exactly(0),
            ),
        ],
    )
    .expect("herald modes lie inside the two-port circuit")
}

/// Conditional logical output for one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalOutput {
    /// Unnormalized amplitudes on `|0>, |1>, |2>` of the kept mode.
    pub amplitudes: Coefficients,
    pub probability: f64,
}

/// Runs a normalized logical input through a composed gate unitary and
/// the herald pattern, one photon-number sector at a time.
pub fn run_logical(unitary: &ModeUnitary, input: LogicalAmplitudes) -> Result<LogicalOutput> {
    let herald = nls_herald();
    let mut amplitudes = [Complex64::new(0.0, 0.0); 3];
    let mut probability = 0.0;
    for sector in embed_logical(input, TARGET_MODE, ANCILLA_MODE, unitary.dim())? {
        let evolved = apply(unitary, &sector.state)?;
        let cond = condition(&evolved, &herald)?;
        probability += cond.probability;
        if let Some(state) = cond.state() {
            let n = sector.logical;
            amplitudes[n] = state
                .amplitude(&OccupationVector::new(vec![n as u32]))
                .unwrap_or_default();
        }
    }
    Ok(LogicalOutput {
        amplitudes,
        probability,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Simulated,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Simulated => "simulated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport {
    pub params: NlsParams,
    pub coefficients: Coefficients,
    /// `|c0|²`, the success probability when the gate is exactly NLS.
    pub success_probability: f64,
    /// Success probability averaged over uniformly random logical inputs.
    pub mean_success: f64,
    pub residual: f64,
    pub method: Method,
}

impl GateReport {
    fn from_coefficients(params: NlsParams, coefficients: Coefficients, method: Method) -> Self {
        Self {
            params,
            coefficients,
            success_probability: coefficients[0].norm_sqr(),
            mean_success: coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / 3.0,
            residual: nls_residual(&coefficients),
            method,
        }
    }

    /// Largest componentwise distance between two reports' coefficients.
    pub fn max_deviation(&self, other: &GateReport) -> f64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn closed_form_report(p: NlsParams) -> GateReport {
    let c = closed_form_coefficients(p).map(|x| Complex64::new(x, 0.0));
    GateReport::from_coefficients(p, c, Method::ClosedForm)
}

/// Builds the circuit, evolves each logical basis state and reads off the
/// heralded amplitudes.
pub fn simulate_nls(p: NlsParams) -> Result<GateReport> {
    let unitary = compose(&nls_circuit(p))?;
    let mut coefficients = [Complex64::new(0.0, 0.0); 3];
    for (n, c) in coefficients.iter_mut().enumerate() {
        *c = run_logical(&unitary, LogicalAmplitudes::basis(n))?.amplitudes[n];
    }
    Ok(GateReport::from_coefficients(
        p,
        coefficients,
        Method::Simulated,
    ))
}
