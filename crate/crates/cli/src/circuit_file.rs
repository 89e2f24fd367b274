//! Circuit description files.
//!
//! A circuit file is TOML. Angles are degrees. An angle may also be the
//! string `"optimal-sigma"` or `"optimal-theta"`, which resolve to the
//! closed-form NLS angles. Complex numbers are written as a bare number or
//! as `[re, im]`.
//!
//! ```toml
//! ports = 2
//!
//! [[elements]]
//! kind = "rotator"          # rotator | pbs | beamsplitter | phase
//! ports = [0]
//! angle = 45.0
//!
//! [input]
//! kind = "logical"          # logical | explicit
//! alpha = 1.0
//! beta = 0.0
//! gamma = 0.0
//! target = { port = 0, pol = "H" }
//! ancilla = { port = 1, pol = "V" }
//!
//! [[herald]]
//! port = 1
//! pol = "V"
//! constraint = "exactly"    # exactly | at-least | any
//! k = 0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use linopt::fock::{LogicalAmplitudes, OccupationVector, Polarization, PolarizedMode};
use linopt::herald::{DetectorConstraint, HeraldPattern};
use linopt::nls::optimal_params;
use linopt::unitary::{Circuit, CircuitElement};
use linopt::Complex64;
use serde::Deserialize;
use toml::Spanned;

/// A diagnostic pointing at a line of the circuit file.
#[derive(Debug, Clone, PartialEq)]
pub struct FileError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FileError {}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    fn value(self) -> f64 {
        match self {
            Number::Int(i) => i as f64,
            Number::Float(x) => x,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AngleSpec {
    Degrees(Number),
    Named(String),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum ComplexSpec {
    Real(Number),
    Pair([Number; 2]),
}

impl ComplexSpec {
    fn value(self) -> Complex64 {
        match self {
            ComplexSpec::Real(x) => Complex64::new(x.value(), 0.0),
            ComplexSpec::Pair([re, im]) => Complex64::new(re.value(), im.value()),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum PolSpec {
    H,
    V,
}

impl From<PolSpec> for Polarization {
    fn from(p: PolSpec) -> Self {
        match p {
            PolSpec::H => Polarization::H,
            PolSpec::V => Polarization::V,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeSpec {
    port: usize,
    pol: PolSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementSpec {
    kind: String,
    ports: Vec<usize>,
    angle: Option<AngleSpec>,
    transmittance: Option<Number>,
    phase: Option<Number>,
    pol: Option<PolSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    occupation: Vec<u32>,
    amplitude: ComplexSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum InputSpec {
    Logical {
        alpha: ComplexSpec,
        beta: ComplexSpec,
        gamma: ComplexSpec,
        #[serde(default)]
        normalize: bool,
        target: ModeSpec,
        ancilla: ModeSpec,
    },
    Explicit {
        terms: Vec<TermSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeraldSpec {
    port: usize,
    pol: PolSpec,
    constraint: String,
    #[serde(default)]
    k: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    ports: usize,
    #[serde(default)]
    elements: Vec<Spanned<ElementSpec>>,
    input: Spanned<InputSpec>,
    #[serde(default)]
    herald: Vec<Spanned<HeraldSpec>>,
}

/// Input state of a circuit file.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitInput {
    Logical {
        amplitudes: LogicalAmplitudes,
        target: PolarizedMode,
        ancilla: PolarizedMode,
    },
    /// Explicit occupation amplitudes, possibly over several sectors.
    Explicit(Vec<(OccupationVector, Complex64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub circuit: Circuit,
    pub input: CircuitInput,
    pub herald: HeraldPattern,
}

struct LineIndex<'a>(&'a str);

impl LineIndex<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }
}

fn at(line: usize, message: impl Into<String>) -> FileError {
    FileError {
        line: Some(line),
        message: message.into(),
    }
}

fn resolve_angle(spec: &AngleSpec) -> Result<f64, String> {
    match spec {
        AngleSpec::Degrees(x) => {
            let deg = x.value();
            if deg.is_finite() {
                Ok(deg.to_radians())
            } else {
                Err(format!("angle {deg} is not finite"))
            }
        }
        AngleSpec::Named(name) => match name.as_str() {
            "optimal-sigma" => Ok(optimal_params().sigma_star),
            "optimal-theta" => Ok(optimal_params().theta_star),
            other => Err(format!(
                "unknown angle name {other:?} (expected degrees, \"optimal-sigma\" or \"optimal-theta\")"
            )),
        },
    }
}

fn element(spec: &ElementSpec, num_ports: usize) -> Result<CircuitElement, String> {
    let port_count = |n: usize| {
        if spec.ports.len() == n {
            Ok(())
        } else {
            Err(format!(
                "{} takes {n} port(s), got {}",
                spec.kind,
                spec.ports.len()
            ))
        }
    };
    let el = match spec.kind.as_str() {
        "rotator" => {
            port_count(1)?;
            let angle = spec.angle.as_ref().ok_or("rotator needs an angle")?;
            CircuitElement::Rotator {
                port: spec.ports[0],
                angle: resolve_angle(angle)?,
            }
        }
        "pbs" => {
            port_count(2)?;
            CircuitElement::PolarizingBeamsplitter {
                port_a: spec.ports[0],
                port_b: spec.ports[1],
            }
        }
        "beamsplitter" => {
            port_count(2)?;
            let t = spec
                .transmittance
                .ok_or("beamsplitter needs a transmittance")?;
            CircuitElement::Beamsplitter {
                port_a: spec.ports[0],
                port_b: spec.ports[1],
                transmittance: t.value(),
            }
        }
        "phase" => {
            port_count(1)?;
            let pol = spec.pol.ok_or("phase needs a pol")?;
            let phase = spec.phase.ok_or("phase needs a phase in degrees")?;
            CircuitElement::PhaseShift {
                mode: PolarizedMode::new(spec.ports[0], pol.into()),
                phase: phase.value().to_radians(),
            }
        }
        other => {
            return Err(format!(
                "unknown element kind {other:?} (expected rotator, pbs, beamsplitter or phase)"
            ))
        }
    };
    // surface port and parameter errors at the element's own line
    el.unitary(num_ports * 2).map_err(|e| e.to_string())?;
    Ok(el)
}

fn mode(spec: ModeSpec, num_ports: usize) -> Result<PolarizedMode, String> {
    if spec.port >= num_ports {
        return Err(format!(
            "port {} is out of range for {num_ports} ports",
            spec.port
        ));
    }
    Ok(PolarizedMode::new(spec.port, spec.pol.into()))
}

fn constraint(spec: &HeraldSpec) -> Result<DetectorConstraint, String> {
    match spec.constraint.as_str() {
        "exactly" => Ok(DetectorConstraint::Exactly(spec.k)),
        "at-least" => Ok(DetectorConstraint::AtLeast(spec.k)),
        "any" => Ok(DetectorConstraint::Any),
        other => Err(format!(
            "unknown constraint {other:?} (expected exactly, at-least or any)"
        )),
    }
}

pub fn parse(text: &str) -> Result<CircuitFile, FileError> {
    let lines = LineIndex(text);
    let spec: FileSpec = toml::from_str(text).map_err(|e| FileError {
        line: e.span().map(|s| lines.line(s)),
        message: e.message().to_owned(),
    })?;
    if spec.ports == 0 {
        return Err(FileError {
            line: None,
            message: "a circuit needs at least one port".into(),
        });
    }

    let mut circuit = Circuit::new(spec.ports);
    for el in &spec.elements {
        let line = lines.line(el.span());
        circuit.push(element(el.get_ref(), spec.ports).map_err(|m| at(line, m))?);
    }

    let input_line = lines.line(spec.input.span());
    let input = match spec.input.into_inner() {
        InputSpec::Logical {
            alpha,
            beta,
            gamma,
            normalize,
            target,
            ancilla,
        } => {
            let mut amps = LogicalAmplitudes::new(alpha.value(), beta.value(), gamma.value());
            if normalize {
                let n = amps.norm_sqr().sqrt();
                if n == 0.0 {
                    return Err(at(input_line, "cannot normalize an all-zero input"));
                }
                amps = LogicalAmplitudes(amps.0.map(|a| a / n));
            }
            CircuitInput::Logical {
                amplitudes: amps,
                target: mode(target, spec.ports).map_err(|m| at(input_line, m))?,
                ancilla: mode(ancilla, spec.ports).map_err(|m| at(input_line, m))?,
            }
        }
        InputSpec::Explicit { terms } => {
            if terms.is_empty() {
                return Err(at(input_line, "explicit input has no terms"));
            }
            let mut merged: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
            for t in terms {
                if t.occupation.len() != spec.ports * 2 {
                    return Err(at(
                        input_line,
                        format!(
                            "occupation {:?} has {} entries, expected {} (two per port)",
                            t.occupation,
                            t.occupation.len(),
                            spec.ports * 2
                        ),
                    ));
                }
                *merged
                    .entry(OccupationVector::new(t.occupation))
                    .or_default() += t.amplitude.value();
            }
            CircuitInput::Explicit(merged.into_iter().rev().collect())
        }
    };

    let mut herald = HeraldPattern::none(spec.ports * 2);
    for h in &spec.herald {
        let line = lines.line(h.span());
        let spec_h = h.get_ref();
        let m = mode(
            ModeSpec {
                port: spec_h.port,
                pol: spec_h.pol,
            },
            spec.ports,
        )
        .map_err(|m| at(line, m))?;
        if herald.constraint(m).is_detector() {
            return Err(at(line, format!("mode {m} has two detectors")));
        }
        herald = herald
            .with(m, constraint(spec_h).map_err(|m| at(line, m))?)
            .map_err(|e| at(line, e.to_string()))?;
    }

    Ok(CircuitFile {
        circuit,
        input,
        herald,
    })
}
