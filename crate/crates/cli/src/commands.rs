use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use linopt::evolution::apply;
use linopt::fock::{embed_logical, FockBasis, LogicalAmplitudes, OccupationVector, StateVector};
use linopt::herald::{condition, ConditionalState};
use linopt::nls::{
    closed_form_report, nls_residual, optimal_params, simulate_nls, GateReport, NlsParams,
};
use linopt::search::{canonicalize, certify, optimize, SearchConfig};
use linopt::unitary::{compose, ModeUnitary};
use linopt::Complex64;
use serde_json::{json, Value};

use crate::circuit_file::{self, CircuitInput};
use crate::report::{self, num, Report};

/// Closed form and simulation may differ by at most this much.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_UNCONVERGED: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

/// An angle given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleArg {
    Optimal,
    Degrees(f64),
}

/// Parses `optimal`, `61.5`, `61.5deg` or `61.5°`.
pub fn parse_angle(s: &str) -> Result<AngleArg, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("optimal") {
        return Ok(AngleArg::Optimal);
    }
    parse_degrees(t).map(AngleArg::Degrees)
}

pub fn parse_degrees(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let body = t
        .strip_suffix("deg")
        .or_else(|| t.strip_suffix('°'))
        .unwrap_or(t)
        .trim();
    let x: f64 = body
        .parse()
        .map_err(|_| format!("{s:?} is not an angle in degrees"))?;
    if !x.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(x)
}

fn gate_section(r: &GateReport) -> Value {
    json!({
        "coefficients": report::coefficients(&r.coefficients),
        "mean_success": num(r.mean_success),
        "residual": num(r.residual),
        "success_probability": num(r.success_probability),
    })
}

pub fn verify(sigma: AngleArg, theta: AngleArg) -> Result<(Report, u8)> {
    let opt = optimal_params();
    let sigma_rad = match sigma {
        AngleArg::Optimal => opt.sigma_star,
        AngleArg::Degrees(d) => d.to_radians(),
    };
    let theta_rad = match theta {
        AngleArg::Optimal => opt.theta_star,
        AngleArg::Degrees(d) => d.to_radians(),
    };
    let p = NlsParams::new(sigma_rad, theta_rad)?;
    let closed = closed_form_report(p);
    let simulated = simulate_nls(p)?;
    let deviation = closed.max_deviation(&simulated);
    let agrees = deviation <= VERIFY_TOLERANCE;

    let source = |a: AngleArg| match a {
        AngleArg::Optimal => "optimal",
        AngleArg::Degrees(_) => "given",
    };
    let mut r = Report::new("verify");
    r.set("parameters", report::params(p))
        .set(
            "angle_source",
            json!({ "sigma": source(sigma), "theta": source(theta) }),
        )
        .set("closed_form", gate_section(&closed))
        .set("simulated", gate_section(&simulated))
        .set("max_deviation", num(deviation))
        .set("agreement_tolerance", num(VERIFY_TOLERANCE))
        .set("agrees", agrees)
        .set("success_probability", num(simulated.success_probability))
        .set("residual", num(simulated.residual))
        .set("comparison", report::comparison(opt.success));
    Ok((r, if agrees { EXIT_OK } else { EXIT_MISMATCH }))
}

fn candidate_section(c: &linopt::search::Candidate) -> Value {
    json!({
        "converged": c.converged,
        "iterations": c.iterations,
        "parameters": report::params(c.params),
        "residual": num(c.residual),
        "success_probability": num(c.success),
    })
}

pub fn optimize_cmd(cfg: &SearchConfig, certify_step: Option<f64>) -> Result<(Report, u8)> {
    let opt = optimal_params();
    let outcome = optimize(cfg)?;
    let best = outcome.best;
    let canonical = canonicalize(best.params);

    let mut r = Report::new("optimize");
    r.set(
        "config",
        json!({
            "grid_step": report::angle(cfg.grid_step),
            "max_iterations": cfg.max_iterations,
            "refine_tolerance": num(cfg.refine_tolerance),
            "sigma_range": [report::angle(cfg.sigma_range.min), report::angle(cfg.sigma_range.max)],
            "theta_range": [report::angle(cfg.theta_range.min), report::angle(cfg.theta_range.max)],
        }),
    )
    .set("grid_candidates", outcome.grid_candidates.len())
    .set(
        "refined",
        Value::Array(outcome.refined.iter().map(candidate_section).collect()),
    )
    .set("best", candidate_section(&best))
    .set("converged", best.converged)
    .set(
        "closed_form",
        json!({
            "parameters": report::params(opt.params()),
            "success_probability": num(opt.success),
        }),
    )
    .set(
        "deviation",
        json!({
            "sigma_radians": num((canonical.sigma - opt.sigma_star).abs()),
            "theta_radians": num((canonical.theta - opt.theta_star).abs()),
            "success": num((best.success - opt.success).abs()),
        }),
    )
    .set("comparison", report::comparison(opt.success));

    let mut code = if best.converged {
        EXIT_OK
    } else {
        EXIT_UNCONVERGED
    };
    if let Some(step) = certify_step {
        let cert = certify(step)?;
        r.set(
            "certification",
            json!({
                "bound": num(cert.bound),
                "candidates": cert.candidates,
                "exact_points": cert.exact_points.len(),
                "grid_step": report::angle(cert.grid_step),
                "max_success": num(cert.max_success),
                "passed": cert.passed,
            }),
        );
        if !cert.passed {
            code = EXIT_UNCONVERGED;
        }
    }
    Ok((r, code))
}

fn branch_section(cond: &ConditionalState) -> Value {
    let branches: Vec<Value> = cond
        .branches
        .iter()
        .map(|b| {
            let amplitudes: Vec<Value> = b
                .state
                .iter()
                .map(|(occ, amp)| json!({ "amplitude": report::complex(amp), "occupation": occ.counts() }))
                .collect();
            json!({
                "amplitudes": amplitudes,
                "outcome": b.outcome.counts(),
                "probability": num(b.probability),
            })
        })
        .collect();
    json!({
        "branches": branches,
        "herald_modes": cond.herald_modes,
        "kept_modes": cond.kept_modes,
        "mixed": cond.is_mixed(),
        "probability": num(cond.probability),
    })
}

fn explicit_sectors(
    terms: &[(OccupationVector, Complex64)],
    num_modes: usize,
) -> Result<Vec<StateVector>> {
    let mut by_total: BTreeMap<usize, Vec<&(OccupationVector, Complex64)>> = BTreeMap::new();
    for t in terms {
        by_total.entry(t.0.total()).or_default().push(t);
    }
    let mut out = Vec::new();
    for (total, ts) in by_total {
        let basis = Arc::new(FockBasis::new(num_modes, total)?);
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (occ, a) in ts {
            amps[basis.position(occ)?] += a;
        }
        out.push(StateVector::new(basis, amps)?);
    }
    Ok(out)
}

// Conditional amplitude on `n` photons in the target with every other kept
// mode empty, for each logical basis input `|n>`.
fn logical_gate(
    unitary: &ModeUnitary,
    file: &circuit_file::CircuitFile,
    target: linopt::fock::PolarizedMode,
    ancilla: linopt::fock::PolarizedMode,
) -> Result<Option<[Complex64; 3]>> {
    let kept = file.herald.kept_modes();
    let Some(target_pos) = kept.iter().position(|&m| m == target.index()) else {
        return Ok(None);
    };
    if !file.herald.is_exact() {
        return Ok(None);
    }
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for (n, slot) in c.iter_mut().enumerate() {
        let sectors = embed_logical(LogicalAmplitudes::basis(n), target, ancilla, unitary.dim())?;
        let evolved = apply(unitary, &sectors[0].state)?;
        let cond = condition(&evolved, &file.herald)?;
        if let Some(state) = cond.state() {
            let mut counts = vec![0u32; kept.len()];
            counts[target_pos] = n as u32;
            *slot = state
                .amplitude(&OccupationVector::new(counts))
                .unwrap_or_default();
        }
    }
    Ok(Some(c))
}

pub fn simulate(path: &str) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let file = circuit_file::parse(&text).map_err(|e| anyhow!("{path}: {e}"))?;
    let unitary = compose(&file.circuit)?;
    let num_modes = file.circuit.num_modes();

    let mut sectors = Vec::new();
    let mut total_probability = 0.0;
    let mut mixed = false;
    let mut gate = None;
    match &file.input {
        CircuitInput::Logical {
            amplitudes,
            target,
            ancilla,
        } => {
            for s in embed_logical(*amplitudes, *target, *ancilla, num_modes)? {
                let cond = condition(&apply(&unitary, &s.state)?, &file.herald)?;
                total_probability += cond.probability;
                mixed |= cond.is_mixed();
                let mut section = branch_section(&cond);
                section["logical"] = json!(s.logical);
                section["input_amplitude"] = report::complex(s.amplitude);
                section["photons"] = json!(s.state.total_photons());
                sectors.push(section);
            }
            gate = logical_gate(&unitary, &file, *target, *ancilla)?;
        }
        CircuitInput::Explicit(terms) => {
            for s in explicit_sectors(terms, num_modes)? {
                let cond = condition(&apply(&unitary, &s)?, &file.herald)?;
                total_probability += cond.probability;
                mixed |= cond.is_mixed();
                let mut section = branch_section(&cond);
                section["photons"] = json!(s.total_photons());
                section["input_norm_sqr"] = num(s.norm_sqr());
                sectors.push(section);
            }
        }
    }
    if sectors.is_empty() {
        bail!("{path}: input has no non-zero component");
    }

    let mut r = Report::new("simulate");
    r.set(
        "circuit",
        json!({
            "elements": file.circuit.elements.len(),
            "ports": file.circuit.num_ports,
            "unitarity_error": num(unitary.unitarity_error()),
        }),
    )
    .set("sectors", Value::Array(sectors))
    .set("success_probability", num(total_probability))
    .set("mixed", mixed);
    if let Some(c) = gate {
        r.set(
            "gate",
            json!({
                "coefficients": report::coefficients(&c),
                "residual": num(nls_residual(&c)),
                "success_probability": num(c[0].norm_sqr()),
            }),
        );
    }
    Ok(r)
}
