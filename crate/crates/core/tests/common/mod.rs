#![allow(dead_code)]

use std::collections::BTreeMap;

use linopt::fock::{OccupationVector, StateVector};
use linopt::unitary::{Circuit, CircuitElement, ModeUnitary};
use linopt::Complex64;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

/// Sum over all permutations, `O(n · n!)`.
pub fn naive_permanent(m: &DMatrix<Complex64>) -> Complex64 {
    fn go(m: &DMatrix<Complex64>, row: usize, used: &mut Vec<bool>, acc: Complex64) -> Complex64 {
        let n = m.nrows();
        if row == n {
            return acc;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                total += go(m, row + 1, used, acc * m[(row, col)]);
                used[col] = false;
            }
        }
        total
    }
    go(m, 0, &mut vec![false; m.nrows()], Complex64::new(1.0, 0.0))
}

/// A random circuit of every element kind on `ports` ports.
pub fn random_circuit(rng: &mut impl Rng, ports: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(ports);
    for _ in 0..len {
        let p = rng.random_range(0..ports);
        let mut q = rng.random_range(0..ports);
        if ports > 1 {
            while q == p {
                q = rng.random_range(0..ports);
            }
        }
        let el = match rng.random_range(0..4) {
            0 => CircuitElement::Rotator {
                port: p,
                angle: rng.random_range(-7.0..7.0),
            },
            1 if ports > 1 => CircuitElement::PolarizingBeamsplitter {
                port_a: p,
                port_b: q,
            },
            2 if ports > 1 => CircuitElement::Beamsplitter {
                port_a: p,
                port_b: q,
                transmittance: rng.random_range(0.0..=1.0),
            },
            _ => CircuitElement::PhaseShift {
                mode: linopt::fock::PolarizedMode::from_index(rng.random_range(0..2 * ports)),
                phase: rng.random_range(-7.0..7.0),
            },
        };
        c.push(el);
    }
    c
}

type Monomial = Vec<u32>;

/// Applies `U` by expanding creation operators: each input basis state is
/// written as `prod_j (a_j†)^{n_j} / sqrt(n_j!)`, every `a_j†` is replaced
/// by `sum_i U[i][j] a_i†`, the product is multiplied out and each
/// monomial `prod_i (a_i†)^{m_i}` is read back as `sqrt(prod m_i!) |m>`.
/// No permanents are involved.
pub fn apply_by_expansion(u: &ModeUnitary, s: &StateVector) -> Vec<Complex64> {
    let dim = u.dim();
    let fact = |n: u32| (1..=n as u64).product::<u64>() as f64;
    let mut out: BTreeMap<Monomial, Complex64> = BTreeMap::new();
    for (occ, amp) in s.iter() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let norm: f64 = occ
            .counts()
            .iter()
            .map(|&n| fact(n))
            .product::<f64>()
            .sqrt();
        let mut poly: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        poly.insert(vec![0; dim], amp / norm);
        for (j, &n) in occ.counts().iter().enumerate() {
            for _ in 0..n {
                let mut next = BTreeMap::new();
                for (mono, coeff) in &poly {
                    for i in 0..dim {
                        let w = u.get(i, j);
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut m = mono.clone();
                        m[i] += 1;
                        *next.entry(m).or_insert(Complex64::new(0.0, 0.0)) += coeff * w;
                    }
                }
                poly = next;
            }
        }
        for (mono, coeff) in poly {
            let scale: f64 = mono.iter().map(|&m| fact(m)).product::<f64>().sqrt();
            *out.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += coeff * scale;
        }
    }
    s.basis()
        .states()
        .iter()
        .map(|occ: &OccupationVector| out.get(occ.counts()).copied().unwrap_or_default())
        .collect()
}
