//! Fock-space action of a mode unitary.
//!
//! For occupations `in` and `out` in the same sector,
//!
//! ```text
//! <out| U |in> = per(U[out, in]) / sqrt(prod in_i! * prod out_j!)
//! ```
//!
//! where `U[out, in]` repeats row `j` of `U` `out_j` times and column `i`
//! `in_i` times.

mod permanent;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use permanent::{permanent, PERMANENT_CAP};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, OccupationVector, StateVector};
use crate::unitary::ModeUnitary;

/// `n!` for `n <= 20`, exact.
pub const FACTORIALS: [u64; 21] = {
    let mut table = [1u64; 21];
    let mut n = 1;
    while n < 21 {
        table[n] = table[n - 1] * n as u64;
        n += 1;
    }
    table
};

fn factorial_product(occ: &OccupationVector) -> u128 {
    occ.counts()
        .iter()
        .map(|&n| FACTORIALS[n as usize] as u128)
        .product()
}

/// A single transition amplitude request.
#[derive(Debug, Clone, Copy)]
pub struct TransitionQuery<'a> {
    pub unitary: &'a ModeUnitary,
    pub out_occ: &'a OccupationVector,
    pub in_occ: &'a OccupationVector,
}

fn check_query(q: &TransitionQuery<'_>) -> Result<()> {
    let dim = q.unitary.dim();
    for occ in [q.in_occ, q.out_occ] {
        if occ.num_modes() != dim {
            return Err(Error::DimensionMismatch {
                unitary: dim,
                state: occ.num_modes(),
            });
        }
    }
    if q.in_occ.total() != q.out_occ.total() {
        return Err(Error::SectorMismatch {
            input: q.in_occ.total(),
            output: q.out_occ.total(),
        });
    }
    Ok(())
}

fn repeated_modes(occ: &OccupationVector) -> Vec<usize> {
    occ.counts()
        .iter()
        .enumerate()
        .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
        .collect()
}

/// `<out| U |in>`.
pub fn transition_amplitude(q: TransitionQuery<'_>) -> Result<Complex64> {
    check_query(&q)?;
    let rows = repeated_modes(q.out_occ);
    let cols = repeated_modes(q.in_occ);
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        q.unitary.get(rows[r], cols[c])
    });
    let per = permanent(&sub)?;
    let norm = ((factorial_product(q.in_occ) * factorial_product(q.out_occ)) as f64).sqrt();
    Ok(per / norm)
}

/// The matrix of `U` restricted to one photon-number sector; entry
/// `(k, l)` is `<basis[k]| U |basis[l]>`.
pub fn lift(unitary: &ModeUnitary, basis: &FockBasis) -> Result<DMatrix<Complex64>> {
    if unitary.dim() != basis.num_modes() {
        return Err(Error::DimensionMismatch {
            unitary: unitary.dim(),
            state: basis.num_modes(),
        });
    }
    let n = basis.len();
    let mut out = DMatrix::zeros(n, n);
    for (l, in_occ) in basis.states().iter().enumerate() {
        for (k, out_occ) in basis.states().iter().enumerate() {
            out[(k, l)] = transition_amplitude(TransitionQuery {
                unitary,
                out_occ,
                in_occ,
            })?;
        }
    }
    Ok(out)
}

/// Applies `U` to a single-sector state.
pub fn apply(unitary: &ModeUnitary, state: &StateVector) -> Result<StateVector> {
    let lifted = lift(unitary, state.basis())?;
    let input = DVector::from_column_slice(state.amplitudes());
    let output = lifted * input;
    StateVector::new(
        state.shared_basis().clone(),
        output.iter().copied().collect(),
    )
}
