use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix accepted by [`permanent`].
pub const PERMANENT_CAP: usize = 12;

/// Matrix permanent by Ryser's inclusion–exclusion formula, visiting the
/// column subsets in Gray-code order so each step updates the row sums with
/// a single column: `O(n 2^n)`.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    if n > PERMANENT_CAP {
        return Err(Error::PermanentTooLarge {
            size: n,
            cap: PERMANENT_CAP,
        });
    }
    Ok(ryser(m))
}

fn ryser(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    match n {
        0 => return Complex64::new(1.0, 0.0),
        1 => return m[(0, 0)],
        2 => return m[(0, 0)] * m[(1, 1)] + m[(0, 1)] * m[(1, 0)],
        _ => {}
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for k in 1u32..(1 << n) {
        let next = k ^ (k >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << flipped) != 0;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            if added {
                *sum += m[(i, flipped)];
            } else {
                *sum -= m[(i, flipped)];
            }
        }
        gray = next;

        let prod: Complex64 = row_sums.iter().product();
        // sign (-1)^(n - |S|)
        if (n as u32 - next.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}
