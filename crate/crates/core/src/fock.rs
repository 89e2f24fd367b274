//! Occupation-number basis for polarized bosonic modes.
//!
//! Every spatial port carries two modes, `H` and `V`, flattened port-major
//! as `port * 2 + pol`. A [`FockBasis`] holds all occupation vectors of a
//! fixed total photon number (a *sector*) in lexicographically descending
//! order, so `(2,0), (1,1), (0,2)` for two modes and two photons.
//!
//! Linear optics never moves amplitude between sectors, so a state that
//! mixes photon numbers is carried as one [`StateVector`] per sector (see
//! [`embed_logical`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest photon number any basis may carry unless configured otherwise.
pub const DEFAULT_PHOTON_CAP: usize = 6;
/// Largest number of basis states enumerated unless configured otherwise.
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Normalization slack for states that claim to be normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn offset(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

/// One polarization of one spatial port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolarizedMode {
    pub port: usize,
    pub pol: Polarization,
}

impl PolarizedMode {
    pub const fn new(port: usize, pol: Polarization) -> Self {
        Self { port, pol }
    }

    pub const fn h(port: usize) -> Self {
        Self::new(port, Polarization::H)
    }

    pub const fn v(port: usize) -> Self {
        Self::new(port, Polarization::V)
    }

    /// Flattened mode index, port-major with H before V.
    pub fn index(self) -> usize {
        self.port * 2 + self.pol.offset()
    }

    pub fn from_index(index: usize) -> Self {
        let pol = if index.is_multiple_of(2) {
            Polarization::H
        } else {
            Polarization::V
        };
        Self::new(index / 2, pol)
    }
}

impl fmt::Display for PolarizedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.port, self.pol)
    }
}

/// Photon count per flattened mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn vacuum(num_modes: usize) -> Self {
        Self(vec![0; num_modes])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn num_modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// Occupations restricted to `modes`, in the order given.
    pub fn project(&self, modes: &[usize]) -> OccupationVector {
        OccupationVector(modes.iter().map(|&m| self.0[m]).collect())
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(counts: Vec<u32>) -> Self {
        Self(counts)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

/// Limits guarding basis enumeration against runaway sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLimits {
    pub photon_cap: usize,
    pub basis_cap: usize,
}

impl Default for BasisLimits {
    fn default() -> Self {
        Self {
            photon_cap: DEFAULT_PHOTON_CAP,
            basis_cap: DEFAULT_BASIS_CAP,
        }
    }
}

/// `C(n + k, k)` without overflow for the sizes we guard against.
pub fn sector_size(num_modes: usize, total_photons: usize) -> u128 {
    if num_modes == 0 {
        return u128::from(total_photons == 0);
    }
    let n = (total_photons + num_modes - 1) as u128;
    let k = total_photons.min(num_modes - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// All occupation vectors of a fixed photon number over a fixed mode count.
#[derive(Debug, Clone)]
pub struct FockBasis {
    num_modes: usize,
    total_photons: usize,
    states: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.num_modes == other.num_modes && self.total_photons == other.total_photons
    }
}

impl Eq for FockBasis {}

/// Enumerates a sector with the default limits.
pub fn enumerate_basis(num_modes: usize, total_photons: usize) -> Result<FockBasis> {
    FockBasis::with_limits(num_modes, total_photons, BasisLimits::default())
}

impl FockBasis {
    pub fn new(num_modes: usize, total_photons: usize) -> Result<Self> {
        enumerate_basis(num_modes, total_photons)
    }

    pub fn with_limits(
        num_modes: usize,
        total_photons: usize,
        limits: BasisLimits,
    ) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::NoModes);
        }
        if total_photons > limits.photon_cap {
            return Err(Error::PhotonCapExceeded {
                photons: total_photons,
                cap: limits.photon_cap,
            });
        }
        let size = sector_size(num_modes, total_photons);
        if size > limits.basis_cap as u128 {
            return Err(Error::BasisTooLarge {
                modes: num_modes,
                photons: total_photons,
                size,
                cap: limits.basis_cap,
            });
        }

        let mut states = Vec::with_capacity(size as usize);
        let mut scratch = vec![0u32; num_modes];
        fill_descending(&mut scratch, 0, total_photons as u32, &mut states);
        debug_assert_eq!(states.len() as u128, size);

        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            num_modes,
            total_photons,
            states,
            index,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn total_photons(&self) -> usize {
        self.total_photons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &OccupationVector {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &OccupationVector) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Like [`index_of`](Self::index_of) but explains why a lookup failed.
    pub fn position(&self, occ: &OccupationVector) -> Result<usize> {
        if occ.num_modes() != self.num_modes {
            return Err(Error::ModeCountMismatch {
                expected: self.num_modes,
                found: occ.num_modes(),
            });
        }
        self.index_of(occ)
            .ok_or_else(|| Error::NotInBasis(occ.counts().to_vec()))
    }
}

fn fill_descending(
    scratch: &mut [u32],
    mode: usize,
    remaining: u32,
    out: &mut Vec<OccupationVector>,
) {
    if mode + 1 == scratch.len() {
        scratch[mode] = remaining;
        out.push(OccupationVector(scratch.to_vec()));
        return;
    }
    for n in (0..=remaining).rev() {
        scratch[mode] = n;
        fill_descending(scratch, mode + 1, remaining - n, out);
    }
    scratch[mode] = 0;
}

/// Complex amplitudes over one photon-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Arc<FockBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::AmplitudeLength {
                expected: basis.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
        Self { basis, amplitudes }
    }

    /// The basis state `occ` with unit amplitude.
    pub fn basis_state(basis: Arc<FockBasis>, occ: &OccupationVector) -> Result<Self> {
        let i = basis.position(occ)?;
        let mut s = Self::zero(basis);
        s.amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Option<Complex64> {
        self.basis.index_of(occ).map(|i| self.amplitudes[i])
    }

    pub fn num_modes(&self) -> usize {
        self.basis.num_modes()
    }

    pub fn total_photons(&self) -> usize {
        self.basis.total_photons()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Componentwise sum of two states in the same sector.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        self.check_same_basis(other)?;
        Ok(Self {
            basis: Arc::clone(&self.basis),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Iterates over `(occupation, amplitude)` pairs in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&OccupationVector, Complex64)> {
        self.basis
            .states()
            .iter()
            .zip(self.amplitudes.iter().copied())
    }

    pub(crate) fn check_same_basis(&self, other: &StateVector) -> Result<()> {
        if *self.basis != *other.basis {
            return Err(Error::BasisMismatch {
                left_modes: self.basis.num_modes(),
                left_photons: self.basis.total_photons(),
                right_modes: other.basis.num_modes(),
                right_photons: other.basis.total_photons(),
            });
        }
        Ok(())
    }
}

/// `<s1|s2>`, conjugate-linear in `s1`.
pub fn inner_product(s1: &StateVector, s2: &StateVector) -> Result<Complex64> {
    s1.check_same_basis(s2)?;
    Ok(s1
        .amplitudes
        .iter()
        .zip(&s2.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Amplitudes `(alpha, beta, gamma)` of a logical qutrit on `|0>, |1>, |2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalAmplitudes(pub [Complex64; 3]);

impl LogicalAmplitudes {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Self {
        Self([alpha, beta, gamma])
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into())
    }

    /// The logical basis state `|n>`.
    pub fn basis(n: usize) -> Self {
        let mut a = [Complex64::new(0.0, 0.0); 3];
        a[n] = Complex64::new(1.0, 0.0);
        Self(a)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// One photon-number sector of an embedded logical input.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorState {
    /// Logical photon number `n` carried by the target mode.
    pub logical: usize,
    /// The logical amplitude of `|n>`.
    pub amplitude: Complex64,
    /// `amplitude * |n in target, 1 in ancilla>` over the `n + 1` photon sector.
    pub state: StateVector,
}

/// Embeds `alpha|0> + beta|1> + gamma|2>` on `target` together with a
/// single ancilla photon on `ancilla`, returning one state per photon-number
/// sector. Sectors whose logical amplitude is exactly zero are omitted.
pub fn embed_logical(
    amplitudes: LogicalAmplitudes,
    target: PolarizedMode,
    ancilla: PolarizedMode,
    num_modes: usize,
) -> Result<Vec<SectorState>> {
    let norm = amplitudes.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    if target == ancilla {
        return Err(Error::ModeCollision(target));
    }
    for mode in [target, ancilla] {
        if mode.index() >= num_modes {
            return Err(Error::ModeOutOfRange {
                mode: mode.index(),
                modes: num_modes,
            });
        }
    }

    let mut sectors = Vec::new();
    for (n, &amp) in amplitudes.0.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let basis = Arc::new(FockBasis::new(num_modes, n + 1)?);
        let mut counts = vec![0u32; num_modes];
        counts[target.index()] = n as u32;
        counts[ancilla.index()] = 1;
        let state = StateVector::basis_state(basis, &OccupationVector::new(counts))?.scaled(amp);
        sectors.push(SectorState {
            logical: n,
            amplitude: amp,
            state,
        });
    }
    Ok(sectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(v: &[u32]) -> OccupationVector {
        OccupationVector::new(v.to_vec())
    }

    #[test]
    fn single_mode_basis() {
        let b = enumerate_basis(1, 2).unwrap();
        assert_eq!(b.states(), &[occ(&[2])]);
    }

    #[test]
    fn two_mode_order_is_descending() {
        let b = enumerate_basis(2, 2).unwrap();
        assert_eq!(b.states(), &[occ(&[2, 0]), occ(&[1, 1]), occ(&[0, 2])]);
    }

    #[test]
    fn stars_and_bars_sizes() {
        assert_eq!(enumerate_basis(4, 3).unwrap().len(), 20);
        assert_eq!(enumerate_basis(8, 3).unwrap().len(), 120);
        assert_eq!(enumerate_basis(3, 0).unwrap().states(), &[occ(&[0, 0, 0])]);
        assert_eq!(sector_size(10, 3), 220);
    }

    #[test]
    fn enumeration_guards() {
        assert_eq!(enumerate_basis(0, 1), Err(Error::NoModes));
        assert!(matches!(
            enumerate_basis(2, 7),
            Err(Error::PhotonCapExceeded { photons: 7, cap: 6 })
        ));
        let limits = BasisLimits {
            photon_cap: 30,
            basis_cap: 1000,
        };
        assert!(matches!(
            FockBasis::with_limits(20, 20, limits),
            Err(Error::BasisTooLarge { .. })
        ));
    }

    #[test]
    fn flattening_is_port_major() {
        assert_eq!(PolarizedMode::h(0).index(), 0);
        assert_eq!(PolarizedMode::v(0).index(), 1);
        assert_eq!(PolarizedMode::h(3).index(), 6);
        assert_eq!(PolarizedMode::from_index(7), PolarizedMode::v(3));
    }

    #[test]
    fn inner_product_examples() {
        let b = Arc::new(enumerate_basis(2, 1).unwrap());
        let e0 = StateVector::basis_state(b.clone(), &occ(&[1, 0])).unwrap();
        let e1 = StateVector::basis_state(b.clone(), &occ(&[0, 1])).unwrap();
        assert_eq!(inner_product(&e0, &e0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(inner_product(&e0, &e1).unwrap(), Complex64::new(0.0, 0.0));

        let s =
            StateVector::new(b, vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let ip = inner_product(&s, &s).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-15 && ip.im == 0.0);
        assert!(s.is_normalized());
    }

    #[test]
    fn inner_product_rejects_mixed_sectors() {
        let a = StateVector::zero(Arc::new(enumerate_basis(2, 1).unwrap()));
        let b = StateVector::zero(Arc::new(enumerate_basis(2, 2).unwrap()));
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::BasisMismatch { .. })
        ));
    }

    #[test]
    fn embed_vacuum_component() {
        let s = embed_logical(
            LogicalAmplitudes::real(1.0, 0.0, 0.0),
            PolarizedMode::h(0),
            PolarizedMode::v(1),
            4,
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].logical, 0);
        assert_eq!(s[0].state.total_photons(), 1);
        assert_eq!(
            s[0].state.amplitude(&occ(&[0, 0, 0, 1])),
            Some(Complex64::new(1.0, 0.0))
        );
    }

    #[test]
    fn embed_two_photon_component() {
        let s = embed_logical(
            LogicalAmplitudes::real(0.0, 0.0, 1.0),
            PolarizedMode::h(0),
            PolarizedMode::v(1),
            4,
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].state.total_photons(), 3);
        assert_eq!(
            s[0].state.amplitude(&occ(&[2, 0, 0, 1])),
            Some(Complex64::new(1.0, 0.0))
        );
    }

    #[test]
    fn embed_uniform_superposition() {
        let a = 1.0 / 3f64.sqrt();
        let s = embed_logical(
            LogicalAmplitudes::real(a, a, a),
            PolarizedMode::h(0),
            PolarizedMode::v(1),
            4,
        )
        .unwrap();
        assert_eq!(s.len(), 3);
        for sector in &s {
            assert!((sector.state.norm() - a).abs() < 1e-15);
        }
        let total: f64 = s.iter().map(|x| x.state.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embed_errors() {
        let err = embed_logical(
            LogicalAmplitudes::real(1.0, 1.0, 0.0),
            PolarizedMode::h(0),
            PolarizedMode::v(1),
            4,
        );
        assert!(matches!(err, Err(Error::NotNormalized(_))));
        let err = embed_logical(
            LogicalAmplitudes::basis(0),
            PolarizedMode::h(0),
            PolarizedMode::h(0),
            4,
        );
        assert_eq!(err, Err(Error::ModeCollision(PolarizedMode::h(0))));
    }
}
