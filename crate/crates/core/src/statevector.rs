//! Dense complex state vector with the minimal gate set the search loop
//! needs: Hadamard layers, conditional bit flips, conditional sign flips,
//! and seeded projective measurement sampling.
//!
//! # Basis-index layout
//!
//! Qubit 0 is the **most significant** bit of the basis index; the last
//! qubit is the least significant. A search register laid out as
//! [`RegisterLayout`] therefore keeps the `2^(kappa+1)` ancilla
//! configurations of each database index in one contiguous block, which
//! makes membership lookups and success-probability sums cache friendly.
//!
//! # Determinism
//!
//! Kernels may split the amplitude array across threads, but every
//! amplitude is always computed from a fixed pair of inputs in a fixed
//! order, so results are bit-identical regardless of the thread schedule.
//! Measurement sampling uses an inverse-CDF walk over ascending basis
//! index driven by a ChaCha8 generator seeded with the caller's 64-bit
//! seed (one `f64` draw per shot), so identical `(state, shots, seed)`
//! always yield identical samples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

use crate::{Error, Result};

/// Hard cap on register width.
pub const MAX_QUBITS: usize = 30;

/// Amplitude arrays shorter than this are processed serially; fork/join
/// overhead dominates below it.
const PAR_THRESHOLD: usize = 1 << 16;

/// Qubit-role assignment for a search register: `n` search qubits, then
/// `kappa` per-database mark qubits, then one common-flag qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    kappa: usize,
}

impl RegisterLayout {
    pub fn new(n: usize, kappa: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain(
                "register layout needs at least one search qubit".into(),
            ));
        }
        let total = n + kappa + 1;
        if total > MAX_QUBITS {
            return Err(Error::Capacity { qubits: total });
        }
        Ok(Self { n, kappa })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn num_qubits(&self) -> usize {
        self.n + self.kappa + 1
    }

    /// Number of database entries addressable by the search qubits.
    pub fn num_entries(&self) -> u64 {
        1 << self.n
    }

    pub fn search_qubits(&self) -> Range<usize> {
        0..self.n
    }

    /// Mark qubit dedicated to database `j`.
    pub fn mark_qubit(&self, j: usize) -> usize {
        self.n + j
    }

    /// The qubit flagging entries common to every database.
    pub fn flag_qubit(&self) -> usize {
        self.n + self.kappa
    }

    /// Database index encoded in the first `n` qubits of a basis index.
    pub fn search_index(&self, basis: usize) -> u64 {
        (basis >> (self.kappa + 1)) as u64
    }

    /// The `kappa` mark bits of a basis index, mark qubit 0 most significant.
    pub fn mark_bits(&self, basis: usize) -> usize {
        (basis >> 1) & ((1 << self.kappa) - 1)
    }

    pub fn flag_bit(&self, basis: usize) -> bool {
        basis & 1 == 1
    }

    /// All `kappa + 1` ancilla bits of a basis index as one integer.
    pub fn ancilla_bits(&self, basis: usize) -> usize {
        basis & ((1 << (self.kappa + 1)) - 1)
    }

    /// Rebuild a basis index from its decomposed parts.
    pub fn basis_index(&self, entry: u64, marks: usize, flag: bool) -> usize {
        ((entry as usize) << (self.kappa + 1)) | (marks << 1) | usize::from(flag)
    }
}

/// One projective measurement outcome, decomposed under a [`RegisterLayout`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementSample {
    pub basis_index: usize,
    /// Value read off the `n` search qubits.
    pub first_n_bits: u64,
    /// Value read off the `kappa + 1` ancilla qubits.
    pub ancilla_bits: usize,
}

/// A register of `num_qubits` qubits as `2^num_qubits` complex amplitudes.
///
/// Every constructor and gate keeps the squared norm within `1e-10` of 1;
/// [`StateVector::from_amplitudes`] is the one escape hatch (it accepts
/// arbitrary amplitudes so callers can build intermediate states).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zero basis state `|0...0>`.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity { qubits: num_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wrap an explicit amplitude vector (length must be a power of two
    /// within capacity). The norm is not checked.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity { qubits: num_qubits });
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Dimension of the underlying amplitude vector (`2^num_qubits`).
    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    /// Total probability mass; 1 within `1e-10` for any state produced by
    /// the constructors and gates here.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn qubit_mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Wiring(format!(
                "qubit {qubit} out of range for a {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Apply a Hadamard gate to each listed qubit.
    ///
    /// Qubits must be distinct and in range. The gates are applied in
    /// ascending qubit order regardless of iteration order, pinning the
    /// floating-point summation order.
    pub fn hadamard_layer<I>(&mut self, qubits: I) -> Result<&mut Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut seen: u32 = 0;
        let mut list = Vec::new();
        for q in qubits {
            self.check_qubit(q)?;
            let bit = 1u32 << q;
            if seen & bit != 0 {
                return Err(Error::Wiring(format!("duplicate qubit {q} in Hadamard layer")));
            }
            seen |= bit;
            list.push(q);
        }
        list.sort_unstable();
        for q in list {
            self.hadamard_single(q);
        }
        Ok(self)
    }

    fn hadamard_single(&mut self, qubit: usize) {
        let mask = self.qubit_mask(qubit);
        let block = mask << 1;
        let butterfly = |chunk: &mut [Complex64]| {
            for off in 0..mask {
                let a = chunk[off];
                let b = chunk[off + mask];
                chunk[off] = (a + b) * FRAC_1_SQRT_2;
                chunk[off + mask] = (a - b) * FRAC_1_SQRT_2;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(block).for_each(butterfly);
        } else {
            self.amps.chunks_mut(block).for_each(butterfly);
        }
    }

    /// Flip the target qubit on every basis state satisfying `predicate`.
    ///
    /// The predicate must not depend on the target bit (it is evaluated on
    /// the target-cleared index of each pair); with that contract the
    /// operation is a self-inverse permutation of amplitudes.
    pub fn controlled_flip<P>(&mut self, predicate: P, target: usize) -> Result<&mut Self>
    where
        P: Fn(usize) -> bool + Sync,
    {
        self.check_qubit(target)?;
        let mask = self.qubit_mask(target);
        let block = mask << 1;
        let kernel = |(chunk_idx, chunk): (usize, &mut [Complex64])| {
            let base = chunk_idx * block;
            for off in 0..mask {
                if predicate(base + off) {
                    chunk.swap(off, off + mask);
                }
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(block).enumerate().for_each(kernel);
        } else {
            self.amps.chunks_mut(block).enumerate().for_each(kernel);
        }
        Ok(self)
    }

    /// Negate the amplitude of every basis state satisfying `predicate`.
    pub fn phase_flip<P>(&mut self, predicate: P) -> &mut Self
    where
        P: Fn(usize) -> bool + Sync,
    {
        let kernel = |(i, a): (usize, &mut Complex64)| {
            if predicate(i) {
                *a = -*a;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.amps.iter_mut().enumerate().for_each(kernel);
        }
        self
    }

    /// Probability mass on the basis states satisfying `predicate`.
    ///
    /// Summed serially in ascending basis order; bit-stable across runs.
    pub fn probability_of<P>(&self, predicate: P) -> f64
    where
        P: Fn(usize) -> bool,
    {
        self.amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| predicate(i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Draw `shots` projective measurements of the whole register.
    ///
    /// Sampling is inverse-CDF over ascending basis index; the generator is
    /// ChaCha8 seeded with `seed`, consuming one uniform `f64` per shot.
    pub fn sample(
        &self,
        layout: &RegisterLayout,
        shots: u64,
        seed: u64,
    ) -> Result<Vec<MeasurementSample>> {
        if layout.num_qubits() != self.num_qubits {
            return Err(Error::Wiring(format!(
                "layout describes {} qubits but the register has {}",
                layout.num_qubits(),
                self.num_qubits
            )));
        }
        if shots == 0 {
            return Err(Error::Domain("shots must be at least 1".into()));
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cdf.push(total);
        }
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::InvalidState(
                "state has zero norm and cannot be measured".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = self.amps.len() - 1;
        let mut out = Vec::with_capacity(shots as usize);
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let basis = cdf.partition_point(|&c| c <= u).min(last);
            out.push(MeasurementSample {
                basis_index: basis,
                first_n_bits: layout.search_index(basis),
                ancilla_bits: layout.ancilla_bits(basis),
            });
        }
        Ok(out)
    }
}
