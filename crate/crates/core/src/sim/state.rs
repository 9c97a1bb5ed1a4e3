use num_complex::Complex64;
use rand::Rng;

use super::gate::{GateKind, Matrix2, Matrix4};
use crate::angle::Angle;
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense amplitudes of an `n`-qubit register.
///
/// Basis index `i` has qubit `q` set iff bit `q` of `i` is set, i.e. qubit 0 is
/// the least significant bit. Ket labels in this crate list qubit 0 first, so
/// `|01⟩` is index 2.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Result of a projective measurement; the register itself holds the post-state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub bit: u8,
    /// Probability the outcome had before collapse.
    pub probability: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum PauliBasis {
    X,
    Y,
}

impl PauliBasis {
    /// Rotated-measurement angle for this basis. Y is the `−π/2` plane direction,
    /// stored as `3π/2`.
    pub fn angle(self) -> Angle {
        match self {
            PauliBasis::X => Angle::ZERO,
            PauliBasis::Y => Angle::THREE_HALF_PI,
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::RegisterSize(n));
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        check_size(n)?;
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(StateVector {
            num_qubits: n,
            amps: vec![a; 1 << n],
        })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = StateVector::zero(n)?;
        if index >= s.amps.len() {
            return Err(Error::QubitIndex {
                index,
                num_qubits: n,
            });
        }
        s.amps[0] = ZERO;
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::AmplitudeLength(len));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        let s = StateVector {
            num_qubits: n,
            amps,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalised(norm));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `self ⊗ other`, with `other`'s qubits appended after this register's.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_size(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Trace distance between the pure states `|self⟩` and `|other⟩`.
    pub fn trace_distance(&self, other: &StateVector) -> f64 {
        let ip = self.inner(other);
        let c = ip.norm();
        if c < 1e-6 {
            return (1.0 - c * c).max(0.0).sqrt();
        }
        // 1 − c² = (1 − c)(1 + c) with 1 − c = ‖a − e^{iθ} b‖² / 2, which keeps
        // precision for nearly equal states
        let phase = ip.conj() / c;
        let gap: f64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum();
        (gap / 2.0 * (1.0 + c)).sqrt()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: GateKind, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity() {
            return Err(Error::Arity {
                gate: gate.name(),
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        for &t in targets {
            self.check_qubit(t)?;
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTarget(targets[0]));
        }
        match targets {
            [q] => self.apply1(gate, *q),
            [a, b] => self.apply2(gate, *a, *b),
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Unchecked single-qubit kernel.
    pub(crate) fn apply1(&mut self, gate: GateKind, q: usize) {
        let bit = 1usize << q;
        match gate {
            GateKind::X => {
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | bit];
                        self.amps[i] = (a + b) * h;
                        self.amps[i | bit] = (a - b) * h;
                    }
                }
            }
            g => match g.diagonal_phase() {
                Some(angle) => {
                    let phase = angle.phase();
                    for i in 0..self.amps.len() {
                        if i & bit != 0 {
                            self.amps[i] *= phase;
                        }
                    }
                }
                None => self.apply_matrix1(&g.matrix1().expect("single-qubit gate"), q),
            },
        }
    }

    pub fn apply_matrix1(&mut self, m: &Matrix2, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub(crate) fn apply2(&mut self, gate: GateKind, a: usize, b: usize) {
        let ba = 1usize << a;
        let bb = 1usize << b;
        match gate {
            GateKind::CZ => {
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb != 0 {
                        self.amps[i] = -self.amps[i];
                    }
                }
            }
            GateKind::CNOT => {
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amps.swap(i, i | bb);
                    }
                }
            }
            GateKind::SWAP => {
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amps.swap(i, (i & !ba) | bb);
                    }
                }
            }
            g => self.apply_matrix2(&g.matrix2().expect("two-qubit gate"), a, b),
        }
    }

    /// Applies a 4×4 matrix whose local index is `2·bit(a) + bit(b)`.
    pub fn apply_matrix2(&mut self, m: &Matrix4, a: usize, b: usize) {
        let ba = 1usize << a;
        let bb = 1usize << b;
        for i in 0..self.amps.len() {
            if i & ba == 0 && i & bb == 0 {
                let idx = [i, i | bb, i | ba, i | ba | bb];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|c| m[r][c] * v[c]).sum();
                }
            }
        }
    }

    pub fn probability_of_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects qubit `q` onto `|bit⟩` and renormalises. Returns the outcome's
    /// prior probability.
    pub fn project(&mut self, q: usize, bit: u8) -> Result<f64> {
        let p1 = self.probability_of_one(q)?;
        let p = if bit == 1 { p1 } else { 1.0 - p1 };
        if p <= 1e-14 {
            return Err(Error::ImpossibleOutcome { qubit: q, bit });
        }
        let mask = 1usize << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & mask != 0) as u8) == bit {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(p)
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<Measurement> {
        let p1 = self.probability_of_one(q)?;
        let bit = u8::from(rng.random::<f64>() < p1);
        let probability = self.project(q, bit)?;
        Ok(Measurement { bit, probability })
    }

    /// Measures in the `{|+_φ⟩, |−_φ⟩}` basis; bit 0 is `|+_φ⟩`. Implemented as
    /// `Rz(−φ)`, `H`, computational measurement, then the rotation is undone so the
    /// qubit is left in the observed `|±_φ⟩` state.
    pub fn measure_rotated<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        phi: Angle,
        rng: &mut R,
    ) -> Result<Measurement> {
        self.check_qubit(q)?;
        self.rotate_into_z(q, phi);
        let m = self.measure_z(q, rng)?;
        self.rotate_out_of_z(q, phi);
        Ok(m)
    }

    pub fn measure_pauli<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        basis: PauliBasis,
        rng: &mut R,
    ) -> Result<Measurement> {
        self.measure_rotated(q, basis.angle(), rng)
    }

    /// Maps `|+_φ⟩ → |0⟩` and `|−_φ⟩ → |1⟩` on qubit `q`.
    pub(crate) fn rotate_into_z(&mut self, q: usize, phi: Angle) {
        self.apply1(GateKind::Rz(-phi), q);
        self.apply1(GateKind::H, q);
    }

    pub(crate) fn rotate_out_of_z(&mut self, q: usize, phi: Angle) {
        self.apply1(GateKind::H, q);
        self.apply1(GateKind::Rz(phi), q);
    }

    /// Probability of each outcome of a `φ`-basis measurement, without collapse.
    pub fn rotated_probabilities(&self, q: usize, phi: Angle) -> Result<[f64; 2]> {
        self.check_qubit(q)?;
        let mut probe = self.clone();
        probe.rotate_into_z(q, phi);
        let p1 = probe.probability_of_one(q)?;
        Ok([1.0 - p1, p1])
    }

    /// Samples a full computational-basis index without collapsing.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let r: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last = i;
                acc += p;
                if r < acc {
                    return i;
                }
            }
        }
        last
    }

    /// Reduces to the qubits in `keep` (in that order), assuming every other qubit
    /// sits in a computational basis state. Fails if that assumption does not hold.
    pub fn extract(&self, keep: &[usize]) -> Result<StateVector> {
        for &k in keep {
            self.check_qubit(k)?;
        }
        let (anchor, _) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("non-empty register");
        let keep_mask: usize = keep.iter().map(|&k| 1usize << k).sum();
        let rest = anchor & !keep_mask;
        let mut amps = vec![ZERO; 1 << keep.len()];
        for (j, slot) in amps.iter_mut().enumerate() {
            let mut idx = rest;
            for (pos, &k) in keep.iter().enumerate() {
                if j >> pos & 1 == 1 {
                    idx |= 1 << k;
                }
            }
            *slot = self.amps[idx];
        }
        let out = StateVector {
            num_qubits: keep.len(),
            amps,
        };
        let norm = out.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalised(norm));
        }
        Ok(out)
    }
}

/// `β_xy`: prepares `|x y⟩`, applies `H` to qubit 0, then `CNOT(0 → 1)`.
pub fn make_bell_pair(x: u8, y: u8) -> StateVector {
    let index = usize::from(x & 1) | usize::from(y & 1) << 1;
    let mut s = StateVector::basis(2, index).expect("two qubits");
    s.apply1(GateKind::H, 0);
    s.apply2(GateKind::CNOT, 0, 1);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &StateVector, b: &[Complex64]) -> bool {
        a.amplitudes()
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn plus_state_amplitudes() {
        let h = FRAC_1_SQRT_2;
        assert!(close(
            &StateVector::plus(1).unwrap(),
            &[c(h, 0.0), c(h, 0.0)]
        ));
        assert!(close(&StateVector::plus(2).unwrap(), &[c(0.5, 0.0); 4]));
        let a = (0.5f64).powf(1.5);
        assert!(close(&StateVector::plus(3).unwrap(), &[c(a, 0.0); 8]));
    }

    #[test]
    fn register_size_guard() {
        assert!(matches!(StateVector::plus(0), Err(Error::RegisterSize(0))));
        assert!(matches!(
            StateVector::plus(21),
            Err(Error::RegisterSize(21))
        ));
        assert!(StateVector::zero(20).is_ok());
    }

    #[test]
    fn gate_examples() {
        let h = FRAC_1_SQRT_2;
        let mut s = StateVector::zero(1).unwrap();
        s.apply(GateKind::H, &[0]).unwrap();
        assert!(close(&s, &[c(h, 0.0), c(h, 0.0)]));

        let mut s = StateVector::plus(2).unwrap();
        s.apply(GateKind::CZ, &[0, 1]).unwrap();
        assert!(close(
            &s,
            &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]
        ));

        let mut s = StateVector::basis(1, 1).unwrap();
        s.apply(GateKind::T, &[0]).unwrap();
        assert!(close(&s, &[c(0.0, 0.0), c(h, h)]));
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply(GateKind::CNOT, &[0]),
            Err(Error::Arity {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(
            s.apply(GateKind::H, &[2]),
            Err(Error::QubitIndex { index: 2, .. })
        ));
        assert!(matches!(
            s.apply(GateKind::CZ, &[1, 1]),
            Err(Error::DuplicateTarget(1))
        ));
    }

    #[test]
    fn bell_pairs_match_textbook_table() {
        let h = FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        // index = bit(q0) + 2·bit(q1)
        assert!(close(&make_bell_pair(0, 0), &[c(h, 0.0), z, z, c(h, 0.0)]));
        assert!(close(&make_bell_pair(0, 1), &[z, c(h, 0.0), c(h, 0.0), z]));
        assert!(close(&make_bell_pair(1, 0), &[c(h, 0.0), z, z, c(-h, 0.0)]));
        // (|01⟩ − |10⟩)/√2 with |01⟩ = index 2
        assert!(close(&make_bell_pair(1, 1), &[z, c(-h, 0.0), c(h, 0.0), z]));
    }

    #[test]
    fn computational_measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StateVector::zero(1).unwrap();
        let m = s.measure_z(0, &mut rng).unwrap();
        assert_eq!((m.bit, m.probability), (0, 1.0));

        let s = StateVector::plus(1).unwrap();
        assert!((s.probability_of_one(0).unwrap() - 0.5).abs() < 1e-12);

        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bell = make_bell_pair(0, 0);
            let a = bell.measure_z(0, &mut rng).unwrap();
            let b = bell.measure_z(1, &mut rng).unwrap();
            assert_eq!(a.bit, b.bit);
            assert!((b.probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn impossible_projection_is_an_error() {
        let mut s = StateVector::zero(1).unwrap();
        assert!(matches!(
            s.project(0, 1),
            Err(Error::ImpossibleOutcome { qubit: 0, bit: 1 })
        ));
    }

    #[test]
    fn rotated_measurement_examples() {
        let phi = Angle::Octant(3);
        // |+_φ⟩
        let h = FRAC_1_SQRT_2;
        let plus_phi = StateVector::from_amplitudes(vec![c(h, 0.0), phi.phase() * h]).unwrap();
        assert!((plus_phi.rotated_probabilities(0, phi).unwrap()[0] - 1.0).abs() < 1e-12);

        let plus = StateVector::plus(1).unwrap();
        assert!((plus.rotated_probabilities(0, Angle::ZERO).unwrap()[0] - 1.0).abs() < 1e-12);

        let zero = StateVector::zero(1).unwrap();
        for k in 0..8 {
            let p = zero.rotated_probabilities(0, Angle::Octant(k)).unwrap();
            assert!((p[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn remeasuring_in_same_basis_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..8 {
            let mut s = StateVector::plus(2).unwrap();
            s.apply(GateKind::T, &[0]).unwrap();
            s.apply(GateKind::CZ, &[0, 1]).unwrap();
            let first = s.measure_rotated(0, Angle::Octant(k), &mut rng).unwrap();
            let again = s.measure_rotated(0, Angle::Octant(k), &mut rng).unwrap();
            assert_eq!(first.bit, again.bit);
            assert!((again.probability - 1.0).abs() < 1e-12);
        }
    }

    /// Y eigenstate `(|0⟩ + i|1⟩)/√2` against `⟨±_{3π/2}|`: an independent
    /// inner-product oracle fixes which bit the Y measurement reports.
    #[test]
    fn y_basis_sign_convention() {
        let h = FRAC_1_SQRT_2;
        let plus_i = StateVector::from_amplitudes(vec![c(h, 0.0), c(0.0, h)]).unwrap();
        let theta = PauliBasis::Y.angle().as_radians();
        let bra0 = [c(h, 0.0), Complex64::from_polar(h, -theta)];
        let amp0 = bra0[0] * plus_i.amplitudes()[0] + bra0[1] * plus_i.amplitudes()[1];
        let oracle_p0 = amp0.norm_sqr();
        // e^{-i3π/2} = i, so ⟨+_{3π/2}|+i⟩ = (1 + i·i)/2 = 0.
        assert!(oracle_p0.abs() < 1e-12);
        let p = plus_i
            .rotated_probabilities(0, PauliBasis::Y.angle())
            .unwrap();
        assert!((p[0] - oracle_p0).abs() < 1e-12);
        assert!((p[1] - 1.0).abs() < 1e-12);

        let zero = StateVector::zero(1).unwrap();
        let p = zero
            .rotated_probabilities(0, PauliBasis::Y.angle())
            .unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        let plus = StateVector::plus(1).unwrap();
        assert!(
            (plus
                .rotated_probabilities(0, PauliBasis::X.angle())
                .unwrap()[0]
                - 1.0)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn trace_distance_examples() {
        let zero = StateVector::zero(1).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let plus = StateVector::plus(1).unwrap();
        assert!((zero.trace_distance(&one) - 1.0).abs() < 1e-12);
        assert!((zero.trace_distance(&plus) - FRAC_1_SQRT_2).abs() < 1e-12);
        let phase = c(0.6, 0.8);
        let phased =
            StateVector::from_amplitudes(plus.amplitudes().iter().map(|a| a * phase).collect())
                .unwrap();
        assert!(plus.trace_distance(&phased) < 1e-15);
    }

    #[test]
    fn extract_reads_product_factor() {
        let mut s = StateVector::plus(3).unwrap();
        s.project(1, 1).unwrap();
        let r = s.extract(&[0, 2]).unwrap();
        assert!(close(&r, &[c(0.5, 0.0); 4]));
        let bell = make_bell_pair(0, 0);
        assert!(bell.extract(&[0]).is_err());
    }
}
