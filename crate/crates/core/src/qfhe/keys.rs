use crate::sim::PauliBasis;

/// Z one-time-pad keys for the input nodes: key `k` means the logical input is
/// `Z^k|+⟩` while the server only ever prepares `|+⟩`.
pub fn encode_input(input_bits: &[u8]) -> Vec<u8> {
    input_bits.iter().map(|b| b & 1).collect()
}

/// Key bookkeeping for a T gate: `T X^a Z^b = X^a Z^{a⊕b} S^a T`, up to global
/// phase. Returns `(x_key, z_key, s_needed)`.
pub fn key_update_t(a: u8, b: u8) -> (u8, u8, u8) {
    let (a, b) = (a & 1, b & 1);
    (a, a ^ b, a)
}

/// Basis for a companion measurement given the X dependency of its node.
pub fn client_basis(b_prev: u8) -> PauliBasis {
    if b_prev & 1 == 0 {
        PauliBasis::X
    } else {
        PauliBasis::Y
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::sim::{GateKind, Matrix2};

    fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        m
    }

    fn pow(g: GateKind, e: u8) -> Matrix2 {
        let id = GateKind::Rz(crate::Angle::ZERO).matrix1().unwrap();
        (0..e).fold(id, |acc, _| mul(&acc, &g.matrix1().unwrap()))
    }

    /// `‖A − e^{iθ}B‖` minimised over the global phase.
    fn equal_up_to_phase(a: &Matrix2, b: &Matrix2) -> bool {
        let (r, c) = (0..4)
            .map(|k| (k / 2, k % 2))
            .max_by(|x, y| b[x.0][x.1].norm().total_cmp(&b[y.0][y.1].norm()))
            .unwrap();
        let phase = a[r][c] / b[r][c];
        (0..2).all(|r| (0..2).all(|c| (a[r][c] - phase * b[r][c]).norm() < 1e-12))
    }

    #[test]
    fn t_key_update_matches_the_matrix_identity() {
        for a in 0..2 {
            for b in 0..2 {
                let (x, z, s) = key_update_t(a, b);
                let lhs = mul(
                    &GateKind::T.matrix1().unwrap(),
                    &mul(&pow(GateKind::X, a), &pow(GateKind::Z, b)),
                );
                let rhs = mul(
                    &pow(GateKind::X, x),
                    &mul(
                        &pow(GateKind::Z, z),
                        &mul(&pow(GateKind::S, s), &GateKind::T.matrix1().unwrap()),
                    ),
                );
                assert!(equal_up_to_phase(&lhs, &rhs), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn key_update_examples() {
        assert_eq!(key_update_t(1, 0), (1, 1, 1));
        assert_eq!(key_update_t(0, 1), (0, 1, 0));
        assert_eq!(key_update_t(1, 1), (1, 0, 1));
    }

    /// Two T gates in a row: the two S corrections (same `a`) collapse into one Z
    /// key, since `S·S = Z`.
    #[test]
    fn repeated_t_updates_compose() {
        let t = GateKind::T.matrix1().unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                let (x1, z1, s1) = key_update_t(a, b);
                let (x2, z2, s2) = key_update_t(x1, z1);
                assert_eq!(s1, s2);
                let z = z2 ^ (s1 & s2);
                assert_eq!((x2, z), (a, a ^ b));
                let lhs = mul(
                    &t,
                    &mul(&t, &mul(&pow(GateKind::X, a), &pow(GateKind::Z, b))),
                );
                let rhs = mul(
                    &pow(GateKind::X, x2),
                    &mul(&pow(GateKind::Z, z), &mul(&t, &t)),
                );
                assert!(equal_up_to_phase(&lhs, &rhs), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn encode_and_basis() {
        assert_eq!(encode_input(&[1, 0, 1]), vec![1, 0, 1]);
        assert_eq!(encode_input(&[0, 0, 0]), vec![0, 0, 0]);
        assert_eq!(client_basis(0), PauliBasis::X);
        assert_eq!(client_basis(1), PauliBasis::Y);
    }
}
