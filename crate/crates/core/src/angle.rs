//! Measurement and rotation angles.
//!
//! Every angle the protocol touches is a multiple of π/4, so those are kept as an
//! exact octant count. Arbitrary radians are still accepted for ad-hoc rotations.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub enum Angle {
    /// `k·π/4` with `k` in `0..8`.
    Octant(u8),
    /// Radians, normalised into `[0, 2π)`.
    Radians(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Octant(0);
    pub const QUARTER_PI: Angle = Angle::Octant(1);
    pub const HALF_PI: Angle = Angle::Octant(2);
    pub const PI: Angle = Angle::Octant(4);
    pub const THREE_HALF_PI: Angle = Angle::Octant(6);

    pub fn octants(k: i64) -> Self {
        Angle::Octant(k.rem_euclid(8) as u8)
    }

    /// Builds an angle from radians, snapping to an octant when within 1e-12.
    pub fn radians(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        let k = (t / (PI / 4.0)).round();
        if (t - k * PI / 4.0).abs() < 1e-12 {
            Angle::octants(k as i64)
        } else {
            Angle::Radians(t)
        }
    }

    pub fn as_radians(self) -> f64 {
        match self {
            Angle::Octant(k) => f64::from(k) * PI / 4.0,
            Angle::Radians(t) => t,
        }
    }

    pub fn as_octant(self) -> Option<u8> {
        match self {
            Angle::Octant(k) => Some(k),
            Angle::Radians(_) => None,
        }
    }

    pub fn plus_pi(self) -> Self {
        self + Angle::PI
    }

    /// `e^{iθ}`, exact for octants.
    pub fn phase(self) -> Complex64 {
        match self {
            Angle::Octant(k) => octant_phase(k),
            Angle::Radians(t) => Complex64::from_polar(1.0, t),
        }
    }
}

fn octant_phase(k: u8) -> Complex64 {
    let h = FRAC_1_SQRT_2;
    match k % 8 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(h, h),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-h, h),
        4 => Complex64::new(-1.0, 0.0),
        5 => Complex64::new(-h, -h),
        6 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(h, -h),
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Angle::Octant(a), Angle::Octant(b)) => a == b,
            _ => {
                let d = (self.as_radians() - other.as_radians()).rem_euclid(TAU);
                d < 1e-12 || TAU - d < 1e-12
            }
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Octant(0) => write!(f, "0"),
            Angle::Octant(4) => write!(f, "pi"),
            Angle::Octant(k) if k % 2 == 0 => write!(f, "{}pi/2", k / 2),
            Angle::Octant(k) => write!(f, "{k}pi/4"),
            Angle::Radians(t) => write!(f, "{t}"),
        }
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        match self {
            Angle::Octant(k) => Angle::octants(-i64::from(k)),
            Angle::Radians(t) => Angle::radians(-t),
        }
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        match (self, other) {
            (Angle::Octant(a), Angle::Octant(b)) => Angle::octants(i64::from(a) + i64::from(b)),
            _ => Angle::radians(self.as_radians() + other.as_radians()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant_arithmetic_wraps() {
        assert_eq!(-Angle::QUARTER_PI, Angle::Octant(7));
        assert_eq!(Angle::THREE_HALF_PI.plus_pi(), Angle::HALF_PI);
        assert_eq!(Angle::octants(-9), Angle::Octant(7));
    }

    #[test]
    fn radians_snap_to_octants() {
        assert_eq!(Angle::radians(-PI / 2.0).as_octant(), Some(6));
        assert!(Angle::radians(0.3).as_octant().is_none());
        assert_eq!(Angle::radians(0.3), Angle::Radians(0.3));
    }

    #[test]
    fn octant_phases_match_polar_form() {
        for k in 0..8u8 {
            let exact = Angle::Octant(k).phase();
            let polar = Complex64::from_polar(1.0, f64::from(k) * PI / 4.0);
            assert!((exact - polar).norm() < 1e-15);
        }
    }
}
