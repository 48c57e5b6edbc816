//! The qubit model on the Bloch sphere.
//!
//! A question is a pair of antipodal points `α`, `¬α`. The state `p` is
//! projected orthogonally onto the diagonal joining them; the projection
//! sits at coordinate `t` (0 at `α`, 1 at `¬α`). The contextual variable is a
//! uniform coordinate `u` on the same diagonal, and the outcome is `α`
//! exactly when `u ≥ t`. Its probability `1 - t` is the Born probability.

use alloc::vec;

use num_complex::Complex64;

use super::DichotomicOutcome;
use crate::hilbert::StateVector;
use crate::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        let norm_sqr = v.dot(&v);
        if (norm_sqr - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::Domain {
                what: "Bloch vector squared length",
                value: norm_sqr,
            });
        }
        Ok(v)
    }

    /// Polar angle `theta` from +z and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = libm::sin(theta);
        Self {
            x: s * libm::cos(phi),
            y: s * libm::sin(phi),
            z: libm::cos(theta),
        }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn antipode(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Qubit `(cos θ/2, e^{iφ} sin θ/2)`, whose Bloch vector has angles `(θ, φ)`.
pub fn qubit_from_angles(theta: f64, phi: f64) -> StateVector {
    let a = Complex64::new(libm::cos(theta / 2.0), 0.0);
    let b = Complex64::from_polar(libm::sin(theta / 2.0), phi);
    StateVector::new(vec![a, b]).expect("two amplitudes")
}

/// `x = 2 Re(ā b)`, `y = 2 Im(ā b)`, `z = |a|² - |b|²`.
pub fn bloch_of_qubit(state: &StateVector) -> Result<BlochVector> {
    if state.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: state.dim(),
        });
    }
    state.require_normalized()?;
    let state = state.normalized()?;
    let (a, b) = (state.amplitudes()[0], state.amplitudes()[1]);
    let cross = a.conj() * b;
    Ok(BlochVector {
        x: 2.0 * cross.re,
        y: 2.0 * cross.im,
        z: a.norm_sqr() - b.norm_sqr(),
    })
}

/// Position on the `α`-`¬α` diagonal: 0 at `α`, 1 at `¬α`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DiagonalCoordinate(f64);

impl DiagonalCoordinate {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::Domain {
                what: "diagonal coordinate",
                value: t,
            })
        }
    }

    /// Coordinate of a point whose `α` probability is `p`.
    pub fn from_probability(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                what: "probability",
                value: p,
            });
        }
        Self::new(1.0 - p)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `t = (1 - p·α) / 2`.
pub fn diagonal_coordinate(p: &BlochVector, alpha: &BlochVector) -> DiagonalCoordinate {
    // Rounding can push the dot product a hair outside [-1, 1].
    DiagonalCoordinate(((1.0 - p.dot(alpha)) / 2.0).clamp(0.0, 1.0))
}

/// Outcome for the contextual coordinate `u`: `α` iff `u ≥ t`.
pub fn continuous_outcome(t: DiagonalCoordinate, u: f64) -> Result<DichotomicOutcome> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            what: "contextual coordinate",
            value: u,
        });
    }
    Ok(if u >= t.0 {
        DichotomicOutcome::Alpha
    } else {
        DichotomicOutcome::NotAlpha
    })
}

/// Uniform measure of `{u : u ≥ t}`.
pub fn continuous_probability(t: DiagonalCoordinate) -> f64 {
    1.0 - t.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{born_probability, Projector};
    use core::f64::consts::{FRAC_1_SQRT_2, PI};
    use proptest::prelude::*;

    fn close(a: &BlochVector, b: (f64, f64, f64)) -> bool {
        (a.x - b.0).abs() < 1e-15 && (a.y - b.1).abs() < 1e-15 && (a.z - b.2).abs() < 1e-15
    }

    #[test]
    fn bloch_correspondence() {
        let e0 = StateVector::basis(2, 0).unwrap();
        assert!(close(&bloch_of_qubit(&e0).unwrap(), (0.0, 0.0, 1.0)));
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!(close(&bloch_of_qubit(&plus).unwrap(), (1.0, 0.0, 0.0)));
        let s = FRAC_1_SQRT_2;
        let plus_i = StateVector::new(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
        assert!(close(&bloch_of_qubit(&plus_i).unwrap(), (0.0, 1.0, 0.0)));
        assert!(matches!(
            bloch_of_qubit(&StateVector::from_real(&[1.0, 1.0]).unwrap()),
            Err(Error::Normalization { .. })
        ));
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn diagonal_coordinates() {
        let alpha = BlochVector::from_angles(0.3, 1.1);
        assert_eq!(diagonal_coordinate(&alpha, &alpha).value(), 0.0);
        assert_eq!(diagonal_coordinate(&alpha.antipode(), &alpha).value(), 1.0);
        let z = BlochVector::new(0.0, 0.0, 1.0).unwrap();
        let p = BlochVector::from_angles(PI / 3.0, 0.0);
        assert!((diagonal_coordinate(&p, &z).value() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn continuous_outcomes() {
        let t0 = DiagonalCoordinate::new(0.0).unwrap();
        for u in [0.0, 0.3, 1.0] {
            assert_eq!(continuous_outcome(t0, u).unwrap(), DichotomicOutcome::Alpha);
        }
        let t = DiagonalCoordinate::new(0.25).unwrap();
        assert_eq!(continuous_outcome(t, 0.5).unwrap(), DichotomicOutcome::Alpha);
        // Closed endpoint at the projection point.
        assert_eq!(continuous_outcome(t, 0.25).unwrap(), DichotomicOutcome::Alpha);
        assert_eq!(continuous_outcome(t, 0.2499).unwrap(), DichotomicOutcome::NotAlpha);
        assert!(continuous_outcome(t, 1.5).is_err());
        assert!(continuous_outcome(t, f64::NAN).is_err());
        assert!(DiagonalCoordinate::new(-0.1).is_err());
    }

    #[test]
    fn continuous_probabilities() {
        let p = |t| continuous_probability(DiagonalCoordinate::new(t).unwrap());
        assert_eq!(p(0.0), 1.0);
        assert_eq!(p(0.25), 0.75);
        assert_eq!(p(0.5), 0.5);
        let theta = PI / 3.0;
        assert!((p(0.25) - libm::cos(theta / 2.0).powi(2)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn continuous_model_matches_born(
            theta in 0.0..PI, phi in 0.0..2.0 * PI, a_theta in 0.0..PI, a_phi in 0.0..2.0 * PI
        ) {
            let p = qubit_from_angles(theta, phi);
            let a = qubit_from_angles(a_theta, a_phi);
            let t = diagonal_coordinate(&bloch_of_qubit(&p).unwrap(), &bloch_of_qubit(&a).unwrap());
            let born = born_probability(&p, &Projector::ketbra(&a).unwrap()).unwrap();
            prop_assert!((continuous_probability(t) - born).abs() <= 1e-12);
        }

        #[test]
        fn outcome_is_a_threshold_in_u(t in 0.0..=1.0f64, u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
            let t = DiagonalCoordinate::new(t).unwrap();
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            if continuous_outcome(t, lo).unwrap().is_alpha() {
                prop_assert!(continuous_outcome(t, hi).unwrap().is_alpha());
            }
        }

        #[test]
        fn angles_round_trip(theta in 0.0..PI, phi in -PI..PI) {
            let b = bloch_of_qubit(&qubit_from_angles(theta, phi)).unwrap();
            let want = BlochVector::from_angles(theta, phi);
            prop_assert!((b.x - want.x).abs() < 1e-12 && (b.y - want.y).abs() < 1e-12 && (b.z - want.z).abs() < 1e-12);
        }
    }
}
