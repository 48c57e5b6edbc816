use std::f64::consts::FRAC_PI_3;

use hmsim_core::dichotomic::{
    bloch_of_qubit, continuous_probability, diagonal_coordinate, dyadic_outcome, qubit_from_angles, BlochVector,
    DichotomicOutcome, DyadicRule,
};
use hmsim_core::hilbert::{born_probability, Projector, StateVector};
use hmsim_core::history::{
    history_probability, inhomogeneous_probability, trajectory, Convention, HistoryOutcome, HomogeneousHistory,
    InhomogeneousHistory,
};
use hmsim_core::sampler::{run_dichotomic, run_history, DichotomicModel, RandomSource};
use hmsim_core::verify::{exact_check, lambda_preimage};

fn plus() -> StateVector {
    StateVector::from_real(&[1.0, 1.0]).unwrap().normalized().unwrap()
}

fn p0() -> Projector {
    Projector::basis_span(2, &[0]).unwrap()
}

#[test]
fn sixty_degree_qubit() {
    let psi = qubit_from_angles(FRAC_PI_3, 0.0);
    let born = born_probability(&psi, &p0()).unwrap();
    assert!((born - 0.75).abs() < 1e-15);
    let z = BlochVector::new(0.0, 0.0, 1.0).unwrap();
    let t = diagonal_coordinate(&bloch_of_qubit(&psi).unwrap(), &z);
    assert!((continuous_probability(t) - born).abs() < 1e-15);
    let s = run_dichotomic(DichotomicModel::Continuous, born, 200_000, 60, &RandomSource::new(3, 0)).unwrap();
    assert!(s.passes(), "{s:?}");
}

#[test]
fn dyadic_half() {
    assert_eq!(dyadic_outcome(0.5, 1).unwrap(), DichotomicOutcome::Alpha);
    assert_eq!(dyadic_outcome(0.5, 2).unwrap(), DichotomicOutcome::NotAlpha);
    assert_eq!(
        lambda_preimage(0.5, DichotomicOutcome::Alpha, 20, DyadicRule::Greedy).unwrap(),
        vec![1]
    );
    let report = exact_check(1.0 / 3.0, 30, DyadicRule::Geometric).unwrap();
    assert!(report.bound_satisfied && report.abs_error < 2f64.powi(-30));
}

#[test]
fn two_step_history_on_plus() {
    let a = HomogeneousHistory::sequential(vec![p0(), p0()]).unwrap();
    assert!((history_probability(&plus(), &a, Convention::Lueders).unwrap() - 0.5).abs() < 1e-12);
    assert!((history_probability(&plus(), &a, Convention::Literal).unwrap() - 0.25).abs() < 1e-12);
    let path = trajectory(&plus(), &a, HistoryOutcome::Affirmed).unwrap().unwrap();
    assert_eq!(path, vec![StateVector::basis(2, 0).unwrap(); 2]);

    let p1 = p0().complement();
    let b = HomogeneousHistory::sequential(vec![p1.clone(), p1]).unwrap();
    let family = InhomogeneousHistory::new(vec![a.clone(), b]).unwrap();
    assert!((inhomogeneous_probability(&plus(), &family, Convention::Lueders).unwrap() - 1.0).abs() < 1e-12);

    let s = run_history(&plus(), &a, Convention::Literal, 200_000, 60, &RandomSource::new(4, 0)).unwrap();
    assert!(s.passes(), "{s:?}");
}
