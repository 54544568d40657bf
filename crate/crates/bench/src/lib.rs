//! Shared fixtures for the criterion benches.

use num_complex::Complex64;
use swbec::boundary::{build, BoundaryData, FamilyParams};
use swbec::bulk::PhysParams;
use swbec::indices::{nd_params_from_reduced, nn_params_from_reduced};

pub fn phys() -> PhysParams {
    PhysParams::new(1.0, 0.2).unwrap()
}

pub fn nd_case() -> BoundaryData {
    build(&nd_params_from_reduced(-1.5, 0.8, &phys())).unwrap()
}

pub fn nn_case() -> BoundaryData {
    build(&nn_params_from_reduced(
        Complex64::new(0.3, 0.2),
        -1.5,
        2.3,
    ))
    .unwrap()
}

pub fn dirichlet() -> BoundaryData {
    build(&FamilyParams::dirichlet()).unwrap()
}
