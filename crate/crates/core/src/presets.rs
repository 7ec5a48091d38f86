//! Built-in systems.
//!
//! The soil-transmitted helminth (STH) systems model adult worms in hosts
//! (class 1) and larvae in the environment (class 2). Treatment removes a
//! fraction `cδ` of adult worms (`c` coverage, `δ` drug efficacy) and leaves
//! larvae untouched, so `D = diag(1 − cδ, 1)`. Entries are stored verbatim
//! rather than recomputed from coverage and efficacy; time is in days.

use crate::linalg::SquareMatrix;
use crate::system::{ControlSystem, DiagonalControl};

#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub provenance: &'static str,
    pub system: ControlSystem,
}

struct Spec {
    id: &'static str,
    provenance: &'static str,
    a: &'static [&'static [f64]],
    d: &'static [f64],
    time_unit: &'static str,
}

const SPECS: &[Spec] = &[
    Spec {
        id: "sth-roundworm",
        provenance: "STH two-class model, roundworm (Ascaris lumbricoides) parameterization \
                     with 75% coverage of school-aged children",
        a: &[&[-0.0028, 1.3e-8], &[5000.0, -0.016]],
        d: &[0.62875, 1.0],
        time_unit: "days",
    },
    Spec {
        id: "sth-whipworm",
        provenance: "STH two-class model, whipworm (Trichuris trichiura) parameterization \
                     with 75% coverage of school-aged children",
        a: &[&[-0.0028, 2.089e-7], &[1000.0, -0.05]],
        d: &[0.8125, 1.0],
        time_unit: "days",
    },
    Spec {
        id: "sth-hookworm",
        provenance: "STH two-class model, hookworm (Ancylostoma duodenale) parameterization \
                     with 75% coverage of school-aged children",
        a: &[&[-0.0014, 1.18e-7], &[1500.0, -0.082]],
        d: &[0.64375, 1.0],
        time_unit: "days",
    },
    Spec {
        id: "rotation-ctrex",
        provenance: "rotation generator A = [[0,-1],[1,0]] with D = diag(1, 0.25): \
                     complex spectrum, r(tau) not convex",
        a: &[&[0.0, -1.0], &[1.0, 0.0]],
        d: &[1.0, 0.25],
        time_unit: "time",
    },
    Spec {
        id: "fig1-topleft",
        provenance: "trichotomy example A = [[0.2,1],[1,-0.2]], D = diag(0.5,0.25): \
                     weakest-controlled class self-promoting, r increasing",
        a: &[&[0.2, 1.0], &[1.0, -0.2]],
        d: &[0.5, 0.25],
        time_unit: "time",
    },
    Spec {
        id: "fig1-bottomleft",
        provenance: "trichotomy example A = [[-2,1],[1,1]], D = diag(0.5,0.25): \
                     interior optimal period",
        a: &[&[-2.0, 1.0], &[1.0, 1.0]],
        d: &[0.5, 0.25],
        time_unit: "time",
    },
    Spec {
        id: "fig1-stable",
        provenance: "trichotomy example A = [[-2,1],[1,-2]], D = diag(0.5,0.25): \
                     stable, r decreasing",
        a: &[&[-2.0, 1.0], &[1.0, -2.0]],
        d: &[0.5, 0.25],
        time_unit: "time",
    },
    Spec {
        id: "scalar-demo",
        provenance:
            "unstructured population x' = 0.1 x with pulses x -> 0.5 x; r(tau) = 0.5 e^{0.1 tau}",
        a: &[&[0.1]],
        d: &[0.5],
        time_unit: "time",
    },
];

fn build(spec: &Spec) -> Preset {
    let a = SquareMatrix::from_rows(spec.a).expect("preset matrix is valid");
    let d = DiagonalControl::new(spec.d.to_vec()).expect("preset control is valid");
    let system = ControlSystem::new(a, d, spec.time_unit).expect("preset dimensions agree");
    Preset {
        id: spec.id,
        provenance: spec.provenance,
        system,
    }
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    SPECS.iter().map(|s| s.id)
}

pub fn all() -> Vec<Preset> {
    SPECS.iter().map(build).collect()
}

pub fn get(id: &str) -> Option<Preset> {
    SPECS.iter().find(|s| s.id == id).map(build)
}
