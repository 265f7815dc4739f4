#![allow(dead_code)]

use qem_core::models::{cylinder, doubly_warped, hemisphere, product_excg, QEInstance};
use qem_core::verify::checks::{constants, evaluate_points};
use qem_core::verify::{PointData, QeConstants};

pub fn calibrated(mut inst: QEInstance<f64>, points: usize) -> QEInstance<f64> {
    let pts = inst.sample_points(points);
    inst.calibrate(&pts).expect("built-in models have constant scalar curvature");
    inst
}

/// The built-ins named in the acceptance list.
pub fn builtins() -> Vec<QEInstance<f64>> {
    let mut v = Vec::new();
    for n in [3, 4] {
        for m in [2.0, 3.0] {
            v.push(hemisphere(n, m).unwrap());
        }
    }
    v.push(cylinder(3, 2.0, 1.0).unwrap());
    v.push(cylinder(4, 2.0, 1.0).unwrap());
    v.push(doubly_warped(1, 2, 2.0).unwrap());
    v.push(product_excg(2, 2, 2.0, 1.0).unwrap());
    v.into_iter().map(|i| calibrated(i, 20)).collect()
}

pub fn point_data(inst: &QEInstance<f64>, points: usize, order: usize) -> (Vec<PointData<f64>>, QeConstants<f64>) {
    let pds = evaluate_points(inst, &inst.sample_points(points), order).unwrap();
    (pds, constants(inst).unwrap())
}
