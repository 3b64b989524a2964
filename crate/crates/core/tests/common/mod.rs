#![allow(dead_code)]

use hypercomplex::clifford::{build, compute_spin_metric, ConnectingOperators, SpinMetric};
use hypercomplex::forge::{inclusion_operator, octonion_spinor, ControllingSpinor, InclusionMap};
use hypercomplex::StructureTable;

pub struct Setup {
    pub ops: ConnectingOperators,
    pub eps: SpinMetric,
    pub theta: ControllingSpinor,
    pub h: InclusionMap,
}

pub fn setup(n: usize) -> Setup {
    let ops = build(n).unwrap();
    let eps = compute_spin_metric(&ops).unwrap();
    let theta = octonion_spinor(&ops, &eps).unwrap();
    let h = inclusion_operator(&ops.g).unwrap();
    Setup { ops, eps, theta, h }
}

pub fn max_table_diff(a: &StructureTable, b: &StructureTable) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((a.constant(i, j, k) - b.constant(i, j, k)).norm());
            }
        }
    }
    worst
}
