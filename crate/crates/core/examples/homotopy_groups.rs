//! Loop-space cohomology and rational homotopy ranks from a minimal C∞-model.

use cinf::exactlin::q;
use cinf::invariants::{bar_homology, indecomposables_complex, pi_ranks, s2s2s5_structure, sphere_cohomology};

pub fn main() {
    println!("H(ΩS³): {:?}", bar_homology(&sphere_cohomology(3), 8).unwrap());
    for (name, p, qq) in [("X", 0, 0), ("Y", 1, 0)] {
        let s = s2s2s5_structure(q(p), q(qq));
        let qb = indecomposables_complex(&s, 4).unwrap();
        let dims: Vec<usize> = (1..=3).map(|k| qb.dim(k)).collect();
        println!("{name}: bar ranks {:?}", bar_homology(&s, 4).unwrap());
        println!("{name}: QB dims {dims:?}, π ranks {:?}", pi_ranks(&s, 4).unwrap());
    }
}
