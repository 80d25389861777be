//! Rank, kernel, solving and homology over ℚ.

use cinf::exactlin::{format_scalar, kernel_basis, q, qr, quotient_and_homology, rank, solve, SparseMatrix};

pub fn main() {
    let m = SparseMatrix::from_dense(&[
        vec![q(1), q(2), q(3)],
        vec![q(2), q(4), q(6)],
        vec![qr(1, 2), q(0), q(-1)],
    ]);
    println!("rank = {}", rank(&m));
    for v in kernel_basis(&m) {
        println!("kernel vector: [{}]", v.iter().map(format_scalar).collect::<Vec<_>>().join(", "));
    }
    let x = solve(&m, &[q(1), q(2), q(0)]).expect("consistent");
    println!("solution: [{}]", x.iter().map(format_scalar).collect::<Vec<_>>().join(", "));

    // the circle as a chain complex: one vertex, one edge, d = 0
    let d0 = SparseMatrix::zeros(1, 1);
    let h = quotient_and_homology(&SparseMatrix::zeros(1, 0), &d0).expect("d² = 0");
    println!("H₀ of a point: {}", h.dim);
}
