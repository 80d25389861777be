//! Shuffle products in the tensor coalgebra and the decomposables they span.

use cinf::barcoalg::{shuffle, shuffle_decomposables, BarSpace};
use cinf::graded::GradedBasis;

pub fn main() {
    let b = GradedBasis::new([("e", 0), ("x", 2), ("y", 2)]).unwrap();
    let space = BarSpace::new(b, Some(0));
    let (x, y) = (1, 2);
    println!("[x] ⧢ [y]   = {}", shuffle(&space, &[x], &[y]).display(&space));
    println!("[x] ⧢ [x,y] = {}", shuffle(&space, &[x], &[x, y]).display(&space));
    for n in 2..=4 {
        let d = shuffle_decomposables(&space, n);
        println!("length {n}: {} words, {} decomposable, {} indecomposable", d.words.len(), d.dim(), d.quotient_dim());
    }
}
