//! Koszul and desuspension signs on graded words.

use cinf::graded::{bar_sign, koszul_sign, GradedBasis, GradedMap, GradedVector};
use cinf::exactlin::q;

pub fn main() {
    println!("swap of degrees 1 and 3: {}", koszul_sign(&[1], &[3]));
    println!("swap of degrees 2 and 5: {}", koszul_sign(&[2], &[5]));
    for degs in [[2, 2, 2], [2, 3, 2], [3, 3, 3]] {
        println!("bar sign of {degs:?}: {}", bar_sign(&degs));
    }

    let b = GradedBasis::new([("x", 2), ("y", 2), ("z", 5)]).unwrap();
    let swap = GradedMap::from_named(b.clone(), b.clone(), 0, &[("x", vec![("y", q(1))]), ("y", vec![("x", q(-1))])]).unwrap();
    let v = GradedVector::from_terms([(0, q(3)), (1, q(1))]);
    println!("swap(3x + y) = {}", swap.apply(&v).display(&b));
    println!("swap² = -id on x, y: {}", swap.then(&swap).apply(&v).display(&b));
}
