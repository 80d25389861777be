//! Validate an A∞-structure, a C∞-structure and a morphism between them.

use cinf::ainf::{check_cinf, check_morphism, check_stasheff, AInfMorphism, AInfStructure, MultiOp};
use cinf::exactlin::q;
use cinf::graded::{GradedBasis, GradedVector};

pub fn main() {
    let b = GradedBasis::new([("e", 0), ("x", 2), ("y", 2), ("z", 5)]).unwrap();
    let mut m3 = MultiOp::structure(3);
    m3.insert(vec![1, 1, 2], GradedVector::term(3, q(1)));
    m3.insert(vec![2, 1, 1], GradedVector::term(3, q(-1)));
    let s = AInfStructure::new(b.clone(), Some(0), [m3.clone()], 5).unwrap();
    println!("Stasheff: {:?}", check_stasheff(&s, 14).map(|_| "ok"));
    println!("shuffle vanishing: {:?}", check_cinf(&s).map(|_| "ok"));

    // m₃(x,x,x) = z is Stasheff-consistent but not C∞
    m3.insert(vec![1, 1, 1], GradedVector::basis(3));
    let bad = AInfStructure::new(b, Some(0), [m3], 5).unwrap();
    println!("Stasheff: {:?}", check_stasheff(&bad, 14).map(|_| "ok"));
    match check_cinf(&bad) {
        Ok(()) => println!("unexpectedly C∞"),
        Err(w) => println!("C∞ witness: {w}"),
    }

    let id = AInfMorphism::identity(&s);
    println!("identity is a morphism: {}", check_morphism(&id, 14).is_ok());
}
