//! The two isomorphism classes of C∞-structures on H*(S²∨S²∨S⁵).

use cinf::ainf::check_morphism;
use cinf::exactlin::{q, qr};
use cinf::invariants::{classify_s2s2s5, Classification};

pub fn main() {
    let pairs = [((1, 0), (0, 1)), ((2, 5), (-1, 1)), ((0, 0), (1, 1)), ((0, 0), (0, 0))];
    for ((p, qq), (p2, q2)) in pairs {
        let c = classify_s2s2s5(&q(p), &q(qq), &q(p2), &q(q2));
        print!("({p},{qq}) vs ({p2},{q2}): {c}");
        if let Classification::SameType { witness } = &c {
            print!(", witness valid: {}", check_morphism(witness, 14).is_ok());
        }
        println!();
    }
    let c = classify_s2s2s5(&qr(1, 3), &q(0), &q(0), &qr(-7, 2));
    println!("(1/3,0) vs (0,-7/2): {c}");
}
