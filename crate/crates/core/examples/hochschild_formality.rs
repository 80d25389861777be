//! Hochschild and Harrison cohomology of H*(S²∨S²∨S⁵) and the formality test.

use cinf::exactlin::q;
use cinf::hoch::cohomology_dim;
use cinf::invariants::{formality_verdict, s2s2s5_structure, FormalityVerdict};

pub fn main() {
    let strict = s2s2s5_structure(q(0), q(0));
    println!("Hoch^(3,-1) = {}", cohomology_dim(&strict, 3, -1, false));
    println!("Harr^(3,-1) = {}", cohomology_dim(&strict, 3, -1, true));
    for (p, qq) in [(0, 0), (1, 0), (3, -2)] {
        let v = formality_verdict(&s2s2s5_structure(q(p), q(qq)), 4);
        let extra = match &v {
            FormalityVerdict::Nonformal { arity, .. } => format!(" (obstruction in arity {arity})"),
            _ => String::new(),
        };
        println!("(p, q) = ({p}, {qq}): {}{extra}", v.label());
    }
}
