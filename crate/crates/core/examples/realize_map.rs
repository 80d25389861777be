//! Extending an algebra map of cohomologies to a C∞-morphism, or finding
//! the obstruction.

use cinf::exactlin::q;
use cinf::invariants::{realize_search, s2s2s5_structure, s2s2s5_to_sphere, sphere_cohomology, Realization};

pub fn main() {
    let s5 = sphere_cohomology(5);
    for (name, p) in [("X", 0), ("Y", 1)] {
        let s = s2s2s5_structure(q(p), q(0));
        let g = s2s2s5_to_sphere(&s, &s5);
        match realize_search(&s, &s5, &g, 4).unwrap() {
            Realization::Extended(f) => println!("{name} -> S⁵: extends with {} component(s)", f.components().count()),
            Realization::Obstructed { arity, .. } => println!("{name} -> S⁵: obstructed at arity {arity}"),
        }
    }
}
