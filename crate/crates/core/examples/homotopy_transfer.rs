//! Transfer a small cdga to a minimal C∞-structure on its cohomology.

use cinf::ainf::{check_cinf, check_morphism, check_stasheff};
use cinf::transfer::{build_transfer_data, models, transfer_cinf};

pub fn main() {
    let a = models::s2s2s5_model(1, 2);
    println!("dim A = {}, homology = {:?}", a.dim(), a.homology_dims());
    let t = build_transfer_data(&a, None);
    assert!(t.verify(&a));
    let out = transfer_cinf(&a, &t, 4, 8).expect("transfer");
    let h = out.structure.basis();
    for op in out.structure.ops() {
        for (w, v) in op.entries() {
            let args: Vec<&str> = w.iter().map(|&g| h.name(g)).collect();
            println!("m{}({}) = {}", op.arity, args.join(","), v.display(h));
        }
    }
    println!("Stasheff: {}", check_stasheff(&out.structure, 10).is_ok());
    println!("C∞: {}", check_cinf(&out.structure).is_ok());
    println!("f is a morphism: {}", check_morphism(&out.morphism, 10).is_ok());
}
