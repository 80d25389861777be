//! The transferred m₃ on a planted Massey triple.

use cinf::transfer::{build_transfer_data, models, transfer_cinf};

pub fn main() {
    let a = models::massey_triple();
    let t = build_transfer_data(&a, None);
    let out = transfer_cinf(&a, &t, 3, 6).expect("transfer");
    let h = out.structure.basis();
    let idx = |n: &str| h.index_of(n).unwrap();
    let m3 = out.structure.op(3).expect("nonzero m3");
    let v = m3.get(&[idx("a"), idx("b"), idx("c")]);
    println!("m3(a,b,c) = {}", v.display(h));
    println!("representative in A: {}", t.section.apply(&v).display(a.basis()));
}
