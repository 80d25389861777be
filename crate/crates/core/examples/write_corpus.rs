//! Regenerates the JSON corpus under `data/`.
//!
//! cargo run --example write_corpus [-- <dir>]

use std::path::PathBuf;

use cinf::ainf::MultiOp;
use cinf::cli::{AlgebraFile, AlgebraRef, MorphismFile, TableEntry};
use cinf::exactlin::q;
use cinf::graded::GradedVector;
use cinf::invariants::{s2s2s5_structure, sphere_cohomology};
use cinf::transfer::{models, random_small_dga, window_cdga};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
    });
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, text: String| {
        println!("{name}");
        std::fs::write(dir.join(name), text)
    };

    write("s2s2s5_x.json", AlgebraFile::from_structure(&s2s2s5_structure(q(0), q(0))).to_json())?;
    write("s2s2s5_y.json", AlgebraFile::from_structure(&s2s2s5_structure(q(1), q(0))).to_json())?;
    write("s2s2s5_p1_q1.json", AlgebraFile::from_structure(&s2s2s5_structure(q(1), q(1))).to_json())?;

    // m₃(x,x,x) = z violates shuffle vanishing
    let s = s2s2s5_structure(q(1), q(1));
    let mut m3: MultiOp = s.op(3).expect("m3").clone();
    m3.insert(vec![1, 1, 1], GradedVector::basis(3));
    let bad = s.with_op(m3).expect("degree -1");
    write("s2s2s5_bad_xxx.json", AlgebraFile::from_structure(&bad).to_json())?;

    for n in [2, 3, 5] {
        write(&format!("sphere_{n}.json"), AlgebraFile::from_structure(&sphere_cohomology(n)).to_json())?;
    }
    write("massey_dga.json", AlgebraFile::from_dga(&models::massey_triple()).to_json())?;
    write("s2s2s5_model_p1_q0.json", AlgebraFile::from_dga(&models::s2s2s5_model(1, 0)).to_json())?;
    // a cdga whose transferred structure depends on the splitting
    write("random_cdga_7.json", AlgebraFile::from_dga(&random_small_dga(7, true, 12)).to_json())?;
    for n in [2, 3] {
        for seed in 0..2 {
            write(&format!("window_n{n}_s{seed}.json"), AlgebraFile::from_dga(&window_cdga(n, seed)).to_json())?;
        }
    }

    let to_s5 = |src: &str| MorphismFile {
        source: AlgebraRef::Path(src.into()),
        target: AlgebraRef::Path("sphere_5.json".into()),
        components: [(
            "1".to_string(),
            vec![TableEntry { on: vec!["z".into()], value: vec![("s0".into(), "1".into())] }],
        )]
        .into(),
    };
    write("y_to_s5.json", to_s5("s2s2s5_y.json").to_json())?;
    write("x_to_s5.json", to_s5("s2s2s5_x.json").to_json())?;

    write(
        "malformed_rational.json",
        concat!(
            "{\n  \"kind\": \"cinf\",\n  \"generators\": [{ \"name\": \"e\", \"degree\": 0 }, { \"name\": \"x\", \"degree\": 2 }],\n",
            "  \"unit\": \"e\",\n  \"product\": [{ \"on\": [\"x\", \"x\"], \"value\": [[\"x\", \"1/0\"]] }]\n}\n"
        )
        .to_string(),
    )?;
    Ok(())
}
