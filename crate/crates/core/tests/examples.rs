//! Every capability example runs to completion.

#[path = "../examples/exact_linear_algebra.rs"]
mod exact_linear_algebra;

#[path = "../examples/koszul_signs.rs"]
mod koszul_signs;

#[path = "../examples/bar_shuffles.rs"]
mod bar_shuffles;

#[path = "../examples/stasheff_check.rs"]
mod stasheff_check;

#[path = "../examples/homotopy_transfer.rs"]
mod homotopy_transfer;

#[path = "../examples/massey_product.rs"]
mod massey_product;

#[path = "../examples/hochschild_formality.rs"]
mod hochschild_formality;

#[path = "../examples/homotopy_groups.rs"]
mod homotopy_groups;

#[path = "../examples/classify_structures.rs"]
mod classify_structures;

#[path = "../examples/realize_map.rs"]
mod realize_map;

#[test]
fn runs_exact_linear_algebra() {
    exact_linear_algebra::main();
}

#[test]
fn runs_koszul_signs() {
    koszul_signs::main();
}

#[test]
fn runs_bar_shuffles() {
    bar_shuffles::main();
}

#[test]
fn runs_stasheff_check() {
    stasheff_check::main();
}

#[test]
fn runs_homotopy_transfer() {
    homotopy_transfer::main();
}

#[test]
fn runs_massey_product() {
    massey_product::main();
}

#[test]
fn runs_hochschild_formality() {
    hochschild_formality::main();
}

#[test]
fn runs_homotopy_groups() {
    homotopy_groups::main();
}

#[test]
fn runs_classify_structures() {
    classify_structures::main();
}

#[test]
fn runs_realize_map() {
    realize_map::main();
}
