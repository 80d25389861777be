//! Homotopy transfer from a finite (commutative) dg algebra to its homology.
//!
//! The homology is split off degreewise as `A = B ⊕ C ⊕ W` with `B` the
//! boundaries, `C` a complement of `B` in the cycles and `W` a complement of
//! the cycles; `d: W → B` is inverted to give the homotopy. Higher operations
//! and morphism components are then produced arity by arity on the bar level.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ainf::{check_cinf, check_morphism_cinf, AInfMorphism, AInfStructure, AinfError, MultiOp};
use crate::barcoalg::{apply_coalgebra_map, apply_coderivation, shuffle, BarElement, BarSpace, Components, TableComponents, Word};
use crate::exactlin::{inverse, kernel_basis, quotient_and_homology, rref, solve, Scalar, SparseMatrix};
use crate::graded::{GradedBasis, GradedError, GradedMap, GradedVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Ainf(#[from] AinfError),
    #[error("d² ≠ 0 on `{0}`")]
    DifferentialSquare(String),
    #[error("d of the unit is nonzero")]
    UnitNotClosed,
    #[error("`{0}` has a nonzero unit component")]
    UnitComponent(String),
    #[error("Leibniz rule fails on ({0}, {1})")]
    Leibniz(String, String),
    #[error("product is not associative on ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("product is not graded commutative on ({0}, {1})")]
    NotCommutative(String, String),
    #[error("unit generator must have degree 0")]
    UnitDegree,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error(transparent)]
    Ainf(#[from] AinfError),
    #[error("degree bound {given} is below the top degree {needed} of the algebra")]
    BoundTooSmall { needed: i32, given: i32 },
    #[error("C∞ transfer requires a commutative algebra")]
    NotCommutative,
    #[error("no shuffle-vanishing correction exists at arity {arity}")]
    CorrectionUnsolvable { arity: usize },
}

/// A finite, augmented, unital dg algebra. Products and differentials of
/// non-unit generators never have a unit component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    basis: GradedBasis,
    unit: usize,
    differential: GradedMap,
    product: MultiOp,
    commutative: bool,
}

impl DgAlgebra {
    /// Validates every axiom; `product` lists values on non-unit pairs.
    pub fn new(
        basis: GradedBasis,
        unit: usize,
        differential: GradedMap,
        product: MultiOp,
        commutative: bool,
    ) -> Result<Self, DgError> {
        let a = DgAlgebra { basis, unit, differential, product, commutative };
        a.validate()?;
        Ok(a)
    }

    /// Builds from generator names. For a commutative algebra a product
    /// `(a, b)` given without `(b, a)` is completed by graded commutativity.
    pub fn from_named(
        generators: &[(&str, i32)],
        unit: &str,
        differential: &[(&str, Vec<(&str, Scalar)>)],
        products: &[((&str, &str), Vec<(&str, Scalar)>)],
        commutative: bool,
    ) -> Result<Self, DgError> {
        let basis = GradedBasis::new(generators.iter().map(|(n, d)| (n.to_string(), *d)))?;
        let unit = basis.index_of(unit)?;
        let d = GradedMap::from_named(basis.clone(), basis.clone(), 1, differential)?;
        let mut m = MultiOp::structure(2);
        let mut given = std::collections::BTreeSet::new();
        for ((l, r), terms) in products {
            let (i, j) = (basis.index_of(l)?, basis.index_of(r)?);
            let mut v = GradedVector::zero();
            for (t, c) in terms {
                v.add_term(basis.index_of(t)?, c.clone());
            }
            given.insert((i, j));
            m.insert(vec![i, j], v);
        }
        if commutative {
            for ((l, r), _) in products {
                let (i, j) = (basis.index_of(l)?, basis.index_of(r)?);
                if !given.contains(&(j, i)) {
                    let sign = crate::graded::parity_scalar(basis.degree(i) * basis.degree(j));
                    let v = m.get(&[i, j]).scaled(&sign);
                    m.insert(vec![j, i], v);
                }
            }
        }
        Self::new(basis, unit, d, m, commutative)
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn product_table(&self) -> &MultiOp {
        &self.product
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> GradedVector {
        if a == self.unit {
            GradedVector::basis(b)
        } else if b == self.unit {
            GradedVector::basis(a)
        } else {
            self.product.get(&[a, b])
        }
    }

    pub fn mul_vec(&self, x: &GradedVector, y: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (a, c) in x.iter() {
            for (b, e) in y.iter() {
                out.add_scaled(&self.mul(a, b), &(c * e));
            }
        }
        out
    }

    pub fn d(&self, x: &GradedVector) -> GradedVector {
        self.differential.apply(x)
    }

    fn validate(&self) -> Result<(), DgError> {
        let b = &self.basis;
        let name = |i: usize| b.name(i).to_string();
        if b.degree(self.unit) != 0 {
            return Err(DgError::UnitDegree);
        }
        if !self.differential.image(self.unit).is_zero() {
            return Err(DgError::UnitNotClosed);
        }
        let space = BarSpace::new(b.clone(), Some(self.unit));
        // degree checks and no unit in the reduced product table
        AInfStructure::new(b.clone(), Some(self.unit), [self.product.clone()], 2)?;
        for g in 0..b.len() {
            if g != self.unit && !self.differential.image(g).coeff(self.unit).is_zero() {
                return Err(DgError::UnitComponent(format!("d {}", name(g))));
            }
            if !self.d(self.differential.image(g)).is_zero() {
                return Err(DgError::DifferentialSquare(name(g)));
            }
        }
        let letters = space.letters().to_vec();
        for &x in &letters {
            for &y in &letters {
                let xy = self.mul(x, y);
                let mut rhs = self.mul_vec(self.differential.image(x), &GradedVector::basis(y));
                let sign = crate::graded::parity_scalar(b.degree(x));
                rhs.add_scaled(&self.mul_vec(&GradedVector::basis(x), self.differential.image(y)), &sign);
                if self.d(&xy) != rhs {
                    return Err(DgError::Leibniz(name(x), name(y)));
                }
                if self.commutative {
                    let s = crate::graded::parity_scalar(b.degree(x) * b.degree(y));
                    if xy != self.mul(y, x).scaled(&s) {
                        return Err(DgError::NotCommutative(name(x), name(y)));
                    }
                }
                for &z in &letters {
                    let l = self.mul_vec(&xy, &GradedVector::basis(z));
                    let r = self.mul_vec(&GradedVector::basis(x), &self.mul(y, z));
                    if l != r {
                        return Err(DgError::Associativity(name(x), name(y), name(z)));
                    }
                }
            }
        }
        Ok(())
    }

    /// The algebra as an A∞-structure `{d, μ, 0, ...}`.
    pub fn as_ainf(&self, arity_bound: usize) -> AInfStructure {
        let mut m1 = MultiOp::structure(1);
        for g in 0..self.basis.len() {
            if g != self.unit {
                m1.insert(vec![g], self.differential.image(g).clone());
            }
        }
        AInfStructure::new(self.basis.clone(), Some(self.unit), [m1, self.product.clone()], arity_bound.max(2))
            .expect("validated algebra")
            .with_cinf(self.commutative)
    }

    fn degree_block(&self, k: i32) -> Vec<usize> {
        self.basis.in_degree(k).into_iter().filter(|&g| g != self.unit).collect()
    }

    fn d_matrix(&self, from: &[usize], to: &[usize]) -> SparseMatrix {
        let cols: Vec<Vec<Scalar>> = from.iter().map(|&g| self.differential.image(g).coords(to)).collect();
        SparseMatrix::from_columns(to.len(), &cols)
    }

    /// Dimensions of the homology in each degree, unit included.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in self.basis.min_degree().unwrap_or(0)..=self.basis.max_degree().unwrap_or(0) {
            let (p, c, n) = (self.degree_block(k - 1), self.degree_block(k), self.degree_block(k + 1));
            let h = quotient_and_homology(&self.d_matrix(&p, &c), &self.d_matrix(&c, &n)).expect("d² = 0");
            let dim = h.dim + usize::from(k == 0);
            if dim > 0 {
                out.insert(k, dim);
            }
        }
        out
    }
}

/// Section, projection and homotopy of a strong deformation retract onto homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferData {
    pub homology_basis: GradedBasis,
    pub homology_unit: usize,
    /// `H → A`, a cycle in every class.
    pub section: GradedMap,
    /// `A → H`.
    pub projection: GradedMap,
    /// `A → A` of degree −1.
    pub homotopy: GradedMap,
}

/// Deterministic splitting, or a randomized one when `seed` is given.
pub fn build_transfer_data(a: &DgAlgebra, seed: Option<u64>) -> TransferData {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let b = a.basis();
    let lo = b.min_degree().unwrap_or(0);
    let hi = b.max_degree().unwrap_or(0);
    // per degree: boundaries (with preimages), classes, complement
    let mut classes: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new();
    let mut proj_rows: BTreeMap<usize, GradedVector> = BTreeMap::new(); // A gen -> H coords (by class slot)
    let mut homotopy = vec![GradedVector::zero(); b.len()];
    let mut preimages: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new(); // W_{k} vectors
    let mut images_of_w: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new(); // d(W_{k-1}) in degree k

    for k in lo..=hi {
        let gens = a.degree_block(k);
        let next = a.degree_block(k + 1);
        let d_out = a.d_matrix(&gens, &next);
        let z = kernel_basis(&d_out);
        // complement of the cycles: generators whose columns of d_out are pivots
        let pivots = rref(&d_out).pivots;
        let mut w: Vec<Vec<Scalar>> = pivots
            .iter()
            .map(|&j| {
                let mut v = vec![Scalar::zero(); gens.len()];
                v[j] = Scalar::one();
                v
            })
            .collect();
        if let Some(r) = rng.as_mut() {
            for v in w.iter_mut() {
                for zv in &z {
                    let c = Scalar::from_integer(r.gen_range(-2i64..=2).into());
                    for (x, y) in v.iter_mut().zip(zv) {
                        *x += &c * y;
                    }
                }
            }
        }
        let bnd = images_of_w.remove(&k).unwrap_or_default();
        let prev = a.degree_block(k - 1);
        let h = quotient_and_homology(&a.d_matrix(&prev, &gens), &d_out).expect("d² = 0");
        let mut c = h.representatives;
        if let Some(r) = rng.as_mut() {
            for v in c.iter_mut() {
                for bv in &bnd {
                    let s = Scalar::from_integer(r.gen_range(-2i64..=2).into());
                    for (x, y) in v.iter_mut().zip(bv) {
                        *x += &s * y;
                    }
                }
            }
        }
        // record d(W_k) as boundaries in degree k+1
        let dw: Vec<Vec<Scalar>> = w.iter().map(|v| d_out.mul_vec(v)).collect();
        images_of_w.insert(k + 1, dw);
        preimages.insert(k, w.clone());
        // change of basis [B | C | W]
        let mut cols = bnd.clone();
        cols.extend(c.iter().cloned());
        cols.extend(w.iter().cloned());
        if gens.is_empty() {
            classes.insert(k, c);
            continue;
        }
        let m = SparseMatrix::from_columns(gens.len(), &cols);
        let inv = inverse(&m).expect("B ⊕ C ⊕ W spans each degree");
        let prev_w = preimages.get(&(k - 1)).cloned().unwrap_or_default();
        for (j, &g) in gens.iter().enumerate() {
            let coords = inv.column(j);
            let mut hv = GradedVector::zero();
            for (i, wv) in prev_w.iter().enumerate() {
                if !coords[i].is_zero() {
                    hv.add_scaled(&GradedVector::from_coords(&prev, wv), &coords[i]);
                }
            }
            homotopy[g] = hv;
            let mut pv = GradedVector::zero();
            for i in 0..c.len() {
                pv.add_term(i, coords[bnd.len() + i].clone());
            }
            proj_rows.insert(g, pv);
        }
        classes.insert(k, c);
    }

    // homology basis: unit first, then classes by degree
    let mut names: Vec<(String, i32)> = vec![(b.name(a.unit()).to_string(), 0)];
    let mut section_images = vec![GradedVector::basis(a.unit())];
    let mut slot_of: BTreeMap<(i32, usize), usize> = BTreeMap::new();
    for (&k, reps) in &classes {
        let gens = a.degree_block(k);
        for (i, rep) in reps.iter().enumerate() {
            let v = GradedVector::from_coords(&gens, rep);
            let mut name = match v.iter().collect::<Vec<_>>().as_slice() {
                [(g, c)] if c.is_one() => b.name(*g).to_string(),
                _ => format!("h{k}_{i}"),
            };
            while names.iter().any(|(n, _)| *n == name) {
                name.push('\'');
            }
            slot_of.insert((k, i), names.len());
            names.push((name, k));
            section_images.push(v);
        }
    }
    let hb = GradedBasis::new(names).expect("distinct names");
    let section = GradedMap::new(hb.clone(), b.clone(), 0, section_images).expect("degree preserving");
    let mut proj_images = vec![GradedVector::zero(); b.len()];
    proj_images[a.unit()] = GradedVector::basis(0);
    for (g, pv) in proj_rows {
        let k = b.degree(g);
        proj_images[g] = GradedVector::from_terms(pv.iter().map(|(i, c)| (slot_of[&(k, i)], c.clone())));
    }
    let projection = GradedMap::new(b.clone(), hb.clone(), 0, proj_images).expect("degree preserving");
    let homotopy = GradedMap::new(b.clone(), b.clone(), -1, homotopy).expect("degree −1");
    TransferData { homology_basis: hb, homology_unit: 0, section, projection, homotopy }
}

impl TransferData {
    /// Checks `p i = id`, `d h + h d = id − i p`, `h i = 0`, `p h = 0`, `h h = 0`.
    pub fn verify(&self, a: &DgAlgebra) -> bool {
        let pi = self.section.then(&self.projection);
        if pi != GradedMap::identity(self.homology_basis.clone()) {
            return false;
        }
        for g in 0..a.basis().len() {
            let x = GradedVector::basis(g);
            let lhs = &a.d(self.homotopy.image(g)) + &self.homotopy.apply(&a.d(&x));
            let rhs = &x - &self.section.apply(&self.projection.apply(&x));
            if lhs != rhs {
                return false;
            }
            if !self.projection.apply(self.homotopy.image(g)).is_zero()
                || !self.homotopy.apply(self.homotopy.image(g)).is_zero()
            {
                return false;
            }
        }
        self.section.images().iter().all(|v| self.homotopy.apply(v).is_zero())
    }
}

/// Result of a transfer: the minimal structure on homology and the weak
/// equivalence into the algebra.
#[derive(Clone, Debug)]
pub struct Transferred {
    pub structure: AInfStructure,
    pub morphism: AInfMorphism,
}

pub fn transfer_ainf(
    a: &DgAlgebra,
    t: &TransferData,
    max_arity: usize,
    max_degree: i32,
) -> Result<Transferred, TransferError> {
    run_transfer(a, t, max_arity, max_degree, false, false)
}

/// Transfer landing in C∞-structures: the operations vanish on shuffles.
pub fn transfer_cinf(
    a: &DgAlgebra,
    t: &TransferData,
    max_arity: usize,
    max_degree: i32,
) -> Result<Transferred, TransferError> {
    if !a.is_commutative() {
        return Err(TransferError::NotCommutative);
    }
    run_transfer(a, t, max_arity, max_degree, true, false)
}

fn run_transfer(
    a: &DgAlgebra,
    t: &TransferData,
    max_arity: usize,
    max_degree: i32,
    cinf: bool,
    always_correct: bool,
) -> Result<Transferred, TransferError> {
    let top = a.basis().max_degree().unwrap_or(0);
    if max_degree < top {
        return Err(TransferError::BoundTooSmall { needed: top, given: max_degree });
    }
    let max_arity = max_arity.max(2);
    let big = a.as_ainf(2);
    let h_space = BarSpace::new(t.homology_basis.clone(), Some(t.homology_unit));
    let a_degrees: std::collections::BTreeSet<i32> =
        big.space().letters().iter().map(|&l| big.space().letter_degree(l)).collect();

    let mut beta = TableComponents::new(1);
    let mut alpha = TableComponents::new(0);
    for &l in h_space.letters() {
        alpha.insert(vec![l], t.section.image(l).clone());
    }
    for n in 2..=max_arity {
        let mut defects: Vec<(Word, GradedVector)> = Vec::new();
        for w in h_space.words_of_length(n) {
            let deg = h_space.word_degree(&w);
            if !a_degrees.contains(&(deg + 1)) {
                continue;
            }
            let x = BarElement::word(w.clone());
            let mut v = GradedVector::zero();
            for (u, c) in apply_coalgebra_map(&alpha, &x).terms() {
                if u.len() == 2 {
                    v.add_scaled(&big.eval(u), c);
                }
            }
            for (u, c) in apply_coderivation(&h_space, &beta, &x).terms() {
                if u.len() >= 2 {
                    v.add_scaled(&alpha.eval(u), &-c);
                }
            }
            debug_assert!(a.d(&v).is_zero(), "transfer defect must be a cycle");
            defects.push((w, v));
        }
        let mut new_beta = Vec::new();
        let mut new_alpha = Vec::new();
        for (w, v) in &defects {
            new_beta.push((w.clone(), t.projection.apply(v)));
            new_alpha.push((w.clone(), t.homotopy.apply(v).scaled(&-Scalar::one())));
        }
        if cinf && (always_correct || !arity_is_shuffle_free(&h_space, n, &new_beta, &new_alpha)) {
            let (b2, a2) = harrison_correction(a, t, &h_space, n, &defects)
                .ok_or(TransferError::CorrectionUnsolvable { arity: n })?;
            new_beta = b2;
            new_alpha = a2;
        }
        for (w, v) in new_beta {
            beta.insert(w, v);
        }
        for (w, v) in new_alpha {
            alpha.insert(w, v);
        }
    }

    let mut ops: Vec<MultiOp> = (2..=max_arity).map(MultiOp::structure).collect();
    for (&n, table) in &beta.tables {
        for (w, v) in table {
            ops[n - 2].insert_bar(&t.homology_basis, w.clone(), v.clone());
        }
    }
    let mut comps: Vec<MultiOp> = (1..=max_arity).map(MultiOp::component).collect();
    for (&n, table) in &alpha.tables {
        for (w, v) in table {
            comps[n - 1].insert_bar(&t.homology_basis, w.clone(), v.clone());
        }
    }
    let h = AInfStructure::new(t.homology_basis.clone(), Some(t.homology_unit), ops, max_arity)?.with_cinf(cinf);
    let f = AInfMorphism::new(h.clone(), a.as_ainf(max_arity), comps, max_arity)?.with_cinf(cinf);
    if cinf {
        debug_assert!(check_cinf(&h).is_ok() && check_morphism_cinf(&f).is_ok());
    }
    Ok(Transferred { structure: h, morphism: f })
}

fn arity_is_shuffle_free(
    space: &BarSpace,
    n: usize,
    beta: &[(Word, GradedVector)],
    alpha: &[(Word, GradedVector)],
) -> bool {
    let bt: BTreeMap<&Word, &GradedVector> = beta.iter().map(|(w, v)| (w, v)).collect();
    let at: BTreeMap<&Word, &GradedVector> = alpha.iter().map(|(w, v)| (w, v)).collect();
    let degrees: std::collections::BTreeSet<i32> = bt.keys().chain(at.keys()).map(|w| space.word_degree(w)).collect();
    for w in space.words_of_length(n) {
        if !degrees.contains(&space.word_degree(&w)) {
            continue;
        }
        for k in 1..n {
            let mut ob = GradedVector::zero();
            let mut oa = GradedVector::zero();
            for (u, c) in shuffle(space, &w[..k], &w[k..]).terms() {
                if let Some(v) = bt.get(u) {
                    ob.add_scaled(v, c);
                }
                if let Some(v) = at.get(u) {
                    oa.add_scaled(v, c);
                }
            }
            if !ob.is_zero() || !oa.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Joint solve for `(β_n, α_n)` with `i β_n − d α_n = V_n` and both vanishing on shuffles.
#[allow(clippy::type_complexity)]
fn harrison_correction(
    a: &DgAlgebra,
    t: &TransferData,
    space: &BarSpace,
    n: usize,
    defects: &[(Word, GradedVector)],
) -> Option<(Vec<(Word, GradedVector)>, Vec<(Word, GradedVector)>)> {
    let hb = &t.homology_basis;
    let ab = a.basis();
    // unknown layout: per word, β coordinates then α coordinates
    let mut index: BTreeMap<(Word, bool, usize), usize> = BTreeMap::new();
    let mut words: Vec<Word> = Vec::new();
    for (w, _) in defects {
        let deg = space.word_degree(w);
        for g in hb.in_degree(deg + 2) {
            if g != t.homology_unit {
                let k = index.len();
                index.insert((w.clone(), true, g), k);
            }
        }
        for g in ab.in_degree(deg + 1) {
            if g != a.unit() {
                let k = index.len();
                index.insert((w.clone(), false, g), k);
            }
        }
        words.push(w.clone());
    }
    let unknowns = index.len();
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for (w, v) in defects {
        let deg = space.word_degree(w);
        for l in ab.in_degree(deg + 2) {
            if l == a.unit() {
                continue;
            }
            let mut row = Vec::new();
            for g in hb.in_degree(deg + 2) {
                if let Some(&k) = index.get(&(w.clone(), true, g)) {
                    let c = t.section.image(g).coeff(l);
                    if !c.is_zero() {
                        row.push((k, c));
                    }
                }
            }
            for g in ab.in_degree(deg + 1) {
                if let Some(&k) = index.get(&(w.clone(), false, g)) {
                    let c = a.differential().image(g).coeff(l);
                    if !c.is_zero() {
                        row.push((k, -c));
                    }
                }
            }
            rows.push(row);
            rhs.push(v.coeff(l));
        }
    }
    let word_set: std::collections::BTreeSet<&Word> = words.iter().collect();
    for w in &words {
        for k in 1..n {
            let sh = shuffle(space, &w[..k], &w[k..]);
            for beta_side in [true, false] {
                let targets: Vec<usize> = if beta_side {
                    (0..hb.len()).collect()
                } else {
                    (0..ab.len()).collect()
                };
                for g in targets {
                    let mut row = Vec::new();
                    for (u, c) in sh.terms() {
                        if !word_set.contains(u) {
                            continue;
                        }
                        if let Some(&idx) = index.get(&(u.clone(), beta_side, g)) {
                            row.push((idx, c.clone()));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                        rhs.push(Scalar::zero());
                    }
                }
            }
        }
    }
    let mut m = SparseMatrix::zeros(rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row {
            let cur = m.get(r, *c);
            m.set(r, *c, cur + x);
        }
    }
    let x = solve(&m, &rhs)?;
    let mut beta = Vec::new();
    let mut alpha = Vec::new();
    for w in &words {
        let mut bv = GradedVector::zero();
        let mut av = GradedVector::zero();
        for ((u, side, g), &k) in &index {
            if u == w {
                if *side {
                    bv.add_term(*g, x[k].clone());
                } else {
                    av.add_term(*g, x[k].clone());
                }
            }
        }
        beta.push((w.clone(), bv));
        alpha.push((w.clone(), av));
    }
    Some((beta, alpha))
}

/// Generator layout of a truncated free model.
#[derive(Clone, Debug)]
pub struct FreeModelParams {
    pub generator_degrees: Vec<i32>,
    /// Monomials of degree above this are set to zero.
    pub truncate_at: i32,
    pub commutative: bool,
}

/// Truncated free (graded-commutative or tensor) algebra on generators with
/// a random triangular differential: each `d g_i` is a random cycle in the
/// subalgebra generated by `g_0 .. g_{i-1}`.
pub fn random_free_dga(params: &FreeModelParams, seed: u64) -> DgAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gd = &params.generator_degrees;
    let monomials = free_monomials(gd, params.truncate_at, params.commutative);
    let idx: BTreeMap<Vec<usize>, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let degree = |m: &[usize]| m.iter().map(|&g| gd[g]).sum::<i32>();
    let names: Vec<(String, i32)> = monomials
        .iter()
        .map(|m| {
            let name = if m.is_empty() {
                "1".to_string()
            } else {
                m.iter().map(|g| format!("g{g}")).collect::<Vec<_>>().join("*")
            };
            (name, degree(m))
        })
        .collect();
    let basis = GradedBasis::new(names).expect("distinct monomials");
    let mul = |x: &[usize], y: &[usize]| -> Option<(Scalar, usize)> {
        let (s, m) = multiply_monomials(x, y, gd, params.commutative)?;
        if degree(&m) > params.truncate_at {
            return None;
        }
        Some((s, idx[&m]))
    };
    let mut m2 = MultiOp::structure(2);
    for (i, x) in monomials.iter().enumerate().skip(1) {
        for (j, y) in monomials.iter().enumerate().skip(1) {
            if let Some((s, k)) = mul(x, y) {
                m2.insert(vec![i, j], GradedVector::term(k, s));
            }
        }
    }
    // d on generators, extended by Leibniz
    let mut dgen: Vec<GradedVector> = Vec::new();
    let d_mono = |m: &[usize], dgen: &[GradedVector]| -> GradedVector {
        let mut out = GradedVector::zero();
        let mut prefix_deg = 0;
        for (p, &g) in m.iter().enumerate() {
            let sign = crate::graded::parity_scalar(prefix_deg);
            prefix_deg += gd[g];
            if g >= dgen.len() {
                continue;
            }
            for (t, c) in dgen[g].iter() {
                // m[..p] * t * m[p+1..]
                let left = monomials[t].clone();
                let Some((s1, lt)) = multiply_monomials(&m[..p], &left, gd, params.commutative) else { continue };
                let Some((s2, full)) = multiply_monomials(&lt, &m[p + 1..], gd, params.commutative) else { continue };
                if degree(&full) > params.truncate_at {
                    continue;
                }
                out.add_term(idx[&full], &sign * c * s1 * s2);
            }
        }
        out
    };
    for (g, &dg) in gd.iter().enumerate() {
        let target = dg + 1;
        let sources: Vec<usize> = (1..monomials.len())
            .filter(|&i| degree(&monomials[i]) == target && monomials[i].iter().all(|&h| h < g))
            .collect();
        let next: Vec<usize> = (0..monomials.len()).filter(|&i| degree(&monomials[i]) == target + 1).collect();
        let cols: Vec<Vec<Scalar>> =
            sources.iter().map(|&i| d_mono(&monomials[i], &dgen).coords(&next)).collect();
        let cycles = kernel_basis(&SparseMatrix::from_columns(next.len(), &cols));
        let mut v = GradedVector::zero();
        for z in cycles {
            let c = Scalar::from_integer(rng.gen_range(-2i64..=2).into());
            v.add_scaled(&GradedVector::from_coords(&sources, &z), &c);
        }
        dgen.push(v);
    }
    let images: Vec<GradedVector> = monomials.iter().map(|m| d_mono(m, &dgen)).collect();
    let d = GradedMap::new(basis.clone(), basis.clone(), 1, images).expect("degree +1");
    DgAlgebra::new(basis, 0, d, m2, params.commutative).expect("free model satisfies the axioms")
}

/// Concatenation, sorted with Koszul signs in the commutative case.
fn multiply_monomials(x: &[usize], y: &[usize], gd: &[i32], commutative: bool) -> Option<(Scalar, Vec<usize>)> {
    let mut m: Vec<usize> = x.iter().chain(y).copied().collect();
    let mut sign = 1i32;
    if commutative {
        for i in 1..m.len() {
            let mut j = i;
            while j > 0 && m[j - 1] > m[j] {
                if gd[m[j - 1]] % 2 != 0 && gd[m[j]] % 2 != 0 {
                    sign = -sign;
                }
                m.swap(j - 1, j);
                j -= 1;
            }
        }
        if m.windows(2).any(|p| p[0] == p[1] && gd[p[0]] % 2 != 0) {
            return None;
        }
    }
    Some((Scalar::from_integer(sign.into()), m))
}

fn free_monomials(gd: &[i32], top: i32, commutative: bool) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<usize>, i32)> = vec![(Vec::new(), 0)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (m, d) in &frontier {
            let start = if commutative { m.last().copied().unwrap_or(0) } else { 0 };
            for g in start..gd.len() {
                if commutative && m.last() == Some(&g) && gd[g] % 2 != 0 {
                    continue;
                }
                if d + gd[g] <= top {
                    let mut m2 = m.clone();
                    m2.push(g);
                    next.push((m2, d + gd[g]));
                }
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        frontier = next;
    }
    out.sort_by_key(|m| (m.iter().map(|&g| gd[g]).sum::<i32>(), m.len(), m.clone()));
    out
}

/// A random simply connected free model of dimension at most `max_dim`.
pub fn random_small_dga(seed: u64, commutative: bool, max_dim: usize) -> DgAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let count = rng.gen_range(2..=4);
    let mut degs: Vec<i32> = (0..count).map(|_| rng.gen_range(2..=5)).collect();
    degs.sort_unstable();
    loop {
        let mut top = degs.iter().sum::<i32>().max(*degs.last().unwrap());
        while top >= *degs.last().unwrap() {
            if free_monomials(&degs, top, commutative).len() <= max_dim {
                let p = FreeModelParams { generator_degrees: degs.clone(), truncate_at: top, commutative };
                return random_free_dga(&p, seed);
            }
            top -= 1;
        }
        degs.pop();
    }
}

/// Cdga whose generators, and hence cohomology, live in `[n, 3n − 2]`.
pub fn window_cdga(n: i32, seed: u64) -> DgAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = 3 * n - 2;
    let count = rng.gen_range(2..=3);
    let mut degs: Vec<i32> = (0..count).map(|_| rng.gen_range(n..=top)).collect();
    degs.sort_unstable();
    let p = FreeModelParams { generator_degrees: degs, truncate_at: top, commutative: true };
    random_free_dga(&p, seed)
}

/// Small planted algebras used by examples and tests.
pub mod models {
    use super::*;
    use crate::exactlin::q;

    /// A cdga with `a·b` and `b·c` exact and a nontrivial Massey triple
    /// `⟨a, b, c⟩` in degree 5 with zero indeterminacy.
    pub fn massey_triple() -> DgAlgebra {
        let one = || q(1);
        DgAlgebra::from_named(
            &[("e", 0), ("a", 2), ("b", 2), ("c", 2), ("u", 3), ("v", 3), ("ab", 4), ("bc", 4), ("cu", 5), ("av", 5)],
            "e",
            &[("u", vec![("ab", one())]), ("v", vec![("bc", one())])],
            &[
                (("a", "b"), vec![("ab", one())]),
                (("b", "c"), vec![("bc", one())]),
                (("c", "u"), vec![("cu", one())]),
                (("a", "v"), vec![("av", one())]),
            ],
            true,
        )
        .expect("planted model is a cdga")
    }

    /// The cohomology of `S²∨S²∨S⁵` with zero differential.
    pub fn formal_s2s2s5() -> DgAlgebra {
        DgAlgebra::from_named(&[("e", 0), ("x", 2), ("y", 2), ("z", 5)], "e", &[], &[], true)
            .expect("trivial products")
    }

    /// Truncated cdga with cohomology `e, x, y, z` whose transferred
    /// `m_3` on `(x, x, y)` and `(x, y, y)` is proportional to `(p, q)`.
    /// Requires `(p, q) ≠ (0, 0)`.
    pub fn s2s2s5_model(p: i64, qq: i64) -> DgAlgebra {
        assert!(p != 0 || qq != 0, "the formal case has the zero model");
        let deg5 = ["xu", "xv", "xw", "yu", "yv", "yw"];
        // functional detecting the surviving class; its kernel is killed
        let mut phi = vec![q(0); 6];
        phi[3] = q(p);
        phi[2] = q(-qq);
        let killed = kernel_basis(&SparseMatrix::from_dense(&[phi]));
        let mut gens: Vec<(String, i32)> = [("e", 0), ("x", 2), ("y", 2), ("u", 3), ("v", 3), ("w", 3), ("xx", 4), ("xy", 4), ("yy", 4)]
            .iter()
            .map(|(n, d)| (n.to_string(), *d))
            .collect();
        for i in 0..killed.len() {
            gens.push((format!("t{i}"), 4));
        }
        gens.extend(deg5.iter().map(|n| (n.to_string(), 5)));
        let gen_refs: Vec<(&str, i32)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        let t_names: Vec<String> = (0..killed.len()).map(|i| format!("t{i}")).collect();
        let mut diff: Vec<(&str, Vec<(&str, Scalar)>)> =
            vec![("u", vec![("xx", q(1))]), ("v", vec![("xy", q(1))]), ("w", vec![("yy", q(1))])];
        for (i, k) in killed.iter().enumerate() {
            let terms: Vec<(&str, Scalar)> =
                deg5.iter().zip(k).filter(|(_, c)| !c.is_zero()).map(|(n, c)| (*n, c.clone())).collect();
            diff.push((t_names[i].as_str(), terms));
        }
        let prods = vec![
            (("x", "x"), vec![("xx", q(1))]),
            (("x", "y"), vec![("xy", q(1))]),
            (("y", "y"), vec![("yy", q(1))]),
            (("x", "u"), vec![("xu", q(1))]),
            (("x", "v"), vec![("xv", q(1))]),
            (("x", "w"), vec![("xw", q(1))]),
            (("y", "u"), vec![("yu", q(1))]),
            (("y", "v"), vec![("yv", q(1))]),
            (("y", "w"), vec![("yw", q(1))]),
        ];
        DgAlgebra::from_named(&gen_refs, "e", &diff, &prods, true).expect("planted model is a cdga")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{check_morphism, check_stasheff, is_weak_equivalence};
    use crate::exactlin::q;

    #[test]
    fn models_validate() {
        let m = models::massey_triple();
        assert_eq!(m.homology_dims(), BTreeMap::from([(0, 1), (2, 3), (5, 2)]));
        let y = models::s2s2s5_model(1, 0);
        assert_eq!(y.homology_dims(), BTreeMap::from([(0, 1), (2, 2), (5, 1)]));
    }

    #[test]
    fn rejects_non_leibniz() {
        let err = DgAlgebra::from_named(
            &[("e", 0), ("a", 2), ("u", 3), ("aa", 4), ("au", 5), ("aaa", 6)],
            "e",
            &[("u", vec![("aa", q(1))])],
            &[
                (("a", "a"), vec![("aa", q(1))]),
                (("a", "aa"), vec![("aaa", q(1))]),
                (("a", "u"), vec![("au", q(1))]),
            ],
            true,
        )
        .unwrap_err();
        assert!(matches!(err, DgError::Leibniz(..)), "{err}");
    }

    #[test]
    fn zero_differential_has_identity_section() {
        let a = models::formal_s2s2s5();
        let t = build_transfer_data(&a, None);
        assert!(t.verify(&a));
        assert!(t.homotopy.is_zero());
        let names: Vec<&str> = t.homology_basis.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["e", "x", "y", "z"]);
        let r = transfer_cinf(&a, &t, 4, 5).unwrap();
        assert!(r.structure.is_strict());
    }

    #[test]
    fn acyclic_pair_has_no_positive_homology() {
        let a = DgAlgebra::from_named(&[("e", 0), ("u", 3), ("du", 4)], "e", &[("u", vec![("du", q(1))])], &[], true)
            .unwrap();
        let t = build_transfer_data(&a, None);
        assert!(t.verify(&a));
        assert_eq!(t.homology_basis.len(), 1);
    }

    #[test]
    fn y_model_transfers_to_nonzero_m3() {
        let a = models::s2s2s5_model(1, 0);
        let t = build_transfer_data(&a, Some(7));
        assert!(t.verify(&a));
        let r = transfer_cinf(&a, &t, 4, 5).unwrap();
        assert!(check_stasheff(&r.structure, 12).is_ok());
        assert!(check_cinf(&r.structure).is_ok());
        assert!(check_morphism(&r.morphism, 12).is_ok());
        assert!(is_weak_equivalence(&r.morphism, 6));
        assert!(!r.structure.op(3).unwrap().is_zero());
    }

    #[test]
    fn random_models_transfer() {
        for seed in 0..6 {
            for comm in [true, false] {
                let a = random_small_dga(seed, comm, 12);
                assert!(a.dim() <= 12);
                let t = build_transfer_data(&a, Some(seed));
                assert!(t.verify(&a));
                let top = a.basis().max_degree().unwrap();
                let r = if comm { transfer_cinf(&a, &t, 4, top) } else { transfer_ainf(&a, &t, 4, top) }.unwrap();
                assert!(check_stasheff(&r.structure, top + 2).is_ok(), "seed {seed}");
                assert!(check_morphism(&r.morphism, top + 2).is_ok(), "seed {seed}");
            }
        }
    }

    #[test]
    fn joint_correction_reproduces_a_valid_transfer() {
        for a in [models::s2s2s5_model(2, -1), models::massey_triple(), random_small_dga(3, true, 12)] {
            let t = build_transfer_data(&a, None);
            let top = a.basis().max_degree().unwrap();
            let r = run_transfer(&a, &t, 4, top, true, true).unwrap();
            assert!(check_cinf(&r.structure).is_ok());
            assert!(check_morphism_cinf(&r.morphism).is_ok());
            assert!(check_stasheff(&r.structure, top + 2).is_ok());
            assert!(check_morphism(&r.morphism, top + 2).is_ok());
        }
    }

    #[test]
    fn bound_too_small() {
        let a = models::formal_s2s2s5();
        let t = build_transfer_data(&a, None);
        assert_eq!(
            transfer_ainf(&a, &t, 3, 4).unwrap_err(),
            TransferError::BoundTooSmall { needed: 5, given: 4 }
        );
    }
}
