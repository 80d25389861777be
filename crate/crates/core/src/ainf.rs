//! A∞- and C∞-algebra structures and their morphisms.
//!
//! Operations are stored in the algebra convention (`m_i` of degree `2 - i`,
//! `f_i` of degree `1 - i`). The structure relations, the morphism relations
//! and composition are all defined on the bar construction, where the
//! desuspended components are obtained through [`bar_sign`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::barcoalg::{apply_coalgebra_map, apply_coderivation, shuffle, shuffle_elements, BarElement, BarSpace, Components, Word};
use crate::exactlin::{inverse, quotient_and_homology, rank, Scalar, SparseMatrix};
use crate::graded::{bar_sign, sign_scalar, GradedBasis, GradedError, GradedMap, GradedVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AinfError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("operation of arity {arity}: value on {input} has degree {found}, expected {expected}")]
    WrongDegree { arity: usize, input: String, expected: i32, found: i32 },
    #[error("operation of arity {arity} has a table entry of length {len}")]
    WrongArity { arity: usize, len: usize },
    #[error("arity {arity} exceeds the arity bound {bound}")]
    ArityOutOfBounds { arity: usize, bound: usize },
    #[error("the unit `{0}` may not appear as an input or output of a reduced operation")]
    UnitInTable(String),
    #[error("target of the first morphism is not the source of the second")]
    SourceTargetMismatch,
    #[error("first component is not invertible")]
    NotIso,
    #[error("unit must map to unit")]
    UnitNotPreserved,
}

/// Multilinear operation of fixed arity and degree, as a sparse table on
/// basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiOp {
    pub arity: usize,
    pub declared_degree: i32,
    table: BTreeMap<Word, GradedVector>,
}

impl MultiOp {
    pub fn new(arity: usize, declared_degree: i32) -> Self {
        MultiOp { arity, declared_degree, table: BTreeMap::new() }
    }

    /// Structure operation `m_i`, degree `2 - i`.
    pub fn structure(arity: usize) -> Self {
        Self::new(arity, 2 - arity as i32)
    }

    /// Morphism component `f_i`, degree `1 - i`.
    pub fn component(arity: usize) -> Self {
        Self::new(arity, 1 - arity as i32)
    }

    pub fn insert(&mut self, input: Word, value: GradedVector) {
        assert_eq!(input.len(), self.arity, "table entry of the wrong arity");
        if value.is_zero() {
            self.table.remove(&input);
        } else {
            self.table.insert(input, value);
        }
    }

    pub fn add(&mut self, input: Word, value: &GradedVector) {
        let mut v = self.get(&input);
        v.add_scaled(value, &Scalar::one());
        self.insert(input, v);
    }

    pub fn get(&self, input: &[usize]) -> GradedVector {
        self.table.get(input).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &GradedVector)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Value in the bar convention.
    pub fn eval_bar(&self, source: &GradedBasis, input: &[usize]) -> GradedVector {
        match self.table.get(input) {
            None => GradedVector::zero(),
            Some(v) => {
                let degs: Vec<i32> = input.iter().map(|&g| source.degree(g)).collect();
                v.scaled(&sign_scalar(bar_sign(&degs)))
            }
        }
    }

    /// Stores a value given in the bar convention.
    pub fn insert_bar(&mut self, source: &GradedBasis, input: Word, bar_value: GradedVector) {
        let degs: Vec<i32> = input.iter().map(|&g| source.degree(g)).collect();
        let v = bar_value.scaled(&sign_scalar(bar_sign(&degs)));
        self.insert(input, v);
    }

    fn validate(&self, source: &BarSpace, target: &BarSpace) -> Result<(), AinfError> {
        for (input, value) in &self.table {
            if input.len() != self.arity {
                return Err(AinfError::WrongArity { arity: self.arity, len: input.len() });
            }
            for &g in input {
                if Some(g) == source.unit() {
                    return Err(AinfError::UnitInTable(source.basis().name(g).to_string()));
                }
            }
            let expected: i32 = input.iter().map(|&g| source.basis().degree(g)).sum::<i32>() + self.declared_degree;
            for (g, _) in value.iter() {
                if Some(g) == target.unit() {
                    return Err(AinfError::UnitInTable(target.basis().name(g).to_string()));
                }
                let found = target.basis().degree(g);
                if found != expected {
                    return Err(AinfError::WrongDegree {
                        arity: self.arity,
                        input: source.display_word(input),
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Failure witness of a structure, morphism or shuffle check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub arity: usize,
    pub input: String,
    pub value: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity {}: {} -> {}", self.arity, self.input, self.value)
    }
}

impl std::error::Error for Witness {}

/// A family `{m_i}` on a graded basis with an optional strict unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfStructure {
    space: BarSpace,
    ops: BTreeMap<usize, MultiOp>,
    arity_bound: usize,
    cinf: bool,
}

impl AInfStructure {
    pub fn new(
        basis: GradedBasis,
        unit: Option<usize>,
        ops: impl IntoIterator<Item = MultiOp>,
        arity_bound: usize,
    ) -> Result<Self, AinfError> {
        let space = BarSpace::new(basis, unit);
        let mut map = BTreeMap::new();
        for op in ops {
            if op.arity > arity_bound {
                return Err(AinfError::ArityOutOfBounds { arity: op.arity, bound: arity_bound });
            }
            if op.declared_degree != 2 - op.arity as i32 {
                return Err(AinfError::WrongDegree {
                    arity: op.arity,
                    input: "declared degree".into(),
                    expected: 2 - op.arity as i32,
                    found: op.declared_degree,
                });
            }
            op.validate(&space, &space)?;
            if !op.is_zero() {
                map.insert(op.arity, op);
            }
        }
        Ok(AInfStructure { space, ops: map, arity_bound, cinf: false })
    }

    /// Marks the structure as C∞. The flag is informational; use [`check_cinf`].
    pub fn with_cinf(mut self, cinf: bool) -> Self {
        self.cinf = cinf;
        self
    }

    pub fn is_cinf_flagged(&self) -> bool {
        self.cinf
    }

    pub fn space(&self) -> &BarSpace {
        &self.space
    }

    pub fn basis(&self) -> &GradedBasis {
        self.space.basis()
    }

    pub fn unit(&self) -> Option<usize> {
        self.space.unit()
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn op(&self, arity: usize) -> Option<&MultiOp> {
        self.ops.get(&arity)
    }

    pub fn ops(&self) -> impl Iterator<Item = &MultiOp> {
        self.ops.values()
    }

    pub fn is_minimal(&self) -> bool {
        self.ops.get(&1).is_none_or(MultiOp::is_zero)
    }

    /// True when every operation of arity ≥ 3 vanishes.
    pub fn is_strict(&self) -> bool {
        self.ops.keys().all(|&a| a <= 2)
    }

    /// The same structure with arity bound `bound`; operations above it are dropped.
    pub fn truncated(&self, bound: usize) -> AInfStructure {
        let ops = self.ops.iter().filter(|(a, _)| **a <= bound).map(|(a, o)| (*a, o.clone())).collect();
        AInfStructure { space: self.space.clone(), ops, arity_bound: bound, cinf: self.cinf }
    }

    /// Replaces (or removes, when zero) the operation of the given arity.
    pub fn with_op(&self, op: MultiOp) -> Result<AInfStructure, AinfError> {
        let mut ops: Vec<MultiOp> = self.ops.values().filter(|o| o.arity != op.arity).cloned().collect();
        let bound = self.arity_bound.max(op.arity);
        ops.push(op);
        Ok(AInfStructure::new(self.basis().clone(), self.unit(), ops, bound)?.with_cinf(self.cinf))
    }

    /// `m_2(a, b)` including the strict unit rule.
    pub fn product(&self, a: usize, b: usize) -> GradedVector {
        if Some(a) == self.unit() {
            return GradedVector::basis(b);
        }
        if Some(b) == self.unit() {
            return GradedVector::basis(a);
        }
        self.op(2).map(|m| m.get(&[a, b])).unwrap_or_default()
    }

    /// The differential `d_β` of the bar construction.
    pub fn bar_differential(&self, x: &BarElement) -> BarElement {
        apply_coderivation(&self.space, self, x)
    }

    /// Strict algebra `(basis, m_2)` with the given product table on non-unit generators.
    pub fn strict(basis: GradedBasis, unit: Option<usize>, product: MultiOp) -> Result<Self, AinfError> {
        Self::new(basis, unit, [product], 2)
    }
}

impl Components for AInfStructure {
    fn bar_degree(&self) -> i32 {
        1
    }

    fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    fn eval(&self, word: &[usize]) -> GradedVector {
        match self.ops.get(&word.len()) {
            Some(op) => op.eval_bar(self.basis(), word),
            None => GradedVector::zero(),
        }
    }
}

/// Degree-`D`-bounded square-zero test of the bar differential: `p_1 d_β² = 0`
/// on every word of length ≤ the arity bound and degree ≤ `max_degree`.
pub fn check_stasheff(s: &AInfStructure, max_degree: i32) -> Result<(), Witness> {
    for w in s.space().words_up_to(s.arity_bound(), max_degree) {
        let dw = s.bar_differential(&BarElement::word(w.clone()));
        let mut out = GradedVector::zero();
        for (u, c) in dw.terms() {
            out.add_scaled(&s.eval(u), c);
        }
        if !out.is_zero() {
            return Err(Witness {
                arity: w.len(),
                input: s.space().display_word(&w),
                value: out.display(s.basis()),
            });
        }
    }
    Ok(())
}

/// Shuffle-vanishing of every operation: `β_i ∘ μ_sh = 0` on all splittings
/// of all basis words of each arity `2..=bound`.
pub fn check_cinf(s: &AInfStructure) -> Result<(), Witness> {
    shuffle_vanishing(s.space(), s.arity_bound(), 1, |w| s.eval(w), s.basis())
}

pub(crate) fn shuffle_vanishing<F>(
    space: &BarSpace,
    max_arity: usize,
    bar_degree: i32,
    eval: F,
    target: &GradedBasis,
) -> Result<(), Witness>
where
    F: Fn(&[usize]) -> GradedVector,
{
    let target_degrees: std::collections::BTreeSet<i32> = (0..target.len()).map(|g| target.degree(g) - 1).collect();
    for n in 2..=max_arity {
        for w in space.words_of_length(n) {
            if !target_degrees.contains(&(space.word_degree(&w) + bar_degree)) {
                continue;
            }
            for k in 1..n {
                let sh = shuffle(space, &w[..k], &w[k..]);
                let mut out = GradedVector::zero();
                for (u, c) in sh.terms() {
                    out.add_scaled(&eval(u), c);
                }
                if !out.is_zero() {
                    return Err(Witness {
                        arity: n,
                        input: format!(
                            "shuffle({}, {})",
                            space.display_word(&w[..k]),
                            space.display_word(&w[k..])
                        ),
                        value: out.display(target),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `d_β μ_sh(u ⊗ v) − μ_sh(d_β u ⊗ v) − (−1)^{|u|} μ_sh(u ⊗ d_β v)`.
pub fn shuffle_derivation_defect(s: &AInfStructure, u: &[usize], v: &[usize]) -> BarElement {
    let space = s.space();
    let lhs = s.bar_differential(&shuffle(space, u, v));
    let du = s.bar_differential(&BarElement::word(u.to_vec()));
    let dv = s.bar_differential(&BarElement::word(v.to_vec()));
    let mut out = lhs;
    out.add_scaled(&shuffle_elements(space, &du, &BarElement::word(v.to_vec())), &-Scalar::one());
    let sign = crate::graded::parity_scalar(space.word_degree(u));
    out.add_scaled(&shuffle_elements(space, &BarElement::word(u.to_vec()), &dv), &-sign);
    out
}

/// Checks that `d_β` is a derivation of the shuffle product on all pairs of
/// nonempty words with total length ≤ `max_len` and total degree ≤ `max_degree`.
pub fn check_shuffle_derivation(s: &AInfStructure, max_len: usize, max_degree: i32) -> Result<(), Witness> {
    let words = s.space().words_up_to(max_len.saturating_sub(1), max_degree);
    for u in &words {
        for v in &words {
            if u.len() + v.len() > max_len || s.space().word_degree(u) + s.space().word_degree(v) > max_degree {
                continue;
            }
            let defect = shuffle_derivation_defect(s, u, v);
            if !defect.is_zero() {
                return Err(Witness {
                    arity: u.len() + v.len(),
                    input: format!("({}, {})", s.space().display_word(u), s.space().display_word(v)),
                    value: defect.display(s.space()),
                });
            }
        }
    }
    Ok(())
}

/// Checks that the bar map of `f` is multiplicative for the shuffle product.
pub fn check_bar_map_multiplicative(f: &AInfMorphism, max_len: usize, max_degree: i32) -> Result<(), Witness> {
    let src = f.source().space();
    let tgt = f.target().space();
    let words = src.words_up_to(max_len.saturating_sub(1), max_degree);
    for u in &words {
        for v in &words {
            if u.len() + v.len() > max_len || src.word_degree(u) + src.word_degree(v) > max_degree {
                continue;
            }
            let lhs = f.bar_map(&shuffle(src, u, v));
            let rhs = shuffle_elements(tgt, &f.bar_map(&BarElement::word(u.clone())), &f.bar_map(&BarElement::word(v.clone())));
            let diff = &lhs - &rhs;
            if !diff.is_zero() {
                return Err(Witness {
                    arity: u.len() + v.len(),
                    input: format!("({}, {})", src.display_word(u), src.display_word(v)),
                    value: diff.display(tgt),
                });
            }
        }
    }
    Ok(())
}

/// A family `{f_i}` between two structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfMorphism {
    source: AInfStructure,
    target: AInfStructure,
    components: BTreeMap<usize, MultiOp>,
    arity_bound: usize,
    cinf: bool,
}

impl AInfMorphism {
    /// Components are given on non-unit generators; a unit is sent to the
    /// target unit implicitly.
    pub fn new(
        source: AInfStructure,
        target: AInfStructure,
        components: impl IntoIterator<Item = MultiOp>,
        arity_bound: usize,
    ) -> Result<Self, AinfError> {
        if source.unit().is_some() != target.unit().is_some() {
            return Err(AinfError::UnitNotPreserved);
        }
        let mut map = BTreeMap::new();
        for c in components {
            if c.arity > arity_bound {
                return Err(AinfError::ArityOutOfBounds { arity: c.arity, bound: arity_bound });
            }
            if c.declared_degree != 1 - c.arity as i32 {
                return Err(AinfError::WrongDegree {
                    arity: c.arity,
                    input: "declared degree".into(),
                    expected: 1 - c.arity as i32,
                    found: c.declared_degree,
                });
            }
            c.validate(source.space(), target.space())?;
            if !c.is_zero() {
                map.insert(c.arity, c);
            }
        }
        Ok(AInfMorphism { source, target, components: map, arity_bound, cinf: false })
    }

    pub fn identity(s: &AInfStructure) -> Self {
        let mut f1 = MultiOp::component(1);
        for &l in s.space().letters() {
            f1.insert(vec![l], GradedVector::basis(l));
        }
        AInfMorphism::new(s.clone(), s.clone(), [f1], s.arity_bound()).expect("identity is well formed")
    }

    /// `{f_1, 0, 0, ...}` from a degree-zero graded map; the unit must go to the unit.
    pub fn from_linear(source: &AInfStructure, target: &AInfStructure, f1: &GradedMap) -> Result<Self, AinfError> {
        let mut c = MultiOp::component(1);
        if let (Some(u), Some(u2)) = (source.unit(), target.unit()) {
            if f1.image(u) != &GradedVector::basis(u2) {
                return Err(AinfError::UnitNotPreserved);
            }
        }
        for &l in source.space().letters() {
            c.insert(vec![l], f1.image(l).clone());
        }
        let bound = source.arity_bound().max(target.arity_bound());
        AInfMorphism::new(source.clone(), target.clone(), [c], bound)
    }

    pub fn with_cinf(mut self, cinf: bool) -> Self {
        self.cinf = cinf;
        self
    }

    pub fn is_cinf_flagged(&self) -> bool {
        self.cinf
    }

    pub fn source(&self) -> &AInfStructure {
        &self.source
    }

    pub fn target(&self) -> &AInfStructure {
        &self.target
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn component(&self, arity: usize) -> Option<&MultiOp> {
        self.components.get(&arity)
    }

    pub fn components(&self) -> impl Iterator<Item = &MultiOp> {
        self.components.values()
    }

    /// First component as a graded map, unit included.
    pub fn linear_part(&self) -> GradedMap {
        let src = self.source.basis();
        let mut images = vec![GradedVector::zero(); src.len()];
        if let (Some(u), Some(u2)) = (self.source.unit(), self.target.unit()) {
            images[u] = GradedVector::basis(u2);
        }
        if let Some(f1) = self.component(1) {
            for (w, v) in f1.entries() {
                images[w[0]] = v.clone();
            }
        }
        GradedMap::new(src.clone(), self.target.basis().clone(), 0, images).expect("components are homogeneous")
    }

    /// The induced coalgebra map of bar constructions.
    pub fn bar_map(&self, x: &BarElement) -> BarElement {
        apply_coalgebra_map(self, x)
    }
}

impl Components for AInfMorphism {
    fn bar_degree(&self) -> i32 {
        0
    }

    fn max_arity(&self) -> usize {
        self.components.keys().next_back().copied().unwrap_or(0)
    }

    fn eval(&self, word: &[usize]) -> GradedVector {
        match self.components.get(&word.len()) {
            Some(c) => c.eval_bar(self.source.basis(), word),
            None => GradedVector::zero(),
        }
    }
}

/// `p_1 (F d_β − d_β' F)` on a single word.
pub fn morphism_defect(f: &AInfMorphism, w: &[usize]) -> GradedVector {
    let x = BarElement::word(w.to_vec());
    let mut out = GradedVector::zero();
    for (u, c) in f.source().bar_differential(&x).terms() {
        out.add_scaled(&f.eval(u), c);
    }
    for (u, c) in f.bar_map(&x).terms() {
        out.add_scaled(&f.target().eval(u), &-c);
    }
    out
}

/// Chain-map test of the induced bar map on words of length ≤ the arity bound
/// and degree ≤ `max_degree`.
pub fn check_morphism(f: &AInfMorphism, max_degree: i32) -> Result<(), Witness> {
    for w in f.source().space().words_up_to(f.arity_bound(), max_degree) {
        let defect = morphism_defect(f, &w);
        if !defect.is_zero() {
            return Err(Witness {
                arity: w.len(),
                input: f.source().space().display_word(&w),
                value: defect.display(f.target().basis()),
            });
        }
    }
    Ok(())
}

/// Shuffle-vanishing of every component.
pub fn check_morphism_cinf(f: &AInfMorphism) -> Result<(), Witness> {
    shuffle_vanishing(f.source().space(), f.arity_bound(), 0, |w| f.eval(w), f.target().basis())
}

/// `g ∘ f`, the word-length-one projection of the composite bar map.
pub fn compose(g: &AInfMorphism, f: &AInfMorphism) -> Result<AInfMorphism, AinfError> {
    if f.target() != g.source() {
        return Err(AinfError::SourceTargetMismatch);
    }
    let bound = f.arity_bound().min(g.arity_bound());
    let src = f.source();
    let tgt = g.target();
    let target_degrees: std::collections::BTreeSet<i32> =
        tgt.space().letters().iter().map(|&l| tgt.space().letter_degree(l)).collect();
    let mut comps: Vec<MultiOp> = (1..=bound).map(MultiOp::component).collect();
    for n in 1..=bound {
        for w in src.space().words_of_length(n) {
            if !target_degrees.contains(&src.space().word_degree(&w)) {
                continue;
            }
            let fw = f.bar_map(&BarElement::word(w.clone()));
            let mut v = GradedVector::zero();
            for (u, c) in fw.terms() {
                v.add_scaled(&g.eval(u), c);
            }
            comps[n - 1].insert_bar(src.basis(), w, v);
        }
    }
    Ok(AInfMorphism::new(src.clone(), tgt.clone(), comps, bound)?.with_cinf(f.cinf && g.cinf))
}

/// Homology dimensions of `(M, m_1)` per degree and the induced map check.
fn degree_blocks(s: &AInfStructure, d: i32) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let b = s.basis();
    (b.in_degree(d - 1), b.in_degree(d), b.in_degree(d + 1))
}

fn m1_matrix(s: &AInfStructure, from: &[usize], to: &[usize]) -> SparseMatrix {
    let cols: Vec<Vec<Scalar>> = from
        .iter()
        .map(|&g| s.op(1).map(|m| m.get(&[g])).unwrap_or_default().coords(to))
        .collect();
    SparseMatrix::from_columns(to.len(), &cols)
}

/// True when `f_1` induces isomorphisms on `m_1`-homology in degrees ≤ `max_degree`.
pub fn is_weak_equivalence(f: &AInfMorphism, max_degree: i32) -> bool {
    let (src, tgt) = (f.source(), f.target());
    let f1 = f.linear_part();
    let lo = src.basis().min_degree().unwrap_or(0).min(tgt.basis().min_degree().unwrap_or(0));
    for d in lo..=max_degree {
        let (sp, sd, sn) = degree_blocks(src, d);
        let (tp, td, tn) = degree_blocks(tgt, d);
        let hs = quotient_and_homology(&m1_matrix(src, &sp, &sd), &m1_matrix(src, &sd, &sn)).expect("m_1 squares to zero");
        let ht = quotient_and_homology(&m1_matrix(tgt, &tp, &td), &m1_matrix(tgt, &td, &tn)).expect("m_1 squares to zero");
        if hs.dim != ht.dim {
            return false;
        }
        if hs.dim == 0 {
            continue;
        }
        // images of source cycles must be independent modulo target boundaries
        let boundaries = m1_matrix(tgt, &tp, &td);
        let images: Vec<Vec<Scalar>> = hs
            .representatives
            .iter()
            .map(|z| f1.apply(&GradedVector::from_coords(&sd, z)).coords(&td))
            .collect();
        let img = SparseMatrix::from_columns(td.len(), &images);
        if rank(&boundaries.hstack(&img)) - rank(&boundaries) != hs.dim {
            return false;
        }
    }
    true
}

/// Inverse of a morphism whose first component is invertible, up to `max_arity`.
pub fn invert_iso(f: &AInfMorphism, max_arity: usize) -> Result<AInfMorphism, AinfError> {
    let (src, tgt) = (f.source(), f.target());
    let s_letters = src.space().letters().to_vec();
    let t_letters = tgt.space().letters().to_vec();
    if s_letters.len() != t_letters.len() {
        return Err(AinfError::NotIso);
    }
    // f_1 on letters as a square matrix (rows: target letters, cols: source letters)
    let cols: Vec<Vec<Scalar>> =
        s_letters.iter().map(|&l| f.eval(&[l]).coords(&t_letters)).collect();
    let m = SparseMatrix::from_columns(t_letters.len(), &cols);
    let inv = inverse(&m).ok_or(AinfError::NotIso)?;
    let mut g1 = MultiOp::component(1);
    let mut g1_bar = crate::barcoalg::TableComponents::new(0);
    for (j, &t) in t_letters.iter().enumerate() {
        let v = GradedVector::from_coords(&s_letters, &inv.column(j));
        g1_bar.insert(vec![t], v.clone());
        g1.insert(vec![t], v);
    }
    let mut g = AInfMorphism::new(tgt.clone(), src.clone(), [g1], max_arity)?;
    let source_degrees: std::collections::BTreeSet<i32> =
        s_letters.iter().map(|&l| src.space().letter_degree(l)).collect();
    for n in 2..=max_arity {
        let mut gn = MultiOp::component(n);
        for w in tgt.space().words_of_length(n) {
            if !source_degrees.contains(&tgt.space().word_degree(&w)) {
                continue;
            }
            // v = (f_1^{-1})^{⊗n} w, then g_n(w) = -p_1 (G_{<n} F)(v)
            let v = apply_coalgebra_map(&g1_bar, &BarElement::word(w.clone()));
            let fv = f.bar_map(&v);
            let mut out = GradedVector::zero();
            for (u, c) in fv.terms() {
                out.add_scaled(&g.eval(u), c);
            }
            gn.insert_bar(tgt.basis(), w, out.scaled(&-Scalar::one()));
        }
        let mut comps: Vec<MultiOp> = g.components().cloned().collect();
        comps.push(gn);
        g = AInfMorphism::new(tgt.clone(), src.clone(), comps, max_arity)?;
    }
    Ok(g.with_cinf(f.cinf))
}

/// Tests whether `f` is the identity up to its arity bound.
pub fn is_identity(f: &AInfMorphism) -> bool {
    if f.source() != f.target() {
        return false;
    }
    for (a, c) in &f.components {
        if *a == 1 {
            for &l in f.source().space().letters() {
                if c.get(&[l]) != GradedVector::basis(l) {
                    return false;
                }
            }
        } else if !c.is_zero() {
            return false;
        }
    }
    f.component(1).is_some() || f.source().space().letters().is_empty()
}
