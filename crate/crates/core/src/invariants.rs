//! Rational homotopy invariants read off a minimal C∞-algebra: bar
//! homology (loop space cohomology), ranks of the indecomposables complex
//! (homotopy groups), formality, realization of maps, and the classification
//! of structures on `H*(S²∨S²∨S⁵)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ainf::{
    check_cinf, morphism_defect, AInfMorphism, AInfStructure, MultiOp, Witness,
};
use crate::barcoalg::{shuffle, BarElement, BarSpace, Components, Decomposables, Word};
use crate::exactlin::{determinant_cofactor, inverse, quotient_and_homology, solve_affine, AffineSolution, Scalar, SparseMatrix};
use crate::graded::{GradedBasis, GradedMap, GradedVector};
use crate::hoch::{try_degenerate, Degeneracy, HochCochain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("bar homology needs generators of degree ≥ 2 besides the unit")]
    NotSimplyConnected,
    #[error("degree bound {0} is too small")]
    BoundTooSmall(i32),
    #[error("structure is not C∞: {0}")]
    NotCInfinity(Witness),
    #[error("G is not an algebra map: {0}")]
    NotMultiplicative(String),
}

/// A finite cochain complex given degreewise.
#[derive(Clone, Debug)]
pub struct ComplexPresentation {
    /// Basis labels of each degree.
    pub bases: BTreeMap<i32, Vec<String>>,
    /// `d: C^k → C^{k+1}` keyed by `k`, acting on columns.
    pub differentials: BTreeMap<i32, SparseMatrix>,
}

impl ComplexPresentation {
    pub fn dim(&self, k: i32) -> usize {
        self.bases.get(&k).map_or(0, Vec::len)
    }

    fn d(&self, k: i32) -> SparseMatrix {
        self.differentials.get(&k).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    pub fn is_complex(&self) -> bool {
        self.bases.keys().all(|&k| self.d(k + 1).mul(&self.d(k)).is_zero())
    }

    /// Homology rank in degree `k`; reliable for `k` below the top degree kept.
    pub fn homology_rank(&self, k: i32) -> usize {
        quotient_and_homology(&self.d(k - 1), &self.d(k)).expect("d² = 0").dim
    }

    pub fn homology_ranks(&self, degrees: impl IntoIterator<Item = i32>) -> BTreeMap<i32, usize> {
        degrees.into_iter().map(|k| (k, self.homology_rank(k))).collect()
    }
}

/// `(B̃(s), d_β)` in total degrees `0..=max_degree + 1`.
pub fn bar_complex(s: &AInfStructure, max_degree: i32) -> Result<ComplexPresentation, InvariantError> {
    let space = s.space();
    if !space.letters().iter().all(|&l| space.letter_degree(l) >= 1) {
        return Err(InvariantError::NotSimplyConnected);
    }
    if max_degree < 0 {
        return Err(InvariantError::BoundTooSmall(max_degree));
    }
    let top = max_degree + 1;
    let mut words: BTreeMap<i32, Vec<Word>> = BTreeMap::new();
    words.insert(0, vec![Vec::new()]);
    for w in space.words_up_to(top as usize, top) {
        words.entry(space.word_degree(&w)).or_default().push(w);
    }
    let mut bases = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for k in 0..=top {
        let ws = words.get(&k).cloned().unwrap_or_default();
        bases.insert(k, ws.iter().map(|w| space.display_word(w)).collect());
        if k == top {
            break;
        }
        let next = words.get(&(k + 1)).cloned().unwrap_or_default();
        let index: BTreeMap<&Word, usize> = next.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let cols: Vec<Vec<Scalar>> = ws
            .iter()
            .map(|w| {
                let mut col = vec![Scalar::zero(); next.len()];
                if !w.is_empty() {
                    for (u, c) in s.bar_differential(&BarElement::word(w.clone())).terms() {
                        col[index[u]] += c;
                    }
                }
                col
            })
            .collect();
        differentials.insert(k, SparseMatrix::from_columns(next.len(), &cols));
    }
    Ok(ComplexPresentation { bases, differentials })
}

/// Ranks of `H(B̃(s), d_β)` in degrees `0..=max_degree`.
pub fn bar_homology(s: &AInfStructure, max_degree: i32) -> Result<BTreeMap<i32, usize>, InvariantError> {
    let c = bar_complex(s, max_degree)?;
    Ok(c.homology_ranks(0..=max_degree))
}

/// `QB̃(s)`: the bar construction modulo shuffle-decomposables, degrees
/// `1..=max_degree`, with the induced differential.
pub fn indecomposables_complex(s: &AInfStructure, max_degree: i32) -> Result<ComplexPresentation, InvariantError> {
    check_cinf(s).map_err(InvariantError::NotCInfinity)?;
    let space = s.space();
    if !space.letters().iter().all(|&l| space.letter_degree(l) >= 1) {
        return Err(InvariantError::NotSimplyConnected);
    }
    if max_degree < 1 {
        return Err(InvariantError::BoundTooSmall(max_degree));
    }
    let mut by_degree: BTreeMap<i32, Vec<Word>> = BTreeMap::new();
    for w in space.words_up_to(max_degree as usize, max_degree) {
        by_degree.entry(space.word_degree(&w)).or_default().push(w);
    }
    let quotients: BTreeMap<i32, Decomposables> = (1..=max_degree)
        .map(|k| (k, Decomposables::among(space, by_degree.get(&k).cloned().unwrap_or_default())))
        .collect();
    let mut bases = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for k in 1..=max_degree {
        let q = &quotients[&k];
        let reps = q.quotient_words();
        bases.insert(k, reps.iter().map(|w| space.display_word(w)).collect::<Vec<_>>());
        if k == max_degree {
            break;
        }
        let next = &quotients[&(k + 1)];
        let cols: Vec<Vec<Scalar>> =
            reps.iter().map(|w| next.project(&s.bar_differential(&BarElement::word(w.clone())))).collect();
        differentials.insert(k, SparseMatrix::from_columns(next.quotient_dim(), &cols));
    }
    Ok(ComplexPresentation { bases, differentials })
}

/// Ranks of the rational homotopy groups: `H^k(QB̃)` is reported under the
/// key `k + 1`, for `π^2 .. π^{max_degree}`.
pub fn pi_ranks(s: &AInfStructure, max_degree: i32) -> Result<BTreeMap<i32, usize>, InvariantError> {
    let c = indecomposables_complex(s, max_degree)?;
    Ok((1..max_degree).map(|k| (k + 1, c.homology_rank(k))).collect())
}

/// Outcome of the formality test.
#[derive(Clone, Debug)]
pub enum FormalityVerdict {
    /// Isomorphic to the structure with `m_{≥3} = 0`; `certificate` goes
    /// from the strict structure to the input.
    Formal { certificate: AInfMorphism },
    /// `m_3` is a nonzero Harrison class.
    Nonformal { arity: usize, obstruction: HochCochain },
    /// The search stopped at `bound`, with the obstruction met there if any.
    Undecided { bound: usize, obstruction: Option<HochCochain> },
}

impl FormalityVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            FormalityVerdict::Formal { .. } => "formal",
            FormalityVerdict::Nonformal { .. } => "nonformal",
            FormalityVerdict::Undecided { .. } => "undecided",
        }
    }
}

/// True when `C^{n,2−n}` has no nonzero entries for every `n > bound`.
fn obstruction_spaces_vanish_beyond(s: &AInfStructure, bound: usize) -> bool {
    let space = s.space();
    let b = s.basis();
    let letter_degrees: BTreeSet<i32> = space.letters().iter().map(|&l| b.degree(l)).collect();
    let targets: BTreeSet<i32> = (0..b.len()).map(|g| b.degree(g)).collect();
    let (Some(&min_letter), Some(&top)) = (letter_degrees.iter().next(), targets.iter().next_back()) else {
        return true;
    };
    if min_letter < 2 {
        return false;
    }
    // reachable input-degree sums for each word length
    let mut sums: BTreeSet<i32> = BTreeSet::from([0]);
    let mut n = 0usize;
    loop {
        n += 1;
        let min_out = n as i32 * min_letter + 2 - n as i32;
        let cap = top + n as i32;
        sums = sums
            .iter()
            .flat_map(|s| letter_degrees.iter().map(move |d| s + d))
            .filter(|&s| s <= cap)
            .collect();
        if n > bound && sums.iter().any(|&s| targets.contains(&(s + 2 - n as i32))) {
            return false;
        }
        if n > bound.max(2) && min_out > top {
            return true;
        }
    }
}

/// Harrison-mode degeneracy search; see [`FormalityVerdict`].
pub fn formality_verdict(s: &AInfStructure, max_arity: usize) -> FormalityVerdict {
    let s = s.truncated(max_arity.max(s.arity_bound()).max(3));
    match try_degenerate(&s, max_arity.max(3), true) {
        Degeneracy::Degenerate { morphism, strict, .. } => {
            if obstruction_spaces_vanish_beyond(&strict, max_arity) {
                FormalityVerdict::Formal { certificate: morphism }
            } else {
                FormalityVerdict::Undecided { bound: max_arity, obstruction: None }
            }
        }
        Degeneracy::Obstructed { arity: 3, representative, .. } => {
            FormalityVerdict::Nonformal { arity: 3, obstruction: representative }
        }
        Degeneracy::Obstructed { representative, .. } => {
            FormalityVerdict::Undecided { bound: max_arity, obstruction: Some(representative) }
        }
    }
}

/// Outcome of extending an algebra map to a C∞-morphism.
#[derive(Clone, Debug)]
pub enum Realization {
    Extended(AInfMorphism),
    /// No shuffle-vanishing `g_{arity−1}` solves the arity-`arity` equation;
    /// `residual` is the reduced defect.
    Obstructed { arity: usize, residual: Vec<Scalar> },
}

impl Realization {
    pub fn is_extended(&self) -> bool {
        matches!(self, Realization::Extended(_))
    }
}

fn component_space(source: &AInfStructure, target: &AInfStructure, n: usize) -> Vec<(Word, usize)> {
    let deg = 1 - n as i32;
    let mut out = Vec::new();
    for w in source.space().words_of_length(n) {
        let d: i32 = w.iter().map(|&l| source.basis().degree(l)).sum::<i32>() + deg;
        for g in target.basis().in_degree(d) {
            if Some(g) != target.unit() {
                out.push((w.clone(), g));
            }
        }
    }
    out
}

/// Greedy arity-by-arity extension of `G` to a C∞-morphism `{G, g_2, ...}`
/// between minimal structures, checked through arity `max_arity`.
pub fn realize_search(
    source: &AInfStructure,
    target: &AInfStructure,
    g: &GradedMap,
    max_arity: usize,
) -> Result<Realization, InvariantError> {
    let bound = max_arity.max(2);
    let source = source.truncated(bound.max(source.arity_bound()));
    let target = target.truncated(bound.max(target.arity_bound()));
    let mut f = AInfMorphism::from_linear(&source, &target, g)
        .map_err(|e| InvariantError::NotMultiplicative(e.to_string()))?;
    f = AInfMorphism::new(source.clone(), target.clone(), f.components().cloned(), bound)
        .map_err(|e| InvariantError::NotMultiplicative(e.to_string()))?;
    for w in source.space().words_of_length(2) {
        let d = morphism_defect(&f, &w);
        if !d.is_zero() {
            return Err(InvariantError::NotMultiplicative(format!(
                "{} -> {}",
                source.space().display_word(&w),
                d.display(target.basis())
            )));
        }
    }
    let src_space = source.space().clone();
    for n in 3..=bound {
        let unknowns = component_space(&source, &target, n - 1);
        let eq_words: Vec<Word> = source.space().words_of_length(n);
        let target_letters: Vec<usize> = target.space().letters().to_vec();
        let shuffle_words: Vec<Word> = {
            let ws: BTreeSet<&Word> = unknowns.iter().map(|(w, _)| w).collect();
            ws.into_iter().cloned().collect()
        };
        let base_comps: Vec<MultiOp> = f.components().cloned().collect();
        let build = |x: &[Scalar]| -> AInfMorphism {
            let mut gn = MultiOp::component(n - 1);
            let mut vals: BTreeMap<&Word, GradedVector> = BTreeMap::new();
            for ((w, g), c) in unknowns.iter().zip(x) {
                if !c.is_zero() {
                    vals.entry(w).or_default().add_term(*g, c.clone());
                }
            }
            for (w, v) in vals {
                gn.insert_bar(source.basis(), w.clone(), v);
            }
            let mut comps: Vec<MultiOp> = base_comps.iter().filter(|c| c.arity != n - 1).cloned().collect();
            comps.push(gn);
            AInfMorphism::new(source.clone(), target.clone(), comps, bound).expect("homogeneous unknowns")
        };
        let residual = |x: &[Scalar]| -> Vec<Scalar> {
            let cand = build(x);
            let mut r = Vec::new();
            for w in &eq_words {
                r.extend(morphism_defect(&cand, w).coords(&target_letters));
            }
            for w in &shuffle_words {
                for k in 1..w.len() {
                    let mut v = GradedVector::zero();
                    for (u, c) in shuffle(&src_space, &w[..k], &w[k..]).terms() {
                        v.add_scaled(&cand.eval(u), c);
                    }
                    r.extend(v.coords(&target_letters));
                }
            }
            r
        };
        match solve_affine(unknowns.len(), residual) {
            AffineSolution::Solved(x) => f = build(&x),
            AffineSolution::Unsolvable { residual } => {
                return Ok(Realization::Obstructed { arity: n, residual });
            }
        }
    }
    Ok(Realization::Extended(f.with_cinf(true)))
}

/// `H*(S²∨S²∨S⁵)` with `m₃(x,x,y) = p z`, `m₃(x,y,y) = q z` and the values
/// forced by shuffle-vanishing; every other operation is zero.
pub fn s2s2s5_structure(p: Scalar, q: Scalar) -> AInfStructure {
    let b = GradedBasis::new([("e", 0), ("x", 2), ("y", 2), ("z", 5)]).expect("distinct names");
    let (x, y, z) = (1, 2, 3);
    let mut m3 = MultiOp::structure(3);
    m3.insert(vec![x, x, y], GradedVector::term(z, p.clone()));
    m3.insert(vec![y, x, x], GradedVector::term(z, -p));
    m3.insert(vec![x, y, y], GradedVector::term(z, q.clone()));
    m3.insert(vec![y, y, x], GradedVector::term(z, -q));
    AInfStructure::new(b, Some(0), [m3], 5).expect("homogeneous").with_cinf(true)
}

/// `H*(Sⁿ)`: unit and one generator of degree `n`, all products zero.
pub fn sphere_cohomology(n: i32) -> AInfStructure {
    wedge_of_spheres(&[n])
}

/// `H*(∨ S^{n_i})`: generators `s0, s1, ...`, all products zero.
pub fn wedge_of_spheres(degrees: &[i32]) -> AInfStructure {
    let mut gens = vec![("e".to_string(), 0)];
    gens.extend(degrees.iter().enumerate().map(|(i, &d)| (format!("s{i}"), d)));
    let b = GradedBasis::new(gens).expect("distinct names");
    AInfStructure::new(b, Some(0), [], 3).expect("no operations").with_cinf(true)
}

/// Verdict of [`classify_s2s2s5`].
#[derive(Clone, Debug)]
pub enum Classification {
    /// `witness` is an isomorphism from the `(p, q)` structure to the `(p', q')` one.
    SameType { witness: AInfMorphism },
    DifferentType,
}

impl Classification {
    pub fn is_same(&self) -> bool {
        matches!(self, Classification::SameType { .. })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_same() { "same-type" } else { "different-type" })
    }
}

/// The linear isomorphism `x ↦ a x + b y`, `y ↦ c x + d y`, `z ↦ r z`.
pub fn s2s2s5_linear_map(
    source: &AInfStructure,
    target: &AInfStructure,
    rows: [[Scalar; 2]; 2],
    r: Scalar,
) -> AInfMorphism {
    let [[a, b], [c, d]] = rows;
    let mut f1 = MultiOp::component(1);
    f1.insert(vec![1], GradedVector::from_terms([(1, a), (2, b)]));
    f1.insert(vec![2], GradedVector::from_terms([(1, c), (2, d)]));
    f1.insert(vec![3], GradedVector::term(3, r));
    AInfMorphism::new(source.clone(), target.clone(), [f1], 5).expect("degree-preserving").with_cinf(true)
}

/// Both zero or both nonzero; the witness satisfies
/// `r (p, q)ᵀ = det M · M (p', q')ᵀ` with `M` the matrix of rows `(a, b)`, `(c, d)`.
pub fn classify_s2s2s5(p: &Scalar, q: &Scalar, p2: &Scalar, q2: &Scalar) -> Classification {
    let zero1 = p.is_zero() && q.is_zero();
    let zero2 = p2.is_zero() && q2.is_zero();
    if zero1 != zero2 {
        return Classification::DifferentType;
    }
    let s1 = s2s2s5_structure(p.clone(), q.clone());
    let s2 = s2s2s5_structure(p2.clone(), q2.clone());
    let one = Scalar::one;
    let zero = Scalar::zero;
    if zero1 {
        let w = s2s2s5_linear_map(&s1, &s2, [[one(), zero()], [zero(), one()]], one());
        return Classification::SameType { witness: w };
    }
    // M = [v v⊥][w w⊥]⁻¹ sends w to v
    let frame = |a: &Scalar, b: &Scalar| SparseMatrix::from_dense(&[vec![a.clone(), -b.clone()], vec![b.clone(), a.clone()]]);
    let fv = frame(p, q);
    let fw_inv = inverse(&frame(p2, q2)).expect("nonzero vector has an invertible frame");
    let m = fv.mul(&fw_inv);
    let det = determinant_cofactor(&m.to_dense());
    let rows = [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]];
    let w = s2s2s5_linear_map(&s1, &s2, rows, det);
    Classification::SameType { witness: w }
}

/// `G: H*(S²∨S²∨S⁵) → H*(S⁵)`, `z ↦ s0`, `x, y ↦ 0`.
pub fn s2s2s5_to_sphere(source: &AInfStructure, sphere: &AInfStructure) -> GradedMap {
    GradedMap::from_named(
        source.basis().clone(),
        sphere.basis().clone(),
        0,
        &[("e", vec![("e", Scalar::one())]), ("z", vec![("s0", Scalar::one())])],
    )
    .expect("degree preserving")
}

/// Dimensions of `QB̃` by word length for words in the letters of
/// desuspended degree `1` (the `x, y` part of the worked example).
pub fn indecomposable_dims_by_length(space: &BarSpace, max_len: usize) -> Vec<usize> {
    (1..=max_len).map(|n| Decomposables::among(space, space.words_of_length(n)).quotient_dim()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{check_morphism, check_morphism_cinf, check_stasheff};
    use crate::exactlin::q;

    #[test]
    fn sphere_bar_homology_is_tensor_algebra() {
        for n in [2, 3, 4] {
            let ranks = bar_homology(&sphere_cohomology(n), 12).unwrap();
            for (k, r) in ranks {
                let expected = usize::from(k % (n - 1) == 0);
                assert_eq!(r, expected, "S^{n} degree {k}");
            }
        }
    }

    #[test]
    fn worked_example_bar_ranks() {
        let x = bar_homology(&s2s2s5_structure(q(0), q(0)), 4).unwrap();
        assert_eq!(x.values().copied().collect::<Vec<_>>(), [1, 2, 4, 8, 17]);
        let y = bar_homology(&s2s2s5_structure(q(1), q(0)), 4).unwrap();
        // m₃ kills xxy − yxx in degree 3 and hits zx, zy, xz, yz from degree 4
        assert_eq!((y[&3], y[&4]), (7, 12));
    }

    #[test]
    fn worked_example_pi_ranks() {
        let x = pi_ranks(&s2s2s5_structure(q(0), q(0)), 4).unwrap();
        assert_eq!(x, BTreeMap::from([(2, 2), (3, 3), (4, 2)]));
        let y = pi_ranks(&s2s2s5_structure(q(2), q(-5)), 4).unwrap();
        assert_eq!(y, BTreeMap::from([(2, 2), (3, 3), (4, 1)]));
        let c = indecomposables_complex(&s2s2s5_structure(q(0), q(0)), 4).unwrap();
        assert!(c.is_complex());
        assert_eq!((c.dim(1), c.dim(2), c.dim(3)), (2, 3, 2));
    }

    #[test]
    fn indecomposables_need_cinf() {
        let s = s2s2s5_structure(q(1), q(1));
        let mut m3 = s.op(3).unwrap().clone();
        m3.insert(vec![1, 1, 1], GradedVector::basis(3));
        let bad = s.with_op(m3).unwrap();
        assert!(matches!(indecomposables_complex(&bad, 4), Err(InvariantError::NotCInfinity(_))));
    }

    #[test]
    fn formality_of_worked_example() {
        assert_eq!(formality_verdict(&s2s2s5_structure(q(0), q(0)), 4).label(), "formal");
        match formality_verdict(&s2s2s5_structure(q(0), q(3)), 4) {
            FormalityVerdict::Nonformal { arity, obstruction } => {
                assert_eq!(arity, 3);
                assert!(!obstruction.is_zero());
            }
            other => panic!("{other:?}"),
        }
        // odd spheres only: no room for operations
        assert_eq!(formality_verdict(&wedge_of_spheres(&[3, 5, 7]), 3).label(), "formal");
    }

    #[test]
    fn realization_example() {
        let sphere = sphere_cohomology(5);
        let y = s2s2s5_structure(q(1), q(0));
        let g = s2s2s5_to_sphere(&y, &sphere);
        match realize_search(&y, &sphere, &g, 4).unwrap() {
            Realization::Obstructed { arity, .. } => assert_eq!(arity, 3),
            other => panic!("{other:?}"),
        }
        let x = s2s2s5_structure(q(0), q(0));
        let g = s2s2s5_to_sphere(&x, &sphere);
        match realize_search(&x, &sphere, &g, 4).unwrap() {
            Realization::Extended(f) => {
                assert!(f.components().all(|c| c.arity == 1));
                assert!(check_morphism(&f, 14).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification_witnesses() {
        let cases = [((0, 0), (0, 0)), ((1, 0), (0, 1)), ((2, 3), (-1, 7)), ((0, 0), (1, 1)), ((1, 0), (0, 0))];
        for ((p, qq), (p2, q2)) in cases {
            let c = classify_s2s2s5(&q(p), &q(qq), &q(p2), &q(q2));
            let back = classify_s2s2s5(&q(p2), &q(q2), &q(p), &q(qq));
            assert_eq!(c.is_same(), back.is_same());
            assert_eq!(c.is_same(), (p, qq) == (0, 0) && (p2, q2) == (0, 0) || (p, qq) != (0, 0) && (p2, q2) != (0, 0));
            if let Classification::SameType { witness } = c {
                assert!(check_stasheff(witness.source(), 14).is_ok());
                assert!(check_morphism(&witness, 14).is_ok(), "{p},{qq} -> {p2},{q2}");
                assert!(check_morphism_cinf(&witness).is_ok());
            }
        }
    }

    #[test]
    fn identity_realizes_between_isomorphic_structures() {
        let s = s2s2s5_structure(q(1), q(2));
        let id = GradedMap::identity(s.basis().clone());
        assert!(realize_search(&s, &s, &id, 4).unwrap().is_extended());
        let other = s2s2s5_structure(q(1), q(3));
        assert!(!realize_search(&s, &other, &id, 4).unwrap().is_extended());
    }
}
