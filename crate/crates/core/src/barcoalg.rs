//! Tensor coalgebra on a desuspended basis.
//!
//! A word `[a_1, ..., a_n]` is a list of generator indices; the unit generator
//! is never a letter (reduced bar construction). Letter degrees are the
//! desuspended ones, `deg(a) - 1`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::exactlin::{rref, Rref, Scalar, SparseMatrix};
use crate::graded::{koszul_sign, sign_scalar, GradedBasis, GradedVector};

pub type Word = Vec<usize>;

/// The letters of a bar construction: every generator except the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarSpace {
    basis: GradedBasis,
    unit: Option<usize>,
    letters: Vec<usize>,
}

impl BarSpace {
    pub fn new(basis: GradedBasis, unit: Option<usize>) -> Self {
        let letters = (0..basis.len()).filter(|&i| Some(i) != unit).collect();
        BarSpace { basis, unit, letters }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Desuspended degree of a generator.
    pub fn letter_degree(&self, g: usize) -> i32 {
        self.basis.degree(g) - 1
    }

    pub fn word_degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&g| self.letter_degree(g)).sum()
    }

    pub fn letter_degrees(&self, w: &[usize]) -> Vec<i32> {
        w.iter().map(|&g| self.letter_degree(g)).collect()
    }

    /// Every letter has desuspended degree at least one, so a degree bound
    /// also bounds word length.
    pub fn is_simply_connected(&self) -> bool {
        self.letters.iter().all(|&g| self.letter_degree(g) >= 1)
    }

    /// All words of exactly `n` letters.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.letters.len());
            for w in &out {
                for &l in &self.letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }

    /// Words with `1 <= len <= max_len` and total degree `<= max_degree`,
    /// in length-then-lexicographic order.
    pub fn words_up_to(&self, max_len: usize, max_degree: i32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut frontier: Vec<(Word, i32)> = vec![(Vec::new(), 0)];
        let min_letter = self.letters.iter().map(|&g| self.letter_degree(g)).min().unwrap_or(0);
        for len in 1..=max_len {
            let remaining_min = |extra: usize| (extra as i32) * min_letter.min(0);
            let mut next = Vec::new();
            for (w, d) in &frontier {
                for &l in &self.letters {
                    let nd = d + self.letter_degree(l);
                    // later letters may lower the degree again only if negative-degree letters exist
                    if nd + remaining_min(max_len - len) > max_degree {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, nd));
                }
            }
            out.extend(next.iter().filter(|(_, d)| *d <= max_degree).map(|(w, _)| w.clone()));
            frontier = next;
        }
        out
    }

    /// Words of total degree exactly `degree` and length `1..=max_len`.
    pub fn words_in_degree(&self, degree: i32, max_len: usize) -> Vec<Word> {
        self.words_up_to(max_len, degree).into_iter().filter(|w| self.word_degree(w) == degree).collect()
    }

    pub fn display_word(&self, w: &[usize]) -> String {
        let names: Vec<&str> = w.iter().map(|&g| self.basis.name(g)).collect();
        format!("[{}]", names.join(","))
    }
}

/// Linear combination of bar words (the empty word is the counit summand).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BarElement {
    terms: BTreeMap<Word, Scalar>,
}

impl BarElement {
    pub fn zero() -> Self {
        BarElement::default()
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, Scalar::one())
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &BarElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> BarElement {
        let mut out = BarElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Word-length-one part as a vector of letters.
    pub fn project_letters(&self) -> GradedVector {
        GradedVector::from_terms(self.terms.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| (w[0], c.clone())))
    }

    pub fn from_letters(v: &GradedVector) -> Self {
        let mut out = BarElement::zero();
        for (g, c) in v.iter() {
            out.add_term(vec![g], c.clone());
        }
        out
    }

    pub fn display(&self, space: &BarSpace) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{}*{}", crate::exactlin::format_scalar(c), space.display_word(w)))
            .collect();
        parts.join(" + ")
    }
}

impl std::ops::Sub<&BarElement> for &BarElement {
    type Output = BarElement;
    fn sub(self, rhs: &BarElement) -> BarElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl std::ops::Add<&BarElement> for &BarElement {
    type Output = BarElement;
    fn add(self, rhs: &BarElement) -> BarElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

/// Element of `T^c ⊗ T^c`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorElement {
    pub fn add_term(&mut self, l: Word, r: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }
}

/// A family of multilinear components `{c_n}` on bar words, evaluated in the
/// bar convention. Every component has the same bar degree.
pub trait Components {
    fn bar_degree(&self) -> i32;
    fn max_arity(&self) -> usize;
    /// `c_n(word)` with `n = word.len()`, as a combination of target letters.
    fn eval(&self, word: &[usize]) -> GradedVector;
}

/// Components given directly as bar-convention tables, arity → word → value.
#[derive(Clone, Debug, Default)]
pub struct TableComponents {
    pub degree: i32,
    pub tables: BTreeMap<usize, BTreeMap<Word, GradedVector>>,
}

impl TableComponents {
    pub fn new(degree: i32) -> Self {
        TableComponents { degree, tables: BTreeMap::new() }
    }

    pub fn insert(&mut self, word: Word, value: GradedVector) {
        if value.is_zero() {
            return;
        }
        self.tables.entry(word.len()).or_default().insert(word, value);
    }
}

impl Components for TableComponents {
    fn bar_degree(&self) -> i32 {
        self.degree
    }

    fn max_arity(&self) -> usize {
        self.tables.keys().next_back().copied().unwrap_or(0)
    }

    fn eval(&self, word: &[usize]) -> GradedVector {
        self.tables.get(&word.len()).and_then(|t| t.get(word)).cloned().unwrap_or_default()
    }
}

/// Arity-1 component only: the identity on letters.
pub struct IdentityComponents;

impl Components for IdentityComponents {
    fn bar_degree(&self) -> i32 {
        0
    }
    fn max_arity(&self) -> usize {
        1
    }
    fn eval(&self, word: &[usize]) -> GradedVector {
        if word.len() == 1 {
            GradedVector::basis(word[0])
        } else {
            GradedVector::zero()
        }
    }
}

/// All `n + 1` deconcatenations of a word.
pub fn comultiply(w: &[usize]) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| (w[..i].to_vec(), w[i..].to_vec())).collect()
}

pub fn comultiply_element(x: &BarElement) -> TensorElement {
    let mut out = TensorElement::default();
    for (w, c) in x.terms() {
        for (l, r) in comultiply(w) {
            out.add_term(l, r, c.clone());
        }
    }
    out
}

/// Signed sum over all shuffles of `u` and `v`, signs from the desuspended degrees.
pub fn shuffle(space: &BarSpace, u: &[usize], v: &[usize]) -> BarElement {
    let mut out = BarElement::zero();
    let mut memo = HashMap::new();
    for (w, c) in shuffle_terms(space, u, v, &mut memo) {
        out.add_term(w, c);
    }
    out
}

fn shuffle_terms(
    space: &BarSpace,
    u: &[usize],
    v: &[usize],
    memo: &mut HashMap<(Word, Word), Vec<(Word, Scalar)>>,
) -> Vec<(Word, Scalar)> {
    if u.is_empty() {
        return vec![(v.to_vec(), Scalar::one())];
    }
    if v.is_empty() {
        return vec![(u.to_vec(), Scalar::one())];
    }
    let key = (u.to_vec(), v.to_vec());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut out = Vec::new();
    for (w, c) in shuffle_terms(space, &u[1..], v, memo) {
        let mut w2 = vec![u[0]];
        w2.extend(w);
        out.push((w2, c));
    }
    // v[0] jumps over every letter of u
    let s = sign_scalar(koszul_sign(&space.letter_degrees(u), &[space.letter_degree(v[0])]));
    for (w, c) in shuffle_terms(space, u, &v[1..], memo) {
        let mut w2 = vec![v[0]];
        w2.extend(w);
        out.push((w2, c * &s));
    }
    memo.insert(key, out.clone());
    out
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_elements(space: &BarSpace, x: &BarElement, y: &BarElement) -> BarElement {
    let mut out = BarElement::zero();
    for (u, a) in x.terms() {
        for (v, b) in y.terms() {
            out.add_scaled(&shuffle(space, u, v), &(a * b));
        }
    }
    out
}

/// Applies the unique coderivation whose word-length-one projection is `beta`.
pub fn apply_coderivation<C: Components + ?Sized>(space: &BarSpace, beta: &C, x: &BarElement) -> BarElement {
    let deg = beta.bar_degree();
    let max = beta.max_arity();
    let mut out = BarElement::zero();
    for (w, c) in x.terms() {
        let n = w.len();
        let mut prefix_deg = 0;
        for k in 0..n {
            for j in 1..=max.min(n - k) {
                let v = beta.eval(&w[k..k + j]);
                if v.is_zero() {
                    continue;
                }
                let s = sign_scalar(koszul_sign(&[deg], &[prefix_deg]));
                for (letter, coef) in v.iter() {
                    let mut w2 = Vec::with_capacity(n - j + 1);
                    w2.extend_from_slice(&w[..k]);
                    w2.push(letter);
                    w2.extend_from_slice(&w[k + j..]);
                    out.add_term(w2, c * &s * coef);
                }
            }
            prefix_deg += space.letter_degree(w[k]);
        }
    }
    out
}

/// Closure form of [`apply_coderivation`].
pub fn extend_coderivation<'a, C: Components + ?Sized>(
    space: &'a BarSpace,
    beta: &'a C,
) -> impl Fn(&BarElement) -> BarElement + 'a {
    move |x| apply_coderivation(space, beta, x)
}

/// Applies the unique coalgebra map whose word-length-one projection is
/// `alpha`: a sum over all ordered block decompositions of each word.
/// `alpha` must have bar degree zero.
pub fn apply_coalgebra_map<C: Components + ?Sized>(alpha: &C, x: &BarElement) -> BarElement {
    assert_eq!(alpha.bar_degree(), 0, "coalgebra maps have degree zero");
    let mut out = BarElement::zero();
    for (w, c) in x.terms() {
        let mut memo: HashMap<usize, Vec<(Word, Scalar)>> = HashMap::new();
        for (w2, c2) in coalgebra_suffix(alpha, w, 0, &mut memo) {
            out.add_term(w2, c * c2);
        }
    }
    out
}

fn coalgebra_suffix<C: Components + ?Sized>(
    alpha: &C,
    w: &[usize],
    start: usize,
    memo: &mut HashMap<usize, Vec<(Word, Scalar)>>,
) -> Vec<(Word, Scalar)> {
    if start == w.len() {
        return vec![(Vec::new(), Scalar::one())];
    }
    if let Some(r) = memo.get(&start) {
        return r.clone();
    }
    let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
    for k in 1..=alpha.max_arity().min(w.len() - start) {
        let v = alpha.eval(&w[start..start + k]);
        if v.is_zero() {
            continue;
        }
        let rest = coalgebra_suffix(alpha, w, start + k, memo);
        for (letter, a) in v.iter() {
            for (tail, b) in &rest {
                let mut w2 = vec![letter];
                w2.extend_from_slice(tail);
                *acc.entry(w2).or_insert_with(Scalar::zero) += a * b;
            }
        }
    }
    let out: Vec<(Word, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    memo.insert(start, out.clone());
    out
}

/// Closure form of [`apply_coalgebra_map`].
pub fn extend_coalgebra_map<'a, C: Components + ?Sized>(alpha: &'a C) -> impl Fn(&BarElement) -> BarElement + 'a {
    move |x| apply_coalgebra_map(alpha, x)
}

/// `(∂ ⊗ id + id ⊗ ∂)` on a tensor element.
pub fn coderivation_on_tensor<F>(space: &BarSpace, degree: i32, d: F, t: &TensorElement) -> TensorElement
where
    F: Fn(&BarElement) -> BarElement,
{
    let mut out = TensorElement::default();
    for ((l, r), c) in t.terms() {
        for (l2, a) in d(&BarElement::word(l.clone())).terms() {
            out.add_term(l2.clone(), r.clone(), c * a);
        }
        let s = sign_scalar(koszul_sign(&[degree], &[space.word_degree(l)]));
        for (r2, a) in d(&BarElement::word(r.clone())).terms() {
            out.add_term(l.clone(), r2.clone(), c * a * &s);
        }
    }
    out
}

/// `(F ⊗ F)` on a tensor element, for a degree-zero map.
pub fn map_on_tensor<F>(f: F, t: &TensorElement) -> TensorElement
where
    F: Fn(&BarElement) -> BarElement,
{
    let mut out = TensorElement::default();
    for ((l, r), c) in t.terms() {
        let fl = f(&BarElement::word(l.clone()));
        let fr = f(&BarElement::word(r.clone()));
        for (l2, a) in fl.terms() {
            for (r2, b) in fr.terms() {
                out.add_term(l2.clone(), r2.clone(), c * a * b);
            }
        }
    }
    out
}

/// Shuffle-decomposable subspace among a fixed list of words of one degree.
#[derive(Clone, Debug)]
pub struct Decomposables {
    pub words: Vec<Word>,
    pub span: Rref,
    position: HashMap<Word, usize>,
    free: Vec<usize>,
}

impl Decomposables {
    /// `words` must be closed under the shuffles of its own splittings, which
    /// holds for "all words of a given length" and "all words of a given degree".
    pub fn among(space: &BarSpace, words: Vec<Word>) -> Self {
        let position: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = Vec::new();
        for w in &words {
            for k in 1..w.len() {
                let s = shuffle(space, &w[..k], &w[k..]);
                if s.is_zero() {
                    continue;
                }
                let mut row = vec![Scalar::zero(); words.len()];
                for (w2, c) in s.terms() {
                    row[position[w2]] = c.clone();
                }
                rows.push(row);
            }
        }
        let m = if rows.is_empty() { SparseMatrix::zeros(0, words.len()) } else { SparseMatrix::from_dense(&rows) };
        let span = rref(&m);
        let pivots: std::collections::BTreeSet<usize> = span.pivots.iter().copied().collect();
        let free = (0..words.len()).filter(|c| !pivots.contains(c)).collect();
        Decomposables { words, span, position, free }
    }

    pub fn dim(&self) -> usize {
        self.span.rank
    }

    pub fn quotient_dim(&self) -> usize {
        self.free.len()
    }

    /// Words whose classes form a basis of the quotient.
    pub fn quotient_words(&self) -> Vec<Word> {
        self.free.iter().map(|&i| self.words[i].clone()).collect()
    }

    /// Coordinates of the class of `x` in the quotient basis. Words outside
    /// the list must not occur in `x`.
    pub fn project(&self, x: &BarElement) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.words.len()];
        for (w, c) in x.terms() {
            let i = *self.position.get(w).expect("word outside the decomposables' ambient list");
            v[i] += c;
        }
        let r = self.span.reduce(&v);
        self.free.iter().map(|&i| r[i].clone()).collect()
    }

    pub fn contains(&self, x: &BarElement) -> bool {
        self.project(x).iter().all(Zero::is_zero)
    }
}

/// Shuffle-decomposables among the words of length `n`.
pub fn shuffle_decomposables(space: &BarSpace, n: usize) -> Decomposables {
    assert!(n >= 2, "decomposables start in word length two");
    Decomposables::among(space, space.words_of_length(n))
}
