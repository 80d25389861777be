//! Hochschild and Harrison cochains of a strict graded algebra: the
//! differential, cup and brace products, twisting cochains, perturbations and
//! the degeneracy (formality) obstruction.
//!
//! Cochains are normalized. Internally they are evaluated in the bar
//! convention, where a cochain of bidegree `(n, m)` has bar degree
//! `m + n − 1` and
//!
//! ```text
//! δφ = (−1)^{|φ|} φ{β₂} − β₂{φ},    f{g₁..g_k} = Σ ± f(.., g₁(..), .., g_k(..), ..)
//! ```
//!
//! with the Koszul sign of each inner block passing the preceding inputs.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::ainf::{compose, invert_iso, AInfMorphism, AInfStructure, MultiOp};
use crate::barcoalg::{shuffle, BarElement, BarSpace, Word};
use crate::exactlin::{kernel_basis, quotient_and_homology, solve, Scalar, SparseMatrix};
use crate::graded::{bar_sign, koszul_sign, parity_scalar, sign_scalar, GradedVector};

/// A sum of bihomogeneous cochains `C^{n,m}(A, A)` over a strict algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochCochain {
    base: AInfStructure,
    components: BTreeMap<(usize, i32), MultiOp>,
}

impl HochCochain {
    pub fn zero(base: &AInfStructure) -> Self {
        HochCochain { base: strict_part(base), components: BTreeMap::new() }
    }

    /// A single component; the table is in the algebra convention.
    pub fn from_op(base: &AInfStructure, op: MultiOp) -> Self {
        let mut c = Self::zero(base);
        c.add_op(op);
        c
    }

    /// The arity-0 cochain with value the unit.
    pub fn unit(base: &AInfStructure) -> Self {
        let u = base.unit().expect("unital base algebra");
        let mut op = MultiOp::new(0, 0);
        op.insert(Vec::new(), GradedVector::basis(u));
        Self::from_op(base, op)
    }

    pub fn identity(base: &AInfStructure) -> Self {
        let mut op = MultiOp::new(1, 0);
        for &l in base.space().letters() {
            op.insert(vec![l], GradedVector::basis(l));
        }
        Self::from_op(base, op)
    }

    /// The product `μ` as an arity-2, degree-0 cochain.
    pub fn product(base: &AInfStructure) -> Self {
        let mut op = MultiOp::new(2, 0);
        if let Some(m2) = base.op(2) {
            for (w, v) in m2.entries() {
                op.insert(w.clone(), v.clone());
            }
        }
        Self::from_op(base, op)
    }

    /// Elementary cochain with bar-convention value `g` on `w`.
    pub fn elementary(base: &AInfStructure, word: &[usize], target: usize, m: i32) -> Self {
        let mut op = MultiOp::new(word.len(), m);
        op.insert_bar(base.basis(), word.to_vec(), GradedVector::basis(target));
        Self::from_op(base, op)
    }

    pub fn base(&self) -> &AInfStructure {
        &self.base
    }

    pub fn add_op(&mut self, op: MultiOp) {
        if op.is_zero() {
            return;
        }
        let key = (op.arity, op.declared_degree);
        match self.components.get_mut(&key) {
            Some(existing) => {
                for (w, v) in op.entries() {
                    existing.add(w.clone(), v);
                }
                if existing.is_zero() {
                    self.components.remove(&key);
                }
            }
            None => {
                self.components.insert(key, op);
            }
        }
    }

    pub fn component(&self, n: usize, m: i32) -> Option<&MultiOp> {
        self.components.get(&(n, m))
    }

    pub fn components(&self) -> impl Iterator<Item = &MultiOp> {
        self.components.values()
    }

    pub fn bidegrees(&self) -> Vec<(usize, i32)> {
        self.components.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scaled(&self, c: &Scalar) -> HochCochain {
        let mut out = HochCochain::zero(&self.base);
        for op in self.components.values() {
            let mut o = MultiOp::new(op.arity, op.declared_degree);
            for (w, v) in op.entries() {
                o.insert(w.clone(), v.scaled(c));
            }
            out.add_op(o);
        }
        out
    }

    pub fn add(&self, other: &HochCochain) -> HochCochain {
        let mut out = self.clone();
        for op in other.components.values() {
            out.add_op(op.clone());
        }
        out
    }

    pub fn sub(&self, other: &HochCochain) -> HochCochain {
        self.add(&other.scaled(&-Scalar::one()))
    }

    /// Value of the arity-`w.len()` part in the bar convention.
    pub fn eval_bar(&self, w: &[usize]) -> GradedVector {
        let mut out = GradedVector::zero();
        for ((n, _), op) in &self.components {
            if *n == w.len() {
                out.add_scaled(&op.eval_bar(self.base.basis(), w), &Scalar::one());
            }
        }
        out
    }

    /// Splits a structure `{m₂, m₃, ...}` into its strict part and the
    /// cochain of higher operations.
    pub fn from_structure(s: &AInfStructure) -> HochCochain {
        let mut c = HochCochain::zero(s);
        for op in s.ops() {
            if op.arity >= 3 {
                c.add_op(op.clone());
            }
        }
        c
    }

    /// The structure `{m₂} ∪ self`; components must sit in bidegrees `(i, 2 − i)`.
    pub fn assemble(&self, arity_bound: usize) -> AInfStructure {
        let mut ops: Vec<MultiOp> = self.base.ops().cloned().collect();
        let mut higher: BTreeMap<usize, MultiOp> = BTreeMap::new();
        for op in self.components.values() {
            assert_eq!(op.declared_degree, 2 - op.arity as i32, "twisting cochains live in bidegree (i, 2 - i)");
            if op.arity <= arity_bound {
                higher.insert(op.arity, op.clone());
            }
        }
        ops.extend(higher.into_values());
        AInfStructure::new(self.base.basis().clone(), self.base.unit(), ops, arity_bound.max(2))
            .expect("components are homogeneous")
    }

    /// Every component vanishes on shuffles.
    pub fn is_harrison(&self) -> bool {
        let space = self.base.space();
        self.components.keys().all(|&(n, m)| {
            for w in words_for(&self.base, n, m) {
                for k in 1..n {
                    let mut v = GradedVector::zero();
                    for (u, c) in shuffle(space, &w[..k], &w[k..]).terms() {
                        v.add_scaled(&self.eval_bar(u), c);
                    }
                    if !v.is_zero() {
                        return false;
                    }
                }
            }
            true
        })
    }
}

fn strict_part(s: &AInfStructure) -> AInfStructure {
    let ops: Vec<MultiOp> = s.op(2).cloned().into_iter().collect();
    AInfStructure::new(s.basis().clone(), s.unit(), ops, 2).expect("product of a valid structure")
}

/// `β₂` on arbitrary generators, including the unit.
fn beta2(base: &AInfStructure, a: usize, b: usize) -> GradedVector {
    let degs = [base.basis().degree(a), base.basis().degree(b)];
    base.product(a, b).scaled(&sign_scalar(bar_sign(&degs)))
}

/// Words of length `n` over the non-unit generators whose output degree
/// `Σ|a_i| + m` is a degree of some generator.
pub fn words_for(base: &AInfStructure, n: usize, m: i32) -> Vec<Word> {
    let b = base.basis();
    let letters = base.space().letters();
    let targets: BTreeSet<i32> = (0..b.len()).map(|g| b.degree(g)).collect();
    let Some(&max_t) = targets.iter().next_back() else { return Vec::new() };
    let min_letter = letters.iter().map(|&l| b.degree(l)).min().unwrap_or(0);
    let mut out = Vec::new();
    let mut stack: Vec<(Word, i32)> = vec![(Vec::new(), 0)];
    while let Some((w, d)) = stack.pop() {
        if w.len() == n {
            if targets.contains(&(d + m)) {
                out.push(w);
            }
            continue;
        }
        for &l in letters.iter().rev() {
            let nd = d + b.degree(l);
            let rest = (n - w.len() - 1) as i32;
            if min_letter >= 0 && nd + rest * min_letter + m > max_t {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(l);
            stack.push((w2, nd));
        }
    }
    out
}

/// Bar degree of the `(n, m)` component.
fn bar_degree(n: usize, m: i32) -> i32 {
    m + n as i32 - 1
}

enum Slot {
    Letter(usize),
    Block(usize, usize, usize),
}

/// All placements of the inner blocks (in order) into `w` with their signs.
fn placements(space: &BarSpace, w: &[usize], outer: usize, blocks: &[(usize, i32)]) -> Vec<(i32, Vec<Slot>)> {
    fn go(
        space: &BarSpace,
        w: &[usize],
        outer: usize,
        blocks: &[(usize, i32)],
        pos: usize,
        t: usize,
        prefix: i32,
        sign: i32,
        slots: &mut Vec<Slot>,
        out: &mut Vec<(i32, Vec<Slot>)>,
    ) {
        if slots.len() > outer {
            return;
        }
        if pos == w.len() && t == blocks.len() {
            if slots.len() == outer {
                out.push((sign, slots.iter().map(clone_slot).collect()));
            }
            return;
        }
        if t < blocks.len() {
            let (q, deg) = blocks[t];
            if pos + q <= w.len() {
                let s = sign * koszul_sign(&[deg], &[prefix]);
                let d: i32 = w[pos..pos + q].iter().map(|&l| space.letter_degree(l)).sum();
                slots.push(Slot::Block(t, pos, pos + q));
                go(space, w, outer, blocks, pos + q, t + 1, prefix + d, s, slots, out);
                slots.pop();
            }
        }
        if pos < w.len() {
            slots.push(Slot::Letter(w[pos]));
            go(space, w, outer, blocks, pos + 1, t, prefix + space.letter_degree(w[pos]), sign, slots, out);
            slots.pop();
        }
    }
    fn clone_slot(s: &Slot) -> Slot {
        match s {
            Slot::Letter(l) => Slot::Letter(*l),
            Slot::Block(t, a, b) => Slot::Block(*t, *a, *b),
        }
    }
    let mut out = Vec::new();
    go(space, w, outer, blocks, 0, 0, 0, 1, &mut Vec::new(), &mut out);
    out
}

/// `f{g₁, ..., g_k}(w)` for single-arity evaluators in the bar convention.
fn brace_eval(
    space: &BarSpace,
    w: &[usize],
    outer: (usize, &dyn Fn(&[usize]) -> GradedVector),
    inners: &[(usize, i32, &dyn Fn(&[usize]) -> GradedVector)],
) -> GradedVector {
    let blocks: Vec<(usize, i32)> = inners.iter().map(|(q, d, _)| (*q, *d)).collect();
    let mut out = GradedVector::zero();
    for (sign, slots) in placements(space, w, outer.0, &blocks) {
        // expand multilinearly over block outputs
        let mut partial: Vec<(Word, Scalar)> = vec![(Vec::new(), sign_scalar(sign))];
        for slot in &slots {
            let v = match slot {
                Slot::Letter(l) => GradedVector::basis(*l),
                Slot::Block(t, a, b) => (inners[*t].2)(&w[*a..*b]),
            };
            if v.is_zero() {
                partial.clear();
                break;
            }
            let mut next = Vec::with_capacity(partial.len() * v.len());
            for (p, c) in &partial {
                for (g, e) in v.iter() {
                    let mut p2 = p.clone();
                    p2.push(g);
                    next.push((p2, c * e));
                }
            }
            partial = next;
        }
        for (word, c) in partial {
            out.add_scaled(&(outer.1)(&word), &c);
        }
    }
    out
}

/// Hochschild differential.
pub fn hdelta(f: &HochCochain) -> HochCochain {
    let base = &f.base;
    let space = base.space();
    let b2 = |w: &[usize]| beta2(base, w[0], w[1]);
    let mut out = HochCochain::zero(base);
    for (&(n, m), op) in &f.components {
        let deg = bar_degree(n, m);
        let phi = |w: &[usize]| op.eval_bar(base.basis(), w);
        let mut res = MultiOp::new(n + 1, m);
        for w in words_for(base, n + 1, m) {
            let mut v = brace_eval(space, &w, (n, &phi), &[(2, 1, &b2)]).scaled(&parity_scalar(deg));
            v.add_scaled(&brace_eval(space, &w, (2, &b2), &[(n, deg, &phi)]), &-Scalar::one());
            res.insert_bar(base.basis(), w, v);
        }
        out.add_op(res);
    }
    out
}

/// Cup product `(f ⌣ g)(a) = ± μ(f(a_1..a_p), g(a_{p+1}..))`, in the
/// algebra convention with the sign of `g` passing the inputs of `f`.
pub fn cup(f: &HochCochain, g: &HochCochain) -> HochCochain {
    let base = &f.base;
    let b = base.basis();
    let mut out = HochCochain::zero(base);
    for (&(p, mf), fo) in &f.components {
        for (&(qn, mg), go) in &g.components {
            let mut res = MultiOp::new(p + qn, mf + mg);
            for w in words_for(base, p + qn, mf + mg) {
                let fv = fo.get(&w[..p]);
                let gv = go.get(&w[p..]);
                if fv.is_zero() || gv.is_zero() {
                    continue;
                }
                let in_deg: i32 = w[..p].iter().map(|&l| b.degree(l)).sum();
                let sign = parity_scalar(mg * in_deg);
                let mut v = GradedVector::zero();
                for (x, c) in fv.iter() {
                    for (y, e) in gv.iter() {
                        v.add_scaled(&base.product(x, y), &(c * e));
                    }
                }
                res.insert(w, v.scaled(&sign));
            }
            out.add_op(res);
        }
    }
    out
}

/// Brace `f{g₁, ..., g_k}`, keeping result components of arity ≤ `max_arity`.
pub fn brace_up_to(f: &HochCochain, gs: &[HochCochain], max_arity: usize) -> HochCochain {
    let base = &f.base;
    if gs.is_empty() {
        return f.clone();
    }
    let space = base.space();
    let mut out = HochCochain::zero(base);
    // every choice of one component per argument
    let mut choices: Vec<Vec<(usize, i32)>> = vec![Vec::new()];
    for g in gs {
        let mut next = Vec::new();
        for c in &choices {
            for key in g.components.keys() {
                let mut c2 = c.clone();
                c2.push(*key);
                next.push(c2);
            }
        }
        choices = next;
    }
    for (&(n, m), fo) in &f.components {
        let phi = |w: &[usize]| fo.eval_bar(base.basis(), w);
        for choice in &choices {
            if choice.len() > n {
                continue;
            }
            let arity = n + choice.iter().map(|(q, _)| *q).sum::<usize>() - choice.len();
            if arity > max_arity {
                continue;
            }
            let deg = bar_degree(n, m) + choice.iter().map(|&(q, mm)| bar_degree(q, mm)).sum::<i32>();
            let mdeg = deg - arity as i32 + 1;
            let evals: Vec<Box<dyn Fn(&[usize]) -> GradedVector + '_>> = choice
                .iter()
                .zip(gs)
                .map(|(key, g)| {
                    let op = &g.components[key];
                    Box::new(move |w: &[usize]| op.eval_bar(base.basis(), w)) as Box<dyn Fn(&[usize]) -> GradedVector>
                })
                .collect();
            let inners: Vec<(usize, i32, &dyn Fn(&[usize]) -> GradedVector)> = choice
                .iter()
                .zip(&evals)
                .map(|(&(q, mm), e)| (q, bar_degree(q, mm), e.as_ref()))
                .collect();
            let mut res = MultiOp::new(arity, mdeg);
            for w in words_for(base, arity, mdeg) {
                let v = brace_eval(space, &w, (n, &phi), &inners);
                res.insert_bar(base.basis(), w, v);
            }
            out.add_op(res);
        }
    }
    out
}

pub fn brace(f: &HochCochain, gs: &[HochCochain]) -> HochCochain {
    let max = f.components.keys().map(|k| k.0).max().unwrap_or(0)
        + gs.iter().map(|g| g.components.keys().map(|k| k.0).max().unwrap_or(0)).sum::<usize>();
    brace_up_to(f, gs, max)
}

/// `f ⌣₁ g = f{g}`.
pub fn cup1(f: &HochCochain, g: &HochCochain) -> HochCochain {
    brace(f, std::slice::from_ref(g))
}

/// `δm = m ⌣₁ m` through arity `bound`.
pub fn is_twisting(m: &HochCochain, bound: usize) -> bool {
    let lhs = hdelta(m);
    let rhs = brace_up_to(m, std::slice::from_ref(m), bound);
    let diff = lhs.sub(&rhs);
    diff.components.keys().all(|&(n, _)| n > bound)
}

/// Coordinates of a cochain space `C^{n,m}` in the bar convention.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub n: usize,
    pub m: i32,
    pub entries: Vec<(Word, usize)>,
    index: BTreeMap<(Word, usize), usize>,
}

impl CochainSpace {
    pub fn new(base: &AInfStructure, n: usize, m: i32) -> Self {
        let b = base.basis();
        let mut entries = Vec::new();
        for w in words_for(base, n, m) {
            let d: i32 = w.iter().map(|&l| b.degree(l)).sum::<i32>() + m;
            for g in b.in_degree(d) {
                entries.push((w.clone(), g));
            }
        }
        let index = entries.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        CochainSpace { n, m, entries, index }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn coords(&self, c: &HochCochain) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        if let Some(op) = c.component(self.n, self.m) {
            for (w, _) in op.entries() {
                for (g, x) in op.eval_bar(c.base().basis(), w).iter() {
                    if let Some(&i) = self.index.get(&(w.clone(), g)) {
                        v[i] = x.clone();
                    }
                }
            }
        }
        v
    }

    pub fn cochain(&self, base: &AInfStructure, coords: &[Scalar]) -> HochCochain {
        let mut op = MultiOp::new(self.n, self.m);
        let mut vals: BTreeMap<&Word, GradedVector> = BTreeMap::new();
        for ((w, g), x) in self.entries.iter().zip(coords) {
            if !x.is_zero() {
                vals.entry(w).or_default().add_term(*g, x.clone());
            }
        }
        for (w, v) in vals {
            op.insert_bar(base.basis(), w.clone(), v);
        }
        HochCochain::from_op(base, op)
    }

    /// Columns spanning the shuffle-vanishing subspace.
    pub fn harrison_basis(&self, base: &AInfStructure) -> Vec<Vec<Scalar>> {
        let space = base.space();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let words: BTreeSet<&Word> = self.entries.iter().map(|(w, _)| w).collect();
        let targets: BTreeSet<usize> = self.entries.iter().map(|(_, g)| *g).collect();
        for w in &words {
            for k in 1..self.n {
                let sh = shuffle(space, &w[..k], &w[k..]);
                for &g in &targets {
                    let mut row = vec![Scalar::zero(); self.dim()];
                    let mut any = false;
                    for (u, c) in sh.terms() {
                        if let Some(&i) = self.index.get(&(u.clone(), g)) {
                            row[i] += c;
                            any = true;
                        }
                    }
                    if any && row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return (0..self.dim())
                .map(|i| {
                    let mut e = vec![Scalar::zero(); self.dim()];
                    e[i] = Scalar::one();
                    e
                })
                .collect();
        }
        kernel_basis(&SparseMatrix::from_dense(&rows))
    }
}

/// Matrix of `δ: C^{n,m} → C^{n+1,m}` on the given source columns.
fn delta_matrix(base: &AInfStructure, src: &CochainSpace, dst: &CochainSpace, columns: &[Vec<Scalar>]) -> SparseMatrix {
    let cols: Vec<Vec<Scalar>> =
        columns.iter().map(|c| dst.coords(&hdelta(&src.cochain(base, c)))).collect();
    SparseMatrix::from_columns(dst.dim(), &cols)
}

fn unit_columns(dim: usize) -> Vec<Vec<Scalar>> {
    (0..dim)
        .map(|i| {
            let mut e = vec![Scalar::zero(); dim];
            e[i] = Scalar::one();
            e
        })
        .collect()
}

/// Cohomology of the Hochschild (or Harrison) complex at a bidegree.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub dim: usize,
    /// Representative cocycles of a basis.
    pub basis: Vec<HochCochain>,
}

pub fn cohomology(base: &AInfStructure, n: usize, m: i32, harrison: bool) -> CohomologyData {
    let base = &strict_part(base);
    let mid = CochainSpace::new(base, n, m);
    let next = CochainSpace::new(base, n + 1, m);
    let mid_cols = if harrison { mid.harrison_basis(base) } else { unit_columns(mid.dim()) };
    let d_out = delta_matrix(base, &mid, &next, &mid_cols);
    // δ of the previous space, expressed in the chosen coordinates of C^{n,m}
    let d_in = if n == 0 {
        SparseMatrix::zeros(mid_cols.len(), 0)
    } else {
        let prev = CochainSpace::new(base, n - 1, m);
        let prev_cols = if harrison { prev.harrison_basis(base) } else { unit_columns(prev.dim()) };
        let full = delta_matrix(base, &prev, &mid, &prev_cols);
        let frame = SparseMatrix::from_columns(mid.dim(), &mid_cols);
        let cols: Vec<Vec<Scalar>> = (0..full.cols())
            .map(|j| solve(&frame, &full.column(j)).expect("δ preserves the subcomplex"))
            .collect();
        SparseMatrix::from_columns(mid_cols.len(), &cols)
    };
    let h = quotient_and_homology(&d_in, &d_out).expect("δδ = 0");
    let frame = SparseMatrix::from_columns(mid.dim(), &mid_cols);
    let basis = h.representatives.iter().map(|r| mid.cochain(base, &frame.mul_vec(r))).collect();
    CohomologyData { dim: h.dim, basis }
}

pub fn cohomology_dim(base: &AInfStructure, n: usize, m: i32, harrison: bool) -> usize {
    cohomology(base, n, m, harrison).dim
}

/// Result of conjugating a structure by `{id, p}`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub structure: AInfStructure,
    /// `{id, p}` from the new structure to the old one.
    pub morphism: AInfMorphism,
}

/// Conjugates `s` by the automorphism `{id, p}` of the bar coalgebra; `p`
/// must have a single component of bidegree `(n, 1 − n)`, `n ≥ 2`.
pub fn perturb(s: &AInfStructure, p: &HochCochain) -> Perturbation {
    let bound = s.arity_bound();
    let mut comps = vec![{
        let mut id = MultiOp::component(1);
        for &l in s.space().letters() {
            id.insert(vec![l], GradedVector::basis(l));
        }
        id
    }];
    for op in p.components() {
        assert_eq!(op.declared_degree, 1 - op.arity as i32, "perturbations have bidegree (n, 1 - n)");
        assert!(op.arity >= 2);
        if op.arity <= bound {
            comps.push(op.clone());
        }
    }
    let f = AInfMorphism::new(s.clone(), s.clone(), comps.clone(), bound).expect("homogeneous components");
    let g = invert_iso(&f, bound).expect("first component is the identity");
    let mut ops: Vec<MultiOp> = (1..=bound).map(MultiOp::structure).collect();
    for n in 1..=bound {
        for w in s.space().words_of_length(n) {
            let x = BarElement::word(w.clone());
            let dfx = s.bar_differential(&f.bar_map(&x));
            let mut v = GradedVector::zero();
            for (u, c) in g.bar_map(&dfx).terms() {
                if u.len() == 1 {
                    v.add_term(u[0], c.clone());
                }
            }
            ops[n - 1].insert_bar(s.basis(), w, v);
        }
    }
    let new = AInfStructure::new(s.basis().clone(), s.unit(), ops, bound)
        .expect("conjugate is homogeneous")
        .with_cinf(s.is_cinf_flagged());
    let morphism = AInfMorphism::new(new.clone(), s.clone(), comps, bound).expect("homogeneous components");
    Perturbation { structure: new, morphism }
}

/// Outcome of trying to kill all higher operations by perturbations.
#[derive(Clone, Debug)]
pub enum Degeneracy {
    /// The structure is isomorphic, through `morphism`, to `strict`
    /// (all operations above arity 2 vanish up to the bound).
    Degenerate { steps: Vec<Perturbation>, strict: AInfStructure, morphism: AInfMorphism },
    /// `m_arity` (after the steps taken) is a nonzero cohomology class.
    Obstructed {
        arity: usize,
        steps: Vec<Perturbation>,
        representative: HochCochain,
        cohomology_basis: Vec<HochCochain>,
    },
}

impl Degeneracy {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Degeneracy::Degenerate { .. })
    }
}

/// Arity by arity, solves `δp = m_n` (with `p` shuffle-vanishing in
/// Harrison mode) and perturbs; stops at the first obstruction.
pub fn try_degenerate(s: &AInfStructure, max_arity: usize, harrison: bool) -> Degeneracy {
    let mut current = s.truncated(max_arity.min(s.arity_bound()).max(2));
    let base = strict_part(s);
    let mut steps: Vec<Perturbation> = Vec::new();
    let mut total = AInfMorphism::identity(&current);
    for n in 3..=current.arity_bound() {
        let Some(mn) = current.op(n).cloned() else { continue };
        let target = CochainSpace::new(&base, n, 2 - n as i32);
        let source = CochainSpace::new(&base, n - 1, 2 - n as i32);
        let b = target.coords(&HochCochain::from_op(&base, mn.clone()));
        let cols = if harrison { source.harrison_basis(&base) } else { unit_columns(source.dim()) };
        let d = delta_matrix(&base, &source, &target, &cols);
        match solve(&d, &b) {
            Some(y) => {
                let frame = SparseMatrix::from_columns(source.dim(), &cols);
                let p = source.cochain(&base, &frame.mul_vec(&y));
                let step = perturb(&current, &p);
                debug_assert!(step.structure.op(n).is_none(), "perturbation kills m_{n}");
                total = compose(&total, &step.morphism).expect("consecutive structures");
                current = step.structure.clone();
                steps.push(step);
            }
            None => {
                let h = cohomology(&base, n, 2 - n as i32, harrison);
                return Degeneracy::Obstructed {
                    arity: n,
                    steps,
                    representative: HochCochain::from_op(&base, mn),
                    cohomology_basis: h.basis,
                };
            }
        }
    }
    Degeneracy::Degenerate { steps, strict: current, morphism: total }
}
