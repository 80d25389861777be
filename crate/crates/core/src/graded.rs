//! Graded vector spaces over ℚ with named generators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlin::{format_scalar, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("unknown generator `{0}`")]
    UnknownName(String),
    #[error("image of `{name}` should have degree {expected} but contains `{found}` of degree {found_degree}")]
    Inhomogeneous { name: String, expected: i32, found: String, found_degree: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

/// Finite ordered basis of named, integer-graded generators.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedBasis {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for GradedBasis {}

impl GradedBasis {
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = (S, i32)>) -> Result<Self, GradedError> {
        let mut gens = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in generators {
            let name = name.into();
            if index.insert(name.clone(), gens.len()).is_some() {
                return Err(GradedError::DuplicateName(name));
            }
            gens.push(Generator { name, degree });
        }
        Ok(GradedBasis { generators: gens, index })
    }

    pub fn empty() -> Self {
        GradedBasis { generators: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.generators[i].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GradedError> {
        self.index.get(name).copied().ok_or_else(|| GradedError::UnknownName(name.to_string()))
    }

    /// Generators of the given degree, in basis order.
    pub fn in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == d).collect()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).min()
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Same names, every degree lowered by one.
    pub fn desuspend(&self) -> GradedBasis {
        self.shifted(-1)
    }

    pub fn suspend(&self) -> GradedBasis {
        self.shifted(1)
    }

    fn shifted(&self, by: i32) -> GradedBasis {
        GradedBasis {
            generators: self
                .generators
                .iter()
                .map(|g| Generator { name: g.name.clone(), degree: g.degree + by })
                .collect(),
            index: self.index.clone(),
        }
    }
}

/// Linear combination of basis generators, keyed by generator index.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GradedVector(BTreeMap<usize, Scalar>);

impl fmt::Debug for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.0.iter().map(|(i, x)| format!("{}*g{}", format_scalar(x), i)).collect();
        write!(f, "[{}]", terms.join(" + "))
    }
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(i, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::zero();
        for (i, c) in terms {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> GradedVector {
        let mut v = GradedVector::zero();
        v.add_scaled(self, c);
        v
    }

    pub fn remove(&mut self, i: usize) -> Option<Scalar> {
        self.0.remove(&i)
    }

    /// Common degree of all terms, `None` for the zero vector or a mixed vector.
    pub fn degree(&self, basis: &GradedBasis) -> Option<i32> {
        let mut it = self.0.keys().map(|&i| basis.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, basis: &GradedBasis) -> bool {
        self.is_zero() || self.degree(basis).is_some()
    }

    /// Dense coordinates with respect to the listed generators.
    pub fn coords(&self, gens: &[usize]) -> Vec<Scalar> {
        gens.iter().map(|&g| self.coeff(g)).collect()
    }

    pub fn from_coords(gens: &[usize], coords: &[Scalar]) -> Self {
        Self::from_terms(gens.iter().copied().zip(coords.iter().cloned()))
    }

    pub fn display(&self, basis: &GradedBasis) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(i, c)| {
                if c.is_one() {
                    basis.name(*i).to_string()
                } else {
                    format!("{}*{}", format_scalar(c), basis.name(*i))
                }
            })
            .collect();
        terms.join(" + ")
    }
}

impl std::ops::Add<&GradedVector> for &GradedVector {
    type Output = GradedVector;
    fn add(self, rhs: &GradedVector) -> GradedVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &Scalar::one());
        v
    }
}

impl std::ops::Sub<&GradedVector> for &GradedVector {
    type Output = GradedVector;
    fn sub(self, rhs: &GradedVector) -> GradedVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &-Scalar::one());
        v
    }
}

/// Linear map of fixed degree between graded bases, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedBasis,
    pub target: GradedBasis,
    pub degree: i32,
    images: Vec<GradedVector>,
}

impl GradedMap {
    pub fn new(
        source: GradedBasis,
        target: GradedBasis,
        degree: i32,
        images: Vec<GradedVector>,
    ) -> Result<Self, GradedError> {
        assert_eq!(images.len(), source.len(), "one image per source generator");
        for (i, img) in images.iter().enumerate() {
            let expected = source.degree(i) + degree;
            for (j, _) in img.iter() {
                if target.degree(j) != expected {
                    return Err(GradedError::Inhomogeneous {
                        name: source.name(i).to_string(),
                        expected,
                        found: target.name(j).to_string(),
                        found_degree: target.degree(j),
                    });
                }
            }
        }
        Ok(GradedMap { source, target, degree, images })
    }

    pub fn zero(source: GradedBasis, target: GradedBasis, degree: i32) -> Self {
        let images = vec![GradedVector::zero(); source.len()];
        GradedMap { source, target, degree, images }
    }

    pub fn identity(basis: GradedBasis) -> Self {
        let images = (0..basis.len()).map(GradedVector::basis).collect();
        GradedMap { source: basis.clone(), target: basis, degree: 0, images }
    }

    /// Builds a map from `(source name, [(target name, coefficient)])` pairs;
    /// unlisted generators map to zero.
    pub fn from_named(
        source: GradedBasis,
        target: GradedBasis,
        degree: i32,
        entries: &[(&str, Vec<(&str, Scalar)>)],
    ) -> Result<Self, GradedError> {
        let mut images = vec![GradedVector::zero(); source.len()];
        for (name, terms) in entries {
            let i = source.index_of(name)?;
            for (t, c) in terms {
                images[i].add_term(target.index_of(t)?, c.clone());
            }
        }
        Self::new(source, target, degree, images)
    }

    pub fn image(&self, i: usize) -> &GradedVector {
        &self.images[i]
    }

    pub fn images(&self) -> &[GradedVector] {
        &self.images
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GradedMap) -> GradedMap {
        let images = self.images.iter().map(|v| other.apply(v)).collect();
        GradedMap { source: self.source.clone(), target: other.target.clone(), degree: self.degree + other.degree, images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GradedVector::is_zero)
    }
}

/// Koszul sign of moving the block `right` past the block `left`:
/// `(-1)^(Σ p·q)` over every pair `p` in `left`, `q` in `right`.
pub fn koszul_sign(degrees_left: &[i32], degrees_right: &[i32]) -> i32 {
    let l: i64 = degrees_left.iter().map(|&d| d as i64).sum();
    let r: i64 = degrees_right.iter().map(|&d| d as i64).sum();
    if (l * r).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign relating an operation written in the algebra convention to its
/// component on the bar construction. Each argument `a_k` of an arity-`n`
/// operation is moved past the `n - k` later suspension symbols.
pub fn bar_sign(degrees: &[i32]) -> i32 {
    let n = degrees.len();
    degrees
        .iter()
        .enumerate()
        .map(|(k, &d)| koszul_sign(&[d], &vec![1; n - k - 1]))
        .product()
}

pub fn sign_scalar(s: i32) -> Scalar {
    if s >= 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `(-1)^e` as a scalar.
pub fn parity_scalar(e: i32) -> Scalar {
    sign_scalar(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}
