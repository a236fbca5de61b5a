//! Exact linear algebra on degree slices.
//!
//! Vectors are sparse coordinate lists over a fixed ambient basis (normal
//! words, or the basis of a degree component of a free module). A
//! [`DegreeSlice`] keeps its spanning set in reduced row-echelon form with
//! leftmost pivots normalized to one, so equal subspaces have identical rows.

use std::collections::{BTreeMap, HashMap};

use crate::error::AlgebraError;
use crate::scalar::{Field, Scalar};

/// A sparse coordinate vector: strictly increasing indices, no zero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec::default()
    }

    pub fn unit(index: usize, field: Field) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    /// Accepts entries in any order; duplicates are summed and zeros dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in entries {
            accumulate(&mut acc, i, c);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<usize, Scalar>) -> Self {
        SparseVec {
            entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    /// Leftmost nonzero coordinate.
    pub fn pivot(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, a)| (*i, a * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, a)| (*i, -a)).collect(),
        }
    }

    /// `self + c * other`, merging the sorted entry lists.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec, field: Field) -> Self {
        self.add_scaled(&field.one(), other)
    }

    /// Shifts every index by `offset` (embedding into a direct sum).
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect(),
        }
    }

    /// Entries with index in `range`, re-based at `range.start`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| range.contains(i))
                .map(|(i, c)| (i - range.start, c.clone()))
                .collect(),
        }
    }

    /// Leading coefficient scaled to one.
    fn normalized(&self) -> Self {
        match self.pivot() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inverse().expect("nonzero pivot")),
            _ => self.clone(),
        }
    }
}

fn accumulate(acc: &mut BTreeMap<usize, Scalar>, i: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                e.insert(s);
            }
        }
    }
}

/// Linear combination `sum c_k * v_k` computed in one accumulation pass.
pub fn linear_combination<'a>(terms: impl IntoIterator<Item = (Scalar, &'a SparseVec)>) -> SparseVec {
    let mut acc = BTreeMap::new();
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (i, a) in v.entries() {
            accumulate(&mut acc, *i, &c * a);
        }
    }
    SparseVec::from_map(acc)
}

/// A subspace of a `ambient_dim`-dimensional coordinate space in degree
/// `degree`, stored as reduced row-echelon rows sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSlice {
    degree: u32,
    ambient_dim: usize,
    field: Field,
    rows: BTreeMap<usize, SparseVec>,
}

impl DegreeSlice {
    pub fn zero(degree: u32, ambient_dim: usize, field: Field) -> Self {
        DegreeSlice {
            degree,
            ambient_dim,
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn full(degree: u32, ambient_dim: usize, field: Field) -> Self {
        let rows = (0..ambient_dim).map(|i| (i, SparseVec::unit(i, field))).collect();
        DegreeSlice {
            degree,
            ambient_dim,
            field,
            rows,
        }
    }

    /// Row-reduces `vectors` into a slice whose row space is their span.
    pub fn span(
        degree: u32,
        ambient_dim: usize,
        field: Field,
        vectors: impl IntoIterator<Item = SparseVec>,
    ) -> Result<Self, AlgebraError> {
        let mut s = Self::zero(degree, ambient_dim, field);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl ExactSizeIterator<Item = &SparseVec> + Clone {
        self.rows.values()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn is_pivot(&self, column: usize) -> bool {
        self.rows.contains_key(&column)
    }

    fn check_len(&self, v: &SparseVec) -> Result<(), AlgebraError> {
        match v.max_index() {
            Some(m) if m >= self.ambient_dim => Err(AlgebraError::DimensionMismatch {
                expected: self.ambient_dim,
                found: m + 1,
            }),
            _ => Ok(()),
        }
    }

    fn check_same_ambient(&self, other: &DegreeSlice) -> Result<(), AlgebraError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    /// The canonical remainder of `v` modulo the subspace: all pivot
    /// coordinates cleared. Linear in `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let terms: Vec<(Scalar, &SparseVec)> = v
            .entries()
            .iter()
            .filter_map(|(i, c)| self.rows.get(i).map(|r| (-c, r)))
            .collect();
        if terms.is_empty() {
            return v.clone();
        }
        let one = self.field.one();
        linear_combination(std::iter::once((one, v)).chain(terms))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> Result<bool, AlgebraError> {
        self.check_len(&v)?;
        let r = self.reduce(&v);
        let Some((p, _)) = r.pivot() else {
            return Ok(false);
        };
        let new_row = r.normalized();
        // only rows with a smaller pivot can have an entry in column p
        for row in self.rows.range_mut(..p).map(|(_, r)| r) {
            if let Some(c) = row.get(p) {
                let c = -c;
                *row = row.add_scaled(&c, &new_row);
            }
        }
        self.rows.insert(p, new_row);
        Ok(true)
    }

    pub fn contains_slice(&self, other: &DegreeSlice) -> bool {
        other.rows.values().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &DegreeSlice) -> Result<DegreeSlice, AlgebraError> {
        self.check_same_ambient(other)?;
        let mut s = self.clone();
        for r in other.rows.values() {
            s.insert(r.clone())?;
        }
        Ok(s)
    }

    /// `self ∩ other`, from the kernel of `(a, b) ↦ Σ a_i u_i + Σ b_j v_j`.
    pub fn intersect(&self, other: &DegreeSlice) -> Result<DegreeSlice, AlgebraError> {
        self.check_same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.degree, self.ambient_dim, self.field));
        }
        let mine: Vec<&SparseVec> = self.rows.values().collect();
        let images: Vec<SparseVec> = self.rows.values().chain(other.rows.values()).cloned().collect();
        let kernel = kernel_vectors(&images, None, self.field);
        let r = self.rows.len();
        let vectors = kernel.into_iter().map(|combo| {
            linear_combination(
                combo
                    .entries()
                    .iter()
                    .filter(|(i, _)| *i < r)
                    .map(|(i, c)| (c.clone(), mine[*i])),
            )
        });
        Self::span(self.degree, self.ambient_dim, self.field, vectors)
    }

    /// `dim(self / sub)` for `sub ⊆ self`.
    pub fn quotient_dim(&self, sub: &DegreeSlice) -> Result<usize, AlgebraError> {
        self.check_same_ambient(sub)?;
        if !self.contains_slice(sub) {
            return Err(AlgebraError::Precondition(
                "quotient by a subspace that is not contained".into(),
            ));
        }
        Ok(self.rank() - sub.rank())
    }

    /// Rows of `self` (in pivot order) that extend a basis of `sub` to a basis
    /// of `sub + self`. Used for minimal generator extraction.
    pub fn complement_rows(&self, sub: &DegreeSlice) -> Result<Vec<SparseVec>, AlgebraError> {
        self.check_same_ambient(sub)?;
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for r in self.rows.values() {
            if acc.insert(r.clone())? {
                out.push(r.clone());
            }
        }
        Ok(out)
    }

    /// Coordinates of the quotient `ambient / self`: the non-pivot columns.
    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.is_pivot(*c)).collect()
    }
}

/// Basis of `{c : Σ c_i images_i ∈ modulo}` (`modulo = None` means zero),
/// expressed in source coordinates. Each returned vector has a distinct
/// largest index, so the list is linearly independent.
pub fn kernel_vectors(images: &[SparseVec], modulo: Option<&DegreeSlice>, field: Field) -> Vec<SparseVec> {
    let mut pivots: HashMap<usize, (SparseVec, SparseVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for (k, image) in images.iter().enumerate() {
        let mut img = match modulo {
            Some(m) => m.reduce(image),
            None => image.clone(),
        };
        let mut combo = SparseVec::unit(k, field);
        while let Some((p, c)) = img.pivot() {
            let Some((prow, pcombo)) = pivots.get(&p) else {
                break;
            };
            let c = -c;
            img = img.add_scaled(&c, prow);
            combo = combo.add_scaled(&c, pcombo);
        }
        match img.pivot() {
            None => kernel.push(combo),
            Some((p, c)) => {
                let inv = c.inverse().expect("nonzero pivot");
                pivots.insert(p, (img.scale(&inv), combo.scale(&inv)));
            }
        }
    }
    kernel
}

/// Null space of the linear map sending source basis vector `i` to
/// `images[i]` (the rows of the map's matrix), as a slice of the source.
pub fn kernel_of_map(degree: u32, images: &[SparseVec], field: Field) -> Result<DegreeSlice, AlgebraError> {
    kernel_modulo(degree, images, None, field)
}

/// Kernel of the composite `source → target → target / modulo`.
pub fn kernel_modulo(
    degree: u32,
    images: &[SparseVec],
    modulo: Option<&DegreeSlice>,
    field: Field,
) -> Result<DegreeSlice, AlgebraError> {
    DegreeSlice::span(degree, images.len(), field, kernel_vectors(images, modulo, field))
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[SparseVec], field: Field) -> usize {
    let n = vectors.len();
    n - kernel_vectors(vectors, None, field).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn v(vals: &[i64]) -> SparseVec {
        SparseVec::from_dense(&vals.iter().map(|&x| Q.from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn empty_span_is_zero() {
        let s = DegreeSlice::span(0, 3, Q, Vec::new()).unwrap();
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn dependent_rows_collapse() {
        let s = DegreeSlice::span(1, 3, Q, vec![v(&[1, 2, 3]), v(&[2, 4, 6])]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.rows().next().unwrap().clone(), v(&[1, 2, 3]));
    }

    #[test]
    fn dimension_mismatch() {
        let err = DegreeSlice::span(1, 2, Q, vec![v(&[0, 0, 1])]).unwrap_err();
        assert!(matches!(err, AlgebraError::DimensionMismatch { .. }));
        let a = DegreeSlice::zero(1, 2, Q);
        let b = DegreeSlice::zero(1, 3, Q);
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn rref_is_canonical() {
        let a = DegreeSlice::span(0, 3, Q, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let b = DegreeSlice::span(0, 3, Q, vec![v(&[1, 2, 1]), v(&[1, 0, -1])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows().next().unwrap().clone(), v(&[1, 0, -1]));
    }

    #[test]
    fn intersections() {
        let u = DegreeSlice::span(0, 3, Q, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let zero = DegreeSlice::zero(0, 3, Q);
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert_eq!(u.intersect(&zero).unwrap().rank(), 0);
        let w = DegreeSlice::span(0, 3, Q, vec![v(&[1, 1, 1]), v(&[0, 0, 1])]).unwrap();
        let i = u.intersect(&w).unwrap();
        assert_eq!(i.rank(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
    }

    #[test]
    fn kernels() {
        let id: Vec<SparseVec> = (0..3).map(|i| SparseVec::unit(i, Q)).collect();
        assert_eq!(kernel_of_map(0, &id, Q).unwrap().rank(), 0);
        let zero_map = vec![SparseVec::zero(); 3];
        assert!(kernel_of_map(0, &zero_map, Q).unwrap().is_full());
        let m = vec![v(&[1, 2]), v(&[2, 4]), v(&[0, 1])];
        let k = kernel_of_map(0, &m, Q).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&v(&[2, -1, 0])));
    }

    #[test]
    fn kernel_modulo_subspace() {
        let target_sub = DegreeSlice::span(0, 2, Q, vec![v(&[1, 0])]).unwrap();
        let m = vec![v(&[5, 0]), v(&[1, 1])];
        let k = kernel_modulo(0, &m, Some(&target_sub), Q).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&v(&[1, 0])));
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<SparseVec>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, cols), 0..rows)
            .prop_map(|m| m.iter().map(|r| v(r)).collect())
    }

    proptest! {
        #[test]
        fn modular_dimension_formula(a in arb_matrix(5, 5), b in arb_matrix(5, 5)) {
            let u = DegreeSlice::span(0, 5, Q, a).unwrap();
            let w = DegreeSlice::span(0, 5, Q, b).unwrap();
            let i = u.intersect(&w).unwrap();
            let s = u.sum(&w).unwrap();
            prop_assert_eq!(i.rank() + s.rank(), u.rank() + w.rank());
            prop_assert!(u.contains_slice(&i) && w.contains_slice(&i));
        }

        #[test]
        fn span_contains_its_generators(a in arb_matrix(6, 4)) {
            let s = DegreeSlice::span(0, 4, Q, a.clone()).unwrap();
            for r in &a {
                prop_assert!(s.contains(r));
            }
            let again = DegreeSlice::span(0, 4, Q, s.rows().cloned()).unwrap();
            prop_assert_eq!(again, s);
        }

        #[test]
        fn kernel_plus_rank_is_source_dim(a in arb_matrix(7, 4)) {
            let k = kernel_of_map(0, &a, Q).unwrap();
            prop_assert_eq!(k.rank() + rank(&a, Q), a.len());
            for row in k.rows() {
                let img = linear_combination(row.entries().iter().map(|(i, c)| (c.clone(), &a[*i])));
                prop_assert!(img.is_zero());
            }
        }

        #[test]
        fn rational_rank_matches_large_prime_rank(a in arb_matrix(6, 6)) {
            let p = Field::Prime(crate::scalar::DEFAULT_VERIFY_PRIME);
            let modp: Vec<SparseVec> = a
                .iter()
                .map(|r| SparseVec::from_entries(r.entries().iter().map(|(i, c)| (*i, p.from_rational(&c.to_ratio()).unwrap()))))
                .collect();
            prop_assert_eq!(rank(&a, Q), rank(&modp, p));
        }
    }
}
