//! Twisting maps `τ: B ⊗ A → A ⊗ B` and the twisted tensor products they
//! define.
//!
//! `τ` is given on pairs of generators. Its values on longer basis tensors
//! follow from the two multiplicativity identities
//!
//! ```text
//! τ(b ⊗ a a') = (μ_A ⊗ 1)(1 ⊗ τ)(τ ⊗ 1)(b ⊗ a ⊗ a')
//! τ(b b' ⊗ a) = (1 ⊗ μ_B)(τ ⊗ 1)(1 ⊗ τ)(b ⊗ b' ⊗ a)
//! ```
//!
//! Terms with a degree-zero factor feed back into the same total degree, so
//! each degree is solved as a linear system. Afterwards both identities are
//! re-evaluated on every factorization; a disagreement is reported as a
//! conflict naming the tensor and the two values.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::criterion::{
    coherence_report, default_battery, Assertion, CoherenceReport, DecompositionInput, FreeExtension, ReportOptions,
};
use crate::error::AlgebraError;
use crate::linalg::{kernel_vectors, linear_combination, DegreeSlice, SparseVec};
use crate::module::{GradedIdeal, Side};
use crate::poly::NcPolynomial;
use crate::presentation::{AlgebraPresentation, Generator};
use crate::scalar::{Field, Scalar};
use crate::word::{Letter, Word};

/// An element of `A ⊗ B`, as a combination of `a ⊗ b` for words `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    field: Field,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorElement {
    pub fn zero(field: Field) -> Self {
        TensorElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn display(&self, left: &[String], right: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = if negative { -c } else { c.clone() };
            out.push_str(match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("{} # {}", a.display(left), b.display(right)));
        }
        out
    }
}

/// `τ` on generator pairs, for a left factor `A` and right factor `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub name: String,
    pub left: AlgebraPresentation,
    pub right: AlgebraPresentation,
    /// `(b, a, τ(b ⊗ a))` with `b` a generator of `B`, `a` one of `A`.
    pub values: Vec<(Letter, Letter, TensorElement)>,
}

impl TwistSpec {
    pub fn value(&self, b: Letter, a: Letter) -> Option<&TensorElement> {
        self.values
            .iter()
            .find(|(x, y, _)| *x == b && *y == a)
            .map(|(_, _, v)| v)
    }

    /// Exactly one homogeneous value of the right degree per generator pair.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.left.field() != self.right.field() {
            return Err(AlgebraError::FieldMismatch(self.left.field(), self.right.field()));
        }
        let (lw, rw) = (self.left.weights(), self.right.weights());
        let (ln, rn) = (self.left.names(), self.right.names());
        for b in 0..rw.len() as Letter {
            for a in 0..lw.len() as Letter {
                let count = self.values.iter().filter(|(x, y, _)| *x == b && *y == a).count();
                if count != 1 {
                    return Err(AlgebraError::Precondition(format!(
                        "tau({}, {}) must be given exactly once, found {count}",
                        rn[b as usize], ln[a as usize]
                    )));
                }
            }
        }
        for (b, a, v) in &self.values {
            if *b as usize >= rw.len() || *a as usize >= lw.len() {
                return Err(AlgebraError::UnknownLetter((*b).max(*a) as usize));
            }
            if v.field() != self.left.field() {
                return Err(AlgebraError::FieldMismatch(self.left.field(), v.field()));
            }
            let d = rw[*b as usize] + lw[*a as usize];
            for (x, y, _) in v.terms() {
                if x.letters().iter().any(|&l| l as usize >= lw.len())
                    || y.letters().iter().any(|&l| l as usize >= rw.len())
                {
                    return Err(AlgebraError::Precondition(
                        "tensor term uses an unknown generator".into(),
                    ));
                }
                if x.degree() + y.degree() != d {
                    return Err(AlgebraError::Precondition(format!(
                        "tau({}, {}) must have degree {d}",
                        rn[*b as usize], ln[*a as usize]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Coordinates on `(A ⊗ B)_n = ⊕_p A_p ⊗ B_{n-p}`, blocks ordered by `p`,
/// each block indexed `i * dim B_{n-p} + j`.
#[derive(Clone, Copy)]
struct Tensor<'a> {
    left: &'a GradedAlgebra,
    right: &'a GradedAlgebra,
}

impl Tensor<'_> {
    fn offsets(&self, n: u32) -> Vec<usize> {
        let mut out = Vec::with_capacity(n as usize + 2);
        let mut acc = 0;
        for p in 0..=n {
            out.push(acc);
            acc += self.left.dim(p) * self.right.dim(n - p);
        }
        out.push(acc);
        out
    }

    fn dim(&self, n: u32) -> usize {
        *self.offsets(n).last().expect("nonempty")
    }

    fn at(&self, off: &[usize], n: u32, p: u32, i: usize, j: usize) -> usize {
        off[p as usize] + i * self.right.dim(n - p) + j
    }

    fn locate(&self, off: &[usize], n: u32, idx: usize) -> (u32, usize, usize) {
        let p = off.partition_point(|&o| o <= idx) - 1;
        let width = self.right.dim(n - p as u32);
        let local = idx - off[p];
        (p as u32, local / width, local % width)
    }

    /// `u ⊗ v` for `u ∈ A_p`, `v ∈ B_q`.
    fn pure(&self, p: u32, u: &SparseVec, q: u32, v: &SparseVec) -> SparseVec {
        let n = p + q;
        let off = self.offsets(n);
        SparseVec::from_entries(u.entries().iter().flat_map(|(i, c)| {
            let off = &off;
            v.entries()
                .iter()
                .map(move |(j, d)| (self.at(off, n, p, *i, *j), c * d))
        }))
    }

    fn coords(&self, e: &TensorElement, n: u32) -> Result<SparseVec, AlgebraError> {
        let field = e.field();
        let mut parts = Vec::new();
        for (a, b, c) in e.terms() {
            if a.degree() + b.degree() != n {
                return Err(AlgebraError::NotHomogeneous);
            }
            let u = self
                .left
                .coords(&NcPolynomial::monomial(a.clone(), field.one()), a.degree())?;
            let v = self
                .right
                .coords(&NcPolynomial::monomial(b.clone(), field.one()), b.degree())?;
            parts.push(self.pure(a.degree(), &u, b.degree(), &v).scale(c));
        }
        Ok(sum(parts))
    }

    /// `u · x` on the left factor, `u ∈ A_m`, `x ∈ (A ⊗ B)_n`.
    fn left_mul(&self, m: u32, u: &SparseVec, n: u32, x: &SparseVec) -> Result<SparseVec, AlgebraError> {
        let off = self.offsets(n);
        let mut parts = Vec::new();
        for (idx, c) in x.entries() {
            let (p, i, j) = self.locate(&off, n, *idx);
            let field = self.left.field();
            let prod = self.left.multiply(m, u, p, &SparseVec::unit(i, field))?;
            parts.push(self.pure(m + p, &prod, n - p, &SparseVec::unit(j, field)).scale(c));
        }
        Ok(sum(parts))
    }

    /// `x · v` on the right factor, `v ∈ B_m`.
    fn right_mul(&self, n: u32, x: &SparseVec, m: u32, v: &SparseVec) -> Result<SparseVec, AlgebraError> {
        let off = self.offsets(n);
        let mut parts = Vec::new();
        for (idx, c) in x.entries() {
            let (p, i, j) = self.locate(&off, n, *idx);
            let field = self.left.field();
            let prod = self.right.multiply(n - p, &SparseVec::unit(j, field), m, v)?;
            parts.push(self.pure(p, &SparseVec::unit(i, field), n - p + m, &prod).scale(c));
        }
        Ok(sum(parts))
    }

    fn element(&self, n: u32, x: &SparseVec) -> TensorElement {
        let off = self.offsets(n);
        let mut e = TensorElement::zero(self.left.field());
        for (idx, c) in x.entries() {
            let (p, i, j) = self.locate(&off, n, *idx);
            let a = self.left.basis(p).expect("in window")[i].clone();
            let b = self.right.basis(n - p).expect("in window")[j].clone();
            e.add_term(a, b, c.clone());
        }
        e
    }

    fn display(&self, n: u32, x: &SparseVec) -> String {
        self.element(n, x).display(&self.left.names(), &self.right.names())
    }
}

fn sum(parts: Vec<SparseVec>) -> SparseVec {
    SparseVec::from_entries(parts.into_iter().flat_map(|p| p.entries().to_vec()))
}

/// Two different values for one tensor, reached along different
/// factorizations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictWitness {
    pub degree: u32,
    /// The evaluated tensor `tau(b, a)` with the factorization used, e.g.
    /// `tau(z, y*x)`.
    pub tensor: String,
    /// Value of the table on the normal form of the product.
    pub first: String,
    /// Value through the factorization.
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistOutcome<T> {
    Consistent(T),
    Conflict(ConflictWitness),
}

impl<T> TwistOutcome<T> {
    pub fn consistent(self) -> Option<T> {
        match self {
            TwistOutcome::Consistent(t) => Some(t),
            TwistOutcome::Conflict(_) => None,
        }
    }
}

type Key = (u32, usize, u32, usize);

/// `τ(b ⊗ a)` for all basis words with `deg b + deg a <= max_degree`.
#[derive(Clone, Debug)]
pub struct TwistTable {
    spec: TwistSpec,
    left: GradedAlgebra,
    right: GradedAlgebra,
    max_degree: u32,
    values: HashMap<Key, SparseVec>,
    identities_checked: usize,
}

impl TwistTable {
    pub fn left(&self) -> &GradedAlgebra {
        &self.left
    }

    pub fn right(&self) -> &GradedAlgebra {
        &self.right
    }

    pub fn spec(&self) -> &TwistSpec {
        &self.spec
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Number of multiplicativity evaluations that agreed.
    pub fn identities_checked(&self) -> usize {
        self.identities_checked
    }

    fn tensor(&self) -> Tensor<'_> {
        Tensor {
            left: &self.left,
            right: &self.right,
        }
    }

    /// `τ(b ⊗ a)` for the `bi`-th word of `B_q` and `ai`-th word of `A_p`.
    pub fn apply(&self, q: u32, bi: usize, p: u32, ai: usize) -> SparseVec {
        let t = self.tensor();
        let field = self.left.field();
        if q == 0 {
            return t.pure(p, &SparseVec::unit(ai, field), 0, &SparseVec::unit(0, field));
        }
        if p == 0 {
            return t.pure(0, &SparseVec::unit(0, field), q, &SparseVec::unit(bi, field));
        }
        self.values[&(q, bi, p, ai)].clone()
    }

    /// [`apply`](Self::apply) as a tensor of words.
    pub fn value(&self, q: u32, bi: usize, p: u32, ai: usize) -> TensorElement {
        self.tensor().element(q + p, &self.apply(q, bi, p, ai))
    }

    /// Bilinear extension of [`apply`](Self::apply).
    pub fn apply_vec(&self, q: u32, b: &SparseVec, p: u32, a: &SparseVec) -> SparseVec {
        let mut parts = Vec::new();
        for (bi, c) in b.entries() {
            for (ai, d) in a.entries() {
                parts.push(self.apply(q, *bi, p, *ai).scale(&(c * d)));
            }
        }
        sum(parts)
    }

    /// `τ(b ⊗ a) = (μ_A ⊗ 1)(1 ⊗ τ)(τ ⊗ 1)(b ⊗ a1 ⊗ a2)` evaluated from the table.
    fn through_left_factors(
        &self,
        q: u32,
        bi: usize,
        p1: u32,
        a1: &SparseVec,
        p2: u32,
        a2: &SparseVec,
    ) -> Result<SparseVec, AlgebraError> {
        let t = self.tensor();
        let field = self.left.field();
        let x = self.apply_vec(q, &SparseVec::unit(bi, field), p1, a1);
        let n = q + p1;
        let off = t.offsets(n);
        let mut parts = Vec::new();
        for (idx, c) in x.entries() {
            let (pp, i, j) = t.locate(&off, n, *idx);
            let qq = n - pp;
            let y = self.apply_vec(qq, &SparseVec::unit(j, field), p2, a2);
            parts.push(t.left_mul(pp, &SparseVec::unit(i, field), qq + p2, &y)?.scale(c));
        }
        Ok(sum(parts))
    }

    /// `τ(b1 b2 ⊗ a) = (1 ⊗ μ_B)(τ ⊗ 1)(1 ⊗ τ)(b1 ⊗ b2 ⊗ a)` from the table.
    fn through_right_factors(
        &self,
        q1: u32,
        b1: &SparseVec,
        q2: u32,
        b2: &SparseVec,
        p: u32,
        ai: usize,
    ) -> Result<SparseVec, AlgebraError> {
        let t = self.tensor();
        let field = self.left.field();
        let x = self.apply_vec(q2, b2, p, &SparseVec::unit(ai, field));
        let n = q2 + p;
        let off = t.offsets(n);
        let mut parts = Vec::new();
        for (idx, c) in x.entries() {
            let (pp, i, j) = t.locate(&off, n, *idx);
            let qb = n - pp;
            let y = self.apply_vec(q1, b1, pp, &SparseVec::unit(i, field));
            parts.push(t.right_mul(q1 + pp, &y, qb, &SparseVec::unit(j, field))?.scale(c));
        }
        Ok(sum(parts))
    }
}

/// Extends `spec` to all basis tensors of total degree `<= max_degree` and
/// checks both multiplicativity identities on every factorization.
pub fn extend_twist(spec: &TwistSpec, max_degree: u32) -> Result<TwistOutcome<TwistTable>, AlgebraError> {
    spec.validate()?;
    let left = GradedAlgebra::new(&spec.left, max_degree);
    let right = GradedAlgebra::new(&spec.right, max_degree);
    let field = left.field();
    for (alg, side) in [(&left, "left"), (&right, "right")] {
        for l in 0..alg.num_generators() as Letter {
            let w = Word::letter(l, alg.weights());
            if w.degree() <= max_degree && alg.word_index(&w).is_none() {
                return Err(AlgebraError::Precondition(format!(
                    "generator `{}` of the {side} factor is not a normal word",
                    alg.names()[l as usize]
                )));
            }
        }
    }
    let mut table = TwistTable {
        spec: spec.clone(),
        left,
        right,
        max_degree,
        values: HashMap::new(),
        identities_checked: 0,
    };
    for n in 2..=max_degree {
        if let Some(w) = solve_degree(&mut table, n, field)? {
            return Ok(TwistOutcome::Conflict(w));
        }
        if let Some(w) = check_degree(&mut table, n)? {
            return Ok(TwistOutcome::Conflict(w));
        }
    }
    Ok(TwistOutcome::Consistent(table))
}

fn letter_index(alg: &GradedAlgebra, l: Letter) -> usize {
    alg.word_index(&Word::letter(l, alg.weights()))
        .expect("generators are normal")
}

/// One defining equation per unknown `τ(b ⊗ a)` of total degree `n`, solved
/// together.
fn solve_degree(table: &mut TwistTable, n: u32, field: Field) -> Result<Option<ConflictWitness>, AlgebraError> {
    let (left, right) = (table.left.clone(), table.right.clone());
    let t = Tensor {
        left: &left,
        right: &right,
    };
    let mut unknowns: Vec<Key> = Vec::new();
    for q in 1..n {
        let p = n - q;
        for bi in 0..right.dim(q) {
            for ai in 0..left.dim(p) {
                unknowns.push((q, bi, p, ai));
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(None);
    }
    let position: HashMap<Key, usize> = unknowns.iter().enumerate().map(|(k, u)| (*u, k)).collect();
    let u_count = unknowns.len();
    let width = t.dim(n);
    let mut rows = Vec::new();
    for (k, &(q, bi, p, ai)) in unknowns.iter().enumerate() {
        let b = &right.basis(q)?[bi];
        let a = &left.basis(p)?[ai];
        let mut coeffs: Vec<(usize, Scalar)> = vec![(k, field.one())];
        let known;
        if a.len() == 1 && b.len() == 1 {
            let value = table
                .spec
                .value(b.letters()[0], a.letters()[0])
                .expect("validated spec");
            known = t.coords(value, n)?;
        } else if a.len() >= 2 {
            let l = a.letters()[0];
            let wl = left.letter_weight(l);
            let rest = a.factor(1, a.len(), left.weights());
            let (pr, ri) = (rest.degree(), left.word_index(&rest).expect("suffix of a normal word"));
            let x = table.apply(q, bi, wl, letter_index(&left, l));
            let off = t.offsets(q + wl);
            let mut parts = Vec::new();
            for (idx, c) in x.entries() {
                let (pp, i, j) = t.locate(&off, q + wl, *idx);
                let qq = q + wl - pp;
                if pp == 0 && qq > 0 {
                    coeffs.push((position[&(qq, j, pr, ri)], -c));
                } else {
                    let y = table.apply(qq, j, pr, ri);
                    parts.push(t.left_mul(pp, &SparseVec::unit(i, field), qq + pr, &y)?.scale(c));
                }
            }
            known = sum(parts);
        } else {
            let l = b.letters()[0];
            let wl = right.letter_weight(l);
            let li = letter_index(&right, l);
            let rest = b.factor(1, b.len(), right.weights());
            let (qr, ri) = (rest.degree(), right.word_index(&rest).expect("suffix of a normal word"));
            let x = table.apply(qr, ri, p, ai);
            let off = t.offsets(qr + p);
            let mut parts = Vec::new();
            for (idx, c) in x.entries() {
                let (pp, i, j) = t.locate(&off, qr + p, *idx);
                let qb = qr + p - pp;
                if qb == 0 && pp > 0 {
                    coeffs.push((position[&(wl, li, pp, i)], -c));
                } else {
                    let y = table.apply(wl, li, pp, i);
                    parts.push(t.right_mul(wl + pp, &y, qb, &SparseVec::unit(j, field))?.scale(c));
                }
            }
            known = sum(parts);
        }
        let row = SparseVec::from_entries(
            coeffs
                .into_iter()
                .chain(known.entries().iter().map(|(i, c)| (u_count + i, c.clone()))),
        );
        rows.push(row);
    }
    let system = DegreeSlice::span(n, u_count + width, field, rows.iter().cloned())?;
    let pivots = system.pivots();
    let solved = pivots.iter().filter(|&&p| p < u_count).count();
    if solved < u_count {
        let label = |k: usize| -> Result<String, AlgebraError> {
            let (q, bi, p, ai) = unknowns[k];
            Ok(format!(
                "tau({}, {})",
                right.basis(q)?[bi].display(&right.names()),
                left.basis(p)?[ai].display(&left.names())
            ))
        };
        if pivots.iter().any(|&p| p >= u_count) {
            // A combination of defining equations whose unknowns cancel but
            // whose known parts do not.
            let lhs: Vec<SparseVec> = rows.iter().map(|r| r.restrict(0..u_count)).collect();
            for c in kernel_vectors(&lhs, None, field) {
                let rhs = linear_combination(c.entries().iter().map(|(r, k)| (k.clone(), &rows[*r])))
                    .restrict(u_count..u_count + width);
                if rhs.is_zero() {
                    continue;
                }
                let (first_row, _) = c.pivot().expect("kernel vectors are nonzero");
                return Ok(Some(ConflictWitness {
                    degree: n,
                    tensor: label(first_row)?,
                    first: "0".into(),
                    second: t.display(n, &rhs),
                }));
            }
            unreachable!("an inconsistent system has a contradicting combination");
        }
        let free = (0..u_count)
            .find(|c| !system.is_pivot(*c))
            .expect("some column is free");
        return Err(AlgebraError::Underdetermined(format!("{} in degree {n}", label(free)?)));
    }
    for row in system.rows() {
        let (p, _) = row.pivot().expect("nonzero");
        let value = row.restrict(u_count..u_count + width);
        table.values.insert(unknowns[p], value);
    }
    Ok(None)
}

/// Re-evaluates both identities on every factorization landing in degree `n`.
fn check_degree(table: &mut TwistTable, n: u32) -> Result<Option<ConflictWitness>, AlgebraError> {
    let (left, right) = (&table.left, &table.right);
    let field = left.field();
    let t = table.tensor();
    let (na, nb) = (left.names(), right.names());
    let mut checked = 0;
    for q in 1..n {
        for p1 in 1..(n - q) {
            let p2 = n - q - p1;
            for bi in 0..right.dim(q) {
                for i1 in 0..left.dim(p1) {
                    for i2 in 0..left.dim(p2) {
                        let (a1, a2) = (&left.basis(p1)?[i1], &left.basis(p2)?[i2]);
                        let prod = left.word_product(a1, a2)?;
                        let first = table.apply_vec(q, &SparseVec::unit(bi, field), p1 + p2, &prod);
                        let second = table.through_left_factors(
                            q,
                            bi,
                            p1,
                            &SparseVec::unit(i1, field),
                            p2,
                            &SparseVec::unit(i2, field),
                        )?;
                        checked += 1;
                        if first != second {
                            return Ok(Some(ConflictWitness {
                                degree: n,
                                tensor: format!(
                                    "tau({}, {}*{})",
                                    right.basis(q)?[bi].display(&nb),
                                    a1.display(&na),
                                    a2.display(&na)
                                ),
                                first: t.display(n, &first),
                                second: t.display(n, &second),
                            }));
                        }
                    }
                }
            }
        }
    }
    for p in 1..n {
        for q1 in 1..(n - p) {
            let q2 = n - p - q1;
            for ai in 0..left.dim(p) {
                for j1 in 0..right.dim(q1) {
                    for j2 in 0..right.dim(q2) {
                        let (b1, b2) = (&right.basis(q1)?[j1], &right.basis(q2)?[j2]);
                        let prod = right.word_product(b1, b2)?;
                        let first = table.apply_vec(q1 + q2, &prod, p, &SparseVec::unit(ai, field));
                        let second = table.through_right_factors(
                            q1,
                            &SparseVec::unit(j1, field),
                            q2,
                            &SparseVec::unit(j2, field),
                            p,
                            ai,
                        )?;
                        checked += 1;
                        if first != second {
                            return Ok(Some(ConflictWitness {
                                degree: n,
                                tensor: format!(
                                    "tau({}*{}, {})",
                                    b1.display(&nb),
                                    b2.display(&nb),
                                    left.basis(p)?[ai].display(&na)
                                ),
                                first: t.display(n, &first),
                                second: t.display(n, &second),
                            }));
                        }
                    }
                }
            }
        }
    }
    table.identities_checked += checked;
    Ok(None)
}

/// Result of evaluating an axiom on every basis tuple of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub max_degree: u32,
    pub evaluated: usize,
    pub first_failure: Option<String>,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// The hexagon identity on all `b ⊗ b' ⊗ a ⊗ a'` of total degree `<= upto`,
/// units included, evaluated directly from the table.
pub fn check_hexagon(table: &TwistTable, upto: u32) -> Result<AxiomCheck, AlgebraError> {
    let upto = upto.min(table.max_degree);
    let (left, right) = (&table.left, &table.right);
    let field = left.field();
    let t = table.tensor();
    let mut tuples = Vec::new();
    for n in 0..=upto {
        for q1 in 0..=n {
            for q2 in 0..=(n - q1) {
                for p1 in 0..=(n - q1 - q2) {
                    let p2 = n - q1 - q2 - p1;
                    for b in 0..right.dim(q1) {
                        for b2 in 0..right.dim(q2) {
                            for a in 0..left.dim(p1) {
                                for a2 in 0..left.dim(p2) {
                                    tuples.push((q1, b, q2, b2, p1, a, p2, a2));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let unit = |i: usize| SparseVec::unit(i, field);
    let failures = tuples
        .par_iter()
        .map(
            |&(q1, b, q2, b2, p1, a, p2, a2)| -> Result<Option<String>, AlgebraError> {
                let bb = right.word_product(&right.basis(q1)?[b], &right.basis(q2)?[b2])?;
                let aa = left.word_product(&left.basis(p1)?[a], &left.basis(p2)?[a2])?;
                let lhs = table.apply_vec(q1 + q2, &bb, p1 + p2, &aa);
                // b ⊗ τ(b2 ⊗ a) ⊗ a2, then τ ⊗ τ, then the middle τ, then multiply
                let x = table.apply(q2, b2, p1, a);
                let nx = q2 + p1;
                let offx = t.offsets(nx);
                let mut parts = Vec::new();
                for (ix, cx) in x.entries() {
                    let (pi, i, j) = t.locate(&offx, nx, *ix);
                    let qj = nx - pi;
                    let y1 = table.apply(q1, b, pi, i);
                    let y2 = table.apply(qj, j, p2, a2);
                    let (n1, n2) = (q1 + pi, qj + p2);
                    let (off1, off2) = (t.offsets(n1), t.offsets(n2));
                    for (e1, c1) in y1.entries() {
                        let (pa1, i1, j1) = t.locate(&off1, n1, *e1);
                        let qb1 = n1 - pa1;
                        for (e2, c2) in y2.entries() {
                            let (pa2, i2, j2) = t.locate(&off2, n2, *e2);
                            let qb2 = n2 - pa2;
                            let z = table.apply(qb1, j1, pa2, i2);
                            let nz = qb1 + pa2;
                            let offz = t.offsets(nz);
                            for (e3, c3) in z.entries() {
                                let (pa3, i3, j3) = t.locate(&offz, nz, *e3);
                                let qb3 = nz - pa3;
                                let alpha = left.multiply(pa1, &unit(i1), pa3, &unit(i3))?;
                                let beta = right.multiply(qb3, &unit(j3), qb2, &unit(j2))?;
                                let coeff = &(cx * c1) * &(c2 * c3);
                                parts.push(t.pure(pa1 + pa3, &alpha, qb3 + qb2, &beta).scale(&coeff));
                            }
                        }
                    }
                }
                let rhs = sum(parts);
                if lhs == rhs {
                    return Ok(None);
                }
                let (na, nb) = (left.names(), right.names());
                Ok(Some(format!(
                    "({} * {}) # ({} * {}): {} vs {}",
                    right.basis(q1)?[b].display(&nb),
                    right.basis(q2)?[b2].display(&nb),
                    left.basis(p1)?[a].display(&na),
                    left.basis(p2)?[a2].display(&na),
                    t.display(q1 + q2 + p1 + p2, &lhs),
                    t.display(q1 + q2 + p1 + p2, &rhs)
                )))
            },
        )
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(AxiomCheck {
        max_degree: upto,
        evaluated: tuples.len(),
        first_failure: failures.into_iter().flatten().next(),
    })
}

/// Associativity of `μ_τ((a ⊗ b)(a' ⊗ b')) = a τ(b ⊗ a') b'` on basis
/// triples of total degree `<= upto`, computed without any rewriting of the
/// product algebra.
pub fn check_associativity(table: &TwistTable, upto: u32) -> Result<AxiomCheck, AlgebraError> {
    let upto = upto.min(table.max_degree);
    let t = table.tensor();
    let mu = |n1: u32, x: &SparseVec, n2: u32, y: &SparseVec| -> Result<SparseVec, AlgebraError> {
        let (off1, off2) = (t.offsets(n1), t.offsets(n2));
        let field = table.left.field();
        let mut parts = Vec::new();
        for (e1, c1) in x.entries() {
            let (pa, ia, jb) = t.locate(&off1, n1, *e1);
            for (e2, c2) in y.entries() {
                let (pa2, ia2, jb2) = t.locate(&off2, n2, *e2);
                let mid = table.apply(n1 - pa, jb, pa2, ia2);
                let left_part = t.left_mul(pa, &SparseVec::unit(ia, field), n1 - pa + pa2, &mid)?;
                let full = t.right_mul(n1 - pa + pa2 + pa, &left_part, n2 - pa2, &SparseVec::unit(jb2, field))?;
                parts.push(full.scale(&(c1 * c2)));
            }
        }
        Ok(sum(parts))
    };
    let mut triples = Vec::new();
    for n1 in 0..=upto {
        for n2 in 0..=(upto - n1) {
            for n3 in 0..=(upto - n1 - n2) {
                for i in 0..t.dim(n1) {
                    for j in 0..t.dim(n2) {
                        for k in 0..t.dim(n3) {
                            triples.push((n1, i, n2, j, n3, k));
                        }
                    }
                }
            }
        }
    }
    let field = table.left.field();
    let failures =
        triples
            .par_iter()
            .map(|&(n1, i, n2, j, n3, k)| -> Result<Option<String>, AlgebraError> {
                let (x, y, z) = (
                    SparseVec::unit(i, field),
                    SparseVec::unit(j, field),
                    SparseVec::unit(k, field),
                );
                let xy_z = mu(n1 + n2, &mu(n1, &x, n2, &y)?, n3, &z)?;
                let x_yz = mu(n1, &x, n2 + n3, &mu(n2, &y, n3, &z)?)?;
                Ok((xy_z != x_yz)
                    .then(|| format!("({})({})({})", t.display(n1, &x), t.display(n2, &y), t.display(n3, &z))))
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(AxiomCheck {
        max_degree: upto,
        evaluated: triples.len(),
        first_failure: failures.into_iter().flatten().next(),
    })
}

/// `A ⊗_τ B` presented on the generators of `A` followed by those of `B`.
#[derive(Clone, Debug)]
pub struct TwistedProduct {
    pub presentation: AlgebraPresentation,
    pub algebra: GradedAlgebra,
    pub hilbert: Vec<usize>,
    pub expected_hilbert: Vec<usize>,
    /// `dim (A ⊗_τ B)_n = Σ dim A_i · dim B_{n-i}` through the window.
    pub hilbert_identity: bool,
    /// Rewriting `b·a` in the product reproduces the table entry for entry.
    pub table_matches_rewriting: bool,
}

/// Generators of `A` then `B`; relations of both plus `b·a - τ(b ⊗ a)` for
/// every generator pair. Built without extending `τ`.
pub fn product_presentation(spec: &TwistSpec) -> Result<AlgebraPresentation, AlgebraError> {
    let field = spec.left.field();
    let shift = spec.left.generators().len() as Letter;
    let mut gens: Vec<Generator> = spec.left.generators().to_vec();
    gens.extend(spec.right.generators().iter().cloned());
    let weights: Vec<u32> = gens.iter().map(|g| g.weight).collect();
    let lift_left = |w: &Word| Word::new(w.letters().to_vec(), &weights);
    let lift_right = |w: &Word| Word::new(w.letters().iter().map(|l| l + shift).collect(), &weights);
    let mut relations = Vec::new();
    for r in spec.left.relations() {
        relations.push(NcPolynomial::from_terms(
            field,
            r.terms().map(|(w, c)| (lift_left(w), c.clone())),
        ));
    }
    for r in spec.right.relations() {
        relations.push(NcPolynomial::from_terms(
            field,
            r.terms().map(|(w, c)| (lift_right(w), c.clone())),
        ));
    }
    for (b, a, v) in &spec.values {
        let mut rel = NcPolynomial::monomial(Word::new(vec![b + shift, *a], &weights), field.one());
        for (x, y, c) in v.terms() {
            rel.add_term(lift_left(x).concat(&lift_right(y)), -c);
        }
        if !rel.is_zero() {
            relations.push(rel);
        }
    }
    AlgebraPresentation::new(spec.name.clone(), field, gens, relations)
}

/// Extends the twist, then builds and completes the product presentation.
pub fn build_product(
    spec: &TwistSpec,
    max_degree: u32,
) -> Result<TwistOutcome<(TwistTable, TwistedProduct)>, AlgebraError> {
    let table = match extend_twist(spec, max_degree)? {
        TwistOutcome::Consistent(t) => t,
        TwistOutcome::Conflict(w) => return Ok(TwistOutcome::Conflict(w)),
    };
    let presentation = product_presentation(spec)?;
    let algebra = GradedAlgebra::new(&presentation, max_degree);
    let (left, right) = (&table.left, &table.right);
    let hilbert = algebra.hilbert_function();
    let expected_hilbert: Vec<usize> = (0..=max_degree)
        .map(|n| (0..=n).map(|i| left.dim(i) * right.dim(n - i)).sum())
        .collect();
    let hilbert_identity = hilbert == expected_hilbert;
    let table_matches_rewriting = hilbert_identity && matches_rewriting(&table, &algebra)?;
    Ok(TwistOutcome::Consistent((
        table,
        TwistedProduct {
            presentation,
            algebra,
            hilbert,
            expected_hilbert,
            hilbert_identity,
            table_matches_rewriting,
        },
    )))
}

/// Checks `b·a = Σ c a'·b'` in the product for every table entry
/// `τ(b ⊗ a) = Σ c a' ⊗ b'`, both sides reduced to normal form.
fn matches_rewriting(table: &TwistTable, product: &GradedAlgebra) -> Result<bool, AlgebraError> {
    let (left, right) = (&table.left, &table.right);
    let t = table.tensor();
    let field = left.field();
    let shift = left.num_generators() as Letter;
    let weights = product.weights().to_vec();
    let join = |a: &Word, b: &Word, a_first: bool| -> Word {
        let lifted: Vec<Letter> = b.letters().iter().map(|l| l + shift).collect();
        let letters = if a_first {
            [a.letters(), &lifted[..]].concat()
        } else {
            [&lifted[..], a.letters()].concat()
        };
        Word::new(letters, &weights)
    };
    for n in 2..=table.max_degree {
        for q in 1..n {
            let p = n - q;
            for (bi, b) in right.basis(q)?.iter().enumerate() {
                for (ai, a) in left.basis(p)?.iter().enumerate() {
                    let lhs = product.coords(&NcPolynomial::monomial(join(a, b, false), field.one()), n)?;
                    let value = t.element(n, &table.apply(q, bi, p, ai));
                    let mut rhs = NcPolynomial::zero(field);
                    for (x, y, c) in value.terms() {
                        rhs.add_term(join(x, y, true), c.clone());
                    }
                    if product.coords(&rhs, n)? != lhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The quadratic family over `k[x,y]` and `k[z]` with `τ(z ⊗ x) = 0` and
/// `τ(z ⊗ y) = α y^2 ⊗ 1 + β y ⊗ z + γ 1 ⊗ z^2`.
pub fn family_spec(field: Field, alpha: Scalar, beta: Scalar, gamma: Scalar) -> Result<TwistSpec, AlgebraError> {
    let left = AlgebraPresentation::new(
        "k[x,y]",
        field,
        vec![Generator::new("x", 1), Generator::new("y", 1)],
        vec![NcPolynomial::from_terms(
            field,
            [
                (Word::new(vec![1, 0], &[1, 1]), field.one()),
                (Word::new(vec![0, 1], &[1, 1]), -field.one()),
            ],
        )],
    )?;
    let right = AlgebraPresentation::free("k[z]", field, vec![Generator::new("z", 1)])?;
    let w = |v: Vec<Letter>| Word::new(v, &[1, 1]);
    let z = |k: usize| Word::new(vec![0; k], &[1]);
    let mut tzy = TensorElement::zero(field);
    tzy.add_term(w(vec![1, 1]), z(0), alpha);
    tzy.add_term(w(vec![1]), z(1), beta);
    tzy.add_term(w(vec![]), z(2), gamma);
    Ok(TwistSpec {
        name: "A".into(),
        left,
        right,
        values: vec![(0, 0, TensorElement::zero(field)), (0, 1, tzy)],
    })
}

/// Gate for the family pipeline: left factor a commutative polynomial ring
/// on two degree-one generators, right factor a polynomial ring on one, and
/// `τ(z ⊗ x) = 0` for the first generator `x`.
pub fn check_family_shape(spec: &TwistSpec) -> Result<(), AlgebraError> {
    spec.validate()?;
    let left = GradedAlgebra::new(&spec.left, 3);
    let right = GradedAlgebra::new(&spec.right, 3);
    let ok_weights = spec.left.weights() == [1, 1] && spec.right.weights() == [1];
    if !ok_weights || left.hilbert_function() != [1, 2, 3, 4] || right.hilbert_function() != [1, 1, 1, 1] {
        return Err(AlgebraError::Precondition(
            "the family needs k[x,y] on the left and k[z] on the right".into(),
        ));
    }
    let xy = left.word_product(&Word::new(vec![0], &[1, 1]), &Word::new(vec![1], &[1, 1]))?;
    let yx = left.word_product(&Word::new(vec![1], &[1, 1]), &Word::new(vec![0], &[1, 1]))?;
    if xy != yx {
        return Err(AlgebraError::Precondition("the left factor must be commutative".into()));
    }
    if !spec.value(0, 0).expect("validated").is_zero() {
        return Err(AlgebraError::Precondition(format!(
            "tau({}, {}) must vanish",
            spec.right.names()[0],
            spec.left.names()[0]
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub product_relations: Vec<String>,
    pub hilbert: Vec<usize>,
    pub hilbert_identity: bool,
    pub table_matches_rewriting: bool,
    pub report: CoherenceReport,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum FamilyOutcome {
    Conflict(ConflictWitness),
    Report(Box<FamilyReport>),
}

/// Builds `A = k[x,y] ⊗_τ k[z]`, forms `I = xA`, and runs the decomposition
/// checks (`C` generated by `y`, `D = B z`, lift `z`) with the default battery.
pub fn run_family(spec: &TwistSpec, opts: &ReportOptions, battery_limit: usize) -> Result<FamilyOutcome, AlgebraError> {
    check_family_shape(spec)?;
    let d = opts.max_degree;
    let (_, product) = match build_product(spec, d)? {
        TwistOutcome::Consistent(x) => x,
        TwistOutcome::Conflict(w) => return Ok(FamilyOutcome::Conflict(w)),
    };
    let p = &product.presentation;
    let field = p.field();
    let gen = |i: Letter| NcPolynomial::monomial(Word::letter(i, &p.weights()), field.one());
    let (x, y, z) = (gen(0), gen(1), gen(2));
    let two_sided = GradedIdeal::generate(&product.algebra, Side::TwoSided, std::slice::from_ref(&x), d)?;
    let right = GradedIdeal::generate(&product.algebra, Side::Right, std::slice::from_ref(&x), d)?;
    if two_sided.space() != right.space() {
        return Err(AlgebraError::SelfTest("xA is not a two-sided ideal".into()));
    }
    let ext = FreeExtension::new(p, &[x], d)?;
    if !ext.right_freeness().holds_in_window {
        return Err(AlgebraError::SelfTest("xA is not free as a right module".into()));
    }
    let decomposition = DecompositionInput {
        subalgebra_generators: vec![y],
        ideal_generators: vec![(z.clone(), z)],
        assertions: vec![
            Assertion {
                claim: "B graded left coherent".into(),
                citation: "B is a quadratic algebra on two generators with one relation; \
                           coherence of such algebras is an external theorem"
                    .into(),
            },
            Assertion {
                claim: "C graded left Noetherian".into(),
                citation: "C is generated by one element, so it is a quotient of a polynomial ring in one variable"
                    .into(),
            },
        ],
    };
    let battery = default_battery(ext.a(), battery_limit);
    let report = coherence_report(&ext, &battery, Some(&decomposition), &[], opts)?;
    let names = p.names();
    Ok(FamilyOutcome::Report(Box::new(FamilyReport {
        product_relations: p.relations().iter().map(|r| r.display(&names).to_string()).collect(),
        hilbert: product.hilbert,
        hilbert_identity: product.hilbert_identity,
        table_matches_rewriting: product.table_matches_rewriting,
        report,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn family(a: i64, b: i64, c: i64) -> TwistSpec {
        family_spec(Q, Q.from_i64(a), Q.from_i64(b), Q.from_i64(c)).unwrap()
    }

    /// `τ(z ⊗ x) = x ⊗ z` and `τ(z ⊗ y) = y ⊗ z`: the ordinary tensor product.
    fn flip() -> TwistSpec {
        let mut s = family(0, 1, 0);
        let mut v = TensorElement::zero(Q);
        v.add_term(Word::new(vec![0], &[1, 1]), Word::new(vec![0], &[1]), Q.one());
        s.values[0] = (0, 0, v);
        s
    }

    #[test]
    fn zero_family_member_gives_the_three_variable_example() {
        let (table, product) = build_product(&family(0, 0, 0), 8).unwrap().consistent().unwrap();
        assert!(product.hilbert_identity && product.table_matches_rewriting);
        let expected: Vec<usize> = (0..=8).map(|n| (n + 1) * (n + 2) / 2).collect();
        assert_eq!(product.hilbert, expected);
        let names = product.presentation.names();
        let rels: Vec<String> = product
            .presentation
            .relations()
            .iter()
            .map(|r| r.display(&names).to_string())
            .collect();
        assert_eq!(rels, vec!["y*x - x*y", "z*x", "z*y"]);
        assert!(check_hexagon(&table, 6).unwrap().holds());
    }

    #[test]
    fn flip_gives_polynomial_ring() {
        let (table, product) = build_product(&flip(), 7).unwrap().consistent().unwrap();
        let expected: Vec<usize> = (0..=7).map(|n| (n + 1) * (n + 2) / 2).collect();
        assert_eq!(product.hilbert, expected);
        assert!(product.table_matches_rewriting);
        // τ(z^2 ⊗ x*y) = x*y ⊗ z^2
        let (ln, rn) = (table.left().names(), table.right().names());
        let zz = table.right().word_index(&Word::new(vec![0, 0], &[1])).unwrap();
        let xy = table.left().word_index(&Word::new(vec![0, 1], &[1, 1])).unwrap();
        let v = table.apply(2, zz, 2, xy);
        assert_eq!(table.tensor().display(4, &v), "x*y # z^2");
        let _ = (ln, rn);
        assert!(check_associativity(&table, 5).unwrap().holds());
    }

    #[test]
    fn alpha_nonzero_is_a_conflict() {
        // z·(yx) = z·(xy) forces α x y^2 = 0
        let out = extend_twist(&family(1, 0, 0), 6).unwrap();
        let TwistOutcome::Conflict(w) = out else {
            panic!("expected a conflict");
        };
        assert_eq!(w.degree, 3);
        assert_ne!(w.first, w.second);
        assert!(matches!(
            extend_twist(&family(1, 1, 1), 6).unwrap(),
            TwistOutcome::Conflict(_)
        ));
    }

    #[test]
    fn consistent_members_pass_every_axiom() {
        for (a, b, c) in [(0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 2, -1)] {
            let (table, product) = build_product(&family(a, b, c), 6).unwrap().consistent().unwrap();
            assert!(product.hilbert_identity, "{a} {b} {c}");
            assert!(product.table_matches_rewriting, "{a} {b} {c}");
            assert!(check_hexagon(&table, 6).unwrap().holds(), "{a} {b} {c}");
            assert!(check_associativity(&table, 5).unwrap().holds(), "{a} {b} {c}");
        }
    }

    #[test]
    fn missing_value_is_rejected() {
        let mut s = family(0, 0, 0);
        s.values.pop();
        assert!(matches!(s.validate(), Err(AlgebraError::Precondition(_))));
    }

    #[test]
    fn family_gate_rejects_nonzero_tau_on_x() {
        assert!(matches!(
            check_family_shape(&flip()),
            Err(AlgebraError::Precondition(_))
        ));
        assert!(check_family_shape(&family(0, 1, 0)).is_ok());
    }

    #[test]
    fn family_pipeline_is_evidence_positive() {
        let opts = ReportOptions {
            max_degree: 6,
            homological_bound: 2,
            strict_vanishing: true,
        };
        let FamilyOutcome::Report(r) = run_family(&family(0, 1, 0), &opts, 16).unwrap() else {
            panic!("consistent member");
        };
        let dec = r.report.decomposition.as_ref().unwrap();
        assert!(dec.all_pass && dec.direct);
        assert_eq!(r.report.verdict, crate::criterion::Status::EvidencePositive);
        assert!(matches!(
            run_family(&family(1, 1, 1), &opts, 16).unwrap(),
            FamilyOutcome::Conflict(_)
        ));
    }
}
