//! A completed algebra with its degree-wise normal-word bases and letter
//! multiplication tables, the ambient data for every slice computation.

use std::collections::HashMap;

use crate::error::AlgebraError;
use crate::linalg::{linear_combination, SparseVec};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::rewrite::RewriteSystem;
use crate::scalar::{Field, Scalar};
use crate::word::{Letter, Word};

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    system: RewriteSystem,
    bases: Vec<Vec<Word>>,
    index: Vec<HashMap<Vec<Letter>, usize>>,
    /// `left[l][n][i]`: coordinates of `l * basis(n)[i]` in degree `n + wt(l)`.
    left: Vec<Vec<Vec<SparseVec>>>,
    right: Vec<Vec<Vec<SparseVec>>>,
}

impl GradedAlgebra {
    /// Completes `pres` through `max_degree` and tabulates everything.
    pub fn new(pres: &AlgebraPresentation, max_degree: u32) -> Self {
        Self::from_system(RewriteSystem::complete(pres, max_degree))
    }

    pub fn from_system(system: RewriteSystem) -> Self {
        let d = system.complete_up_to();
        let bases = system.normal_words_through(d).expect("within completion");
        let index: Vec<HashMap<Vec<Letter>, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, w)| (w.letters().to_vec(), i)).collect())
            .collect();
        let mut alg = GradedAlgebra {
            system,
            bases,
            index,
            left: Vec::new(),
            right: Vec::new(),
        };
        let weights = alg.system.weights().to_vec();
        for (l, &w) in weights.iter().enumerate() {
            let lw = Word::letter(l as Letter, &weights);
            let mut left = Vec::new();
            let mut right = Vec::new();
            for n in 0..=d {
                if n + w > d {
                    break;
                }
                let (mut ln, mut rn) = (Vec::new(), Vec::new());
                for b in &alg.bases[n as usize] {
                    ln.push(alg.word_product_coords(&lw.concat(b)));
                    rn.push(alg.word_product_coords(&b.concat(&lw)));
                }
                left.push(ln);
                right.push(rn);
            }
            alg.left.push(left);
            alg.right.push(right);
        }
        alg
    }

    fn word_product_coords(&self, w: &Word) -> SparseVec {
        let field = self.field();
        let nf = self
            .system
            .normal_form(&NcPolynomial::monomial(w.clone(), field.one()))
            .expect("within completion");
        self.coords_of_normal(&nf, w.degree())
    }

    fn coords_of_normal(&self, p: &NcPolynomial, n: u32) -> SparseVec {
        SparseVec::from_entries(p.terms().map(|(w, c)| (self.index[n as usize][w.letters()], c.clone())))
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.system.presentation()
    }

    pub fn name(&self) -> &str {
        self.presentation().name()
    }

    pub fn field(&self) -> Field {
        self.presentation().field()
    }

    pub fn names(&self) -> Vec<String> {
        self.presentation().names()
    }

    pub fn weights(&self) -> &[u32] {
        self.system.weights()
    }

    pub fn num_generators(&self) -> usize {
        self.weights().len()
    }

    pub fn letter_weight(&self, l: Letter) -> u32 {
        self.weights()[l as usize]
    }

    /// Highest degree in which bases and products are known.
    pub fn max_degree(&self) -> u32 {
        self.system.complete_up_to()
    }

    fn check_degree(&self, n: u32) -> Result<(), AlgebraError> {
        if n > self.max_degree() {
            return Err(AlgebraError::TruncationExceeded {
                requested: n,
                limit: self.max_degree(),
            });
        }
        Ok(())
    }

    pub fn basis(&self, n: u32) -> Result<&[Word], AlgebraError> {
        self.check_degree(n)?;
        Ok(&self.bases[n as usize])
    }

    pub fn dim(&self, n: u32) -> usize {
        self.bases.get(n as usize).map_or(0, Vec::len)
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn word_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w.degree() as usize)?.get(w.letters()).copied()
    }

    pub fn normal_form(&self, p: &NcPolynomial) -> Result<NcPolynomial, AlgebraError> {
        self.system.normal_form(p)
    }

    /// Coordinates of a homogeneous element of degree `n` in the normal-word
    /// basis. The zero polynomial is accepted in any degree.
    pub fn coords(&self, p: &NcPolynomial, n: u32) -> Result<SparseVec, AlgebraError> {
        self.check_degree(n)?;
        if p.terms().any(|(w, _)| w.degree() != n) {
            return Err(AlgebraError::NotHomogeneous);
        }
        let nf = self.normal_form(p)?;
        Ok(self.coords_of_normal(&nf, n))
    }

    /// The element with coordinates `v` in degree `n`.
    pub fn element(&self, n: u32, v: &SparseVec) -> NcPolynomial {
        NcPolynomial::from_terms(
            self.field(),
            v.entries()
                .iter()
                .map(|(i, c)| (self.bases[n as usize][*i].clone(), c.clone())),
        )
    }

    /// `l * v` for `v` in degree `n`; requires `n + wt(l) <= max_degree`.
    pub fn left_letter(&self, l: Letter, n: u32, v: &SparseVec) -> Result<SparseVec, AlgebraError> {
        self.check_degree(n + self.letter_weight(l))?;
        let table = &self.left[l as usize][n as usize];
        Ok(linear_combination(
            v.entries().iter().map(|(i, c)| (c.clone(), &table[*i])),
        ))
    }

    /// `v * l` for `v` in degree `n`.
    pub fn right_letter(&self, l: Letter, n: u32, v: &SparseVec) -> Result<SparseVec, AlgebraError> {
        self.check_degree(n + self.letter_weight(l))?;
        let table = &self.right[l as usize][n as usize];
        Ok(linear_combination(
            v.entries().iter().map(|(i, c)| (c.clone(), &table[*i])),
        ))
    }

    /// `u * v` for a word `u` and `v` in degree `n`.
    pub fn left_word(&self, u: &Word, n: u32, v: &SparseVec) -> Result<SparseVec, AlgebraError> {
        let mut acc = v.clone();
        let mut deg = n;
        for &l in u.letters().iter().rev() {
            acc = self.left_letter(l, deg, &acc)?;
            deg += self.letter_weight(l);
        }
        Ok(acc)
    }

    /// `v * u` for a word `u` and `v` in degree `n`.
    pub fn right_word(&self, n: u32, v: &SparseVec, u: &Word) -> Result<SparseVec, AlgebraError> {
        let mut acc = v.clone();
        let mut deg = n;
        for &l in u.letters() {
            acc = self.right_letter(l, deg, &acc)?;
            deg += self.letter_weight(l);
        }
        Ok(acc)
    }

    /// Product of `a` (degree `m`) and `b` (degree `n`), in degree `m + n`.
    pub fn multiply(&self, m: u32, a: &SparseVec, n: u32, b: &SparseVec) -> Result<SparseVec, AlgebraError> {
        self.check_degree(m + n)?;
        let parts = a
            .entries()
            .iter()
            .map(|(i, c)| Ok((c.clone(), self.left_word(&self.bases[m as usize][*i], n, b)?)))
            .collect::<Result<Vec<(Scalar, SparseVec)>, AlgebraError>>()?;
        Ok(linear_combination(parts.iter().map(|(c, v)| (c.clone(), v))))
    }

    /// Coordinates of the product of two basis words.
    pub fn word_product(&self, u: &Word, v: &Word) -> Result<SparseVec, AlgebraError> {
        let vi = self
            .word_index(v)
            .ok_or_else(|| AlgebraError::Precondition("word is not a normal word".into()))?;
        self.left_word(u, v.degree(), &SparseVec::unit(vi, self.field()))
    }
}
