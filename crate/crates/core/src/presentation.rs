//! Presentations `k<generators> / (relations)` of connected graded algebras.

use std::collections::HashSet;

use crate::error::AlgebraError;
use crate::poly::NcPolynomial;
use crate::scalar::Field;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        Generator {
            name: name.into(),
            weight,
        }
    }
}

/// Generators with positive weights and homogeneous relations. The generator
/// order is the letter precedence of the monomial order (first = smallest).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    name: String,
    field: Field,
    generators: Vec<Generator>,
    relations: Vec<NcPolynomial>,
}

impl AlgebraPresentation {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        generators: Vec<Generator>,
        relations: Vec<NcPolynomial>,
    ) -> Result<Self, AlgebraError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            if g.weight == 0 {
                return Err(AlgebraError::ZeroWeight(g.name.clone()));
            }
        }
        let weights: Vec<u32> = generators.iter().map(|g| g.weight).collect();
        for (i, r) in relations.iter().enumerate() {
            if r.field() != field {
                return Err(AlgebraError::FieldMismatch(field, r.field()));
            }
            if r.is_zero() {
                return Err(AlgebraError::ZeroRelation(i));
            }
            if r.homogeneous_degree().is_none() {
                return Err(AlgebraError::InhomogeneousRelation(i));
            }
            for (w, _) in r.terms() {
                if let Some(&l) = w.letters().iter().find(|&&l| l as usize >= generators.len()) {
                    return Err(AlgebraError::UnknownLetter(l as usize));
                }
                if Word::new(w.letters().to_vec(), &weights).degree() != w.degree() {
                    return Err(AlgebraError::Precondition(
                        "relation word built with different generator weights".into(),
                    ));
                }
            }
        }
        Ok(AlgebraPresentation {
            name: name.into(),
            field,
            generators,
            relations,
        })
    }

    /// The free algebra on the given generators.
    pub fn free(name: impl Into<String>, field: Field, generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        Self::new(name, field, generators, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[NcPolynomial] {
        &self.relations
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<Letter> {
        self.generators.iter().position(|g| g.name == name).map(|i| i as Letter)
    }

    /// Builds a word from generator names.
    pub fn word(&self, names: &[&str]) -> Result<Word, AlgebraError> {
        let letters = names
            .iter()
            .map(|n| {
                self.generator_index(n)
                    .ok_or_else(|| AlgebraError::Precondition(format!("unknown generator `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(letters, &self.weights()))
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations
            .iter()
            .filter_map(NcPolynomial::homogeneous_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same generators, additional relations (the presentation of a quotient).
    pub fn with_extra_relations(
        &self,
        name: impl Into<String>,
        extra: impl IntoIterator<Item = NcPolynomial>,
    ) -> Result<Self, AlgebraError> {
        let mut relations = self.relations.clone();
        relations.extend(extra);
        Self::new(name, self.field, self.generators.clone(), relations)
    }

    /// Reinterprets every coefficient in another field.
    pub fn change_field(&self, field: Field) -> Result<Self, AlgebraError> {
        let relations = self
            .relations
            .iter()
            .map(|r| r.change_field(field))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.name.clone(), field, self.generators.clone(), relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(names: &[&str]) -> Vec<Generator> {
        names.iter().map(|n| Generator::new(*n, 1)).collect()
    }

    #[test]
    fn validates_generators() {
        assert!(matches!(
            AlgebraPresentation::free("F", Field::Rational, gens(&["x", "x"])),
            Err(AlgebraError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            AlgebraPresentation::free("F", Field::Rational, vec![Generator::new("x", 0)]),
            Err(AlgebraError::ZeroWeight(_))
        ));
    }

    #[test]
    fn rejects_inhomogeneous_and_zero_relations() {
        let f = Field::Rational;
        let x = Word::new(vec![0], &[1]);
        let xx = Word::new(vec![0, 0], &[1]);
        let bad = NcPolynomial::from_terms(f, [(x, f.one()), (xx, f.one())]);
        assert_eq!(
            AlgebraPresentation::new("Bad", f, gens(&["x"]), vec![bad]),
            Err(AlgebraError::InhomogeneousRelation(0))
        );
        assert_eq!(
            AlgebraPresentation::new("Bad", f, gens(&["x"]), vec![NcPolynomial::zero(f)]),
            Err(AlgebraError::ZeroRelation(0))
        );
    }
}
