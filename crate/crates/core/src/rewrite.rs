//! Degree-truncated completion of a homogeneous presentation.
//!
//! Rules `lead → lower` are produced degree by degree. At each degree the
//! defining relations and the overlap ambiguities of that degree are reduced
//! against the existing rules and row-reduced together, so the rule set stays
//! inter-reduced. Because every relation is homogeneous, nothing added at a
//! higher degree can change a normal form in a lower one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::AlgebraError;
use crate::linalg::{DegreeSlice, SparseVec};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::word::{Letter, Word};

/// `lead → lower`, with every word of `lower` smaller than `lead`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Word,
    pub lower: NcPolynomial,
}

impl RewriteRule {
    pub fn degree(&self) -> u32 {
        self.lead.degree()
    }

    /// `lead - lower`, the ideal element the rule encodes.
    pub fn as_polynomial(&self) -> NcPolynomial {
        let mut p = self.lower.neg();
        p.add_term(self.lead.clone(), self.lower.field().one());
        p
    }
}

/// Bookkeeping from a completion run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompletionLog {
    /// Defining relations that reduced to zero (redundant given earlier ones).
    pub redundant_relations: usize,
    /// Relations above the truncation degree; they cannot affect the window.
    pub relations_above_truncation: usize,
    /// Overlap ambiguities examined, and how many resolved without a new rule.
    pub ambiguities: usize,
    pub resolved_ambiguities: usize,
    /// New rules per degree.
    pub rules_by_degree: BTreeMap<u32, usize>,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    presentation: AlgebraPresentation,
    weights: Vec<u32>,
    rules: Vec<RewriteRule>,
    lead_index: HashMap<Vec<Letter>, usize>,
    lead_lengths: BTreeSet<usize>,
    truncation: u32,
    complete_up_to: u32,
    log: CompletionLog,
}

impl RewriteSystem {
    /// Completes `pres` through degree `max_degree`.
    pub fn complete(pres: &AlgebraPresentation, max_degree: u32) -> RewriteSystem {
        let weights = pres.weights();
        let mut sys = RewriteSystem {
            presentation: pres.clone(),
            weights,
            rules: Vec::new(),
            lead_index: HashMap::new(),
            lead_lengths: BTreeSet::new(),
            truncation: max_degree,
            complete_up_to: 0,
            log: CompletionLog::default(),
        };
        let mut relations: BTreeMap<u32, Vec<NcPolynomial>> = BTreeMap::new();
        for r in pres.relations() {
            let d = r.homogeneous_degree().expect("validated presentation");
            if d <= max_degree {
                relations.entry(d).or_default().push(r.clone());
            } else {
                sys.log.relations_above_truncation += 1;
            }
        }
        let mut ambiguities: BTreeMap<u32, Vec<NcPolynomial>> = BTreeMap::new();
        for d in 1..=max_degree {
            let rels = relations.remove(&d).unwrap_or_default();
            let amb = ambiguities.remove(&d).unwrap_or_default();
            sys.log.ambiguities += amb.len();
            let first_new = sys.rules.len();
            sys.add_degree(d, rels, amb);
            for i in first_new..sys.rules.len() {
                for j in 0..=i {
                    for s in sys
                        .overlaps(i, j)
                        .into_iter()
                        .chain(if i != j { sys.overlaps(j, i) } else { Vec::new() })
                    {
                        if let Some(e) = s.1.max_degree() {
                            debug_assert_eq!(e, s.0);
                        }
                        if s.0 <= max_degree {
                            ambiguities.entry(s.0).or_default().push(s.1);
                        }
                    }
                }
            }
            sys.complete_up_to = d;
        }
        sys
    }

    /// Reduces the degree-`d` candidates, row-reduces them with the largest
    /// word as pivot and turns each row into a rule.
    fn add_degree(&mut self, d: u32, relations: Vec<NcPolynomial>, ambiguities: Vec<NcPolynomial>) {
        let n_rel = relations.len();
        let reduced: Vec<NcPolynomial> = relations
            .iter()
            .chain(ambiguities.iter())
            .map(|p| self.reduce(p))
            .collect();
        let mut words: Vec<Word> = reduced
            .iter()
            .flat_map(|p| p.terms().map(|(w, _)| w.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        words.reverse();
        let column: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let field = self.presentation.field();
        let mut slice = DegreeSlice::zero(d, words.len(), field);
        for (k, p) in reduced.iter().enumerate() {
            let v = SparseVec::from_entries(p.terms().map(|(w, c)| (column[w], c.clone())));
            let grew = slice.insert(v).expect("columns in range");
            if !grew {
                if k < n_rel {
                    self.log.redundant_relations += 1;
                } else {
                    self.log.resolved_ambiguities += 1;
                }
            }
        }
        let new_rules: Vec<RewriteRule> = slice
            .rows()
            .map(|row| {
                let (pivot, _) = row.pivot().expect("nonzero row");
                let lower = NcPolynomial::from_terms(
                    field,
                    row.entries().iter().skip(1).map(|(i, c)| (words[*i].clone(), -c)),
                );
                RewriteRule {
                    lead: words[pivot].clone(),
                    lower,
                }
            })
            .collect();
        if !new_rules.is_empty() {
            self.log.rules_by_degree.insert(d, new_rules.len());
        }
        for rule in new_rules {
            self.lead_lengths.insert(rule.lead.len());
            self.lead_index.insert(rule.lead.letters().to_vec(), self.rules.len());
            self.rules.push(rule);
        }
    }

    /// Overlap ambiguities `a·b·c` with `lead_i = a·b`, `lead_j = b·c`, all
    /// of `a, b, c` nonempty. Returns `(degree, lower_i·c − a·lower_j)`.
    fn overlaps(&self, i: usize, j: usize) -> Vec<(u32, NcPolynomial)> {
        let (ri, rj) = (&self.rules[i], &self.rules[j]);
        let (li, lj) = (ri.lead.letters(), rj.lead.letters());
        let mut out = Vec::new();
        for k in 1..li.len().min(lj.len()) {
            if li[li.len() - k..] == lj[..k] {
                let a = ri.lead.factor(0, li.len() - k, &self.weights);
                let c = rj.lead.factor(k, lj.len(), &self.weights);
                let s = ri
                    .lower
                    .sandwich(&Word::empty(), &c)
                    .sub(&rj.lower.sandwich(&a, &Word::empty()))
                    .expect("same field");
                out.push((ri.lead.degree() + c.degree(), s));
            }
        }
        out
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn truncation_degree(&self) -> u32 {
        self.truncation
    }

    pub fn complete_up_to(&self) -> u32 {
        self.complete_up_to
    }

    pub fn log(&self) -> &CompletionLog {
        &self.log
    }

    /// Leftmost rule lead occurring in `letters`, as `(position, rule)`.
    fn find_lead(&self, letters: &[Letter]) -> Option<(usize, &RewriteRule)> {
        for start in 0..letters.len() {
            for &l in &self.lead_lengths {
                if start + l > letters.len() {
                    break;
                }
                if let Some(&r) = self.lead_index.get(&letters[start..start + l]) {
                    return Some((start, &self.rules[r]));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_lead(w.letters()).is_none()
    }

    /// True if no rule lead is a suffix of `w` (for extending normal words).
    fn has_no_lead_suffix(&self, letters: &[Letter]) -> bool {
        self.lead_lengths
            .iter()
            .all(|&l| l > letters.len() || !self.lead_index.contains_key(&letters[letters.len() - l..]))
    }

    fn reduce(&self, p: &NcPolynomial) -> NcPolynomial {
        let mut work = p.clone();
        let mut out = NcPolynomial::zero(p.field());
        while let Some((w, c)) = work.pop_largest() {
            match self.find_lead(w.letters()) {
                Some((pos, rule)) => {
                    let left = w.factor(0, pos, &self.weights);
                    let right = w.factor(pos + rule.lead.len(), w.len(), &self.weights);
                    for (lw, lc) in rule.lower.terms() {
                        work.add_term(lw.sandwich(&left, &right), &c * lc);
                    }
                }
                None => out.add_term(w, c),
            }
        }
        out
    }

    /// The unique representative of `p` modulo the relations that contains
    /// no rule lead as a factor.
    pub fn normal_form(&self, p: &NcPolynomial) -> Result<NcPolynomial, AlgebraError> {
        if p.field() != self.presentation.field() {
            return Err(AlgebraError::FieldMismatch(self.presentation.field(), p.field()));
        }
        if let Some(d) = p.max_degree() {
            if d > self.complete_up_to {
                return Err(AlgebraError::TruncationExceeded {
                    requested: d,
                    limit: self.complete_up_to,
                });
            }
        }
        Ok(self.reduce(p))
    }

    /// Normal words of every degree `0..=n`, each list in monomial order.
    pub fn normal_words_through(&self, n: u32) -> Result<Vec<Vec<Word>>, AlgebraError> {
        if n > self.complete_up_to {
            return Err(AlgebraError::TruncationExceeded {
                requested: n,
                limit: self.complete_up_to,
            });
        }
        let mut by_degree: Vec<Vec<Word>> = vec![Vec::new(); n as usize + 1];
        by_degree[0].push(Word::empty());
        for d in 1..=n {
            let mut words = Vec::new();
            for (l, &w) in self.weights.iter().enumerate() {
                if w > d {
                    continue;
                }
                for prefix in &by_degree[(d - w) as usize] {
                    let cand = prefix.concat(&Word::letter(l as Letter, &self.weights));
                    if self.has_no_lead_suffix(cand.letters()) {
                        words.push(cand);
                    }
                }
            }
            words.sort();
            by_degree[d as usize] = words;
        }
        Ok(by_degree)
    }

    /// Degree-`n` normal words in monomial order.
    pub fn basis(&self, n: u32) -> Result<Vec<Word>, AlgebraError> {
        Ok(self.normal_words_through(n)?.pop().unwrap_or_default())
    }

    /// `dim A_n` for `n = 0..=max_degree`.
    pub fn hilbert_function(&self, max_degree: u32) -> Result<Vec<usize>, AlgebraError> {
        Ok(self.normal_words_through(max_degree)?.iter().map(Vec::len).collect())
    }
}
