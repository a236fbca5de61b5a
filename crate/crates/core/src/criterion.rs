//! Coherence testing through a right-free extension `A → B = A/I`.
//!
//! For a finitely generated left ideal `J` of `A` the module
//! `Q = (I ∩ J)/(IJ)` is computed slice by slice together with its minimal
//! presentation over `B`. Two independent routes cross-check it: the homology
//! of `B ⊗_A` (a free resolution of `A/J`) in homological degrees one and
//! two, and the literal balanced tensor product `B ⊗_A A/J` against
//! `B / B.J`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::error::AlgebraError;
use crate::linalg::{kernel_modulo, kernel_of_map, linear_combination, rank, DegreeSlice, SparseVec};
use crate::module::{
    betti_table, count_by_degree, map_images_over, minimal_generators, products, syzygies, BettiTable, FreeModule,
    GradedIdeal, GradedSubspace, ModulePresentation, Side, Syzygies,
};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::word::Letter;

/// Highest degree for the literal tensor-product comparison. Its ambient
/// space grows like `n·dim B_n`, so it is capped independently of the window.
pub const TENSOR_CHECK_CAP: u32 = 8;

/// Whether `I` is free as a right `A`-module on its minimal right generators,
/// judged by dimension count within the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightFreeness {
    pub generators: Vec<String>,
    pub generator_degrees: Vec<u32>,
    pub ideal_dims: Vec<usize>,
    pub free_module_dims: Vec<usize>,
    pub holds_in_window: bool,
    /// False when new right generators keep appearing through the trailing
    /// half of the window, so the generating set may be infinite.
    pub generators_settled: bool,
}

/// `A`, `I`, `B = A/I` and the projection between normal-word coordinates.
#[derive(Clone, Debug)]
pub struct FreeExtension {
    a: GradedAlgebra,
    b: GradedAlgebra,
    ideal: GradedIdeal,
    /// `projection[n][i]`: image in `B_n` of the `i`-th normal word of `A_n`.
    projection: Vec<Vec<SparseVec>>,
    /// `lift[n][j]`: index in `A_n` of the `j`-th normal word of `B_n`.
    lift: Vec<Vec<usize>>,
    right_generators: Vec<(u32, SparseVec)>,
    right_freeness: RightFreeness,
}

/// First degree of the trailing half-window used for growth patterns.
pub fn trailing_from(max_degree: u32) -> u32 {
    max_degree.div_ceil(2) + 1
}

impl FreeExtension {
    /// `B = A / (ideal_generators)`, completed through `max_degree`.
    pub fn new(
        a_pres: &AlgebraPresentation,
        ideal_generators: &[NcPolynomial],
        max_degree: u32,
    ) -> Result<Self, AlgebraError> {
        let a = GradedAlgebra::new(a_pres, max_degree);
        let ideal = GradedIdeal::generate(&a, Side::TwoSided, ideal_generators, max_degree)?;
        if !ideal.slice(0).is_zero() {
            return Err(AlgebraError::Precondition("the ideal contains a unit".into()));
        }
        let extra: Vec<NcPolynomial> = ideal_generators.iter().filter(|g| !g.is_zero()).cloned().collect();
        let b_pres = a_pres.with_extra_relations(format!("{}/I", a_pres.name()), extra)?;
        let b = GradedAlgebra::new(&b_pres, max_degree);
        let field = a.field();

        let mut projection = Vec::new();
        let mut lift = Vec::new();
        for n in 0..=max_degree {
            let proj: Vec<SparseVec> = a
                .basis(n)?
                .iter()
                .map(|w| b.coords(&NcPolynomial::monomial(w.clone(), field.one()), n))
                .collect::<Result<_, _>>()?;
            let kernel = kernel_of_map(n, &proj, field)?;
            if &kernel != ideal.slice(n) {
                return Err(AlgebraError::SelfTest(format!(
                    "kernel of the projection differs from the ideal in degree {n}"
                )));
            }
            let l: Vec<usize> = b
                .basis(n)?
                .iter()
                .map(|w| {
                    a.word_index(w).ok_or_else(|| {
                        AlgebraError::SelfTest("a normal word of the quotient is not normal upstairs".into())
                    })
                })
                .collect::<Result<_, _>>()?;
            projection.push(proj);
            lift.push(l);
        }

        let right_generators = ideal.minimal_generators_as(&a, Side::Right)?;
        let names = a.names();
        let degrees: Vec<u32> = right_generators.iter().map(|(d, _)| *d).collect();
        let free_module_dims: Vec<usize> = (0..=max_degree)
            .map(|n| degrees.iter().filter(|&&d| d <= n).map(|&d| a.dim(n - d)).sum())
            .collect();
        let ideal_dims = ideal.dims();
        let counts = count_by_degree(&right_generators, max_degree);
        let right_freeness = RightFreeness {
            generators: right_generators
                .iter()
                .map(|(d, v)| a.element(*d, v).display(&names).to_string())
                .collect(),
            generator_degrees: degrees,
            holds_in_window: ideal_dims == free_module_dims,
            ideal_dims,
            free_module_dims,
            generators_settled: counts[trailing_from(max_degree) as usize..].contains(&0),
        };
        Ok(FreeExtension {
            a,
            b,
            ideal,
            projection,
            lift,
            right_generators,
            right_freeness,
        })
    }

    pub fn a(&self) -> &GradedAlgebra {
        &self.a
    }

    pub fn b(&self) -> &GradedAlgebra {
        &self.b
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.ideal
    }

    pub fn max_degree(&self) -> u32 {
        self.a.max_degree()
    }

    pub fn right_generators(&self) -> &[(u32, SparseVec)] {
        &self.right_generators
    }

    pub fn right_freeness(&self) -> &RightFreeness {
        &self.right_freeness
    }

    /// `π: A_n → B_n` on coordinates.
    pub fn project(&self, n: u32, v: &SparseVec) -> SparseVec {
        let table = &self.projection[n as usize];
        linear_combination(v.entries().iter().map(|(i, c)| (c.clone(), &table[*i])))
    }

    /// The normal-word lift `B_n → A_n` (a section of `π`).
    pub fn lift(&self, n: u32, v: &SparseVec) -> SparseVec {
        let table = &self.lift[n as usize];
        SparseVec::from_entries(v.entries().iter().map(|(j, c)| (table[*j], c.clone())))
    }

    /// The right action `b.a = b·π(a)` for `b ∈ B_m`, `a ∈ A_n`.
    pub fn right_act(&self, m: u32, b: &SparseVec, n: u32, a: &SparseVec) -> Result<SparseVec, AlgebraError> {
        let prod = self.a.multiply(m, &self.lift(m, b), n, a)?;
        Ok(self.project(m + n, &prod))
    }

    /// Componentwise `π` on a free module `⊕ A(-d_i) → ⊕ B(-d_i)`.
    pub fn project_free(&self, module: &FreeModule, n: u32, v: &SparseVec) -> SparseVec {
        let src = module.offsets(&self.a, n);
        let dst = module.offsets(&self.b, n);
        let parts: Vec<SparseVec> = (0..module.rank())
            .filter(|&i| module.shifts()[i] <= n)
            .map(|i| {
                let local = v.restrict(src[i]..src[i + 1]);
                self.project(n - module.shifts()[i], &local).shifted(dst[i])
            })
            .collect();
        let one = self.a.field().one();
        linear_combination(parts.iter().map(|p| (one.clone(), p)))
    }

    fn check_window(&self, d: u32) -> Result<(), AlgebraError> {
        if d > self.max_degree() {
            return Err(AlgebraError::TruncationExceeded {
                requested: d,
                limit: self.max_degree(),
            });
        }
        Ok(())
    }
}

/// `Q = (I ∩ J)/(IJ)` for one left ideal `J`, with its `B`-presentation.
#[derive(Clone, Debug)]
pub struct QModule {
    pub j: GradedIdeal,
    pub j_generators: Vec<(u32, SparseVec)>,
    pub intersection: GradedSubspace,
    pub product: GradedSubspace,
    pub dims: Vec<usize>,
    /// Minimal `B`-generators, as representatives in `(I ∩ J)_n ⊆ A_n`.
    pub generators: Vec<(u32, SparseVec)>,
    /// Kernel of `⊕ B(-deg m_j) → Q`, with its minimal generators.
    pub syzygies: Syzygies,
}

impl QModule {
    pub fn presentation(&self) -> ModulePresentation {
        ModulePresentation {
            generator_degrees: self.generators.iter().map(|(d, _)| *d).collect(),
            relations: self.syzygies.minimal_generators.clone(),
        }
    }
}

pub fn compute_q(ext: &FreeExtension, j_generators: &[NcPolynomial], max_degree: u32) -> Result<QModule, AlgebraError> {
    ext.check_window(max_degree)?;
    let (a, b) = (&ext.a, &ext.b);
    let field = a.field();
    let cyclic = FreeModule::cyclic();
    let j = GradedIdeal::generate(a, Side::Left, j_generators, max_degree)?;
    let j_min = j.minimal_generators(a)?;

    // (IJ)_n = Σ_r r·J_{n - deg r} over right generators r of I
    let mut product = Vec::new();
    let mut intersection = Vec::new();
    for n in 0..=max_degree {
        let mut vectors = Vec::new();
        for (e, r) in &ext.right_generators {
            if *e > n {
                continue;
            }
            for row in j.slice(n - e).rows() {
                vectors.push(a.multiply(*e, r, n - e, row)?);
            }
        }
        let ij = DegreeSlice::span(n, a.dim(n), field, vectors)?;
        let cap = ext.ideal.slice(n).intersect(j.slice(n))?;
        if !cap.contains_slice(&ij) {
            return Err(AlgebraError::SelfTest(format!(
                "IJ is not contained in I ∩ J in degree {n}"
            )));
        }
        product.push(ij);
        intersection.push(cap);
    }
    let product = GradedSubspace::new(product);
    let intersection = GradedSubspace::new(intersection);
    let dims: Vec<usize> = (0..=max_degree)
        .map(|n| intersection.slice(n).rank() - product.slice(n).rank())
        .collect();

    let per_degree = (0..=max_degree)
        .into_par_iter()
        .map(|n| {
            let mut dec = DegreeSlice::span(
                n,
                a.dim(n),
                field,
                products(a, &cyclic, Side::Left, intersection.slices(), n)?,
            )?;
            for row in product.slice(n).rows() {
                dec.insert(row.clone())?;
            }
            Ok(intersection
                .slice(n)
                .complement_rows(&dec)?
                .into_iter()
                .map(|v| (n, v))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let generators: Vec<(u32, SparseVec)> = per_degree.into_iter().flatten().collect();

    let source = FreeModule::new(generators.iter().map(|(d, _)| *d).collect());
    let images = map_images_over(b, &source, a, &cyclic, &generators, max_degree)?;
    let kernel = GradedSubspace::new(
        images
            .par_iter()
            .enumerate()
            .map(|(n, imgs)| kernel_modulo(n as u32, imgs, Some(product.slice(n as u32)), field))
            .collect::<Result<Vec<_>, AlgebraError>>()?,
    );
    let minimal = minimal_generators(b, &source, Side::Left, &kernel)?;
    Ok(QModule {
        j,
        j_generators: j_min,
        intersection,
        product,
        dims,
        generators,
        syzygies: Syzygies {
            source,
            kernel,
            minimal_generators: minimal,
        },
    })
}

/// `dim Tor_1^A(B, A/J)_n` and `dim Tor_2^A(B, A/J)_n`, from a minimal free
/// resolution of `A/J` over `A` tensored down to `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorDims {
    pub tor1: Vec<usize>,
    pub tor2: Vec<usize>,
}

/// Homology of `B ⊗ F_{i+1} → B ⊗ F_i → B ⊗ F_{i-1}` at the middle, where
/// `F_i → F_{i-1}` sends `e_k ↦ maps[k]` and `kernel` is its kernel upstairs.
fn tensored_homology(
    ext: &FreeExtension,
    source: &FreeModule,
    target: &FreeModule,
    maps: &[(u32, SparseVec)],
    kernel: &GradedSubspace,
    max_degree: u32,
) -> Result<Vec<usize>, AlgebraError> {
    let (a, b) = (&ext.a, &ext.b);
    let field = a.field();
    let images = map_images_over(b, source, a, target, maps, max_degree)?;
    images
        .par_iter()
        .enumerate()
        .map(|(n, imgs)| {
            let n = n as u32;
            let down: Vec<SparseVec> = imgs.iter().map(|v| ext.project_free(target, n, v)).collect();
            let cycles = down.len() - rank(&down, field);
            // boundaries: B ⊗ F_{i+1} maps onto the projection of ker(F_i → F_{i-1})
            let up: Vec<SparseVec> = kernel.slice(n).rows().map(|v| ext.project_free(source, n, v)).collect();
            Ok(cycles - rank(&up, field))
        })
        .collect()
}

pub fn tor_dims(ext: &FreeExtension, j_min: &[(u32, SparseVec)], max_degree: u32) -> Result<TorDims, AlgebraError> {
    ext.check_window(max_degree)?;
    let a = &ext.a;
    let cyclic = FreeModule::cyclic();
    let first = syzygies(a, &cyclic, None, j_min, max_degree)?;
    let tor1 = tensored_homology(ext, &first.source, &cyclic, j_min, &first.kernel, max_degree)?;
    let second = syzygies(a, &first.source, None, &first.minimal_generators, max_degree)?;
    let tor2 = tensored_homology(
        ext,
        &second.source,
        &first.source,
        &first.minimal_generators,
        &second.kernel,
        max_degree,
    )?;
    Ok(TorDims { tor1, tor2 })
}

/// The left ideal `B.J` of `B`, generated by the images of `J`'s generators.
pub fn b_dot_j(ext: &FreeExtension, j_min: &[(u32, SparseVec)], max_degree: u32) -> Result<GradedIdeal, AlgebraError> {
    let gens: Vec<NcPolynomial> = j_min
        .iter()
        .map(|(d, v)| ext.b.element(*d, &ext.project(*d, v)))
        .collect();
    GradedIdeal::generate(&ext.b, Side::Left, &gens, max_degree)
}

/// `dim (B ⊗_A A/J)_n` from the balanced tensor product itself: the span of
/// `B_p ⊗ (A/J)_q` over `p + q = n` modulo `(b.l) ⊗ m − b ⊗ (l m)`.
pub fn tensor_dims(ext: &FreeExtension, j: &GradedIdeal, upto: u32) -> Result<Vec<usize>, AlgebraError> {
    ext.check_window(upto)?;
    let (a, b) = (&ext.a, &ext.b);
    let field = a.field();
    // normal coordinates of A/J: non-pivot columns of J
    let quotient_cols: Vec<Vec<usize>> = (0..=upto).map(|q| j.slice(q).non_pivot_columns()).collect();
    let quotient_index: Vec<BTreeMap<usize, usize>> = quotient_cols
        .iter()
        .map(|cols| cols.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    (0..=upto)
        .into_par_iter()
        .map(|n| {
            let mut offsets = Vec::new();
            let mut total = 0;
            for p in 0..=n {
                offsets.push(total);
                total += b.dim(p) * quotient_cols[(n - p) as usize].len();
            }
            let at =
                |p: u32, bi: usize, mi: usize| offsets[p as usize] + bi * quotient_cols[(n - p) as usize].len() + mi;
            let mut relations = Vec::new();
            for l in 0..a.num_generators() as Letter {
                let w = a.letter_weight(l);
                if w > n {
                    continue;
                }
                for p in 0..=(n - w) {
                    let q = n - w - p;
                    let cols = &quotient_cols[q as usize];
                    // l·m for each basis vector m of (A/J)_q, reduced mod J
                    let moved: Vec<SparseVec> = cols
                        .iter()
                        .map(|&c| {
                            let v = a.left_letter(l, q, &SparseVec::unit(c, field))?;
                            Ok(j.slice(q + w).reduce(&v))
                        })
                        .collect::<Result<_, AlgebraError>>()?;
                    for bi in 0..b.dim(p) {
                        let bl = ext.right_act(
                            p,
                            &SparseVec::unit(bi, field),
                            w,
                            &a.coords(
                                &NcPolynomial::monomial(crate::word::Word::letter(l, a.weights()), field.one()),
                                w,
                            )?,
                        )?;
                        for (mi, lm) in moved.iter().enumerate() {
                            let mut entries: Vec<(usize, crate::scalar::Scalar)> = bl
                                .entries()
                                .iter()
                                .map(|(bj, c)| (at(p + w, *bj, mi), c.clone()))
                                .collect();
                            for (col, c) in lm.entries() {
                                let idx = quotient_index[(q + w) as usize][col];
                                entries.push((at(p, bi, idx), -c));
                            }
                            relations.push(SparseVec::from_entries(entries));
                        }
                    }
                }
            }
            Ok(total - rank(&relations, field))
        })
        .collect()
}

/// A hypothesis taken on trust, with its source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub claim: String,
    pub citation: String,
}

/// Input for the decomposition check `B = C + D`: generators of a subalgebra
/// `C` and of a left ideal `D` of `B`, each ideal generator with a lift `z`.
#[derive(Clone, Debug, Default)]
pub struct DecompositionInput {
    pub subalgebra_generators: Vec<NcPolynomial>,
    pub ideal_generators: Vec<(NcPolynomial, NcPolynomial)>,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilationCheck {
    pub lift: String,
    pub right_generator: String,
    pub product_is_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub quotient_dims: Vec<usize>,
    pub subalgebra_dims: Vec<usize>,
    pub ideal_dims: Vec<usize>,
    pub sum_dims: Vec<usize>,
    /// `B_n = C_n + D_n` in every degree of the window.
    pub spans: bool,
    /// The sum is direct in every degree.
    pub direct: bool,
    /// `D` is closed under left multiplication by generators.
    pub ideal_closed: bool,
    /// `z·g = 0` in `A` for each lift `z` and right generator `g` of `I`;
    /// this gives `zI = 0` because `I` is generated by the `g` as a right ideal.
    pub annihilation: Vec<AnnihilationCheck>,
    pub lifts_annihilate: bool,
    pub assertions: Vec<Assertion>,
    pub all_pass: bool,
}

pub fn check_decomposition(
    ext: &FreeExtension,
    input: &DecompositionInput,
    max_degree: u32,
) -> Result<DecompositionReport, AlgebraError> {
    ext.check_window(max_degree)?;
    let (a, b) = (&ext.a, &ext.b);
    let field = a.field();
    let names = a.names();

    // subalgebra: C_n = span of c·C_{n - deg c}
    let mut c_gens = Vec::new();
    for g in &input.subalgebra_generators {
        let nf = b.normal_form(g)?;
        if nf.is_zero() {
            continue;
        }
        let d = nf.homogeneous_degree().ok_or(AlgebraError::NotHomogeneous)?;
        if d == 0 {
            return Err(AlgebraError::Precondition(
                "subalgebra generators must have positive degree".into(),
            ));
        }
        c_gens.push((d, b.coords(&nf, d)?));
    }
    let mut c_slices: Vec<DegreeSlice> = vec![DegreeSlice::span(0, 1, field, [SparseVec::unit(0, field)])?];
    for n in 1..=max_degree {
        let mut vectors = Vec::new();
        for (d, g) in &c_gens {
            if *d <= n {
                for row in c_slices[(n - d) as usize].rows() {
                    vectors.push(b.multiply(*d, g, n - d, row)?);
                }
            }
        }
        c_slices.push(DegreeSlice::span(n, b.dim(n), field, vectors)?);
    }

    let mut d_gens = Vec::new();
    let mut annihilation = Vec::new();
    for (bar, lift) in &input.ideal_generators {
        let lift_nf = a.normal_form(lift)?;
        let bar_nf = b.normal_form(bar)?;
        if b.normal_form(&lift_nf)? != bar_nf {
            return Err(AlgebraError::Precondition(format!(
                "`{}` does not lift `{}`",
                lift_nf.display(&names),
                bar_nf.display(&names)
            )));
        }
        d_gens.push(bar_nf);
        let e = lift_nf.homogeneous_degree().ok_or(AlgebraError::NotHomogeneous)?;
        let zv = a.coords(&lift_nf, e)?;
        for (d, g) in &ext.right_generators {
            if e + d > max_degree {
                continue;
            }
            let prod = a.multiply(e, &zv, *d, g)?;
            annihilation.push(AnnihilationCheck {
                lift: lift_nf.display(&names).to_string(),
                right_generator: a.element(*d, g).display(&names).to_string(),
                product_is_zero: prod.is_zero(),
            });
        }
    }
    let d_ideal = GradedIdeal::generate(b, Side::Left, &d_gens, max_degree)?;
    let mut ideal_closed = true;
    for n in 0..max_degree {
        for row in d_ideal.slice(n).rows() {
            for l in 0..b.num_generators() as Letter {
                if n + b.letter_weight(l) <= max_degree
                    && !d_ideal
                        .slice(n + b.letter_weight(l))
                        .contains(&b.left_letter(l, n, row)?)
                {
                    ideal_closed = false;
                }
            }
        }
    }
    let quotient_dims = b.hilbert_function()[..=max_degree as usize].to_vec();
    let subalgebra_dims: Vec<usize> = c_slices.iter().map(DegreeSlice::rank).collect();
    let ideal_dims = d_ideal.dims();
    let sum_dims: Vec<usize> = (0..=max_degree)
        .map(|n| Ok(c_slices[n as usize].sum(d_ideal.slice(n))?.rank()))
        .collect::<Result<_, AlgebraError>>()?;
    let spans = sum_dims == quotient_dims;
    let direct = spans && (0..=max_degree as usize).all(|n| subalgebra_dims[n] + ideal_dims[n] == quotient_dims[n]);
    let lifts_annihilate = annihilation.iter().all(|c| c.product_is_zero);
    Ok(DecompositionReport {
        quotient_dims,
        subalgebra_dims,
        ideal_dims,
        sum_dims,
        spans,
        direct,
        ideal_closed,
        all_pass: spans && ideal_closed && lifts_annihilate,
        annihilation,
        lifts_annihilate,
        assertions: input.assertions.clone(),
    })
}

/// Window-relative verdicts. Failure of coherence can be witnessed by a
/// growth pattern; coherence itself can only be supported by evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    WitnessedFailure,
    EvidencePositive,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::WitnessedFailure => "witnessed-failure",
            Status::EvidencePositive => "evidence-positive",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// A left ideal to probe, with a label for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealProbe {
    pub label: String,
    pub generators: Vec<NcPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub max_degree: u32,
    pub homological_bound: usize,
    /// Growth patterns are read from degrees `trailing_from..=max_degree`.
    pub trailing_from: u32,
    pub tensor_check_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthPattern {
    /// New minimal syzygies of `Q` in every trailing degree.
    pub q_syzygies: bool,
    /// `Tor_2^A(k, A/J)` nonzero in every trailing degree.
    pub tor2_of_quotient: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub label: String,
    pub generators: Vec<String>,
    pub minimal_generator_degrees: Vec<u32>,
    /// Per-degree dimension tables, each indexed by degree from 0.
    pub series: BTreeMap<String, Vec<usize>>,
    /// `Tor_i^A(k, A/J)`, rows indexed by `i`, columns by degree.
    pub betti: Vec<Vec<usize>>,
    pub tor1_agrees_with_q: bool,
    pub tensor_agrees_with_quotient: bool,
    pub tor2_vanishes: bool,
    /// No new generators of `Q` in some trailing degree.
    pub q_generation_settled: bool,
    pub growth: GrowthPattern,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionSummary {
    pub algebra: String,
    pub quotient: String,
    pub field: String,
    pub ideal_generators: Vec<String>,
    pub algebra_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub ideal_dims: Vec<usize>,
    pub right_freeness: RightFreeness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub window: Window,
    pub extension: ExtensionSummary,
    pub decomposition: Option<DecompositionReport>,
    pub assertions: Vec<Assertion>,
    pub ideals: Vec<IdealReport>,
    pub verdict: Status,
    pub verdict_basis: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub max_degree: u32,
    pub homological_bound: usize,
    /// Fail on nonvanishing `Tor_2^A(B, A/J)` instead of recording it.
    pub strict_vanishing: bool,
}

impl ExtensionSummary {
    pub fn new(ext: &FreeExtension, max_degree: u32) -> Self {
        let names = ext.a.names();
        let cut = |v: Vec<usize>| v[..=max_degree as usize].to_vec();
        ExtensionSummary {
            algebra: ext.a.name().to_string(),
            quotient: ext.b.name().to_string(),
            field: ext.a.field().to_string(),
            ideal_generators: ext
                .ideal
                .generators()
                .iter()
                .map(|g| g.display(&names).to_string())
                .collect(),
            algebra_dims: cut(ext.a.hilbert_function()),
            quotient_dims: cut(ext.b.hilbert_function()),
            ideal_dims: cut(ext.ideal.dims()),
            right_freeness: ext.right_freeness.clone(),
        }
    }
}

fn all_nonzero(v: &[usize], from: u32) -> bool {
    v[from as usize..].iter().all(|&c| c > 0)
}

fn all_zero(v: &[usize], from: u32) -> bool {
    v[from as usize..].iter().all(|&c| c == 0)
}

/// Runs every check for one left ideal.
pub fn probe_ideal(ext: &FreeExtension, probe: &IdealProbe, opts: &ReportOptions) -> Result<IdealReport, AlgebraError> {
    let d = opts.max_degree;
    let a = &ext.a;
    let names = a.names();
    let q = compute_q(ext, &probe.generators, d)?;
    let tor = tor_dims(ext, &q.j_generators, d)?;
    if tor.tor1 != q.dims {
        return Err(AlgebraError::SelfTest(format!(
            "{}: Tor_1 {:?} differs from (I ∩ J)/(IJ) {:?}",
            probe.label, tor.tor1, q.dims
        )));
    }
    let tor2_vanishes = tor.tor2.iter().all(|&t| t == 0);
    if opts.strict_vanishing && !tor2_vanishes {
        return Err(AlgebraError::SelfTest(format!(
            "{}: Tor_2^A(B, A/J) does not vanish: {:?}",
            probe.label, tor.tor2
        )));
    }
    let bj = b_dot_j(ext, &q.j_generators, d)?;
    let quotient: Vec<usize> = (0..=d).map(|n| ext.b.dim(n) - bj.slice(n).rank()).collect();
    let cap = d.min(TENSOR_CHECK_CAP);
    let tensor = tensor_dims(ext, &q.j, cap)?;
    if tensor[..] != quotient[..=cap as usize] {
        return Err(AlgebraError::SelfTest(format!(
            "{}: B ⊗ A/J {:?} differs from B/B.J {:?}",
            probe.label, tensor, quotient
        )));
    }
    let betti: BettiTable = betti_table(
        a,
        &ModulePresentation::cyclic_quotient(a, &probe.generators)?,
        opts.homological_bound,
        d,
    )?;
    let q_gens = count_by_degree(&q.generators, d);
    let q_syz = q.syzygies.generator_counts();
    let from = trailing_from(d);
    let tor2_row = betti.rows.get(2);
    let growth = GrowthPattern {
        q_syzygies: all_nonzero(&q_syz, from),
        tor2_of_quotient: tor2_row.is_some_and(|r| all_nonzero(r, from)),
    };
    let status = if growth.q_syzygies || growth.tor2_of_quotient {
        Status::WitnessedFailure
    } else if all_zero(&q_syz, from) && tor2_row.is_none_or(|r| all_zero(r, from)) {
        Status::EvidencePositive
    } else {
        Status::Inconclusive
    };
    let mut series = BTreeMap::new();
    series.insert("ideal".to_string(), q.j.dims());
    series.insert("intersection".to_string(), q.intersection.dims());
    series.insert("product".to_string(), q.product.dims());
    series.insert("q".to_string(), q.dims.clone());
    series.insert("q_generators".to_string(), q_gens.clone());
    series.insert("q_syzygies".to_string(), q_syz);
    series.insert("tor1".to_string(), tor.tor1);
    series.insert("tor2".to_string(), tor.tor2);
    series.insert("quotient_by_image".to_string(), quotient);
    series.insert("tensor_product".to_string(), tensor);
    Ok(IdealReport {
        label: probe.label.clone(),
        generators: probe.generators.iter().map(|g| g.display(&names).to_string()).collect(),
        minimal_generator_degrees: q.j_generators.iter().map(|(d, _)| *d).collect(),
        series,
        betti: betti.rows,
        tor1_agrees_with_q: true,
        tensor_agrees_with_quotient: true,
        tor2_vanishes,
        q_generation_settled: !all_nonzero(&q_gens, from),
        growth,
        status,
    })
}

/// The per-degree part of a report cut to degrees `0..=upto`. Unlike the
/// verdicts, these numbers do not depend on the window they were computed in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeTables {
    pub algebra_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub ideal_dims: Vec<usize>,
    pub ideals: Vec<IdealTables>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealTables {
    pub label: String,
    pub series: BTreeMap<String, Vec<usize>>,
    pub betti: Vec<Vec<usize>>,
}

impl CoherenceReport {
    pub fn degree_tables(&self, upto: u32) -> DegreeTables {
        let cut = |v: &Vec<usize>| v.iter().take(upto as usize + 1).copied().collect::<Vec<_>>();
        DegreeTables {
            algebra_dims: cut(&self.extension.algebra_dims),
            quotient_dims: cut(&self.extension.quotient_dims),
            ideal_dims: cut(&self.extension.ideal_dims),
            ideals: self
                .ideals
                .iter()
                .map(|r| IdealTables {
                    label: r.label.clone(),
                    series: r.series.iter().map(|(k, v)| (k.clone(), cut(v))).collect(),
                    betti: r.betti.iter().map(cut).collect(),
                })
                .collect(),
        }
    }
}

/// Probes every ideal of the battery (in parallel, reported in input order).
pub fn coherence_report(
    ext: &FreeExtension,
    battery: &[IdealProbe],
    decomposition: Option<&DecompositionInput>,
    assertions: &[Assertion],
    opts: &ReportOptions,
) -> Result<CoherenceReport, AlgebraError> {
    ext.check_window(opts.max_degree)?;
    if opts.max_degree < 2 {
        return Err(AlgebraError::Precondition("the window must reach degree 2".into()));
    }
    let ideals = battery
        .par_iter()
        .map(|p| probe_ideal(ext, p, opts))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let decomposition = decomposition
        .map(|input| check_decomposition(ext, input, opts.max_degree))
        .transpose()?;
    let mut all_assertions = assertions.to_vec();
    if let Some(input) = decomposition.as_ref() {
        all_assertions.extend(input.assertions.iter().cloned());
    }
    let verdict = if ideals.iter().any(|r| r.status == Status::WitnessedFailure) {
        Status::WitnessedFailure
    } else if ideals.iter().all(|r| r.status == Status::EvidencePositive) {
        Status::EvidencePositive
    } else {
        Status::Inconclusive
    };
    let verdict_basis = match verdict {
        Status::WitnessedFailure => "some probe shows new syzygies in every trailing degree of the window; \
                                     the growth rule is a heuristic threshold"
            .to_string(),
        Status::EvidencePositive => "every probe is finitely presented within the window; \
                                     this is evidence, not proof"
            .to_string(),
        Status::Inconclusive => "neither a growth pattern nor settled presentations within the window".to_string(),
    };
    Ok(CoherenceReport {
        window: Window {
            max_degree: opts.max_degree,
            homological_bound: opts.homological_bound,
            trailing_from: trailing_from(opts.max_degree),
            tensor_check_degree: opts.max_degree.min(TENSOR_CHECK_CAP),
        },
        extension: ExtensionSummary::new(ext, opts.max_degree),
        decomposition,
        assertions: all_assertions,
        ideals,
        verdict,
        verdict_basis,
    })
}

/// Principal left ideals on each degree-one normal word, then all pairs of
/// them, truncated to `limit` probes.
pub fn default_battery(alg: &GradedAlgebra, limit: usize) -> Vec<IdealProbe> {
    let names = alg.names();
    let field = alg.field();
    let words: Vec<NcPolynomial> = alg
        .basis(1)
        .map(|b| {
            b.iter()
                .map(|w| NcPolynomial::monomial(w.clone(), field.one()))
                .collect()
        })
        .unwrap_or_default();
    let label = |gens: &[&NcPolynomial]| {
        gens.iter()
            .map(|g| format!("A{}", g.display(&names)))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let mut out = Vec::new();
    for w in &words {
        out.push(IdealProbe {
            label: label(&[w]),
            generators: vec![w.clone()],
        });
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            out.push(IdealProbe {
                label: label(&[&words[i], &words[j]]),
                generators: vec![words[i].clone(), words[j].clone()],
            });
        }
    }
    out.truncate(limit);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;
    use crate::scalar::Field;

    const Q: Field = Field::Rational;

    fn pres(names: &[&str], rels: &[&[(&[&str], i64)]]) -> AlgebraPresentation {
        let gens = names.iter().map(|n| Generator::new(*n, 1)).collect();
        let free = AlgebraPresentation::free("T", Q, gens).unwrap();
        let relations = rels
            .iter()
            .map(|terms| {
                NcPolynomial::from_terms(Q, terms.iter().map(|(w, c)| (free.word(w).unwrap(), Q.from_i64(*c))))
            })
            .collect();
        AlgebraPresentation::new("T", Q, free.generators().to_vec(), relations).unwrap()
    }

    fn counterexample() -> AlgebraPresentation {
        pres(
            &["x", "z", "y"],
            &[&[(&["y", "z"], 1), (&["z", "y"], -1)], &[(&["x", "z"], 1)]],
        )
    }

    fn three_variable() -> AlgebraPresentation {
        pres(
            &["x", "y", "z"],
            &[
                &[(&["x", "y"], 1), (&["y", "x"], -1)],
                &[(&["z", "x"], 1)],
                &[(&["z", "y"], 1)],
            ],
        )
    }

    fn mono(p: &AlgebraPresentation, w: &[&str]) -> NcPolynomial {
        NcPolynomial::monomial(p.word(w).unwrap(), Q.one())
    }

    fn opts(d: u32) -> ReportOptions {
        ReportOptions {
            max_degree: d,
            homological_bound: 3,
            strict_vanishing: false,
        }
    }

    #[test]
    fn counterexample_extension_is_right_free() {
        let p = counterexample();
        let ext = FreeExtension::new(&p, &[mono(&p, &["z"])], 7).unwrap();
        let rf = ext.right_freeness();
        assert!(rf.holds_in_window);
        assert!(rf.generators_settled);
        assert_eq!(rf.generators, vec!["z"]);
        // B is free on x, y
        assert_eq!(ext.b().hilbert_function(), vec![1, 2, 4, 8, 16, 32, 64, 128]);
    }

    #[test]
    fn free_algebra_ideal_needs_a_right_generator_per_degree() {
        let p = pres(&["x", "y"], &[]);
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 6).unwrap();
        let rf = ext.right_freeness();
        assert!(rf.holds_in_window);
        assert!(!rf.generators_settled);
        assert_eq!(rf.generator_degrees, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn unit_ideal_is_rejected() {
        let p = counterexample();
        assert!(matches!(
            FreeExtension::new(&p, &[NcPolynomial::one(Q)], 4),
            Err(AlgebraError::Precondition(_))
        ));
    }

    #[test]
    fn projection_is_multiplicative_and_action_associative() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 5).unwrap();
        let (a, b) = (ext.a(), ext.b());
        for m in 0..=2u32 {
            for n in 0..=2u32 {
                for i in 0..a.dim(m) {
                    for j in 0..a.dim(n) {
                        let (u, v) = (SparseVec::unit(i, Q), SparseVec::unit(j, Q));
                        let lhs = ext.project(m + n, &a.multiply(m, &u, n, &v).unwrap());
                        let rhs = b.multiply(m, &ext.project(m, &u), n, &ext.project(n, &v)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        for bi in 0..b.dim(1) {
            let bv = SparseVec::unit(bi, Q);
            for i in 0..a.dim(1) {
                for j in 0..a.dim(2) {
                    let (u, v) = (SparseVec::unit(i, Q), SparseVec::unit(j, Q));
                    let left = ext.right_act(2, &ext.right_act(1, &bv, 1, &u).unwrap(), 2, &v).unwrap();
                    let right = ext.right_act(1, &bv, 3, &a.multiply(1, &u, 2, &v).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn q_for_cz_has_one_dimension_per_degree_and_growing_syzygies() {
        let p = counterexample();
        let ext = FreeExtension::new(&p, &[mono(&p, &["z"])], 7).unwrap();
        let q = compute_q(&ext, &[mono(&p, &["z"])], 7).unwrap();
        assert_eq!(q.dims, vec![0, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(count_by_degree(&q.generators, 7), vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(q.syzygies.generator_counts(), vec![0, 0, 1, 1, 1, 1, 1, 1]);
        let tor = tor_dims(&ext, &q.j_generators, 7).unwrap();
        assert_eq!(tor.tor1, q.dims);
        assert!(tor.tor2.iter().all(|&t| t == 0));
    }

    /// Oracle for `J = I`: `(I ∩ I)/(I·I)` with `I·I` spanned by all products
    /// of slice rows, independent of right generators.
    #[test]
    fn q_for_j_equal_i_matches_square_of_ideal() {
        for (p, g) in [(counterexample(), "z"), (three_variable(), "x")] {
            let ext = FreeExtension::new(&p, &[mono(&p, &[g])], 6).unwrap();
            let a = ext.a();
            // J = I as a left ideal, from a truncated list of left generators
            let left_gens: Vec<NcPolynomial> = ext
                .ideal()
                .minimal_generators_as(a, Side::Left)
                .unwrap()
                .into_iter()
                .map(|(d, v)| a.element(d, &v))
                .collect();
            let q = compute_q(&ext, &left_gens, 6).unwrap();
            for n in 0..=6u32 {
                let mut prods = Vec::new();
                for m in 0..=n {
                    for r in ext.ideal().slice(m).rows() {
                        for s in ext.ideal().slice(n - m).rows() {
                            prods.push(a.multiply(m, r, n - m, s).unwrap());
                        }
                    }
                }
                let square = rank(&prods, Q);
                assert_eq!(
                    q.dims[n as usize],
                    ext.ideal().slice(n).rank() - square,
                    "{g} degree {n}"
                );
            }
        }
    }

    #[test]
    fn tensor_product_matches_quotient_by_image() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 5).unwrap();
        for gens in [vec![mono(&p, &["z"])], vec![mono(&p, &["x"]), mono(&p, &["z"])], vec![]] {
            let q = compute_q(&ext, &gens, 5).unwrap();
            let bj = b_dot_j(&ext, &q.j_generators, 5).unwrap();
            let quotient: Vec<usize> = (0..=5).map(|n| ext.b().dim(n) - bj.slice(n).rank()).collect();
            assert_eq!(tensor_dims(&ext, &q.j, 5).unwrap(), quotient);
        }
    }

    #[test]
    fn zero_ideal_probe_is_trivial() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 5).unwrap();
        let probe = IdealProbe {
            label: "0".into(),
            generators: vec![],
        };
        let r = probe_ideal(&ext, &probe, &opts(5)).unwrap();
        assert!(r.series["q"].iter().all(|&d| d == 0));
        assert!(r.series["tor1"].iter().all(|&d| d == 0));
        assert_eq!(r.status, Status::EvidencePositive);
    }

    #[test]
    fn counterexample_report_witnesses_failure() {
        let p = counterexample();
        let ext = FreeExtension::new(&p, &[mono(&p, &["z"])], 7).unwrap();
        let battery = vec![IdealProbe {
            label: "Cz".into(),
            generators: vec![mono(&p, &["z"])],
        }];
        let report = coherence_report(&ext, &battery, None, &[], &opts(7)).unwrap();
        assert_eq!(report.verdict, Status::WitnessedFailure);
        let r = &report.ideals[0];
        assert_eq!(r.betti[2], vec![0, 0, 1, 1, 1, 1, 1, 1]);
        assert!(r.growth.q_syzygies && r.growth.tor2_of_quotient);
        assert!(r.q_generation_settled);
    }

    #[test]
    fn three_variable_default_battery_is_evidence_positive() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 6).unwrap();
        let battery = default_battery(ext.a(), 16);
        assert_eq!(battery.len(), 6);
        let report = coherence_report(&ext, &battery, None, &[], &opts(6)).unwrap();
        for r in &report.ideals {
            assert_eq!(r.status, Status::EvidencePositive, "{}", r.label);
            assert!(r.tor2_vanishes);
        }
        assert_eq!(report.verdict, Status::EvidencePositive);
    }

    #[test]
    fn decomposition_checks_for_three_variable_example() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 6).unwrap();
        let z = mono(&p, &["z"]);
        let input = DecompositionInput {
            subalgebra_generators: vec![mono(&p, &["y"])],
            ideal_generators: vec![(z.clone(), z)],
            assertions: vec![Assertion {
                claim: "C graded left Noetherian".into(),
                citation: "polynomial ring in one variable".into(),
            }],
        };
        let r = check_decomposition(&ext, &input, 6).unwrap();
        assert!(r.spans && r.direct && r.ideal_closed && r.lifts_annihilate && r.all_pass);
        assert_eq!(r.subalgebra_dims, vec![1; 7]);
        assert_eq!(r.annihilation.len(), 1);
    }

    #[test]
    fn decomposition_negative_control() {
        // B = k<x,y> is not k[y] + Bx: the words starting with y and
        // containing x are missing
        let p = counterexample();
        let ext = FreeExtension::new(&p, &[mono(&p, &["z"])], 5).unwrap();
        let x = mono(&p, &["x"]);
        let input = DecompositionInput {
            subalgebra_generators: vec![mono(&p, &["y"])],
            ideal_generators: vec![(x.clone(), x)],
            assertions: vec![],
        };
        let r = check_decomposition(&ext, &input, 5).unwrap();
        assert!(r.lifts_annihilate);
        assert!(r.ideal_closed);
        assert!(!r.spans);
        assert!(!r.all_pass);
    }

    #[test]
    fn lift_mismatch_is_rejected() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[mono(&p, &["x"])], 4).unwrap();
        let input = DecompositionInput {
            subalgebra_generators: vec![],
            ideal_generators: vec![(mono(&p, &["z"]), mono(&p, &["y"]))],
            assertions: vec![],
        };
        assert!(matches!(
            check_decomposition(&ext, &input, 4),
            Err(AlgebraError::Precondition(_))
        ));
    }

    #[test]
    fn trivial_extension_checks_pass_vacuously() {
        let p = three_variable();
        let ext = FreeExtension::new(&p, &[], 4).unwrap();
        let gens: Vec<NcPolynomial> = ["x", "y", "z"].iter().map(|g| mono(&p, &[g])).collect();
        let input = DecompositionInput {
            subalgebra_generators: gens,
            ideal_generators: vec![],
            assertions: vec![],
        };
        let r = check_decomposition(&ext, &input, 4).unwrap();
        assert!(r.all_pass && r.direct);
    }
}
