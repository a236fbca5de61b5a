//! The `.galg` text format: algebra presentations, ideal lists, twisting
//! maps and job descriptions. See `docs/galg-format.md` for the grammar.

mod lexer;
mod print;

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use crate::criterion::Assertion;
use crate::error::ParseError;
use crate::module::Side;
use crate::poly::NcPolynomial;
use crate::presentation::{AlgebraPresentation, Generator};
use crate::scalar::Field;
use crate::twist::{TensorElement, TwistSpec};
use crate::word::{Letter, Word};

use lexer::{tokenize, Tok, Token};
pub use print::{print_algebra, print_document};

const KEYWORDS: [&str; 2] = ["end", "tau"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Algebra,
    IdealList,
    TwistSpec,
    Job,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: String,
    pub side: Side,
    pub generators: Vec<NcPolynomial>,
}

/// Named ideals of one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealList {
    pub algebra: String,
    pub ideals: Vec<IdealDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistDecl {
    pub left: String,
    pub right: String,
    /// Named rational parameters, already substituted into `spec`.
    pub params: Vec<(String, BigRational)>,
    pub spec: TwistSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BatterySpec {
    Default,
    Named(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobDecl {
    pub name: String,
    pub command: Option<String>,
    pub algebra: Option<String>,
    pub twist: Option<String>,
    pub extension: Option<String>,
    pub battery: Option<BatterySpec>,
    pub battery_limit: Option<usize>,
    pub subalgebra: Vec<NcPolynomial>,
    /// `(element of B, its lift to A)`; both written over `A`'s generators.
    pub lifts: Vec<(NcPolynomial, NcPolynomial)>,
    pub assertions: Vec<Assertion>,
    pub max_degree: Option<u32>,
    pub hom_bound: Option<usize>,
    pub strict_vanishing: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Algebra(AlgebraPresentation),
    Ideals(IdealList),
    Twist(TwistDecl),
    Job(JobDecl),
}

impl Block {
    pub fn kind(&self) -> BlockKind {
        match self {
            Block::Algebra(_) => BlockKind::Algebra,
            Block::Ideals(_) => BlockKind::IdealList,
            Block::Twist(_) => BlockKind::TwistSpec,
            Block::Job(_) => BlockKind::Job,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn algebras(&self) -> impl Iterator<Item = &AlgebraPresentation> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Algebra(a) => Some(a),
            _ => None,
        })
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraPresentation> {
        self.algebras().find(|a| a.name() == name)
    }

    pub fn ideal_lists(&self) -> impl Iterator<Item = &IdealList> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Ideals(i) => Some(i),
            _ => None,
        })
    }

    /// An ideal by name together with the algebra it lives in.
    pub fn ideal(&self, name: &str) -> Option<(&str, &IdealDecl)> {
        self.ideal_lists().find_map(|l| {
            l.ideals
                .iter()
                .find(|i| i.name == name)
                .map(|i| (l.algebra.as_str(), i))
        })
    }

    pub fn twists(&self) -> impl Iterator<Item = &TwistDecl> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Twist(t) => Some(t),
            _ => None,
        })
    }

    pub fn twist(&self, name: &str) -> Option<&TwistDecl> {
        self.twists().find(|t| t.spec.name == name)
    }

    pub fn jobs(&self) -> impl Iterator<Item = &JobDecl> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Job(j) => Some(j),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Replaces the value of a declared twist parameter.
    pub param_overrides: BTreeMap<String, BigRational>,
    /// Replaces the field of every algebra block; coefficients are read in it.
    pub field_override: Option<Field>,
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    parse_document_with(text, &ParseOptions::default())
}

pub fn parse_document_with(text: &str, opts: &ParseOptions) -> Result<Document, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        opts,
    };
    p.document()
}

/// A document holding exactly one algebra block.
pub fn parse_algebra(text: &str) -> Result<AlgebraPresentation, ParseError> {
    let doc = parse_document(text)?;
    match doc.blocks.as_slice() {
        [Block::Algebra(a)] => Ok(a.clone()),
        _ => Err(ParseError {
            line: 1,
            column: 1,
            offset: 0,
            message: "expected a document with a single algebra block".into(),
        }),
    }
}

/// A polynomial over the generators of `ambient`.
pub fn parse_polynomial(text: &str, ambient: &AlgebraPresentation) -> Result<NcPolynomial, ParseError> {
    let opts = ParseOptions::default();
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        opts: &opts,
    };
    let scope = Scope::of(ambient, &[]);
    let poly = p.sum(&scope)?;
    p.expect_end_of_input()?;
    Ok(poly)
}

/// A tensor `Σ c a # b` with `a` over `left` and `b` over `right`.
pub fn parse_tensor(
    text: &str,
    left: &AlgebraPresentation,
    right: &AlgebraPresentation,
) -> Result<TensorElement, ParseError> {
    let opts = ParseOptions::default();
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        opts: &opts,
    };
    let t = p.tensor(&Scope::of(left, &[]), &Scope::of(right, &[]))?;
    p.expect_end_of_input()?;
    Ok(t)
}

struct Scope<'a> {
    field: Field,
    names: HashMap<&'a str, Letter>,
    weights: Vec<u32>,
    params: &'a [(String, BigRational)],
}

impl<'a> Scope<'a> {
    fn of(alg: &'a AlgebraPresentation, params: &'a [(String, BigRational)]) -> Self {
        Scope {
            field: alg.field(),
            names: alg
                .generators()
                .iter()
                .enumerate()
                .map(|(i, g)| (g.name.as_str(), i as Letter))
                .collect(),
            weights: alg.weights(),
            params,
        }
    }
}

struct Parser<'o> {
    toks: Vec<Token>,
    pos: usize,
    opts: &'o ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(t.error(format!("expected {}, found {}", tok.describe(), t.tok.describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(t.error(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Token, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == word => Ok(t),
            other => Err(t.error(format!("expected `{word}`, found {}", other.describe()))),
        }
    }

    /// Hyphenated identifiers written without spaces, such as `two-sided`.
    fn dashed(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let (mut s, first) = self.ident(what)?;
        let mut last = first.clone();
        while self.at(&Tok::Minus) && last.touches(self.peek()) {
            let dash = self.peek().clone();
            let after = &self.toks[self.pos + 1];
            if !(dash.touches(after) && matches!(after.tok, Tok::Ident(_))) {
                break;
            }
            self.next();
            let (part, t) = self.ident(what)?;
            s.push('-');
            s.push_str(&part);
            last = t;
        }
        Ok((s, first))
    }

    fn skip_newlines(&mut self) {
        while self.eat(&Tok::Newline) {}
    }

    fn end_of_line(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => Err(t.error(format!(
                "expected end of line, found {}; products need an explicit `*`",
                t.tok.describe()
            ))),
            ref other => Err(t.error(format!("expected end of line, found {}", other.describe()))),
        }
    }

    fn expect_end_of_input(&mut self) -> Result<(), ParseError> {
        self.skip_newlines();
        let t = self.next();
        match t.tok {
            Tok::Eof => Ok(()),
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => Err(t.error(format!(
                "unexpected {}; products need an explicit `*`",
                t.tok.describe()
            ))),
            ref other => Err(t.error(format!("unexpected {}", other.describe()))),
        }
    }

    fn uint<T: TryFrom<u64>>(&mut self, what: &str) -> Result<(T, Token), ParseError> {
        let t = self.next();
        let Tok::Int(n) = &t.tok else {
            return Err(t.error(format!("expected {what}, found {}", t.tok.describe())));
        };
        let v = u64::try_from(n.clone())
            .ok()
            .and_then(|v| T::try_from(v).ok())
            .ok_or_else(|| t.error(format!("{what} out of range")))?;
        Ok((v, t))
    }

    fn rational(&mut self) -> Result<(BigRational, Token), ParseError> {
        let negative = self.eat(&Tok::Minus);
        let t = self.next();
        let Tok::Int(n) = &t.tok else {
            return Err(t.error(format!("expected a number, found {}", t.tok.describe())));
        };
        let mut q = BigRational::from_integer(n.clone());
        if self.eat(&Tok::Slash) {
            let d = self.next();
            match &d.tok {
                Tok::Int(den) if !den.is_zero() => q /= BigRational::from_integer(den.clone()),
                Tok::Int(_) => return Err(d.error("division by zero")),
                other => return Err(d.error(format!("expected a denominator, found {}", other.describe()))),
            }
        }
        Ok((if negative { -q } else { q }, t))
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut doc = Document::default();
        loop {
            self.skip_newlines();
            if self.at(&Tok::Eof) {
                return Ok(doc);
            }
            let (kw, t) = self.ident("a block keyword")?;
            let block = match kw.as_str() {
                "algebra" => Block::Algebra(self.algebra_block(&doc, &t)?),
                "ideals" => Block::Ideals(self.ideals_block(&doc)?),
                "twist" => Block::Twist(self.twist_block(&doc)?),
                "job" => Block::Job(self.job_block(&doc)?),
                _ => return Err(t.error(format!("expected `algebra`, `ideals`, `twist` or `job`, found `{kw}`"))),
            };
            doc.blocks.push(block);
        }
    }

    fn algebra_block(&mut self, doc: &Document, header: &Token) -> Result<AlgebraPresentation, ParseError> {
        let (name, name_tok) = self.ident("an algebra name")?;
        if doc.algebra(&name).is_some() || doc.twist(&name).is_some() {
            return Err(name_tok.error(format!("`{name}` is already defined")));
        }
        self.end_of_line()?;
        self.skip_newlines();
        let mut field = Field::Rational;
        if self.at_word("field") {
            self.next();
            field = self.field()?;
            self.end_of_line()?;
            self.skip_newlines();
        }
        if let Some(f) = self.opts.field_override {
            field = f;
        }
        self.keyword("generators")?;
        let mut gens: Vec<Generator> = Vec::new();
        loop {
            let (g, t) = self.ident("a generator name")?;
            if KEYWORDS.contains(&g.as_str()) {
                return Err(t.error(format!("`{g}` is reserved")));
            }
            if gens.iter().any(|x| x.name == g) {
                return Err(t.error(format!("duplicate generator `{g}`")));
            }
            let mut weight = 1;
            if self.eat(&Tok::Colon) {
                let (w, wt) = self.uint::<u32>("a weight")?;
                if w == 0 {
                    return Err(wt.error(format!("generator `{g}` has degree 0")));
                }
                weight = w;
            }
            gens.push(Generator::new(g, weight));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.end_of_line()?;
        self.skip_newlines();
        self.keyword("relations")?;
        self.end_of_line()?;
        let stub = AlgebraPresentation::new(name.clone(), field, gens.clone(), vec![])
            .map_err(|e| header.error(e.to_string()))?;
        let scope = Scope::of(&stub, &[]);
        let mut relations = Vec::new();
        loop {
            self.skip_newlines();
            if self.at_word("end") {
                self.next();
                self.end_of_line()?;
                break;
            }
            if self.at(&Tok::Eof) {
                return Err(self.peek().error("missing `end` for algebra block"));
            }
            let start = self.peek().clone();
            let r = self.sum(&scope)?;
            if r.is_zero() {
                return Err(start.error("relation is zero"));
            }
            if !r.is_homogeneous() {
                return Err(start.error("inhomogeneous relation"));
            }
            relations.push(r);
            self.end_of_line()?;
        }
        AlgebraPresentation::new(name, field, gens, relations).map_err(|e| header.error(e.to_string()))
    }

    fn field(&mut self) -> Result<Field, ParseError> {
        let (f, t) = self.ident("a field")?;
        match f.as_str() {
            "QQ" => Ok(Field::Rational),
            "GF" => {
                self.expect(Tok::LParen)?;
                let (p, pt) = self.uint::<u32>("a prime")?;
                self.expect(Tok::RParen)?;
                Field::prime(p).map_err(|e| pt.error(e.to_string()))
            }
            _ => Err(t.error(format!("unknown field `{f}`; use QQ or GF(p)"))),
        }
    }

    fn lookup_algebra<'d>(&mut self, doc: &'d Document) -> Result<&'d AlgebraPresentation, ParseError> {
        let (name, t) = self.ident("an algebra name")?;
        doc.algebra(&name)
            .ok_or_else(|| t.error(format!("unknown algebra `{name}`")))
    }

    fn ideals_block(&mut self, doc: &Document) -> Result<IdealList, ParseError> {
        let alg = self.lookup_algebra(doc)?;
        self.end_of_line()?;
        let scope = Scope::of(alg, &[]);
        let mut ideals: Vec<IdealDecl> = Vec::new();
        loop {
            self.skip_newlines();
            if self.at_word("end") {
                self.next();
                self.end_of_line()?;
                break;
            }
            if self.at(&Tok::Eof) {
                return Err(self.peek().error("missing `end` for ideals block"));
            }
            let (name, t) = self.ident("an ideal name")?;
            if doc.ideal(&name).is_some() || ideals.iter().any(|i| i.name == name) {
                return Err(t.error(format!("ideal `{name}` is already defined")));
            }
            self.expect(Tok::Equals)?;
            let (side, st) = self.dashed("a side")?;
            let side = match side.as_str() {
                "left" => Side::Left,
                "right" => Side::Right,
                "two-sided" => Side::TwoSided,
                other => return Err(st.error(format!("unknown side `{other}`; use left, right or two-sided"))),
            };
            self.expect(Tok::LParen)?;
            let generators = self.poly_list(&scope, true)?;
            self.expect(Tok::RParen)?;
            self.end_of_line()?;
            ideals.push(IdealDecl { name, side, generators });
        }
        Ok(IdealList {
            algebra: alg.name().to_string(),
            ideals,
        })
    }

    /// Comma-separated homogeneous polynomials, possibly empty when
    /// `allow_empty` and the list is followed by `)`.
    fn poly_list(&mut self, scope: &Scope, allow_empty: bool) -> Result<Vec<NcPolynomial>, ParseError> {
        let mut out = Vec::new();
        if allow_empty && self.at(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            let start = self.peek().clone();
            let g = self.sum(scope)?;
            if !g.is_homogeneous() {
                return Err(start.error("element is not homogeneous"));
            }
            out.push(g);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn twist_block(&mut self, doc: &Document) -> Result<TwistDecl, ParseError> {
        let (name, name_tok) = self.ident("a twist name")?;
        if doc.algebra(&name).is_some() || doc.twist(&name).is_some() {
            return Err(name_tok.error(format!("`{name}` is already defined")));
        }
        self.end_of_line()?;
        self.skip_newlines();
        self.keyword("left")?;
        let left = self.lookup_algebra(doc)?.clone();
        self.end_of_line()?;
        self.skip_newlines();
        self.keyword("right")?;
        let rt = self.peek().clone();
        let right = self.lookup_algebra(doc)?.clone();
        if right.field() != left.field() {
            return Err(rt.error("the two factors have different fields"));
        }
        self.end_of_line()?;
        let mut params: Vec<(String, BigRational)> = Vec::new();
        let mut values: Vec<(Letter, Letter, TensorElement)> = Vec::new();
        loop {
            self.skip_newlines();
            if self.at_word("end") {
                break;
            }
            if self.at(&Tok::Eof) {
                return Err(self.peek().error("missing `end` for twist block"));
            }
            let (kw, t) = self.ident("`param` or `tau`")?;
            match kw.as_str() {
                "param" => {
                    let (p, pt) = self.ident("a parameter name")?;
                    if left.generator_index(&p).is_some() || right.generator_index(&p).is_some() {
                        return Err(pt.error(format!("parameter `{p}` shadows a generator")));
                    }
                    if params.iter().any(|(q, _)| *q == p) {
                        return Err(pt.error(format!("parameter `{p}` is already defined")));
                    }
                    self.expect(Tok::Equals)?;
                    let (mut v, _) = self.rational()?;
                    if let Some(o) = self.opts.param_overrides.get(&p) {
                        v = o.clone();
                    }
                    params.push((p, v));
                }
                "tau" => {
                    self.expect(Tok::LParen)?;
                    let (b, bt) = self.ident("a generator of the right factor")?;
                    let bl = right
                        .generator_index(&b)
                        .ok_or_else(|| bt.error(format!("`{b}` is not a generator of {}", right.name())))?;
                    self.expect(Tok::Comma)?;
                    let (a, at) = self.ident("a generator of the left factor")?;
                    let al = left
                        .generator_index(&a)
                        .ok_or_else(|| at.error(format!("`{a}` is not a generator of {}", left.name())))?;
                    self.expect(Tok::RParen)?;
                    if values.iter().any(|(x, y, _)| *x == bl && *y == al) {
                        return Err(t.error(format!("tau({b}, {a}) is given twice")));
                    }
                    self.expect(Tok::Equals)?;
                    let vt = self.peek().clone();
                    let v = self.tensor(&Scope::of(&left, &params), &Scope::of(&right, &params))?;
                    let d = left.generators()[al as usize].weight + right.generators()[bl as usize].weight;
                    if v.terms().any(|(x, y, _)| x.degree() + y.degree() != d) {
                        return Err(vt.error(format!("tau({b}, {a}) must be homogeneous of degree {d}")));
                    }
                    values.push((bl, al, v));
                }
                _ => return Err(t.error(format!("expected `param`, `tau` or `end`, found `{kw}`"))),
            }
            self.end_of_line()?;
        }
        let end = self.next();
        self.end_of_line()?;
        let spec = TwistSpec {
            name,
            left: left.clone(),
            right: right.clone(),
            values,
        };
        spec.validate().map_err(|e| end.error(e.to_string()))?;
        Ok(TwistDecl {
            left: left.name().to_string(),
            right: right.name().to_string(),
            params,
            spec,
        })
    }

    fn job_block(&mut self, doc: &Document) -> Result<JobDecl, ParseError> {
        let (name, _) = self.ident("a job name")?;
        self.end_of_line()?;
        let mut job = JobDecl {
            name,
            ..JobDecl::default()
        };
        let mut alg: Option<AlgebraPresentation> = None;
        loop {
            self.skip_newlines();
            if self.at_word("end") {
                self.next();
                self.end_of_line()?;
                return Ok(job);
            }
            if self.at(&Tok::Eof) {
                return Err(self.peek().error("missing `end` for job block"));
            }
            let (key, kt) = self.dashed("a job key")?;
            let scope_needed = |alg: &Option<AlgebraPresentation>| -> Result<AlgebraPresentation, ParseError> {
                alg.clone()
                    .ok_or_else(|| kt.error(format!("`{key}` needs an `algebra` line before it")))
            };
            match key.as_str() {
                "command" => job.command = Some(self.dashed("a command")?.0),
                "algebra" => {
                    let a = self.lookup_algebra(doc)?.clone();
                    job.algebra = Some(a.name().to_string());
                    alg = Some(a);
                }
                "twist" => {
                    let (t, tt) = self.ident("a twist name")?;
                    if doc.twist(&t).is_none() {
                        return Err(tt.error(format!("unknown twist `{t}`")));
                    }
                    job.twist = Some(t);
                }
                "extension" => {
                    let (i, it) = self.ident("an ideal name")?;
                    if doc.ideal(&i).is_none() {
                        return Err(it.error(format!("unknown ideal `{i}`")));
                    }
                    job.extension = Some(i);
                }
                "battery" => {
                    if self.at_word("default") {
                        self.next();
                        job.battery = Some(BatterySpec::Default);
                    } else {
                        let mut names = Vec::new();
                        loop {
                            let (i, it) = self.ident("an ideal name")?;
                            if doc.ideal(&i).is_none() {
                                return Err(it.error(format!("unknown ideal `{i}`")));
                            }
                            names.push(i);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        job.battery = Some(BatterySpec::Named(names));
                    }
                }
                "battery-limit" => job.battery_limit = Some(self.uint::<usize>("a count")?.0),
                "subalgebra" => {
                    let a = scope_needed(&alg)?;
                    job.subalgebra = self.poly_list(&Scope::of(&a, &[]), false)?;
                }
                "lift" => {
                    let a = scope_needed(&alg)?;
                    let scope = Scope::of(&a, &[]);
                    let bar = self.sum(&scope)?;
                    self.expect(Tok::Equals)?;
                    let lift = self.sum(&scope)?;
                    job.lifts.push((bar, lift));
                }
                "assert" => {
                    let claim = self.string()?;
                    self.keyword("by")?;
                    let citation = self.string()?;
                    job.assertions.push(Assertion { claim, citation });
                }
                "max-degree" => job.max_degree = Some(self.uint::<u32>("a degree")?.0),
                "hom-bound" => job.hom_bound = Some(self.uint::<usize>("a bound")?.0),
                "strict-vanishing" => {
                    let (v, vt) = self.ident("`true` or `false`")?;
                    job.strict_vanishing = Some(match v.as_str() {
                        "true" => true,
                        "false" => false,
                        _ => return Err(vt.error("expected `true` or `false`")),
                    });
                }
                _ => return Err(kt.error(format!("unknown job key `{key}`"))),
            }
            self.end_of_line()?;
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Str(s) => Ok(s.clone()),
            other => Err(t.error(format!("expected a string, found {}", other.describe()))),
        }
    }

    /// `['+'|'-'] product { ('+'|'-') product }`
    fn sum(&mut self, scope: &Scope) -> Result<NcPolynomial, ParseError> {
        let mut acc = NcPolynomial::zero(scope.field);
        let mut negate = false;
        if self.eat(&Tok::Minus) {
            negate = true;
        } else {
            self.eat(&Tok::Plus);
        }
        loop {
            let term = self.product(scope)?;
            let term = if negate { term.neg() } else { term };
            acc = acc.add(&term).expect("same field");
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self, scope: &Scope) -> Result<NcPolynomial, ParseError> {
        let mut acc = self.factor(scope)?;
        while self.eat(&Tok::Star) {
            let f = self.factor(scope)?;
            acc = acc.multiply(&f).expect("same field");
        }
        Ok(acc)
    }

    fn factor(&mut self, scope: &Scope) -> Result<NcPolynomial, ParseError> {
        let t = self.next();
        let field = scope.field;
        let poly = match &t.tok {
            Tok::Int(n) => {
                let mut q = BigRational::from_integer(n.clone());
                if self.eat(&Tok::Slash) {
                    let d = self.next();
                    match &d.tok {
                        Tok::Int(den) if !den.is_zero() => q /= BigRational::from_integer(den.clone()),
                        Tok::Int(_) => return Err(d.error("division by zero")),
                        other => return Err(d.error(format!("expected a denominator, found {}", other.describe()))),
                    }
                }
                let c = field.from_rational(&q).map_err(|e| t.error(e.to_string()))?;
                NcPolynomial::monomial(Word::empty(), c)
            }
            Tok::Ident(name) => {
                if let Some((_, v)) = scope.params.iter().find(|(p, _)| p == name) {
                    let c = field.from_rational(v).map_err(|e| t.error(e.to_string()))?;
                    if self.at(&Tok::Caret) {
                        return Err(self.peek().error("powers apply to single generators"));
                    }
                    return Ok(NcPolynomial::monomial(Word::empty(), c));
                }
                let Some(&l) = scope.names.get(name.as_str()) else {
                    return Err(t.error(format!("unknown generator `{name}`")));
                };
                let mut k = 1;
                if self.eat(&Tok::Caret) {
                    let (e, et) = self.uint::<usize>("an exponent")?;
                    if e == 0 {
                        return Err(et.error("exponent must be positive"));
                    }
                    k = e;
                }
                NcPolynomial::monomial(Word::new(vec![l; k], &scope.weights), field.one())
            }
            Tok::LParen => {
                let inner = self.sum(scope)?;
                self.expect(Tok::RParen)?;
                if self.at(&Tok::Caret) {
                    return Err(self.peek().error("powers apply to single generators"));
                }
                inner
            }
            other => {
                return Err(t.error(format!(
                    "expected a coefficient, generator or `(`, found {}",
                    other.describe()
                )))
            }
        };
        Ok(poly)
    }

    /// `['+'|'-'] tterm { ('+'|'-') tterm }` with `tterm = product '#' product`.
    /// A lone `0` denotes the zero tensor.
    fn tensor(&mut self, left: &Scope, right: &Scope) -> Result<TensorElement, ParseError> {
        let field = left.field;
        let mut acc = TensorElement::zero(field);
        let mut sign = field.one();
        if self.eat(&Tok::Minus) {
            sign = -&sign;
        } else {
            self.eat(&Tok::Plus);
        }
        loop {
            let a = self.product(left)?;
            if !self.eat(&Tok::Hash) {
                if !a.is_zero() {
                    let t = self.peek().clone();
                    return Err(t.error(format!("expected `#`, found {}", t.tok.describe())));
                }
            } else {
                let b = self.product(right)?;
                for (wa, ca) in a.terms() {
                    for (wb, cb) in b.terms() {
                        acc.add_term(wa.clone(), wb.clone(), &sign * &(ca * cb));
                    }
                }
            }
            if self.eat(&Tok::Plus) {
                sign = field.one();
            } else if self.eat(&Tok::Minus) {
                sign = -&field.one();
            } else {
                return Ok(acc);
            }
        }
    }
}

/// A rational literal such as `-3/2`, for parameter overrides.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let opts = ParseOptions::default();
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        opts: &opts,
    };
    let (q, _) = p.rational()?;
    p.expect_end_of_input()?;
    Ok(q)
}

#[cfg(test)]
mod tests;
