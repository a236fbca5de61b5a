use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::rewrite::RewriteSystem;

const C_TEXT: &str = "algebra C\nfield QQ\ngenerators x, z, y\nrelations\n y*z - z*y\n x*z\nend\n";

#[test]
fn parses_counterexample_algebra_with_listed_precedence() {
    let c = parse_algebra(C_TEXT).unwrap();
    assert_eq!(c.names(), vec!["x", "z", "y"]);
    assert_eq!(c.relations().len(), 2);
    let rs = RewriteSystem::complete(&c, 4);
    let names = c.names();
    let leads: Vec<String> = rs.rules().iter().map(|r| r.lead.display(&names).to_string()).collect();
    // y is the largest letter, so yz leads its relation
    assert_eq!(leads, vec!["y*z", "x*z"]);
}

#[test]
fn free_algebra_has_no_relations() {
    let f = parse_algebra("algebra F\nfield QQ\ngenerators x, y\nrelations\nend").unwrap();
    assert!(f.relations().is_empty());
    assert_eq!(f.generators().len(), 2);
}

#[test]
fn inhomogeneous_relation_is_rejected_at_its_start() {
    let e = parse_algebra("algebra Bad\nfield QQ\ngenerators x\nrelations\n x + x*x\nend").unwrap_err();
    assert_eq!((e.line, e.column), (5, 2));
    assert!(e.message.contains("inhomogeneous"), "{e}");
}

#[test]
fn errors_point_inside_the_offending_token() {
    let cases = [
        ("algebra A\ngenerators x, x\nrelations\nend", 2, 15, "duplicate"),
        ("algebra A\ngenerators x:0\nrelations\nend", 2, 14, "degree 0"),
        (
            "algebra A\ngenerators x\nrelations\n x*w\nend",
            4,
            4,
            "unknown generator",
        ),
        ("algebra A\ngenerators x, y\nrelations\n x y\nend", 4, 4, "explicit `*`"),
        ("algebra A\nfield GF(12)\ngenerators x\nrelations\nend", 2, 10, "prime"),
        ("algebra A\ngenerators x\nrelations\n x*x\n", 5, 1, "missing `end`"),
        (
            "algebra A\ngenerators x\nrelations\n (x*x)^2\nend",
            4,
            7,
            "single generators",
        ),
    ];
    for (text, line, col, msg) in cases {
        let e = parse_algebra(text).unwrap_err();
        assert_eq!((e.line, e.column), (line, col), "{text:?}: {e}");
        assert!(e.message.contains(msg), "{text:?}: {e}");
        let tok_start = &text[e.offset..];
        assert!(!tok_start.is_empty() || msg == "missing `end`");
    }
}

#[test]
fn polynomial_examples() {
    let a = parse_algebra("algebra A\ngenerators x, y, z\nrelations\nend").unwrap();
    let names = a.names();
    let p = parse_polynomial("x*y - y*x", &a).unwrap();
    assert_eq!(p.display(&names).to_string(), "-y*x + x*y");
    assert!(parse_polynomial("0", &a).unwrap().is_zero());
    let q = parse_polynomial("3/2*x^2*z", &a).unwrap();
    let (w, c) = q.leading_term().unwrap();
    assert_eq!(w.letters(), &[0, 0, 2]);
    assert_eq!(
        c,
        &Field::Rational
            .from_rational(&BigRational::new(3.into(), 2.into()))
            .unwrap()
    );
    // `*` binds tighter than `+`
    let r = parse_polynomial("x + y*z - (x + y)*z", &a).unwrap();
    assert_eq!(r.display(&names).to_string(), "-x*z + x");
    let e = parse_polynomial("x + q", &a).unwrap_err();
    assert_eq!(e.column, 5);
}

#[test]
fn coefficients_reduce_in_prime_fields() {
    let a = parse_algebra("algebra A\nfield GF(7)\ngenerators x\nrelations\nend").unwrap();
    let p = parse_polynomial("1/3*x", &a).unwrap();
    assert_eq!(p.leading_term().unwrap().1, &Field::Prime(7).from_i64(5));
    let e = parse_polynomial("1/7*x", &a).unwrap_err();
    assert!(e.message.contains("not invertible"), "{e}");
}

const TWIST_TEXT: &str = "\
algebra P
generators x, y
relations
  y*x - x*y
end

algebra Z
generators z
relations
end

twist T
left P
right Z
  param a = 0
  param b = 1
  param c = -1/2
  tau(z, x) = 0
  tau(z, y) = a*y^2 # 1 + b*y # z + c * 1 # z^2
end
";

#[test]
fn twist_block_substitutes_parameters() {
    let doc = parse_document(TWIST_TEXT).unwrap();
    let t = doc.twist("T").unwrap();
    let (ln, rn) = (t.spec.left.names(), t.spec.right.names());
    let v = t.spec.value(0, 1).unwrap();
    assert_eq!(v.display(&ln, &rn), "y # z - 1/2*1 # z^2");
    assert!(t.spec.value(0, 0).unwrap().is_zero());

    let mut opts = ParseOptions::default();
    opts.param_overrides
        .insert("a".into(), BigRational::from_integer(BigInt::from(2)));
    let doc2 = parse_document_with(TWIST_TEXT, &opts).unwrap();
    let v2 = doc2.twist("T").unwrap().spec.value(0, 1).unwrap().display(&ln, &rn);
    assert_eq!(v2, "2*y^2 # 1 + y # z - 1/2*1 # z^2");
}

#[test]
fn twist_errors() {
    let missing = TWIST_TEXT.replace("  tau(z, x) = 0\n", "");
    let e = parse_document(&missing).unwrap_err();
    assert!(e.message.contains("exactly once"), "{e}");
    let wrong_degree = TWIST_TEXT.replace("tau(z, x) = 0", "tau(z, x) = x # 1");
    let e = parse_document(&wrong_degree).unwrap_err();
    assert!(e.message.contains("degree 2"), "{e}");
    let swapped = TWIST_TEXT.replace("tau(z, x)", "tau(x, z)");
    let e = parse_document(&swapped).unwrap_err();
    assert!(e.message.contains("not a generator of Z"), "{e}");
    let no_hash = TWIST_TEXT.replace("b*y # z", "b*y z");
    assert!(parse_document(&no_hash).is_err());
}

const JOB_TEXT: &str = "\
algebra C
generators x, z, y
relations
  y*z - z*y
  x*z
end

ideals C
  I = two-sided(z)
  Jz = left(z)
  Jxz = left(x, z)
end

job witness
  command criterion
  algebra C
  extension I
  battery Jz, Jxz
  subalgebra y
  lift z = z
  assert \"B coherent\" by \"a \\\"quoted\\\" source\"
  max-degree 8
  hom-bound 3
  strict-vanishing false
end
";

#[test]
fn ideals_and_jobs() {
    let doc = parse_document(JOB_TEXT).unwrap();
    let (alg, i) = doc.ideal("I").unwrap();
    assert_eq!((alg, i.side), ("C", Side::TwoSided));
    assert_eq!(doc.ideal("Jxz").unwrap().1.generators.len(), 2);
    let job = doc.jobs().next().unwrap();
    assert_eq!(job.command.as_deref(), Some("criterion"));
    assert_eq!(job.battery, Some(BatterySpec::Named(vec!["Jz".into(), "Jxz".into()])));
    assert_eq!(job.assertions[0].citation, "a \"quoted\" source");
    assert_eq!(job.strict_vanishing, Some(false));
    let kinds: Vec<BlockKind> = doc.blocks.iter().map(Block::kind).collect();
    assert_eq!(kinds, vec![BlockKind::Algebra, BlockKind::IdealList, BlockKind::Job]);
}

#[test]
fn job_errors() {
    let e = parse_document(&JOB_TEXT.replace("battery Jz", "battery Jq")).unwrap_err();
    assert!(e.message.contains("unknown ideal `Jq`"), "{e}");
    let e = parse_document(&JOB_TEXT.replace("  algebra C\n", "")).unwrap_err();
    assert!(e.message.contains("needs an `algebra` line"), "{e}");
    let e = parse_document(&JOB_TEXT.replace("I = two-sided", "I = both")).unwrap_err();
    assert!(e.message.contains("unknown side"), "{e}");
}

#[test]
fn fixed_documents_round_trip() {
    for text in [C_TEXT, TWIST_TEXT, JOB_TEXT] {
        let doc = parse_document(text).unwrap();
        let printed = print_document(&doc);
        let again = parse_document(&printed).unwrap();
        assert_eq!(doc, again, "{printed}");
        assert_eq!(printed, print_document(&again));
    }
}

fn arb_presentation() -> impl Strategy<Value = AlgebraPresentation> {
    let pool = ["x", "y", "z", "u", "v", "w1", "a_b"];
    (
        proptest::sample::subsequence(pool.to_vec(), 1..=4),
        proptest::collection::vec(1u32..=2, 4),
        prop_oneof![Just(Field::Rational), Just(Field::Prime(7)), Just(Field::Prime(101))],
        proptest::collection::vec(
            proptest::collection::vec(
                (proptest::collection::vec(0usize..4, 1..=4), -4i64..=4, 1i64..=3),
                1..=4,
            ),
            0..=3,
        ),
    )
        .prop_map(|(names, weights, field, rels)| {
            let n = names.len();
            let gens: Vec<Generator> = names
                .iter()
                .zip(&weights)
                .map(|(name, w)| Generator::new(*name, *w))
                .collect();
            let ws: Vec<u32> = gens.iter().map(|g| g.weight).collect();
            let mut relations = Vec::new();
            for terms in rels {
                let words: Vec<(Word, i64, i64)> = terms
                    .into_iter()
                    .map(|(letters, c, d)| {
                        let l: Vec<Letter> = letters.into_iter().map(|i| (i % n) as Letter).collect();
                        (Word::new(l, &ws), c, d)
                    })
                    .collect();
                let degree = words[0].0.degree();
                let mut p = NcPolynomial::zero(field);
                for (w, c, d) in words.into_iter().filter(|(w, _, _)| w.degree() == degree) {
                    let q = BigRational::new(c.into(), d.into());
                    p.add_term(w, field.from_rational(&q).unwrap());
                }
                if !p.is_zero() {
                    relations.push(p);
                }
            }
            AlgebraPresentation::new("R", field, gens, relations).unwrap()
        })
}

proptest! {
    #[test]
    fn presentations_round_trip(alg in arb_presentation()) {
        let printed = print_algebra(&alg);
        let parsed = parse_algebra(&printed).unwrap();
        prop_assert_eq!(&parsed, &alg);
        prop_assert_eq!(print_algebra(&parsed), printed);
    }

    #[test]
    fn polynomials_round_trip(alg in arb_presentation(), extra in 0usize..3) {
        let names = alg.names();
        for r in alg.relations().iter().skip(extra) {
            let text = r.display(&names).to_string();
            prop_assert_eq!(&parse_polynomial(&text, &alg).unwrap(), r);
        }
    }
}

#[test]
fn field_override_rereads_coefficients() {
    let opts = ParseOptions {
        field_override: Some(Field::Prime(7)),
        ..ParseOptions::default()
    };
    let doc = parse_document_with(TWIST_TEXT, &opts).unwrap();
    let t = doc.twist("T").unwrap();
    assert_eq!(t.spec.left.field(), Field::Prime(7));
    // -1/2 is 3 mod 7
    let (ln, rn) = (t.spec.left.names(), t.spec.right.names());
    assert_eq!(t.spec.value(0, 1).unwrap().display(&ln, &rn), "y # z + 3*1 # z^2");
    let e = parse_document_with(&TWIST_TEXT.replace("c = -1/2", "c = 1/7"), &opts).unwrap_err();
    assert!(e.message.contains("not invertible"), "{e}");
}
