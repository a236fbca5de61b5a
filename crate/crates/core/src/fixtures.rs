//! Built-in `.galg` documents, also shipped as files under `fixtures/`.

use crate::parser::{parse_document, Document};

pub const COUNTEREXAMPLE: &str = include_str!("../fixtures/counterexample.galg");
pub const THREE_VARIABLE: &str = include_str!("../fixtures/three-variable.galg");
pub const FREE: &str = include_str!("../fixtures/free.galg");
pub const TWISTS: &str = include_str!("../fixtures/twists.galg");

/// `(file stem, text)` for every built-in document.
pub fn all() -> [(&'static str, &'static str); 4] {
    [
        ("counterexample", COUNTEREXAMPLE),
        ("three-variable", THREE_VARIABLE),
        ("free", FREE),
        ("twists", TWISTS),
    ]
}

/// Parses a built-in document; the texts are fixed, so failure is a bug.
pub fn document(text: &str) -> Document {
    parse_document(text).expect("built-in fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::print_document;
    use crate::twist::{extend_twist, TwistOutcome};

    #[test]
    fn fixtures_parse_and_round_trip() {
        for (name, text) in all() {
            let doc = document(text);
            let again = parse_document(&print_document(&doc)).unwrap();
            assert_eq!(doc, again, "{name}");
        }
    }

    #[test]
    fn twist_fixture_verdicts() {
        let doc = document(TWISTS);
        for (name, consistent) in [
            ("Family", true),
            ("Flip", true),
            ("FlipVariant", true),
            ("Conflict", false),
        ] {
            let out = extend_twist(&doc.twist(name).unwrap().spec, 6).unwrap();
            assert_eq!(matches!(out, TwistOutcome::Consistent(_)), consistent, "{name}");
        }
    }
}
