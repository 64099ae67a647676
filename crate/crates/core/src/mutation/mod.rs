//! Operator registry and mutant generator.

pub mod engine;
pub mod operators;

pub use engine::{apply_mutant, generate, generate_mutants, Mutant, MutantDescriptor, MutationError};
pub use operators::{Membership, Operator, OperatorSet};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, pretty_print};

    fn summary(src: &str, set: OperatorSet) -> Vec<(String, String, String)> {
        let p = parse(src).unwrap();
        generate_mutants(&p, set)
            .into_iter()
            .map(|d| (d.operator.name().to_string(), d.original, d.replacement))
            .collect()
    }

    fn t(op: &str, a: &str, b: &str) -> (String, String, String) {
        (op.into(), a.into(), b.into())
    }

    #[test]
    fn common_set_on_single_comparison() {
        // Enumerated by hand: ReturnValues on the return statement, the two
        // relational pairings, and one InlineConst per literal.
        let got = summary("fn main() -> bool { return 1 < 2; }", OperatorSet::Common);
        assert_eq!(
            got,
            vec![
                t("ReturnValues", "return 1 < 2;", "return !(1 < 2);"),
                t("CondBoundary", "1 < 2", "1 <= 2"),
                t("NegateCond", "1 < 2", "1 >= 2"),
                t("InlineConst", "1", "0"),
                t("InlineConst", "2", "3"),
            ]
        );
    }

    #[test]
    fn comprehensive_set_on_single_comparison() {
        // ROR: 6 relational operators minus identity. CRCR on 1: {-1, 0, 2}
        // (1 is identity, a-1 repeats 0); on 2: {-2, 1, 0, 3}.
        let got = summary("fn main() -> bool { return 1 < 2; }", OperatorSet::Comprehensive);
        let ror: Vec<_> = got.iter().filter(|m| m.0 == "ROR").map(|m| m.2.as_str()).collect();
        assert_eq!(ror, ["1 != 2", "1 <= 2", "1 == 2", "1 > 2", "1 >= 2"]);
        let crcr: Vec<_> = got.iter().filter(|m| m.0 == "CRCR").map(|m| m.2.as_str()).collect();
        assert_eq!(crcr, ["-1", "0", "2", "-2", "0", "1", "3"]);
        assert_eq!(got.len(), 13);
        assert!(got.iter().all(|m| m.0 != "CondBoundary" && m.0 != "NegateCond" && m.0 != "InlineConst"));
    }

    #[test]
    fn no_sites_no_mutants() {
        for set in [OperatorSet::Common, OperatorSet::Comprehensive] {
            assert!(summary("fn main() -> void { }", set).is_empty());
        }
    }

    #[test]
    fn ids_are_dense_and_ordered() {
        let p = parse("fn f(a: int, b: int) -> int { if (a < b) { return a + b; } return a * 2; }").unwrap();
        let ms = generate_mutants(&p, OperatorSet::Comprehensive);
        for (i, m) in ms.iter().enumerate() {
            assert_eq!(m.id as usize, i);
        }
        for w in ms.windows(2) {
            let ka = (w[0].target, w[0].operator.name(), &w[0].replacement);
            let kb = (w[1].target, w[1].operator.name(), &w[1].replacement);
            assert!(ka < kb);
        }
    }

    #[test]
    fn apply_condition_boundary() {
        let p = parse("fn main() -> bool { return 1 < 2; }").unwrap();
        let m = generate_mutants(&p, OperatorSet::Common)
            .into_iter()
            .find(|m| m.operator == Operator::CondBoundary)
            .unwrap();
        let mutated = apply_mutant(&p, &m).unwrap();
        assert!(pretty_print(&mutated).contains("return 1 <= 2;"));
        assert!(pretty_print(&p).contains("return 1 < 2;"));
    }

    #[test]
    fn apply_obbn() {
        let p = parse("fn f(a: int, b: int) -> int { return a & b; }").unwrap();
        let m = generate_mutants(&p, OperatorSet::Comprehensive)
            .into_iter()
            .find(|m| m.operator == Operator::OBBN)
            .unwrap();
        let text = pretty_print(&apply_mutant(&p, &m).unwrap());
        assert!(text.contains("return a | b;"), "{text}");
    }

    #[test]
    fn apply_matches_generated_text_and_round_trips() {
        let src = "fn g(x: int) -> void { }\n\
                   fn f(a: int, b: bool) -> int { let c: int = -a; c++; g(c); \
                   switch (c) { case 1: { c = 5; } default: { c = 2; } } \
                   while (b && c > 0) { c = c - 1; } return c % 3; }";
        let p = parse(src).unwrap();
        for set in [OperatorSet::Common, OperatorSet::Comprehensive] {
            for m in generate(&p, set) {
                let applied = apply_mutant(&p, &m.descriptor).unwrap();
                assert_eq!(pretty_print(&applied), m.text, "{}", m.descriptor.description);
                let reparsed = parse(&m.text).unwrap();
                assert!(reparsed.structurally_eq(&applied));
            }
        }
    }

    #[test]
    fn stale_descriptor_is_rejected() {
        let p = parse("fn main() -> bool { return 1 < 2; }").unwrap();
        let other = parse("fn main() -> bool { return 3 < 2; }").unwrap();
        let m = generate_mutants(&p, OperatorSet::Common)
            .into_iter()
            .find(|m| m.operator == Operator::InlineConst)
            .unwrap();
        assert!(matches!(apply_mutant(&other, &m), Err(MutationError::StaleDescriptor { .. })));
        let mut moved = m.clone();
        moved.target = crate::lang::NodeId(42);
        assert!(apply_mutant(&p, &moved).is_err());
    }

    #[test]
    fn switch_without_default_is_skipped() {
        let src = "fn f(x: int) -> int { switch (x) { case 1: { return 2; } } return 0; }";
        assert!(summary(src, OperatorSet::Common).iter().all(|m| m.0 != "Switch"));
        let src = "fn f(x: int) -> int { switch (x) { case 1: { return 2; } default: { } } return 0; }";
        assert_eq!(summary(src, OperatorSet::Common).iter().filter(|m| m.0 == "Switch").count(), 1);
    }

    #[test]
    fn member_variable_skips_default_initializers() {
        let got = summary("fn f() -> int { let a: int = 0; let b: bool = false; a = 5; return a; }", OperatorSet::Common);
        let mv: Vec<_> = got.iter().filter(|m| m.0 == "MemberVariable").collect();
        assert_eq!(mv, vec![&t("MemberVariable", "a = 5;", "a = 0;")]);
    }

    #[test]
    fn remove_cond_and_return_values() {
        let got = summary("fn f(a: int) -> int { if (a > 0) { return 0; } return a; }", OperatorSet::Common);
        assert!(got.contains(&t("RemoveCond", "a > 0", "true")));
        assert!(got.contains(&t("RemoveCond", "a > 0", "false")));
        assert!(got.contains(&t("ReturnValues", "return 0;", "return 1;")));
        assert!(got.contains(&t("ReturnValues", "return a;", "return a + 1;")));
    }

    #[test]
    fn calls_increments_and_negation() {
        let src = "fn v(x: int) -> void { } fn k() -> int { return 3; }\n\
                   fn f(a: int) -> int { v(a); a++; --a; return -a + k(); }";
        let got = summary(src, OperatorSet::Common);
        assert!(got.contains(&t("VoidMethodCall", "v(a);", "")));
        assert!(got.contains(&t("Increments", "a++", "a--")));
        assert!(got.contains(&t("Increments", "--a", "++a")));
        assert!(got.contains(&t("InvertNeg", "-a", "a")));
        assert!(got.contains(&t("MethodCall", "k()", "0")));
    }

    #[test]
    fn comprehensive_only_operators() {
        let src = "fn f(a: int, b: int, p: bool) -> int { if (p) { return a & b; } return a + b; }";
        let got = summary(src, OperatorSet::Comprehensive);
        assert!(got.contains(&t("OBBN", "a & b", "a | b")));
        assert!(got.contains(&t("AOD", "a + b", "a")));
        assert!(got.contains(&t("AOD", "a + b", "b")));
        assert!(got.contains(&t("AOR", "a + b", "a * b")));
        assert!(got.contains(&t("ABS", "a", "-a")));
        assert!(got.contains(&t("UOI", "a", "a++")));
        assert!(got.contains(&t("UOI", "p", "!p")));
        assert!(got.iter().all(|m| m.0 != "Math"));
    }
}
