//! Text formats: graphs, datasets and the s-expression pattern language.
//!
//! ```text
//! # graph: one triple per line
//! :a :p :b .
//! :e :r "text" .
//!
//! # dataset
//! DEFAULT { :a :p :b . }
//! GRAPH :g1 { :s :p :o . }
//!
//! # pattern
//! (not-exists (triple ?X :p :b)
//!             (filter (triple ?X :q ?Z) (not (= ?Z :d))))
//! ```

mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::formula::FilterConstraint;
use crate::pattern::Pattern;
use crate::term::{Dataset, Graph};

/// A parse failure with a 1-based position into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The offending text, empty at end of input.
    pub snippet: String,
}

impl ParseDiagnostic {
    /// Multi-line rendering with the source line and a caret.
    pub fn render(&self, src: &str, file: &str) -> String {
        let mut out = format!("{file}:{self}");
        if let Some(text) = src.lines().nth(self.line.saturating_sub(1)) {
            let caret = " ".repeat(self.column.saturating_sub(1));
            let width = self.snippet.chars().count().max(1);
            out.push_str(&format!("\n  {text}\n  {caret}{}", "^".repeat(width)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept output of the rewriter and of substitution: generated variable
    /// names, the reserved `:__naf` graph, triple patterns without variables
    /// and literals in subject or predicate position.
    pub allow_reserved: bool,
}

impl ParseOptions {
    pub fn strict() -> Self {
        Self::default()
    }

    pub fn lenient() -> Self {
        ParseOptions {
            allow_reserved: true,
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseDiagnostic> {
    parser::graph(text)
}

pub fn parse_dataset(text: &str) -> Result<Dataset, ParseDiagnostic> {
    parser::dataset(text)
}

/// Parses a pattern in strict mode.
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseDiagnostic> {
    parser::pattern(text, ParseOptions::strict())
}

pub fn parse_pattern_with(text: &str, opts: ParseOptions) -> Result<Pattern, ParseDiagnostic> {
    parser::pattern(text, opts)
}

pub fn parse_constraint(text: &str, opts: ParseOptions) -> Result<FilterConstraint, ParseDiagnostic> {
    parser::constraint(text, opts)
}

/// Single-line text form.
pub fn print_pattern(p: &Pattern) -> String {
    p.to_string()
}

/// Indented multi-line form; subpatterns that fit in `width` columns stay on
/// one line.
pub fn print_pattern_pretty(p: &Pattern, width: usize) -> String {
    let mut out = String::new();
    pretty(p, 0, width, &mut out);
    out
}

fn pretty(p: &Pattern, indent: usize, width: usize, out: &mut String) {
    let flat = p.to_string();
    if indent + flat.len() <= width {
        out.push_str(&flat);
        return;
    }
    let pad = " ".repeat(indent + 2);
    let arm = |q: &Pattern, out: &mut String| {
        out.push('\n');
        out.push_str(&pad);
        pretty(q, indent + 2, width, out);
    };
    match p {
        Pattern::Triple(_) | Pattern::Unit => out.push_str(&flat),
        Pattern::Filter(q, c) => {
            out.push_str("(filter");
            arm(q, out);
            out.push('\n');
            out.push_str(&pad);
            fmt::Write::write_fmt(out, format_args!("{c})")).expect("writing to a string");
        }
        Pattern::Graph(n, q) => {
            fmt::Write::write_fmt(out, format_args!("(graph {n}")).expect("writing to a string");
            arm(q, out);
            out.push(')');
        }
        _ => {
            let (op, l, r) = p.as_binary().expect("binary node");
            out.push('(');
            out.push_str(op.keyword());
            arm(l, out);
            arm(r, out);
            out.push(')');
        }
    }
}

/// Text form of a graph, one triple per line in canonical order.
pub fn print_graph(g: &Graph) -> String {
    g.iter().map(|t| format!("{t}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Atom;
    use crate::term::{Iri, Term, Triple};

    #[test]
    fn graph_line() {
        let g = parse_graph(":a :p :b .").unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.contains(&Triple::named(":a", ":p", ":b")));
        let g = parse_graph("# c\n<http://x/a> :p \"v\" .\n:a :p :b .\n:a :p :b .\n").unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Triple::new(Iri::new("http://x/a"), Iri::new(":p"), Term::literal("v"))));
    }

    #[test]
    fn graph_rejections() {
        for (src, needle) in [
            ("_:b :p :o .", "blank"),
            (":a ?P :o .", "variables"),
            ("\"s\" :p :o .", "literal"),
            (":a \"p\" :o .", "literal"),
            (":a :p :o", "end of input"),
        ] {
            let e = parse_graph(src).unwrap_err();
            assert!(e.message.contains(needle), "{src}: {e}");
        }
    }

    #[test]
    fn dataset_blocks() {
        let d = parse_dataset("DEFAULT { :a :p :b . }\nGRAPH :g1 { :s :p :o . :t :p :o . }\n").unwrap();
        assert_eq!(d.default_graph().len(), 1);
        assert_eq!(d.lookup(&Iri::new(":g1")).unwrap().len(), 2);
        let d = parse_dataset(":a :p :b .\nGRAPH :g { }").unwrap();
        assert_eq!(d.default_graph().len(), 1);
        assert!(d.lookup(&Iri::new(":g")).unwrap().is_empty());
    }

    #[test]
    fn dataset_rejections() {
        let e = parse_dataset("GRAPH :__naf { :s :p :o . }").unwrap_err();
        assert!(e.message.contains("reserved"));
        let e = parse_dataset("GRAPH :g { }\nGRAPH :g { }").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_dataset("DEFAULT { } DEFAULT { }").is_err());
        assert!(parse_dataset("GRAPH :g { :a :p :b .").is_err());
    }

    #[test]
    fn pattern_examples() {
        let p = parse_pattern("(diff (triple ?X :p :b) (triple ?Z :q :d))").unwrap();
        assert_eq!(
            p,
            Pattern::diff(Pattern::triple("?X", ":p", ":b"), Pattern::triple("?Z", ":q", ":d"))
        );
        assert_eq!(print_pattern(&parse_pattern("(unit)").unwrap()), "(unit)");
        let f = parse_pattern("(filter (triple ?X :p ?Y) (or (not (bound ?Y)) (= ?Y \"x\")))").unwrap();
        assert_eq!(parse_pattern(&print_pattern(&f)).unwrap(), f);
        let g = parse_pattern("(graph ?G (graph :g (triple ?X :p :o)))").unwrap();
        assert_eq!(g.to_string(), "(graph ?G (graph :g (triple ?X :p :o)))");
    }

    #[test]
    fn strict_rejections() {
        let e = parse_pattern("(triple :a :p :b)").unwrap_err();
        assert!(e.message.contains("at least one variable"));
        assert!(parse_pattern("(triple ?X' :p :b)").unwrap_err().message.contains("reserved"));
        assert!(parse_pattern("(graph :__naf (triple ?X :p :o))").is_err());
        assert!(parse_pattern("(triple ?X \"p\" :o)").is_err());
        let lenient = ParseOptions::lenient();
        assert!(parse_pattern_with("(triple :a :p :b)", lenient).is_ok());
        assert!(parse_pattern_with("(triple ?X' :p :b)", lenient).is_ok());
        assert!(parse_pattern_with("(graph :__naf (triple ?X :p :o))", lenient).is_ok());
    }

    #[test]
    fn malformed_patterns_report_positions() {
        let e = parse_pattern("(and (triple ?X :p :b)\n     (tripel ?X :q :c))").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert_eq!(e.snippet, "tripel");
        assert!(parse_pattern("(and (triple ?X :p :b)").is_err());
        assert!(parse_pattern("(unit) (unit)").is_err());
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("(filter (unit) (bound :a))").is_err());
        let rendered = e.render("(and (triple ?X :p :b)\n     (tripel ?X :q :c))", "p.sx");
        assert!(rendered.starts_with("p.sx:2:7:"));
        assert!(rendered.ends_with("^^^^^^"));
    }

    #[test]
    fn constraint_atoms() {
        let c = parse_constraint("(and true (= :a :a))", ParseOptions::lenient()).unwrap();
        assert_eq!(c.to_string(), "(and true (= :a :a))");
        assert_eq!(parse_constraint("false", ParseOptions::strict()).unwrap(), Atom::False.into());
    }

    #[test]
    fn pretty_printing_round_trips() {
        let p = Pattern::not_exists(
            Pattern::triple("?X", ":p", ":b"),
            Pattern::filter(
                Pattern::union(Pattern::triple("?X", ":q", "?Z"), Pattern::triple("?X", ":r", "?Z")),
                Atom::eq_const("Z", ":d"),
            ),
        );
        let text = print_pattern_pretty(&p, 30);
        assert!(text.lines().count() > 1);
        assert_eq!(parse_pattern(&text).unwrap(), p);
        assert_eq!(print_pattern_pretty(&p, 200), print_pattern(&p));
    }
}
