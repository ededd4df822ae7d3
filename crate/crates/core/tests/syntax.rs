use sparql_negation::rewrite::{normalize, rewrite_diff_to_naf, NafScheme};
use sparql_negation::syntax::{
    parse_dataset, parse_graph, parse_pattern, parse_pattern_with, print_graph, print_pattern,
    print_pattern_pretty, ParseOptions,
};
use sparql_negation::{Iri, Pattern};

#[test]
fn one_line_graph() {
    let g = parse_graph(":a :p :b .").unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(print_graph(&g), ":a :p :b .\n");
    assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
}

#[test]
fn diff_of_two_triples() {
    let p = parse_pattern("(diff (triple ?X :p :b) (triple ?Z :q :d))").unwrap();
    assert_eq!(p, Pattern::diff(Pattern::triple("?X", ":p", ":b"), Pattern::triple("?Z", ":q", ":d")));
}

#[test]
fn ground_triple_pattern_is_rejected() {
    let e = parse_pattern("(triple :a :p :b)").unwrap_err();
    assert_eq!((e.line, e.column), (1, 1));
    assert!(e.message.contains("variable"));
}

#[test]
fn unit_prints_back() {
    assert_eq!(print_pattern(&parse_pattern("(unit)").unwrap()), "(unit)");
}

#[test]
fn diagnostics_point_into_the_source() {
    let src = "(and (triple ?X :p :b)\n     (tripel ?X :q ?Y))";
    let e = parse_pattern(src).unwrap_err();
    assert_eq!(e.line, 2);
    assert_eq!(e.snippet, "tripel");
    let text = e.render(src, "q.sx");
    assert!(text.starts_with("q.sx:2:"));
    assert!(text.ends_with("^^^^^^"));
}

#[test]
fn fresh_marker_needs_lenient_mode() {
    let src = "(triple ?X' :p :b)";
    assert!(parse_pattern(src).is_err());
    assert!(parse_pattern_with(src, ParseOptions::lenient()).is_ok());
    assert!(parse_pattern("(graph :__naf (triple ?X :p :o))").is_err());
}

#[test]
fn rewriter_output_round_trips() {
    let src = "(minus (opt (triple ?X :p ?Y) (filter (triple ?Y :q ?Z) (not (= ?Z :a)))) \
               (not-exists (triple ?X :q ?W) (triple ?W :p \"two words\")))";
    let p = parse_pattern(src).unwrap();
    let n = normalize(&p).output;
    let flat = print_pattern(&n);
    assert_eq!(parse_pattern_with(&flat, ParseOptions::lenient()).unwrap(), n);
    let pretty = print_pattern_pretty(&n, 60);
    assert!(pretty.lines().count() > 1);
    assert_eq!(parse_pattern_with(&pretty, ParseOptions::lenient()).unwrap(), n);
    let d = parse_pattern("(diff (triple ?X :p ?Y) (triple ?Y :q ?Z))").unwrap();
    let enc = rewrite_diff_to_naf(&d, NafScheme::Polleres).unwrap().output;
    assert!(enc.graph_iris().contains(&Iri::naf_graph()));
    assert_eq!(parse_pattern_with(&print_pattern(&enc), ParseOptions::lenient()).unwrap(), enc);
}

#[test]
fn dataset_prints_back() {
    let d = parse_dataset("DEFAULT { :a :p :b . }\nGRAPH :g2 { :s :p \"x\" . }\nGRAPH :g1 { }").unwrap();
    assert_eq!(parse_dataset(&d.to_string()).unwrap(), d);
}
