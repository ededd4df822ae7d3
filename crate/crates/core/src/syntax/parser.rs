use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseDiagnostic, ParseOptions};
use crate::formula::{Atom, FilterConstraint};
use crate::pattern::{BinaryOp, GraphName, Pattern, TriplePattern};
use crate::term::{Dataset, Graph, Iri, Literal, Term, TermPattern, Triple, Var, FRESH_MARKER};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    opts: ParseOptions,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str, opts: ParseOptions) -> Result<Self, ParseDiagnostic> {
        let toks = tokenize(src)?;
        let lines = src.split('\n').count();
        let last = src.rsplit('\n').next().unwrap_or("");
        Ok(Parser {
            toks,
            pos: 0,
            opts,
            end: (lines.max(1), last.chars().count() + 1),
        })
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned, ParseDiagnostic> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.eof("unexpected end of input")),
        }
    }

    fn eof(&self, msg: &str) -> ParseDiagnostic {
        ParseDiagnostic {
            line: self.end.0,
            column: self.end.1,
            message: msg.into(),
            snippet: String::new(),
        }
    }

    fn at(t: &Spanned, msg: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: t.line,
            column: t.column,
            message: msg.into(),
            snippet: t.text.clone(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<Spanned, ParseDiagnostic> {
        let t = self.next()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(Self::at(&t, format!("expected {}, found {}", want.describe(), t.tok.describe())))
        }
    }

    fn done(&self) -> Result<(), ParseDiagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Self::at(t, format!("unexpected {} after the end of input", t.tok.describe()))),
        }
    }

    fn var(&self, t: &Spanned, name: &str) -> Result<Var, ParseDiagnostic> {
        if !self.opts.allow_reserved && name.contains(FRESH_MARKER) {
            return Err(Self::at(
                t,
                format!("variable names may not contain {FRESH_MARKER:?}; it is reserved for generated variables"),
            ));
        }
        Ok(Var::new(name))
    }

    // ---- graphs and datasets ----

    fn ground(&mut self, role: &str) -> Result<(Spanned, Term), ParseDiagnostic> {
        let t = self.next()?;
        let term = match &t.tok {
            Tok::Prefixed(s) => Term::Iri(Iri::new(s.clone())),
            Tok::Absolute(s) => Term::Iri(Iri::new(s.clone())),
            Tok::Literal(s) => Term::Literal(Literal::new(s.clone())),
            Tok::Blank(_) => return Err(Self::at(&t, "blank nodes are not supported")),
            Tok::Var(_) => return Err(Self::at(&t, format!("variables are not allowed in graph data ({role})"))),
            other => return Err(Self::at(&t, format!("expected {role}, found {}", other.describe()))),
        };
        Ok((t, term))
    }

    fn triple(&mut self) -> Result<Triple, ParseDiagnostic> {
        let iri = |p: &mut Self, role: &str| -> Result<Iri, ParseDiagnostic> {
            let (t, term) = p.ground(role)?;
            match term {
                Term::Iri(i) => Ok(i),
                Term::Literal(_) => Err(Self::at(&t, format!("the {role} must be an iri, not a literal"))),
            }
        };
        let s = iri(self, "subject")?;
        let p = iri(self, "predicate")?;
        let (_, o) = self.ground("object")?;
        self.expect(Tok::Dot)?;
        Ok(Triple::new(s, p, o))
    }

    fn triples_until_brace(&mut self) -> Result<Graph, ParseDiagnostic> {
        let mut g = Graph::new();
        loop {
            match self.peek() {
                Some(t) if t.tok == Tok::RBrace => {
                    self.pos += 1;
                    return Ok(g);
                }
                None => return Err(self.eof("missing '}'")),
                _ => {
                    g.insert(self.triple()?);
                }
            }
        }
    }

    fn graph_doc(&mut self) -> Result<Graph, ParseDiagnostic> {
        let mut g = Graph::new();
        while self.peek().is_some() {
            g.insert(self.triple()?);
        }
        Ok(g)
    }

    fn dataset_doc(&mut self) -> Result<Dataset, ParseDiagnostic> {
        let mut default = Graph::new();
        let mut saw_default = false;
        let mut named: Vec<(Spanned, Iri, Graph)> = Vec::new();
        while let Some(t) = self.peek().cloned() {
            match &t.tok {
                Tok::Word(w) if w == "DEFAULT" => {
                    self.pos += 1;
                    if saw_default {
                        return Err(Self::at(&t, "DEFAULT block given twice"));
                    }
                    saw_default = true;
                    self.expect(Tok::LBrace)?;
                    default = default.union(&self.triples_until_brace()?);
                }
                Tok::Word(w) if w == "GRAPH" => {
                    self.pos += 1;
                    let nt = self.next()?;
                    let name = match &nt.tok {
                        Tok::Prefixed(s) | Tok::Absolute(s) => Iri::new(s.clone()),
                        other => return Err(Self::at(&nt, format!("expected a graph iri, found {}", other.describe()))),
                    };
                    self.expect(Tok::LBrace)?;
                    let g = self.triples_until_brace()?;
                    named.push((nt, name, g));
                }
                _ => {
                    default.insert(self.triple()?);
                }
            }
        }
        let mut d = Dataset::new(default);
        for (t, name, g) in named {
            if name == Iri::naf_graph() {
                return Err(Self::at(&t, format!("graph name {name} is reserved")));
            }
            d.add_named(name, g).map_err(|e| Self::at(&t, e.to_string()))?;
        }
        Ok(d)
    }

    // ---- patterns ----

    fn position(&mut self) -> Result<(Spanned, TermPattern), ParseDiagnostic> {
        let t = self.next()?;
        let tp = match &t.tok {
            Tok::Var(v) => TermPattern::Var(self.var(&t, v)?),
            Tok::Prefixed(s) | Tok::Absolute(s) => TermPattern::Term(Term::Iri(Iri::new(s.clone()))),
            Tok::Literal(s) => TermPattern::Term(Term::Literal(Literal::new(s.clone()))),
            Tok::Blank(_) => return Err(Self::at(&t, "blank nodes are not supported")),
            other => return Err(Self::at(&t, format!("expected a term or variable, found {}", other.describe()))),
        };
        Ok((t, tp))
    }

    fn pattern(&mut self) -> Result<Pattern, ParseDiagnostic> {
        let open = self.expect(Tok::LParen)?;
        let head = self.next()?;
        let kw = match &head.tok {
            Tok::Word(w) => w.clone(),
            other => return Err(Self::at(&head, format!("expected a pattern keyword, found {}", other.describe()))),
        };
        let p = match kw.as_str() {
            "triple" => {
                let (st, s) = self.position()?;
                let (pt, p) = self.position()?;
                let (_, o) = self.position()?;
                if !self.opts.allow_reserved {
                    for (t, x, role) in [(&st, &s, "subject"), (&pt, &p, "predicate")] {
                        if let TermPattern::Term(Term::Literal(_)) = x {
                            return Err(Self::at(t, format!("the {role} of a triple pattern cannot be a literal")));
                        }
                    }
                }
                let tp = TriplePattern::new(s, p, o);
                if !self.opts.allow_reserved && tp.vars().is_empty() {
                    return Err(Self::at(&open, "a triple pattern needs at least one variable"));
                }
                Pattern::Triple(tp)
            }
            "unit" => Pattern::Unit,
            "filter" => {
                let p = self.pattern()?;
                let c = self.constraint()?;
                Pattern::filter(p, c)
            }
            "graph" => {
                let nt = self.next()?;
                let name = match &nt.tok {
                    Tok::Var(v) => GraphName::Var(self.var(&nt, v)?),
                    Tok::Prefixed(s) | Tok::Absolute(s) => {
                        let iri = Iri::new(s.clone());
                        if !self.opts.allow_reserved && iri == Iri::naf_graph() {
                            return Err(Self::at(&nt, format!("graph name {iri} is reserved")));
                        }
                        GraphName::Iri(iri)
                    }
                    other => return Err(Self::at(&nt, format!("expected a graph iri or variable, found {}", other.describe()))),
                };
                Pattern::graph(name, self.pattern()?)
            }
            other => {
                let op = match other {
                    "and" => BinaryOp::And,
                    "union" => BinaryOp::Union,
                    "opt" => BinaryOp::Opt,
                    "minus" => BinaryOp::Minus,
                    "not-exists" => BinaryOp::NotExists,
                    "diff" => BinaryOp::Diff,
                    _ => return Err(Self::at(&head, format!("unknown pattern keyword '{other}'"))),
                };
                let l = self.pattern()?;
                let r = self.pattern()?;
                op.build(l, r)
            }
        };
        match self.next() {
            Ok(t) if t.tok == Tok::RParen => Ok(p),
            Ok(t) => Err(Self::at(&t, format!("expected ')' to close '{kw}', found {}", t.tok.describe()))),
            Err(_) => Err(Self::at(&open, format!("unclosed '({kw}'"))),
        }
    }

    fn constraint(&mut self) -> Result<FilterConstraint, ParseDiagnostic> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) if w == "true" => return Ok(Atom::True.into()),
            Tok::Word(w) if w == "false" => return Ok(Atom::False.into()),
            Tok::LParen => {}
            other => return Err(Self::at(&t, format!("expected a filter constraint, found {}", other.describe()))),
        }
        let head = self.next()?;
        let kw = match &head.tok {
            Tok::Word(w) => w.clone(),
            other => return Err(Self::at(&head, format!("expected a constraint operator, found {}", other.describe()))),
        };
        let c = match kw.as_str() {
            "=" => {
                let (_, a) = self.position()?;
                let (_, b) = self.position()?;
                Atom::Eq(a, b).into()
            }
            "bound" => {
                let vt = self.next()?;
                match &vt.tok {
                    Tok::Var(v) => Atom::Bound(self.var(&vt, v)?).into(),
                    other => return Err(Self::at(&vt, format!("bound expects a variable, found {}", other.describe()))),
                }
            }
            "not" => FilterConstraint::not(self.constraint()?),
            "and" => {
                let a = self.constraint()?;
                FilterConstraint::and(a, self.constraint()?)
            }
            "or" => {
                let a = self.constraint()?;
                FilterConstraint::or(a, self.constraint()?)
            }
            other => return Err(Self::at(&head, format!("unknown constraint operator '{other}'"))),
        };
        match self.next() {
            Ok(r) if r.tok == Tok::RParen => Ok(c),
            Ok(r) => Err(Self::at(&r, format!("expected ')' to close '{kw}', found {}", r.tok.describe()))),
            Err(_) => Err(Self::at(&t, format!("unclosed '({kw}'"))),
        }
    }
}

pub(crate) fn graph(src: &str) -> Result<Graph, ParseDiagnostic> {
    let mut p = Parser::new(src, ParseOptions::default())?;
    p.graph_doc()
}

pub(crate) fn dataset(src: &str) -> Result<Dataset, ParseDiagnostic> {
    let mut p = Parser::new(src, ParseOptions::default())?;
    p.dataset_doc()
}

pub(crate) fn pattern(src: &str, opts: ParseOptions) -> Result<Pattern, ParseDiagnostic> {
    let mut p = Parser::new(src, opts)?;
    if p.peek().is_none() {
        return Err(p.eof("empty pattern"));
    }
    let out = p.pattern()?;
    p.done()?;
    Ok(out)
}

pub(crate) fn constraint(src: &str, opts: ParseOptions) -> Result<FilterConstraint, ParseDiagnostic> {
    let mut p = Parser::new(src, opts)?;
    let out = p.constraint()?;
    p.done()?;
    Ok(out)
}
