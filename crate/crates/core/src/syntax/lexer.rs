use super::ParseDiagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Dot,
    /// `?name`, stored without the `?`.
    Var(String),
    /// `:name`, stored with the `:`.
    Prefixed(String),
    /// `<...>`, stored without brackets.
    Absolute(String),
    Literal(String),
    /// `_:name`; recognised only to be rejected with a clear message.
    Blank(String),
    Word(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Var(v) => format!("variable ?{v}"),
            Tok::Prefixed(s) => format!("iri {s}"),
            Tok::Absolute(s) => format!("iri <{s}>"),
            Tok::Literal(s) => format!("literal {s:?}"),
            Tok::Blank(s) => format!("blank node _:{s}"),
            Tok::Word(w) => format!("'{w}'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub text: String,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseDiagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String, snippet: String| ParseDiagnostic {
        line,
        column,
        message,
        snippet,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let (l0, c0) = (line, col);
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '{' => {
                i += 1;
                Tok::LBrace
            }
            '}' => {
                i += 1;
                Tok::RBrace
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '?' => {
                i += 1;
                while i < chars.len() && (is_name_char(chars[i]) || chars[i] == '\'') {
                    i += 1;
                }
                let name: String = chars[start + 1..i].iter().collect();
                if name.is_empty() {
                    return Err(err(l0, c0, "expected a variable name after '?'".into(), "?".into()));
                }
                Tok::Var(name)
            }
            ':' => {
                i += 1;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                Tok::Prefixed(chars[start..i].iter().collect())
            }
            '_' if chars.get(i + 1) == Some(&':') => {
                i += 2;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                Tok::Blank(chars[start + 2..i].iter().collect())
            }
            '<' => {
                i += 1;
                while i < chars.len() && chars[i] != '>' && chars[i] != '\n' && !chars[i].is_whitespace() {
                    i += 1;
                }
                if chars.get(i) != Some(&'>') {
                    let snippet: String = chars[start..i].iter().collect();
                    return Err(err(l0, c0, "unterminated iri".into(), snippet));
                }
                i += 1;
                Tok::Absolute(chars[start + 1..i - 1].iter().collect())
            }
            '"' => {
                i += 1;
                let mut value = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => {
                            let snippet: String = chars[start..i].iter().collect();
                            return Err(err(l0, c0, "unterminated literal".into(), snippet));
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let e = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('r') => '\r',
                                other => {
                                    let snippet = other.map(|c| format!("\\{c}")).unwrap_or_else(|| "\\".into());
                                    return Err(err(line, col + (i - start), "unknown escape in literal".into(), snippet));
                                }
                            };
                            value.push(e);
                            i += 2;
                        }
                        Some(&ch) => {
                            value.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Literal(value)
            }
            c if is_name_char(c) || c == '=' => {
                while i < chars.len() && (is_name_char(chars[i]) || chars[i] == '=') {
                    i += 1;
                }
                Tok::Word(chars[start..i].iter().collect())
            }
            other => {
                return Err(err(l0, c0, format!("unexpected character {other:?}"), other.to_string()));
            }
        };
        col += i - start;
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
            text: chars[start..i].iter().collect(),
        });
    }
    Ok(out)
}
