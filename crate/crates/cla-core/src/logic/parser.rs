//! Text syntax for formulas.
//!
//! ```text
//! formula := NUMBER
//!          | VAR '=' VAR
//!          | RELNAME '(' var {',' var} ')'
//!          | 'const' '(' NUMBER ')'
//!          | CONNNAME '(' formula {',' formula} ')'
//!          | AGGNAME '{' VAR '}' '(' formula ')'
//!          | ('exists' | 'forall') VAR '.' formula
//! ```
//!
//! Names followed by `(` resolve first against the signature's relations,
//! then against the built-in connectives. Aggregator names are `min`, `max`
//! and `am`. Bound variables are renamed apart: after parsing, every binder
//! has a name distinct from all other binders and from every free variable
//! (a clashing binder `y` becomes `y_2`, `y_3`, …).

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcspace::{builtin, const_conn, Aggregator};
use crate::logic::{Formula, Quantifier, Signature, Var};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("name `{s}`"),
            Tok::Number(v) => format!("number `{v}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
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
            ',' => {
                i += 1;
                Tok::Comma
            }
            '=' => {
                i += 1;
                Tok::Equals
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            _ if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len()
                    && bytes[i] == b'.'
                    && i + 1 < bytes.len()
                    && (bytes[i + 1] as char).is_ascii_digit()
                {
                    i += 1;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("invalid number `{text}`"),
                })?;
                Tok::Number(value)
            }
            _ => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
    /// Scope stack: source binder name -> placeholder variable.
    env: Vec<(String, Var)>,
    /// Placeholder -> source name, in binder encounter order.
    binders: Vec<(Var, String)>,
    free_names: BTreeSet<String>,
    next_id: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].1
    }

    fn here(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<usize> {
        let (p, t) = self.bump();
        if &t == want {
            Ok(p)
        } else {
            self.fail(p, format!("expected {what}, found {}", t.describe()))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(usize, String)> {
        let (p, t) = self.bump();
        match t {
            Tok::Ident(name) if name != "exists" && name != "forall" => Ok((p, name)),
            other => self.fail(p, format!("expected {what}, found {}", other.describe())),
        }
    }

    /// Resolves a variable occurrence: innermost matching binder, else free.
    fn resolve_var(&mut self, name: &str) -> Var {
        for (src, var) in self.env.iter().rev() {
            if src == name {
                return var.clone();
            }
        }
        self.free_names.insert(name.to_string());
        Var::new(name)
    }

    fn enter_binder(&mut self, name: String) -> Var {
        let placeholder = Var::new(format!("#{}", self.next_id));
        self.next_id += 1;
        self.binders.push((placeholder.clone(), name.clone()));
        self.env.push((name, placeholder.clone()));
        placeholder
    }

    fn exit_binder(&mut self) {
        self.env.pop();
    }

    fn formula(&mut self) -> Result<Formula> {
        let (p, t) = self.bump();
        match t {
            Tok::Number(value) => Formula::constant(value)
                .map_err(|e| self.at(p, e)),
            Tok::Ident(name) if name == "exists" || name == "forall" => {
                let quantifier = if name == "exists" {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let (_, var_name) = self.expect_ident("a variable after the quantifier")?;
                self.expect(&Tok::Dot, "`.` after the quantified variable")?;
                let var = self.enter_binder(var_name);
                let body = self.formula();
                self.exit_binder();
                Formula::quant(quantifier, var, body?).map_err(|e| self.at(p, e))
            }
            Tok::Ident(name) => match self.peek() {
                Tok::LBrace => self.aggregation(p, &name),
                Tok::LParen => self.application(p, &name),
                Tok::Equals => {
                    self.bump();
                    let left = self.resolve_var(&name);
                    let (_, right_name) = self.expect_ident("a variable after `=`")?;
                    let right = self.resolve_var(&right_name);
                    Ok(Formula::eq(left, right))
                }
                other => self.fail(
                    self.here(),
                    format!(
                        "expected `(`, `{{`, or `=` after `{name}`, found {}",
                        other.describe()
                    ),
                ),
            },
            other => self.fail(p, format!("expected a formula, found {}", other.describe())),
        }
    }

    fn aggregation(&mut self, p: usize, name: &str) -> Result<Formula> {
        let agg = Aggregator::from_str(name).map_err(|e| self.at(p, e))?;
        self.expect(&Tok::LBrace, "`{`")?;
        let (_, var_name) = self.expect_ident("the aggregation variable")?;
        self.expect(&Tok::RBrace, "`}` after the aggregation variable")?;
        self.expect(&Tok::LParen, "`(` before the aggregation body")?;
        let var = self.enter_binder(var_name);
        let body = self.formula();
        self.exit_binder();
        let body = body?;
        self.expect(&Tok::RParen, "`)` after the aggregation body")?;
        Formula::agg(agg, var, body).map_err(|e| self.at(p, e))
    }

    fn application(&mut self, p: usize, name: &str) -> Result<Formula> {
        self.expect(&Tok::LParen, "`(`")?;
        if self.sig.arity_of(name).is_some() {
            let mut args = Vec::new();
            loop {
                let (_, arg) = self.expect_ident("a variable")?;
                args.push(self.resolve_var(&arg));
                match self.bump() {
                    (_, Tok::Comma) => continue,
                    (_, Tok::RParen) => break,
                    (q, other) => {
                        return self.fail(
                            q,
                            format!("expected `,` or `)`, found {}", other.describe()),
                        )
                    }
                }
            }
            return Formula::atom(self.sig, name, args).map_err(|e| self.at(p, e));
        }
        if name == "const" {
            let (q, t) = self.bump();
            let value = match t {
                Tok::Number(v) => v,
                other => {
                    return self.fail(q, format!("expected a number, found {}", other.describe()))
                }
            };
            self.expect(&Tok::RParen, "`)` after the constant")?;
            let conn = const_conn(value).map_err(|e| self.at(q, e))?;
            return Formula::conn(conn, Vec::new()).map_err(|e| self.at(p, e));
        }
        let conn = builtin(name).map_err(|e| {
            let message = match &e {
                Error::Formula(m) if m.starts_with("unknown connective") => {
                    format!("unknown relation or connective `{name}`")
                }
                other => other.to_string(),
            };
            Error::Parse {
                position: p,
                message,
            }
        })?;
        let mut args = Vec::new();
        if self.peek() == &Tok::RParen {
            self.bump();
        } else {
            loop {
                args.push(self.formula()?);
                match self.bump() {
                    (_, Tok::Comma) => continue,
                    (_, Tok::RParen) => break,
                    (q, other) => {
                        return self.fail(
                            q,
                            format!("expected `,` or `)`, found {}", other.describe()),
                        )
                    }
                }
            }
        }
        Formula::conn(conn, args).map_err(|e| self.at(p, e))
    }

    fn at(&self, position: usize, e: Error) -> Error {
        Error::Parse {
            position,
            message: e.to_string(),
        }
    }

    /// Gives every binder its final name: the source name when unclaimed,
    /// otherwise the first `name_k` not yet taken.
    fn final_names(&self) -> HashMap<Var, Var> {
        let mut assigned = self.free_names.clone();
        let mut map = HashMap::new();
        for (placeholder, original) in &self.binders {
            let mut candidate = original.clone();
            let mut k = 2;
            while assigned.contains(&candidate) {
                candidate = format!("{original}_{k}");
                k += 1;
            }
            assigned.insert(candidate.clone());
            map.insert(placeholder.clone(), Var::new(candidate));
        }
        map
    }
}

fn rename(f: &Formula, map: &HashMap<Var, Var>) -> Formula {
    let m = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match f {
        Formula::Const { value } => Formula::Const { value: *value },
        Formula::Eq { left, right } => Formula::Eq {
            left: m(left),
            right: m(right),
        },
        Formula::Atom { rel, args } => Formula::Atom {
            rel: rel.clone(),
            args: args.iter().map(&m).collect(),
        },
        Formula::Conn { conn, args } => Formula::Conn {
            conn: Arc::clone(conn),
            args: args.iter().map(|g| rename(g, map)).collect(),
        },
        Formula::Agg { agg, var, body } => Formula::Agg {
            agg: agg.clone(),
            var: m(var),
            body: Box::new(rename(body, map)),
        },
        Formula::Quant {
            quantifier,
            var,
            body,
        } => Formula::Quant {
            quantifier: *quantifier,
            var: m(var),
            body: Box::new(rename(body, map)),
        },
    }
}

/// Parses a formula against a signature. Errors carry the byte offset of
/// the offending token.
pub fn parse_formula(src: &str, sig: &Signature) -> Result<Formula> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        sig,
        env: Vec::new(),
        binders: Vec::new(),
        free_names: BTreeSet::new(),
        next_id: 0,
    };
    let raw = parser.formula()?;
    if parser.peek() != &Tok::Eof {
        let p = parser.here();
        let found = parser.peek().describe();
        return parser.fail(p, format!("trailing input: {found}"));
    }
    let f = rename(&raw, &parser.final_names());
    debug_assert!(f.validate(sig).is_ok());
    Ok(f)
}
