//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula     := implication
//! implication := disjunction [ ("->" | "-<") implication ]
//! disjunction := conjunction { "\/" conjunction }
//! conjunction := unary { "&" unary }
//! unary       := "~" unary | quantified | primary
//! quantified  := ("forall" | "exists") ident "." formula
//! primary     := "_|_" | "T" | "(" formula ")" | ident [ "(" term { "," term } ")" ]
//! ```
//!
//! Quantifier bodies extend as far to the right as possible. Identifiers in
//! argument position are constants when the signature declares them and
//! variables otherwise.

use thiserror::Error;

use super::{Const, Formula, Pred, Signature, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("undeclared symbol `{name}` at column {column}")]
    UndeclaredSymbol { name: String, column: usize },
    #[error("predicate `{pred}` has arity {expected} but is applied to {found} argument(s) at column {column}")]
    ArityMismatch { pred: String, expected: usize, found: usize, column: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Arrow,
    CoArrow,
    Tilde,
    Bottom,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`\\/`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::CoArrow => "`-<`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Bottom => "`_|_`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let column = |i: usize| -> usize {
        chars.get(i).map(|(b, _)| text[..*b].chars().count() + 1).unwrap_or(text.chars().count() + 1)
    };
    let starts_with = |i: usize, pat: &str| -> bool {
        chars.get(i).is_some_and(|(b, _)| text[*b..].starts_with(pat))
    };
    while i < chars.len() {
        let (_, ch) = chars[i];
        let col = column(i);
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = if starts_with(i, "_|_") {
            (Tok::Bottom, 3)
        } else if starts_with(i, "\\/") {
            (Tok::Or, 2)
        } else if starts_with(i, "->") {
            (Tok::Arrow, 2)
        } else if starts_with(i, "-<") {
            (Tok::CoArrow, 2)
        } else {
            match ch {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                '&' => (Tok::And, 1),
                '~' => (Tok::Tilde, 1),
                c if c.is_alphanumeric() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().map(|(_, c)| *c).collect();
                    out.push((Tok::Ident(word), col));
                    i = j;
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax { column: col, message: format!("unexpected character `{other}`") })
                }
            }
        };
        out.push((tok, col));
        i += width;
    }
    out.push((Tok::End, column(chars.len())));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", describe(&want))))
        }
    }

    fn unexpected(&self, context: &str) -> ParseError {
        ParseError::Syntax { column: self.column(), message: format!("{context}, found {}", describe(self.peek())) }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Ok(Formula::implies(left, self.formula()?))
            }
            Tok::CoArrow => {
                self.bump();
                Ok(Formula::co_implies(left, self.formula()?))
            }
            _ => Ok(left),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(word) if word == "forall" || word == "exists" => {
                self.bump();
                let var = match self.bump() {
                    Tok::Ident(x) if !is_keyword(&x) => x,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("expected a variable after quantifier"));
                    }
                };
                if self.sig.has_const(&var) || self.sig.arity(&var).is_some() {
                    return Err(ParseError::Syntax {
                        column: self.toks[self.pos - 1].1,
                        message: format!("`{var}` is a declared symbol and cannot be bound"),
                    });
                }
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if word == "forall" {
                    Formula::Forall(Var::from(var), Box::new(body))
                } else {
                    Formula::Exists(Var::from(var), Box::new(body))
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Bottom => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) if word == "T" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(word) if !is_keyword(&word) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => {
                                self.bump();
                                break;
                            }
                            _ => return Err(self.unexpected("expected `,` or `)` in argument list")),
                        }
                    }
                }
                match self.sig.arity(&word) {
                    None => Err(ParseError::UndeclaredSymbol { name: word, column: col }),
                    Some(n) if n != args.len() => {
                        Err(ParseError::ArityMismatch { pred: word, expected: n, found: args.len(), column: col })
                    }
                    Some(_) => Ok(Formula::Atom { pred: Pred::from(word), args }),
                }
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Ident(word) if !is_keyword(&word) => {
                self.bump();
                if self.sig.has_const(&word) {
                    Ok(Term::Const(Const::from(word)))
                } else if self.sig.arity(&word).is_some() {
                    Err(ParseError::Syntax { column: col, message: format!("predicate `{word}` used as a term") })
                } else {
                    Ok(Term::Var(Var::from(word)))
                }
            }
            _ => Err(self.unexpected("expected a term")),
        }
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(word, "forall" | "exists" | "T")
}

/// Parses `text` against `sig`. Columns in errors are 1-based character positions.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected end of input"));
    }
    Ok(f)
}
