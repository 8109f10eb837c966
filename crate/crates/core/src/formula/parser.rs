use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meta(String),
    Top,
    Bot,
    OblOpen,
    PermOpen,
    LParen,
    RParen,
    Slash,
    Not,
    BoxOp,
    DiaOp,
    And,
    Or,
    Implies,
    Iff,
    Geq,
    Gt,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Meta(s) => format!("metavariable `?{s}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::OblOpen => "`O(`".into(),
            Tok::PermOpen => "`P(`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Not => "`~`".into(),
            Tok::BoxOp => "`[]`".into(),
            Tok::DiaOp => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Geq => "`>=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, message: String| ParseError { pos, message };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &bytes[i..];
        let (tok, len) = if rest.starts_with(b"<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with(b"<>") {
            (Tok::DiaOp, 2)
        } else if rest.starts_with(b"[]") {
            (Tok::BoxOp, 2)
        } else if rest.starts_with(b"->") {
            (Tok::Implies, 2)
        } else if rest.starts_with(b">=") {
            (Tok::Geq, 2)
        } else {
            match c {
                b'>' => (Tok::Gt, 1),
                b'~' => (Tok::Not, 1),
                b'&' => (Tok::And, 1),
                b'|' => (Tok::Or, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'/' => (Tok::Slash, 1),
                b'?' => {
                    let mut j = i + 1;
                    if j >= bytes.len() || !is_ident_start(bytes[j]) {
                        return Err(err(i, "expected identifier after `?`".into()));
                    }
                    while j < bytes.len() && is_ident_char(bytes[j]) {
                        j += 1;
                    }
                    (Tok::Meta(text[i + 1..j].to_string()), j - i)
                }
                c if is_ident_start(c) => {
                    let mut j = i;
                    while j < bytes.len() && is_ident_char(bytes[j]) {
                        j += 1;
                    }
                    let word = &text[i..j];
                    let mut k = j;
                    while k < bytes.len() && bytes[k].is_ascii_whitespace() {
                        k += 1;
                    }
                    let opens = k < bytes.len() && bytes[k] == b'(';
                    match word {
                        "O" if opens => (Tok::OblOpen, k + 1 - i),
                        "P" if opens => (Tok::PermOpen, k + 1 - i),
                        "T" => (Tok::Top, 1),
                        "F" => (Tok::Bot, 1),
                        _ => (Tok::Ident(word.to_string()), j - i),
                    }
                }
                _ => {
                    let ch = text[i..].chars().next().unwrap_or('?');
                    return Err(err(i, format!("unexpected character `{ch}`")));
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.iff()?;
        match self.peek() {
            Tok::Geq => {
                self.bump();
                let right = self.iff()?;
                Ok(Formula::pref_geq(left, right))
            }
            Tok::Gt => {
                self.bump();
                let right = self.iff()?;
                Ok(Formula::pref_gt(left, right))
            }
            _ => Ok(left),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Formula::nec(self.unary()?))
            }
            Tok::DiaOp => {
                self.bump();
                Ok(Formula::poss(self.unary()?))
            }
            _ => self.atomlike(),
        }
    }

    fn atomlike(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::Meta(name) => {
                self.bump();
                Ok(Formula::MetaVar(name))
            }
            Tok::OblOpen | Tok::PermOpen => {
                let obligation = self.bump() == Tok::OblOpen;
                let consequent = self.formula()?;
                self.expect(Tok::Slash)?;
                let antecedent = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(if obligation {
                    Formula::oblig(consequent, antecedent)
                } else {
                    Formula::perm(consequent, antecedent)
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => self.fail("a formula"),
        }
    }
}

/// Parses a formula in the ASCII surface syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::End {
        return parser.fail("end of input");
    }
    Ok(f)
}
