use std::collections::BTreeSet;
use std::fmt;

use super::PolicyError;

/// Monotone boolean formula over attribute labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Attr(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Parses `identifier`, `AND`, `OR` and parentheses. `AND` binds tighter
    /// than `OR`; both are left-associative. Keywords are case-insensitive.
    pub fn parse(text: &str) -> Result<Formula, PolicyError> {
        let tokens = tokenize(text)?;
        if tokens.is_empty() {
            return Err(PolicyError::EmptyFormula);
        }
        let mut p = Parser { tokens, pos: 0 };
        let f = p.or_expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }

    pub fn evaluate<S: AsRef<str>>(&self, attrs: &[S]) -> bool {
        match self {
            Formula::Attr(a) => attrs.iter().any(|x| x.as_ref() == a),
            Formula::And(l, r) => l.evaluate(attrs) && r.evaluate(attrs),
            Formula::Or(l, r) => l.evaluate(attrs) || r.evaluate(attrs),
        }
    }

    /// Distinct labels in sorted order.
    pub fn labels(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out.into_iter().collect()
    }

    fn collect_labels(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Attr(a) => {
                out.insert(a.clone());
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_labels(out);
                r.collect_labels(out);
            }
        }
    }

    /// Number of leaves, which is the row count of the derived LSSS matrix.
    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Attr(_) => 1,
            Formula::And(l, r) | Formula::Or(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Attr(a) => write!(f, "{a}"),
            Formula::And(l, r) => write!(f, "({l} AND {r})"),
            Formula::Or(l, r) => write!(f, "({l} OR {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, PolicyError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '(' {
            out.push((pos, Token::LParen));
            chars.next();
        } else if c == ')' {
            out.push((pos, Token::RParen));
            chars.next();
        } else if is_ident_char(c) {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                word.push(c);
                chars.next();
            }
            let tok = match word.to_ascii_uppercase().as_str() {
                "AND" => Token::And,
                "OR" => Token::Or,
                "NOT" => return Err(PolicyError::Unsupported("NOT gates")),
                _ => Token::Ident(word),
            };
            out.push((pos, tok));
        } else if c == '!' || c == '~' {
            return Err(PolicyError::Unsupported("NOT gates"));
        } else {
            return Err(PolicyError::Parse {
                pos,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | ':' | '.' | '-' | '/')
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, msg: &str) -> PolicyError {
        let pos = self
            .tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or_else(|| self.tokens.last().map(|(p, _)| p + 1).unwrap_or(0));
        PolicyError::Parse {
            pos,
            msg: msg.to_string(),
        }
    }

    fn or_expr(&mut self) -> Result<Formula, PolicyError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, PolicyError> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Formula, PolicyError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Attr(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected attribute or '('")),
        }
    }
}
