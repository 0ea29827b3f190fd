//! Trust propositions: a small boolean expression language over named atomic
//! propositions, evaluated with the Subjective Logic operators.
//!
//! ```text
//! expr   := term ('OR' term)*
//! term   := factor ('AND' factor)*
//! factor := 'NOT' factor | '(' expr ')' | identifier
//! ```
//!
//! Keywords are case-insensitive. Identifiers match `[A-Za-z_][A-Za-z0-9_]*`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::fusion::FusionOperator;
use crate::opinion::Opinion;

/// Parsed proposition tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropositionExpr {
    Var(String),
    Not(Box<PropositionExpr>),
    And(Box<PropositionExpr>, Box<PropositionExpr>),
    Or(Box<PropositionExpr>, Box<PropositionExpr>),
}

impl PropositionExpr {
    pub fn var(name: impl Into<String>) -> Self {
        PropositionExpr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: PropositionExpr) -> Self {
        PropositionExpr::Not(Box::new(inner))
    }

    pub fn and(left: PropositionExpr, right: PropositionExpr) -> Self {
        PropositionExpr::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: PropositionExpr, right: PropositionExpr) -> Self {
        PropositionExpr::Or(Box::new(left), Box::new(right))
    }

    /// Variable names in left-to-right order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        fn walk<'a>(e: &'a PropositionExpr, out: &mut Vec<&'a str>) {
            match e {
                PropositionExpr::Var(name) => {
                    if !out.contains(&name.as_str()) {
                        out.push(name);
                    }
                }
                PropositionExpr::Not(inner) => walk(inner, out),
                PropositionExpr::And(l, r) | PropositionExpr::Or(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            PropositionExpr::Or(..) => 1,
            PropositionExpr::And(..) => 2,
            PropositionExpr::Not(_) | PropositionExpr::Var(_) => 3,
        }
    }
}

/// Prints with the minimum parentheses needed to re-parse the same tree.
impl fmt::Display for PropositionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &PropositionExpr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let prec = self.precedence();
        match self {
            PropositionExpr::Var(name) => f.write_str(name),
            PropositionExpr::Not(inner) => {
                f.write_str("NOT ")?;
                child(f, inner, inner.precedence() < prec)
            }
            PropositionExpr::And(l, r) | PropositionExpr::Or(l, r) => {
                let keyword = if prec == 1 { "OR" } else { "AND" };
                child(f, l, l.precedence() < prec)?;
                write!(f, " {keyword} ")?;
                child(f, r, r.precedence() <= prec)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Ident(String),
    And,
    Or,
    Not,
    LParen,
    RParen,
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "identifier '{name}'"),
            TokenKind::And => f.write_str("'AND'"),
            TokenKind::Or => f.write_str("'OR'"),
            TokenKind::Not => f.write_str("'NOT'"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
            TokenKind::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    /// Byte offset into the source.
    pos: usize,
}

fn parse_error(position: usize, message: impl Into<String>) -> TrustError {
    TrustError::Parse {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    pos,
                });
            }
            ')' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = pos;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &text[pos..end];
                let kind = if word.eq_ignore_ascii_case("and") {
                    TokenKind::And
                } else if word.eq_ignore_ascii_case("or") {
                    TokenKind::Or
                } else if word.eq_ignore_ascii_case("not") {
                    TokenKind::Not
                } else {
                    TokenKind::Ident(word.to_string())
                };
                tokens.push(Token { kind, pos });
            }
            other => return Err(parse_error(pos, format!("unexpected character '{other}'"))),
        }
    }
    tokens.push(Token {
        kind: TokenKind::End,
        pos: text.len(),
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.cursor].clone();
        if tok.kind != TokenKind::End {
            self.cursor += 1;
        }
        tok
    }

    fn expr(&mut self) -> Result<PropositionExpr> {
        let mut left = self.term()?;
        while self.peek().kind == TokenKind::Or {
            self.advance();
            let right = self.term()?;
            left = PropositionExpr::or(left, right);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<PropositionExpr> {
        let mut left = self.factor()?;
        while self.peek().kind == TokenKind::And {
            self.advance();
            let right = self.factor()?;
            left = PropositionExpr::and(left, right);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<PropositionExpr> {
        let tok = self.advance();
        match tok.kind {
            TokenKind::Not => Ok(PropositionExpr::not(self.factor()?)),
            TokenKind::Ident(name) => Ok(PropositionExpr::Var(name)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.advance();
                if close.kind != TokenKind::RParen {
                    return Err(parse_error(
                        close.pos,
                        format!(
                            "expected ')' to close '(' at {}, found {}",
                            tok.pos, close.kind
                        ),
                    ));
                }
                Ok(inner)
            }
            other => Err(parse_error(
                tok.pos,
                format!("expected an operand, found {other}"),
            )),
        }
    }
}

/// Parses a proposition. Errors carry the byte offset of the offending token.
pub fn parse_proposition(text: &str) -> Result<PropositionExpr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, cursor: 0 };
    if parser.peek().kind == TokenKind::End {
        return Err(parse_error(0, "empty proposition"));
    }
    let expr = parser.expr()?;
    let rest = parser.peek();
    if rest.kind != TokenKind::End {
        return Err(parse_error(rest.pos, format!("unexpected {}", rest.kind)));
    }
    Ok(expr)
}

/// One trust source for an atomic proposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrustSource {
    pub opinion: Opinion,
    /// Referral trust in the source; discounts `opinion` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub referral_trust: Option<Opinion>,
}

impl TrustSource {
    pub fn direct(opinion: Opinion) -> Self {
        Self {
            opinion,
            referral_trust: None,
        }
    }

    pub fn effective_opinion(&self) -> Opinion {
        match &self.referral_trust {
            Some(referral) => referral.discount(&self.opinion),
            None => self.opinion,
        }
    }
}

/// The sources bound to one atomic proposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceBinding {
    pub proposition: String,
    pub sources: Vec<TrustSource>,
    pub fusion: FusionOperator,
}

/// Discounts every source by its referral trust, then left-folds the
/// sources of each proposition with its fusion operator.
pub fn resolve_sources(bindings: &[SourceBinding]) -> Result<BTreeMap<String, Opinion>> {
    let mut resolved = BTreeMap::new();
    for binding in bindings {
        let effective: Vec<Opinion> = binding
            .sources
            .iter()
            .map(TrustSource::effective_opinion)
            .collect();
        let fused = binding.fusion.fuse_all(effective.iter())?.ok_or_else(|| {
            TrustError::Parameter(format!(
                "proposition '{}' has no trust sources",
                binding.proposition
            ))
        })?;
        resolved.insert(binding.proposition.clone(), fused);
    }
    Ok(resolved)
}

/// Evaluates `expr` bottom-up: AND is conjunction, OR disjunction, NOT negation.
pub fn evaluate_proposition(
    expr: &PropositionExpr,
    opinions: &BTreeMap<String, Opinion>,
) -> Result<Opinion> {
    if let Some(missing) = expr
        .variables()
        .into_iter()
        .find(|v| !opinions.contains_key(*v))
    {
        return Err(TrustError::UnboundVariable(missing.to_string()));
    }
    eval(expr, opinions)
}

fn eval(expr: &PropositionExpr, opinions: &BTreeMap<String, Opinion>) -> Result<Opinion> {
    match expr {
        PropositionExpr::Var(name) => opinions
            .get(name)
            .copied()
            .ok_or_else(|| TrustError::UnboundVariable(name.clone())),
        PropositionExpr::Not(inner) => Ok(eval(inner, opinions)?.negate()),
        PropositionExpr::And(l, r) => eval(l, opinions)?.conjunction(&eval(r, opinions)?),
        PropositionExpr::Or(l, r) => eval(l, opinions)?.disjunction(&eval(r, opinions)?),
    }
}
