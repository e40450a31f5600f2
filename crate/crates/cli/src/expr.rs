//! Expressions over named configurations: sums and products with rational
//! scalars, the Casimir generator `cas`, and `[x, y]` brackets.

use anyhow::{bail, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use ghostpoly::ghost::{bracket, GhostElement};
use ghostpoly::ThetaSignature;

use crate::scene::Scene;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Symbol(char),
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

fn lex(input: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Token::Int(text.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "[](),+-*/".contains(c) {
            out.push((i, Token::Symbol(c)));
            i += 1;
        } else {
            bail!("unexpected character `{c}` at position {i}");
        }
    }
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn location(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(at, _)| *at)
            .unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_symbol(&mut self, want: char) -> Result<()> {
        let at = self.location();
        match self.next() {
            Some(Token::Symbol(c)) if c == want => Ok(()),
            other => bail!("expected `{want}` at position {at}, found {other:?}"),
        }
    }
}

pub struct ExprParser<'a> {
    scene: &'a Scene,
    sig: ThetaSignature,
}

impl<'a> ExprParser<'a> {
    pub fn new(scene: &'a Scene) -> Self {
        let sig = scene.family.signature().clone();
        ExprParser { scene, sig }
    }

    pub fn parse(&self, input: &str) -> Result<GhostElement> {
        let mut lx = Lexer {
            tokens: lex(input)?,
            pos: 0,
            len: input.len(),
        };
        let value = self.expr(&mut lx)?;
        if lx.peek().is_some() {
            bail!("trailing input at position {}", lx.location());
        }
        Ok(value)
    }

    fn expr(&self, lx: &mut Lexer) -> Result<GhostElement> {
        let mut acc = self.term(lx)?;
        loop {
            match lx.peek() {
                Some(Token::Symbol('+')) => {
                    lx.next();
                    acc = acc.add(&self.term(lx)?);
                }
                Some(Token::Symbol('-')) => {
                    lx.next();
                    acc = acc.sub(&self.term(lx)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&self, lx: &mut Lexer) -> Result<GhostElement> {
        let mut acc = self.factor(lx)?;
        while let Some(Token::Symbol('*')) = lx.peek() {
            lx.next();
            acc = acc.mul(&self.factor(lx)?);
        }
        Ok(acc)
    }

    fn factor(&self, lx: &mut Lexer) -> Result<GhostElement> {
        let at = lx.location();
        match lx.next() {
            Some(Token::Int(n)) => {
                // a rational scalar, with optional /denominator
                let mut value = BigRational::from(n);
                if let Some(Token::Symbol('/')) = lx.peek() {
                    lx.next();
                    let at = lx.location();
                    match lx.next() {
                        Some(Token::Int(d)) => {
                            if d == BigInt::from(0) {
                                bail!("zero denominator at position {at}");
                            }
                            value /= BigRational::from(d);
                        }
                        other => bail!("expected denominator at position {at}, found {other:?}"),
                    }
                }
                Ok(GhostElement::one().scale(&value))
            }
            Some(Token::Ident(name)) => {
                if name == "cas" {
                    return Ok(GhostElement::casimir());
                }
                let c = self
                    .scene
                    .generator(&name)
                    .map_err(|e| anyhow::anyhow!("{e} at position {at}"))?;
                Ok(GhostElement::from_configuration(c))
            }
            Some(Token::Symbol('-')) => Ok(self.factor(lx)?.scale(&-BigRational::one())),
            Some(Token::Symbol('(')) => {
                let inner = self.expr(lx)?;
                lx.expect_symbol(')')?;
                Ok(inner)
            }
            Some(Token::Symbol('[')) => {
                let lhs = self.expr(lx)?;
                lx.expect_symbol(',')?;
                let rhs = self.expr(lx)?;
                lx.expect_symbol(']')?;
                Ok(bracket(&lhs, &rhs, &self.sig))
            }
            other => bail!("expected a factor at position {at}, found {other:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{Scene, SceneFile};

    fn scene() -> Scene {
        let file: SceneFile = serde_json::from_str(
            r#"{
                "version": 1,
                "points": {"a": "0", "b": "2", "c": "1", "d": "3"},
                "geodesics": {
                    "g": {"src": "a", "dst": "b"},
                    "h": {"src": "c", "dst": "d"}
                },
                "configurations": {"G": ["g", "h"]}
            }"#,
        )
        .unwrap();
        Scene::from_file(file).unwrap()
    }

    #[test]
    fn parses_brackets_and_scalars() {
        let sc = scene();
        let p = ExprParser::new(&sc);
        let v = p.parse("[g, h]").unwrap();
        assert_eq!(v.to_string(), "1*cas + -1*<(0->2)@0,(1->3)@0>");
        let v = p.parse("2 * [g,h] - [g,h]").unwrap();
        assert_eq!(v.to_string(), "1*cas + -1*<(0->2)@0,(1->3)@0>");
        assert!(p.parse("[G, G]").unwrap().is_zero());
        assert!(p.parse("[1/2, G]").unwrap().is_zero());
        assert!(p.parse("[cas, G]").unwrap().is_zero());
        let v = p.parse("3/4 * G").unwrap();
        assert_eq!(v.num_terms(), 1);
    }

    #[test]
    fn reports_error_locations() {
        let sc = scene();
        let p = ExprParser::new(&sc);
        let err = p.parse("[g, h").unwrap_err().to_string();
        assert!(err.contains("position"), "{err}");
        let err = p.parse("nosuch").unwrap_err().to_string();
        assert!(err.contains("nosuch"), "{err}");
        let err = p.parse("1/0").unwrap_err().to_string();
        assert!(err.contains("denominator"), "{err}");
    }
}
