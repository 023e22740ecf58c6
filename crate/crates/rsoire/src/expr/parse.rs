//! Recursive-descent parser for the expression concrete syntax.
//!
//! Precedence, loosest to tightest: `|`, `&`, juxtaposition (concatenation),
//! postfix `*` `+` `?`. Parentheses group, `_` is the epsilon literal, and
//! symbols are runs of `[A-Za-z0-9_:.%-]`.

use super::{is_symbol_char, Expr, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Sym(String),
    Epsilon,
    LParen,
    RParen,
    Star,
    Plus,
    Quest,
    Amp,
    Bar,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let at = self.pos;
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump(c);
                }
                '(' => out.push((self.single(Tok::LParen, c), at)),
                ')' => out.push((self.single(Tok::RParen, c), at)),
                '*' => out.push((self.single(Tok::Star, c), at)),
                '+' => out.push((self.single(Tok::Plus, c), at)),
                '?' => out.push((self.single(Tok::Quest, c), at)),
                '&' => out.push((self.single(Tok::Amp, c), at)),
                '|' => out.push((self.single(Tok::Bar, c), at)),
                c if is_symbol_char(c) => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if is_symbol_char(c) {
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    let name = &self.src[start..self.pos];
                    if name == "_" {
                        out.push((Tok::Epsilon, at));
                    } else {
                        out.push((Tok::Sym(name.to_string()), at));
                    }
                }
                other => {
                    return Err(Error::Syntax {
                        offset: at,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
    }

    fn single(&mut self, t: Tok, c: char) -> Tok {
        self.bump(c);
        t
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    // alt := inter ('|' inter)*
    fn alt(&mut self) -> Result<Expr> {
        let mut branches = vec![self.inter()?];
        while self.peek() == Some(&Tok::Bar) {
            self.advance();
            branches.push(self.inter()?);
        }
        Ok(Expr::alt(branches))
    }

    // inter := concat ('&' concat)*
    fn inter(&mut self) -> Result<Expr> {
        let mut operands = vec![self.concat()?];
        while self.peek() == Some(&Tok::Amp) {
            self.advance();
            operands.push(self.concat()?);
        }
        Ok(Expr::inter(operands))
    }

    // concat := postfix+
    fn concat(&mut self) -> Result<Expr> {
        let mut factors = vec![self.postfix()?];
        while matches!(
            self.peek(),
            Some(Tok::Sym(_)) | Some(Tok::Epsilon) | Some(Tok::LParen)
        ) {
            factors.push(self.postfix()?);
        }
        Ok(Expr::concat(factors))
    }

    // postfix := atom ('*' | '+' | '?')*
    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.advance();
                    e = Expr::star(e);
                }
                Some(Tok::Plus) => {
                    self.advance();
                    e = Expr::plus(e);
                }
                Some(Tok::Quest) => {
                    self.advance();
                    e = Expr::opt(e);
                }
                _ => return Ok(e),
            }
        }
    }

    // atom := '_' | symbol | '(' alt ')'
    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.advance() {
            Some(Tok::Epsilon) => Ok(Expr::Epsilon),
            Some(Tok::Sym(name)) => Ok(Expr::Sym(Symbol::new(&name)?)),
            Some(Tok::LParen) => {
                let e = self.alt()?;
                match self.advance() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Syntax {
                        offset: self.end,
                        message: "unclosed parenthesis".into(),
                    }),
                }
            }
            Some(other) => Err(Error::Syntax {
                offset: at,
                message: format!("expected an expression, found {other:?}"),
            }),
            None => Err(Error::Syntax {
                offset: at,
                message: "expected an expression, found end of input".into(),
            }),
        }
    }
}

/// Parses an expression from its concrete syntax.
pub fn parse(text: &str) -> Result<Expr> {
    let tokens = Lexer { src: text, pos: 0 }.tokenize()?;
    if tokens.is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty input".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let e = parser.alt()?;
    if parser.peek().is_some() {
        return parser.err("trailing input after expression");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str) -> Expr {
        Expr::Sym(Symbol::new(name).unwrap())
    }

    #[test]
    fn precedence_ladder() {
        // postfix > concat > & > |
        assert_eq!(
            parse("a+|b+&c*").unwrap(),
            Expr::alt(vec![
                Expr::plus(sym("a")),
                Expr::inter(vec![Expr::plus(sym("b")), Expr::star(sym("c"))]),
            ])
        );
    }

    #[test]
    fn epsilon_literal() {
        assert_eq!(parse("_").unwrap(), Expr::Epsilon);
    }

    #[test]
    fn grouping_and_concat() {
        assert_eq!(
            parse("(a+|b) (c&d)").unwrap(),
            Expr::concat(vec![
                Expr::alt(vec![Expr::plus(sym("a")), sym("b")]),
                Expr::inter(vec![sym("c"), sym("d")]),
            ])
        );
    }

    #[test]
    fn postfix_chains() {
        assert_eq!(parse("a+?").unwrap(), Expr::opt(Expr::plus(sym("a"))));
        assert_eq!(parse("a*?+").unwrap(), parse("((a*)?)+").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse(""),
            Err(Error::Syntax {
                offset: 0,
                message: "empty input".into()
            })
        );
        match parse("a@b") {
            Err(Error::Syntax { offset: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse("a |") {
            Err(Error::Syntax { offset: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse("(a b") {
            Err(Error::Syntax { offset: 4, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        assert!(parse("a b)").is_err());
        assert!(parse("*a").is_err());
    }

    #[test]
    fn print_parse_round_trip_on_canonical_text() {
        for text in [
            "a",
            "_",
            "a b",
            "a+|b+&c*",
            "(a+|b) (c&d)",
            "((a|b&c) d?)*",
            "a&b (c&d)",
            "a d&(b|c*)",
            "a b&(c|d)+",
            "a b?&c",
            "x:1 y.2|z-3*",
        ] {
            let e = parse(text).unwrap();
            assert_eq!(e.to_string(), text);
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
