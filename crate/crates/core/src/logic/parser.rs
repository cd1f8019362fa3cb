//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! ineq    := formula "<=" formula
//! formula := term { "|" term }
//! term    := factor { "&" factor }
//! factor  := "0" | "1" | ident | "n:" ident | "c:" ident
//!          | "[" nat "]" factor | "<" nat ">" factor | "(" formula ")"
//! ident   := [A-Za-z][A-Za-z0-9_]*
//! ```

use crate::error::ParseError;
use crate::modal::AgentId;

use super::formula::{Formula, Inequality};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Number(String),
    Ident(String),
    NomMark,
    ConomMark,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Leq,
    LParen,
    RParen,
    Or,
    And,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::NomMark => "`n:`".into(),
            Tok::ConomMark => "`c:`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Or => "`|`".into(),
            Tok::And => "`&`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        let mut push = |tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            *i += len;
            *column += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '[' => push(Tok::LBrack, 1, &mut i, &mut column),
            ']' => push(Tok::RBrack, 1, &mut i, &mut column),
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            '|' => push(Tok::Or, 1, &mut i, &mut column),
            '&' => push(Tok::And, 1, &mut i, &mut column),
            '>' => push(Tok::Gt, 1, &mut i, &mut column),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Leq, 2, &mut i, &mut column),
            '<' => push(Tok::Lt, 1, &mut i, &mut column),
            c if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let n: String = chars[i..i + len].iter().collect();
                push(Tok::Number(n), len, &mut i, &mut column);
            }
            c if c.is_ascii_alphabetic() => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                let word: String = chars[i..i + len].iter().collect();
                if chars.get(i + len) == Some(&':') && (word == "n" || word == "c") {
                    let tok = if word == "n" {
                        Tok::NomMark
                    } else {
                        Tok::ConomMark
                    };
                    push(tok, 2, &mut i, &mut column);
                } else {
                    push(Tok::Ident(word), len, &mut i, &mut column);
                }
            }
            other => return Err(err(line, column, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        err(
            t.line,
            t.column,
            format!("expected {expected}, found {}", t.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.term()?;
        while self.peek().tok == Tok::Or {
            self.next();
            let rhs = self.term()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::And {
            self.next();
            let rhs = self.factor()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self, close: Tok, close_name: &str) -> Result<AgentId, ParseError> {
        let t = self.peek().clone();
        let id = match &t.tok {
            Tok::Number(n) => n
                .parse::<u32>()
                .map_err(|_| err(t.line, t.column, format!("agent index `{n}` out of range")))?,
            _ => return Err(self.unexpected("agent index (a natural number)")),
        };
        self.next();
        self.expect(close, close_name)?;
        Ok(AgentId(id))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn factor(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(n) => {
                self.next();
                match n.as_str() {
                    "0" => Ok(Formula::Zero),
                    "1" => Ok(Formula::One),
                    _ => Err(err(
                        t.line,
                        t.column,
                        format!("`{n}` is not a constant (0 or 1)"),
                    )),
                }
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Formula::Prop(s))
            }
            Tok::NomMark => {
                self.next();
                Ok(Formula::Nominal(self.ident()?))
            }
            Tok::ConomMark => {
                self.next();
                Ok(Formula::Conominal(self.ident()?))
            }
            Tok::LBrack => {
                self.next();
                let i = self.agent(Tok::RBrack, "`]`")?;
                Ok(Formula::Box(i, Box::new(self.factor()?)))
            }
            Tok::Lt => {
                self.next();
                let i = self.agent(Tok::Gt, "`>`")?;
                Ok(Formula::DiamondBlack(i, Box::new(self.factor()?)))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(f)
}

pub fn parse_inequality(text: &str) -> Result<Inequality, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let lhs = p.formula()?;
    p.expect(Tok::Leq, "`<=`")?;
    let rhs = p.formula()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(Inequality::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::prop(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("[1] p & q").unwrap(),
            Formula::and(Formula::boxed(1, p("p")), p("q"))
        );
        assert_eq!(
            parse_formula("<2> (p | n:a1)").unwrap(),
            Formula::diamond(2, Formula::or(p("p"), Formula::nominal("a1")))
        );
        assert_eq!(
            parse_formula("p | q & r").unwrap(),
            Formula::or(p("p"), Formula::and(p("q"), p("r")))
        );
        assert_eq!(
            parse_formula("p | q | r").unwrap(),
            Formula::or(Formula::or(p("p"), p("q")), p("r"))
        );
    }

    #[test]
    fn inequalities() {
        assert_eq!(
            parse_inequality("[1] p <= p").unwrap(),
            Inequality::new(Formula::boxed(1, p("p")), p("p"))
        );
        let i = parse_inequality("<1>n:a1<=c:x2").unwrap();
        assert_eq!(i.lhs, Formula::diamond(1, Formula::nominal("a1")));
        assert_eq!(i.rhs, Formula::conominal("x2"));
        assert_eq!(parse_inequality("0 <= 1").unwrap().rhs, Formula::One);
    }

    #[test]
    fn names_starting_with_n_or_c() {
        assert_eq!(parse_formula("n").unwrap(), p("n"));
        assert_eq!(
            parse_formula("cat & n_1").unwrap(),
            Formula::and(p("cat"), p("n_1"))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p &").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse_formula("[x] p").unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
        assert!(e.message.contains("agent index"));
        let e = parse_formula("p\n  & $").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(parse_formula("2").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_inequality("p").is_err());
        assert!(parse_formula("p <= q").is_err());
        assert!(parse_formula("[1 p").is_err());
        assert!(parse_formula("n: 1").is_err());
        assert!(parse_formula("[99999999999] p").is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in [
            "[1]p & q",
            "<2>(p | n:a1)",
            "p | (q | r)",
            "(p | q) & c:x",
            "[1][2]0 | <1>1",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
