//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := quant* iff
//! quant   := '(' ('E'|'A') ident+ ')'
//! iff     := or ('<=>' or)*
//! or      := and ('\/' and)*
//! and     := not ('/\' not)*
//! not     := '~' not | primary
//! primary := quant+ formula | atom | '(' formula ')'
//! atom    := term rel term,  rel ∈ { < <= > >= = != }
//! term    := mult (('+'|'-') mult)* ; mult := factor ('*' factor)*
//! factor  := '(' term ')' | ident | integer
//! ```
//!
//! A quantifier block binds the remainder of the current parenthesization
//! level. `E` and `A` are ordinary identifiers outside quantifier position, so
//! `A` may be used as a variable. Integer literals are desugared to
//! binary-expansion trees.

use num::BigUint;

use super::{Formula, Quantifier, Rel, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Ident(String),
    Int(BigUint),
    Plus,
    Minus,
    Star,
    Rel(Rel),
    And,
    Or,
    Not,
    Iff,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let err = |line, col, msg: String| Error::Parse { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |tok: Tok| Spanned {
            tok,
            line: l0,
            col: c0,
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => out.push(push(Tok::LParen)),
            ')' => out.push(push(Tok::RParen)),
            '+' => out.push(push(Tok::Plus)),
            '-' => out.push(push(Tok::Minus)),
            '*' => out.push(push(Tok::Star)),
            '~' => out.push(push(Tok::Not)),
            '=' => out.push(push(Tok::Rel(Rel::Eq))),
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(push(Tok::Rel(Rel::Ne)));
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "expected '=' after '!'".into()));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'=') && chars.get(i + 2) == Some(&'>') {
                    out.push(push(Tok::Iff));
                    i += 2;
                    col += 2;
                } else if chars.get(i + 1) == Some(&'=') {
                    out.push(push(Tok::Rel(Rel::Le)));
                    i += 1;
                    col += 1;
                } else {
                    out.push(push(Tok::Rel(Rel::Lt)));
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(push(Tok::Rel(Rel::Ge)));
                    i += 1;
                    col += 1;
                } else {
                    out.push(push(Tok::Rel(Rel::Gt)));
                }
            }
            '/' => {
                if chars.get(i + 1) == Some(&'\\') {
                    out.push(push(Tok::And));
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "expected '\\' after '/'".into()));
                }
            }
            '\\' => {
                if chars.get(i + 1) == Some(&'/') {
                    out.push(push(Tok::Or));
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "expected '/' after '\\'".into()));
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<BigUint>()
                    .map_err(|_| err(l0, c0, format!("bad integer literal '{}'", text)))?;
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: l0,
                    col: c0,
                });
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric()
                        || chars[i] == '_'
                        || chars[i] == '#'
                        || chars[i] == '\'')
                {
                    i += 1;
                    col += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(text),
                    line: l0,
                    col: c0,
                });
                continue;
            }
            _ => return Err(err(line, col, format!("unexpected character '{}'", c))),
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self
                .toks
                .last()
                .map(|s| (s.line, s.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {}", what))
        }
    }

    /// `( E|A ident+ )` starting at the current position?
    fn at_quantifier(&self) -> bool {
        if self.at(0) != Some(&Tok::LParen) {
            return false;
        }
        match self.at(1) {
            Some(Tok::Ident(s)) if s == "E" || s == "A" => {}
            _ => return false,
        }
        let mut k = 2;
        let mut idents = 0;
        loop {
            match self.at(k) {
                Some(Tok::Ident(_)) => {
                    idents += 1;
                    k += 1;
                }
                Some(Tok::RParen) => return idents >= 1,
                _ => return false,
            }
        }
    }

    fn parse_quantifier(&mut self) -> Result<(Quantifier, Vec<String>)> {
        self.expect(Tok::LParen, "'('")?;
        let q = match self.advance() {
            Some(Tok::Ident(s)) if s == "E" => Quantifier::Exists,
            Some(Tok::Ident(s)) if s == "A" => Quantifier::Forall,
            _ => return self.fail("expected quantifier 'E' or 'A'"),
        };
        let mut vars = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            if let Some(Tok::Ident(v)) = self.advance() {
                vars.push(v);
            }
        }
        if vars.is_empty() {
            return self.fail("quantifier needs at least one variable");
        }
        self.expect(Tok::RParen, "')' after quantifier variables")?;
        Ok((q, vars))
    }

    fn parse_formula(&mut self) -> Result<Formula> {
        if self.at_quantifier() {
            let (q, vars) = self.parse_quantifier()?;
            let body = self.parse_formula()?;
            return Ok(Formula::Quant(q, vars, Box::new(body)));
        }
        self.parse_iff()
    }

    fn parse_iff(&mut self) -> Result<Formula> {
        let mut f = self.parse_or()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let r = self.parse_or()?;
            f = Formula::iff(f, r);
        }
        Ok(f)
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut f = self.parse_and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let r = self.parse_and()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut f = self.parse_not()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let r = self.parse_not()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn parse_not(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            let f = self.parse_not()?;
            return Ok(Formula::not(f));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Formula> {
        if self.at_quantifier() {
            let (q, vars) = self.parse_quantifier()?;
            let body = self.parse_formula()?;
            return Ok(Formula::Quant(q, vars, Box::new(body)));
        }
        // Try an atom first; on failure fall back to a parenthesized formula.
        let save = self.pos;
        match self.parse_atom() {
            Ok(atom) => Ok(atom),
            Err(atom_err) => {
                self.pos = save;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let f = self.parse_formula()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(f)
                } else {
                    Err(atom_err)
                }
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        let l = self.parse_term()?;
        let rel = match self.peek() {
            Some(Tok::Rel(r)) => *r,
            _ => return self.fail("expected relation symbol"),
        };
        self.pos += 1;
        let r = self.parse_term()?;
        Ok(Formula::Atom(l, rel, r))
    }

    fn parse_term(&mut self) -> Result<Term> {
        let mut t = self.parse_mult()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let r = self.parse_mult()?;
                    t = Term::Add(Box::new(t), Box::new(r));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let r = self.parse_mult()?;
                    t = Term::Sub(Box::new(t), Box::new(r));
                }
                _ => return Ok(t),
            }
        }
    }

    fn parse_mult(&mut self) -> Result<Term> {
        let mut t = self.parse_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let r = self.parse_factor()?;
            t = Term::Mul(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn parse_factor(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.parse_term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Term::integer(&k))
            }
            _ => self.fail("expected a term"),
        }
    }
}

/// Parses formula source text. Free variables are legal and produce no error.
pub fn parse(input: &str) -> Result<Formula> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.parse_formula()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input after formula");
    }
    Ok(f)
}

/// Token count of canonical text produced by the printer (all symbols,
/// parentheses included).
pub(super) fn token_count(input: &str) -> usize {
    lex(input).map(|t| t.len()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let f = parse("(E X)(X*X = 1+1)").unwrap();
        match &f {
            Formula::Quant(Quantifier::Exists, vars, body) => {
                assert_eq!(vars, &vec!["X".to_string()]);
                match body.as_ref() {
                    Formula::Atom(l, Rel::Eq, r) => {
                        assert_eq!(
                            *l,
                            Term::Mul(Box::new(Term::var("X")), Box::new(Term::var("X")))
                        );
                        assert_eq!(*r, Term::integer_u64(2));
                    }
                    other => panic!("unexpected body {:?}", other),
                }
            }
            other => panic!("unexpected parse {:?}", other),
        }

        let g = parse("(A Y)(Y*Y >= 0)").unwrap();
        assert!(matches!(g, Formula::Quant(Quantifier::Forall, _, _)));

        let h = parse("X < 0 \\/ ~(X = 0)").unwrap();
        match h {
            Formula::Or(l, r) => {
                assert!(matches!(*l, Formula::Atom(_, Rel::Lt, _)));
                assert!(matches!(*r, Formula::Not(_)));
            }
            other => panic!("unexpected parse {:?}", other),
        }
    }

    #[test]
    fn a_is_a_legal_variable_name() {
        // 'A' only acts as a quantifier in "(A X ...)" position.
        let f = parse("A*X*X + B*X + C = 0").unwrap();
        assert_eq!(f.free_vars().len(), 4);
        let g = parse("(E X)(A*X*X + B*X + C = 0)").unwrap();
        assert_eq!(g.free_vars().len(), 3);
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        let f = parse("(X+1)*X > 0").unwrap();
        assert!(matches!(f, Formula::Atom(_, Rel::Gt, _)));
        let g = parse("((E X)(X > Y)) \\/ (Y = 0)").unwrap();
        assert!(matches!(g, Formula::Or(_, _)));
        let h = parse("~(E X)(X > 0)").unwrap();
        assert!(matches!(h, Formula::Not(_)));
    }

    #[test]
    fn quantifier_blocks_with_many_variables() {
        let f = parse("(E X Y Z)(X + Y + Z = 0)").unwrap();
        match f {
            Formula::Quant(Quantifier::Exists, vars, _) => assert_eq!(vars.len(), 3),
            other => panic!("unexpected {:?}", other),
        }
        let g = parse("(E X)(A Y)(Y > X)").unwrap();
        match g {
            Formula::Quant(Quantifier::Exists, _, body) => {
                assert!(matches!(*body, Formula::Quant(Quantifier::Forall, _, _)))
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse("X >") {
            Err(Error::Parse { line: 1, col, .. }) => assert!(col >= 3),
            other => panic!("unexpected {:?}", other),
        }
        match parse("X <\n$ 0") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {:?}", other),
        }
        assert!(parse("X > 0 X").is_err());
    }
}
