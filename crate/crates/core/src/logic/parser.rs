//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := quant | imp
//! quant   := ("exists" | "forall") IDENT "." formula
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := term ("&" term)*
//! term    := "~" term | "(" formula ")" | quant | atom
//! atom    := "adj(" IDENT "," IDENT ")" | IDENT "=" IDENT | IDENT "!=" IDENT
//!          | IDENT "in R" | "true" | "false"
//!          | "deg(" IDENT ")" ("=" | ">=" | "<=") NUM
//!          | "dist(" IDENT "," IDENT ")" "<=" NUM
//! ```
//!
//! `&` binds tighter than `|`. Degree and distance atoms desugar to
//! adjacency and equality on the spot.

use std::collections::BTreeSet;

use super::formula::{adj, and_all, distance_formula, eq, exists, fresh_name, in_r, Formula};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(&'static str),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((Tok::Ident(word), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let n = word.parse().map_err(|_| Error::Parse { pos, msg: format!("number {word} too large") })?;
            out.push((Tok::Num(n), pos));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().map(|&(_, c)| c).collect();
        let sym = ["->", ">=", "<=", "!="]
            .into_iter()
            .find(|s| rest.starts_with(s))
            .or_else(|| ["(", ")", ",", ".", "&", "|", "~", "="].into_iter().find(|s| rest.starts_with(s)));
        match sym {
            Some(s) => {
                out.push((Tok::Sym(s), pos));
                i += s.chars().count();
            }
            None => return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") }),
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 8] = ["exists", "forall", "adj", "in", "true", "false", "deg", "dist"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    avoid: BTreeSet<String>,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.peek_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.peek_word(w) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected '{w}'"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) && x != "R" => {
                let x = x.clone();
                self.at += 1;
                Ok(x)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn num(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.peek_word("exists") || self.peek_word("forall") {
            return self.quant();
        }
        self.imp()
    }

    fn quant(&mut self) -> Result<Formula> {
        let is_exists = self.peek_word("exists");
        self.at += 1;
        let x = self.ident()?;
        self.expect_sym(".")?;
        let body = self.formula()?;
        Ok(if is_exists { Formula::Exists(x, Box::new(body)) } else { Formula::Forall(x, Box::new(body)) })
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if self.peek_sym("->") {
            self.at += 1;
            let right = if self.peek_word("exists") || self.peek_word("forall") { self.quant()? } else { self.imp()? };
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek_sym("|") {
            self.at += 1;
            f = f.or(self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.term()?;
        while self.peek_sym("&") {
            self.at += 1;
            f = f.and(self.term()?);
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<Formula> {
        if self.peek_sym("~") {
            self.at += 1;
            return Ok(!self.term()?);
        }
        if self.peek_sym("(") {
            self.at += 1;
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        if self.peek_word("exists") || self.peek_word("forall") {
            return self.quant();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.peek_word("true") {
            self.at += 1;
            return Ok(Formula::True);
        }
        if self.peek_word("false") {
            self.at += 1;
            return Ok(Formula::False);
        }
        if self.peek_word("adj") {
            self.at += 1;
            self.expect_sym("(")?;
            let a = self.ident()?;
            self.expect_sym(",")?;
            let b = self.ident()?;
            self.expect_sym(")")?;
            return Ok(adj(&a, &b));
        }
        if self.peek_word("deg") {
            self.at += 1;
            self.expect_sym("(")?;
            let x = self.ident()?;
            self.expect_sym(")")?;
            let op = match self.peek() {
                Some(Tok::Sym(s @ ("=" | ">=" | "<="))) => *s,
                _ => return self.err("expected '=', '>=' or '<=' after deg(..)"),
            };
            self.at += 1;
            let n = self.num()?;
            return Ok(match op {
                ">=" => self.deg_at_least(&x, n),
                "<=" => !self.deg_at_least(&x, n + 1),
                _ => self.deg_at_least(&x, n).and(!self.deg_at_least(&x, n + 1)),
            });
        }
        if self.peek_word("dist") {
            self.at += 1;
            self.expect_sym("(")?;
            let a = self.ident()?;
            self.expect_sym(",")?;
            let b = self.ident()?;
            self.expect_sym(")")?;
            self.expect_sym("<=")?;
            let r = self.num()?;
            return Ok(distance_formula(r, &a, &b, &mut self.avoid));
        }
        let x = self.ident()?;
        if self.peek_sym("=") {
            self.at += 1;
            let y = self.ident()?;
            return Ok(eq(&x, &y));
        }
        if self.peek_sym("!=") {
            self.at += 1;
            let y = self.ident()?;
            return Ok(!eq(&x, &y));
        }
        if self.peek_word("in") {
            self.at += 1;
            self.expect_word("R")?;
            return Ok(in_r(&x));
        }
        self.err("expected '=', '!=' or 'in R' after a variable")
    }

    /// x has at least n pairwise distinct neighbours.
    fn deg_at_least(&mut self, x: &str, n: usize) -> Formula {
        let mut ys = Vec::new();
        for _ in 0..n {
            let y = fresh_name("n", &self.avoid);
            self.avoid.insert(y.clone());
            ys.push(y);
        }
        let mut parts: Vec<Formula> = ys.iter().map(|y| adj(x, y)).collect();
        for i in 0..ys.len() {
            for j in i + 1..ys.len() {
                parts.push(!eq(&ys[i], &ys[j]));
            }
        }
        ys.iter().rev().fold(and_all(parts), |acc, y| exists(y, acc))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let avoid = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    let mut p = Parser { toks, at: 0, end: text.len(), avoid };
    if p.toks.is_empty() {
        return p.err("empty formula");
    }
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a closed formula; a free variable is an error at its first use.
pub fn parse_sentence(text: &str) -> Result<Formula> {
    let f = parse_formula(text)?;
    if let Some(x) = f.free_vars().into_iter().next() {
        let pos = lex(text)?
            .into_iter()
            .find(|(t, _)| *t == Tok::Ident(x.clone()))
            .map(|(_, p)| p)
            .unwrap_or(0);
        return Err(Error::Parse { pos, msg: format!("unbound variable {x}") });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::{forall, Formula::*};
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        let f = parse_formula("exists x. exists y. adj(x,y)").unwrap();
        assert!(f.is_closed());
        assert_eq!(f.prefix_len(), 2);
        let g = parse_formula("adj(x,y)").unwrap();
        assert_eq!(g.free_vars().len(), 2);
        let h = parse_formula("exists x. (x in R & ~adj(x,x))").unwrap();
        assert_eq!(h, exists("x", in_r("x").and(!adj("x", "x"))));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("true | false & true").unwrap(),
            True.or(False.and(True))
        );
        assert_eq!(
            parse_formula("forall x. x = x -> adj(x,x)").unwrap(),
            forall("x", eq("x", "x").implies(adj("x", "x")))
        );
        assert_eq!(parse_formula("~exists y. adj(x,y)").unwrap(), !exists("y", adj("x", "y")));
        assert_eq!(parse_formula("x != y").unwrap(), !eq("x", "y"));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("exists x adj(x,x)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        match parse_formula("adj(x,y) &") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("x $ y").is_err());
        assert!(parse_formula("").is_err());
        match parse_sentence("exists x. adj(x,y)") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 16);
                assert!(msg.contains("unbound"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sugar_avoids_user_names() {
        let f = parse_formula("deg(x) >= 2 & n = n").unwrap();
        assert!(f.free_vars().contains("n"));
        assert_eq!(f.free_vars().len(), 2);
        let d = parse_formula("dist(x,y) <= 2").unwrap();
        assert_eq!(d.free_vars(), ["x".to_string(), "y".to_string()].into());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let var = prop_oneof![Just("x".to_string()), Just("y".to_string()), Just("z".to_string())];
        let leaf = prop_oneof![
            Just(True),
            Just(False),
            (var.clone(), var.clone()).prop_map(|(a, b)| Adj(a, b)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Eq(a, b)),
            var.clone().prop_map(InR),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            let var = prop_oneof![Just("x".to_string()), Just("y".to_string()), Just("z".to_string())];
            prop_oneof![
                inner.clone().prop_map(|f| !f),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (var.clone(), inner.clone()).prop_map(|(x, f)| Exists(x, Box::new(f))),
                (var, inner).prop_map(|(x, f)| Forall(x, Box::new(f))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(f in arb_formula()) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f);
        }
    }
}
