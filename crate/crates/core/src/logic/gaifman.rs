use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::eval::check_local;
use super::formula::{and_all, distance_formula, exists, Formula};
use super::parser::parse_formula;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// ∃ x_1 … x_ℓ pairwise at distance > 2r, each satisfying the r-local ψ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicSentence {
    pub ell: usize,
    pub r: usize,
    pub psi: Formula,
}

impl BasicSentence {
    pub fn new(ell: usize, r: usize, psi: Formula) -> Result<Self> {
        if ell == 0 || r == 0 {
            return Err(Error::input("basic sentences need ell ≥ 1 and r ≥ 1"));
        }
        if psi.free_vars().len() != 1 {
            return Err(Error::input(format!("local formula {psi} must have exactly one free variable")));
        }
        Ok(BasicSentence { ell, r, psi })
    }

    pub fn free_var(&self) -> String {
        self.psi.free_vars().into_iter().next().expect("validated")
    }
}

/// Boolean combination over 1-based basic indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Comb {
    True,
    False,
    Basic(usize),
    Not(Box<Comb>),
    And(Box<Comb>, Box<Comb>),
    Or(Box<Comb>, Box<Comb>),
}

impl Comb {
    pub fn eval(&self, value: &impl Fn(usize) -> bool) -> bool {
        match self {
            Comb::True => true,
            Comb::False => false,
            Comb::Basic(i) => value(*i),
            Comb::Not(c) => !c.eval(value),
            Comb::And(a, b) => a.eval(value) && b.eval(value),
            Comb::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }

    pub fn indices(&self) -> BTreeSet<usize> {
        match self {
            Comb::True | Comb::False => BTreeSet::new(),
            Comb::Basic(i) => BTreeSet::from([*i]),
            Comb::Not(c) => c.indices(),
            Comb::And(a, b) | Comb::Or(a, b) => a.indices().union(&b.indices()).copied().collect(),
        }
    }

    fn to_formula(&self, basics: &[Formula]) -> Formula {
        match self {
            Comb::True => Formula::True,
            Comb::False => Formula::False,
            Comb::Basic(i) => basics[i - 1].clone(),
            Comb::Not(c) => !c.to_formula(basics),
            Comb::And(a, b) => a.to_formula(basics).and(b.to_formula(basics)),
            Comb::Or(a, b) => a.to_formula(basics).or(b.to_formula(basics)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Comb::Or(..) => 1,
            Comb::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(out, "(")?;
            self.fmt_at(out, 0)?;
            return write!(out, ")");
        }
        match self {
            Comb::True => write!(out, "true"),
            Comb::False => write!(out, "false"),
            Comb::Basic(i) => write!(out, "{i}"),
            Comb::Not(c) => {
                write!(out, "~")?;
                c.fmt_at(out, 3)
            }
            Comb::And(a, b) => {
                a.fmt_at(out, 2)?;
                write!(out, " & ")?;
                b.fmt_at(out, 3)
            }
            Comb::Or(a, b) => {
                a.fmt_at(out, 1)?;
                write!(out, " | ")?;
                b.fmt_at(out, 2)
            }
        }
    }
}

impl fmt::Display for Comb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Parses `(1 & ~2) | 3`-style combinations; `&` binds tighter than `|`.
pub fn parse_combination(text: &str) -> Result<Comb> {
    let toks: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = CombParser { text, toks, at: 0 };
    let c = p.or()?;
    if p.at != p.toks.len() {
        return Err(Error::Parse { pos: p.pos(), msg: "unexpected trailing input".into() });
    }
    Ok(c)
}

struct CombParser<'a> {
    text: &'a str,
    toks: Vec<(usize, char)>,
    at: usize,
}

impl CombParser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.text.len())
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.at).map(|t| t.1)
    }

    fn or(&mut self) -> Result<Comb> {
        let mut c = self.and()?;
        while self.peek() == Some('|') {
            self.at += 1;
            c = Comb::Or(Box::new(c), Box::new(self.and()?));
        }
        Ok(c)
    }

    fn and(&mut self) -> Result<Comb> {
        let mut c = self.term()?;
        while self.peek() == Some('&') {
            self.at += 1;
            c = Comb::And(Box::new(c), Box::new(self.term()?));
        }
        Ok(c)
    }

    fn term(&mut self) -> Result<Comb> {
        let pos = self.pos();
        match self.peek() {
            Some('~') => {
                self.at += 1;
                Ok(Comb::Not(Box::new(self.term()?)))
            }
            Some('(') => {
                self.at += 1;
                let c = self.or()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse { pos: self.pos(), msg: "expected ')'".into() });
                }
                self.at += 1;
                Ok(c)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut n = 0usize;
                while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                    n = n * 10 + d as usize;
                    self.at += 1;
                }
                Ok(Comb::Basic(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
                    word.push(c);
                    self.at += 1;
                }
                match word.as_str() {
                    "true" => Ok(Comb::True),
                    "false" => Ok(Comb::False),
                    _ => Err(Error::Parse { pos, msg: format!("unknown word {word}") }),
                }
            }
            _ => Err(Error::Parse { pos, msg: "expected a basic index, '~' or '('".into() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaifmanSentence {
    pub basics: Vec<BasicSentence>,
    pub combination: Comb,
    /// φ̃ when set: witnesses must lie in R. Otherwise R is read as V(G).
    pub annotated: bool,
}

impl GaifmanSentence {
    pub fn new(basics: Vec<BasicSentence>, combination: Comb, annotated: bool) -> Result<Self> {
        if basics.is_empty() {
            return Err(Error::input("a Gaifman sentence needs at least one basic sentence"));
        }
        if let Some(&i) = combination.indices().iter().find(|&&i| i == 0 || i > basics.len()) {
            return Err(Error::input(format!("combination refers to basic {i} of {}", basics.len())));
        }
        Ok(GaifmanSentence { basics, combination, annotated })
    }

    /// A single basic sentence.
    pub fn basic(ell: usize, r: usize, psi: &str, annotated: bool) -> Result<Self> {
        let b = BasicSentence::new(ell, r, parse_formula(psi)?)?;
        GaifmanSentence::new(vec![b], Comb::Basic(1), annotated)
    }

    /// The constant sentence `value`, carrying one placeholder basic.
    pub fn constant(value: bool) -> Self {
        let b = BasicSentence::new(1, 1, super::formula::eq("x", "x")).expect("valid");
        GaifmanSentence { basics: vec![b], combination: if value { Comb::True } else { Comb::False }, annotated: true }
    }

    pub fn m(&self) -> usize {
        self.basics.len()
    }

    /// r = max r_h.
    pub fn r(&self) -> usize {
        self.basics.iter().map(|b| b.r).max().unwrap_or(0)
    }

    /// ℓ = Σ ℓ_h.
    pub fn ell(&self) -> usize {
        self.basics.iter().map(|b| b.ell).sum()
    }

    pub fn with_annotated(&self, annotated: bool) -> Self {
        GaifmanSentence { annotated, ..self.clone() }
    }

    /// The equivalent first-order sentence: distances become δ-formulas and ψ
    /// is relativised to the r-ball of its variable.
    pub fn expand(&self) -> Formula {
        let mut avoid: BTreeSet<String> = self.basics.iter().flat_map(|b| b.psi.names()).collect();
        let mut parts = Vec::new();
        for (h, b) in self.basics.iter().enumerate() {
            let xs: Vec<String> = (1..=b.ell)
                .map(|i| {
                    let x = super::formula::fresh_name(&format!("w{}_{i}", h + 1), &avoid);
                    avoid.insert(x.clone());
                    x
                })
                .collect();
            let mut conj = Vec::new();
            for x in &xs {
                if self.annotated {
                    conj.push(Formula::InR(x.clone()));
                }
                let psi = b.psi.rename_bound(&mut avoid).substitute(&b.free_var(), x);
                conj.push(psi.relativize(x, b.r, &mut avoid));
            }
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    conj.push(!distance_formula(2 * b.r, &xs[i], &xs[j], &mut avoid));
                }
            }
            parts.push(xs.iter().rev().fold(and_all(conj), |acc, x| exists(x, acc)));
        }
        self.combination.to_formula(&parts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GaifmanJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GaifmanJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("Gaifman JSON: {e}"),
        })?;
        raw.try_into()
    }
}

impl fmt::Display for GaifmanSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasicJson {
    pub ell: usize,
    pub r: usize,
    pub psi: String,
}

/// Wire format: `{"basics":[{"ell","r","psi"}],"combination":"1 & ~2","annotated":true}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaifmanJson {
    pub basics: Vec<BasicJson>,
    pub combination: String,
    #[serde(default)]
    pub annotated: bool,
}

impl From<&GaifmanSentence> for GaifmanJson {
    fn from(s: &GaifmanSentence) -> Self {
        GaifmanJson {
            basics: s
                .basics
                .iter()
                .map(|b| BasicJson { ell: b.ell, r: b.r, psi: b.psi.to_string() })
                .collect(),
            combination: s.combination.to_string(),
            annotated: s.annotated,
        }
    }
}

impl TryFrom<GaifmanJson> for GaifmanSentence {
    type Error = Error;
    fn try_from(raw: GaifmanJson) -> Result<Self> {
        let basics = raw
            .basics
            .into_iter()
            .map(|b| BasicSentence::new(b.ell, b.r, parse_formula(&b.psi)?))
            .collect::<Result<Vec<_>>>()?;
        GaifmanSentence::new(basics, parse_combination(&raw.combination)?, raw.annotated)
    }
}

impl Serialize for GaifmanSentence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaifmanJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaifmanSentence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GaifmanJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

/// An (ℓ, r)-scattered subset of `candidates`, lexicographically first, or
/// none. Distances are measured in `g`.
pub fn scattered_subset(g: &Graph, candidates: &[Vertex], ell: usize, r: usize) -> Option<Vec<Vertex>> {
    if ell == 0 {
        return Some(Vec::new());
    }
    if candidates.len() < ell {
        return None;
    }
    let near: BTreeMap<Vertex, VertexSet> = candidates
        .iter()
        .map(|&v| (v, g.bfs(v, Some(2 * r)).into_keys().collect()))
        .collect();
    let mut chosen = Vec::with_capacity(ell);
    fn go(
        i: usize,
        cands: &[Vertex],
        ell: usize,
        near: &BTreeMap<Vertex, VertexSet>,
        chosen: &mut Vec<Vertex>,
    ) -> bool {
        if chosen.len() == ell {
            return true;
        }
        for j in i..cands.len() {
            if cands.len() - j < ell - chosen.len() {
                return false;
            }
            let v = cands[j];
            if chosen.iter().any(|c| near[c].contains(&v)) {
                continue;
            }
            chosen.push(v);
            if go(j + 1, cands, ell, near, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(0, candidates, ell, &near, &mut chosen).then_some(chosen)
}

/// Vertices of `scope` whose r-ball satisfies ψ.
pub fn local_candidates(g: &Graph, r_set: &VertexSet, scope: &VertexSet, b: &BasicSentence) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for &v in scope {
        if check_local(g, r_set, v, &b.psi, b.r)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Witness for one basic sentence with witnesses drawn from `scope`.
pub fn basic_witness(g: &Graph, r_set: &VertexSet, scope: &VertexSet, b: &BasicSentence) -> Result<Option<Vec<Vertex>>> {
    let cands = local_candidates(g, r_set, scope, b)?;
    Ok(scattered_subset(g, &cands, b.ell, b.r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaifmanEval {
    pub value: bool,
    /// Per basic: the first scattered witness set found, if any.
    pub witnesses: Vec<Option<Vec<Vertex>>>,
}

pub fn eval_gaifman_witness(g: &Graph, r_set: &VertexSet, phi: &GaifmanSentence) -> Result<GaifmanEval> {
    let all = g.vertex_set();
    let scope: VertexSet = if phi.annotated { r_set.intersection(&all).copied().collect() } else { all };
    let used = phi.combination.indices();
    let mut witnesses = Vec::with_capacity(phi.m());
    for (i, b) in phi.basics.iter().enumerate() {
        if used.contains(&(i + 1)) {
            witnesses.push(basic_witness(g, r_set, &scope, b)?);
        } else {
            witnesses.push(None);
        }
    }
    let value = phi.combination.eval(&|i| witnesses[i - 1].is_some());
    Ok(GaifmanEval { value, witnesses })
}

pub fn eval_gaifman(g: &Graph, r_set: &VertexSet, phi: &GaifmanSentence) -> Result<bool> {
    Ok(eval_gaifman_witness(g, r_set, phi)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::check_fol;

    #[test]
    fn spec_examples() {
        let k2 = Graph::complete(2);
        let has_nb = GaifmanSentence::basic(1, 1, "exists y. adj(x,y)", false).unwrap();
        assert!(eval_gaifman(&k2, &VertexSet::new(), &has_nb).unwrap());
        let two_far = GaifmanSentence::basic(2, 1, "true | x = x", false).unwrap();
        assert!(!eval_gaifman(&Graph::path(3), &VertexSet::new(), &two_far).unwrap());
        let ev = eval_gaifman_witness(&Graph::path(7), &VertexSet::new(), &two_far).unwrap();
        assert!(ev.value);
        assert_eq!(ev.witnesses[0], Some(vec![0, 3]));
    }

    #[test]
    fn annotation_restricts_witnesses() {
        let s = GaifmanSentence::basic(1, 1, "exists y. adj(x,y)", true).unwrap();
        let mut g = Graph::path(2);
        g.add_vertex(5);
        assert!(!eval_gaifman(&g, &[5].into(), &s).unwrap());
        assert!(eval_gaifman(&g, &[1, 5].into(), &s).unwrap());
        assert!(!eval_gaifman(&g, &VertexSet::new(), &s).unwrap());
    }

    #[test]
    fn combinations() {
        let c = parse_combination("(1 & ~2) | 3").unwrap();
        assert_eq!(c.to_string(), "1 & ~2 | 3");
        assert_eq!(parse_combination(&c.to_string()).unwrap(), c);
        assert!(c.eval(&|i| i == 3));
        assert!(!c.eval(&|i| i == 2));
        assert_eq!(parse_combination("1 | 2 & 3").unwrap().to_string(), "1 | 2 & 3");
        assert!(parse_combination("1 &").is_err());
        assert!(parse_combination("maybe").is_err());
        let b = BasicSentence::new(1, 1, parse_formula("x = x").unwrap()).unwrap();
        assert!(GaifmanSentence::new(vec![b.clone()], Comb::Basic(2), true).is_err());
        assert!(GaifmanSentence::new(vec![], Comb::True, true).is_err());
        assert!(BasicSentence::new(0, 1, b.psi.clone()).is_err());
        assert!(BasicSentence::new(1, 1, parse_formula("adj(x,y)").unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"basics":[{"ell":1,"r":1,"psi":"exists y. adj(x,y)"},{"ell":2,"r":1,"psi":"x in R"}],"combination":"(1 & ~2) | 1","annotated":true}"#;
        let s = GaifmanSentence::from_json(text).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!((s.r(), s.ell()), (1, 3));
        assert_eq!(GaifmanSentence::from_json(&s.to_json()).unwrap(), s);
        assert!(GaifmanSentence::from_json(r#"{"basics":[],"combination":"true"}"#).is_err());
        assert!(GaifmanSentence::from_json("{").is_err());
    }

    #[test]
    fn expansion_agrees_on_examples() {
        let s = GaifmanSentence::basic(2, 1, "exists y. adj(x,y)", true).unwrap();
        let f = s.expand();
        assert!(f.is_closed());
        for (g, r) in [
            (Graph::path(7), VertexSet::from([0, 1, 5])),
            (Graph::path(5), VertexSet::from([0, 4])),
            (Graph::cycle(6), VertexSet::from([0, 3])),
            (Graph::cycle(6), VertexSet::from([0, 2])),
        ] {
            assert_eq!(check_fol(&g, &r, &f).unwrap(), eval_gaifman(&g, &r, &s).unwrap());
        }
    }

    #[test]
    fn constants() {
        assert!(eval_gaifman(&Graph::new(), &VertexSet::new(), &GaifmanSentence::constant(true)).unwrap());
        assert!(!eval_gaifman(&Graph::complete(3), &VertexSet::new(), &GaifmanSentence::constant(false)).unwrap());
    }
}
