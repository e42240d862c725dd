use std::collections::BTreeMap;

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, Vertex, VertexSet};

/// A graph with an annotation, indexed for evaluation.
#[derive(Clone, Debug)]
pub struct Structure {
    dense: Dense,
    adj: Vec<bool>,
    in_r: Vec<bool>,
}

impl Structure {
    pub fn new(g: &Graph, r_set: &VertexSet) -> Self {
        let dense = Dense::new(g);
        let adj = dense.matrix();
        let in_r = dense.ids.iter().map(|v| r_set.contains(v)).collect();
        Structure { dense, adj, in_r }
    }

    pub fn n(&self) -> usize {
        self.dense.n()
    }

    fn index(&self, v: Vertex) -> Result<usize> {
        self.dense.idx(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn eval(&self, f: &Formula, assignment: &BTreeMap<String, Vertex>) -> Result<bool> {
        let mut slots = Vec::new();
        let mut names = Vec::new();
        for (x, &v) in assignment {
            names.push(x.clone());
            slots.push(self.index(v)?);
        }
        let compiled = compile(f, &mut names)?;
        slots.resize(names.len().max(slots.len()) + compiled.1, 0);
        Ok(self.run(&compiled.0, &mut slots))
    }

    fn run(&self, node: &Node, env: &mut Vec<usize>) -> bool {
        let n = self.n();
        match node {
            Node::Const(b) => *b,
            Node::Adj(a, b) => self.adj[env[*a] * n + env[*b]],
            Node::Eq(a, b) => env[*a] == env[*b],
            Node::InR(a) => self.in_r[env[*a]],
            Node::Not(f) => !self.run(f, env),
            Node::And(a, b) => self.run(a, env) && self.run(b, env),
            Node::Or(a, b) => self.run(a, env) || self.run(b, env),
            Node::Exists(s, f) => (0..n).any(|v| {
                env[*s] = v;
                self.run(f, env)
            }),
            Node::Forall(s, f) => (0..n).all(|v| {
                env[*s] = v;
                self.run(f, env)
            }),
        }
    }
}

/// Variables resolved to slots in an assignment vector.
#[derive(Debug)]
enum Node {
    Const(bool),
    Adj(usize, usize),
    Eq(usize, usize),
    InR(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// Compiles against the free names in `scope`; returns the tree and the
/// number of extra slots needed for binders.
fn compile(f: &Formula, scope: &mut Vec<String>) -> Result<(Node, usize)> {
    let base = scope.len();
    let mut env: Vec<(String, usize)> = scope.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut next = base;
    let mut max = base;
    let node = compile_in(f, &mut env, &mut next, &mut max)?;
    Ok((node, max - base))
}

fn compile_in(f: &Formula, env: &mut Vec<(String, usize)>, next: &mut usize, max: &mut usize) -> Result<Node> {
    let slot = |x: &String, env: &Vec<(String, usize)>| -> Result<usize> {
        env.iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::input(format!("free variable {x} has no value")))
    };
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Adj(a, b) => Node::Adj(slot(a, env)?, slot(b, env)?),
        Formula::Eq(a, b) => Node::Eq(slot(a, env)?, slot(b, env)?),
        Formula::InR(a) => Node::InR(slot(a, env)?),
        Formula::Not(g) => Node::Not(Box::new(compile_in(g, env, next, max)?)),
        Formula::And(a, b) => Node::And(
            Box::new(compile_in(a, env, next, max)?),
            Box::new(compile_in(b, env, next, max)?),
        ),
        Formula::Or(a, b) => Node::Or(
            Box::new(compile_in(a, env, next, max)?),
            Box::new(compile_in(b, env, next, max)?),
        ),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let s = *next;
            *next += 1;
            *max = (*max).max(*next);
            env.push((x.clone(), s));
            let body = Box::new(compile_in(g, env, next, max)?);
            env.pop();
            *next -= 1;
            if matches!(f, Formula::Exists(..)) {
                Node::Exists(s, body)
            } else {
                Node::Forall(s, body)
            }
        }
    })
}

/// Truth of a sentence under brute-force quantifier expansion.
pub fn check_fol(g: &Graph, r_set: &VertexSet, phi: &Formula) -> Result<bool> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::input(format!("formula has free variables {free:?}")));
    }
    Structure::new(g, r_set).eval(phi, &BTreeMap::new())
}

/// Truth of `phi` with its free variables bound by `assignment`.
pub fn eval_with(g: &Graph, r_set: &VertexSet, phi: &Formula, assignment: &BTreeMap<String, Vertex>) -> Result<bool> {
    Structure::new(g, r_set).eval(phi, assignment)
}

fn single_free(psi: &Formula) -> Result<String> {
    let free = psi.free_vars();
    if free.len() != 1 {
        return Err(Error::input(format!(
            "local formula needs exactly one free variable, found {}",
            free.len()
        )));
    }
    Ok(free.into_iter().next().expect("one"))
}

/// ψ(v) evaluated on the whole graph.
pub fn check_global(g: &Graph, r_set: &VertexSet, v: Vertex, psi: &Formula) -> Result<bool> {
    let x = single_free(psi)?;
    g.check_vertex(v)?;
    eval_with(g, r_set, psi, &BTreeMap::from([(x, v)]))
}

/// ψ(v) evaluated on G[N^r(v)] with R restricted to the ball.
pub fn check_local(g: &Graph, r_set: &VertexSet, v: Vertex, psi: &Formula, r: usize) -> Result<bool> {
    let x = single_free(psi)?;
    let ball = g.neighborhood(v, r)?;
    let sub = g.induced(&ball);
    let r_ball: VertexSet = r_set.intersection(&ball).copied().collect();
    eval_with(&sub, &r_ball, psi, &BTreeMap::from([(x, v)]))
}

/// Empirical locality audit: full and local evaluation agree on every vertex
/// of every corpus entry.
pub fn verify_locality(corpus: &[(Graph, VertexSet)], psi: &Formula, r: usize) -> Result<bool> {
    single_free(psi)?;
    for (g, r_set) in corpus {
        for v in g.vertices() {
            if check_global(g, r_set, v, psi)? != check_local(g, r_set, v, psi, r)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::distance_atom;
    use crate::logic::parser::parse_formula;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn check_fol_examples() {
        let none = VertexSet::new();
        let f = p("exists x. exists y. adj(x,y)");
        assert!(check_fol(&Graph::complete(2), &none, &f).unwrap());
        assert!(!check_fol(&Graph::with_vertices(0..3), &none, &f).unwrap());
        let two = p("forall x. exists y. exists z. adj(x,y) & adj(x,z) & ~(y=z)");
        assert!(check_fol(&Graph::cycle(5), &none, &two).unwrap());
        assert!(!check_fol(&Graph::path(5), &none, &two).unwrap());
        assert!(check_fol(&Graph::path(2), &none, &p("adj(x,y)")).is_err());
        let r = p("exists x. (x in R & ~adj(x,x))");
        assert!(check_fol(&Graph::path(2), &[1].into(), &r).unwrap());
        assert!(!check_fol(&Graph::path(2), &none, &r).unwrap());
    }

    #[test]
    fn shadowing_rebinds() {
        let f = p("exists x. (adj(x,x) | exists x. x in R)");
        assert!(check_fol(&Graph::path(2), &[0].into(), &f).unwrap());
        assert!(!check_fol(&Graph::path(2), &VertexSet::new(), &f).unwrap());
    }

    #[test]
    fn local_examples() {
        let none = VertexSet::new();
        let psi = p("exists y. adj(x,y)");
        assert!(check_local(&Graph::path(2), &none, 0, &psi, 1).unwrap());
        assert!(!check_local(&Graph::with_vertices([0]), &none, 0, &psi, 1).unwrap());
        let deg2 = p("deg(x) = 2");
        let path9 = Graph::path(9);
        assert!(check_local(&path9, &none, 4, &deg2, 1).unwrap());
        assert!(check_global(&path9, &none, 4, &deg2).unwrap());
        assert!(check_local(&path9, &none, 4, &p("adj(x,y)"), 1).is_err());
        assert!(check_local(&path9, &none, 99, &deg2, 1).is_err());
    }

    #[test]
    fn locality_audit() {
        let psi = p("exists y. adj(x,y)");
        let corpus = vec![(Graph::path(5), VertexSet::new()), (Graph::petersen(), VertexSet::new())];
        assert!(verify_locality(&corpus, &psi, 1).unwrap());
        assert!(verify_locality(&[], &psi, 1).unwrap());
        // Another vertex always exists in P5 but not inside a lone vertex's
        // ball in K1 + K2.
        let far = p("exists y. ~(x=y)");
        let mut k1k2 = Graph::with_vertices([0]);
        k1k2.add_edge(1, 2);
        let corpus = vec![(Graph::path(5), VertexSet::new()), (k1k2, VertexSet::new())];
        assert!(!verify_locality(&corpus, &far, 1).unwrap());
    }

    #[test]
    fn distance_atom_examples() {
        let none = VertexSet::new();
        let at = |g: &Graph, r, a, b| eval_with(g, &none, &distance_atom(r), &BTreeMap::from([("x".into(), a), ("y".into(), b)])).unwrap();
        assert!(at(&Graph::path(3), 0, 1, 1));
        assert!(at(&Graph::path(2), 1, 0, 1));
        assert!(!at(&Graph::path(4), 2, 0, 3));
        assert!(at(&Graph::path(3), 2, 0, 2));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1u32..=8, proptest::collection::vec(any::<bool>(), 28)).prop_map(|(n, mask)| {
            let mut g = Graph::with_vertices(0..n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn distance_atom_agrees_with_bfs(g in arb_graph(), r in 0usize..4) {
            let none = VertexSet::new();
            let s = Structure::new(&g, &none);
            let f = distance_atom(r);
            for a in g.vertices() {
                for b in g.vertices() {
                    let by_formula = s.eval(&f, &BTreeMap::from([("x".into(), a), ("y".into(), b)])).unwrap();
                    let by_bfs = g.distance(a, b).unwrap().is_some_and(|d| d <= r);
                    prop_assert_eq!(by_formula, by_bfs);
                }
            }
        }
    }
}
