use std::collections::BTreeSet;
use std::fmt;

/// First-order formulas over graphs annotated with one unary predicate R.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Adj(String, String),
    Eq(String, String),
    InR(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

use Formula::*;

pub fn adj(x: &str, y: &str) -> Formula {
    Adj(x.into(), y.into())
}

pub fn eq(x: &str, y: &str) -> Formula {
    Eq(x.into(), y.into())
}

pub fn in_r(x: &str) -> Formula {
    InR(x.into())
}

pub fn exists(x: &str, body: Formula) -> Formula {
    Exists(x.into(), Box::new(body))
}

pub fn forall(x: &str, body: Formula) -> Formula {
    Forall(x.into(), Box::new(body))
}

/// Conjunction of `parts`, `True` when empty.
pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    parts.into_iter().reduce(|a, b| a.and(b)).unwrap_or(True)
}

/// Disjunction of `parts`, `False` when empty.
pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    parts.into_iter().reduce(|a, b| a.or(b)).unwrap_or(False)
}

impl std::ops::Not for Formula {
    type Output = Formula;
    fn not(self) -> Formula {
        Not(Box::new(self))
    }
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        (!self).or(other)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            True | False => {}
            Adj(a, b) | Eq(a, b) => {
                see(a, bound);
                see(b, bound);
            }
            InR(a) => see(a, bound),
            Not(f) => f.collect_free(bound, out),
            And(a, b) | Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(x, f) | Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Adj(a, b) | Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            InR(a) | Exists(a, _) | Forall(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Not(a) | Exists(_, a) | Forall(_, a) => a.visit(f),
            And(a, b) | Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            True | False | Adj(..) | Eq(..) | InR(_) => 0,
            Not(f) => f.quantifier_depth(),
            And(a, b) | Or(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Exists(_, f) | Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Quantifiers form a prefix over a quantifier-free matrix.
    pub fn is_prenex(&self) -> bool {
        match self {
            Exists(_, f) | Forall(_, f) => f.is_prenex(),
            other => other.quantifier_depth() == 0,
        }
    }

    /// Quantifier prefix length of a prenex formula.
    pub fn prefix_len(&self) -> usize {
        match self {
            Exists(_, f) | Forall(_, f) => 1 + f.prefix_len(),
            _ => 0,
        }
    }

    /// Renames every bound variable to a name not in `avoid`, making binders
    /// pairwise distinct. New names are added to `avoid`.
    pub fn rename_bound(&self, avoid: &mut BTreeSet<String>) -> Formula {
        self.rename_in(&mut Vec::new(), avoid)
    }

    fn rename_in(&self, env: &mut Vec<(String, String)>, avoid: &mut BTreeSet<String>) -> Formula {
        let look = |v: &String, env: &Vec<(String, String)>| -> String {
            env.iter().rev().find(|(from, _)| from == v).map(|(_, to)| to.clone()).unwrap_or_else(|| v.clone())
        };
        match self {
            True => True,
            False => False,
            Adj(a, b) => Adj(look(a, env), look(b, env)),
            Eq(a, b) => Eq(look(a, env), look(b, env)),
            InR(a) => InR(look(a, env)),
            Not(f) => !f.rename_in(env, avoid),
            And(a, b) => a.rename_in(env, avoid).and(b.rename_in(env, avoid)),
            Or(a, b) => a.rename_in(env, avoid).or(b.rename_in(env, avoid)),
            Exists(x, f) | Forall(x, f) => {
                let fresh = fresh_name(x, avoid);
                avoid.insert(fresh.clone());
                env.push((x.clone(), fresh.clone()));
                let body = Box::new(f.rename_in(env, avoid));
                env.pop();
                if matches!(self, Exists(..)) {
                    Exists(fresh, body)
                } else {
                    Forall(fresh, body)
                }
            }
        }
    }

    /// Replaces free occurrences of `var` by `by`, renaming binders that would
    /// capture `by`.
    pub fn substitute(&self, var: &str, by: &str) -> Formula {
        let mut avoid = self.names();
        avoid.insert(by.to_string());
        self.subst_in(var, by, &mut avoid)
    }

    fn subst_in(&self, var: &str, by: &str, avoid: &mut BTreeSet<String>) -> Formula {
        let s = |v: &String| if v == var { by.to_string() } else { v.clone() };
        match self {
            True => True,
            False => False,
            Adj(a, b) => Adj(s(a), s(b)),
            Eq(a, b) => Eq(s(a), s(b)),
            InR(a) => InR(s(a)),
            Not(f) => !f.subst_in(var, by, avoid),
            And(a, b) => a.subst_in(var, by, avoid).and(b.subst_in(var, by, avoid)),
            Or(a, b) => a.subst_in(var, by, avoid).or(b.subst_in(var, by, avoid)),
            Exists(x, f) | Forall(x, f) => {
                let rebuild = |x: String, body: Formula| {
                    if matches!(self, Exists(..)) {
                        Exists(x, Box::new(body))
                    } else {
                        Forall(x, Box::new(body))
                    }
                };
                if x == var {
                    return self.clone();
                }
                if x == by {
                    let fresh = fresh_name(x, avoid);
                    avoid.insert(fresh.clone());
                    let body = f.subst_in(x, &fresh, avoid).subst_in(var, by, avoid);
                    return rebuild(fresh, body);
                }
                rebuild(x.clone(), f.subst_in(var, by, avoid))
            }
        }
    }

    /// Relativises every quantifier to the r-ball around `center`.
    pub fn relativize(&self, center: &str, r: usize, avoid: &mut BTreeSet<String>) -> Formula {
        match self {
            Not(f) => !f.relativize(center, r, avoid),
            And(a, b) => a.relativize(center, r, avoid).and(b.relativize(center, r, avoid)),
            Or(a, b) => a.relativize(center, r, avoid).or(b.relativize(center, r, avoid)),
            Exists(x, f) => {
                let guard = distance_formula(r, center, x, avoid);
                Exists(x.clone(), Box::new(guard.and(f.relativize(center, r, avoid))))
            }
            Forall(x, f) => {
                let guard = distance_formula(r, center, x, avoid);
                Forall(x.clone(), Box::new(guard.implies(f.relativize(center, r, avoid))))
            }
            atom => atom.clone(),
        }
    }
}

/// `base` itself if unused, else `base_1`, `base_2`, … .
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..).map(|i| format!("{stem}_{i}")).find(|n| !avoid.contains(n)).expect("infinite supply")
}

/// δ_r(x, y): a walk x = z0, z1, …, zr = y whose steps are equalities or
/// edges, over r − 1 existential intermediates; δ_0 is equality.
pub fn distance_formula(r: usize, x: &str, y: &str, avoid: &mut BTreeSet<String>) -> Formula {
    if r == 0 {
        return eq(x, y);
    }
    avoid.insert(x.to_string());
    avoid.insert(y.to_string());
    let mut names = vec![x.to_string()];
    for _ in 1..r {
        let z = fresh_name("z", avoid);
        avoid.insert(z.clone());
        names.push(z);
    }
    names.push(y.to_string());
    let step = |a: &str, b: &str| eq(a, b).or(adj(a, b));
    let body = and_all(names.windows(2).map(|w| step(&w[0], &w[1])));
    names[1..r].iter().rev().fold(body, |acc, z| exists(z, acc))
}

/// δ_r with variables `x` and `y` free.
pub fn distance_atom(r: usize) -> Formula {
    distance_formula(r, "x", "y", &mut BTreeSet::new())
}

fn prec(f: &Formula) -> u8 {
    match f {
        Exists(..) | Forall(..) => 0,
        Or(..) => 1,
        And(..) => 2,
        _ => 3,
    }
}

impl Formula {
    fn fmt_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = prec(self);
        if p < min {
            write!(out, "(")?;
            self.fmt_at(out, 0)?;
            return write!(out, ")");
        }
        match self {
            True => write!(out, "true"),
            False => write!(out, "false"),
            Adj(a, b) => write!(out, "adj({a},{b})"),
            Eq(a, b) => write!(out, "{a} = {b}"),
            InR(a) => write!(out, "{a} in R"),
            Not(f) => {
                write!(out, "~")?;
                f.fmt_at(out, 3)
            }
            And(a, b) => {
                a.fmt_at(out, 2)?;
                write!(out, " & ")?;
                b.fmt_at(out, 3)
            }
            Or(a, b) => {
                a.fmt_at(out, 1)?;
                write!(out, " | ")?;
                b.fmt_at(out, 2)
            }
            Exists(x, f) => {
                write!(out, "exists {x}. ")?;
                f.fmt_at(out, 0)
            }
            Forall(x, f) => {
                write!(out, "forall {x}. ")?;
                f.fmt_at(out, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        let f = exists("x", adj("x", "y").and(in_r("z")));
        assert_eq!(f.free_vars(), ["y".to_string(), "z".to_string()].into());
        assert!(exists("x", eq("x", "x")).is_closed());
    }

    #[test]
    fn display_minimal_parentheses() {
        let f = adj("x", "y").or(eq("x", "y")).and(!in_r("x"));
        assert_eq!(f.to_string(), "(adj(x,y) | x = y) & ~x in R");
        let g = exists("x", adj("x", "x")).and(True);
        assert_eq!(g.to_string(), "(exists x. adj(x,x)) & true");
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = exists("y", adj("x", "y"));
        let g = f.substitute("x", "y");
        assert_eq!(g.free_vars(), ["y".to_string()].into());
        match g {
            Exists(b, body) => {
                assert_ne!(b, "y");
                assert_eq!(*body, adj("y", &b));
            }
            _ => panic!(),
        }
        assert_eq!(forall("x", adj("x", "x")).substitute("x", "q"), forall("x", adj("x", "x")));
    }

    #[test]
    fn distance_formula_shape() {
        assert_eq!(distance_atom(0), eq("x", "y"));
        assert_eq!(distance_atom(1), eq("x", "y").or(adj("x", "y")));
        assert_eq!(distance_atom(3).prefix_len(), 2);
        assert!(distance_atom(3).is_prenex());
        assert_eq!(distance_atom(3).free_vars().len(), 2);
    }

    #[test]
    fn renaming_makes_binders_distinct() {
        let f = exists("x", adj("x", "y")).and(exists("x", eq("x", "x")));
        let mut avoid = f.names();
        let g = f.rename_bound(&mut avoid);
        let mut binders = Vec::new();
        g.visit(&mut |h| {
            if let Exists(x, _) = h {
                binders.push(x.clone())
            }
        });
        assert_eq!(binders.len(), 2);
        assert_ne!(binders[0], binders[1]);
        assert_eq!(g.free_vars(), f.free_vars());
    }
}
