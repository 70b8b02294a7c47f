use std::collections::BTreeSet;
use std::fmt;

/// First-order formula over the signature `{E, =, colors}` with distance atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Edge(String, String),
    Eq(String, String),
    /// `Color(name, var)`.
    Color(String, String),
    /// `dist(x, y) <= c`.
    DistLe(String, String, usize),
    /// `dist(x, y) > c`.
    DistGt(String, String, usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn edge(x: &str, y: &str) -> Self {
        Formula::Edge(x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn color(name: &str, x: &str) -> Self {
        Formula::Color(name.into(), x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    /// Conjunction; empty is `true`, singletons collapse.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; empty is `false`, singletons collapse.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &str, bound: &Vec<&str>| {
            if !bound.contains(&v) {
                out.insert(v.to_string());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::DistLe(a, b, _) | Formula::DistGt(a, b, _) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Color(_, a) => note(a, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Color names referenced anywhere in the formula.
    pub fn colors(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Color(c, _) = f {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
            _ => 0,
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Renames every bound variable `v` to `prefix + v`, leaving free ones alone.
    pub fn rename_bound(&self, prefix: &str) -> Formula {
        self.rename_inner(prefix, &mut Vec::new())
    }

    fn rename_inner(&self, prefix: &str, bound: &mut Vec<String>) -> Formula {
        let map = |v: &String, bound: &Vec<String>| {
            if bound.contains(v) {
                format!("{prefix}{v}")
            } else {
                v.clone()
            }
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Edge(a, b) => Formula::Edge(map(a, bound), map(b, bound)),
            Formula::Eq(a, b) => Formula::Eq(map(a, bound), map(b, bound)),
            Formula::Color(c, a) => Formula::Color(c.clone(), map(a, bound)),
            Formula::DistLe(a, b, c) => Formula::DistLe(map(a, bound), map(b, bound), *c),
            Formula::DistGt(a, b, c) => Formula::DistGt(map(a, bound), map(b, bound), *c),
            Formula::Not(f) => Formula::Not(Box::new(f.rename_inner(prefix, bound))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_inner(prefix, bound)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_inner(prefix, bound)).collect()),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.rename_inner(prefix, bound)),
                Box::new(b.rename_inner(prefix, bound)),
            ),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                let body = Box::new(f.rename_inner(prefix, bound));
                bound.pop();
                let name = format!("{prefix}{v}");
                if matches!(self, Formula::Exists(..)) {
                    Formula::Exists(name, body)
                } else {
                    Formula::Forall(name, body)
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Edge(a, b) => write!(f, "E({a},{b})"),
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Color(c, a) => write!(f, "{c}({a})"),
            Formula::DistLe(a, b, c) => write!(f, "dist({a},{b})<={c}"),
            Formula::DistGt(a, b, c) => write!(f, "dist({a},{b})>{c}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                // `!x=y` would not reparse, so equalities get parentheses too
                if g.precedence() < 4 || matches!(**g, Formula::Eq(..) | Formula::DistLe(..) | Formula::DistGt(..)) {
                    write!(f, "({g})")
                } else {
                    write!(f, "{g}")
                }
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let (sep, min) = if matches!(self, Formula::And(_)) {
                    (" & ", 4)
                } else {
                    (" | ", 3)
                };
                for (idx, g) in gs.iter().enumerate() {
                    if idx > 0 {
                        f.write_str(sep)?;
                    }
                    g.fmt_operand(f, min)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                a.fmt_operand(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_operand(f, 1)
            }
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
        }
    }
}
