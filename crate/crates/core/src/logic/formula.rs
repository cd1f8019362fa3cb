use std::collections::BTreeSet;
use std::fmt;

use crate::modal::AgentId;

/// Formulas of the lattice-modal language with nominals and conominals.
///
/// ASCII surface syntax, loosest binding first:
///
/// | syntax      | meaning                          |
/// |-------------|----------------------------------|
/// | `φ \| ψ`    | join, `φ ∨ ψ`                    |
/// | `φ & ψ`     | meet, `φ ∧ ψ`                    |
/// | `[i] φ`     | box of agent `i`, `□ᵢφ`          |
/// | `<i> φ`     | black diamond of agent `i`, `◆ᵢφ`|
/// | `0`, `1`    | bottom, top                      |
/// | `p`         | proposition (category label)     |
/// | `n:a`       | nominal for object `a`           |
/// | `c:x`       | conominal for feature `x`        |
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Zero,
    One,
    Prop(String),
    Nominal(String),
    Conominal(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(AgentId, Box<Formula>),
    DiamondBlack(AgentId, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    pub fn nominal(name: &str) -> Formula {
        Formula::Nominal(name.to_string())
    }

    pub fn conominal(name: &str) -> Formula {
        Formula::Conominal(name.to_string())
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn boxed(agent: u32, inner: Formula) -> Formula {
        Formula::Box(AgentId(agent), Box::new(inner))
    }

    pub fn diamond(agent: u32, inner: Formula) -> Formula {
        Formula::DiamondBlack(AgentId(agent), Box::new(inner))
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Zero
            | Formula::One
            | Formula::Prop(_)
            | Formula::Nominal(_)
            | Formula::Conominal(_) => 0,
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
            Formula::Box(_, f) | Formula::DiamondBlack(_, f) => 1 + f.depth(),
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Formula::Box(_, g) | Formula::DiamondBlack(_, g) => g.visit(f),
            _ => {}
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Box(i, _) | Formula::DiamondBlack(i, _) = f {
                out.insert(*i);
            }
        });
        out
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Nominal(n) = f {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn conominals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Conominal(n) = f {
                out.insert(n.clone());
            }
        });
        out
    }

    /// True when no box or diamond occurs.
    pub fn is_modal_free(&self) -> bool {
        self.agents().is_empty()
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Formula::Zero => f.write_str("0"),
            Formula::One => f.write_str("1"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Nominal(n) => write!(f, "n:{n}"),
            Formula::Conominal(n) => write!(f, "c:{n}"),
            Formula::Or(l, r) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, 0)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, 1)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::And(l, r) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, 1)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Box(i, g) => {
                write!(f, "[{i}]")?;
                g.fmt_prec(f, 2)
            }
            Formula::DiamondBlack(i, g) => {
                write!(f, "<{i}>")?;
                g.fmt_prec(f, 2)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut p = self.lhs.props();
        p.extend(self.rhs.props());
        p
    }

    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut a = self.lhs.agents();
        a.extend(self.rhs.agents());
        a
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}
