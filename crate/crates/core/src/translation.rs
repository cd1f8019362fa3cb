//! Standard translation into two-sorted first-order logic, and a finite
//! evaluator for the resulting formulas.
//!
//! | φ        | `ST_a(φ)`                        | `ST_x(φ)`                        |
//! |----------|----------------------------------|----------------------------------|
//! | `0`      | `a ≠ a`                          | `x = x`                          |
//! | `1`      | `a = a`                          | `x ≠ x`                          |
//! | `p`      | `P₁(a)`                          | `P₂(x)`                          |
//! | `n:j`    | `a ≤ j`                          | `j ⊥ x`                          |
//! | `c:m`    | `a ⊥ m`                          | `m ≤ x`                          |
//! | `φ ∨ ψ`  | `∀x[ST_x(φ∨ψ) → a ⊥ x]`          | `ST_x(φ) ∧ ST_x(ψ)`              |
//! | `φ ∧ ψ`  | `ST_a(φ) ∧ ST_a(ψ)`              | `∀a[ST_a(φ∧ψ) → a ⊥ x]`          |
//! | `□ᵢφ`    | `∀x[ST_x(φ) → a Rᵢ x]`           | `∀a[ST_a(□ᵢφ) → a ⊥ x]`          |
//! | `◆ᵢφ`    | `∀x[ST_x(◆ᵢφ) → a ⊥ x]`          | `∀a[ST_a(φ) → a Rᵢ x]`           |
//!
//! `a ≤ j` abbreviates `∀x(j ⊥ x → a ⊥ x)` and `m ≤ x` abbreviates
//! `∀a(a ⊥ m → a ⊥ x)`. Both stay atomic until [`expand_abbreviations`].
//! Each proposition `p` contributes the predicate pair `P₁`, `P₂`, printed
//! with the name capitalized (`q` gives `Q₁`, `Q₂`).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::context::FormalContext;
use crate::error::{Error, Result, Sort};
use crate::logic::{Formula, Inequality, Model};
use crate::modal::{AgentId, AgentRelation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, Sort),
    /// A context element, named.
    Const(String, Sort),
}

impl Term {
    pub fn var_a(name: &str) -> Term {
        Term::Var(name.to_string(), Sort::Object)
    }

    pub fn var_x(name: &str) -> Term {
        Term::Var(name.to_string(), Sort::Feature)
    }

    pub fn object(name: &str) -> Term {
        Term::Const(name.to_string(), Sort::Object)
    }

    pub fn feature(name: &str) -> Term {
        Term::Const(name.to_string(), Sort::Feature)
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(_, s) | Term::Const(_, s) => *s,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n, _) | Term::Const(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Equal(Term, Term),
    /// `a ⊥ x`.
    Incidence(Term, Term),
    Rel(AgentId, Term, Term),
    Pred1(String, Term),
    Pred2(String, Term),
    LeqA(Term, Term),
    LeqX(Term, Term),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    ForallA(String, Box<FoFormula>),
    ForallX(String, Box<FoFormula>),
    ExistsA(String, Box<FoFormula>),
    ExistsX(String, Box<FoFormula>),
}

impl FoFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(f))
    }

    pub fn and(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: FoFormula, r: FoFormula) -> FoFormula {
        FoFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn forall_a(v: &str, body: FoFormula) -> FoFormula {
        FoFormula::ForallA(v.to_string(), Box::new(body))
    }

    pub fn forall_x(v: &str, body: FoFormula) -> FoFormula {
        FoFormula::ForallX(v.to_string(), Box::new(body))
    }

    fn children(&self) -> Vec<&FoFormula> {
        match self {
            FoFormula::Not(f)
            | FoFormula::ForallA(_, f)
            | FoFormula::ForallX(_, f)
            | FoFormula::ExistsA(_, f)
            | FoFormula::ExistsX(_, f) => vec![f],
            FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Implies(l, r) => vec![l, r],
            _ => vec![],
        }
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            FoFormula::Equal(s, t)
            | FoFormula::Incidence(s, t)
            | FoFormula::Rel(_, s, t)
            | FoFormula::LeqA(s, t)
            | FoFormula::LeqX(s, t) => vec![s, t],
            FoFormula::Pred1(_, t) | FoFormula::Pred2(_, t) => vec![t],
            _ => vec![],
        }
    }

    fn each(&self, f: &mut impl FnMut(&FoFormula)) {
        f(self);
        for c in self.children() {
            c.each(f);
        }
    }

    /// True when no `P₁`/`P₂` atom occurs (the language L₀).
    pub fn is_predicate_free(&self) -> bool {
        let mut free = true;
        self.each(&mut |f| {
            if matches!(f, FoFormula::Pred1(..) | FoFormula::Pred2(..)) {
                free = false;
            }
        });
        free
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.each(&mut |f| {
            if let FoFormula::Pred1(p, _) | FoFormula::Pred2(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.each(&mut |f| {
            for t in f.terms() {
                out.insert(t.name().to_string());
            }
            if let FoFormula::ForallA(v, _)
            | FoFormula::ForallX(v, _)
            | FoFormula::ExistsA(v, _)
            | FoFormula::ExistsX(v, _) = f
            {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Free variables with their sorts.
    pub fn free_vars(&self) -> BTreeSet<(String, Sort)> {
        fn go(f: &FoFormula, bound: &mut Vec<(String, Sort)>, out: &mut BTreeSet<(String, Sort)>) {
            for t in f.terms() {
                if let Term::Var(n, s) = t {
                    if !bound.iter().any(|(b, _)| b == n) {
                        out.insert((n.clone(), *s));
                    }
                }
            }
            if let Some((v, s, body)) = f.binder() {
                bound.push((v.to_string(), s));
                go(body, bound, out);
                bound.pop();
            } else {
                for c in f.children() {
                    go(c, bound, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn binder(&self) -> Option<(&str, Sort, &FoFormula)> {
        match self {
            FoFormula::ForallA(v, b) | FoFormula::ExistsA(v, b) => Some((v, Sort::Object, b)),
            FoFormula::ForallX(v, b) | FoFormula::ExistsX(v, b) => Some((v, Sort::Feature, b)),
            _ => None,
        }
    }

    /// Pretty-prints with Unicode connectives.
    pub fn to_unicode(&self) -> String {
        Printer::new(self, false).print(self)
    }

    /// Pretty-prints in plain ASCII.
    pub fn to_ascii(&self) -> String {
        Printer::new(self, true).print(self)
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_unicode())
    }
}

/// Sort discipline: object positions hold object terms, feature positions
/// feature terms, and every variable is bound (or declared free) at the
/// sort it is used with.
pub fn check_sorts(f: &FoFormula, free: &[(&str, Sort)]) -> Result<()> {
    fn expect(t: &Term, s: Sort, scope: &[(String, Sort)]) -> Result<()> {
        if t.sort() != s {
            return Err(Error::SortMismatch {
                term: t.name().to_string(),
                expected: s,
            });
        }
        if let Term::Var(n, vs) = t {
            match scope.iter().rev().find(|(b, _)| b == n) {
                None => return Err(Error::UnboundVariable(n.clone())),
                Some((_, bs)) if bs != vs => {
                    return Err(Error::SortMismatch {
                        term: n.clone(),
                        expected: *bs,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }
    fn go(f: &FoFormula, scope: &mut Vec<(String, Sort)>) -> Result<()> {
        use Sort::{Feature as X, Object as A};
        match f {
            FoFormula::Equal(s, t) => {
                expect(s, s.sort(), scope)?;
                expect(t, s.sort(), scope)
            }
            FoFormula::Incidence(s, t) | FoFormula::Rel(_, s, t) => {
                expect(s, A, scope)?;
                expect(t, X, scope)
            }
            FoFormula::Pred1(_, t) => expect(t, A, scope),
            FoFormula::Pred2(_, t) => expect(t, X, scope),
            FoFormula::LeqA(s, t) => {
                expect(s, A, scope)?;
                expect(t, A, scope)
            }
            FoFormula::LeqX(s, t) => {
                expect(s, X, scope)?;
                expect(t, X, scope)
            }
            _ => {
                if let Some((v, s, body)) = f.binder() {
                    scope.push((v.to_string(), s));
                    let r = go(body, scope);
                    scope.pop();
                    r
                } else {
                    f.children().into_iter().try_for_each(|c| go(c, scope))
                }
            }
        }
    }
    let mut scope: Vec<(String, Sort)> = free.iter().map(|(n, s)| (n.to_string(), *s)).collect();
    go(f, &mut scope)
}

/// Variable names by sort: `a, b, c, d, e, a1, a2, …` and
/// `x, y, z, w, v, x1, x2, …`.
fn var_name(sort: Sort, i: usize) -> String {
    const A: [&str; 5] = ["a", "b", "c", "d", "e"];
    const X: [&str; 5] = ["x", "y", "z", "w", "v"];
    match (sort, i) {
        (Sort::Object, i) if i < 5 => A[i].to_string(),
        (Sort::Feature, i) if i < 5 => X[i].to_string(),
        (Sort::Object, i) => format!("a{}", i - 4),
        (Sort::Feature, i) => format!("x{}", i - 4),
    }
}

/// Picks the first name of a sort not in scope and not reserved.
struct Scope {
    reserved: BTreeSet<String>,
    stack: Vec<String>,
}

impl Scope {
    fn new(reserved: BTreeSet<String>) -> Self {
        Scope {
            reserved,
            stack: Vec::new(),
        }
    }

    fn fresh(&self, sort: Sort) -> String {
        (0..)
            .map(|i| var_name(sort, i))
            .find(|n| !self.reserved.contains(n) && !self.stack.contains(n))
            .expect("infinite supply")
    }

    fn bind<T>(&mut self, sort: Sort, body: impl FnOnce(&mut Self, &str) -> T) -> (String, T) {
        let v = self.fresh(sort);
        self.stack.push(v.clone());
        let out = body(self, &v);
        self.stack.pop();
        (v, out)
    }
}

fn constants(f: &Formula) -> BTreeSet<String> {
    let mut c = f.nominals();
    c.extend(f.conominals());
    c
}

fn st_a_in(f: &Formula, a: &str, sc: &mut Scope) -> FoFormula {
    let av = Term::var_a(a);
    match f {
        Formula::Zero => FoFormula::not(FoFormula::Equal(av.clone(), av)),
        Formula::One => FoFormula::Equal(av.clone(), av),
        Formula::Prop(p) => FoFormula::Pred1(p.clone(), av),
        Formula::Nominal(j) => FoFormula::LeqA(av, Term::object(j)),
        Formula::Conominal(m) => FoFormula::Incidence(av, Term::feature(m)),
        Formula::And(l, r) => FoFormula::and(st_a_in(l, a, sc), st_a_in(r, a, sc)),
        Formula::Or(..) | Formula::DiamondBlack(..) => {
            let (x, body) = sc.bind(Sort::Feature, |sc, x| {
                FoFormula::implies(
                    st_x_in(f, x, sc),
                    FoFormula::Incidence(av.clone(), Term::var_x(x)),
                )
            });
            FoFormula::forall_x(&x, body)
        }
        Formula::Box(i, g) => {
            let (x, body) = sc.bind(Sort::Feature, |sc, x| {
                FoFormula::implies(
                    st_x_in(g, x, sc),
                    FoFormula::Rel(*i, av.clone(), Term::var_x(x)),
                )
            });
            FoFormula::forall_x(&x, body)
        }
    }
}

fn st_x_in(f: &Formula, x: &str, sc: &mut Scope) -> FoFormula {
    let xv = Term::var_x(x);
    match f {
        Formula::Zero => FoFormula::Equal(xv.clone(), xv),
        Formula::One => FoFormula::not(FoFormula::Equal(xv.clone(), xv)),
        Formula::Prop(p) => FoFormula::Pred2(p.clone(), xv),
        Formula::Nominal(j) => FoFormula::Incidence(Term::object(j), xv),
        Formula::Conominal(m) => FoFormula::LeqX(Term::feature(m), xv),
        Formula::Or(l, r) => FoFormula::and(st_x_in(l, x, sc), st_x_in(r, x, sc)),
        Formula::And(..) | Formula::Box(..) => {
            let (a, body) = sc.bind(Sort::Object, |sc, a| {
                FoFormula::implies(
                    st_a_in(f, a, sc),
                    FoFormula::Incidence(Term::var_a(a), xv.clone()),
                )
            });
            FoFormula::forall_a(&a, body)
        }
        Formula::DiamondBlack(i, g) => {
            let (a, body) = sc.bind(Sort::Object, |sc, a| {
                FoFormula::implies(
                    st_a_in(g, a, sc),
                    FoFormula::Rel(*i, Term::var_a(a), xv.clone()),
                )
            });
            FoFormula::forall_a(&a, body)
        }
    }
}

/// `ST_a(φ)` with `var` free.
pub fn st_a(f: &Formula, var: &str) -> FoFormula {
    let mut sc = Scope::new(constants(f));
    sc.stack.push(var.to_string());
    st_a_in(f, var, &mut sc)
}

/// `ST_x(φ)` with `var` free.
pub fn st_x(f: &Formula, var: &str) -> FoFormula {
    let mut sc = Scope::new(constants(f));
    sc.stack.push(var.to_string());
    st_x_in(f, var, &mut sc)
}

/// `∀a(ST_a(lhs) → ST_a(rhs))`.
pub fn translate_inequality(ineq: &Inequality) -> FoFormula {
    let mut reserved = constants(&ineq.lhs);
    reserved.extend(constants(&ineq.rhs));
    let mut sc = Scope::new(reserved);
    let (a, body) = sc.bind(Sort::Object, |sc, a| {
        FoFormula::implies(st_a_in(&ineq.lhs, a, sc), st_a_in(&ineq.rhs, a, sc))
    });
    FoFormula::forall_a(&a, body)
}

/// Replaces every `≤` atom by its defining formula.
pub fn expand_abbreviations(f: &FoFormula) -> FoFormula {
    fn go(f: &FoFormula, sc: &mut Scope) -> FoFormula {
        match f {
            FoFormula::LeqA(s, t) => {
                let (x, body) = sc.bind(Sort::Feature, |_, x| {
                    FoFormula::implies(
                        FoFormula::Incidence(t.clone(), Term::var_x(x)),
                        FoFormula::Incidence(s.clone(), Term::var_x(x)),
                    )
                });
                FoFormula::forall_x(&x, body)
            }
            FoFormula::LeqX(s, t) => {
                let (a, body) = sc.bind(Sort::Object, |_, a| {
                    FoFormula::implies(
                        FoFormula::Incidence(Term::var_a(a), s.clone()),
                        FoFormula::Incidence(Term::var_a(a), t.clone()),
                    )
                });
                FoFormula::forall_a(&a, body)
            }
            FoFormula::Not(g) => FoFormula::not(go(g, sc)),
            FoFormula::And(l, r) => FoFormula::and(go(l, sc), go(r, sc)),
            FoFormula::Or(l, r) => FoFormula::or(go(l, sc), go(r, sc)),
            FoFormula::Implies(l, r) => FoFormula::implies(go(l, sc), go(r, sc)),
            FoFormula::ForallA(v, b) => FoFormula::ForallA(v.clone(), Box::new(go(b, sc))),
            FoFormula::ForallX(v, b) => FoFormula::ForallX(v.clone(), Box::new(go(b, sc))),
            FoFormula::ExistsA(v, b) => FoFormula::ExistsA(v.clone(), Box::new(go(b, sc))),
            FoFormula::ExistsX(v, b) => FoFormula::ExistsX(v.clone(), Box::new(go(b, sc))),
            atom => atom.clone(),
        }
    }
    go(f, &mut Scope::new(f.names()))
}

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: u32) -> String {
    n.to_string()
        .chars()
        .map(|c| SUB[c.to_digit(10).expect("digit") as usize])
        .collect()
}

struct Printer {
    ascii: bool,
    symbols: HashMap<String, String>,
}

impl Printer {
    fn new(f: &FoFormula, ascii: bool) -> Self {
        let props = f.props();
        let cap = |p: &str| {
            let mut cs = p.chars();
            match cs.next() {
                Some(c) => c.to_ascii_uppercase().to_string() + cs.as_str(),
                None => String::new(),
            }
        };
        let mut count: BTreeMap<String, usize> = BTreeMap::new();
        for p in &props {
            *count.entry(cap(p)).or_default() += 1;
        }
        let symbols = props
            .iter()
            .map(|p| {
                let c = cap(p);
                let s = if count[&c] > 1 {
                    format!("{c}[{p}]")
                } else {
                    c
                };
                (p.clone(), s)
            })
            .collect();
        Printer { ascii, symbols }
    }

    fn print(&self, f: &FoFormula) -> String {
        let mut s = String::new();
        self.write(f, &mut s, true);
        s
    }

    fn pred(&self, p: &str, index: u32, t: &Term) -> String {
        let sym = &self.symbols[p];
        if self.ascii {
            format!("{sym}{index}({})", t.name())
        } else {
            format!("{sym}{}({})", subscript(index), t.name())
        }
    }

    fn write(&self, f: &FoFormula, out: &mut String, top: bool) {
        let asc = self.ascii;
        match f {
            FoFormula::Equal(s, t) => out.push_str(&format!("{}={}", s.name(), t.name())),
            FoFormula::Not(g) if matches!(**g, FoFormula::Equal(..)) => {
                let FoFormula::Equal(s, t) = &**g else {
                    unreachable!()
                };
                let ne = if asc { "!=" } else { "≠" };
                out.push_str(&format!("{}{ne}{}", s.name(), t.name()));
            }
            FoFormula::Incidence(s, t) => out.push_str(&if asc {
                format!("I({},{})", s.name(), t.name())
            } else {
                format!("{}⊥{}", s.name(), t.name())
            }),
            FoFormula::Rel(i, s, t) => out.push_str(&if asc {
                format!("R{}({},{})", i.0, s.name(), t.name())
            } else {
                format!("{}R{}{}", s.name(), subscript(i.0), t.name())
            }),
            FoFormula::Pred1(p, t) => out.push_str(&self.pred(p, 1, t)),
            FoFormula::Pred2(p, t) => out.push_str(&self.pred(p, 2, t)),
            FoFormula::LeqA(s, t) | FoFormula::LeqX(s, t) => {
                let le = if asc { "<=" } else { "≤" };
                out.push_str(&format!("{}{le}{}", s.name(), t.name()));
            }
            FoFormula::Not(g) => {
                out.push_str(if asc { "~" } else { "¬" });
                self.write(g, out, false);
            }
            FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Implies(l, r) => {
                let op = match (f, asc) {
                    (FoFormula::And(..), false) => " ∧ ",
                    (FoFormula::Or(..), false) => " ∨ ",
                    (_, false) => " → ",
                    (FoFormula::And(..), true) => " & ",
                    (FoFormula::Or(..), true) => " | ",
                    (_, true) => " -> ",
                };
                if !top {
                    out.push('(');
                }
                self.write(l, out, false);
                out.push_str(op);
                self.write(r, out, false);
                if !top {
                    out.push(')');
                }
            }
            FoFormula::ForallA(v, b)
            | FoFormula::ForallX(v, b)
            | FoFormula::ExistsA(v, b)
            | FoFormula::ExistsX(v, b) => {
                let universal = matches!(f, FoFormula::ForallA(..) | FoFormula::ForallX(..));
                let q = match (universal, asc) {
                    (true, false) => "∀".to_string(),
                    (false, false) => "∃".to_string(),
                    (true, true) => "all ".to_string(),
                    (false, true) => "ex ".to_string(),
                };
                out.push_str(&q);
                out.push_str(v);
                if asc {
                    out.push('.');
                }
                out.push('(');
                self.write(b, out, true);
                out.push(')');
            }
        }
    }
}

/// Variable bindings for [`fo_eval`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoEnvironment {
    bindings: BTreeMap<String, (Sort, usize)>,
}

impl FoEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind_object(mut self, var: &str, a: usize) -> Self {
        self.bindings.insert(var.to_string(), (Sort::Object, a));
        self
    }

    pub fn bind_feature(mut self, var: &str, x: usize) -> Self {
        self.bindings.insert(var.to_string(), (Sort::Feature, x));
        self
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Var(usize),
    Const(usize),
}

#[derive(Debug)]
enum Compiled {
    Equal(Slot, Slot),
    Incidence(Slot, Slot),
    Rel(usize, Slot, Slot),
    Pred1(usize, Slot),
    Pred2(usize, Slot),
    LeqA(Slot, Slot),
    LeqX(Slot, Slot),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Quant {
        forall: bool,
        sort: Sort,
        body: Box<Compiled>,
    },
}

struct Compiler<'m, 'f> {
    model: &'m Model<'f>,
    agents: Vec<&'f AgentRelation>,
    agent_ids: Vec<AgentId>,
    props: Vec<String>,
    scope: Vec<(String, Sort)>,
}

impl Compiler<'_, '_> {
    fn ctx(&self) -> &FormalContext {
        self.model.context()
    }

    fn term(&self, t: &Term, expected: Sort) -> Result<Slot> {
        if t.sort() != expected {
            return Err(Error::SortMismatch {
                term: t.name().to_string(),
                expected,
            });
        }
        match t {
            Term::Var(n, s) => {
                let depth = self
                    .scope
                    .iter()
                    .rposition(|(b, _)| b == n)
                    .ok_or_else(|| Error::UnboundVariable(n.clone()))?;
                if self.scope[depth].1 != *s {
                    return Err(Error::SortMismatch {
                        term: n.clone(),
                        expected: self.scope[depth].1,
                    });
                }
                Ok(Slot::Var(depth))
            }
            Term::Const(n, Sort::Object) => Ok(Slot::Const(self.ctx().object_index(n)?)),
            Term::Const(n, Sort::Feature) => Ok(Slot::Const(self.ctx().feature_index(n)?)),
        }
    }

    fn prop(&mut self, p: &str) -> Result<usize> {
        if self.model.valuation().get(p).is_none() {
            return Err(Error::UnboundProp(p.to_string()));
        }
        Ok(match self.props.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                self.props.push(p.to_string());
                self.props.len() - 1
            }
        })
    }

    fn agent(&mut self, i: AgentId) -> Result<usize> {
        if let Some(k) = self.agent_ids.iter().position(|&j| j == i) {
            return Ok(k);
        }
        self.agents.push(self.model.frame().relation(i)?);
        self.agent_ids.push(i);
        Ok(self.agents.len() - 1)
    }

    fn compile(&mut self, f: &FoFormula) -> Result<Compiled> {
        use Sort::{Feature as X, Object as A};
        let b = |c: Compiled| Box::new(c);
        Ok(match f {
            FoFormula::Equal(s, t) => {
                Compiled::Equal(self.term(s, s.sort())?, self.term(t, s.sort())?)
            }
            FoFormula::Incidence(s, t) => Compiled::Incidence(self.term(s, A)?, self.term(t, X)?),
            FoFormula::Rel(i, s, t) => {
                let k = self.agent(*i)?;
                Compiled::Rel(k, self.term(s, A)?, self.term(t, X)?)
            }
            FoFormula::Pred1(p, t) => Compiled::Pred1(self.prop(p)?, self.term(t, A)?),
            FoFormula::Pred2(p, t) => Compiled::Pred2(self.prop(p)?, self.term(t, X)?),
            FoFormula::LeqA(s, t) => Compiled::LeqA(self.term(s, A)?, self.term(t, A)?),
            FoFormula::LeqX(s, t) => Compiled::LeqX(self.term(s, X)?, self.term(t, X)?),
            FoFormula::Not(g) => Compiled::Not(b(self.compile(g)?)),
            FoFormula::And(l, r) => Compiled::And(b(self.compile(l)?), b(self.compile(r)?)),
            FoFormula::Or(l, r) => Compiled::Or(b(self.compile(l)?), b(self.compile(r)?)),
            FoFormula::Implies(l, r) => Compiled::Implies(b(self.compile(l)?), b(self.compile(r)?)),
            _ => {
                let (v, sort, body) = f.binder().expect("quantifier");
                let forall = matches!(f, FoFormula::ForallA(..) | FoFormula::ForallX(..));
                self.scope.push((v.to_string(), sort));
                let body = self.compile(body);
                self.scope.pop();
                Compiled::Quant {
                    forall,
                    sort,
                    body: b(body?),
                }
            }
        })
    }
}

struct Evaluator<'a> {
    ctx: &'a FormalContext,
    agents: Vec<&'a AgentRelation>,
    ext: Vec<crate::bits::Bits>,
    int: Vec<crate::bits::Bits>,
    stack: Vec<usize>,
}

impl Evaluator<'_> {
    fn get(&self, s: Slot) -> usize {
        match s {
            Slot::Var(d) => self.stack[d],
            Slot::Const(i) => i,
        }
    }

    fn eval(&mut self, c: &Compiled) -> bool {
        match c {
            Compiled::Equal(s, t) => self.get(*s) == self.get(*t),
            Compiled::Incidence(s, t) => self.ctx.incident(self.get(*s), self.get(*t)),
            Compiled::Rel(k, s, t) => self.agents[*k].relates(self.get(*s), self.get(*t)),
            Compiled::Pred1(p, t) => self.ext[*p].contains(self.get(*t)),
            Compiled::Pred2(p, t) => self.int[*p].contains(self.get(*t)),
            Compiled::LeqA(s, t) => self.ctx.obj_leq(self.get(*s), self.get(*t)),
            Compiled::LeqX(s, t) => self.ctx.feat_leq(self.get(*s), self.get(*t)),
            Compiled::Not(g) => !self.eval(g),
            Compiled::And(l, r) => self.eval(l) && self.eval(r),
            Compiled::Or(l, r) => self.eval(l) || self.eval(r),
            Compiled::Implies(l, r) => !self.eval(l) || self.eval(r),
            Compiled::Quant { forall, sort, body } => {
                let n = match sort {
                    Sort::Object => self.ctx.n_objects(),
                    Sort::Feature => self.ctx.n_features(),
                };
                self.stack.push(0);
                let top = self.stack.len() - 1;
                let mut result = *forall;
                for v in 0..n {
                    self.stack[top] = v;
                    if self.eval(body) != *forall {
                        result = !*forall;
                        break;
                    }
                }
                self.stack.pop();
                result
            }
        }
    }
}

/// Tarskian evaluation over the finite two-sorted structure of `model`.
/// `P₁`/`P₂` are read from the valuation, `≤` from the specialization
/// preorders.
pub fn fo_eval(model: &Model<'_>, f: &FoFormula, env: &FoEnvironment) -> Result<bool> {
    let ctx = model.context();
    let mut comp = Compiler {
        model,
        agents: Vec::new(),
        agent_ids: Vec::new(),
        props: Vec::new(),
        scope: Vec::new(),
    };
    let mut stack = Vec::new();
    for (name, &(sort, i)) in &env.bindings {
        match sort {
            Sort::Object => ctx.check_object(i)?,
            Sort::Feature => ctx.check_feature(i)?,
        }
        comp.scope.push((name.clone(), sort));
        stack.push(i);
    }
    let compiled = comp.compile(f)?;
    let (ext, int) = comp
        .props
        .iter()
        .map(|p| {
            let c = model.valuation().get(p).expect("checked");
            (c.extent.bits(), c.intent.bits())
        })
        .unzip();
    let mut ev = Evaluator {
        ctx,
        agents: comp.agents,
        ext,
        int,
        stack,
    };
    Ok(ev.eval(&compiled))
}
