//! Models, two-sorted satisfaction, and algebraic evaluation.
//!
//! Satisfaction (`a ⊩ φ`) and co-satisfaction (`x ≻ φ`), with `v(p) = (V₁(p), V₂(p))`:
//!
//! | φ        | `a ⊩ φ`                              | `x ≻ φ`                              |
//! |----------|--------------------------------------|--------------------------------------|
//! | `0`      | never                                | always                               |
//! | `1`      | always                               | never                                |
//! | `p`      | `a ∈ V₁(p)`                          | `x ∈ V₂(p)`                          |
//! | `n:j`    | `a ∈ j↓`                             | `x ∈ {j}↑`                           |
//! | `c:m`    | `a ∈ {m}↓`                           | `x ∈ m↑`                             |
//! | `φ & ψ`  | `a ⊩ φ` and `a ⊩ ψ`                  | `∀a (a ⊩ φ∧ψ → a ⊥ x)`               |
//! | `φ \| ψ` | `∀x (x ≻ φ∨ψ → a ⊥ x)`               | `x ≻ φ` and `x ≻ ψ`                  |
//! | `[i]φ`   | `∀x (x ≻ φ → a Rᵢ x)`                | `∀a (a ⊩ □ᵢφ → a ⊥ x)`               |
//! | `<i>φ`   | `∀x (x ≻ ◆ᵢφ → a ⊥ x)`               | `∀a (a ⊩ φ → a Rᵢ x)`                |
//!
//! Here `⊥` is the incidence relation.

use std::collections::{BTreeMap, HashMap};

use crate::context::{FeatureSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};
use crate::lattice::{join_concepts, meet_concepts, Concept};
use crate::modal::{box_unchecked, diamond_unchecked, AgentId, AgentRelation, RsFrame};

use super::formula::{Formula, Inequality};

/// Proposition name to concept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<String, Concept>);

impl Valuation {
    pub fn new() -> Self {
        Valuation(BTreeMap::new())
    }

    pub fn insert(&mut self, prop: &str, value: Concept) {
        self.0.insert(prop.to_string(), value);
    }

    pub fn with(mut self, prop: &str, value: Concept) -> Self {
        self.insert(prop, value);
        self
    }

    /// Assigns the concept generated by a set of objects.
    pub fn insert_generated(
        &mut self,
        ctx: &FormalContext,
        prop: &str,
        objects: &[&str],
    ) -> Result<()> {
        let c = Concept::from_extent(ctx, ctx.objects_named(objects)?)?;
        self.insert(prop, c);
        Ok(())
    }

    pub fn get(&self, prop: &str) -> Option<&Concept> {
        self.0.get(prop)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Concept)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `p := {a1} | {x1}; q := ...` in name order.
    pub fn display(&self, ctx: &FormalContext) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("{k} := {}", v.display(ctx)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Clone, Debug)]
pub struct Model<'f> {
    frame: &'f RsFrame,
    valuation: Valuation,
}

impl<'f> Model<'f> {
    /// Every assigned value must be a concept of the frame's context.
    pub fn new(frame: &'f RsFrame, valuation: Valuation) -> Result<Self> {
        for (_, c) in valuation.iter() {
            if !c.is_valid(frame.context()) {
                return Err(Error::ForeignConcept(c.display(frame.context())));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn frame(&self) -> &'f RsFrame {
        self.frame
    }

    pub fn context(&self) -> &'f FormalContext {
        self.frame.context()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// Checks that every prop, agent, nominal and conominal of `f` resolves.
    pub fn resolve(&self, f: &Formula) -> Result<()> {
        let ctx = self.context();
        for p in f.props() {
            if self.valuation.get(&p).is_none() {
                return Err(Error::UnboundProp(p));
            }
        }
        for i in f.agents() {
            self.frame.relation(i)?;
        }
        for n in f.nominals() {
            ctx.object_index(&n)?;
        }
        for m in f.conominals() {
            ctx.feature_index(&m)?;
        }
        Ok(())
    }

    /// `M, a ⊩ φ`.
    pub fn satisfies(&self, a: usize, f: &Formula) -> Result<bool> {
        self.context().check_object(a)?;
        self.resolve(f)?;
        Ok(Checker::new(self).sat(a, f))
    }

    /// `M, x ≻ φ`.
    pub fn cosatisfies(&self, x: usize, f: &Formula) -> Result<bool> {
        self.context().check_feature(x)?;
        self.resolve(f)?;
        Ok(Checker::new(self).cosat(x, f))
    }

    /// All objects satisfying and all features co-satisfying `f`, by the
    /// satisfaction clauses alone.
    pub fn satisfaction_sets(&self, f: &Formula) -> Result<Concept> {
        self.resolve(f)?;
        let ctx = self.context();
        let mut ch = Checker::new(self);
        let extent = ObjectSet::from_indices((0..ctx.n_objects()).filter(|&a| ch.sat(a, f)));
        let intent = FeatureSet::from_indices((0..ctx.n_features()).filter(|&x| ch.cosat(x, f)));
        Ok(Concept { extent, intent })
    }

    /// `v̄(φ)` in the complex algebra.
    pub fn extension(&self, f: &Formula) -> Result<Concept> {
        self.resolve(f)?;
        Ok(self.eval(f))
    }

    pub(crate) fn eval(&self, f: &Formula) -> Concept {
        let ctx = self.context();
        match f {
            Formula::Zero => Concept {
                extent: ctx.closure_ext_unchecked(ObjectSet::EMPTY),
                intent: ctx.all_features(),
            },
            Formula::One => Concept {
                extent: ctx.all_objects(),
                intent: ctx.up_unchecked(ctx.all_objects()),
            },
            Formula::Prop(p) => *self.valuation.get(p).expect("resolved"),
            Formula::Nominal(j) => {
                let j = ctx.object_index(j).expect("resolved");
                crate::modal::concept_of_object(ctx, j).expect("resolved")
            }
            Formula::Conominal(m) => {
                let m = ctx.feature_index(m).expect("resolved");
                crate::modal::concept_of_feature(ctx, m).expect("resolved")
            }
            Formula::And(l, r) => meet_concepts(ctx, &self.eval(l), &self.eval(r)),
            Formula::Or(l, r) => join_concepts(ctx, &self.eval(l), &self.eval(r)),
            Formula::Box(i, g) => box_unchecked(ctx, self.rel(*i), &self.eval(g)),
            Formula::DiamondBlack(i, g) => diamond_unchecked(ctx, self.rel(*i), &self.eval(g)),
        }
    }

    fn rel(&self, i: AgentId) -> &'f AgentRelation {
        self.frame.relation(i).expect("resolved")
    }

    /// `M ⊩ lhs ≤ rhs`, via extensions.
    pub fn check_inequality(&self, ineq: &Inequality) -> Result<bool> {
        let l = self.extension(&ineq.lhs)?;
        let r = self.extension(&ineq.rhs)?;
        Ok(l.leq(&r))
    }

    /// `∀a (a ⊩ lhs → a ⊩ rhs)`, via satisfaction.
    pub fn check_inequality_pointwise(&self, ineq: &Inequality) -> Result<bool> {
        self.resolve(&ineq.lhs)?;
        self.resolve(&ineq.rhs)?;
        let mut ch = Checker::new(self);
        Ok((0..self.context().n_objects()).all(|a| !ch.sat(a, &ineq.lhs) || ch.sat(a, &ineq.rhs)))
    }
}

/// Memoized mutual recursion over ⊩ and ≻, keyed by subformula address.
struct Checker<'m, 'f> {
    model: &'m Model<'f>,
    sat_memo: HashMap<(*const Formula, usize), bool>,
    cosat_memo: HashMap<(*const Formula, usize), bool>,
}

impl<'m, 'f> Checker<'m, 'f> {
    fn new(model: &'m Model<'f>) -> Self {
        Checker {
            model,
            sat_memo: HashMap::new(),
            cosat_memo: HashMap::new(),
        }
    }

    fn ctx(&self) -> &'f FormalContext {
        self.model.context()
    }

    fn sat(&mut self, a: usize, f: &Formula) -> bool {
        let key = (f as *const Formula, a);
        if let Some(&v) = self.sat_memo.get(&key) {
            return v;
        }
        let ctx = self.ctx();
        let nx = ctx.n_features();
        let v = match f {
            Formula::Zero => false,
            Formula::One => true,
            Formula::Prop(p) => self
                .model
                .valuation
                .get(p)
                .expect("resolved")
                .extent
                .contains(a),
            Formula::Nominal(j) => {
                let j = ctx.object_index(j).expect("resolved");
                ctx.closure_ext_unchecked(ObjectSet::from_indices([j]))
                    .contains(a)
            }
            Formula::Conominal(m) => {
                let m = ctx.feature_index(m).expect("resolved");
                ctx.incident(a, m)
            }
            Formula::And(l, r) => self.sat(a, l) && self.sat(a, r),
            Formula::Or(..) | Formula::DiamondBlack(..) => {
                (0..nx).all(|x| !self.cosat(x, f) || ctx.incident(a, x))
            }
            Formula::Box(i, g) => {
                let r = self.model.rel(*i);
                (0..nx).all(|x| !self.cosat(x, g) || r.relates(a, x))
            }
        };
        self.sat_memo.insert(key, v);
        v
    }

    fn cosat(&mut self, x: usize, f: &Formula) -> bool {
        let key = (f as *const Formula, x);
        if let Some(&v) = self.cosat_memo.get(&key) {
            return v;
        }
        let ctx = self.ctx();
        let na = ctx.n_objects();
        let v = match f {
            Formula::Zero => true,
            Formula::One => false,
            Formula::Prop(p) => self
                .model
                .valuation
                .get(p)
                .expect("resolved")
                .intent
                .contains(x),
            Formula::Nominal(j) => {
                let j = ctx.object_index(j).expect("resolved");
                ctx.incident(j, x)
            }
            Formula::Conominal(m) => {
                let m = ctx.feature_index(m).expect("resolved");
                ctx.closure_int_unchecked(FeatureSet::from_indices([m]))
                    .contains(x)
            }
            Formula::Or(l, r) => self.cosat(x, l) && self.cosat(x, r),
            Formula::And(..) | Formula::Box(..) => {
                (0..na).all(|a| !self.sat(a, f) || ctx.incident(a, x))
            }
            Formula::DiamondBlack(i, g) => {
                let r = self.model.rel(*i);
                (0..na).all(|a| !self.sat(a, g) || r.relates(a, x))
            }
        };
        self.cosat_memo.insert(key, v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::parser::{parse_formula, parse_inequality};

    fn diag_frame(r: impl Fn(&FormalContext) -> AgentRelation) -> RsFrame {
        let ctx = fixtures::diag2();
        let rel = r(&ctx);
        RsFrame::new(ctx, vec![rel]).unwrap()
    }

    fn atom(ctx: &FormalContext, name: &str) -> Concept {
        Concept::from_extent(ctx, ctx.objects_named(&[name]).unwrap()).unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        let f = diag_frame(|c| AgentRelation::incidence(AgentId(1), c));
        let v = Valuation::new().with("p", atom(f.context(), "a1"));
        let m = Model::new(&f, v).unwrap();
        let bp = parse_formula("[1] p").unwrap();
        assert!(m.satisfies(0, &bp).unwrap());
        assert!(!m.satisfies(1, &bp).unwrap());
        assert!(m.satisfies(1, &Formula::One).unwrap());
        assert!(m.cosatisfies(0, &Formula::prop("p")).unwrap());
        assert!(!m.cosatisfies(1, &Formula::prop("p")).unwrap());
    }

    #[test]
    fn extension_examples() {
        let f = diag_frame(|c| AgentRelation::incidence(AgentId(1), c));
        let ctx = f.context();
        let v = Valuation::new()
            .with("p", atom(ctx, "a1"))
            .with("q", atom(ctx, "a2"));
        let m = Model::new(&f, v).unwrap();
        assert_eq!(
            m.extension(&parse_formula("[1] p").unwrap()).unwrap(),
            atom(ctx, "a1")
        );
        assert_eq!(
            m.extension(&Formula::One).unwrap(),
            f.lattice().unwrap().top_concept()
        );
        let pq = m.extension(&parse_formula("p & q").unwrap()).unwrap();
        let meet = f
            .lattice()
            .unwrap()
            .meet(&atom(ctx, "a1"), &atom(ctx, "a2"))
            .unwrap();
        assert_eq!(pq, meet);
        assert!(m
            .check_inequality(&parse_inequality("[1] p <= p").unwrap())
            .unwrap());
        assert!(m
            .check_inequality(&parse_inequality("p <= 1").unwrap())
            .unwrap());
        assert!(!m
            .check_inequality(&parse_inequality("p <= q").unwrap())
            .unwrap());
    }

    #[test]
    fn distributivity_fails_in_m3() {
        let ctx = fixtures::diag3();
        let f = RsFrame::new(ctx.clone(), vec![]).unwrap();
        let v = Valuation::new()
            .with("p", atom(&ctx, "a1"))
            .with("q", atom(&ctx, "a2"))
            .with("r", atom(&ctx, "a3"));
        let m = Model::new(&f, v).unwrap();
        let ineq = parse_inequality("p & (q | r) <= (p & q) | (p & r)").unwrap();
        assert!(!m.check_inequality(&ineq).unwrap());
        assert!(!m.check_inequality_pointwise(&ineq).unwrap());
    }

    #[test]
    fn nominals_and_conominals() {
        let f = diag_frame(|c| AgentRelation::incidence(AgentId(1), c));
        let m = Model::new(&f, Valuation::new()).unwrap();
        let ctx = f.context();
        let j = m.extension(&Formula::nominal("a2")).unwrap();
        assert_eq!(j, atom(ctx, "a2"));
        let c = m.extension(&Formula::conominal("x1")).unwrap();
        assert_eq!(c, atom(ctx, "a1"));
        assert!(m.satisfies(1, &Formula::nominal("a2")).unwrap());
        assert!(m.cosatisfies(0, &Formula::conominal("x1")).unwrap());
    }

    #[test]
    fn unbound_names_are_errors() {
        let f = diag_frame(|c| AgentRelation::incidence(AgentId(1), c));
        let m = Model::new(&f, Valuation::new()).unwrap();
        assert!(matches!(
            m.satisfies(0, &Formula::prop("p")),
            Err(Error::UnboundProp(_))
        ));
        assert!(matches!(
            m.extension(&parse_formula("[2] 1").unwrap()),
            Err(Error::UnknownAgent(2))
        ));
        assert!(matches!(
            m.extension(&Formula::nominal("zz")),
            Err(Error::UnknownName { .. })
        ));
        assert!(m.satisfies(5, &Formula::One).is_err());
    }

    #[test]
    fn foreign_valuations_are_rejected() {
        let f = diag_frame(|c| AgentRelation::incidence(AgentId(1), c));
        let bogus = Concept {
            extent: f.context().all_objects(),
            intent: f.context().all_features(),
        };
        assert!(Model::new(&f, Valuation::new().with("p", bogus)).is_err());
    }
}
