//! Several agents and the common operator
//! `C(u) = ⋀ { s u | s a nonempty string of boxes, adjacent agents distinct }`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::bits::Bits;
use crate::context::ObjectSet;
use crate::error::{Error, Result};
use crate::lattice::{meet_concepts, Concept, ConceptLattice};
use crate::modal::{
    box_unchecked, check_axiom_conditions, check_compatible, AgentId, AgentRelation, RsFrame,
};

/// A sequence of boxes, applied innermost (rightmost) first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxString(Vec<AgentId>);

impl BoxString {
    pub fn new(agents: Vec<AgentId>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidBoxString("empty string".into()));
        }
        if let Some(w) = agents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidBoxString(format!("agent {} repeated", w[0])));
        }
        Ok(BoxString(agents))
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Self::new(ids.iter().map(|&i| AgentId(i)).collect())
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BoxString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "[{a}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentReport {
    pub agent: AgentId,
    pub compatible: bool,
    pub factive: bool,
    pub pos_introspective: bool,
}

/// What [`SocialModel::check_common_axioms`] verified; each field holds
/// the first failure, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommonReport {
    /// `u` with `C(u) ≰ u`.
    pub deflation: Option<usize>,
    /// `u` with `C(u) ≰ C(C(u))`.
    pub transitivity: Option<usize>,
    /// `(u, v)` with `C(u ∧ v) ≠ C(u) ∧ C(v)`, or `(top, top)` if `C(⊤) ≠ ⊤`.
    pub normality: Option<(usize, usize)>,
    /// `(i, u)` with `□ᵢ□ᵢu ≠ □ᵢu`.
    pub idempotence: Option<(AgentId, usize)>,
    /// `(a, x)` with `a R_C x` but not `a ⊥ x`.
    pub rc_factivity: Option<(usize, usize)>,
    pub rc_compatible: bool,
    /// `(a, m, y)` with `a R_C m`, `y ∈ R_C⁻¹[m]↑` and `y ∉ R_C[a]`.
    pub rc_introspection: Option<(usize, usize, usize)>,
}

impl CommonReport {
    pub fn all_pass(&self) -> bool {
        self.deflation.is_none()
            && self.transitivity.is_none()
            && self.normality.is_none()
            && self.idempotence.is_none()
            && self.rc_factivity.is_none()
            && self.rc_compatible
            && self.rc_introspection.is_none()
    }
}

/// An RS-frame with one or more agents, each expected factive and
/// positively introspective.
#[derive(Clone, Debug)]
pub struct SocialModel {
    frame: RsFrame,
    report: Vec<AgentReport>,
}

impl SocialModel {
    pub fn new(frame: RsFrame) -> Result<Self> {
        if frame.agents().next().is_none() {
            return Err(Error::Precondition(
                "a social model needs at least one agent".into(),
            ));
        }
        let report = frame
            .agents()
            .map(|agent| {
                let flags = frame.axiom_flags(agent)?;
                Ok(AgentReport {
                    agent,
                    compatible: true,
                    factive: flags.factive,
                    pos_introspective: flags.pos_introspective,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SocialModel { frame, report })
    }

    pub fn frame(&self) -> &RsFrame {
        &self.frame
    }

    pub fn axiom_report(&self) -> &[AgentReport] {
        &self.report
    }

    /// Fails on the first agent that is not factive or not positively
    /// introspective.
    pub fn require_axioms(&self) -> Result<()> {
        for r in &self.report {
            let flags = self.frame.axiom_flags(r.agent)?;
            let ctx = self.frame.context();
            if let Some((a, x)) = flags.factivity_witness {
                return Err(Error::Precondition(format!(
                    "agent {} is not factive: {} R {} but not {} ⊥ {}",
                    r.agent,
                    ctx.object_name(a),
                    ctx.feature_name(x),
                    ctx.object_name(a),
                    ctx.feature_name(x)
                )));
            }
            if let Some((a, m, y)) = flags.introspection_witness {
                return Err(Error::Precondition(format!(
                    "agent {} is not positively introspective: {} R {} but {} is not in R[{}]",
                    r.agent,
                    ctx.object_name(a),
                    ctx.feature_name(m),
                    ctx.feature_name(y),
                    ctx.object_name(a)
                )));
            }
        }
        Ok(())
    }

    fn lattice(&self) -> Result<&ConceptLattice> {
        self.frame.lattice()
    }

    fn rel(&self, i: AgentId) -> &AgentRelation {
        self.frame.relation(i).expect("agent of this frame")
    }

    fn agent_ids(&self) -> Vec<AgentId> {
        self.frame.agents().collect()
    }

    fn boxed(&self, i: AgentId, u: &Concept) -> Concept {
        box_unchecked(self.frame.context(), self.rel(i), u)
    }

    fn require_concept(&self, u: &Concept) -> Result<()> {
        let ctx = self.frame.context();
        if u.is_valid(ctx) {
            Ok(())
        } else {
            Err(Error::ForeignConcept(u.display(ctx)))
        }
    }

    /// `s u`.
    pub fn apply_string(&self, s: &BoxString, u: &Concept) -> Result<Concept> {
        self.require_concept(u)?;
        for &i in s.agents() {
            self.frame.relation(i)?;
        }
        Ok(s.agents().iter().rev().fold(*u, |v, &i| self.boxed(i, &v)))
    }

    /// Breadth-first search over `(value, last agent)`; `alternating`
    /// forbids repeating the last agent.
    fn reachable(&self, u: &Concept, alternating: bool) -> Vec<Concept> {
        let agents = self.agent_ids();
        let mut seen: HashSet<(ObjectSet, AgentId)> = HashSet::new();
        let mut values: Vec<Concept> = Vec::new();
        let mut queue = VecDeque::new();
        for &i in &agents {
            let v = self.boxed(i, u);
            if seen.insert((v.extent, i)) {
                queue.push_back((v, i));
            }
        }
        while let Some((v, last)) = queue.pop_front() {
            for &j in &agents {
                if alternating && j == last {
                    continue;
                }
                let w = self.boxed(j, &v);
                if seen.insert((w.extent, j)) {
                    queue.push_back((w, j));
                }
            }
            values.push(v);
        }
        values
    }

    fn meet_of(&self, values: &[Concept]) -> Result<Concept> {
        let ctx = self.frame.context();
        let top = self.lattice()?.top_concept();
        Ok(values
            .iter()
            .fold(top, |acc, v| meet_concepts(ctx, &acc, v)))
    }

    /// `C(u)`. Requires every agent factive and positively introspective.
    pub fn common(&self, u: &Concept) -> Result<Concept> {
        self.require_axioms()?;
        self.require_concept(u)?;
        self.meet_of(&self.reachable(u, true))
    }

    /// The meet over all nonempty strings, repeats allowed. No axiom
    /// precondition.
    pub fn common_unrestricted(&self, u: &Concept) -> Result<Concept> {
        self.require_concept(u)?;
        self.meet_of(&self.reachable(u, false))
    }

    /// Partial meets `M₁ ≥ M₂ ≥ …`, `M_k` over strings of length at most
    /// `k`, until the reachable states stop growing. The last entry is `C(u)`.
    pub fn common_trace(&self, u: &Concept) -> Result<Vec<Concept>> {
        self.require_axioms()?;
        self.require_concept(u)?;
        let ctx = self.frame.context();
        let agents = self.agent_ids();
        let mut layer: BTreeSet<(Bits, AgentId)> = agents
            .iter()
            .map(|&i| (self.boxed(i, u).extent.bits(), i))
            .collect();
        let mut seen = layer.clone();
        let mut partial = self.lattice()?.top_concept();
        let mut trace = Vec::new();
        loop {
            for (e, _) in &layer {
                let extent = partial.extent & ObjectSet::from_bits(*e);
                partial = Concept {
                    extent,
                    intent: ctx.up_unchecked(extent),
                };
            }
            trace.push(partial);
            let mut next = BTreeSet::new();
            for &(e, last) in &layer {
                let extent = ObjectSet::from_bits(e);
                let v = Concept {
                    extent,
                    intent: ctx.up_unchecked(extent),
                };
                for &j in agents.iter().filter(|&&j| j != last) {
                    next.insert((self.boxed(j, &v).extent.bits(), j));
                }
            }
            if next.is_subset(&seen) {
                return Ok(trace);
            }
            seen.extend(next.iter().copied());
            layer = next;
        }
    }

    /// `R_C`, labelled agent 0: `a R_C x` iff `a ∈ extent(C(x↑))`.
    ///
    /// Also computes `⋂ R_s` by searching over the tuples of string images
    /// of all feature concepts at once; the search ends when no new
    /// `(last agent, tuple)` state appears. The two results must agree.
    pub fn common_relation(&self) -> Result<AgentRelation> {
        self.require_axioms()?;
        let ctx = self.frame.context();
        let nx = ctx.n_features();
        let generators: Vec<Concept> = (0..nx)
            .map(|x| self.frame.concept_of_feature(x))
            .collect::<Result<_>>()?;

        let mut via_c = vec![Bits::EMPTY; ctx.n_objects()];
        for (x, g) in generators.iter().enumerate() {
            for a in self.common(g)?.extent.iter() {
                via_c[a].insert(x);
            }
        }

        let agents = self.agent_ids();
        let mut seen: HashSet<(AgentId, Vec<ObjectSet>)> = HashSet::new();
        let mut queue = VecDeque::new();
        for &i in &agents {
            let t: Vec<Concept> = generators.iter().map(|g| self.boxed(i, g)).collect();
            if seen.insert((i, t.iter().map(|c| c.extent).collect())) {
                queue.push_back((i, t));
            }
        }
        let mut running: Vec<ObjectSet> = vec![ctx.all_objects(); nx];
        while let Some((last, tuple)) = queue.pop_front() {
            for (r, c) in running.iter_mut().zip(&tuple) {
                *r = *r & c.extent;
            }
            for &j in &agents {
                if j == last {
                    continue;
                }
                let t: Vec<Concept> = tuple.iter().map(|c| self.boxed(j, c)).collect();
                if seen.insert((j, t.iter().map(|c| c.extent).collect())) {
                    queue.push_back((j, t));
                }
            }
        }
        let mut via_strings = vec![Bits::EMPTY; ctx.n_objects()];
        for (x, ext) in running.iter().enumerate() {
            for a in ext.iter() {
                via_strings[a].insert(x);
            }
        }
        if via_c != via_strings {
            return Err(Error::Invariant(
                "R_C via C differs from the intersection of string relations".into(),
            ));
        }
        AgentRelation::new(AgentId(0), ctx, via_c)
    }

    /// `R_s`: `a R_s x` iff `a ∈ extent(s x↑)`.
    pub fn string_relation(&self, s: &BoxString) -> Result<AgentRelation> {
        let ctx = self.frame.context();
        let mut rows = vec![Bits::EMPTY; ctx.n_objects()];
        for x in 0..ctx.n_features() {
            let v = self.apply_string(s, &self.frame.concept_of_feature(x)?)?;
            for a in v.extent.iter() {
                rows[a].insert(x);
            }
        }
        AgentRelation::new(AgentId(0), ctx, rows)
    }

    /// Checks the properties of `C` and `R_C` over every lattice element.
    pub fn check_common_axioms(&self) -> Result<CommonReport> {
        self.require_axioms()?;
        let lat = self.lattice()?;
        let ctx = self.frame.context();
        let c: Vec<Concept> = lat
            .concepts()
            .iter()
            .map(|u| self.common(u))
            .collect::<Result<_>>()?;
        let idx = |v: &Concept| lat.index_of(v).expect("concept of this lattice");
        let mut report = CommonReport {
            rc_compatible: true,
            ..CommonReport::default()
        };
        for (u, cu) in c.iter().enumerate() {
            if report.deflation.is_none() && !cu.leq(&lat.concept(u)) {
                report.deflation = Some(u);
            }
            if report.transitivity.is_none() && !cu.leq(&c[idx(cu)]) {
                report.transitivity = Some(u);
            }
        }
        let top = lat.top();
        if c[top] != lat.concept(top) {
            report.normality = Some((top, top));
        }
        'outer: for u in 0..lat.len() {
            for v in u + 1..lat.len() {
                if report.normality.is_some() {
                    break 'outer;
                }
                let lhs = &c[lat.meet_idx(u, v)];
                if *lhs != meet_concepts(ctx, &c[u], &c[v]) {
                    report.normality = Some((u, v));
                }
            }
        }
        'agents: for i in self.agent_ids() {
            for (k, u) in lat.concepts().iter().enumerate() {
                let once = self.boxed(i, u);
                if self.boxed(i, &once) != once {
                    report.idempotence = Some((i, k));
                    break 'agents;
                }
            }
        }
        let rc = self.common_relation()?;
        report.rc_compatible = check_compatible(ctx, &rc)?.compatible;
        let flags = check_axiom_conditions(ctx, &rc)?;
        report.rc_factivity = flags.factivity_witness;
        report.rc_introspection = flags.introspection_witness;
        Ok(report)
    }
}
