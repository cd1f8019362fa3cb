//! Agent relations `R ⊆ A × X`, RS-frames, and the operators □ and ◆ they
//! induce on the concept lattice.
//!
//! For a compatible relation:
//!
//! * `extent(□v) = ⋂ { R⁻¹[x] | x ∈ intent(v) }`
//! * `intent(◆u) = ⋂ { R[a] | a ∈ extent(u) }`
//!
//! with the empty intersection being the whole sort. Incidence and the
//! lattice bottom are always called `incidence` and `bottom` here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::bits::Bits;
use crate::context::{FeatureSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_concepts, Concept, ConceptLattice};
use crate::rscheck;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which closure condition failed first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatibilityWitness {
    /// `R⁻¹[x]` is not Galois-stable.
    Column(usize),
    /// `R[a]` is not Galois-stable.
    Row(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    pub witness: Option<CompatibilityWitness>,
}

/// The first-order conditions on a raw relation, with first failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFlags {
    /// `R ⊆ ⊥`; witness `(a, x)` with `aRx` but not `a ⊥ x`.
    pub factive: bool,
    pub factivity_witness: Option<(usize, usize)>,
    /// `∀a ∃y ¬(aRy)`; witness: an object with a full row.
    pub serial: bool,
    pub seriality_witness: Option<usize>,
    /// `aRm → R⁻¹[m]↑ ⊆ R[a]`; witness `(a, m, y)` with `y ∈ R⁻¹[m]↑ \ R[a]`.
    pub pos_introspective: bool,
    pub introspection_witness: Option<(usize, usize, usize)>,
}

/// `R` as per-object feature masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentRelation {
    agent: AgentId,
    rows: Vec<Bits>,
    n_features: usize,
}

impl AgentRelation {
    pub fn new(agent: AgentId, ctx: &FormalContext, rows: Vec<Bits>) -> Result<Self> {
        if rows.len() != ctx.n_objects() {
            return Err(Error::Precondition(format!(
                "relation has {} rows for {} objects",
                rows.len(),
                ctx.n_objects()
            )));
        }
        let all = Bits::full(ctx.n_features());
        if rows.iter().any(|r| !r.is_subset(all)) {
            return Err(Error::Precondition(
                "relation refers to a missing feature".into(),
            ));
        }
        Ok(AgentRelation {
            agent,
            rows,
            n_features: ctx.n_features(),
        })
    }

    pub fn from_matrix(agent: AgentId, ctx: &FormalContext, matrix: &[Vec<bool>]) -> Result<Self> {
        if matrix.iter().any(|r| r.len() != ctx.n_features()) {
            return Err(Error::Precondition("relation row length mismatch".into()));
        }
        let rows = matrix
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(x, _)| x)
                    .collect()
            })
            .collect();
        Self::new(agent, ctx, rows)
    }

    pub fn from_pairs(agent: AgentId, ctx: &FormalContext, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut rows = vec![Bits::EMPTY; ctx.n_objects()];
        for (o, f) in pairs {
            rows[ctx.object_index(o)?].insert(ctx.feature_index(f)?);
        }
        Self::new(agent, ctx, rows)
    }

    /// A copy of the incidence relation.
    pub fn incidence(agent: AgentId, ctx: &FormalContext) -> Self {
        let rows = (0..ctx.n_objects()).map(|a| ctx.row(a).bits()).collect();
        Self::new(agent, ctx, rows).expect("shape matches")
    }

    pub fn empty(agent: AgentId, ctx: &FormalContext) -> Self {
        Self::new(agent, ctx, vec![Bits::EMPTY; ctx.n_objects()]).expect("shape matches")
    }

    pub fn agent(&self) -> AgentId {
        self.agent
    }

    pub fn with_agent(&self, agent: AgentId) -> Self {
        AgentRelation {
            agent,
            rows: self.rows.clone(),
            n_features: self.n_features,
        }
    }

    pub fn n_objects(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn relates(&self, a: usize, x: usize) -> bool {
        self.rows[a].contains(x)
    }

    /// `R[a]`.
    pub fn image(&self, a: usize) -> FeatureSet {
        FeatureSet::from_bits(self.rows[a])
    }

    /// `R⁻¹[x]`.
    pub fn preimage(&self, x: usize) -> ObjectSet {
        ObjectSet::from_indices((0..self.rows.len()).filter(|&a| self.rows[a].contains(x)))
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn is_subset(&self, other: &AgentRelation) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(r, s)| r.is_subset(*s))
    }

    fn check_shape(&self, ctx: &FormalContext) -> Result<()> {
        if self.n_objects() != ctx.n_objects() || self.n_features != ctx.n_features() {
            return Err(Error::Precondition(format!(
                "relation of agent {} is {}x{}, context is {}x{}",
                self.agent,
                self.n_objects(),
                self.n_features,
                ctx.n_objects(),
                ctx.n_features()
            )));
        }
        Ok(())
    }
}

fn compute_compatibility(ctx: &FormalContext, r: &AgentRelation) -> Compatibility {
    for x in 0..ctx.n_features() {
        let pre = r.preimage(x);
        if !ctx.closure_ext_unchecked(pre).is_subset(pre) {
            return Compatibility {
                compatible: false,
                witness: Some(CompatibilityWitness::Column(x)),
            };
        }
    }
    for a in 0..ctx.n_objects() {
        let img = r.image(a);
        if !ctx.closure_int_unchecked(img).is_subset(img) {
            return Compatibility {
                compatible: false,
                witness: Some(CompatibilityWitness::Row(a)),
            };
        }
    }
    Compatibility {
        compatible: true,
        witness: None,
    }
}

fn compute_axioms(ctx: &FormalContext, r: &AgentRelation) -> AxiomFlags {
    let factivity_witness = (0..ctx.n_objects())
        .flat_map(|a| r.image(a).iter().map(move |x| (a, x)))
        .find(|&(a, x)| !ctx.incident(a, x));
    let full = Bits::full(ctx.n_features());
    let seriality_witness = (0..ctx.n_objects()).find(|&a| r.rows[a] == full);
    let introspection_witness = (0..ctx.n_objects())
        .flat_map(|a| r.image(a).iter().map(move |m| (a, m)))
        .find_map(|(a, m)| {
            let described = ctx.up_unchecked(r.preimage(m));
            described.bits().minus(r.rows[a]).first().map(|y| (a, m, y))
        });
    AxiomFlags {
        factive: factivity_witness.is_none(),
        factivity_witness,
        serial: seriality_witness.is_none(),
        seriality_witness,
        pos_introspective: introspection_witness.is_none(),
        introspection_witness,
    }
}

/// `closure_ext(R⁻¹[x]) ⊆ R⁻¹[x]` for every `x` and
/// `closure_int(R[a]) ⊆ R[a]` for every `a`.
pub fn check_compatible(ctx: &FormalContext, r: &AgentRelation) -> Result<Compatibility> {
    r.check_shape(ctx)?;
    Ok(compute_compatibility(ctx, r))
}

/// Factivity, seriality and positive introspection, evaluated directly on
/// the matrices.
pub fn check_axiom_conditions(ctx: &FormalContext, r: &AgentRelation) -> Result<AxiomFlags> {
    r.check_shape(ctx)?;
    Ok(compute_axioms(ctx, r))
}

/// An RS-polarity with compatible agent relations.
#[derive(Clone, Debug)]
pub struct RsFrame {
    ctx: FormalContext,
    relations: BTreeMap<AgentId, AgentRelation>,
    axioms: BTreeMap<AgentId, OnceLock<AxiomFlags>>,
    lattice: OnceLock<ConceptLattice>,
}

impl RsFrame {
    /// Validates that `ctx` is RS and every relation is shaped to it and
    /// compatible. Agent ids must be distinct.
    pub fn new(ctx: FormalContext, relations: Vec<AgentRelation>) -> Result<Self> {
        let report = rscheck::is_rs(&ctx);
        if !report.is_rs() {
            return Err(Error::Precondition(format!(
                "context is not an RS-polarity: {}",
                report.summary(&ctx)
            )));
        }
        let mut map = BTreeMap::new();
        for r in relations {
            r.check_shape(&ctx)?;
            let compat = compute_compatibility(&ctx, &r);
            if let Some(w) = compat.witness {
                let at = match w {
                    CompatibilityWitness::Column(x) => format!("column {}", ctx.feature_name(x)),
                    CompatibilityWitness::Row(a) => format!("row {}", ctx.object_name(a)),
                };
                return Err(Error::Precondition(format!(
                    "relation of agent {} is not RS-compatible at {at}",
                    r.agent
                )));
            }
            let agent = r.agent;
            if map.insert(agent, r).is_some() {
                return Err(Error::Precondition(format!("agent {agent} given twice")));
            }
        }
        let axioms = map.keys().map(|&k| (k, OnceLock::new())).collect();
        Ok(RsFrame {
            ctx,
            relations: map,
            axioms,
            lattice: OnceLock::new(),
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.ctx
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.relations.keys().copied()
    }

    pub fn relation(&self, agent: AgentId) -> Result<&AgentRelation> {
        self.relations
            .get(&agent)
            .ok_or(Error::UnknownAgent(agent.0))
    }

    pub fn relations(&self) -> impl Iterator<Item = &AgentRelation> {
        self.relations.values()
    }

    /// Axiom flags of one agent, computed on first request.
    pub fn axiom_flags(&self, agent: AgentId) -> Result<&AxiomFlags> {
        let r = self.relation(agent)?;
        Ok(self.axioms[&agent].get_or_init(|| compute_axioms(&self.ctx, r)))
    }

    /// The concept lattice, enumerated on first use.
    pub fn lattice(&self) -> Result<&ConceptLattice> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        let l = enumerate_concepts(&self.ctx)?;
        Ok(self.lattice.get_or_init(|| l))
    }

    fn require_concept(&self, c: &Concept) -> Result<()> {
        if c.is_valid(&self.ctx) {
            Ok(())
        } else {
            Err(Error::ForeignConcept(c.display(&self.ctx)))
        }
    }

    pub fn box_op(&self, agent: AgentId, v: &Concept) -> Result<Concept> {
        let r = self.relation(agent)?;
        self.require_concept(v)?;
        Ok(box_unchecked(&self.ctx, r, v))
    }

    pub fn diamond_black(&self, agent: AgentId, u: &Concept) -> Result<Concept> {
        let r = self.relation(agent)?;
        self.require_concept(u)?;
        Ok(diamond_unchecked(&self.ctx, r, u))
    }

    /// `(j↓, up({j}))`.
    pub fn concept_of_object(&self, j: usize) -> Result<Concept> {
        concept_of_object(&self.ctx, j)
    }

    /// `(down({m}), m↑)`.
    pub fn concept_of_feature(&self, m: usize) -> Result<Concept> {
        concept_of_feature(&self.ctx, m)
    }
}

pub fn concept_of_object(ctx: &FormalContext, j: usize) -> Result<Concept> {
    ctx.check_object(j)?;
    Concept::from_extent(ctx, ObjectSet::from_indices([j]))
}

pub fn concept_of_feature(ctx: &FormalContext, m: usize) -> Result<Concept> {
    ctx.check_feature(m)?;
    Concept::from_intent(ctx, FeatureSet::from_indices([m]))
}

pub(crate) fn box_unchecked(ctx: &FormalContext, r: &AgentRelation, v: &Concept) -> Concept {
    let extent = v
        .intent
        .iter()
        .fold(ctx.all_objects(), |acc, x| acc & r.preimage(x));
    Concept {
        extent,
        intent: ctx.up_unchecked(extent),
    }
}

pub(crate) fn diamond_unchecked(ctx: &FormalContext, r: &AgentRelation, u: &Concept) -> Concept {
    let intent = u
        .extent
        .iter()
        .fold(ctx.all_features(), |acc, a| acc & r.image(a));
    Concept {
        extent: ctx.down_unchecked(intent),
        intent,
    }
}
