//! Random contexts, relations, valuations and formulas for property tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::{Bits, MAX_SORT};
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;
use crate::logic::{Formula, Inequality, Valuation};
use crate::modal::{check_axiom_conditions, check_compatible, AgentId, AgentRelation};
use crate::rscheck;

/// Objects `a1..an`, features `x1..xm`, each pair incident with probability
/// `density`.
pub fn random_context_sized<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    density: f64,
) -> FormalContext {
    let objects = (1..=n).map(|i| format!("a{i}")).collect();
    let features = (1..=m).map(|i| format!("x{i}")).collect();
    let rows = (0..n)
        .map(|_| (0..m).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    FormalContext::from_rows(objects, features, rows).expect("valid names and sizes")
}

/// Sizes uniform in `1..=max`, density uniform in `[0, 1]`.
pub fn random_context<R: Rng>(
    rng: &mut R,
    max_objects: usize,
    max_features: usize,
) -> FormalContext {
    let n = rng.gen_range(1..=max_objects);
    let m = rng.gen_range(1..=max_features);
    let density = rng.gen_range(0.0..=1.0);
    random_context_sized(rng, n, m, density)
}

/// A random context pruned to an RS-polarity; retries on degenerate draws.
///
/// Sources range from half to one and a half times the bound on each side,
/// with density in `[0.25, 0.75]`; pruned results over the bound are
/// redrawn. One draw in ten uses a source of any size within the bound.
pub fn random_rs_context<R: Rng>(
    rng: &mut R,
    max_objects: usize,
    max_features: usize,
) -> FormalContext {
    let size = |rng: &mut R, max: usize, small: bool| {
        if small {
            rng.gen_range(1..=max)
        } else {
            rng.gen_range(max.div_ceil(2)..=(max + max / 2).min(MAX_SORT))
        }
    };
    loop {
        let small = rng.gen_bool(0.1);
        let n = size(rng, max_objects, small);
        let m = size(rng, max_features, small);
        let density = rng.gen_range(0.25..=0.75);
        let ctx = random_context_sized(rng, n, m, density);
        if let Ok(pruned) = rscheck::prune(&ctx) {
            if pruned.n_objects() <= max_objects && pruned.n_features() <= max_features {
                return pruned;
            }
        }
    }
}

/// The least compatible relation containing `rows`: columns and rows are
/// closed alternately until nothing changes.
pub fn compatible_hull(
    ctx: &FormalContext,
    agent: AgentId,
    rows: Vec<Bits>,
) -> Result<AgentRelation> {
    let mut r = AgentRelation::new(agent, ctx, rows)?;
    loop {
        let mut rows = r.rows().to_vec();
        for x in 0..ctx.n_features() {
            for a in ctx.closure_ext_unchecked(r.preimage(x)).iter() {
                rows[a].insert(x);
            }
        }
        for row in rows.iter_mut() {
            *row = ctx
                .closure_int_unchecked(crate::context::FeatureSet::from_bits(*row))
                .bits();
        }
        if rows == r.rows() {
            return Ok(r);
        }
        r = AgentRelation::new(agent, ctx, rows)?;
    }
}

/// The compatible hull of a sparse random relation.
pub fn random_compatible_relation<R: Rng>(
    rng: &mut R,
    ctx: &FormalContext,
    agent: AgentId,
) -> AgentRelation {
    let density = rng.gen_range(0.0..0.5);
    let rows = (0..ctx.n_objects())
        .map(|_| {
            (0..ctx.n_features())
                .filter(|_| rng.gen_bool(density))
                .collect()
        })
        .collect();
    compatible_hull(ctx, agent, rows).expect("shape matches")
}

/// A random sublattice containing top and bottom.
fn random_sublattice<R: Rng>(rng: &mut R, lat: &ConceptLattice) -> BTreeSet<usize> {
    let p = rng.gen_range(0.0..=1.0);
    let mut k: BTreeSet<usize> = (0..lat.len()).filter(|_| rng.gen_bool(p)).collect();
    k.insert(lat.top());
    k.insert(lat.bottom());
    loop {
        let items: Vec<usize> = k.iter().copied().collect();
        let before = k.len();
        for &i in &items {
            for &j in &items {
                k.insert(lat.meet_idx(i, j));
                k.insert(lat.join_idx(i, j));
            }
        }
        if k.len() == before {
            return k;
        }
    }
}

/// A factive, positively introspective compatible relation. Its box is the
/// interior operator `□u = ⋁ { k ∈ K | k ≤ u }` of a random sublattice `K`,
/// and `a R x` iff `a ∈ extent(□ x↑)`.
pub fn random_factive_introspective<R: Rng>(
    rng: &mut R,
    lat: &ConceptLattice,
    agent: AgentId,
) -> Result<AgentRelation> {
    let ctx = lat.context();
    let k = random_sublattice(rng, lat);
    let interior = |u: usize| {
        k.iter()
            .filter(|&&c| lat.leq(c, u))
            .fold(lat.bottom(), |acc, &c| lat.join_idx(acc, c))
    };
    let mut rows = vec![Bits::EMPTY; ctx.n_objects()];
    for x in 0..ctx.n_features() {
        let gx = crate::modal::concept_of_feature(ctx, x)?;
        let u = lat.index_of(&gx).expect("feature concept in lattice");
        for a in lat.concept(interior(u)).extent.iter() {
            rows[a].insert(x);
        }
    }
    let r = AgentRelation::new(agent, ctx, rows)?;
    let compat = check_compatible(ctx, &r)?;
    let flags = check_axiom_conditions(ctx, &r)?;
    if !(compat.compatible && flags.factive && flags.pos_introspective) {
        return Err(Error::Invariant(
            "interior-operator relation failed its own axioms".into(),
        ));
    }
    Ok(r)
}

/// Each prop mapped to a uniformly random concept.
pub fn random_valuation<R: Rng>(rng: &mut R, lat: &ConceptLattice, props: &[String]) -> Valuation {
    let mut v = Valuation::new();
    for p in props {
        v.insert(p, lat.concept(rng.gen_range(0..lat.len())));
    }
    v
}

/// Random formulas over fixed atoms.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub props: Vec<String>,
    pub agents: Vec<AgentId>,
    pub objects: Vec<String>,
    pub features: Vec<String>,
    pub max_depth: usize,
}

impl FormulaGen {
    /// Uses every name of `ctx` for nominals and conominals.
    pub fn for_context(
        ctx: &FormalContext,
        props: &[String],
        agents: &[AgentId],
        max_depth: usize,
    ) -> Self {
        FormulaGen {
            props: props.to_vec(),
            agents: agents.to_vec(),
            objects: ctx.objects().to_vec(),
            features: ctx.features().to_vec(),
            max_depth,
        }
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        loop {
            match rng.gen_range(0..10) {
                0 => return Formula::Zero,
                1 => return Formula::One,
                2 => {
                    if let Some(j) = self.objects.choose(rng) {
                        return Formula::Nominal(j.clone());
                    }
                }
                3 => {
                    if let Some(m) = self.features.choose(rng) {
                        return Formula::Conominal(m.clone());
                    }
                }
                _ => {
                    if let Some(p) = self.props.choose(rng) {
                        return Formula::Prop(p.clone());
                    }
                }
            }
        }
    }

    fn gen<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let ops = if self.agents.is_empty() { 2 } else { 4 };
        match rng.gen_range(0..ops) {
            0 => Formula::and(self.gen(rng, depth - 1), self.gen(rng, depth - 1)),
            1 => Formula::or(self.gen(rng, depth - 1), self.gen(rng, depth - 1)),
            2 => Formula::Box(
                *self.agents.choose(rng).expect("agents"),
                Box::new(self.gen(rng, depth - 1)),
            ),
            _ => Formula::DiamondBlack(
                *self.agents.choose(rng).expect("agents"),
                Box::new(self.gen(rng, depth - 1)),
            ),
        }
    }

    pub fn formula<R: Rng>(&self, rng: &mut R) -> Formula {
        self.gen(rng, self.max_depth)
    }

    pub fn inequality<R: Rng>(&self, rng: &mut R) -> Inequality {
        Inequality::new(self.formula(rng), self.formula(rng))
    }
}
