//! Shared generators and a naive set-of-booleans oracle.

#![allow(dead_code)]

pub mod cli;
pub mod laws;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsframe::generate::{
    random_compatible_relation, random_factive_introspective, random_rs_context,
};
use rsframe::lattice::enumerate_concepts;
use rsframe::logic::Valuation;
use rsframe::{AgentId, AgentRelation, Concept, FormalContext, RsFrame};

pub type ChaCha = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A context held as a plain boolean matrix.
#[derive(Clone, Debug)]
pub struct Naive {
    pub inc: Vec<Vec<bool>>,
    pub n: usize,
    pub m: usize,
}

impl Naive {
    pub fn of(ctx: &FormalContext) -> Self {
        let n = ctx.n_objects();
        let m = ctx.n_features();
        let inc = (0..n)
            .map(|a| (0..m).map(|x| ctx.incident(a, x)).collect())
            .collect();
        Naive { inc, n, m }
    }

    pub fn up(&self, u: &[bool]) -> Vec<bool> {
        (0..self.m)
            .map(|x| (0..self.n).all(|a| !u[a] || self.inc[a][x]))
            .collect()
    }

    pub fn down(&self, v: &[bool]) -> Vec<bool> {
        (0..self.n)
            .map(|a| (0..self.m).all(|x| !v[x] || self.inc[a][x]))
            .collect()
    }

    /// Every extent, found by closing every subset of objects.
    pub fn extents(&self) -> Vec<Vec<bool>> {
        let mut out: Vec<Vec<bool>> = (0..1u64 << self.n)
            .map(|mask| {
                let u: Vec<bool> = (0..self.n).map(|a| mask >> a & 1 == 1).collect();
                self.down(&self.up(&u))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `extent(□v)`: objects related to every feature of `v`'s intent.
    pub fn box_extent(&self, r: &[Vec<bool>], intent: &[bool]) -> Vec<bool> {
        (0..self.n)
            .map(|a| (0..self.m).all(|x| !intent[x] || r[a][x]))
            .collect()
    }
}

pub fn to_bools(set: impl IntoIterator<Item = usize>, len: usize) -> Vec<bool> {
    let mut v = vec![false; len];
    for i in set {
        v[i] = true;
    }
    v
}

pub fn matrix(r: &AgentRelation) -> Vec<Vec<bool>> {
    (0..r.n_objects())
        .map(|a| (0..r.n_features()).map(|x| r.relates(a, x)).collect())
        .collect()
}

pub fn extent_bools(c: &Concept, ctx: &FormalContext) -> Vec<bool> {
    to_bools(c.extent.iter(), ctx.n_objects())
}

pub const PROPS: [&str; 3] = ["p", "q", "r"];

/// A random compatible relation, sometimes factive and introspective.
pub fn random_relation<R: Rng>(rng: &mut R, ctx: &FormalContext, agent: AgentId) -> AgentRelation {
    match rng.gen_range(0..4) {
        0 => {
            let lat = enumerate_concepts(ctx).expect("small lattice");
            random_factive_introspective(rng, &lat, agent).expect("construction")
        }
        _ => random_compatible_relation(rng, ctx, agent),
    }
}

/// An RS frame with `agents` relations, agent ids starting at 1.
pub fn random_frame<R: Rng>(rng: &mut R, max: usize, agents: usize) -> RsFrame {
    let ctx = random_rs_context(rng, max, max);
    let rels = (1..=agents as u32)
        .map(|i| random_relation(rng, &ctx, AgentId(i)))
        .collect();
    RsFrame::new(ctx, rels).expect("compatible relations on an RS context")
}

/// A frame whose agents are all factive and positively introspective.
pub fn random_social_frame<R: Rng>(rng: &mut R, max: usize, agents: usize) -> RsFrame {
    let ctx = random_rs_context(rng, max, max);
    let lat = enumerate_concepts(&ctx).expect("small lattice");
    let rels = (1..=agents as u32)
        .map(|i| random_factive_introspective(rng, &lat, AgentId(i)).expect("construction"))
        .collect();
    RsFrame::new(ctx, rels).expect("compatible relations on an RS context")
}

pub fn random_valuation<R: Rng>(rng: &mut R, frame: &RsFrame, props: &[String]) -> Valuation {
    let lat = frame.lattice().expect("small lattice");
    rsframe::generate::random_valuation(rng, lat, props)
}

pub fn prop_names(k: usize) -> Vec<String> {
    PROPS[..k].iter().map(|s| s.to_string()).collect()
}
