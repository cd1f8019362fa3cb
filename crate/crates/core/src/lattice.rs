//! Concept lattices, abstract finite lattices and the finite duality between
//! lattices and RS-polarities.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::bits::{all_subsets, Bits};
use crate::context::{FeatureSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};
use crate::rscheck;

/// Default bound on the number of objects for concept enumeration.
pub const DEFAULT_OBJECT_LIMIT: usize = 20;

/// Bound on each sort for [`duality_roundtrip`].
pub const ROUNDTRIP_LIMIT: usize = 6;

/// A Galois-stable pair: `up(extent) = intent` and `down(intent) = extent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: ObjectSet,
    pub intent: FeatureSet,
}

impl Concept {
    /// The concept generated by a set of objects: `(U↑↓, U↑)`.
    pub fn from_extent(ctx: &FormalContext, u: ObjectSet) -> Result<Self> {
        let intent = ctx.up(u)?;
        Ok(Concept {
            extent: ctx.down_unchecked(intent),
            intent,
        })
    }

    /// The concept generated by a set of features: `(V↓, V↓↑)`.
    pub fn from_intent(ctx: &FormalContext, v: FeatureSet) -> Result<Self> {
        let extent = ctx.down(v)?;
        Ok(Concept {
            extent,
            intent: ctx.up_unchecked(extent),
        })
    }

    pub fn is_valid(&self, ctx: &FormalContext) -> bool {
        ctx.check_objects(self.extent).is_ok()
            && ctx.check_features(self.intent).is_ok()
            && ctx.up_unchecked(self.extent) == self.intent
            && ctx.down_unchecked(self.intent) == self.extent
    }

    pub fn leq(&self, other: &Concept) -> bool {
        self.extent.is_subset(other.extent)
    }

    /// Renders as `{a1, a2} | {x1}`.
    pub fn display(&self, ctx: &FormalContext) -> String {
        format!(
            "{{{}}} | {{{}}}",
            ctx.object_names_of(self.extent).join(", "),
            ctx.feature_names_of(self.intent).join(", ")
        )
    }
}

/// All concepts of a context in canonical order: ascending extent bit
/// pattern, object 0 least significant.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    ctx: FormalContext,
    concepts: Vec<Concept>,
    index: HashMap<ObjectSet, usize>,
    top: usize,
    bottom: usize,
    irreducibles: OnceLock<(Vec<usize>, Vec<usize>)>,
}

pub fn enumerate_concepts(ctx: &FormalContext) -> Result<ConceptLattice> {
    enumerate_concepts_with_limit(ctx, DEFAULT_OBJECT_LIMIT)
}

/// Breadth-first closure generation: starting from the bottom extent, close
/// every known extent augmented by one object until nothing new appears.
pub fn enumerate_concepts_with_limit(ctx: &FormalContext, limit: usize) -> Result<ConceptLattice> {
    if ctx.n_objects() > limit {
        return Err(Error::SizeLimit(format!(
            "{} objects exceeds the enumeration bound of {limit}",
            ctx.n_objects()
        )));
    }
    let bottom = ctx.closure_ext_unchecked(ObjectSet::EMPTY);
    let mut seen = std::collections::HashSet::from([bottom]);
    let mut queue = VecDeque::from([bottom]);
    while let Some(extent) = queue.pop_front() {
        for a in ctx.all_objects().bits().minus(extent.bits()).iter() {
            let next = ctx.closure_ext_unchecked(extent.with(a));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut extents: Vec<ObjectSet> = seen.into_iter().collect();
    extents.sort();
    Ok(ConceptLattice::from_extents(ctx, extents))
}

/// Reference enumeration: test every subset of objects for stability.
pub fn naive_concepts(ctx: &FormalContext) -> Result<Vec<Concept>> {
    if ctx.n_objects() > 16 {
        return Err(Error::SizeLimit(format!(
            "naive enumeration over {} objects",
            ctx.n_objects()
        )));
    }
    Ok(all_subsets(ctx.n_objects())
        .map(ObjectSet::from_bits)
        .filter(|&u| ctx.closure_ext_unchecked(u) == u)
        .map(|u| Concept {
            extent: u,
            intent: ctx.up_unchecked(u),
        })
        .collect())
}

impl ConceptLattice {
    fn from_extents(ctx: &FormalContext, extents: Vec<ObjectSet>) -> Self {
        let concepts: Vec<Concept> = extents
            .iter()
            .map(|&e| Concept {
                extent: e,
                intent: ctx.up_unchecked(e),
            })
            .collect();
        let index: HashMap<ObjectSet, usize> =
            extents.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let top = index[&ctx.all_objects()];
        let bottom = index[&ctx.closure_ext_unchecked(ObjectSet::EMPTY)];
        ConceptLattice {
            ctx: ctx.clone(),
            concepts,
            index,
            top,
            bottom,
            irreducibles: OnceLock::new(),
        }
    }

    pub fn context(&self) -> &FormalContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> Concept {
        self.concepts[i]
    }

    pub fn index_of(&self, c: &Concept) -> Option<usize> {
        self.index
            .get(&c.extent)
            .copied()
            .filter(|&i| self.concepts[i].intent == c.intent)
    }

    pub fn index_of_extent(&self, extent: ObjectSet) -> Option<usize> {
        self.index.get(&extent).copied()
    }

    fn require(&self, c: &Concept) -> Result<usize> {
        self.index_of(c)
            .ok_or_else(|| Error::ForeignConcept(c.display(&self.ctx)))
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top_concept(&self) -> Concept {
        self.concepts[self.top]
    }

    pub fn bottom_concept(&self) -> Concept {
        self.concepts[self.bottom]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.concepts[i].leq(&self.concepts[j])
    }

    /// Meet: intersection of extents.
    pub fn meet(&self, u: &Concept, v: &Concept) -> Result<Concept> {
        self.require(u)?;
        self.require(v)?;
        Ok(meet_concepts(&self.ctx, u, v))
    }

    /// Join: closure of the union of extents, i.e. intersection of intents.
    pub fn join(&self, u: &Concept, v: &Concept) -> Result<Concept> {
        self.require(u)?;
        self.require(v)?;
        Ok(join_concepts(&self.ctx, u, v))
    }

    /// n-ary meet; the empty meet is top.
    pub fn meet_all<'a>(&self, cs: impl IntoIterator<Item = &'a Concept>) -> Result<Concept> {
        let mut acc = self.top_concept();
        for c in cs {
            self.require(c)?;
            acc = meet_concepts(&self.ctx, &acc, c);
        }
        Ok(acc)
    }

    /// n-ary join; the empty join is bottom.
    pub fn join_all<'a>(&self, cs: impl IntoIterator<Item = &'a Concept>) -> Result<Concept> {
        let mut acc = self.bottom_concept();
        for c in cs {
            self.require(c)?;
            acc = join_concepts(&self.ctx, &acc, c);
        }
        Ok(acc)
    }

    pub fn meet_idx(&self, i: usize, j: usize) -> usize {
        self.index[&(self.concepts[i].extent & self.concepts[j].extent)]
    }

    pub fn join_idx(&self, i: usize, j: usize) -> usize {
        let c = join_concepts(&self.ctx, &self.concepts[i], &self.concepts[j]);
        self.index[&c.extent]
    }

    /// Completely join- and meet-irreducible concepts, by direct comparison
    /// with the join of the strict down-set and the meet of the strict up-set.
    pub fn irreducibles(&self) -> (&[usize], &[usize]) {
        let (j, m) = self.irreducibles.get_or_init(|| {
            let mut jirr = Vec::new();
            let mut mirr = Vec::new();
            for (i, c) in self.concepts.iter().enumerate() {
                let below = self
                    .concepts
                    .iter()
                    .filter(|d| d.extent.bits().is_strict_subset(c.extent.bits()))
                    .fold(ObjectSet::EMPTY, |acc, d| acc | d.extent);
                if self.ctx.closure_ext_unchecked(below) != c.extent {
                    jirr.push(i);
                }
                let above = self
                    .concepts
                    .iter()
                    .filter(|d| c.extent.bits().is_strict_subset(d.extent.bits()))
                    .fold(self.ctx.all_objects(), |acc, d| acc & d.extent);
                if above != c.extent {
                    mirr.push(i);
                }
            }
            (jirr, mirr)
        });
        (j, m)
    }

    pub fn jirr(&self) -> &[usize] {
        self.irreducibles().0
    }

    pub fn mirr(&self) -> &[usize] {
        self.irreducibles().1
    }

    /// Covering pairs `(lower, upper)` in canonical order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |i: usize, j: usize| {
            self.concepts[i]
                .extent
                .bits()
                .is_strict_subset(self.concepts[j].extent.bits())
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Hasse diagram in Graphviz DOT, nodes labelled `extent | intent`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let label = c
                .display(&self.ctx)
                .replace('\\', "\\\\")
                .replace('"', "\\\"");
            let _ = writeln!(s, "  c{i} [label=\"{label}\"];");
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(s, "  c{lo} -> c{hi};");
        }
        s.push_str("}\n");
        s
    }

    /// Forgets the concepts, keeping the order; elements are named `c<i>`.
    pub fn to_abstract(&self) -> AbstractLattice {
        let n = self.len();
        AbstractLattice {
            names: (0..n).map(|i| format!("c{i}")).collect(),
            leq: (0..n)
                .map(|i| (0..n).map(|j| self.leq(i, j)).collect())
                .collect(),
        }
    }
}

pub(crate) fn meet_concepts(ctx: &FormalContext, u: &Concept, v: &Concept) -> Concept {
    let extent = u.extent & v.extent;
    Concept {
        extent,
        intent: ctx.up_unchecked(extent),
    }
}

pub(crate) fn join_concepts(ctx: &FormalContext, u: &Concept, v: &Concept) -> Concept {
    let intent = u.intent & v.intent;
    Concept {
        extent: ctx.down_unchecked(intent),
        intent,
    }
}

/// A finite lattice given only by its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl AbstractLattice {
    /// Validates that `leq` is a partial order in which every pair has a
    /// least upper and a greatest lower bound.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Precondition("empty lattice".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("order matrix shape mismatch".into()));
        }
        let lat = AbstractLattice { names, leq };
        for i in 0..n {
            if !lat.leq[i][i] {
                return Err(Error::Precondition(format!(
                    "not reflexive at {}",
                    lat.names[i]
                )));
            }
            for j in 0..n {
                if i != j && lat.leq[i][j] && lat.leq[j][i] {
                    return Err(Error::Precondition(format!(
                        "not antisymmetric: {} and {}",
                        lat.names[i], lat.names[j]
                    )));
                }
                for k in 0..n {
                    if lat.leq[i][j] && lat.leq[j][k] && !lat.leq[i][k] {
                        return Err(Error::Precondition("not transitive".into()));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if lat.join_of([i, j]).is_none() || lat.meet_of([i, j]).is_none() {
                    return Err(Error::Precondition(format!(
                        "{} and {} lack a join or meet",
                        lat.names[i], lat.names[j]
                    )));
                }
            }
        }
        if lat.join_of([]).is_none() || lat.meet_of([]).is_none() {
            return Err(Error::Precondition("no bottom or top".into()));
        }
        Ok(lat)
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::new(
            (0..n).map(|i| format!("e{i}")).collect(),
            (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Least upper bound of a set of elements, if it exists.
    pub fn join_of<I: IntoIterator<Item = usize>>(&self, set: I) -> Option<usize> {
        let set: Vec<usize> = set.into_iter().collect();
        let ub: Vec<usize> = (0..self.len())
            .filter(|&u| set.iter().all(|&s| self.leq[s][u]))
            .collect();
        ub.iter()
            .copied()
            .find(|&u| ub.iter().all(|&w| self.leq[u][w]))
    }

    /// Greatest lower bound of a set of elements, if it exists.
    pub fn meet_of<I: IntoIterator<Item = usize>>(&self, set: I) -> Option<usize> {
        let set: Vec<usize> = set.into_iter().collect();
        let lb: Vec<usize> = (0..self.len())
            .filter(|&l| set.iter().all(|&s| self.leq[l][s]))
            .collect();
        lb.iter()
            .copied()
            .find(|&l| lb.iter().all(|&w| self.leq[w][l]))
    }

    /// Elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| {
                let below = (0..self.len()).filter(|&b| b != a && self.leq[b][a]);
                self.join_of(below) != Some(a)
            })
            .collect()
    }

    /// Elements that are not the meet of the elements strictly above them.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| {
                let above = (0..self.len()).filter(|&b| b != a && self.leq[a][b]);
                self.meet_of(above) != Some(a)
            })
            .collect()
    }
}

/// The polarity `(J, M, <=)` of a finite lattice: one object per
/// join-irreducible, one feature per meet-irreducible.
pub fn dual_polarity(lat: &AbstractLattice) -> Result<FormalContext> {
    let jirr = lat.join_irreducibles();
    let mirr = lat.meet_irreducibles();
    if jirr.is_empty() || mirr.is_empty() {
        return Err(Error::Degenerate(format!(
            "lattice of {} element(s) has {} join- and {} meet-irreducibles",
            lat.len(),
            jirr.len(),
            mirr.len()
        )));
    }
    let rows = jirr
        .iter()
        .map(|&j| {
            mirr.iter()
                .enumerate()
                .filter(|(_, &m)| lat.leq(j, m))
                .map(|(k, _)| k)
                .collect::<Bits>()
        })
        .collect();
    FormalContext::from_rows(
        jirr.iter().map(|&j| lat.names()[j].clone()).collect(),
        mirr.iter().map(|&m| lat.names()[m].clone()).collect(),
        rows,
    )
}

/// A pair of bijections `objects[a]`, `features[x]` from one context onto
/// another preserving and reflecting incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextIsomorphism {
    pub objects: Vec<usize>,
    pub features: Vec<usize>,
}

impl ContextIsomorphism {
    pub fn verify(&self, from: &FormalContext, to: &FormalContext) -> bool {
        let bijective = |map: &[usize], n: usize| {
            map.len() == n && map.iter().copied().collect::<Bits>() == Bits::full(n)
        };
        from.n_objects() == to.n_objects()
            && from.n_features() == to.n_features()
            && bijective(&self.objects, to.n_objects())
            && bijective(&self.features, to.n_features())
            && (0..from.n_objects()).all(|a| {
                (0..from.n_features())
                    .all(|x| from.incident(a, x) == to.incident(self.objects[a], self.features[x]))
            })
    }
}

/// Backtracking search over degree-compatible object bijections; features
/// are then matched by their image columns.
pub fn find_context_isomorphism(
    from: &FormalContext,
    to: &FormalContext,
) -> Option<ContextIsomorphism> {
    if from.n_objects() != to.n_objects() || from.n_features() != to.n_features() {
        return None;
    }
    let n = from.n_objects();
    let mut map = vec![usize::MAX; n];
    let mut used = Bits::EMPTY;
    search_objects(from, to, 0, &mut map, &mut used)
}

fn search_objects(
    from: &FormalContext,
    to: &FormalContext,
    a: usize,
    map: &mut Vec<usize>,
    used: &mut Bits,
) -> Option<ContextIsomorphism> {
    if a == from.n_objects() {
        return match_features(from, to, map).map(|features| ContextIsomorphism {
            objects: map.clone(),
            features,
        });
    }
    for b in 0..to.n_objects() {
        if used.contains(b) || from.row(a).len() != to.row(b).len() {
            continue;
        }
        let consistent = (0..a).all(|prev| {
            (from.row(a) & from.row(prev)).len() == (to.row(b) & to.row(map[prev])).len()
        });
        if !consistent {
            continue;
        }
        map[a] = b;
        *used = used.with(b);
        if let Some(iso) = search_objects(from, to, a + 1, map, used) {
            return Some(iso);
        }
        *used = used.without(b);
    }
    None
}

fn match_features(
    from: &FormalContext,
    to: &FormalContext,
    objects: &[usize],
) -> Option<Vec<usize>> {
    let mut taken = Bits::EMPTY;
    let mut out = Vec::with_capacity(from.n_features());
    for x in 0..from.n_features() {
        let image: Bits = from.column(x).iter().map(|a| objects[a]).collect();
        let y =
            (0..to.n_features()).find(|&y| !taken.contains(y) && to.column(y).bits() == image)?;
        taken.insert(y);
        out.push(y);
    }
    Some(out)
}

/// An order isomorphism between two finite lattices, as a map on indices.
pub fn find_order_isomorphism(l1: &AbstractLattice, l2: &AbstractLattice) -> Option<Vec<usize>> {
    if l1.len() != l2.len() {
        return None;
    }
    let n = l1.len();
    let sig = |l: &AbstractLattice, i: usize| {
        let below = (0..n).filter(|&j| l.leq(j, i)).count();
        let above = (0..n).filter(|&j| l.leq(i, j)).count();
        (below, above)
    };
    let s1: Vec<_> = (0..n).map(|i| sig(l1, i)).collect();
    let s2: Vec<_> = (0..n).map(|i| sig(l2, i)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        i: usize,
        l1: &AbstractLattice,
        l2: &AbstractLattice,
        s1: &[(usize, usize)],
        s2: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == map.len() {
            return true;
        }
        for k in 0..map.len() {
            if used[k] || s1[i] != s2[k] {
                continue;
            }
            let ok = (0..i)
                .all(|p| l1.leq(p, i) == l2.leq(map[p], k) && l1.leq(i, p) == l2.leq(k, map[p]));
            if !ok {
                continue;
            }
            map[i] = k;
            used[k] = true;
            if go(i + 1, l1, l2, s1, s2, map, used) {
                return true;
            }
            used[k] = false;
        }
        false
    }

    go(0, l1, l2, &s1, &s2, &mut map, &mut used).then_some(map)
}

/// Outcome of computing `(P⁺)₊` and comparing it with `P`.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub dual: FormalContext,
    pub isomorphism: Option<ContextIsomorphism>,
}

impl RoundTrip {
    pub fn is_isomorphic(&self) -> bool {
        self.isomorphism.is_some()
    }
}

pub fn duality_roundtrip(ctx: &FormalContext) -> Result<RoundTrip> {
    if ctx.n_objects() > ROUNDTRIP_LIMIT || ctx.n_features() > ROUNDTRIP_LIMIT {
        return Err(Error::SizeLimit(format!(
            "round trip is limited to {ROUNDTRIP_LIMIT}x{ROUNDTRIP_LIMIT} contexts"
        )));
    }
    let report = rscheck::is_rs(ctx);
    if !report.is_rs() {
        return Err(Error::Precondition(format!(
            "context is not an RS-polarity: {}",
            report.summary(ctx)
        )));
    }
    let lattice = enumerate_concepts(ctx)?;
    let dual = dual_polarity(&lattice.to_abstract())?;
    let isomorphism = find_context_isomorphism(ctx, &dual);
    Ok(RoundTrip { dual, isomorphism })
}
