//! Separation and reduction conditions on polarities, with witnesses, and
//! pruning of an arbitrary context toward an RS-polarity.
//!
//! * (s1) distinct objects have distinct rows; (s2) distinct features have
//!   distinct columns.
//! * (r1) every object `a` has a feature `x` such that `a` is minimal among
//!   the objects lacking `x`.
//! * (r2) every feature `x` has an object `a` such that `x` is maximal among
//!   the features `a` lacks.
//!
//! Minimality and maximality are taken in the strict part of the
//! specialization preorders, so the checks are meaningful on contexts that
//! are not separating.

use crate::bits::Bits;
use crate::context::{FeatureSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};

/// An object failing (r1), with the objects strictly below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Violation {
    pub object: usize,
    pub strictly_below: Vec<usize>,
}

/// A feature failing (r2), with the features strictly above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R2Violation {
    pub feature: usize,
    pub strictly_above: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RsReport {
    pub s1_violations: Vec<(usize, usize)>,
    pub s2_violations: Vec<(usize, usize)>,
    pub r1_violations: Vec<R1Violation>,
    pub r2_violations: Vec<R2Violation>,
}

impl RsReport {
    pub fn is_rs(&self) -> bool {
        self.s1_violations.is_empty()
            && self.s2_violations.is_empty()
            && self.r1_violations.is_empty()
            && self.r2_violations.is_empty()
    }

    /// One human-readable line per violation.
    pub fn lines(&self, ctx: &FormalContext) -> Vec<String> {
        let names = |ids: &[usize], f: &dyn Fn(usize) -> String| {
            if ids.is_empty() {
                return "none".to_string();
            }
            ids.iter().map(|&i| f(i)).collect::<Vec<_>>().join(", ")
        };
        let obj = |i: usize| ctx.object_name(i).to_string();
        let feat = |i: usize| ctx.feature_name(i).to_string();
        let mut out = Vec::new();
        for &(a, b) in &self.s1_violations {
            out.push(format!(
                "s1 violation: {} {} (identical rows)",
                obj(a),
                obj(b)
            ));
        }
        for &(x, y) in &self.s2_violations {
            out.push(format!(
                "s2 violation: {} {} (identical columns)",
                feat(x),
                feat(y)
            ));
        }
        for v in &self.r1_violations {
            out.push(format!(
                "r1 violation: {} (strictly below: {})",
                obj(v.object),
                names(&v.strictly_below, &obj)
            ));
        }
        for v in &self.r2_violations {
            out.push(format!(
                "r2 violation: {} (strictly above: {})",
                feat(v.feature),
                names(&v.strictly_above, &feat)
            ));
        }
        out
    }

    pub fn summary(&self, ctx: &FormalContext) -> String {
        if self.is_rs() {
            "RS".into()
        } else {
            self.lines(ctx).join("; ")
        }
    }
}

/// Index pairs with identical rows or identical columns.
pub type SamePairs = Vec<(usize, usize)>;

/// Pairs of objects with identical rows and pairs of features with
/// identical columns.
pub fn check_separating(ctx: &FormalContext) -> (SamePairs, SamePairs) {
    let mut s1 = Vec::new();
    for a in 0..ctx.n_objects() {
        for b in a + 1..ctx.n_objects() {
            if ctx.row(a) == ctx.row(b) {
                s1.push((a, b));
            }
        }
    }
    let mut s2 = Vec::new();
    for x in 0..ctx.n_features() {
        for y in x + 1..ctx.n_features() {
            if ctx.column(x) == ctx.column(y) {
                s2.push((x, y));
            }
        }
    }
    (s1, s2)
}

fn strictly_below_object(ctx: &FormalContext, a: usize) -> Vec<usize> {
    (0..ctx.n_objects())
        .filter(|&b| ctx.obj_leq(b, a) && !ctx.obj_leq(a, b))
        .collect()
}

fn strictly_above_feature(ctx: &FormalContext, x: usize) -> Vec<usize> {
    (0..ctx.n_features())
        .filter(|&y| ctx.feat_leq(x, y) && !ctx.feat_leq(y, x))
        .collect()
}

fn passes_r1(ctx: &FormalContext, a: usize) -> bool {
    let below = strictly_below_object(ctx, a);
    (0..ctx.n_features()).any(|x| !ctx.incident(a, x) && below.iter().all(|&b| ctx.incident(b, x)))
}

fn passes_r2(ctx: &FormalContext, x: usize) -> bool {
    let above = strictly_above_feature(ctx, x);
    (0..ctx.n_objects()).any(|a| !ctx.incident(a, x) && above.iter().all(|&y| ctx.incident(a, y)))
}

pub fn check_reduced(ctx: &FormalContext) -> (Vec<R1Violation>, Vec<R2Violation>) {
    let r1 = (0..ctx.n_objects())
        .filter(|&a| !passes_r1(ctx, a))
        .map(|a| R1Violation {
            object: a,
            strictly_below: strictly_below_object(ctx, a),
        })
        .collect();
    let r2 = (0..ctx.n_features())
        .filter(|&x| !passes_r2(ctx, x))
        .map(|x| R2Violation {
            feature: x,
            strictly_above: strictly_above_feature(ctx, x),
        })
        .collect();
    (r1, r2)
}

pub fn is_rs(ctx: &FormalContext) -> RsReport {
    let (s1_violations, s2_violations) = check_separating(ctx);
    let (r1_violations, r2_violations) = check_reduced(ctx);
    RsReport {
        s1_violations,
        s2_violations,
        r1_violations,
        r2_violations,
    }
}

/// What pruning did, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PruneLog {
    /// `(kept, dropped)` for identical rows.
    pub merged_objects: Vec<(String, String)>,
    /// `(kept, dropped)` for identical columns.
    pub merged_features: Vec<(String, String)>,
    pub reduced_objects: Vec<String>,
    pub reduced_features: Vec<String>,
}

pub fn prune(ctx: &FormalContext) -> Result<FormalContext> {
    prune_with_log(ctx).map(|(c, _)| c)
}

/// Clarification followed by reduction, repeated until nothing applies.
///
/// Clarification merges identical rows (and columns), keeping the
/// lexicographically first name. Reduction deletes a feature whose column is
/// the intersection of the columns strictly above it, or an object whose row
/// is the intersection of the rows strictly below it.
pub fn prune_with_log(ctx: &FormalContext) -> Result<(FormalContext, PruneLog)> {
    let mut log = PruneLog::default();
    let mut cur = ctx.clone();
    loop {
        let (next, changed) = clarify(&cur, &mut log)?;
        cur = next;
        if changed {
            continue;
        }
        if let Some(x) = (0..cur.n_features()).find(|&x| feature_reducible(&cur, x)) {
            log.reduced_features.push(cur.feature_name(x).to_string());
            let keep = FeatureSet::from_bits(cur.all_features().bits().without(x));
            cur = shrink(&cur, cur.all_objects(), keep)?;
            continue;
        }
        if let Some(a) = (0..cur.n_objects()).find(|&a| object_reducible(&cur, a)) {
            log.reduced_objects.push(cur.object_name(a).to_string());
            let keep = ObjectSet::from_bits(cur.all_objects().bits().without(a));
            cur = shrink(&cur, keep, cur.all_features())?;
            continue;
        }
        return Ok((cur, log));
    }
}

fn shrink(ctx: &FormalContext, objects: ObjectSet, features: FeatureSet) -> Result<FormalContext> {
    if objects.is_empty() || features.is_empty() {
        return Err(Error::Degenerate(format!(
            "pruning leaves {} objects and {} features",
            objects.len(),
            features.len()
        )));
    }
    ctx.restrict(objects, features)
}

fn clarify(ctx: &FormalContext, log: &mut PruneLog) -> Result<(FormalContext, bool)> {
    let mut drop_objects = Bits::EMPTY;
    for a in 0..ctx.n_objects() {
        let keeper = (0..ctx.n_objects())
            .filter(|&b| ctx.row(b) == ctx.row(a))
            .min_by(|&b, &c| ctx.object_name(b).cmp(ctx.object_name(c)))
            .expect("a matches itself");
        if keeper != a {
            drop_objects.insert(a);
            log.merged_objects
                .push((ctx.object_name(keeper).into(), ctx.object_name(a).into()));
        }
    }
    let mut drop_features = Bits::EMPTY;
    for x in 0..ctx.n_features() {
        let keeper = (0..ctx.n_features())
            .filter(|&y| ctx.column(y) == ctx.column(x))
            .min_by(|&y, &z| ctx.feature_name(y).cmp(ctx.feature_name(z)))
            .expect("x matches itself");
        if keeper != x {
            drop_features.insert(x);
            log.merged_features
                .push((ctx.feature_name(keeper).into(), ctx.feature_name(x).into()));
        }
    }
    if drop_objects.is_empty() && drop_features.is_empty() {
        return Ok((ctx.clone(), false));
    }
    let objects = ObjectSet::from_bits(ctx.all_objects().bits().minus(drop_objects));
    let features = FeatureSet::from_bits(ctx.all_features().bits().minus(drop_features));
    Ok((shrink(ctx, objects, features)?, true))
}

fn feature_reducible(ctx: &FormalContext, x: usize) -> bool {
    let meet = strictly_above_feature(ctx, x)
        .into_iter()
        .fold(ctx.all_objects(), |acc, y| acc & ctx.column(y));
    meet == ctx.column(x)
}

fn object_reducible(ctx: &FormalContext, a: usize) -> bool {
    let meet = strictly_below_object(ctx, a)
        .into_iter()
        .fold(ctx.all_features(), |acc, b| acc & ctx.row(b));
    meet == ctx.row(a)
}
