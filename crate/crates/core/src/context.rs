//! Finite polarities `(A, X, ⊥)` and their Galois connection.
//!
//! A [`FormalContext`] fixes an ordered list of objects, an ordered list of
//! features and the incidence between them. Subsets of either sort are
//! [`ObjectSet`] / [`FeatureSet`] bitmasks indexed by list position.
//!
//! The two derivation maps are
//!
//! * `up(U)   = { x | every a in U is incident to x }`
//! * `down(V) = { a | a is incident to every x in V }`
//!
//! and their composites are the closure operators whose fixed points are the
//! extents and intents of concepts.

use std::collections::HashSet;
use std::fmt;
use std::ops::{BitAnd, BitOr};

use crate::bits::{Bits, BitsIter, MAX_SORT};
use crate::error::{Error, Result, Sort};

macro_rules! sort_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub(crate) Bits);

        impl $name {
            pub const EMPTY: $name = $name(Bits::EMPTY);

            pub fn from_bits(bits: Bits) -> Self {
                $name(bits)
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
                $name(indices.into_iter().collect())
            }

            pub fn bits(self) -> Bits {
                self.0
            }

            pub fn contains(self, i: usize) -> bool {
                self.0.contains(i)
            }

            pub fn len(self) -> usize {
                self.0.len()
            }

            pub fn is_empty(self) -> bool {
                self.0.is_empty()
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0.is_subset(other.0)
            }

            pub fn iter(self) -> BitsIter {
                self.0.iter()
            }

            pub fn with(self, i: usize) -> Self {
                $name(self.0.with(i))
            }
        }

        impl BitAnd for $name {
            type Output = $name;
            fn bitand(self, rhs: $name) -> $name {
                $name(self.0 & rhs.0)
            }
        }

        impl BitOr for $name {
            type Output = $name;
            fn bitor(self, rhs: $name) -> $name {
                $name(self.0 | rhs.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.0)
            }
        }
    };
}

sort_set!(
    /// A subset of a context's objects.
    ObjectSet
);
sort_set!(
    /// A subset of a context's features.
    FeatureSet
);

/// A specialization preorder on one sort, stored as up-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    above: Vec<Bits>,
}

impl Preorder {
    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    /// `i <= j` and not `j <= i`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && !self.leq(j, i)
    }

    pub fn up_set(&self, i: usize) -> Bits {
        self.above[i]
    }

    pub fn down_set(&self, j: usize) -> Bits {
        (0..self.len()).filter(|&i| self.leq(i, j)).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|i| {
            self.above[i]
                .iter()
                .all(|j| self.above[j].is_subset(self.above[i]))
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    features: Vec<String>,
    /// `rows[a]`: features incident to object `a`.
    rows: Vec<Bits>,
    /// `cols[x]`: objects incident to feature `x`.
    cols: Vec<Bits>,
}

fn check_names(names: &[String], sort: Sort) -> Result<()> {
    if names.is_empty() {
        return Err(Error::InvalidContext(format!("no {sort}s")));
    }
    if names.len() > MAX_SORT {
        return Err(Error::SizeLimit(format!(
            "{} {sort}s (at most {MAX_SORT} supported)",
            names.len()
        )));
    }
    let mut seen = HashSet::new();
    for name in names {
        if name.is_empty() || name.contains(['\n', '\r']) {
            return Err(Error::InvalidContext(format!(
                "invalid {sort} name {name:?}"
            )));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidContext(format!(
                "duplicate {sort} name `{name}`"
            )));
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from a dense `|A| x |X|` incidence matrix.
    pub fn new<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        features: impl IntoIterator<Item = S>,
        incidence: &[Vec<bool>],
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let features: Vec<String> = features.into_iter().map(Into::into).collect();
        if incidence.len() != objects.len() {
            return Err(Error::InvalidContext(format!(
                "{} rows for {} objects",
                incidence.len(),
                objects.len()
            )));
        }
        let mut rows = Vec::with_capacity(objects.len());
        for (a, row) in incidence.iter().enumerate() {
            if row.len() != features.len() {
                return Err(Error::InvalidContext(format!(
                    "row {a} has {} entries for {} features",
                    row.len(),
                    features.len()
                )));
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(x, _)| x)
                    .collect(),
            );
        }
        Self::from_rows(objects, features, rows)
    }

    /// Builds a context from per-object feature masks.
    pub fn from_rows(objects: Vec<String>, features: Vec<String>, rows: Vec<Bits>) -> Result<Self> {
        check_names(&objects, Sort::Object)?;
        check_names(&features, Sort::Feature)?;
        if rows.len() != objects.len() {
            return Err(Error::InvalidContext(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        let all = Bits::full(features.len());
        if let Some(a) = rows.iter().position(|r| !r.is_subset(all)) {
            return Err(Error::InvalidContext(format!(
                "row {a} refers to a missing feature"
            )));
        }
        let cols = (0..features.len())
            .map(|x| {
                (0..objects.len())
                    .filter(|&a| rows[a].contains(x))
                    .collect()
            })
            .collect();
        Ok(FormalContext {
            objects,
            features,
            rows,
            cols,
        })
    }

    /// Builds a context from named incident pairs.
    pub fn from_pairs(objects: &[&str], features: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let features: Vec<String> = features.iter().map(|s| s.to_string()).collect();
        let mut rows = vec![Bits::EMPTY; objects.len()];
        for (o, f) in pairs {
            let a = objects
                .iter()
                .position(|n| n == o)
                .ok_or_else(|| Error::UnknownName {
                    sort: Sort::Object,
                    name: o.to_string(),
                })?;
            let x = features
                .iter()
                .position(|n| n == f)
                .ok_or_else(|| Error::UnknownName {
                    sort: Sort::Feature,
                    name: f.to_string(),
                })?;
            rows[a].insert(x);
        }
        Self::from_rows(objects, features, rows)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn feature_name(&self, x: usize) -> &str {
        &self.features[x]
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName {
                sort: Sort::Object,
                name: name.to_string(),
            })
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.features
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName {
                sort: Sort::Feature,
                name: name.to_string(),
            })
    }

    pub fn incident(&self, a: usize, x: usize) -> bool {
        self.rows[a].contains(x)
    }

    /// Features of `a` (the set `a↑`).
    pub fn row(&self, a: usize) -> FeatureSet {
        FeatureSet(self.rows[a])
    }

    /// Objects having `x` (the set `x↓`).
    pub fn column(&self, x: usize) -> ObjectSet {
        ObjectSet(self.cols[x])
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet(Bits::full(self.n_objects()))
    }

    pub fn all_features(&self) -> FeatureSet {
        FeatureSet(Bits::full(self.n_features()))
    }

    pub fn object_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<ObjectSet> {
        let set = ObjectSet::from_indices(indices);
        self.check_objects(set)?;
        Ok(set)
    }

    pub fn feature_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<FeatureSet> {
        let set = FeatureSet::from_indices(indices);
        self.check_features(set)?;
        Ok(set)
    }

    pub fn objects_named(&self, names: &[&str]) -> Result<ObjectSet> {
        names
            .iter()
            .try_fold(ObjectSet::EMPTY, |s, n| Ok(s.with(self.object_index(n)?)))
    }

    pub fn features_named(&self, names: &[&str]) -> Result<FeatureSet> {
        names
            .iter()
            .try_fold(FeatureSet::EMPTY, |s, n| Ok(s.with(self.feature_index(n)?)))
    }

    pub fn object_names_of(&self, set: ObjectSet) -> Vec<&str> {
        set.iter().map(|a| self.object_name(a)).collect()
    }

    pub fn feature_names_of(&self, set: FeatureSet) -> Vec<&str> {
        set.iter().map(|x| self.feature_name(x)).collect()
    }

    pub fn check_objects(&self, set: ObjectSet) -> Result<()> {
        match set.0.minus(Bits::full(self.n_objects())).first() {
            Some(index) => Err(Error::OutOfBounds {
                sort: Sort::Object,
                index,
                len: self.n_objects(),
            }),
            None => Ok(()),
        }
    }

    pub fn check_features(&self, set: FeatureSet) -> Result<()> {
        match set.0.minus(Bits::full(self.n_features())).first() {
            Some(index) => Err(Error::OutOfBounds {
                sort: Sort::Feature,
                index,
                len: self.n_features(),
            }),
            None => Ok(()),
        }
    }

    pub fn check_object(&self, a: usize) -> Result<()> {
        if a < self.n_objects() {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                sort: Sort::Object,
                index: a,
                len: self.n_objects(),
            })
        }
    }

    pub fn check_feature(&self, x: usize) -> Result<()> {
        if x < self.n_features() {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                sort: Sort::Feature,
                index: x,
                len: self.n_features(),
            })
        }
    }

    pub(crate) fn up_unchecked(&self, u: ObjectSet) -> FeatureSet {
        FeatureSet(
            u.iter()
                .fold(Bits::full(self.n_features()), |acc, a| acc & self.rows[a]),
        )
    }

    pub(crate) fn down_unchecked(&self, v: FeatureSet) -> ObjectSet {
        ObjectSet(
            v.iter()
                .fold(Bits::full(self.n_objects()), |acc, x| acc & self.cols[x]),
        )
    }

    /// Features shared by every object of `u`; `up(∅)` is every feature.
    pub fn up(&self, u: ObjectSet) -> Result<FeatureSet> {
        self.check_objects(u)?;
        Ok(self.up_unchecked(u))
    }

    /// Objects having every feature of `v`; `down(∅)` is every object.
    pub fn down(&self, v: FeatureSet) -> Result<ObjectSet> {
        self.check_features(v)?;
        Ok(self.down_unchecked(v))
    }

    pub(crate) fn closure_ext_unchecked(&self, u: ObjectSet) -> ObjectSet {
        self.down_unchecked(self.up_unchecked(u))
    }

    pub(crate) fn closure_int_unchecked(&self, v: FeatureSet) -> FeatureSet {
        self.up_unchecked(self.down_unchecked(v))
    }

    /// `down(up(u))`.
    pub fn closure_ext(&self, u: ObjectSet) -> Result<ObjectSet> {
        self.check_objects(u)?;
        Ok(self.closure_ext_unchecked(u))
    }

    /// `up(down(v))`.
    pub fn closure_int(&self, v: FeatureSet) -> Result<FeatureSet> {
        self.check_features(v)?;
        Ok(self.closure_int_unchecked(v))
    }

    pub fn is_stable_ext(&self, u: ObjectSet) -> Result<bool> {
        Ok(self.closure_ext(u)? == u)
    }

    pub fn is_stable_int(&self, v: FeatureSet) -> Result<bool> {
        Ok(self.closure_int(v)? == v)
    }

    /// `a <= b` iff every feature of `b` is a feature of `a`.
    pub fn obj_leq(&self, a: usize, b: usize) -> bool {
        self.rows[b].is_subset(self.rows[a])
    }

    /// `x <= y` iff every object having `x` has `y`.
    pub fn feat_leq(&self, x: usize, y: usize) -> bool {
        self.cols[x].is_subset(self.cols[y])
    }

    pub fn obj_preorder(&self) -> Preorder {
        let n = self.n_objects();
        Preorder {
            above: (0..n)
                .map(|a| (0..n).filter(|&b| self.obj_leq(a, b)).collect())
                .collect(),
        }
    }

    pub fn feat_preorder(&self) -> Preorder {
        let n = self.n_features();
        Preorder {
            above: (0..n)
                .map(|x| (0..n).filter(|&y| self.feat_leq(x, y)).collect())
                .collect(),
        }
    }

    /// `z↑ = { y | z <= y }`, which equals `closure_int({z})`.
    pub fn up_set_of_feature(&self, z: usize) -> Result<FeatureSet> {
        self.check_feature(z)?;
        Ok(FeatureSet(
            (0..self.n_features())
                .filter(|&y| self.feat_leq(z, y))
                .collect(),
        ))
    }

    /// `b↓ = { a | a <= b }`, which equals `closure_ext({b})`.
    pub fn down_set_of_object(&self, b: usize) -> Result<ObjectSet> {
        self.check_object(b)?;
        Ok(ObjectSet(
            (0..self.n_objects())
                .filter(|&a| self.obj_leq(a, b))
                .collect(),
        ))
    }

    /// The subcontext on the given objects and features, order preserved.
    pub fn restrict(&self, objects: ObjectSet, features: FeatureSet) -> Result<FormalContext> {
        self.check_objects(objects)?;
        self.check_features(features)?;
        let keep_x: Vec<usize> = features.iter().collect();
        let rows = objects
            .iter()
            .map(|a| {
                keep_x
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| self.incident(a, x))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        FormalContext::from_rows(
            objects.iter().map(|a| self.objects[a].clone()).collect(),
            keep_x.iter().map(|&x| self.features[x].clone()).collect(),
            rows,
        )
    }
}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormalContext {:?} x {:?}", self.objects, self.features)?;
        for (a, name) in self.objects.iter().enumerate() {
            let row: String = (0..self.n_features())
                .map(|x| if self.incident(a, x) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {name}: {row}")?;
        }
        Ok(())
    }
}
