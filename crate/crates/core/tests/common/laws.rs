//! Law checkers shared by the property tests and the acceptance run. Each
//! returns the first violated law with its witness.

#![allow(dead_code)]

use rand::Rng;

use rsframe::bits::Bits;
use rsframe::lattice::{enumerate_concepts, find_order_isomorphism, ConceptLattice};
use rsframe::logic::{Formula, Inequality, Model};
use rsframe::modal::check_compatible;
use rsframe::rscheck;
use rsframe::social::SocialModel;
use rsframe::translation::{check_sorts, fo_eval, st_a, st_x, translate_inequality, FoEnvironment};
use rsframe::{AgentId, Concept, FeatureSet, FormalContext, ObjectSet, RsFrame, Sort};

use super::{extent_bools, matrix, to_bools, Naive};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn objs<R: Rng>(rng: &mut R, ctx: &FormalContext) -> ObjectSet {
    ObjectSet::from_bits(Bits::from_raw(rng.gen::<u64>()) & Bits::full(ctx.n_objects()))
}

fn feats<R: Rng>(rng: &mut R, ctx: &FormalContext) -> FeatureSet {
    FeatureSet::from_bits(Bits::from_raw(rng.gen::<u64>()) & Bits::full(ctx.n_features()))
}

/// Galois connection, closure, triple application, antitonicity and
/// principal-set laws on `samples` random subsets.
pub fn context_laws<R: Rng>(rng: &mut R, ctx: &FormalContext, samples: usize) -> Check {
    let naive = Naive::of(ctx);
    let (n, m) = (ctx.n_objects(), ctx.n_features());
    let up = |u: ObjectSet| ctx.up(u).unwrap();
    let down = |v: FeatureSet| ctx.down(v).unwrap();
    let us: Vec<ObjectSet> = (0..samples).map(|_| objs(rng, ctx)).collect();
    let vs: Vec<FeatureSet> = (0..samples).map(|_| feats(rng, ctx)).collect();

    for &u in &us {
        ensure!(
            to_bools(up(u).iter(), m) == naive.up(&to_bools(u.iter(), n)),
            "up({u:?}) disagrees with the oracle"
        );
        let c = ctx.closure_ext(u).unwrap();
        ensure!(u.is_subset(c), "closure_ext not extensive at {u:?}");
        ensure!(
            ctx.closure_ext(c).unwrap() == c,
            "closure_ext not idempotent at {u:?}"
        );
        ensure!(up(c) == up(u), "up(closure_ext(U)) != up(U) at {u:?}");
        for &u2 in &us {
            if u.is_subset(u2) {
                ensure!(
                    c.is_subset(ctx.closure_ext(u2).unwrap()),
                    "closure_ext not monotone"
                );
                ensure!(up(u2).is_subset(up(u)), "up not antitone at {u:?} ⊆ {u2:?}");
            }
        }
        for &v in &vs {
            ensure!(
                v.is_subset(up(u)) == u.is_subset(down(v)),
                "Galois connection fails at U={u:?} V={v:?}"
            );
        }
    }
    for &v in &vs {
        ensure!(
            to_bools(down(v).iter(), n) == naive.down(&to_bools(v.iter(), m)),
            "down({v:?}) disagrees with the oracle"
        );
        let c = ctx.closure_int(v).unwrap();
        ensure!(v.is_subset(c), "closure_int not extensive at {v:?}");
        ensure!(
            ctx.closure_int(c).unwrap() == c,
            "closure_int not idempotent at {v:?}"
        );
        ensure!(
            down(c) == down(v),
            "down(closure_int(V)) != down(V) at {v:?}"
        );
        for &v2 in &vs {
            if v.is_subset(v2) {
                ensure!(
                    c.is_subset(ctx.closure_int(v2).unwrap()),
                    "closure_int not monotone"
                );
                ensure!(
                    down(v2).is_subset(down(v)),
                    "down not antitone at {v:?} ⊆ {v2:?}"
                );
            }
        }
    }
    for z in 0..m {
        let zu = ctx.up_set_of_feature(z).unwrap();
        ensure!(
            ctx.is_stable_int(zu).unwrap(),
            "z↑ not stable for feature {z}"
        );
        ensure!(
            ctx.closure_int(FeatureSet::from_indices([z])).unwrap() == zu,
            "closure_int({{z}}) != z↑ for feature {z}"
        );
    }
    for b in 0..n {
        let bd = ctx.down_set_of_object(b).unwrap();
        ensure!(
            ctx.is_stable_ext(bd).unwrap(),
            "b↓ not stable for object {b}"
        );
        ensure!(
            ctx.closure_ext(ObjectSet::from_indices([b])).unwrap() == bd,
            "closure_ext({{b}}) != b↓ for object {b}"
        );
    }
    for b in 0..n {
        for a in (0..n).filter(|&a| ctx.obj_leq(b, a)) {
            for x in (0..m).filter(|&x| ctx.incident(a, x)) {
                for y in (0..m).filter(|&y| ctx.feat_leq(x, y)) {
                    ensure!(ctx.incident(b, y), "≤∘⊥∘≤ ⊄ ⊥ at ({b}, {a}, {x}, {y})");
                }
            }
        }
    }
    Ok(())
}

/// Breadth-first enumeration against the all-subsets oracle.
pub fn lattice_matches_oracle(ctx: &FormalContext) -> Check {
    let lat = enumerate_concepts(ctx).map_err(|e| e.to_string())?;
    let mut got: Vec<Vec<bool>> = lat
        .concepts()
        .iter()
        .map(|c| extent_bools(c, ctx))
        .collect();
    got.sort();
    let want = Naive::of(ctx).extents();
    ensure!(
        got == want,
        "{} concepts enumerated, oracle has {}",
        got.len(),
        want.len()
    );
    for c in lat.concepts() {
        ensure!(c.is_valid(ctx), "enumerated pair {c:?} is not a concept");
    }
    Ok(())
}

/// Perfection, lattice laws on sampled triples, and irreducibles versus
/// (r1)/(r2) survivors.
pub fn lattice_laws<R: Rng>(rng: &mut R, lat: &ConceptLattice, samples: usize) -> Check {
    let ctx = lat.context();
    let (jirr, mirr) = (lat.jirr(), lat.mirr());
    for u in 0..lat.len() {
        let j = jirr
            .iter()
            .filter(|&&j| lat.leq(j, u))
            .fold(lat.bottom(), |acc, &j| lat.join_idx(acc, j));
        ensure!(
            j == u,
            "concept {u} is not the join of the join-irreducibles below it"
        );
        let m = mirr
            .iter()
            .filter(|&&m| lat.leq(u, m))
            .fold(lat.top(), |acc, &m| lat.meet_idx(acc, m));
        ensure!(
            m == u,
            "concept {u} is not the meet of the meet-irreducibles above it"
        );
    }
    let len = lat.len();
    for _ in 0..samples {
        let (a, b, c) = (
            rng.gen_range(0..len),
            rng.gen_range(0..len),
            rng.gen_range(0..len),
        );
        ensure!(
            lat.meet_idx(a, b) == lat.meet_idx(b, a),
            "meet not commutative"
        );
        ensure!(
            lat.join_idx(a, b) == lat.join_idx(b, a),
            "join not commutative"
        );
        ensure!(
            lat.meet_idx(a, lat.meet_idx(b, c)) == lat.meet_idx(lat.meet_idx(a, b), c),
            "meet not associative"
        );
        ensure!(
            lat.join_idx(a, lat.join_idx(b, c)) == lat.join_idx(lat.join_idx(a, b), c),
            "join not associative"
        );
        ensure!(
            lat.meet_idx(a, lat.join_idx(a, b)) == a,
            "absorption fails (meet over join)"
        );
        ensure!(
            lat.join_idx(a, lat.meet_idx(a, b)) == a,
            "absorption fails (join over meet)"
        );
        ensure!(
            lat.leq(a, b) == (lat.meet_idx(a, b) == a),
            "order and meet disagree"
        );
    }

    let (r1, r2) = rscheck::check_reduced(ctx);
    let mut want_j: Vec<usize> = (0..ctx.n_objects())
        .filter(|&a| r1.iter().all(|v| v.object != a))
        .map(|a| {
            lat.index_of_extent(ctx.down_set_of_object(a).unwrap())
                .unwrap()
        })
        .collect();
    want_j.sort();
    want_j.dedup();
    let mut got_j = jirr.to_vec();
    got_j.sort();
    ensure!(
        got_j == want_j,
        "join-irreducibles {got_j:?} but (r1) survivors give {want_j:?}"
    );
    let mut want_m: Vec<usize> = (0..ctx.n_features())
        .filter(|&x| r2.iter().all(|v| v.feature != x))
        .map(|x| {
            let e = ctx.down(ctx.up_set_of_feature(x).unwrap()).unwrap();
            lat.index_of_extent(e).unwrap()
        })
        .collect();
    want_m.sort();
    want_m.dedup();
    let mut got_m = mirr.to_vec();
    got_m.sort();
    ensure!(
        got_m == want_m,
        "meet-irreducibles {got_m:?} but (r2) survivors give {want_m:?}"
    );
    Ok(())
}

/// Idempotence, RS-ness and lattice preservation of `prune`.
pub fn prune_laws(ctx: &FormalContext) -> Check {
    let lat = enumerate_concepts(ctx).map_err(|e| e.to_string())?;
    let pruned = match rscheck::prune(ctx) {
        Ok(p) => p,
        Err(rsframe::Error::Degenerate(_)) => {
            ensure!(
                lat.len() == 1,
                "prune degenerate on a lattice with {} elements",
                lat.len()
            );
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    ensure!(rscheck::is_rs(&pruned).is_rs(), "prune result is not RS");
    ensure!(
        rscheck::prune(&pruned).ok() == Some(pruned.clone()),
        "prune not idempotent"
    );
    let lat2 = enumerate_concepts(&pruned).map_err(|e| e.to_string())?;
    ensure!(
        find_order_isomorphism(&lat.to_abstract(), &lat2.to_abstract()).is_some(),
        "pruned lattice is not isomorphic to the original"
    );
    Ok(())
}

/// Normality, adjunction, the generator triad and order closure for every
/// agent, over all concepts.
pub fn modal_laws(frame: &RsFrame) -> Check {
    let ctx = frame.context();
    let lat = frame.lattice().map_err(|e| e.to_string())?;
    let naive = Naive::of(ctx);
    let cs = lat.concepts();
    let meet = |u: &Concept, v: &Concept| lat.meet(u, v).unwrap();
    let join = |u: &Concept, v: &Concept| lat.join(u, v).unwrap();
    for r in frame.relations() {
        let i = r.agent();
        let rm = matrix(r);
        let bx = |u: &Concept| frame.box_op(i, u).unwrap();
        let dm = |u: &Concept| frame.diamond_black(i, u).unwrap();
        ensure!(
            bx(&lat.top_concept()) == lat.top_concept(),
            "□⊤ != ⊤ for agent {i}"
        );
        ensure!(
            dm(&lat.bottom_concept()) == lat.bottom_concept(),
            "◆⊥ != ⊥ for agent {i}"
        );
        for u in cs {
            ensure!(
                bx(u).is_valid(ctx) && dm(u).is_valid(ctx),
                "operator leaves the lattice"
            );
            let intent = to_bools(u.intent.iter(), ctx.n_features());
            ensure!(
                extent_bools(&bx(u), ctx) == naive.box_extent(&rm, &intent),
                "□ of {u:?} disagrees with the oracle for agent {i}"
            );
            for v in cs {
                ensure!(
                    bx(&meet(u, v)) == meet(&bx(u), &bx(v)),
                    "□ not meet-preserving"
                );
                ensure!(
                    dm(&join(u, v)) == join(&dm(u), &dm(v)),
                    "◆ not join-preserving"
                );
                ensure!(
                    dm(u).leq(v) == u.leq(&bx(v)),
                    "adjunction fails at {u:?}, {v:?}"
                );
            }
        }
        for j in 0..ctx.n_objects() {
            let jc = frame.concept_of_object(j).unwrap();
            for m in 0..ctx.n_features() {
                let mc = frame.concept_of_feature(m).unwrap();
                let rel = r.relates(j, m);
                ensure!(
                    dm(&jc).leq(&mc) == rel,
                    "◆j ≤ m disagrees with jRm at ({j}, {m})"
                );
                ensure!(
                    jc.leq(&bx(&mc)) == rel,
                    "j ≤ □m disagrees with jRm at ({j}, {m})"
                );
            }
        }
        for m in 0..ctx.n_features() {
            let b = bx(&frame.concept_of_feature(m).unwrap());
            ensure!(b.extent == r.preimage(m), "extent(□m) != R⁻¹[m] at {m}");
            ensure!(
                b.intent == ctx.up(r.preimage(m)).unwrap(),
                "intent(□m) != R⁻¹[m]↑ at {m}"
            );
        }
        for b in 0..ctx.n_objects() {
            for a in (0..ctx.n_objects()).filter(|&a| ctx.obj_leq(b, a)) {
                for x in (0..ctx.n_features()).filter(|&x| r.relates(a, x)) {
                    for y in (0..ctx.n_features()).filter(|&y| ctx.feat_leq(x, y)) {
                        ensure!(r.relates(b, y), "≤∘R∘≤ ⊄ R at ({b}, {a}, {x}, {y})");
                    }
                }
            }
        }
    }
    Ok(())
}

/// Pointwise satisfaction and co-satisfaction against the extension.
pub fn satisfaction_matches_extension(model: &Model<'_>, f: &Formula) -> Check {
    let ctx = model.context();
    let ext = model.extension(f).map_err(|e| e.to_string())?;
    ensure!(ext.is_valid(ctx), "extension of {f} is not a concept");
    for a in 0..ctx.n_objects() {
        let s = model.satisfies(a, f).map_err(|e| e.to_string())?;
        ensure!(
            s == ext.extent.contains(a),
            "{} ⊩ {f}: {s}, extension disagrees",
            ctx.object_name(a)
        );
    }
    for x in 0..ctx.n_features() {
        let s = model.cosatisfies(x, f).map_err(|e| e.to_string())?;
        ensure!(
            s == ext.intent.contains(x),
            "{} ≻ {f}: {s}, extension disagrees",
            ctx.feature_name(x)
        );
    }
    Ok(())
}

/// The translation lemma for one inequality, with a sort check.
pub fn translation_agrees(model: &Model<'_>, ineq: &Inequality) -> Check {
    let fo = translate_inequality(ineq);
    check_sorts(&fo, &[]).map_err(|e| format!("{ineq}: {e}"))?;
    let got = fo_eval(model, &fo, &FoEnvironment::new()).map_err(|e| e.to_string())?;
    let want = model.check_inequality(ineq).map_err(|e| e.to_string())?;
    ensure!(got == want, "{ineq}: first-order {got}, algebraic {want}");
    Ok(())
}

/// `ST_a` and `ST_x` at every point.
pub fn pointwise_translation(model: &Model<'_>, f: &Formula) -> Check {
    let ctx = model.context();
    let (ta, tx) = (st_a(f, "a"), st_x(f, "x"));
    check_sorts(&ta, &[("a", Sort::Object)]).map_err(|e| e.to_string())?;
    check_sorts(&tx, &[("x", Sort::Feature)]).map_err(|e| e.to_string())?;
    for a in 0..ctx.n_objects() {
        let env = FoEnvironment::new().bind_object("a", a);
        let got = fo_eval(model, &ta, &env).map_err(|e| e.to_string())?;
        ensure!(
            got == model.satisfies(a, f).unwrap(),
            "ST_a({f}) wrong at object {a}"
        );
    }
    for x in 0..ctx.n_features() {
        let env = FoEnvironment::new().bind_feature("x", x);
        let got = fo_eval(model, &tx, &env).map_err(|e| e.to_string())?;
        ensure!(
            got == model.cosatisfies(x, f).unwrap(),
            "ST_x({f}) wrong at feature {x}"
        );
    }
    Ok(())
}

/// `C` by brute force: the meet of `s u` over every alternating string of
/// length at most `max_len`.
pub fn common_oracle(frame: &RsFrame, u: &Concept, max_len: usize) -> Concept {
    let lat = frame.lattice().unwrap();
    let agents: Vec<AgentId> = frame.agents().collect();
    let mut acc = lat.top_concept();
    let mut frontier: Vec<(Concept, AgentId)> = agents
        .iter()
        .map(|&i| (frame.box_op(i, u).unwrap(), i))
        .collect();
    for _ in 0..max_len {
        for (v, _) in &frontier {
            acc = lat.meet(&acc, v).unwrap();
        }
        frontier = frontier
            .iter()
            .flat_map(|(v, last)| {
                agents
                    .iter()
                    .filter(move |&j| j != last)
                    .map(move |&j| (frame.box_op(j, v).unwrap(), j))
            })
            .collect();
        frontier.sort_by_key(|(c, a)| (c.extent.bits(), *a));
        frontier.dedup();
    }
    acc
}

/// The common-operator laws on one social model, checked against the brute-force
/// oracle as well as the model's own report.
pub fn social_laws(frame: &RsFrame) -> Check {
    let model = SocialModel::new(frame.clone()).map_err(|e| e.to_string())?;
    let ctx = frame.context();
    let lat = frame.lattice().unwrap();
    let c = |u: &Concept| model.common(u).map_err(|e| e.to_string());
    let bound = 2 * lat.len() + 2;
    for u in lat.concepts() {
        let cu = c(u)?;
        ensure!(
            cu == common_oracle(frame, u, bound),
            "C({u:?}) disagrees with the string oracle"
        );
        ensure!(cu.leq(u), "C(u) ≰ u at {u:?}");
        ensure!(cu.leq(&c(&cu)?), "C(u) ≰ C(C(u)) at {u:?}");
        for i in frame.agents() {
            let b = frame.box_op(i, u).unwrap();
            ensure!(
                frame.box_op(i, &b).unwrap() == b,
                "□{i}□{i}u != □{i}u at {u:?}"
            );
            ensure!(cu.leq(&b), "C(u) ≰ □{i}u");
        }
        for v in lat.concepts() {
            let m = lat.meet(u, v).unwrap();
            ensure!(
                c(&m)? == lat.meet(&cu, &c(v)?).unwrap(),
                "C not meet-preserving"
            );
        }
        let trace = model.common_trace(u).map_err(|e| e.to_string())?;
        ensure!(trace.last() == Some(&cu), "trace does not end at C(u)");
        ensure!(trace.len() <= 2 * lat.len(), "trace longer than 2·|L|");
        ensure!(
            trace.windows(2).all(|w| w[1].leq(&w[0])),
            "partial meets not decreasing"
        );
    }
    ensure!(c(&lat.top_concept())? == lat.top_concept(), "C(⊤) != ⊤");

    let rc = model.common_relation().map_err(|e| e.to_string())?;
    for a in 0..ctx.n_objects() {
        for x in 0..ctx.n_features() {
            let g = frame.concept_of_feature(x).unwrap();
            let want = common_oracle(frame, &g, bound).extent.contains(a);
            ensure!(
                rc.relates(a, x) == want,
                "R_C at ({a}, {x}) disagrees with the oracle"
            );
            ensure!(
                !rc.relates(a, x) || ctx.incident(a, x),
                "R_C ⊄ ⊥ at ({a}, {x})"
            );
            for r in frame.relations() {
                ensure!(!rc.relates(a, x) || r.relates(a, x), "R_C ⊄ R{}", r.agent());
            }
        }
    }
    ensure!(
        check_compatible(ctx, &rc).unwrap().compatible,
        "R_C not compatible"
    );
    let with_rc = RsFrame::new(ctx.clone(), vec![rc.clone()]).map_err(|e| e.to_string())?;
    for x in 0..ctx.n_features() {
        let g = frame.concept_of_feature(x).unwrap();
        ensure!(
            with_rc.box_op(rc.agent(), &g).unwrap() == c(&g)?,
            "□_(R_C) differs from C on feature {x}"
        );
    }
    let report = model.check_common_axioms().map_err(|e| e.to_string())?;
    ensure!(
        report.all_pass(),
        "common-operator report fails: {report:?}"
    );
    Ok(())
}
