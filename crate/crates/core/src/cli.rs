//! The `rsframe` command line.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 usage,
//! parse or input error, 3 precondition violated. Errors are reported as a
//! single line `error[<kind>]: <message>` on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::context::{FeatureSet, FormalContext};
use crate::error::{Error, ParseError, Result};
use crate::io;
use crate::lattice::{enumerate_concepts, Concept};
use crate::logic::{
    correspondent_holds, frame_valid, parse_formula, parse_inequality, Axiom, Model, ValidityMode,
    Valuation,
};
use crate::modal::{
    check_axiom_conditions, check_compatible, AgentRelation, CompatibilityWitness, RsFrame,
};
use crate::rscheck;
use crate::social::SocialModel;
use crate::translation::{expand_abbreviations, translate_inequality};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "rsframe",
    version,
    about = "Concept lattices and modal logic over RS-frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the concepts in canonical order, or print a DOT Hasse diagram.
    Lattice {
        ctx: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Check separation and reduction; exit 0 iff the context is RS.
    CheckRs { ctx: PathBuf },
    /// Clarify and reduce a context to an RS-polarity.
    Prune {
        ctx: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Report compatibility, factivity, seriality and positive introspection.
    CheckRel { ctx: PathBuf, rel: PathBuf },
    /// Evaluate a formula: its extension, or a verdict at one point.
    Eval {
        ctx: PathBuf,
        rels: Vec<PathBuf>,
        /// `p=obj:a1,a2` (closure of objects) or `p=feat:x1` (closure of features).
        #[arg(short = 'v', long = "val")]
        valuations: Vec<String>,
        #[arg(short, long)]
        formula: String,
        #[arg(long, conflicts_with = "co")]
        at: Option<String>,
        #[arg(long)]
        co: Option<String>,
    },
    /// Frame validity of an inequality.
    Valid {
        ctx: PathBuf,
        rels: Vec<PathBuf>,
        #[arg(short, long)]
        inequality: String,
        /// all, conominal or nominal.
        #[arg(long, default_value = "all", value_parser = parse_mode)]
        mode: ValidityMode,
    },
    /// Standard translation of an inequality.
    Translate {
        #[arg(short, long)]
        inequality: String,
        #[arg(long)]
        ascii: bool,
        /// Expand the order abbreviations.
        #[arg(long)]
        expand: bool,
    },
    /// Compare a built-in correspondent with frame validity.
    Correspond {
        ctx: PathBuf,
        rel: PathBuf,
        /// box_zero, factivity or pos_intro.
        #[arg(long, value_parser = parse_axiom)]
        axiom: Axiom,
    },
    /// The common operator on feature concepts, R_C and its checks.
    Common {
        ctx: PathBuf,
        #[arg(required = true)]
        rels: Vec<PathBuf>,
        #[arg(long, conflicts_with = "all")]
        feature: Option<String>,
        #[arg(long)]
        all: bool,
        /// Meet over all strings, without the axiom precondition.
        #[arg(long)]
        force: bool,
    },
}

fn parse_mode(s: &str) -> std::result::Result<ValidityMode, String> {
    s.parse()
}

fn parse_axiom(s: &str) -> std::result::Result<Axiom, String> {
    s.parse()
}

/// A context and its agent relations, as loaded from files.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub context_path: PathBuf,
    pub relation_paths: Vec<PathBuf>,
    pub context: FormalContext,
    pub relations: Vec<AgentRelation>,
}

impl Workspace {
    pub fn load(context_path: &Path, relation_paths: &[PathBuf]) -> Result<Self> {
        let context = io::load_cxt(context_path)?;
        let relations = relation_paths
            .iter()
            .map(|p| io::load_rel(p, &context))
            .collect::<Result<_>>()?;
        Ok(Workspace {
            context_path: context_path.to_path_buf(),
            relation_paths: relation_paths.to_vec(),
            context,
            relations,
        })
    }

    pub fn frame(&self) -> Result<RsFrame> {
        RsFrame::new(self.context.clone(), self.relations.clone())
    }

    /// One line per relation with its compatibility and axiom flags.
    pub fn relation_summaries(&self) -> Result<Vec<String>> {
        self.relations
            .iter()
            .map(|r| {
                let c = check_compatible(&self.context, r)?;
                let f = check_axiom_conditions(&self.context, r)?;
                Ok(format!(
                    "agent {}: compatible={} factive={} serial={} pos_introspective={}",
                    r.agent(),
                    yes(c.compatible),
                    yes(f.factive),
                    yes(f.serial),
                    yes(f.pos_introspective)
                ))
            })
            .collect()
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Parse(_) => ("parse", EXIT_USAGE),
        Error::Format(_) => ("format", EXIT_USAGE),
        Error::Io(_) => ("io", EXIT_USAGE),
        Error::UnknownName { .. }
        | Error::UnboundProp(_)
        | Error::UnknownAgent(_)
        | Error::UnboundVariable(_)
        | Error::SortMismatch { .. }
        | Error::InvalidBoxString(_)
        | Error::OutOfBounds { .. }
        | Error::InvalidContext(_)
        | Error::ForeignConcept(_) => ("input", EXIT_USAGE),
        Error::Precondition(_) => ("precondition", EXIT_PRECONDITION),
        Error::Degenerate(_) => ("degenerate", EXIT_PRECONDITION),
        Error::SizeLimit(_) => ("size-limit", EXIT_PRECONDITION),
        Error::Invariant(_) => ("invariant", EXIT_PRECONDITION),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "error[usage]: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = error_kind(&e);
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{kind}]: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut Vec<u8>) -> Result<i32> {
    let mut w = |s: String| {
        out.extend_from_slice(s.as_bytes());
        out.push(b'\n');
    };
    match cmd {
        Command::Lattice { ctx, dot } => {
            let ctx = io::load_cxt(&ctx)?;
            let lat = enumerate_concepts(&ctx)?;
            if dot {
                let d = lat.to_dot();
                w(d.trim_end().to_string());
            } else {
                for (i, c) in lat.concepts().iter().enumerate() {
                    w(format!("c{i}: {}", c.display(&ctx)));
                }
            }
            Ok(EXIT_OK)
        }
        Command::CheckRs { ctx } => {
            let ctx = io::load_cxt(&ctx)?;
            let report = rscheck::is_rs(&ctx);
            for line in report.lines(&ctx) {
                w(line);
            }
            w(format!("RS-polarity: {}", yes(report.is_rs())));
            Ok(if report.is_rs() { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Prune { ctx, output } => {
            let ctx = io::load_cxt(&ctx)?;
            let (pruned, log) = rscheck::prune_with_log(&ctx)?;
            for (kept, dropped) in &log.merged_objects {
                w(format!("merged object {dropped} into {kept}"));
            }
            for (kept, dropped) in &log.merged_features {
                w(format!("merged feature {dropped} into {kept}"));
            }
            for a in &log.reduced_objects {
                w(format!("removed reducible object {a}"));
            }
            for x in &log.reduced_features {
                w(format!("removed reducible feature {x}"));
            }
            io::save_cxt(&output, &pruned)?;
            w(format!(
                "wrote {}x{} context to {}",
                pruned.n_objects(),
                pruned.n_features(),
                output.display()
            ));
            Ok(EXIT_OK)
        }
        Command::CheckRel { ctx, rel } => {
            let ctx = io::load_cxt(&ctx)?;
            let r = io::load_rel(&rel, &ctx)?;
            let c = check_compatible(&ctx, &r)?;
            let f = check_axiom_conditions(&ctx, &r)?;
            let on = |a: usize| ctx.object_name(a);
            let fname = |x: usize| ctx.feature_name(x);
            w(format!("agent {}", r.agent()));
            w(match c.witness {
                None => "compatible: yes".into(),
                Some(CompatibilityWitness::Column(x)) => {
                    format!("compatible: no (preimage of {} is not stable)", fname(x))
                }
                Some(CompatibilityWitness::Row(a)) => {
                    format!("compatible: no (image of {} is not stable)", on(a))
                }
            });
            w(match f.factivity_witness {
                None => "factive: yes".into(),
                Some((a, x)) => format!(
                    "factive: no ({} R {} but not {} I {})",
                    on(a),
                    fname(x),
                    on(a),
                    fname(x)
                ),
            });
            w(match f.seriality_witness {
                None => "serial: yes".into(),
                Some(a) => format!("serial: no ({} relates to every feature)", on(a)),
            });
            w(match f.introspection_witness {
                None => "positively introspective: yes".into(),
                Some((a, m, y)) => format!(
                    "positively introspective: no ({} R {}, {} in up(R^-1[{}]) but not in R[{}])",
                    on(a),
                    fname(m),
                    fname(y),
                    fname(m),
                    on(a)
                ),
            });
            Ok(if c.compatible { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Eval {
            ctx,
            rels,
            valuations,
            formula,
            at,
            co,
        } => {
            let ws = Workspace::load(&ctx, &rels)?;
            for s in ws.relation_summaries()? {
                w(format!("# {s}"));
            }
            let frame = ws.frame()?;
            let phi = parse_formula(&formula)?;
            let mut v = Valuation::new();
            for spec in &valuations {
                let (p, c) = parse_valuation(frame.context(), spec)?;
                v.insert(&p, c);
            }
            let model = Model::new(&frame, v)?;
            let ctx = frame.context();
            if let Some(a) = at {
                let verdict = model.satisfies(ctx.object_index(&a)?, &phi)?;
                w(format!("{a} |= {phi}: {verdict}"));
                Ok(if verdict { EXIT_OK } else { EXIT_FALSE })
            } else if let Some(x) = co {
                let verdict = model.cosatisfies(ctx.feature_index(&x)?, &phi)?;
                w(format!("{x} co-satisfies {phi}: {verdict}"));
                Ok(if verdict { EXIT_OK } else { EXIT_FALSE })
            } else {
                let c = model.extension(&phi)?;
                w(format!("formula: {phi}"));
                w(format!(
                    "extent: {{{}}}",
                    ctx.object_names_of(c.extent).join(", ")
                ));
                w(format!(
                    "intent: {{{}}}",
                    ctx.feature_names_of(c.intent).join(", ")
                ));
                Ok(EXIT_OK)
            }
        }
        Command::Valid {
            ctx,
            rels,
            inequality,
            mode,
        } => {
            let ws = Workspace::load(&ctx, &rels)?;
            for s in ws.relation_summaries()? {
                w(format!("# {s}"));
            }
            let frame = ws.frame()?;
            let ineq = parse_inequality(&inequality)?;
            let v = frame_valid(&frame, &ineq, mode)?;
            w(format!("inequality: {ineq}"));
            w(format!("valid: {}", yes(v.valid)));
            if let Some(cx) = &v.counterexample {
                w(format!("counterexample: {}", cx.display(frame.context())));
            }
            w(format!("valuations checked: {}", v.valuations_checked));
            Ok(if v.valid { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Translate {
            inequality,
            ascii,
            expand,
        } => {
            let ineq = parse_inequality(&inequality)?;
            let mut t = translate_inequality(&ineq);
            if expand {
                t = expand_abbreviations(&t);
            }
            w(if ascii { t.to_ascii() } else { t.to_unicode() });
            Ok(EXIT_OK)
        }
        Command::Correspond { ctx, rel, axiom } => {
            let ws = Workspace::load(&ctx, std::slice::from_ref(&rel))?;
            for s in ws.relation_summaries()? {
                w(format!("# {s}"));
            }
            let frame = ws.frame()?;
            let r = &ws.relations[0];
            let ineq = axiom.inequality(r.agent());
            let fo = correspondent_holds(frame.context(), r, axiom)?;
            let valid = frame_valid(&frame, &ineq, ValidityMode::AllValuations)?;
            w(format!("axiom: {axiom} ({ineq})"));
            w(format!("correspondent: {}", axiom.correspondent()));
            w(format!("first-order verdict: {fo}"));
            w(format!("frame validity: {}", valid.valid));
            let agree = fo == valid.valid;
            w(if agree {
                "AGREE".into()
            } else {
                "DISAGREE".into()
            });
            Ok(if agree { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Common {
            ctx,
            rels,
            feature,
            all: _,
            force,
        } => {
            let ws = Workspace::load(&ctx, &rels)?;
            for s in ws.relation_summaries()? {
                w(format!("# {s}"));
            }
            let m = SocialModel::new(ws.frame()?)?;
            let ctx = m.frame().context();
            let features: Vec<usize> = match feature {
                Some(x) => vec![ctx.feature_index(&x)?],
                None => (0..ctx.n_features()).collect(),
            };
            if force {
                for &x in &features {
                    let c = m.common_unrestricted(&m.frame().concept_of_feature(x)?)?;
                    w(format!("C*({}) = {}", ctx.feature_name(x), c.display(ctx)));
                }
                return Ok(EXIT_OK);
            }
            m.require_axioms()?;
            for &x in &features {
                let c = m.common(&m.frame().concept_of_feature(x)?)?;
                w(format!("C({}) = {}", ctx.feature_name(x), c.display(ctx)));
            }
            let rc = m.common_relation()?;
            w("R_C:".into());
            for line in io::write_rel(&rc).lines().skip(1) {
                w(line.to_string());
            }
            let report = m.check_common_axioms()?;
            w(format!("C(u) <= u: {}", yes(report.deflation.is_none())));
            w(format!(
                "C(u) <= C(C(u)): {}",
                yes(report.transitivity.is_none())
            ));
            w(format!("C normal: {}", yes(report.normality.is_none())));
            w(format!(
                "boxes idempotent: {}",
                yes(report.idempotence.is_none())
            ));
            w(format!(
                "R_C factive: {}",
                yes(report.rc_factivity.is_none())
            ));
            w(format!("R_C compatible: {}", yes(report.rc_compatible)));
            w(format!(
                "R_C positively introspective: {}",
                yes(report.rc_introspection.is_none())
            ));
            Ok(if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
    }
}

/// `p=obj:a1,a2` or `p=feat:x1`; an empty list is allowed.
fn parse_valuation(ctx: &FormalContext, spec: &str) -> Result<(String, Concept)> {
    let bad = || {
        Error::Parse(ParseError {
            line: 1,
            column: 1,
            message: format!("valuation `{spec}` is not `p=obj:a1,a2` or `p=feat:x1,x2`"),
        })
    };
    let (p, rhs) = spec.split_once('=').ok_or_else(bad)?;
    let p = p.trim();
    if parse_formula(p).ok() != Some(crate::logic::Formula::Prop(p.to_string())) {
        return Err(bad());
    }
    let (kind, list) = rhs.split_once(':').ok_or_else(bad)?;
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let c = match kind.trim() {
        "obj" => Concept::from_extent(ctx, ctx.objects_named(&names)?)?,
        "feat" => {
            let v: FeatureSet = ctx.features_named(&names)?;
            Concept::from_intent(ctx, v)?
        }
        _ => return Err(bad()),
    };
    Ok((p.to_string(), c))
}
