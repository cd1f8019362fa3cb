//! Frame validity of inequalities and the three built-in correspondents.

use std::fmt;
use std::str::FromStr;

use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::Concept;
use crate::modal::{check_axiom_conditions, AgentId, AgentRelation, RsFrame};

use super::formula::{Formula, Inequality};
use super::model::{Model, Valuation};

pub const DEFAULT_VALUATION_LIMIT: usize = 1_000_000;

/// Range of each proposition during validity checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidityMode {
    /// Every concept of the lattice.
    AllValuations,
    /// Concepts `m↑` generated by single features.
    Conominal,
    /// Concepts `j↓` generated by single objects.
    Nominal,
}

impl FromStr for ValidityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" | "all_valuations" => Ok(ValidityMode::AllValuations),
            "conominal" => Ok(ValidityMode::Conominal),
            "nominal" => Ok(ValidityMode::Nominal),
            _ => Err(format!(
                "unknown validity mode `{s}` (all, conominal, nominal)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    /// First failing valuation in canonical order.
    pub counterexample: Option<Valuation>,
    pub valuations_checked: usize,
}

fn candidates(frame: &RsFrame, mode: ValidityMode) -> Result<Vec<Concept>> {
    let ctx = frame.context();
    Ok(match mode {
        ValidityMode::AllValuations => frame.lattice()?.concepts().to_vec(),
        ValidityMode::Conominal => (0..ctx.n_features())
            .map(|m| frame.concept_of_feature(m))
            .collect::<Result<_>>()?,
        ValidityMode::Nominal => (0..ctx.n_objects())
            .map(|j| frame.concept_of_object(j))
            .collect::<Result<_>>()?,
    })
}

pub fn frame_valid(frame: &RsFrame, ineq: &Inequality, mode: ValidityMode) -> Result<Validity> {
    frame_valid_with_limit(frame, ineq, mode, DEFAULT_VALUATION_LIMIT)
}

/// Checks `ineq` under every valuation of its propositions drawn from the
/// mode's candidate concepts. Props vary in name order, the first one
/// slowest; candidates follow canonical lattice order.
pub fn frame_valid_with_limit(
    frame: &RsFrame,
    ineq: &Inequality,
    mode: ValidityMode,
    limit: usize,
) -> Result<Validity> {
    let props: Vec<String> = ineq.props().into_iter().collect();
    let cands = candidates(frame, mode)?;
    let total = u32::try_from(props.len())
        .ok()
        .and_then(|k| cands.len().checked_pow(k))
        .filter(|&t| t <= limit)
        .ok_or_else(|| {
            Error::SizeLimit(format!(
                "{} candidates ^ {} props exceeds {limit} valuations",
                cands.len(),
                props.len()
            ))
        })?;

    let mut digits = vec![0usize; props.len()];
    let mut checked = 0;
    for _ in 0..total {
        let mut v = Valuation::new();
        for (p, &d) in props.iter().zip(&digits) {
            v.insert(p, cands[d]);
        }
        let model = Model::new(frame, v)?;
        checked += 1;
        if !model.check_inequality(ineq)? {
            return Ok(Validity {
                valid: false,
                counterexample: Some(model.valuation().clone()),
                valuations_checked: checked,
            });
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < cands.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(Validity {
        valid: true,
        counterexample: None,
        valuations_checked: checked,
    })
}

/// The inequalities with a built-in first-order correspondent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `□0 ≤ 0`, seriality `∀a ∃y ¬(aRy)`.
    BoxZero,
    /// `□p ≤ p`, factivity `∀a ∀m (aRm → a ⊥ m)`.
    Factivity,
    /// `□p ≤ □□p`, `∀a ∀m (aRm → R⁻¹[m]↑ ⊆ R[a])`.
    PosIntro,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::BoxZero, Axiom::Factivity, Axiom::PosIntro];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::BoxZero => "box_zero",
            Axiom::Factivity => "factivity",
            Axiom::PosIntro => "pos_intro",
        }
    }

    pub fn inequality(self, agent: AgentId) -> Inequality {
        let bx = |f| Formula::Box(agent, Box::new(f));
        let p = Formula::prop("p");
        match self {
            Axiom::BoxZero => Inequality::new(bx(Formula::Zero), Formula::Zero),
            Axiom::Factivity => Inequality::new(bx(p.clone()), p),
            Axiom::PosIntro => Inequality::new(bx(p.clone()), bx(bx(p))),
        }
    }

    /// The correspondent, in ASCII.
    pub fn correspondent(self) -> &'static str {
        match self {
            Axiom::BoxZero => "all a. ex y. ~(a R y)",
            Axiom::Factivity => "all a. all m. (a R m -> a I m)",
            Axiom::PosIntro => "all a. all m. (a R m -> up(R^-1[m]) <= R[a])",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axiom `{s}` (box_zero, factivity, pos_intro)"))
    }
}

/// Evaluates the first-order correspondent directly on the matrices.
pub fn correspondent_holds(ctx: &FormalContext, r: &AgentRelation, axiom: Axiom) -> Result<bool> {
    let flags = check_axiom_conditions(ctx, r)?;
    Ok(match axiom {
        Axiom::BoxZero => flags.serial,
        Axiom::Factivity => flags.factive,
        Axiom::PosIntro => flags.pos_introspective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::parser::parse_inequality;

    const A1: AgentId = AgentId(1);

    #[test]
    fn validity_examples() {
        let ctx = fixtures::diag2();
        let f = RsFrame::new(ctx.clone(), vec![AgentRelation::incidence(A1, &ctx)]).unwrap();
        let fact = parse_inequality("[1]p <= p").unwrap();
        let v = frame_valid(&f, &fact, ValidityMode::AllValuations).unwrap();
        assert!(v.valid);
        assert_eq!(v.valuations_checked, 4);

        let r = AgentRelation::from_pairs(A1, &ctx, &[("a1", "x2")]).unwrap();
        let g = RsFrame::new(ctx.clone(), vec![r]).unwrap();
        let v = frame_valid(&g, &fact, ValidityMode::AllValuations).unwrap();
        assert!(!v.valid);
        let witness = g.concept_of_feature(1).unwrap();
        assert_eq!(v.counterexample.unwrap().get("p"), Some(&witness));

        let trivial = parse_inequality("p <= p").unwrap();
        for mode in [
            ValidityMode::AllValuations,
            ValidityMode::Conominal,
            ValidityMode::Nominal,
        ] {
            assert!(frame_valid(&g, &trivial, mode).unwrap().valid);
        }
    }

    #[test]
    fn size_limit() {
        let ctx = fixtures::diag2();
        let f = RsFrame::new(ctx, vec![]).unwrap();
        let ineq = parse_inequality("p & q & r <= p").unwrap();
        assert!(matches!(
            frame_valid_with_limit(&f, &ineq, ValidityMode::AllValuations, 10),
            Err(Error::SizeLimit(_))
        ));
        assert!(
            frame_valid_with_limit(&f, &ineq, ValidityMode::AllValuations, 64)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn correspondent_examples() {
        let ctx = fixtures::diag2();
        let inc = AgentRelation::incidence(A1, &ctx);
        assert!(correspondent_holds(&ctx, &inc, Axiom::Factivity).unwrap());
        assert!(correspondent_holds(&ctx, &inc, Axiom::BoxZero).unwrap());
        let full = AgentRelation::from_pairs(A1, &ctx, &[("a1", "x1"), ("a1", "x2")]).unwrap();
        assert!(!correspondent_holds(&ctx, &full, Axiom::BoxZero).unwrap());
    }

    #[test]
    fn axiom_names_and_inequalities() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!(
            Axiom::PosIntro.inequality(A1).to_string(),
            "[1]p <= [1][1]p"
        );
        assert_eq!(
            Axiom::BoxZero.inequality(AgentId(2)).to_string(),
            "[2]0 <= 0"
        );
        assert!("nope".parse::<Axiom>().is_err());
    }
}
