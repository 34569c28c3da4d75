use cech::Atlas;
use exactlin::PrimeField;
use frobsplit::{validate_lift, FrobLift, SplitError};
use logdr::FormSum;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;
use toricgeom::{validate, DivisorSet, Fan, GeomError, ToricMorphism, Twist, ValidityReport};

/// Input document. Every field is an integer or a list of integers except
/// the check names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub p: u64,
    pub fan: FanSpec,
    #[serde(default)]
    pub divisor_rays: Vec<usize>,
    /// Coefficients `a_ρ` of `L = O(Σ a_ρ D_ρ)`, one per ray.
    #[serde(default)]
    pub twist: Option<Vec<i64>>,
    #[serde(default)]
    pub lift: Option<Vec<LiftTerm>>,
    #[serde(default)]
    pub morphism: Option<MorphismSpec>,
    #[serde(default)]
    pub weight_radius: Option<i64>,
    #[serde(default)]
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// One monomial `coeff · x^exponent` of the perturbation of chart
/// coordinate `ray` on chart `chart`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftTerm {
    pub chart: usize,
    pub ray: usize,
    pub coeff: i64,
    pub exponent: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    /// `target rank × source rank`.
    pub lattice_map: Vec<Vec<i64>>,
    pub target: FanSpec,
    #[serde(default)]
    pub target_divisor_rays: Vec<usize>,
    #[serde(default)]
    pub target_lift: Option<Vec<LiftTerm>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Shell,
    Decomposition,
    LiftIndependence,
    SplittingLaws,
    Functoriality,
    Vanishing,
    Residue,
    Truncation,
    Mflc,
    Strictness,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Shell,
        Check::Decomposition,
        Check::LiftIndependence,
        Check::SplittingLaws,
        Check::Functoriality,
        Check::Vanishing,
        Check::Residue,
        Check::Truncation,
        Check::Mflc,
        Check::Strictness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Shell => "shell",
            Check::Decomposition => "decomposition",
            Check::LiftIndependence => "lift_independence",
            Check::SplittingLaws => "splitting_laws",
            Check::Functoriality => "functoriality",
            Check::Vanishing => "vanishing",
            Check::Residue => "residue",
            Check::Truncation => "truncation",
            Check::Mflc => "mflc",
            Check::Strictness => "strictness",
        }
    }
}

impl FromStr for Check {
    type Err = SpecParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| SpecParseError::UnknownCheck(s.into()))
    }
}

/// Expands `"all"` and removes duplicates; order follows [`Check::ALL`].
/// An empty list selects every check.
pub fn parse_checks(names: &[String]) -> Result<Vec<Check>, SpecParseError> {
    if names.is_empty() {
        return Ok(Check::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(n.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Error)]
pub enum SpecParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("p = {0} is not a prime")]
    NotPrime(u64),
    #[error("{context}: {source}")]
    Geometry { context: &'static str, source: GeomError },
    #[error("{context}: {source}")]
    Lift { context: &'static str, source: SplitError },
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("unknown gallery id {0:?}")]
    UnknownGalleryId(String),
    #[error("weight radius must be at least 1, got {0}")]
    BadRadius(i64),
}

fn geom(context: &'static str) -> impl Fn(GeomError) -> SpecParseError {
    move |source| SpecParseError::Geometry { context, source }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub map: ToricMorphism,
    pub target_divisor: DivisorSet,
    pub target_lift: FrobLift,
}

/// A validated [`VarietySpec`].
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: VarietySpec,
    pub field: PrimeField,
    /// Untwisted atlas; the twist lives in [`Problem::twist`].
    pub atlas: Atlas,
    pub twist: Option<Twist>,
    pub lift: FrobLift,
    pub morphism: Option<Morphism>,
    pub radius: i64,
    pub checks: Vec<Check>,
    pub validity: ValidityReport,
}

impl Problem {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn fan(&self) -> &Fan {
        &self.atlas.fan
    }

    pub fn rank(&self) -> usize {
        self.atlas.rank()
    }

    pub fn dim_below_p(&self) -> bool {
        self.validity.dim_below_p
    }

    pub fn twisted_atlas(&self) -> Option<Atlas> {
        self.twist.as_ref().map(|t| Atlas::new(self.field, self.atlas.fan.clone(), self.atlas.divisor.clone(), Some(t.clone())))
    }
}

fn build_fan(spec: &FanSpec, context: &'static str, p: u64) -> Result<(Fan, ValidityReport), SpecParseError> {
    let rank = spec.rays.first().map_or(0, Vec::len);
    let fan = Fan::new(rank, spec.rays.clone(), spec.max_cones.clone()).map_err(geom(context))?;
    let report = validate(&fan, p as u32).map_err(geom(context))?;
    Ok((fan, report))
}

fn build_lift(f: PrimeField, fan: &Fan, terms: Option<&[LiftTerm]>, context: &'static str) -> Result<FrobLift, SpecParseError> {
    let mut polys: BTreeMap<(usize, usize), FormSum> = BTreeMap::new();
    for t in terms.unwrap_or_default() {
        let term = FormSum::monomial(f, f.reduce(t.coeff), t.exponent.clone(), 0);
        let e = polys.entry((t.chart, t.ray)).or_default();
        *e = e.add(f, &term);
    }
    let mut lift = FrobLift::canonical(fan);
    for ((chart, ray), poly) in polys {
        if chart >= fan.max_cones().len() {
            return Err(SpecParseError::Lift {
                context,
                source: SplitError::ChartCount { got: chart + 1, want: fan.max_cones().len() },
            });
        }
        lift.set(chart, ray, poly);
    }
    validate_lift(fan, &lift).map_err(|source| SpecParseError::Lift { context, source })?;
    Ok(lift)
}

impl VarietySpec {
    pub fn from_json(text: &str) -> Result<Self, SpecParseError> {
        serde_json::from_str(text).map_err(|e| SpecParseError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Validates every part of the input. `radius` and `checks` override the
    /// document when given.
    pub fn validate(&self, radius: Option<i64>, checks: Option<&[String]>) -> Result<Problem, SpecParseError> {
        let field = PrimeField::new(self.p).map_err(|_| SpecParseError::NotPrime(self.p))?;
        let (fan, validity) = build_fan(&self.fan, "fan", self.p)?;
        let divisor = DivisorSet::new(&fan, &self.divisor_rays).map_err(geom("divisor_rays"))?;
        let twist = match &self.twist {
            Some(c) => Some(Twist::new(&fan, c.clone()).map_err(geom("twist"))?),
            None => None,
        };
        let lift = build_lift(field, &fan, self.lift.as_deref(), "lift")?;
        let morphism = match &self.morphism {
            None => None,
            Some(m) => {
                let (target, _) = build_fan(&m.target, "morphism.target", self.p)?;
                let target_divisor = DivisorSet::new(&target, &m.target_divisor_rays).map_err(geom("morphism.target_divisor_rays"))?;
                let target_lift = build_lift(field, &target, m.target_lift.as_deref(), "morphism.target_lift")?;
                let map = ToricMorphism::new(m.lattice_map.clone(), fan.clone(), target).map_err(geom("morphism"))?;
                let chi = map.chart_assignment().map_err(geom("morphism"))?;
                map.check_divisors(&divisor, &target_divisor, &chi).map_err(geom("morphism"))?;
                Some(Morphism { map, target_divisor, target_lift })
            }
        };
        let radius = radius.or(self.weight_radius).unwrap_or_else(|| toricgeom::default_radius(&fan, twist.as_ref()));
        if radius < 1 {
            return Err(SpecParseError::BadRadius(radius));
        }
        let checks = parse_checks(checks.unwrap_or(&self.checks))?;
        let atlas = Atlas::new(field, fan, divisor, None);
        Ok(Problem { spec: self.clone(), field, atlas, twist, lift, morphism, radius, checks, validity })
    }
}
