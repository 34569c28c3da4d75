use crate::spec::{FanSpec, LiftTerm, MorphismSpec, SpecParseError, VarietySpec};

fn fan_of(rays: &[&[i64]], cones: &[&[usize]]) -> FanSpec {
    FanSpec {
        rays: rays.iter().map(|r| r.to_vec()).collect(),
        max_cones: cones.iter().map(|c| c.to_vec()).collect(),
    }
}

fn line() -> FanSpec {
    fan_of(&[&[1], &[-1]], &[&[0], &[1]])
}

fn plane() -> FanSpec {
    fan_of(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

fn square() -> FanSpec {
    fan_of(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]])
}

fn hirzebruch1() -> FanSpec {
    fan_of(&[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

fn spec(p: u64, fan: FanSpec, divisor_rays: &[usize]) -> VarietySpec {
    VarietySpec {
        p,
        fan,
        divisor_rays: divisor_rays.to_vec(),
        twist: None,
        lift: None,
        morphism: None,
        weight_radius: Some(2),
        checks: vec!["all".into()],
    }
}

fn term(chart: usize, ray: usize, coeff: i64, exponent: &[i64]) -> LiftTerm {
    LiftTerm { chart, ray, coeff, exponent: exponent.to_vec() }
}

/// Shipped specs, in a fixed order.
pub fn gallery() -> Vec<(&'static str, VarietySpec)> {
    let mut out = vec![
        ("gm_p5", spec(5, line(), &[0, 1])),
        ("p1_p5_noD", spec(5, line(), &[])),
        ("p2_p5_d0", spec(5, plane(), &[])),
        ("p2_p5_d1", spec(5, plane(), &[0])),
        ("p2_p5_d2", spec(5, plane(), &[0, 1])),
        ("p2_p5_d3", spec(5, plane(), &[0, 1, 2])),
        ("p1xp1_p5_empty", spec(5, square(), &[])),
        ("p1xp1_p5_fiber", spec(5, square(), &[0])),
        ("p1xp1_p5_full", spec(5, square(), &[0, 1, 2, 3])),
        ("hirzebruch1_p5", spec(5, hirzebruch1(), &[0, 1, 2, 3])),
        ("p1xp1_p2", spec(2, square(), &[0, 1, 2, 3])),
    ];
    let mut vanishing = spec(5, plane(), &[0, 1]);
    vanishing.twist = Some(vec![0, 0, 1]);
    out.push(("p2_vanishing_p5", vanishing));
    let mut proj = spec(5, square(), &[0]);
    proj.lift = Some(vec![term(0, 0, 1, &[1, 0]), term(3, 3, 2, &[0, -1])]);
    proj.morphism = Some(MorphismSpec {
        lattice_map: vec![vec![1, 0]],
        target: line(),
        target_divisor_rays: vec![0],
        target_lift: Some(vec![term(1, 1, 3, &[-1])]),
    });
    out.push(("proj_functoriality_p5", proj));
    out
}

pub fn gallery_spec(id: &str) -> Result<VarietySpec, SpecParseError> {
    gallery().into_iter().find(|(k, _)| *k == id).map(|(_, s)| s).ok_or_else(|| SpecParseError::UnknownGalleryId(id.into()))
}
