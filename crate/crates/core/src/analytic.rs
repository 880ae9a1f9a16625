//! Closed-form shape proportion and sphericity for regular shapes.
//!
//! Two sets of polytope formulas are available, selected by [`SpVariant`]:
//!
//! * [`SpVariant::PaperFormula`] evaluates the published closed forms as
//!   printed. Their derivations tie the edge length to the enclosing radius
//!   with fixed ratios, so they agree with circumradius geometry only at
//!   isolated dimensions (the simplex at n = 3, the cube at n = 8; the
//!   orthoplex everywhere).
//! * [`SpVariant::GeometricReference`] divides the polytope volume at
//!   circumradius 1 by the unit-ball volume.
//!
//! [`mc_sp_oracle`] estimates the same ratio by sampling the unit ball and
//! testing membership, independent of either formula.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sim::{seeded_rng, UnitBallSampler};

/// `Γ(twice_x / 2)` for positive integer `twice_x`, from `Γ(1/2) = √π`,
/// `Γ(1) = 1` and `Γ(x + 1) = xΓ(x)`.
pub fn gamma_half(twice_x: u32) -> f64 {
    assert!(twice_x >= 1, "gamma_half needs a positive argument");
    let (mut value, mut x2) = if twice_x.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (PI.sqrt(), 1)
    };
    while x2 < twice_x {
        value *= x2 as f64 / 2.0;
        x2 += 2;
    }
    value
}

fn factorial(n: usize) -> f64 {
    gamma_half(2 * n as u32 + 2)
}

/// Volume of the `n`-ball of radius `r`: `π^(n/2) r^n / Γ(n/2 + 1)`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma_half(n as u32 + 2)
}

/// Surface measure of the `n`-ball of radius `r`: `2π^(n/2) r^(n-1) / Γ(n/2)`.
pub fn ball_surface(n: usize, r: f64) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) * r.powi(n as i32 - 1) / gamma_half(n as u32)
}

/// `nV / (rS)` for the unit `n`-ball, evaluated through
/// [`ball_volume`] and [`ball_surface`].
pub fn sphericity_ball(n: usize) -> f64 {
    let r = 1.0;
    n as f64 * ball_volume(n, r) / (r * ball_surface(n, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlatonicSolid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl PlatonicSolid {
    pub const ALL: [PlatonicSolid; 5] = [
        PlatonicSolid::Tetrahedron,
        PlatonicSolid::Cube,
        PlatonicSolid::Octahedron,
        PlatonicSolid::Dodecahedron,
        PlatonicSolid::Icosahedron,
    ];

    pub fn faces(self) -> u32 {
        match self {
            PlatonicSolid::Tetrahedron => 4,
            PlatonicSolid::Cube => 6,
            PlatonicSolid::Octahedron => 8,
            PlatonicSolid::Dodecahedron => 12,
            PlatonicSolid::Icosahedron => 20,
        }
    }

    /// Sides per face.
    pub fn sides(self) -> u32 {
        match self {
            PlatonicSolid::Tetrahedron | PlatonicSolid::Octahedron | PlatonicSolid::Icosahedron => {
                3
            }
            PlatonicSolid::Cube => 4,
            PlatonicSolid::Dodecahedron => 5,
        }
    }

    pub fn from_faces_sides(faces: u32, sides: u32) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.faces() == faces && p.sides() == sides)
            .ok_or_else(|| {
                Error::UnsupportedShape(format!(
                    "no Platonic solid has {faces} faces of {sides} sides"
                ))
            })
    }

    pub fn name(self) -> &'static str {
        match self {
            PlatonicSolid::Tetrahedron => "tetrahedron",
            PlatonicSolid::Cube => "cube",
            PlatonicSolid::Octahedron => "octahedron",
            PlatonicSolid::Dodecahedron => "dodecahedron",
            PlatonicSolid::Icosahedron => "icosahedron",
        }
    }

    /// Volume at circumradius 1.
    pub fn unit_circumradius_volume(self) -> f64 {
        let s5 = 5f64.sqrt();
        let s3 = 3f64.sqrt();
        match self {
            PlatonicSolid::Tetrahedron => 8.0 / (9.0 * s3),
            PlatonicSolid::Cube => 8.0 / (3.0 * s3),
            PlatonicSolid::Octahedron => 4.0 / 3.0,
            PlatonicSolid::Dodecahedron => {
                let edge = 4.0 / (s3 * (1.0 + s5));
                (15.0 + 7.0 * s5) / 4.0 * edge.powi(3)
            }
            PlatonicSolid::Icosahedron => {
                let edge = 4.0 / (10.0 + 2.0 * s5).sqrt();
                5.0 * (3.0 + s5) / 12.0 * edge.powi(3)
            }
        }
    }
}

impl fmt::Display for PlatonicSolid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlatonicSolid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnsupportedShape(format!("unknown Platonic solid '{s}'")))
    }
}

/// A regular shape with a closed-form shape proportion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticShape {
    Ball {
        n: usize,
    },
    Cube {
        n: usize,
    },
    Simplex {
        n: usize,
    },
    Orthoplex {
        n: usize,
    },
    /// Always three-dimensional.
    Platonic(PlatonicSolid),
}

impl AnalyticShape {
    pub fn dim(&self) -> usize {
        match *self {
            AnalyticShape::Ball { n }
            | AnalyticShape::Cube { n }
            | AnalyticShape::Simplex { n }
            | AnalyticShape::Orthoplex { n } => n,
            AnalyticShape::Platonic(_) => 3,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            AnalyticShape::Ball { .. } => "ball",
            AnalyticShape::Cube { .. } => "cube",
            AnalyticShape::Simplex { .. } => "simplex",
            AnalyticShape::Orthoplex { .. } => "orthoplex",
            AnalyticShape::Platonic(_) => "platonic",
        }
    }

    /// Parses `ball`, `cube`, `simplex`, `orthoplex` (or `cross-polytope`)
    /// at dimension `n`, or `platonic:<name>` which requires `n == 3`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let spec = spec.trim().to_ascii_lowercase();
        let shape = match spec.as_str() {
            "ball" | "sphere" => AnalyticShape::Ball { n },
            "cube" | "hypercube" => AnalyticShape::Cube { n },
            "simplex" => AnalyticShape::Simplex { n },
            "orthoplex" | "cross-polytope" => AnalyticShape::Orthoplex { n },
            other => match other.strip_prefix("platonic:") {
                Some(name) => {
                    if n != 3 {
                        return Err(Error::UnsupportedShape(format!(
                            "Platonic solids are three-dimensional, got n = {n}"
                        )));
                    }
                    AnalyticShape::Platonic(name.parse()?)
                }
                None => return Err(Error::UnsupportedShape(format!("unknown shape '{spec}'"))),
            },
        };
        shape.validate()?;
        Ok(shape)
    }

    fn validate(&self) -> Result<()> {
        if self.dim() < 2 {
            return Err(Error::InvalidInput(format!(
                "{} needs dimension >= 2, got {}",
                self.family(),
                self.dim()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for AnalyticShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticShape::Platonic(p) => write!(f, "platonic:{p}"),
            other => write!(f, "{}", other.family()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpVariant {
    #[default]
    PaperFormula,
    GeometricReference,
}

impl SpVariant {
    pub fn name(self) -> &'static str {
        match self {
            SpVariant::PaperFormula => "paper",
            SpVariant::GeometricReference => "geometric",
        }
    }
}

impl FromStr for SpVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(SpVariant::PaperFormula),
            "geometric" => Ok(SpVariant::GeometricReference),
            other => Err(Error::InvalidInput(format!(
                "unknown variant '{other}', expected paper or geometric"
            ))),
        }
    }
}

fn paper_formula(shape: &AnalyticShape) -> f64 {
    match *shape {
        AnalyticShape::Ball { .. } => 1.0,
        AnalyticShape::Cube { n } => gamma_half(n as u32 + 2) / (2.0 * PI).powf(n as f64 / 2.0),
        AnalyticShape::Simplex { n } => {
            ((n + 1) as f64).sqrt() * gamma_half(n as u32 + 2) * 4f64.powi(n as i32)
                / (factorial(n) * (12.0 * PI).powf(n as f64 / 2.0))
        }
        AnalyticShape::Orthoplex { n } => {
            2f64.powi(n as i32) * gamma_half(n as u32 + 2)
                / (factorial(n) * PI.powf(n as f64 / 2.0))
        }
        AnalyticShape::Platonic(p) => {
            let (f, s) = (p.faces() as f64, p.sides() as f64);
            let angle = (360.0 / s).to_radians();
            f * s * angle.sin() * gamma_half(5) / (6.0 * PI.powf(1.5))
        }
    }
}

/// Volume of the shape scaled to circumradius 1.
pub fn unit_circumradius_volume(shape: &AnalyticShape) -> f64 {
    match *shape {
        AnalyticShape::Ball { n } => ball_volume(n, 1.0),
        AnalyticShape::Cube { n } => (2.0 / (n as f64).sqrt()).powi(n as i32),
        AnalyticShape::Simplex { n } => {
            let edge = (2.0 * (n + 1) as f64 / n as f64).sqrt();
            ((n + 1) as f64).sqrt() / (factorial(n) * 2f64.powf(n as f64 / 2.0))
                * edge.powi(n as i32)
        }
        AnalyticShape::Orthoplex { n } => 2f64.powi(n as i32) / factorial(n),
        AnalyticShape::Platonic(p) => p.unit_circumradius_volume(),
    }
}

/// Shape proportion of a regular shape relative to its circumscribed ball.
pub fn sp_closed_form(shape: &AnalyticShape, variant: SpVariant) -> Result<f64> {
    shape.validate()?;
    Ok(match (shape, variant) {
        (AnalyticShape::Ball { .. }, _) => 1.0,
        (_, SpVariant::PaperFormula) => paper_formula(shape),
        (_, SpVariant::GeometricReference) => {
            unit_circumradius_volume(shape) / ball_volume(shape.dim(), 1.0)
        }
    })
}

/// Closed-form sphericity, available only for the ball.
pub fn sphericity_closed_form(shape: &AnalyticShape) -> Option<f64> {
    match *shape {
        AnalyticShape::Ball { n } => Some(sphericity_ball(n)),
        _ => None,
    }
}

/// Point-membership test for a shape at circumradius 1.
#[derive(Debug, Clone)]
enum Membership {
    Ball,
    /// `max |x_i| <= half_width`
    Cube {
        half_width: f64,
    },
    /// `sum |x_i| <= 1`
    Orthoplex,
    /// `normal . x <= offset` for every normal
    HalfSpaces {
        normals: Vec<Vec<f64>>,
        offset: f64,
    },
}

impl Membership {
    fn for_shape(shape: &AnalyticShape) -> Self {
        match *shape {
            AnalyticShape::Ball { .. } => Membership::Ball,
            AnalyticShape::Cube { n } => Membership::Cube {
                half_width: 1.0 / (n as f64).sqrt(),
            },
            AnalyticShape::Orthoplex { .. } => Membership::Orthoplex,
            AnalyticShape::Simplex { n } => Membership::HalfSpaces {
                // the facet opposite each vertex faces away from it at
                // inradius 1/n
                normals: regular_simplex_vertices(n)
                    .into_iter()
                    .map(|v| v.into_iter().map(|x| -x).collect())
                    .collect(),
                offset: 1.0 / n as f64,
            },
            AnalyticShape::Platonic(p) => match p {
                PlatonicSolid::Tetrahedron => {
                    Membership::for_shape(&AnalyticShape::Simplex { n: 3 })
                }
                PlatonicSolid::Cube => Membership::for_shape(&AnalyticShape::Cube { n: 3 }),
                PlatonicSolid::Octahedron => Membership::Orthoplex,
                PlatonicSolid::Dodecahedron => Membership::HalfSpaces {
                    normals: normalize_all(icosahedron_directions()),
                    offset: dual_inradius_ratio(),
                },
                PlatonicSolid::Icosahedron => Membership::HalfSpaces {
                    normals: normalize_all(dodecahedron_directions()),
                    offset: dual_inradius_ratio(),
                },
            },
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        match self {
            Membership::Ball => x.iter().map(|v| v * v).sum::<f64>() <= 1.0,
            Membership::Cube { half_width } => x.iter().all(|v| v.abs() <= *half_width),
            Membership::Orthoplex => x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0,
            Membership::HalfSpaces { normals, offset } => normals
                .iter()
                .all(|nrm| nrm.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= *offset),
        }
    }
}

/// Inradius over circumradius, shared by the dodecahedron and icosahedron.
fn dual_inradius_ratio() -> f64 {
    ((5.0 + 2.0 * 5f64.sqrt()) / 15.0).sqrt()
}

fn normalize_all(vs: Vec<[f64; 3]>) -> Vec<Vec<f64>> {
    vs.into_iter()
        .map(|v| {
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / len).collect()
        })
        .collect()
}

fn cyclic(a: f64, b: f64) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            let (x, y) = (sa * a, sb * b);
            out.push([0.0, x, y]);
            out.push([x, y, 0.0]);
            out.push([y, 0.0, x]);
        }
    }
    out
}

fn icosahedron_directions() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    cyclic(1.0, phi)
}

fn dodecahedron_directions() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                out.push([sx, sy, sz]);
            }
        }
    }
    // orientation dual to `icosahedron_directions`
    out.extend(cyclic(phi, 1.0 / phi));
    out
}

/// Unit vertices of a regular `n`-simplex centered at the origin.
pub fn regular_simplex_vertices(n: usize) -> Vec<Vec<f64>> {
    let nf = n as f64;
    let apex = (1.0 - (nf + 1.0).sqrt()) / nf;
    let centroid = (1.0 + apex) / (nf + 1.0);
    let mut verts: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    verts.push(vec![apex; n]);
    for v in &mut verts {
        v.iter_mut().for_each(|x| *x -= centroid);
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= len);
    }
    verts
}

/// Monte-Carlo estimate of a shape proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Binomial standard error `sqrt(p(1-p)/samples)`.
    pub std_error: f64,
    pub samples: u64,
    pub inside: u64,
}

impl McEstimate {
    /// Distance from `value` in standard errors. Infinite when the standard
    /// error is zero and `value` differs from the estimate.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (self.estimate - value).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Fraction of uniform unit-ball samples that fall inside `shape` scaled to
/// circumradius 1. Deterministic in `(seed, samples)`.
pub fn mc_sp_oracle(shape: &AnalyticShape, samples: u64, seed: u64) -> Result<McEstimate> {
    shape.validate()?;
    if samples == 0 {
        return Err(Error::InvalidInput(
            "oracle needs at least one sample".into(),
        ));
    }
    let n = shape.dim();
    let membership = Membership::for_shape(shape);
    let sampler = UnitBallSampler::new(n)?;
    let mut rng = seeded_rng(seed);
    let mut point = vec![0.0; n];
    let mut inside = 0u64;
    for _ in 0..samples {
        sampler.sample_into(&mut rng, &mut point);
        if membership.contains(&point) {
            inside += 1;
        }
    }
    let p = inside as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        inside,
    })
}
