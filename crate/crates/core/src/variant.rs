//! The objective taxonomy: error function, target space, and radius rule.

use crate::geometry::TargetSpace;
use crate::{Error, Result};

/// Per-term error function applied to `f(x_i, x_j) - r_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrKind {
    /// `|delta|`
    Abs,
    /// `delta^2`
    Square,
    /// `|delta|^p` with `1 < p < 2` (the range where the generalized
    /// Weiszfeld iteration converges).
    Power(f64),
}

impl ErrKind {
    #[inline]
    pub fn eval(&self, delta: f64) -> f64 {
        match *self {
            ErrKind::Abs => delta.abs(),
            ErrKind::Square => delta * delta,
            ErrKind::Power(p) => delta.abs().powf(p),
        }
    }
}

/// Which radius each anchor sphere uses: the raw dissimilarity or its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusRule {
    Plain,
    Squared,
}

impl RadiusRule {
    #[inline]
    pub fn apply(&self, d: f64) -> f64 {
        match self {
            RadiusRule::Plain => d,
            RadiusRule::Squared => d * d,
        }
    }
}

/// A fully specified objective: error function, target space, radius rule.
///
/// The named constructors cover the supported family:
///
/// | name   | error      | space            | radii   |
/// |--------|------------|------------------|---------|
/// | fmds   | squared    | `R^k`            | `d`     |
/// | rmds   | absolute   | `R^k`            | `d`     |
/// | r2mds  | absolute   | `R^k`            | `d^2`   |
/// | lp:p   | `\|.\|^p`  | `R^k`            | `d`     |
/// | c1s    | absolute   | `S^k`, chordal   | `d`     |
/// | c2s    | squared    | `S^k`, chordal   | `d`     |
/// | g1s    | absolute   | `S^k`, geodesic  | `d`     |
/// | g2s    | squared    | `S^k`, geodesic  | `d`     |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdsVariant {
    err: ErrKind,
    space: TargetSpace,
    radius_rule: RadiusRule,
}

impl MdsVariant {
    pub fn new(err: ErrKind, space: TargetSpace, radius_rule: RadiusRule) -> Result<Self> {
        if let ErrKind::Power(p) = err {
            if !(p > 1.0 && p < 2.0) {
                return Err(Error::InvalidVariant(format!(
                    "power-p error needs p in the open range (1, 2), got {p}"
                )));
            }
            if space.is_spherical() {
                return Err(Error::InvalidVariant(
                    "power-p error is only supported in Euclidean space".into(),
                ));
            }
        }
        if radius_rule == RadiusRule::Squared && space.is_spherical() {
            return Err(Error::InvalidVariant(
                "squared radii are only supported in Euclidean space".into(),
            ));
        }
        Ok(Self {
            err,
            space,
            radius_rule,
        })
    }

    pub fn fmds(k: usize) -> Self {
        Self {
            err: ErrKind::Square,
            space: TargetSpace::Euclidean { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    pub fn rmds(k: usize) -> Self {
        Self {
            err: ErrKind::Abs,
            space: TargetSpace::Euclidean { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    pub fn r2mds(k: usize) -> Self {
        Self {
            err: ErrKind::Abs,
            space: TargetSpace::Euclidean { dim: k },
            radius_rule: RadiusRule::Squared,
        }
    }

    pub fn lp(k: usize, p: f64) -> Result<Self> {
        Self::new(
            ErrKind::Power(p),
            TargetSpace::Euclidean { dim: k },
            RadiusRule::Plain,
        )
    }

    pub fn c1s(k: usize) -> Self {
        Self {
            err: ErrKind::Abs,
            space: TargetSpace::SphereChordal { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    pub fn c2s(k: usize) -> Self {
        Self {
            err: ErrKind::Square,
            space: TargetSpace::SphereChordal { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    pub fn g1s(k: usize) -> Self {
        Self {
            err: ErrKind::Abs,
            space: TargetSpace::SphereGeodesic { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    pub fn g2s(k: usize) -> Self {
        Self {
            err: ErrKind::Square,
            space: TargetSpace::SphereGeodesic { dim: k },
            radius_rule: RadiusRule::Plain,
        }
    }

    /// Parses a variant name as used by the CLI: `fmds`, `rmds`, `r2mds`,
    /// `lp:<p>`, `c1s`, `c2s`, `g1s`, `g2s`.
    pub fn from_name(name: &str, k: usize) -> Result<Self> {
        match name {
            "fmds" => Ok(Self::fmds(k)),
            "rmds" => Ok(Self::rmds(k)),
            "r2mds" => Ok(Self::r2mds(k)),
            "c1s" => Ok(Self::c1s(k)),
            "c2s" => Ok(Self::c2s(k)),
            "g1s" => Ok(Self::g1s(k)),
            "g2s" => Ok(Self::g2s(k)),
            other => {
                if let Some(p_str) = other.strip_prefix("lp:") {
                    let p: f64 = p_str.parse().map_err(|_| {
                        Error::InvalidVariant(format!("cannot parse exponent in `{other}`"))
                    })?;
                    Self::lp(k, p)
                } else {
                    Err(Error::InvalidVariant(format!(
                        "unknown variant `{other}` (expected fmds | rmds | r2mds | lp:<p> | c1s | c2s | g1s | g2s)"
                    )))
                }
            }
        }
    }

    /// Short name, suitable for file names and trace labels.
    pub fn name(&self) -> String {
        match (self.err, self.space, self.radius_rule) {
            (ErrKind::Square, TargetSpace::Euclidean { .. }, RadiusRule::Plain) => "fmds".into(),
            (ErrKind::Abs, TargetSpace::Euclidean { .. }, RadiusRule::Plain) => "rmds".into(),
            (ErrKind::Abs, TargetSpace::Euclidean { .. }, RadiusRule::Squared) => "r2mds".into(),
            (ErrKind::Power(p), TargetSpace::Euclidean { .. }, _) => format!("lp:{p}"),
            (ErrKind::Abs, TargetSpace::SphereChordal { .. }, _) => "c1s".into(),
            (ErrKind::Square, TargetSpace::SphereChordal { .. }, _) => "c2s".into(),
            (ErrKind::Abs, TargetSpace::SphereGeodesic { .. }, _) => "g1s".into(),
            (ErrKind::Square, TargetSpace::SphereGeodesic { .. }, _) => "g2s".into(),
            _ => "custom".into(),
        }
    }

    pub fn err(&self) -> ErrKind {
        self.err
    }

    pub fn space(&self) -> TargetSpace {
        self.space
    }

    pub fn radius_rule(&self) -> RadiusRule {
        self.radius_rule
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }
}
