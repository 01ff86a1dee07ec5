//! Observation regions `ω` and the uniform net condition: every point lies
//! within `δ` of a centre `y′` whose closed `r`-ball sits inside `ω`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionKind {
    /// The whole space.
    Full,
    /// `{x : dist(x[axis] - offset, period ℤ) <= half_width}`.
    Slabs {
        axis: usize,
        period: f64,
        half_width: f64,
        #[serde(default)]
        offset: f64,
    },
    /// Union of balls; evaluated on a node set.
    Balls { balls: Vec<Ball> },
    /// Explicit indicator per quadrature node.
    CustomMask { inside: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRegion {
    #[serde(flatten)]
    pub kind: RegionKind,
    /// Radius of the balls that must fit inside `ω`.
    #[serde(default = "default_r")]
    pub r: f64,
    /// Net spacing.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_r() -> f64 {
    0.1
}

fn default_delta() -> f64 {
    1.0
}

impl ObservationRegion {
    pub fn full() -> Self {
        Self {
            kind: RegionKind::Full,
            r: default_r(),
            delta: default_delta(),
        }
    }

    pub fn slabs(axis: usize, period: f64, half_width: f64, r: f64, delta: f64) -> Result<Self> {
        let region = Self {
            kind: RegionKind::Slabs {
                axis,
                period,
                half_width,
                offset: 0.0,
            },
            r,
            delta,
        };
        region.validate()?;
        Ok(region)
    }

    pub fn balls(balls: Vec<Ball>, r: f64, delta: f64) -> Result<Self> {
        let region = Self {
            kind: RegionKind::Balls { balls },
            r,
            delta,
        };
        region.validate()?;
        Ok(region)
    }

    pub fn custom_mask(inside: Vec<bool>, r: f64, delta: f64) -> Result<Self> {
        let region = Self {
            kind: RegionKind::CustomMask { inside },
            r,
            delta,
        };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) || !(self.delta > 0.0) {
            return Err(invalid(
                "region",
                format!(
                    "need r > 0 and δ > 0, got r = {}, δ = {}",
                    self.r, self.delta
                ),
            ));
        }
        match &self.kind {
            RegionKind::Slabs {
                period,
                half_width,
                offset,
                ..
            } => {
                if !(*period > 0.0) || !(*half_width > 0.0) || !offset.is_finite() {
                    return Err(invalid("slabs", "need positive period and half-width"));
                }
                if *half_width < self.r {
                    return Err(invalid(
                        "slabs",
                        format!(
                            "half-width {half_width} cannot hold a ball of radius {}",
                            self.r
                        ),
                    ));
                }
            }
            RegionKind::Balls { balls } => {
                if balls.iter().any(|b| !(b.radius > 0.0)) {
                    return Err(invalid("balls", "radii must be positive"));
                }
            }
            RegionKind::Full | RegionKind::CustomMask { .. } => {}
        }
        Ok(())
    }

    /// Whether `x` lies in `ω`. Not meaningful for [`RegionKind::CustomMask`].
    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.kind {
            RegionKind::Full => true,
            RegionKind::Slabs {
                axis,
                period,
                half_width,
                offset,
            } => {
                let y = x.get(*axis).copied().unwrap_or(0.0) - offset;
                let d = y - period * (y / period).round();
                d.abs() <= *half_width
            }
            RegionKind::Balls { balls } => balls.iter().any(|b| distance(&b.center, x) <= b.radius),
            RegionKind::CustomMask { .. } => false,
        }
    }

    /// Indicator of `ω` on a node set.
    pub fn mask(&self, nodes: &[Vec<f64>]) -> Result<Vec<bool>> {
        match &self.kind {
            RegionKind::CustomMask { inside } => {
                if inside.len() != nodes.len() {
                    return Err(Error::DimensionMismatch {
                        expected: nodes.len(),
                        found: inside.len(),
                    });
                }
                Ok(inside.clone())
            }
            _ => Ok(nodes.iter().map(|x| self.contains(x)).collect()),
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Uniform net condition on the ball of radius `domain_radius`.
///
/// Slabs are decided in closed form: the admissible centres form slabs of
/// half-width `half_width - r`, so the farthest point is `gap/2 + r` away,
/// with `gap = period - 2 half_width`. Other kinds are checked on `nodes`.
pub fn region_satisfies_cover(
    region: &ObservationRegion,
    domain_radius: f64,
    nodes: &[Vec<f64>],
) -> Result<bool> {
    region.validate()?;
    match &region.kind {
        RegionKind::Full => Ok(true),
        RegionKind::Slabs {
            period, half_width, ..
        } => {
            let gap = (period - 2.0 * half_width).max(0.0);
            Ok(*half_width >= region.r && gap / 2.0 + region.r < region.delta)
        }
        _ => {
            let mask = region.mask(nodes)?;
            let inside: Vec<bool> = nodes
                .iter()
                .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt() <= domain_radius)
                .collect();
            // centres whose r-ball holds no node outside ω
            let centres: Vec<&Vec<f64>> = nodes
                .iter()
                .enumerate()
                .filter(|&(i, y)| {
                    mask[i]
                        && nodes
                            .iter()
                            .zip(&mask)
                            .all(|(z, &m)| m || distance(y, z) > region.r)
                })
                .map(|(_, y)| y)
                .collect();
            Ok(nodes
                .iter()
                .zip(&inside)
                .filter(|(_, &keep)| keep)
                .all(|(y, _)| centres.iter().any(|c| distance(c, y) < region.delta)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(half: f64, n: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = -half + 2.0 * half * i as f64 / (n - 1) as f64;
                let y = -half + 2.0 * half * j as f64 / (n - 1) as f64;
                out.push(vec![x, y]);
            }
        }
        out
    }

    #[test]
    fn slab_membership_is_periodic() {
        let s = ObservationRegion::slabs(0, 2.0, 0.5, 0.2, 1.0).unwrap();
        assert!(s.contains(&[0.4, 9.0]));
        assert!(s.contains(&[4.3, -1.0]));
        assert!(!s.contains(&[1.0, 0.0]));
        assert!(ObservationRegion::slabs(0, 2.0, 0.1, 0.2, 1.0).is_err());
    }

    #[test]
    fn slab_cover_accounts_for_ball_radius() {
        let nodes = grid(4.0, 41);
        // gap 1, r 0.2: farthest point 0.7 from a centre
        let ok = ObservationRegion::slabs(0, 2.0, 0.5, 0.2, 0.75).unwrap();
        assert!(region_satisfies_cover(&ok, 4.0, &nodes).unwrap());
        let tight = ObservationRegion::slabs(0, 2.0, 0.5, 0.2, 0.65).unwrap();
        assert!(!region_satisfies_cover(&tight, 4.0, &nodes).unwrap());
    }

    #[test]
    fn single_ball_fails_on_large_domain() {
        let nodes = grid(6.0, 31);
        let ball = ObservationRegion::balls(
            vec![Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            }],
            0.3,
            1.0,
        )
        .unwrap();
        assert!(!region_satisfies_cover(&ball, 6.0, &nodes).unwrap());
        assert!(region_satisfies_cover(&ObservationRegion::full(), 6.0, &nodes).unwrap());
    }

    #[test]
    fn region_json_round_trip() {
        let s = ObservationRegion::slabs(1, 3.0, 1.0, 0.5, 2.0).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"slabs\""));
        let back: ObservationRegion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
