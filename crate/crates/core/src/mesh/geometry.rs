//! Explicit-ray realisation of a mesh, used as an independent crossing oracle.
//!
//! Family `i` on the left points along `(-1, m_i)`, on the right along
//! `(1, m_i)`, with `m_i` strictly increasing in the family index on each
//! side. Intersections are solved in exact rational arithmetic.

use num_rational::Ratio;

use super::{CrossingCount, MeshSpec, Side};
use crate::error::{Error, Result};

pub type Point = (Ratio<i64>, Ratio<i64>);

/// A semi-line starting at `(0, anchor)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ray {
    pub family: usize,
    pub anchor: i64,
    pub direction: (i64, i64),
}

impl Ray {
    /// Point at parameter `t` along the ray.
    pub fn at(&self, t: Ratio<i64>) -> Point {
        (
            t * self.direction.0,
            Ratio::from_integer(self.anchor) + t * self.direction.1,
        )
    }

    /// Common point of two rays other than a shared origin, if any.
    pub fn intersection(&self, other: &Ray) -> Option<Point> {
        let (dx1, dy1) = self.direction;
        let (dx2, dy2) = other.direction;
        let denom = dx1 * dy2 - dy1 * dx2;
        if denom == 0 {
            // parallel; distinct anchors on a vertical axis never share a
            // non-vertical line
            return None;
        }
        // origin difference is (0, anchor2 - anchor1)
        let gap = other.anchor - self.anchor;
        let t = Ratio::new(-gap * dx2, denom);
        let s = Ratio::new(-gap * dx1, denom);
        let zero = Ratio::from_integer(0);
        (t > zero && s > zero).then(|| self.at(t))
    }
}

/// The `n - 1` parallel rays of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFamily {
    pub side: Side,
    /// 1-based family index.
    pub index: usize,
    pub lost: u32,
    pub slope: i64,
    pub rays: Vec<Ray>,
}

impl RayFamily {
    fn build(n: usize, side: Side, index: usize, lost: u32, slope: i64) -> Self {
        let dx = match side {
            Side::Left => -1,
            Side::Right => 1,
        };
        let rays = (1..=n as i64)
            .filter(|&j| j != lost as i64)
            .map(|anchor| Ray {
                family: index,
                anchor,
                direction: (dx, slope),
            })
            .collect();
        Self {
            side,
            index,
            lost,
            slope,
            rays,
        }
    }
}

/// One crossing between rays of two different families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub first: Ray,
    pub second: Ray,
    pub point: Point,
}

/// Families for `spec` with slope `m_i = i`.
pub fn families(spec: &MeshSpec) -> Vec<RayFamily> {
    let slopes: Vec<i64> = (1..=spec.lost().len() as i64).collect();
    families_with_slopes(spec, &slopes).expect("distinct default slopes")
}

/// Families for `spec` with caller-chosen slopes, one per family.
pub fn families_with_slopes(spec: &MeshSpec, slopes: &[i64]) -> Result<Vec<RayFamily>> {
    if slopes.len() != spec.lost().len() {
        return Err(Error::InvalidMesh(format!(
            "{} slopes for {} families",
            slopes.len(),
            spec.lost().len()
        )));
    }
    for i in 0..slopes.len() {
        for j in i + 1..slopes.len() {
            if spec.side(i) == spec.side(j) && slopes[i] == slopes[j] {
                return Err(Error::DegenerateSlopes {
                    first: i + 1,
                    second: j + 1,
                    slope: slopes[i],
                });
            }
        }
    }
    Ok(spec
        .lost()
        .iter()
        .zip(slopes)
        .enumerate()
        .map(|(i, (&k, &m))| RayFamily::build(spec.n(), spec.side(i), i + 1, k, m))
        .collect())
}

/// Every crossing between rays of distinct families, skipping pairs that
/// share an anchor.
pub fn crossings(families: &[RayFamily]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for (fi, f) in families.iter().enumerate() {
        for g in &families[fi + 1..] {
            for r in &f.rays {
                for q in &g.rays {
                    if r.anchor == q.anchor {
                        continue;
                    }
                    if let Some(point) = r.intersection(q) {
                        out.push(Crossing {
                            first: *r,
                            second: *q,
                            point,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Count crossings from explicit rays with slope `m_i = i`.
pub fn oracle_crossings(spec: &MeshSpec) -> Result<CrossingCount> {
    let slopes: Vec<i64> = (1..=spec.lost().len() as i64).collect();
    oracle_crossings_with_slopes(spec, &slopes)
}

pub fn oracle_crossings_with_slopes(spec: &MeshSpec, slopes: &[i64]) -> Result<CrossingCount> {
    let fams = families_with_slopes(spec, slopes)?;
    Ok(CrossingCount(crossings(&fams).len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::total_crossings;

    fn spec(n: usize, a: usize, p: &[u32]) -> MeshSpec {
        MeshSpec::new(n, a, p.to_vec()).unwrap()
    }

    #[test]
    fn figure_meshes() {
        assert_eq!(oracle_crossings(&spec(6, 1, &[2, 4, 5, 3])).unwrap().0, 30);
        assert_eq!(oracle_crossings(&spec(6, 2, &[2, 4, 5, 3])).unwrap().0, 21);
        assert_eq!(oracle_crossings(&spec(6, 0, &[2, 3, 4, 5])).unwrap().0, 70);
    }

    #[test]
    fn pairwise_oracle_matches_formula() {
        // two right-side families carrying (k1, k2)
        for k1 in 2..6u32 {
            for k2 in 2..6u32 {
                if k1 == k2 {
                    continue;
                }
                let rest: Vec<u32> = (2..6).filter(|&k| k != k1 && k != k2).collect();
                let s = spec(6, 2, &[rest[0], rest[1], k1, k2]);
                let fams = families(&s);
                let count = crossings(&fams[2..]).len() as u64;
                assert_eq!(count, crate::mesh::pair_crossings(6, k1, k2).unwrap().0);
            }
        }
    }

    #[test]
    fn opposite_sides_never_meet() {
        let s = spec(6, 1, &[3, 4, 2, 5]);
        let fams = families(&s);
        assert_eq!(fams[0].rays.len(), 5);
        for right in &fams[1..] {
            let pair = [fams[0].clone(), right.clone()];
            assert!(crossings(&pair).is_empty());
        }
    }

    #[test]
    fn within_family_parallel() {
        let s = spec(7, 3, &[2, 4, 6, 3, 5]);
        for f in families(&s) {
            for (i, r) in f.rays.iter().enumerate() {
                for q in &f.rays[i + 1..] {
                    assert!(r.intersection(q).is_none());
                }
            }
        }
    }

    #[test]
    fn equal_slopes_rejected() {
        let s = spec(6, 2, &[2, 4, 5, 3]);
        assert!(matches!(
            oracle_crossings_with_slopes(&s, &[1, 1, 2, 3]),
            Err(Error::DegenerateSlopes { .. })
        ));
        // equal slopes on opposite sides are fine
        assert!(oracle_crossings_with_slopes(&s, &[1, 2, 1, 2]).is_ok());
    }

    #[test]
    fn any_increasing_slopes_agree() {
        let s = spec(8, 3, &[5, 2, 7, 3, 6, 4]);
        let expected = total_crossings(&s);
        assert_eq!(oracle_crossings(&s).unwrap(), expected);
        assert_eq!(
            oracle_crossings_with_slopes(&s, &[-3, 2, 9, -1, 0, 4]).unwrap(),
            expected
        );
    }

    #[test]
    fn decreasing_slopes_mirror_the_count() {
        // reversing the slope order reverses which family is "earlier"
        let s = spec(8, 0, &[5, 2, 7, 3, 6, 4]);
        let reversed = spec(8, 0, &[4, 6, 3, 7, 2, 5]);
        let count = oracle_crossings_with_slopes(&s, &[6, 5, 4, 3, 2, 1]).unwrap();
        assert_eq!(count, total_crossings(&reversed));
    }
}
