//! Douglas-Peucker simplification for open chains and closed rings.
//!
//! A vertex is kept only when it lies farther than the tolerance from the
//! segment joining the current endpoints; the chain is then split at the
//! farthest vertex (the first one on ties) and both halves are processed the
//! same way. Distances are point-to-segment, so every dropped vertex is
//! within the tolerance of the output polyline.
//!
//! Rings are cut at vertex 0 and at the vertex farthest from it, and the two
//! resulting chains are simplified independently.

use std::cmp::Ordering;

use super::{Contour, Point};

/// A point type Douglas-Peucker can measure.
pub trait DpPoint: Copy {
    type Dist: PartialOrd;

    /// Squared distance from `self` to segment `a`-`b`.
    fn seg_dist2(self, a: Self, b: Self) -> Self::Dist;

    fn point_dist2(self, other: Self) -> Self::Dist;

    /// Whether a squared distance is strictly greater than `tol²`.
    fn exceeds(d: &Self::Dist, tol: f64) -> bool;
}

/// Exact squared distance `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num * other.den == other.num * self.den
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.num * other.den).partial_cmp(&(other.num * self.den))
    }
}

impl DpPoint for Point {
    type Dist = Ratio;

    fn seg_dist2(self, a: Self, b: Self) -> Ratio {
        let (abx, aby) = (b.x as i128 - a.x as i128, b.y as i128 - a.y as i128);
        let (apx, apy) = (self.x as i128 - a.x as i128, self.y as i128 - a.y as i128);
        let len2 = abx * abx + aby * aby;
        let dot = apx * abx + apy * aby;
        if len2 == 0 || dot <= 0 {
            return Ratio {
                num: apx * apx + apy * apy,
                den: 1,
            };
        }
        if dot >= len2 {
            return self.point_dist2(b);
        }
        let cross = abx * apy - aby * apx;
        Ratio {
            num: cross * cross,
            den: len2,
        }
    }

    fn point_dist2(self, other: Self) -> Ratio {
        let dx = self.x as i128 - other.x as i128;
        let dy = self.y as i128 - other.y as i128;
        Ratio {
            num: dx * dx + dy * dy,
            den: 1,
        }
    }

    fn exceeds(d: &Ratio, tol: f64) -> bool {
        d.num as f64 > tol * tol * d.den as f64
    }
}

impl DpPoint for [f64; 2] {
    type Dist = f64;

    fn seg_dist2(self, a: Self, b: Self) -> f64 {
        let (abx, aby) = (b[0] - a[0], b[1] - a[1]);
        let (apx, apy) = (self[0] - a[0], self[1] - a[1]);
        let len2 = abx * abx + aby * aby;
        let dot = apx * abx + apy * aby;
        if len2 == 0.0 || dot <= 0.0 {
            return apx * apx + apy * apy;
        }
        if dot >= len2 {
            return self.point_dist2(b);
        }
        let cross = abx * apy - aby * apx;
        cross * cross / len2
    }

    fn point_dist2(self, other: Self) -> f64 {
        let (dx, dy) = (self[0] - other[0], self[1] - other[1]);
        dx * dx + dy * dy
    }

    fn exceeds(d: &f64, tol: f64) -> bool {
        *d > tol * tol
    }
}

/// Indices of the vertices an open chain keeps. Both endpoints are always
/// kept.
pub fn simplify_chain_indices<P: DpPoint>(points: &[P], tolerance: f64) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0, n - 1)];
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let mut far = a + 1;
        let mut far_d = points[far].seg_dist2(points[a], points[b]);
        for i in a + 2..b {
            let d = points[i].seg_dist2(points[a], points[b]);
            if d > far_d {
                far = i;
                far_d = d;
            }
        }
        if P::exceeds(&far_d, tolerance) {
            keep[far] = true;
            stack.push((far, b));
            stack.push((a, far));
        }
    }
    keep.iter()
        .enumerate()
        .filter_map(|(i, &k)| k.then_some(i))
        .collect()
}

/// Indices of the vertices a closed ring keeps, ascending. Vertex 0 is
/// always kept.
pub fn simplify_closed_indices<P: DpPoint>(points: &[P], tolerance: f64) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return (0..n).collect();
    }
    let mut far = 0;
    let mut far_d = points[0].point_dist2(points[0]);
    for (i, p) in points.iter().enumerate().skip(1) {
        let d = p.point_dist2(points[0]);
        if d > far_d {
            far = i;
            far_d = d;
        }
    }
    if far == 0 {
        return vec![0];
    }

    let mut out = simplify_chain_indices(&points[..=far], tolerance);

    let second: Vec<P> = points[far..]
        .iter()
        .copied()
        .chain(std::iter::once(points[0]))
        .collect();
    let kept = simplify_chain_indices(&second, tolerance);
    out.extend(
        kept[1..kept.len() - 1]
            .iter()
            .map(|&i| far + i),
    );
    out
}

/// Simplifies a closed contour, keeping its role and parent.
pub fn simplify_dp(c: &Contour, tolerance: f64) -> Contour {
    let vertices = simplify_closed_indices(&c.vertices, tolerance)
        .into_iter()
        .map(|i| c.vertices[i])
        .collect();
    Contour::new(vertices, c.role, c.parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours::Role;

    fn chain(pts: &[(f64, f64)]) -> Vec<[f64; 2]> {
        pts.iter().map(|&(x, y)| [x, y]).collect()
    }

    #[test]
    fn open_chain_examples() {
        let c = chain(&[(0.0, 0.0), (5.0, 0.0), (10.0, 0.0)]);
        assert_eq!(simplify_chain_indices(&c, 1.0), vec![0, 2]);
        let c = chain(&[(0.0, 0.0), (5.0, 0.5), (10.0, 0.0)]);
        assert_eq!(simplify_chain_indices(&c, 1.0), vec![0, 2]);
        let c = chain(&[(0.0, 0.0), (5.0, 3.0), (10.0, 0.0)]);
        assert_eq!(simplify_chain_indices(&c, 1.0), vec![0, 1, 2]);
    }

    #[test]
    fn distance_equal_to_tolerance_is_removed() {
        let c = [Point::new(0, 0), Point::new(3, 1), Point::new(6, 0)];
        assert_eq!(simplify_chain_indices(&c, 1.0), vec![0, 2]);
        assert_eq!(simplify_chain_indices(&c, 0.999), vec![0, 1, 2]);
    }

    #[test]
    fn segment_distance_not_line_distance() {
        // (12, 0) is on the chord's line but 2 past its end.
        let c = [Point::new(0, 0), Point::new(12, 0), Point::new(10, 0)];
        assert_eq!(simplify_chain_indices(&c, 1.0), vec![0, 1, 2]);
        assert_eq!(simplify_chain_indices(&c, 2.0), vec![0, 2]);
    }

    #[test]
    fn zero_tolerance_drops_only_collinear() {
        let ring: Vec<Point> = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        let c = Contour::new(ring, Role::Outer, None);
        let s = simplify_dp(&c, 0.0);
        assert_eq!(
            s.vertices,
            vec![Point::new(0, 0), Point::new(2, 0), Point::new(2, 2), Point::new(0, 2)]
        );
    }

    #[test]
    fn degenerate_rings() {
        let same = vec![Point::new(3, 3); 4];
        assert_eq!(simplify_closed_indices(&same, 1.0), vec![0]);
        let two = [Point::new(0, 0), Point::new(5, 5)];
        assert_eq!(simplify_closed_indices(&two, 1.0), vec![0, 1]);
    }
}
