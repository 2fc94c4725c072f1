//! Test instances: random sets, grids, convex and collinear sets, sets with
//! duplicates, and the Pappus configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{ExactPoint, ExactRational};

/// `n` random integer points with coordinates in `[0, n^3)`.
pub fn random_points(n: usize, seed: u64) -> Vec<ExactPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = (n as i64).pow(3).max(8);
    (0..n).map(|_| ExactPoint::from_ints(rng.gen_range(0..range), rng.gen_range(0..range))).collect()
}

pub fn grid(k: i64) -> Vec<ExactPoint> {
    (0..k).flat_map(|x| (0..k).map(move |y| ExactPoint::from_ints(x, y))).collect()
}

/// Rational points on the unit circle, `((1-s^2)/(1+s^2), 2s/(1+s^2))`
/// for `s = i/n`.
pub fn convex(n: usize) -> Vec<ExactPoint> {
    (0..n as i64)
        .map(|i| {
            let (s, d) = (i, n as i64);
            let den = d * d + s * s;
            ExactPoint::new(ExactRational::new(d * d - s * s, den), ExactRational::new(2 * s * d, den))
        })
        .collect()
}

/// Points on the line `y = 2x + 1`.
pub fn collinear(n: usize) -> Vec<ExactPoint> {
    (0..n as i64).map(|i| ExactPoint::from_ints(3 * i - 7, 6 * i - 13)).collect()
}

/// `n` random points where every third label repeats an earlier one.
pub fn with_duplicates(n: usize, seed: u64) -> Vec<ExactPoint> {
    let mut pts = random_points(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for i in (2..n).step_by(3) {
        let j = rng.gen_range(0..i);
        pts[i] = pts[j].clone();
    }
    pts
}

fn meet(p1: &ExactPoint, p2: &ExactPoint, q1: &ExactPoint, q2: &ExactPoint) -> ExactPoint {
    let cross = |a: &ExactPoint, b: &ExactPoint| &(&a.x * &b.y) - &(&a.y * &b.x);
    let (dpx, dpy) = (&p1.x - &p2.x, &p1.y - &p2.y);
    let (dqx, dqy) = (&q1.x - &q2.x, &q1.y - &q2.y);
    let d = &(&dpx * &dqy) - &(&dpy * &dqx);
    let (a, b) = (cross(p1, p2), cross(q1, q2));
    let x = &(&(&a * &dqx) - &(&dpx * &b)) / &d;
    let y = &(&(&a * &dqy) - &(&dpy * &b)) / &d;
    ExactPoint::new(x, y)
}

/// Three points on each of two lines plus the three cross-joins
/// `a_i b_j ∩ a_j b_i`, which are collinear.
pub fn pappus() -> Vec<ExactPoint> {
    let a = [(0, 0), (2, 0), (5, 0)].map(|(x, y)| ExactPoint::from_ints(x, y));
    let b = [(1, 3), (4, 4), (7, 5)].map(|(x, y)| ExactPoint::from_ints(x, y));
    let mut out: Vec<ExactPoint> = a.iter().chain(&b).cloned().collect();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        out.push(meet(&a[i], &b[j], &a[j], &b[i]));
    }
    out
}

/// Corpus files by name, as written under `corpus/`.
pub fn point_files() -> Vec<(String, Vec<ExactPoint>)> {
    let mut out: Vec<(String, Vec<ExactPoint>)> =
        [10, 25, 50, 100, 200].iter().map(|&n| (format!("random_{n}.txt"), random_points(n, n as u64))).collect();
    out.push(("grid_3x3.txt".into(), grid(3)));
    out.push(("grid_10x10.txt".into(), grid(10)));
    out.push(("convex_40.txt".into(), convex(40)));
    out.push(("collinear_12.txt".into(), collinear(12)));
    out.push(("duplicates_30.txt".into(), with_duplicates(30, 7)));
    out.push(("pappus.txt".into(), pappus()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::orient;
    use ote_decoder::OrientationSign;

    fn zero_triples(p: &[ExactPoint]) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for k in j + 1..p.len() {
                    if orient(&p[i], &p[j], &p[k]) == OrientationSign::Zero {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn pappus_has_nine_collinear_triples() {
        let z = zero_triples(&pappus());
        assert_eq!(z.len(), 9);
        assert!(z.contains(&(6, 7, 8)));
    }

    #[test]
    fn grid_and_convex_degeneracies() {
        assert_eq!(zero_triples(&grid(3)).len(), 8);
        assert!(zero_triples(&convex(40)).is_empty());
        assert_eq!(zero_triples(&collinear(12)).len(), 220);
    }

    #[test]
    fn duplicates_repeat() {
        let p = with_duplicates(30, 7);
        let distinct: std::collections::HashSet<_> = p.iter().collect();
        assert_eq!(distinct.len(), 20);
    }
}
