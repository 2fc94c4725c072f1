//! Curves (dual lines and x-monotone polylines) and the exact predicates on
//! them.
//!
//! Rational curves are converted once to integer piecewise-linear form by a
//! positive diagonal scaling, which preserves every vertical order and
//! crossing. Small inputs run on `i128`; the rest fall back to `BigInt`.

mod cell;
mod kernel;
mod scalar;

pub use cell::{alternates, CellGeom, HitKey, Relation, Trap};
pub use kernel::{Arrangement, CurveId, PlCurve};
pub use scalar::{Frac, Scalar, XCoord};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::exact::{ExactPoint, ExactRational, OrientationSign};

/// A curve as supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    Line { slope: ExactRational, intercept: ExactRational },
    /// Vertices with strictly increasing x, extended by rays of the given
    /// slopes.
    Polyline { vertices: Vec<ExactPoint>, left_slope: ExactRational, right_slope: ExactRational },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("polyline {0} is not strictly x-monotone")]
    NotMonotone(usize),
    #[error("polyline {0} has no vertices")]
    EmptyPolyline(usize),
    #[error("malformed polyline arrangement: {0}")]
    MalformedPolyline(String),
    #[error("lines {0} and {1} are parallel")]
    Parallel(usize, usize),
}

impl Curve {
    pub fn line(slope: ExactRational, intercept: ExactRational) -> Self {
        Curve::Line { slope, intercept }
    }

    /// Rational pieces `(slope, intercept)` and breakpoints.
    fn pieces(&self, id: usize) -> Result<Pieces<ExactRational>, ArrangementError> {
        match self {
            Curve::Line { slope, intercept } => Ok((Vec::new(), vec![(slope.clone(), intercept.clone())])),
            Curve::Polyline { vertices, left_slope, right_slope } => {
                let first = vertices.first().ok_or(ArrangementError::EmptyPolyline(id))?;
                let last = vertices.last().unwrap();
                let through = |m: &ExactRational, p: &ExactPoint| (m.clone(), &p.y - &(m * &p.x));
                let mut pieces = vec![through(left_slope, first)];
                let mut breaks = Vec::new();
                for w in vertices.windows(2) {
                    if w[1].x <= w[0].x {
                        return Err(ArrangementError::NotMonotone(id));
                    }
                    let m = &(&w[1].y - &w[0].y) / &(&w[1].x - &w[0].x);
                    breaks.push(w[0].x.clone());
                    pieces.push(through(&m, &w[0]));
                }
                breaks.push(last.x.clone());
                pieces.push(through(right_slope, last));
                // drop breaks between collinear pieces
                let mut b2 = Vec::new();
                let mut p2 = vec![pieces[0].clone()];
                for (b, p) in breaks.into_iter().zip(pieces.into_iter().skip(1)) {
                    if *p2.last().unwrap() != p {
                        b2.push(b);
                        p2.push(p);
                    }
                }
                Ok((b2, p2))
            }
        }
    }

    /// Exact y-value at `x`.
    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let (breaks, pieces) = self.pieces(0).expect("curve validated");
        let k = breaks.partition_point(|b| b < x);
        let (m, c) = &pieces[k];
        &(m * x) + c
    }
}

/// Integer arrangement on the narrowest scalar that is provably exact.
#[derive(Clone, Debug)]
pub enum AnyArrangement {
    Small(Arrangement<i128>),
    Big(Arrangement<BigInt>),
}

/// Breakpoints and `(slope, intercept)` pieces of one curve.
type Pieces<T> = (Vec<T>, Vec<(T, T)>);

/// Runs `$body` with `$a` bound to the concrete arrangement.
#[macro_export]
macro_rules! with_arrangement {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            $crate::arrangement::AnyArrangement::Small($a) => $body,
            $crate::arrangement::AnyArrangement::Big($a) => $body,
        }
    };
}

fn lcm_of<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    it.fold(BigInt::one(), |acc, d| acc.lcm(d))
}

impl AnyArrangement {
    /// Converts and validates. Lines must have distinct slopes; polylines
    /// must pairwise cross exactly once.
    pub fn build(curves: &[Curve]) -> Result<AnyArrangement, ArrangementError> {
        let mut raw = Vec::with_capacity(curves.len());
        for (i, c) in curves.iter().enumerate() {
            raw.push(c.pieces(i)?);
        }
        let all_lines = raw.iter().all(|(b, _)| b.is_empty());
        let slopes = || raw.iter().flat_map(|(_, p)| p.iter().map(|(m, _)| m));
        let intercepts = || raw.iter().flat_map(|(_, p)| p.iter().map(|(_, c)| c));
        let mut int_curves: Vec<Pieces<BigInt>> = Vec::with_capacity(raw.len());
        if all_lines {
            // x' = x / ls, y' = ly * y
            let ls = lcm_of(slopes().map(|m| m.denom()));
            let ly = lcm_of(intercepts().map(|c| c.denom()));
            let ls_r = ExactRational::from_int(ls.clone());
            let ly_r = ExactRational::from_int(ly.clone());
            for (_, p) in &raw {
                let (m, c) = &p[0];
                let a = &(m * &ls_r) * &ly_r;
                let b = c * &ly_r;
                int_curves.push((Vec::new(), vec![(a.numer().clone(), b.numer().clone())]));
            }
        } else {
            // x' = lx * x, y' = ly * y
            let lx = lcm_of(raw.iter().flat_map(|(b, _)| b.iter().map(|x| x.denom())));
            let lx_r = ExactRational::from_int(lx.clone());
            let ly = lcm_of(
                slopes()
                    .map(|m| (m / &lx_r).denom().clone())
                    .collect::<Vec<_>>()
                    .iter()
                    .chain(intercepts().map(|c| c.denom())),
            );
            let ly_r = ExactRational::from_int(ly);
            for (b, p) in &raw {
                let breaks = b.iter().map(|x| (x * &lx_r).numer().clone()).collect();
                let pieces = p
                    .iter()
                    .map(|(m, c)| {
                        let a = &(m / &lx_r) * &ly_r;
                        let b = c * &ly_r;
                        debug_assert!(a.is_integer() && b.is_integer());
                        (a.numer().clone(), b.numer().clone())
                    })
                    .collect();
                int_curves.push((breaks, pieces));
            }
        }

        let amax = int_curves.iter().flat_map(|(_, p)| p.iter().map(|(a, _)| a.abs())).max().unwrap_or_default();
        let bmax = int_curves.iter().flat_map(|(_, p)| p.iter().map(|(_, b)| b.abs())).max().unwrap_or_default();
        let xmax = int_curves.iter().flat_map(|(b, _)| b.iter().map(|x| x.abs())).max().unwrap_or_default();
        let bstar = &bmax + &amax * &xmax + BigInt::one();
        let bound = BigInt::from(16) * (amax + BigInt::one()) * bstar;
        let any = if bound < (BigInt::one() << 126) {
            AnyArrangement::Small(convert(&int_curves))
        } else {
            AnyArrangement::Big(convert(&int_curves))
        };
        any.validate(all_lines)?;
        Ok(any)
    }

    fn validate(&self, all_lines: bool) -> Result<(), ArrangementError> {
        with_arrangement!(self, a => {
            let n = a.len() as CurveId;
            if all_lines {
                let mut idx: Vec<CurveId> = (0..n).collect();
                idx.sort_by(|&x, &y| a.curve(x).pieces[0].0.cmp(&a.curve(y).pieces[0].0));
                for w in idx.windows(2) {
                    if a.curve(w[0]).pieces[0].0 == a.curve(w[1]).pieces[0].0 {
                        return Err(ArrangementError::Parallel(w[0] as usize, w[1] as usize));
                    }
                }
            } else {
                for c in 0..n {
                    for d in c + 1..n {
                        a.validate_pair(c, d).map_err(ArrangementError::MalformedPolyline)?;
                    }
                }
            }
            Ok(())
        })
    }

    pub fn len(&self) -> usize {
        with_arrangement!(self, a => a.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_small(&self) -> bool {
        matches!(self, AnyArrangement::Small(_))
    }

    pub fn ranks_at_neg_inf(&self) -> Vec<u32> {
        with_arrangement!(self, a => a.ranks_at_neg_inf())
    }

    /// `side_of(c, p)` for the crossing point `p` of `a` and `b`: positive
    /// when `p` lies above `c`. `None` if `a` and `b` do not cross.
    pub fn side_of_crossing(&self, a: CurveId, b: CurveId, c: CurveId) -> Option<OrientationSign> {
        with_arrangement!(self, arr => arr.side_of_crossing(a, b, c))
    }
}

fn convert<S: Scalar>(curves: &[Pieces<BigInt>]) -> Arrangement<S> {
    let cv = |v: &BigInt| S::from_big(v).expect("bounded by construction");
    Arrangement::new(
        curves
            .iter()
            .map(|(b, p)| PlCurve {
                breaks: b.iter().map(cv).collect(),
                pieces: p.iter().map(|(a, b)| (cv(a), cv(b))).collect(),
            })
            .collect(),
    )
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{dual_line, shear_normalize};

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn scaling_preserves_crossing_order() {
        let curves = vec![
            Curve::line(r(1, 3), r(-1, 2)),
            Curve::line(r(2, 5), r(1, 7)),
            Curve::line(r(-3, 2), r(0, 1)),
        ];
        let any = AnyArrangement::build(&curves).unwrap();
        assert!(any.is_small());
        // compare against direct rational evaluation
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            let (Curve::Line { slope: ma, intercept: ca }, Curve::Line { slope: mb, intercept: cb }) =
                (&curves[a], &curves[b])
            else {
                unreachable!()
            };
            let x = &(cb - ca) / &(ma - mb);
            let ya = curves[a].eval(&x);
            let yc = curves[c].eval(&x);
            let want = OrientationSign::from_ordering(ya.cmp(&yc));
            assert_eq!(any.side_of_crossing(a as u32, b as u32, c as u32), Some(want));
        }
    }

    #[test]
    fn parallel_lines_rejected() {
        let curves = vec![Curve::line(r(1, 1), r(0, 1)), Curve::line(r(1, 1), r(2, 1))];
        assert_eq!(AnyArrangement::build(&curves).unwrap_err(), ArrangementError::Parallel(0, 1));
    }

    #[test]
    fn huge_coordinates_use_bigint() {
        let big = ExactRational::from_int(BigInt::one() << 80);
        let pts = vec![
            ExactPoint::new(big.clone(), ExactRational::zero()),
            ExactPoint::new(ExactRational::zero(), big.clone()),
            ExactPoint::new(ExactRational::one(), ExactRational::one()),
        ];
        let (s, _) = shear_normalize(&pts);
        let curves: Vec<Curve> = s.iter().map(|p| { let (m, c) = dual_line(p); Curve::line(m, c) }).collect();
        let any = AnyArrangement::build(&curves).unwrap();
        assert!(!any.is_small());
    }

    #[test]
    fn polyline_rational_vertices() {
        let p = |x: (i64, i64), y: (i64, i64)| ExactPoint::new(r(x.0, x.1), r(y.0, y.1));
        let curves = vec![
            Curve::Polyline { vertices: vec![p((0, 1), (0, 1)), p((1, 3), (1, 2))], left_slope: r(0, 1), right_slope: r(0, 1) },
            Curve::Polyline { vertices: vec![p((0, 1), (1, 2)), p((1, 3), (0, 1))], left_slope: r(0, 1), right_slope: r(0, 1) },
        ];
        let any = AnyArrangement::build(&curves).unwrap();
        let AnyArrangement::Small(a) = &any else { panic!() };
        // crossing at x = 1/6 in input units
        let x = a.crossing(0, 1).unwrap();
        assert_eq!(x, Frac::new(1, 2));
        assert_eq!(curves[0].eval(&r(1, 6)), curves[1].eval(&r(1, 6)));
    }
}
